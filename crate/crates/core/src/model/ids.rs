//! Identifier helpers.

use std::collections::HashSet;

/// Returns `base` if unused, otherwise `base` followed by as many `'` as needed.
pub fn fresh_id(base: &str, taken: &HashSet<String>) -> String {
    let mut id = base.to_string();
    while taken.contains(&id) {
        id.push('\'');
    }
    id
}

/// Characters that cannot appear in DS-tree or species-tree identifiers.
pub(crate) fn newick_reserved(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | ',' | ';' | '@' | '#')
}

pub(crate) fn check_newick_id(id: &str) -> Result<(), super::ModelError> {
    if id.is_empty() {
        return Err(super::ModelError::EmptyId);
    }
    if id.chars().any(newick_reserved) {
        return Err(super::ModelError::ReservedChar(id.to_string()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_id_appends_primes() {
        let taken: HashSet<String> = ["u1", "u1'"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_id("u0", &taken), "u0");
        assert_eq!(fresh_id("u1", &taken), "u1''");
    }
}
