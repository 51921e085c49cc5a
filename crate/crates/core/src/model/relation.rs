use std::collections::{BTreeMap, BTreeSet};

use super::ModelError;

/// Genes with their species, plus the orthology edges between them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationGraph {
    genes: BTreeMap<String, String>,
    edges: BTreeSet<(String, String)>,
}

impl RelationGraph {
    /// Edges are stored with the smaller id first; repeated edges collapse.
    pub fn new<I>(genes: BTreeMap<String, String>, edges: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        for (g, s) in &genes {
            if g.is_empty() || s.is_empty() {
                return Err(ModelError::EmptyId);
            }
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for x in [&a, &b] {
                if !genes.contains_key(x) {
                    return Err(ModelError::UnknownId(x.clone()));
                }
            }
            if a == b {
                return Err(ModelError::SelfLoop(a));
            }
            set.insert(if a < b { (a, b) } else { (b, a) });
        }
        Ok(RelationGraph { genes, edges: set })
    }

    pub fn genes(&self) -> &BTreeMap<String, String> {
        &self.genes
    }

    pub fn edges(&self) -> &BTreeSet<(String, String)> {
        &self.edges
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        let key = if a < b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        self.edges.contains(&key)
    }

    pub fn gene_count(&self) -> usize {
        self.genes.len()
    }
}
