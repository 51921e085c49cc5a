use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::ids::fresh_id;
use super::ModelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcKind {
    Principal,
    Secondary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub kind: ArcKind,
}

/// A rooted DAG whose arcs are split into principal and secondary arcs.
///
/// Construction only checks referential integrity; the structural LGT rules
/// are reported by [`super::validate_network`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LgtNetwork {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    root: usize,
    arcs: Vec<Arc>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
    species: Vec<Option<String>>,
    species_index: HashMap<String, usize>,
    rank: Vec<usize>,
}

impl LgtNetwork {
    /// Builds a network from id-keyed parts.
    pub fn new(
        nodes: &[String],
        root: &str,
        arcs: &[(String, String, ArcKind)],
        leaves: &BTreeMap<String, String>,
    ) -> Result<Self, ModelError> {
        let mut index = HashMap::new();
        for (i, id) in nodes.iter().enumerate() {
            if id.is_empty() {
                return Err(ModelError::EmptyId);
            }
            if index.insert(id.clone(), i).is_some() {
                return Err(ModelError::DuplicateId(id.clone()));
            }
        }
        let lookup = |id: &String| index.get(id).copied().ok_or_else(|| ModelError::UnknownId(id.clone()));
        let root = lookup(&root.to_string())?;
        let arcs = arcs
            .iter()
            .map(|(a, b, kind)| Ok(Arc { from: lookup(a)?, to: lookup(b)?, kind: *kind }))
            .collect::<Result<Vec<_>, ModelError>>()?;
        let mut species = vec![None; nodes.len()];
        for (node, sp) in leaves {
            species[lookup(node)?] = Some(sp.clone());
        }
        Self::from_parts(nodes.to_vec(), root, arcs, species)
    }

    /// Builds a network from index-based parts.
    pub fn from_parts(
        ids: Vec<String>,
        root: usize,
        arcs: Vec<Arc>,
        species: Vec<Option<String>>,
    ) -> Result<Self, ModelError> {
        let n = ids.len();
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if id.is_empty() {
                return Err(ModelError::EmptyId);
            }
            if index.insert(id.clone(), i).is_some() {
                return Err(ModelError::DuplicateId(id.clone()));
            }
        }
        if root >= n || species.len() != n {
            return Err(ModelError::Shape("node index out of range".into()));
        }
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        for (k, a) in arcs.iter().enumerate() {
            if a.from >= n || a.to >= n {
                return Err(ModelError::Shape("arc endpoint out of range".into()));
            }
            out_arcs[a.from].push(k);
            in_arcs[a.to].push(k);
        }
        let mut species_index = HashMap::new();
        for (i, sp) in species.iter().enumerate() {
            if let Some(sp) = sp {
                if sp.is_empty() {
                    return Err(ModelError::EmptyId);
                }
                if species_index.insert(sp.clone(), i).is_some() {
                    return Err(ModelError::DuplicateSpecies(sp.clone()));
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
        let mut rank = vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        Ok(LgtNetwork { ids, index, root, arcs, out_arcs, in_arcs, species, species_index, rank })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = &Arc> + '_ {
        self.out_arcs[v].iter().map(move |&k| &self.arcs[k])
    }

    pub fn in_arcs(&self, v: usize) -> impl Iterator<Item = &Arc> + '_ {
        self.in_arcs[v].iter().map(move |&k| &self.arcs[k])
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_arcs[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_arcs[v].len()
    }

    pub fn principal_children(&self, v: usize) -> Vec<usize> {
        self.out_arcs(v).filter(|a| a.kind == ArcKind::Principal).map(|a| a.to).collect()
    }

    pub fn principal_parent(&self, v: usize) -> Option<usize> {
        self.in_arcs(v).find(|a| a.kind == ArcKind::Principal).map(|a| a.from)
    }

    /// Head of the secondary arc leaving `v`, if `v` is a tail.
    pub fn secondary_head(&self, v: usize) -> Option<usize> {
        self.out_arcs(v).find(|a| a.kind == ArcKind::Secondary).map(|a| a.to)
    }

    /// Kind of the arc `(u, v)`, if present.
    pub fn arc_kind(&self, u: usize, v: usize) -> Option<ArcKind> {
        self.out_arcs(u).find(|a| a.to == v).map(|a| a.kind)
    }

    pub fn species(&self, v: usize) -> Option<&str> {
        self.species[v].as_deref()
    }

    pub fn leaf_of_species(&self, species: &str) -> Option<usize> {
        self.species_index.get(species).copied()
    }

    /// Nodes that carry a species label, in node order.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.species[v].is_some()).collect()
    }

    pub fn secondary_arc_count(&self) -> usize {
        self.arcs.iter().filter(|a| a.kind == ArcKind::Secondary).count()
    }

    /// Position of the node's id in lexicographic order; used for tie-breaks.
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// Copy of the network with arc `k` removed.
    pub fn without_arc(&self, k: usize) -> LgtNetwork {
        let arcs = self.arcs.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, a)| *a).collect();
        LgtNetwork::from_parts(self.ids.clone(), self.root, arcs, self.species.clone())
            .expect("removing an arc keeps references intact")
    }
}

/// Incremental construction of networks, including arc subdivision.
#[derive(Clone, Debug, Default)]
pub struct NetworkBuilder {
    ids: Vec<String>,
    taken: HashSet<String>,
    arcs: Vec<Arc>,
    principal_in: Vec<Option<usize>>,
    species: Vec<Option<String>>,
    root: Option<usize>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_network(net: &LgtNetwork) -> Self {
        let mut b = NetworkBuilder {
            ids: net.ids.clone(),
            taken: net.ids.iter().cloned().collect(),
            arcs: Vec::new(),
            principal_in: vec![None; net.len()],
            species: net.species.clone(),
            root: Some(net.root),
        };
        for a in &net.arcs {
            b.add_arc(a.from, a.to, a.kind);
        }
        b
    }

    /// Adds a node named `base`, primed if needed to stay unique.
    pub fn add_node(&mut self, base: &str) -> usize {
        let id = fresh_id(base, &self.taken);
        self.taken.insert(id.clone());
        self.ids.push(id);
        self.principal_in.push(None);
        self.species.push(None);
        self.ids.len() - 1
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn add_arc(&mut self, from: usize, to: usize, kind: ArcKind) {
        if kind == ArcKind::Principal && self.principal_in[to].is_none() {
            self.principal_in[to] = Some(self.arcs.len());
        }
        self.arcs.push(Arc { from, to, kind });
    }

    pub fn set_species(&mut self, v: usize, species: impl Into<String>) {
        self.species[v] = Some(species.into());
    }

    pub fn set_root(&mut self, v: usize) {
        self.root = Some(v);
    }

    pub fn principal_parent(&self, v: usize) -> Option<usize> {
        self.principal_in[v].map(|k| self.arcs[k].from)
    }

    /// Subdivides the principal arc entering `v` with a new node directly above `v`.
    pub fn subdivide_above(&mut self, v: usize, base: &str) -> usize {
        let k = self.principal_in[v].expect("subdivided node has a principal parent");
        let x = self.add_node(base);
        self.arcs[k].to = x;
        self.principal_in[x] = Some(k);
        self.principal_in[v] = Some(self.arcs.len());
        self.arcs.push(Arc { from: x, to: v, kind: ArcKind::Principal });
        x
    }

    pub fn build(self) -> Result<LgtNetwork, ModelError> {
        let root = self.root.ok_or_else(|| ModelError::Shape("network has no root".into()))?;
        LgtNetwork::from_parts(self.ids, root, self.arcs, self.species)
    }
}
