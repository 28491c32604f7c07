//! Ribbon graphs stored as rotation systems.
//!
//! A graph is a set of half-edges grouped into vertices, each vertex holding
//! its half-edges in counterclockwise cyclic order. Internal lines pair two
//! half-edges; the remaining half-edges are external legs carrying labels
//! `1..=N`.

mod canon;
mod topology;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use canon::{CanonicalForm, LegSymmetry};
pub use topology::TopologyReport;

/// Dense index of a half-edge inside one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdgeId(pub u32);

impl HalfEdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for HalfEdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Selects the power-counting rule and the residue/isomorphism conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Moyal (ribbon) vertices, invariant under cyclic permutations only.
    NonCommutative,
    /// Local vertices; the rotation at a vertex carries no information.
    Commutative,
}

impl Mode {
    pub fn keyword(self) -> &'static str {
        match self {
            Mode::NonCommutative => "nc",
            Mode::Commutative => "comm",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Mode> {
        match s {
            "nc" => Some(Mode::NonCommutative),
            "comm" => Some(Mode::Commutative),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not one-particle irreducible: line {0}-{1} is a bridge")]
    NotOnePI(HalfEdgeId, HalfEdgeId),
    #[error("bad pairing at half-edge {0}")]
    BadPairing(HalfEdgeId),
    #[error("half-edge {0} is not attached to any vertex")]
    DanglingHalfEdge(HalfEdgeId),
    #[error("half-edge {0} appears more than once")]
    DuplicateHalfEdge(HalfEdgeId),
    #[error("half-edge {0} is out of range")]
    UnknownHalfEdge(HalfEdgeId),
    #[error("vertex {vertex} has {arity} half-edges, a Moyal vertex needs 4")]
    BadVertexArity { vertex: usize, arity: usize },
    #[error("external labels must be a bijection onto 1..={expected}: {detail}")]
    BadLabels { expected: usize, detail: String },
    #[error("genus hint {hint} disagrees with computed genus {computed}")]
    GenusMismatch { hint: u32, computed: u32 },
}

/// A ribbon Feynman graph.
///
/// Values are immutable after construction. Use [`RibbonGraph::new`] to get a
/// validated graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonGraph {
    mode: Mode,
    rotations: Vec<Vec<HalfEdgeId>>,
    pairing: Vec<Option<HalfEdgeId>>,
    labels: Vec<Option<u32>>,
    vertex_of: Vec<usize>,
    slot_of: Vec<usize>,
}

impl RibbonGraph {
    /// Builds and validates a graph.
    ///
    /// `edges` lists internal lines as half-edge pairs, `externals` maps the
    /// unpaired half-edges to their labels.
    pub fn new(
        mode: Mode,
        rotations: Vec<Vec<HalfEdgeId>>,
        edges: &[(HalfEdgeId, HalfEdgeId)],
        externals: &[(HalfEdgeId, u32)],
    ) -> Result<Self, GraphError> {
        let graph = Self::from_parts_unvalidated(mode, rotations, edges, externals)?;
        graph.validate()?;
        Ok(graph)
    }

    /// Checks the incidence structure only (half-edge bookkeeping, pairing,
    /// labels). Connectivity, 1PI-ness and vertex arity are left to
    /// [`RibbonGraph::validate`].
    pub(crate) fn from_parts_unvalidated(
        mode: Mode,
        rotations: Vec<Vec<HalfEdgeId>>,
        edges: &[(HalfEdgeId, HalfEdgeId)],
        externals: &[(HalfEdgeId, u32)],
    ) -> Result<Self, GraphError> {
        if rotations.is_empty() {
            return Err(GraphError::Empty);
        }
        let count: usize = rotations.iter().map(Vec::len).sum();
        let mut vertex_of = vec![usize::MAX; count];
        let mut slot_of = vec![usize::MAX; count];
        for (v, rot) in rotations.iter().enumerate() {
            for (slot, &h) in rot.iter().enumerate() {
                if h.index() >= count {
                    return Err(GraphError::UnknownHalfEdge(h));
                }
                if vertex_of[h.index()] != usize::MAX {
                    return Err(GraphError::DuplicateHalfEdge(h));
                }
                vertex_of[h.index()] = v;
                slot_of[h.index()] = slot;
            }
        }
        // Every id below `count` was hit exactly once, so the ids are dense.
        let mut pairing = vec![None; count];
        for &(a, b) in edges {
            for h in [a, b] {
                if h.index() >= count {
                    return Err(GraphError::UnknownHalfEdge(h));
                }
            }
            if a == b {
                return Err(GraphError::BadPairing(a));
            }
            if pairing[a.index()].is_some() {
                return Err(GraphError::BadPairing(a));
            }
            if pairing[b.index()].is_some() {
                return Err(GraphError::BadPairing(b));
            }
            pairing[a.index()] = Some(b);
            pairing[b.index()] = Some(a);
        }
        let mut labels = vec![None; count];
        for &(h, label) in externals {
            if h.index() >= count {
                return Err(GraphError::UnknownHalfEdge(h));
            }
            if pairing[h.index()].is_some() || labels[h.index()].is_some() {
                return Err(GraphError::BadPairing(h));
            }
            labels[h.index()] = Some(label);
        }
        for h in 0..count {
            if pairing[h].is_none() && labels[h].is_none() {
                return Err(GraphError::DanglingHalfEdge(HalfEdgeId(h as u32)));
            }
        }
        let n = externals.len();
        let mut seen = vec![false; n + 1];
        for &(_, label) in externals {
            let l = label as usize;
            if l == 0 || l > n || seen[l] {
                return Err(GraphError::BadLabels {
                    expected: n,
                    detail: format!("label {label} is out of range or repeated"),
                });
            }
            seen[l] = true;
        }
        Ok(RibbonGraph {
            mode,
            rotations,
            pairing,
            labels,
            vertex_of,
            slot_of,
        })
    }

    /// Connectivity, one-particle irreducibility and Moyal vertex arity.
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.mode == Mode::NonCommutative {
            for (v, rot) in self.rotations.iter().enumerate() {
                if rot.len() != 4 {
                    return Err(GraphError::BadVertexArity {
                        vertex: v,
                        arity: rot.len(),
                    });
                }
            }
        }
        if self.component_count(None) != 1 {
            return Err(GraphError::NotConnected);
        }
        for (a, b) in self.edges() {
            if self.vertex_of(a) == self.vertex_of(b) {
                continue;
            }
            if self.component_count(Some(a)) != 1 {
                return Err(GraphError::NotOnePI(a, b));
            }
        }
        Ok(())
    }

    /// Number of vertex components, optionally ignoring the line through `skip`.
    fn component_count(&self, skip: Option<HalfEdgeId>) -> usize {
        let skip_pair = skip.and_then(|h| self.partner(h));
        let mut seen = vec![false; self.vertex_count()];
        let mut components = 0;
        for start in 0..self.vertex_count() {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &h in &self.rotations[v] {
                    if Some(h) == skip || Some(h) == skip_pair {
                        continue;
                    }
                    if let Some(p) = self.partner(h) {
                        let w = self.vertex_of(p);
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
        }
        components
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The same structure read under another mode, validated for it.
    pub fn with_mode(&self, mode: Mode) -> Result<Self, GraphError> {
        let mut g = self.clone();
        g.mode = mode;
        g.validate()?;
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn half_edge_count(&self) -> usize {
        self.pairing.len()
    }

    pub fn internal_line_count(&self) -> usize {
        self.pairing.iter().filter(|p| p.is_some()).count() / 2
    }

    pub fn external_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// Loop number `I - V + 1`.
    pub fn loops(&self) -> usize {
        self.internal_line_count() + 1 - self.vertex_count()
    }

    pub fn rotations(&self) -> &[Vec<HalfEdgeId>] {
        &self.rotations
    }

    pub fn rotation(&self, vertex: usize) -> &[HalfEdgeId] {
        &self.rotations[vertex]
    }

    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdgeId> {
        (0..self.half_edge_count() as u32).map(HalfEdgeId)
    }

    pub fn partner(&self, h: HalfEdgeId) -> Option<HalfEdgeId> {
        self.pairing[h.index()]
    }

    pub fn label(&self, h: HalfEdgeId) -> Option<u32> {
        self.labels[h.index()]
    }

    pub fn is_external(&self, h: HalfEdgeId) -> bool {
        self.labels[h.index()].is_some()
    }

    pub fn vertex_of(&self, h: HalfEdgeId) -> usize {
        self.vertex_of[h.index()]
    }

    pub fn slot_of(&self, h: HalfEdgeId) -> usize {
        self.slot_of[h.index()]
    }

    /// Counterclockwise successor of `h` around its vertex.
    pub fn next_in_rotation(&self, h: HalfEdgeId) -> HalfEdgeId {
        let rot = &self.rotations[self.vertex_of(h)];
        rot[(self.slot_of(h) + 1) % rot.len()]
    }

    /// Internal lines as `(a, b)` with `a < b`, sorted by `a`. The position
    /// in this list is the line's edge index.
    pub fn edges(&self) -> Vec<(HalfEdgeId, HalfEdgeId)> {
        self.half_edges()
            .filter_map(|h| match self.partner(h) {
                Some(p) if h < p => Some((h, p)),
                _ => None,
            })
            .collect()
    }

    /// External half-edges ordered by label.
    pub fn externals(&self) -> Vec<(HalfEdgeId, u32)> {
        let mut ext: Vec<_> = self
            .half_edges()
            .filter_map(|h| self.label(h).map(|l| (h, l)))
            .collect();
        ext.sort_by_key(|&(_, l)| l);
        ext
    }

    /// Half-edge carrying external label `label`.
    pub fn external_with_label(&self, label: u32) -> Option<HalfEdgeId> {
        self.half_edges().find(|&h| self.label(h) == Some(label))
    }

    /// Fails with [`GraphError::GenusMismatch`] when a user-supplied genus
    /// disagrees with the one computed from the faces.
    pub fn check_genus_hint(&self, hint: u32) -> Result<(), GraphError> {
        let computed = self.trace_faces().genus;
        if computed != hint {
            return Err(GraphError::GenusMismatch { hint, computed });
        }
        Ok(())
    }

    /// The same graph with its external labels replaced through `relabel`.
    pub(crate) fn relabeled(&self, relabel: impl Fn(HalfEdgeId, u32) -> u32) -> RibbonGraph {
        let mut g = self.clone();
        for h in self.half_edges() {
            if let Some(l) = self.label(h) {
                g.labels[h.index()] = Some(relabel(h, l));
            }
        }
        g
    }
}

/// Assembles graphs from arbitrary half-edge keys, numbering half-edges
/// densely in vertex-then-rotation order.
#[derive(Debug)]
pub(crate) struct GraphBuilder<K: Ord + Copy> {
    mode: Mode,
    rotations: Vec<Vec<K>>,
    pairs: Vec<(K, K)>,
    labels: BTreeMap<K, u32>,
}

impl<K: Ord + Copy + fmt::Debug> GraphBuilder<K> {
    pub fn new(mode: Mode) -> Self {
        GraphBuilder {
            mode,
            rotations: Vec::new(),
            pairs: Vec::new(),
            labels: BTreeMap::new(),
        }
    }

    pub fn vertex(&mut self, rotation: Vec<K>) {
        self.rotations.push(rotation);
    }

    pub fn pair(&mut self, a: K, b: K) {
        self.pairs.push((a, b));
    }

    pub fn label(&mut self, h: K, label: u32) {
        self.labels.insert(h, label);
    }

    /// Returns the graph and the key of every new half-edge id.
    pub fn build(self) -> Result<(RibbonGraph, Vec<K>), GraphError> {
        let mut ids = BTreeMap::new();
        let mut keys = Vec::new();
        let rotations: Vec<Vec<HalfEdgeId>> = self
            .rotations
            .iter()
            .map(|rot| {
                rot.iter()
                    .map(|&k| {
                        let id = HalfEdgeId(keys.len() as u32);
                        ids.insert(k, id);
                        keys.push(k);
                        id
                    })
                    .collect()
            })
            .collect();
        let lookup = |k: &K| {
            ids.get(k)
                .copied()
                .ok_or(GraphError::UnknownHalfEdge(HalfEdgeId(u32::MAX)))
        };
        let edges = self
            .pairs
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        let externals = self
            .labels
            .iter()
            .map(|(k, &l)| Ok((lookup(k)?, l)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        let graph = RibbonGraph::from_parts_unvalidated(self.mode, rotations, &edges, &externals)?;
        Ok((graph, keys))
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn single_vertex_is_valid() {
        let g = single_vertex();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.internal_line_count(), 0);
        assert_eq!(g.external_count(), 4);
        assert_eq!(g.loops(), 0);
    }

    #[test]
    fn bridge_is_rejected() {
        let err = graph(
            Mode::NonCommutative,
            &[&[0, 1, 2, 3], &[4, 5, 6, 7]],
            &[(0, 4)],
            &[(1, 1), (2, 2), (3, 3), (5, 4), (6, 5), (7, 6)],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::NotOnePI(..)));
    }

    #[test]
    fn self_pairing_is_rejected() {
        let err = graph(
            Mode::NonCommutative,
            &[&[0, 1, 2, 3]],
            &[(0, 0)],
            &[(1, 1), (2, 2), (3, 3)],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::BadPairing(HalfEdgeId(0)));
    }

    #[test]
    fn double_pairing_is_rejected() {
        let err = graph(
            Mode::NonCommutative,
            &[&[0, 1, 2, 3]],
            &[(0, 1), (1, 2)],
            &[(3, 1)],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::BadPairing(HalfEdgeId(1)));
    }

    #[test]
    fn dangling_half_edge_is_rejected() {
        let err = graph(Mode::NonCommutative, &[&[0, 1, 2, 3]], &[(0, 1)], &[(2, 1)]).unwrap_err();
        assert_eq!(err, GraphError::DanglingHalfEdge(HalfEdgeId(3)));
    }

    #[test]
    fn disconnected_is_rejected() {
        let err = graph(
            Mode::NonCommutative,
            &[&[0, 1, 2, 3], &[4, 5, 6, 7]],
            &[],
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 8),
            ],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::NotConnected);
    }

    #[test]
    fn moyal_arity_enforced_only_in_nc_mode() {
        let err = graph(Mode::NonCommutative, &[&[0, 1, 2]], &[(0, 1)], &[(2, 1)]).unwrap_err();
        assert_eq!(
            err,
            GraphError::BadVertexArity {
                vertex: 0,
                arity: 3
            }
        );
        assert!(graph(Mode::Commutative, &[&[0, 1, 2]], &[(0, 1)], &[(2, 1)]).is_ok());
    }

    #[test]
    fn labels_must_be_a_bijection() {
        let err = graph(
            Mode::NonCommutative,
            &[&[0, 1, 2, 3]],
            &[(0, 1)],
            &[(2, 1), (3, 1)],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::BadLabels { .. }));
    }

    #[test]
    fn genus_hint_is_checked() {
        let g = nonplanar_double_tadpole();
        assert!(g.check_genus_hint(1).is_ok());
        assert_eq!(
            g.check_genus_hint(0),
            Err(GraphError::GenusMismatch {
                hint: 0,
                computed: 1
            })
        );
    }
}
