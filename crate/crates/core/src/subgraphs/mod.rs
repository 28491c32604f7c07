//! Subgraphs of a host graph, their extraction as standalone graphs, and the
//! shrinkable ones that index the reduced coproduct.

mod contract;
mod insert;

use thiserror::Error;

use crate::ribbon_graph::{GraphBuilder, GraphError, HalfEdgeId, RibbonGraph};

pub use contract::{contract, contraction_steps, ContractionStep, ResidueSite};
pub use insert::{insert, GluingData, Insertion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgraphError {
    #[error("extracted subgraph is disconnected")]
    ExtractDisconnected,
    #[error("extracted subgraph is not one-particle irreducible")]
    ExtractNotOnePI,
    #[error("subgraph is not shrinkable: {0}")]
    NotShrinkable(String),
    #[error("bad gluing data: {0}")]
    BadGluing(String),
    #[error("arity mismatch: insertion point has {site} half-edges, insertee has {legs} legs")]
    ArityMismatch { site: usize, legs: usize },
    #[error("edge index {0} is out of range")]
    UnknownEdge(usize),
    #[error("subgraph has no edges")]
    EmptySubgraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A nonempty set of internal lines of a host graph, together with every
/// vertex hooked to them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph<'a> {
    host: &'a RibbonGraph,
    edges: Vec<usize>,
}

impl<'a> Subgraph<'a> {
    /// `edges` index into `host.edges()`.
    pub fn new(host: &'a RibbonGraph, mut edges: Vec<usize>) -> Result<Self, SubgraphError> {
        let count = host.internal_line_count();
        if let Some(&bad) = edges.iter().find(|&&e| e >= count) {
            return Err(SubgraphError::UnknownEdge(bad));
        }
        edges.sort_unstable();
        edges.dedup();
        if edges.is_empty() {
            return Err(SubgraphError::EmptySubgraph);
        }
        Ok(Subgraph { host, edges })
    }

    pub fn host(&self) -> &'a RibbonGraph {
        self.host
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn is_proper(&self) -> bool {
        self.edges.len() < self.host.internal_line_count()
    }

    pub fn lines(&self) -> Vec<(HalfEdgeId, HalfEdgeId)> {
        let all = self.host.edges();
        self.edges.iter().map(|&e| all[e]).collect()
    }

    /// Host vertices touching a selected line, ascending.
    pub fn hooked_vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self
            .lines()
            .into_iter()
            .flat_map(|(a, b)| [self.host.vertex_of(a), self.host.vertex_of(b)])
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Connected components, ordered by their smallest hooked vertex.
    pub fn components(&self) -> Vec<Subgraph<'a>> {
        let vertices = self.hooked_vertices();
        let lines = self.lines();
        let pos = |v: usize| vertices.binary_search(&v).expect("hooked");
        let mut parent: Vec<usize> = (0..vertices.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for &(a, b) in &lines {
            let ra = find(&mut parent, pos(self.host.vertex_of(a)));
            let rb = find(&mut parent, pos(self.host.vertex_of(b)));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for (&e, &(a, _)) in self.edges.iter().zip(&lines) {
            let root = find(&mut parent, pos(self.host.vertex_of(a)));
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, es)) => es.push(e),
                None => groups.push((root, vec![e])),
            }
        }
        groups.sort_by_key(|(r, _)| *r);
        groups
            .into_iter()
            .map(|(_, edges)| Subgraph {
                host: self.host,
                edges,
            })
            .collect()
    }

    /// The truncated subgraph as a standalone graph: hooked vertices keep
    /// their full rotations, unselected half-edges on them become legs.
    pub fn extract(&self) -> Result<RibbonGraph, SubgraphError> {
        self.extract_with_map().map(|(g, _)| g)
    }

    /// Also returns, for each half-edge of the extract, its host half-edge.
    ///
    /// Legs are labelled along the broken faces: faces in order of their
    /// smallest leg, each traversed from that leg.
    pub fn extract_with_map(&self) -> Result<(RibbonGraph, Vec<HalfEdgeId>), SubgraphError> {
        let host = self.host;
        let mut builder = GraphBuilder::new(host.mode());
        for v in self.hooked_vertices() {
            builder.vertex(host.rotation(v).to_vec());
        }
        let lines = self.lines();
        let selected: std::collections::HashSet<HalfEdgeId> =
            lines.iter().flat_map(|&(a, b)| [a, b]).collect();
        for &(a, b) in &lines {
            builder.pair(a, b);
        }
        let mut provisional = 0;
        for v in self.hooked_vertices() {
            for &h in host.rotation(v) {
                if !selected.contains(&h) {
                    provisional += 1;
                    builder.label(h, provisional);
                }
            }
        }
        let (raw, map) = builder.build()?;
        let mut order = vec![0u32; raw.half_edge_count()];
        let mut next = 0;
        for face in raw.legs_by_broken_face() {
            for h in face {
                next += 1;
                order[h.index()] = next;
            }
        }
        let graph = raw.relabeled(|h, _| order[h.index()]);
        graph.validate().map_err(|e| match e {
            GraphError::NotConnected => SubgraphError::ExtractDisconnected,
            GraphError::NotOnePI(..) => SubgraphError::ExtractNotOnePI,
            other => SubgraphError::Graph(other),
        })?;
        Ok((graph, map))
    }

    /// Each component extracts to a 1PI graph whose residue is a vertex or a
    /// plain line.
    pub fn components_have_vertex_residue(&self) -> bool {
        self.components()
            .iter()
            .all(|c| c.extract().is_ok_and(|g| g.has_vertex_residue()))
    }
}

/// All nonempty proper subsets of the internal lines, in lexicographic order
/// of their edge-index lists.
pub fn enumerate_subgraphs(graph: &RibbonGraph) -> Vec<Subgraph<'_>> {
    let count = graph.internal_line_count();
    assert!(count < 31, "too many internal lines to enumerate");
    let full = (1u32 << count) - 1;
    let mut subsets: Vec<Vec<usize>> = (1..full)
        .map(|mask| (0..count).filter(|&e| mask & (1 << e) != 0).collect())
        .collect();
    subsets.sort();
    subsets
        .into_iter()
        .map(|edges| Subgraph { host: graph, edges })
        .collect()
}

/// A shrinkable subgraph with its component extracts and the cograph.
#[derive(Debug, Clone)]
pub struct Shrinking<'a> {
    pub subgraph: Subgraph<'a>,
    pub components: Vec<RibbonGraph>,
    pub quotient: RibbonGraph,
}

/// Every proper subgraph whose components all have a vertex or line residue
/// and whose contraction is a graph, with its extracts and cograph.
pub fn shrinkings(graph: &RibbonGraph) -> Vec<Shrinking<'_>> {
    enumerate_subgraphs(graph)
        .into_iter()
        .filter_map(|sub| {
            let components = sub
                .components()
                .iter()
                .map(|c| c.extract().ok().filter(RibbonGraph::has_vertex_residue))
                .collect::<Option<Vec<_>>>()?;
            let quotient = contract(graph, &sub).ok()?;
            Some(Shrinking {
                subgraph: sub,
                components,
                quotient,
            })
        })
        .collect()
}

pub fn shrinkable_subgraphs(graph: &RibbonGraph) -> Vec<Subgraph<'_>> {
    shrinkings(graph).into_iter().map(|s| s.subgraph).collect()
}
