use std::collections::HashSet;

use crate::ribbon_graph::{CanonicalForm, HalfEdgeId, LegSymmetry, Mode, RibbonGraph};

pub const MAX_CORPUS_LOOPS: usize = 4;

/// Connected 1PI graphs with four-valent vertices and two or four legs, one
/// per isomorphism class (legs unlabelled), for loop orders `1..=max_loops`.
///
/// Graphs are grouped by loop order, then leg count, then canonical form,
/// so a corpus is a prefix of every larger one. Legs are labelled along
/// the half-edge order of the canonical representative.
pub fn generate_corpus(max_loops: usize, mode: Mode) -> Vec<RibbonGraph> {
    assert!(
        max_loops <= MAX_CORPUS_LOOPS,
        "corpus generation is limited to {MAX_CORPUS_LOOPS} loops"
    );
    let mut out = Vec::new();
    for loops in 1..=max_loops {
        for legs in [2usize, 4] {
            let vertices = loops - 1 + legs / 2;
            let mut seen: HashSet<CanonicalForm> = HashSet::new();
            let mut found: Vec<(CanonicalForm, RibbonGraph)> = Vec::new();
            enumerate_rotation_systems(mode, vertices, legs, &mut |g| {
                if g.validate().is_err() {
                    return;
                }
                let key = g.canonical_form_with(LegSymmetry::Unlabeled);
                if seen.insert(key.clone()) {
                    found.push((key, g));
                }
            });
            found.sort_by(|a, b| a.0.cmp(&b.0));
            out.extend(found.into_iter().map(|(_, g)| normalize_labels(&g)));
        }
    }
    out
}

fn normalize_labels(g: &RibbonGraph) -> RibbonGraph {
    let shape = g.canonical_graph();
    let order: Vec<HalfEdgeId> = shape.externals().into_iter().map(|(h, _)| h).collect();
    let mut by_id = order.clone();
    by_id.sort_unstable();
    let relabeled =
        shape.relabeled(|h, _| by_id.iter().position(|&x| x == h).expect("leg") as u32 + 1);
    relabeled.canonical_graph()
}

/// Every connected rotation system with `vertices` four-valent vertices and
/// `legs` external legs, up to isomorphism at least once.
///
/// Half-edges of vertex `v` are `4v..4v+4` in rotation order. The lowest
/// open half-edge becomes a leg, pairs with a later open half-edge, or
/// pairs with slot 0 of a fresh vertex; fresh vertices are therefore
/// reached in breadth-first order from half-edge 0.
fn enumerate_rotation_systems(
    mode: Mode,
    vertices: usize,
    legs: usize,
    visit: &mut dyn FnMut(RibbonGraph),
) {
    if vertices == 0 {
        return;
    }
    let mut state = State {
        partner: vec![Slot::Open; 4 * vertices],
        opened: 1,
        legs: 0,
    };
    state.step(mode, vertices, legs, visit);
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Open,
    Leg,
    Paired(usize),
}

struct State {
    partner: Vec<Slot>,
    opened: usize,
    legs: usize,
}

impl State {
    fn step(
        &mut self,
        mode: Mode,
        vertices: usize,
        legs: usize,
        visit: &mut dyn FnMut(RibbonGraph),
    ) {
        let live = 4 * self.opened;
        let Some(h) = (0..live).find(|&h| self.partner[h] == Slot::Open) else {
            if self.opened == vertices && self.legs == legs {
                visit(self.build(mode));
            }
            return;
        };
        let open_now = (h..live).filter(|&x| self.partner[x] == Slot::Open).count();
        // Each fresh vertex adds two open half-edges net; lines close two.
        let reachable = open_now + 2 * (vertices - self.opened);
        if reachable < legs - self.legs || !(reachable - (legs - self.legs)).is_multiple_of(2) {
            return;
        }
        if self.legs < legs {
            self.partner[h] = Slot::Leg;
            self.legs += 1;
            self.step(mode, vertices, legs, visit);
            self.legs -= 1;
            self.partner[h] = Slot::Open;
        }
        for p in h + 1..live {
            if self.partner[p] == Slot::Open {
                self.partner[h] = Slot::Paired(p);
                self.partner[p] = Slot::Paired(h);
                self.step(mode, vertices, legs, visit);
                self.partner[p] = Slot::Open;
                self.partner[h] = Slot::Open;
            }
        }
        if self.opened < vertices {
            let p = 4 * self.opened;
            self.opened += 1;
            self.partner[h] = Slot::Paired(p);
            self.partner[p] = Slot::Paired(h);
            self.step(mode, vertices, legs, visit);
            self.partner[p] = Slot::Open;
            self.partner[h] = Slot::Open;
            self.opened -= 1;
        }
    }

    fn build(&self, mode: Mode) -> RibbonGraph {
        let rotations = (0..self.opened)
            .map(|v| (4 * v..4 * v + 4).map(|h| HalfEdgeId(h as u32)).collect())
            .collect();
        let mut edges = Vec::new();
        let mut externals = Vec::new();
        for (h, slot) in self.partner.iter().enumerate() {
            match *slot {
                Slot::Paired(p) if h < p => {
                    edges.push((HalfEdgeId(h as u32), HalfEdgeId(p as u32)))
                }
                Slot::Leg => externals.push((HalfEdgeId(h as u32), externals.len() as u32 + 1)),
                _ => {}
            }
        }
        RibbonGraph::from_parts_unvalidated(mode, rotations, &edges, &externals)
            .expect("enumeration builds well-formed incidence data")
    }
}
