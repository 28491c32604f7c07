use crate::ribbon_graph::{GraphBuilder, HalfEdgeId, RibbonGraph};

use super::SubgraphError;

/// How an insertee's legs are attached to the insertion point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GluingData {
    /// Replace a four-valent vertex: the half-edge in rotation slot `i` of
    /// `vertex` is taken over by the insertee leg labelled `assignment[i]`.
    Vertex { vertex: usize, assignment: Vec<u32> },
    /// Split the line through `half_edge`: the insertee leg labelled
    /// `first_leg` attaches to `half_edge`, the other leg to its partner.
    Line {
        half_edge: HalfEdgeId,
        first_leg: u32,
    },
}

impl GluingData {
    /// Vertex gluing that follows the insertee's broken face, starting
    /// `shift` legs along it.
    pub fn cyclic(vertex: usize, insertee: &RibbonGraph, shift: usize) -> Option<GluingData> {
        let order = broken_face_labels(insertee)?;
        let n = order.len();
        let assignment = (0..n).map(|i| order[(i + shift) % n]).collect();
        Some(GluingData::Vertex { vertex, assignment })
    }

    /// One representative of each of the `N!/N` vertex gluings up to
    /// rotation: slot 0 always receives the first leg of the broken face.
    pub fn all_vertex_gluings(vertex: usize, insertee: &RibbonGraph) -> Vec<GluingData> {
        let order = match broken_face_labels(insertee) {
            Some(order) => order,
            None => insertee.externals().into_iter().map(|(_, l)| l).collect(),
        };
        let mut out = Vec::new();
        let mut rest = order[1..].to_vec();
        permute(&mut rest, 0, &mut |tail| {
            let mut assignment = vec![order[0]];
            assignment.extend_from_slice(tail);
            out.push(GluingData::Vertex { vertex, assignment });
        });
        out
    }

    /// Whether the assignment carries the vertex's cyclic order onto the
    /// cyclic order of the insertee's legs along its broken face. Line
    /// gluings always qualify.
    pub fn respects_cyclic_order(&self, insertee: &RibbonGraph) -> bool {
        match self {
            GluingData::Line { .. } => true,
            GluingData::Vertex { assignment, .. } => match broken_face_labels(insertee) {
                Some(order) if order.len() == assignment.len() => {
                    let n = order.len();
                    (0..n).any(|s| (0..n).all(|i| assignment[i] == order[(i + s) % n]))
                }
                _ => false,
            },
        }
    }
}

fn broken_face_labels(g: &RibbonGraph) -> Option<Vec<u32>> {
    let faces = g.legs_by_broken_face();
    match faces.as_slice() {
        [face] => Some(face.iter().map(|&h| g.label(h).expect("leg")).collect()),
        _ => None,
    }
}

fn permute(items: &mut Vec<u32>, k: usize, visit: &mut dyn FnMut(&[u32])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Result of an insertion with the quantities its genus relation involves.
#[derive(Debug, Clone)]
pub struct Insertion {
    pub graph: RibbonGraph,
    pub genus: u32,
    /// `g(result) - g(host) - g(insertee)`.
    pub twist: i64,
    pub broken_faces: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Host(HalfEdgeId),
    Insertee(HalfEdgeId),
}

/// `host ∘_G insertee`.
pub fn insert(
    host: &RibbonGraph,
    insertee: &RibbonGraph,
    gluing: &GluingData,
) -> Result<Insertion, SubgraphError> {
    if host.mode() != insertee.mode() {
        return Err(SubgraphError::BadGluing(
            "graphs have different modes".into(),
        ));
    }
    let legs = insertee.external_count();
    let mut builder = GraphBuilder::new(host.mode());
    for (a, b) in insertee.edges() {
        builder.pair(Key::Insertee(a), Key::Insertee(b));
    }
    let leg = |label: u32| {
        insertee
            .external_with_label(label)
            .map(Key::Insertee)
            .ok_or_else(|| SubgraphError::BadGluing(format!("insertee has no leg {label}")))
    };
    match gluing {
        GluingData::Vertex { vertex, assignment } => {
            let vertex = *vertex;
            if vertex >= host.vertex_count() {
                return Err(SubgraphError::BadGluing(format!("no vertex {vertex}")));
            }
            let rot = host.rotation(vertex);
            if legs != 4 || rot.len() != legs {
                return Err(SubgraphError::ArityMismatch {
                    site: rot.len(),
                    legs,
                });
            }
            check_bijection(assignment, legs)?;
            for v in 0..host.vertex_count() {
                if v == vertex {
                    for w in 0..insertee.vertex_count() {
                        builder.vertex(
                            insertee
                                .rotation(w)
                                .iter()
                                .map(|&h| Key::Insertee(h))
                                .collect(),
                        );
                    }
                } else {
                    builder.vertex(host.rotation(v).iter().map(|&h| Key::Host(h)).collect());
                }
            }
            let slot_leg = |h: HalfEdgeId| leg(assignment[host.slot_of(h)]);
            for (a, b) in host.edges() {
                let ka = if host.vertex_of(a) == vertex {
                    slot_leg(a)?
                } else {
                    Key::Host(a)
                };
                let kb = if host.vertex_of(b) == vertex {
                    slot_leg(b)?
                } else {
                    Key::Host(b)
                };
                builder.pair(ka, kb);
            }
            for (h, l) in host.externals() {
                let k = if host.vertex_of(h) == vertex {
                    slot_leg(h)?
                } else {
                    Key::Host(h)
                };
                builder.label(k, l);
            }
        }
        GluingData::Line {
            half_edge,
            first_leg,
        } => {
            let h = *half_edge;
            if h.index() >= host.half_edge_count() {
                return Err(SubgraphError::BadGluing(format!("no half-edge {h}")));
            }
            let p = host
                .partner(h)
                .ok_or_else(|| SubgraphError::BadGluing(format!("half-edge {h} is a leg")))?;
            if legs != 2 {
                return Err(SubgraphError::ArityMismatch { site: 2, legs });
            }
            if !matches!(first_leg, 1 | 2) {
                return Err(SubgraphError::BadGluing(format!("no leg {first_leg}")));
            }
            for v in 0..host.vertex_count() {
                builder.vertex(host.rotation(v).iter().map(|&x| Key::Host(x)).collect());
            }
            for w in 0..insertee.vertex_count() {
                builder.vertex(
                    insertee
                        .rotation(w)
                        .iter()
                        .map(|&x| Key::Insertee(x))
                        .collect(),
                );
            }
            for (a, b) in host.edges() {
                if a != h && a != p {
                    builder.pair(Key::Host(a), Key::Host(b));
                }
            }
            builder.pair(Key::Host(h), leg(*first_leg)?);
            builder.pair(Key::Host(p), leg(3 - *first_leg)?);
            for (x, l) in host.externals() {
                builder.label(Key::Host(x), l);
            }
        }
    }
    let (graph, _) = builder.build()?;
    graph.validate()?;
    let report = graph.trace_faces();
    let twist =
        report.genus as i64 - host.trace_faces().genus as i64 - insertee.trace_faces().genus as i64;
    Ok(Insertion {
        genus: report.genus,
        twist,
        broken_faces: report.broken_faces,
        graph,
    })
}

fn check_bijection(assignment: &[u32], legs: usize) -> Result<(), SubgraphError> {
    let mut seen = vec![false; legs + 1];
    if assignment.len() != legs {
        return Err(SubgraphError::BadGluing(format!(
            "assignment has {} entries for {legs} legs",
            assignment.len()
        )));
    }
    for &l in assignment {
        let i = l as usize;
        if i == 0 || i > legs || seen[i] {
            return Err(SubgraphError::BadGluing(format!(
                "assignment {assignment:?} is not a bijection onto 1..={legs}"
            )));
        }
        seen[i] = true;
    }
    Ok(())
}
