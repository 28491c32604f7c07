use crate::ribbon_graph::{GraphBuilder, HalfEdgeId, RibbonGraph};

use super::{Subgraph, SubgraphError};

/// Where the residue of a contracted component sits in the cograph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueSite {
    /// A four-point component became this vertex.
    Vertex(usize),
    /// A two-point component became the line through this half-edge.
    Line(HalfEdgeId),
}

/// One component shrunk to its residue.
#[derive(Debug, Clone)]
pub struct ContractionStep {
    pub before: RibbonGraph,
    pub component: RibbonGraph,
    pub after: RibbonGraph,
    pub site: ResidueSite,
}

/// `graph / sub`: every component replaced by its residue.
pub fn contract(graph: &RibbonGraph, sub: &Subgraph<'_>) -> Result<RibbonGraph, SubgraphError> {
    let mut current = graph.clone();
    for_each_component(graph, sub, |step| {
        current = step.after;
    })?;
    Ok(current)
}

/// The contraction performed one component at a time, in component order.
pub fn contraction_steps(
    graph: &RibbonGraph,
    sub: &Subgraph<'_>,
) -> Result<Vec<ContractionStep>, SubgraphError> {
    let mut steps = Vec::new();
    for_each_component(graph, sub, |step| steps.push(step))?;
    Ok(steps)
}

fn for_each_component(
    graph: &RibbonGraph,
    sub: &Subgraph<'_>,
    mut visit: impl FnMut(ContractionStep),
) -> Result<(), SubgraphError> {
    if !std::ptr::eq(sub.host(), graph) && sub.host() != graph {
        return Err(SubgraphError::NotShrinkable(
            "subgraph belongs to another graph".into(),
        ));
    }
    if !sub.is_proper() {
        return Err(SubgraphError::NotShrinkable(
            "the full line set is not a proper subgraph".into(),
        ));
    }
    let mut current = graph.clone();
    let mut to_current: Vec<Option<HalfEdgeId>> = graph.half_edges().map(Some).collect();
    for component in sub.components() {
        let lines: Vec<(HalfEdgeId, HalfEdgeId)> = component
            .lines()
            .into_iter()
            .map(|(a, b)| {
                let a = to_current[a.index()].expect("component half-edges survive");
                let b = to_current[b.index()].expect("component half-edges survive");
                (a.min(b), a.max(b))
            })
            .collect();
        let (after, map, site, extract) = contract_component(&current, &lines)?;
        for slot in to_current.iter_mut() {
            *slot = slot.and_then(|h| map[h.index()]);
        }
        let before = std::mem::replace(&mut current, after.clone());
        visit(ContractionStep {
            before,
            component: extract,
            after,
            site,
        });
    }
    Ok(())
}

type ComponentContraction = (
    RibbonGraph,
    Vec<Option<HalfEdgeId>>,
    ResidueSite,
    RibbonGraph,
);

fn contract_component(
    graph: &RibbonGraph,
    lines: &[(HalfEdgeId, HalfEdgeId)],
) -> Result<ComponentContraction, SubgraphError> {
    let all = graph.edges();
    let edges = lines
        .iter()
        .map(|line| {
            all.binary_search(line)
                .map_err(|_| SubgraphError::UnknownEdge(usize::MAX))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sub = Subgraph::new(graph, edges)?;
    let (extract, map) = sub.extract_with_map()?;
    if !extract.has_vertex_residue() {
        return Err(SubgraphError::NotShrinkable(format!(
            "component with {} legs has no vertex or line residue",
            extract.external_count()
        )));
    }
    // Legs in extract-label order, i.e. along the broken face.
    let legs: Vec<HalfEdgeId> = extract
        .externals()
        .into_iter()
        .map(|(h, _)| map[h.index()])
        .collect();
    let inside = sub.hooked_vertices();
    let in_component = |v: usize| inside.binary_search(&v).is_ok();
    let selected: std::collections::HashSet<HalfEdgeId> =
        lines.iter().flat_map(|&(a, b)| [a, b]).collect();

    let mut builder = GraphBuilder::new(graph.mode());
    if legs.len() == 2 {
        let (l1, l2) = (legs[0], legs[1]);
        let (p1, p2) = match (graph.partner(l1), graph.partner(l2)) {
            (Some(p1), _) if p1 == l2 => {
                return Err(SubgraphError::NotShrinkable(
                    "two-point component closes on itself".into(),
                ))
            }
            (Some(p1), Some(p2)) => (p1, p2),
            _ => {
                return Err(SubgraphError::NotShrinkable(
                    "two-point component carries an external leg".into(),
                ))
            }
        };
        for v in (0..graph.vertex_count()).filter(|&v| !in_component(v)) {
            builder.vertex(graph.rotation(v).to_vec());
        }
        for (a, b) in all {
            if !in_component(graph.vertex_of(a)) && !in_component(graph.vertex_of(b)) {
                builder.pair(a, b);
            }
        }
        builder.pair(p1, p2);
        for (h, l) in graph.externals() {
            builder.label(h, l);
        }
        finish(graph, builder, extract, move |map| {
            ResidueSite::Line(map[p1.index()].expect("line survives"))
        })
    } else {
        let anchor = inside[0];
        let mut anchor_index = 0;
        for v in 0..graph.vertex_count() {
            if v == anchor {
                anchor_index = v - inside.iter().filter(|&&w| w < v).count();
                builder.vertex(legs.clone());
            } else if !in_component(v) {
                builder.vertex(graph.rotation(v).to_vec());
            }
        }
        for (a, b) in all {
            if !selected.contains(&a) {
                builder.pair(a, b);
            }
        }
        for (h, l) in graph.externals() {
            builder.label(h, l);
        }
        finish(graph, builder, extract, |_| {
            ResidueSite::Vertex(anchor_index)
        })
    }
}

fn finish(
    graph: &RibbonGraph,
    builder: GraphBuilder<HalfEdgeId>,
    extract: RibbonGraph,
    site: impl FnOnce(&[Option<HalfEdgeId>]) -> ResidueSite,
) -> Result<ComponentContraction, SubgraphError> {
    let (after, keys) = builder.build()?;
    after.validate()?;
    let mut map = vec![None; graph.half_edge_count()];
    for (new, old) in keys.into_iter().enumerate() {
        map[old.index()] = Some(HalfEdgeId(new as u32));
    }
    let site = site(&map);
    Ok((after, map, site, extract))
}
