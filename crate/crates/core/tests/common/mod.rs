//! Fixtures and brute-force oracles shared by the integration tests. Nothing
//! here calls the face tracing or canonical forms of the library.
#![allow(dead_code)]

use ribbon_hopf::ribbon_graph::{HalfEdgeId, Mode, RibbonGraph};
use ribbon_hopf::subgraphs::{insert, GluingData};

pub fn graph(
    mode: Mode,
    rotations: &[&[u32]],
    edges: &[(u32, u32)],
    legs: &[(u32, u32)],
) -> RibbonGraph {
    RibbonGraph::new(
        mode,
        rotations
            .iter()
            .map(|r| r.iter().map(|&h| HalfEdgeId(h)).collect())
            .collect(),
        &edges
            .iter()
            .map(|&(a, b)| (HalfEdgeId(a), HalfEdgeId(b)))
            .collect::<Vec<_>>(),
        &legs
            .iter()
            .map(|&(h, l)| (HalfEdgeId(h), l))
            .collect::<Vec<_>>(),
    )
    .expect("fixture is valid")
}

const NC: Mode = Mode::NonCommutative;

pub fn bubble() -> RibbonGraph {
    graph(
        NC,
        &[&[0, 1, 2, 3], &[4, 5, 6, 7]],
        &[(0, 5), (1, 4)],
        &[(2, 1), (3, 2), (6, 3), (7, 4)],
    )
}

/// Same lines as the bubble with one vertex's rotation interleaved.
pub fn twisted_bubble() -> RibbonGraph {
    graph(
        NC,
        &[&[0, 2, 1, 3], &[4, 5, 6, 7]],
        &[(0, 5), (1, 4)],
        &[(2, 1), (3, 2), (6, 3), (7, 4)],
    )
}

/// Three vertices on a triangle, legs alternating between the two faces.
pub fn broken_triangle() -> RibbonGraph {
    graph(
        NC,
        &[&[0, 1, 2, 3], &[4, 5, 6, 7], &[8, 9, 10, 11]],
        &[(0, 6), (4, 10), (8, 2)],
        &[(1, 1), (3, 2), (5, 3), (7, 4), (9, 5), (11, 6)],
    )
}

pub fn nonplanar_double_tadpole() -> RibbonGraph {
    graph(NC, &[&[0, 1, 2, 3]], &[(0, 2), (1, 3)], &[])
}

pub fn planar_tadpole() -> RibbonGraph {
    graph(NC, &[&[0, 1, 2, 3]], &[(0, 1)], &[(2, 1), (3, 2)])
}

pub fn nonplanar_tadpole() -> RibbonGraph {
    graph(NC, &[&[0, 1, 2, 3]], &[(0, 2)], &[(1, 1), (3, 2)])
}

/// A chain of three vertices whose two external corners sit on different
/// broken faces.
pub fn two_broken_chain() -> RibbonGraph {
    graph(
        NC,
        &[&[0, 1, 2, 3], &[4, 5, 6, 7], &[8, 9, 10, 11]],
        &[(2, 4), (3, 5), (6, 8), (7, 9)],
        &[(0, 1), (1, 2), (10, 3), (11, 4)],
    )
}

/// The bubble inserted into a bubble vertex along the cyclic order.
pub fn nested() -> RibbonGraph {
    insert(
        &bubble(),
        &bubble(),
        &GluingData::Vertex {
            vertex: 0,
            assignment: vec![2, 3, 4, 1],
        },
    )
    .expect("cyclic insertion")
    .graph
}

/// A bubble inserted into the inner bubble of [`nested`].
pub fn chain3() -> RibbonGraph {
    // Vertices 0 and 1 of `nested` belong to its inner bubble.
    insert(
        &nested(),
        &bubble(),
        &GluingData::Vertex {
            vertex: 0,
            assignment: vec![2, 3, 4, 1],
        },
    )
    .expect("cyclic insertion")
    .graph
}

/// Face count and broken-face count from the permutations: `sigma` steps to
/// the next half-edge around its vertex, `alpha` swaps the ends of a line
/// and fixes legs. Faces are the cycles of `sigma ∘ alpha`.
pub fn faces(g: &RibbonGraph) -> (usize, usize) {
    let n = g.half_edge_count();
    let mut sigma = vec![0usize; n];
    for rot in g.rotations() {
        for (i, h) in rot.iter().enumerate() {
            sigma[h.0 as usize] = rot[(i + 1) % rot.len()].0 as usize;
        }
    }
    let alpha: Vec<usize> = (0..n)
        .map(|h| g.partner(HalfEdgeId(h as u32)).map_or(h, |p| p.0 as usize))
        .collect();
    let mut seen = vec![false; n];
    let (mut f, mut b) = (0, 0);
    for start in 0..n {
        if seen[start] {
            continue;
        }
        f += 1;
        let mut broken = false;
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            broken |= alpha[h] == h;
            h = sigma[alpha[h]];
        }
        b += usize::from(broken);
    }
    (f, b)
}

pub fn genus(g: &RibbonGraph) -> i64 {
    let (f, _) = faces(g);
    let chi = f as i64 - g.internal_line_count() as i64 + g.vertex_count() as i64;
    (2 - chi) / 2
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=k).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, k);
                    q
                })
            })
            .collect();
    }
    out
}

/// Whether some vertex bijection together with a rotation of each vertex
/// (any reordering in commutative mode) carries lines to lines and legs to
/// legs of the same label.
pub fn isomorphic(a: &RibbonGraph, b: &RibbonGraph) -> bool {
    if a.mode() != b.mode()
        || a.vertex_count() != b.vertex_count()
        || a.half_edge_count() != b.half_edge_count()
        || a.internal_line_count() != b.internal_line_count()
    {
        return false;
    }
    let n = a.vertex_count();
    for vmap in permutations(n) {
        if (0..n).any(|v| a.rotation(v).len() != b.rotation(vmap[v]).len()) {
            continue;
        }
        if search(a, b, &vmap, 0, &mut vec![None; a.half_edge_count()]) {
            return true;
        }
    }
    false
}

fn search(
    a: &RibbonGraph,
    b: &RibbonGraph,
    vmap: &[usize],
    v: usize,
    hmap: &mut Vec<Option<HalfEdgeId>>,
) -> bool {
    if v == vmap.len() {
        return consistent(a, b, hmap);
    }
    let ra = a.rotation(v);
    let rb = b.rotation(vmap[v]);
    let k = ra.len();
    let arrangements: Vec<Vec<usize>> = match a.mode() {
        Mode::NonCommutative => (0..k)
            .map(|s| (0..k).map(|i| (i + s) % k).collect())
            .collect(),
        Mode::Commutative => permutations(k),
    };
    for arr in arrangements {
        for i in 0..k {
            hmap[ra[i].0 as usize] = Some(rb[arr[i]]);
        }
        if search(a, b, vmap, v + 1, hmap) {
            return true;
        }
    }
    false
}

fn consistent(a: &RibbonGraph, b: &RibbonGraph, hmap: &[Option<HalfEdgeId>]) -> bool {
    (0..a.half_edge_count()).all(|i| {
        let h = HalfEdgeId(i as u32);
        let image = hmap[i].expect("every half-edge mapped");
        match a.partner(h) {
            Some(p) => b.partner(image) == hmap[p.0 as usize],
            None => b.partner(image).is_none() && b.label(image) == a.label(h),
        }
    })
}

/// An isomorphic copy: vertices reordered by `vertex_order`, each rotation
/// started at `shifts[v]`, and half-edge ids renumbered by `ids`.
pub fn shuffled(
    g: &RibbonGraph,
    vertex_order: &[usize],
    shifts: &[usize],
    ids: &[u32],
) -> RibbonGraph {
    let map = |h: HalfEdgeId| HalfEdgeId(ids[h.0 as usize]);
    let rotations = vertex_order
        .iter()
        .map(|&v| {
            let rot = g.rotation(v);
            let s = shifts[v] % rot.len();
            rot[s..].iter().chain(&rot[..s]).map(|&h| map(h)).collect()
        })
        .collect();
    let edges: Vec<_> = g
        .edges()
        .into_iter()
        .map(|(a, b)| (map(a), map(b)))
        .collect();
    let legs: Vec<_> = g
        .externals()
        .into_iter()
        .map(|(h, l)| (map(h), l))
        .collect();
    RibbonGraph::new(g.mode(), rotations, &edges, &legs).expect("relabelling preserves validity")
}
