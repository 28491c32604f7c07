//! Canonical encodings used as keys when combining like terms.
//!
//! A connected rotation system is fixed by any one of its half-edges: walking
//! the vertices breadth-first from that half-edge, reading each rotation from
//! the slot through which the vertex was reached, numbers everything
//! deterministically. The canonical form is the least such numbering over the
//! admissible starting half-edges. In commutative mode rotations carry no
//! information and the minimum is taken over vertex orderings instead.

use std::fmt;

use sha2::{Digest, Sha256};

use super::{HalfEdgeId, Mode, RibbonGraph};

/// How much of the external-leg labelling an encoding remembers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LegSymmetry {
    /// Isomorphisms fix every label.
    Labeled,
    /// Labels are known only up to the symmetry of the graph's residue:
    /// rotations of the legs along the broken face for Moyal graphs, any
    /// permutation for local ones.
    Residue,
    /// Labels are ignored.
    Unlabeled,
}

impl LegSymmetry {
    fn tag(self) -> u8 {
        match self {
            LegSymmetry::Labeled => 0,
            LegSymmetry::Residue => 1,
            LegSymmetry::Unlabeled => 2,
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Short hex digest, used to key rule tables.
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(&self.0);
        hex::encode(&digest[..8])
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.hash_hex())
    }
}

impl RibbonGraph {
    /// Encoding invariant under isomorphisms fixing the external labels.
    pub fn canonical_form(&self) -> CanonicalForm {
        self.canonical_form_with(LegSymmetry::Labeled)
    }

    pub fn canonical_form_with(&self, symmetry: LegSymmetry) -> CanonicalForm {
        let code = match self.mode() {
            Mode::NonCommutative => self.rotation_code(symmetry),
            Mode::Commutative => self.local_code(symmetry),
        };
        let mut bytes = Vec::with_capacity(2 + 4 * code.len());
        bytes.push(symmetry.tag());
        bytes.push(match self.mode() {
            Mode::NonCommutative => 0,
            Mode::Commutative => 1,
        });
        for word in code {
            bytes.extend_from_slice(&word.to_be_bytes());
        }
        CanonicalForm(bytes)
    }

    /// The representative of this graph's isomorphism class fixing labels:
    /// half-edges are renumbered in the order of the canonical encoding, so
    /// isomorphic graphs give identical representatives.
    pub fn canonical_graph(&self) -> RibbonGraph {
        let graph = match self.mode() {
            Mode::NonCommutative => decode_rotation_code(&self.rotation_code(LegSymmetry::Labeled)),
            Mode::Commutative => decode_local_code(&self.local_code(LegSymmetry::Labeled)),
        };
        RibbonGraph::from_parts_unvalidated(self.mode(), graph.0, &graph.1, &graph.2)
            .expect("decoded code is well formed")
    }

    fn rotation_code(&self, symmetry: LegSymmetry) -> Vec<u32> {
        let n = self.external_count();
        let by_label = |h: HalfEdgeId| self.label(h).unwrap_or(0);
        match symmetry {
            LegSymmetry::Labeled if n > 0 => {
                let root = self.external_with_label(1).expect("labels are 1..=N");
                self.code_from(root, &by_label)
            }
            LegSymmetry::Residue if n > 0 && self.legs_by_broken_face().len() == 1 => {
                let legs = self.legs_by_broken_face().remove(0);
                (0..legs.len())
                    .map(|shift| {
                        let cyclic = |h: HalfEdgeId| match legs.iter().position(|&l| l == h) {
                            Some(k) => ((k + legs.len() - shift) % legs.len()) as u32 + 1,
                            None => 0,
                        };
                        self.code_from(legs[shift], &cyclic)
                    })
                    .min()
                    .expect("at least one leg")
            }
            LegSymmetry::Labeled => self.min_over_all_roots(&by_label),
            LegSymmetry::Residue | LegSymmetry::Unlabeled => {
                self.min_over_all_roots(&|h| u32::from(self.is_external(h)))
            }
        }
    }

    fn min_over_all_roots(&self, label: &dyn Fn(HalfEdgeId) -> u32) -> Vec<u32> {
        self.half_edges()
            .map(|root| self.code_from(root, label))
            .min()
            .expect("graph has half-edges")
    }

    /// Breadth-first numbering from `root`. External legs contribute
    /// `(0, label)`, internal half-edges `(1 + vertex, slot)` of their partner.
    pub(crate) fn code_from(
        &self,
        root: HalfEdgeId,
        label: &dyn Fn(HalfEdgeId) -> u32,
    ) -> Vec<u32> {
        let v_count = self.vertex_count();
        let mut index = vec![usize::MAX; v_count];
        let mut offset = vec![0usize; v_count];
        let mut order = Vec::with_capacity(v_count);
        let root_vertex = self.vertex_of(root);
        index[root_vertex] = 0;
        offset[root_vertex] = self.slot_of(root);
        order.push(root_vertex);
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            let rot = self.rotation(v);
            for j in 0..rot.len() {
                let h = rot[(offset[v] + j) % rot.len()];
                if let Some(p) = self.partner(h) {
                    let w = self.vertex_of(p);
                    if index[w] == usize::MAX {
                        index[w] = order.len();
                        offset[w] = self.slot_of(p);
                        order.push(w);
                    }
                }
            }
            i += 1;
        }
        let mut code = Vec::with_capacity(1 + v_count + 2 * self.half_edge_count());
        code.push(order.len() as u32);
        for &v in &order {
            let rot = self.rotation(v);
            code.push(rot.len() as u32);
            for j in 0..rot.len() {
                let h = rot[(offset[v] + j) % rot.len()];
                match self.partner(h) {
                    Some(p) => {
                        let w = self.vertex_of(p);
                        let deg = self.rotation(w).len();
                        code.push(1 + index[w] as u32);
                        code.push(((self.slot_of(p) + deg - offset[w]) % deg) as u32);
                    }
                    None => {
                        code.push(0);
                        code.push(label(h));
                    }
                }
            }
        }
        code
    }

    fn local_code(&self, symmetry: LegSymmetry) -> Vec<u32> {
        let v_count = self.vertex_count();
        let mut legs: Vec<Vec<u32>> = vec![Vec::new(); v_count];
        let mut mult = vec![vec![0u32; v_count]; v_count];
        for h in self.half_edges() {
            let v = self.vertex_of(h);
            match self.partner(h) {
                Some(p) if h < p => {
                    let w = self.vertex_of(p);
                    mult[v][w] += 1;
                    if v != w {
                        mult[w][v] += 1;
                    }
                }
                Some(_) => {}
                None => legs[v].push(match symmetry {
                    LegSymmetry::Labeled => self.label(h).unwrap_or(0),
                    _ => 0,
                }),
            }
        }
        for l in &mut legs {
            l.sort_unstable();
        }
        // Vertices are only permuted within classes of equal local data.
        let invariant = |v: usize| {
            let mut row: Vec<u32> = mult[v].clone();
            row.sort_unstable();
            (self.rotation(v).len(), legs[v].clone(), mult[v][v], row)
        };
        let mut vertices: Vec<usize> = (0..v_count).collect();
        vertices.sort_by_key(|&v| invariant(v));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in &vertices {
            match classes.last_mut() {
                Some(c) if invariant(c[0]) == invariant(v) => c.push(v),
                _ => classes.push(vec![v]),
            }
        }
        let encode = |order: &[usize]| {
            let mut code = vec![v_count as u32];
            for (i, &v) in order.iter().enumerate() {
                code.push(self.rotation(v).len() as u32);
                code.push(legs[v].len() as u32);
                code.extend_from_slice(&legs[v]);
                for &w in &order[i..] {
                    code.push(mult[v][w]);
                }
            }
            code
        };
        let mut best: Option<Vec<u32>> = None;
        let mut order = Vec::with_capacity(v_count);
        permute_classes(&classes, 0, &mut order, &mut |order| {
            let code = encode(order);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        });
        best.expect("graph has vertices")
    }
}

type Parts = (
    Vec<Vec<HalfEdgeId>>,
    Vec<(HalfEdgeId, HalfEdgeId)>,
    Vec<(HalfEdgeId, u32)>,
);

fn decode_rotation_code(code: &[u32]) -> Parts {
    let v_count = code[0] as usize;
    let mut degrees = Vec::with_capacity(v_count);
    let mut pos = 1;
    for _ in 0..v_count {
        let d = code[pos] as usize;
        degrees.push(d);
        pos += 1 + 2 * d;
    }
    let mut first = vec![0u32; v_count];
    for v in 1..v_count {
        first[v] = first[v - 1] + degrees[v - 1] as u32;
    }
    let (mut rotations, mut edges, mut externals) = (Vec::new(), Vec::new(), Vec::new());
    let mut pos = 1;
    for v in 0..v_count {
        let d = code[pos] as usize;
        pos += 1;
        let mut rot = Vec::with_capacity(d);
        for j in 0..d {
            let h = HalfEdgeId(first[v] + j as u32);
            rot.push(h);
            let (tag, value) = (code[pos], code[pos + 1]);
            pos += 2;
            if tag == 0 {
                externals.push((h, value));
            } else {
                let p = HalfEdgeId(first[tag as usize - 1] + value);
                if h < p {
                    edges.push((h, p));
                }
            }
        }
        rotations.push(rot);
    }
    (rotations, edges, externals)
}

fn decode_local_code(code: &[u32]) -> Parts {
    let v_count = code[0] as usize;
    let mut pos = 1;
    let mut degrees = Vec::new();
    let mut legs: Vec<Vec<u32>> = Vec::new();
    let mut mult = vec![vec![0u32; v_count]; v_count];
    for (i, row) in mult.iter_mut().enumerate() {
        degrees.push(code[pos] as usize);
        let n = code[pos + 1] as usize;
        legs.push(code[pos + 2..pos + 2 + n].to_vec());
        pos += 2 + n;
        row[i..].copy_from_slice(&code[pos..pos + v_count - i]);
        pos += v_count - i;
    }
    let mut next = 0u32;
    let mut free: Vec<Vec<HalfEdgeId>> = Vec::new();
    let mut rotations = Vec::new();
    for &d in &degrees {
        let rot: Vec<HalfEdgeId> = (0..d).map(|j| HalfEdgeId(next + j as u32)).collect();
        next += d as u32;
        free.push(rot.iter().rev().copied().collect());
        rotations.push(rot);
    }
    let mut take = |v: usize| free[v].pop().expect("degree covers incidences");
    let mut externals = Vec::new();
    for (v, ls) in legs.iter().enumerate() {
        for &l in ls {
            externals.push((take(v), l));
        }
    }
    let mut edges = Vec::new();
    for (v, row) in mult.iter().enumerate() {
        for (w, &m) in row.iter().enumerate().skip(v) {
            for _ in 0..m {
                let a = take(v);
                let b = take(w);
                edges.push((a, b));
            }
        }
    }
    (rotations, edges, externals)
}

fn permute_classes(
    classes: &[Vec<usize>],
    depth: usize,
    order: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if depth == classes.len() {
        visit(order);
        return;
    }
    let mut class = classes[depth].clone();
    let len = class.len();
    heap_permutations(&mut class, len, &mut |perm| {
        let len = order.len();
        order.extend_from_slice(perm);
        permute_classes(classes, depth + 1, order, visit);
        order.truncate(len);
    });
}

fn heap_permutations(items: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        visit(items);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(items, k - 1, visit);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    heap_permutations(items, k - 1, visit);
}
