use super::{HalfEdgeId, Mode, RibbonGraph};

/// Counts and face structure of a ribbon graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyReport {
    pub vertices: usize,
    pub internal_lines: usize,
    pub externals: usize,
    pub faces: usize,
    pub broken_faces: usize,
    pub genus: u32,
    pub loops: usize,
    /// Face orbits, each listed from its smallest half-edge.
    pub face_orbits: Vec<Vec<HalfEdgeId>>,
    pub broken: Vec<bool>,
}

impl TopologyReport {
    /// `F - I + V`.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces as i64 - self.internal_lines as i64 + self.vertices as i64
    }
}

impl RibbonGraph {
    /// Face successor: `next(pair(h))` for internal half-edges. An external
    /// leg is closed at its free end, so the face runs up one side of the leg
    /// and back down the other: `next(h)`.
    pub fn face_successor(&self, h: HalfEdgeId) -> HalfEdgeId {
        match self.partner(h) {
            Some(p) => self.next_in_rotation(p),
            None => self.next_in_rotation(h),
        }
    }

    pub fn trace_faces(&self) -> TopologyReport {
        let mut seen = vec![false; self.half_edge_count()];
        let mut face_orbits = Vec::new();
        for start in self.half_edges() {
            if seen[start.index()] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut h = start;
            while !seen[h.index()] {
                seen[h.index()] = true;
                orbit.push(h);
                h = self.face_successor(h);
            }
            face_orbits.push(orbit);
        }
        let broken: Vec<bool> = face_orbits
            .iter()
            .map(|orbit| orbit.iter().any(|&h| self.is_external(h)))
            .collect();
        let vertices = self.vertex_count();
        let internal_lines = self.internal_line_count();
        let faces = face_orbits.len();
        let chi = faces as i64 - internal_lines as i64 + vertices as i64;
        debug_assert!(chi % 2 == 0, "Euler characteristic {chi}");
        TopologyReport {
            vertices,
            internal_lines,
            externals: self.external_count(),
            faces,
            broken_faces: broken.iter().filter(|&&b| b).count(),
            // Only a disconnected raw structure can have chi > 2.
            genus: ((2 - chi).max(0) / 2) as u32,
            loops: self.loops(),
            face_orbits,
            broken,
        }
    }

    /// Superficial degree of convergence under the graph's own mode.
    pub fn omega(&self) -> i64 {
        self.omega_in(self.mode())
    }

    /// `(N-4) + 8g + 4(B-1)` for Moyal vertices, `N-4` for local ones.
    pub fn omega_in(&self, mode: Mode) -> i64 {
        let n = self.external_count() as i64;
        match mode {
            Mode::Commutative => n - 4,
            Mode::NonCommutative => {
                let t = self.trace_faces();
                (n - 4) + 8 * t.genus as i64 + 4 * (t.broken_faces as i64 - 1)
            }
        }
    }

    /// Genus zero, a single broken face and two or four legs.
    pub fn is_planar_regular(&self) -> bool {
        let n = self.external_count();
        if n != 2 && n != 4 {
            return false;
        }
        let t = self.trace_faces();
        t.genus == 0 && t.broken_faces == 1
    }

    /// Whether the residue of this graph is a vertex or a plain line, i.e.
    /// whether it may be shrunk inside a larger graph.
    pub fn has_vertex_residue(&self) -> bool {
        match self.mode() {
            Mode::NonCommutative => self.is_planar_regular(),
            Mode::Commutative => matches!(self.external_count(), 2 | 4),
        }
    }

    /// External half-edges along each broken face, in traversal order, each
    /// face started from its smallest external half-edge. Faces are ordered
    /// by that starting half-edge.
    pub fn legs_by_broken_face(&self) -> Vec<Vec<HalfEdgeId>> {
        let report = self.trace_faces();
        let mut faces: Vec<Vec<HalfEdgeId>> = report
            .face_orbits
            .iter()
            .filter_map(|orbit| {
                let legs: Vec<HalfEdgeId> = orbit
                    .iter()
                    .copied()
                    .filter(|&h| self.is_external(h))
                    .collect();
                let smallest = *legs.iter().min()?;
                let start = legs.iter().position(|&h| h == smallest)?;
                let mut rotated = legs[start..].to_vec();
                rotated.extend_from_slice(&legs[..start]);
                Some(rotated)
            })
            .collect();
        faces.sort_by_key(|legs| legs[0]);
        faces
    }
}
