//! Property suites run over a list of graphs, as used by `ribbon check`.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::hopf::{AlgebraElement, Generator, HopfAlgebra};
use crate::io::{parse, serialize};
use crate::renorm::{Character, Projection, Renormalizer};
use crate::ribbon_graph::{Mode, RibbonGraph};
use crate::subgraphs::{
    contraction_steps, insert, shrinkable_subgraphs, ContractionStep, GluingData, ResidueSite,
};

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} checked", self.name, self.checked)?;
        if !self.passed() {
            write!(f, ", {} failed", self.failures.len())?;
        }
        write!(f, ")")
    }
}

type Suite = fn(&HopfAlgebra, &[RibbonGraph]) -> SuiteReport;

pub const SUITES: &[(&str, Suite)] = &[
    ("euler characteristic", euler_characteristic),
    ("power counting", power_counting),
    ("document round trip", document_round_trip),
    ("coassociativity", coassociativity),
    ("counit", counit),
    ("hopf identity", hopf_identity),
    ("antipodes agree", antipodes_agree),
    ("grading", grading),
    ("H_c closure", hc_closure),
    ("contraction/insertion round trip", contraction_round_trip),
    ("renormalization finiteness", renormalization_finiteness),
];

/// Runs every suite on its own thread; reports come back in suite order.
pub fn run_all(graphs: &[RibbonGraph]) -> Vec<SuiteReport> {
    let hopf = HopfAlgebra::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = SUITES
            .iter()
            .map(|(_, suite)| scope.spawn(|| suite(&hopf, graphs)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    })
}

fn run(
    name: &'static str,
    graphs: &[RibbonGraph],
    mut check: impl FnMut(&RibbonGraph) -> Result<(), String>,
) -> SuiteReport {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (i, g) in graphs.iter().enumerate() {
        checked += 1;
        if let Err(e) = check(g) {
            failures.push(format!(
                "graph #{i} [{}]: {e}",
                g.canonical_form().hash_hex()
            ));
        }
    }
    SuiteReport {
        name,
        checked,
        failures,
    }
}

fn element(g: &RibbonGraph) -> AlgebraElement {
    AlgebraElement::from_generator(Generator::labeled(g.clone()))
}

pub fn euler_characteristic(_: &HopfAlgebra, graphs: &[RibbonGraph]) -> SuiteReport {
    run("euler characteristic", graphs, |g| {
        let t = g.trace_faces();
        let chi = t.faces as i64 - t.internal_lines as i64 + t.vertices as i64;
        if chi == 2 - 2 * t.genus as i64 && chi <= 2 {
            Ok(())
        } else {
            Err(format!("F-I+V = {chi} but g = {}", t.genus))
        }
    })
}

pub fn power_counting(_: &HopfAlgebra, graphs: &[RibbonGraph]) -> SuiteReport {
    run("power counting", graphs, |g| {
        let t = g.trace_faces();
        let n = t.externals as i64;
        let nc = (n - 4) + 8 * t.genus as i64 + 4 * (t.broken_faces as i64 - 1);
        let comm = n - 4;
        let got = (
            g.omega_in(Mode::NonCommutative),
            g.omega_in(Mode::Commutative),
        );
        if got == (nc, comm) {
            Ok(())
        } else {
            Err(format!("omega {got:?}, expected ({nc}, {comm})"))
        }
    })
}

pub fn document_round_trip(_: &HopfAlgebra, graphs: &[RibbonGraph]) -> SuiteReport {
    run("document round trip", graphs, |g| {
        let back = parse(&serialize(g)).map_err(|e| e.to_string())?;
        if back.canonical_form() == g.canonical_form() && serialize(&back) == serialize(g) {
            Ok(())
        } else {
            Err("parse(serialize(g)) differs from g".into())
        }
    })
}

pub fn coassociativity(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> SuiteReport {
    run("coassociativity", graphs, |g| {
        hopf.check_coassociativity(&element(g))
            .map_err(|d| format!("{:?}: {} vs {}", d.key, d.left, d.right))
    })
}

pub fn counit(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> SuiteReport {
    run("counit", graphs, |g| {
        hopf.check_counit_laws(&element(g))
            .map_err(|d| format!("{}: {} vs {} at {}", d.law, d.left, d.right, d.key))
    })
}

pub fn hopf_identity(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> SuiteReport {
    run("hopf identity", graphs, |g| {
        hopf.check_hopf_identity(&element(g))
            .map_err(|d| format!("{}: {} vs {} at {}", d.law, d.left, d.right, d.key))
    })
}

pub fn antipodes_agree(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> SuiteReport {
    run("antipodes agree", graphs, |g| {
        hopf.check_antipodes_agree(&element(g))
            .map_err(|d| format!("{} vs {} at {}", d.left, d.right, d.key))
    })
}

pub fn grading(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> SuiteReport {
    run("grading", graphs, |g| hopf.check_grading(&element(g)))
}

/// Only graphs with a vertex residue are in `H_c`; the others pass vacuously.
pub fn hc_closure(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> SuiteReport {
    let members: Vec<RibbonGraph> = graphs
        .iter()
        .filter(|g| g.has_vertex_residue())
        .cloned()
        .collect();
    run("H_c closure", &members, |g| hopf.check_hc_closure(g))
}

pub fn contraction_round_trip(_: &HopfAlgebra, graphs: &[RibbonGraph]) -> SuiteReport {
    run(
        "contraction/insertion round trip",
        graphs,
        reconstructs_every_shrinking,
    )
}

/// For each shrinkable subgraph, every component contraction is undone by
/// inserting the component back at its residue. Since each step starts from
/// the previous step's result, this rebuilds the whole graph.
pub fn reconstructs_every_shrinking(g: &RibbonGraph) -> Result<(), String> {
    for sub in shrinkable_subgraphs(g) {
        let steps = contraction_steps(g, &sub).map_err(|e| e.to_string())?;
        for step in &steps {
            if reinsertion(step).is_none() {
                return Err(format!(
                    "no gluing rebuilds the contraction of lines {:?}",
                    sub.edges()
                ));
            }
        }
    }
    Ok(())
}

/// The first gluing data that inserts `step.component` back into
/// `step.after` and gives a graph isomorphic to `step.before`.
pub fn reinsertion(step: &ContractionStep) -> Option<GluingData> {
    let target = step.before.canonical_form();
    candidate_gluings(step).into_iter().find(|gluing| {
        insert(&step.after, &step.component, gluing)
            .is_ok_and(|ins| ins.graph.canonical_form() == target)
    })
}

fn candidate_gluings(step: &ContractionStep) -> Vec<GluingData> {
    match step.site {
        ResidueSite::Vertex(vertex) => {
            let mut out = vec![GluingData::Vertex {
                vertex,
                assignment: vec![1, 2, 3, 4],
            }];
            let mut perm = vec![1u32, 2, 3, 4];
            permutations(&mut perm, 0, &mut |p| {
                out.push(GluingData::Vertex {
                    vertex,
                    assignment: p.to_vec(),
                })
            });
            out
        }
        ResidueSite::Line(half_edge) => {
            let partner = step.after.partner(half_edge).unwrap_or(half_edge);
            let mut out = Vec::new();
            for h in [half_edge, partner] {
                for first_leg in [1, 2] {
                    out.push(GluingData::Line {
                        half_edge: h,
                        first_leg,
                    });
                }
            }
            out
        }
    }
}

fn permutations(items: &mut [u32], k: usize, visit: &mut dyn FnMut(&[u32])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// With `φ(Γ) = (1/e + 1)^L` and minimal subtraction, every `φ₊` is finite,
/// every `φ₋` is a pure pole part, and no result was truncated.
pub fn renormalization_finiteness(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> SuiteReport {
    let phi = Character::pole_per_loop(BigRational::one(), BigRational::one());
    let r = Renormalizer::new(hopf, phi, Projection::MinimalSubtraction);
    run("renormalization finiteness", graphs, |g| {
        let gen = Generator::labeled(g.clone());
        let minus = r.counterterm(&gen).map_err(|e| e.to_string())?;
        let plus = r.renormalized(&gen).map_err(|e| e.to_string())?;
        if !minus.is_pole_part() {
            return Err(format!("counterterm {minus} is not a pole part"));
        }
        if !plus.is_finite() {
            return Err(format!("renormalized value {plus} has a pole"));
        }
        if !minus.is_exact() || !plus.is_exact() {
            return Err("result was truncated".into());
        }
        Ok(())
    })
}
