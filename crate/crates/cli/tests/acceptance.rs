//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! failure status if any criterion fails or runs over its time budget.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use ribbon_hopf::checks::reconstructs_every_shrinking;
use ribbon_hopf::hopf::{AlgebraElement, Generator, HopfAlgebra, Monomial};
use ribbon_hopf::io::generate_corpus;
use ribbon_hopf::renorm::{Character, Projection, Renormalizer};
use ribbon_hopf::ribbon_graph::{HalfEdgeId, Mode, RibbonGraph};
use ribbon_hopf::subgraphs::{insert, shrinkable_subgraphs, GluingData};

const MAX_LOOPS: usize = 3;
const MIN_CORPUS: usize = 30;

/// Faces and broken faces as cycles of `sigma ∘ alpha`, computed here from
/// the rotations alone.
fn face_oracle(g: &RibbonGraph) -> (i64, i64) {
    let n = g.half_edge_count();
    let mut sigma = vec![0usize; n];
    for rot in g.rotations() {
        for (i, h) in rot.iter().enumerate() {
            sigma[h.index()] = rot[(i + 1) % rot.len()].index();
        }
    }
    let alpha: Vec<usize> = (0..n)
        .map(|h| g.partner(HalfEdgeId(h as u32)).map_or(h, HalfEdgeId::index))
        .collect();
    let mut seen = vec![false; n];
    let (mut f, mut b) = (0, 0);
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut broken = false;
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            broken |= alpha[h] == h;
            h = sigma[alpha[h]];
        }
        f += 1;
        b += i64::from(broken);
    }
    (f, b)
}

fn chi(g: &RibbonGraph) -> i64 {
    face_oracle(g).0 - g.internal_line_count() as i64 + g.vertex_count() as i64
}

fn genus_oracle(g: &RibbonGraph) -> i64 {
    (2 - chi(g)) / 2
}

fn planar_regular_oracle(g: &RibbonGraph) -> bool {
    genus_oracle(g) == 0 && face_oracle(g).1 == 1
}

fn bubble() -> RibbonGraph {
    let h = |ids: &[u32]| ids.iter().map(|&i| HalfEdgeId(i)).collect::<Vec<_>>();
    RibbonGraph::new(
        Mode::NonCommutative,
        vec![h(&[0, 1, 2, 3]), h(&[4, 5, 6, 7])],
        &[
            (HalfEdgeId(0), HalfEdgeId(5)),
            (HalfEdgeId(1), HalfEdgeId(4)),
        ],
        &[
            (HalfEdgeId(2), 1),
            (HalfEdgeId(3), 2),
            (HalfEdgeId(6), 3),
            (HalfEdgeId(7), 4),
        ],
    )
    .expect("bubble is valid")
}

fn generator_element(g: &RibbonGraph) -> AlgebraElement {
    AlgebraElement::from_generator(Generator::labeled(g.clone()))
}

/// Name, time budget in seconds, and the check itself.
type Criterion<'a> = (&'static str, u64, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    failures: Vec<String>,
    note: String,
}

impl Outcome {
    fn from(failures: Vec<String>, note: impl Into<String>) -> Self {
        Outcome {
            failures,
            note: note.into(),
        }
    }
}

fn first_failures<T>(
    graphs: &[RibbonGraph],
    mut check: impl FnMut(&RibbonGraph) -> Result<(), T>,
) -> Vec<String>
where
    T: std::fmt::Display,
{
    graphs
        .iter()
        .enumerate()
        .filter_map(|(i, g)| check(g).err().map(|e| format!("graph #{i}: {e}")))
        .collect()
}

fn broken_triangle_fixture() -> Outcome {
    let fixture = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/broken_triangle.g"
    );
    let out = match Command::new(env!("CARGO_BIN_EXE_ribbon"))
        .args(["analyze", fixture])
        .output()
    {
        Ok(out) => out,
        Err(e) => return Outcome::from(vec![format!("could not run binary: {e}")], ""),
    };
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let field = |key: &str| {
        text.split_whitespace()
            .find_map(|w| w.strip_prefix(&format!("{key}=")).map(str::to_string))
    };
    let mut failures = Vec::new();
    if !out.status.success() {
        failures.push(format!("exit status {}", out.status));
    }
    for (key, want) in [("V", "3"), ("I", "3"), ("F", "2"), ("B", "2"), ("g", "0")] {
        if field(key).as_deref() != Some(want) {
            failures.push(format!("{key}={:?}, expected {want}", field(key)));
        }
    }
    Outcome::from(failures, text.lines().next().unwrap_or_default())
}

fn euler(graphs: &[RibbonGraph]) -> Outcome {
    let mut failures = first_failures(graphs, |g| {
        let x = chi(g);
        let t = g.trace_faces();
        let lib = t.faces as i64 - t.internal_lines as i64 + t.vertices as i64;
        if x % 2 != 0 || x > 2 {
            Err(format!("F-I+V = {x} is not 2-2g for integer g >= 0"))
        } else if lib != x || t.genus as i64 != genus_oracle(g) {
            Err(format!(
                "library gives chi {lib}, g {}; oracle chi {x}",
                t.genus
            ))
        } else {
            Ok(())
        }
    });
    if graphs.len() < MIN_CORPUS {
        failures.push(format!(
            "only {} graphs, expected at least {MIN_CORPUS}",
            graphs.len()
        ));
    }
    Outcome::from(failures, format!("{} graphs", graphs.len()))
}

fn power_counting(nc: &[RibbonGraph], comm: &[RibbonGraph]) -> Outcome {
    let expected = |g: &RibbonGraph, mode: Mode| {
        let n = g.external_count() as i64;
        match mode {
            Mode::NonCommutative => (n - 4) + 8 * genus_oracle(g) + 4 * (face_oracle(g).1 - 1),
            Mode::Commutative => n - 4,
        }
    };
    let mut failures = Vec::new();
    let mut checked = 0;
    for g in nc.iter().chain(comm) {
        for mode in [Mode::NonCommutative, Mode::Commutative] {
            checked += 1;
            let (got, want) = (g.omega_in(mode), expected(g, mode));
            if got != want {
                failures.push(format!("omega {got} in {mode:?}, expected {want}"));
            }
        }
    }
    Outcome::from(failures, format!("{checked} evaluations"))
}

fn coassociativity(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> Outcome {
    let failures = first_failures(graphs, |g| {
        hopf.check_coassociativity(&generator_element(g))
            .map_err(|d| format!("{:?}: {} vs {}", d.key, d.left, d.right))
    });
    Outcome::from(failures, format!("{} graphs", graphs.len()))
}

fn hopf_identity(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> Outcome {
    let failures = first_failures(graphs, |g| {
        let x = generator_element(g);
        hopf.check_hopf_identity(&x)
            .and_then(|_| hopf.check_antipodes_agree(&x))
            .map_err(|d| format!("{}: {} vs {} at {}", d.law, d.left, d.right, d.key))
    });
    Outcome::from(failures, format!("{} graphs", graphs.len()))
}

fn insertion_sweep() -> Outcome {
    let b = bubble();
    let (g1, b1) = (genus_oracle(&b), face_oracle(&b).1);
    let gluings = GluingData::all_vertex_gluings(0, &b);
    let mut failures = Vec::new();
    if gluings.len() != 6 {
        failures.push(format!("{} gluings, expected 6", gluings.len()));
    }
    let mut twists = Vec::new();
    for gluing in &gluings {
        let ins = match insert(&b, &b, gluing) {
            Ok(ins) => ins,
            Err(e) => {
                failures.push(format!("{gluing:?}: {e}"));
                continue;
            }
        };
        let g0 = genus_oracle(&ins.graph);
        let n = g0 - g1 - g1;
        let b0 = face_oracle(&ins.graph).1;
        twists.push((n, b0));
        if n < 0 || ins.twist != n {
            failures.push(format!("{gluing:?}: g0={g0}, reported n={}", ins.twist));
        }
        if gluing.respects_cyclic_order(&b) && n != 0 {
            failures.push(format!("{gluing:?}: cyclic gluing changed the genus"));
        }
        if b0 < b1 {
            failures.push(format!("{gluing:?}: B0={b0} < B1={b1}"));
        }
    }
    Outcome::from(failures, format!("(n, B0) over gluings {twists:?}"))
}

fn round_trip(graphs: &[RibbonGraph]) -> Outcome {
    let shrinkings: usize = graphs.iter().map(|g| shrinkable_subgraphs(g).len()).sum();
    let failures = first_failures(graphs, reconstructs_every_shrinking);
    Outcome::from(failures, format!("{shrinkings} shrinkable subgraphs"))
}

fn hc_closure(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> Outcome {
    let members: Vec<RibbonGraph> = graphs
        .iter()
        .filter(|g| planar_regular_oracle(g))
        .cloned()
        .collect();
    let outside = |m: &Monomial| {
        m.factors()
            .iter()
            .find(|f| !planar_regular_oracle(f.graph()))
            .map(|f| f.to_string())
    };
    let failures = first_failures(&members, |g| {
        if !g.is_planar_regular() {
            return Err("library disagrees on planar regularity".to_string());
        }
        let x = generator_element(g);
        for ((a, b), _) in hopf.coproduct(&x).terms() {
            if let Some(f) = outside(a).or_else(|| outside(b)) {
                return Err(format!("coproduct factor {f} is not planar regular"));
            }
        }
        for (m, _) in hopf.antipode(&x).terms() {
            if let Some(f) = outside(m) {
                return Err(format!("antipode factor {f} is not planar regular"));
            }
        }
        Ok(())
    });
    Outcome::from(failures, format!("{} planar regular graphs", members.len()))
}

fn finiteness(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> Outcome {
    let one = BigRational::from_integer(1.into());
    let r = Renormalizer::new(
        hopf,
        Character::pole_per_loop(one.clone(), one),
        Projection::MinimalSubtraction,
    );
    let failures = first_failures(graphs, |g| {
        let gen = Generator::labeled(g.clone());
        let minus = r.counterterm(&gen).map_err(|e| e.to_string())?;
        let plus = r.renormalized(&gen).map_err(|e| e.to_string())?;
        if !minus.is_exact() || !plus.is_exact() {
            return Err(format!("truncated: phi_minus {minus}, phi_plus {plus}"));
        }
        if minus.terms().any(|(k, _)| k >= 0) {
            return Err(format!("phi_minus = {minus} is not a pure pole part"));
        }
        if plus.terms().any(|(k, _)| k < 0) {
            return Err(format!("phi_plus = {plus} has a pole"));
        }
        Ok(())
    });
    Outcome::from(failures, format!("{} graphs", graphs.len()))
}

fn commutative(hopf: &HopfAlgebra, graphs: &[RibbonGraph]) -> Outcome {
    let mut failures = Vec::new();
    for (name, outcome) in [
        ("coassociativity", coassociativity(hopf, graphs)),
        ("hopf identity", hopf_identity(hopf, graphs)),
        ("finiteness", finiteness(hopf, graphs)),
    ] {
        failures.extend(outcome.failures.into_iter().map(|f| format!("{name}: {f}")));
    }
    let residues = graphs.iter().filter(|g| g.has_vertex_residue()).count();
    if residues != graphs.len() {
        failures.push(format!(
            "{} of {} graphs lack a local residue",
            graphs.len() - residues,
            graphs.len()
        ));
    }
    Outcome::from(failures, format!("{} graphs", graphs.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let nc = generate_corpus(MAX_LOOPS, Mode::NonCommutative);
    let comm = generate_corpus(MAX_LOOPS, Mode::Commutative);
    let corpus_time = start.elapsed();
    println!(
        "corpus: {} nc graphs, {} comm graphs up to {MAX_LOOPS} loops ({:.2?})",
        nc.len(),
        comm.len(),
        corpus_time
    );
    let hopf = HopfAlgebra::new();

    let criteria: Vec<Criterion<'_>> = vec![
        (
            "1 broken triangle fixture",
            1,
            Box::new(broken_triangle_fixture),
        ),
        ("2 euler characteristic", 10, Box::new(|| euler(&nc))),
        (
            "3 power counting",
            5,
            Box::new(|| power_counting(&nc, &comm)),
        ),
        (
            "4 coassociativity",
            60,
            Box::new(|| coassociativity(&hopf, &nc)),
        ),
        (
            "5 hopf identity and antipodes",
            60,
            Box::new(|| hopf_identity(&hopf, &nc)),
        ),
        ("6 insertion genus sweep", 5, Box::new(insertion_sweep)),
        (
            "7 contraction/insertion round trip",
            60,
            Box::new(|| round_trip(&nc)),
        ),
        ("8 H_c closure", 30, Box::new(|| hc_closure(&hopf, &nc))),
        (
            "9 renormalization finiteness",
            30,
            Box::new(|| finiteness(&hopf, &nc)),
        ),
        (
            "10 commutative cross-check",
            60,
            Box::new(|| commutative(&hopf, &comm)),
        ),
    ];

    let mut all_passed = true;
    for (name, budget, run) in &criteria {
        let t = Instant::now();
        let outcome = run();
        // Corpus generation counts against the first corpus criterion.
        let mut elapsed = t.elapsed();
        if name.starts_with("2 ") {
            elapsed += corpus_time;
        }
        let over = elapsed > Duration::from_secs(*budget);
        let passed = outcome.failures.is_empty() && !over;
        all_passed &= passed;
        println!(
            "{} {name} [{}; {:.2?} of {budget}s]",
            if passed { "PASS" } else { "FAIL" },
            outcome.note,
            elapsed
        );
        for f in outcome.failures.iter().take(5) {
            println!("    {f}");
        }
        if over {
            println!("    over the time budget");
        }
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
