use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ribbon_hopf::checks;
use ribbon_hopf::hopf::{AlgebraElement, Generator, HopfAlgebra, Monomial};
use ribbon_hopf::io::{
    export_dot, generate_corpus, parse, parse_rules, serialize, MAX_CORPUS_LOOPS,
};
use ribbon_hopf::renorm::{counterterm_split, ExternalStructureWeights, Projection, Renormalizer};
use ribbon_hopf::ribbon_graph::{HalfEdgeId, LegSymmetry, Mode, RibbonGraph};
use ribbon_hopf::subgraphs::{
    contract, enumerate_subgraphs, insert, GluingData, Subgraph, SubgraphError,
};

/// Ribbon graphs, their Hopf algebra, and renormalization by subtraction.
#[derive(Parser)]
#[command(name = "ribbon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print counts, genus, broken faces and power counting.
    Analyze { file: PathBuf },
    /// List subgraphs with the classification of each component.
    Subgraphs {
        file: PathBuf,
        /// Only list shrinkable subgraphs.
        #[arg(long)]
        shrinkable: bool,
    },
    /// Print the coproduct term by term.
    Coproduct { file: PathBuf },
    /// Print the antipode.
    Antipode { file: PathBuf },
    /// Contract the given internal lines (indices into the sorted line list).
    Contract {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        edges: Vec<usize>,
    },
    /// Insert a graph at a vertex or on a line of a host graph.
    Insert {
        host: PathBuf,
        insertee: PathBuf,
        /// Host vertex to replace by the insertee.
        #[arg(long, requires = "assignment", conflicts_with = "line")]
        vertex: Option<usize>,
        /// Insertee leg label for each rotation slot of the vertex.
        #[arg(long, value_delimiter = ',')]
        assignment: Option<Vec<u32>>,
        /// Host half-edge whose line receives a two-point insertee.
        #[arg(long)]
        line: Option<u32>,
        /// Insertee leg attached to the half-edge given by --line.
        #[arg(long, default_value_t = 1, requires = "line")]
        first_leg: u32,
    },
    /// Print the value, counterterm and renormalized value under a rules file.
    Renormalize {
        file: PathBuf,
        #[arg(long)]
        rules: PathBuf,
    },
    /// Export a graph in DOT format.
    Dot { file: PathBuf },
    /// Run every property suite on a directory of graph documents or on a
    /// generated corpus.
    Check {
        #[arg(required_unless_present = "generate", conflicts_with = "generate")]
        dir: Option<PathBuf>,
        /// Generate all graphs up to this many loops instead.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_CORPUS_LOOPS as i64))]
        generate: Option<u32>,
        #[arg(long, value_enum, default_value_t = ModeChoice::Both, requires = "generate")]
        mode: ModeChoice,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeChoice {
    Nc,
    Comm,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_graph(path: &Path) -> Result<RibbonGraph> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&text).with_context(|| format!("in {}", path.display()))
}

fn run(command: Command) -> Result<(String, bool)> {
    let mut out = String::new();
    let mut ok = true;
    match command {
        Command::Analyze { file } => analyze(&read_graph(&file)?, &mut out),
        Command::Subgraphs { file, shrinkable } => {
            list_subgraphs(&read_graph(&file)?, shrinkable, &mut out)
        }
        Command::Coproduct { file } => coproduct(&read_graph(&file)?, &mut out),
        Command::Antipode { file } => antipode(&read_graph(&file)?, &mut out),
        Command::Contract { file, edges } => {
            let g = read_graph(&file)?;
            let sub = Subgraph::new(&g, edges)?;
            out.push_str(&serialize(&contract(&g, &sub)?));
        }
        Command::Insert {
            host,
            insertee,
            vertex,
            assignment,
            line,
            first_leg,
        } => {
            let gluing = match (vertex, assignment, line) {
                (Some(vertex), Some(assignment), None) => GluingData::Vertex { vertex, assignment },
                (None, None, Some(h)) => GluingData::Line {
                    half_edge: HalfEdgeId(h),
                    first_leg,
                },
                _ => bail!("give either --vertex with --assignment, or --line"),
            };
            let host = read_graph(&host)?;
            let insertee = read_graph(&insertee)?;
            let ins = insert(&host, &insertee, &gluing)?;
            out.push_str(&serialize(&ins.graph));
            writeln!(
                out,
                "# g0={} n={} B0={}",
                ins.genus, ins.twist, ins.broken_faces
            )?;
        }
        Command::Renormalize { file, rules } => {
            let g = read_graph(&file)?;
            let text = fs::read_to_string(&rules)
                .with_context(|| format!("cannot read {}", rules.display()))?;
            let config = parse_rules(&text).with_context(|| format!("in {}", rules.display()))?;
            renormalize(&g, &config, &mut out)?;
        }
        Command::Dot { file } => out.push_str(&export_dot(&read_graph(&file)?)),
        Command::Check {
            dir,
            generate,
            mode,
        } => {
            let sets: Vec<(String, Vec<RibbonGraph>)> = match (dir, generate) {
                (Some(dir), _) => vec![(dir.display().to_string(), read_dir(&dir)?)],
                (None, Some(loops)) => {
                    let modes: &[Mode] = match mode {
                        ModeChoice::Nc => &[Mode::NonCommutative],
                        ModeChoice::Comm => &[Mode::Commutative],
                        ModeChoice::Both => &[Mode::NonCommutative, Mode::Commutative],
                    };
                    modes
                        .iter()
                        .map(|&m| {
                            (
                                format!("generated L<={loops} mode {}", m.keyword()),
                                generate_corpus(loops as usize, m),
                            )
                        })
                        .collect()
                }
                (None, None) => bail!("give a directory or --generate"),
            };
            for (name, graphs) in sets {
                writeln!(out, "{name}: {} graphs", graphs.len())?;
                for report in checks::run_all(&graphs) {
                    writeln!(out, "  {report}")?;
                    for f in report.failures.iter().take(5) {
                        writeln!(out, "    {f}")?;
                    }
                    ok &= report.passed();
                }
            }
            writeln!(
                out,
                "{}",
                if ok {
                    "all checks passed"
                } else {
                    "some checks failed"
                }
            )?;
        }
    }
    Ok((out, ok))
}

fn read_dir(dir: &Path) -> Result<Vec<RibbonGraph>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "g"));
    paths.sort();
    paths.iter().map(|p| read_graph(p)).collect()
}

fn analyze(g: &RibbonGraph, out: &mut String) {
    let t = g.trace_faces();
    writeln!(
        out,
        "V={} I={} N={} F={} B={} g={} L={} omega_nc={} omega_comm={}",
        t.vertices,
        t.internal_lines,
        t.externals,
        t.faces,
        t.broken_faces,
        t.genus,
        t.loops,
        g.omega_in(Mode::NonCommutative),
        g.omega_in(Mode::Commutative)
    )
    .unwrap();
    writeln!(
        out,
        "mode={} planar_regular={}",
        g.mode().keyword(),
        yes_no(g.is_planar_regular())
    )
    .unwrap();
    writeln!(
        out,
        "hash={} unlabeled={}",
        g.canonical_form().hash_hex(),
        g.canonical_form_with(LegSymmetry::Unlabeled).hash_hex()
    )
    .unwrap();
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list_subgraphs(g: &RibbonGraph, shrinkable_only: bool, out: &mut String) {
    for sub in enumerate_subgraphs(g) {
        let shrinkable = sub.components_have_vertex_residue() && contract(g, &sub).is_ok();
        if shrinkable_only && !shrinkable {
            continue;
        }
        let classes: Vec<String> = sub.components().iter().map(classify).collect();
        writeln!(
            out,
            "lines {:?} shrinkable={} components: {}",
            sub.edges(),
            yes_no(shrinkable),
            classes.join("; ")
        )
        .unwrap();
    }
}

fn classify(component: &Subgraph<'_>) -> String {
    match component.extract() {
        Ok(e) => {
            let t = e.trace_faces();
            format!(
                "{:?} N={} g={} B={} L={} residue={}",
                component.edges(),
                t.externals,
                t.genus,
                t.broken_faces,
                t.loops,
                yes_no(e.has_vertex_residue())
            )
        }
        Err(SubgraphError::ExtractNotOnePI) => format!("{:?} not 1PI", component.edges()),
        Err(e) => format!("{:?} {e}", component.edges()),
    }
}

/// Generators met while printing, with their documents listed at the end.
#[derive(Default)]
struct Legend(BTreeMap<String, Generator>);

impl Legend {
    fn monomial(&mut self, m: &Monomial) -> String {
        for g in m.factors() {
            self.0.insert(g.to_string(), g.clone());
        }
        m.to_string()
    }

    fn write(&self, out: &mut String) {
        for (name, g) in &self.0 {
            writeln!(
                out,
                "\n# {name} L={} N={}",
                g.loops(),
                g.graph().external_count()
            )
            .unwrap();
            out.push_str(&serialize(g.graph()));
        }
    }
}

fn coproduct(g: &RibbonGraph, out: &mut String) {
    let hopf = HopfAlgebra::new();
    let x = AlgebraElement::from_generator(Generator::labeled(g.clone()));
    let delta = hopf.coproduct(&x);
    let mut legend = Legend::default();
    writeln!(out, "{} terms", delta.len()).unwrap();
    for ((a, b), c) in delta.terms() {
        let (a, b) = (legend.monomial(a), legend.monomial(b));
        writeln!(out, "{c} * {a} ⊗ {b}").unwrap();
    }
    legend.write(out);
}

fn antipode(g: &RibbonGraph, out: &mut String) {
    let hopf = HopfAlgebra::new();
    let x = AlgebraElement::from_generator(Generator::labeled(g.clone()));
    let s = hopf.antipode(&x);
    let mut legend = Legend::default();
    writeln!(out, "{} terms", s.len()).unwrap();
    for (m, c) in s.terms() {
        let m = legend.monomial(m);
        writeln!(out, "{c} * {m}").unwrap();
    }
    legend.write(out);
}

fn renormalize(
    g: &RibbonGraph,
    config: &ribbon_hopf::io::RulesConfig,
    out: &mut String,
) -> Result<()> {
    let hopf = HopfAlgebra::new();
    let r = Renormalizer::new(&hopf, config.character(), Projection::MinimalSubtraction);
    let gen = Generator::labeled(g.clone());
    writeln!(out, "phi = {}", config.character().on_generator(&gen)?)?;
    writeln!(out, "phi_minus = {}", r.counterterm(&gen)?)?;
    writeln!(out, "phi_plus = {}", r.renormalized(&gen)?)?;
    if g.has_vertex_residue() {
        let weights = config
            .split
            .clone()
            .unwrap_or_else(|| ExternalStructureWeights::uniform(g.mode()));
        for (slot, value) in counterterm_split(r.character(), g, &weights)?.slots {
            writeln!(out, "counterterm {} = {value}", slot.name())?;
        }
    }
    Ok(())
}
