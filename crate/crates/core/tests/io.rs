mod common;

use common::*;
use ribbon_hopf::io::{
    export_dot, generate_corpus, parse, parse_rules, serialize, serialize_canonical, IoError,
};
use ribbon_hopf::renorm::FeynmanRules;
use ribbon_hopf::ribbon_graph::{HalfEdgeId, LegSymmetry, Mode, RibbonGraph};

const BUBBLE: &str = "version 1
mode nc
v 0: 0 1 2 3
v 1: 4 5 6 7
e 0 5
e 1 4
x 2: 1
x 3: 2
x 6: 3
x 7: 4
";

#[test]
fn bubble_document() {
    let g = parse(BUBBLE).unwrap();
    assert!(isomorphic(&g, &bubble()));
    assert_eq!(serialize(&g), BUBBLE);
    assert_eq!(serialize(&parse(&serialize(&g)).unwrap()), BUBBLE);
}

#[test]
fn parse_errors() {
    assert!(matches!(parse(""), Err(IoError::Syntax { .. })));
    let unknown = BUBBLE.replace("x 7: 4", "x 9: 4");
    assert!(matches!(
        parse(&unknown),
        Err(IoError::UnknownHalfEdge { id: 9, .. })
    ));
    let dup = BUBBLE.replace("v 1: 4 5 6 7", "v 1: 4 5 6 6");
    assert!(matches!(
        parse(&dup),
        Err(IoError::DuplicateHalfEdge { id: 6, .. })
    ));
    let no_header = BUBBLE.replace("version 1\n", "");
    assert!(matches!(parse(&no_header), Err(IoError::Syntax { .. })));
    let not_1pi = "version 1\nmode nc\nv 0: 0 1 2 3\nv 1: 4 5 6 7\ne 0 4\nx 1: 1\nx 2: 2\nx 3: 3\nx 5: 4\nx 6: 5\nx 7: 6\n";
    assert!(matches!(parse(not_1pi), Err(IoError::Graph(_))));
}

#[test]
fn dot_counts() {
    for g in [bubble(), broken_triangle(), nested()] {
        let dot = export_dot(&g);
        let nodes = dot
            .lines()
            .filter(|l| {
                (l.trim_start().starts_with('v') || l.trim_start().starts_with('x'))
                    && !l.contains("--")
            })
            .count();
        assert_eq!(nodes, g.vertex_count() + g.external_count());
    }
}

#[test]
fn isomorphic_graphs_share_canonical_documents() {
    let g = nested();
    let n = g.half_edge_count() as u32;
    let ids: Vec<u32> = (0..n).map(|i| (i * 5 + 3) % n).collect();
    let copy = shuffled(&g, &[2, 0, 1], &[3, 1, 2], &ids);
    assert!(isomorphic(&g, &copy));
    assert_ne!(serialize(&g), serialize(&copy));
    assert_eq!(serialize_canonical(&g), serialize_canonical(&copy));
    assert_ne!(serialize_canonical(&g), serialize_canonical(&chain3()));
}

/// Every labelling of the legs of `g`.
fn relabelings(g: &RibbonGraph) -> Vec<RibbonGraph> {
    let legs: Vec<HalfEdgeId> = g.externals().into_iter().map(|(h, _)| h).collect();
    let n = legs.len() as u32;
    let mut perms = vec![vec![]];
    for k in 1..=n {
        perms = perms
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (0..=p.len()).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, k);
                    q
                })
            })
            .collect();
    }
    perms
        .into_iter()
        .map(|p| {
            let externals: Vec<_> = legs.iter().zip(&p).map(|(&h, &l)| (h, l)).collect();
            RibbonGraph::new(g.mode(), g.rotations().to_vec(), &g.edges(), &externals).unwrap()
        })
        .collect()
}

fn in_corpus(corpus: &[RibbonGraph], g: &RibbonGraph) -> bool {
    relabelings(g)
        .iter()
        .any(|r| corpus.iter().any(|c| isomorphic(c, r)))
}

#[test]
fn one_loop_corpus() {
    let corpus = generate_corpus(1, Mode::NonCommutative);
    assert!(in_corpus(&corpus, &bubble()));
    assert!(in_corpus(&corpus, &planar_tadpole()));
    assert!(in_corpus(&corpus, &nonplanar_tadpole()));
    assert!(in_corpus(&corpus, &twisted_bubble()));
    for (i, a) in corpus.iter().enumerate() {
        for b in &corpus[i + 1..] {
            assert!(!relabelings(a).iter().any(|r| isomorphic(r, b)));
        }
    }
}

#[test]
fn corpus_properties() {
    let two = generate_corpus(2, Mode::NonCommutative);
    let three = generate_corpus(3, Mode::NonCommutative);
    assert!(three.len() >= 30);
    assert_eq!(&three[..two.len()], &two[..]);
    let mut keys: Vec<_> = three
        .iter()
        .map(|g| g.canonical_form_with(LegSymmetry::Unlabeled))
        .collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), three.len());
    assert!(three.iter().any(|g| g.is_planar_regular()));
    assert!(three.iter().any(|g| !g.is_planar_regular()));
    for g in &three {
        assert!(matches!(g.external_count(), 2 | 4));
        assert_eq!(
            g.externals().iter().map(|&(_, l)| l).collect::<Vec<_>>(),
            (1..=g.external_count() as u32).collect::<Vec<_>>()
        );
    }
}

#[test]
fn commutative_corpus_counts() {
    // Connected 1PI phi^4 graphs with two or four legs: 2 at one loop, 5 at two.
    let comm = generate_corpus(2, Mode::Commutative);
    assert_eq!(comm.iter().filter(|g| g.loops() == 1).count(), 2);
    assert_eq!(comm.iter().filter(|g| g.loops() == 2).count(), 5);
}

#[test]
fn rules_files() {
    let cfg = parse_rules("rules pole_per_loop c=1 d=1\n").unwrap();
    assert!(matches!(cfg.rules, FeynmanRules::PolePerLoop { .. }));
    let hash = bubble().canonical_form().hash_hex();
    let cfg = parse_rules(&format!("rules table\nphi {hash}: -1*e^-1 + 2\n")).unwrap();
    let phi = cfg.character();
    assert_eq!(phi.on_graph(&bubble()).unwrap().to_string(), "-1*e^-1 + 2");
    assert!(parse_rules("rules table\nphi abc: 1*e^^2\n").is_err());
}
