mod common;

use dagfoci_core::indep_test::permutation_independence_test;
use dagfoci_core::sem::{
    builtin, do_intervene, ground_truth, ground_truth_from_edges, sample, Builtin, DagSpec, NodeSpec, NoiseLaw,
};
use dagfoci_core::seeds;
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Column indices of Example-1 node names `X1..X16`.
fn x(ids: &[usize]) -> Vec<usize> {
    ids.iter().map(|i| i - 1).collect()
}

fn spec_from_edges(n: usize, edges: &[(usize, usize)]) -> DagSpec {
    let names: Vec<String> = (0..n).map(|i| format!("V{i}")).collect();
    let nodes = (0..n)
        .map(|v| {
            let parents: Vec<&str> =
                edges.iter().filter(|e| e.1 == v).map(|e| names[e.0].as_str()).collect();
            let eq = if parents.is_empty() {
                "eps".to_string()
            } else {
                format!("(add {} eps)", parents.join(" "))
            };
            NodeSpec::new(&names[v], &parents, &eq).unwrap()
        })
        .collect();
    DagSpec::new(nodes).unwrap()
}

#[test]
fn boundary_matches_moral_graph_on_random_dags() {
    let mut rng = common::instance_rng(2024);
    for _ in 0..200 {
        let n = rng.random_range(1..=9);
        let p = rng.random_range(0.1..0.6);
        let edges = common::random_dag(&mut rng, n, p);
        let spec = spec_from_edges(n, &edges);
        let gt = ground_truth(&spec);
        for v in 0..n {
            assert_eq!(gt.markov_boundary[v], common::moral_boundary(n, &edges, v), "edges {edges:?}, node {v}");
            let mut union: Vec<usize> =
                gt.parents[v].iter().chain(&gt.children[v]).chain(&gt.spouses[v]).copied().collect();
            union.sort_unstable();
            union.dedup();
            assert_eq!(gt.markov_boundary[v], union);
            assert_eq!(gt.tree_neighborhood[v], common::tree_neighborhood(n, &edges, v), "edges {edges:?}, node {v}");
        }
    }
}

#[test]
fn example1_structure() {
    let spec = builtin(Builtin::Example1);
    let gt = ground_truth(&spec);
    let x6 = spec.index_of("X6").unwrap();
    assert_eq!(gt.parents[x6], x(&[2, 3, 4]));
    assert_eq!(gt.children[x6], x(&[9, 11]));
    assert_eq!(gt.spouses[x6], x(&[8, 10, 12]));
    assert_eq!(gt.markov_boundary[x6], x(&[2, 3, 4, 8, 9, 10, 11, 12]));
    let x11 = spec.index_of("X11").unwrap();
    assert_eq!(gt.parents[x11], x(&[6, 8, 12]));
    assert_eq!(gt.markov_boundary[x11], x(&[6, 8, 12, 14]));
    assert!(gt.tree_neighborhood.iter().all(|&t| t));
}

#[test]
fn example2_breaks_tree_neighborhood_at_x5() {
    let spec = builtin(Builtin::Example2);
    let gt = ground_truth(&spec);
    assert!(!gt.tree_neighborhood[spec.index_of("X5").unwrap()]);
}

#[test]
fn example1_x6_follows_its_equation() {
    let spec = builtin(Builtin::Example1);
    let d = sample(&spec, 5, 42).unwrap();
    let col = |name: &str| d.column(d.column_index(name).unwrap()).to_vec();
    let mut rng = seeds::rng(42, &[seeds::name_tag("X6")]);
    let eps: Vec<f64> = Normal::new(0.0, 1.0).unwrap().sample_iter(&mut rng).take(5).collect();
    let (x2, x3, x4, x6) = (col("X2"), col("X3"), col("X4"), col("X6"));
    for i in 0..5 {
        assert_eq!(x6[i], x2[i] + x4[i] + x3[i] * x3[i] + eps[i]);
    }
}

#[test]
fn node_order_does_not_change_the_sample() {
    let spec = builtin(Builtin::Example1);
    let mut nodes = spec.nodes().to_vec();
    nodes.reverse();
    let shuffled = DagSpec::new(nodes).unwrap();
    let (a, b) = (sample(&spec, 50, 9).unwrap(), sample(&shuffled, 50, 9).unwrap());
    for name in spec.names() {
        assert_eq!(
            a.column(a.column_index(&name).unwrap()),
            b.column(b.column_index(&name).unwrap()),
            "{name}"
        );
    }
}

#[test]
fn single_exogenous_node_is_standard_normal() {
    let spec = DagSpec::new(vec![NodeSpec::new("A", &[], "eps").unwrap()]).unwrap();
    // A one-column sample is below the dataset minimum, so sample through a pair.
    assert!(sample(&spec, 10, 0).is_err());
    let spec = DagSpec::new(vec![
        NodeSpec::new("A", &[], "eps").unwrap(),
        NodeSpec::new("B", &[], "eps").unwrap(),
    ])
    .unwrap();
    let a = sample(&spec, 20_000, 1).unwrap().column(0).to_vec();
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    let var = a.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / a.len() as f64;
    assert!(mean.abs() < 0.05 && (var - 1.0).abs() < 0.05, "mean {mean}, var {var}");
}

#[test]
fn noise_streams_are_uncorrelated() {
    let names = ["X1", "X2", "X3", "X4", "X8", "X10", "X12"];
    let spec = builtin(Builtin::Example1);
    let d = sample(&spec, 10_000, 5).unwrap();
    let cols: Vec<&[f64]> = names.iter().map(|n| d.column(d.column_index(n).unwrap())).collect();
    let corr = |a: &[f64], b: &[f64]| {
        let n = a.len() as f64;
        let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        cov / (va * vb).sqrt()
    };
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let r = corr(cols[i], cols[j]);
            assert!(r.abs() <= 0.05, "{} vs {}: {r}", names[i], names[j]);
        }
    }
}

#[test]
fn do_surgery_cuts_incoming_edges() {
    let chain = spec_from_edges(3, &[(0, 1), (1, 2)]);
    let cut = do_intervene(&chain, "V1", NoiseLaw::default()).unwrap();
    assert_eq!(cut.edges(), vec![(1, 2)]);

    let source = do_intervene(&chain, "V0", NoiseLaw::Uniform { low: -1.0, high: 1.0 }).unwrap();
    assert_eq!(source.edges(), chain.edges());
    assert_eq!(source.nodes()[0].noise, NoiseLaw::Uniform { low: -1.0, high: 1.0 });
    assert_eq!(source.nodes()[1..], chain.nodes()[1..]);

    let spec = do_intervene(&builtin(Builtin::Example1), "X6", NoiseLaw::default()).unwrap();
    let gt = ground_truth(&spec);
    let x6 = spec.index_of("X6").unwrap();
    assert!(gt.parents[x6].is_empty());
    // Outgoing edges survive, so the other parents of X9 and X11 remain spouses.
    assert_eq!(gt.children[x6], x(&[9, 11]));
    assert_eq!(gt.spouses[x6], x(&[8, 10, 12]));
    let x2 = spec.index_of("X2").unwrap();
    assert!(!gt.markov_boundary[x2].contains(&x6));

    // A node whose children have no other parents loses its spouses too.
    let gt = ground_truth(&cut);
    assert!(gt.parents[1].is_empty() && gt.spouses[1].is_empty());
}

#[test]
fn intervened_node_is_independent_of_former_parent() {
    let spec = do_intervene(&builtin(Builtin::Example1), "X6", NoiseLaw::default()).unwrap();
    let (x2, x6) = (spec.index_of("X2").unwrap(), spec.index_of("X6").unwrap());
    let mut rejections = 0;
    for s in 0..100 {
        let d = sample(&spec, 1000, s).unwrap();
        let r = permutation_independence_test(d.column(x2), d.column(x6), 100, 0.05, s).unwrap();
        rejections += r.reject as usize;
    }
    // Binomial(100, 0.05): 12 is more than three standard deviations out.
    assert!(rejections <= 12, "{rejections} rejections");
}

#[test]
fn noiseless_codec_violation_is_identity() {
    let spec = builtin(Builtin::CodecViolation(0.0));
    let d = sample(&spec, 200, 3).unwrap();
    let col = |name: &str| d.column(d.column_index(name).unwrap());
    assert_eq!(col("Y"), col("X3"));
}

#[test]
fn toml_round_trip() {
    for b in [Builtin::Example1, Builtin::Example2, Builtin::CodecViolation(0.3)] {
        let spec = builtin(b);
        let again = DagSpec::from_toml(&spec.to_toml()).unwrap();
        assert_eq!(again, spec);
    }
}

#[test]
fn cyclic_and_inconsistent_specs_are_rejected() {
    let cyc = "[[node]]\nname = \"A\"\nparents = [\"B\"]\nequation = \"(add B eps)\"\n\
               [[node]]\nname = \"B\"\nparents = [\"A\"]\nequation = \"(add A eps)\"\n";
    assert!(matches!(DagSpec::from_toml(cyc), Err(dagfoci_core::Error::Cyclic(_))));
    let stray = "[[node]]\nname = \"A\"\nequation = \"(add B eps)\"\n[[node]]\nname = \"B\"\nequation = \"eps\"\n";
    assert!(DagSpec::from_toml(stray).is_err());
}

#[test]
fn ground_truth_from_edges_isolated() {
    let gt = ground_truth_from_edges(3, &[(0, 1)]);
    assert!(gt.markov_boundary[2].is_empty() && gt.tree_neighborhood[2]);
}
