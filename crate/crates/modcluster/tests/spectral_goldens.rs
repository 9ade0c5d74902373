//! Spectrum goldens and threshold-rank behavior on known graphs.

mod common;

use common::{complete, cycle, petersen, random_graph};
use modcluster::generators::{clique_union, random_regular};
use modcluster::graph::{Graph, NodeSet};
use modcluster::spectral::{eigenvalues, threshold_rank, walk_matrix, ResidualView};

fn spectrum(g: &Graph) -> Vec<f64> {
    eigenvalues(&walk_matrix(&ResidualView::fresh(g).unwrap()))
}

#[test]
fn petersen_spectrum_and_rank() {
    let g = petersen();
    assert_eq!(g.is_regular(), Some(3));
    let vals = spectrum(&g);
    assert!((vals[0] - 1.0).abs() < 1e-9);
    for &v in &vals[1..6] {
        assert!((v - 1.0 / 3.0).abs() < 1e-9, "expected 1/3, got {v}");
    }
    for &v in &vals[6..10] {
        assert!((v + 2.0 / 3.0).abs() < 1e-9, "expected -2/3, got {v}");
    }
    let view = ResidualView::fresh(&g).unwrap();
    assert_eq!(threshold_rank(&view, 0.5), 5);
}

#[test]
fn rank_is_monotone_in_tau() {
    for g in [complete(4), clique_union(2, 4).unwrap(), petersen(), cycle(9)] {
        let view = ResidualView::fresh(&g).unwrap();
        let mut last = usize::MAX;
        for step in 0..20 {
            let tau = step as f64 * 0.999 / 19.0;
            let rank = threshold_rank(&view, tau);
            assert!(rank <= last, "rank increased from {last} to {rank} at tau={tau}");
            last = rank;
        }
    }
}

#[test]
fn near_one_tau_counts_components() {
    let cases: Vec<(Graph, usize)> = vec![
        (complete(4), 1),
        (clique_union(2, 4).unwrap(), 2),
        (clique_union(5, 4).unwrap(), 5),
        (petersen(), 1),
    ];
    for (g, components) in cases {
        let view = ResidualView::fresh(&g).unwrap();
        assert!(threshold_rank(&view, 1.0 - 1e-6) >= components);
    }
}

#[test]
fn low_tau_counts_every_nonnegligible_eigenvalue() {
    for g in [complete(5), petersen(), cycle(8)] {
        let vals = spectrum(&g);
        let nonzero: Vec<f64> =
            vals.iter().copied().filter(|v| v.abs() > 1e-7).collect();
        let min_mag = nonzero.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        let view = ResidualView::fresh(&g).unwrap();
        assert_eq!(threshold_rank(&view, (min_mag - 1e-6).max(0.0)), nonzero.len());
    }
}

#[test]
fn disjoint_union_spectrum_is_multiset_union() {
    // two 3-regular components of different shapes: K4 and the 3-prism
    let prism = Graph::from_edges(
        6,
        &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
    )
    .unwrap();
    let k4 = complete(4);
    let mut combined_edges: Vec<(u32, u32)> = k4.edges().to_vec();
    combined_edges.extend(prism.edges().iter().map(|&(u, v)| (u + 4, v + 4)));
    let union = Graph::from_edges(10, &combined_edges).unwrap();

    let mut expected: Vec<f64> = spectrum(&k4);
    expected.extend(spectrum(&prism));
    expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let got = spectrum(&union);
    assert_eq!(got.len(), expected.len());
    for (g_val, e_val) in got.iter().zip(expected.iter()) {
        assert!((g_val - e_val).abs() <= 1e-9, "{g_val} vs {e_val}");
    }
}

#[test]
fn eigenvalues_stay_in_the_stochastic_range() {
    for seed in 0..10u64 {
        let g = random_regular(12, 4, seed).unwrap();
        let vals = spectrum(&g);
        assert!((vals[0] - 1.0).abs() <= 1e-9);
        for &v in &vals {
            assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&v));
        }
    }
}

#[test]
fn reregularized_views_keep_row_sums_and_range() {
    let g = random_regular(14, 4, 3).unwrap();
    let removed = NodeSet::new(vec![0, 3, 7]).unwrap();
    let view = ResidualView::new(&g, &removed).unwrap();
    let w = walk_matrix(&view);
    for i in 0..w.order() {
        let row_sum: f64 = (0..w.order()).map(|j| w.matrix()[(i, j)]).sum();
        assert!((row_sum - 1.0).abs() <= 1e-12);
    }
    let vals = eigenvalues(&w);
    assert!((vals[0] - 1.0).abs() <= 1e-9);
    for &v in &vals {
        assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&v));
    }
}

#[test]
fn random_graph_walk_matrices_reject_irregular_bases() {
    for seed in 0..20u64 {
        let g = random_graph(9, 0.4, seed);
        match g.is_regular() {
            Some(_) => {
                ResidualView::fresh(&g).unwrap();
            }
            None => assert!(ResidualView::fresh(&g).is_err()),
        }
    }
}
