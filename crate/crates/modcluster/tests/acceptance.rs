//! Acceptance gate: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.
//! Criterion 9 carries a known-failing exact-optimum threshold; see the
//! assertion message there for the measured values.

mod common;

use common::{complete, petersen, random_clustering, random_graph, random_proper_subset};
use modcluster::distinguisher::{self, Decision};
use modcluster::generators::{
    clique_union, complement_3regular, matched_clique_union, random_regular,
};
use modcluster::graph::{Graph, NodeSet, TwoPartition};
use modcluster::metrics::{
    density, expansion, measure, modularity_clustering, modularity_set, two_cluster_objective,
};
use modcluster::oracle::{opt2_exact, opt_exact, sse_exact};
use modcluster::profile::ParamProfile;
use modcluster::spectral::{threshold_rank, ResidualView};
use modcluster::sse::{extract_partition, rank_condition_holds, size_window, sse_low_rank};
use std::time::Instant;

fn report(id: u32, name: &str, pass: bool) {
    println!("acceptance criterion {id:02} ({name}): {}", if pass { "PASS" } else { "FAIL" });
}

#[test]
fn criterion_01_formula_equivalence() {
    let started = Instant::now();
    let probs = [0.15, 0.3, 0.5, 0.8];
    let mut worst: f64 = 0.0;
    for i in 0..500u64 {
        let n = 4 + (i as usize % 29); // 4..=32
        let g = random_graph(n, probs[i as usize % probs.len()], i);
        let c = random_clustering(n, 6, i ^ 0xc1u64);
        let simplified = modularity_clustering(&g, &c).unwrap();
        let definitional: f64 =
            c.parts().iter().map(|p| modularity_set(&g, p).unwrap()).sum();
        worst = worst.max((simplified - definitional).abs());
    }
    let elapsed = started.elapsed();
    let pass = worst <= 1e-10 && elapsed.as_secs_f64() < 10.0;
    report(1, "formula equivalence", pass);
    assert!(worst <= 1e-10, "worst |delta| = {worst:e}");
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
}

#[test]
fn criterion_02_complement_lemma() {
    let mut worst: f64 = 0.0;
    for i in 0..1000u64 {
        let n = 4 + (i as usize % 21);
        let g = random_graph(n, 0.2 + 0.6 * ((i % 7) as f64 / 7.0), i);
        let side = random_proper_subset(n, i ^ 0xc2u64);
        let part = TwoPartition::from_side(n, side).unwrap();
        let a = modularity_set(&g, part.side_a()).unwrap();
        let b = modularity_set(&g, part.side_b()).unwrap();
        worst = worst.max((a - b).abs());
    }
    let pass = worst <= 1e-12;
    report(2, "complement lemma", pass);
    assert!(pass, "worst |M(S) - M(comp S)| = {worst:e}");
}

#[test]
fn criterion_03_regular_partition_identity() {
    let mut worst: f64 = 0.0;
    for (n, d) in [(8usize, 3usize), (10, 3), (12, 4), (14, 3), (16, 5), (18, 4)] {
        for seed in 0..4u64 {
            let g = match random_regular(n, d, seed) {
                Ok(g) => g,
                Err(_) => continue,
            };
            for s_seed in 0..8u64 {
                let s = random_proper_subset(n, 1000 * seed + s_seed);
                let part = TwoPartition::from_side(n, s.clone()).unwrap();
                let direct = modularity_clustering(&g, &part.to_clustering()).unwrap();
                let f =
                    two_cluster_objective(measure(&g, &s).unwrap(), density(&g, &s).unwrap());
                worst = worst.max((direct - f).abs());
            }
        }
    }
    let mut worst_sym: f64 = 0.0;
    for dd in 1..=10 {
        let dens = dd as f64 / 10.0;
        for dl in 1..=9 {
            let delta = dl as f64 * 0.05;
            let up = two_cluster_objective(dens / 2.0 + delta, dens);
            let down = two_cluster_objective(dens / 2.0 - delta, dens);
            worst_sym = worst_sym.max((up - down).abs());
        }
    }
    let pass = worst <= 1e-12 && worst_sym <= 1e-15;
    report(3, "regular 2-partition identity", pass);
    assert!(worst <= 1e-12, "worst identity gap {worst:e}");
    assert!(worst_sym <= 1e-15, "worst symmetry gap {worst_sym:e}");
}

#[test]
fn criterion_04_clique_union_optimum() {
    let started = Instant::now();
    let two = opt_exact(&clique_union(2, 4).unwrap()).unwrap();
    let elapsed_two = started.elapsed();
    let started = Instant::now();
    let three = opt_exact(&clique_union(3, 4).unwrap()).unwrap();
    let elapsed_three = started.elapsed();
    let pass = (two.value - 0.5).abs() <= 1e-12
        && (three.value - 2.0 / 3.0).abs() <= 1e-12
        && elapsed_two.as_secs() < 60
        && elapsed_three.as_secs() < 60;
    report(4, "clique-union optimum", pass);
    assert!((two.value - 0.5).abs() <= 1e-12, "k=2: {}", two.value);
    assert!((three.value - 2.0 / 3.0).abs() <= 1e-12, "k=3: {}", three.value);
    assert!(elapsed_two.as_secs() < 60 && elapsed_three.as_secs() < 60);
}

#[test]
fn criterion_05_reduction_inequality() {
    let mut checked = 0usize;
    let mut check = |g: &Graph, label: &str| {
        let opt = opt_exact(g).unwrap().value;
        let opt2 = opt2_exact(g).unwrap().value;
        assert!(opt >= 0.0, "{label}: negative optimum {opt}");
        assert!(opt + 1e-12 >= opt2, "{label}: OPT {opt} below OPT2 {opt2}");
        assert!(
            opt2 + 1e-12 >= opt / 2.0,
            "{label}: OPT2 {opt2} below OPT/2 with OPT {opt}"
        );
        checked += 1;
    };
    for i in 0..50u64 {
        let n = 4 + (i as usize % 6); // 4..=9
        let g = random_graph(n, 0.25 + 0.5 * ((i % 5) as f64 / 5.0), i ^ 0xc5u64);
        check(&g, &format!("random #{i}"));
    }
    check(&clique_union(2, 4).unwrap(), "clique_union(2,4)");
    check(&clique_union(3, 4).unwrap(), "clique_union(3,4)");
    check(&matched_clique_union(2, 4, 0).unwrap(), "matched_clique_union(2,4)");
    check(&matched_clique_union(2, 6, 1).unwrap(), "matched_clique_union(2,6)");
    check(&matched_clique_union(3, 4, 2).unwrap(), "matched_clique_union(3,4)");
    for seed in 0..3u64 {
        check(&random_regular(10, 3, seed).unwrap(), &format!("random_regular(10,3,{seed})"));
        check(&random_regular(12, 3, seed).unwrap(), &format!("random_regular(12,3,{seed})"));
    }
    check(&complement_3regular(8, 0).unwrap(), "complement_3regular(8)");
    check(&complement_3regular(10, 1).unwrap(), "complement_3regular(10)");
    check(&complement_3regular(12, 2).unwrap(), "complement_3regular(12)");
    report(5, "reduction inequality", true);
    assert!(checked >= 50 + 11);
}

#[test]
fn criterion_06_threshold_rank_goldens() {
    let k4 = complete(4);
    let two_k4 = clique_union(2, 4).unwrap();
    let pet = petersen();
    let r_k4 = threshold_rank(&ResidualView::fresh(&k4).unwrap(), 0.5);
    let r_two = threshold_rank(&ResidualView::fresh(&two_k4).unwrap(), 0.5);
    let r_pet = threshold_rank(&ResidualView::fresh(&pet).unwrap(), 0.5);
    let mut monotone = true;
    for g in [&k4, &two_k4, &pet] {
        let view = ResidualView::fresh(g).unwrap();
        let mut last = usize::MAX;
        for step in 0..20 {
            let tau = step as f64 * 0.999 / 19.0;
            let rank = threshold_rank(&view, tau);
            monotone &= rank <= last;
            last = rank;
        }
    }
    let pass = r_k4 == 1 && r_two == 2 && r_pet == 5 && monotone;
    report(6, "threshold-rank goldens", pass);
    assert_eq!(r_k4, 1);
    assert_eq!(r_two, 2);
    assert_eq!(r_pet, 5);
    assert!(monotone);
}

#[test]
fn criterion_07_sse_contract_vs_oracle() {
    let started = Instant::now();
    let p = ParamProfile::desk();
    let mut graphs = Vec::new();
    for n in [8usize, 10, 12, 14] {
        graphs.extend(
            common::connected_regular_instances(5, n, 3)
                .into_iter()
                .map(|g| (n, g)),
        );
    }
    assert_eq!(graphs.len(), 20);
    let mut checks = 0usize;
    for (n, g) in &graphs {
        let view = ResidualView::fresh(g).unwrap();
        for s in 1..=(n / 2) {
            let res = sse_low_rank(&view, s, &p).unwrap();
            let (lo, hi) = size_window(s, *n, &p).unwrap();
            assert!(
                res.set.len() >= lo && res.set.len() <= hi,
                "size {} outside window [{lo}, {hi}] for target {s} on n={n}",
                res.set.len()
            );
            let oracle = sse_exact(g, lo, hi).unwrap();
            assert!(
                res.phi <= oracle.value + p.phi_slack + 1e-12,
                "phi {} above contract {} + {} for target {s} on n={n}",
                res.phi,
                oracle.value,
                p.phi_slack
            );
            checks += 1;
        }
    }
    let elapsed = started.elapsed();
    let pass = elapsed.as_secs_f64() < 300.0;
    report(7, "sse contract vs oracle", pass);
    assert!(checks >= 20 * 4);
    assert!(pass, "suite took {elapsed:?}");
}

#[test]
fn criterion_08_distinguisher_completeness() {
    let started = Instant::now();
    let g = clique_union(21, 4).unwrap();
    let p = ParamProfile::desk();
    let run = distinguisher::run(&g, &p).unwrap();
    let elapsed = started.elapsed();
    let cert_ok = match &run.certificate {
        Some(cert) => {
            // independent recomputation through the definitional route
            let side = NodeSet::new(cert.side_a.clone()).unwrap();
            let part = TwoPartition::from_side(g.n(), side).unwrap();
            let recomputed = modularity_set(&g, part.side_a()).unwrap()
                + modularity_set(&g, part.side_b()).unwrap();
            (recomputed - cert.f_value).abs() <= 1e-10 && recomputed > 0.05
        }
        None => false,
    };
    let pass = run.decision == Decision::High && cert_ok && elapsed.as_secs() < 60;
    report(8, "distinguisher completeness", pass);
    assert_eq!(run.decision, Decision::High);
    assert!(cert_ok, "certificate missing or not independently above eps");
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
}

#[test]
fn criterion_09_distinguisher_soundness() {
    let p = ParamProfile::desk();
    let mut all_low = true;
    let mut max_opt2: f64 = 0.0;
    let mut lines = Vec::new();
    for seed in 0..10u64 {
        let g = complement_3regular(24, seed).unwrap();
        let run = distinguisher::run(&g, &p).unwrap();
        let opt2 = opt2_exact(&g).unwrap().value;
        all_low &= run.decision == Decision::Low;
        max_opt2 = max_opt2.max(opt2);
        lines.push(format!(
            "  seed {seed}: decision {:?}, opt2 = {opt2:.6}",
            run.decision
        ));
        // soundness floor: no certificate can beat the exact optimum
        assert!(opt2 < p.eps, "seed {seed}: opt2 {opt2} reaches eps; instance not LOW");
        if let Some(f) = run.best_f {
            assert!(f <= opt2 + 1e-10, "seed {seed}: claimed {f} above exact opt2 {opt2}");
        }
    }
    let under_threshold = max_opt2 < 0.025;
    report(9, "distinguisher soundness", all_low && under_threshold);
    for line in &lines {
        println!("{line}");
    }
    assert!(all_low, "some instance was not declared LOW");
    assert!(
        under_threshold,
        "exact OPT2 reached {max_opt2:.6}, not below the stated 0.025 bound \
         (typical complement-of-cubic instances at n = 24 sit near 0.033 = \
         2*(maxbisection - n)/(n*(n-4)); the LOW decisions above still hold \
         because 0.05 is the relevant promise bound)"
    );
}

#[test]
fn criterion_10_parameter_bound_chains() {
    let p = ParamProfile::paper();
    let report_bounds = distinguisher::verify_paper_bounds(&p);
    let expected = [
        2.0 * 0.4599 * (0.919999 - 0.54),
        2.0 * 0.229 * (0.919998 - 0.27),
        2.0 * 0.24 * (0.99 - 0.51),
    ];
    let mut chains_ok = true;
    for (case, want) in report_bounds.cases.iter().zip(expected.iter()) {
        chains_ok &= (case.f_bound - want).abs() <= 1e-9 && case.f_bound > 1e-6;
    }
    let dstar = distinguisher::dstar_lower_bound(&p);
    let dstar_ok = (dstar - (1.0f64 - 1e-6).sqrt()).abs() <= 1e-12;
    let (mu_lo, _) = distinguisher::mu_feasible_range(&p);
    let mu_ok = mu_lo == 0.4995;
    let pass = chains_ok && dstar_ok && mu_ok;
    report(10, "parameter bound chains", pass);
    assert!(chains_ok, "bounds {:?}", report_bounds.cases);
    assert!(dstar_ok, "dstar = {dstar}");
    assert!(mu_ok, "mu lower bound = {mu_lo}");
}

#[test]
fn criterion_11_extraction_loop() {
    let p = ParamProfile::desk();
    let cases: Vec<(String, Graph)> = vec![
        ("clique_union(20,4)".into(), clique_union(20, 4).unwrap()),
        ("random_regular(200,4,0)".into(), random_regular(200, 4, 0).unwrap()),
        ("random_regular(120,3,1)".into(), random_regular(120, 3, 1).unwrap()),
        ("random_regular(60,3,2)".into(), random_regular(60, 3, 2).unwrap()),
    ];
    for (label, g) in &cases {
        let trace = extract_partition(g, &p).unwrap();
        assert!(trace.steps.len() <= g.n(), "{label}: too many steps");
        // post-hoc revalidation of every step in its own residual
        let mut removed = NodeSet::empty();
        for (part, step) in trace.parts.iter().zip(&trace.steps) {
            let view = ResidualView::new(g, &removed).unwrap();
            assert_eq!(view.order(), step.order_before, "{label}");
            let cap = ((view.order() as f64).powf(p.size_cap_exponent) - 1e-9).ceil() as usize;
            let cap = cap.clamp(1, view.order() - 1);
            assert!(part.len() <= cap, "{label}: size {} above cap {cap}", part.len());
            let phi = view.expansion_of(part).unwrap();
            assert!(
                phi <= p.extract_phi_budget,
                "{label}: phi {phi} above budget in its residual"
            );
            removed = removed.union(part).unwrap();
        }
        // the loop stopped because the rank condition failed
        let final_view = ResidualView::new(g, &removed).unwrap();
        let rank = threshold_rank(&final_view, p.tau_case);
        assert!(
            !rank_condition_holds(rank, final_view.order(), p.gamma),
            "{label}: final residual still satisfies the rank condition"
        );
        // coverage
        assert_eq!(removed.len() + trace.residual.len(), g.n(), "{label}");
    }
    report(11, "extraction loop", true);
}

#[test]
fn expansion_and_measure_error_paths_hold() {
    // supporting edge cases the criteria rely on
    let g = complete(4);
    assert!(measure(&g, &NodeSet::full(4)).is_err());
    assert!(expansion(&g, &NodeSet::empty()).is_err());
    assert!(modularity_set(&g, &NodeSet::full(4)).unwrap().abs() < 1e-15);
}
