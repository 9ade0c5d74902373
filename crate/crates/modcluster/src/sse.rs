//! Small-set-expansion solvers and the repeated-extraction partition.
//!
//! `sse_low_rank` finds a set of roughly a requested size with small
//! expansion: exhaustively when the view is small enough, otherwise by sweep
//! cuts over an enumerated net of the high-eigenvalue subspace.
//! `sse_high_rank_extract` finds one small low-expansion set in a view whose
//! threshold rank is large, and `extract_partition` applies it repeatedly,
//! re-regularizing the residual after each extraction, until the rank
//! condition fails.
//!
//! Both solvers are deterministic: candidate ties are broken by smaller
//! expansion, then smaller size, then lexicographic node order, and all
//! expansion comparisons are done in integer arithmetic.

use crate::graph::{Graph, NodeSet};
use crate::profile::ParamProfile;
use crate::spectral::{
    eigenpairs, threshold_rank_of_spectrum, walk_matrix, ResidualView, SpectralError,
    EIG_BOUNDARY_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SseError {
    #[error("target size {s_target} invalid for view of order {r} (need 1 <= s <= r/2)")]
    InvalidTarget { s_target: usize, r: usize },
    #[error("size window [{lo}, {hi}] is empty for view of order {r}")]
    EmptyWindow { lo: usize, hi: usize, r: usize },
    #[error("exhaustive search over {r} nodes exceeds the enumeration budget")]
    BudgetExceeded { r: usize },
    #[error(
        "high-rank precondition failed: rank {rank} < {needed:.3} (= r^gamma with r = {r})"
    )]
    RankPrecondition { rank: usize, r: usize, needed: f64 },
    #[error(
        "no subset of size <= {cap} met the expansion budget {budget} in a view of order {r}"
    )]
    NoQualifyingSet { r: usize, cap: usize, budget: f64 },
    #[error("extraction failed at step {step}: {source}")]
    ExtractionFailed {
        step: usize,
        partial: Box<ExtractionTrace>,
        #[source]
        source: Box<SseError>,
    },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// How a solver arrived at its set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SseMethod {
    Exhaustive,
    SubspaceEnumeration,
    Sweep,
}

/// A solver answer: the set, its expansion recomputed from scratch, and the
/// search strategy that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SseResult {
    pub set: NodeSet,
    pub phi: f64,
    pub method: SseMethod,
}

/// One step of the extraction loop, recorded against the residual it ran in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractStep {
    /// Surviving node count before this extraction.
    pub order_before: usize,
    /// Threshold rank (at tau_case) before this extraction.
    pub rank_before: usize,
    /// Size cap that was in force.
    pub size_cap: usize,
    pub extracted_size: usize,
    pub phi: f64,
}

/// Ordered extracted parts T_1..T_k plus the surviving residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionTrace {
    pub parts: Vec<NodeSet>,
    pub residual: NodeSet,
    pub steps: Vec<ExtractStep>,
}

impl ExtractionTrace {
    /// Union of the extracted parts, in extraction order.
    pub fn extracted_union(&self) -> NodeSet {
        let mut all = NodeSet::empty();
        for p in &self.parts {
            all = all.union(p).expect("extracted parts are disjoint");
        }
        all
    }
}

fn ceil_guarded(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

fn floor_guarded(x: f64) -> usize {
    ((x + 1e-9).floor().max(0.0)) as usize
}

/// Whether `rank >= r^gamma`, with a small slack so borderline powf noise
/// cannot flip the comparison.
pub fn rank_condition_holds(rank: usize, r: usize, gamma: f64) -> bool {
    rank as f64 + 1e-9 >= (r as f64).powf(gamma)
}

/// Integral size window for a target size: the integer range whose members
/// satisfy `lo_slack * s <= |S| <= hi_slack * s`, clamped to [1, r-1].
/// Always contains `s` itself when the preconditions hold.
pub fn size_window(s_target: usize, r: usize, p: &ParamProfile) -> Result<(usize, usize), SseError> {
    let lo = ceil_guarded(p.size_slack_lo * s_target as f64).max(1);
    let hi = floor_guarded(p.size_slack_hi * s_target as f64).min(r.saturating_sub(1));
    if lo > hi {
        return Err(SseError::EmptyWindow { lo, hi, r });
    }
    Ok((lo, hi))
}

/// Candidate scored in exact integer arithmetic: expansion is
/// `cut / (d * size)`, so candidates compare by cross-multiplication.
#[derive(Debug, Clone, Copy)]
struct MaskCandidate {
    cut: u64,
    size: u32,
    mask: u64,
}

impl MaskCandidate {
    fn better_than(&self, other: &MaskCandidate) -> bool {
        let a = self.cut * other.size as u64;
        let b = other.cut * self.size as u64;
        if a != b {
            return a < b;
        }
        if self.size != other.size {
            return self.size < other.size;
        }
        let x = self.mask ^ other.mask;
        if x == 0 {
            return false;
        }
        // the set holding the smallest differing node is lexicographically first
        self.mask & (x & x.wrapping_neg()) != 0
    }
}

/// Adjacency bitmasks over survivor indices (residual edges only).
fn view_masks(view: &ResidualView<'_>) -> Vec<u64> {
    let survivors = view.survivors();
    let mut index = std::collections::HashMap::with_capacity(survivors.len());
    for (i, &v) in survivors.iter().enumerate() {
        index.insert(v, i);
    }
    survivors
        .iter()
        .map(|&v| {
            view.surviving_neighbors(v).fold(0u64, |acc, w| acc | (1u64 << index[&w]))
        })
        .collect()
}

fn mask_to_set(view: &ResidualView<'_>, mask: u64) -> NodeSet {
    let survivors = view.survivors();
    let members: Vec<u32> =
        (0..survivors.len()).filter(|&i| mask & (1 << i) != 0).map(|i| survivors[i]).collect();
    NodeSet::new(members).expect("mask bits are distinct")
}

/// Finds a set whose size lies in the window around `s_target` with
/// near-minimal expansion. Exhaustive below the `n_exact` cutoff, otherwise
/// an enumerated subspace net of sweep cuts.
pub fn sse_low_rank(
    view: &ResidualView<'_>,
    s_target: usize,
    p: &ParamProfile,
) -> Result<SseResult, SseError> {
    let r = view.order();
    if s_target == 0 || s_target > r / 2 {
        return Err(SseError::InvalidTarget { s_target, r });
    }
    let (lo, hi) = size_window(s_target, r, p)?;
    if r <= p.n_exact {
        exhaustive_min_expansion(view, lo, hi).map(|(set, phi)| SseResult {
            set,
            phi,
            method: SseMethod::Exhaustive,
        })
    } else {
        subspace_sweep(view, lo, hi, p).map(|(set, phi)| SseResult {
            set,
            phi,
            method: SseMethod::SubspaceEnumeration,
        })
    }
}

fn exhaustive_min_expansion(
    view: &ResidualView<'_>,
    lo: usize,
    hi: usize,
) -> Result<(NodeSet, f64), SseError> {
    let r = view.order();
    if r > 26 {
        return Err(SseError::BudgetExceeded { r });
    }
    let masks = view_masks(view);
    let best = (1u64..(1u64 << r))
        .into_par_iter()
        .filter_map(|mask| {
            let size = mask.count_ones();
            if (size as usize) < lo || (size as usize) > hi {
                return None;
            }
            let mut cut = 0u64;
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                cut += (masks[i] & !mask).count_ones() as u64;
            }
            Some(MaskCandidate { cut, size, mask })
        })
        .reduce_with(|a, b| if b.better_than(&a) { b } else { a })
        .ok_or(SseError::EmptyWindow { lo, hi, r })?;
    let set = mask_to_set(view, best.mask);
    let phi = view.expansion_of(&set)?;
    Ok((set, phi))
}

/// Sweep state shared by the subspace and extraction paths. Walks one node
/// ordering, keeping the running cut size, and offers each prefix in
/// [lo, hi] to the caller.
fn sweep_prefixes<F: FnMut(usize, u64, &[usize])>(
    view: &ResidualView<'_>,
    order: &[usize],
    neighbor_idx: &[Vec<usize>],
    lo: usize,
    hi: usize,
    mut offer: F,
) {
    let r = view.order();
    let mut in_prefix = vec![false; r];
    let mut prefix = Vec::with_capacity(hi);
    let mut cut: i64 = 0;
    for (pos, &i) in order.iter().enumerate() {
        let mut inside = 0i64;
        for &j in &neighbor_idx[i] {
            if in_prefix[j] {
                inside += 1;
            }
        }
        let deg = neighbor_idx[i].len() as i64;
        cut += deg - 2 * inside;
        in_prefix[i] = true;
        prefix.push(i);
        let size = pos + 1;
        if size > hi {
            break;
        }
        if size >= lo {
            offer(size, cut as u64, &prefix);
        }
    }
}

fn survivor_neighbor_indices(view: &ResidualView<'_>) -> Vec<Vec<usize>> {
    let survivors = view.survivors();
    let mut index = std::collections::HashMap::with_capacity(survivors.len());
    for (i, &v) in survivors.iter().enumerate() {
        index.insert(v, i);
    }
    survivors
        .iter()
        .map(|&v| view.surviving_neighbors(v).map(|w| index[&w]).collect())
        .collect()
}

/// Candidate tracked by (cut, size, members); same tie-break as the mask
/// comparator but on explicit member lists.
#[derive(Debug, Clone)]
struct SweepCandidate {
    cut: u64,
    size: usize,
    members: Vec<usize>, // survivor indices, sorted
}

impl SweepCandidate {
    fn better_than(&self, other: &SweepCandidate) -> bool {
        let a = self.cut as u128 * other.size as u128;
        let b = other.cut as u128 * self.size as u128;
        if a != b {
            return a < b;
        }
        if self.size != other.size {
            return self.size < other.size;
        }
        self.members < other.members
    }
}

fn subspace_sweep(
    view: &ResidualView<'_>,
    lo: usize,
    hi: usize,
    p: &ParamProfile,
) -> Result<(NodeSet, f64), SseError> {
    let r = view.order();
    let (vals, vecs) = eigenpairs(&walk_matrix(view));
    let mut basis: Vec<usize> =
        (0..r).filter(|&i| vals[i] >= p.tau_case - EIG_BOUNDARY_TOL).collect();
    if basis.is_empty() {
        basis.push(0);
    }
    let q = basis.len();
    let neighbor_idx = survivor_neighbor_indices(view);

    // directions: every nonzero {-1,0,1} combination over (the first eight
    // of) the basis vectors, single +/- basis vectors past that, and a
    // seeded batch of dense coefficient vectors when the space is wide.
    let mut directions: Vec<Vec<f64>> = Vec::new();
    let qc = q.min(8);
    let mut coeffs = vec![0i32; qc];
    'combo: loop {
        if coeffs.iter().any(|&c| c != 0) {
            let mut x = vec![0.0; r];
            for (ci, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    let col = vecs.column(basis[ci]);
                    for i in 0..r {
                        x[i] += c as f64 * col[i];
                    }
                }
            }
            directions.push(x);
        }
        for slot in coeffs.iter_mut() {
            if *slot < 1 {
                *slot += 1;
                continue 'combo;
            }
            *slot = -1;
        }
        break;
    }
    for &b in basis.iter().skip(8) {
        for sign in [1.0, -1.0] {
            let col = vecs.column(b);
            directions.push((0..r).map(|i| sign * col[i]).collect());
        }
    }
    if q > 8 {
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        for _ in 0..128 {
            let c: Vec<f64> = (0..q).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let mut x = vec![0.0; r];
            for (ci, &b) in basis.iter().enumerate() {
                let col = vecs.column(b);
                for i in 0..r {
                    x[i] += c[ci] * col[i];
                }
            }
            directions.push(x);
        }
    }

    let mut best: Option<SweepCandidate> = None;
    for x in &directions {
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&a, &b| {
            x[b].partial_cmp(&x[a]).unwrap().then_with(|| a.cmp(&b))
        });
        sweep_prefixes(view, &order, &neighbor_idx, lo, hi, |size, cut, prefix| {
            let mut members = prefix.to_vec();
            members.sort_unstable();
            let cand = SweepCandidate { cut, size, members };
            if best.as_ref().is_none_or(|cur| cand.better_than(cur)) {
                best = Some(cand);
            }
        });
    }
    let best = best.ok_or(SseError::EmptyWindow { lo, hi, r })?;
    let survivors = view.survivors();
    let set = NodeSet::new(best.members.iter().map(|&i| survivors[i]).collect())
        .expect("sweep prefix members are distinct");
    let phi = view.expansion_of(&set)?;
    Ok((set, phi))
}

/// In a view whose threshold rank at `tau_extract` is at least `r^gamma`,
/// finds a proper subset of at most `ceil(r^size_cap_exponent)` survivors
/// whose view expansion meets the extraction budget. Every eigenvector
/// beyond the rank threshold is swept in both orientations; each sweep
/// accepts its first prefix meeting the budget, and the accepted candidates
/// tie-break by smaller expansion, then smaller size, then lexicographic
/// node order. Failure to find any qualifying prefix is reported, never
/// papered over.
pub fn sse_high_rank_extract(
    view: &ResidualView<'_>,
    p: &ParamProfile,
) -> Result<SseResult, SseError> {
    let r = view.order();
    let (vals, vecs) = eigenpairs(&walk_matrix(view));
    let rank = threshold_rank_of_spectrum(&vals, p.tau_extract);
    if !rank_condition_holds(rank, r, p.gamma) {
        return Err(SseError::RankPrecondition {
            rank,
            r,
            needed: (r as f64).powf(p.gamma),
        });
    }
    let cap = ceil_guarded((r as f64).powf(p.size_cap_exponent)).clamp(1, r.saturating_sub(1));
    let neighbor_idx = survivor_neighbor_indices(view);
    let d = view.d() as u64;

    let mut best: Option<SweepCandidate> = None;
    for col_idx in 0..rank {
        for sign in [1.0f64, -1.0] {
            let col = vecs.column(col_idx);
            let x: Vec<f64> = (0..r).map(|i| sign * col[i]).collect();
            let mut order: Vec<usize> = (0..r).collect();
            order.sort_by(|&a, &b| x[b].partial_cmp(&x[a]).unwrap().then_with(|| a.cmp(&b)));
            let mut accepted = None;
            sweep_prefixes(view, &order, &neighbor_idx, 1, cap, |size, cut, prefix| {
                if accepted.is_some() {
                    return;
                }
                // budget check in integers: cut/(d*size) <= budget
                if cut as f64 > p.extract_phi_budget * (d * size as u64) as f64 {
                    return;
                }
                let mut members = prefix.to_vec();
                members.sort_unstable();
                accepted = Some(SweepCandidate { cut, size, members });
            });
            if let Some(cand) = accepted {
                if best.as_ref().is_none_or(|cur| cand.better_than(cur)) {
                    best = Some(cand);
                }
            }
        }
    }
    let best = best.ok_or(SseError::NoQualifyingSet {
        r,
        cap,
        budget: p.extract_phi_budget,
    })?;
    let survivors = view.survivors();
    let set = NodeSet::new(best.members.iter().map(|&i| survivors[i]).collect())
        .expect("sweep prefix members are distinct");
    let phi = view.expansion_of(&set)?;
    Ok(SseResult { set, phi, method: SseMethod::Sweep })
}

/// Repeatedly extracts high-rank parts: while the re-regularized residual
/// satisfies the rank condition at `tau_case`, pull out one low-expansion
/// set and remove it. Terminates with the ordered parts and the residual
/// that finally failed the condition.
pub fn extract_partition(g: &Graph, p: &ParamProfile) -> Result<ExtractionTrace, SseError> {
    let mut removed = NodeSet::empty();
    let mut parts: Vec<NodeSet> = Vec::new();
    let mut steps: Vec<ExtractStep> = Vec::new();
    loop {
        if removed.len() >= g.n() {
            break;
        }
        let view = ResidualView::new(g, &removed)?;
        let r = view.order();
        let vals = crate::spectral::eigenvalues(&walk_matrix(&view));
        let rank = threshold_rank_of_spectrum(&vals, p.tau_case);
        if !rank_condition_holds(rank, r, p.gamma) {
            break;
        }
        let cap = ceil_guarded((r as f64).powf(p.size_cap_exponent)).clamp(1, r.saturating_sub(1));
        match sse_high_rank_extract(&view, p) {
            Ok(result) => {
                steps.push(ExtractStep {
                    order_before: r,
                    rank_before: rank,
                    size_cap: cap,
                    extracted_size: result.set.len(),
                    phi: result.phi,
                });
                removed = removed.union(&result.set).expect("extracted set is disjoint");
                parts.push(result.set);
            }
            Err(source) => {
                let partial = ExtractionTrace {
                    parts: parts.clone(),
                    residual: removed.complement_in(g.n()),
                    steps: steps.clone(),
                };
                return Err(SseError::ExtractionFailed {
                    step: parts.len() + 1,
                    partial: Box::new(partial),
                    source: Box::new(source),
                });
            }
        }
    }
    Ok(ExtractionTrace { parts, residual: removed.complement_in(g.n()), steps })
}
