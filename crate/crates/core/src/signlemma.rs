//! Exhaustive verification of the sign lemma over all admissible sign
//! assignments on the 56 lines.
//!
//! An admissible assignment gives each line a sign in {+1, -1} subject to
//! sign(A_i) != sign(D_i) and sign(B_ij) != sign(C_ij), so it is encoded by
//! 28 free bits: bits 0..6 carry sign(A_1..A_7) and bits 7..27 carry
//! sign(B_ij) in lexicographic order (bit set = +1). The lemma states: if
//! every conic bundle has either all six singular fibers sign-mixed or none,
//! then some bundle carries both a (+,+) fiber and a (-,-) fiber. Three
//! strategies scan the 2^28 space and must agree exactly: a naive scan, a
//! symmetry-reduced scan over canonical A-patterns, and direct enumeration by
//! DFS with unit propagation.

use crate::dp2::{self, ConicBundleRecord};
use crate::{Error, Result};
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::time::Instant;

pub const NUM_FREE_BITS: u32 = 28;
pub const ASSIGNMENT_MASK: u32 = (1 << NUM_FREE_BITS) - 1;
const A_MASK: u32 = 0x7f;

/// A total sign map on the 56 lines, 28-bit encoded. Signs of D_i and C_ij
/// are the negations of A_i and B_ij, so the pairing constraints hold by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignAssignment(pub u32);

impl SignAssignment {
    pub fn new(bits: u32) -> Self {
        SignAssignment(bits & ASSIGNMENT_MASK)
    }

    /// Bit position and polarity of a line in the canonical line order:
    /// the sign of the line is bit(position) xor negated.
    pub fn line_bit(line_index: usize) -> (u32, bool) {
        match line_index {
            0..=6 => (line_index as u32, false),            // A_i
            7..=27 => (line_index as u32, false),           // B_ij
            28..=48 => (line_index as u32 - 21, true),      // C_ij = -B_ij
            49..=55 => (line_index as u32 - 49, true),      // D_i = -A_i
            _ => panic!("line index out of range: {line_index}"),
        }
    }

    /// Sign of a line, +1 or -1.
    pub fn sign_of(&self, line_index: usize) -> i8 {
        let (bit, neg) = Self::line_bit(line_index);
        if (self.0 >> bit & 1 == 1) ^ neg {
            1
        } else {
            -1
        }
    }

    pub fn flipped(&self) -> Self {
        SignAssignment(self.0 ^ ASSIGNMENT_MASK)
    }

    /// Number of A-lines with sign +1.
    pub fn m(&self) -> u32 {
        (self.0 & A_MASK).count_ones()
    }

    /// Applies an index relabeling: `perm[i]` is the image of point i+1,
    /// acting simultaneously on the A and B bits.
    pub fn permuted(&self, perm: &[u8; 7]) -> Self {
        let mut out = 0u32;
        for i in 1..=7u8 {
            if self.0 >> (i - 1) & 1 == 1 {
                out |= 1 << (perm[i as usize - 1] - 1);
            }
        }
        for (i, j) in (1..=7u8).tuple_combinations() {
            if self.0 >> b_bit(i, j) & 1 == 1 {
                let (pi, pj) = (perm[i as usize - 1], perm[j as usize - 1]);
                out |= 1 << b_bit(pi.min(pj), pi.max(pj));
            }
        }
        SignAssignment(out)
    }
}

fn b_bit(i: u8, j: u8) -> u32 {
    debug_assert!(i < j);
    let (i, j) = (i as u32, j as u32);
    7 + (i - 1) * 7 - i * (i - 1) / 2 + (j - i - 1)
}

/// One singular fiber, prepared for bit arithmetic: the fiber is sign-mixed
/// iff parity(s & mask) != parity_flip, and when pure its common sign is
/// bit(first_bit) xor first_neg.
#[derive(Debug, Clone, Copy)]
pub struct FiberSig {
    mask: u32,
    parity_flip: bool,
    first_bit: u32,
    first_neg: bool,
}

/// The six fibers of one bundle in scan-ready form.
#[derive(Debug, Clone, Copy)]
pub struct BundleSig {
    fibers: [FiberSig; 6],
}

/// Precomputes the fiber signatures of the canonical 126 bundles.
pub fn bundle_signatures(bundles: &[ConicBundleRecord]) -> Vec<BundleSig> {
    bundles
        .iter()
        .map(|b| {
            let fibers: Vec<FiberSig> = b
                .singular_fibers
                .iter()
                .map(|&(p, q)| {
                    let (pb, pn) = SignAssignment::line_bit(p);
                    let (qb, qn) = SignAssignment::line_bit(q);
                    debug_assert_ne!(pb, qb);
                    FiberSig {
                        mask: (1 << pb) | (1 << qb),
                        parity_flip: pn ^ qn,
                        first_bit: pb,
                        first_neg: pn,
                    }
                })
                .collect();
            BundleSig {
                fibers: fibers.try_into().expect("6 fibers"),
            }
        })
        .collect()
}

#[inline]
fn fiber_mixed(s: u32, f: &FiberSig) -> bool {
    ((s & f.mask).count_ones() & 1 == 1) ^ f.parity_flip
}

#[inline]
fn fiber_sign_positive(s: u32, f: &FiberSig) -> bool {
    (s >> f.first_bit & 1 == 1) ^ f.first_neg
}

/// Per-bundle counts (n_mixed, n_plusplus, n_minusminus) over the 6 fibers.
pub fn mixed_profile(s: SignAssignment, sigs: &[BundleSig]) -> Vec<(u8, u8, u8)> {
    sigs.iter()
        .map(|b| {
            let mut counts = (0u8, 0u8, 0u8);
            for f in &b.fibers {
                if fiber_mixed(s.0, f) {
                    counts.0 += 1;
                } else if fiber_sign_positive(s.0, f) {
                    counts.1 += 1;
                } else {
                    counts.2 += 1;
                }
            }
            counts
        })
        .collect()
}

/// True iff every bundle has all-mixed or all-pure fibers.
pub fn is_hypothesis_satisfying(s: SignAssignment, sigs: &[BundleSig]) -> bool {
    sigs.iter().all(|b| {
        let first = fiber_mixed(s.0, &b.fibers[0]);
        b.fibers[1..].iter().all(|f| fiber_mixed(s.0, f) == first)
    })
}

/// Index of the first bundle (canonical order) carrying both a (+,+) and a
/// (-,-) fiber, if any.
pub fn conclusion_holds(s: SignAssignment, sigs: &[BundleSig]) -> Option<usize> {
    sigs.iter().position(|b| {
        let mut has_pp = false;
        let mut has_mm = false;
        for f in &b.fibers {
            if !fiber_mixed(s.0, f) {
                if fiber_sign_positive(s.0, f) {
                    has_pp = true;
                } else {
                    has_mm = true;
                }
            }
        }
        has_pp && has_mm
    })
}

fn all_permutations() -> Vec<[u8; 7]> {
    (1..=7u8)
        .permutations(7)
        .map(|p| p.try_into().expect("length 7"))
        .collect()
}

/// Lexicographically least bit pattern over the orbit of `s` under index
/// relabeling and global flip. Returns the canonical form together with a
/// relabeling and flip realizing it.
pub fn canonicalize(s: SignAssignment) -> (SignAssignment, [u8; 7], bool) {
    let mut best = (s, [1, 2, 3, 4, 5, 6, 7], false);
    for perm in all_permutations() {
        for flip in [false, true] {
            let base = if flip { s.flipped() } else { s };
            let image = base.permuted(&perm);
            if image.0 < best.0 .0 {
                best = (image, perm, flip);
            }
        }
    }
    best
}

fn orbit_size(s: SignAssignment) -> u64 {
    let mut orbit = BTreeSet::new();
    for perm in all_permutations() {
        for flip in [false, true] {
            let base = if flip { s.flipped() } else { s };
            orbit.insert(base.permuted(&perm).0);
        }
    }
    orbit.len() as u64
}

/// Scan strategies. All must report identical counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Naive,
    SymmetryReduced,
    Propagation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representative {
    /// Canonical 28-bit encoding.
    pub assignment: u32,
    pub orbit_size: u64,
    /// Witness bundle index in canonical order, or None on a conclusion
    /// failure.
    pub witness_bundle: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub strategy: Strategy,
    pub slice: Option<u32>,
    pub total_scanned: u64,
    pub hypothesis_satisfying: u64,
    pub conclusion_failures: u64,
    pub representatives: Vec<Representative>,
    pub wall_time_ms: u128,
}

fn binomial7(m: u32) -> u64 {
    const C: [u64; 8] = [1, 7, 21, 35, 35, 21, 7, 1];
    C[m as usize]
}

struct ShardResult {
    scanned: u64,
    satisfying: Vec<u32>,
}

/// Scans all B-patterns over a fixed A-pattern.
fn scan_a_pattern(a_bits: u32, sigs: &[BundleSig]) -> ShardResult {
    let mut satisfying = Vec::new();
    for b in 0u32..1 << 21 {
        let s = a_bits | b << 7;
        if is_hypothesis_satisfying(SignAssignment(s), sigs) {
            satisfying.push(s);
        }
    }
    ShardResult {
        scanned: 1 << 21,
        satisfying,
    }
}

fn finish_report(
    strategy: Strategy,
    slice: Option<u32>,
    total_scanned: u64,
    weighted: Vec<(u32, u64)>,
    sigs: &[BundleSig],
    started: Instant,
) -> VerificationReport {
    let mut hypothesis_satisfying = 0u64;
    let mut conclusion_failures = 0u64;
    let mut reps: BTreeSet<u32> = BTreeSet::new();
    for &(s, weight) in &weighted {
        hypothesis_satisfying += weight;
        if conclusion_holds(SignAssignment(s), sigs).is_none() {
            conclusion_failures += weight;
        }
        reps.insert(canonicalize(SignAssignment(s)).0 .0);
    }
    let representatives = reps
        .into_iter()
        .map(|bits| {
            let s = SignAssignment(bits);
            Representative {
                assignment: bits,
                orbit_size: orbit_size(s),
                witness_bundle: conclusion_holds(s, sigs),
            }
        })
        .collect();
    VerificationReport {
        strategy,
        slice,
        total_scanned,
        hypothesis_satisfying,
        conclusion_failures,
        representatives,
        wall_time_ms: started.elapsed().as_millis(),
    }
}

/// Scans the assignment space with the given strategy. `parallelism` bounds
/// the worker count; `slice` restricts to assignments with exactly m
/// positive A-signs.
pub fn verify_lemma(
    strategy: Strategy,
    parallelism: usize,
    slice: Option<u32>,
) -> Result<VerificationReport> {
    if let Some(m) = slice {
        if m > 7 {
            return Err(Error::IndexOutOfRange(m as usize));
        }
    }
    let started = Instant::now();
    let bundles = dp2::enumerate_conic_bundles()?;
    let sigs = bundle_signatures(&bundles);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::Inconsistency(format!("thread pool: {e}")))?;

    let report = match strategy {
        Strategy::Naive => {
            let a_patterns: Vec<u32> = (0u32..128)
                .filter(|a| slice.map_or(true, |m| a.count_ones() == m))
                .collect();
            let shards: Vec<ShardResult> = pool.install(|| {
                a_patterns
                    .par_iter()
                    .map(|&a| scan_a_pattern(a, &sigs))
                    .collect()
            });
            let total: u64 = shards.iter().map(|r| r.scanned).sum();
            let weighted: Vec<(u32, u64)> = shards
                .iter()
                .flat_map(|r| r.satisfying.iter().map(|&s| (s, 1)))
                .collect();
            finish_report(strategy, slice, total, weighted, &sigs, started)
        }
        Strategy::SymmetryReduced => {
            // One canonical A-pattern per relabeling orbit; the flip pairs
            // the m and 7-m orbits, so only m >= 4 is scanned directly.
            let ms: Vec<u32> = match slice {
                Some(m) => vec![m],
                None => (0..=7).collect(),
            };
            let scanned_ms: Vec<u32> = ms
                .iter()
                .copied()
                .filter(|&m| m >= 4 || !ms.contains(&(7 - m)))
                .collect();
            let shard_results: Vec<(u32, ShardResult)> = pool.install(|| {
                scanned_ms
                    .par_iter()
                    .map(|&m| {
                        let a_bits = (1u32 << m) - 1;
                        (m, scan_a_pattern(a_bits, &sigs))
                    })
                    .collect()
            });
            let mut total = 0u64;
            let mut weighted = Vec::new();
            for &m in &ms {
                let source = if shard_results.iter().any(|(sm, _)| *sm == m) {
                    m
                } else {
                    7 - m
                };
                let (_, result) = shard_results
                    .iter()
                    .find(|(sm, _)| *sm == source)
                    .expect("scanned slice");
                total += result.scanned * binomial7(m);
                for &s in &result.satisfying {
                    // Mirror flipped solutions back into the requested slice.
                    let rep = if source == m {
                        s
                    } else {
                        SignAssignment(s).flipped().0
                    };
                    weighted.push((rep, binomial7(m)));
                }
            }
            finish_report(strategy, slice, total, weighted, &sigs, started)
        }
        Strategy::Propagation => {
            let solutions = enumerate_by_propagation(&sigs);
            let weighted: Vec<(u32, u64)> = solutions
                .into_iter()
                .filter(|&s| slice.map_or(true, |m| SignAssignment(s).m() == m))
                .map(|s| (s, 1))
                .collect();
            let total = match slice {
                None => 1 << NUM_FREE_BITS,
                Some(m) => binomial7(m) * (1 << 21),
            };
            finish_report(strategy, slice, total, weighted, &sigs, started)
        }
    };
    Ok(report)
}

/// Runs all three strategies and checks they agree exactly. On disagreement
/// the error carries a minimal disagreeing assignment.
pub fn verify_lemma_cross_check(
    parallelism: usize,
    slice: Option<u32>,
) -> Result<[VerificationReport; 3]> {
    let naive = verify_lemma(Strategy::Naive, parallelism, slice)?;
    let reduced = verify_lemma(Strategy::SymmetryReduced, parallelism, slice)?;
    let propagation = verify_lemma(Strategy::Propagation, parallelism, slice)?;
    for other in [&reduced, &propagation] {
        if other.hypothesis_satisfying != naive.hypothesis_satisfying
            || other.conclusion_failures != naive.conclusion_failures
        {
            // The representative sets localize the disagreement.
            let a: BTreeSet<u32> = naive.representatives.iter().map(|r| r.assignment).collect();
            let b: BTreeSet<u32> = other.representatives.iter().map(|r| r.assignment).collect();
            let witness = a.symmetric_difference(&b).next().copied().unwrap_or(0);
            return Err(Error::Inconsistency(format!(
                "strategy {:?} disagrees with naive; minimal disagreeing assignment {:#x}",
                other.strategy, witness
            )));
        }
    }
    Ok([naive, reduced, propagation])
}

/// The per-bundle homogeneity constraints as affine GF(2) equations on the
/// 28 bits: within each bundle, fiber k and fiber 0 have equal mixedness.
fn homogeneity_equations(sigs: &[BundleSig]) -> Vec<(u32, bool)> {
    let mut eqs = BTreeSet::new();
    for b in sigs {
        let f0 = &b.fibers[0];
        for f in &b.fibers[1..] {
            let mask = f0.mask ^ f.mask;
            let c = f0.parity_flip ^ f.parity_flip;
            if mask == 0 {
                debug_assert!(!c);
                continue;
            }
            eqs.insert((mask, c));
        }
    }
    eqs.into_iter().collect()
}

/// DFS with unit propagation over the homogeneity constraints, enumerating
/// every hypothesis-satisfying assignment directly.
fn enumerate_by_propagation(sigs: &[BundleSig]) -> Vec<u32> {
    let eqs = homogeneity_equations(sigs);
    let mut solutions = Vec::new();
    dfs(&eqs, 0, 0, &mut solutions);
    solutions.sort_unstable();
    solutions
}

fn dfs(eqs: &[(u32, bool)], mut assigned: u32, mut values: u32, out: &mut Vec<u32>) {
    // Unit propagation to fixpoint.
    loop {
        let mut changed = false;
        for &(mask, c) in eqs {
            let unknown = mask & !assigned;
            let fixed_parity = (values & mask & assigned).count_ones() & 1 == 1;
            match unknown.count_ones() {
                0 => {
                    if fixed_parity != c {
                        return; // contradiction
                    }
                }
                1 => {
                    assigned |= unknown;
                    if fixed_parity != c {
                        values |= unknown;
                    }
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    if assigned == ASSIGNMENT_MASK {
        out.push(values);
        return;
    }
    let branch_bit = (!assigned & ASSIGNMENT_MASK).trailing_zeros();
    let bit = 1u32 << branch_bit;
    dfs(eqs, assigned | bit, values, out);
    dfs(eqs, assigned | bit, values | bit, out);
}
