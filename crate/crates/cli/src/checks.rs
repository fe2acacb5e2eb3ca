//! The `check-all` verification battery: every finite claim the engine can
//! certify, as a pass/fail table keyed by a human-readable claim string.

use amsolid_core::amcycles::{
    anticanonical_degree, build_am_relation_system, named_class, TorsionSolveReport,
};
use amsolid_core::enriques::{
    chi, enumerate_decompositions, linear_system_dim, DecompositionConstraint, LinearSystemDim,
};
use amsolid_core::lattice::{
    amx_anticanonical, amx_divisor_curve_pairing, amx_triple_table, dp2_picard,
};
use amsolid_core::signlemma::{
    bundle_signatures, is_hypothesis_satisfying, verify_lemma, SignAssignment, Strategy,
};
use amsolid_core::dp2;
use serde_json::{json, Value};

struct CheckRow {
    claim: &'static str,
    passed: bool,
    detail: String,
}

fn check(claim: &'static str, result: anyhow::Result<String>) -> CheckRow {
    match result {
        Ok(detail) => CheckRow {
            claim,
            passed: true,
            detail,
        },
        Err(e) => CheckRow {
            claim,
            passed: false,
            detail: format!("{e:#}"),
        },
    }
}

macro_rules! ensure_eq {
    ($left:expr, $right:expr, $what:expr) => {
        anyhow::ensure!(
            $left == $right,
            "{}: expected {:?}, got {:?}",
            $what,
            $right,
            $left
        )
    };
}

fn check_lines() -> anyhow::Result<String> {
    let lines = dp2::enumerate_lines()?;
    ensure_eq!(lines.len(), 56, "line count");
    let count = |f: dp2::Family| lines.iter().filter(|t| t.family == f).count();
    ensure_eq!(
        (count(dp2::Family::A), count(dp2::Family::B), count(dp2::Family::C), count(dp2::Family::D)),
        (7, 21, 21, 7),
        "family partition"
    );
    let brute = dp2::line_classes_brute_force(7);
    ensure_eq!(brute.len(), 56, "brute-force line count");
    Ok("56 = 7 + 21 + 21 + 7, formulas agree with lattice search".into())
}

fn check_bundles() -> anyhow::Result<String> {
    let bundles = dp2::enumerate_conic_bundles()?;
    ensure_eq!(bundles.len(), 126, "bundle count");
    let count = |ty: dp2::BundleType| bundles.iter().filter(|b| b.bundle_type == ty).count();
    ensure_eq!(
        (count(dp2::BundleType::I), count(dp2::BundleType::II), count(dp2::BundleType::III),
         count(dp2::BundleType::IV), count(dp2::BundleType::V)),
        (7, 35, 42, 35, 7),
        "type partition"
    );
    for b in &bundles {
        ensure_eq!(b.singular_fibers.len(), 6, "singular fiber count");
    }
    Ok("126 = 7 + 35 + 42 + 35 + 7, six singular fibers each".into())
}

fn check_sign_lemma(full: bool, shards: usize) -> anyhow::Result<String> {
    let strategy = if full {
        Strategy::Naive
    } else {
        Strategy::SymmetryReduced
    };
    let r = verify_lemma(strategy, shards, None)?;
    ensure_eq!(r.total_scanned, 1u64 << 28, "scan size");
    ensure_eq!(r.conclusion_failures, 0, "conclusion failures");
    let p = verify_lemma(Strategy::Propagation, shards, None)?;
    ensure_eq!(
        p.hypothesis_satisfying,
        r.hypothesis_satisfying,
        "strategy agreement"
    );
    Ok(format!(
        "2^28 assignments, {} satisfy the homogeneity hypothesis, all carry a (+,+)/(-,-) bundle",
        r.hypothesis_satisfying
    ))
}

fn check_slices(shards: usize) -> anyhow::Result<String> {
    let sigs = bundle_signatures(&dp2::enumerate_conic_bundles()?);
    let all_b = ((1u32 << 21) - 1) << 7;
    let mut found = 0u32;
    for b in 0u32..1 << 21 {
        let s = SignAssignment(0x7f | b << 7);
        if is_hypothesis_satisfying(s, &sigs) {
            let bits = s.0 & all_b;
            anyhow::ensure!(
                bits == 0 || bits == all_b,
                "m=7 assignment {:#x} has mixed B-signs",
                s.0
            );
            found += 1;
        }
    }
    anyhow::ensure!(found > 0, "m=7 slice has no satisfying assignment");
    for m in 2..=6u32 {
        let r = verify_lemma(Strategy::SymmetryReduced, shards, Some(m))?;
        ensure_eq!(r.conclusion_failures, 0, format!("slice m={m}"));
    }
    Ok("m=7 forces equal B-signs; slices m=2..6 are failure-free".into())
}

fn check_intersections() -> anyhow::Result<String> {
    let minus_k = amx_anticanonical();
    let cube = amx_triple_table().triple(&minus_k, &minus_k, &minus_k)?;
    ensure_eq!(cube, -4, "anticanonical cube");
    let pairing = amx_divisor_curve_pairing();
    for i in 1..=10 {
        let e = named_class(&format!("e_{i}"))?;
        ensure_eq!(pairing.pair(&minus_k, &e)?, 1, format!("(-K).e_{i}"));
    }
    for i in 1..=10 {
        for j in 1..=10 {
            if i != j {
                let l = named_class(&format!("l_{{{i},{j}}}"))?;
                ensure_eq!(anticanonical_degree(&l)?, 0, format!("deg l_{{{i},{j}}}"));
            }
        }
    }
    Ok("(-K)^3 = 16 - 20 = -4; (-K).e_i = 1; deg l_ij = 0".into())
}

fn check_torsion() -> anyhow::Result<String> {
    let report = build_am_relation_system().solve()?;
    let TorsionSolveReport::Consistent {
        forced_consequences,
        ..
    } = &report
    else {
        anyhow::bail!("relation system is inconsistent");
    };
    let forced = |a: String, b: String| {
        forced_consequences
            .iter()
            .any(|f| f.rhs == 1 && f.terms == vec![a.clone(), b.clone()])
    };
    for j in 1..=10 {
        anyhow::ensure!(
            forced(format!("t(e_{j}^+)"), format!("t(e_{j}^-)")),
            "e_{j} sign pair not forced"
        );
    }
    for i in 1..=10u8 {
        for j in i + 1..=10 {
            anyhow::ensure!(
                forced(format!("t(l_{{{i},{j}}}^+)"), format!("t(l_{{{i},{j}}}^-)")),
                "l_{{{i},{j}}} sign pair not forced"
            );
        }
    }
    Ok("system consistent; all e_j and l_ij sign pairs forced distinct".into())
}

fn check_enriques() -> anyhow::Result<String> {
    let strict = enumerate_decompositions(&DecompositionConstraint {
        total_square: 10,
        num_parts: 2,
        min_part_square: 4,
        min_cross: 1,
    })?;
    ensure_eq!(strict.len(), 1, "strict decomposition count");
    ensure_eq!(strict[0].part_squares.as_slice(), &[4, 4], "part squares");
    ensure_eq!(strict[0].cross_terms.as_slice(), &[1], "cross term");
    ensure_eq!(chi(10)?, 6, "chi(10)");
    ensure_eq!(linear_system_dim(10)?, LinearSystemDim::Exact(5), "dim at 10");
    ensure_eq!(linear_system_dim(4)?, LinearSystemDim::Exact(2), "dim at 4");
    ensure_eq!(
        linear_system_dim(2)?,
        LinearSystemDim::UpperBound(1),
        "dim bound at 2"
    );
    Ok("degree-10 class splits only as squares (4,4) with cross term 1".into())
}

fn check_geiser() -> anyhow::Result<String> {
    let lines = dp2::enumerate_lines()?;
    let pic = dp2_picard();
    for t in &lines {
        let g = dp2::geiser(&lines, t)?;
        anyhow::ensure!(g.class.coeffs != t.class.coeffs, "fixed point at {}", t.symbol());
        ensure_eq!(pic.pair(&t.class, &g.class)?, 2, format!("pairing at {}", t.symbol()));
        let gg = dp2::geiser(&lines, &g)?;
        ensure_eq!(&gg.class.coeffs, &t.class.coeffs, "involution");
    }
    Ok("fixed-point-free involution on the 56 lines with product 2".into())
}

pub fn check_all(full: bool, shards: usize) -> anyhow::Result<Value> {
    let rows = vec![
        check("line census on the degree-2 del Pezzo surface", check_lines()),
        check("conic-bundle census with singular fiber lists", check_bundles()),
        check("sign lemma over all admissible assignments", check_sign_lemma(full, shards)),
        check("sign lemma proof-case slices", check_slices(shards)),
        check("intersection numbers on the blown-up double solid", check_intersections()),
        check("torsion relation system consequences", check_torsion()),
        check("Enriques degree-10 decomposition and Riemann-Roch values", check_enriques()),
        check("Geiser involution on the lines", check_geiser()),
    ];
    let all_passed = rows.iter().all(|r| r.passed);
    for r in &rows {
        eprintln!(
            "{} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.claim,
            r.detail
        );
    }
    Ok(json!({
        "all_passed": all_passed,
        "checks": rows.iter().map(|r| json!({
            "claim": r.claim,
            "passed": r.passed,
            "detail": r.detail,
        })).collect::<Vec<_>>(),
    }))
}
