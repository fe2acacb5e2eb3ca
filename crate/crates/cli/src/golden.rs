//! Report builders shared by the subcommands and the golden-file
//! regenerator. Golden files hold canonical JSON with timing fields
//! stripped, so reruns are byte-identical.

use amsolid_core::amcycles::build_am_relation_system;
use amsolid_core::canonical::{strip_volatile, to_canonical_string};
use amsolid_core::dp2;
use amsolid_core::enriques::{enumerate_decompositions, DecompositionConstraint};
use amsolid_core::signlemma::{self, Strategy};
use anyhow::Context;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub fn lines_report() -> anyhow::Result<Value> {
    let lines = dp2::enumerate_lines()?;
    let by_family = |f: dp2::Family| lines.iter().filter(|t| t.family == f).count();
    Ok(json!({
        "count": lines.len(),
        "families": {
            "A": by_family(dp2::Family::A),
            "B": by_family(dp2::Family::B),
            "C": by_family(dp2::Family::C),
            "D": by_family(dp2::Family::D),
        },
        "lines": lines.iter().map(|t| json!({
            "symbol": t.symbol(),
            "family": format!("{:?}", t.family),
            "class": t.class.coeffs,
        })).collect::<Vec<_>>(),
    }))
}

pub fn bundles_report() -> anyhow::Result<Value> {
    let lines = dp2::enumerate_lines()?;
    let bundles = dp2::enumerate_conic_bundles()?;
    let by_type =
        |ty: dp2::BundleType| bundles.iter().filter(|b| b.bundle_type == ty).count();
    Ok(json!({
        "count": bundles.len(),
        "types": {
            "I": by_type(dp2::BundleType::I),
            "II": by_type(dp2::BundleType::II),
            "III": by_type(dp2::BundleType::III),
            "IV": by_type(dp2::BundleType::IV),
            "V": by_type(dp2::BundleType::V),
        },
        "bundles": bundles.iter().map(|b| json!({
            "type": format!("{:?}", b.bundle_type),
            "parameter": b.parameter,
            "fiber_class": b.fiber_class.coeffs,
            "singular_fibers": b.singular_fibers.iter().map(|&(p, q)| {
                json!([lines[p].symbol(), lines[q].symbol()])
            }).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    }))
}

pub fn sign_lemma_report() -> anyhow::Result<Value> {
    let r = signlemma::verify_lemma(Strategy::SymmetryReduced, 1, None)?;
    Ok(serde_json::to_value(&r)?)
}

pub fn torsion_report() -> anyhow::Result<Value> {
    Ok(serde_json::to_value(build_am_relation_system().solve()?)?)
}

pub fn decompositions_report() -> anyhow::Result<Value> {
    let strict = enumerate_decompositions(&DecompositionConstraint {
        total_square: 10,
        num_parts: 2,
        min_part_square: 4,
        min_cross: 1,
    })?;
    let relaxed = enumerate_decompositions(&DecompositionConstraint {
        total_square: 10,
        num_parts: 2,
        min_part_square: 4,
        min_cross: 0,
    })?;
    Ok(json!({ "strict": strict, "relaxed": relaxed }))
}

pub const GOLDEN_FILES: [&str; 5] = [
    "lines.json",
    "conic_bundles.json",
    "sign_lemma.json",
    "torsion.json",
    "decompositions.json",
];

pub fn golden_content(name: &str) -> anyhow::Result<String> {
    let report = match name {
        "lines.json" => lines_report()?,
        "conic_bundles.json" => bundles_report()?,
        "sign_lemma.json" => sign_lemma_report()?,
        "torsion.json" => torsion_report()?,
        "decompositions.json" => decompositions_report()?,
        other => anyhow::bail!("unknown golden file {other:?}"),
    };
    let mut text = to_canonical_string(&strip_volatile(&report))?;
    text.push('\n');
    Ok(text)
}

pub fn regenerate(out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let mut written = Vec::new();
    for name in GOLDEN_FILES {
        let path = out_dir.join(name);
        std::fs::write(&path, golden_content(name)?)
            .with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}
