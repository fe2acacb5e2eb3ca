//! Tiny intersection-expression evaluator.
//!
//! An expression is a `*`-separated product of named classes, each with an
//! optional `^k` power: `(-K)^3`, `H^2 * E1`, `l * a1`. The total degree
//! selects the form: degree 3 uses the triple product (space `amx`), degree
//! 2 the bilinear pairing (space `dp2`).

use amsolid_core::lattice::{
    amx_anticanonical, amx_divisors, amx_triple_table, dp2_anticanonical, dp2_picard,
    BilinearLattice, ClassVector,
};
use anyhow::{bail, Context};

fn named(space: &str, lattice: &BilinearLattice, name: &str) -> anyhow::Result<ClassVector> {
    let anticanonical = match space {
        "amx" => amx_anticanonical(),
        "dp2" => dp2_anticanonical(),
        _ => unreachable!(),
    };
    match name {
        "-K" => Ok(anticanonical),
        "K" => Ok(anticanonical.neg()),
        _ => {
            // Accept both E1 and E_1 style basis names.
            lattice
                .basis_vector(name)
                .or_else(|_| lattice.basis_vector(&name.replace('_', "")))
                .with_context(|| format!("unknown class {name:?} in space {space:?}"))
        }
    }
}

pub fn evaluate(expr: &str, space: &str) -> anyhow::Result<i64> {
    let lattice = match space {
        "amx" => amx_divisors(),
        "dp2" => dp2_picard(),
        other => bail!("unknown space {other:?}; expected \"amx\" or \"dp2\""),
    };

    let mut factors: Vec<ClassVector> = Vec::new();
    for raw in expr.split('*') {
        let part = raw.trim();
        if part.is_empty() {
            bail!("empty factor in expression {expr:?}");
        }
        let (name_part, power) = match part.split_once('^') {
            Some((n, p)) => (
                n.trim(),
                p.trim()
                    .parse::<u32>()
                    .with_context(|| format!("bad exponent in {part:?}"))?,
            ),
            None => (part, 1),
        };
        let name = name_part
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(name_part)
            .trim();
        if power == 0 || power > 3 {
            bail!("exponent must be 1..=3, got {power}");
        }
        let v = named(space, &lattice, name)?;
        for _ in 0..power {
            factors.push(v.clone());
        }
    }

    match (space, factors.as_slice()) {
        ("amx", [a, b, c]) => Ok(amx_triple_table().triple(a, b, c)?),
        ("dp2", [a, b]) => Ok(dp2_picard().pair(a, b)?),
        ("amx", f) => bail!("space \"amx\" needs a degree-3 expression, got degree {}", f.len()),
        ("dp2", f) => bail!("space \"dp2\" needs a degree-2 expression, got degree {}", f.len()),
        _ => unreachable!(),
    }
}
