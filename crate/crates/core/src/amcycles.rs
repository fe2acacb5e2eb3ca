//! Curve-class arithmetic on the blown-up double solid and the GF(2)
//! relation system separating algebraic from numerical equivalence.
//!
//! Each numerical curve class on the blown-up double solid contains two
//! algebraic classes, distinguished by a single torsion bit. The covering
//! involution swaps the two rulings of each exceptional quadric, and
//! degenerating a one-parameter family of lines through a node into a line
//! through two nodes plus a ruling yields one affine GF(2) equation per
//! specialization. Solving that system certifies which class pairs are forced
//! into distinct algebraic classes.

use crate::gf2::{self, SolveOutcome};
use crate::lattice::{amx_anticanonical, amx_curves, amx_divisor_curve_pairing, ClassVector};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A numerical curve class together with its Z/2 torsion bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorsionedCycle {
    pub numerical: ClassVector,
    pub torsion: bool,
    pub label: Option<String>,
}

impl PartialEq for TorsionedCycle {
    /// Algebraic equality: numerical part and torsion bit both agree.
    /// Labels are bookkeeping only.
    fn eq(&self, other: &Self) -> bool {
        self.numerical == other.numerical && self.torsion == other.torsion
    }
}

impl Eq for TorsionedCycle {}

/// Returns the curve class named by `label` in the basis (l, e_1..e_10):
/// `l`, `e_i`, `l_i` = l - e_i, or `l_{i,j}` = l - e_i - e_j.
pub fn named_class(label: &str) -> Result<ClassVector> {
    let curves = amx_curves();
    let mut coeffs = vec![0i64; 11];
    let set_e = |coeffs: &mut Vec<i64>, i: usize, v: i64| -> Result<()> {
        if !(1..=10).contains(&i) {
            return Err(Error::IndexOutOfRange(i));
        }
        coeffs[i] += v;
        Ok(())
    };

    let trimmed = label.trim();
    if trimmed == "l" {
        coeffs[0] = 1;
    } else if let Some(rest) = trimmed.strip_prefix("e_").or_else(|| trimmed.strip_prefix('e')) {
        let i: usize = rest
            .parse()
            .map_err(|_| Error::UnknownLabel(label.to_string()))?;
        set_e(&mut coeffs, i, 1)?;
    } else if let Some(rest) = trimmed.strip_prefix("l_") {
        coeffs[0] = 1;
        let rest = rest.trim_start_matches('{').trim_end_matches('}');
        let parts: Vec<&str> = rest.split([',', '_']).collect();
        if parts.is_empty() || parts.len() > 2 {
            return Err(Error::UnknownLabel(label.to_string()));
        }
        let mut indices = Vec::new();
        for p in &parts {
            let i: usize = p
                .trim()
                .parse()
                .map_err(|_| Error::UnknownLabel(label.to_string()))?;
            indices.push(i);
        }
        if indices.len() == 2 && indices[0] == indices[1] {
            return Err(Error::UnknownLabel(label.to_string()));
        }
        for i in indices {
            set_e(&mut coeffs, i, -1)?;
        }
    } else {
        return Err(Error::UnknownLabel(label.to_string()));
    }
    curves.vector(coeffs)
}

/// Degree of a curve class against the anticanonical divisor 2H - sum E_i.
pub fn anticanonical_degree(c: &ClassVector) -> Result<i64> {
    amx_divisor_curve_pairing().pair(&amx_anticanonical(), c)
}

/// One affine GF(2) equation: sum of the named torsion bits = rhs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionEquation {
    pub terms: Vec<String>,
    pub rhs: u8,
    pub provenance: String,
}

/// A labeled affine GF(2) system over torsion bits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorsionRelationSystem {
    pub unknowns: Vec<String>,
    pub equations: Vec<TorsionEquation>,
}

fn t(symbol: String) -> String {
    format!("t({symbol})")
}

fn pair_sym(i: u8, j: u8) -> String {
    format!("l_{{{},{}}}", i.min(j), i.max(j))
}

impl TorsionRelationSystem {
    pub fn from_json(json: &str) -> Result<Self> {
        let sys: TorsionRelationSystem = serde_json::from_str(json)?;
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        let declared: std::collections::BTreeSet<&str> =
            self.unknowns.iter().map(|s| s.as_str()).collect();
        for eq in &self.equations {
            if eq.rhs > 1 {
                return Err(Error::Inconsistency(format!(
                    "rhs must be 0 or 1, got {}",
                    eq.rhs
                )));
            }
            for term in &eq.terms {
                if !declared.contains(term.as_str()) {
                    return Err(Error::UndeclaredUnknown(term.clone()));
                }
            }
        }
        Ok(())
    }

    fn index_map(&self) -> BTreeMap<&str, usize> {
        self.unknowns
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect()
    }

    /// Row-reduces the system; returns the reduced form with the forced
    /// sign-pair consequences, or an irreducible unsatisfiable core.
    pub fn solve(&self) -> Result<TorsionSolveReport> {
        self.validate()?;
        let index = self.index_map();
        let rows: Vec<(Vec<usize>, bool)> = self
            .equations
            .iter()
            .map(|eq| {
                let terms = eq.terms.iter().map(|t| index[t.as_str()]).collect();
                (terms, eq.rhs == 1)
            })
            .collect();
        match gf2::solve(self.unknowns.len(), &rows) {
            SolveOutcome::Inconsistent { core } => Ok(TorsionSolveReport::Inconsistent {
                core: core.iter().map(|&e| self.equations[e].clone()).collect(),
            }),
            SolveOutcome::Consistent(reduced) => {
                let mut forced = Vec::new();
                // Check every (x^+, x^-) partner pair for a forced sum.
                for (plus_idx, name) in self.unknowns.iter().enumerate() {
                    if let Some(stem) = name.strip_suffix("^+)") {
                        let partner = format!("{stem}^-)");
                        if let Some(&minus_idx) = index.get(partner.as_str()) {
                            for rhs in [true, false] {
                                if reduced.implies(&[plus_idx, minus_idx], rhs) {
                                    forced.push(ForcedConsequence {
                                        terms: vec![name.clone(), partner.clone()],
                                        rhs: rhs as u8,
                                    });
                                }
                            }
                        }
                    }
                }
                let particular: BTreeMap<String, u8> = self
                    .unknowns
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), reduced.particular_solution[i] as u8))
                    .collect();
                let reduced_rows = reduced
                    .rows
                    .iter()
                    .map(|(terms, rhs)| TorsionEquation {
                        terms: terms.iter().map(|&i| self.unknowns[i].clone()).collect(),
                        rhs: *rhs as u8,
                        provenance: "row reduction".into(),
                    })
                    .collect();
                Ok(TorsionSolveReport::Consistent {
                    rank: reduced.rank,
                    num_free: reduced.num_free(),
                    reduced_rows,
                    particular_solution: particular,
                    forced_consequences: forced,
                })
            }
        }
    }
}

/// An affine relation that holds in every solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedConsequence {
    pub terms: Vec<String>,
    pub rhs: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum TorsionSolveReport {
    Consistent {
        rank: usize,
        num_free: usize,
        reduced_rows: Vec<TorsionEquation>,
        particular_solution: BTreeMap<String, u8>,
        forced_consequences: Vec<ForcedConsequence>,
    },
    Inconsistent {
        core: Vec<TorsionEquation>,
    },
}

fn push_unique(unknowns: &mut Vec<String>, name: &str) {
    if !unknowns.iter().any(|u| u == name) {
        unknowns.push(name.to_string());
    }
}

/// The two specialization equations of the ordered node pair (i, j): the
/// family of lines through node i degenerates, over each branch of the
/// discriminant, to the line through nodes i and j plus one ruling of the
/// exceptional quadric over j.
pub fn specialization_equations(i: u8, j: u8) -> Vec<TorsionEquation> {
    vec![
        TorsionEquation {
            terms: vec![
                t(format!("l_{i}^+")),
                t(format!("{}^+", pair_sym(i, j))),
                t(format!("e_{j}^+")),
            ],
            rhs: 0,
            provenance: format!("specialization l_{i}^+ -> l_{{{i},{j}}}^+ + e_{j}^+"),
        },
        TorsionEquation {
            terms: vec![
                t(format!("l_{i}^-")),
                t(format!("{}^+", pair_sym(i, j))),
                t(format!("e_{j}^-")),
            ],
            rhs: 0,
            provenance: format!("specialization l_{i}^- -> l_{{{i},{j}}}^+ + e_{j}^-"),
        },
    ]
}

/// The non-equivalence fact for node i: the two line families through the
/// node lie in distinct algebraic classes.
fn line_family_fact(i: u8) -> TorsionEquation {
    TorsionEquation {
        terms: vec![t(format!("l_{i}^+")), t(format!("l_{i}^-"))],
        rhs: 1,
        provenance: format!("l_{i}^+ and l_{i}^- are not algebraically equivalent"),
    }
}

/// Subsystem over the given ordered node pairs: the stated specialization
/// equations plus the line-family facts for the nodes involved. Only the
/// unknowns that actually appear are declared.
pub fn build_am_subsystem(pairs: &[(u8, u8)]) -> TorsionRelationSystem {
    let mut equations = Vec::new();
    let mut sources = std::collections::BTreeSet::new();
    for &(i, j) in pairs {
        assert!(i != j && (1..=10).contains(&i) && (1..=10).contains(&j));
        equations.extend(specialization_equations(i, j));
        sources.insert(i);
    }
    for &i in &sources {
        equations.push(line_family_fact(i));
    }
    let mut unknowns = Vec::new();
    for eq in &equations {
        for term in &eq.terms {
            push_unique(&mut unknowns, term);
        }
    }
    TorsionRelationSystem {
        unknowns,
        equations,
    }
}

/// The full relation system over all ten nodes.
///
/// For each ordered pair (i, j) it contains the two stated specialization
/// equations, their images under the covering involution (which swaps the
/// rulings e_j^+/e_j^- and the classes l_{i,j}^+/l_{i,j}^- while fixing each
/// l_i family), and the two decompositions of a general line class l as
/// l_{i,j} + e_i + e_j. The ten line-family facts close the system.
pub fn build_am_relation_system() -> TorsionRelationSystem {
    let mut unknowns = Vec::new();
    for sign in ["+", "-"] {
        push_unique(&mut unknowns, &t(format!("l^{sign}")));
    }
    for i in 1..=10u8 {
        for sign in ["+", "-"] {
            push_unique(&mut unknowns, &t(format!("l_{i}^{sign}")));
            push_unique(&mut unknowns, &t(format!("e_{i}^{sign}")));
        }
    }
    for i in 1..=10u8 {
        for j in i + 1..=10u8 {
            for sign in ["+", "-"] {
                push_unique(&mut unknowns, &t(format!("{}^{sign}", pair_sym(i, j))));
            }
        }
    }

    let mut equations = Vec::new();
    for i in 1..=10u8 {
        for j in (1..=10u8).filter(|&j| j != i) {
            equations.extend(specialization_equations(i, j));
            // Images under the covering involution.
            equations.push(TorsionEquation {
                terms: vec![
                    t(format!("l_{i}^+")),
                    t(format!("{}^-", pair_sym(i, j))),
                    t(format!("e_{j}^-")),
                ],
                rhs: 0,
                provenance: format!(
                    "involution image of the specialization l_{i}^+ -> l_{{{i},{j}}}^+ + e_{j}^+"
                ),
            });
            equations.push(TorsionEquation {
                terms: vec![
                    t(format!("l_{i}^-")),
                    t(format!("{}^-", pair_sym(i, j))),
                    t(format!("e_{j}^+")),
                ],
                rhs: 0,
                provenance: format!(
                    "involution image of the specialization l_{i}^- -> l_{{{i},{j}}}^+ + e_{j}^-"
                ),
            });
        }
    }
    for i in 1..=10u8 {
        for j in i + 1..=10u8 {
            equations.push(TorsionEquation {
                terms: vec![
                    t("l^+".into()),
                    t(format!("{}^+", pair_sym(i, j))),
                    t(format!("e_{i}^+")),
                    t(format!("e_{j}^+")),
                ],
                rhs: 0,
                provenance: format!("decomposition l = l_{{{i},{j}}} + e_{i} + e_{j}"),
            });
            equations.push(TorsionEquation {
                terms: vec![
                    t("l^-".into()),
                    t(format!("{}^-", pair_sym(i, j))),
                    t(format!("e_{i}^-")),
                    t(format!("e_{j}^-")),
                ],
                rhs: 0,
                provenance: format!(
                    "involution image of the decomposition l = l_{{{i},{j}}} + e_{i} + e_{j}"
                ),
            });
        }
    }
    for i in 1..=10u8 {
        equations.push(line_family_fact(i));
    }
    TorsionRelationSystem {
        unknowns,
        equations,
    }
}
