//! Exact integer arithmetic for bilinear pairings on surface Picard lattices,
//! divisor-curve pairings on the blown-up double solid, and trilinear products
//! of divisors given by a rule table.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn checked_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// A free finite-rank integer module with a symmetric integer pairing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinearLattice {
    pub name: String,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
}

impl BilinearLattice {
    pub fn new(name: &str, basis: &[&str], gram: Vec<Vec<i64>>) -> Result<Self> {
        let lattice = BilinearLattice {
            name: name.to_string(),
            basis: basis.iter().map(|s| s.to_string()).collect(),
            gram,
        };
        lattice.validate()?;
        Ok(lattice)
    }

    /// Parses a lattice from a JSON document `{ name, basis, gram }`.
    pub fn from_json(json: &str) -> Result<Self> {
        let lattice: BilinearLattice = serde_json::from_str(json)?;
        lattice.validate()?;
        Ok(lattice)
    }

    fn validate(&self) -> Result<()> {
        let rank = self.basis.len();
        if rank == 0 {
            return Err(Error::InvalidLattice {
                name: self.name.clone(),
                reason: "rank must be positive".into(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for b in &self.basis {
            if !seen.insert(b) {
                return Err(Error::InvalidLattice {
                    name: self.name.clone(),
                    reason: format!("duplicate basis name `{b}`"),
                });
            }
        }
        if self.gram.len() != rank || self.gram.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidLattice {
                name: self.name.clone(),
                reason: "gram matrix dimensions do not match the rank".into(),
            });
        }
        for i in 0..rank {
            for j in 0..rank {
                if self.gram[i][j] != self.gram[j][i] {
                    return Err(Error::InvalidLattice {
                        name: self.name.clone(),
                        reason: format!("gram matrix is not symmetric at ({i}, {j})"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Index of a named basis element.
    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    /// The class vector of a single basis element.
    pub fn basis_vector(&self, name: &str) -> Result<ClassVector> {
        let idx = self
            .basis_index(name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
        let mut coeffs = vec![0; self.rank()];
        coeffs[idx] = 1;
        self.vector(coeffs)
    }

    /// Builds a class vector in this lattice, checking the length.
    pub fn vector(&self, coeffs: Vec<i64>) -> Result<ClassVector> {
        if coeffs.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: coeffs.len(),
            });
        }
        Ok(ClassVector {
            lattice: self.name.clone(),
            coeffs,
        })
    }

    /// Evaluates the symmetric pairing `u' . gram . v` with checked arithmetic.
    pub fn pair(&self, u: &ClassVector, v: &ClassVector) -> Result<i64> {
        self.check_membership(u)?;
        self.check_membership(v)?;
        let mut acc: i64 = 0;
        for (i, &ui) in u.coeffs.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.coeffs.iter().enumerate() {
                if vj == 0 {
                    continue;
                }
                acc = checked_add(acc, checked_mul(checked_mul(ui, vj)?, self.gram[i][j])?)?;
            }
        }
        Ok(acc)
    }

    /// Signs of the leading principal minors, computed exactly over the
    /// rationals via fraction-free elimination on i128.
    pub fn leading_minor_signs(&self) -> Vec<i8> {
        let rank = self.rank();
        let mut signs = Vec::with_capacity(rank);
        for k in 1..=rank {
            let mut m: Vec<Vec<i128>> = (0..k)
                .map(|i| (0..k).map(|j| self.gram[i][j] as i128).collect())
                .collect();
            let det = bareiss_det(&mut m);
            signs.push(det.signum() as i8);
        }
        signs
    }

    pub fn check_membership(&self, v: &ClassVector) -> Result<()> {
        if v.lattice != self.name {
            return Err(Error::LatticeMismatch {
                expected: self.name.clone(),
                got: v.lattice.clone(),
            });
        }
        if v.coeffs.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: v.coeffs.len(),
            });
        }
        Ok(())
    }
}

/// Bareiss fraction-free determinant; exact for integer matrices.
fn bareiss_det(m: &mut [Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| m[i][k] != 0);
            match swap {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// An integer coefficient vector in a declared lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassVector {
    pub lattice: String,
    pub coeffs: Vec<i64>,
}

impl ClassVector {
    pub fn add(&self, other: &ClassVector) -> Result<ClassVector> {
        if self.lattice != other.lattice || self.coeffs.len() != other.coeffs.len() {
            return Err(Error::LatticeMismatch {
                expected: self.lattice.clone(),
                got: other.lattice.clone(),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| checked_add(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassVector {
            lattice: self.lattice.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &ClassVector) -> Result<ClassVector> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ClassVector {
        ClassVector {
            lattice: self.lattice.clone(),
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Result<ClassVector> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| checked_mul(c, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassVector {
            lattice: self.lattice.clone(),
            coeffs,
        })
    }
}

/// Symmetric trilinear product on a divisor lattice, defined through a rule
/// table on basis triples. Absent triples evaluate to 0.
#[derive(Debug, Clone)]
pub struct TripleRuleTable {
    pub lattice: String,
    entries: BTreeMap<(usize, usize, usize), i64>,
    rank: usize,
}

impl TripleRuleTable {
    pub fn new(lattice: &BilinearLattice, rules: &[((usize, usize, usize), i64)]) -> Self {
        let mut entries = BTreeMap::new();
        for &((i, j, k), v) in rules {
            let mut t = [i, j, k];
            t.sort_unstable();
            entries.insert((t[0], t[1], t[2]), v);
        }
        TripleRuleTable {
            lattice: lattice.name.clone(),
            entries,
            rank: lattice.rank(),
        }
    }

    fn rule(&self, i: usize, j: usize, k: usize) -> i64 {
        let mut t = [i, j, k];
        t.sort_unstable();
        self.entries.get(&(t[0], t[1], t[2])).copied().unwrap_or(0)
    }

    /// Trilinear symmetric extension of the rule table.
    pub fn triple(&self, d1: &ClassVector, d2: &ClassVector, d3: &ClassVector) -> Result<i64> {
        for d in [d1, d2, d3] {
            if d.lattice != self.lattice {
                return Err(Error::LatticeMismatch {
                    expected: self.lattice.clone(),
                    got: d.lattice.clone(),
                });
            }
            if d.coeffs.len() != self.rank {
                return Err(Error::DimensionMismatch {
                    expected: self.rank,
                    got: d.coeffs.len(),
                });
            }
        }
        let mut acc: i64 = 0;
        for (i, &a) in d1.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in d2.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                for (k, &c) in d3.coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let r = self.rule(i, j, k);
                    if r == 0 {
                        continue;
                    }
                    let term = checked_mul(checked_mul(checked_mul(a, b)?, c)?, r)?;
                    acc = checked_add(acc, term)?;
                }
            }
        }
        Ok(acc)
    }
}

/// Integer pairing matrix between a divisor lattice and a curve lattice.
#[derive(Debug, Clone)]
pub struct DivisorCurvePairing {
    pub divisor_lattice: String,
    pub curve_lattice: String,
    pub matrix: Vec<Vec<i64>>,
}

impl DivisorCurvePairing {
    pub fn new(
        divisors: &BilinearLattice,
        curves: &BilinearLattice,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if matrix.len() != divisors.rank() || matrix.iter().any(|r| r.len() != curves.rank()) {
            return Err(Error::DimensionMismatch {
                expected: divisors.rank(),
                got: matrix.len(),
            });
        }
        Ok(DivisorCurvePairing {
            divisor_lattice: divisors.name.clone(),
            curve_lattice: curves.name.clone(),
            matrix,
        })
    }

    /// Bilinear evaluation `d' . matrix . c`.
    pub fn pair(&self, d: &ClassVector, c: &ClassVector) -> Result<i64> {
        if d.lattice != self.divisor_lattice {
            return Err(Error::LatticeMismatch {
                expected: self.divisor_lattice.clone(),
                got: d.lattice.clone(),
            });
        }
        if c.lattice != self.curve_lattice {
            return Err(Error::LatticeMismatch {
                expected: self.curve_lattice.clone(),
                got: c.lattice.clone(),
            });
        }
        if d.coeffs.len() != self.matrix.len() || c.coeffs.len() != self.matrix[0].len() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.len(),
                got: d.coeffs.len(),
            });
        }
        let mut acc: i64 = 0;
        for (i, &di) in d.coeffs.iter().enumerate() {
            if di == 0 {
                continue;
            }
            for (j, &cj) in c.coeffs.iter().enumerate() {
                if cj == 0 {
                    continue;
                }
                acc = checked_add(acc, checked_mul(checked_mul(di, cj)?, self.matrix[i][j])?)?;
            }
        }
        Ok(acc)
    }
}

fn diag(rank: usize, first: i64, rest: i64) -> Vec<Vec<i64>> {
    (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    if i != j {
                        0
                    } else if i == 0 {
                        first
                    } else {
                        rest
                    }
                })
                .collect()
        })
        .collect()
}

/// Pic(S) for the degree-2 del Pezzo surface: basis (l, a_1..a_7), Gram
/// diag(1, -1^7).
pub fn dp2_picard() -> BilinearLattice {
    let basis: Vec<String> = std::iter::once("l".to_string())
        .chain((1..=7).map(|i| format!("a{i}")))
        .collect();
    let basis_refs: Vec<&str> = basis.iter().map(|s| s.as_str()).collect();
    BilinearLattice::new("dp2-picard", &basis_refs, diag(8, 1, -1)).expect("builtin lattice")
}

/// Picard lattice of the blow-up of a general del Pezzo surface of degree
/// `9 - n` at `n` points: basis (l, a_1..a_n), Gram diag(1, -1^n).
pub fn blowup_picard(n: usize) -> BilinearLattice {
    let name = format!("p2-blowup-{n}");
    let basis: Vec<String> = std::iter::once("l".to_string())
        .chain((1..=n).map(|i| format!("a{i}")))
        .collect();
    let basis_refs: Vec<&str> = basis.iter().map(|s| s.as_str()).collect();
    BilinearLattice::new(&name, &basis_refs, diag(n + 1, 1, -1)).expect("builtin lattice")
}

/// Divisor lattice of the blown-up double solid: basis (H, E_1..E_10).
/// Divisor products on the threefold go through [`amx_triple_table`] and
/// [`amx_divisor_curve_pairing`], so the Gram matrix here is zero.
pub fn amx_divisors() -> BilinearLattice {
    let basis: Vec<String> = std::iter::once("H".to_string())
        .chain((1..=10).map(|i| format!("E{i}")))
        .collect();
    let basis_refs: Vec<&str> = basis.iter().map(|s| s.as_str()).collect();
    BilinearLattice::new("amx-divisors", &basis_refs, vec![vec![0; 11]; 11])
        .expect("builtin lattice")
}

/// Curve lattice of the blown-up double solid: basis (l, e_1..e_10), dual to
/// (H, E_1..E_10). Same remark on the Gram matrix as [`amx_divisors`].
pub fn amx_curves() -> BilinearLattice {
    let basis: Vec<String> = std::iter::once("l".to_string())
        .chain((1..=10).map(|i| format!("e{i}")))
        .collect();
    let basis_refs: Vec<&str> = basis.iter().map(|s| s.as_str()).collect();
    BilinearLattice::new("amx-curves", &basis_refs, vec![vec![0; 11]; 11])
        .expect("builtin lattice")
}

/// The rank-10 even Enriques numerical lattice U + E8(-1), used for evenness
/// and parity checks only.
pub fn enriques_numerical() -> BilinearLattice {
    let mut gram = vec![vec![0i64; 10]; 10];
    // Hyperbolic plane U on the first two basis vectors.
    gram[0][1] = 1;
    gram[1][0] = 1;
    // E8(-1) on the remaining eight, Bourbaki numbering: chain 1-3-4-5-6-7-8
    // with node 2 attached to node 4.
    let e8_edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
    for i in 0..8 {
        gram[2 + i][2 + i] = -2;
    }
    for &(a, b) in &e8_edges {
        gram[1 + a][1 + b] = 1;
        gram[1 + b][1 + a] = 1;
    }
    let basis: Vec<String> = ["u1", "u2"]
        .iter()
        .map(|s| s.to_string())
        .chain((1..=8).map(|i| format!("f{i}")))
        .collect();
    let basis_refs: Vec<&str> = basis.iter().map(|s| s.as_str()).collect();
    BilinearLattice::new("enriques-numerical", &basis_refs, gram).expect("builtin lattice")
}

/// Looks up a built-in lattice by name.
pub fn builtin(name: &str) -> Option<BilinearLattice> {
    match name {
        "dp2-picard" => Some(dp2_picard()),
        "amx-divisors" => Some(amx_divisors()),
        "amx-curves" => Some(amx_curves()),
        "enriques-numerical" => Some(enriques_numerical()),
        _ => None,
    }
}

/// Triple products of divisors on the blown-up double solid: H^3 = 2,
/// E_i^3 = 2, all mixed triples vanish.
pub fn amx_triple_table() -> TripleRuleTable {
    let lattice = amx_divisors();
    let mut rules = vec![((0, 0, 0), 2)];
    for i in 1..=10 {
        rules.push(((i, i, i), 2));
    }
    TripleRuleTable::new(&lattice, &rules)
}

/// Divisor-curve pairing on the blown-up double solid: H.l = 1 and
/// E_i.e_i = -1, all off-diagonal entries 0. The entry -1 is the degree of
/// the normal bundle O(-1,-1) of the exceptional quadric on its rulings; the
/// curve basis is dual to the divisor basis up to these signs.
pub fn amx_divisor_curve_pairing() -> DivisorCurvePairing {
    let mut matrix = vec![vec![0i64; 11]; 11];
    matrix[0][0] = 1;
    for i in 1..=10 {
        matrix[i][i] = -1;
    }
    DivisorCurvePairing::new(&amx_divisors(), &amx_curves(), matrix).expect("builtin pairing")
}

/// -K on the degree-2 del Pezzo surface: 3l - sum a_i.
pub fn dp2_anticanonical() -> ClassVector {
    let mut coeffs = vec![-1i64; 8];
    coeffs[0] = 3;
    ClassVector {
        lattice: "dp2-picard".into(),
        coeffs,
    }
}

/// -K on the blown-up double solid: 2H - sum E_i.
pub fn amx_anticanonical() -> ClassVector {
    let mut coeffs = vec![-1i64; 11];
    coeffs[0] = 2;
    ClassVector {
        lattice: "amx-divisors".into(),
        coeffs,
    }
}
