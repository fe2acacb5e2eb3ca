//! Numerical divisor computations on an Enriques surface: Riemann-Roch,
//! linear system dimensions, and enumeration of constrained decompositions
//! of a self-intersection number.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A divisor on an Enriques surface described purely by its numerics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnriquesDivisorDatum {
    pub label: String,
    pub self_intersection: i64,
}

/// Euler characteristic chi(O(D)) = D^2/2 + 1. The intersection form is
/// even, so an odd self-intersection is rejected.
pub fn chi(self_intersection: i64) -> Result<i64> {
    if self_intersection.rem_euclid(2) != 0 {
        return Err(Error::OddSelfIntersection(self_intersection));
    }
    Ok(self_intersection / 2 + 1)
}

/// Dimension of the linear system of an irreducible divisor, either known
/// exactly or bounded above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum LinearSystemDim {
    Exact(i64),
    UpperBound(i64),
}

/// dim |D| for irreducible D with D^2 >= 0: exactly D^2/2 when D^2 >= 4,
/// and at most 1 in the low range D^2 <= 2.
pub fn linear_system_dim(self_intersection: i64) -> Result<LinearSystemDim> {
    if self_intersection.rem_euclid(2) != 0 {
        return Err(Error::OddSelfIntersection(self_intersection));
    }
    if self_intersection < 0 {
        return Err(Error::Inconsistency(format!(
            "irreducible divisor with negative square {self_intersection}"
        )));
    }
    if self_intersection >= 4 {
        Ok(LinearSystemDim::Exact(self_intersection / 2))
    } else {
        Ok(LinearSystemDim::UpperBound(1))
    }
}

/// Constraints on splitting a class D with D^2 = `total` into n >= 2
/// effective parts D = sum C_k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionConstraint {
    pub total_square: i64,
    pub num_parts: usize,
    /// Lower bound on each part's self-intersection C_k^2.
    pub min_part_square: i64,
    /// Lower bound on each cross term C_k . C_l, k != l.
    pub min_cross: i64,
}

/// One decomposition shape: the multiset of part squares (sorted
/// descending) and the common list of cross terms in lexicographic pair
/// order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Decomposition {
    pub part_squares: Vec<i64>,
    pub cross_terms: Vec<i64>,
}

/// Enumerates all solutions of sum C_k^2 + 2 * sum_{k<l} C_k.C_l = total
/// with each square even and >= min_part_square and each cross term
/// >= min_cross. Squares are non-increasing; for a fixed square multiset the
/// cross terms are non-decreasing, so each shape appears once. Results are
/// sorted.
pub fn enumerate_decompositions(c: &DecompositionConstraint) -> Result<Vec<Decomposition>> {
    if c.num_parts < 2 {
        return Err(Error::Inconsistency(format!(
            "a decomposition needs at least 2 parts, got {}",
            c.num_parts
        )));
    }
    if c.total_square.rem_euclid(2) != 0 || c.min_part_square.rem_euclid(2) != 0 {
        return Err(Error::OddSelfIntersection(c.total_square.min(c.min_part_square)));
    }
    let num_cross = c.num_parts * (c.num_parts - 1) / 2;
    let mut out = Vec::new();

    // Squares are bounded above by total - (n-1)*min_part_square - 2*#cross*min_cross.
    let mut squares = Vec::with_capacity(c.num_parts);
    fn rec_squares(
        c: &DecompositionConstraint,
        num_cross: usize,
        squares: &mut Vec<i64>,
        sum: i64,
        out: &mut Vec<Decomposition>,
    ) {
        if squares.len() == c.num_parts {
            let cross_total2 = c.total_square - sum;
            if cross_total2 < 0 || cross_total2 % 2 != 0 {
                return;
            }
            let mut cross = Vec::with_capacity(num_cross);
            rec_cross(cross_total2 / 2, num_cross, c.min_cross, &mut cross, squares, out);
            return;
        }
        let remaining_parts = (c.num_parts - squares.len() - 1) as i64;
        let upper = c.total_square
            - sum
            - remaining_parts * c.min_part_square
            - 2 * num_cross as i64 * c.min_cross;
        let cap = squares.last().copied().unwrap_or(upper);
        let mut q = c.min_part_square;
        while q <= upper.min(cap) {
            squares.push(q);
            rec_squares(c, num_cross, squares, sum + q, out);
            squares.pop();
            q += 2;
        }
    }

    fn rec_cross(
        remaining: i64,
        slots: usize,
        min_value: i64,
        cross: &mut Vec<i64>,
        squares: &[i64],
        out: &mut Vec<Decomposition>,
    ) {
        if slots == 0 {
            if remaining == 0 {
                out.push(Decomposition {
                    part_squares: squares.to_vec(),
                    cross_terms: cross.clone(),
                });
            }
            return;
        }
        let floor = cross.last().copied().unwrap_or(min_value).max(min_value);
        let upper = remaining - (slots as i64 - 1) * floor.max(0);
        let mut v = floor;
        while v <= upper {
            cross.push(v);
            rec_cross(remaining - v, slots - 1, min_value, cross, squares, out);
            cross.pop();
            v += 1;
        }
    }

    rec_squares(c, num_cross, &mut squares, 0, &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

/// Hodge index obstruction for two divisor classes on a surface of Picard
/// rank >= 2: the sub-Gram matrix [[x, z], [z, y]] of two independent
/// classes with x, y > 0 must have non-positive determinant, so a
/// configuration is admissible only when x <= 0, y <= 0, or z^2 >= x*y.
pub fn hodge_index_flag(x: i64, y: i64, z: i64) -> bool {
    x <= 0 || y <= 0 || z.checked_mul(z).unwrap() >= x.checked_mul(y).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_and_dim_pinned_values() {
        assert_eq!(chi(10).unwrap(), 6);
        assert_eq!(chi(4).unwrap(), 3);
        assert_eq!(chi(0).unwrap(), 1);
        assert_eq!(chi(-2).unwrap(), 0);
        assert!(chi(3).is_err());

        assert_eq!(linear_system_dim(10).unwrap(), LinearSystemDim::Exact(5));
        assert_eq!(linear_system_dim(4).unwrap(), LinearSystemDim::Exact(2));
        assert_eq!(
            linear_system_dim(2).unwrap(),
            LinearSystemDim::UpperBound(1)
        );
        assert_eq!(
            linear_system_dim(0).unwrap(),
            LinearSystemDim::UpperBound(1)
        );
        assert!(linear_system_dim(-2).is_err());
        assert!(linear_system_dim(5).is_err());
    }

    #[test]
    fn degree_ten_strict_split_is_unique() {
        let found = enumerate_decompositions(&DecompositionConstraint {
            total_square: 10,
            num_parts: 2,
            min_part_square: 4,
            min_cross: 1,
        })
        .unwrap();
        assert_eq!(
            found,
            vec![Decomposition {
                part_squares: vec![4, 4],
                cross_terms: vec![1],
            }]
        );
    }

    #[test]
    fn relaxing_the_cross_bound_admits_one_more_shape() {
        let found = enumerate_decompositions(&DecompositionConstraint {
            total_square: 10,
            num_parts: 2,
            min_part_square: 4,
            min_cross: 0,
        })
        .unwrap();
        assert_eq!(
            found,
            vec![
                Decomposition {
                    part_squares: vec![4, 4],
                    cross_terms: vec![1],
                },
                Decomposition {
                    part_squares: vec![6, 4],
                    cross_terms: vec![0],
                },
            ]
        );
    }

    #[test]
    fn overtight_square_bound_yields_nothing() {
        // Parts need odd total cross contribution otherwise.
        let found = enumerate_decompositions(&DecompositionConstraint {
            total_square: 10,
            num_parts: 3,
            min_part_square: 4,
            min_cross: 0,
        })
        .unwrap();
        assert!(found.is_empty());
    }

    /// Double-loop oracle for two parts: squares q1 >= q2 and the single
    /// cross term z with q1 + q2 + 2z = total.
    fn two_part_oracle(total: i64, min_part_square: i64, min_cross: i64) -> Vec<Decomposition> {
        let mut out = Vec::new();
        let hi = total.abs() + 2 * min_cross.abs() + 8;
        let mut q1 = min_part_square;
        while q1 <= hi {
            let mut q2 = min_part_square;
            while q2 <= q1 {
                let rest = total - q1 - q2;
                if rest % 2 == 0 && rest / 2 >= min_cross {
                    out.push(Decomposition {
                        part_squares: vec![q1, q2],
                        cross_terms: vec![rest / 2],
                    });
                }
                q2 += 2;
            }
            q1 += 2;
        }
        out.sort();
        out
    }

    #[test]
    fn two_part_enumeration_matches_oracle() {
        for total in [0i64, 2, 4, 10, 12] {
            for min_part_square in [0i64, 2, 4] {
                for min_cross in [0i64, 1, 2] {
                    let c = DecompositionConstraint {
                        total_square: total,
                        num_parts: 2,
                        min_part_square,
                        min_cross,
                    };
                    assert_eq!(
                        enumerate_decompositions(&c).unwrap(),
                        two_part_oracle(total, min_part_square, min_cross),
                        "{c:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn hodge_index_flag_cases() {
        assert!(hodge_index_flag(4, 4, 4));
        assert!(hodge_index_flag(4, 4, -4));
        assert!(!hodge_index_flag(4, 4, 1));
        assert!(hodge_index_flag(-2, 4, 0));
        assert!(hodge_index_flag(0, 0, 0));
        assert!(hodge_index_flag(10, 10, 10));
        assert!(!hodge_index_flag(10, 4, 6));
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(enumerate_decompositions(&DecompositionConstraint {
            total_square: 10,
            num_parts: 1,
            min_part_square: 4,
            min_cross: 1,
        })
        .is_err());
        assert!(enumerate_decompositions(&DecompositionConstraint {
            total_square: 9,
            num_parts: 2,
            min_part_square: 4,
            min_cross: 1,
        })
        .is_err());
    }
}
