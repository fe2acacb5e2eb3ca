//! Randomized property suites over the lattice arithmetic, the sign scan,
//! and the decomposition enumerator.

use amsolid_core::amcycles::anticanonical_degree;
use amsolid_core::dp2;
use amsolid_core::enriques::{enumerate_decompositions, DecompositionConstraint};
use amsolid_core::lattice::{amx_curves, amx_divisors, amx_triple_table, dp2_picard};
use amsolid_core::signlemma::{bundle_signatures, is_hypothesis_satisfying, SignAssignment};
use proptest::prelude::*;
use std::sync::OnceLock;

fn cached_signatures() -> &'static [amsolid_core::signlemma::BundleSig] {
    static SIGS: OnceLock<Vec<amsolid_core::signlemma::BundleSig>> = OnceLock::new();
    SIGS.get_or_init(|| bundle_signatures(&dp2::enumerate_conic_bundles().unwrap()))
}

fn cached_lines() -> &'static [dp2::LineTag] {
    static LINES: OnceLock<Vec<dp2::LineTag>> = OnceLock::new();
    LINES.get_or_init(|| dp2::enumerate_lines().unwrap())
}

fn coeffs(rank: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..=50, rank)
}

fn permutation7() -> impl Strategy<Value = [u8; 7]> {
    Just(()).prop_perturb(|_, mut rng| {
        let mut p = [1u8, 2, 3, 4, 5, 6, 7];
        for i in (1..7).rev() {
            p.swap(i, rng.gen_range(0..=i));
        }
        p
    })
}

proptest! {
    #[test]
    fn pair_is_symmetric_and_bilinear(u in coeffs(8), v in coeffs(8), w in coeffs(8), k in -5i64..=5) {
        let pic = dp2_picard();
        let (u, v, w) = (
            pic.vector(u).unwrap(),
            pic.vector(v).unwrap(),
            pic.vector(w).unwrap(),
        );
        prop_assert_eq!(pic.pair(&u, &v).unwrap(), pic.pair(&v, &u).unwrap());
        let uv = u.add(&v).unwrap();
        prop_assert_eq!(
            pic.pair(&uv, &w).unwrap(),
            pic.pair(&u, &w).unwrap() + pic.pair(&v, &w).unwrap()
        );
        let ku = u.scale(k).unwrap();
        prop_assert_eq!(pic.pair(&ku, &w).unwrap(), k * pic.pair(&u, &w).unwrap());
    }

    #[test]
    fn triple_is_symmetric_and_trilinear(
        a in coeffs(11), b in coeffs(11), c in coeffs(11), k in -3i64..=3,
    ) {
        let amx = amx_divisors();
        let table = amx_triple_table();
        let (a, b, c) = (
            amx.vector(a).unwrap(),
            amx.vector(b).unwrap(),
            amx.vector(c).unwrap(),
        );
        let t = table.triple(&a, &b, &c).unwrap();
        prop_assert_eq!(t, table.triple(&b, &c, &a).unwrap());
        prop_assert_eq!(t, table.triple(&c, &a, &b).unwrap());
        prop_assert_eq!(t, table.triple(&a, &c, &b).unwrap());
        let ka = a.scale(k).unwrap();
        prop_assert_eq!(table.triple(&ka, &b, &c).unwrap(), k * t);
        let ab = a.add(&b).unwrap();
        prop_assert_eq!(
            table.triple(&ab, &b, &c).unwrap(),
            t + table.triple(&b, &b, &c).unwrap()
        );
    }

    #[test]
    fn anticanonical_degree_is_linear(u in coeffs(11), v in coeffs(11)) {
        let curves = amx_curves();
        let (u, v) = (curves.vector(u).unwrap(), curves.vector(v).unwrap());
        let sum = u.add(&v).unwrap();
        prop_assert_eq!(
            anticanonical_degree(&sum).unwrap(),
            anticanonical_degree(&u).unwrap() + anticanonical_degree(&v).unwrap()
        );
    }

    #[test]
    fn hypothesis_is_relabeling_invariant(bits in 0u32..1 << 28, perm in permutation7()) {
        let sigs = cached_signatures();
        let s = SignAssignment(bits);
        prop_assert_eq!(
            is_hypothesis_satisfying(s, sigs),
            is_hypothesis_satisfying(s.permuted(&perm), sigs)
        );
        prop_assert_eq!(
            is_hypothesis_satisfying(s, sigs),
            is_hypothesis_satisfying(s.flipped(), sigs)
        );
    }

    #[test]
    fn geiser_involution_on_random_line(idx in 0usize..56) {
        let lines = cached_lines();
        let t = &lines[idx];
        let g = dp2::geiser(lines, t).unwrap();
        let gg = dp2::geiser(lines, &g).unwrap();
        prop_assert_eq!(&gg.class.coeffs, &t.class.coeffs);
        prop_assert_ne!(&g.class.coeffs, &t.class.coeffs);
    }

    #[test]
    fn tightening_constraints_never_enlarges_output(
        total in (0i64..=12).prop_map(|t| 2 * t),
        parts in 2usize..=3,
        min_square in (0i64..=2).prop_map(|q| 2 * q),
        min_cross in 0i64..=2,
    ) {
        let base = enumerate_decompositions(&DecompositionConstraint {
            total_square: total,
            num_parts: parts,
            min_part_square: min_square,
            min_cross,
        }).unwrap();
        let tighter_square = enumerate_decompositions(&DecompositionConstraint {
            total_square: total,
            num_parts: parts,
            min_part_square: min_square + 2,
            min_cross,
        }).unwrap();
        let tighter_cross = enumerate_decompositions(&DecompositionConstraint {
            total_square: total,
            num_parts: parts,
            min_part_square: min_square,
            min_cross: min_cross + 1,
        }).unwrap();
        for d in &tighter_square {
            prop_assert!(base.contains(d));
        }
        for d in &tighter_cross {
            prop_assert!(base.contains(d));
        }
    }
}
