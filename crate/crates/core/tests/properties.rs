//! Property tests for the geometric and algebraic invariants.

use juliasym::dynamics::escape_rate;
use juliasym::isometry::{classify_finite_group, GroupClass, Isometry};
use juliasym::poly::Polynomial;
use juliasym::rational::RationalMap;
use juliasym::sphere::{chordal_distance, SpherePoint};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn isometry_strategy() -> impl Strategy<Value = Isometry> {
    (complex_strategy(), complex_strategy())
        .prop_filter("nonzero pair", |(a, b)| a.norm() + b.norm() > 1e-3)
        .prop_map(|(a, b)| Isometry::new(a, b).unwrap())
}

fn point_strategy() -> impl Strategy<Value = SpherePoint> {
    prop_oneof![
        8 => (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(re, im)| {
            SpherePoint::from_affine(Complex64::new(re, im))
        }),
        1 => Just(SpherePoint::infinity()),
        1 => Just(SpherePoint::zero()),
    ]
}

// Random polynomial of exact degree deg with comfortably nonzero
// leading coefficient.
fn poly_strategy(deg: usize) -> impl Strategy<Value = Polynomial> {
    (
        proptest::collection::vec(complex_strategy(), deg),
        complex_strategy(),
    )
        .prop_map(move |(mut coeffs, lead)| {
            let lead = if lead.norm() < 0.2 {
                lead + Complex64::new(1.0, 0.0)
            } else {
                lead
            };
            coeffs.push(lead);
            Polynomial::new(coeffs)
        })
}

fn map_strategy() -> impl Strategy<Value = RationalMap> {
    (1usize..=4, 0usize..=3).prop_flat_map(|(dn, dd)| {
        (poly_strategy(dn), poly_strategy(dd))
            .prop_map(|(num, den)| RationalMap::new(num, den).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn isometries_preserve_chordal_distance(
        sigma in isometry_strategy(),
        p in point_strategy(),
        q in point_strategy(),
    ) {
        let before = chordal_distance(&p, &q);
        let after = chordal_distance(&sigma.apply(&p), &sigma.apply(&q));
        prop_assert!((before - after).abs() <= 1e-9);
    }

    #[test]
    fn composition_is_associative(
        a in isometry_strategy(),
        b in isometry_strategy(),
        c in isometry_strategy(),
    ) {
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn inverse_composes_to_identity(sigma in isometry_strategy(), p in point_strategy()) {
        let round = sigma.compose(&sigma.inverse()).apply(&p);
        prop_assert!(chordal_distance(&round, &p) <= 1e-12);
    }

    #[test]
    fn fixed_points_are_antipodal(sigma in isometry_strategy()) {
        prop_assume!(!sigma.is_identity(1e-6));
        let (p, q) = sigma.fixed_points().unwrap();
        prop_assert!(chordal_distance(&sigma.apply(&p), &p) <= 1e-9);
        prop_assert!(chordal_distance(&sigma.apply(&q), &q) <= 1e-9);
        prop_assert!((chordal_distance(&p, &q) - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn unit_phase_rescaling_is_invisible(
        p in point_strategy(),
        q in point_strategy(),
        phase in 0.0..std::f64::consts::TAU,
    ) {
        let (z1, z2) = p.homogeneous();
        let u = Complex64::from_polar(1.0, phase);
        let rescaled = SpherePoint::new(z1 * u, z2 * u).unwrap();
        prop_assert!(p.approx_eq(&rescaled, 1e-12));
        prop_assert!(
            (chordal_distance(&p, &q) - chordal_distance(&rescaled, &q)).abs() <= 1e-12
        );
        prop_assert!(chordal_distance(&p.antipode(), &rescaled.antipode()) <= 1e-12);
    }

    #[test]
    fn classification_is_conjugation_invariant(
        gamma in isometry_strategy(),
        k in 2usize..7,
        dihedral in proptest::bool::ANY,
    ) {
        let mut elements: Vec<Isometry> = Vec::new();
        for j in 0..k {
            let angle = std::f64::consts::TAU * j as f64 / k as f64;
            elements.push(Isometry::rotation(angle));
            if dihedral {
                elements.push(Isometry::inversion(Complex64::from_polar(1.0, angle)));
            }
        }
        let base = classify_finite_group(&elements).unwrap();
        let conjugated: Vec<Isometry> = elements
            .iter()
            .map(|e| gamma.compose(e).compose(&gamma.inverse()))
            .collect();
        let moved = classify_finite_group(&conjugated).unwrap();
        prop_assert_eq!(base.tag_name(), moved.tag_name());
        prop_assert_eq!(base.order(), moved.order());
        // The rotation axis is transported by gamma.
        if let (
            GroupClass::Cyclic { axis: a, .. } | GroupClass::Dihedral { axis: a, .. },
            GroupClass::Cyclic { axis: b, .. } | GroupClass::Dihedral { axis: b, .. },
        ) = (&base, &moved)
        {
            let image = gamma.apply(&a[0]);
            prop_assert!(
                image.approx_eq(&b[0], 1e-6) || image.approx_eq(&b[1], 1e-6)
            );
        }
    }

    #[test]
    fn eval_matches_affine_horner(map in map_strategy(), z in complex_strategy()) {
        let z = z * 5.0; // spread over |z| <= 10
        let den = map.denominator().eval(z);
        prop_assume!(den.norm() > 1e-3);
        let affine = map.numerator().eval(z) / den;
        prop_assume!(affine.norm() < 1e6);
        let spherical = map.eval(&SpherePoint::from_affine(z));
        let expected = SpherePoint::from_affine(affine);
        prop_assert!(chordal_distance(&spherical, &expected) <= 1e-10);
    }

    #[test]
    fn lift_projects_back(map in map_strategy(), p in point_strategy()) {
        let lift = map.lift();
        let (w1, w2) = lift.apply(p.homogeneous());
        prop_assume!(w1.norm() + w2.norm() > 1e-9);
        let projected = SpherePoint::new(w1, w2).unwrap();
        prop_assert!(chordal_distance(&projected, &map.eval(&p)) <= 1e-9);
    }

    #[test]
    fn equality_is_reflexive_and_symmetric(a in map_strategy(), b in map_strategy()) {
        prop_assert!(a.equals(&a, 1e-12));
        prop_assert_eq!(a.equals(&b, 1e-9), b.equals(&a, 1e-9));
    }

    #[test]
    fn escape_rate_scales_logarithmically(
        map in map_strategy(),
        p in point_strategy(),
        factor in 0.5..2.0f64,
    ) {
        prop_assume!(map.degree() >= 2);
        let lift = map.lift();
        let hom = p.homogeneous();
        let g1 = escape_rate(&lift, hom, 24);
        let g2 = escape_rate(&lift, (hom.0 * factor, hom.1 * factor), 24);
        prop_assert!((g2 - (g1 + factor.ln())).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_multiplies_degrees(
        a in (1usize..=3, 0usize..=2),
        b in (1usize..=3, 0usize..=2),
        seed_a in 0u64..1000,
        seed_b in 0u64..1000,
    ) {
        // Deterministic pseudo-random coefficients from the seeds keep
        // this reproducible under proptest shrinking.
        let gen_poly = |deg: usize, seed: u64| {
            let mut x = seed as f64 + 1.3;
            let mut next = || {
                x = (x * 0.61803398875 + 0.71).fract();
                x * 2.0 - 1.0
            };
            let coeffs: Vec<Complex64> = (0..=deg)
                .map(|i| {
                    let c = Complex64::new(next(), next());
                    if i == deg && c.norm() < 0.2 {
                        c + Complex64::new(1.0, 0.0)
                    } else {
                        c
                    }
                })
                .collect();
            Polynomial::new(coeffs)
        };
        let r = RationalMap::new(gen_poly(a.0, seed_a), gen_poly(a.1, seed_a + 7)).unwrap();
        let s = RationalMap::new(gen_poly(b.0, seed_b), gen_poly(b.1, seed_b + 7)).unwrap();
        prop_assume!(r.degree() == a.0.max(a.1) && s.degree() == b.0.max(b.1));
        prop_assume!(s.degree() >= 1);
        let composed = r.compose(&s);
        prop_assert_eq!(composed.degree(), r.degree() * s.degree());
    }

    #[test]
    fn critical_point_count_is_riemann_hurwitz(
        dn in 2usize..=4,
        dd in 0usize..=3,
        seed in 0u64..500,
    ) {
        let mut x = seed as f64 + 0.7;
        let mut next = || {
            x = (x * 0.754877666 + 0.37).fract();
            x * 2.0 - 1.0
        };
        let mut make = |deg: usize| {
            let coeffs: Vec<Complex64> = (0..=deg)
                .map(|i| {
                    let c = Complex64::new(next(), next());
                    if i == deg && c.norm() < 0.2 {
                        c + Complex64::new(1.0, 0.0)
                    } else {
                        c
                    }
                })
                .collect();
            Polynomial::new(coeffs)
        };
        let map = RationalMap::new(make(dn), make(dd)).unwrap();
        prop_assume!(map.degree() == dn.max(dd) && map.degree() >= 2);
        let crits = map.critical_points().unwrap();
        prop_assert_eq!(crits.len(), 2 * map.degree() - 2);
    }
}
