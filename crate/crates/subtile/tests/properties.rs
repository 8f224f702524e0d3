//! Property tests for the exact-arithmetic invariants.

use proptest::prelude::*;
use subtile::geom::{classify_angle, polygon_congruence, AngleClass, Isometry2, Point2, Rotation2};
use subtile::orient::{decompose_in_basis, recompose};
use subtile::scalar::QScalar;

fn rational() -> impl Strategy<Value = QScalar> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| QScalar::from_ratio(n, d, 5))
}

fn point() -> impl Strategy<Value = Point2> {
    (rational(), rational()).prop_map(|(x, y)| Point2::new(x, y))
}

/// Exact rotations from the pinwheel group: quarter-turn power times a
/// power of ρ = rot(3/5, 4/5).
fn group_rotation() -> impl Strategy<Value = Rotation2> {
    (0u8..4, -6i64..7).prop_map(|(k, m)| recompose(k, m, 5))
}

fn isometry() -> impl Strategy<Value = Isometry2> {
    (group_rotation(), any::<bool>(), point()).prop_map(|(rot, reflect, trans)| Isometry2 {
        rot,
        reflect,
        trans,
    })
}

proptest! {
    #[test]
    fn rotations_stay_on_the_unit_circle(r in group_rotation(), s in group_rotation(), t in group_rotation()) {
        // c² + s² = 1 exactly after any chain of compositions
        let chain = r.compose(&s).compose(&t).compose(&r.inverse());
        let norm = chain.cos() * chain.cos() + chain.sin() * chain.sin();
        prop_assert!(norm.is_one());
    }

    #[test]
    fn isometry_composition_is_associative(g in isometry(), h in isometry(), k in isometry()) {
        prop_assert_eq!(g.compose(&h).compose(&k), g.compose(&h.compose(&k)));
    }

    #[test]
    fn isometries_invert_exactly(g in isometry(), p in point()) {
        let q = g.inverse().apply(&g.apply(&p));
        prop_assert_eq!(q, p);
    }

    #[test]
    fn rational_turns_have_the_stated_order(k in 0u8..4, m in -4i64..5) {
        let r = recompose(k, m, 5);
        if let AngleClass::RationalTurn(_, den) = classify_angle(&r) {
            prop_assert!(r.pow(den as i64).is_identity());
            // and no smaller positive power closes up
            for j in 1..den {
                prop_assert!(!r.pow(j as i64).is_identity());
            }
        }
    }

    #[test]
    fn decompose_recompose_round_trip(k in 0u8..4, m in -8i64..9) {
        let r = recompose(k, m, 5);
        prop_assert_eq!(decompose_in_basis(&r), Ok((k, m)));
    }

    #[test]
    fn substitution_is_equivariant_under_random_motions(g in isometry()) {
        // substitute(T^g x) = T^{φ(g)} substitute(x) with φ(g) the pose
        // conjugate by the expansion, exactly
        use subtile::geom::expand_about_origin;
        use subtile::rules::builtin_system;
        let sys = builtin_system("pinwheel").unwrap();
        let x = sys.supertile(0, 2, 1_000_000).unwrap();
        let lhs = sys.substitute(&x.transform(&g)).unwrap();
        let rhs = sys
            .substitute(&x)
            .unwrap()
            .transform(&expand_about_origin(&g, &sys.expansion));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn congruence_recovers_random_motions(g in isometry()) {
        // the pinwheel prototile with its long-leg midpoint vertex
        let p: Vec<Point2> = [(0, 0), (1, 0), (2, 0), (2, 1)]
            .iter()
            .map(|(x, y)| Point2::new(QScalar::from_int(*x, 5), QScalar::from_int(*y, 5)))
            .collect();
        let q: Vec<Point2> = p.iter().map(|v| g.apply(v)).collect();
        let found = polygon_congruence(&p, &q, true).unwrap().expect("congruent by construction");
        for v in &p {
            prop_assert_eq!(found.apply(v), g.apply(v));
        }
        // without reflections, a mirrored copy must not match
        if g.reflect {
            prop_assert!(polygon_congruence(&p, &q, false).unwrap().is_none());
        }
    }
}
