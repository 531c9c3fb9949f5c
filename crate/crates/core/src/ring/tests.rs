use super::*;
use crate::families::{build_family, build_group_algebra, build_symmetric_coalgebra, Family, FamilyParams, GroupSpec};
use crate::field::FieldContext;

fn sweedler() -> CoalgebraSpec {
    build_family(Family::E, &FamilyParams::taft(2)).unwrap()
}

fn taft3() -> CoalgebraSpec {
    build_family(Family::E, &FamilyParams::taft(3)).unwrap()
}

fn cochain(s: &CoalgebraSpec, g: &str, terms: &[(&[&str], i64)]) -> DCochain {
    let n = terms.first().map_or(0, |t| t.0.len());
    let terms = terms
        .iter()
        .map(|(w, c)| {
            (
                w.iter().map(|l| s.index_of(l).unwrap() as u32).collect(),
                Scalar::from_int(*c),
            )
        })
        .collect();
    DCochain::new(n, s.grouplike_by_label(g).unwrap(), terms)
}

#[test]
fn unit_laws() {
    let s = sweedler();
    let d = DCobar::new(&s).unwrap();
    let x = cochain(&s, "x", &[(&["z", "x z"], 2), (&["1", "x"], -1)]);
    assert_eq!(d.product(&d.unit(), &x).unwrap(), x);
    assert_eq!(d.product(&x, &d.unit()).unwrap(), x);
    assert!(d.differential(&d.unit()).unwrap().is_zero());
    assert!(unit_check(&s, 20, DEFAULT_SEED).unwrap().holds());
}

#[test]
fn sweedler_square_of_z() {
    let s = sweedler();
    let d = DCobar::new(&s).unwrap();
    let z = cochain(&s, "x", &[(&["z"], 1)]);
    let want = cochain(&s, "1", &[(&["z", "x z"], 1)]);
    assert_eq!(d.product(&z, &z).unwrap(), want);
    assert_eq!(d.product_general(&z, &z).unwrap(), want);
}

#[test]
fn general_form_agrees_on_samples() {
    for s in [sweedler(), taft3()] {
        let d = DCobar::new(&s).unwrap();
        let mut smp = CochainSampler::new(&s, 7);
        for _ in 0..40 {
            let (x, y) = (smp.any(3), smp.any(3));
            assert_eq!(d.product(&x, &y).unwrap(), d.product_general(&x, &y).unwrap());
        }
    }
}

#[test]
fn leibniz_and_associativity() {
    for s in [sweedler(), taft3()] {
        let r = leibniz_check(&s, 50, DEFAULT_SEED).unwrap();
        assert!(r.holds(), "{r:?}");
    }
    assert!(associativity_check(&sweedler(), 30, DEFAULT_SEED).unwrap().holds());
    let g = build_group_algebra(&GroupSpec::cyclic(3), FieldContext::Rational).unwrap();
    assert!(associativity_check(&g, 30, DEFAULT_SEED).unwrap().holds());
    assert!(leibniz_check(&g, 30, DEFAULT_SEED).unwrap().holds());
}

#[test]
fn corrupted_multiplication_fails_leibniz() {
    let s = sweedler();
    let (x, z) = (s.grouplike_by_label("x").unwrap(), s.index_of("z").unwrap());
    let mut p = s.into_parts();
    let leg = p.hopf.as_mut().unwrap().left[x][z].as_mut().unwrap();
    leg[0].0 = z as u32;
    let bad = CoalgebraSpec::from_parts(p).unwrap();
    let r = leibniz_check(&bad, 50, DEFAULT_SEED).unwrap();
    assert!(!r.holds());
    assert!(r.violation.unwrap().contains("⊠"));
}

#[test]
fn adjoint_action_on_sweedler() {
    let s = sweedler();
    let d = DCobar::new(&s).unwrap();
    let z = cochain(&s, "1", &[(&["z"], 1)]);
    let x = s.grouplike_by_label("x").unwrap();
    assert_eq!(d.adjoint(x, &z).unwrap(), z.scale(&-Scalar::one()));
    assert_eq!(d.adjoint(d.identity(), &z).unwrap(), z);
    assert!(matches!(d.adjoint(7, &z), Err(RingError::NotGrouplike(_))));
    let g = build_group_algebra(&GroupSpec::cyclic(3), FieldContext::Rational).unwrap();
    let dg = DCobar::new(&g).unwrap();
    let mut smp = CochainSampler::new(&g, 3);
    for _ in 0..10 {
        let (a, v) = (smp.grouplike(), smp.any(3));
        assert_eq!(dg.adjoint(a, &v).unwrap(), v);
    }
}

#[test]
fn adjoint_checks() {
    for s in [sweedler(), taft3()] {
        let r = ad_chain_map_check(&s, 30, DEFAULT_SEED).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(action_law_check(&s, 30, DEFAULT_SEED).unwrap().holds());
    }
    let t = taft3();
    let d = DCobar::new(&t).unwrap();
    let e2 = t.grouplike_by_label("x^2").unwrap();
    let mut smp = CochainSampler::new(&t, 11);
    for _ in 0..20 {
        let x = smp.any(3);
        assert_eq!(
            d.differential(&d.adjoint(e2, &x).unwrap()).unwrap(),
            d.adjoint(e2, &d.differential(&x).unwrap()).unwrap()
        );
    }
}

#[test]
fn exterior_ring_of_three_variables() {
    let u = build_symmetric_coalgebra(3, 3, FieldContext::Rational).unwrap();
    let t = ring_structure(&u, 2, None).unwrap();
    let e = exterior_check(&t, "1");
    assert_eq!(
        e,
        ExteriorCheck {
            degree_one: 3,
            squares_vanish: true,
            anticommute: true,
            span: 3
        }
    );
    // the unit class squares to itself
    let unit = t.classes_at(0, "1")[0];
    assert_eq!(t.product(unit, unit).unwrap(), &[(unit, Scalar::one())]);
    assert!(well_defined_check(&u, 2, None, DEFAULT_SEED).unwrap());
    let back: RingTable = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(back, t);
}

#[test]
fn sweedler_ring() {
    let s = sweedler();
    let t = ring_structure(&s, 2, None).unwrap();
    let z = t.classes_at(1, "x");
    assert_eq!(z.len(), 1);
    let sq = t.product(z[0], z[0]).unwrap();
    let target = t.classes_at(2, "1");
    assert!(sq.iter().all(|(c, _)| target.contains(c)));
    assert!(well_defined_check(&s, 2, None, DEFAULT_SEED).unwrap());
    assert!(well_defined_check(&s, 2, None, DEFAULT_SEED + 1).unwrap());
}

#[test]
fn kunneth() {
    let s = sweedler();
    let g = build_group_algebra(&GroupSpec::cyclic(2), FieldContext::Rational).unwrap();
    let (x, one) = (s.grouplike_by_label("x").unwrap(), s.grouplike_by_label("1").unwrap());
    let r = kunneth_check(&s, &g, Some(&[((x, one), (0, 0))]), 1).unwrap();
    assert!(r.holds());
    assert!(kunneth_check(&s, &g, None, 2).unwrap().holds());
    let trivial = build_group_algebra(&GroupSpec::cyclic(1), FieldContext::Rational).unwrap();
    assert!(kunneth_check(&s, &trivial, None, 3).unwrap().holds());
    let r = kunneth_check(&s, &s, Some(&[((x, one), (x, one))]), 2).unwrap();
    assert!(r.holds(), "{r:?}");
}
