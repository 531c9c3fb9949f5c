use num_traits::Zero;

use super::*;
use crate::coalgebra::CoalgebraSpec;
use crate::field::q_binomial;

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn delta_of(s: &CoalgebraSpec, label: &str) -> Vec<(String, String, Scalar)> {
    let i = s.index_of(label).unwrap();
    let mut v: Vec<_> = s
        .delta(i)
        .iter()
        .map(|(a, b, c)| {
            (
                s.label(*a as usize).to_string(),
                s.label(*b as usize).to_string(),
                c.clone(),
            )
        })
        .collect();
    v.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    v
}

fn triples(v: &[(&str, &str, Scalar)]) -> Vec<(String, String, Scalar)> {
    let mut v: Vec<_> = v
        .iter()
        .map(|(a, b, c)| (a.to_string(), b.to_string(), c.clone()))
        .collect();
    v.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    v
}

#[test]
fn group_algebras() {
    let s = build_group_algebra(&GroupSpec::cyclic(2), FieldContext::Rational).unwrap();
    assert_eq!((s.dim(), s.grouplikes().len()), (2, 2));
    let s = build_group_algebra(&GroupSpec::window(2), FieldContext::Rational).unwrap();
    assert_eq!(s.dim(), 5);
    assert!(s.validate().is_ok());
    let s = build_group_algebra(&GroupSpec::FiniteAbelian(vec![3, 3]), FieldContext::Rational).unwrap();
    assert_eq!(s.dim(), 9);
}

#[test]
fn symmetric_coalgebras() {
    let s = build_symmetric_coalgebra(1, 2, FieldContext::Rational).unwrap();
    assert_eq!(s.dim(), 3);
    assert_eq!(
        delta_of(&s, "t1^2"),
        triples(&[("t1^2", "1", int(1)), ("t1", "t1", int(2)), ("1", "t1^2", int(1))])
    );
    assert_eq!(
        build_symmetric_coalgebra(2, 0, FieldContext::Rational).unwrap().dim(),
        1
    );
    let s = build_symmetric_coalgebra(3, 1, FieldContext::Rational).unwrap();
    assert_eq!(s.dim(), 4);
    for t in ["t1", "t2", "t3"] {
        assert_eq!(delta_of(&s, t), triples(&[(t, "1", int(1)), ("1", t, int(1))]));
    }
    assert!(build_symmetric_coalgebra(2, 4, FieldContext::Rational)
        .unwrap()
        .validate()
        .is_ok());
}

#[test]
fn sweedler_and_taft_dimensions() {
    let s = build_family(Family::E, &FamilyParams::taft(2)).unwrap();
    assert_eq!(s.dim(), 4);
    assert!(s.validate().is_ok());
    let p = FamilyParams::new(GroupSpec::cyclic(9), vec![1], vec![Scalar::zeta_pow(9, 3)]);
    let s = build_family(Family::E, &p).unwrap();
    assert_eq!(s.dim(), 27);
    assert!(s.validate().is_ok(), "{}", s.validate());
}

#[test]
fn f_family_dimension() {
    let mut p = FamilyParams::taft(2);
    p.w_degree_max = 2;
    let s = build_family(Family::F, &p).unwrap();
    assert_eq!(s.dim(), 12);
    assert!(s.validate().is_ok(), "{}", s.validate());
    assert_eq!(s.meta().exact_degree_max, Some(5));
}

#[test]
fn a_family_z_cubed_at_cube_root() {
    let s = build_family(Family::A, &FamilyParams::example(Family::A)).unwrap();
    // e^3 = 1 in Z/3
    assert_eq!(
        delta_of(&s, "z^3"),
        triples(&[("z^3", "1", int(1)), ("1", "z^3", int(1))])
    );
}

#[test]
fn c_family_with_zero_tau() {
    let mut p = FamilyParams::new(GroupSpec::cyclic(4), vec![2], vec![int(-1)]);
    p.z_degree_max = 2;
    let s = build_family(Family::C, &p).unwrap();
    assert_eq!(
        delta_of(&s, "z^2"),
        triples(&[("z^2", "1", int(1)), ("x^2 z", "z", int(2)), ("1", "z^2", int(1))])
    );
}

#[test]
fn every_example_validates() {
    for fam in Family::ALL {
        let p = FamilyParams::example(fam);
        let s = build_family(fam, &p).unwrap_or_else(|e| panic!("{fam}: {e}"));
        let r = s.validate();
        assert!(r.is_ok(), "{fam}: {r}");
        if p.group.window_bounds().is_some() {
            assert_eq!(s.meta().dropped_triples, 0, "{fam}");
        }
    }
}

#[test]
fn q_binomial_expansion_of_z_powers() {
    let p = FamilyParams::new(GroupSpec::cyclic(5), vec![1], vec![Scalar::zeta(5)]);
    let mut p = p;
    p.z_degree_max = 6;
    let s = build_family(Family::A, &p).unwrap();
    let q = Scalar::zeta(5);
    for n in 0..=6u32 {
        let z = |k: u32| match k {
            0 => "1".to_string(),
            1 => "z".to_string(),
            _ => format!("z^{k}"),
        };
        let mut want = Vec::new();
        for i in 0..=n {
            let c = q_binomial(n as u64, i as u64, &q).unwrap();
            if c.is_zero() {
                continue;
            }
            let e = (n - i) % 5;
            let left = match (e, i) {
                (0, _) => z(i),
                (1, 0) => "x".into(),
                (_, 0) => format!("x^{e}"),
                (1, _) => format!("x {}", z(i)),
                _ => format!("x^{e} {}", z(i)),
            };
            want.push((left, z(n - i), c));
        }
        want.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        assert_eq!(delta_of(&s, &z(n)), want, "n = {n}");
    }
}

#[test]
fn z_bracket_cocycles() {
    assert!(z_bracket_is_cocycle(&FamilyParams::taft(2)).unwrap());
    assert!(z_bracket_is_cocycle(&FamilyParams::taft(5)).unwrap());
    let p = FamilyParams::new(GroupSpec::cyclic(9), vec![1], vec![Scalar::zeta_pow(9, 3)]);
    assert!(z_bracket_is_cocycle(&p).unwrap());
}

#[test]
fn windowed_a_is_delta_closed() {
    let s = build_a_windowed(2, &int(-1), -3, 5, 3).unwrap();
    assert_eq!(s.meta().dropped_triples, 0);
    assert!(s.validate().is_ok());
}

#[test]
fn normality_examples() {
    let p = FamilyParams::new(GroupSpec::cyclic(4), vec![1], vec![Scalar::zeta(4)]);
    assert!(check_normality(&p, &int(0)).unwrap());
    assert!(check_normality(&p, &int(1)).unwrap());
    // e^4 = 1 here, so w_1 = z^4
    let p8 = FamilyParams::new(GroupSpec::cyclic(8), vec![2], vec![Scalar::zeta(8)]);
    assert!(check_normality(&p8, &int(1)).unwrap());
    let p16 = FamilyParams::new(GroupSpec::cyclic(16), vec![2], vec![Scalar::zeta(8)]);
    assert!(!check_normality(&p16, &int(1)).unwrap());
    for (p, l) in [(&p, int(1)), (&p8, int(1)), (&p16, int(1)), (&p16, int(0))] {
        let direct = normality_residues(p, &l).unwrap().iter().all(|r| r.is_empty());
        assert_eq!(direct, check_normality(p, &l).unwrap());
    }
    match build_family(Family::E, &{
        let mut q = p16.clone();
        q.lambda = Some(int(1));
        q
    }) {
        Err(FamilyError::Param { tag, .. }) => assert_eq!(tag, "normality"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn param_violations_are_tagged() {
    let tag = |r: Result<CoalgebraSpec, FamilyError>| match r {
        Err(FamilyError::Param { tag, .. }) => tag,
        other => panic!("{other:?}"),
    };
    let mut p = FamilyParams::taft(2);
    p.lambda = Some(int(1));
    assert_eq!(tag(build_family(Family::F, &p)), "lambda-zero");
    let mut p = FamilyParams::example(Family::O);
    p.eta = vec![int(1)];
    assert_eq!(tag(build_family(Family::O, &p)), "eta-e-normalization");
    let mut p = FamilyParams::example(Family::Q);
    p.lambda = None;
    assert_eq!(tag(build_family(Family::N, &p)), "e-ell-one");
    let p = FamilyParams::new(GroupSpec::cyclic(2), vec![1], vec![int(1)]);
    assert_eq!(tag(build_family(Family::E, &p)), "root-of-unity");
    let mut p = FamilyParams::new(GroupSpec::cyclic(4), vec![1], vec![int(-1)]);
    p.tau = vec![int(1)];
    assert_eq!(tag(build_family(Family::C, &p)), "chi-e-trivial");
}

#[test]
fn lambda_one_e_family_keeps_z_grading() {
    let mut p = FamilyParams::new(GroupSpec::cyclic(4), vec![1], vec![int(-1)]);
    p.lambda = Some(int(1));
    let s = build_family(Family::E, &p).unwrap();
    // the relation only touches products, so Δ stays z-graded
    assert!(!s.meta().ungraded);
    assert!(s.validate().is_ok());
    assert!(s.counit(s.index_of("x z").unwrap()).is_zero());
}

#[test]
fn params_round_trip_through_json() {
    let p = FamilyParams::example(Family::L);
    let text = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<FamilyParams>(&text).unwrap(), p);
    let loose: FamilyParams =
        serde_json::from_str(r#"{"group":{"finite_abelian":[3]},"e":[1],"chi":["zeta3"]}"#).unwrap();
    assert_eq!(loose.chi, vec![Scalar::zeta(3)]);
    assert_eq!(loose.z_degree_max, 4);
}
