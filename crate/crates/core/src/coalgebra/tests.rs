use num_traits::One;

use super::*;

fn one() -> Scalar {
    Scalar::one()
}

/// Sweedler's algebra by hand: basis 1, x, z, xz with Δz = z⊗1 + x⊗z.
pub(crate) fn sweedler_by_hand() -> CoalgebraSpec {
    let labels = ["1", "x", "z", "x z"].map(String::from).to_vec();
    let delta = vec![
        vec![(0, 0, one())],
        vec![(1, 1, one())],
        vec![(2, 0, one()), (1, 2, one())],
        vec![(3, 1, one()), (0, 3, one())],
    ];
    CoalgebraSpec::from_parts(SpecParts {
        field: FieldContext::Rational,
        labels,
        delta,
        counit: vec![one(), one(), Scalar::zero(), Scalar::zero()],
        grouplikes: vec![
            Grouplike {
                basis: 0,
                element: vec![0],
            },
            Grouplike {
                basis: 1,
                element: vec![1],
            },
        ],
        group: Some(GroupStructure::new(vec![2])),
        grading: vec![vec![0], vec![0], vec![1], vec![1]],
        z_coord: 0,
        meta: SpecMeta {
            name: "sweedler".into(),
            ..Default::default()
        },
        hopf: None,
    })
    .unwrap()
}

fn group_z2() -> CoalgebraSpec {
    CoalgebraSpec::from_parts(SpecParts {
        field: FieldContext::Rational,
        labels: vec!["1".into(), "x".into()],
        delta: vec![vec![(0, 0, one())], vec![(1, 1, one())]],
        counit: vec![one(), one()],
        grouplikes: vec![
            Grouplike {
                basis: 0,
                element: vec![0],
            },
            Grouplike {
                basis: 1,
                element: vec![1],
            },
        ],
        group: Some(GroupStructure::new(vec![2])),
        grading: vec![vec![0], vec![0]],
        z_coord: 0,
        meta: SpecMeta::default(),
        hopf: None,
    })
    .unwrap()
}

#[test]
fn sweedler_validates() {
    let s = sweedler_by_hand();
    assert!(s.validate().is_ok(), "{}", s.validate());
    assert!(group_z2().validate().is_ok());
}

#[test]
fn missing_term_breaks_counit() {
    let mut p = sweedler_by_hand().into_parts();
    p.delta[2].retain(|(a, b, _)| !(*a == 2 && *b == 0));
    let s = CoalgebraSpec::from_parts(p).unwrap();
    let r = s.validate();
    let v = r.first(Axiom::Counit).unwrap();
    assert_eq!(v.basis, "z");
}

#[test]
fn wrong_coefficient_breaks_coassociativity() {
    let mut p = sweedler_by_hand().into_parts();
    p.delta[3][0].2 = Scalar::from_int(2);
    let s = CoalgebraSpec::from_parts(p).unwrap();
    assert!(s.validate().first(Axiom::Coassociativity).is_some());
}

#[test]
fn tensor_basis_counts() {
    let s = sweedler_by_hand();
    assert_eq!(s.tensor_basis(2, None).unwrap().len(), 16);
    assert_eq!(s.tensor_basis(0, Some(&[0])).unwrap(), vec![Word::new()]);
    let by_deg: usize = (0..=2).map(|d| s.tensor_basis(2, Some(&[d])).unwrap().len()).sum();
    assert_eq!(by_deg, 16);
    let w = s.tensor_basis(2, Some(&[1])).unwrap();
    assert!(w.windows(2).all(|p| p[0] < p[1]));
    let mut p = s.into_parts();
    p.meta.truncated = true;
    let t = CoalgebraSpec::from_parts(p).unwrap();
    assert_eq!(t.tensor_basis(2, None), Err(SpecError::InfiniteSlice));
}

#[test]
fn skew_primitive_dims() {
    let s = sweedler_by_hand();
    let (basis, dim) = s.skew_primitives(1, 0).unwrap();
    assert_eq!(dim, 1);
    // kernel is spanned by x - 1 and z
    assert_eq!(basis.len(), 2);
    assert!(basis.iter().any(|c| c == &vec![(2, one())]));
    assert_eq!(s.skew_primitives(0, 1).unwrap().1, 1);
    assert_eq!(s.skew_primitives(0, 0).unwrap().1, 0);
    let g = group_z2();
    for a in 0..2 {
        for b in 0..2 {
            assert_eq!(g.skew_primitives(a, b).unwrap().1, 0);
        }
    }
}

#[test]
fn bihomogeneous_detection() {
    let s = sweedler_by_hand();
    assert_eq!(s.bihomogeneous_labels().unwrap(), &[(0, 0), (1, 1), (1, 0), (0, 1)]);
}

#[test]
fn json_round_trip_is_exact() {
    let s = sweedler_by_hand();
    let text = to_json(&s);
    let back = from_json(&text).unwrap();
    assert_eq!(back, s);
    assert_eq!(to_json(&back), text);
}

#[test]
fn sums_and_products_validate() {
    let s = sweedler_by_hand();
    let g = group_z2();
    let sum = direct_sum(&[&g, &s]).unwrap();
    assert_eq!(sum.dim(), 6);
    assert!(sum.validate().is_ok());
    let prod = tensor_product(&s, &g).unwrap();
    assert_eq!(prod.dim(), 8);
    assert!(prod.validate().is_ok(), "{}", prod.validate());
    assert_eq!(prod.grouplikes().len(), 4);
}
