use num_traits::{One, Zero};

use super::*;
use crate::coalgebra::{tensor_product, Word};
use crate::families::{
    braided_part, build_family, build_group_algebra, build_symmetric_coalgebra, Family, FamilyParams, GroupSpec,
};
use crate::field::FieldContext;

fn sweedler() -> CoalgebraSpec {
    build_family(Family::E, &FamilyParams::taft(2)).unwrap()
}

fn taft3() -> CoalgebraSpec {
    build_family(Family::E, &FamilyParams::taft(3)).unwrap()
}

fn gl(s: &CoalgebraSpec, label: &str) -> usize {
    s.grouplike_by_label(label).unwrap()
}

fn word(s: &CoalgebraSpec, labels: &[&str]) -> Word {
    labels.iter().map(|l| s.index_of(l).unwrap() as u32).collect()
}

#[test]
fn d0_is_g_minus_h() {
    let s = sweedler();
    let cx = Cobar::new(&s, gl(&s, "x"), gl(&s, "1")).unwrap();
    let d = cx.apply(&[]);
    assert_eq!(d.len(), 2);
    assert_eq!(d[&word(&s, &["x"])], Scalar::one());
    assert_eq!(d[&word(&s, &["1"])], -Scalar::one());
    let m = differential_matrix(&s, 0, 0, 0, &[0]).unwrap();
    assert!(m.columns.iter().all(|c| c.is_zero()));
}

#[test]
fn d1_on_group_algebra() {
    let s = build_group_algebra(&GroupSpec::cyclic(2), FieldContext::Rational).unwrap();
    let cx = Cobar::new(&s, 0, 0).unwrap();
    let d = cx.apply(&word(&s, &["x"]));
    let want: WordVec = [
        (word(&s, &["1", "x"]), Scalar::one()),
        (word(&s, &["x", "x"]), -Scalar::one()),
        (word(&s, &["x", "1"]), Scalar::one()),
    ]
    .into_iter()
    .collect();
    assert_eq!(d, want);
}

#[test]
fn skew_primitive_is_a_cocycle() {
    let s = sweedler();
    let cx = Cobar::new(&s, gl(&s, "x"), gl(&s, "1")).unwrap();
    assert!(cx.apply(&word(&s, &["z"])).is_empty());
}

#[test]
fn d_squared_vanishes_and_faults_are_located() {
    let s = sweedler();
    for g in 0..2 {
        for h in 0..2 {
            assert!(check_d_squared(&s, g, h, 4, None).unwrap().holds());
        }
    }
    let mut p = s.into_parts();
    p.delta[3][0].2 = Scalar::from_int(2);
    let bad = CoalgebraSpec::from_parts(p).unwrap();
    let r = check_d_squared(&bad, 0, 0, 2, None).unwrap();
    let w = r.witness.expect("fault must be found");
    assert!(!w.coeff.is_zero());
    assert!(w.source.iter().any(|l| l == "x z") || w.target.iter().any(|l| l == "x z"));
}

#[test]
fn sweedler_cohomology() {
    let s = sweedler();
    let (one, x) = (gl(&s, "1"), gl(&s, "x"));
    let (d, reps) = primitive_cohomology(&s, x, one, 1, None).unwrap();
    assert_eq!(d, 1);
    assert_eq!(reps[0], [(word(&s, &["z"]), Scalar::one())].into_iter().collect());
    assert_eq!(primitive_cohomology(&s, one, one, 1, None).unwrap().0, 0);
    let (d, reps) = primitive_cohomology(&s, one, one, 2, Some(&[2])).unwrap();
    assert_eq!(d, 1);
    assert_eq!(
        reps[0],
        [(word(&s, &["x z", "z"]), Scalar::one())].into_iter().collect()
    );
    for n in 0..=5 {
        let total: usize = (0..2).map(|g| total_dim(&s, g, one, n, None).unwrap()).sum();
        assert_eq!(total, 1, "n = {n}");
    }
}

#[test]
fn group_algebra_has_no_higher_cohomology() {
    let s = build_group_algebra(&GroupSpec::FiniteAbelian(vec![2, 2]), FieldContext::Rational).unwrap();
    for g in 0..4 {
        for h in 0..4 {
            assert_eq!(total_dim(&s, g, h, 0, None).unwrap(), usize::from(g == h));
            for n in 1..=3 {
                assert_eq!(total_dim(&s, g, h, n, None).unwrap(), 0);
            }
        }
    }
    assert_eq!(pcdim_lower_bound(&s, 3, None).unwrap().value, 0);
}

#[test]
fn splitting_matches_an_unsplit_rank() {
    let s = taft3();
    for g in 0..3 {
        let cx = Cobar::new(&s, g, 0).unwrap();
        for n in 0..=3 {
            for d in slice_degrees(&s, n, None).unwrap().0 {
                let words = cx.words(n, &d).unwrap();
                let whole = linalg::rank(&free_columns(&cx, &words));
                assert_eq!(slice_rank(&cx, n, &d).unwrap().1, whole);
            }
        }
    }
}

#[test]
fn corollary_table_for_cube_roots() {
    let mut p = FamilyParams::new(GroupSpec::cyclic(9), vec![1], vec![Scalar::zeta_pow(9, 3)]);
    p.z_degree_max = 4;
    let s = build_family(Family::A, &p).unwrap();
    let req = CohomologyRequest {
        pairs: PairSelection::IntoH(gl(&s, "1")),
        n_max: 2,
        deg_max: Some(4),
        with_reps: true,
    };
    let r = compute_report(&s, &req).unwrap();
    for k in 0..9 {
        let g = s.grouplike_label(k).to_string();
        let pp1 = r.dim(&g, "1", 1);
        let pp2 = r.dim(&g, "1", 2);
        assert_eq!(pp1, usize::from(g == "x" || g == "x^3"), "PP1 at {g}");
        assert_eq!(pp2, usize::from(g == "x^3" || g == "x^4"), "PP2 at {g}");
    }
    let rep = |g: &str| -> WordVec {
        let e = r.entries.iter().find(|e| e.g == g && e.n == 2 && e.dim > 0).unwrap();
        e.reps[0]
            .iter()
            .map(|t| {
                (
                    word(&s, &t.word.iter().map(String::as_str).collect::<Vec<_>>()),
                    t.coeff.clone(),
                )
            })
            .collect()
    };
    // e³z ⊗ z³ spans the class at g = e⁴
    let want: WordVec = [(word(&s, &["x^3 z", "z^3"]), Scalar::one())].into_iter().collect();
    let c = class_ratio(&s, gl(&s, "x^4"), gl(&s, "1"), &rep("x^4"), &want).unwrap();
    assert!(c.is_some_and(|c| !c.is_zero()));
}

#[test]
fn report_json_and_csv() {
    let s = sweedler();
    let req = CohomologyRequest {
        pairs: PairSelection::All,
        n_max: 2,
        deg_max: None,
        with_reps: true,
    };
    let r = compute_report(&s, &req).unwrap();
    let text = r.to_json();
    let back: CohomologyReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert!(r.to_csv().starts_with("g,h,n,degree,dim\n"));
    assert_eq!(r.pcdim_lb.value, 2);
    assert!(r.pcdim_lb.lower_bound);
}

#[test]
fn pcdim_of_c_family_within_bounds() {
    let s = build_family(Family::C, &FamilyParams::example(Family::C)).unwrap();
    assert_eq!(pcdim_lower_bound(&s, 3, Some(3)).unwrap().value, 1);
}

#[test]
fn shift_isomorphisms() {
    let s = sweedler();
    let (one, x) = (gl(&s, "1"), gl(&s, "x"));
    let c = shift_check(&s, x, x, one, 1, None).unwrap();
    assert!(c.holds());
    assert_eq!(c.source_dim, 1);
    assert!(shift_check(&s, one, x, one, 2, None).unwrap().holds());
    let t = taft3();
    // (e³, 1) = (1, 1) and (e⁴, e) = (e, e) in Z/3
    let r = shift_check(&t, gl(&t, "x"), gl(&t, "1"), gl(&t, "1"), 2, None).unwrap();
    assert!(r.holds());
}

#[test]
fn reduced_cobar_agrees() {
    let u = build_symmetric_coalgebra(2, 2, FieldContext::Rational).unwrap();
    assert_eq!(reduced_cobar_cohomology(&u, 0, 1, None).unwrap(), 2);
    assert_eq!(reduced_cobar_cohomology(&u, 0, 0, None).unwrap(), 1);
    let s = sweedler();
    for g in 0..2 {
        for n in 0..=3 {
            assert_eq!(
                reduced_cobar_cohomology(&s, g, n, None).unwrap(),
                total_dim(&s, g, g, n, None).unwrap(),
                "g = {g}, n = {n}"
            );
        }
    }
}

#[test]
fn direct_sums() {
    let s = sweedler();
    let g = build_group_algebra(&GroupSpec::cyclic(2), FieldContext::Rational).unwrap();
    let r = direct_sum_check(&[&g, &s], 2, None).unwrap();
    assert!(r.holds(), "{:?}", r.mismatches);
    assert!(direct_sum_check(&[&s], 2, None).unwrap().holds());
}

#[test]
fn kunneth_degree_one() {
    let s = sweedler();
    let g = build_group_algebra(&GroupSpec::cyclic(2), FieldContext::Rational).unwrap();
    let p = tensor_product(&s, &g).unwrap();
    let a = p.grouplike_by_label("x|1").unwrap();
    let b = p.grouplike_by_label("1|1").unwrap();
    assert_eq!(total_dim(&p, a, b, 1, None).unwrap(), 1);
}

#[test]
fn windows_stabilize_for_a_over_z() {
    let q = Scalar::from_int(2);
    let build = |r: i64| crate::families::build_a_windowed(1, &q, -r, r, 3);
    let rep = window_stabilize(build, &[2, 4, 8], Some(&[1]), &[0], 1, Some(3)).unwrap();
    assert!(rep.steps.iter().all(|s| s.dim == 1), "{rep:?}");
    assert_eq!(rep.stabilized_at, Some(2));
    let rep = window_stabilize(build, &[2, 4], None, &[0], 2, Some(3)).unwrap();
    assert!(rep.steps.iter().all(|s| s.dim == 0), "{rep:?}");
}

#[test]
fn ranks_and_signatures() {
    let s = sweedler();
    let b = braided_part(Family::E, &FamilyParams::taft(2)).unwrap();
    let r = rank_and_signature(&s, Some(&b), None).unwrap();
    assert_eq!(r.rank, 1);
    assert_eq!(r.series().unwrap(), "t");
    let p = FamilyParams::taft(2);
    let f = build_family(Family::F, &p).unwrap();
    let r = rank_and_signature(&f, Some(&braided_part(Family::F, &p).unwrap()), None).unwrap();
    assert_eq!(r.rank, 1);
    assert_eq!(r.series().unwrap(), "t + t^2");
    let p = FamilyParams::symmetric(3, 2);
    let u = build_family(Family::U, &p).unwrap();
    let r = rank_and_signature(&u, Some(&braided_part(Family::U, &p).unwrap()), None).unwrap();
    assert_eq!(r.rank, 3);
    assert_eq!(r.series().unwrap(), "3t");
}
