use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::pbw::{add_term, Character, Elem, Mono, PbwAlgebra, Tensor, TwistedAdditive, WLayer};
use super::{violation, Family, FamilyError, FamilyParams, GroupSpec};
use crate::coalgebra::{CoalgebraSpec, GroupStructure, Grouplike, HopfTables, LinComb, SpecMeta, SpecParts};
use crate::cobar::BraidedPart;
use crate::field::{multiplicative_order, q_binomial, FieldContext, MultOrder, Scalar};

fn group_elements(g: &GroupSpec) -> Vec<Vec<i64>> {
    match g {
        GroupSpec::FiniteAbelian(f) => GroupStructure::new(f.clone()).elements().unwrap(),
        GroupSpec::IntegersWindowed { lo, hi } => (*lo..=*hi).map(|a| vec![a]).collect(),
    }
}

fn identity_tables(dim: usize) -> HopfTables {
    let row: Vec<Option<LinComb>> = (0..dim).map(|b| Some(vec![(b as u32, Scalar::one())])).collect();
    HopfTables {
        left: vec![row.clone()],
        right: vec![row],
    }
}

/// `kG`, with every element grouplike. Over a windowed `Z` the basis is
/// the exponent window.
pub fn build_group_algebra(g: &GroupSpec, field: FieldContext) -> Result<CoalgebraSpec, FamilyError> {
    g.check()?;
    let grp = g.structure();
    let els = group_elements(g);
    let index: HashMap<Vec<i64>, usize> = els.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let dim = els.len();
    let table: Vec<Vec<Option<LinComb>>> = els
        .iter()
        .map(|a| {
            els.iter()
                .map(|b| index.get(&grp.mul(a, b)).map(|&k| vec![(k as u32, Scalar::one())]))
                .collect()
        })
        .collect();
    let parts = SpecParts {
        field,
        labels: els.iter().map(|e| grp.label(e)).collect(),
        delta: (0..dim as u32).map(|i| vec![(i, i, Scalar::one())]).collect(),
        counit: vec![Scalar::one(); dim],
        grouplikes: els
            .iter()
            .enumerate()
            .map(|(i, e)| Grouplike {
                basis: i,
                element: e.clone(),
            })
            .collect(),
        group: Some(grp.clone()),
        grading: vec![vec![0]; dim],
        z_coord: 0,
        meta: SpecMeta {
            name: format!("k[{}]", describe_group(g)),
            truncated: g.window_bounds().is_some(),
            window: g.window_bounds(),
            ..Default::default()
        },
        hopf: Some(HopfTables {
            left: table.clone(),
            right: table,
        }),
    };
    Ok(CoalgebraSpec::from_parts(parts)?)
}

fn describe_group(g: &GroupSpec) -> String {
    match g {
        GroupSpec::FiniteAbelian(f) => GroupStructure::new(f.clone()).describe(),
        GroupSpec::IntegersWindowed { lo, hi } => format!("Z[{lo},{hi}]"),
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// Symmetric coalgebra on `d` primitive generators, truncated at total
/// degree `n`. Grading is `[total, exponents…]`.
pub fn build_symmetric_coalgebra(d: usize, n: u32, field: FieldContext) -> Result<CoalgebraSpec, FamilyError> {
    let mut monos: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..d {
        monos = monos
            .into_iter()
            .flat_map(|m| {
                let used: i64 = m.iter().sum();
                (0..=(n as i64 - used)).map(move |k| {
                    let mut v = m.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    monos.sort_by_key(|m| (m.iter().sum::<i64>(), std::cmp::Reverse(m.clone())));
    let index: HashMap<Vec<i64>, u32> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i as u32)).collect();
    let label = |m: &[i64]| -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| {
                if k == 1 {
                    format!("t{}", i + 1)
                } else {
                    format!("t{}^{k}", i + 1)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    };
    let mut delta = Vec::with_capacity(monos.len());
    for m in &monos {
        let mut row = Vec::new();
        let mut betas: Vec<Vec<i64>> = vec![vec![]];
        for &a in m {
            betas = betas
                .into_iter()
                .flat_map(|b| {
                    (0..=a).map(move |k| {
                        let mut v = b.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
        }
        for b in betas {
            let rest: Vec<i64> = m.iter().zip(&b).map(|(x, y)| x - y).collect();
            let c: i64 = m.iter().zip(&b).map(|(&x, &y)| binomial(x, y)).product();
            row.push((index[&b], index[&rest], Scalar::from_int(c)));
        }
        delta.push(row);
    }
    let dim = monos.len();
    let parts = SpecParts {
        field,
        labels: monos.iter().map(|m| label(m)).collect(),
        delta,
        counit: (0..dim)
            .map(|i| if i == 0 { Scalar::one() } else { Scalar::zero() })
            .collect(),
        grouplikes: vec![Grouplike {
            basis: 0,
            element: vec![],
        }],
        group: Some(GroupStructure::trivial()),
        grading: monos
            .iter()
            .map(|m| {
                let mut g = vec![m.iter().sum()];
                g.extend(m);
                g
            })
            .collect(),
        z_coord: 0,
        meta: SpecMeta {
            name: format!("U(d={d}) deg<={n}"),
            truncated: true,
            exact_degree_max: Some(n as i64),
            ..Default::default()
        },
        hopf: Some(identity_tables(dim)),
    };
    Ok(CoalgebraSpec::from_parts(parts)?)
}

/// `span{z^i : i < ℓ}` with `Δ(z^n) = Σ (n choose i)_q z^i ⊗ z^{n−i}`.
pub fn build_taft_r(q: &Scalar) -> Result<CoalgebraSpec, FamilyError> {
    let ell = match multiplicative_order(q)? {
        MultOrder::Finite(l) if l >= 2 => l as u32,
        _ => {
            return Err(violation(
                "root-of-unity",
                "q must be a root of unity of order at least 2",
            ))
        }
    };
    let field = match q.ell() {
        Some(l) => FieldContext::cyclotomic(l)?,
        None => FieldContext::Rational,
    };
    let mut delta = Vec::new();
    for n in 0..ell {
        let mut row = Vec::new();
        for i in 0..=n {
            let c = q_binomial(n as u64, i as u64, q)?;
            if !c.is_zero() {
                row.push((i, n - i, c));
            }
        }
        delta.push(row);
    }
    let parts = SpecParts {
        field,
        labels: (0..ell)
            .map(|i| mono_label(&GroupStructure::trivial(), &Mono { g: vec![], z: i, w: 0 }))
            .collect(),
        delta,
        counit: (0..ell)
            .map(|i| if i == 0 { Scalar::one() } else { Scalar::zero() })
            .collect(),
        grouplikes: vec![Grouplike {
            basis: 0,
            element: vec![],
        }],
        group: Some(GroupStructure::trivial()),
        grading: (0..ell).map(|i| vec![i as i64]).collect(),
        z_coord: 0,
        meta: SpecMeta {
            name: format!("R(q={q})"),
            ..Default::default()
        },
        hopf: Some(identity_tables(ell as usize)),
    };
    Ok(CoalgebraSpec::from_parts(parts)?)
}

fn mono_label(grp: &GroupStructure, m: &Mono) -> String {
    let mut parts = Vec::new();
    let gl = grp.label(&m.g);
    if gl != "1" || (m.z == 0 && m.w == 0) {
        parts.push(gl);
    }
    for (name, k) in [("z", m.z), ("w", m.w)] {
        match k {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{k}")),
        }
    }
    parts.join(" ")
}

struct Shape {
    name: String,
    field: FieldContext,
    w_ell: Option<u32>,
    truncated: bool,
    exact: Option<i64>,
    window: Option<(i64, i64)>,
}

fn to_comb(index: &HashMap<Mono, u32>, x: &Elem) -> Option<LinComb> {
    x.iter().map(|(m, c)| index.get(m).map(|&i| (i, c.clone()))).collect()
}

/// Assembles a spec from a PBW algebra and a Δ-relevant monomial basis.
fn pbw_spec(alg: &PbwAlgebra, basis: Vec<Mono>, shape: Shape) -> Result<CoalgebraSpec, FamilyError> {
    let grp = &alg.group;
    let index: HashMap<Mono, u32> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i as u32)).collect();
    let dz = alg.delta_z();
    let dw = if alg.w.is_some() { Some(alg.delta_w()?) } else { None };
    let max_i = basis.iter().map(|m| m.z).max().unwrap_or(0);
    let max_j = basis.iter().map(|m| m.w).max().unwrap_or(0);
    let mut powers: HashMap<(u32, u32), Tensor> = HashMap::new();
    for j in 0..=max_j {
        let base = if j == 0 {
            alg.tensor_unit()
        } else {
            alg.mul_tensor(dw.as_ref().expect("w layer"), &powers[&(0, j - 1)])?
        };
        powers.insert((0, j), base);
        for i in 1..=max_i {
            let p = alg.mul_tensor(&dz, &powers[&(i - 1, j)])?;
            powers.insert((i, j), p);
        }
    }
    let mut dropped = 0usize;
    let mut delta = Vec::with_capacity(basis.len());
    for m in &basis {
        let p = &powers[&(m.z, m.w)];
        let mut row = Vec::with_capacity(p.len());
        for ((a, b), c) in p {
            let la = Mono {
                g: grp.mul(&m.g, &a.g),
                z: a.z,
                w: a.w,
            };
            let lb = Mono {
                g: grp.mul(&m.g, &b.g),
                z: b.z,
                w: b.w,
            };
            match (index.get(&la), index.get(&lb)) {
                (Some(&x), Some(&y)) => row.push((x, y, c.clone())),
                _ => dropped += 1,
            }
        }
        row.sort_by_key(|t| (t.0, t.1));
        delta.push(row);
    }
    let degree = |m: &Mono| m.z as i64 + shape.w_ell.map_or(0, |l| (l * m.w) as i64);
    let graded = delta.iter().zip(&basis).all(|(row, m)| {
        row.iter()
            .all(|(x, y, _)| degree(&basis[*x as usize]) + degree(&basis[*y as usize]) == degree(m))
    });
    let grading: Vec<Vec<i64>> = basis.iter().map(|m| vec![if graded { degree(m) } else { 0 }]).collect();
    let grouplikes: Vec<Grouplike> = basis
        .iter()
        .enumerate()
        .filter(|(_, m)| m.z == 0 && m.w == 0)
        .map(|(i, m)| Grouplike {
            basis: i,
            element: m.g.clone(),
        })
        .collect();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for g in &grouplikes {
        let ge = alg.group_elem(&g.element);
        let mut lrow = Vec::with_capacity(basis.len());
        let mut rrow = Vec::with_capacity(basis.len());
        for m in &basis {
            let me = alg.mono(m.clone());
            lrow.push(to_comb(&index, &alg.mul(&ge, &me)?));
            rrow.push(to_comb(&index, &alg.mul(&me, &ge)?));
        }
        left.push(lrow);
        right.push(rrow);
    }
    let parts = SpecParts {
        field: shape.field,
        labels: basis.iter().map(|m| mono_label(grp, m)).collect(),
        delta,
        counit: basis
            .iter()
            .map(|m| {
                if m.z == 0 && m.w == 0 {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            })
            .collect(),
        grouplikes,
        group: Some(grp.clone()),
        grading,
        z_coord: 0,
        meta: SpecMeta {
            name: shape.name,
            truncated: shape.truncated,
            exact_degree_max: if graded { shape.exact } else { None },
            dropped_triples: dropped,
            ungraded: !graded,
            window: shape.window,
        },
        hopf: Some(HopfTables { left, right }),
    };
    Ok(CoalgebraSpec::from_parts(parts)?)
}

/// Monomials `g z^i w^j` with `i ≤ zmax`, `j ≤ wmax`; over a window both
/// ends `a` and `a + n·(i + ℓj)` of the monomial must lie in the window.
fn pbw_basis(g: &GroupSpec, e: &[i64], zmax: u32, wmax: u32, w_ell: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for el in group_elements(g) {
        for j in 0..=wmax {
            for i in 0..=zmax {
                if let Some((lo, hi)) = g.window_bounds() {
                    let end = el[0] + e[0] * (i as i64 + (w_ell * j) as i64);
                    if end < lo || end > hi {
                        continue;
                    }
                }
                out.push(Mono {
                    g: el.clone(),
                    z: i,
                    w: j,
                });
            }
        }
    }
    out.sort_by(|a, b| (a.w, a.z, &a.g).cmp(&(b.w, b.z, &b.g)));
    out
}

fn base_checks(p: &FamilyParams) -> Result<(GroupStructure, Vec<i64>, Character), FamilyError> {
    p.group.check()?;
    let grp = p.group.structure();
    if p.e.len() != grp.rank() {
        return Err(violation("group", "e must have one exponent per generator"));
    }
    let chi = Character { values: p.chi.clone() };
    chi.check(&grp).map_err(|m| violation("character", m))?;
    Ok((grp.clone(), grp.reduce(p.e.clone()), chi))
}

fn order_of_q(q: &Scalar, p: &FamilyParams) -> Result<u32, FamilyError> {
    let ell = match multiplicative_order(q)? {
        MultOrder::Finite(l) if l >= 2 => l as u32,
        _ => {
            return Err(violation(
                "root-of-unity",
                format!("q = χ(e) = {q} must be a root of unity of order ≥ 2"),
            ))
        }
    };
    if let Some(l) = p.ell {
        if l != ell {
            return Err(violation("root-of-unity", format!("ℓ = {l} but χ(e) has order {ell}")));
        }
    }
    Ok(ell)
}

fn lambda_or(p: &FamilyParams, forced: i64, tag: &str) -> Result<Scalar, FamilyError> {
    let want = Scalar::from_int(forced);
    match &p.lambda {
        Some(l) if *l != want => Err(violation(tag, format!("this family requires λ = {forced}"))),
        _ => Ok(want),
    }
}

/// Whether `w_λ = z^ℓ − λ(e^ℓ − 1)` is normal in `A_G(e, χ)`: true iff
/// `λ(e^ℓ − 1) = 0` or `χ^ℓ` is trivial.
pub fn check_normality(p: &FamilyParams, lambda: &Scalar) -> Result<bool, FamilyError> {
    let (grp, e, chi) = base_checks(p)?;
    let ell = order_of_q(&chi.eval(&e), p)?;
    let el = grp.pow(&e, ell as i64);
    Ok(lambda.is_zero() || el == grp.identity() || chi.pow(ell as u64).is_trivial())
}

/// Residues `w_λ g − χ^ℓ(g) g w_λ` for each generator `g`, and
/// `w_λ z − z w_λ`, computed in `A_G(e, χ)`; all vanish iff `w_λ` is normal.
pub fn normality_residues(p: &FamilyParams, lambda: &Scalar) -> Result<Vec<Elem>, FamilyError> {
    let (grp, e, chi) = base_checks(p)?;
    let ell = order_of_q(&chi.eval(&e), p)?;
    let alg = PbwAlgebra::new(grp.clone(), e.clone(), chi.clone());
    let mut wl = alg.mono(Mono {
        g: grp.identity(),
        z: ell,
        w: 0,
    });
    add_term(&mut wl, Mono::group(grp.pow(&e, ell as i64)), -lambda.clone());
    add_term(&mut wl, Mono::group(grp.identity()), lambda.clone());
    let theta = chi.pow(ell as u64);
    let mut out = Vec::new();
    for k in 0..grp.rank() {
        let g = alg.group_elem(&grp.generator(k));
        let lhs = alg.mul(&wl, &g)?;
        let rhs = alg.mul(&g, &wl)?;
        let mut r = lhs;
        super::pbw::add_scaled(&mut r, &rhs, &-theta.eval(&grp.generator(k)));
        out.push(r);
    }
    let z = alg.gen_z();
    let mut r = alg.mul(&wl, &z)?;
    super::pbw::add_scaled(&mut r, &alg.mul(&z, &wl)?, &-Scalar::one());
    out.push(r);
    Ok(out)
}

type Tensor3 = BTreeMap<(Mono, Mono, Mono), Scalar>;

/// Checks `∂²_{e^ℓ,1}([z]^ℓ) = 0` inside `A_G(e, χ)`.
pub fn z_bracket_is_cocycle(p: &FamilyParams) -> Result<bool, FamilyError> {
    let (grp, e, chi) = base_checks(p)?;
    let ell = match p.ell {
        Some(l) => l,
        None => order_of_q(&chi.eval(&e), p)?,
    };
    let alg = PbwAlgebra::new(grp.clone(), e, chi);
    let x = alg.z_bracket(ell)?;
    let dz = alg.delta_z();
    let mut cache: HashMap<Mono, Tensor> = HashMap::new();
    let mut delta = |m: &Mono| -> Result<Tensor, FamilyError> {
        if let Some(t) = cache.get(m) {
            return Ok(t.clone());
        }
        let mut t = alg.tensor_unit();
        for _ in 0..m.z {
            t = alg.mul_tensor(&dz, &t)?;
        }
        let t: Tensor = t
            .into_iter()
            .map(|((a, b), c)| {
                (
                    (
                        Mono {
                            g: grp.mul(&m.g, &a.g),
                            ..a
                        },
                        Mono {
                            g: grp.mul(&m.g, &b.g),
                            ..b
                        },
                    ),
                    c,
                )
            })
            .collect();
        cache.insert(m.clone(), t.clone());
        Ok(t)
    };
    let g = Mono::group(grp.pow(&p.e, ell as i64));
    let h = Mono::group(grp.identity());
    let mut out = Tensor3::new();
    for ((a, b), c) in &x {
        add_term(&mut out, (g.clone(), a.clone(), b.clone()), c.clone());
        add_term(&mut out, (a.clone(), b.clone(), h.clone()), -c.clone());
        for ((a1, a2), d) in delta(a)? {
            add_term(&mut out, (a1, a2, b.clone()), -(c * &d));
        }
        for ((b1, b2), d) in delta(b)? {
            add_term(&mut out, (a.clone(), b1, b2), c * &d);
        }
    }
    Ok(out.is_empty())
}

/// Windowed `A(n, q)`: `G = Z`, `e = x^n`, `χ(x) = q`, basis
/// `{x^a z^i : i ≤ zmax, a and a + n·i in [lo, hi]}`.
pub fn build_a_windowed(n: i64, q: &Scalar, lo: i64, hi: i64, zmax: u32) -> Result<CoalgebraSpec, FamilyError> {
    let mut p = FamilyParams::new(GroupSpec::IntegersWindowed { lo, hi }, vec![n], vec![q.clone()]);
    p.z_degree_max = zmax;
    build_family(Family::A, &p)
}

pub fn build_family(fam: Family, p: &FamilyParams) -> Result<CoalgebraSpec, FamilyError> {
    match prepare(fam, p)? {
        Prepared::Spec(s) => Ok(s),
        Prepared::Pbw(alg, basis, shape) => pbw_spec(&alg, basis, shape),
    }
}

enum Prepared {
    Spec(CoalgebraSpec),
    Pbw(PbwAlgebra, Vec<Mono>, Shape),
}

fn prepare(fam: Family, p: &FamilyParams) -> Result<Prepared, FamilyError> {
    let field = p.field()?;
    match fam {
        Family::Group => return Ok(Prepared::Spec(build_group_algebra(&p.group, field)?)),
        Family::U => return Ok(Prepared::Spec(build_symmetric_coalgebra(p.sym_d, p.sym_n, field)?)),
        Family::TaftR => {
            let (_, e, chi) = base_checks(p)?;
            return Ok(Prepared::Spec(build_taft_r(&chi.eval(&e))?));
        }
        _ => {}
    }
    let (grp, e, chi) = base_checks(p)?;
    let q = chi.eval(&p.e);
    let window = p.group.window_bounds();
    let gdesc = describe_group(&p.group);
    let mut alg = PbwAlgebra::new(grp.clone(), e.clone(), chi.clone());
    match fam {
        Family::A | Family::C => {
            if fam == Family::C {
                if !q.is_one() {
                    return Err(violation("chi-e-trivial", format!("C family needs χ(e) = 1, got {q}")));
                }
                let tau = TwistedAdditive {
                    values: p.tau.clone(),
                    twist: chi.clone(),
                };
                tau.check(&grp)
                    .map_err(|m| violation("twisted-cocycle", format!("τ: {m}")))?;
                alg.tau = Some(tau);
            }
            alg.bound_z = p.z_degree_max;
            alg.bound_w = 0;
            let basis = pbw_basis(&p.group, &e, p.z_degree_max, 0, 0);
            let shape = Shape {
                name: format!("{fam}[{gdesc}] zdeg<={}", p.z_degree_max),
                field,
                w_ell: None,
                truncated: true,
                exact: Some(p.z_degree_max as i64),
                window,
            };
            return Ok(Prepared::Pbw(alg, basis, shape));
        }
        _ => {}
    }

    let ell = order_of_q(&q, p)?;
    let el = grp.pow(&e, ell as i64);
    let el_is_one = el == grp.identity();
    let chi_l = chi.pow(ell as u64);
    let lambda = match fam {
        Family::E => p.lambda.clone().unwrap_or_else(Scalar::zero),
        Family::F => lambda_or(p, 0, "lambda-zero")?,
        Family::L | Family::N | Family::P => lambda_or(p, 0, "lambda-zero")?,
        Family::O | Family::Q => lambda_or(p, 1, "lambda-one")?,
        _ => unreachable!(),
    };
    if !check_normality(p, &lambda)? {
        return Err(violation(
            "normality",
            "w_λ is not normal: need λ(e^ℓ−1) = 0 or χ^ℓ trivial",
        ));
    }
    alg.quotient = Some((ell, lambda.clone()));
    alg.bound_z = ell - 1;
    if fam == Family::E {
        alg.bound_w = 0;
        let basis = pbw_basis(&p.group, &e, ell - 1, 0, 0);
        let shape = Shape {
            name: format!("E[{gdesc}] ell={ell} lambda={lambda}"),
            field,
            w_ell: None,
            truncated: window.is_some(),
            exact: window.map(|_| ell as i64 - 1),
            window,
        };
        return Ok(Prepared::Pbw(alg, basis, shape));
    }

    let need_chi_l_trivial = |tag: &str| -> Result<(), FamilyError> {
        if chi_l.is_trivial() {
            Ok(())
        } else {
            Err(violation(tag, "χ^ℓ must be trivial"))
        }
    };
    let need_el_nontrivial = |tag: &str| -> Result<(), FamilyError> {
        if el_is_one {
            Err(violation(tag, "e^ℓ must differ from 1"))
        } else {
            Ok(())
        }
    };
    let id = grp.identity();
    let zmono = |g: Vec<i64>| Mono { g, z: 1, w: 0 };
    let additive = |tag: &str| -> Result<TwistedAdditive, FamilyError> {
        let eta = TwistedAdditive {
            values: p.eta.clone(),
            twist: Character::trivial(grp.rank()),
        };
        eta.check(&grp)
            .map_err(|m| violation(tag, format!("η must be additive: {m}")))?;
        Ok(eta)
    };
    let (eta, delta_z) = match fam {
        Family::F => {
            if p.eta.iter().any(|v| !v.is_zero()) || !p.xi.is_zero() {
                return Err(violation("delta-zero", "F family has δ = 0"));
            }
            (None, Elem::new())
        }
        Family::L => {
            let eta = TwistedAdditive {
                values: p.eta.clone(),
                twist: chi_l.clone(),
            };
            eta.check(&grp)
                .map_err(|m| violation("eta-twisted-cocycle", format!("η: {m}")))?;
            if !eta.eval(&e).is_zero() {
                return Err(violation("eta-e-zero", "L family needs η(e) = 0"));
            }
            if p.eta.iter().all(|v| v.is_zero()) {
                return Err(violation("eta-nonzero", "L family needs η ≠ 0"));
            }
            (Some(eta), Elem::new())
        }
        Family::N => {
            if !el_is_one {
                return Err(violation("e-ell-one", "N family needs e^ℓ = 1"));
            }
            need_chi_l_trivial("chi-ell-trivial")?;
            let mut d = Elem::new();
            add_term(&mut d, zmono(id.clone()), p.xi.clone());
            (None, d)
        }
        Family::O => {
            need_el_nontrivial("e-ell-nontrivial")?;
            need_chi_l_trivial("chi-ell-trivial")?;
            let eta = additive("eta-additive")?;
            let qm1 = &q - &Scalar::one();
            if eta.eval(&e) != qm1 {
                return Err(violation(
                    "eta-e-normalization",
                    format!("O family needs η(e) = q − 1 = {qm1}"),
                ));
            }
            let mut d = Elem::new();
            add_term(&mut d, zmono(el.clone()), qm1);
            (Some(eta), d)
        }
        Family::P => {
            need_el_nontrivial("e-ell-nontrivial")?;
            need_chi_l_trivial("chi-ell-trivial")?;
            let eta = additive("eta-additive")?;
            let mut d = Elem::new();
            add_term(&mut d, zmono(id.clone()), -eta.eval(&e));
            (Some(eta), d)
        }
        Family::Q => {
            need_el_nontrivial("e-ell-nontrivial")?;
            if grp.pow(&e, 2 * ell as i64) != id {
                return Err(violation("e-2ell-one", "Q family needs e^{2ℓ} = 1"));
            }
            need_chi_l_trivial("chi-ell-trivial")?;
            let eta = additive("eta-additive")?;
            if !eta.eval(&e).is_zero() {
                return Err(violation("eta-e-zero", "Q family forces η(e) = 0"));
            }
            let qm1 = &q - &Scalar::one();
            let mut d = Elem::new();
            add_term(&mut d, zmono(id.clone()), qm1.clone());
            add_term(&mut d, zmono(el.clone()), qm1);
            (Some(eta), d)
        }
        _ => unreachable!(),
    };
    let mut kp = p.clone();
    kp.ell = Some(ell);
    if !z_bracket_is_cocycle(&kp)? {
        return Err(violation("z-bracket-cocycle", "[z]^ℓ is not a 2-cocycle"));
    }
    let eta = eta.filter(|t| t.values.iter().any(|v| !v.is_zero()));
    alg.w = Some(WLayer { ell, eta, delta_z });
    alg.bound_w = p.w_degree_max;
    let basis = pbw_basis(&p.group, &e, ell - 1, p.w_degree_max, ell);
    let shape = Shape {
        name: format!("{fam}[{gdesc}] ell={ell} wdeg<={}", p.w_degree_max),
        field,
        w_ell: Some(ell),
        truncated: true,
        exact: Some((ell * (p.w_degree_max + 1)) as i64 - 1),
        window,
    };
    Ok(Prepared::Pbw(alg, basis, shape))
}

/// The braided part `R` (coinvariants of `gr H`) with its coradical degrees
/// and the top-degree part of the product, up to the family's exact
/// degree bound.
pub fn braided_part(fam: Family, p: &FamilyParams) -> Result<BraidedPart, FamilyError> {
    let (alg, basis, shape) = match prepare(fam, p)? {
        Prepared::Pbw(alg, basis, shape) => (alg, basis, shape),
        Prepared::Spec(s) => return Ok(braided_part_of_connected(fam, &s)),
    };
    let id = alg.group.identity();
    let ell = shape.w_ell.unwrap_or(0);
    let degree = |m: &Mono| (m.z + ell * m.w) as i64;
    let r: Vec<Mono> = basis.into_iter().filter(|m| m.g == id).collect();
    let max_degree = match (fam, shape.exact) {
        (Family::E, _) => alg.quotient.as_ref().map_or(0, |q| q.0 as i64 - 1),
        (_, Some(m)) => m,
        (_, None) => r.iter().map(&degree).max().unwrap_or(0),
    };
    let index: HashMap<&Mono, usize> = r.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut products = BTreeMap::new();
    for (i, a) in r.iter().enumerate() {
        for (j, b) in r.iter().enumerate() {
            let d = degree(a) + degree(b);
            if degree(a) == 0 || degree(b) == 0 || d > max_degree {
                continue;
            }
            let prod = alg.mul(&alg.mono(a.clone()), &alg.mono(b.clone()))?;
            let top: LinComb = prod
                .iter()
                .filter(|(m, _)| m.g == id && degree(m) == d)
                .map(|(m, c)| (index[m] as u32, c.clone()))
                .collect();
            products.insert((i, j), top);
        }
    }
    Ok(BraidedPart {
        labels: r.iter().map(|m| mono_label(&alg.group, m)).collect(),
        degrees: r.iter().map(&degree).collect(),
        products,
        max_degree,
    })
}

/// Group algebras have `R = k`; the symmetric coalgebra is its own braided
/// part with the polynomial product; the Taft piece is `k[z]/(z^ℓ)`.
fn braided_part_of_connected(fam: Family, s: &CoalgebraSpec) -> BraidedPart {
    let one = s.grouplike_identity();
    let keep: Vec<usize> = match fam {
        Family::Group => one.map(|g| vec![s.grouplike_basis(g)]).unwrap_or_default(),
        _ => (0..s.dim()).collect(),
    };
    let exps: Vec<Vec<i64>> = keep.iter().map(|&b| s.grading(b).to_vec()).collect();
    let index: HashMap<&Vec<i64>, usize> = exps.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let degrees: Vec<i64> = exps.iter().map(|e| e[s.z_coord()]).collect();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let mut products = BTreeMap::new();
    for i in 0..keep.len() {
        for j in 0..keep.len() {
            let d = degrees[i] + degrees[j];
            if degrees[i] == 0 || degrees[j] == 0 || d > max_degree {
                continue;
            }
            // monomial product; the exponent vectors add
            let sum: Vec<i64> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a + b).collect();
            let v = match (fam, index.get(&sum)) {
                (Family::U, Some(&k)) => vec![(k as u32, Scalar::one())],
                _ => Vec::new(),
            };
            products.insert((i, j), v);
        }
    }
    BraidedPart {
        labels: keep.iter().map(|&b| s.label(b).to_string()).collect(),
        degrees,
        products,
        max_degree,
    }
}
