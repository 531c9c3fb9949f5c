use std::collections::BTreeMap;
use std::path::Path;

use pointed_cohomology::coalgebra::{to_json, CoalgebraSpec, GroupStructure};
use pointed_cohomology::cobar::{
    check_d_squared, compute_report, shift_check, window_stabilize, Cobar, CohomologyRequest, PairSelection,
    SpecSummary, WordComplex,
};
use pointed_cohomology::families::{build_family, Family, GroupSpec};
use pointed_cohomology::oracle::compare_cotor_tor;
use pointed_cohomology::ring::{
    action_law_check, ad_chain_map_check, associativity_check, leibniz_check, ring_structure, unit_check,
    well_defined_check, CochainSampler, SampleCheck,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::golden::{canonicalize, golden_compare};
use crate::{CliError, CommandKind, JobOptions};

const SAMPLED_CHECKS: [&str; 6] = [
    "leibniz",
    "associativity",
    "unit",
    "ad_chain_map",
    "action_law",
    "well_defined",
];

pub fn run(kind: CommandKind, opts: JobOptions) -> Result<(), CliError> {
    let opts = opts.resolve()?;
    opts.validate()?;
    match kind {
        CommandKind::Build => build(&opts),
        CommandKind::Cohomology => cohomology(&opts),
        CommandKind::Oracle => oracle(&opts),
        CommandKind::Ring => ring(&opts),
        CommandKind::Verify => verify(&opts),
        CommandKind::Stabilize => stabilize(&opts),
    }
}

fn engine<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Build(e.to_string())
}

/// Pretty JSON with sorted keys; the bytes depend only on the content.
pub fn report_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonicalize(v)).expect("json serializes");
    s.push('\n');
    s
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

/// Writes `--out`, compares against `--golden`, then reports a failed check.
fn finish(opts: &JobOptions, report: &Value, failure: Option<String>) -> Result<(), CliError> {
    if let Some(out) = &opts.out {
        write(out, &report_text(report))?;
    }
    let diff = match &opts.golden {
        Some(g) => golden_compare(report, g)?,
        None => Vec::new(),
    };
    if let Some(f) = failure {
        return Err(CliError::Check(f));
    }
    if !diff.is_empty() {
        return Err(CliError::Golden(diff));
    }
    if opts.golden.is_some() {
        println!("golden: identical");
    }
    Ok(())
}

fn label_of(spec: &CoalgebraSpec, label: &str) -> Result<usize, CliError> {
    spec.grouplike_by_label(label.trim())
        .map_err(|_| CliError::Config(format!("no grouplike labelled {label:?} in {}", spec.name())))
}

fn identity(spec: &CoalgebraSpec) -> usize {
    spec.grouplike_identity().unwrap_or(0)
}

fn pairs(opts: &JobOptions, spec: &CoalgebraSpec, default: &str) -> Result<PairSelection, CliError> {
    let s = opts.pairs.as_deref().unwrap_or(default).trim();
    Ok(match s {
        "all" => PairSelection::All,
        "into-one" => PairSelection::IntoH(identity(spec)),
        _ if s.starts_with("into:") => PairSelection::IntoH(label_of(spec, &s[5..])?),
        _ => PairSelection::Pairs(
            s.split(',')
                .map(|p| {
                    let (g, h) = p
                        .split_once(':')
                        .ok_or_else(|| CliError::Config(format!("pair {p:?} is not g:h")))?;
                    Ok((label_of(spec, g)?, label_of(spec, h)?))
                })
                .collect::<Result<_, CliError>>()?,
        ),
    })
}

fn build(opts: &JobOptions) -> Result<(), CliError> {
    let spec = opts.load_spec()?;
    let v = spec.validate();
    let s = SpecSummary::of(&spec);
    println!(
        "{}: dim {}, {} grouplikes, field {}{}",
        s.name,
        s.dim,
        s.grouplikes,
        s.field,
        if s.truncated {
            format!(", truncated at degree {:?}", s.exact_degree_max)
        } else {
            String::new()
        }
    );
    println!("validation: {v}");
    let report: Value = serde_json::from_str(&to_json(&spec)).expect("spec json parses");
    finish(
        opts,
        &report,
        (!v.is_ok()).then(|| format!("{} fails validation", spec.name())),
    )
}

fn cohomology(opts: &JobOptions) -> Result<(), CliError> {
    let spec = opts.load_spec()?;
    let req = CohomologyRequest {
        pairs: pairs(opts, &spec, "all")?,
        n_max: opts.nmax_or(3),
        deg_max: opts.deg_max,
        with_reps: opts.reps.unwrap_or(false),
    };
    let r = compute_report(&spec, &req).map_err(engine)?;
    let mut by_h: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    let mut by_pair: BTreeMap<(usize, &str, &str), usize> = BTreeMap::new();
    for e in &r.entries {
        by_h.entry(&e.h).or_insert_with(|| vec![0; req.n_max + 1])[e.n] += e.dim;
        *by_pair.entry((e.n, &e.g, &e.h)).or_default() += e.dim;
    }
    for (h, dims) in &by_h {
        let d: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
        println!("sum over g of dim PP^n_(g,{h}), n = 0..{}: {}", req.n_max, d.join(","));
    }
    for ((n, g, h), d) in &by_pair {
        if *n > 0 && *d > 0 {
            println!("  PP^{n}_({g},{h}) = {d}");
        }
    }
    let lb = &r.pcdim_lb;
    println!(
        "PCdim >= {} (n <= {}, degree bound {:?})",
        lb.value, lb.n_max, lb.deg_max
    );
    if let Some(csv) = &opts.csv {
        write(csv, &r.to_csv())?;
    }
    finish(opts, &serde_json::to_value(&r).expect("report serializes"), None)
}

fn oracle(opts: &JobOptions) -> Result<(), CliError> {
    let spec = opts.load_spec()?;
    let sel = pairs(opts, &spec, "all")?;
    let r = compare_cotor_tor(&spec, &sel, opts.nmax_or(3), opts.deg_max).map_err(engine)?;
    println!(
        "{}: {} slices compared, {} mismatches",
        r.spec,
        r.entries.len(),
        r.mismatches
    );
    for e in r.entries.iter().filter(|e| !e.matches) {
        println!(
            "  ({},{}) n = {} degree {:?}: cotor {} tor {}",
            e.g, e.h, e.n, e.degree, e.cotor, e.tor
        );
    }
    let fail = (!r.holds()).then(|| format!("{} Cotor/Tor mismatches", r.mismatches));
    finish(opts, &serde_json::to_value(&r).expect("report serializes"), fail)
}

fn sampled(spec: &CoalgebraSpec, check: &str, samples: usize, seed: u64) -> Result<SampleCheck, CliError> {
    let r = match check {
        "leibniz" => leibniz_check(spec, samples, seed),
        "associativity" => associativity_check(spec, samples, seed),
        "unit" => unit_check(spec, samples, seed),
        "ad_chain_map" => ad_chain_map_check(spec, samples, seed),
        "action_law" => action_law_check(spec, samples, seed),
        _ => return Err(CliError::Config(format!("unknown check {check:?}"))),
    };
    r.map_err(engine)
}

fn ring(opts: &JobOptions) -> Result<(), CliError> {
    let checks = opts.check_list(&[]);
    if let Some(c) = checks.iter().find(|c| !SAMPLED_CHECKS.contains(&c.as_str())) {
        return Err(CliError::Config(format!("unknown ring check {c:?}")));
    }
    let seed = if checks.is_empty() {
        None
    } else {
        Some(opts.require_seed("sampled checks")?)
    };
    let spec = opts.load_spec()?;
    let n_max = opts.nmax_or(2);
    let table = ring_structure(&spec, n_max, opts.deg_max).map_err(engine)?;
    let nonzero = table.products.iter().filter(|p| !p.result.is_empty()).count();
    println!(
        "{}: {} classes, {} nonzero products",
        table.spec,
        table.classes.len(),
        nonzero
    );
    let samples = opts.samples.unwrap_or(50);
    let mut results = Vec::new();
    let mut failed = Vec::new();
    for c in &checks {
        let seed = seed.expect("seed checked");
        let (holds, detail) = if c == "well_defined" {
            let ok = well_defined_check(&spec, n_max, opts.deg_max, seed).map_err(engine)?;
            (ok, json!({ "seed": seed }))
        } else {
            let r = sampled(&spec, c, samples, seed)?;
            (r.holds(), serde_json::to_value(&r).expect("check serializes"))
        };
        println!("{c}: {}", if holds { "pass" } else { "FAIL" });
        if !holds {
            failed.push(c.clone());
        }
        results.push(json!({ "check": c, "holds": holds, "detail": detail }));
    }
    let report = json!({ "table": table, "checks": results });
    let fail = (!failed.is_empty()).then(|| failed.join(", "));
    finish(opts, &report, fail)
}

#[derive(Debug, Clone, Serialize)]
struct CheckResult {
    family: String,
    check: String,
    status: &'static str,
    detail: String,
}

struct Suite<'a> {
    seed: Option<u64>,
    n_max: usize,
    deg_max: Option<i64>,
    samples: usize,
    results: Vec<CheckResult>,
    family: &'a str,
}

impl Suite<'_> {
    fn record(&mut self, check: &str, status: &'static str, detail: impl Into<String>) {
        let detail = detail.into();
        println!("{:<8} {:<14} {:<7} {}", self.family, check, status, detail);
        self.results.push(CheckResult {
            family: self.family.to_string(),
            check: check.to_string(),
            status,
            detail,
        });
    }

    fn pass_fail(&mut self, check: &str, ok: bool, detail: impl Into<String>) {
        self.record(check, if ok { "pass" } else { "fail" }, detail);
    }

    fn invariants(&mut self, spec: &CoalgebraSpec) -> Result<(), CliError> {
        let v = spec.validate();
        self.pass_fail("validate", v.is_ok(), v.to_string().trim().to_string());
        let k = spec.grouplikes().len();
        let exhaustive = !spec.meta().ungraded && k <= 4;
        let mut words = 0;
        let mut bad = None;
        if exhaustive {
            'pairs: for g in 0..k {
                for h in 0..k {
                    let r = check_d_squared(spec, g, h, self.n_max, self.deg_max).map_err(engine)?;
                    words += r.words_checked;
                    if let Some(w) = r.witness {
                        bad = Some(format!("({g},{h}): {:?} -> {:?}", w.source, w.target));
                        break 'pairs;
                    }
                }
            }
            let detail = bad.unwrap_or_else(|| format!("{words} words, n <= {}", self.n_max));
            let ok = !detail.contains("->");
            self.pass_fail("d_squared", ok, detail);
        } else {
            let seed = self.seed.expect("seed checked");
            let mut samples = 0;
            for g in 0..k {
                for h in 0..k {
                    let cx = Cobar::new(spec, g, h).map_err(engine)?;
                    let mut smp = CochainSampler::new(spec, seed.wrapping_add((g * k + h) as u64));
                    for n in 0..=self.n_max {
                        let x = smp.cochain(n, g).terms;
                        samples += 1;
                        if bad.is_none() && !cx.apply_vec(&cx.apply_vec(&x)).is_empty() {
                            bad = Some(format!("({g},{h}) sample in degree {n}"));
                        }
                    }
                }
            }
            let ok = bad.is_none();
            let detail = bad.unwrap_or_else(|| format!("{samples} sampled cochains, seed {seed}"));
            self.pass_fail("d_squared", ok, detail);
        }
        if spec.hopf().is_none() || k > 4 || spec.meta().ungraded {
            self.record("shift", "skipped", "needs a graded spec over a group of order <= 4");
            return Ok(());
        }
        let mut checked = 0;
        let mut bad = None;
        for g in 0..k {
            for h1 in 0..k {
                for h2 in 0..k {
                    for n in 0..=self.n_max.min(3) {
                        match shift_check(spec, g, h1, h2, n, None) {
                            Ok(r) if r.holds() => checked += 1,
                            Ok(_) => bad = bad.or(Some(format!("g={g} ({h1},{h2}) n={n}"))),
                            Err(e) => {
                                self.record("shift", "skipped", e.to_string());
                                return Ok(());
                            }
                        }
                    }
                }
            }
        }
        let ok = bad.is_none();
        self.pass_fail("shift", ok, bad.unwrap_or_else(|| format!("{checked} isomorphisms")));
        Ok(())
    }

    fn ring(&mut self, spec: &CoalgebraSpec) -> Result<(), CliError> {
        let seed = self.seed.expect("seed checked");
        for c in &SAMPLED_CHECKS[..5] {
            match sampled(spec, c, self.samples, seed) {
                Ok(r) => {
                    let detail = r
                        .violation
                        .clone()
                        .unwrap_or_else(|| format!("{} samples, {} redrawn, seed {seed}", r.samples, r.skipped));
                    self.pass_fail(c, r.holds(), detail);
                }
                Err(e) => self.record(c, "skipped", e.to_string()),
            }
        }
        match well_defined_check(spec, 2, Some(self.deg_max.unwrap_or(3).min(3)), seed) {
            Ok(ok) => self.pass_fail("well_defined", ok, format!("n <= 2, seed {seed}")),
            Err(e) => self.record("well_defined", "skipped", e.to_string()),
        }
        Ok(())
    }

    fn oracle(&mut self, spec: &CoalgebraSpec) -> Result<(), CliError> {
        if spec.meta().ungraded {
            self.record("oracle", "skipped", "no grading");
            return Ok(());
        }
        let sel = if spec.grouplikes().len() <= 4 {
            PairSelection::All
        } else {
            PairSelection::IntoH(identity(spec))
        };
        match compare_cotor_tor(spec, &sel, self.n_max, Some(self.deg_max.unwrap_or(3))) {
            Ok(r) => {
                let detail = format!("{} slices, {} mismatches", r.entries.len(), r.mismatches);
                self.pass_fail("oracle", r.holds(), detail);
            }
            Err(e) => self.record("oracle", "skipped", e.to_string()),
        }
        Ok(())
    }
}

fn verify(opts: &JobOptions) -> Result<(), CliError> {
    let suite = opts.suite.as_deref().unwrap_or("invariants");
    let wanted: &[&str] = match suite {
        "invariants" => &["invariants"],
        "ring" => &["ring"],
        "oracle" => &["oracle"],
        "all" => &["invariants", "ring", "oracle"],
        _ => return Err(CliError::Config(format!("unknown suite {suite:?}"))),
    };
    if wanted.iter().any(|w| *w != "oracle") {
        opts.require_seed("verify suites with sampled checks")?;
    }
    let targets: Vec<(String, CoalgebraSpec)> = match opts.family.as_deref() {
        Some("all") => Family::ALL
            .iter()
            .map(|&f| {
                let p = opts.family_params(f)?;
                Ok((f.to_string(), build_family(f, &p).map_err(engine)?))
            })
            .collect::<Result<_, CliError>>()?,
        _ => {
            let spec = opts.load_spec()?;
            vec![(opts.family.clone().unwrap_or_else(|| spec.name().to_string()), spec)]
        }
    };
    let mut results = Vec::new();
    let n_max = opts.nmax_or(3);
    for (name, spec) in &targets {
        let mut s = Suite {
            seed: opts.seed,
            n_max,
            deg_max: opts.deg_max.or(Some(3)),
            samples: opts.samples.unwrap_or(50),
            results: Vec::new(),
            family: name,
        };
        for w in wanted {
            match *w {
                "invariants" => s.invariants(spec)?,
                "ring" => s.ring(spec)?,
                _ => s.oracle(spec)?,
            }
        }
        results.extend(s.results);
    }
    let failed: Vec<String> = results
        .iter()
        .filter(|r| r.status == "fail")
        .map(|r| format!("{} {}", r.family, r.check))
        .collect();
    let passed = results.iter().filter(|r| r.status == "pass").count();
    println!(
        "{passed} passed, {} failed, {} skipped",
        failed.len(),
        results.len() - passed - failed.len()
    );
    let report = json!({ "suite": suite, "seed": opts.seed, "n_max": n_max, "results": results });
    finish(opts, &report, (!failed.is_empty()).then(|| failed.join(", ")))
}

#[derive(Debug, Serialize)]
struct StepRow {
    radius: i64,
    dim: usize,
    inclusion_injective: Option<bool>,
}

fn stabilize(opts: &JobOptions) -> Result<(), CliError> {
    let fam = opts.family()?;
    let base = opts.family_params(fam)?;
    let radii = opts.radii()?;
    let z = GroupStructure::new(vec![0]);
    let elem = |s: &str| {
        z.parse_label(s)
            .ok_or_else(|| CliError::Config(format!("cannot parse {s:?} as an element of Z")))
    };
    let (g, h) = match opts.pairs.as_deref() {
        None | Some("into-one") => (None, vec![0]),
        Some(p) => {
            let (g, h) = p
                .split_once(':')
                .ok_or_else(|| CliError::Config(format!("pair {p:?} is not g:h")))?;
            (Some(elem(g)?), elem(h)?)
        }
    };
    let build = |r: i64| {
        let mut p = base.clone();
        p.group = GroupSpec::window(r);
        build_family(fam, &p)
    };
    let n_max = opts.nmax_or(2);
    let mut out = serde_json::Map::new();
    let mut unstable = Vec::new();
    for n in 1..=n_max {
        let rep = window_stabilize(build, &radii, g.as_deref(), &h, n, opts.deg_max).map_err(engine)?;
        let dims: Vec<String> = rep.steps.iter().map(|s| format!("r={}:{}", s.radius, s.dim)).collect();
        println!("n = {n}: {} stabilized at {:?}", dims.join(" "), rep.stabilized_at);
        if rep.stabilized_at.is_none() {
            unstable.push(n.to_string());
        }
        let steps: Vec<StepRow> = rep
            .steps
            .iter()
            .map(|s| StepRow {
                radius: s.radius,
                dim: s.dim,
                inclusion_injective: s.inclusion_injective,
            })
            .collect();
        out.insert(
            n.to_string(),
            json!({ "steps": steps, "stabilized_at": rep.stabilized_at }),
        );
    }
    let report = json!({ "family": fam.to_string(), "radii": radii, "deg_max": opts.deg_max, "n": out });
    if !unstable.is_empty() {
        log::warn!("no stabilization within the schedule for n = {}", unstable.join(","));
    }
    finish(opts, &report, None)
}
