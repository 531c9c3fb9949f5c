use std::path::{Path, PathBuf};

use clap::Args;
use pointed_cohomology::coalgebra::{from_json, CoalgebraSpec, GroupStructure};
use pointed_cohomology::families::{build_family, Family, FamilyParams, GroupSpec};
use pointed_cohomology::Scalar;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

pub const N_MAX_LIMIT: usize = 6;

/// Job options. Every field can come from the command line or from a JSON
/// config file with the same key (underscores for dashes).
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobOptions {
    /// JSON config file; command-line flags win over its entries.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Family name (group, U, A, C, E/taft, F, L, N, O, P, Q, taft-r), or `all` for verify.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Coalgebra JSON to load instead of building a family.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<PathBuf>,
    /// Family parameter JSON, used as the base before the flags below.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<PathBuf>,
    /// `Z/2`, `Z/4xZ/4`, or a window `Z[-3,3]`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Central grouplike as a label (`x`, `x^2y`, `1`) or exponents (`1,0`).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<String>,
    /// Character values on the generators, comma separated (`zeta3`, `-1,zeta4`).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zdeg_max: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wdeg_max: Option<u32>,
    /// Symmetric coalgebra: number of variables.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sym_d: Option<usize>,
    /// Symmetric coalgebra: total degree bound.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sym_n: Option<u32>,

    /// `all`, `into-one`, or a list `g:h,g:h` of grouplike labels.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    /// Degree bound on cohomology slices.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_max: Option<i64>,
    /// Window radii for stabilize, comma separated.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<String>,
    /// Checks to run, comma separated.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<String>,
    /// Check suite for verify: invariants, ring, oracle, all.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Samples per sampled check.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Include cocycle representatives in the report.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<bool>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// Golden report to compare against.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub golden: Option<PathBuf>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn flag_name(key: &str) -> String {
    format!("--{}", key.replace('_', "-"))
}

impl JobOptions {
    /// Merges the config file named by `--config`, if any. Flags win; every
    /// overridden entry is logged.
    pub fn resolve(self) -> Result<JobOptions, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        let file: Value = serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        let Value::Object(file) = file else {
            return Err(config_err(format!("{}: expected a JSON object", path.display())));
        };
        // validate the file on its own so unknown keys are reported against it
        serde_json::from_value::<JobOptions>(Value::Object(file.clone()))
            .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let Value::Object(cli) = serde_json::to_value(&self).expect("options serialize") else {
            unreachable!()
        };
        let mut merged = Map::new();
        for (k, v) in file {
            let v = match (k.as_str(), v) {
                ("spec" | "params" | "out" | "csv" | "golden", Value::String(p)) => {
                    Value::String(base.join(p).to_string_lossy().into_owned())
                }
                (_, v) => v,
            };
            merged.insert(k, v);
        }
        for (k, v) in cli {
            if let Some(old) = merged.get(&k) {
                if *old != v {
                    log::info!("{} {} overrides config value {}", flag_name(&k), v, old);
                }
            }
            merged.insert(k, v);
        }
        let mut out: JobOptions =
            serde_json::from_value(Value::Object(merged)).map_err(|e| config_err(e.to_string()))?;
        out.config = None;
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(n) = self.nmax {
            if n > N_MAX_LIMIT {
                return Err(config_err(format!("--nmax {n} exceeds the limit {N_MAX_LIMIT}")));
            }
        }
        if let Some(d) = self.deg_max {
            if d < 0 {
                return Err(config_err("--deg-max must be nonnegative"));
            }
        }
        if self.spec.is_some() && (self.family.is_some() || self.params.is_some()) {
            return Err(config_err("--spec excludes --family and --params"));
        }
        Ok(())
    }

    pub fn nmax_or(&self, default: usize) -> usize {
        self.nmax.unwrap_or(default)
    }

    pub fn family(&self) -> Result<Family, CliError> {
        let name = self
            .family
            .as_deref()
            .ok_or_else(|| config_err("--family or --spec is required"))?;
        name.parse().map_err(|e| config_err(format!("{e}")))
    }

    /// Family parameters: the `--params` file or the family's example set,
    /// then every parameter flag on top.
    pub fn family_params(&self, fam: Family) -> Result<FamilyParams, CliError> {
        let mut p = match &self.params {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?
            }
            None => FamilyParams::example(fam),
        };
        if let Some(g) = &self.group {
            let group: GroupSpec = g.parse().map_err(|e| config_err(format!("{e}")))?;
            p = regroup(&p, group, fam);
        }
        let gs = p.group.structure();
        if let Some(e) = &self.e {
            p.e = parse_element(&gs, e)?;
        }
        if let Some(s) = &self.chi {
            p.chi = scalar_list(s, gs.rank(), "chi")?;
        }
        if let Some(s) = &self.tau {
            p.tau = scalar_list(s, gs.rank(), "tau")?;
        }
        if let Some(s) = &self.eta {
            p.eta = scalar_list(s, gs.rank(), "eta")?;
        }
        if let Some(l) = self.ell {
            p.ell = Some(l);
        }
        if let Some(s) = &self.lambda {
            p.lambda = Some(scalar(s, "lambda")?);
        }
        if let Some(s) = &self.xi {
            p.xi = scalar(s, "xi")?;
        }
        if let Some(z) = self.zdeg_max {
            p.z_degree_max = z;
        }
        if let Some(w) = self.wdeg_max {
            p.w_degree_max = w;
        }
        if let Some(d) = self.sym_d {
            p.sym_d = d;
        }
        if let Some(n) = self.sym_n {
            p.sym_n = n;
        }
        Ok(p)
    }

    /// The coalgebra the job runs on.
    pub fn load_spec(&self) -> Result<CoalgebraSpec, CliError> {
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
            return from_json(&text).map_err(|e| CliError::Build(format!("{}: {e}", path.display())));
        }
        let fam = self.family()?;
        let p = self.family_params(fam)?;
        build_family(fam, &p).map_err(|e| CliError::Build(e.to_string()))
    }

    /// Checks requested with `--checks`, or the given defaults.
    pub fn check_list(&self, default: &[&str]) -> Vec<String> {
        match &self.checks {
            Some(s) => s
                .split(',')
                .map(|c| c.trim().to_string())
                .filter(|c| !c.is_empty())
                .collect(),
            None => default.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn require_seed(&self, why: &str) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| config_err(format!("--seed is required for {why}")))
    }

    pub fn radii(&self) -> Result<Vec<i64>, CliError> {
        let s = self.radii.as_deref().unwrap_or("2,4,8");
        s.split(',')
            .map(|r| {
                r.trim()
                    .parse::<i64>()
                    .map_err(|_| config_err(format!("bad radius {r:?}")))
            })
            .collect()
    }
}

/// Keeps the non-group parameters of `p` and fills group-shaped ones with
/// defaults for the new group.
fn regroup(p: &FamilyParams, group: GroupSpec, fam: Family) -> FamilyParams {
    let mut q = match (&group, fam) {
        (GroupSpec::FiniteAbelian(f), Family::E | Family::F | Family::N | Family::TaftR) if f.len() == 1 => {
            let mut t = FamilyParams::taft(f[0] as u32);
            t.group = group.clone();
            t
        }
        _ => {
            let gs = group.structure();
            let mut e = gs.identity();
            if let Some(first) = e.first_mut() {
                *first = 1;
            }
            let chi = vec![Scalar::from_int(1); gs.rank()];
            FamilyParams::new(group.clone(), e, chi)
        }
    };
    q.lambda = p.lambda.clone();
    q.xi = p.xi.clone();
    q.z_degree_max = p.z_degree_max;
    q.w_degree_max = p.w_degree_max;
    q.sym_d = p.sym_d;
    q.sym_n = p.sym_n;
    q
}

fn scalar(s: &str, what: &str) -> Result<Scalar, CliError> {
    Scalar::parse(s).map_err(|e| config_err(format!("--{what}: {e}")))
}

fn scalar_list(s: &str, rank: usize, what: &str) -> Result<Vec<Scalar>, CliError> {
    let v: Vec<Scalar> = s.split(',').map(|x| scalar(x, what)).collect::<Result<_, _>>()?;
    if v.len() != rank {
        return Err(config_err(format!("--{what} needs {rank} values, got {}", v.len())));
    }
    Ok(v)
}

fn parse_element(gs: &GroupStructure, s: &str) -> Result<Vec<i64>, CliError> {
    if s.contains(',') {
        let v: Vec<i64> = s
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| config_err(format!("--e: bad exponent {x:?}")))
            })
            .collect::<Result<_, _>>()?;
        if v.len() != gs.rank() {
            return Err(config_err(format!("--e needs {} exponents", gs.rank())));
        }
        return Ok(v);
    }
    gs.parse_label(s)
        .ok_or_else(|| config_err(format!("--e: cannot parse group element {s:?}")))
}
