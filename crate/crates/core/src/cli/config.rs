use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::basis::{basis_constant_with, BasicSequenceSpec, EstimateOptions, Preset};
use crate::constructions::{alpha_generate, convex_basis, AlphaFamily, AlphaSchedule};
use crate::error::{Error, Result};
use crate::spaces::SpaceOracle;
use crate::tolerance::Tolerances;

/// Env var naming the default output directory.
pub const OUT_DIR_ENV: &str = "WCFPP_OUT_DIR";

/// JSON experiment file. Every key is optional; command-line flags win.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// A short name (`"summing"`) or a descriptor object.
    pub space: Option<Value>,
    /// A preset name (`"canonical"`, `"shifted:2"`, ...) or a full sequence object.
    pub sequence: Option<Value>,
    pub alpha: Option<AlphaConfig>,
    pub map: Option<String>,
    pub n: Option<usize>,
    pub p_max: Option<usize>,
    pub steps: Option<usize>,
    pub terms: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub tolerances: Option<Tolerances>,
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AlphaConfig {
    Explicit(Vec<f64>),
    Geometric { r: f64, beta: f64 },
    /// Generated from `(K, inf ||x_n||, sup ||x_n||)`; missing values are
    /// computed from the sequence.
    Generate {
        #[serde(default)]
        k: Option<f64>,
        #[serde(default)]
        inf: Option<f64>,
        #[serde(default)]
        sup: Option<f64>,
    },
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("config {}: {e}", path.display())))
    }

    pub fn space(&self) -> Result<Option<SpaceOracle>> {
        self.space.as_ref().map(space_from_value).transpose()
    }
}

fn space_from_value(v: &Value) -> Result<SpaceOracle> {
    match v {
        Value::String(s) => s.parse(),
        other => serde_json::from_value(other.clone()).map_err(|e| Error::InvalidParameter(format!("space: {e}"))),
    }
}

/// The first of `flag`, `cfg` that is set.
pub fn pick<T>(flag: Option<T>, cfg: Option<T>, name: &str) -> Result<T> {
    flag.or(cfg)
        .ok_or_else(|| Error::InvalidParameter(format!("missing --{name}")))
}

/// Sequence statistics needed by the generated schedule: `K` at `n` and the
/// extreme norms of `x_1..x_{n+1}`.
pub fn sequence_stats(seq: &BasicSequenceSpec, n: usize) -> Result<(f64, f64, f64)> {
    let k = basis_constant_with(&seq.with_truncation(n), n, &EstimateOptions::default())?.upper;
    let b = seq.with_truncation(n + 1).resolve(n + 1)?;
    let norms: Vec<f64> = (0..=n).map(|j| seq.ambient.norm(b.column(j))).collect::<Result<_>>()?;
    let inf = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let sup = norms.iter().copied().fold(0.0, f64::max);
    Ok((k, inf, sup))
}

pub fn resolve_alpha(cfg: Option<&AlphaConfig>, seq: &BasicSequenceSpec, n: usize) -> Result<AlphaSchedule> {
    match cfg {
        Some(AlphaConfig::Explicit(a)) => AlphaSchedule::explicit(a.clone()),
        Some(AlphaConfig::Geometric { r, beta }) => Ok(AlphaSchedule::geometric(*r, *beta, n)),
        Some(AlphaConfig::Generate { k, inf, sup }) => {
            let (k0, i0, s0) = if k.is_some() && inf.is_some() && sup.is_some() {
                (0.0, 0.0, 0.0)
            } else {
                sequence_stats(seq, n)?
            };
            alpha_generate(k.unwrap_or(k0), inf.unwrap_or(i0), sup.unwrap_or(s0), n, AlphaFamily::Geometric)
        }
        None => {
            let (k, inf, sup) = sequence_stats(seq, n)?;
            alpha_generate(k, inf, sup, n, AlphaFamily::Geometric)
        }
    }
}

/// Parses a sequence name against an ambient space.
///
/// `canonical`, `summing`, `shifted:<p>`, `convex` and `convex:<base>` (with
/// the generated schedule), or a JSON object.
pub fn parse_sequence(name: &str, ambient: Option<SpaceOracle>, n: usize) -> Result<BasicSequenceSpec> {
    let name = name.trim();
    if name.starts_with('{') {
        let seq: BasicSequenceSpec =
            serde_json::from_str(name).map_err(|e| Error::InvalidParameter(format!("sequence: {e}")))?;
        seq.validate()?;
        return Ok(seq);
    }
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let ambient_or = |default: Option<SpaceOracle>| {
        ambient
            .clone()
            .or(default)
            .ok_or_else(|| Error::InvalidParameter(format!("sequence `{name}` needs --space")))
    };
    match (head, arg) {
        ("canonical", None) => Ok(BasicSequenceSpec::canonical(ambient_or(None)?, n)),
        ("summing", None) => BasicSequenceSpec::new(ambient_or(Some(SpaceOracle::C0Sup))?, Preset::Summing, n),
        ("shifted", Some(p)) => {
            let by = usize::from_str(p).map_err(|_| Error::InvalidParameter(format!("bad shift `{p}`")))?;
            BasicSequenceSpec::new(ambient_or(None)?, Preset::shifted(by, Preset::Canonical), n)
        }
        ("convex", base) => {
            let base = parse_sequence(base.unwrap_or("canonical"), ambient, n)?;
            let alpha = resolve_alpha(None, &base, n)?;
            convex_basis(&base, &alpha)
        }
        _ => Err(Error::InvalidParameter(format!("unknown sequence `{name}`"))),
    }
}

/// Sequence from flag, config, or `canonical`.
pub fn resolve_sequence(
    flag: Option<&str>,
    cfg: &ExperimentConfig,
    ambient: Option<SpaceOracle>,
    n: usize,
) -> Result<BasicSequenceSpec> {
    let seq = match (flag, &cfg.sequence) {
        (Some(s), _) => parse_sequence(s, ambient, n)?,
        (None, Some(Value::String(s))) => parse_sequence(s, ambient, n)?,
        (None, Some(v)) => {
            let seq: BasicSequenceSpec =
                serde_json::from_value(v.clone()).map_err(|e| Error::InvalidParameter(format!("sequence: {e}")))?;
            seq.validate()?;
            seq
        }
        (None, None) => parse_sequence("canonical", ambient, n)?,
    };
    if seq.truncation < n {
        return Ok(seq.with_truncation(n));
    }
    Ok(seq)
}

/// Default output directory: flag, config, env var, then `wcfpp-out`.
pub fn output_dir(flag: Option<PathBuf>, cfg: &ExperimentConfig) -> PathBuf {
    flag.or_else(|| cfg.output_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("wcfpp-out"))
}
