//! Effective run configuration: defaults, then the JSON config file, then
//! command-line flags, later layers overriding earlier ones.

use psep::entropy::{EntropyKind, LogBase};
use psep::measures::{LevelICombiner, LevelIICombiner, PureMeasureSpec};
use psep::roof::{EnsembleSize, RoofConfig, INDICATOR_THRESHOLD};
use psep::{Error, Result};
use serde::Deserialize;

use crate::{Cli, Format};

#[derive(Clone, Debug)]
pub struct Effective {
    pub format: Format,
    pub log_base: LogBase,
    pub spec: PureMeasureSpec,
    pub roof: RoofConfig,
    pub threshold: f64,
    pub seed: u64,
}

/// Config file schema: every field optional, RoofConfig fields at top level.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct FileConfig {
    format: Option<String>,
    log_base: Option<String>,
    spec_base: Option<String>,
    combiner_i: Option<String>,
    combiner_ii: Option<String>,
    ensemble_size: Option<serde_json::Value>,
    restarts: Option<usize>,
    max_iterations: Option<usize>,
    gradient_step: Option<f64>,
    convergence_tol: Option<f64>,
    seed: Option<u64>,
    threshold: Option<f64>,
}

pub fn resolve(cli: &Cli) -> Result<Effective> {
    let file = match &cli.config {
        None => FileConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("bad config file: {e}")))?
        }
    };

    let format = match &cli.format {
        Some(f) => *f,
        None => match file.format.as_deref() {
            None | Some("text") => Format::Text,
            Some("json") => Format::Json,
            Some("dot") => Format::Dot,
            Some(other) => return Err(Error::Config(format!("unknown format '{other}'"))),
        },
    };
    let log_base = parse_log_base(
        cli.log_base
            .as_deref()
            .or(file.log_base.as_deref())
            .unwrap_or("e"),
    )?;

    let base = parse_spec_base(
        cli.spec_base
            .as_deref()
            .or(file.spec_base.as_deref())
            .unwrap_or("vn"),
    )?
    .with_base(log_base);
    let level_i = parse_combiner_i(
        cli.combiner_i
            .as_deref()
            .or(file.combiner_i.as_deref())
            .unwrap_or("halfsum"),
    )?;
    let level_ii = parse_combiner_ii(
        cli.combiner_ii
            .as_deref()
            .or(file.combiner_ii.as_deref())
            .unwrap_or("min"),
    )?;
    let spec = PureMeasureSpec {
        base,
        level_i,
        level_ii,
    };
    spec.validate()?;

    let defaults = RoofConfig::default();
    let ensemble_size = match (&cli.m, &file.ensemble_size) {
        (Some(m), _) => EnsembleSize::Fixed(*m),
        (None, Some(serde_json::Value::String(s))) if s == "auto" => EnsembleSize::Auto,
        (None, Some(serde_json::Value::Number(n))) => EnsembleSize::Fixed(
            n.as_u64()
                .ok_or_else(|| Error::Config("ensembleSize must be a positive integer".into()))?
                as usize,
        ),
        (None, Some(_)) => {
            return Err(Error::Config("ensembleSize must be \"auto\" or an integer".into()))
        }
        (None, None) => defaults.ensemble_size,
    };
    let seed = cli.seed.or(file.seed).unwrap_or(defaults.seed);
    let roof = RoofConfig {
        ensemble_size,
        restarts: cli.restarts.or(file.restarts).unwrap_or(defaults.restarts),
        max_iterations: file.max_iterations.unwrap_or(defaults.max_iterations),
        gradient_step: file.gradient_step.unwrap_or(defaults.gradient_step),
        convergence_tol: cli
            .tol
            .or(file.convergence_tol)
            .unwrap_or(defaults.convergence_tol),
        seed,
    };
    roof.validate()?;

    Ok(Effective {
        format,
        log_base,
        spec,
        roof,
        threshold: file.threshold.unwrap_or(INDICATOR_THRESHOLD),
        seed,
    })
}

fn parse_log_base(s: &str) -> Result<LogBase> {
    match s {
        "e" => Ok(LogBase::E),
        "2" => Ok(LogBase::Two),
        other => Err(Error::Config(format!("log base must be 'e' or '2', got '{other}'"))),
    }
}

fn parse_spec_base(s: &str) -> Result<EntropyKind> {
    if s == "vn" {
        return Ok(EntropyKind::von_neumann());
    }
    if let Some(q) = s.strip_prefix("tsallis:") {
        return Ok(EntropyKind::tsallis(parse_q(q)?));
    }
    if let Some(q) = s.strip_prefix("renyi:") {
        return Ok(EntropyKind::renyi(parse_q(q)?));
    }
    Err(Error::Config(format!(
        "spec base must be vn, tsallis:q or renyi:q, got '{s}'"
    )))
}

fn parse_combiner_i(s: &str) -> Result<LevelICombiner> {
    match s {
        "halfsum" => Ok(LevelICombiner::HalfSum),
        "sum" => Ok(LevelICombiner::Sum),
        "nonmonotone-product" => Ok(LevelICombiner::NonMonotoneProduct),
        _ => {
            if let Some(q) = s.strip_prefix("qsum:") {
                Ok(LevelICombiner::QSum(parse_q(q)?))
            } else if let Some(q) = s.strip_prefix("qmean:") {
                Ok(LevelICombiner::QMean(parse_q(q)?))
            } else {
                Err(Error::Config(format!("unknown Level-I combiner '{s}'")))
            }
        }
    }
}

fn parse_combiner_ii(s: &str) -> Result<LevelIICombiner> {
    match s {
        "min" => Ok(LevelIICombiner::Min),
        "magicg" => Ok(LevelIICombiner::MagicG),
        _ => {
            if let Some(q) = s.strip_prefix("qsum:") {
                Ok(LevelIICombiner::QSum(parse_q(q)?))
            } else if let Some(q) = s.strip_prefix("qmean:") {
                Ok(LevelIICombiner::QMean(parse_q(q)?))
            } else {
                Err(Error::Config(format!("unknown Level-II combiner '{s}'")))
            }
        }
    }
}

fn parse_q(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Config(format!("bad q value '{s}'")))
}
