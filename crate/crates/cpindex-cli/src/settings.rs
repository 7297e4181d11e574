//! Effective tolerances and oracle configuration.
//!
//! Precedence, lowest first: library defaults, the file's `options`,
//! `MASLOV_TOL_OVERRIDE`, command-line flags.

use cpindex::oracle::OracleConfig;
use cpindex::Tolerances;
use serde::Serialize;

use crate::error::CliError;
use crate::num::Num;
use crate::problem::Options;

pub const TOL_OVERRIDE_ENV: &str = "MASLOV_TOL_OVERRIDE";

/// Command-line overrides shared by `analyze` and `batch`.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub tol_eig: Option<f64>,
    pub tol_rank: Option<f64>,
    pub grid: Option<usize>,
    pub no_oracle: bool,
    pub timing: bool,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub tol: Tolerances<f64>,
    /// `None` when the oracle is disabled.
    pub oracle: Option<OracleConfig>,
    pub timing: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SettingsOut {
    pub tolerances: TolerancesOut,
    pub oracle: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TolerancesOut {
    pub sym: Num,
    pub null: Num,
    pub eig: Num,
    pub rank: Num,
    pub recon: Num,
    pub merge: Num,
}

fn set(tol: &mut Tolerances<f64>, key: &str, value: f64) -> Result<(), CliError> {
    if !(value.is_finite() && value > 0.0) {
        return Err(CliError::schema(format!("tolerance {key} must be positive and finite, got {value}")));
    }
    let slot = match key.strip_prefix("tol_").unwrap_or(key) {
        "sym" => &mut tol.sym,
        "null" => &mut tol.null,
        "eig" => &mut tol.eig,
        "rank" => &mut tol.rank,
        "recon" => &mut tol.recon,
        "merge" => &mut tol.merge,
        other => return Err(CliError::schema(format!("unknown tolerance `{other}`"))),
    };
    *slot = value;
    Ok(())
}

/// Applies `key=value` pairs separated by commas, e.g. `eig=1e-6,rank=1e-10`.
pub fn apply_override(tol: &mut Tolerances<f64>, spec: &str) -> Result<(), CliError> {
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::schema(format!("{TOL_OVERRIDE_ENV}: expected key=value, got `{item}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::schema(format!("{TOL_OVERRIDE_ENV}: `{value}` is not a number")))?;
        set(tol, key.trim(), value)?;
    }
    Ok(())
}

impl Settings {
    pub fn resolve(options: &Options, env: Option<&str>, flags: &Flags) -> Result<Self, CliError> {
        let mut tol = Tolerances::<f64>::default();
        for (key, value) in [
            ("sym", options.tol_sym),
            ("null", options.tol_null),
            ("eig", options.tol_eig),
            ("rank", options.tol_rank),
            ("recon", options.tol_recon),
            ("merge", options.tol_merge),
        ] {
            if let Some(v) = value {
                set(&mut tol, key, v)?;
            }
        }
        if let Some(spec) = env {
            apply_override(&mut tol, spec)?;
        }
        if let Some(v) = flags.tol_eig {
            set(&mut tol, "eig", v)?;
        }
        if let Some(v) = flags.tol_rank {
            set(&mut tol, "rank", v)?;
        }
        let enabled = options.oracle.unwrap_or(true) && !flags.no_oracle;
        let oracle = enabled.then(|| {
            let cfg = OracleConfig::default();
            match flags.grid.or(options.grid) {
                Some(grid) => cfg.with_grid(grid),
                None => cfg,
            }
        });
        Ok(Settings { tol, oracle, timing: flags.timing })
    }

    pub fn describe(&self) -> SettingsOut {
        let t = &self.tol;
        SettingsOut {
            tolerances: TolerancesOut {
                sym: Num(t.sym),
                null: Num(t.null),
                eig: Num(t.eig),
                rank: Num(t.rank),
                recon: Num(t.recon),
                merge: Num(t.merge),
            },
            oracle: self.oracle.is_some(),
            grid: self.oracle.map(|c| c.grid),
        }
    }
}
