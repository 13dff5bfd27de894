//! Effective run configuration: JSON config file plus flag overrides.
//! The merged configuration is echoed into every output sidecar.

use serde::{Deserialize, Serialize};

use minent::scan::{RedVariant, ScanOptions};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { start: 1e-3, stop: 0.3, points: 200 }
    }
}

/// On-disk config schema; every field optional so partial files work.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub grid: Option<GridSpec>,
    pub cj_variant: Option<String>,
    pub red_variant: Option<String>,
    pub tolerances: Option<std::collections::BTreeMap<String, f64>>,
    pub output_dir: Option<String>,
}

/// Fully resolved configuration. `restarts` stays optional here: each
/// command substitutes its own default (100 for entropy minimization,
/// 200 for the product-vector search) and echoes the value it used.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub restarts: Option<usize>,
    pub grid: GridSpec,
    pub cj_variant: String,
    pub red_variant: RedVariant,
    pub product_tol: f64,
    pub rank_tol: f64,
    pub output_dir: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            restarts: None,
            grid: GridSpec::default(),
            cj_variant: "projector".into(),
            red_variant: RedVariant::Sp,
            product_tol: minent::tol::PRODUCT_TOL,
            rank_tol: minent::tol::RANK_TOL,
            output_dir: ".".into(),
        }
    }
}

impl RunConfig {
    /// Layer a config file over the defaults; flag overrides are applied
    /// by the caller afterwards.
    pub fn from_file(file: Option<&str>) -> Result<Self, String> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {path}: {e}"))?;
            let parsed: ConfigFile =
                serde_json::from_str(&text).map_err(|e| format!("bad config {path}: {e}"))?;
            if let Some(s) = parsed.seed {
                cfg.seed = s;
            }
            if parsed.restarts.is_some() {
                cfg.restarts = parsed.restarts;
            }
            if let Some(g) = parsed.grid {
                cfg.grid = g;
            }
            if let Some(v) = parsed.cj_variant {
                cfg.cj_variant = v;
            }
            if let Some(v) = parsed.red_variant {
                cfg.red_variant = v.parse().map_err(|e| format!("{e}"))?;
            }
            if let Some(t) = parsed.tolerances {
                if let Some(x) = t.get("product_tol") {
                    cfg.product_tol = *x;
                }
                if let Some(x) = t.get("rank_tol") {
                    cfg.rank_tol = *x;
                }
                for x in t.values() {
                    if *x <= 0.0 {
                        return Err("tolerance overrides must be positive".into());
                    }
                }
            }
            if let Some(d) = parsed.output_dir {
                cfg.output_dir = d;
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.restarts == Some(0) {
            return Err("restarts must be at least 1".into());
        }
        if !(self.grid.start > 0.0 && self.grid.stop < 1.0 && self.grid.start < self.grid.stop) {
            return Err("grid must satisfy 0 < start < stop < 1".into());
        }
        if self.product_tol <= 0.0 || self.rank_tol <= 0.0 {
            return Err("tolerances must be positive".into());
        }
        Ok(())
    }

    /// Default restart counts per optimizer family.
    pub const ENTROPY_RESTARTS: usize = 100;
    pub const PRODUCT_SEARCH_RESTARTS: usize = 200;

    pub fn entropy_restarts(&self) -> usize {
        self.restarts.unwrap_or(Self::ENTROPY_RESTARTS)
    }

    pub fn product_search_restarts(&self) -> usize {
        self.restarts.unwrap_or(Self::PRODUCT_SEARCH_RESTARTS)
    }

    pub fn scan_options(&self) -> ScanOptions {
        ScanOptions {
            grid_start: self.grid.start,
            grid_stop: self.grid.stop,
            grid_points: self.grid.points,
            restarts: self.entropy_restarts(),
            seed: self.seed,
            red_variant: self.red_variant,
        }
    }
}
