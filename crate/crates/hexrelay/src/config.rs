//! Scenario configuration: a flat `key = value` text format over the
//! baseline parameter set, with every key optional.

use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{build_layout, CellLayout};
use crate::outage::{DfMode, Sector};
use crate::propagation::PropagationParams;
use crate::sir::SirBackend;

/// Full scenario parameter set.  Defaults follow the baseline simulation
/// table: 5 GHz carrier, 25.6 MHz uplink band, 1 km cells, exponents
/// (3.5, 2.5, 3.5), shadowing (8, 5, 8) dB with correlation 0.5, transmit
/// powers 40/20/2 dBm, -10 dB threshold and -100 dBm thermal noise.
///
/// The transmit powers and the noise level are carried for completeness;
/// the SIR path is a pure interference ratio in which same-class transmit
/// powers cancel, so they only matter when `noise_enabled` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub propagation: PropagationParams,
    /// Total uplink bandwidth W, Hz.
    pub total_bandwidth_hz: f64,
    /// Cell edge length / circumradius D, metres.
    pub cell_radius_m: f64,
    /// Relay ring radius as a fraction of D.
    pub dr_ratio: f64,
    pub p_bs_dbm: f64,
    pub p_frn_dbm: f64,
    pub p_ms_dbm: f64,
    pub noise_dbm: f64,
    pub noise_enabled: bool,
    /// SIR threshold for outage evaluations, dB.
    pub threshold_db: f64,
    /// Per-user demanded rate, bit/s.
    pub per_user_rate: f64,
    /// Relay-distance sweep step.
    pub grid_step: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub worker_count: usize,
    pub df_mode: DfMode,
    pub sir_backend: SirBackend,
    pub sector: Sector,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            propagation: PropagationParams::default(),
            total_bandwidth_hz: 25.6e6,
            cell_radius_m: 1000.0,
            dr_ratio: 2.0 / 3.0,
            p_bs_dbm: 40.0,
            p_frn_dbm: 20.0,
            p_ms_dbm: 2.0,
            noise_dbm: -100.0,
            noise_enabled: false,
            threshold_db: -10.0,
            per_user_rate: 1.0,
            grid_step: 0.01,
            n_samples: 100_000,
            seed: 42,
            worker_count: 1,
            df_mode: DfMode::default(),
            sir_backend: SirBackend::default(),
            sector: Sector::default(),
        }
    }
}

impl ScenarioConfig {
    /// Layout at the configured relay distance.
    pub fn layout(&self) -> Result<CellLayout> {
        build_layout(self.cell_radius_m, self.dr_ratio)
    }

    /// Layout at an explicit relay distance ratio (sweeps).
    pub fn layout_at(&self, dr_ratio: f64) -> Result<CellLayout> {
        build_layout(self.cell_radius_m, dr_ratio)
    }

    pub fn validate(&self) -> Result<()> {
        self.propagation
            .validate()
            .map_err(|e| name_domain_error(e, "propagation"))?;
        let checks: [(&str, bool, String); 9] = [
            (
                "W",
                self.total_bandwidth_hz > 0.0,
                format!("must be positive, got {}", self.total_bandwidth_hz),
            ),
            (
                "D",
                self.cell_radius_m > 0.0,
                format!("must be positive, got {}", self.cell_radius_m),
            ),
            (
                "dr_ratio",
                self.dr_ratio > 0.0 && self.dr_ratio < 1.0,
                format!("must lie in (0, 1), got {}", self.dr_ratio),
            ),
            (
                "r_bar",
                self.per_user_rate > 0.0,
                format!("must be positive, got {}", self.per_user_rate),
            ),
            (
                "grid_step",
                self.grid_step > 0.0 && self.grid_step <= 0.05,
                format!("must lie in (0, 0.05], got {}", self.grid_step),
            ),
            (
                "n_samples",
                self.n_samples >= 1,
                "must be at least 1".to_string(),
            ),
            (
                "worker_count",
                self.worker_count >= 1,
                "must be at least 1".to_string(),
            ),
            (
                "threshold_db",
                self.threshold_db.is_finite(),
                "must be finite".to_string(),
            ),
            (
                "noise",
                self.noise_dbm.is_finite(),
                "must be finite".to_string(),
            ),
        ];
        for (key, ok, message) in checks {
            if !ok {
                return Err(Error::ConfigValue {
                    key: key.to_string(),
                    message,
                });
            }
        }
        Ok(())
    }

    fn apply(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let bad = |message: String| Error::ConfigValue {
            key: key.to_string(),
            message,
        };
        let f64_value = || -> Result<f64> {
            value
                .parse::<f64>()
                .map_err(|_| bad(format!("expected a number, got `{value}`")))
        };
        let u64_value = || -> Result<u64> {
            value
                .parse::<u64>()
                .map_err(|_| bad(format!("expected a non-negative integer, got `{value}`")))
        };
        match key {
            "f" => self.propagation.carrier_hz = f64_value()?,
            "d0" => self.propagation.reference_distance_m = f64_value()?,
            "gamma_b" => self.propagation.gamma_ms_bs = f64_value()?,
            "gamma_r" => self.propagation.gamma_frn_bs = f64_value()?,
            "gamma_m" => self.propagation.gamma_ms_frn = f64_value()?,
            "sigma_d" => self.propagation.sigma_ms_bs_db = f64_value()?,
            "sigma_r" => self.propagation.sigma_frn_bs_db = f64_value()?,
            "sigma_m" => self.propagation.sigma_ms_frn_db = f64_value()?,
            "rho" => self.propagation.shadowing_corr = f64_value()?,
            "W" => self.total_bandwidth_hz = f64_value()?,
            "D" => self.cell_radius_m = f64_value()?,
            "dr_ratio" => self.dr_ratio = f64_value()?,
            "p_bs" => self.p_bs_dbm = f64_value()?,
            "p_frn" => self.p_frn_dbm = f64_value()?,
            "p_ms" => self.p_ms_dbm = f64_value()?,
            "noise" => self.noise_dbm = f64_value()?,
            "noise_enabled" => {
                self.noise_enabled = match value {
                    "true" | "1" => true,
                    "false" | "0" => false,
                    _ => return Err(bad(format!("expected true/false, got `{value}`"))),
                }
            }
            "threshold_db" => self.threshold_db = f64_value()?,
            "r_bar" => self.per_user_rate = f64_value()?,
            "grid_step" => self.grid_step = f64_value()?,
            "n_samples" => self.n_samples = u64_value()?,
            "seed" => self.seed = u64_value()?,
            "worker_count" => self.worker_count = u64_value()? as usize,
            "df_mode" => {
                self.df_mode = match value {
                    "eq20" => DfMode::Eq20,
                    "minrate" => DfMode::MinRate,
                    _ => return Err(bad(format!("expected eq20|minrate, got `{value}`"))),
                }
            }
            "sir_backend" => {
                self.sir_backend = match value {
                    "closed" => SirBackend::ClosedForm,
                    "geometric" => SirBackend::Geometric,
                    _ => return Err(bad(format!("expected closed|geometric, got `{value}`"))),
                }
            }
            "sector" => {
                self.sector = match value {
                    "0" | "none" => Sector::None,
                    "120" => Sector::Deg120,
                    "60" => Sector::Deg60,
                    _ => return Err(bad(format!("expected 0|60|120, got `{value}`"))),
                }
            }
            _ => {
                return Err(Error::ConfigParse {
                    line,
                    message: format!("unknown key `{key}`"),
                })
            }
        }
        Ok(())
    }
}

fn name_domain_error(e: Error, fallback: &str) -> Error {
    match e {
        Error::Domain(message) => {
            // Surface the offending key when the message starts with one.
            let key = message
                .split_whitespace()
                .next()
                .unwrap_or(fallback)
                .to_string();
            Error::ConfigValue { key, message }
        }
        other => other,
    }
}

/// Parses a flat `key = value` document into a config.  Blank lines and lines
/// starting with `#` are skipped; every key is optional and unknown or
/// repeated keys are rejected with their line number.  The result is
/// validated as a whole.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut config = ScenarioConfig::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(Error::ConfigParse {
                line,
                message: format!("expected `key = value`, got `{trimmed}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(Error::ConfigParse {
                line,
                message: "empty key".to_string(),
            });
        }
        if seen.iter().any(|k| k == key) {
            return Err(Error::ConfigParse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        config.apply(key, value, line)?;
        seen.push(key.to_string());
    }
    config.validate()?;
    Ok(config)
}

/// Loads and validates a scenario file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn empty_file_gives_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c, ScenarioConfig::default());
        assert_relative_eq!(c.total_bandwidth_hz, 25.6e6);
        assert_relative_eq!(c.propagation.carrier_hz, 5.0e9);
        assert_relative_eq!(c.propagation.sigma_frn_bs_db, 5.0);
        assert_relative_eq!(c.threshold_db, -10.0);
        assert_relative_eq!(c.noise_dbm, -100.0);
        assert!(!c.noise_enabled);
    }

    #[test]
    fn single_key_override() {
        let c = parse_config("gamma_b = 3.0\n").unwrap();
        let mut expect = ScenarioConfig::default();
        expect.propagation.gamma_ms_bs = 3.0;
        assert_eq!(c, expect);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let c = parse_config("# scenario\n\n  seed = 7\n# done\n").unwrap();
        assert_eq!(c.seed, 7);
    }

    #[test]
    fn out_of_range_value_names_the_key() {
        let err = parse_config("rho = 1.5\n").unwrap_err();
        match err {
            Error::ConfigValue { key, .. } => assert_eq!(key, "rho"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let err = parse_config("seed = 1\nbogus = 2\n").unwrap_err();
        match err {
            Error::ConfigParse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("bogus"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_config("seed 1\n").unwrap_err();
        match err {
            Error::ConfigParse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let err = parse_config("seed = 1\nseed = 2\n").unwrap_err();
        match err {
            Error::ConfigParse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("duplicate"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn enum_keys_parse() {
        let c = parse_config("df_mode = minrate\nsir_backend = geometric\nsector = 60\n").unwrap();
        assert_eq!(c.df_mode, DfMode::MinRate);
        assert_eq!(c.sir_backend, SirBackend::Geometric);
        assert_eq!(c.sector, Sector::Deg60);
        assert!(parse_config("sector = 45\n").is_err());
    }

    #[test]
    fn grid_step_bounds() {
        assert!(parse_config("grid_step = 0.05\n").is_ok());
        assert!(parse_config("grid_step = 0.06\n").is_err());
        assert!(parse_config("grid_step = 0\n").is_err());
    }
}
