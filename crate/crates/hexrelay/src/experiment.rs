//! Experiment catalog and CSV emission.
//!
//! Each experiment sweeps one question over the scenario and writes a single
//! CSV file: a `#` metadata line recording the run parameters and artifact
//! version, a header row, then data rows with 9 significant digits.  Files
//! are written atomically (temp file + rename) and every experiment derives
//! its random streams from `(seed, experiment name)`, so re-running any
//! subset with the same config reproduces identical bodies.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::geometry::region_areas;
use crate::outage::{monte_carlo_outage, McOptions, Scheme, Sector};
use crate::partition::partition_bandwidth;
use crate::placement::{sweep_grid, user_density};
use crate::propagation::linear_to_db;
use crate::sir::worst_case_sir;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Path-loss exponent pairs swept by the placement experiment: the first
/// entry drives both mobile links, the second the relay backhaul.
pub const PLACEMENT_GAMMA_PAIRS: [(f64, f64); 4] =
    [(3.5, 3.0), (4.0, 2.0), (3.0, 3.0), (2.5, 2.5)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentName {
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    Fig12,
    All,
}

impl ExperimentName {
    pub const INDIVIDUAL: [ExperimentName; 8] = [
        ExperimentName::Fig5,
        ExperimentName::Fig6,
        ExperimentName::Fig7,
        ExperimentName::Fig8,
        ExperimentName::Fig9,
        ExperimentName::Fig10,
        ExperimentName::Fig11,
        ExperimentName::Fig12,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::Fig5 => "fig5",
            ExperimentName::Fig6 => "fig6",
            ExperimentName::Fig7 => "fig7",
            ExperimentName::Fig8 => "fig8",
            ExperimentName::Fig9 => "fig9",
            ExperimentName::Fig10 => "fig10",
            ExperimentName::Fig11 => "fig11",
            ExperimentName::Fig12 => "fig12",
            ExperimentName::All => "all",
        }
    }
}

impl std::str::FromStr for ExperimentName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig5" => Ok(ExperimentName::Fig5),
            "fig6" => Ok(ExperimentName::Fig6),
            "fig7" => Ok(ExperimentName::Fig7),
            "fig8" => Ok(ExperimentName::Fig8),
            "fig9" => Ok(ExperimentName::Fig9),
            "fig10" => Ok(ExperimentName::Fig10),
            "fig11" => Ok(ExperimentName::Fig11),
            "fig12" => Ok(ExperimentName::Fig12),
            "all" => Ok(ExperimentName::All),
            other => Err(Error::UnknownExperiment(other.to_string())),
        }
    }
}

/// 9-significant-digit decimal rendering used for every CSV value.
fn g9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Deterministic per-label sub-seed: FNV-1a over the label folded into the
/// base seed with an avalanche mix.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut x = h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    x
}

fn metadata_line(name: ExperimentName, config: &ScenarioConfig, extra: &str) -> String {
    let backend = match config.sir_backend {
        crate::sir::SirBackend::ClosedForm => "closed",
        crate::sir::SirBackend::Geometric => "geometric",
    };
    let df_mode = match config.df_mode {
        crate::outage::DfMode::Eq20 => "eq20",
        crate::outage::DfMode::MinRate => "minrate",
    };
    let mut line = format!(
        "# hexrelay {VERSION} experiment={} seed={} backend={backend} df_mode={df_mode} \
         sector={} samples={} workers={} dr_ratio={}",
        name.as_str(),
        config.seed,
        config.sector.label(),
        config.n_samples,
        config.worker_count,
        g9(config.dr_ratio),
    );
    if !extra.is_empty() {
        line.push(' ');
        line.push_str(extra);
    }
    line.push('\n');
    line
}

fn write_atomic(out_dir: &Path, file_name: &str, content: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let final_path = out_dir.join(file_name);
    let tmp_path = out_dir.join(format!("{file_name}.tmp"));
    std::fs::write(&tmp_path, content)?;
    std::fs::rename(&tmp_path, &final_path)?;
    Ok(final_path)
}

/// Worst-case SIR of the three links against relay distance.
fn fig5(config: &ScenarioConfig) -> Result<String> {
    let mut body = String::from("dr_ratio,sir_bm_db,sir_br_db,sir_rm_db\n");
    for dr_ratio in sweep_grid(config.grid_step) {
        let layout = config.layout_at(dr_ratio)?;
        let sirs = worst_case_sir(&layout, &config.propagation, config.sir_backend)?;
        writeln!(
            body,
            "{},{},{},{}",
            g9(dr_ratio),
            g9(linear_to_db(sirs.ms_bs)),
            g9(linear_to_db(sirs.frn_bs)),
            g9(linear_to_db(sirs.ms_frn)),
        )
        .unwrap();
    }
    Ok(body)
}

/// Region aggregate rates against relay distance, with the mobile-link
/// exponents pinned to 3 for this sweep only.
fn fig6(config: &ScenarioConfig) -> Result<String> {
    let mut scenario = config.clone();
    scenario.propagation.gamma_ms_bs = 3.0;
    scenario.propagation.gamma_ms_frn = 3.0;
    let mut body = String::from("dr_ratio,r1,r2\n");
    for dr_ratio in sweep_grid(config.grid_step) {
        let layout = scenario.layout_at(dr_ratio)?;
        let sirs = worst_case_sir(&layout, &scenario.propagation, scenario.sir_backend)?;
        let (a1, a2) = region_areas(&layout);
        let partition = partition_bandwidth(scenario.total_bandwidth_hz, &sirs, a1 / a2)?;
        writeln!(
            body,
            "{},{},{}",
            g9(dr_ratio),
            g9(partition.r1),
            g9(partition.r_chain)
        )
        .unwrap();
    }
    Ok(body)
}

/// User density against relay distance for the four exponent pairs.
fn fig7(config: &ScenarioConfig) -> Result<String> {
    let grid = sweep_grid(config.grid_step);
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (gamma_ms, gamma_bh) in PLACEMENT_GAMMA_PAIRS {
        let mut scenario = config.clone();
        scenario.propagation.gamma_ms_bs = gamma_ms;
        scenario.propagation.gamma_ms_frn = gamma_ms;
        scenario.propagation.gamma_frn_bs = gamma_bh;
        columns.push(
            grid.iter()
                .map(|&dr| user_density(dr, &scenario))
                .collect::<Result<_>>()?,
        );
    }
    let mut body =
        String::from("dr_ratio,lambda_g35_g30,lambda_g40_g20,lambda_g30_g30,lambda_g25_g25\n");
    for (i, dr) in grid.iter().enumerate() {
        writeln!(
            body,
            "{},{},{},{},{}",
            g9(*dr),
            g9(columns[0][i]),
            g9(columns[1][i]),
            g9(columns[2][i]),
            g9(columns[3][i]),
        )
        .unwrap();
    }
    Ok(body)
}

/// Band split against relay distance.
fn fig8(config: &ScenarioConfig) -> Result<String> {
    let mut body = String::from("dr_ratio,w1,w2,w3\n");
    for dr_ratio in sweep_grid(config.grid_step) {
        let layout = config.layout_at(dr_ratio)?;
        let sirs = worst_case_sir(&layout, &config.propagation, config.sir_backend)?;
        let (a1, a2) = region_areas(&layout);
        let p = partition_bandwidth(config.total_bandwidth_hz, &sirs, a1 / a2)?;
        writeln!(
            body,
            "{},{},{},{}",
            g9(dr_ratio),
            g9(p.w1),
            g9(p.w2),
            g9(p.w3)
        )
        .unwrap();
    }
    Ok(body)
}

/// Band split at the configured relay distance for two backhaul exponents.
fn fig9(config: &ScenarioConfig) -> Result<String> {
    let mut body = String::from("dr_ratio,gamma_r,w1,w2,w3\n");
    for gamma_r in [2.0, 2.5] {
        let mut scenario = config.clone();
        scenario.propagation.gamma_frn_bs = gamma_r;
        let layout = scenario.layout()?;
        let sirs = worst_case_sir(&layout, &scenario.propagation, scenario.sir_backend)?;
        let (a1, a2) = region_areas(&layout);
        let p = partition_bandwidth(scenario.total_bandwidth_hz, &sirs, a1 / a2)?;
        writeln!(
            body,
            "{},{},{},{},{}",
            g9(config.dr_ratio),
            g9(gamma_r),
            g9(p.w1),
            g9(p.w2),
            g9(p.w3)
        )
        .unwrap();
    }
    Ok(body)
}

/// Threshold sweep of the outage experiments, -20..=20 dB in 1 dB steps.
pub fn outage_thresholds() -> Vec<f64> {
    (-20..=20).map(f64::from).collect()
}

fn outage_figure(
    name: ExperimentName,
    config: &ScenarioConfig,
    combos: &[(Scheme, Sector)],
) -> Result<String> {
    let layout = config.layout()?;
    let thresholds = outage_thresholds();
    let fig_seed = derive_seed(config.seed, name.as_str());
    let mut header = String::from("threshold_db");
    let mut curves = Vec::new();
    for &(scheme, sector) in combos {
        write!(header, ",p_{}_s{}", scheme.label(), sector.label()).unwrap();
        let opts = McOptions {
            n_samples: config.n_samples,
            seed: derive_seed(fig_seed, &format!("{}_{}", scheme.label(), sector.label())),
            worker_count: config.worker_count,
            df_mode: config.df_mode,
        };
        curves.push(monte_carlo_outage(
            &layout,
            &config.propagation,
            scheme,
            sector,
            &thresholds,
            &opts,
        )?);
    }
    let mut body = header;
    body.push('\n');
    for (i, t) in thresholds.iter().enumerate() {
        let mut row = g9(*t);
        for curve in &curves {
            row.push(',');
            row.push_str(&g9(curve.p_out[i]));
        }
        body.push_str(&row);
        body.push('\n');
    }
    Ok(body)
}

fn run_single(
    name: ExperimentName,
    config: &ScenarioConfig,
    out_dir: &Path,
) -> Result<PathBuf> {
    let (body, extra) = match name {
        ExperimentName::Fig5 => (fig5(config)?, String::new()),
        ExperimentName::Fig6 => (fig6(config)?, "gamma_ms_override=3".to_string()),
        ExperimentName::Fig7 => (
            fig7(config)?,
            "gamma_pairs=ms_links/backhaul:(3.5,3)(4,2)(3,3)(2.5,2.5)".to_string(),
        ),
        ExperimentName::Fig8 => (fig8(config)?, String::new()),
        ExperimentName::Fig9 => (fig9(config)?, "gamma_r_values=2.0,2.5".to_string()),
        ExperimentName::Fig10 => (
            outage_figure(
                name,
                config,
                &[
                    (Scheme::NoRelay, Sector::None),
                    (Scheme::NoRelay, Sector::Deg120),
                    (Scheme::NoRelay, Sector::Deg60),
                    (Scheme::Af, Sector::None),
                    (Scheme::Af, Sector::Deg120),
                    (Scheme::Af, Sector::Deg60),
                ],
            )?,
            "baseline=direct_link_at_cell_edge".to_string(),
        ),
        ExperimentName::Fig11 => (
            outage_figure(
                name,
                config,
                &[(Scheme::NoRelay, Sector::None), (Scheme::Df, Sector::None)],
            )?,
            "baseline=direct_link_at_cell_edge".to_string(),
        ),
        ExperimentName::Fig12 => (
            outage_figure(
                name,
                config,
                &[
                    (Scheme::NoRelay, Sector::None),
                    (Scheme::NoRelay, Sector::Deg120),
                    (Scheme::Df, Sector::None),
                    (Scheme::Df, Sector::Deg120),
                ],
            )?,
            "baseline=direct_link_at_cell_edge".to_string(),
        ),
        ExperimentName::All => unreachable!("expanded by run_experiment"),
    };
    let content = format!("{}{body}", metadata_line(name, config, &extra));
    write_atomic(out_dir, &format!("{}.csv", name.as_str()), &content)
}

/// Runs one experiment (or the whole catalog) into `out_dir`, returning the
/// written file paths.
pub fn run_experiment(
    name: ExperimentName,
    config: &ScenarioConfig,
    out_dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    config.validate()?;
    let out_dir = out_dir.as_ref();
    match name {
        ExperimentName::All => ExperimentName::INDIVIDUAL
            .iter()
            .map(|&n| run_single(n, config, out_dir))
            .collect(),
        single => Ok(vec![run_single(single, config, out_dir)?]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn fast_config() -> ScenarioConfig {
        parse_config("n_samples = 2000\ngrid_step = 0.05\nseed = 11\n").unwrap()
    }

    #[test]
    fn experiment_names_round_trip() {
        for name in ExperimentName::INDIVIDUAL {
            assert_eq!(name.as_str().parse::<ExperimentName>().unwrap(), name);
        }
        assert_eq!("all".parse::<ExperimentName>().unwrap(), ExperimentName::All);
        assert!("fig13".parse::<ExperimentName>().is_err());
    }

    #[test]
    fn g9_has_nine_significant_digits() {
        assert_eq!(g9(25.6e6), "2.56000000e7");
        assert_eq!(g9(-0.125), "-1.25000000e-1");
    }

    #[test]
    fn derive_seed_separates_labels() {
        let a = derive_seed(42, "fig10");
        let b = derive_seed(42, "fig11");
        let c = derive_seed(43, "fig10");
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(42, "fig10"));
    }

    #[test]
    fn partition_rows_conserve_bandwidth() {
        let config = fast_config();
        let dir = tempfile::tempdir().unwrap();
        let paths = run_experiment(ExperimentName::Fig8, &config, dir.path()).unwrap();
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let mut rows = 0;
        for line in text.lines().skip(2) {
            let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
            let sum = cols[1] + cols[2] + cols[3];
            assert!(
                (sum - config.total_bandwidth_hz).abs() / config.total_bandwidth_hz < 1e-8,
                "row sums to {sum}"
            );
            rows += 1;
        }
        assert_eq!(rows, sweep_grid(0.05).len());
    }

    #[test]
    fn bodies_are_reproducible_and_metadata_carries_version() {
        let config = fast_config();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        for name in [ExperimentName::Fig5, ExperimentName::Fig11] {
            let a = run_experiment(name, &config, dir_a.path()).unwrap();
            let b = run_experiment(name, &config, dir_b.path()).unwrap();
            let ta = std::fs::read_to_string(&a[0]).unwrap();
            let tb = std::fs::read_to_string(&b[0]).unwrap();
            assert_eq!(ta, tb);
            assert!(ta.starts_with(&format!("# hexrelay {VERSION} ")));
            assert!(!a[0].with_extension("csv.tmp").exists());
        }
    }

    #[test]
    fn unknown_name_is_a_clean_error() {
        let err = "nope".parse::<ExperimentName>().unwrap_err();
        assert!(matches!(err, Error::UnknownExperiment(_)));
    }
}
