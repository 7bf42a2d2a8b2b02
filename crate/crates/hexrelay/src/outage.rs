//! Shadowed-SIR statistics and outage probability.
//!
//! The SIR of each link under correlated lognormal shadowing is modelled as
//! Gaussian in dB: the interference sum of 18 lognormal terms is collapsed to
//! a single lognormal by moment matching (Fenton-Wilkinson) or by iterative
//! pairwise folding (Schwartz-Yeh), and outage falls out of the Gaussian tail.
//! Relayed connections combine the two hop statistics per scheme; a Monte
//! Carlo evaluator over the same worst-case geometry validates the analytic
//! path and is the only evaluator for the amplify-and-forward combination,
//! which has no closed form here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{worst_case_interferer_positions, CellLayout, LinkKind, Point2};
use crate::propagation::{db_to_linear, linear_to_db, PropagationParams};
use crate::sir::LinkGeometry;
use crate::stats::{gaussian_expectation, normal_cdf};

const LN10_OVER_10: f64 = core::f64::consts::LN_10 / 10.0;

/// How a sum of correlated lognormals is collapsed to a single lognormal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LognormalSumMethod {
    /// Match the first two moments of the linear-scale sum.
    #[default]
    FentonWilkinson,
    /// Fold components pairwise with the exact moment recursion, keeping
    /// each folded moment accurate to better than 1e-9 dB.
    SchwartzYeh,
}

/// Gaussian dB model `(mean_db, std_db)` of one lognormal sum or link SIR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowedLinkModel {
    pub mean_db: f64,
    pub std_db: f64,
    pub method: LognormalSumMethod,
    pub link: LinkKind,
}

/// dB-domain Gaussian parameters of `sum_i 10^(X_i/10)` where the `X_i` are
/// Gaussian with the given means and deviations and pairwise equicorrelated
/// with coefficient `rho`.
pub fn lognormal_sum_moments(
    component_means_db: &[f64],
    component_stds_db: &[f64],
    rho: f64,
    method: LognormalSumMethod,
) -> Result<(f64, f64)> {
    if component_means_db.is_empty() {
        return Err(Error::domain("component list must not be empty"));
    }
    if component_means_db.len() != component_stds_db.len() {
        return Err(Error::domain(format!(
            "component length mismatch: {} means vs {} stds",
            component_means_db.len(),
            component_stds_db.len()
        )));
    }
    if component_stds_db.iter().any(|s| !(*s >= 0.0)) {
        return Err(Error::domain("component stds must be non-negative"));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::domain(format!("rho must lie in [0, 1], got {rho}")));
    }
    if component_means_db.len() == 1 {
        return Ok((component_means_db[0], component_stds_db[0]));
    }
    match method {
        LognormalSumMethod::FentonWilkinson => {
            Ok(fenton_wilkinson(component_means_db, component_stds_db, rho))
        }
        LognormalSumMethod::SchwartzYeh => {
            Ok(schwartz_yeh(component_means_db, component_stds_db, rho))
        }
    }
}

fn fenton_wilkinson(means_db: &[f64], stds_db: &[f64], rho: f64) -> (f64, f64) {
    // Work in natural log, shifted by the largest median so the exponentials
    // stay in range regardless of the absolute dB level.
    let shift = means_db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let a: Vec<f64> = means_db.iter().map(|m| LN10_OVER_10 * (m - shift)).collect();
    let b: Vec<f64> = stds_db.iter().map(|s| LN10_OVER_10 * s).collect();
    let n = a.len();
    let mut m1 = 0.0;
    for i in 0..n {
        m1 += (a[i] + 0.5 * b[i] * b[i]).exp();
    }
    let mut m2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let r = if i == j { 1.0 } else { rho };
            m2 += (a[i] + a[j] + 0.5 * (b[i] * b[i] + b[j] * b[j] + 2.0 * r * b[i] * b[j]))
                .exp();
        }
    }
    let var_ln = (m2 / (m1 * m1)).ln().max(0.0);
    let mean_ln = m1.ln() - 0.5 * var_ln;
    (mean_ln / LN10_OVER_10 + shift, var_ln.sqrt() / LN10_OVER_10)
}

/// Numerically stable `ln(1 + e^w)`.
fn softplus(w: f64) -> f64 {
    w.max(0.0) + (-w.abs()).exp().ln_1p()
}

fn schwartz_yeh(means_db: &[f64], stds_db: &[f64], rho: f64) -> (f64, f64) {
    let a: Vec<f64> = means_db.iter().map(|m| LN10_OVER_10 * m).collect();
    let b: Vec<f64> = stds_db.iter().map(|s| LN10_OVER_10 * s).collect();
    let n = a.len();

    let mut mean_z = a[0];
    let mut var_z = b[0] * b[0];
    // Covariance between the running folded sum and each pending component,
    // propagated through every fold by Gaussian projection.
    let mut cov: Vec<f64> = (0..n).map(|j| rho * b[0] * b[j]).collect();

    for k in 1..n {
        let mean_w = a[k] - mean_z;
        let var_w = var_z + b[k] * b[k] - 2.0 * cov[k];
        if var_w <= 1e-24 {
            // Degenerate gap: the increment is deterministic.
            mean_z += softplus(mean_w);
            continue;
        }
        let std_w = var_w.sqrt();
        let g1 = gaussian_expectation(softplus, mean_w, std_w);
        let g2 = gaussian_expectation(|w| softplus(w) * softplus(w), mean_w, std_w);
        let g3 = gaussian_expectation(|w| (w - mean_w) * softplus(w), mean_w, std_w);

        let cov_zw = cov[k] - var_z;
        let new_mean = mean_z + g1;
        let new_var = (var_z + (g2 - g1 * g1) + 2.0 * (cov_zw / var_w) * g3).max(0.0);
        for j in (k + 1)..n {
            let cov_wj = rho * b[k] * b[j] - cov[j];
            cov[j] += (cov_wj / var_w) * g3;
        }
        mean_z = new_mean;
        var_z = new_var;
    }
    (mean_z / LN10_OVER_10, var_z.sqrt() / LN10_OVER_10)
}

/// Gaussian dB model of one link's shadowed SIR over an explicit geometry.
///
/// The desired path contributes its median `-10 gamma log10(d)` plus a
/// zero-mean Gaussian of deviation `sigma_db`; the interference sum is
/// collapsed with the selected method over per-term medians at the same
/// deviation; the SIR variance combines both with the single correlation
/// coefficient applied between the desired and interfering paths.
pub fn shadowed_model_from_geometry(
    geometry: &LinkGeometry,
    gamma: f64,
    sigma_db: f64,
    rho: f64,
    method: LognormalSumMethod,
    link: LinkKind,
) -> Result<ShadowedLinkModel> {
    let desired_median = -10.0 * gamma * geometry.desired_distance.log10();
    let medians: Vec<f64> = geometry
        .interferer_distances()
        .iter()
        .map(|d| -10.0 * gamma * d.log10())
        .collect();
    let stds = vec![sigma_db; medians.len()];
    let (sum_mean, sum_std) = lognormal_sum_moments(&medians, &stds, rho, method)?;
    let variance = sigma_db * sigma_db + sum_std * sum_std - 2.0 * rho * sigma_db * sum_std;
    Ok(ShadowedLinkModel {
        mean_db: desired_median - sum_mean,
        std_db: variance.max(0.0).sqrt(),
        method,
        link,
    })
}

/// Shadowed-SIR model of one link of a layout.
pub fn shadowed_link_model(
    link: LinkKind,
    layout: &CellLayout,
    params: &PropagationParams,
    method: LognormalSumMethod,
) -> Result<ShadowedLinkModel> {
    shadowed_model_from_geometry(
        &LinkGeometry::from_layout(layout, link),
        params.gamma(link),
        params.sigma_db(link),
        params.shadowing_corr,
        method,
        link,
    )
}

/// Outage probability of a Gaussian-dB link at threshold `threshold_db`:
/// `P(SIR_dB < threshold)`.  With zero deviation this is the indicator of the
/// deterministic SIR falling below the threshold.
pub fn outage_single_link(model: &ShadowedLinkModel, threshold_db: f64) -> f64 {
    if model.std_db == 0.0 {
        return if model.mean_db < threshold_db { 1.0 } else { 0.0 };
    }
    normal_cdf((threshold_db - model.mean_db) / model.std_db)
}

/// How the two hop outages of a decode-and-forward connection combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DfMode {
    /// Product of the per-hop outages, as printed.
    #[default]
    Eq20,
    /// Complement form implied by the min-rate definition of the chain:
    /// the connection is out when either hop is out.
    MinRate,
}

/// Decode-and-forward outage from the two per-hop outage probabilities.
pub fn outage_df(p_r: f64, p_m: f64, mode: DfMode) -> Result<f64> {
    for (name, p) in [("p_r", p_r), ("p_m", p_m)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!(
                "{name} must lie in [0, 1], got {p}"
            )));
        }
    }
    Ok(match mode {
        DfMode::Eq20 => p_r * p_m,
        DfMode::MinRate => 1.0 - (1.0 - p_r) * (1.0 - p_m),
    })
}

/// Equivalent SIR of an amplify-and-forward two-hop connection:
/// `g1 g2 / (g1 + g2 + 1)`.
pub fn af_equivalent_sir(g_br: f64, g_rm: f64) -> Result<f64> {
    for (name, g) in [("g_br", g_br), ("g_rm", g_rm)] {
        if !(g > 0.0) {
            return Err(Error::domain(format!(
                "{name} must be positive, got {g}"
            )));
        }
    }
    Ok(g_br * g_rm / (g_br + g_rm + 1.0))
}

/// Relaying scheme of an outage curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Direct link of a relay-free network, user at the cell edge.
    #[default]
    NoRelay,
    Df,
    Af,
}

impl Scheme {
    pub fn label(self) -> &'static str {
        match self {
            Scheme::NoRelay => "norelay",
            Scheme::Df => "df",
            Scheme::Af => "af",
        }
    }
}

/// Angular pruning of the co-channel interferer set.  The sector axis points
/// from the receiver towards its desired transmitter (the +x axis for every
/// link of this layout); an interferer is retained when its bearing from the
/// receiver falls inside the sector width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sector {
    #[default]
    None,
    Deg120,
    Deg60,
}

impl Sector {
    pub fn width_deg(self) -> f64 {
        match self {
            Sector::None => 360.0,
            Sector::Deg120 => 120.0,
            Sector::Deg60 => 60.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sector::None => "0",
            Sector::Deg120 => "120",
            Sector::Deg60 => "60",
        }
    }
}

/// Retention mask over interferer positions for a sector seen from
/// `receiver`.  Bearings exactly on the sector edge are retained.
pub fn sector_mask(receiver: Point2, positions: &[Point2], sector: Sector) -> Vec<bool> {
    let half = sector.width_deg() / 2.0;
    positions
        .iter()
        .map(|p| p.bearing_from_deg(receiver).abs() <= half + 1e-9)
        .collect()
}

/// Interferer positions of a link that survive sectoring.
pub fn apply_sectoring(layout: &CellLayout, link: LinkKind, sector: Sector) -> Vec<Point2> {
    let receiver = layout.link_receiver(link);
    let positions = worst_case_interferer_positions(layout, link);
    let mask = sector_mask(receiver, &positions, sector);
    positions
        .into_iter()
        .zip(mask)
        .filter_map(|(p, keep)| keep.then_some(p))
        .collect()
}

fn retained_geometry(geometry: &LinkGeometry, sector: Sector) -> LinkGeometry {
    let mask = sector_mask(geometry.receiver, &geometry.interferers, sector);
    LinkGeometry {
        desired_distance: geometry.desired_distance,
        receiver: geometry.receiver,
        interferers: geometry
            .interferers
            .iter()
            .zip(&mask)
            .filter_map(|(p, keep)| keep.then_some(*p))
            .collect(),
    }
}

/// Shadowed model of a link after sectoring its interferer set.
pub fn shadowed_model_with_sector(
    link: LinkKind,
    layout: &CellLayout,
    params: &PropagationParams,
    method: LognormalSumMethod,
    sector: Sector,
) -> Result<ShadowedLinkModel> {
    let geometry = retained_geometry(&LinkGeometry::from_layout(layout, link), sector);
    shadowed_model_from_geometry(
        &geometry,
        params.gamma(link),
        params.sigma_db(link),
        params.shadowing_corr,
        method,
        link,
    )
}

/// Direct-link geometry of the relay-free comparison network: the user at
/// the cell edge (`d = D`) with the usual 18 worst-case interferers.
pub fn no_relay_baseline(cell_radius: f64) -> Result<LinkGeometry> {
    LinkGeometry::ms_bs_with_radius(cell_radius, cell_radius)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveSource {
    Analytic,
    MonteCarlo,
}

/// Empirical or analytic outage probability over a threshold grid.
#[derive(Debug, Clone)]
pub struct OutageCurve {
    pub thresholds_db: Vec<f64>,
    pub p_out: Vec<f64>,
    pub scheme: Scheme,
    pub sector: Sector,
    pub source: CurveSource,
}

/// Monte Carlo controls.  Every sample derives its own random stream from
/// `(seed, sample index)`, so results are identical for any `worker_count`.
#[derive(Debug, Clone, Copy)]
pub struct McOptions {
    pub n_samples: u64,
    pub seed: u64,
    pub worker_count: usize,
    pub df_mode: DfMode,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions {
            n_samples: 100_000,
            seed: 0,
            worker_count: 1,
            df_mode: DfMode::default(),
        }
    }
}

/// Per-link precomputation for sampling: inverse distance powers of the
/// desired path and of every interferer (pruned ones keep their slot so the
/// normal draw sequence is identical across sector choices).
struct LinkSampler {
    desired_pow: f64,
    interferer_pow: Vec<f64>,
    retained: Vec<bool>,
    sigma_db: f64,
    rho: f64,
}

impl LinkSampler {
    fn new(geometry: &LinkGeometry, gamma: f64, sigma_db: f64, rho: f64, sector: Sector) -> Self {
        LinkSampler {
            desired_pow: geometry.desired_distance.powf(-gamma),
            interferer_pow: geometry
                .interferer_distances()
                .iter()
                .map(|d| d.powf(-gamma))
                .collect(),
            retained: sector_mask(geometry.receiver, &geometry.interferers, sector),
            sigma_db,
            rho,
        }
    }

    /// One linear SIR draw under equicorrelated shadowing.
    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let shared = self.rho.sqrt() * StandardNormal.sample(rng);
        let indep = (1.0 - self.rho).sqrt();
        let z: f64 = StandardNormal.sample(rng);
        let desired = self.desired_pow * db_to_linear(self.sigma_db * (shared + indep * z));
        let mut interference = 0.0;
        for (pow, keep) in self.interferer_pow.iter().zip(&self.retained) {
            let z: f64 = StandardNormal.sample(rng);
            if *keep {
                interference += pow * db_to_linear(self.sigma_db * (shared + indep * z));
            }
        }
        desired / interference
    }
}

/// Per-sample scalar whose ECDF is the outage curve of the scheme.  For
/// decode-and-forward the joint event "both hops below t" (product mode) is
/// `max(hops) < t` and "either hop below t" (min-rate mode) is
/// `min(hops) < t`, so every scheme reduces to one dB scalar.
fn scheme_samplers(
    layout: Option<&CellLayout>,
    cell_radius: f64,
    params: &PropagationParams,
    scheme: Scheme,
    sector: Sector,
) -> Result<Vec<LinkSampler>> {
    match scheme {
        Scheme::NoRelay => {
            let geometry = no_relay_baseline(cell_radius)?;
            Ok(vec![LinkSampler::new(
                &geometry,
                params.gamma_ms_bs,
                params.sigma_ms_bs_db,
                params.shadowing_corr,
                sector,
            )])
        }
        Scheme::Df | Scheme::Af => {
            let layout = layout.ok_or_else(|| {
                Error::domain("relayed schemes need a cell layout".to_string())
            })?;
            let br = LinkGeometry::from_layout(layout, LinkKind::FrnBs);
            let rm = LinkGeometry::from_layout(layout, LinkKind::MsFrn);
            Ok(vec![
                LinkSampler::new(
                    &br,
                    params.gamma_frn_bs,
                    params.sigma_frn_bs_db,
                    params.shadowing_corr,
                    sector,
                ),
                LinkSampler::new(
                    &rm,
                    params.gamma_ms_frn,
                    params.sigma_ms_frn_db,
                    params.shadowing_corr,
                    sector,
                ),
            ])
        }
    }
}

fn sample_metric<R: Rng>(
    samplers: &[LinkSampler],
    scheme: Scheme,
    df_mode: DfMode,
    rng: &mut R,
) -> f64 {
    match scheme {
        Scheme::NoRelay => linear_to_db(samplers[0].sample(rng)),
        Scheme::Af => {
            let g_br = samplers[0].sample(rng);
            let g_rm = samplers[1].sample(rng);
            linear_to_db(g_br * g_rm / (g_br + g_rm + 1.0))
        }
        Scheme::Df => {
            let a = linear_to_db(samplers[0].sample(rng));
            let b = linear_to_db(samplers[1].sample(rng));
            match df_mode {
                DfMode::Eq20 => a.max(b),
                DfMode::MinRate => a.min(b),
            }
        }
    }
}

fn run_samples(
    samplers: &[LinkSampler],
    scheme: Scheme,
    opts: &McOptions,
) -> Vec<f64> {
    let n = opts.n_samples as usize;
    let mut out = vec![0.0f64; n];
    let workers = opts.worker_count.max(1).min(n.max(1));
    let chunk = n.div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, slice) in out.chunks_mut(chunk).enumerate() {
            let start = w * chunk;
            scope.spawn(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                for (offset, slot) in slice.iter_mut().enumerate() {
                    rng.set_stream((start + offset) as u64);
                    rng.set_word_pos(0);
                    *slot = sample_metric(samplers, scheme, opts.df_mode, &mut rng);
                }
            });
        }
    });
    out
}

/// Empirical outage curve over `thresholds_db` with a shared sample set, so
/// the curve is non-decreasing by construction.
pub fn monte_carlo_outage(
    layout: &CellLayout,
    params: &PropagationParams,
    scheme: Scheme,
    sector: Sector,
    thresholds_db: &[f64],
    opts: &McOptions,
) -> Result<OutageCurve> {
    if thresholds_db.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain(
            "thresholds must be ordered ascending".to_string(),
        ));
    }
    if opts.n_samples == 0 {
        return Err(Error::domain("sample count must be positive".to_string()));
    }
    params.validate()?;
    let samplers = scheme_samplers(Some(layout), layout.cell_radius(), params, scheme, sector)?;
    let mut samples = run_samples(&samplers, scheme, opts);
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let p_out = thresholds_db
        .iter()
        .map(|t| samples.partition_point(|x| x < t) as f64 / n)
        .collect();
    Ok(OutageCurve {
        thresholds_db: thresholds_db.to_vec(),
        p_out,
        scheme,
        sector,
        source: CurveSource::MonteCarlo,
    })
}

/// Amplify-and-forward outage at one threshold, Monte Carlo only.
pub fn outage_af(
    layout: &CellLayout,
    params: &PropagationParams,
    threshold_db: f64,
    n_samples: u64,
    seed: u64,
) -> Result<f64> {
    if n_samples < 10_000 {
        return Err(Error::domain(format!(
            "amplify-and-forward evaluation needs at least 10^4 samples, got {n_samples}"
        )));
    }
    let opts = McOptions {
        n_samples,
        seed,
        ..McOptions::default()
    };
    let curve = monte_carlo_outage(
        layout,
        params,
        Scheme::Af,
        Sector::None,
        &[threshold_db],
        &opts,
    )?;
    Ok(curve.p_out[0])
}
