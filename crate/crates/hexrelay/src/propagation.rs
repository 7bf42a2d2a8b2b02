//! Path loss and correlated lognormal shadowing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::LinkKind;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Propagation parameters: carrier, reference distance, per-link path-loss
/// exponents and shadowing deviations, and the single shadowing correlation
/// coefficient applied both between interferers and between the desired and
/// interfering paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationParams {
    pub carrier_hz: f64,
    pub reference_distance_m: f64,
    pub gamma_ms_bs: f64,
    pub gamma_frn_bs: f64,
    pub gamma_ms_frn: f64,
    pub sigma_ms_bs_db: f64,
    pub sigma_frn_bs_db: f64,
    pub sigma_ms_frn_db: f64,
    pub shadowing_corr: f64,
}

impl Default for PropagationParams {
    /// Baseline simulation parameters: 5 GHz carrier, 1 m reference distance,
    /// exponents (3.5, 2.5, 3.5), shadowing deviations (8, 5, 8) dB and
    /// correlation coefficient 0.5.
    fn default() -> Self {
        PropagationParams {
            carrier_hz: 5.0e9,
            reference_distance_m: 1.0,
            gamma_ms_bs: 3.5,
            gamma_frn_bs: 2.5,
            gamma_ms_frn: 3.5,
            sigma_ms_bs_db: 8.0,
            sigma_frn_bs_db: 5.0,
            sigma_ms_frn_db: 8.0,
            shadowing_corr: 0.5,
        }
    }
}

impl PropagationParams {
    pub fn gamma(&self, link: LinkKind) -> f64 {
        match link {
            LinkKind::MsBs => self.gamma_ms_bs,
            LinkKind::FrnBs => self.gamma_frn_bs,
            LinkKind::MsFrn => self.gamma_ms_frn,
        }
    }

    pub fn sigma_db(&self, link: LinkKind) -> f64 {
        match link {
            LinkKind::MsBs => self.sigma_ms_bs_db,
            LinkKind::FrnBs => self.sigma_frn_bs_db,
            LinkKind::MsFrn => self.sigma_ms_frn_db,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_hz > 0.0) {
            return Err(Error::domain("carrier frequency must be positive"));
        }
        if !(self.reference_distance_m > 0.0) {
            return Err(Error::domain("reference distance must be positive"));
        }
        for (name, g) in [
            ("gamma_b", self.gamma_ms_bs),
            ("gamma_r", self.gamma_frn_bs),
            ("gamma_m", self.gamma_ms_frn),
        ] {
            if !(g > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {g}")));
            }
        }
        for (name, s) in [
            ("sigma_d", self.sigma_ms_bs_db),
            ("sigma_r", self.sigma_frn_bs_db),
            ("sigma_m", self.sigma_ms_frn_db),
        ] {
            if !(s >= 0.0) {
                return Err(Error::domain(format!(
                    "{name} must be non-negative, got {s}"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.shadowing_corr) {
            return Err(Error::domain(format!(
                "rho must lie in [0, 1], got {}",
                self.shadowing_corr
            )));
        }
        Ok(())
    }
}

/// Linear path loss `(4 pi f / c)^2 (dist / d0)^gamma` with unit antenna
/// gains.
pub fn path_loss(dist: f64, gamma: f64, params: &PropagationParams) -> Result<f64> {
    if !(dist > 0.0) {
        return Err(Error::domain(format!(
            "path loss distance must be positive, got {dist}"
        )));
    }
    let freq_term = 4.0 * std::f64::consts::PI * params.carrier_hz / SPEED_OF_LIGHT;
    Ok(freq_term * freq_term * (dist / params.reference_distance_m).powf(gamma))
}

/// Draws `count` equicorrelated zero-mean Gaussian dB values from `rng`:
/// a shared component `sqrt(rho) Z0` plus independent `sqrt(1-rho) Zi`,
/// scaled by `sigma_db`.
pub(crate) fn equicorrelated_db<R: rand::Rng>(
    rng: &mut R,
    count: usize,
    sigma_db: f64,
    rho: f64,
) -> Vec<f64> {
    let common: f64 = StandardNormal.sample(rng);
    let shared = rho.sqrt() * common;
    let indep_scale = (1.0 - rho).sqrt();
    (0..count)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            sigma_db * (shared + indep_scale * z)
        })
        .collect()
}

/// One draw of `n` jointly Gaussian shadowing values in dB, zero mean,
/// standard deviation `sigma_db`, pairwise correlation `rho`.  Deterministic
/// for a fixed `(n, sigma_db, rho, seed)`.
pub fn sample_shadowing(n: usize, sigma_db: f64, rho: f64, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("sample count must be at least 1"));
    }
    if !(sigma_db >= 0.0) {
        return Err(Error::domain(format!(
            "sigma must be non-negative, got {sigma_db}"
        )));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::domain(format!("rho must lie in [0, 1], got {rho}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(equicorrelated_db(&mut rng, n, sigma_db, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn path_loss_at_reference_distance() {
        let p = PropagationParams::default();
        let expect = (4.0 * std::f64::consts::PI * 5.0e9 / SPEED_OF_LIGHT).powi(2);
        assert_relative_eq!(
            path_loss(1.0, 3.5, &p).unwrap(),
            expect,
            max_relative = 1e-12
        );
    }

    #[test]
    fn path_loss_exponent_arithmetic() {
        let p = PropagationParams::default();
        let base = path_loss(1.0, 2.0, &p).unwrap();
        assert_relative_eq!(
            path_loss(2.0, 2.0, &p).unwrap(),
            4.0 * base,
            max_relative = 1e-12
        );
    }

    #[test]
    fn path_loss_hand_evaluated_case() {
        // 5 GHz, d0 = 1 m, 1 km, gamma 3.5: 46.427 dB frequency term plus
        // 105.0 dB distance term.
        let p = PropagationParams::default();
        let db = linear_to_db(path_loss(1000.0, 3.5, &p).unwrap());
        assert_relative_eq!(db, 151.427_183, epsilon = 1e-5);
    }

    #[test]
    fn path_loss_rejects_nonpositive_distance() {
        let p = PropagationParams::default();
        assert!(path_loss(0.0, 3.5, &p).is_err());
        assert!(path_loss(-5.0, 3.5, &p).is_err());
    }

    #[test]
    fn shadowing_degenerate_cases() {
        let zeros = sample_shadowing(16, 0.0, 0.3, 9).unwrap();
        assert!(zeros.iter().all(|&v| v == 0.0));

        let same = sample_shadowing(8, 8.0, 1.0, 9).unwrap();
        for v in &same {
            assert_relative_eq!(*v, same[0], max_relative = 1e-12);
        }

        assert!(sample_shadowing(0, 8.0, 0.5, 1).is_err());
        assert!(sample_shadowing(4, -1.0, 0.5, 1).is_err());
        assert!(sample_shadowing(4, 8.0, 1.5, 1).is_err());
    }

    #[test]
    fn shadowing_is_seed_deterministic() {
        let a = sample_shadowing(32, 8.0, 0.5, 1234).unwrap();
        let b = sample_shadowing(32, 8.0, 0.5, 1234).unwrap();
        assert_eq!(a, b);
        let c = sample_shadowing(32, 8.0, 0.5, 1235).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn shadowing_pairwise_correlation_converges() {
        // 10^6 independent draws of a correlated pair.
        let n = 1_000_000u64;
        let (mut sxy, mut sx, mut sy, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for seed in 0..n {
            let v = sample_shadowing(2, 8.0, 0.5, seed).unwrap();
            sx += v[0];
            sy += v[1];
            sxx += v[0] * v[0];
            syy += v[1] * v[1];
            sxy += v[0] * v[1];
        }
        let nf = n as f64;
        let cov = sxy / nf - (sx / nf) * (sy / nf);
        let vx = sxx / nf - (sx / nf) * (sx / nf);
        let vy = syy / nf - (sy / nf) * (sy / nf);
        let corr = cov / (vx * vy).sqrt();
        assert!((corr - 0.5).abs() < 0.01, "empirical correlation {corr}");
    }

    #[test]
    fn shadowing_variance_law_of_large_numbers() {
        let v = sample_shadowing(1_000_000, 8.0, 0.0, 77).unwrap();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / v.len() as f64;
        assert!((var - 64.0).abs() / 64.0 < 0.02, "variance {var}");
    }

    proptest! {
        #[test]
        fn path_loss_monotone(dist in 2.0f64..1.0e5, gamma in 0.5f64..5.0) {
            let p = PropagationParams::default();
            let base = path_loss(dist, gamma, &p).unwrap();
            prop_assert!(path_loss(dist * 1.01, gamma, &p).unwrap() > base);
            prop_assert!(path_loss(dist, gamma + 0.1, &p).unwrap() > base);
        }
    }
}
