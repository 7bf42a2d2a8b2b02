//! Orthogonal three-band split of the uplink bandwidth.
//!
//! The split is the unique solution of three constraints: the bands sum to
//! `W`, the two hops of a relayed connection carry equal rate, and the
//! direct-region rate relates to the relayed-region rate by the area ratio.

use crate::error::{Error, Result};
use crate::sir::WorstCaseSir;

/// Which form of the first-band expression to use.
///
/// The printed expression omits the area-ratio factor on `w1`, which breaks
/// both the sum-to-W identity and the area-proportional rate constraint
/// whenever the ratio differs from one.  `Corrected` restores the factor and
/// is the default everywhere; `Printed` is kept for audits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Eq7Form {
    #[default]
    Corrected,
    Printed,
}

/// Bandwidth split and the rates it supports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPartition {
    /// Direct-link band, Hz.
    pub w1: f64,
    /// First relayed band, Hz (paired with the access-hop SIR).
    pub w2: f64,
    /// Second relayed band, Hz (paired with the backhaul SIR).
    pub w3: f64,
    /// Aggregate rate of the direct region, bit/s.
    pub r1: f64,
    /// Aggregate rate of the relayed region: the common value of the two
    /// hops, bit/s.
    pub r_chain: f64,
    /// Dimensionless normaliser of the split.
    pub delta: f64,
}

fn spectral_efficiencies(sirs: &WorstCaseSir) -> Result<(f64, f64, f64)> {
    for (name, v) in [
        ("ms_bs", sirs.ms_bs),
        ("frn_bs", sirs.frn_bs),
        ("ms_frn", sirs.ms_frn),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!(
                "{name} SIR must be positive finite, got {v}"
            )));
        }
    }
    Ok((
        (1.0 + sirs.ms_bs).log2(),
        (1.0 + sirs.frn_bs).log2(),
        (1.0 + sirs.ms_frn).log2(),
    ))
}

/// Splits `total_bw` into `(w1, w2, w3)` for the given worst-case SIR triple
/// and inner/outer area ratio.
pub fn partition_bandwidth(
    total_bw: f64,
    sirs: &WorstCaseSir,
    area_ratio: f64,
) -> Result<BandPartition> {
    partition_bandwidth_with_form(total_bw, sirs, area_ratio, Eq7Form::Corrected)
}

pub fn partition_bandwidth_with_form(
    total_bw: f64,
    sirs: &WorstCaseSir,
    area_ratio: f64,
    form: Eq7Form,
) -> Result<BandPartition> {
    if !(total_bw > 0.0) {
        return Err(Error::domain(format!(
            "total bandwidth must be positive, got {total_bw}"
        )));
    }
    if !(area_ratio > 0.0 && area_ratio.is_finite()) {
        return Err(Error::domain(format!(
            "area ratio must be positive finite, got {area_ratio}"
        )));
    }
    let (l_bm, l_br, l_rm) = spectral_efficiencies(sirs)?;
    let delta = area_ratio * l_rm / l_bm + l_rm / l_br + 1.0;
    let w2 = total_bw / delta;
    let w3 = (l_rm / l_br) * total_bw / delta;
    let w1_factor = match form {
        Eq7Form::Corrected => area_ratio,
        Eq7Form::Printed => 1.0,
    };
    let w1 = w1_factor * (l_rm / l_bm) * total_bw / delta;
    Ok(BandPartition {
        w1,
        w2,
        w3,
        r1: w1 * l_bm,
        r_chain: w2 * l_rm,
        delta,
    })
}

/// Per-link rates `(R1, R2, R3)`.  The relayed chain carries one rate on both
/// hops, so `R2 = R3 = r_chain`.
pub fn link_rates(partition: &BandPartition, sirs: &WorstCaseSir) -> Result<(f64, f64, f64)> {
    let (l_bm, _, _) = spectral_efficiencies(sirs)?;
    Ok((
        partition.w1 * l_bm,
        partition.r_chain,
        partition.r_chain,
    ))
}
