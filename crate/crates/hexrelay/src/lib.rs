//! Simulator and optimizer for relay-enhanced OFDMA hexagonal cells.
//!
//! The crate models an uplink cell with six fixed relay nodes on a symmetric
//! ring and two tiers of co-channel interferers, and provides:
//!
//! * worst-case SIR of the direct, backhaul and access links
//!   ([`sir`]), from printed closed forms or coordinate enumeration;
//! * the orthogonal three-band split of the uplink bandwidth and the rates
//!   it supports ([`partition`]);
//! * the relay distance that maximises supportable user density
//!   ([`placement`]);
//! * outage probability under correlated lognormal shadowing, analytic
//!   (Fenton-Wilkinson / Schwartz-Yeh moment matching) and Monte Carlo,
//!   for direct, decode-and-forward and amplify-and-forward connections
//!   with optional sectoring ([`outage`]);
//! * a CSV experiment catalog behind the `hexrelay` binary ([`experiment`]).

pub mod config;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod outage;
pub mod partition;
pub mod placement;
pub mod propagation;
pub mod sir;
pub mod stats;

pub use config::{load_config, parse_config, ScenarioConfig};
pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentName};
pub use geometry::{
    build_layout, classify_region, region_areas, worst_case_interferer_positions, CellLayout,
    LinkKind, Point2, RegionId,
};
pub use outage::{
    af_equivalent_sir, apply_sectoring, lognormal_sum_moments, monte_carlo_outage, outage_af,
    outage_df, outage_single_link, shadowed_link_model, CurveSource, DfMode, LognormalSumMethod,
    McOptions, OutageCurve, Scheme, Sector, ShadowedLinkModel,
};
pub use partition::{
    link_rates, partition_bandwidth, partition_bandwidth_with_form, BandPartition, Eq7Form,
};
pub use placement::{optimize_placement, user_density, PlacementResult, PlacementSample};
pub use propagation::{path_loss, sample_shadowing, PropagationParams, SPEED_OF_LIGHT};
pub use sir::{
    sir_closed_form_bm, sir_closed_form_br, sir_closed_form_rm, sir_geometric, worst_case_sir,
    LinkGeometry, SirBackend, WorstCaseSir,
};
pub use stats::{normal_cdf, q_function};
