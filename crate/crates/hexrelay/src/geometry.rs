//! Hexagonal cell geometry.
//!
//! A cell is a regular hexagon of edge length (= circumradius) `D` centred on
//! its base station, with six fixed relay nodes placed symmetrically on a ring
//! of radius `dr` along the vertex directions.  Shortest-distance routing
//! splits the cell into an inner region served directly by the BS and six
//! outer regions served by the relays.  Co-channel interference comes from the
//! 18 surrounding cells of the first two tiers, all reusing the full band with
//! the same relay orientation.

use crate::error::{Error, Result};

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Planar point in metres, BS of the home cell at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Bearing of `self` seen from `from`, in degrees in (-180, 180].
    pub fn bearing_from_deg(self, from: Point2) -> f64 {
        (self.y - from.y).atan2(self.x - from.x).to_degrees()
    }

    fn rotated_deg(self, deg: f64) -> Point2 {
        let (s, c) = deg.to_radians().sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

/// The three link classes of a relay-enhanced cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    /// Direct uplink, mobile to base station.
    MsBs,
    /// Relay backhaul, fixed relay node to base station.
    FrnBs,
    /// Access hop, mobile to its serving relay.
    MsFrn,
}

/// Region a point routes to under shortest-distance routing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionId {
    Inner,
    /// Served by relay `k`, `k` in `1..=6` (relay 1 sits on the +x axis).
    Outer(u8),
}

/// Frozen cell geometry: relay ring, inner radius and the two interferer tiers.
#[derive(Debug, Clone)]
pub struct CellLayout {
    cell_radius: f64,
    relay_distance: f64,
    inner_radius: f64,
    frn_positions: [Point2; 6],
    tier_centers: [Point2; 18],
}

impl CellLayout {
    /// Cell edge length / circumradius `D` in metres.
    pub fn cell_radius(&self) -> f64 {
        self.cell_radius
    }

    /// Relay ring radius `dr` in metres.
    pub fn relay_distance(&self) -> f64 {
        self.relay_distance
    }

    /// Inner-region radius `d = dr / 2` (perpendicular bisector between the
    /// BS and each relay).
    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    /// Furthest served mobile-to-relay distance, measured from the relay to
    /// the cell vertex along its radial axis: `d_m = D - dr`.
    pub fn relay_edge_distance(&self) -> f64 {
        self.cell_radius - self.relay_distance
    }

    pub fn frn_positions(&self) -> &[Point2; 6] {
        &self.frn_positions
    }

    /// Centres of the 18 co-channel cells: 6 first-tier at `sqrt(3) D`,
    /// then 6 at `3 D` and 6 at `2 sqrt(3) D`.
    pub fn tier_centers(&self) -> &[Point2; 18] {
        &self.tier_centers
    }

    /// Receiver position for a link class (BS for the uplink and backhaul,
    /// relay 1 for the access hop).
    pub fn link_receiver(&self, link: LinkKind) -> Point2 {
        match link {
            LinkKind::MsBs | LinkKind::FrnBs => Point2::new(0.0, 0.0),
            LinkKind::MsFrn => self.frn_positions[0],
        }
    }

    /// Worst-case distance between the desired transmitter and its receiver.
    pub fn desired_distance(&self, link: LinkKind) -> f64 {
        match link {
            LinkKind::MsBs => self.inner_radius,
            LinkKind::FrnBs => self.relay_distance,
            LinkKind::MsFrn => self.relay_edge_distance(),
        }
    }
}

/// Builds the layout for a cell of circumradius `cell_radius` with the relay
/// ring at `dr_ratio * cell_radius`.
pub fn build_layout(cell_radius: f64, dr_ratio: f64) -> Result<CellLayout> {
    if !(cell_radius > 0.0) {
        return Err(Error::domain(format!(
            "cell radius must be positive, got {cell_radius}"
        )));
    }
    if !(dr_ratio > 0.0 && dr_ratio < 1.0) {
        return Err(Error::domain(format!(
            "relay distance ratio must lie in (0, 1), got {dr_ratio}"
        )));
    }
    let relay_distance = dr_ratio * cell_radius;
    let frn_positions = std::array::from_fn(|k| {
        let theta = (60.0 * k as f64).to_radians();
        Point2::new(relay_distance * theta.cos(), relay_distance * theta.sin())
    });

    // Tier construction for a vertex-at-0-degrees hexagon grid: first-tier
    // neighbours sit along the edge normals (30 deg + k*60), the second tier
    // adds the 3D ring (vertex directions) and the 2*sqrt(3)D ring.
    let mut centers = [Point2::new(0.0, 0.0); 18];
    for k in 0..6 {
        let a30 = (30.0 + 60.0 * k as f64).to_radians();
        let a0 = (60.0 * k as f64).to_radians();
        let r1 = SQRT3 * cell_radius;
        let r3 = 3.0 * cell_radius;
        let r2s = 2.0 * SQRT3 * cell_radius;
        centers[k] = Point2::new(r1 * a30.cos(), r1 * a30.sin());
        centers[6 + k] = Point2::new(r3 * a0.cos(), r3 * a0.sin());
        centers[12 + k] = Point2::new(r2s * a30.cos(), r2s * a30.sin());
    }

    Ok(CellLayout {
        cell_radius,
        relay_distance,
        inner_radius: relay_distance / 2.0,
        frn_positions,
        tier_centers: centers,
    })
}

/// True if `p` lies inside (or on the boundary of) the home-cell hexagon.
pub fn inside_cell(p: Point2, layout: &CellLayout) -> bool {
    let apothem = SQRT3 / 2.0 * layout.cell_radius;
    let tol = 1e-9 * layout.cell_radius;
    (0..3).all(|k| {
        let axis = (30.0 + 60.0 * k as f64).to_radians();
        let proj = p.x * axis.cos() + p.y * axis.sin();
        proj.abs() <= apothem + tol
    })
}

/// Assigns a point of the home cell to its serving region.
///
/// A point equidistant from the BS and its nearest relay routes to the BS:
/// a direct link avoids the two-hop bandwidth cost.
pub fn classify_region(point: Point2, layout: &CellLayout) -> Result<RegionId> {
    if !inside_cell(point, layout) {
        return Err(Error::domain(format!(
            "point ({}, {}) lies outside the cell hexagon",
            point.x, point.y
        )));
    }
    let d_bs = point.norm();
    let (k_best, d_frn) = layout
        .frn_positions
        .iter()
        .enumerate()
        .map(|(k, f)| (k, point.distance(*f)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("six relays");
    if d_bs <= d_frn {
        Ok(RegionId::Inner)
    } else {
        Ok(RegionId::Outer(k_best as u8 + 1))
    }
}

/// Inner/outer area split of the squared-ratio model: `A1 = A_cell (d/D)^2`.
///
/// This is the area model every partition and placement formula uses; the
/// exact areas induced by shortest-distance routing differ (the inner region
/// is a hexagon of apothem `d`, area `(4/3) (d/D)^2 A_cell`).
pub fn area_split(cell_radius: f64, d_ratio: f64) -> (f64, f64) {
    let a_cell = 1.5 * SQRT3 * cell_radius * cell_radius;
    let a1 = a_cell * d_ratio * d_ratio;
    (a1, a_cell - a1)
}

/// Model areas `(A1, A2)` of a layout, summing exactly to the hexagon area.
pub fn region_areas(layout: &CellLayout) -> (f64, f64) {
    area_split(
        layout.cell_radius,
        layout.inner_radius / layout.cell_radius,
    )
}

/// Nearest-possible co-channel transmitter positions for a link class, one
/// per interferer cell (18 in total).
///
/// * `MsBs`: the mobile of each interferer cell at its inner-region boundary,
///   displaced from the cell centre towards the home BS by `d`.
/// * `FrnBs`: relay 1 of each interferer cell; every cell carries the same
///   relay orientation, so this is the cell centre offset by `(dr, 0)`.
/// * `MsFrn`: the mobile inside each interferer cell's relay-1 coverage disc,
///   displaced towards the home relay 1 by `d_m`.
pub fn worst_case_interferer_positions(layout: &CellLayout, link: LinkKind) -> Vec<Point2> {
    let receiver = layout.link_receiver(link);
    layout
        .tier_centers
        .iter()
        .map(|&c| match link {
            LinkKind::MsBs => {
                let r = c.norm();
                let shift = layout.inner_radius / r;
                Point2::new(c.x * (1.0 - shift), c.y * (1.0 - shift))
            }
            LinkKind::FrnBs => Point2::new(c.x + layout.relay_distance, c.y),
            LinkKind::MsFrn => {
                // The interferer relay sits at c + (dr, 0); its offset from
                // the home relay is exactly c, so the nearest admissible
                // mobile lies d_m along -c from there.
                let frn_i = Point2::new(c.x + layout.relay_distance, c.y);
                let gap = frn_i.distance(receiver);
                let t = layout.relay_edge_distance() / gap;
                Point2::new(
                    frn_i.x + (receiver.x - frn_i.x) * t,
                    frn_i.y + (receiver.y - frn_i.y) * t,
                )
            }
        })
        .collect()
}

/// Layout rotated rigidly by `deg` degrees about the BS (relays, tiers and
/// all derived positions rotate together).
pub fn rotated_layout(layout: &CellLayout, deg: f64) -> CellLayout {
    CellLayout {
        cell_radius: layout.cell_radius,
        relay_distance: layout.relay_distance,
        inner_radius: layout.inner_radius,
        frn_positions: std::array::from_fn(|k| layout.frn_positions[k].rotated_deg(deg)),
        tier_centers: std::array::from_fn(|k| layout.tier_centers[k].rotated_deg(deg)),
    }
}
