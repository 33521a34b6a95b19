//! Rectangular `(γ, h)` sweeps with NA-with-reason cells.

use std::fmt;
use std::str::FromStr;

use lmg_core::fidelity::{
    fidelity_susceptibility_closed, partial_fs_one_qubit, partial_fs_two_qubit,
};
use lmg_core::model::{
    distance_to_crossing_line, distance_to_monopole, energy_functions, ground_state, ModelParams,
};
use lmg_core::phase::{berry_phase_pure, mixed_berry_phase_two_qubit};
use lmg_core::Error;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Energies,
    Theta,
    BerryRaw,
    BerryAbs,
    MixedBerryAbs,
    ChiFull,
    #[serde(rename = "chi_1q")]
    Chi1q,
    #[serde(rename = "chi_2q")]
    Chi2q,
    MonopoleMag,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::Energies,
        Quantity::Theta,
        Quantity::BerryRaw,
        Quantity::BerryAbs,
        Quantity::MixedBerryAbs,
        Quantity::ChiFull,
        Quantity::Chi1q,
        Quantity::Chi2q,
        Quantity::MonopoleMag,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Energies => "energies",
            Quantity::Theta => "theta",
            Quantity::BerryRaw => "berry_raw",
            Quantity::BerryAbs => "berry_abs",
            Quantity::MixedBerryAbs => "mixed_berry_abs",
            Quantity::ChiFull => "chi_full",
            Quantity::Chi1q => "chi_1q",
            Quantity::Chi2q => "chi_2q",
            Quantity::MonopoleMag => "monopole_mag",
        }
    }

    /// Output columns of the quantity, in order.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Quantity::Energies => &["e_low_branch", "e_high_branch", "e_ground"],
            Quantity::Theta => &["theta"],
            Quantity::BerryRaw => &["berry_raw"],
            Quantity::BerryAbs => &["berry_abs"],
            Quantity::MixedBerryAbs => &["mixed_berry_abs"],
            Quantity::ChiFull => &["chi_full"],
            Quantity::Chi1q => &["chi_1q"],
            Quantity::Chi2q => &["chi_2q"],
            Quantity::MonopoleMag => &["monopole_mag"],
        }
    }

    /// Depends on a unique ground branch and a finite gap.
    fn gap_dependent(self) -> bool {
        !matches!(self, Quantity::Energies | Quantity::Theta)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| format!("unknown quantity `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    Degenerate,
    Monopole,
    Undefined,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::Degenerate => "DEGENERATE",
            Reason::Monopole => "MONOPOLE",
            Reason::Undefined => "UNDEFINED",
        }
    }

    fn from_error(e: &Error) -> Self {
        match e {
            Error::AtCrossing { .. } => Reason::Degenerate,
            Error::Singularity { .. } | Error::NearDegeneracy { .. } => Reason::Monopole,
            _ => Reason::Undefined,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Na(Reason),
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(v),
            Cell::Na(_) => None,
        }
    }
}

impl From<Result<f64, Error>> for Cell {
    fn from(r: Result<f64, Error>) -> Self {
        match r {
            Ok(v) if v.is_finite() => Cell::Value(v),
            Ok(_) => Cell::Na(Reason::Undefined),
            Err(e) => Cell::Na(Reason::from_error(&e)),
        }
    }
}

/// Inclusive range sampled at `steps` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.steps <= 1 {
            return self.min;
        }
        if i + 1 == self.steps {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|i| self.value(i))
    }

    fn validate(&self, name: &str) -> Result<(), SpecError> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(SpecError(format!("{name} range must be finite")));
        }
        if self.max < self.min {
            return Err(SpecError(format!("{name} range has max < min")));
        }
        if self.steps == 0 {
            return Err(SpecError(format!("{name} range needs at least one step")));
        }
        Ok(())
    }
}

impl FromStr for Axis {
    type Err = SpecError;
    /// `min:max:steps`
    fn from_str(s: &str) -> Result<Self, SpecError> {
        let bad = || SpecError(format!("expected min:max:steps, got `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(bad());
        };
        let axis = Axis {
            min: a.trim().parse().map_err(|_| bad())?,
            max: b.trim().parse().map_err(|_| bad())?,
            steps: n.trim().parse().map_err(|_| bad())?,
        };
        Ok(axis)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid sweep: {0}")]
pub struct SpecError(pub String);

pub const DEFAULT_SKIP_RADIUS: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub gamma: Axis,
    pub h: Axis,
    pub quantities: Vec<Quantity>,
    pub skip_radius: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            gamma: Axis::new(0.0, 2.0, 21),
            h: Axis::new(0.0, 1.2, 21),
            quantities: vec![Quantity::Energies],
            skip_radius: DEFAULT_SKIP_RADIUS,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        self.gamma.validate("gamma")?;
        self.h.validate("h")?;
        if self.gamma.min < 0.0 {
            return Err(SpecError("gamma must be nonnegative".into()));
        }
        if self.quantities.is_empty() {
            return Err(SpecError("no quantities requested".into()));
        }
        if !(self.skip_radius >= 0.0 && self.skip_radius.is_finite()) {
            return Err(SpecError("skip radius must be a nonnegative number".into()));
        }
        Ok(())
    }

    /// Requested quantities, deduplicated in canonical order.
    pub fn ordered_quantities(&self) -> Vec<Quantity> {
        let mut q = self.quantities.clone();
        q.sort();
        q.dedup();
        q
    }

    pub fn columns(&self) -> Vec<&'static str> {
        let mut c = vec!["gamma", "h"];
        for q in self.ordered_quantities() {
            c.extend_from_slice(q.columns());
        }
        c
    }
}

/// Named figure datasets over the default parameter window.
pub fn preset(name: &str) -> Option<SweepSpec> {
    let quantities = match name {
        "fig1" => vec![Quantity::Energies],
        "fig2" => vec![Quantity::BerryRaw, Quantity::BerryAbs],
        "fig3" => vec![Quantity::MixedBerryAbs],
        "fig4" => vec![Quantity::ChiFull],
        "fig5" => vec![Quantity::Chi1q],
        "fig6" => vec![Quantity::Chi2q],
        _ => return None,
    };
    Some(SweepSpec {
        gamma: Axis::new(0.0, 2.0, 41),
        h: Axis::new(0.0, 1.2, 41),
        quantities,
        skip_radius: DEFAULT_SKIP_RADIUS,
    })
}

pub const PRESETS: [&str; 6] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub gamma: f64,
    pub h: f64,
    /// One cell per quantity column.
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
}

impl SweepTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Cell of a quantity column (`gamma` and `h` are not cells).
    pub fn cell(&self, row: usize, name: &str) -> Option<Cell> {
        let i = self.column_index(name)?;
        if i < 2 {
            return None;
        }
        self.rows.get(row).map(|r| r.cells[i - 2])
    }
}

/// Evaluates the sweep. Rows are ordered γ-major; the result does not depend
/// on how rayon schedules the points.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, SpecError> {
    spec.validate()?;
    let quantities = spec.ordered_quantities();
    let points: Vec<(f64, f64)> =
        spec.gamma.values().flat_map(|g| spec.h.values().map(move |h| (g, h))).collect();
    let rows = points
        .par_iter()
        .map(|&(g, h)| evaluate_point(g, h, &quantities, spec.skip_radius))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepTable { spec: spec.clone(), columns: spec.columns(), rows })
}

fn evaluate_point(gamma: f64, h: f64, quantities: &[Quantity], skip_radius: f64) -> Result<Row, SpecError> {
    let params = ModelParams::new(gamma, h).map_err(|e| SpecError(e.to_string()))?;
    let gs = ground_state(&params);
    let excluded = if distance_to_monopole(gamma, h) < skip_radius {
        Some(Reason::Monopole)
    } else if gs.is_degenerate() || distance_to_crossing_line(gamma, h.abs()) < skip_radius {
        Some(Reason::Degenerate)
    } else {
        None
    };

    let mut cells = Vec::new();
    for &q in quantities {
        if let (true, Some(reason)) = (q.gap_dependent(), excluded) {
            cells.extend(q.columns().iter().map(|_| Cell::Na(reason)));
            continue;
        }
        match q {
            Quantity::Energies => {
                let lo = gs.low.energy;
                let hi = gs.high.energy;
                cells.extend([Cell::Value(lo), Cell::Value(hi), Cell::Value(gs.energy())]);
            }
            Quantity::Theta => cells.push(match gs.active_branch() {
                Some(b) => Cell::Value(gs.state(b).theta),
                None => Cell::Na(Reason::Degenerate),
            }),
            Quantity::BerryRaw => cells.push(berry_phase_pure(&params).map(|p| p.raw).into()),
            Quantity::BerryAbs => cells.push(berry_phase_pure(&params).map(|p| p.principal.abs()).into()),
            Quantity::MixedBerryAbs => {
                cells.push(mixed_berry_phase_two_qubit(&params).map(|m| m.gamma_phase.abs()).into())
            }
            Quantity::ChiFull => cells.push(fidelity_susceptibility_closed(&params).map(|c| c.value).into()),
            Quantity::Chi1q => cells.push(partial_fs_one_qubit(&params).map(|c| c.value).into()),
            Quantity::Chi2q => cells.push(partial_fs_two_qubit(&params).map(|c| c.value).into()),
            Quantity::MonopoleMag => cells.push(monopole_magnitude(&params).into()),
        }
    }
    Ok(Row { gamma, h, cells })
}

/// `1/(2Δ𝓔²)` of the block holding the ground vector.
fn monopole_magnitude(params: &ModelParams) -> Result<f64, Error> {
    let branch = ground_state(params)
        .active_branch()
        .ok_or(Error::AtCrossing { gamma: params.gamma, h: params.h })?;
    let block = if params.h < 0.0 { branch.opposite() } else { branch };
    let de = energy_functions(params, block).de;
    if de <= params.tol_degeneracy {
        return Err(Error::Singularity { gamma: params.gamma, field: params.field(block), delta_e: de });
    }
    Ok(0.5 / (de * de))
}
