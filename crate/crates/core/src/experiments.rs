//! Seeded probes of the almost-everywhere statements.
//!
//! Sample `i` of a random [`SamplingSpec`] draws from its own ChaCha8
//! stream `(seed, i)`, so the sample list does not depend on evaluation
//! order. Per-sample work runs on the rayon pool and is collected in
//! sample order; floating-point reductions happen afterwards, sequentially.
//!
//! None of these probes certify a limit. Growth "signatures" are
//! finite-truncation heuristics and are labelled as evidence only.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::{subexponential_diagnostic, CoefficientSource, IndexSequence};
use crate::recenter::RecenterPolicy;
use crate::subseq::{assemble, log_coeffs, sigma_nu, Functional, KWindow, LogCoeff, SigmaCurve};
use crate::{GrowthError, Result};

/// Factor by which a running sup must grow across the schedule to count as
/// diverging.
pub const DIVERGENCE_FACTOR: f64 = 2.0;
/// Growth below this factor counts as a plateau.
pub const PLATEAU_FACTOR: f64 = 1.1;
pub const GDELTA_POINTS_PER_DISK: usize = 25;
pub const DEFAULT_SCHEDULE: [u64; 4] = [200, 500, 1000, 2000];
/// Fraction of excluded quadrature nodes above which coverage is flagged.
pub const COVERAGE_LIMIT: f64 = 0.05;
/// Quadrature slack as a fraction of the node range.
pub const SLACK_FRACTION: f64 = 0.02;

const EVIDENCE_NOTE: &str = "finite-truncation evidence only; a growth signature does not certify an infinite limit";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GrowthError::BadParam(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SamplingMode {
    UniformRandom { count: usize, seed: u64 },
    /// `side × side` lattice over the bounding square, restricted to the disk.
    Grid { side: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingSpec {
    pub region: Disk,
    pub mode: SamplingMode,
    /// Appended after the generated samples.
    #[serde(default)]
    pub extra: Vec<Complex64>,
}

/// Point `i` of a seeded uniform sample of `disk`.
pub fn uniform_point(disk: &Disk, seed: u64, i: u64) -> Complex64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    disk.center + Complex64::from_polar(disk.radius * u.sqrt(), TAU * v)
}

impl SamplingSpec {
    pub fn samples(&self) -> Vec<Complex64> {
        let d = &self.region;
        let mut out: Vec<Complex64> = match self.mode {
            SamplingMode::UniformRandom { count, seed } => (0..count as u64).map(|i| uniform_point(d, seed, i)).collect(),
            SamplingMode::Grid { side } => {
                let coord = |i: usize| if side < 2 { 0.0 } else { 2.0 * i as f64 / (side - 1) as f64 - 1.0 };
                let mut pts = Vec::new();
                for iy in 0..side {
                    for ix in 0..side {
                        let (u, v) = (coord(ix), coord(iy));
                        if u * u + v * v <= 1.0 {
                            pts.push(Complex64::new(d.center.re + d.radius * u, d.center.im + d.radius * v));
                        }
                    }
                }
                pts
            }
        };
        out.extend_from_slice(&self.extra);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStatus {
    Ok,
    Exceptional,
    /// Every term was skipped; not counted as exceptional.
    StructurallyEmpty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub z: Complex64,
    pub nu_value: Option<f64>,
    pub full_value: Option<f64>,
    pub gap: Option<f64>,
    pub status: SampleStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskRecord {
    pub disk: Disk,
    pub points: Vec<Complex64>,
    /// Sup over the disk's points of the running sup at each schedule entry.
    pub sups: Vec<f64>,
    /// `sups.last / sups.first`; `None` for a one-entry schedule.
    pub growth: Option<f64>,
    pub signature: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirclePoint {
    pub k: u64,
    pub integral_sigma: f64,
    pub integral_log_sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub samples: Vec<SampleRecord>,
    pub exceptional_count: usize,
    pub exceptional_fraction: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub schedule: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub disks: Vec<DiskRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub curve: Vec<CirclePoint>,
    /// Divergence signature of the whole run, when the probe defines one.
    pub signature: Option<bool>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    fn new(experiment: &str, params: serde_json::Value, seed: Option<u64>) -> Self {
        Self {
            experiment: experiment.into(),
            params,
            seed,
            samples: Vec::new(),
            exceptional_count: 0,
            exceptional_fraction: 0.0,
            schedule: Vec::new(),
            disks: Vec::new(),
            curve: Vec::new(),
            signature: None,
            notes: Vec::new(),
        }
    }

    fn set_samples(&mut self, samples: Vec<SampleRecord>) {
        self.exceptional_count = samples.iter().filter(|s| s.status == SampleStatus::Exceptional).count();
        self.exceptional_fraction =
            if samples.is_empty() { 0.0 } else { self.exceptional_count as f64 / samples.len() as f64 };
        self.samples = samples;
    }

    /// Indices of the exceptional samples.
    pub fn exceptional_indices(&self) -> Vec<usize> {
        self.samples.iter().filter(|s| s.status == SampleStatus::Exceptional).map(|s| s.index).collect()
    }

    /// Per-sample CSV `index,x,y,nu_value,full_value,gap,status`, or the
    /// circle curve `K,integral_sigma,integral_log_sigma`, or the disk sups
    /// `disk,K,sup`.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        let mut out = String::new();
        if !self.curve.is_empty() {
            out.push_str("K,integral_sigma,integral_log_sigma\n");
            for p in &self.curve {
                out.push_str(&format!("{},{},{}\n", p.k, p.integral_sigma, p.integral_log_sigma));
            }
        } else if !self.disks.is_empty() {
            out.push_str("disk,K,sup\n");
            for (i, d) in self.disks.iter().enumerate() {
                for (k, s) in self.schedule.iter().zip(&d.sups) {
                    out.push_str(&format!("{i},{k},{s}\n"));
                }
            }
        } else {
            out.push_str("index,x,y,nu_value,full_value,gap,status\n");
            for s in &self.samples {
                let status = serde_json::to_value(s.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    s.index,
                    s.z.re,
                    s.z.im,
                    opt(s.nu_value),
                    opt(s.full_value),
                    opt(s.gap),
                    status
                ));
            }
        }
        out
    }
}

/// `ν`-part and full-sequence estimates of `f` at `z` over the n-range covered by `kw`.
fn paired_estimates(src: &CoefficientSource, nu: &IndexSequence, z: Complex64, f: Functional, kw: KWindow) -> Result<(Option<f64>, Option<f64>)> {
    let idx = kw.indices(nu);
    let (lo, hi) = match (idx.first(), idx.last()) {
        (Some(a), Some(b)) => (a.1, b.1),
        _ => return Err(GrowthError::EmptyWindow(kw.k_min, kw.k_max)),
    };
    let ns: Vec<u64> = (lo..=hi).collect();
    let lcs = log_coeffs(src, z, &ns, &RecenterPolicy::default())?;
    let nu_lcs: Vec<LogCoeff> = idx.iter().map(|(_, n)| lcs[(n - lo) as usize]).collect();
    let full_idx: Vec<(u64, u64)> = ns.iter().map(|n| (*n, *n)).collect();
    let full_kw = KWindow { k_min: lo, k_max: hi };
    let value = |r: Result<crate::subseq::SubseqEstimate>| match r {
        Ok(e) => Ok(Some(e.value)),
        Err(GrowthError::AllSkipped) => Ok(None),
        Err(e) => Err(e),
    };
    Ok((value(assemble(f, z, kw, &idx, &nu_lcs))?, value(assemble(f, z, full_kw, &full_idx, &lcs))?))
}

fn check_subexponential(nu: &IndexSequence, kw: KWindow, notes: &mut Vec<String>) -> Result<()> {
    let report = subexponential_diagnostic(nu, kw.k_max.max(10))?;
    if report.exponential_flag {
        return Err(GrowthError::BadParam(format!(
            "index sequence {nu} grows exponentially (max n_(k+1)/n_k = {})",
            report.max_tail_ratio
        )));
    }
    notes.push(format!("subexponential diagnostic: max n_(k+1)/n_k = {}", report.max_tail_ratio));
    Ok(())
}

fn ae_experiment(
    name: &str,
    src: &CoefficientSource,
    nu: &IndexSequence,
    spec: &SamplingSpec,
    f: Functional,
    kw: KWindow,
    exceptional: impl Fn(f64, f64) -> bool + Sync,
    params: serde_json::Value,
) -> Result<ExperimentReport> {
    let seed = match spec.mode {
        SamplingMode::UniformRandom { seed, .. } => Some(seed),
        SamplingMode::Grid { .. } => None,
    };
    let mut report = ExperimentReport::new(name, params, seed);
    check_subexponential(nu, kw, &mut report.notes)?;
    let points = spec.samples();
    let records = points
        .par_iter()
        .enumerate()
        .map(|(index, &z)| {
            let (nu_value, full_value) = paired_estimates(src, nu, z, f, kw)?;
            let (gap, status) = match (nu_value, full_value) {
                (Some(a), Some(b)) => {
                    (Some(b - a), if exceptional(a, b) { SampleStatus::Exceptional } else { SampleStatus::Ok })
                }
                _ => (None, SampleStatus::StructurallyEmpty),
            };
            Ok(SampleRecord { index, z, nu_value, full_value, gap, status })
        })
        .collect::<Result<Vec<_>>>()?;
    report.set_samples(records);
    Ok(report)
}

/// Compares `θ̂_ν(z)` with the full-sequence `θ̂(z)` over the same n-range at
/// each sample; exceptional when they differ by more than `tol` or when
/// `θ̂_ν(z) = 0 < tol < θ̂(z)`.
pub fn ae_order_experiment(src: &CoefficientSource, nu: &IndexSequence, spec: &SamplingSpec, kw: KWindow, tol: f64) -> Result<ExperimentReport> {
    let params = serde_json::json!({
        "source": src.id(),
        "nu": nu.to_string(),
        "sampling": spec,
        "k_window": kw,
        "tol": tol,
    });
    ae_experiment("ae_order", src, nu, spec, Functional::Theta, kw, |a, b| (a - b).abs() > tol || (a == 0.0 && b > tol), params)
}

/// Compares `τ̂_ν(z)` with the full-sequence `τ̂(z)`; exceptional when the
/// relative gap exceeds `tol_rel`.
pub fn ae_type_experiment(
    src: &CoefficientSource,
    nu: &IndexSequence,
    spec: &SamplingSpec,
    rho: f64,
    kw: KWindow,
    tol_rel: f64,
) -> Result<ExperimentReport> {
    let params = serde_json::json!({
        "source": src.id(),
        "nu": nu.to_string(),
        "sampling": spec,
        "rho": rho,
        "k_window": kw,
        "tol_rel": tol_rel,
    });
    let f = Functional::Tau(rho);
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(GrowthError::RhoOutOfRange(rho));
    }
    ae_experiment("ae_type", src, nu, spec, f, kw, |a, b| (a - b).abs() > tol_rel * b.abs(), params)
}

fn check_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GrowthError::BadParam("K schedule must be a non-empty increasing list of positive integers".into()));
    }
    Ok(())
}

fn growth_of(first: f64, last: f64, len: usize) -> Option<f64> {
    (len > 1).then(|| last / first)
}

/// Running sups of `σ_ν` at 25 seeded points per disk, read off at each
/// schedule entry. A disk shows the divergence signature when the sup over
/// its points grows by [`DIVERGENCE_FACTOR`] from the first to the last entry.
pub fn gdelta_probe(
    src: &CoefficientSource,
    nu: &IndexSequence,
    disks: &[Disk],
    rho: f64,
    schedule: &[u64],
    seed: u64,
) -> Result<ExperimentReport> {
    check_schedule(schedule)?;
    let params = serde_json::json!({
        "source": src.id(),
        "nu": nu.to_string(),
        "disks": disks,
        "rho": rho,
        "schedule": schedule,
        "points_per_disk": GDELTA_POINTS_PER_DISK,
    });
    let mut report = ExperimentReport::new("gdelta", params, Some(seed));
    let k_max = *schedule.last().expect("checked non-empty");
    let jobs: Vec<(usize, Complex64)> = disks
        .iter()
        .enumerate()
        .flat_map(|(d, disk)| {
            (0..GDELTA_POINTS_PER_DISK).map(move |j| (d, uniform_point(disk, seed, (d * GDELTA_POINTS_PER_DISK + j) as u64)))
        })
        .collect();
    let curves: Vec<SigmaCurve> = jobs.par_iter().map(|(_, z)| sigma_nu(src, nu, *z, rho, k_max)).collect::<Result<_>>()?;
    for (d, disk) in disks.iter().enumerate() {
        let mine: Vec<&SigmaCurve> = curves[d * GDELTA_POINTS_PER_DISK..(d + 1) * GDELTA_POINTS_PER_DISK].iter().collect();
        let sups: Vec<f64> =
            schedule.iter().map(|k| mine.iter().map(|c| c.sup_at(*k)).fold(f64::NEG_INFINITY, f64::max)).collect();
        let growth = growth_of(sups[0], sups[sups.len() - 1], sups.len());
        report.disks.push(DiskRecord {
            disk: *disk,
            points: mine.iter().map(|c| c.z).collect(),
            growth,
            signature: growth.map(|g| g >= DIVERGENCE_FACTOR),
            sups,
        });
    }
    report.schedule = schedule.to_vec();
    report.signature = if schedule.len() < 2 {
        report.notes.push("degenerate schedule: growth undefined".into());
        None
    } else {
        Some(report.disks.iter().all(|d| d.signature == Some(true)))
    };
    report.notes.push(EVIDENCE_NOTE.into());
    Ok(report)
}

/// Trapezoidal integrals of `σ_ν` and `ln σ_ν` over `S` equispaced nodes of a
/// circle, with `σ_ν` truncated at each schedule entry.
pub fn circle_integral_probe(
    src: &CoefficientSource,
    nu: &IndexSequence,
    rho: f64,
    circle: Disk,
    schedule: &[u64],
    nodes: usize,
) -> Result<ExperimentReport> {
    check_schedule(schedule)?;
    if nodes < 3 {
        return Err(GrowthError::BadParam(format!("need at least 3 circle nodes, got {nodes}")));
    }
    let params = serde_json::json!({
        "source": src.id(),
        "nu": nu.to_string(),
        "rho": rho,
        "circle": circle,
        "schedule": schedule,
        "nodes": nodes,
    });
    let mut report = ExperimentReport::new("circle_integral", params, None);
    let k_max = *schedule.last().expect("checked non-empty");
    let zs: Vec<Complex64> =
        (0..nodes).map(|j| circle.center + Complex64::from_polar(circle.radius, TAU * j as f64 / nodes as f64)).collect();
    let curves: Vec<SigmaCurve> = zs.par_iter().map(|z| sigma_nu(src, nu, *z, rho, k_max)).collect::<Result<_>>()?;
    let ds = TAU * circle.radius / nodes as f64;
    for &k in schedule {
        let (mut s, mut l) = (0.0, 0.0);
        for c in &curves {
            let v = c.sup_at(k);
            s += v;
            l += v.ln();
        }
        report.curve.push(CirclePoint { k, integral_sigma: s * ds, integral_log_sigma: l * ds });
    }
    report.schedule = schedule.to_vec();
    let first = &report.curve[0];
    let last = &report.curve[report.curve.len() - 1];
    let increasing = |g: fn(&CirclePoint) -> f64| report.curve.windows(2).all(|w| g(&w[1]) > g(&w[0]));
    report.signature = (schedule.len() > 1).then(|| {
        increasing(|p| p.integral_sigma)
            && increasing(|p| p.integral_log_sigma)
            && last.integral_sigma >= DIVERGENCE_FACTOR * first.integral_sigma
            && last.integral_log_sigma >= DIVERGENCE_FACTOR * first.integral_log_sigma
    });
    if schedule.len() < 2 {
        report.notes.push("degenerate schedule: growth undefined".into());
    }
    report.notes.push(EVIDENCE_NOTE.into());
    Ok(report)
}

impl ExperimentReport {
    /// `last / first` of the circle integrals `(σ, ln σ)`.
    pub fn circle_growth(&self) -> Option<(f64, f64)> {
        let (a, b) = (self.curve.first()?, self.curve.last()?);
        Some((b.integral_sigma / a.integral_sigma, b.integral_log_sigma / a.integral_log_sigma))
    }

    /// Largest disk growth factor of a [`gdelta_probe`] run.
    pub fn max_disk_growth(&self) -> Option<f64> {
        self.disks.iter().filter_map(|d| d.growth).reduce(f64::max)
    }
}

/// Ring-and-spoke quadrature resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadrature {
    pub rings: usize,
    pub spokes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanValueReport {
    pub disk: Disk,
    pub k_window: (u64, u64),
    pub quadrature: Quadrature,
    pub center: f64,
    pub average: f64,
    pub slack: f64,
    pub holds: bool,
    pub node_min: f64,
    pub node_max: f64,
    pub excluded: usize,
    /// Terms skipped at the center and all nodes; nonzero means the
    /// window is outside certified computability.
    pub skipped_terms: usize,
    pub coverage_warning: bool,
}

/// `Φ(z) = sup_{k ∈ kw} |g^{(n_k)}(z)|^{1/(n_k ln n_k)}`; `None` when every term is skipped.
/// Also returns the number of skipped terms.
fn phi(src: &CoefficientSource, nu: &IndexSequence, kw: KWindow, z: Complex64) -> Result<(Option<f64>, usize)> {
    match crate::subseq::theta_nu(src, nu, z, kw) {
        Ok(e) => Ok((Some(e.value), e.skipped)),
        Err(GrowthError::AllSkipped) => Ok((None, (kw.k_max - kw.k_min + 1) as usize)),
        Err(e) => Err(e),
    }
}

/// Compares `Φ(center)` with its disk average. Nodes sit at ring midpoints
/// `r_i = (i + ½) r / R` and angles `2πj/S`, weighted by `r_i`. The
/// inequality is accepted with slack `0.02 (max − min)` over the nodes.
pub fn mean_value_check(src: &CoefficientSource, nu: &IndexSequence, kw: KWindow, disk: Disk, quad: Quadrature) -> Result<MeanValueReport> {
    if quad.rings < 16 || quad.spokes < 32 {
        return Err(GrowthError::BadParam(format!(
            "quadrature needs at least 16 rings and 32 spokes, got {} x {}",
            quad.rings, quad.spokes
        )));
    }
    let (center, mut skipped_terms) = phi(src, nu, kw, disk.center)?;
    let center = center.ok_or(GrowthError::AllSkipped)?;
    let nodes: Vec<(f64, Complex64)> = (0..quad.rings)
        .flat_map(|i| {
            let r = (i as f64 + 0.5) * disk.radius / quad.rings as f64;
            (0..quad.spokes).map(move |j| (r, disk.center + Complex64::from_polar(r, TAU * j as f64 / quad.spokes as f64)))
        })
        .collect();
    let values: Vec<(Option<f64>, usize)> = nodes.par_iter().map(|(_, z)| phi(src, nu, kw, *z)).collect::<Result<_>>()?;
    let (mut num, mut den) = (0.0, 0.0);
    let (mut lo, mut hi) = (center, center);
    let mut excluded = 0;
    for ((w, _), (v, skipped)) in nodes.iter().zip(&values) {
        skipped_terms += skipped;
        match v {
            Some(v) => {
                num += w * v;
                den += w;
                lo = lo.min(*v);
                hi = hi.max(*v);
            }
            None => excluded += 1,
        }
    }
    if den == 0.0 {
        return Err(GrowthError::AllSkipped);
    }
    let average = num / den;
    let slack = SLACK_FRACTION * (hi - lo);
    Ok(MeanValueReport {
        disk,
        k_window: (kw.k_min, kw.k_max),
        quadrature: quad,
        center,
        average,
        slack,
        holds: center <= average + slack,
        node_min: lo,
        node_max: hi,
        excluded,
        skipped_terms,
        coverage_warning: excluded as f64 > COVERAGE_LIMIT * nodes.len() as f64,
    })
}

/// Rectangular scan grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn nodes(&self) -> Vec<Complex64> {
        let coord = |lo: f64, hi: f64, n: usize, i: usize| if n < 2 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
        (0..self.ny)
            .flat_map(|iy| {
                (0..self.nx).map(move |ix| {
                    Complex64::new(coord(self.x_min, self.x_max, self.nx, ix), coord(self.y_min, self.y_max, self.ny, iy))
                })
            })
            .collect()
    }
}

/// `(x, y, θ̂(z) − θ̂_ν(z))` per grid node; `NaN` gap when either side is empty.
pub fn exceptional_set_scan(src: &CoefficientSource, nu: &IndexSequence, grid: &GridSpec, kw: KWindow) -> Result<Vec<(f64, f64, f64)>> {
    grid.nodes()
        .par_iter()
        .map(|z| {
            let (a, b) = paired_estimates(src, nu, *z, Functional::Theta, kw)?;
            let gap = match (a, b) {
                (Some(a), Some(b)) => b - a,
                _ => f64::NAN,
            };
            Ok((z.re, z.im, gap))
        })
        .collect()
}

/// Heat-map CSV with header `x,y,gap`.
pub fn scan_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("x,y,gap\n");
    for (x, y, g) in rows {
        out.push_str(&format!("{x},{y},{g}\n"));
    }
    out
}

/// Five disks of radius `1/2` centred at `0` and at `±1.5`, `±1.5i`.
pub fn default_disks() -> Vec<Disk> {
    [(0.0, 0.0), (1.5, 0.0), (-1.5, 0.0), (0.0, 1.5), (0.0, -1.5)]
        .iter()
        .map(|(x, y)| Disk { center: Complex64::new(*x, *y), radius: 0.5 })
        .collect()
}

/// `z = kπ/λ` for integer `k`: the points where `sin(λz)` vanishes.
pub fn sine_zero(k: i64, lambda: f64) -> Complex64 {
    Complex64::new(k as f64 * PI / lambda, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::catalog;

    fn src(s: &str) -> CoefficientSource {
        catalog(s).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sampling_is_stream_based() {
        let d = Disk::new(c(1.0, -1.0), 2.0).unwrap();
        let spec = SamplingSpec { region: d, mode: SamplingMode::UniformRandom { count: 50, seed: 7 }, extra: vec![c(9.0, 9.0)] };
        let s = spec.samples();
        assert_eq!(s.len(), 51);
        assert_eq!(s[50], c(9.0, 9.0));
        assert!(s[..50].iter().all(|z| (z - d.center).norm() <= 2.0));
        assert_eq!(s[17], uniform_point(&d, 7, 17));
        assert_ne!(s[17], uniform_point(&d, 8, 17));
        let grid = SamplingSpec { region: Disk::new(c(0.0, 0.0), 2.0).unwrap(), mode: SamplingMode::Grid { side: 5 }, extra: vec![] };
        let g = grid.samples();
        assert!(g.contains(&c(0.0, 0.0)));
        assert_eq!(g.len(), 13);
    }

    #[test]
    fn ae_order_grid_flags_the_zero() {
        let s = src("sin:lambda=1");
        let ev = IndexSequence::evens();
        let kw = KWindow::for_horizon(&ev, 400).unwrap();
        let spec = SamplingSpec { region: Disk::new(c(0.0, 0.0), 1.0).unwrap(), mode: SamplingMode::Grid { side: 5 }, extra: vec![] };
        let r = ae_order_experiment(&s, &ev, &spec, kw, 0.05).unwrap();
        let zero = spec.samples().iter().position(|z| *z == c(0.0, 0.0)).unwrap();
        assert_eq!(r.exceptional_indices(), vec![zero]);
        assert!((r.exceptional_fraction - 1.0 / r.samples.len() as f64).abs() < 1e-15);
    }

    #[test]
    fn ae_order_exp_on_primes() {
        let spec = SamplingSpec {
            region: Disk::new(c(0.0, 0.0), 2.0).unwrap(),
            mode: SamplingMode::UniformRandom { count: 100, seed: 3 },
            extra: vec![],
        };
        let p = IndexSequence::Primes;
        let r = ae_order_experiment(&src("exp"), &p, &spec, KWindow::for_horizon(&p, 2000).unwrap(), 0.1).unwrap();
        assert_eq!(r.exceptional_count, 0);
    }

    #[test]
    fn ae_type_examples() {
        let spec = SamplingSpec {
            region: Disk::new(c(1.0, 0.0), 1.0).unwrap(),
            mode: SamplingMode::UniformRandom { count: 100, seed: 11 },
            extra: vec![],
        };
        let ev = IndexSequence::evens();
        let r = ae_type_experiment(&src("sin:lambda=2"), &ev, &spec, 1.0, KWindow::for_horizon(&ev, 2000).unwrap(), 0.1).unwrap();
        assert_eq!(r.exceptional_fraction, 0.0);
        let small = SamplingSpec { mode: SamplingMode::UniformRandom { count: 10, seed: 1 }, ..spec };
        let p = ae_type_experiment(&src("power_type:rho=2"), &ev, &small, 2.0, KWindow::new(20, 40).unwrap(), 1e-6);
        let p = p.unwrap();
        assert!(p.samples.iter().all(|s| s.status != SampleStatus::StructurallyEmpty));
        let at_zero = SamplingSpec { mode: SamplingMode::Grid { side: 1 }, ..small };
        let z = ae_type_experiment(&src("power_type:rho=2"), &ev, &at_zero, 2.0, KWindow::new(20, 40).unwrap(), 1e-6).unwrap();
        assert_eq!(z.samples[0].z, c(1.0, 0.0));
    }

    #[test]
    fn power_type_is_flat_at_the_origin() {
        let ev = IndexSequence::evens();
        let spec = SamplingSpec { region: Disk::new(c(0.0, 0.0), 1.0).unwrap(), mode: SamplingMode::Grid { side: 1 }, extra: vec![] };
        let r = ae_type_experiment(&src("power_type:rho=2"), &ev, &spec, 2.0, KWindow::new(20, 200).unwrap(), 1e-6).unwrap();
        assert_eq!(r.exceptional_fraction, 0.0);
        assert_eq!(r.samples[0].gap, Some(0.0));
    }

    #[test]
    fn exponential_sequences_are_rejected() {
        let spec = SamplingSpec { region: Disk::new(c(0.0, 0.0), 1.0).unwrap(), mode: SamplingMode::Grid { side: 1 }, extra: vec![] };
        let p = IndexSequence::power(2).unwrap();
        assert!(matches!(ae_order_experiment(&src("exp"), &p, &spec, KWindow::new(2, 10).unwrap(), 0.1), Err(GrowthError::BadParam(_))));
    }

    #[test]
    fn gdelta_negative_control_and_degenerate_schedule() {
        let disks = vec![Disk::new(c(0.0, 0.0), 0.5).unwrap()];
        let e = gdelta_probe(&src("exp"), &IndexSequence::evens(), &disks, 1.0, &[20, 50, 200], 5).unwrap();
        assert!(e.disks[0].growth.unwrap() < PLATEAU_FACTOR);
        assert_eq!(e.signature, Some(false));
        let one = gdelta_probe(&src("exp"), &IndexSequence::evens(), &disks, 1.0, &[50], 5).unwrap();
        assert_eq!(one.signature, None);
        assert_eq!(one.disks[0].growth, None);
        assert!(gdelta_probe(&src("exp"), &IndexSequence::evens(), &disks, 1.0, &[50, 20], 5).is_err());
    }

    #[test]
    fn circle_quadrature_converges() {
        let circle = Disk::new(c(0.0, 0.0), 1.0).unwrap();
        let ev = IndexSequence::evens();
        let m = src("maximal_type:rho=1");
        let a = circle_integral_probe(&m, &ev, 1.0, circle, &[20, 100], 64).unwrap();
        let b = circle_integral_probe(&m, &ev, 1.0, circle, &[20, 100], 128).unwrap();
        for (p, q) in a.curve.iter().zip(&b.curve) {
            assert!((p.integral_sigma / q.integral_sigma - 1.0).abs() < 0.01);
        }
        let e = circle_integral_probe(&src("exp"), &ev, 1.0, circle, &[200, 2000], 64).unwrap();
        let (gs, _) = e.circle_growth().unwrap();
        assert!(gs < PLATEAU_FACTOR);
        assert_eq!(e.signature, Some(false));
        assert!(e.to_csv().starts_with("K,integral_sigma,integral_log_sigma\n"));
    }

    #[test]
    fn mean_value_examples() {
        let ev = IndexSequence::evens();
        let quad = Quadrature { rings: 16, spokes: 32 };
        let kw = KWindow::for_n_range(&ev, 100, 400).unwrap();
        let s = mean_value_check(&src("sin:lambda=1"), &ev, kw, Disk::new(c(1.0, 0.0), 0.5).unwrap(), quad).unwrap();
        assert!(s.holds, "{s:?}");
        let fine = mean_value_check(
            &src("sin:lambda=1"),
            &ev,
            kw,
            Disk::new(c(1.0, 0.0), 0.5).unwrap(),
            Quadrature { rings: 32, spokes: 64 },
        )
        .unwrap();
        assert!((fine.average / s.average - 1.0).abs() < 0.01);
        let e = mean_value_check(&src("exp"), &ev, kw, Disk::new(c(0.5, 0.5), 1.0).unwrap(), quad).unwrap();
        assert!(e.holds && (e.center - e.average).abs() < 1e-3);
        let toy = mean_value_check(&src("exp:lambda=2"), &ev, kw, Disk::new(c(0.0, 0.0), 1.0).unwrap(), quad).unwrap();
        assert!((toy.center - toy.average).abs() <= toy.slack.max(1e-12), "{toy:?}");
        assert!(mean_value_check(&src("exp"), &ev, kw, Disk::new(c(0.0, 0.0), 1.0).unwrap(), Quadrature { rings: 8, spokes: 32 }).is_err());
    }

    #[test]
    fn scan_shape() {
        let ev = IndexSequence::evens();
        let kw = KWindow::for_horizon(&ev, 200).unwrap();
        let empty = GridSpec { x_min: -1.0, x_max: 1.0, y_min: -1.0, y_max: 1.0, nx: 0, ny: 0 };
        assert!(exceptional_set_scan(&src("sin:lambda=1"), &ev, &empty, kw).unwrap().is_empty());
        let g = GridSpec { x_min: -4.0, x_max: 4.0, y_min: -4.0, y_max: 4.0, nx: 9, ny: 9 };
        let rows = exceptional_set_scan(&src("sin:lambda=1"), &ev, &g, kw).unwrap();
        let at0 = rows.iter().find(|r| r.0 == 0.0 && r.1 == 0.0).unwrap();
        assert!(at0.2 > 0.9);
        let off: Vec<_> = rows.iter().filter(|r| r.1.abs() >= 1.0).collect();
        assert!(off.iter().all(|r| r.2.abs() < 0.1));
        assert_eq!(scan_csv(&rows).lines().count(), 82);
        let e = exceptional_set_scan(&src("exp"), &IndexSequence::odds(), &g, kw).unwrap();
        assert!(e.iter().all(|r| r.2.abs() < 0.05));
    }
}
