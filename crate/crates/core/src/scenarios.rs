//! Experimental scenario builders and seeded random instance families.
//!
//! All randomness comes from [`SeededRng`]: PCG-64 (XSL-RR 128/64, the
//! `rand_pcg::Pcg64` generator) seeded through `SeedableRng::seed_from_u64`,
//! with uniforms on `[0, 1)` formed as `(next_u64 >> 11) · 2⁻⁵³`. Draws are
//! consumed in a fixed, documented order so that a seed pins every number.

use nalgebra::DMatrix;
use rand::{RngCore, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CoalitionStructure, Scenario};

/// Portable seeded uniform generator.
#[derive(Debug, Clone)]
pub struct SeededRng(Pcg64);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(Pcg64::seed_from_u64(seed))
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform_open(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (lo.ln() + (hi.ln() - lo.ln()) * self.uniform()).exp()
    }

    /// Integer uniform on `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        let span = (hi - lo + 1) as f64;
        lo + ((self.uniform() * span) as usize).min(hi - lo)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Flat Dirichlet sample of length `len` (normalized exponentials).
    pub fn simplex(&mut self, len: usize) -> Vec<f64> {
        let e: Vec<f64> = (0..len).map(|_| -self.uniform_open().ln()).collect();
        let total: f64 = e.iter().sum();
        if total > 0.0 {
            e.iter().map(|x| x / total).collect()
        } else {
            vec![1.0 / len as f64; len]
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.int_in(0, i);
            items.swap(i, j);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeLabel {
    H,
    L,
}

impl TypeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            TypeLabel::H => "H",
            TypeLabel::L => "L",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationType {
    pub label: TypeLabel,
    pub demand: f64,
    pub sensitivity: f64,
}

/// Parameter sets for the two station types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypePreset {
    /// H: d=5, μ=1; L: d=1, μ=0.1.
    Section43,
    /// H: d=5, μ=5; L: d=1, μ=1.
    Composition,
}

impl TypePreset {
    pub fn station(self, label: TypeLabel) -> StationType {
        let (demand, sensitivity) = match (self, label) {
            (TypePreset::Section43, TypeLabel::H) => (5.0, 1.0),
            (TypePreset::Section43, TypeLabel::L) => (1.0, 0.1),
            (TypePreset::Composition, TypeLabel::H) => (5.0, 5.0),
            (TypePreset::Composition, TypeLabel::L) => (1.0, 1.0),
        };
        StationType {
            label,
            demand,
            sensitivity,
        }
    }
}

pub const SECTION43_STATIONS: usize = 5;
pub const SECTION43_HORIZON: usize = 10;
pub const SECTION43_SLOPE: f64 = 0.5;
pub const BASE_INTERCEPT: f64 = 0.5;

/// Two-level profile: `η₁` for slots `t ≤ T/2` (1-based), `η₂` after.
pub fn step_alpha(horizon: usize, eta1: f64, eta2: f64) -> Vec<f64> {
    (1..=horizon)
        .map(|t| if (t as f64) <= horizon as f64 / 2.0 { eta1 } else { eta2 })
        .collect()
}

fn typed_scenario(
    preset: TypePreset,
    labels: &[TypeLabel],
    intercepts: Vec<f64>,
    slope: f64,
    alpha: &[f64],
) -> Result<Scenario> {
    let types: Vec<StationType> = labels.iter().map(|&l| preset.station(l)).collect();
    Scenario::with_alpha(
        intercepts,
        slope,
        types.iter().map(|s| s.sensitivity).collect(),
        types.iter().map(|s| s.demand).collect(),
        alpha,
    )
}

/// Sweep over coalition sizes in the five-station setup: the first `k`
/// stations are Type L and form the coalition, the rest are Type H.
///
/// `ν` is drawn once per call in slot order and shared by every size, so the
/// curves differ only through the coalition.
pub fn build_section43(
    sizes: &[usize],
    eta1: f64,
    eta2: f64,
    delta: f64,
    seed: u64,
) -> Result<Vec<(Scenario, CoalitionStructure)>> {
    let n = SECTION43_STATIONS;
    let horizon = SECTION43_HORIZON;
    if let Some(&k) = sizes.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::InvalidParameter {
            name: "sizes",
            detail: format!("coalition size {k} outside 1..={n}"),
        });
    }
    let mass = horizon as f64 * (eta1 + eta2) / 2.0;
    if (mass - 1.0).abs() > 1e-9 || eta1 < 0.0 || eta2 < 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            detail: format!("need η₁, η₂ ≥ 0 and T(η₁+η₂)/2 = 1, got {mass}"),
        });
    }
    if !delta.is_finite() {
        return Err(Error::NonFinite { field: "delta" });
    }
    let mut rng = SeededRng::new(seed);
    let intercepts: Vec<f64> = (0..horizon)
        .map(|_| BASE_INTERCEPT + delta * rng.uniform())
        .collect();
    let alpha = step_alpha(horizon, eta1, eta2);
    sizes
        .iter()
        .map(|&k| {
            let labels: Vec<TypeLabel> = (0..n)
                .map(|i| if i < k { TypeLabel::L } else { TypeLabel::H })
                .collect();
            let s = typed_scenario(
                TypePreset::Section43,
                &labels,
                intercepts.clone(),
                SECTION43_SLOPE,
                &alpha,
            )?;
            Ok((s, CoalitionStructure::single((0..k).collect())?))
        })
        .collect()
}

pub const THREE_STATION_HORIZON: usize = 10;
pub const THREE_STATION_INTERCEPT: f64 = 10.0;
pub const THREE_STATION_SLOPE: f64 = 1.0;

/// The nominal profile used for the three-station comparison. Uniform nominal
/// profiles with constant intercepts make both equilibria coincide, so the
/// two-level profile of the five-station sweep is used instead.
pub fn three_station_alpha() -> Vec<f64> {
    let t = THREE_STATION_HORIZON as f64;
    step_alpha(THREE_STATION_HORIZON, 0.4 / t, 1.6 / t)
}

/// Three stations with composition-preset types; stations 1 and 2 form the
/// coalition.
pub fn build_three_station(types: [TypeLabel; 3]) -> Result<(Scenario, CoalitionStructure)> {
    let s = typed_scenario(
        TypePreset::Composition,
        &types,
        vec![THREE_STATION_INTERCEPT; THREE_STATION_HORIZON],
        THREE_STATION_SLOPE,
        &three_station_alpha(),
    )?;
    Ok((s, CoalitionStructure::single(vec![0, 1])?))
}

/// All eight assignments ordered as (coalition pair, outsider) with H before L.
pub fn three_station_assignments() -> Vec<[TypeLabel; 3]> {
    use TypeLabel::{H, L};
    let mut out = Vec::with_capacity(8);
    for a in [H, L] {
        for b in [H, L] {
            for c in [H, L] {
                out.push([a, b, c]);
            }
        }
    }
    out
}

pub const MIXED_SLOPE: f64 = 0.5;
pub const MIXED_NOISE: f64 = 0.4;

/// Random-type coalition among Type L outsiders.
///
/// Draw order: `ν` (T uniforms, `a^t = 0.5 + 0.4 ν_t`), then `u` (T uniforms
/// on `(0, 1]`, `α = u / Σu`), then one Bernoulli(`p_h`) per coalition member
/// in station order. The first `coalition_size` stations form the coalition,
/// so sweeps over the size with a fixed seed share `a`, `α` and the types of
/// the common members.
pub fn build_mixed_random(
    n: usize,
    t: usize,
    p_h: f64,
    coalition_size: usize,
    seed: u64,
) -> Result<(Scenario, CoalitionStructure)> {
    if n == 0 {
        return Err(Error::EmptyDimension { field: "n_stations" });
    }
    if t == 0 {
        return Err(Error::EmptyDimension { field: "horizon" });
    }
    if !(0.0..=1.0).contains(&p_h) {
        return Err(Error::InvalidParameter {
            name: "p_h",
            detail: format!("probability {p_h} outside [0, 1]"),
        });
    }
    if coalition_size == 0 || coalition_size > n {
        return Err(Error::InvalidParameter {
            name: "coalition_size",
            detail: format!("{coalition_size} outside 1..={n}"),
        });
    }
    let mut rng = SeededRng::new(seed);
    let intercepts: Vec<f64> = (0..t)
        .map(|_| BASE_INTERCEPT + MIXED_NOISE * rng.uniform())
        .collect();
    let u: Vec<f64> = (0..t).map(|_| rng.uniform_open()).collect();
    let total: f64 = u.iter().sum();
    let alpha: Vec<f64> = u.iter().map(|x| x / total).collect();
    let labels: Vec<TypeLabel> = (0..n)
        .map(|i| {
            if i < coalition_size && rng.bernoulli(p_h) {
                TypeLabel::H
            } else {
                TypeLabel::L
            }
        })
        .collect();
    let s = typed_scenario(TypePreset::Section43, &labels, intercepts, MIXED_SLOPE, &alpha)?;
    Ok((s, CoalitionStructure::single((0..coalition_size).collect())?))
}

/// Coalition-size sweep description, as read from a sweep config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SweepSpec {
    /// Five stations, Type L coalition against Type H outsiders.
    Section43(Section43Sweep),
    /// Random-type coalition against Type L outsiders.
    MixedRandom(MixedRandomSweep),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Section43Sweep {
    pub coalition_sizes: Vec<usize>,
    pub eta1: f64,
    pub eta2: f64,
    pub delta: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedRandomSweep {
    pub n_stations: usize,
    pub horizon: usize,
    pub p_h: f64,
    pub coalition_sizes: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl SweepSpec {
    pub fn seed(&self) -> u64 {
        match self {
            SweepSpec::Section43(s) => s.seed,
            SweepSpec::MixedRandom(s) => s.seed,
        }
    }

    pub fn coalition_sizes(&self) -> &[usize] {
        match self {
            SweepSpec::Section43(s) => &s.coalition_sizes,
            SweepSpec::MixedRandom(s) => &s.coalition_sizes,
        }
    }

    /// Copy with the seed and, when given, the sizes replaced.
    pub fn with_overrides(&self, sizes: Option<Vec<usize>>, seed: Option<u64>) -> Self {
        let mut out = self.clone();
        match &mut out {
            SweepSpec::Section43(s) => {
                if let Some(v) = sizes {
                    s.coalition_sizes = v;
                }
                if let Some(v) = seed {
                    s.seed = v;
                }
            }
            SweepSpec::MixedRandom(s) => {
                if let Some(v) = sizes {
                    s.coalition_sizes = v;
                }
                if let Some(v) = seed {
                    s.seed = v;
                }
            }
        }
        out
    }

    /// One scenario per coalition size, in the order given.
    pub fn build(&self) -> Result<Vec<(Scenario, CoalitionStructure)>> {
        match self {
            SweepSpec::Section43(s) => build_section43(&s.coalition_sizes, s.eta1, s.eta2, s.delta, s.seed),
            SweepSpec::MixedRandom(s) => s
                .coalition_sizes
                .iter()
                .map(|&k| build_mixed_random(s.n_stations, s.horizon, s.p_h, k, s.seed))
                .collect(),
        }
    }
}

/// Structural constraint on a random instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    /// Arbitrary nonnegative nominal profiles and intercepts.
    Unconstrained,
    /// Constant intercepts and `x̄ = d αᵀ`.
    CaseA,
    /// Uniform nominal profiles; intercepts vary per slot.
    CaseB,
}

/// Parameter ranges for [`random_instance`]. Integer ranges are inclusive;
/// `d` and `μ` are drawn log-uniformly, `b` and `a` uniformly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceBounds {
    pub stations: (usize, usize),
    pub horizon: (usize, usize),
    pub slope: (f64, f64),
    pub sensitivity: (f64, f64),
    pub demand: (f64, f64),
    pub intercept: (f64, f64),
    pub coalitions: (usize, usize),
    pub kind: InstanceKind,
}

impl Default for InstanceBounds {
    fn default() -> Self {
        InstanceBounds {
            stations: (1, 8),
            horizon: (1, 24),
            slope: (0.1, 2.0),
            sensitivity: (0.05, 5.0),
            demand: (0.5, 10.0),
            intercept: (0.0, 2.0),
            coalitions: (0, 3),
            kind: InstanceKind::Unconstrained,
        }
    }
}

impl InstanceBounds {
    pub fn with_kind(mut self, kind: InstanceKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, detail: String| Err(Error::InvalidParameter { name, detail });
        let ranges = [
            ("slope", self.slope, true),
            ("sensitivity", self.sensitivity, true),
            ("demand", self.demand, true),
            ("intercept", self.intercept, false),
        ];
        for (name, (lo, hi), positive) in ranges {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi || (positive && lo <= 0.0) {
                return bad(name, format!("invalid range [{lo}, {hi}]"));
            }
        }
        for (name, (lo, hi)) in [("stations", self.stations), ("horizon", self.horizon)] {
            if lo == 0 || lo > hi {
                return bad(name, format!("invalid range {lo}..={hi}"));
            }
        }
        if self.coalitions.0 > self.coalitions.1 {
            return bad("coalitions", format!("invalid range {:?}", self.coalitions));
        }
        Ok(())
    }
}

/// Reproducible random instance.
///
/// Draw order: N, T, b, μ (per station), d (per station), intercepts, nominal
/// profiles, then the coalition structure (count, a shuffle of the stations,
/// one size per coalition). Coalitions have at least two members whenever
/// enough stations remain.
pub fn random_instance(bounds: &InstanceBounds, seed: u64) -> Result<(Scenario, CoalitionStructure)> {
    bounds.validate()?;
    let mut rng = SeededRng::new(seed);
    let n = rng.int_in(bounds.stations.0, bounds.stations.1);
    let t = rng.int_in(bounds.horizon.0, bounds.horizon.1);
    let b = rng.uniform_in(bounds.slope.0, bounds.slope.1);
    let mu: Vec<f64> = (0..n)
        .map(|_| rng.log_uniform(bounds.sensitivity.0, bounds.sensitivity.1))
        .collect();
    let d: Vec<f64> = (0..n)
        .map(|_| rng.log_uniform(bounds.demand.0, bounds.demand.1))
        .collect();
    let (lo, hi) = bounds.intercept;
    let scenario = match bounds.kind {
        InstanceKind::CaseA => {
            let a = rng.uniform_in(lo, hi);
            let alpha = rng.simplex(t);
            Scenario::with_alpha(vec![a; t], b, mu, d, &alpha)?
        }
        InstanceKind::CaseB => {
            let a: Vec<f64> = (0..t).map(|_| rng.uniform_in(lo, hi)).collect();
            Scenario::with_uniform_nominal(a, b, mu, d)?
        }
        InstanceKind::Unconstrained => {
            let a: Vec<f64> = (0..t).map(|_| rng.uniform_in(lo, hi)).collect();
            let mut nominal = DMatrix::zeros(n, t);
            for (i, &di) in d.iter().enumerate() {
                for (k, w) in rng.simplex(t).into_iter().enumerate() {
                    nominal[(i, k)] = di * w;
                }
            }
            Scenario::new(a, b, mu, d, nominal)?
        }
    };
    let structure = random_structure(&mut rng, n, bounds.coalitions)?;
    Ok((scenario, structure))
}

fn random_structure(
    rng: &mut SeededRng,
    n: usize,
    (min_count, max_count): (usize, usize),
) -> Result<CoalitionStructure> {
    let count = rng.int_in(min_count, max_count).min(n);
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut coalitions = Vec::with_capacity(count);
    let mut next = 0;
    for c in 0..count {
        let later = count - c - 1;
        let avail = n - next - later;
        let size = rng.int_in(avail.min(2), avail);
        coalitions.push(order[next..next + size].to_vec());
        next += size;
    }
    CoalitionStructure::new(coalitions)
}
