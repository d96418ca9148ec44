//! Game data, the linear price, station and group costs, and the coalition
//! block matrix.
//!
//! A scenario has `N` stations charging over `T` slots. Station `i` pays
//!
//! ```text
//!   c_i(x) = Σ_t p^t(x) x_i^t + (μ_i / 2) ‖x_i − x̄_i‖²,   p^t(x) = a^t + b Σ_j x_j^t
//! ```
//!
//! subject to `Σ_t x_i^t = d_i`. Charges may be negative (injection into the
//! grid) and are not bounded above.
//!
//! All indices are 0-based in this crate; the file formats convert to and from
//! the 1-based convention.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative tolerance on `Σ_t x_i^t = d_i`.
pub const FEASIBILITY_RTOL: f64 = 1e-9;

fn row_sum_ok(row_sum: f64, demand: f64, abs_sum: f64) -> bool {
    let scale = 1f64.max(demand.abs()).max(abs_sum);
    (row_sum - demand).abs() <= FEASIBILITY_RTOL * scale
}

/// Full parameter set of one game instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    price_intercepts: DVector<f64>,
    price_slope: f64,
    sensitivities: DVector<f64>,
    demands: DVector<f64>,
    nominal_profiles: DMatrix<f64>,
}

impl Scenario {
    /// Builds a scenario, checking positivity of `b` and `μ` and that each
    /// nominal profile row sums to its station's demand.
    pub fn new(
        price_intercepts: Vec<f64>,
        price_slope: f64,
        sensitivities: Vec<f64>,
        demands: Vec<f64>,
        nominal_profiles: DMatrix<f64>,
    ) -> Result<Self> {
        let n = sensitivities.len();
        let horizon = price_intercepts.len();
        if n == 0 {
            return Err(Error::EmptyDimension {
                field: "n_stations",
            });
        }
        if horizon == 0 {
            return Err(Error::EmptyDimension { field: "horizon" });
        }
        if demands.len() != n {
            return Err(Error::DimensionMismatch {
                field: "demands",
                expected: n,
                found: demands.len(),
            });
        }
        if nominal_profiles.nrows() != n {
            return Err(Error::DimensionMismatch {
                field: "nominal_profiles",
                expected: n,
                found: nominal_profiles.nrows(),
            });
        }
        if nominal_profiles.ncols() != horizon {
            return Err(Error::DimensionMismatch {
                field: "nominal_profiles[i]",
                expected: horizon,
                found: nominal_profiles.ncols(),
            });
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&price_intercepts) {
            return Err(Error::NonFinite {
                field: "price_intercepts",
            });
        }
        if !price_slope.is_finite() {
            return Err(Error::NonFinite {
                field: "price_slope",
            });
        }
        if !finite(&sensitivities) {
            return Err(Error::NonFinite {
                field: "sensitivities",
            });
        }
        if !finite(&demands) {
            return Err(Error::NonFinite { field: "demands" });
        }
        if !finite(nominal_profiles.as_slice()) {
            return Err(Error::NonFinite {
                field: "nominal_profiles",
            });
        }
        if price_slope <= 0.0 {
            return Err(Error::NonPositiveSlope(price_slope));
        }
        if let Some((station, &value)) = sensitivities.iter().enumerate().find(|(_, &m)| m <= 0.0)
        {
            return Err(Error::NonPositiveSensitivity { station, value });
        }
        for (i, &d) in demands.iter().enumerate() {
            let row = nominal_profiles.row(i);
            let row_sum = row.sum();
            if !row_sum_ok(row_sum, d, row.abs().sum()) {
                return Err(Error::DemandMismatch {
                    station: i,
                    row_sum,
                    demand: d,
                });
            }
        }
        Ok(Self {
            price_intercepts: DVector::from_vec(price_intercepts),
            price_slope,
            sensitivities: DVector::from_vec(sensitivities),
            demands: DVector::from_vec(demands),
            nominal_profiles,
        })
    }

    /// Scenario whose nominal profiles follow `x̄_i^t = d_i α^t`.
    pub fn with_alpha(
        price_intercepts: Vec<f64>,
        price_slope: f64,
        sensitivities: Vec<f64>,
        demands: Vec<f64>,
        alpha: &[f64],
    ) -> Result<Self> {
        if alpha.len() != price_intercepts.len() {
            return Err(Error::DimensionMismatch {
                field: "alpha",
                expected: price_intercepts.len(),
                found: alpha.len(),
            });
        }
        let nominal = DMatrix::from_fn(demands.len(), alpha.len(), |i, t| demands[i] * alpha[t]);
        Self::new(price_intercepts, price_slope, sensitivities, demands, nominal)
    }

    /// Scenario with uniform nominal profiles `x̄_i^t = d_i / T`.
    pub fn with_uniform_nominal(
        price_intercepts: Vec<f64>,
        price_slope: f64,
        sensitivities: Vec<f64>,
        demands: Vec<f64>,
    ) -> Result<Self> {
        let horizon = price_intercepts.len();
        let alpha = vec![1.0 / horizon.max(1) as f64; horizon];
        Self::with_alpha(price_intercepts, price_slope, sensitivities, demands, &alpha)
    }

    pub fn n_stations(&self) -> usize {
        self.sensitivities.len()
    }

    pub fn horizon(&self) -> usize {
        self.price_intercepts.len()
    }

    pub fn price_intercepts(&self) -> &DVector<f64> {
        &self.price_intercepts
    }

    pub fn price_slope(&self) -> f64 {
        self.price_slope
    }

    pub fn sensitivities(&self) -> &DVector<f64> {
        &self.sensitivities
    }

    pub fn demands(&self) -> &DVector<f64> {
        &self.demands
    }

    /// `N×T` matrix of desired per-slot charges.
    pub fn nominal_profiles(&self) -> &DMatrix<f64> {
        &self.nominal_profiles
    }

    /// Copy of this scenario with demands multiplied by `factor`, rescaling the
    /// nominal profiles so they stay consistent.
    pub fn with_scaled_demands(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.price_intercepts.iter().copied().collect(),
            self.price_slope,
            self.sensitivities.iter().copied().collect(),
            self.demands.iter().map(|d| d * factor).collect(),
            &self.nominal_profiles * factor,
        )
    }

    /// The profile in which every station charges `d_i / T` in each slot.
    pub fn uniform_profile(&self) -> Profile {
        let t = self.horizon() as f64;
        Profile::new(DMatrix::from_fn(self.n_stations(), self.horizon(), |i, _| {
            self.demands[i] / t
        }))
    }

    fn check_station(&self, i: usize) -> Result<()> {
        if i >= self.n_stations() {
            return Err(Error::StationOutOfRange {
                index: i,
                n: self.n_stations(),
            });
        }
        Ok(())
    }
}

/// A set of pairwise disjoint coalitions over station indices.
///
/// Stations not in any coalition act independently. The empty structure is the
/// fully independent (Nash) case. Members are stored sorted, so two structures
/// that differ only in member order compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoalitionStructure {
    coalitions: Vec<Vec<usize>>,
}

impl CoalitionStructure {
    pub fn new(coalitions: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        let mut sorted = Vec::with_capacity(coalitions.len());
        for (k, mut members) in coalitions.into_iter().enumerate() {
            if members.is_empty() {
                return Err(Error::EmptyCoalition { coalition: k });
            }
            members.sort_unstable();
            for &i in &members {
                if !seen.insert(i) {
                    return Err(Error::OverlappingCoalitions { station: i });
                }
            }
            sorted.push(members);
        }
        Ok(Self { coalitions: sorted })
    }

    /// No coalitions: every station acts on its own.
    pub fn independent() -> Self {
        Self::default()
    }

    pub fn single(members: Vec<usize>) -> Result<Self> {
        Self::new(vec![members])
    }

    pub fn coalitions(&self) -> &[Vec<usize>] {
        &self.coalitions
    }

    pub fn is_empty(&self) -> bool {
        self.coalitions.is_empty()
    }

    /// Checks that every index refers to one of `n` stations.
    pub fn validate(&self, n: usize) -> Result<()> {
        for members in &self.coalitions {
            if let Some(&index) = members.iter().find(|&&i| i >= n) {
                return Err(Error::StationOutOfRange { index, n });
            }
        }
        Ok(())
    }

    /// Coalition id of each station, `None` for independent stations.
    pub fn membership(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (k, members) in self.coalitions.iter().enumerate() {
            for &i in members {
                if i < n {
                    out[i] = Some(k);
                }
            }
        }
        out
    }

    /// Stations that belong to some coalition, ascending.
    pub fn coalition_members(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.coalitions.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    /// Stations outside every coalition, ascending.
    pub fn independent_stations(&self, n: usize) -> Vec<usize> {
        let membership = self.membership(n);
        (0..n).filter(|&i| membership[i].is_none()).collect()
    }

    /// The structure with every coalition split into singletons.
    pub fn to_singletons(&self) -> Self {
        Self {
            coalitions: self.coalition_members().into_iter().map(|i| vec![i]).collect(),
        }
    }

    /// Decision blocks in sweep order: coalitions by descending size (ties keep
    /// their listed order), then independent stations by ascending index.
    pub fn blocks(&self, n: usize) -> Vec<Vec<usize>> {
        let mut blocks: Vec<Vec<usize>> = self.coalitions.clone();
        blocks.sort_by_key(|b| std::cmp::Reverse(b.len()));
        blocks.extend(self.independent_stations(n).into_iter().map(|i| vec![i]));
        blocks
    }
}

/// A joint charging schedule, `N×T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    charges: DMatrix<f64>,
}

impl Profile {
    pub fn new(charges: DMatrix<f64>) -> Self {
        Self { charges }
    }

    pub fn charges(&self) -> &DMatrix<f64> {
        &self.charges
    }

    pub fn charges_mut(&mut self) -> &mut DMatrix<f64> {
        &mut self.charges
    }

    pub fn into_charges(self) -> DMatrix<f64> {
        self.charges
    }

    /// Aggregate demand `1ᵀx^t` per slot.
    pub fn aggregate(&self) -> DVector<f64> {
        self.charges.row_sum().transpose()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Profile) -> f64 {
        (&self.charges - &other.charges).amax()
    }

    /// Checks dimensions and the per-station demand constraint.
    pub fn check_feasible(&self, scenario: &Scenario) -> Result<()> {
        if self.charges.nrows() != scenario.n_stations() {
            return Err(Error::DimensionMismatch {
                field: "profile",
                expected: scenario.n_stations(),
                found: self.charges.nrows(),
            });
        }
        if self.charges.ncols() != scenario.horizon() {
            return Err(Error::DimensionMismatch {
                field: "profile[i]",
                expected: scenario.horizon(),
                found: self.charges.ncols(),
            });
        }
        for (i, &d) in scenario.demands().iter().enumerate() {
            let row = self.charges.row(i);
            let row_sum = row.sum();
            if !row_sum_ok(row_sum, d, row.abs().sum()) {
                return Err(Error::DemandMismatch {
                    station: i,
                    row_sum,
                    demand: d,
                });
            }
        }
        Ok(())
    }
}

/// Per-station cost split into its payment and deviation parts.
#[derive(Debug, Clone, PartialEq)]
pub struct CostBreakdown {
    pub per_station: Vec<f64>,
    pub payment_part: Vec<f64>,
    pub deviation_part: Vec<f64>,
}

impl CostBreakdown {
    pub fn group_total(&self, group: &[usize]) -> f64 {
        group.iter().map(|&i| self.per_station[i]).sum()
    }
}

/// Price per slot, `a^t + b·1ᵀx^t`, for every slot.
pub fn prices(scenario: &Scenario, profile: &Profile) -> DVector<f64> {
    let b = scenario.price_slope();
    scenario.price_intercepts() + profile.aggregate() * b
}

/// Price at slot `t` (0-based).
pub fn price_at(scenario: &Scenario, profile: &Profile, t: usize) -> Result<f64> {
    if t >= scenario.horizon() {
        return Err(Error::SlotOutOfRange {
            slot: t,
            horizon: scenario.horizon(),
        });
    }
    if profile.charges().ncols() != scenario.horizon() {
        return Err(Error::DimensionMismatch {
            field: "profile[i]",
            expected: scenario.horizon(),
            found: profile.charges().ncols(),
        });
    }
    let aggregate: f64 = profile.charges().column(t).sum();
    Ok(scenario.price_intercepts()[t] + scenario.price_slope() * aggregate)
}

/// Every station's cost at a feasible profile.
pub fn cost_breakdown(scenario: &Scenario, profile: &Profile) -> Result<CostBreakdown> {
    profile.check_feasible(scenario)?;
    let p = prices(scenario, profile);
    let x = profile.charges();
    let n = scenario.n_stations();
    let mut payment_part = Vec::with_capacity(n);
    let mut deviation_part = Vec::with_capacity(n);
    for i in 0..n {
        let row = x.row(i);
        payment_part.push(row.iter().zip(p.iter()).map(|(xi, pt)| xi * pt).sum::<f64>());
        let dev = (row - scenario.nominal_profiles().row(i)).norm_squared();
        deviation_part.push(0.5 * scenario.sensitivities()[i] * dev);
    }
    let per_station = payment_part
        .iter()
        .zip(&deviation_part)
        .map(|(p, d)| p + d)
        .collect();
    Ok(CostBreakdown {
        per_station,
        payment_part,
        deviation_part,
    })
}

/// Cost `c_i(x)` of one station.
pub fn station_cost(scenario: &Scenario, profile: &Profile, i: usize) -> Result<f64> {
    scenario.check_station(i)?;
    Ok(cost_breakdown(scenario, profile)?.per_station[i])
}

/// Total cost `c_S(x) = Σ_{i∈S} c_i(x)` of a group.
pub fn group_cost(scenario: &Scenario, profile: &Profile, group: &[usize]) -> Result<f64> {
    for &i in group {
        scenario.check_station(i)?;
    }
    Ok(cost_breakdown(scenario, profile)?.group_total(group))
}

/// The 0/1 matrix **C**: `C_ij = 1` iff `i == j` or `i` and `j` share a
/// coalition. Rows follow station indices.
pub fn coalition_block_matrix(structure: &CoalitionStructure, n: usize) -> Result<DMatrix<f64>> {
    structure.validate(n)?;
    let mut c = DMatrix::identity(n, n);
    for members in structure.coalitions() {
        for &i in members {
            for &j in members {
                c[(i, j)] = 1.0;
            }
        }
    }
    Ok(c)
}
