//! Welfare comparison between the Nash and the C-Nash equilibrium.
//!
//! For a group `S` the metric `M_S = c_S(x*) / c_S(x†)` compares the group's
//! total cost without (`x*`) and with (`x†`) the coalition; `M_S < 1` means
//! the group is better off when everyone acts alone.
//!
//! Two regimes admit a closed-form test of `c_S(x*) ≤ c_S(x†)` that needs no
//! equilibrium solve:
//!
//! * **Case A**: constant price intercepts and rank-one nominal profiles
//!   `x̄_i^t = d_i α^t`. With `Δ = (b(11ᵀ + C) + μ)⁻¹ μ d`,
//!   `f_i = Δ_tot Δ_i + μ_i (Δ_i − d_i)² / (2b)` and `F^t = T α^t − 1`,
//!
//!   ```text
//!     c_S(x†) − c_S(x*) = (b 𝓕 / T²) Σ_{i∈S} (f†_i − f*_i),   𝓕 = Σ_t (F^t)².
//!   ```
//!
//! * **Case B**: uniform nominal profiles `x̄^t = d/T`. With
//!   `Γ = (b(11ᵀ + C) + μ)⁻¹ 1`, `G^t = T a^t − Σ_t' a^t'` and
//!   `g_S = (b/T) Σ_{i∈S} Γ_tot Γ_i + μ_i Γ_i² / (2T)`,
//!
//!   ```text
//!     c_S(x†) − c_S(x*) = (𝒢 / T) [g†_S − g*_S − (Γ†_S − Γ*_S) h(A)],   𝒢 = Σ_t (G^t)²,
//!   ```
//!
//!   where `Γ_S = Σ_{i∈S} Γ_i` and `h(A) = Σ_{t,t'} a^t a^t' (T δ_{tt'} − 1) / 𝒢`,
//!   which always evaluates to `1/T`.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::Serialize;

use crate::equilibrium::{c_nash_closed_form, game_matrix, nash_closed_form};
use crate::error::{Error, Result};
use crate::model::{cost_breakdown, CoalitionStructure, Profile, Scenario};

/// `|gap| < TIE_TOL` is too close to call.
pub const TIE_TOL: f64 = 1e-9;

/// Relative tolerance of the structural hypothesis checks.
pub const HYPOTHESIS_RTOL: f64 = 1e-9;

/// Which equilibrium a group prefers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    /// Lower (or equal) cost at the Nash equilibrium.
    Nash,
    /// Strictly lower cost at the C-Nash equilibrium.
    Coalition,
    /// Within the tie tolerance.
    Indeterminate,
    /// Both equilibria coincide, so the costs are equal.
    Equal,
}

impl Preference {
    /// Classification of a metric `M_S`.
    pub fn from_metric(m: Option<f64>) -> Self {
        match m {
            Some(m) if (m - 1.0).abs() < TIE_TOL => Preference::Indeterminate,
            Some(m) if m < 1.0 => Preference::Nash,
            Some(m) if m > 1.0 => Preference::Coalition,
            _ => Preference::Indeterminate,
        }
    }

    fn from_gap(gap: f64) -> Self {
        if gap.abs() < TIE_TOL {
            Preference::Indeterminate
        } else if gap >= 0.0 {
            Preference::Nash
        } else {
            Preference::Coalition
        }
    }

    /// Label used in comparison tables.
    pub fn table_label(self) -> &'static str {
        match self {
            Preference::Nash => "Nash better",
            Preference::Coalition => "Coalition better",
            Preference::Indeterminate | Preference::Equal => "indeterminate",
        }
    }
}

/// A group of stations named relative to a coalition structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    /// Every station.
    All,
    /// Members of any coalition.
    Coalition,
    /// Stations outside every coalition.
    Outside,
    /// An explicit 0-based index set.
    Stations(Vec<usize>),
}

impl Group {
    pub fn standard() -> Vec<Group> {
        vec![Group::All, Group::Coalition, Group::Outside]
    }

    pub fn resolve(&self, structure: &CoalitionStructure, n: usize) -> Result<Vec<usize>> {
        Ok(match self {
            Group::All => (0..n).collect(),
            Group::Coalition => structure.coalition_members(),
            Group::Outside => structure.independent_stations(n),
            Group::Stations(members) => {
                if let Some(&index) = members.iter().find(|&&i| i >= n) {
                    return Err(Error::StationOutOfRange { index, n });
                }
                let mut m = members.clone();
                m.sort_unstable();
                m.dedup();
                m
            }
        })
    }

    pub fn label(&self) -> String {
        match self {
            Group::All => "all".into(),
            Group::Coalition => "coalition".into(),
            Group::Outside => "outside".into(),
            Group::Stations(m) => m
                .iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupCosts {
    pub all: f64,
    pub coalition: f64,
    pub outside: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    /// `M_[N]`; `None` when the denominator vanishes.
    pub m_all: Option<f64>,
    pub m_coalition: Option<f64>,
    /// `None` also when no station is outside the coalition.
    pub m_outside: Option<f64>,
    pub cost_nash: GroupCosts,
    pub cost_cnash: GroupCosts,
    pub station_costs_nash: Vec<f64>,
    pub station_costs_cnash: Vec<f64>,
    /// Some station cost is negative in either regime, so the ratios no longer
    /// order preferences.
    pub negative_cost_flag: bool,
}

impl MetricsReport {
    pub fn triple(&self) -> [Option<f64>; 3] {
        [self.m_all, self.m_coalition, self.m_outside]
    }

    pub fn preferences(&self) -> [Preference; 3] {
        self.triple().map(Preference::from_metric)
    }
}

fn ratio(num: f64, den: f64, nonempty: bool) -> Option<f64> {
    (nonempty && den != 0.0).then(|| num / den)
}

/// Welfare ratios for a scenario with exactly one coalition.
pub fn metrics(scenario: &Scenario, structure: &CoalitionStructure) -> Result<MetricsReport> {
    if structure.coalitions().len() != 1 {
        return Err(Error::Hypothesis {
            hypothesis: "single coalition",
            detail: format!(
                "metrics need exactly one coalition, got {}",
                structure.coalitions().len()
            ),
        });
    }
    metrics_with_structure(scenario, structure)
}

/// Welfare ratios where the coalition group is the union of all coalitions in
/// `structure` and `x†` is the equilibrium under the full structure.
pub fn metrics_with_structure(
    scenario: &Scenario,
    structure: &CoalitionStructure,
) -> Result<MetricsReport> {
    let nash = nash_closed_form(scenario)?.profile;
    let cnash = c_nash_closed_form(scenario, structure)?.profile;
    metrics_from_profiles(scenario, structure, &nash, &cnash)
}

pub fn metrics_from_profiles(
    scenario: &Scenario,
    structure: &CoalitionStructure,
    nash: &Profile,
    cnash: &Profile,
) -> Result<MetricsReport> {
    let n = scenario.n_stations();
    structure.validate(n)?;
    let inside = structure.coalition_members();
    let outside = structure.independent_stations(n);
    let cn = cost_breakdown(scenario, nash)?;
    let cd = cost_breakdown(scenario, cnash)?;
    let all: Vec<usize> = (0..n).collect();
    let costs = |c: &crate::model::CostBreakdown| GroupCosts {
        all: c.group_total(&all),
        coalition: c.group_total(&inside),
        outside: c.group_total(&outside),
    };
    let cost_nash = costs(&cn);
    let cost_cnash = costs(&cd);
    let negative_cost_flag = cn
        .per_station
        .iter()
        .chain(&cd.per_station)
        .any(|&c| c < 0.0);
    Ok(MetricsReport {
        m_all: ratio(cost_nash.all, cost_cnash.all, true),
        m_coalition: ratio(cost_nash.coalition, cost_cnash.coalition, !inside.is_empty()),
        m_outside: ratio(cost_nash.outside, cost_cnash.outside, !outside.is_empty()),
        cost_nash,
        cost_cnash,
        station_costs_nash: cn.per_station,
        station_costs_cnash: cd.per_station,
        negative_cost_flag,
    })
}

/// A group's verdict from one of the closed-form conditions, next to the
/// directly computed costs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupCheck {
    pub label: String,
    /// 1-based station indices.
    pub members: Vec<usize>,
    /// Nonnegative iff the group's cost at Nash is at most its C-Nash cost.
    pub condition_gap: f64,
    pub verdict: Preference,
    /// `c_S(x†) − c_S(x*)` predicted from the gap.
    pub predicted_cost_difference: f64,
    pub cost_nash: f64,
    pub cost_cnash: f64,
}

impl GroupCheck {
    /// `c_S(x†) − c_S(x*)` from the solved equilibria.
    pub fn direct_cost_difference(&self) -> f64 {
        self.cost_cnash - self.cost_nash
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseAReport {
    pub alpha: Vec<f64>,
    /// `(f†_i, f*_i)` per station.
    pub f_values: Vec<(f64, f64)>,
    /// `(Δ†_i, Δ*_i)` per station.
    pub deltas: Vec<(f64, f64)>,
    /// `(Δ†, Δ*)`.
    pub delta_totals: (f64, f64),
    /// `F^t = T α^t − 1`.
    pub f_slots: Vec<f64>,
    /// `𝓕 = Σ_t (F^t)²`.
    pub f_energy: f64,
    /// Total demand `D`.
    pub total_demand: f64,
    pub groups: Vec<GroupCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseBGroup {
    #[serde(flatten)]
    pub check: GroupCheck,
    /// `(g†_S, g*_S)`.
    pub g_values: (f64, f64),
    /// `(Γ†_S, Γ*_S)`, the weights summed over the group.
    pub gamma_group: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseBReport {
    /// `(Γ†_i, Γ*_i)` per station.
    pub gamma_weights: Vec<(f64, f64)>,
    /// `(Γ†, Γ*)` summed over all stations.
    pub gamma_totals: (f64, f64),
    /// `h(A)`; `None` when the intercepts are constant.
    pub h_value: Option<f64>,
    /// `G^t = Σ_t' a^t' (T δ_{tt'} − 1)`.
    pub g_slots: Vec<f64>,
    /// `A = Σ_t a^t`.
    pub intercept_total: f64,
    pub groups: Vec<CaseBGroup>,
}

fn max_abs(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |m, x| m.max(x.abs()))
}

fn require_constant_intercepts(scenario: &Scenario) -> Result<f64> {
    let a = scenario.price_intercepts();
    let a0 = a[0];
    let spread = max_abs(a.iter().map(|x| x - a0));
    if spread > HYPOTHESIS_RTOL * a0.abs().max(1.0) {
        return Err(Error::Hypothesis {
            hypothesis: "constant price intercepts",
            detail: format!("a^t varies across slots by up to {spread:e}"),
        });
    }
    Ok(a0)
}

/// Factors `x̄ = d αᵀ` with `α^t = Σ_i x̄_i^t / Σ_i d_i`.
pub fn detect_rank_one_alpha(scenario: &Scenario) -> Result<Vec<f64>> {
    let xbar = scenario.nominal_profiles();
    let d = scenario.demands();
    let total: f64 = d.sum();
    let scale = max_abs(xbar.iter().copied()).max(1.0);
    if total.abs() <= HYPOTHESIS_RTOL * max_abs(d.iter().copied()).max(1.0) {
        return Err(Error::Hypothesis {
            hypothesis: "Assumption 1 (x̄_i^t = d_i α^t)",
            detail: "total demand is zero, so α cannot be recovered".into(),
        });
    }
    let alpha: Vec<f64> = (0..scenario.horizon())
        .map(|t| xbar.column(t).sum() / total)
        .collect();
    let err = max_abs(
        (0..scenario.n_stations())
            .flat_map(|i| (0..scenario.horizon()).map(move |t| (i, t)))
            .map(|(i, t)| xbar[(i, t)] - d[i] * alpha[t]),
    );
    if err > HYPOTHESIS_RTOL * scale {
        return Err(Error::Hypothesis {
            hypothesis: "Assumption 1 (x̄_i^t = d_i α^t)",
            detail: format!("nominal profiles are not rank one in d (residual {err:e})"),
        });
    }
    if let Some(t) = alpha.iter().position(|&a| a < -HYPOTHESIS_RTOL) {
        return Err(Error::Hypothesis {
            hypothesis: "Assumption 1 (x̄_i^t = d_i α^t)",
            detail: format!("α^{} = {} is negative", t + 1, alpha[t]),
        });
    }
    Ok(alpha)
}

fn require_uniform_nominal(scenario: &Scenario) -> Result<()> {
    let horizon = scenario.horizon() as f64;
    for (i, &d) in scenario.demands().iter().enumerate() {
        let target = d / horizon;
        let dev = max_abs(scenario.nominal_profiles().row(i).iter().map(|x| x - target));
        if dev > HYPOTHESIS_RTOL * d.abs().max(1.0) {
            return Err(Error::Hypothesis {
                hypothesis: "uniform nominal profiles (x̄^t = d/T)",
                detail: format!("station {} deviates from d_i/T by {dev:e}", i + 1),
            });
        }
    }
    Ok(())
}

fn inverse_times(q: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let chol = Cholesky::new(q.clone()).ok_or(Error::Conditioning {
        matrix: "Q",
        min_eigenvalue: q.clone().symmetric_eigenvalues().min(),
    })?;
    Ok(chol.solve(rhs))
}

fn direct_group_costs(
    scenario: &Scenario,
    structure: &CoalitionStructure,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let nash = nash_closed_form(scenario)?.profile;
    let cnash = c_nash_closed_form(scenario, structure)?.profile;
    Ok((
        cost_breakdown(scenario, &nash)?.per_station,
        cost_breakdown(scenario, &cnash)?.per_station,
    ))
}

fn one_based(m: &[usize]) -> Vec<usize> {
    m.iter().map(|i| i + 1).collect()
}

/// Case A test for each requested group.
pub fn case_a_condition(
    scenario: &Scenario,
    structure: &CoalitionStructure,
    groups: &[Group],
) -> Result<CaseAReport> {
    let n = scenario.n_stations();
    structure.validate(n)?;
    require_constant_intercepts(scenario)?;
    let alpha = detect_rank_one_alpha(scenario)?;
    let horizon = scenario.horizon() as f64;
    let b = scenario.price_slope();
    let mu = scenario.sensitivities();
    let d = scenario.demands();

    let mu_d = mu.component_mul(d);
    let delta_c = inverse_times(&game_matrix(scenario, structure)?, &mu_d)?;
    let delta_n = inverse_times(&game_matrix(scenario, &CoalitionStructure::independent())?, &mu_d)?;
    let totals = (delta_c.sum(), delta_n.sum());
    let f = |delta: &DVector<f64>, total: f64, i: usize| {
        total * delta[i] + mu[i] * (delta[i] - d[i]).powi(2) / (2.0 * b)
    };
    let f_values: Vec<(f64, f64)> = (0..n)
        .map(|i| (f(&delta_c, totals.0, i), f(&delta_n, totals.1, i)))
        .collect();
    let f_slots: Vec<f64> = alpha.iter().map(|a| horizon * a - 1.0).collect();
    let f_energy: f64 = f_slots.iter().map(|x| x * x).sum();
    let degenerate = f_energy <= 1e-24;

    let (costs_n, costs_c) = direct_group_costs(scenario, structure)?;
    let groups = groups
        .iter()
        .map(|g| {
            let members = g.resolve(structure, n)?;
            let gap: f64 = members.iter().map(|&i| f_values[i].0 - f_values[i].1).sum();
            Ok(GroupCheck {
                label: g.label(),
                verdict: if degenerate {
                    Preference::Equal
                } else {
                    Preference::from_gap(gap)
                },
                predicted_cost_difference: b * f_energy / (horizon * horizon) * gap,
                cost_nash: members.iter().map(|&i| costs_n[i]).sum(),
                cost_cnash: members.iter().map(|&i| costs_c[i]).sum(),
                condition_gap: gap,
                members: one_based(&members),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CaseAReport {
        alpha,
        f_values,
        deltas: delta_c.iter().copied().zip(delta_n.iter().copied()).collect(),
        delta_totals: totals,
        f_slots,
        f_energy,
        total_demand: d.sum(),
        groups,
    })
}

/// Case B test for each requested group.
pub fn case_b_condition(
    scenario: &Scenario,
    structure: &CoalitionStructure,
    groups: &[Group],
) -> Result<CaseBReport> {
    let n = scenario.n_stations();
    structure.validate(n)?;
    require_uniform_nominal(scenario)?;
    let horizon = scenario.horizon();
    let tf = horizon as f64;
    let b = scenario.price_slope();
    let mu = scenario.sensitivities();
    let a = scenario.price_intercepts();

    let ones = DVector::from_element(n, 1.0);
    let gamma_c = inverse_times(&game_matrix(scenario, structure)?, &ones)?;
    let gamma_n = inverse_times(&game_matrix(scenario, &CoalitionStructure::independent())?, &ones)?;
    let totals = (gamma_c.sum(), gamma_n.sum());

    let kernel = |t: usize, s: usize| if t == s { tf - 1.0 } else { -1.0 };
    let g_slots: Vec<f64> = (0..horizon)
        .map(|t| (0..horizon).map(|s| a[s] * kernel(t, s)).sum())
        .collect();
    let g_energy: f64 = g_slots.iter().map(|x| x * x).sum();
    let a_scale = max_abs(a.iter().copied()).max(1.0);
    let degenerate = max_abs(g_slots.iter().copied()) <= HYPOTHESIS_RTOL * tf * a_scale;
    let h_value = (!degenerate).then(|| {
        let num: f64 = (0..horizon)
            .flat_map(|t| (0..horizon).map(move |s| (t, s)))
            .map(|(t, s)| a[t] * a[s] * kernel(t, s))
            .sum();
        num / g_energy
    });

    let g = |gamma: &DVector<f64>, total: f64, members: &[usize]| -> f64 {
        members
            .iter()
            .map(|&i| b / tf * total * gamma[i] + mu[i] / (2.0 * tf) * gamma[i] * gamma[i])
            .sum()
    };

    let (costs_n, costs_c) = direct_group_costs(scenario, structure)?;
    let groups = groups
        .iter()
        .map(|grp| {
            let members = grp.resolve(structure, n)?;
            let g_values = (g(&gamma_c, totals.0, &members), g(&gamma_n, totals.1, &members));
            let gamma_group = (
                members.iter().map(|&i| gamma_c[i]).sum::<f64>(),
                members.iter().map(|&i| gamma_n[i]).sum::<f64>(),
            );
            let (gap, verdict) = match h_value {
                Some(h) => {
                    let gap = g_values.0 - g_values.1 - (gamma_group.0 - gamma_group.1) * h;
                    (gap, Preference::from_gap(gap))
                }
                None => (0.0, Preference::Equal),
            };
            Ok(CaseBGroup {
                check: GroupCheck {
                    label: grp.label(),
                    members: one_based(&members),
                    condition_gap: gap,
                    verdict,
                    predicted_cost_difference: g_energy / tf * gap,
                    cost_nash: members.iter().map(|&i| costs_n[i]).sum(),
                    cost_cnash: members.iter().map(|&i| costs_c[i]).sum(),
                },
                g_values,
                gamma_group,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CaseBReport {
        gamma_weights: gamma_c.iter().copied().zip(gamma_n.iter().copied()).collect(),
        gamma_totals: totals,
        h_value,
        g_slots,
        intercept_total: a.sum(),
        groups,
    })
}

/// Nash and C-Nash profiles under constant intercepts, where the price
/// intercept drops out: `x^t = d/T + Q⁻¹ μ x̄^t − (1/T) Σ_t' Q⁻¹ μ x̄^t'`.
pub fn prop1_equilibria(
    scenario: &Scenario,
    structure: &CoalitionStructure,
) -> Result<(Profile, Profile)> {
    require_constant_intercepts(scenario)?;
    let mu = scenario.sensitivities();
    let weighted = DMatrix::from_fn(scenario.n_stations(), scenario.horizon(), |i, t| {
        mu[i] * scenario.nominal_profiles()[(i, t)]
    });
    let solve = |s: &CoalitionStructure| -> Result<Profile> {
        let q = game_matrix(scenario, s)?;
        let chol = Cholesky::new(q).ok_or(Error::Conditioning {
            matrix: "Q",
            min_eigenvalue: f64::NAN,
        })?;
        let w = chol.solve(&weighted);
        let mean = w.column_mean();
        let tf = scenario.horizon() as f64;
        let d = scenario.demands();
        Ok(Profile::new(DMatrix::from_fn(w.nrows(), w.ncols(), |i, t| {
            d[i] / tf + w[(i, t)] - mean[i]
        })))
    };
    Ok((solve(&CoalitionStructure::independent())?, solve(structure)?))
}

/// Nash and C-Nash profiles under uniform nominal profiles:
/// `x_i^t = d_i/T − G^t Γ_i / T`.
pub fn prop2_equilibria(
    scenario: &Scenario,
    structure: &CoalitionStructure,
) -> Result<(Profile, Profile)> {
    require_uniform_nominal(scenario)?;
    let n = scenario.n_stations();
    let horizon = scenario.horizon();
    let tf = horizon as f64;
    let a = scenario.price_intercepts();
    let a_total = a.sum();
    let g_slots: Vec<f64> = a.iter().map(|x| tf * x - a_total).collect();
    let d = scenario.demands();
    let ones = DVector::from_element(n, 1.0);
    let solve = |s: &CoalitionStructure| -> Result<Profile> {
        let gamma = inverse_times(&game_matrix(scenario, s)?, &ones)?;
        Ok(Profile::new(DMatrix::from_fn(n, horizon, |i, t| {
            d[i] / tf - g_slots[t] * gamma[i] / tf
        })))
    };
    Ok((solve(&CoalitionStructure::independent())?, solve(structure)?))
}
