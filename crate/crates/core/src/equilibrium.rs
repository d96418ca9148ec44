//! Nash and C-Nash equilibria.
//!
//! Two routes compute the same unique equilibrium:
//!
//! * the closed form. With `Q = b(11ᵀ + C) + diag(μ)` and
//!   `v^t = μ x̄^t − a^t 1`,
//!
//!   ```text
//!     x^t = d/T + Σ_{t'} ((T δ_{tt'} − 1)/T) Q⁻¹ v^{t'}
//!         = d/T + Q⁻¹ v^t − (1/T) Σ_{t'} Q⁻¹ v^{t'}
//!   ```
//!
//!   so one factorization of `Q` and one slot sum suffice.
//!
//! * the stacked KKT system over `x ∈ ℝ^{NT}` (slot-major, entry `t·N + i`):
//!
//!   ```text
//!     Θ x = r − E λ,   Eᵀ x = d,
//!     Θ = I_T ⊗ Q,   E = 1_T ⊗ I_N,   r = (I_T ⊗ μ) x̄ − (I_T ⊗ 1_N) A,
//!   ```
//!
//!   solved by eliminating `λ` through `Γ = Eᵀ Θ⁻¹ E`:
//!   `x = Ψ₁ r + Ψ₂ d` with `Ψ₁ = (I − Θ⁻¹ E Γ⁻¹ Eᵀ) Θ⁻¹` and `Ψ₂ = Θ⁻¹ E Γ⁻¹`.
//!
//! Coalitions need not be contiguous: **C** is scattered by station index, and
//! the algebra is equivariant under station permutations.

use log::warn;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::{coalition_block_matrix, CoalitionStructure, Profile, Scenario};

/// Default tolerance for cross-method agreement and KKT residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// `Q` is flagged ill-conditioned when `λ_min < CONDITIONING_RATIO · λ_max`.
pub const CONDITIONING_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    KktSolve,
    BestResponse,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::KktSolve => "kkt_solve",
            Method::BestResponse => "best_response",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EquilibriumResult {
    pub profile: Profile,
    pub method: Method,
    /// Max-norm of the stationarity and demand-feasibility residuals.
    pub kkt_residual: f64,
    pub structure: CoalitionStructure,
    /// One multiplier per station, when the method produces them.
    pub multipliers: Option<DVector<f64>>,
}

impl EquilibriumResult {
    pub fn is_converged(&self, tolerance: f64) -> bool {
        self.kkt_residual <= tolerance
    }
}

/// The assembled KKT system of the game.
#[derive(Debug, Clone)]
pub struct KktSystem {
    /// `Q = b(11ᵀ + C) + diag(μ)`, `N×N`.
    pub game_matrix: DMatrix<f64>,
    /// `Θ = I_T ⊗ Q`, `NT×NT`.
    pub theta: DMatrix<f64>,
    /// `Γ = Eᵀ Θ⁻¹ E`, `N×N`.
    pub gamma_matrix: DMatrix<f64>,
    /// `r = (I_T ⊗ μ) x̄ − (I_T ⊗ 1_N) A`, length `NT`.
    pub rhs_lin: DVector<f64>,
    /// Lagrange multipliers of the demand constraints.
    pub multipliers: DVector<f64>,
    /// Smallest and largest eigenvalue of `Q`.
    pub eigenvalue_range: (f64, f64),
    pub ill_conditioned: bool,
    theta_inv: DMatrix<f64>,
    gamma_inv: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report {
    /// Whether the Cholesky factorization of `Q` succeeded.
    pub q_pd: bool,
    /// `‖Γ·(Q/T) − I‖_max`, with `Γ` computed from `Θ⁻¹`.
    pub gamma_identity_error: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub ill_conditioned: bool,
}

/// `Q = b(11ᵀ + C) + diag(μ)`.
pub fn game_matrix(scenario: &Scenario, structure: &CoalitionStructure) -> Result<DMatrix<f64>> {
    let n = scenario.n_stations();
    let c = coalition_block_matrix(structure, n)?;
    let b = scenario.price_slope();
    let mut q = (DMatrix::from_element(n, n, 1.0) + c) * b;
    for i in 0..n {
        q[(i, i)] += scenario.sensitivities()[i];
    }
    Ok(q)
}

fn eigenvalue_range(m: &DMatrix<f64>) -> (f64, f64) {
    let eig = SymmetricEigen::new(m.clone());
    (eig.eigenvalues.min(), eig.eigenvalues.max())
}

fn is_ill_conditioned((min, max): (f64, f64)) -> bool {
    min < CONDITIONING_RATIO * max
}

fn cholesky(m: &DMatrix<f64>, name: &'static str) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(m.clone()).ok_or_else(|| Error::Conditioning {
        matrix: name,
        min_eigenvalue: eigenvalue_range(m).0,
    })
}

/// `v^t = μ x̄^t − a^t 1` as an `N×T` matrix.
fn forcing(scenario: &Scenario) -> DMatrix<f64> {
    let mu = scenario.sensitivities();
    let a = scenario.price_intercepts();
    DMatrix::from_fn(scenario.n_stations(), scenario.horizon(), |i, t| {
        mu[i] * scenario.nominal_profiles()[(i, t)] - a[t]
    })
}

/// Residual of `Q x^t − v^t + λ = 0` for all `t`, together with the demand
/// rows. `λ` defaults to its least-squares value, the negated slot mean.
fn residual(
    q: &DMatrix<f64>,
    v: &DMatrix<f64>,
    x: &DMatrix<f64>,
    demands: &DVector<f64>,
    multipliers: Option<&DVector<f64>>,
) -> f64 {
    let mut r = q * x - v;
    let lambda = match multipliers {
        Some(l) => l.clone(),
        None => -r.column_mean(),
    };
    for mut col in r.column_iter_mut() {
        col += &lambda;
    }
    let feasibility = (x.column_sum() - demands).amax();
    r.amax().max(feasibility)
}

/// The C-Nash equilibrium from the closed form. An empty or all-singleton
/// structure yields the Nash equilibrium.
pub fn c_nash_closed_form(
    scenario: &Scenario,
    structure: &CoalitionStructure,
) -> Result<EquilibriumResult> {
    let q = game_matrix(scenario, structure)?;
    let chol = cholesky(&q, "Q")?;
    let v = forcing(scenario);
    let w = chol.solve(&v);
    let w_mean = w.column_mean();
    let t = scenario.horizon() as f64;
    let d = scenario.demands();
    let x = DMatrix::from_fn(scenario.n_stations(), scenario.horizon(), |i, s| {
        d[i] / t + (w[(i, s)] - w_mean[i])
    });
    let kkt_residual = residual(&q, &v, &x, d, None);
    Ok(EquilibriumResult {
        profile: Profile::new(x),
        method: Method::ClosedForm,
        kkt_residual,
        structure: structure.clone(),
        multipliers: None,
    })
}

/// The Nash equilibrium (no coalitions).
pub fn nash_closed_form(scenario: &Scenario) -> Result<EquilibriumResult> {
    c_nash_closed_form(scenario, &CoalitionStructure::independent())
}

/// `E = 1_T ⊗ I_N`.
fn stacking(n: usize, horizon: usize) -> DMatrix<f64> {
    DMatrix::from_element(horizon, 1, 1.0).kronecker(&DMatrix::<f64>::identity(n, n))
}

fn stack(m: &DMatrix<f64>) -> DVector<f64> {
    // column-major storage of an N×T matrix is exactly the slot-major stack
    DVector::from_column_slice(m.as_slice())
}

fn unstack(v: &DVector<f64>, n: usize, horizon: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(n, horizon, v.as_slice())
}

/// Builds `Θ`, `Γ`, `r` and the multipliers `λ = Γ⁻¹ (Eᵀ Θ⁻¹ r − d)`.
pub fn assemble_kkt(scenario: &Scenario, structure: &CoalitionStructure) -> Result<KktSystem> {
    let n = scenario.n_stations();
    let horizon = scenario.horizon();
    let q = game_matrix(scenario, structure)?;
    let range = eigenvalue_range(&q);
    let ill_conditioned = is_ill_conditioned(range);
    if ill_conditioned {
        warn!(
            "game matrix is ill-conditioned: eigenvalues in [{:e}, {:e}]",
            range.0, range.1
        );
    }
    let theta = DMatrix::<f64>::identity(horizon, horizon).kronecker(&q);
    let theta_inv = cholesky(&theta, "Theta")?.inverse();
    let e = stacking(n, horizon);
    let gamma = e.transpose() * &theta_inv * &e;
    let gamma_inv = cholesky(&gamma, "Gamma")?.inverse();
    let rhs_lin = stack(&forcing(scenario));
    let multipliers = &gamma_inv * (e.transpose() * (&theta_inv * &rhs_lin) - scenario.demands());
    Ok(KktSystem {
        game_matrix: q,
        theta,
        gamma_matrix: gamma,
        rhs_lin,
        multipliers,
        eigenvalue_range: range,
        ill_conditioned,
        theta_inv,
        gamma_inv,
    })
}

impl KktSystem {
    /// `Ψ₁ = (I − Θ⁻¹ E Γ⁻¹ Eᵀ) Θ⁻¹`.
    pub fn psi1(&self) -> DMatrix<f64> {
        let nt = self.theta.nrows();
        let e = stacking(self.gamma_matrix.nrows(), nt / self.gamma_matrix.nrows());
        let projector =
            DMatrix::<f64>::identity(nt, nt) - &self.theta_inv * &e * &self.gamma_inv * e.transpose();
        projector * &self.theta_inv
    }

    /// `Ψ₂ = Θ⁻¹ E Γ⁻¹`.
    pub fn psi2(&self) -> DMatrix<f64> {
        let nt = self.theta.nrows();
        let e = stacking(self.gamma_matrix.nrows(), nt / self.gamma_matrix.nrows());
        &self.theta_inv * e * &self.gamma_inv
    }

    pub fn theta_inverse(&self) -> &DMatrix<f64> {
        &self.theta_inv
    }

    /// Stacked residual `max(|Θx − r + Eλ|, |Eᵀx − d|)`.
    pub fn residual(&self, x: &DVector<f64>, demands: &DVector<f64>) -> f64 {
        let n = self.gamma_matrix.nrows();
        let e = stacking(n, self.theta.nrows() / n);
        let stationarity = (&self.theta * x - &self.rhs_lin + &e * &self.multipliers).amax();
        let feasibility = (e.transpose() * x - demands).amax();
        stationarity.max(feasibility)
    }
}

/// The C-Nash equilibrium from the stacked KKT system, `x = Ψ₁ r + Ψ₂ d`.
pub fn c_nash_via_kkt(
    scenario: &Scenario,
    structure: &CoalitionStructure,
) -> Result<EquilibriumResult> {
    let system = assemble_kkt(scenario, structure)?;
    let x = system.psi1() * &system.rhs_lin + system.psi2() * scenario.demands();
    let kkt_residual = system.residual(&x, scenario.demands());
    Ok(EquilibriumResult {
        profile: Profile::new(unstack(&x, scenario.n_stations(), scenario.horizon())),
        method: Method::KktSolve,
        kkt_residual,
        structure: structure.clone(),
        multipliers: Some(system.multipliers),
    })
}

/// Positive definiteness of `Q` and the identity `Γ⁻¹ = Q/T`.
pub fn check_lemma1(scenario: &Scenario, structure: &CoalitionStructure) -> Result<Lemma1Report> {
    let q = game_matrix(scenario, structure)?;
    let (min_eigenvalue, max_eigenvalue) = eigenvalue_range(&q);
    let ill_conditioned = is_ill_conditioned((min_eigenvalue, max_eigenvalue));
    let q_pd = Cholesky::new(q.clone()).is_some();
    let gamma_identity_error = if q_pd {
        let n = scenario.n_stations();
        let horizon = scenario.horizon();
        let theta = DMatrix::<f64>::identity(horizon, horizon).kronecker(&q);
        match Cholesky::new(theta) {
            Some(chol) => {
                let e = stacking(n, horizon);
                let gamma = e.transpose() * chol.inverse() * &e;
                (gamma * (&q / horizon as f64) - DMatrix::<f64>::identity(n, n)).amax()
            }
            None => f64::INFINITY,
        }
    } else {
        f64::INFINITY
    };
    if ill_conditioned {
        warn!(
            "game matrix is ill-conditioned: eigenvalues in [{min_eigenvalue:e}, {max_eigenvalue:e}]"
        );
    }
    Ok(Lemma1Report {
        q_pd,
        gamma_identity_error,
        min_eigenvalue,
        max_eigenvalue,
        ill_conditioned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::LU;

    fn two_station(coalition: bool) -> (Scenario, CoalitionStructure) {
        let s = Scenario::with_uniform_nominal(vec![0.0, 1.0], 1.0, vec![1.0, 2.0], vec![1.0, 1.0])
            .unwrap();
        let c = if coalition {
            CoalitionStructure::single(vec![0, 1]).unwrap()
        } else {
            CoalitionStructure::independent()
        };
        (s, c)
    }

    /// Solves the bordered system `[Θ E; Eᵀ 0][x; λ] = [r; d]` in one LU
    /// factorization, without the Γ elimination.
    fn bordered_solve(scenario: &Scenario, structure: &CoalitionStructure) -> DMatrix<f64> {
        let system = assemble_kkt(scenario, structure).unwrap();
        let n = scenario.n_stations();
        let horizon = scenario.horizon();
        let nt = n * horizon;
        let e = stacking(n, horizon);
        let mut k = DMatrix::zeros(nt + n, nt + n);
        k.view_mut((0, 0), (nt, nt)).copy_from(&system.theta);
        k.view_mut((0, nt), (nt, n)).copy_from(&e);
        k.view_mut((nt, 0), (n, nt)).copy_from(&e.transpose());
        let mut rhs = DVector::zeros(nt + n);
        rhs.rows_mut(0, nt).copy_from(&system.rhs_lin);
        rhs.rows_mut(nt, n).copy_from(scenario.demands());
        let sol = LU::new(k).solve(&rhs).unwrap();
        unstack(&sol.rows(0, nt).into_owned(), n, horizon)
    }

    #[test]
    fn constant_inputs_give_uniform_charging() {
        let s = Scenario::with_uniform_nominal(vec![0.7; 4], 0.5, vec![1.0, 3.0, 0.2], vec![2.0, 4.0, 1.0])
            .unwrap();
        for structure in [
            CoalitionStructure::independent(),
            CoalitionStructure::single(vec![0, 2]).unwrap(),
        ] {
            let x = c_nash_closed_form(&s, &structure).unwrap().profile;
            assert!(x.max_abs_diff(&s.uniform_profile()) <= 1e-12);
        }
    }

    #[test]
    fn singletons_match_nash() {
        let (s, _) = two_station(false);
        let nash = nash_closed_form(&s).unwrap();
        let singletons = CoalitionStructure::new(vec![vec![0], vec![1]]).unwrap();
        let cnash = c_nash_closed_form(&s, &singletons).unwrap();
        assert_eq!(nash.profile, cnash.profile);
    }

    #[test]
    fn two_station_coalition_matches_qp_oracle() {
        // Joint minimization of c_1 + c_2 for N=2, T=2, a=(0,1), b=1, μ=(1,2),
        // d=(1,1), x̄ uniform. With x_i = (1/2 + y_i, 1/2 − y_i) the total cost
        // is 3 − (y_1 + y_2) + 2(y_1 + y_2)² + y_1² + 2 y_2², so the first-order
        // conditions are [[6,4],[4,8]] y = [1,1]: y = (1/8, 1/16).
        let (s, c) = two_station(true);
        let x = c_nash_closed_form(&s, &c).unwrap().profile;
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(2, 2, &[0.625, 0.375, 0.5625, 0.4375]);
        assert!((x.charges() - expected).amax() <= 1e-12);
    }

    #[test]
    fn single_station_is_own_optimum() {
        // min Σ_t a^t x^t + b (x^t)² + μ/2 (x^t − x̄^t)² with Σ x = d.
        // For a=(0,2), b=1, μ=1, x̄=(1,1): stationarity 3x_t + a_t − 1 + λ = 0
        // and x_1 + x_2 = 2 give x = (4/3, 2/3).
        let s = Scenario::new(vec![0.0, 2.0], 1.0, vec![1.0], vec![2.0], DMatrix::from_element(1, 2, 1.0))
            .unwrap();
        let x = nash_closed_form(&s).unwrap().profile;
        assert_relative_eq!(x.charges()[(0, 0)], 4.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(x.charges()[(0, 1)], 2.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn theta_kronecker_examples() {
        let s = Scenario::with_uniform_nominal(vec![0.0; 3], 1.0, vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        let indep = assemble_kkt(&s, &CoalitionStructure::independent()).unwrap();
        let q = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 3.0]);
        assert_eq!(indep.theta, DMatrix::<f64>::identity(3, 3).kronecker(&q));

        let joint = assemble_kkt(&s, &CoalitionStructure::single(vec![0, 1]).unwrap()).unwrap();
        let q2 = DMatrix::from_row_slice(2, 2, &[3.0, 2.0, 2.0, 3.0]);
        assert_eq!(joint.theta, DMatrix::<f64>::identity(3, 3).kronecker(&q2));

        // inverse of [[3,1],[1,3]] is [[3,-1],[-1,3]]/8, so Γ = 3 Q⁻¹ = [[9,-3],[-3,9]]/8
        let expected = DMatrix::from_row_slice(2, 2, &[9.0, -3.0, -3.0, 9.0]) / 8.0;
        assert!((indep.gamma_matrix - expected).amax() <= 1e-14);
    }

    #[test]
    fn kkt_matches_closed_form_and_bordered_solve() {
        let s = Scenario::new(
            vec![0.3, 1.2, 0.1, 0.8],
            0.7,
            vec![0.5, 2.0, 1.3],
            vec![2.0, 1.0, 3.0],
            DMatrix::from_row_slice(3, 4, &[1.0, 0.5, 0.0, 0.5, 0.1, 0.2, 0.3, 0.4, 2.0, -0.5, 1.0, 0.5]),
        )
        .unwrap();
        for structure in [
            CoalitionStructure::independent(),
            CoalitionStructure::single(vec![0, 2]).unwrap(),
            CoalitionStructure::single(vec![0, 1, 2]).unwrap(),
        ] {
            let closed = c_nash_closed_form(&s, &structure).unwrap();
            let kkt = c_nash_via_kkt(&s, &structure).unwrap();
            let bordered = bordered_solve(&s, &structure);
            let scale = closed.profile.charges().amax();
            assert!(closed.profile.max_abs_diff(&kkt.profile) <= 1e-9 * scale);
            assert!((closed.profile.charges() - bordered).amax() <= 1e-9 * scale);
            assert!(closed.kkt_residual <= 1e-12);
            assert!(kkt.kkt_residual <= 1e-12);
        }
    }

    #[test]
    fn symmetric_single_station_multipliers() {
        let s = Scenario::new(vec![0.0, 0.0], 1.0, vec![1.0], vec![2.0], DMatrix::from_element(1, 2, 1.0))
            .unwrap();
        let r = c_nash_via_kkt(&s, &CoalitionStructure::independent()).unwrap();
        assert!((r.profile.charges() - DMatrix::from_element(1, 2, 1.0)).amax() <= 1e-14);
        // Q = b(1 + 1) + μ = 3; stationarity per slot: Q x − v + λ = 3 − 1 + λ = 0
        let lambda = r.multipliers.unwrap();
        assert_relative_eq!(lambda[0], -2.0, max_relative = 1e-14);
    }

    #[test]
    fn lemma1_holds() {
        let (s, c) = two_station(true);
        let rep = check_lemma1(&s, &c).unwrap();
        assert!(rep.q_pd);
        assert!(rep.gamma_identity_error <= 1e-12);
        assert!(!rep.ill_conditioned);
    }

    /// Smallest and largest eigenvalue by power iteration on `Q` and on
    /// `λ_max I − Q`.
    fn power_range(q: &DMatrix<f64>) -> (f64, f64) {
        let n = q.nrows();
        let iterate = |m: &DMatrix<f64>| {
            let mut v = DVector::from_fn(n, |i, _| 1.0 + i as f64 * 0.37);
            let mut lambda = 0.0;
            for _ in 0..5000 {
                let w = m * &v;
                lambda = v.dot(&w) / v.dot(&v);
                v = w.normalize();
            }
            lambda
        };
        let max = iterate(q);
        let shifted = DMatrix::<f64>::identity(n, n) * max - q;
        (max - iterate(&shifted), max)
    }

    #[test]
    fn near_degenerate_game_warns_but_factorizes() {
        // Q = 2·11ᵀ + 1e-12 I: eigenvalues 1e-12 (three times) and 8 + 1e-12.
        let s = Scenario::with_uniform_nominal(vec![0.0, 1.0], 1.0, vec![1e-12; 4], vec![1.0; 4]).unwrap();
        let c = CoalitionStructure::single(vec![0, 1, 2, 3]).unwrap();
        let q = game_matrix(&s, &c).unwrap();
        let (lo, hi) = power_range(&q);
        assert!(lo < CONDITIONING_RATIO * hi, "oracle range ({lo}, {hi})");
        let rep = check_lemma1(&s, &c).unwrap();
        assert!(rep.q_pd);
        assert!(rep.ill_conditioned);
        assert!(assemble_kkt(&s, &c).unwrap().ill_conditioned);
        // uniform rescaling of b and μ leaves the relative conditioning unchanged
        let tiny = Scenario::with_uniform_nominal(vec![0.0, 1.0], 1e-12, vec![1e-12; 4], vec![1.0; 4]).unwrap();
        let rep = check_lemma1(&tiny, &c).unwrap();
        assert!(rep.q_pd && !rep.ill_conditioned);
    }

    #[test]
    fn slot_permutation_is_equivariant() {
        let s = Scenario::new(
            vec![0.3, 1.2, 0.1],
            0.7,
            vec![0.5, 2.0],
            vec![2.0, 1.0],
            DMatrix::from_row_slice(2, 3, &[1.0, 0.5, 0.5, 0.1, 0.2, 0.7]),
        )
        .unwrap();
        let perm = [2, 0, 1];
        let a: Vec<f64> = perm.iter().map(|&t| s.price_intercepts()[t]).collect();
        let xbar = DMatrix::from_fn(2, 3, |i, t| s.nominal_profiles()[(i, perm[t])]);
        let s2 = Scenario::new(a, 0.7, vec![0.5, 2.0], vec![2.0, 1.0], xbar).unwrap();
        let c = CoalitionStructure::single(vec![0, 1]).unwrap();
        let x1 = c_nash_closed_form(&s, &c).unwrap().profile;
        let x2 = c_nash_closed_form(&s2, &c).unwrap().profile;
        for i in 0..2 {
            for (t, &src) in perm.iter().enumerate() {
                assert!((x2.charges()[(i, t)] - x1.charges()[(i, src)]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn singleton_coalition_can_be_dropped() {
        let s = Scenario::new(
            vec![0.3, 1.2, 0.1],
            0.7,
            vec![0.5, 2.0, 1.0, 0.4],
            vec![2.0, 1.0, 1.0, 0.5],
            DMatrix::from_row_slice(4, 3, &[1.0, 0.5, 0.5, 0.1, 0.2, 0.7, 0.0, 0.0, 1.0, 0.5, 0.0, 0.0]),
        )
        .unwrap();
        let two = CoalitionStructure::new(vec![vec![0, 2], vec![3]]).unwrap();
        let one = CoalitionStructure::single(vec![0, 2]).unwrap();
        let x1 = c_nash_closed_form(&s, &two).unwrap().profile;
        let x2 = c_nash_closed_form(&s, &one).unwrap().profile;
        assert!(x1.max_abs_diff(&x2) <= 1e-12);
    }
}
