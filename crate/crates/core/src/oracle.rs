//! Verification paths that share no code with [`crate::equilibrium`].
//!
//! Best-response dynamics sweeps over decision blocks (each coalition jointly,
//! each independent station alone). A block's response is the exact minimizer
//! of its summed cost with everyone else fixed, found by solving the KKT
//! conditions of a small equality-constrained quadratic program. The game has
//! a strictly convex potential whose block-coordinate minimization is exactly
//! this sweep, so the iteration converges to the unique equilibrium.

use log::debug;
use nalgebra::{DMatrix, DVector, Dyn, LU};

use crate::error::{Error, Result};
use crate::model::{CoalitionStructure, Profile, Scenario};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_SWEEPS: usize = 10_000;

/// Minimizes `½ yᵀ H y + gᵀ y` subject to `A y = c` through the bordered
/// system `[H Aᵀ; A 0][y; ν] = [−g; c]`.
#[derive(Debug, Clone)]
pub struct EqualityQp {
    dim: usize,
    lu: LU<f64, Dyn, Dyn>,
}

impl EqualityQp {
    pub fn new(hessian: &DMatrix<f64>, constraints: &DMatrix<f64>) -> Self {
        let dim = hessian.nrows();
        let m = constraints.nrows();
        let mut k = DMatrix::zeros(dim + m, dim + m);
        k.view_mut((0, 0), (dim, dim)).copy_from(hessian);
        k.view_mut((0, dim), (dim, m)).copy_from(&constraints.transpose());
        k.view_mut((dim, 0), (m, dim)).copy_from(constraints);
        Self {
            dim,
            lu: LU::new(k),
        }
    }

    pub fn solve(&self, linear: &DVector<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let mut b = DVector::zeros(self.dim + rhs.len());
        b.rows_mut(0, self.dim).copy_from(&(-linear));
        b.rows_mut(self.dim, rhs.len()).copy_from(rhs);
        self.lu.solve(&b).map(|sol| sol.rows(0, self.dim).into_owned())
    }
}

/// The response problem of one block. Variables are ordered station-major,
/// entry `m·T + t` for the `m`-th member.
///
/// Block cost `Σ_t (a^t + b o^t) S^t + b (S^t)² + Σ_m (μ_m/2) ‖x_m − x̄_m‖²`
/// with `S^t` the block's load and `o^t` everyone else's.
#[derive(Debug, Clone)]
struct BlockSolver {
    members: Vec<usize>,
    qp: EqualityQp,
}

impl BlockSolver {
    fn new(scenario: &Scenario, members: &[usize]) -> Self {
        let k = members.len();
        let horizon = scenario.horizon();
        let b = scenario.price_slope();
        let dim = k * horizon;
        let mut hessian = DMatrix::zeros(dim, dim);
        for (m, &i) in members.iter().enumerate() {
            for (m2, _) in members.iter().enumerate() {
                for t in 0..horizon {
                    hessian[(m * horizon + t, m2 * horizon + t)] = 2.0 * b;
                }
            }
            for t in 0..horizon {
                hessian[(m * horizon + t, m * horizon + t)] += scenario.sensitivities()[i];
            }
        }
        let mut constraints = DMatrix::zeros(k, dim);
        for m in 0..k {
            for t in 0..horizon {
                constraints[(m, m * horizon + t)] = 1.0;
            }
        }
        Self {
            members: members.to_vec(),
            qp: EqualityQp::new(&hessian, &constraints),
        }
    }

    fn respond(&self, scenario: &Scenario, x: &mut DMatrix<f64>) {
        let horizon = scenario.horizon();
        let b = scenario.price_slope();
        let mut others = vec![0.0; horizon];
        for t in 0..horizon {
            let total: f64 = x.column(t).sum();
            let own: f64 = self.members.iter().map(|&i| x[(i, t)]).sum();
            others[t] = total - own;
        }
        let k = self.members.len();
        let mut linear = DVector::zeros(k * horizon);
        for (m, &i) in self.members.iter().enumerate() {
            let mu = scenario.sensitivities()[i];
            for t in 0..horizon {
                linear[m * horizon + t] = scenario.price_intercepts()[t] + b * others[t]
                    - mu * scenario.nominal_profiles()[(i, t)];
            }
        }
        let demands = DVector::from_iterator(k, self.members.iter().map(|&i| scenario.demands()[i]));
        let y = self
            .qp
            .solve(&linear, &demands)
            .expect("block response system is nonsingular for b > 0, μ > 0");
        for (m, &i) in self.members.iter().enumerate() {
            for t in 0..horizon {
                x[(i, t)] = y[m * horizon + t];
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct BestResponseTrace {
    /// Profile after each sweep; the first entry is the initial profile.
    pub iterates: Vec<Profile>,
    /// Max-norm change produced by each sweep.
    pub step_deltas: Vec<f64>,
    /// KKT residual after each sweep.
    pub residuals: Vec<f64>,
    pub converged: bool,
}

impl BestResponseTrace {
    pub fn final_profile(&self) -> &Profile {
        self.iterates.last().expect("trace holds the initial profile")
    }

    pub fn final_delta(&self) -> f64 {
        self.step_deltas.last().copied().unwrap_or(f64::INFINITY)
    }

    pub fn sweeps(&self) -> usize {
        self.step_deltas.len()
    }

    /// The limit profile, or [`Error::NotConverged`].
    pub fn into_profile(mut self) -> Result<Profile> {
        if !self.converged {
            return Err(Error::NotConverged {
                sweeps: self.sweeps(),
                delta: self.final_delta(),
            });
        }
        Ok(self.iterates.pop().expect("trace holds the initial profile"))
    }
}

fn check_block(scenario: &Scenario, block: &[usize]) -> Result<()> {
    let n = scenario.n_stations();
    if block.is_empty() {
        return Err(Error::EmptyCoalition { coalition: 0 });
    }
    if let Some(&index) = block.iter().find(|&&i| i >= n) {
        return Err(Error::StationOutOfRange { index, n });
    }
    Ok(())
}

/// Replaces the rows of `block` with their exact joint best response.
///
/// The structure is not consulted: `block` states who decides jointly.
pub fn best_response_step(
    scenario: &Scenario,
    structure: &CoalitionStructure,
    profile: &Profile,
    block: &[usize],
) -> Result<Profile> {
    structure.validate(scenario.n_stations())?;
    profile.check_feasible(scenario)?;
    check_block(scenario, block)?;
    let mut x = profile.charges().clone();
    BlockSolver::new(scenario, block).respond(scenario, &mut x);
    Ok(Profile::new(x))
}

/// Cyclic block best responses until a sweep moves no entry by more than
/// `tol` and the KKT residual is at most `10·tol`.
pub fn best_response_dynamics(
    scenario: &Scenario,
    structure: &CoalitionStructure,
    init: &Profile,
    tol: f64,
    max_sweeps: usize,
) -> Result<BestResponseTrace> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            detail: format!("must be positive, got {tol}"),
        });
    }
    let n = scenario.n_stations();
    structure.validate(n)?;
    init.check_feasible(scenario)?;
    let solvers: Vec<BlockSolver> = structure
        .blocks(n)
        .iter()
        .map(|b| BlockSolver::new(scenario, b))
        .collect();

    let mut x = init.charges().clone();
    let mut trace = BestResponseTrace {
        iterates: vec![init.clone()],
        step_deltas: Vec::new(),
        residuals: Vec::new(),
        converged: false,
    };
    for sweep in 0..max_sweeps {
        let before = x.clone();
        for solver in &solvers {
            solver.respond(scenario, &mut x);
        }
        let delta = (&x - &before).amax();
        let profile = Profile::new(x.clone());
        let res = kkt_residual(scenario, structure, &profile)?;
        if let Some(&prev) = trace.residuals.last() {
            if res > prev * (1.0 + 1e-9) + 1e-15 {
                debug!("sweep {sweep}: residual rose from {prev:e} to {res:e}");
            }
        }
        trace.iterates.push(profile);
        trace.step_deltas.push(delta);
        trace.residuals.push(res);
        if delta <= tol && res <= 10.0 * tol {
            trace.converged = true;
            break;
        }
    }
    if !trace.converged {
        log::warn!(
            "best-response dynamics stopped after {} sweeps with delta {:e}",
            trace.sweeps(),
            trace.final_delta()
        );
    }
    Ok(trace)
}

/// Best-response dynamics from the uniform profile with default settings.
pub fn best_response_equilibrium(
    scenario: &Scenario,
    structure: &CoalitionStructure,
) -> Result<Profile> {
    best_response_dynamics(
        scenario,
        structure,
        &scenario.uniform_profile(),
        DEFAULT_TOL,
        DEFAULT_MAX_SWEEPS,
    )?
    .into_profile()
}

/// Max-norm stationarity residual with each station's multiplier set to its
/// least-squares value (the negated mean of its gradient over slots).
///
/// The gradient of station `i` in a block `B` at slot `t` is
/// `a^t + b·1ᵀx^t + b·Σ_{j∈B} x_j^t + μ_i (x_i^t − x̄_i^t)`.
pub fn kkt_residual(
    scenario: &Scenario,
    structure: &CoalitionStructure,
    profile: &Profile,
) -> Result<f64> {
    let n = scenario.n_stations();
    let horizon = scenario.horizon();
    structure.validate(n)?;
    let x = profile.charges();
    if x.nrows() != n || x.ncols() != horizon {
        return Err(Error::DimensionMismatch {
            field: "profile",
            expected: n * horizon,
            found: x.nrows() * x.ncols(),
        });
    }
    let b = scenario.price_slope();
    let membership = structure.membership(n);
    let mut worst = 0.0f64;
    let mut grad = vec![0.0; horizon];
    for i in 0..n {
        let partners: Vec<usize> = match membership[i] {
            Some(k) => structure.coalitions()[k].clone(),
            None => vec![i],
        };
        for t in 0..horizon {
            let load: f64 = (0..n).map(|j| x[(j, t)]).sum();
            let block_load: f64 = partners.iter().map(|&j| x[(j, t)]).sum();
            grad[t] = scenario.price_intercepts()[t]
                + b * load
                + b * block_load
                + scenario.sensitivities()[i] * (x[(i, t)] - scenario.nominal_profiles()[(i, t)]);
        }
        let mean = grad.iter().sum::<f64>() / horizon as f64;
        for g in &grad {
            worst = worst.max((g - mean).abs());
        }
    }
    Ok(worst)
}
