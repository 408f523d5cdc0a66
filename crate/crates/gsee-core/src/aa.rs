//! Amplitude-amplification planning.
//!
//! A plan fixes everything the reflector-based state-preparation circuit
//! needs: the iteration count N_iter from the initial and final overlaps,
//! the QSP error budget eps (with rotation-synthesis corrections), the
//! transition half-width delta saturating the spectral-threshold condition,
//! and the QSP degree N_phi. Paired with per-model T counts it yields the
//! full amplitude-amplification cost
//! T_AA = N_iter (T_Rphi + N_phi (T_UH + T_phase)).

use num_bigint::BigUint;

use crate::cost::{mcx_t_cost, rotation_t_cost, TCount};
use crate::error::{Error, Result};

/// All parameters of one amplitude-amplification plan.
#[derive(Debug, Clone, PartialEq)]
pub struct AaPlan {
    /// Initial overlap gamma_i, 0 < gamma_i <= gamma_f.
    pub gamma_i: f64,
    /// Final overlap gamma_f <= 1.
    pub gamma_f: f64,
    pub n_iter: u64,
    /// Bare QSP error bound (1 - gamma_f^2) / (6 N_iter^2); zero when no
    /// iterations are needed.
    pub eps0: f64,
    /// Budget left after rotation-synthesis corrections. Strictly positive
    /// whenever n_iter >= 1 (construction fails otherwise).
    pub eps_adj: f64,
    /// QSP transition half-width in normalized spectrum units.
    pub delta: f64,
    pub n_phi: u64,
    /// Energy shift mu.
    pub mu: f64,
    /// Usable spectral gap Delta.
    pub gap: f64,
    /// alpha + |mu|: normalization of the shifted block encoding.
    pub alpha_shifted: f64,
    /// Rotation-synthesis error assigned to the Hamiltonian block encoding.
    pub eps_rh: f64,
    /// Rotation-synthesis error assigned to the QSP phase rotations.
    pub eps_rp: f64,
}

impl AaPlan {
    /// False when the initial overlap already meets the target.
    pub fn needs_qsp(&self) -> bool {
        self.n_iter >= 1
    }
}

/// N_iter = ceil((asin(gamma_f)/asin(gamma_i) - 1) / 2), floored at 0.
pub fn n_iterations(gamma_i: f64, gamma_f: f64) -> Result<u64> {
    check_overlaps(gamma_i, gamma_f)?;
    let ratio = gamma_f.asin() / gamma_i.asin();
    Ok(ceil_snapped((ratio - 1.0) / 2.0).max(0) as u64)
}

/// Inverse of [`n_iterations`]: the overlap for which exactly `n_iter`
/// iterations rotate onto gamma_f.
pub fn invert_n_iterations(n_iter: u64, gamma_f: f64) -> Result<f64> {
    if n_iter < 1 {
        return Err(Error::domain("invert_n_iterations needs n_iter >= 1"));
    }
    if !(gamma_f > 0.0 && gamma_f <= 1.0) {
        return Err(Error::domain(format!(
            "gamma_f must be in (0, 1], got {gamma_f}"
        )));
    }
    Ok((gamma_f.asin() / (2 * n_iter + 1) as f64).sin())
}

/// Bare QSP error bound eps0 = (1 - gamma_f^2) / (6 N_iter^2).
pub fn epsilon_bound(gamma_f: f64, n_iter: u64) -> Result<f64> {
    if n_iter < 1 {
        return Err(Error::domain("epsilon_bound needs n_iter >= 1"));
    }
    if !(0.0..1.0).contains(&gamma_f) {
        return Err(Error::domain(format!(
            "epsilon_bound needs gamma_f in [0, 1); gamma_f = {gamma_f} leaves no budget"
        )));
    }
    Ok((1.0 - gamma_f * gamma_f) / (6.0 * (n_iter * n_iter) as f64))
}

/// Apply the rotation-synthesis corrections to the bare bound:
///
/// eps = eps0
///     - (|gamma_f| sqrt(1 - gamma_f^2) / (4 N^2)) (L / Delta) eps_RH
///     - (2 / delta) ln(1 / eps0) eps_RP.
///
/// Fails when the corrections exhaust the budget.
#[allow(clippy::too_many_arguments)]
pub fn epsilon_adjusted(
    eps0: f64,
    gamma_f: f64,
    n_iter: u64,
    l_terms: u64,
    gap: f64,
    delta: f64,
    eps_rh: f64,
    eps_rp: f64,
) -> Result<f64> {
    if eps0 <= 0.0 || gap <= 0.0 || delta <= 0.0 || n_iter < 1 {
        return Err(Error::domain(
            "epsilon_adjusted needs eps0 > 0, gap > 0, delta > 0, n_iter >= 1",
        ));
    }
    let n2 = (n_iter * n_iter) as f64;
    let hamiltonian_term = gamma_f.abs() * (1.0 - gamma_f * gamma_f).sqrt() / (4.0 * n2)
        * (l_terms as f64 / gap)
        * eps_rh;
    let phase_term = 2.0 / delta * (1.0 / eps0).ln() * eps_rp;
    let eps = eps0 - hamiltonian_term - phase_term;
    if eps <= 0.0 {
        return Err(Error::InfeasiblePlan {
            eps0,
            hamiltonian_term,
            phase_term,
            dominant: if hamiltonian_term >= phase_term {
                "hamiltonian rotation synthesis"
            } else {
                "phase rotation synthesis"
            },
        });
    }
    Ok(eps)
}

/// Asymptotic QSP degree N_phi = ceil((2 / delta) ln(1 / eps)).
pub fn qsp_degree(delta: f64, eps: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!(
            "qsp_degree needs eps, delta in (0, 1); got eps = {eps}, delta = {delta}"
        )));
    }
    Ok((2.0 / delta * (1.0 / eps).ln()).ceil() as u64)
}

/// Saturate the spectral-threshold condition with mu centered in the gap:
/// delta = (Delta / 2) / (4 (alpha + |mu|)).
pub fn qsp_delta(gap: f64, alpha_shifted: f64) -> Result<f64> {
    if !(gap > 0.0) || !(alpha_shifted > 0.0) {
        return Err(Error::domain(format!(
            "qsp_delta needs gap > 0 and alpha_shifted > 0; got {gap}, {alpha_shifted}"
        )));
    }
    Ok(0.5 * gap / (4.0 * alpha_shifted))
}

/// Inputs for assembling a plan.
#[derive(Debug, Clone)]
pub struct PlanRequest {
    pub gamma_i: f64,
    pub gamma_f: f64,
    pub mu: f64,
    pub gap: f64,
    pub alpha_shifted: f64,
    /// LCU term count, used for the default eps_RH scaling.
    pub l_terms: u64,
    /// Override for eps_RH; default 1e-2 / l_terms.
    pub eps_rh: Option<f64>,
    /// Override for eps_RP; default 1e-10 eps0 / d0 with d0 the bare-budget
    /// QSP degree.
    pub eps_rp: Option<f64>,
}

/// Assemble the full plan: N_iter, bare and corrected budgets, degree.
pub fn plan(req: &PlanRequest) -> Result<AaPlan> {
    check_overlaps(req.gamma_i, req.gamma_f)?;
    let delta = qsp_delta(req.gap, req.alpha_shifted)?;
    let n_iter = n_iterations(req.gamma_i, req.gamma_f)?;
    let eps_rh = req.eps_rh.unwrap_or(1e-2 / req.l_terms as f64);
    if n_iter == 0 {
        return Ok(AaPlan {
            gamma_i: req.gamma_i,
            gamma_f: req.gamma_f,
            n_iter: 0,
            eps0: 0.0,
            eps_adj: 0.0,
            delta,
            n_phi: 0,
            mu: req.mu,
            gap: req.gap,
            alpha_shifted: req.alpha_shifted,
            eps_rh,
            eps_rp: 0.0,
        });
    }
    let eps0 = epsilon_bound(req.gamma_f, n_iter)?;
    let d0 = qsp_degree(delta, eps0)?;
    let eps_rp = req.eps_rp.unwrap_or(1e-10 * eps0 / d0 as f64);
    let eps_adj = epsilon_adjusted(
        eps0,
        req.gamma_f,
        n_iter,
        req.l_terms,
        req.gap,
        delta,
        eps_rh,
        eps_rp,
    )?;
    let n_phi = qsp_degree(delta, eps_adj)?;
    Ok(AaPlan {
        gamma_i: req.gamma_i,
        gamma_f: req.gamma_f,
        n_iter,
        eps0,
        eps_adj,
        delta,
        n_phi,
        mu: req.mu,
        gap: req.gap,
        alpha_shifted: req.alpha_shifted,
        eps_rh,
        eps_rp,
    })
}

/// Initial-state reflector cost: two guess preparations and one
/// multi-controlled X across the system register.
pub fn reflector_init_cost(t_guess_prep: &TCount, n_sys: u64) -> Result<TCount> {
    let mut t = t_guess_prep.scale(&BigUint::from(2u32));
    t += &TCount::labeled("reflect_mcx", mcx_t_cost(n_sys)?);
    Ok(t)
}

/// Projector phase operation cost: two multi-controlled X gates over the
/// m+1 block-encoding qubits and one synthesized rotation.
pub fn phase_op_cost(m_block: u64, eps_rp: f64) -> Result<TCount> {
    let mcx = 2 * mcx_t_cost(m_block + 1)?;
    let rot = rotation_t_cost(eps_rp)?;
    Ok(&TCount::labeled("phase_mcx", mcx) + &TCount::labeled("phase_rot", rot))
}

/// T_AA = N_iter (T_Rphi + N_phi (T_UH + T_phase)), with the breakdown
/// {reflect_init, qsp_walk, qsp_phases}.
pub fn t_aa(
    plan: &AaPlan,
    t_reflect_init: &TCount,
    t_hamiltonian: &TCount,
    t_phase_rotation: &TCount,
) -> TCount {
    if plan.n_iter == 0 {
        return TCount::zero();
    }
    let n_iter = BigUint::from(plan.n_iter);
    let n_phi = BigUint::from(plan.n_phi);
    let reflect = t_reflect_init.relabel("reflect_init").scale(&n_iter);
    let walk = t_hamiltonian.relabel("qsp_walk").scale(&(&n_iter * &n_phi));
    let phases = t_phase_rotation
        .relabel("qsp_phases")
        .scale(&(&n_iter * &n_phi));
    &(&reflect + &walk) + &phases
}

fn check_overlaps(gamma_i: f64, gamma_f: f64) -> Result<()> {
    if !(gamma_i > 0.0 && gamma_i <= 1.0) || !(gamma_f > 0.0 && gamma_f <= 1.0) {
        return Err(Error::domain(format!(
            "overlaps must be in (0, 1]; got gamma_i = {gamma_i}, gamma_f = {gamma_f}"
        )));
    }
    if gamma_i > gamma_f {
        return Err(Error::domain(format!(
            "gamma_i = {gamma_i} exceeds gamma_f = {gamma_f}"
        )));
    }
    Ok(())
}

/// Ceiling with snapping: values within 1e-9 of an integer round to it,
/// absorbing asin/sin round-trip noise so that inverting N_iter is exact.
fn ceil_snapped(v: f64) -> i64 {
    let nearest = v.round();
    if (v - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
        nearest as i64
    } else {
        v.ceil() as i64
    }
}
