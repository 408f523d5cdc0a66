//! Cost model for low-T quantum phase estimation.
//!
//! The circuit is the register initialization chi_m, a ladder of 2^p
//! controlled walk applications of the block-encoded Hamiltonian, and an
//! inverse QFT. Cost is parameterized entirely by the register size p,
//! which follows from the target Holevo variance Delta_E and the
//! block-encoding normalization alpha.

use num_bigint::BigUint;

use crate::cost::{rotation_t_cost, TCount};
use crate::error::{Error, Result};

/// Phase-estimation plan: register size, QFT synthesis budget, T count.
#[derive(Debug, Clone, PartialEq)]
pub struct QpePlan {
    /// Target Holevo variance, in the energy units of alpha.
    pub delta_e: f64,
    /// Block-encoding normalization alpha >= ||H||.
    pub alpha: f64,
    /// Register size p.
    pub p: u32,
    /// QFT synthesis budget 2^-(p+1).
    pub eps_qft: f64,
    pub t_count: TCount,
}

/// p = ceil(log2(sqrt(2) pi alpha / (2 Delta_E))).
pub fn register_size(alpha: f64, delta_e: f64) -> Result<u32> {
    if !(alpha > 0.0) || !(delta_e > 0.0) {
        return Err(Error::domain(format!(
            "QPE needs alpha > 0 and delta_e > 0, got alpha = {alpha}, delta_e = {delta_e}"
        )));
    }
    if delta_e >= alpha {
        return Err(Error::domain(format!(
            "degenerate QPE request: delta_e = {delta_e} >= alpha = {alpha}"
        )));
    }
    let arg = std::f64::consts::SQRT_2 * std::f64::consts::PI * alpha / (2.0 * delta_e);
    let p = arg.log2().ceil();
    if p < 1.0 {
        return Err(Error::domain("QPE register collapsed to zero bits"));
    }
    Ok(p as u32)
}

/// Total QPE T count: (4p + 2p(p-1)) rotations synthesized to accuracy
/// eps_QFT / (pi p) each, plus 2^p walk applications of the Hamiltonian.
pub fn t_count(p: u32, t_hamiltonian: &TCount) -> Result<TCount> {
    if p < 1 {
        return Err(Error::domain("QPE needs p >= 1"));
    }
    let eps_qft = 2f64.powi(-(p as i32 + 1));
    let per_rotation = rotation_t_cost(eps_qft / (std::f64::consts::PI * p as f64))?;
    let rotations = 4 * p as u64 + 2 * p as u64 * (p as u64 - 1);
    let chi_and_qft = TCount::labeled("chi_and_qft", rotations * per_rotation);
    let walk = t_hamiltonian
        .relabel("walk")
        .scale(&(BigUint::from(1u32) << p));
    Ok(&chi_and_qft + &walk)
}

/// Only the p estimate bits are added by QPE.
pub fn qubit_count(p: u32) -> u64 {
    p as u64
}

pub fn plan(alpha: f64, delta_e: f64, t_hamiltonian: &TCount) -> Result<QpePlan> {
    let p = register_size(alpha, delta_e)?;
    Ok(QpePlan {
        delta_e,
        alpha,
        p,
        eps_qft: 2f64.powi(-(p as i32 + 1)),
        t_count: t_count(p, t_hamiltonian)?,
    })
}
