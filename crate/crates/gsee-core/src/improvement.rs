//! Improvement ratio iota and the sweep driver.
//!
//! iota compares the expected T cost of repeat-until-success phase
//! estimation on a cheap guess state against preparing a better state with
//! amplitude amplification first:
//!
//! iota = gamma_i^-2 (T_prep + T_QPE) / [gamma_f^-2 (T_prep + T_QPE + T_AA)].
//!
//! The sweep driver assembles the whole pipeline per grid point - spectrum
//! or norms, mu and Delta, the amplitude-amplification plan, T counts,
//! qubit counts - and never aborts on a per-point failure: infeasible plans
//! are flagged rows so sweep outputs keep a fixed shape.

use serde::{Deserialize, Serialize};

use crate::aa::{self, PlanRequest};
use crate::cost::TCount;
use crate::error::{Error, Result};
use crate::firstquant::{self, MaterialSpec};
use crate::qpe;
use crate::tfim::{self, TfimSpec};
use crate::HARTREE_EV;

/// iota, computed in floating point from the exact integer tallies.
pub fn improvement_ratio(
    t_prep: &TCount,
    t_qpe: &TCount,
    t_aa: &TCount,
    gamma_i: f64,
    gamma_f: f64,
) -> f64 {
    let base = t_prep.to_f64() + t_qpe.to_f64();
    let with_aa = base + t_aa.to_f64();
    (gamma_f * gamma_f) / (gamma_i * gamma_i) * base / with_aa
}

/// Asymptotic form, valid when amplitude amplification dominates:
/// iota ~ (gamma_f^2/gamma_i^2) (Delta/Delta_E) (1/asin gamma_f)
///        (gamma_i / ln gamma_i^-2).
pub fn asymptotic_improvement(gamma_i: f64, gamma_f: f64, gap: f64, delta_e: f64) -> f64 {
    let gf2 = gamma_f * gamma_f;
    let gi2 = gamma_i * gamma_i;
    gf2 / gi2 * (gap / delta_e) / gamma_f.asin() * gamma_i / (1.0 / gi2).ln()
}

/// Least-squares single multiplicative constant c in the log domain:
/// minimizes sum (ln iota - ln(c * iota_asym))^2. Returns (c, worst
/// relative residual of iota against c * iota_asym).
pub fn fit_asymptotic(
    points: &[(f64, f64)],
    gamma_f: f64,
    gap: f64,
    delta_e: f64,
) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::domain(format!(
            "asymptotic fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    let logs: Vec<f64> = points
        .iter()
        .map(|&(gi, iota)| (iota / asymptotic_improvement(gi, gamma_f, gap, delta_e)).ln())
        .collect();
    let c = (logs.iter().sum::<f64>() / logs.len() as f64).exp();
    let worst = logs
        .iter()
        .map(|l| ((l.exp() / c) - 1.0).abs())
        .fold(0.0, f64::max);
    Ok((c, worst))
}

/// Surface-code distance correction: iota * d_noAA / d_AA.
pub fn apply_distance_ratio(iota: f64, d_no_aa: u64, d_aa: u64) -> Result<f64> {
    if d_no_aa < 1 || d_aa < 1 {
        return Err(Error::domain("code distances must be >= 1"));
    }
    Ok(iota * d_no_aa as f64 / d_aa as f64)
}

/// Model selector for sweeps and estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Tfim,
    Firstquant,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Tfim => "tfim",
            ModelKind::Firstquant => "firstquant",
        }
    }
}

/// One grid point's worth of sweep output; `None` fields are not available
/// for the row's status.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub model: ModelKind,
    /// L for the Ising chain, rounded plane-wave count for first-quantized.
    pub size_param: u64,
    pub gamma_i2: f64,
    pub gamma_f2: f64,
    /// As configured: dimensionless coupling units for the chain, eV for
    /// first-quantized.
    pub delta_e: f64,
    pub t_prep: Option<TCount>,
    pub t_qpe: Option<TCount>,
    pub t_aa: Option<TCount>,
    pub n_iter: Option<u64>,
    pub n_phi: Option<u64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub iota: Option<f64>,
    pub iota_asym: Option<f64>,
    pub qubits_total: Option<u64>,
    pub status: String,
}

/// Plan- and model-level detail behind a single-point estimate.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct PointDetail {
    pub mu: f64,
    pub gap: f64,
    pub alpha_shifted: f64,
    pub eps0: Option<f64>,
    pub eps_rh: Option<f64>,
    pub eps_rp: Option<f64>,
    pub qpe_bits: Option<u32>,
    /// (total, antisym, other) logical qubits for first-quantized runs.
    pub qubit_split: Option<(u64, u64, u64)>,
    /// Classical binary-search repetitions for the first-quantized mu rule;
    /// reported separately, never folded into T_AA or iota.
    pub binary_search_iterations: Option<u32>,
    /// Requested plane-wave count before odd-cube rounding, when different.
    pub n_requested: Option<u64>,
}

/// Ising-chain sweep parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TfimParams {
    pub l_values: Vec<usize>,
    pub g: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_shift: Option<f64>,
}

/// First-quantized sweep parameters; energies in eV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FirstQuantParams {
    pub n_values: Vec<u64>,
    pub eta: u64,
    pub zeta_norm: u64,
    pub n_atoms: u64,
    pub omega: f64,
    pub delta_exp_ev: f64,
    pub e0_bar_ev: f64,
    #[serde(default = "default_b_r")]
    pub b_r: u32,
    #[serde(default = "default_aa_factor")]
    pub aa_factor: u8,
    /// Override for the register-sizing error budget (hartree); defaults to
    /// the plan's bare QSP bound eps0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_total: Option<f64>,
}

fn default_b_r() -> u32 {
    7
}

fn default_aa_factor() -> u8 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepModel {
    Tfim(TfimParams),
    Firstquant(FirstQuantParams),
}

/// Full sweep request: the grid axes plus synthesis-error overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRequest {
    pub model: SweepModel,
    pub gamma_f2: f64,
    pub gamma_i2: Vec<f64>,
    pub delta_e: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_rh: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_rp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_hf: Option<f64>,
}

impl SweepRequest {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_f2 > 0.0 && self.gamma_f2 <= 1.0) {
            return Err(Error::config(format!(
                "gamma_f2 must be in (0, 1], got {}",
                self.gamma_f2
            )));
        }
        if self.gamma_i2.is_empty() || self.delta_e.is_empty() {
            return Err(Error::config(
                "empty grid: gamma_i2 and delta_e must be nonempty",
            ));
        }
        for &gi2 in &self.gamma_i2 {
            if !(gi2 > 0.0 && gi2 <= self.gamma_f2) {
                return Err(Error::config(format!(
                    "gamma_i2 = {gi2} outside (0, gamma_f2 = {}]",
                    self.gamma_f2
                )));
            }
        }
        for &de in &self.delta_e {
            if !(de > 0.0) {
                return Err(Error::config(format!("delta_e must be positive, got {de}")));
            }
        }
        match &self.model {
            SweepModel::Tfim(p) => {
                if p.l_values.is_empty() {
                    return Err(Error::config("empty grid: l_sites must be nonempty"));
                }
                for &l in &p.l_values {
                    TfimSpec::new(l, p.g)?;
                }
            }
            SweepModel::Firstquant(p) => {
                if p.n_values.is_empty() {
                    return Err(Error::config("empty grid: n_planewaves must be nonempty"));
                }
                p.material(p.n_values[0]).validate()?;
                if p.aa_factor != 1 && p.aa_factor != 3 {
                    return Err(Error::config(format!(
                        "aa_factor must be 1 or 3, got {}",
                        p.aa_factor
                    )));
                }
            }
        }
        Ok(())
    }
}

impl FirstQuantParams {
    fn material(&self, n_planewaves: u64) -> MaterialSpec {
        MaterialSpec {
            eta: self.eta,
            zeta_norm: self.zeta_norm,
            n_atoms: self.n_atoms,
            omega: self.omega,
            n_planewaves,
            delta_exp_ev: self.delta_exp_ev,
            e0_bar_ev: self.e0_bar_ev,
        }
    }
}

/// Evaluate every grid point in a fixed order (size, then delta_E, then
/// gamma_i^2). Per-point failures become flagged rows.
pub fn run_sweep(req: &SweepRequest) -> Result<Vec<SweepRow>> {
    req.validate()?;
    let mut rows = Vec::new();
    match &req.model {
        SweepModel::Tfim(params) => {
            for &l in &params.l_values {
                for &de in &req.delta_e {
                    for &gi2 in &req.gamma_i2 {
                        rows.push(row_or_flag(
                            ModelKind::Tfim,
                            l as u64,
                            gi2,
                            req.gamma_f2,
                            de,
                            tfim_point(params, req, l, gi2, de),
                        ));
                    }
                }
            }
        }
        SweepModel::Firstquant(params) => {
            for &n in &params.n_values {
                let (_, n_rounded) = firstquant::round_to_odd_cube(n);
                // Lattice sums depend only on the size; share them across
                // the inner axes.
                let nu = firstquant::nu_lattice_sums(n_rounded)?;
                for &de in &req.delta_e {
                    for &gi2 in &req.gamma_i2 {
                        rows.push(row_or_flag(
                            ModelKind::Firstquant,
                            n_rounded,
                            gi2,
                            req.gamma_f2,
                            de,
                            firstquant_point(params, req, n, nu, gi2, de),
                        ));
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Single-point estimate: the same computation as a singleton sweep, plus
/// the plan detail.
pub fn estimate_point(req: &SweepRequest) -> Result<(SweepRow, PointDetail)> {
    req.validate()?;
    let (gi2, de) = match (&req.gamma_i2[..], &req.delta_e[..]) {
        (&[gi2], &[de]) => (gi2, de),
        _ => {
            return Err(Error::config(
                "estimate needs exactly one gamma_i2 and one delta_e value",
            ))
        }
    };
    match &req.model {
        SweepModel::Tfim(params) => {
            let l = match params.l_values[..] {
                [l] => l,
                _ => return Err(Error::config("estimate needs exactly one l_sites value")),
            };
            tfim_point(params, req, l, gi2, de)
        }
        SweepModel::Firstquant(params) => {
            let n = match params.n_values[..] {
                [n] => n,
                _ => {
                    return Err(Error::config(
                        "estimate needs exactly one n_planewaves value",
                    ))
                }
            };
            let (_, n_rounded) = firstquant::round_to_odd_cube(n);
            let nu = firstquant::nu_lattice_sums(n_rounded)?;
            firstquant_point(params, req, n, nu, gi2, de)
        }
    }
}

fn row_or_flag(
    model: ModelKind,
    size_param: u64,
    gamma_i2: f64,
    gamma_f2: f64,
    delta_e: f64,
    outcome: Result<(SweepRow, PointDetail)>,
) -> SweepRow {
    match outcome {
        Ok((row, _)) => row,
        Err(err) => {
            let status = if err.is_infeasible() {
                format!("infeasible: {err}")
            } else {
                format!("error: {err}")
            };
            SweepRow {
                model,
                size_param,
                gamma_i2,
                gamma_f2,
                delta_e,
                t_prep: None,
                t_qpe: None,
                t_aa: None,
                n_iter: None,
                n_phi: None,
                epsilon: None,
                delta: None,
                iota: None,
                iota_asym: None,
                qubits_total: None,
                status,
            }
        }
    }
}

fn tfim_point(
    params: &TfimParams,
    req: &SweepRequest,
    l: usize,
    gamma_i2: f64,
    delta_e: f64,
) -> Result<(SweepRow, PointDetail)> {
    let mut spec = TfimSpec::new(l, params.g)?;
    spec.mu_shift = params.mu_shift;
    let spectrum = tfim::free_fermion_spectrum(&spec)?;
    let mu = spec.resolved_mu(&spectrum);
    let half_gap = (mu - spectrum.e0).min(spectrum.e1 - mu);
    if half_gap <= 0.0 {
        return Err(Error::MuOutsideGap {
            mu,
            e0: spectrum.e0,
            e1: spectrum.e1,
        });
    }
    let alpha_shifted = spectrum.lambda;
    let l_terms = 2 * l as u64 + 1;
    let eps_rh = req.eps_rh.unwrap_or(1e-2 / l_terms as f64);

    let (gamma_i, gamma_f) = (gamma_i2.sqrt(), req.gamma_f2.sqrt());
    let plan = aa::plan(&PlanRequest {
        gamma_i,
        gamma_f,
        mu,
        gap: 2.0 * half_gap,
        alpha_shifted,
        l_terms,
        eps_rh: Some(eps_rh),
        eps_rp: req.eps_rp,
    })?;

    let t_hamiltonian = tfim::hamiltonian_t_count(&spec, eps_rh)?;
    let p = qpe::register_size(alpha_shifted, delta_e)?;
    let t_qpe = qpe::t_count(p, &t_hamiltonian)?;
    let t_prep = tfim::guess_prep_t_count(&spec, eps_rh)?;

    let t_aa = if plan.needs_qsp() {
        let t_reflect = aa::reflector_init_cost(&t_prep, l as u64)?;
        let t_phase = aa::phase_op_cost(tfim::coeff_register_width(&spec), plan.eps_rp)?;
        aa::t_aa(&plan, &t_reflect, &t_hamiltonian, &t_phase)
    } else {
        TCount::zero()
    };

    let iota = improvement_ratio(&t_prep, &t_qpe, &t_aa, gamma_i, gamma_f);
    let iota_asym = asymptotic_improvement(gamma_i, gamma_f, spectrum.gap, delta_e);
    let qubits_total = tfim::qubit_count(&spec, true) + qpe::qubit_count(p);

    let row = SweepRow {
        model: ModelKind::Tfim,
        size_param: l as u64,
        gamma_i2,
        gamma_f2: req.gamma_f2,
        delta_e,
        t_prep: Some(t_prep),
        t_qpe: Some(t_qpe),
        t_aa: Some(t_aa),
        n_iter: Some(plan.n_iter),
        n_phi: plan.needs_qsp().then_some(plan.n_phi),
        epsilon: plan.needs_qsp().then_some(plan.eps_adj),
        delta: Some(plan.delta),
        iota: Some(iota),
        iota_asym: Some(iota_asym),
        qubits_total: Some(qubits_total),
        status: "ok".into(),
    };
    let detail = PointDetail {
        mu,
        gap: spectrum.gap,
        alpha_shifted,
        eps0: plan.needs_qsp().then_some(plan.eps0),
        eps_rh: Some(eps_rh),
        eps_rp: plan.needs_qsp().then_some(plan.eps_rp),
        qpe_bits: Some(p),
        qubit_split: None,
        binary_search_iterations: None,
        n_requested: None,
    };
    Ok((row, detail))
}

fn firstquant_point(
    params: &FirstQuantParams,
    req: &SweepRequest,
    n_requested: u64,
    nu: (f64, f64),
    gamma_i2: f64,
    delta_e_ev: f64,
) -> Result<(SweepRow, PointDetail)> {
    let (_, n_rounded) = firstquant::round_to_odd_cube(n_requested);
    let spec = params.material(n_rounded);
    spec.validate()?;
    let delta_e_ha = delta_e_ev / HARTREE_EV;
    let (mu, gap, bin_iters) = firstquant::mu_delta(&spec)?;

    let (gamma_i, gamma_f) = (gamma_i2.sqrt(), req.gamma_f2.sqrt());
    let n_iter = aa::n_iterations(gamma_i, gamma_f)?;
    // Register sizing ties the block-encoding error budget to the QSP
    // target; without iterations fall back to the QPE precision.
    let eps_total = params.eps_total.unwrap_or(if n_iter >= 1 {
        aa::epsilon_bound(gamma_f, n_iter)?
    } else {
        delta_e_ha
    });
    let regs = firstquant::size_precision_registers_with(
        &spec,
        eps_total,
        params.b_r,
        params.aa_factor,
        nu,
    )?;
    let norms = firstquant::lambda_norms(&spec, regs.n_p, nu);
    let alpha_shifted = norms.lambda_total + mu.abs();
    let l_terms = spec.eta + 2 * spec.zeta_norm;
    let eps_rh = req.eps_rh.unwrap_or(1e-2 / l_terms as f64);

    let plan = aa::plan(&PlanRequest {
        gamma_i,
        gamma_f,
        mu,
        gap,
        alpha_shifted,
        l_terms,
        eps_rh: Some(eps_rh),
        eps_rp: req.eps_rp,
    })?;

    let t_encode = firstquant::hamiltonian_t_count(&spec, &regs)?;
    let t_hamiltonian = &t_encode + &firstquant::controlled_overhead(&regs);
    let p = qpe::register_size(alpha_shifted, delta_e_ha)?;
    let t_qpe = qpe::t_count(p, &t_hamiltonian)?;

    let eps_hf = req.eps_hf.unwrap_or(eps_rh);
    let t_hf = firstquant::hartree_fock_t_count(spec.eta, spec.n_planewaves, eps_hf)?;
    let (t_startup, _) = firstquant::antisym_t_counts(spec.eta)?;
    let t_prep = &t_startup + &t_hf;

    let t_aa = if plan.needs_qsp() {
        // The reflection re-prepares through the shuffle path; startup
        // filtering happens once per shot and stays out of the loop.
        let n_sys = 3 * spec.eta * regs.n_p as u64;
        let t_reflect = aa::reflector_init_cost(&t_hf, n_sys)?;
        let t_phase = aa::phase_op_cost(regs.controlled_register_width(), plan.eps_rp)?;
        aa::t_aa(&plan, &t_reflect, &t_hamiltonian, &t_phase)
    } else {
        TCount::zero()
    };

    let iota = improvement_ratio(&t_prep, &t_qpe, &t_aa, gamma_i, gamma_f);
    let iota_asym = asymptotic_improvement(gamma_i, gamma_f, gap, delta_e_ha);

    // Qubit accounting needs the antisymmetrization alphabet N >= eta^2;
    // smaller bases still cost out, they just lack a qubit column.
    let qubit_split = firstquant::qubit_count(&spec, &regs).ok();
    let qubits_total = qubit_split.map(|(total, _, _)| total + 1 + qpe::qubit_count(p));

    let row = SweepRow {
        model: ModelKind::Firstquant,
        size_param: n_rounded,
        gamma_i2,
        gamma_f2: req.gamma_f2,
        delta_e: delta_e_ev,
        t_prep: Some(t_prep),
        t_qpe: Some(t_qpe),
        t_aa: Some(t_aa),
        n_iter: Some(plan.n_iter),
        n_phi: plan.needs_qsp().then_some(plan.n_phi),
        epsilon: plan.needs_qsp().then_some(plan.eps_adj),
        delta: Some(plan.delta),
        iota: Some(iota),
        iota_asym: Some(iota_asym),
        qubits_total,
        status: "ok".into(),
    };
    let detail = PointDetail {
        mu,
        gap,
        alpha_shifted,
        eps0: plan.needs_qsp().then_some(plan.eps0),
        eps_rh: Some(eps_rh),
        eps_rp: plan.needs_qsp().then_some(plan.eps_rp),
        qpe_bits: Some(p),
        qubit_split,
        binary_search_iterations: Some(bin_iters),
        n_requested: (n_requested != n_rounded).then_some(n_requested),
    };
    Ok((row, detail))
}
