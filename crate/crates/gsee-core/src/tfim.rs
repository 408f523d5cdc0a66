//! 1D transverse-field Ising chain: exact spectral data and block-encoding
//! costs.
//!
//! The model is H = sum_i S^z_i S^z_{i+1} + g S^x_i on a periodic ring of L
//! sites, with S the Pauli matrices. Spin operators are Pauli (not spin-1/2
//! halves), which makes the thermodynamic-limit gap formula 2(|g| - 1) exact
//! for the stated Hamiltonian; the dense-diagonalization oracle in the tests
//! pins this convention.
//!
//! The ground energy comes from the Jordan-Wigner free-fermion form: the ring
//! maps (per-site Hadamard, then a global spin flip) onto
//! sum_i X_i X_{i+1} - g Z_i, whose quadratic fermion Hamiltonian splits into
//! even/odd parity sectors with antiperiodic/periodic boundary conditions.
//! Each sector is Bogoliubov-diagonalized numerically through the real Schur
//! form of its Majorana coupling matrix; the quasiparticle vacuum's fermion
//! parity is tracked via det of the orthogonal Schur factor so that only
//! physical (parity-admissible) states compete for the minimum. This handles
//! the frustrated odd-L antiferromagnetic ring exactly.

use nalgebra::{DMatrix, DVector};

use crate::cost::{mcx_t_cost, rotation_t_cost, TCount};
use crate::error::{Error, Result};

/// Periodic transverse-field Ising chain definition.
#[derive(Debug, Clone, PartialEq)]
pub struct TfimSpec {
    /// Site count, L >= 2.
    pub l_sites: usize,
    /// Transverse-field strength, |g| != 1.
    pub g: f64,
    /// Optional override for the energy shift mu; defaults to the
    /// mid-gap point (E0 + E1)/2.
    pub mu_shift: Option<f64>,
}

impl TfimSpec {
    pub fn new(l_sites: usize, g: f64) -> Result<Self> {
        if l_sites < 2 {
            return Err(Error::domain(format!(
                "TFIM needs L >= 2 sites, got {l_sites}"
            )));
        }
        if !g.is_finite() {
            return Err(Error::domain(format!(
                "non-finite transverse field g = {g}"
            )));
        }
        if g.abs() == 1.0 {
            return Err(Error::Gapless { g });
        }
        Ok(TfimSpec {
            l_sites,
            g,
            mu_shift: None,
        })
    }

    pub fn with_mu_shift(mut self, mu: f64) -> Self {
        self.mu_shift = Some(mu);
        self
    }

    /// The shift actually used: the override if present, else the mid-gap
    /// point from the spectrum.
    pub fn resolved_mu(&self, spectrum: &TfimSpectrum) -> f64 {
        self.mu_shift.unwrap_or_else(|| mu_delta(spectrum).0)
    }
}

/// Exact spectral quantities of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TfimSpectrum {
    /// Ground energy from the free-fermion solution.
    pub e0: f64,
    /// E0 plus the usable gap 2||g| - 1|. At finite L this is the gap to the
    /// first excitation of the dispersion, not necessarily the dense E1.
    pub e1: f64,
    /// Usable spectral gap Delta = E1 - E0.
    pub gap: f64,
    /// LCU 1-norm lambda = L(1 + |g|) + |mu| of the shifted Hamiltonian.
    pub lambda: f64,
}

/// Uniform-angle product guess state.
///
/// Each site carries Ry(theta)|0> = (cos(theta/2), sin(theta/2)); theta is a
/// signed angle in [-pi, pi] so the family traces the full x-z meridian.
/// Both hemispheres are needed: the ground state's sign structure pins small
/// overlaps to one side of the circle and large overlaps to the other.
#[derive(Debug, Clone, PartialEq)]
pub struct GuessState {
    /// Signed rotation angle, |theta| <= pi.
    pub theta: f64,
    /// Achieved overlap |<Phi_{0,i}|Psi_0>|.
    pub gamma_i: f64,
}

/// Spectral gap 2||g| - 1|.
pub fn gap(spec: &TfimSpec) -> Result<f64> {
    if spec.g.abs() == 1.0 {
        return Err(Error::Gapless { g: spec.g });
    }
    Ok(2.0 * (spec.g.abs() - 1.0).abs())
}

/// Exact-spectrum rule: mu at the midpoint, Delta the full gap.
pub fn mu_delta(spectrum: &TfimSpectrum) -> (f64, f64) {
    (0.5 * (spectrum.e0 + spectrum.e1), spectrum.e1 - spectrum.e0)
}

/// Ground energy and derived spectral data from the free-fermion solution.
pub fn free_fermion_spectrum(spec: &TfimSpec) -> Result<TfimSpectrum> {
    let delta = gap(spec)?;
    let e0 = free_fermion_ground_energy(spec.l_sites, spec.g)?;
    let e1 = e0 + delta;
    let mu = spec.mu_shift.unwrap_or(0.5 * (e0 + e1));
    let lambda = spec.l_sites as f64 * (1.0 + spec.g.abs()) + mu.abs();
    Ok(TfimSpectrum {
        e0,
        e1,
        gap: delta,
        lambda,
    })
}

/// Ground energy of the ring by sector-wise Bogoliubov diagonalization.
fn free_fermion_ground_energy(l: usize, g: f64) -> Result<f64> {
    // Sectors: (boundary-bond sign, required fermion parity).
    // Even parity (+1) takes antiperiodic fermions (boundary sign -1).
    let sectors = [(-1.0, 1i32), (1.0, -1i32)];
    let mut best = f64::INFINITY;
    for (beta_boundary, required_parity) in sectors {
        let (energies, vacuum_parity) = sector_modes(l, g, beta_boundary)?;
        let e_vac = -0.5 * energies.iter().sum::<f64>();
        let candidate = if vacuum_parity == required_parity {
            e_vac
        } else {
            // Vacuum inadmissible: occupy the cheapest quasiparticle.
            e_vac + energies.iter().cloned().fold(f64::INFINITY, f64::min)
        };
        best = best.min(candidate);
    }
    Ok(best)
}

/// Quasiparticle energies (all >= 0) and the fermion parity of the
/// Bogoliubov vacuum for one boundary sector.
fn sector_modes(l: usize, g: f64, beta_boundary: f64) -> Result<(Vec<f64>, i32)> {
    let n = 2 * l;
    // H = (i/4) sum omega_{mu nu} a_mu a_nu over Majoranas
    // a_{2j} = c_j + c_j^dag, a_{2j+1} = -i(c_j - c_j^dag).
    let mut omega = DMatrix::<f64>::zeros(n, n);
    let add = |omega: &mut DMatrix<f64>, mu: usize, nu: usize, w: f64| {
        omega[(mu, nu)] += w;
        omega[(nu, mu)] -= w;
    };
    for j in 0..l {
        // field term -g Z_j -> i g a_{2j} a_{2j+1}
        add(&mut omega, 2 * j, 2 * j + 1, 2.0 * g);
        // bond X_j X_{j+1} -> -i beta a_{2j+1} a_{2(j+1)}
        let k = (j + 1) % l;
        let beta = if j == l - 1 { beta_boundary } else { 1.0 };
        add(&mut omega, 2 * j + 1, 2 * k, -2.0 * beta);
    }

    let scale = omega.amax().max(1.0);
    let (q, t) = omega.schur().unpack();
    let mut parity = {
        let det = q.determinant();
        if det > 0.0 {
            1i32
        } else {
            -1i32
        }
    };

    // T is antisymmetric quasi-triangular, hence block diagonal with 2x2
    // blocks [[0, e], [-e, 0]]. A negative upper entry means the column pair
    // is swapped relative to the canonical form; each swap flips the parity.
    let tol = 1e-9 * scale;
    let mut energies = Vec::with_capacity(l);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)].abs() > tol {
            let e = 0.5 * (t[(i, i + 1)] - t[(i + 1, i)]);
            if e < 0.0 {
                parity = -parity;
            }
            energies.push(e.abs());
            i += 2;
        } else {
            // A 1x1 block is a zero mode; only |g| = 1 produces one.
            return Err(Error::Gapless { g });
        }
    }
    Ok((energies, parity))
}

/// Dense 2^L x 2^L matrix of H in the computational (z) basis.
///
/// Site i is bit i; bit value 0 is S^z = +1.
pub fn dense_hamiltonian(spec: &TfimSpec) -> DMatrix<f64> {
    let l = spec.l_sites;
    let dim = 1usize << l;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for z in 0..dim {
        let mut diag = 0.0;
        for i in 0..l {
            let si = 1.0 - 2.0 * ((z >> i) & 1) as f64;
            let sj = 1.0 - 2.0 * ((z >> ((i + 1) % l)) & 1) as f64;
            diag += si * sj;
            h[(z ^ (1 << i), z)] += spec.g;
        }
        h[(z, z)] += diag;
    }
    h
}

/// The uniform product state (cos(theta/2), sin(theta/2))^(x L).
pub fn product_state(l: usize, theta: f64) -> DVector<f64> {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let dim = 1usize << l;
    DVector::from_fn(dim, |z, _| {
        let ones = (z as u64).count_ones() as i32;
        c.powi(l as i32 - ones) * s.powi(ones)
    })
}

/// Dense ground state of the chain, for L small enough to diagonalize.
pub fn dense_ground_state(spec: &TfimSpec) -> Result<DVector<f64>> {
    if spec.l_sites > 12 {
        return Err(Error::domain(format!(
            "dense ground state limited to L <= 12, got {}",
            spec.l_sites
        )));
    }
    let eig = dense_hamiltonian(spec).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    Ok(eig.eigenvectors.column(order[0]).into_owned())
}

/// Find theta with |<Phi(theta)|Psi_0>| = `target_gamma_i` by a grid scan
/// plus bisection against the dense ground state.
pub fn tune_guess_angle(spec: &TfimSpec, target_gamma_i: f64) -> Result<GuessState> {
    if !(target_gamma_i > 0.0 && target_gamma_i <= 1.0) {
        return Err(Error::domain(format!(
            "target overlap must be in (0, 1], got {target_gamma_i}"
        )));
    }
    let ground = dense_ground_state(spec)?;
    let l = spec.l_sites;
    let overlap = |theta: f64| product_state(l, theta).dot(&ground).abs();

    const GRID: usize = 8000;
    let theta_at =
        |i: usize| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / GRID as f64;
    let values: Vec<f64> = (0..=GRID).map(|i| overlap(theta_at(i))).collect();

    // Refine the family maximum by ternary search around the grid argmax,
    // so a target sitting exactly at the peak resolves to the argmax angle.
    let argmax = (0..=GRID)
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap();
    let (mut lo, mut hi) = (
        theta_at(argmax.saturating_sub(1)),
        theta_at((argmax + 1).min(GRID)),
    );
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if overlap(m1) < overlap(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let theta_max = 0.5 * (lo + hi);
    let max_overlap = overlap(theta_max);
    if target_gamma_i > max_overlap {
        return Err(Error::UnreachableOverlap {
            target: target_gamma_i,
            max_overlap,
        });
    }
    if max_overlap - target_gamma_i <= 1e-6 {
        return Ok(GuessState {
            theta: theta_max,
            gamma_i: max_overlap,
        });
    }

    for i in 0..GRID {
        let (fa, fb) = (values[i] - target_gamma_i, values[i + 1] - target_gamma_i);
        if fa == 0.0 {
            return Ok(GuessState {
                theta: theta_at(i),
                gamma_i: values[i],
            });
        }
        if fa * fb < 0.0 {
            let (mut lo, mut hi) = (theta_at(i), theta_at(i + 1));
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if (overlap(lo) - target_gamma_i) * (overlap(mid) - target_gamma_i) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let theta = 0.5 * (lo + hi);
            return Ok(GuessState {
                theta,
                gamma_i: overlap(theta),
            });
        }
    }
    Err(Error::UnreachableOverlap {
        target: target_gamma_i,
        max_overlap,
    })
}

/// Width of the LCU coefficient register: ceil(log2 L) + 2 (the site
/// index plus one qubit each for the field and shift coefficients).
pub fn coeff_register_width(spec: &TfimSpec) -> u64 {
    ceil_log2(spec.l_sites as u64) + 2
}

/// T count of one block-encoded application of the shifted Hamiltonian:
/// PREP + UNPREP cost 10 rotations, SEL costs 3L multi-controlled X gates
/// on the coefficient register.
pub fn hamiltonian_t_count(spec: &TfimSpec, eps_prep: f64) -> Result<TCount> {
    let l = spec.l_sites as u64;
    let prep = 10 * rotation_t_cost(eps_prep)?;
    let sel = 3 * l * mcx_t_cost(coeff_register_width(spec))?;
    Ok(&TCount::labeled("prep", prep) + &TCount::labeled("sel", sel))
}

/// Logical qubits for the block-encoded Hamiltonian: 2 + ceil(log2 L) + L,
/// plus one more when the QSP ancilla is included.
pub fn qubit_count(spec: &TfimSpec, with_qsp_ancilla: bool) -> u64 {
    let l = spec.l_sites as u64;
    2 + ceil_log2(l) + l + u64::from(with_qsp_ancilla)
}

/// T count of preparing the product guess state: one rotation per site.
pub fn guess_prep_t_count(spec: &TfimSpec, eps_rot: f64) -> Result<TCount> {
    let l = spec.l_sites as u64;
    Ok(TCount::labeled("guess_prep", l * rotation_t_cost(eps_rot)?))
}

pub(crate) fn ceil_log2(x: u64) -> u64 {
    u64::from(x.next_power_of_two().ilog2())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_two_lowest(spec: &TfimSpec) -> (f64, f64) {
        let mut evals: Vec<f64> = dense_hamiltonian(spec)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        evals.sort_by(f64::total_cmp);
        (evals[0], evals[1])
    }

    #[test]
    fn gap_examples() {
        assert_eq!(gap(&TfimSpec::new(4, 2.0).unwrap()).unwrap(), 2.0);
        assert_eq!(gap(&TfimSpec::new(4, 0.5).unwrap()).unwrap(), 1.0);
        assert_eq!(gap(&TfimSpec::new(4, -2.0).unwrap()).unwrap(), 2.0);
        assert!(matches!(TfimSpec::new(4, 1.0), Err(Error::Gapless { .. })));
        assert!(matches!(TfimSpec::new(4, -1.0), Err(Error::Gapless { .. })));
    }

    #[test]
    fn free_fermion_e0_matches_dense_small_l() {
        // Includes odd L (frustrated ring) and both phases.
        for l in 2..=8 {
            for g in [2.0, 0.5, -2.0, 3.0, 0.3, 1.5] {
                let spec = TfimSpec::new(l, g).unwrap();
                let spectrum = free_fermion_spectrum(&spec).unwrap();
                let (e0d, _) = dense_two_lowest(&spec);
                assert!(
                    (spectrum.e0 - e0d).abs() < 1e-10,
                    "L={l} g={g}: free-fermion {} vs dense {e0d}",
                    spectrum.e0
                );
            }
        }
    }

    #[test]
    fn l2_closed_form() {
        // E0 = -2 sqrt(1 + g^2) for the two-site ring.
        let spec = TfimSpec::new(2, 2.0).unwrap();
        let spectrum = free_fermion_spectrum(&spec).unwrap();
        assert!((spectrum.e0 + 2.0 * 5.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn model_e1_stays_below_dense_e1_in_disordered_phase() {
        // For |g| > 1 the usable gap underestimates the finite-size dense
        // gap, so mu at the model midpoint stays strictly inside (E0, E1).
        for l in 2..=8 {
            for g in [1.5, 2.0, 3.0] {
                let spec = TfimSpec::new(l, g).unwrap();
                let spectrum = free_fermion_spectrum(&spec).unwrap();
                let (e0d, e1d) = dense_two_lowest(&spec);
                let (mu, _) = mu_delta(&spectrum);
                assert!(spectrum.e1 <= e1d + 1e-9, "L={l} g={g}");
                assert!(
                    mu > e0d && mu < e1d,
                    "L={l} g={g}: mu={mu} not in ({e0d}, {e1d})"
                );
            }
        }
    }

    #[test]
    fn mu_delta_examples() {
        let s = TfimSpectrum {
            e0: -10.0,
            e1: -8.0,
            gap: 2.0,
            lambda: 0.0,
        };
        assert_eq!(mu_delta(&s), (-9.0, 2.0));
        let s = TfimSpectrum {
            e0: 0.0,
            e1: 2.0,
            gap: 2.0,
            lambda: 0.0,
        };
        assert_eq!(mu_delta(&s), (1.0, 2.0));
        let spec = TfimSpec::new(4, 2.0).unwrap();
        let spectrum = free_fermion_spectrum(&spec).unwrap();
        let (mu, delta) = mu_delta(&spectrum);
        assert!((delta - 2.0).abs() < 1e-12);
        assert!((mu - (spectrum.e0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn lambda_bounds_shifted_norm() {
        // lambda >= ||H - mu I||_2, checked against the dense spectrum.
        for l in 2..=8 {
            for g in [2.0, 0.5] {
                let spec = TfimSpec::new(l, g).unwrap();
                let spectrum = free_fermion_spectrum(&spec).unwrap();
                let (mu, _) = mu_delta(&spectrum);
                let evals = dense_hamiltonian(&spec).symmetric_eigen().eigenvalues;
                let norm = evals.iter().map(|e| (e - mu).abs()).fold(0.0, f64::max);
                assert!(spectrum.lambda >= norm, "L={l} g={g}");
            }
        }
    }

    #[test]
    fn tune_guess_angle_hits_targets() {
        let spec = TfimSpec::new(6, 2.0).unwrap();
        for target in [1e-2, 0.06, 0.17] {
            let guess = tune_guess_angle(&spec, target).unwrap();
            assert!((guess.gamma_i - target).abs() < 1e-6, "target {target}");
            // Recompute from scratch.
            let ground = dense_ground_state(&spec).unwrap();
            let again = product_state(6, guess.theta).dot(&ground).abs();
            assert!((again - target).abs() < 1e-6);
        }
    }

    #[test]
    fn tune_guess_angle_rejects_unreachable() {
        let spec = TfimSpec::new(6, 2.0).unwrap();
        match tune_guess_angle(&spec, 0.9999) {
            Err(Error::UnreachableOverlap { max_overlap, .. }) => {
                assert!(max_overlap < 0.9999);
            }
            other => panic!("expected unreachable-overlap error, got {other:?}"),
        }
    }

    #[test]
    fn tune_guess_angle_at_the_family_maximum_returns_the_argmax() {
        let spec = TfimSpec::new(4, 2.0).unwrap();
        // Recover the peak by asking for slightly more than anything
        // reachable, then target it exactly.
        let max = match tune_guess_angle(&spec, 1.0) {
            Err(Error::UnreachableOverlap { max_overlap, .. }) => max_overlap,
            other => panic!("expected unreachable, got {other:?}"),
        };
        let guess = tune_guess_angle(&spec, max).unwrap();
        assert!((guess.gamma_i - max).abs() <= 1e-6);
        // The argmax is a true local maximum: nearby angles do no better.
        let ground = dense_ground_state(&spec).unwrap();
        for d in [-1e-4, 1e-4] {
            let nearby = product_state(4, guess.theta + d).dot(&ground).abs();
            assert!(nearby <= guess.gamma_i + 1e-9);
        }
    }

    #[test]
    fn hamiltonian_t_count_examples() {
        let t = hamiltonian_t_count(&TfimSpec::new(4, 2.0).unwrap(), 1e-3).unwrap();
        assert_eq!(t.breakdown()["prep"], 500u32.into());
        assert_eq!(t.breakdown()["sel"], 1152u32.into());
        assert_eq!(t.total(), &1652u32.into());

        let t = hamiltonian_t_count(&TfimSpec::new(2, 2.0).unwrap(), 0.5).unwrap();
        assert_eq!(t.breakdown()["prep"], 140u32.into());
        assert_eq!(t.breakdown()["sel"], 432u32.into());
        assert_eq!(t.total(), &572u32.into());

        let t = hamiltonian_t_count(&TfimSpec::new(64, 2.0).unwrap(), 1e-3).unwrap();
        assert_eq!(t.breakdown()["sel"], 36864u32.into());
    }

    #[test]
    fn t_counts_increase_with_l() {
        let mut prev = 0u64;
        for l in 2..=64 {
            let t = hamiltonian_t_count(&TfimSpec::new(l, 2.0).unwrap(), 1e-3).unwrap();
            let total: u64 = t.to_f64() as u64;
            assert!(total > prev, "L={l}");
            prev = total;
        }
    }

    #[test]
    fn qubit_count_examples() {
        assert_eq!(qubit_count(&TfimSpec::new(4, 2.0).unwrap(), false), 8);
        assert_eq!(qubit_count(&TfimSpec::new(64, 2.0).unwrap(), false), 72);
        assert_eq!(qubit_count(&TfimSpec::new(64, 2.0).unwrap(), true), 73);
        assert_eq!(qubit_count(&TfimSpec::new(2, 2.0).unwrap(), false), 5);
    }

    #[test]
    fn guess_prep_examples() {
        let t = guess_prep_t_count(&TfimSpec::new(4, 2.0).unwrap(), 1e-3).unwrap();
        assert_eq!(t.total(), &200u32.into());
        let t = guess_prep_t_count(&TfimSpec::new(64, 2.0).unwrap(), 0.5).unwrap();
        assert_eq!(t.total(), &896u32.into());
        assert!(TfimSpec::new(1, 2.0).is_err());
    }
}
