//! First-quantized plane-wave electronic-structure cost model.
//!
//! Covers the block encoding of H = T + U + V in a cubic plane-wave basis:
//! LCU 1-norms and their reciprocal-lattice sums, precision-register sizing
//! from error budgets, the antisymmetrization (bitonic-sort) and
//! Hartree-Fock (broadcast Givens) preparation costs, the block-encoded
//! Hamiltonian T count with its controlled variant, logical-qubit counts,
//! and the binary-search rule for the spectral threshold mu and usable gap
//! Delta from an experimental gap.
//!
//! Internal energies are hartree; configuration values quoted in eV are
//! converted with the CODATA 2018 constant.

use num_bigint::BigUint;

use crate::cost::{qrom_erase_cost, rotation_t_cost, TCount};
use crate::error::{Error, Result};
use crate::HARTREE_EV;

/// Material and basis definition for a first-quantized run.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSpec {
    /// Electron count eta >= 2.
    pub eta: u64,
    /// Total nuclear charge sum_A zeta_A >= 1.
    pub zeta_norm: u64,
    /// Number of nuclei.
    pub n_atoms: u64,
    /// Cell volume in bohr^3.
    pub omega: f64,
    /// Plane-wave count; must be an odd cube M^3 (see [`round_to_odd_cube`]).
    pub n_planewaves: u64,
    /// Experimental gap in eV.
    pub delta_exp_ev: f64,
    /// Classical ground-energy estimate in eV, used for the binary-search
    /// range and the shift mu.
    pub e0_bar_ev: f64,
}

impl MaterialSpec {
    pub fn validate(&self) -> Result<()> {
        if self.eta < 2 {
            return Err(Error::domain(format!("eta must be >= 2, got {}", self.eta)));
        }
        if self.zeta_norm < 1 {
            return Err(Error::domain("total nuclear charge must be >= 1"));
        }
        if !(self.omega > 0.0) {
            return Err(Error::domain(format!(
                "cell volume must be positive, got {}",
                self.omega
            )));
        }
        if self.n_planewaves < 27 {
            return Err(Error::domain(format!(
                "plane-wave count must be >= 27, got {}",
                self.n_planewaves
            )));
        }
        Ok(())
    }
}

/// Register sizes entering the block-encoding costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionRegisters {
    /// Bits per momentum component, ceil(log2(N^(1/3) + 1)).
    pub n_p: u32,
    /// ceil(log2 eta).
    pub n_eta: u32,
    /// Bit count ceil(log2(eta + 2 zeta_norm)).
    pub n_etazeta_bits: u32,
    /// T/(U+V) balance rotation precision.
    pub n_t: u32,
    /// Momentum-state inequality-test precision.
    pub n_m: u32,
    /// Nuclear-position QROM precision.
    pub n_r: u32,
    /// Rotation precision bits for the auxiliary-qubit rotation.
    pub b_r: u32,
    /// 1 without amplitude amplification of the momentum-state preparation,
    /// 3 with a single round.
    pub aa_factor: u8,
}

impl PrecisionRegisters {
    /// Width of the register that controlled applications and the QSP
    /// projector must reflect on.
    pub fn controlled_register_width(&self) -> u64 {
        self.n_etazeta_bits as u64
            + 2 * self.n_eta as u64
            + 8 * self.n_p as u64
            + self.n_m as u64
            + 16
    }
}

/// LCU 1-norms of the three Hamiltonian terms, in hartree, together with
/// the dimensionless lattice sums they contain.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaNorms {
    pub lambda_t: f64,
    pub lambda_u: f64,
    pub lambda_v: f64,
    pub lambda_total: f64,
    /// sum over G0 of 1/||nu||^2.
    pub nu_norm2: f64,
    /// sum over G0 of 1/||nu||.
    pub nu_norm1: f64,
}

/// Round a requested plane-wave count to the nearest odd cube M^3, M >= 3.
/// Returns (M, M^3).
pub fn round_to_odd_cube(n: u64) -> (u64, u64) {
    let root = (n as f64).cbrt();
    let below = {
        let mut m = root.floor() as u64;
        if m.is_multiple_of(2) {
            m = m.saturating_sub(1);
        }
        m.max(3)
    };
    let above = below + 2;
    let (b3, a3) = (below.pow(3), above.pow(3));
    if n.abs_diff(b3) <= n.abs_diff(a3) {
        (below, b3)
    } else {
        (above, a3)
    }
}

fn odd_cube_root(n: u64) -> Result<u64> {
    let root = (n as f64).cbrt();
    let m = root.round() as u64;
    if (root - m as f64).abs() > 1e-6 || m.is_multiple_of(2) || m < 3 || m.pow(3) != n {
        return Err(Error::domain(format!(
            "plane-wave count {n} is not an odd cube; round it first (nearest is {}^3 = {})",
            round_to_odd_cube(n).0,
            round_to_odd_cube(n).1
        )));
    }
    Ok(m)
}

/// Brute-force reciprocal-lattice sums over G0 = G \ {0} with
/// G = [-(M-1)/2, (M-1)/2]^3: returns (sum 1/||nu||^2, sum 1/||nu||).
///
/// Plain triple loop in a fixed order, so results are bit-reproducible.
pub fn nu_lattice_sums(n_planewaves: u64) -> Result<(f64, f64)> {
    let m = odd_cube_root(n_planewaves)?;
    let h = ((m - 1) / 2) as i64;
    let mut sum2 = 0.0f64;
    let mut sum1 = 0.0f64;
    for z in -h..=h {
        for y in -h..=h {
            for x in -h..=h {
                let r2 = (x * x + y * y + z * z) as f64;
                if r2 == 0.0 {
                    continue;
                }
                sum2 += 1.0 / r2;
                sum1 += 1.0 / r2.sqrt();
            }
        }
    }
    Ok((sum2, sum1))
}

/// Bits per momentum component for a given plane-wave count.
pub fn momentum_bits(n_planewaves: u64) -> Result<u32> {
    let m = odd_cube_root(n_planewaves)?;
    Ok(((m + 1) as f64).log2().ceil() as u32)
}

/// Term 1-norms:
/// lambda_T = 6 eta pi^2 / Omega^(2/3) (2^(n_p - 1) - 1)^2,
/// lambda_U = eta |zeta| nu2 / (pi Omega^(1/3)),
/// lambda_V = eta (eta - 1) nu2 / (2 pi Omega^(1/3)).
pub fn lambda_norms(spec: &MaterialSpec, n_p: u32, nu: (f64, f64)) -> LambdaNorms {
    let (nu_norm2, nu_norm1) = nu;
    let eta = spec.eta as f64;
    let zeta = spec.zeta_norm as f64;
    let omega13 = spec.omega.cbrt();
    let pi = std::f64::consts::PI;
    let half_range = (2f64.powi(n_p as i32 - 1) - 1.0).powi(2);
    let lambda_t = 6.0 * eta * pi * pi / spec.omega.powf(2.0 / 3.0) * half_range;
    let lambda_u = eta * zeta * nu_norm2 / (pi * omega13);
    let lambda_v = eta * (eta - 1.0) * nu_norm2 / (2.0 * pi * omega13);
    LambdaNorms {
        lambda_t,
        lambda_u,
        lambda_v,
        lambda_total: lambda_t + lambda_u + lambda_v,
        nu_norm2,
        nu_norm1,
    }
}

/// Residual block-encoding errors for given register sizes (hartree):
/// eps_T from the T/(U+V) balance rotation, eps_M from the momentum-state
/// inequality test, eps_R from the finite nuclear-position precision.
///
/// The (n_etazeta - 1) factor in eps_M is the *value* eta + 2|zeta| - 1,
/// reproducing the (eta - 1) + 2|zeta| weight of the U + V terms; the
/// register formulas elsewhere use the bit count.
pub fn register_errors(
    spec: &MaterialSpec,
    norms: &LambdaNorms,
    n_p: u32,
    n_t: u32,
    n_m: u32,
    n_r: u32,
) -> (f64, f64, f64) {
    let pi = std::f64::consts::PI;
    let eta = spec.eta as f64;
    let zeta = spec.zeta_norm as f64;
    let omega13 = spec.omega.cbrt();
    let eps_t = pi * norms.lambda_total / 2f64.powi(n_t as i32);
    let weight = eta + 2.0 * zeta - 1.0;
    let bracket =
        7.0 * 2f64.powi(n_p as i32 + 1) - 9.0 * n_p as f64 - 11.0 - 3.0 * 2f64.powi(-(n_p as i32));
    let eps_m = 2.0 * eta / (2f64.powi(n_m as i32) * pi * omega13) * weight * bracket;
    let eps_r = eta * zeta / (2f64.powi(n_r as i32) * omega13) * norms.nu_norm1;
    (eps_t, eps_m, eps_r)
}

/// Smallest n_T, n_M, n_R with each residual error <= eps_total / 10,
/// floored at 1 bit.
pub fn size_precision_registers(
    spec: &MaterialSpec,
    eps_total: f64,
    b_r: u32,
    aa_factor: u8,
) -> Result<PrecisionRegisters> {
    let nu = nu_lattice_sums(spec.n_planewaves)?;
    size_precision_registers_with(spec, eps_total, b_r, aa_factor, nu)
}

/// [`size_precision_registers`] with precomputed lattice sums, so sweeps
/// can share the expensive grid iteration across rows.
pub fn size_precision_registers_with(
    spec: &MaterialSpec,
    eps_total: f64,
    b_r: u32,
    aa_factor: u8,
    nu: (f64, f64),
) -> Result<PrecisionRegisters> {
    spec.validate()?;
    if !(eps_total > 0.0) {
        return Err(Error::domain(format!(
            "eps_total must be positive, got {eps_total}"
        )));
    }
    if aa_factor != 1 && aa_factor != 3 {
        return Err(Error::domain(format!(
            "aa_factor must be 1 or 3, got {aa_factor}"
        )));
    }
    let n_p = momentum_bits(spec.n_planewaves)?;
    let norms = lambda_norms(spec, n_p, nu);
    let budget = eps_total / 10.0;
    let fit = |err_at_zero: f64| -> u32 {
        // Smallest n with err_at_zero / 2^n <= budget.
        let n = (err_at_zero / budget).log2().ceil();
        if n < 1.0 {
            1
        } else {
            n as u32
        }
    };
    let (e_t0, e_m0, e_r0) = register_errors(spec, &norms, n_p, 0, 0, 0);
    let regs = PrecisionRegisters {
        n_p,
        n_eta: ceil_log2_u64(spec.eta),
        n_etazeta_bits: ceil_log2_u64(spec.eta + 2 * spec.zeta_norm),
        n_t: fit(e_t0),
        n_m: fit(e_m0),
        n_r: fit(e_r0),
        b_r,
        aa_factor,
    };
    Ok(regs)
}

/// Bitonic-network comparison/swap step bound
/// C = floor(eta/2) floor(log2 eta)(floor(log2 eta) + 1) / 2.
pub fn sort_network_steps(eta: u64) -> u64 {
    let fl = eta.ilog2() as u64;
    (eta / 2) * fl * (fl + 1) / 2
}

/// Antisymmetrization T counts: (startup incl. repetition filtering,
/// shuffle repeated with every initial-state reflection).
pub fn antisym_t_counts(eta: u64) -> Result<(TCount, TCount)> {
    if eta < 2 {
        return Err(Error::domain(format!(
            "antisymmetrization needs eta >= 2, got {eta}"
        )));
    }
    let c = sort_network_steps(eta);
    let clog = ceil_log2_u64(eta * eta) as u64;
    let per_step = 4 * clog + 8 * clog;
    let shuffle = c * per_step;
    let startup = shuffle + 8 * (eta - 1) * clog;
    Ok((
        TCount::labeled("antisym_startup", startup),
        TCount::labeled("antisym_shuffle", shuffle),
    ))
}

/// Antisymmetrization qubits: (persistent record string, transient total
/// after reusing freed system-register qubits, clamped at zero).
pub fn antisym_qubit_counts(eta: u64, n_planewaves: u64) -> Result<(u64, u64)> {
    if eta < 2 {
        return Err(Error::domain(format!(
            "antisymmetrization needs eta >= 2, got {eta}"
        )));
    }
    if n_planewaves < eta * eta {
        return Err(Error::AlphabetTooSmall {
            eta,
            n: n_planewaves,
        });
    }
    let clog = ceil_log2_u64(eta * eta) as u64;
    let persistent = eta * clog;
    let unreduced = persistent + 3 * ceil_log2_u64(eta) as u64 + sort_network_steps(eta);
    let freed = eta * ceil_log2_ratio(n_planewaves, eta) as u64;
    Ok((persistent, unreduced.saturating_sub(freed)))
}

/// Hartree-Fock preparation: eta (N - eta) broadcast Givens rotations plus
/// one antisymmetrization shuffle.
pub fn hartree_fock_t_count(eta: u64, n_planewaves: u64, eps_rot_hf: f64) -> Result<TCount> {
    if n_planewaves <= eta {
        return Err(Error::domain(format!(
            "Hartree-Fock needs N > eta, got N = {n_planewaves}, eta = {eta}"
        )));
    }
    let logn = ceil_log2_u64(n_planewaves) as u64;
    let givens =
        2 * (2 * 24 * logn * eta + 4 * logn * (eta - 1)) + 2 * rotation_t_cost(eps_rot_hf)?;
    let (_, shuffle) = antisym_t_counts(eta)?;
    let rotations = TCount::labeled(
        "hf_givens",
        BigUint::from(eta) * (n_planewaves - eta) * givens,
    );
    Ok(&rotations + &shuffle)
}

/// T count of one block encoding of the first-quantized Hamiltonian
/// (Toffoli-to-T factor 7, term-by-term breakdown).
pub fn hamiltonian_t_count(spec: &MaterialSpec, regs: &PrecisionRegisters) -> Result<TCount> {
    spec.validate()?;
    let n_p = regs.n_p as i64;
    let n_eta = regs.n_eta as i64;
    let n_ez = regs.n_etazeta_bits as i64;
    let n_t = regs.n_t as i64;
    let n_m = regs.n_m as i64;
    let n_r = regs.n_r as i64;
    let b_r = regs.b_r as i64;
    let a = regs.aa_factor as i64;
    let eta = spec.eta as i64;

    let terms: [(&str, i64); 10] = [
        ("prep_ai", 2 * (n_t + n_ez + 2 * b_r - 12)),
        ("prep_cde", 14 * n_eta + 8 * b_r - 36),
        ("prep_fgh", 2 * (2 * n_p + 9)),
        ("cswap", 12 * eta * n_p + 4 * eta - 8),
        ("sel_t", 5 * (n_p - 1) + 2),
        (
            "momentum",
            a * (3 * n_p * n_p + 15 * n_p - 7 + 4 * n_m * (n_p + 1)),
        ),
        (
            "nuclear",
            spec.zeta_norm as i64 + qrom_erase_cost(spec.zeta_norm)? as i64,
        ),
        ("addsub_nu", 24 * n_p),
        ("phasing", 8 * n_p * n_r),
        ("select", 18),
    ];
    let mut total = TCount::zero();
    for (label, toffoli_term) in terms {
        if toffoli_term < 0 {
            return Err(Error::domain(format!(
                "register sizes drive the {label} term negative ({toffoli_term})"
            )));
        }
        total += &TCount::labeled(label, 7 * toffoli_term as u64);
    }
    Ok(total)
}

/// Extra T cost of controlling the block-encoded Hamiltonian:
/// 4 (n_etazeta + 2 n_eta + 8 n_p + n_M + 16).
pub fn controlled_overhead(regs: &PrecisionRegisters) -> TCount {
    TCount::labeled("controlled", 4 * regs.controlled_register_width())
}

/// Logical-qubit counts (total, antisymmetrization share with register
/// reuse applied, everything else).
pub fn qubit_count(spec: &MaterialSpec, regs: &PrecisionRegisters) -> Result<(u64, u64, u64)> {
    spec.validate()?;
    let n_p = regs.n_p as u64;
    let n_m = regs.n_m as u64;
    let n_r = regs.n_r as u64;
    let n_t = regs.n_t as u64;
    let other = 3 * spec.eta * n_p
        + regs.n_etazeta_bits as u64
        + 2 * regs.n_eta as u64
        + 3 * n_p * n_p
        + 17 * n_p
        + n_t.max(n_r + 1)
        + 5 * n_r
        + 5 * n_m
        + 4 * n_m * n_p
        + 31;
    let (_, antisym) = antisym_qubit_counts(spec.eta, spec.n_planewaves)?;
    Ok((other + antisym, antisym, other))
}

/// Binary-search rule for a measured gap: Delta = Delta_exp / 3,
/// mu = E0_bar + Delta_exp / 6, both converted to hartree, plus the number
/// of binary-search iterations over the +-N_atom/2 eV window at accuracy
/// delta_1 = Delta_exp / 6.
pub fn mu_delta(spec: &MaterialSpec) -> Result<(f64, f64, u32)> {
    if !(spec.delta_exp_ev > 0.0) {
        return Err(Error::domain(format!(
            "experimental gap must be positive, got {} eV",
            spec.delta_exp_ev
        )));
    }
    let delta_ha = spec.delta_exp_ev / 3.0 / HARTREE_EV;
    let mu_ha = (spec.e0_bar_ev + spec.delta_exp_ev / 6.0) / HARTREE_EV;
    let delta1_ev = spec.delta_exp_ev / 6.0;
    let iterations = (spec.n_atoms as f64 / delta1_ev).log2().ceil().max(0.0) as u32;
    Ok((mu_ha, delta_ha, iterations))
}

pub(crate) fn ceil_log2_u64(x: u64) -> u32 {
    x.next_power_of_two().ilog2()
}

/// Exact smallest k with 2^k >= n / d (rational, no float noise).
fn ceil_log2_ratio(n: u64, d: u64) -> u32 {
    let mut k = 0u32;
    let mut scaled = d as u128;
    while scaled < n as u128 {
        scaled <<= 1;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta_alumina(n: u64) -> MaterialSpec {
        MaterialSpec {
            eta: 610,
            zeta_norm: 610,
            n_atoms: 61,
            omega: 4100.0,
            n_planewaves: n,
            delta_exp_ev: 9.0,
            e0_bar_ev: -234_000.0,
        }
    }

    #[test]
    fn odd_cube_rounding() {
        assert_eq!(round_to_odd_cube(1_000), (9, 729));
        assert_eq!(round_to_odd_cube(100_000), (47, 103_823));
        assert_eq!(round_to_odd_cube(10_000_000), (215, 9_938_375));
        assert_eq!(round_to_odd_cube(27), (3, 27));
    }

    #[test]
    fn nu_sums_m3_closed_form() {
        let (s2, s1) = nu_lattice_sums(27).unwrap();
        assert!((s2 - 44.0 / 3.0).abs() < 1e-12);
        let expected = 6.0 + 12.0 / 2f64.sqrt() + 8.0 / 3f64.sqrt();
        assert!((s1 - expected).abs() < 1e-12);
    }

    #[test]
    fn nu_sums_match_naive_loop() {
        // Independent oracle: different loop order and accumulation.
        for m in [3i64, 5, 7, 9] {
            let h = (m - 1) / 2;
            let mut o2 = 0.0;
            let mut o1 = 0.0;
            for x in -h..=h {
                for y in -h..=h {
                    for z in -h..=h {
                        if (x, y, z) == (0, 0, 0) {
                            continue;
                        }
                        let r2 = (x * x + y * y + z * z) as f64;
                        o2 += r2.recip();
                        o1 += r2.sqrt().recip();
                    }
                }
            }
            let (s2, s1) = nu_lattice_sums((m * m * m) as u64).unwrap();
            assert!((s2 - o2).abs() / o2 < 1e-10, "M={m}");
            assert!((s1 - o1).abs() / o1 < 1e-10, "M={m}");
        }
    }

    #[test]
    fn nu_sums_reject_non_odd_cube() {
        assert!(nu_lattice_sums(10_000_000).is_err());
        assert!(nu_lattice_sums(64).is_err());
    }

    #[test]
    fn lambda_examples() {
        let spec = MaterialSpec {
            eta: 2,
            zeta_norm: 2,
            n_atoms: 1,
            omega: 1.0,
            n_planewaves: 27,
            delta_exp_ev: 9.0,
            e0_bar_ev: 0.0,
        };
        let nu = nu_lattice_sums(27).unwrap();
        let n_p = momentum_bits(27).unwrap();
        assert_eq!(n_p, 2);
        let norms = lambda_norms(&spec, n_p, nu);
        let pi = std::f64::consts::PI;
        assert!((norms.lambda_t - 12.0 * pi * pi).abs() < 1e-9);
        assert!((norms.lambda_u - (2.0 * 2.0 * 44.0 / 3.0) / pi).abs() < 1e-9);
        assert!((norms.lambda_v - (2.0 * 44.0 / 3.0) / (2.0 * pi)).abs() < 1e-9);
        // lambda_V / lambda_U = (eta - 1) / (2 |zeta|) exactly.
        assert!((norms.lambda_v / norms.lambda_u - 1.0 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn register_sizing_is_minimal() {
        let spec = beta_alumina(9_938_375);
        let regs = size_precision_registers(&spec, 1e-2, 7, 1).unwrap();
        let nu = nu_lattice_sums(spec.n_planewaves).unwrap();
        let norms = lambda_norms(&spec, regs.n_p, nu);
        let budget = 1e-2 / 10.0;
        let (et, em, er) = register_errors(&spec, &norms, regs.n_p, regs.n_t, regs.n_m, regs.n_r);
        assert!(et <= budget && em <= budget && er <= budget);
        let (et1, em1, er1) = register_errors(
            &spec,
            &norms,
            regs.n_p,
            regs.n_t - 1,
            regs.n_m - 1,
            regs.n_r - 1,
        );
        assert!(et1 > budget && em1 > budget && er1 > budget);
    }

    #[test]
    fn register_sizing_halving_eps_adds_one_bit() {
        let spec = beta_alumina(9_938_375);
        let a = size_precision_registers(&spec, 1e-2, 7, 1).unwrap();
        let b = size_precision_registers(&spec, 0.5e-2, 7, 1).unwrap();
        assert_eq!(b.n_t, a.n_t + 1);
    }

    #[test]
    fn register_sizing_floors_at_one() {
        let spec = beta_alumina(9_938_375);
        let regs = size_precision_registers(&spec, 1e30, 7, 1).unwrap();
        assert_eq!((regs.n_t, regs.n_m, regs.n_r), (1, 1, 1));
    }

    #[test]
    fn antisym_t_examples() {
        let (startup, shuffle) = antisym_t_counts(2).unwrap();
        assert_eq!(startup.total(), &40u32.into());
        assert_eq!(shuffle.total(), &24u32.into());
        let (_, shuffle) = antisym_t_counts(4).unwrap();
        assert_eq!(shuffle.total(), &288u32.into());
        // startup - shuffle = 8 (eta - 1) ceil(log2 eta^2) always.
        for eta in [2u64, 3, 17, 610] {
            let (s, h) = antisym_t_counts(eta).unwrap();
            let diff = s.total() - h.total();
            let clog = ceil_log2_u64(eta * eta) as u64;
            assert_eq!(diff, (8 * (eta - 1) * clog).into());
        }
    }

    #[test]
    fn antisym_qubits() {
        let (persistent, _) = antisym_qubit_counts(2, 64).unwrap();
        assert_eq!(persistent, 4);
        assert!(matches!(
            antisym_qubit_counts(610, 729),
            Err(Error::AlphabetTooSmall { .. })
        ));
        // Huge N drives the reduction negative; clamps to zero.
        let (_, reduced) = antisym_qubit_counts(2, 1 << 40).unwrap();
        assert_eq!(reduced, 0);
    }

    #[test]
    fn antisym_qubits_beta_alumina() {
        let (_, reduced) = antisym_qubit_counts(610, 9_938_375).unwrap();
        // 610*19 + 30 + 13725 - 610*14
        assert_eq!(reduced, 16_805);
    }

    #[test]
    fn hartree_fock_example() {
        let t = hartree_fock_t_count(2, 8, 1e-3).unwrap();
        assert_eq!(t.total(), &8424u32.into());
        assert!(hartree_fock_t_count(8, 8, 1e-3).is_err());
    }

    #[test]
    fn hartree_fock_magnitude_at_scale() {
        // eta (N - eta) ~ 6.1e9 Givens applications dominate; the total
        // lands in the 1e15..1e16 decade for synthesis errors near 1e-3.
        let t = hartree_fock_t_count(610, 9_938_375, 1e-3).unwrap();
        let total = t.to_f64();
        assert!((1e15..1e17).contains(&total), "T_HF = {total:e}");
    }

    #[test]
    fn hartree_fock_monotone_in_n() {
        let mut prev = BigUint::from(0u32);
        for n in [8u64, 16, 64, 512, 4096] {
            let t = hartree_fock_t_count(2, n, 1e-3).unwrap();
            assert!(t.total() > &prev);
            prev = t.total().clone();
        }
    }

    #[test]
    fn hamiltonian_t_toy_term_by_term() {
        // eta = 2, |zeta| = 2, N = 27, n_T = n_M = n_R = 8, b_r = 7, a = 1.
        let spec = MaterialSpec {
            eta: 2,
            zeta_norm: 2,
            n_atoms: 1,
            omega: 1.0,
            n_planewaves: 27,
            delta_exp_ev: 9.0,
            e0_bar_ev: 0.0,
        };
        let regs = PrecisionRegisters {
            n_p: 2,
            n_eta: 1,
            n_etazeta_bits: 3,
            n_t: 8,
            n_m: 8,
            n_r: 8,
            b_r: 7,
            aa_factor: 1,
        };
        let t = hamiltonian_t_count(&spec, &regs).unwrap();
        let b = t.breakdown();
        assert_eq!(b["prep_ai"], (7u32 * 26).into());
        assert_eq!(b["prep_cde"], (7u32 * 34).into());
        assert_eq!(b["prep_fgh"], (7u32 * 26).into());
        assert_eq!(b["cswap"], (7u32 * 48).into());
        assert_eq!(b["sel_t"], (7u32 * 7).into());
        assert_eq!(b["momentum"], (7u32 * 131).into());
        assert_eq!(b["nuclear"], (7u32 * 5).into());
        assert_eq!(b["addsub_nu"], (7u32 * 48).into());
        assert_eq!(b["phasing"], (7u32 * 128).into());
        assert_eq!(b["select"], (7u32 * 18).into());
        assert_eq!(t.total(), &(7u32 * 471).into());

        // aa_factor 1 -> 3 scales exactly the momentum-state term.
        let mut regs3 = regs.clone();
        regs3.aa_factor = 3;
        let t3 = hamiltonian_t_count(&spec, &regs3).unwrap();
        assert_eq!(t3.breakdown()["momentum"], (3u32 * 7 * 131).into());
        assert_eq!(t3.total() - t.total(), (2u32 * 7 * 131).into());
    }

    #[test]
    fn controlled_overhead_examples() {
        let regs = PrecisionRegisters {
            n_p: 8,
            n_eta: 10,
            n_etazeta_bits: 11,
            n_t: 1,
            n_m: 16,
            n_r: 1,
            b_r: 7,
            aa_factor: 1,
        };
        assert_eq!(controlled_overhead(&regs).total(), &508u32.into());
        // Linear in n_M with slope 4.
        let mut regs2 = regs.clone();
        regs2.n_m = 17;
        assert_eq!(
            controlled_overhead(&regs2).total() - controlled_overhead(&regs).total(),
            4u32.into()
        );
    }

    #[test]
    fn qubit_count_toy_and_slope() {
        let spec = MaterialSpec {
            eta: 2,
            zeta_norm: 2,
            n_atoms: 1,
            omega: 1.0,
            n_planewaves: 27,
            delta_exp_ev: 9.0,
            e0_bar_ev: 0.0,
        };
        let regs = PrecisionRegisters {
            n_p: 2,
            n_eta: 1,
            n_etazeta_bits: 3,
            n_t: 8,
            n_m: 8,
            n_r: 8,
            b_r: 7,
            aa_factor: 1,
        };
        let (total, antisym, other) = qubit_count(&spec, &regs).unwrap();
        // other = 3*2*2 + 3 + 2 + 12 + 34 + max(8,9) + 40 + 40 + 64 + 31
        let expected_other = 12 + 3 + 2 + 12 + 34 + 9 + 40 + 40 + 64 + 31;
        assert_eq!(other, expected_other);
        assert_eq!(total, other + antisym);

        let mut regs2 = regs.clone();
        regs2.n_m += 1;
        let (_, _, other2) = qubit_count(&spec, &regs2).unwrap();
        assert_eq!(other2 - other, 5 + 4 * regs.n_p as u64);
    }

    #[test]
    fn mu_delta_rules() {
        let spec = beta_alumina(9_938_375);
        let (mu, delta, iterations) = mu_delta(&spec).unwrap();
        assert!((delta - 3.0 / HARTREE_EV).abs() < 1e-12);
        assert!((mu - (-234_000.0 + 1.5) / HARTREE_EV).abs() < 1e-9);
        assert_eq!(iterations, 6); // ceil(log2(61 / 1.5))
        let bad = MaterialSpec {
            delta_exp_ev: -1.0,
            ..spec
        };
        assert!(mu_delta(&bad).is_err());
    }

    #[test]
    fn t_counts_monotone_in_eta_and_registers() {
        let spec = beta_alumina(9_938_375);
        let regs = size_precision_registers(&spec, 1e-2, 7, 1).unwrap();
        let base = hamiltonian_t_count(&spec, &regs).unwrap();
        let mut bigger = spec.clone();
        bigger.eta = 700;
        let mut regs_bigger = regs.clone();
        regs_bigger.n_eta = ceil_log2_u64(700);
        regs_bigger.n_etazeta_bits = ceil_log2_u64(700 + 2 * 610);
        assert!(hamiltonian_t_count(&bigger, &regs_bigger).unwrap().total() > base.total());
        for grow in ["n_t", "n_m", "n_r"] {
            let mut r = regs.clone();
            match grow {
                "n_t" => r.n_t += 1,
                "n_m" => r.n_m += 1,
                _ => r.n_r += 1,
            }
            assert!(hamiltonian_t_count(&spec, &r).unwrap().total() >= base.total());
        }
    }
}
