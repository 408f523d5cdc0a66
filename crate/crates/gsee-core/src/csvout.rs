//! Deterministic CSV rendering for sweep and simulation results.
//!
//! Integers print verbatim; reals print in Rust's shortest round-trip
//! decimal form. Metadata lines (`# key = value`) echo the effective
//! configuration above the header so every file is self-describing.
//! Rendering is a pure function of the rows, so re-running a command
//! produces a byte-identical file.

use std::fmt::Write as _;

use crate::improvement::SweepRow;
use crate::reflector::SimRow;

/// Exact sweep schema.
pub const SWEEP_HEADER: &str = "model,size_param,gamma_i2,gamma_f2,delta_e,t_prep,t_qpe,t_aa,\
n_iter,n_phi,epsilon,delta,iota,iota_asym,qubits_total,status";

/// Simulation schema.
pub const SIM_HEADER: &str = "model,l_sites,g,gamma_f2_target,n_iter,mode,seed,gamma_i,theta,\
epsilon,gamma_f2_achieved,infidelity_ratio,overlaps,status";

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// Commas and newlines would break the row shape; statuses fold onto one
/// field.
fn sanitize(status: &str) -> String {
    status.replace(['\n', '\r'], " ").replace(',', ";")
}

fn metadata_block(metadata: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in metadata {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out
}

pub fn render_sweep_csv(metadata: &[(String, String)], rows: &[SweepRow]) -> String {
    let mut out = metadata_block(metadata);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.model.as_str(),
            r.size_param,
            r.gamma_i2,
            r.gamma_f2,
            r.delta_e,
            opt(&r.t_prep),
            opt(&r.t_qpe),
            opt(&r.t_aa),
            opt(&r.n_iter),
            opt(&r.n_phi),
            opt(&r.epsilon),
            opt(&r.delta),
            opt(&r.iota),
            opt(&r.iota_asym),
            opt(&r.qubits_total),
            sanitize(&r.status),
        );
    }
    out
}

pub fn render_sim_csv(metadata: &[(String, String)], rows: &[SimRow]) -> String {
    let mut out = metadata_block(metadata);
    out.push_str(SIM_HEADER);
    out.push('\n');
    for r in rows {
        let (gamma_i, theta, epsilon, achieved, ratio, overlaps) = match &r.result {
            Some(res) => (
                res.gamma_i.to_string(),
                res.theta.to_string(),
                res.epsilon_used.to_string(),
                res.achieved_gamma_f2.to_string(),
                res.infidelity_ratio.to_string(),
                res.per_iteration_overlaps
                    .iter()
                    .map(|o| o.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
            ),
            None => Default::default(),
        };
        let _ = writeln!(
            out,
            "tfim,{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.l_sites,
            r.g,
            r.gamma_f2,
            r.n_iter,
            r.mode,
            opt(&r.seed),
            gamma_i,
            theta,
            epsilon,
            achieved,
            ratio,
            overlaps,
            sanitize(&r.status),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::improvement::{ModelKind, SweepRow};
    use crate::TCount;

    fn sample_row() -> SweepRow {
        SweepRow {
            model: ModelKind::Tfim,
            size_param: 4,
            gamma_i2: 1e-3,
            gamma_f2: 0.75,
            delta_e: 1e-2,
            t_prep: Some(TCount::scalar(200u32)),
            t_qpe: Some(TCount::scalar(13_560_000u64)),
            t_aa: Some(TCount::scalar(50_000_000u64)),
            n_iter: Some(17),
            n_phi: Some(1383),
            epsilon: Some(1.4e-4),
            delta: Some(0.0128),
            iota: Some(160.5),
            iota_asym: Some(655.8),
            qubits_total: Some(22),
            status: "ok".into(),
        }
    }

    #[test]
    fn header_is_exact_and_first_noncomment_line() {
        let meta = vec![("model".to_string(), "tfim".to_string())];
        let csv = render_sweep_csv(&meta, &[sample_row()]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "# model = tfim");
        assert_eq!(lines.next().unwrap(), SWEEP_HEADER);
        let row = lines.next().unwrap();
        assert!(row.starts_with("tfim,4,0.001,0.75,0.01,200,13560000,50000000,17,1383,"));
        assert!(row.ends_with(",ok"));
    }

    #[test]
    fn missing_fields_render_empty() {
        let mut row = sample_row();
        row.iota = None;
        row.t_aa = None;
        row.status = "infeasible: budget, exhausted".into();
        let csv = render_sweep_csv(&[], &[row]);
        let data = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = data.split(',').collect();
        assert_eq!(fields.len(), 16);
        assert_eq!(fields[7], ""); // t_aa
        assert_eq!(fields[12], ""); // iota
        assert_eq!(fields[15], "infeasible: budget; exhausted");
    }

    #[test]
    fn rendering_is_deterministic() {
        let rows = vec![sample_row(), sample_row()];
        let meta = vec![("seed".to_string(), "1".to_string())];
        assert_eq!(
            render_sweep_csv(&meta, &rows),
            render_sweep_csv(&meta, &rows)
        );
    }
}
