//! Run configuration: a flat, line-oriented `key = value` text format.
//!
//! Grammar: one `key = value` pair per line, `#` starts a comment, blank
//! lines ignored, lists are comma-separated. Parsing is strict: unknown or
//! duplicate keys fail loudly so a misspelled key can never silently fall
//! back to a default. Defaults mirror the experiments the estimator was
//! built around (gamma_f^2 = 0.75, gamma_i^2 from 1e-5 to 1e-1, an
//! experimental gap of 9 eV) and every effective value is echoed into the
//! output metadata so result files are self-describing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::improvement::{FirstQuantParams, ModelKind, SweepModel, SweepRequest, TfimParams};
use crate::reflector::{ReflectorMode, SimulateRequest};

/// Parsed configuration; optional fields resolve to defaults when the
/// request is assembled.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<ModelKind>,
    // Ising chain
    pub l_sites: Option<Vec<usize>>,
    pub g: Option<f64>,
    pub mu_shift: Option<f64>,
    // First-quantized material
    pub eta: Option<u64>,
    pub zeta_norm: Option<u64>,
    pub n_atoms: Option<u64>,
    pub omega: Option<f64>,
    pub n_planewaves: Option<Vec<u64>>,
    pub delta_exp_ev: Option<f64>,
    pub e0_bar_ev: Option<f64>,
    pub b_r: Option<u32>,
    pub aa_factor: Option<u8>,
    pub eps_total: Option<f64>,
    // Shared axes
    pub gamma_f2: Option<Vec<f64>>,
    pub gamma_i2: Option<Vec<f64>>,
    pub delta_e: Option<Vec<f64>>,
    // Synthesis-error overrides
    pub eps_rh: Option<f64>,
    pub eps_rp: Option<f64>,
    pub eps_hf: Option<f64>,
    // Simulation
    pub n_iter: Option<Vec<u64>>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    // Output path (the CLI --out flag overrides)
    pub out: Option<String>,
}

/// Default gamma_i^2 axis: 1e-5 .. 1e-1 in half decades.
pub fn default_gamma_i2() -> Vec<f64> {
    (0..=8).map(|i| 10f64.powf(-5.0 + 0.5 * i as f64)).collect()
}

impl RunConfig {
    /// Parse the strict `key = value` format.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::config(format!(
                    "line {}: expected `key = value`, got {raw:?}",
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(Error::config(format!(
                    "line {}: duplicate key {key:?}",
                    lineno + 1
                )));
            }
            seen.push(key.to_owned());
            cfg.set(key, value)
                .map_err(|e| Error::config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "model" => {
                self.model = Some(match value {
                    "tfim" => ModelKind::Tfim,
                    "firstquant" => ModelKind::Firstquant,
                    other => {
                        return Err(Error::config(format!(
                            "model must be `tfim` or `firstquant`, got {other:?}"
                        )))
                    }
                })
            }
            "l_sites" => self.l_sites = Some(parse_list(key, value)?),
            "g" => self.g = Some(parse_scalar(key, value)?),
            "mu_shift" => self.mu_shift = Some(parse_scalar(key, value)?),
            "eta" => self.eta = Some(parse_scalar(key, value)?),
            "zeta_norm" => self.zeta_norm = Some(parse_scalar(key, value)?),
            "n_atoms" => self.n_atoms = Some(parse_scalar(key, value)?),
            "omega" => self.omega = Some(parse_scalar(key, value)?),
            "n_planewaves" => self.n_planewaves = Some(parse_list(key, value)?),
            "delta_exp_ev" => self.delta_exp_ev = Some(parse_scalar(key, value)?),
            "e0_bar_ev" => self.e0_bar_ev = Some(parse_scalar(key, value)?),
            "b_r" => self.b_r = Some(parse_scalar(key, value)?),
            "aa_factor" => self.aa_factor = Some(parse_scalar(key, value)?),
            "eps_total" => self.eps_total = Some(parse_scalar(key, value)?),
            "gamma_f2" => self.gamma_f2 = Some(parse_list(key, value)?),
            "gamma_i2" => self.gamma_i2 = Some(parse_list(key, value)?),
            "delta_e" => self.delta_e = Some(parse_list(key, value)?),
            "eps_rh" => self.eps_rh = Some(parse_scalar(key, value)?),
            "eps_rp" => self.eps_rp = Some(parse_scalar(key, value)?),
            "eps_hf" => self.eps_hf = Some(parse_scalar(key, value)?),
            "n_iter" => self.n_iter = Some(parse_list(key, value)?),
            "mode" => self.mode = Some(value.to_owned()),
            "seed" => self.seed = Some(parse_scalar(key, value)?),
            "out" => self.out = Some(value.to_owned()),
            other => return Err(Error::config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    fn model(&self) -> Result<ModelKind> {
        self.model
            .ok_or_else(|| Error::config("missing required key `model` (tfim | firstquant)"))
    }

    fn require<T: Clone>(&self, field: &Option<T>, key: &str, model: &str) -> Result<T> {
        field
            .clone()
            .ok_or_else(|| Error::config(format!("missing required key `{key}` for model {model}")))
    }

    fn single_gamma_f2(&self) -> Result<f64> {
        match self.gamma_f2.as_deref() {
            None => Ok(0.75),
            Some([v]) => Ok(*v),
            Some(list) => Err(Error::config(format!(
                "estimate/sweep take a single gamma_f2 value, got {} values",
                list.len()
            ))),
        }
    }

    /// Assemble the sweep/estimate request, applying defaults.
    pub fn to_sweep_request(&self) -> Result<SweepRequest> {
        let model = match self.model()? {
            ModelKind::Tfim => SweepModel::Tfim(TfimParams {
                l_values: self.require(&self.l_sites, "l_sites", "tfim")?,
                g: self.require(&self.g, "g", "tfim")?,
                mu_shift: self.mu_shift,
            }),
            ModelKind::Firstquant => SweepModel::Firstquant(FirstQuantParams {
                n_values: self.require(&self.n_planewaves, "n_planewaves", "firstquant")?,
                eta: self.require(&self.eta, "eta", "firstquant")?,
                zeta_norm: self.require(&self.zeta_norm, "zeta_norm", "firstquant")?,
                n_atoms: self.require(&self.n_atoms, "n_atoms", "firstquant")?,
                omega: self.require(&self.omega, "omega", "firstquant")?,
                delta_exp_ev: self.delta_exp_ev.unwrap_or(9.0),
                e0_bar_ev: self.require(&self.e0_bar_ev, "e0_bar_ev", "firstquant")?,
                b_r: self.b_r.unwrap_or(7),
                aa_factor: self.aa_factor.unwrap_or(1),
                eps_total: self.eps_total,
            }),
        };
        let delta_e = match (&self.delta_e, self.model()?) {
            (Some(list), _) => list.clone(),
            (None, ModelKind::Tfim) => vec![1e-2, 2e-2],
            (None, ModelKind::Firstquant) => vec![0.013, 0.0043],
        };
        let req = SweepRequest {
            model,
            gamma_f2: self.single_gamma_f2()?,
            gamma_i2: self.gamma_i2.clone().unwrap_or_else(default_gamma_i2),
            delta_e,
            eps_rh: self.eps_rh,
            eps_rp: self.eps_rp,
            eps_hf: self.eps_hf,
        };
        req.validate()?;
        Ok(req)
    }

    /// Assemble the overlap-guarantee simulation request, applying defaults.
    pub fn to_simulate_request(&self) -> Result<SimulateRequest> {
        if self.model()? != ModelKind::Tfim {
            return Err(Error::config(
                "simulate supports only model = tfim (dense verification)",
            ));
        }
        let mode = match self.mode.as_deref() {
            None | Some("worst") => ReflectorMode::WorstCase,
            Some("random") => ReflectorMode::Random {
                seed: self.seed.unwrap_or(1),
            },
            Some(other) => {
                return Err(Error::config(format!(
                    "mode must be `worst` or `random`, got {other:?}"
                )))
            }
        };
        let req = SimulateRequest {
            l_values: self.require(&self.l_sites, "l_sites", "tfim")?,
            g: self.require(&self.g, "g", "tfim")?,
            mu_shift: self.mu_shift,
            gamma_f2: self
                .gamma_f2
                .clone()
                .unwrap_or_else(|| vec![0.9, 0.99, 0.999]),
            n_iter: self.n_iter.clone().unwrap_or_else(|| vec![4, 6, 10]),
            mode,
        };
        req.validate()?;
        Ok(req)
    }
}

fn parse_scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::config(format!("key `{key}`: cannot parse {value:?} ({e})")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    if value.trim().is_empty() {
        return Err(Error::config(format!("key `{key}`: empty list")));
    }
    value
        .split(',')
        .map(|item| parse_scalar(key, item.trim()))
        .collect()
}
