//! HTTP/JSON front end for the estimation engine.
//!
//! Endpoints (all under `/v1`):
//!
//! - `GET  /v1/health` - liveness and version.
//! - `POST /v1/estimate` - single-point estimate; body `{"config": {...}}`,
//!   response `{"row": ..., "detail": ...}`.
//! - `POST /v1/sweep` - full parameter sweep; response carries the rows in
//!   grid order plus the effective-configuration metadata echo.
//! - `POST /v1/simulate` - dense overlap-guarantee verification grid.
//!
//! Requests carry the same [`RunConfig`] the CLI reads from its `key =
//! value` files (unknown JSON fields are rejected just like unknown keys).
//! Errors come back as `{"error": {"kind", "message"}}` with kind
//! `config`, `infeasible` or `internal`; computation is pure, so identical
//! requests produce identical responses.

use axum::extract::Json;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};

use gsee_core::config::RunConfig;
use gsee_core::improvement::{self, PointDetail, SweepRow};
use gsee_core::reflector::{self, SimRow};
use gsee_core::Error as CoreError;

pub const API_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
    pub version: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EstimateRequest {
    pub config: RunConfig,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EstimateResponse {
    pub row: SweepRow,
    pub detail: PointDetail,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepResponse {
    /// Effective configuration echo, in a fixed order.
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimulateResponse {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<SimRow>,
}

/// Wire-format error body.
#[derive(Debug, Serialize, Deserialize)]
pub struct ApiError {
    pub error: ApiErrorBody,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ApiErrorBody {
    pub kind: String,
    pub message: String,
}

struct ServiceError(StatusCode, ApiError);

impl From<CoreError> for ServiceError {
    fn from(err: CoreError) -> Self {
        let (status, kind) = if err.is_infeasible() {
            (StatusCode::UNPROCESSABLE_ENTITY, "infeasible")
        } else {
            (StatusCode::BAD_REQUEST, "config")
        };
        ServiceError(
            status,
            ApiError {
                error: ApiErrorBody {
                    kind: kind.into(),
                    message: err.to_string(),
                },
            },
        )
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

async fn health() -> Json<HealthResponse> {
    Json(HealthResponse {
        status: "ok".into(),
        version: API_VERSION.into(),
    })
}

async fn estimate(
    Json(req): Json<EstimateRequest>,
) -> Result<Json<EstimateResponse>, ServiceError> {
    let sweep_req = req.config.to_sweep_request()?;
    let (row, detail) = improvement::estimate_point(&sweep_req)?;
    Ok(Json(EstimateResponse { row, detail }))
}

async fn sweep(Json(req): Json<EstimateRequest>) -> Result<Json<SweepResponse>, ServiceError> {
    let sweep_req = req.config.to_sweep_request()?;
    let rows = improvement::run_sweep(&sweep_req)?;
    Ok(Json(SweepResponse {
        metadata: sweep_metadata(&sweep_req),
        rows,
    }))
}

async fn simulate(
    Json(req): Json<EstimateRequest>,
) -> Result<Json<SimulateResponse>, ServiceError> {
    let sim_req = req.config.to_simulate_request()?;
    let rows = reflector::run_simulate(&sim_req)?;
    Ok(Json(SimulateResponse {
        metadata: simulate_metadata(&sim_req),
        rows,
    }))
}

/// Echo of the effective sweep configuration (post-defaults), in a fixed
/// order so downstream CSV files are byte-stable.
pub fn sweep_metadata(req: &improvement::SweepRequest) -> Vec<(String, String)> {
    use improvement::SweepModel;
    let mut meta = Vec::new();
    let mut push = |k: &str, v: String| meta.push((k.to_string(), v));
    match &req.model {
        SweepModel::Tfim(p) => {
            push("model", "tfim".into());
            push("l_sites", join(&p.l_values));
            push("g", p.g.to_string());
            if let Some(mu) = p.mu_shift {
                push("mu_shift", mu.to_string());
            }
        }
        SweepModel::Firstquant(p) => {
            push("model", "firstquant".into());
            push("n_planewaves", join(&p.n_values));
            push("eta", p.eta.to_string());
            push("zeta_norm", p.zeta_norm.to_string());
            push("n_atoms", p.n_atoms.to_string());
            push("omega", p.omega.to_string());
            push("delta_exp_ev", p.delta_exp_ev.to_string());
            push("e0_bar_ev", p.e0_bar_ev.to_string());
            push("b_r", p.b_r.to_string());
            push("aa_factor", p.aa_factor.to_string());
            if let Some(eps) = p.eps_total {
                push("eps_total", eps.to_string());
            }
        }
    }
    push("gamma_f2", req.gamma_f2.to_string());
    push("gamma_i2", join(&req.gamma_i2));
    push("delta_e", join(&req.delta_e));
    match req.eps_rh {
        Some(v) => push("eps_rh", v.to_string()),
        None => push("eps_rh_rule", "1e-2 / n_lcu_terms".into()),
    }
    match req.eps_rp {
        Some(v) => push("eps_rp", v.to_string()),
        None => push("eps_rp_rule", "1e-10 * eps0 / d0".into()),
    }
    if let Some(v) = req.eps_hf {
        push("eps_hf", v.to_string());
    }
    meta
}

pub fn simulate_metadata(req: &reflector::SimulateRequest) -> Vec<(String, String)> {
    let mut meta = Vec::new();
    let mut push = |k: &str, v: String| meta.push((k.to_string(), v));
    push("model", "tfim".into());
    push("l_sites", join(&req.l_values));
    push("g", req.g.to_string());
    if let Some(mu) = req.mu_shift {
        push("mu_shift", mu.to_string());
    }
    push("gamma_f2", join(&req.gamma_f2));
    push("n_iter", join(&req.n_iter));
    push("mode", req.mode.label().into());
    if let Some(seed) = req.mode.seed() {
        push("seed", seed.to_string());
    }
    meta
}

fn join<T: std::fmt::Display>(values: &[T]) -> String {
    values
        .iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// The service router; state-free, so it can be served from any listener.
pub fn router() -> Router {
    Router::new()
        .route("/v1/health", get(health))
        .route("/v1/estimate", post(estimate))
        .route("/v1/sweep", post(sweep))
        .route("/v1/simulate", post(simulate))
}

/// Serve on an already-bound listener until the task is dropped.
pub async fn serve(listener: tokio::net::TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router()).await
}

/// Bind a loopback listener on an ephemeral port and serve in a background
/// task; returns the base URL. Used by the CLI's self-hosted mode and by
/// tests.
pub async fn spawn_local() -> std::io::Result<String> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", 0)).await?;
    let addr = listener.local_addr()?;
    tokio::spawn(serve(listener));
    Ok(format!("http://{addr}"))
}
