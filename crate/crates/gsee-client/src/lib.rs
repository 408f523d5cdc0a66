//! Thin typed client for the estimation service.
//!
//! Wraps the `/v1` JSON endpoints; response bodies deserialize into the
//! same types the service serializes, so a round trip through the wire is
//! lossless (tallies travel as decimal strings, floats in shortest
//! round-trip form).

use gsee_core::config::RunConfig;
use gsee_service::{
    ApiError, EstimateRequest, EstimateResponse, HealthResponse, SimulateResponse, SweepResponse,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClientError {
    /// The service rejected the request and said why.
    #[error("{kind}: {message}")]
    Api { kind: String, message: String },
    /// Transport or decoding failure.
    #[error("transport error: {0}")]
    Transport(#[from] reqwest::Error),
}

impl ClientError {
    pub fn kind(&self) -> &str {
        match self {
            ClientError::Api { kind, .. } => kind,
            ClientError::Transport(_) => "transport",
        }
    }
}

pub struct GseeClient {
    base_url: String,
    http: reqwest::Client,
}

impl GseeClient {
    pub fn new(base_url: impl Into<String>) -> Self {
        GseeClient {
            base_url: base_url.into().trim_end_matches('/').to_owned(),
            http: reqwest::Client::new(),
        }
    }

    pub async fn health(&self) -> Result<HealthResponse, ClientError> {
        self.get("/v1/health").await
    }

    pub async fn estimate(&self, config: &RunConfig) -> Result<EstimateResponse, ClientError> {
        self.post("/v1/estimate", config).await
    }

    pub async fn sweep(&self, config: &RunConfig) -> Result<SweepResponse, ClientError> {
        self.post("/v1/sweep", config).await
    }

    pub async fn simulate(&self, config: &RunConfig) -> Result<SimulateResponse, ClientError> {
        self.post("/v1/simulate", config).await
    }

    async fn get<T: serde::de::DeserializeOwned>(&self, path: &str) -> Result<T, ClientError> {
        let resp = self
            .http
            .get(format!("{}{path}", self.base_url))
            .send()
            .await?;
        Self::decode(resp).await
    }

    async fn post<T: serde::de::DeserializeOwned>(
        &self,
        path: &str,
        config: &RunConfig,
    ) -> Result<T, ClientError> {
        let resp = self
            .http
            .post(format!("{}{path}", self.base_url))
            .json(&EstimateRequest {
                config: config.clone(),
            })
            .send()
            .await?;
        Self::decode(resp).await
    }

    async fn decode<T: serde::de::DeserializeOwned>(
        resp: reqwest::Response,
    ) -> Result<T, ClientError> {
        if resp.status().is_success() {
            return Ok(resp.json().await?);
        }
        let status = resp.status();
        match resp.json::<ApiError>().await {
            Ok(api) => Err(ClientError::Api {
                kind: api.error.kind,
                message: api.error.message,
            }),
            Err(_) => Err(ClientError::Api {
                kind: "internal".into(),
                message: format!("service returned {status}"),
            }),
        }
    }
}
