//! End-to-end service tests over a real loopback socket, through the typed
//! client.

use gsee_client::{ClientError, GseeClient};
use gsee_core::config::RunConfig;

async fn client() -> GseeClient {
    let url = gsee_service::spawn_local().await.expect("bind loopback");
    GseeClient::new(url)
}

fn tfim_config() -> RunConfig {
    RunConfig::parse_str("model = tfim\nl_sites = 4\ng = 2.0\ngamma_i2 = 1e-2\ndelta_e = 1e-2\n")
        .unwrap()
}

#[tokio::test]
async fn server_binary_serves_requests() {
    // End-to-end against the standalone binary on an ephemeral port.
    let mut server = std::process::Command::new(env!("CARGO_BIN_EXE_gsee-server"))
        .args(["--addr", "127.0.0.1:0"])
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::null())
        .spawn()
        .expect("spawn gsee-server");
    let url = {
        use std::io::{BufRead, BufReader};
        let stdout = server.stdout.take().unwrap();
        let mut found = None;
        for line in BufReader::new(stdout).lines() {
            let line = line.unwrap();
            if let Some(idx) = line.find("http://") {
                found = Some(line[idx..].trim().to_owned());
                break;
            }
        }
        found.expect("server did not report its address")
    };
    let c = GseeClient::new(url);
    let health = c.health().await.unwrap();
    assert_eq!(health.status, "ok");
    let resp = c.estimate(&tfim_config()).await.unwrap();
    assert_eq!(resp.row.status, "ok");
    server.kill().ok();
    server.wait().ok();
}

#[tokio::test]
async fn health_reports_version() {
    let c = client().await;
    let health = c.health().await.unwrap();
    assert_eq!(health.status, "ok");
    assert_eq!(health.version, env!("CARGO_PKG_VERSION"));
}

#[tokio::test]
async fn estimate_round_trips_exact_tallies() {
    let c = client().await;
    let resp = c.estimate(&tfim_config()).await.unwrap();
    assert_eq!(resp.row.status, "ok");
    // Known tallies for L = 4: prep 10*rot(1e-2/9), sel 1152.
    let t_qpe = resp.row.t_qpe.as_ref().unwrap();
    assert_eq!(t_qpe.breakdown()["walk"].to_string(), {
        // 2^p * (prep + sel); p = 13 for alpha ~ 19.54 at delta_e = 1e-2.
        let t_h = 10 * gsee_core::cost::rotation_t_cost(1e-2 / 9.0).unwrap() + 1152;
        (t_h * (1 << 13)).to_string()
    });
    assert!(resp.detail.qpe_bits == Some(13));
    assert!(resp.row.iota.unwrap() > 1.0);
}

#[tokio::test]
async fn sweep_returns_grid_in_order_with_metadata() {
    let c = client().await;
    let mut config = tfim_config();
    config.l_sites = Some(vec![2, 4]);
    config.gamma_i2 = Some(vec![1e-3, 1e-2]);
    let resp = c.sweep(&config).await.unwrap();
    assert_eq!(resp.rows.len(), 4);
    assert_eq!(
        resp.rows
            .iter()
            .map(|r| (r.size_param, r.gamma_i2))
            .collect::<Vec<_>>(),
        vec![(2, 1e-3), (2, 1e-2), (4, 1e-3), (4, 1e-2)]
    );
    assert!(resp
        .metadata
        .iter()
        .any(|(k, v)| k == "gamma_f2" && v == "0.75"));
}

#[tokio::test]
async fn simulate_runs_the_grid() {
    let c = client().await;
    let config = RunConfig::parse_str(
        "model = tfim\nl_sites = 2\ng = 2.0\ngamma_f2 = 0.9\nn_iter = 4\nmode = random\nseed = 3\n",
    )
    .unwrap();
    let resp = c.simulate(&config).await.unwrap();
    assert_eq!(resp.rows.len(), 1);
    let row = &resp.rows[0];
    assert_eq!(row.status, "ok");
    assert_eq!(row.seed, Some(3));
    let result = row.result.as_ref().unwrap();
    assert_eq!(result.per_iteration_overlaps.len(), 5);
}

#[tokio::test]
async fn config_errors_map_to_config_kind() {
    let c = client().await;
    let mut config = tfim_config();
    config.g = Some(1.0); // gapless
    let err = c.estimate(&config).await.unwrap_err();
    match err {
        ClientError::Api { kind, message } => {
            assert_eq!(kind, "config");
            assert!(message.contains("gapless"), "{message}");
        }
        other => panic!("expected API error, got {other:?}"),
    }
}

#[tokio::test]
async fn infeasible_plans_map_to_infeasible_kind() {
    let c = client().await;
    let mut config = tfim_config();
    config.gamma_i2 = Some(vec![1e-4]);
    config.eps_rh = Some(10.0);
    let err = c.estimate(&config).await.unwrap_err();
    assert_eq!(err.kind(), "infeasible");
}

#[tokio::test]
async fn float_fidelity_survives_the_wire() {
    // The improvement ratio computed locally must equal the one that came
    // through JSON bit for bit.
    let c = client().await;
    let config = tfim_config();
    let resp = c.estimate(&config).await.unwrap();
    let req = config.to_sweep_request().unwrap();
    let (row, _) = gsee_core::improvement::estimate_point(&req).unwrap();
    assert_eq!(
        resp.row.iota.unwrap().to_bits(),
        row.iota.unwrap().to_bits()
    );
    assert_eq!(
        resp.row.epsilon.unwrap().to_bits(),
        row.epsilon.unwrap().to_bits()
    );
}
