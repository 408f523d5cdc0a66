//! `gsee`: estimate, sweep and simulate commands.
//!
//! The CLI is a client of the estimation service. By default it hosts the
//! service in-process on a loopback port; point `--server` at a running
//! `gsee-server` to share one instance instead. Exit codes: 0 on success,
//! 2 on configuration errors, 3 when a single-point estimate is infeasible.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gsee_client::{ClientError, GseeClient};
use gsee_core::config::RunConfig;
use gsee_core::csvout;
use gsee_core::improvement::{ModelKind, PointDetail, SweepRow};
use gsee_service::{sweep_metadata, EstimateResponse};

const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gsee",
    version,
    about = "T-count and logical-qubit estimation for \
ground-state energy estimation, with and without amplitude-amplified state preparation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Worst,
    Random,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Path to a `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output path; stdout when omitted (overrides the config's `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base URL of a running service; self-hosts on loopback when omitted.
    #[arg(long)]
    server: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Single-point resource estimate.
    Estimate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Parameter sweep; writes the sweep CSV.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Dense overlap-guarantee verification; writes the simulation CSV.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Reflector error mode (overrides the config's `mode`).
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// PRNG seed for random mode (overrides the config's `seed`).
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
    match runtime.block_on(run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

#[derive(Debug)]
struct CliError {
    message: String,
    code: u8,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        self.code
    }

    fn config(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_CONFIG,
        }
    }

    fn io(message: String) -> Self {
        CliError { message, code: 1 }
    }
}

impl From<ClientError> for CliError {
    fn from(err: ClientError) -> Self {
        let code = match err.kind() {
            "config" => EXIT_CONFIG,
            "infeasible" => EXIT_INFEASIBLE,
            _ => 1,
        };
        CliError {
            message: err.to_string(),
            code,
        }
    }
}

async fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Estimate { common } => {
            let (config, client) = prepare(&common).await?;
            let resp = client.estimate(&config).await?;
            print_estimate(&resp);
            let req = config
                .to_sweep_request()
                .map_err(|e| CliError::config(e.to_string()))?;
            let csv =
                csvout::render_sweep_csv(&sweep_metadata(&req), std::slice::from_ref(&resp.row));
            emit(&common, &config, csv, "machine row")?;
            Ok(())
        }
        Command::Sweep { common } => {
            let (config, client) = prepare(&common).await?;
            let resp = client.sweep(&config).await?;
            let csv = csvout::render_sweep_csv(&resp.metadata, &resp.rows);
            emit(&common, &config, csv, "sweep")?;
            Ok(())
        }
        Command::Simulate { common, mode, seed } => {
            let (mut config, client) = prepare(&common).await?;
            if let Some(mode) = mode {
                config.mode = Some(
                    match mode {
                        ModeArg::Worst => "worst",
                        ModeArg::Random => "random",
                    }
                    .to_owned(),
                );
            }
            if let Some(seed) = seed {
                config.seed = Some(seed);
            }
            let resp = client.simulate(&config).await?;
            let csv = csvout::render_sim_csv(&resp.metadata, &resp.rows);
            emit(&common, &config, csv, "simulation")?;
            Ok(())
        }
    }
}

async fn prepare(common: &CommonArgs) -> Result<(RunConfig, GseeClient), CliError> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", common.config.display())))?;
    let config = RunConfig::parse_str(&text).map_err(|e| CliError::config(e.to_string()))?;
    let base_url = match &common.server {
        Some(url) => url.clone(),
        None => gsee_service::spawn_local()
            .await
            .map_err(|e| CliError::io(format!("cannot start local service: {e}")))?,
    };
    Ok((config, GseeClient::new(base_url)))
}

/// Output path precedence: --out flag, then the config's `out` key, then
/// stdout.
fn emit(common: &CommonArgs, config: &RunConfig, csv: String, what: &str) -> Result<(), CliError> {
    let path = common
        .out
        .clone()
        .or_else(|| config.out.as_ref().map(PathBuf::from));
    match path {
        Some(path) => {
            std::fs::write(&path, csv)
                .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {what} to {}", path.display());
            Ok(())
        }
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref()
        .map(|x| x.to_string())
        .unwrap_or_else(|| "-".into())
}

fn print_estimate(resp: &EstimateResponse) {
    let row: &SweepRow = &resp.row;
    let detail: &PointDetail = &resp.detail;
    let size_label = match row.model {
        ModelKind::Tfim => "l_sites",
        ModelKind::Firstquant => "n_planewaves",
    };
    println!("model                 {}", row.model.as_str());
    println!("{size_label:<21} {}", row.size_param);
    if let Some(n) = detail.n_requested {
        println!("n_requested           {n} (rounded to the nearest odd cube)");
    }
    println!("gamma_i^2             {}", row.gamma_i2);
    println!("gamma_f^2             {}", row.gamma_f2);
    println!("delta_e               {}", row.delta_e);
    println!("mu                    {}", detail.mu);
    println!("gap                   {}", detail.gap);
    println!("alpha + |mu|          {}", detail.alpha_shifted);
    println!("n_iter                {}", fmt_opt(&row.n_iter));
    println!("n_phi                 {}", fmt_opt(&row.n_phi));
    println!("eps0                  {}", fmt_opt(&detail.eps0));
    println!("epsilon (adjusted)    {}", fmt_opt(&row.epsilon));
    println!("delta (QSP width)     {}", fmt_opt(&row.delta));
    println!("eps_RH                {}", fmt_opt(&detail.eps_rh));
    println!("eps_RP                {}", fmt_opt(&detail.eps_rp));
    for (name, count) in [
        ("T_prep", &row.t_prep),
        ("T_QPE", &row.t_qpe),
        ("T_AA", &row.t_aa),
    ] {
        match count {
            Some(t) => {
                let parts: Vec<String> = t
                    .breakdown()
                    .iter()
                    .map(|(k, v)| format!("{k}: {v}"))
                    .collect();
                if parts.is_empty() {
                    println!("{name:<21} {}", t.total());
                } else {
                    println!("{name:<21} {} ({})", t.total(), parts.join(", "));
                }
            }
            None => println!("{name:<21} -"),
        }
    }
    println!("qpe_bits              {}", fmt_opt(&detail.qpe_bits));
    if let Some((total, antisym, other)) = detail.qubit_split {
        println!("qubits (encoding)     {total} = {antisym} antisym + {other} other");
    }
    println!("qubits_total          {}", fmt_opt(&row.qubits_total));
    if let Some(iters) = detail.binary_search_iterations {
        println!("binary_search_rounds  {iters} (classical repetitions, not in T counts)");
    }
    println!("iota                  {}", fmt_opt(&row.iota));
    println!("iota_asym             {}", fmt_opt(&row.iota_asym));
    println!("status                {}", row.status);
    println!();
}
