//! `gmlife`: Gompertz-Makeham commutation and annuity tables.

mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gmlife_core::{GmParams, Rate};

use table::{Format, TableSpec, MAX_ROWS};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Tabulate survival, mortality, commutation functions, continuous annuity
/// values and expected remaining lifetime under μ(x) = α + β e^{γx}.
#[derive(Debug, Parser)]
#[command(name = "gmlife", version, allow_negative_numbers = true)]
struct Cli {
    /// Age-independent hazard α (≥ 0)
    #[arg(long)]
    alpha: f64,
    /// Gompertz level β (≥ 0)
    #[arg(long)]
    beta: f64,
    /// Gompertz slope γ (> 0 when β > 0)
    #[arg(long)]
    gamma: f64,
    /// Force of interest δ (≥ 0)
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 0.0)]
    x_min: f64,
    #[arg(long, default_value_t = 100.0)]
    x_max: f64,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Add D2, N2, M2 at force 2δ
    #[arg(long)]
    double_rate: bool,
    /// Compare a_bar and M against quadrature; exit 4 if any relative
    /// difference exceeds --verify-tol
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = 1e-7)]
    verify_tol: f64,
    /// Add ageing_factor and shape columns
    #[arg(long)]
    diagnostics: bool,
    /// Seed for the Monte-Carlo column in verify mode
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn validate(cli: Cli) -> Result<TableSpec, String> {
    let params = GmParams::new(cli.alpha, cli.beta, cli.gamma).map_err(|e| e.to_string())?;
    let delta = Rate::new(cli.delta).map_err(|e| e.to_string())?;
    if !(cli.x_min.is_finite() && cli.x_min >= 0.0) {
        return Err(format!("--x-min must be finite and ≥ 0, got {}", cli.x_min));
    }
    if !(cli.x_max.is_finite() && cli.x_max >= cli.x_min) {
        return Err(format!(
            "--x-max must be finite and ≥ --x-min, got {}",
            cli.x_max
        ));
    }
    if !(cli.step.is_finite() && cli.step > 0.0) {
        return Err(format!("--step must be finite and > 0, got {}", cli.step));
    }
    if !(cli.verify_tol.is_finite() && cli.verify_tol > 0.0) {
        return Err(format!(
            "--verify-tol must be finite and > 0, got {}",
            cli.verify_tol
        ));
    }
    let span = ((cli.x_max - cli.x_min) / cli.step + 1e-9).floor();
    if span >= MAX_ROWS as f64 {
        return Err(format!("age grid exceeds {MAX_ROWS} rows"));
    }
    Ok(TableSpec {
        params,
        delta,
        x_min: cli.x_min,
        step: cli.step,
        rows: span as usize + 1,
        format: match cli.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        },
        double_rate: cli.double_rate,
        verify: cli.verify,
        verify_tol: cli.verify_tol,
        diagnostics: cli.diagnostics,
        seed: cli.seed,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let msg = e.to_string();
            eprintln!(
                "gmlife: {}",
                msg.lines().next().unwrap_or("invalid arguments")
            );
            return ExitCode::from(2);
        }
        Err(e) => e.exit(),
    };
    let spec = match validate(cli) {
        Ok(spec) => spec,
        Err(msg) => {
            eprintln!("gmlife: {msg}");
            return ExitCode::from(2);
        }
    };
    let rows = match table::compute(&spec) {
        Ok(rows) => rows,
        Err(f) => {
            eprintln!("gmlife: numerical failure at x = {}: {}", f.x, f.error);
            return ExitCode::from(3);
        }
    };
    let out = match spec.format {
        Format::Csv => table::render_csv(&spec, &rows),
        Format::Json => table::render_json(&spec, &rows),
    };
    if std::io::stdout().lock().write_all(out.as_bytes()).is_err() {
        return ExitCode::FAILURE;
    }
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| r.verify_failed)
        .map(|r| r.x.to_string())
        .collect();
    if !failed.is_empty() {
        eprintln!(
            "gmlife: verification exceeded tolerance {} at x = {}",
            spec.verify_tol,
            failed.join(", ")
        );
        return ExitCode::from(4);
    }
    ExitCode::SUCCESS
}
