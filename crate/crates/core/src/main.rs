use clap::{Args, Parser, Subcommand};
use lpsub::experiments::{
    run_identity_table, scan_ells, write_identity_csv, Experiment, ExperimentConfig,
};
use lpsub::geometry::{Dim, ShapeSpec};
use lpsub::{Error, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lpsub",
    version,
    about = "Close evaluation of layer potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Residual table of the layer potential identity.
    Identity(Common),
    /// Solve the boundary equation and write the density.
    Solve(Common),
    /// Error field on a grid.
    Field(Common),
    /// Errors along the normal at one boundary point.
    Scan(Common),
    /// Maximum near-boundary error against the wavenumber.
    Ksweep(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    shape: Option<String>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    k: Option<f64>,
    /// Comma-separated coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,
    /// Comma-separated methods and backends.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut c = ExperimentConfig::load(&self.config)?;
        if let Some(s) = &self.shape {
            c.shape = s.clone();
        }
        if let Some(n) = self.n {
            c.n = n;
        }
        if let Some(k) = self.k {
            c.k = Some(k);
        }
        if let Some(x0) = &self.x0 {
            c.x0 = Some(x0.clone());
        }
        if let Some(m) = &self.methods {
            c.methods = m.clone();
        }
        if let Some(o) = &self.out {
            c.out = Some(o.clone());
        }
        Ok(c)
    }
}

fn out_path(config: &ExperimentConfig, default: &str) -> PathBuf {
    config.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Identity(a) => {
            let c = a.load()?;
            let boundary = c.shape.parse::<ShapeSpec>()?.0;
            let mut ns = c.identity.ns.clone();
            if let Some(n) = a.n {
                ns = vec![n];
            }
            let k = c.k.unwrap_or(match boundary.dim() {
                Dim::Two => 5.0,
                Dim::Three => 2.0,
            });
            let rows = run_identity_table(&boundary, c.identity.family, &ns, k, c.seed)?;
            let out = out_path(&c, "identity.csv");
            write_identity_csv(&rows, &out)?;
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::Solve(a) => {
            let c = a.load()?;
            let exp = Experiment::prepare(&c)?;
            let out = out_path(&c, "density.json");
            let many = exp.densities.len() > 1;
            for (b, d) in &exp.densities {
                let path = if many {
                    out.with_file_name(format!(
                        "{}.{b}.json",
                        out.file_stem()
                            .and_then(|s| s.to_str())
                            .unwrap_or("density")
                    ))
                } else {
                    out.clone()
                };
                let side = d.to_sidecar();
                side.write_json(&path)?;
                side.write_csv(&sibling(&path, "csv"))?;
                let r = d.report();
                eprintln!(
                    "{b}: residual {:e}, condition {:e} -> {}",
                    r.residual,
                    r.condition,
                    path.display()
                );
                for w in &r.warnings {
                    eprintln!("warning: {w}");
                }
            }
        }
        Command::Field(a) => {
            let c = a.load()?;
            let rep = Experiment::prepare(&c)?.field(&c.grid)?;
            let out = out_path(&c, "field.csv");
            rep.write_field_csv(&out)?;
            rep.write_meta(&sibling(&out, "meta.json"))?;
            eprintln!("wrote {} rows to {}", rep.rows.len(), out.display());
        }
        Command::Scan(a) => {
            let c = a.load()?;
            let exp = Experiment::prepare(&c)?;
            let xstar = exp.anchor(&c.scan)?;
            let rep = exp.scan(&xstar, &scan_ells(&c.scan)?)?;
            let out = out_path(&c, "scan.csv");
            rep.write_scan_csv(&out)?;
            rep.write_meta(&sibling(&out, "meta.json"))?;
            eprintln!("wrote {} rows to {}", rep.rows.len(), out.display());
        }
        Command::Ksweep(a) => {
            let c = a.load()?;
            let rep = lpsub::experiments::run_k_sweep(&c, &c.ksweep)?;
            let out = out_path(&c, "ksweep.csv");
            rep.write_csv(&out)?;
            eprintln!("wrote {} rows to {}", rep.ks.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) | Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
