use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ellhyp::integral_identities::QuadCtx;
use ellhyp::sci_index::{parse_theory, seiberg_pair};
use ellhyp::special_core::GMethod;
use ellhyp::C64;
use ellhyp_cli::eval::{run_eval, EvalError, EvalOptions};
use ellhyp_cli::output::{to_json, write_csv, write_text};
use ellhyp_cli::parse::{hoist_flags, parse_complex};
use ellhyp_cli::registry::REGISTRY;
use ellhyp_cli::run::RayonExec;
use ellhyp_cli::{all_pass, run_verify, RunConfig};

#[derive(Parser)]
#[command(name = "ellhyp", version, about = "Check elliptic hypergeometric identities numerically")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Bases {
    /// Elliptic nome, as re+imi.
    #[arg(long, default_value = "0.3", value_parser = parse_complex, allow_hyphen_values = true)]
    p: C64,
    /// Second nome, same format.
    #[arg(long, default_value = "0.35", value_parser = parse_complex, allow_hyphen_values = true)]
    q: C64,
    /// Node cap per torus dimension.
    #[arg(long)]
    max_nodes: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an identity id, a comma-separated list, `all` or `quick`.
    Verify {
        target: String,
        #[command(flatten)]
        bases: Bases,
        /// Overrides every per-identity tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides every per-identity draw count.
        #[arg(long)]
        draws: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Skip identities that need two-dimensional quadrature.
        #[arg(long)]
        quick: bool,
        /// Draw |p|, |q| in [0.05, 0.4) per draw instead of --p/--q.
        #[arg(long)]
        random_bases: bool,
        /// Leave runtimes out of the JSON file.
        #[arg(long)]
        no_runtime: bool,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// List identity ids with their defaults.
    List,
    /// Evaluate one function.
    Eval {
        function: String,
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
        #[command(flatten)]
        bases: Bases,
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Flavor point for `index`: blocks separated by ';', values by ','.
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Parse a theory file and print its canonical form.
    Theory {
        file: Option<PathBuf>,
        /// Print the electric and magnetic SQCD pair N,M instead.
        #[arg(long, value_parser = parse_pair)]
        seiberg: Option<(usize, usize)>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Product,
    Bernoulli,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected N,M")?;
    Ok((a.trim().parse().map_err(|_| "bad N")?, b.trim().parse().map_err(|_| "bad M")?))
}

fn write_file(path: &PathBuf, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), String> {
    let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| format!("{}: {e}", path.display()))
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let mut argv: Vec<String> = std::env::args().collect();
    if argv.get(1).map(String::as_str) == Some("eval") {
        argv = hoist_flags(argv, 2, &["--p", "--q", "--max-nodes", "--method", "--y", "--json"]);
    }
    let cli = Cli::parse_from(argv);
    match cli.cmd {
        Cmd::Verify { target, bases, tol, seed, draws, json, csv, quick, random_bases, no_runtime, threads } => {
            let cfg = RunConfig {
                p: bases.p,
                q: bases.q,
                random_bases,
                tol,
                max_nodes: bases.max_nodes,
                seed,
                draws,
                quick,
                threads,
            };
            let records = match run_verify(&target, &cfg) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            if let Err(e) = write_text(io::stdout().lock(), &records) {
                return usage_error(e);
            }
            if let Some(path) = json {
                if let Err(e) = write_file(&path, |w| w.write_all(to_json(&records, !no_runtime).as_bytes())) {
                    return usage_error(e);
                }
            }
            if let Some(path) = csv {
                if let Err(e) = write_file(&path, |w| write_csv(w, &records)) {
                    return usage_error(e);
                }
            }
            if all_pass(&records) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Cmd::List => {
            for e in REGISTRY {
                println!("{:<18} {:<6} dim {}  draws {:>3}  tol {:.0e}", e.id, e.class.name(), e.dim, e.draws, e.tol);
            }
            ExitCode::SUCCESS
        }
        Cmd::Eval { function, args, bases, method, y, json } => {
            let b = match ellhyp::BasePair::new(bases.p, bases.q) {
                Ok(b) => b,
                Err(e) => return usage_error(e),
            };
            let exec = RayonExec;
            let mut ctx = QuadCtx::with_exec(&exec);
            if let Some(n) = bases.max_nodes {
                ctx.max_nodes = [n; 3];
            }
            let method = method.map(|m| match m {
                Method::Product => GMethod::ProductForm,
                Method::Bernoulli => GMethod::BernoulliForm,
            });
            let opts = EvalOptions { bases: b, method, flavor: y.as_deref(), ctx };
            match run_eval(&function, &args, &opts) {
                Ok(v) => {
                    println!("{v}");
                    if let Some(path) = json {
                        let text = serde_json::to_string_pretty(&v).expect("plain data serializes");
                        if let Err(e) = write_file(&path, |w| writeln!(w, "{text}")) {
                            return usage_error(e);
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e @ EvalError::Usage(_)) => usage_error(e),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Cmd::Theory { file, seiberg } => match (file, seiberg) {
            (Some(path), None) => {
                let text = match std::fs::read_to_string(&path) {
                    Ok(t) => t,
                    Err(e) => return usage_error(format!("{}: {e}", path.display())),
                };
                match parse_theory(&text) {
                    Ok(spec) => {
                        print!("{spec}");
                        println!("# rank {}, {} chiral fields", spec.rank(), spec.chirals().count());
                        ExitCode::SUCCESS
                    }
                    Err(e) => usage_error(format!("{}: {e}", path.display())),
                }
            }
            (None, Some((n, m))) => match seiberg_pair(n, m) {
                Ok((el, mag)) => {
                    print!("{el}\n{mag}");
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(e),
            },
            _ => usage_error("theory takes a file or --seiberg N,M"),
        },
    }
}
