use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hweno::harness::{
    compare_to_reference, exact_averages, norms, parse_key_values, read_snapshot, run_convergence,
    run_problem, write_atomic, write_run, ProblemId, RunConfig,
};
use hweno::Result;

/// Hybrid Hermite WENO solver.
#[derive(Parser)]
#[command(name = "hweno", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error table over a sequence of meshes.
    Converge(Opts),
    /// Run one problem and write the snapshot and flag history.
    Run(Opts),
    /// Compare a snapshot with a finer reference snapshot.
    Compare {
        solution: PathBuf,
        reference: PathBuf,
        /// Variable index (0 = density or u).
        #[arg(long, default_value_t = 0)]
        var: usize,
    },
    /// List the registered problems.
    ListProblems,
}

/// Flags override values read from `--config`.
#[derive(Args)]
struct Opts {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    /// N or NXxNY.
    #[arg(long)]
    cells: Option<String>,
    /// Comma-separated cell counts along x.
    #[arg(long)]
    meshes: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    /// new-hybrid, new-hweno or linear.
    #[arg(long)]
    mode: Option<String>,
    /// default, uniform or random.
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    threshold: Option<String>,
    /// Power of the cell circumradius in the indicator normalization.
    #[arg(long)]
    exponent: Option<String>,
    /// accuracy or production.
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    threads: Option<String>,
}

impl Opts {
    fn resolve(&self) -> Result<RunConfig> {
        let mut pairs = match &self.config {
            Some(p) => parse_key_values(&std::fs::read_to_string(p)?)?,
            None => Vec::new(),
        };
        let flags = [
            ("problem", &self.problem),
            ("cells", &self.cells),
            ("meshes", &self.meshes),
            ("t_end", &self.t_end),
            ("mode", &self.mode),
            ("gamma", &self.gamma),
            ("seed", &self.seed),
            ("cfl", &self.cfl),
            ("threshold", &self.threshold),
            ("exponent", &self.exponent),
            ("dt", &self.dt),
            ("output", &self.output),
            ("threads", &self.threads),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                pairs.push((k.to_string(), v.clone()));
            }
        }
        RunConfig::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))
    }
}

fn init_threads(cfg: &RunConfig) {
    let n = cfg.threads.or_else(|| {
        std::env::var("HWENO_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(n) = n {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn converge(opts: &Opts) -> Result<()> {
    let cfg = opts.resolve()?;
    init_threads(&cfg);
    let id = cfg.problem()?;
    let meshes = if cfg.meshes.is_empty() {
        vec![40, 80, 120, 160, 200, 240]
    } else {
        cfg.meshes.clone()
    };
    let report = run_convergence(id, &meshes, cfg.scheme, cfg.accuracy_dt.unwrap_or(true))?;
    let table = report.table();
    print!("{table}");
    write_atomic(
        &cfg.output.join(format!("{}_convergence.txt", id.name())),
        &table,
    )
}

fn run(opts: &Opts) -> Result<()> {
    let cfg = opts.resolve()?;
    init_threads(&cfg);
    let id = cfg.problem()?;
    let mut scheme = cfg.scheme;
    if cfg.accuracy_dt == Some(true) {
        return Err(hweno::HwenoError::config(
            "accuracy time steps are for convergence studies",
        ));
    }
    scheme.dt_mode = Default::default();
    let mesh = cfg.mesh_for(id);
    let out = run_problem(id, mesh, scheme, cfg.t_end)?;
    let files = write_run(&cfg.output, id, &out.snapshot, &out.summary)?;
    println!(
        "problem {} on {} cells: {} steps to t = {} in {:.2} s",
        id.name(),
        mesh,
        out.summary.steps,
        out.summary.t_final,
        out.seconds
    );
    println!(
        "mean flagged fraction {:.4}",
        out.summary.mean_flag_fraction()
    );
    let st = out.summary.stats;
    if st.min_density.is_finite() {
        println!(
            "min density {:e}, min pressure {:e} at quadrature points",
            st.min_density, st.min_pressure
        );
        println!(
            "min density {:e}, min pressure {:e} at interface points",
            st.min_interface_density, st.min_interface_pressure
        );
    }
    if let Some(ex) = exact_averages(id, &out.snapshot.geometry, out.snapshot.t) {
        let n = norms(&out.snapshot.u[0], &ex, None)?;
        println!("error vs exact: L1 {:e}, Linf {:e}", n.l1, n.linf);
    }
    if let Some(r) = &cfg.reference {
        let n = compare_to_reference(&out.snapshot, &read_snapshot(r)?, 0)?;
        println!("error vs reference: L1 {:e}, Linf {:e}", n.l1, n.linf);
    }
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Converge(o) => converge(o),
        Command::Run(o) => run(o),
        Command::Compare {
            solution,
            reference,
            var,
        } => (|| {
            let n =
                compare_to_reference(&read_snapshot(solution)?, &read_snapshot(reference)?, *var)?;
            println!("L1 {:e}\nLinf {:e}", n.l1, n.linf);
            Ok(())
        })(),
        Command::ListProblems => {
            for id in ProblemId::ALL {
                let i = id.info();
                println!(
                    "{:<16} {}D  T = {:<8.4} {:>8}  {}",
                    i.name,
                    i.dim,
                    i.t_end,
                    i.default_mesh.to_string(),
                    i.summary
                );
            }
            Ok(())
        }
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
