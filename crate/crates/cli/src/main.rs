//! `toda`: command-line front end for the blow-up computations in `toda-core`.
//!
//! Exit status: 0 on success, 1 for invalid input, 2 when a computation fails
//! (including a `verify` run with failing checks).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toda_core::affine::AFFINE_ELEMENT_CAP;
use toda_core::cache::{GroupCache, ENV_VAR};
use toda_core::numtoda::OdeControls;
use toda_core::verify::Scope;
use toda_core::weyl::DEFAULT_GROUP_CAP;
use toda_core::{Error, LieType, SignVector};

use commands::{CacheAction, Context, Experiment, OdeArgs};
use output::{emit, Format, Output};

#[derive(Debug, Parser)]
#[command(name = "toda", version, about = "Blow-ups of Toda lattices: sign dynamics, p(q), graphs, tau-functions, numerics")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Output format: json, csv, dot or text.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory of the Weyl group cache.
    #[arg(long, global = true, env = ENV_VAR)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest Weyl group to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
}

#[derive(Debug, Args)]
struct TypeSign {
    /// Cartan type, e.g. B3, G2, A2^(1).
    #[arg(long = "type", short = 't')]
    ty: String,
    /// Signs of a_i(0) as a string of + and -, one per node (default all -).
    #[arg(long, short = 's', allow_hyphen_values = true)]
    sign: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The blow-up polynomial p_eps(q) and its closed form.
    Pq(TypeSign),
    /// eta(w, eps) and the transported sign for every Weyl group element.
    Eta(TypeSign),
    /// The incidence graph of blow-up points.
    Graph(TypeSign),
    /// Schur-polynomial tau-functions and the real-root experiment.
    Schur {
        #[arg(long = "type", short = 't')]
        ty: String,
        #[arg(long, value_enum)]
        experiment: Option<ExperimentArg>,
        /// Number of random slices for the experiment.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Also fit the Hirota bilinear constants.
        #[arg(long)]
        hirota: bool,
    },
    /// Truncated series for affine A_l^(1).
    Affine {
        #[command(flatten)]
        ts: TypeSign,
        /// Largest length summed over.
        #[arg(long, default_value_t = 12)]
        lmax: usize,
        /// Largest number of affine elements to enumerate.
        #[arg(long, default_value_t = AFFINE_ELEMENT_CAP)]
        cap: usize,
    },
    /// Integrate the Toda equations from initial a(0), b(0).
    Ode {
        #[arg(long = "type", short = 't')]
        ty: String,
        /// Comma-separated a_i(0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        a: Vec<f64>,
        /// Comma-separated b_i(0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        b: Vec<f64>,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-10)]
        rtol: f64,
        #[arg(long, default_value_t = 1e-10)]
        atol: f64,
        /// |a_i| beyond this counts as a blow-up.
        #[arg(long, default_value_t = 1e8)]
        blowup_threshold: f64,
        #[arg(long, default_value_t = 200_000)]
        max_steps: u32,
        /// Type A: count tau zero-crossings on [-W, W] and compare with eta.
        #[arg(long, value_name = "W")]
        tau_window: Option<f64>,
    },
    /// |K(F_q)| = q^r p(q), optionally checked by brute force.
    Chevalley {
        #[arg(long = "type", short = 't')]
        ty: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        brute_force: bool,
    },
    /// Run the acceptance matrix.
    Verify {
        /// fast or full.
        #[arg(long, default_value = "fast")]
        scope: String,
    },
    /// Inspect or empty the Weyl group cache.
    Cache {
        #[arg(value_enum)]
        action: CacheArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExperimentArg {
    RealRoots,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CacheArg {
    List,
    Clear,
}

fn parse_type(s: &str) -> toda_core::Result<LieType> {
    s.parse()
}

fn parse_sign(s: Option<&str>) -> toda_core::Result<Option<SignVector>> {
    s.map(str::parse).transpose()
}

fn dispatch(cli: &Cli) -> toda_core::Result<Output> {
    let g = &cli.global;
    let ctx = Context { cache: g.cache_dir.clone().map(GroupCache::new), group_cap: g.group_cap, seed: g.seed };
    match &cli.command {
        Command::Pq(ts) => commands::pq(&ctx, parse_type(&ts.ty)?, parse_sign(ts.sign.as_deref())?.as_ref()),
        Command::Eta(ts) => commands::eta(&ctx, parse_type(&ts.ty)?, parse_sign(ts.sign.as_deref())?.as_ref()),
        Command::Graph(ts) => commands::graph(&ctx, parse_type(&ts.ty)?, parse_sign(ts.sign.as_deref())?.as_ref()),
        Command::Schur { ty, experiment, samples, hirota } => {
            let experiment = experiment.map(|ExperimentArg::RealRoots| Experiment::RealRoots);
            commands::schur(&ctx, parse_type(ty)?, experiment, *samples, *hirota)
        }
        Command::Affine { ts, lmax, cap } => commands::affine(parse_type(&ts.ty)?, parse_sign(ts.sign.as_deref())?.as_ref(), *lmax, *cap),
        Command::Ode { ty, a, b, t_min, t_max, rtol, atol, blowup_threshold, max_steps, tau_window } => {
            let controls = OdeControls { rtol: *rtol, atol: *atol, blowup_threshold: *blowup_threshold, max_steps: *max_steps };
            let args = OdeArgs { a: a.clone(), b: b.clone(), t_min: *t_min, t_max: *t_max, controls, tau_window: *tau_window };
            commands::ode(parse_type(ty)?, &args)
        }
        Command::Chevalley { ty, q, brute_force } => commands::chevalley(parse_type(ty)?, *q, *brute_force),
        Command::Verify { scope } => Ok(commands::verify(scope.parse::<Scope>()?)),
        Command::Cache { action } => {
            let action = match action {
                CacheArg::List => CacheAction::List,
                CacheArg::Clear => CacheAction::Clear,
            };
            commands::cache(ctx.cache.as_ref(), action)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_validation() {
        1
    } else {
        2
    }
}

fn report_error(e: &Error, format: Format) -> ExitCode {
    if format == Format::Json {
        let doc = serde_json::json!({
            "schema_version": output::SCHEMA_VERSION,
            "error": { "code": e.code(), "message": e.to_string() },
        });
        eprintln!("{doc}");
    } else {
        eprintln!("error[{}]: {e}", e.code());
    }
    ExitCode::from(exit_code(e))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return report_error(&Error::InvalidArgument("--threads must be at least 1".into()), cli.global.format);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool already configured: {e}");
        }
    }
    let format = cli.global.format;
    let result = dispatch(&cli).and_then(|out| {
        let rendered = out.render(format)?;
        emit(&rendered, cli.global.out.as_deref())?;
        Ok(out)
    });
    match result {
        Ok(out) if commands::all_passed(&out) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(2),
        Err(e) => report_error(&e, format),
    }
}
