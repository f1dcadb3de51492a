use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, info};

use rapprox::cli::{run, Params};
use rapprox::Error;

#[derive(Parser, Debug)]
#[command(name = "rapprox", version, about = "Heights, cones and approximation constants on rational surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Scenario file (JSON); flags given on the command line take precedence.
    #[arg(long, global = true)]
    scenario: Option<String>,
    /// Preset, e.g. blowup_p2:4, case2:3, simplefibres:3,2, cusp.
    #[arg(long, global = true)]
    preset: Option<String>,
    #[arg(long, global = true)]
    max_height: Option<i64>,
    /// Rational threshold c for dist * H <= c.
    #[arg(long, global = true)]
    threshold: Option<String>,
    /// Divisor class expression such as 3L-E1-E2. Repeatable.
    #[arg(long, global = true)]
    divisor: Vec<String>,
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gram matrix, classes and intersection table of a preset.
    Lattice,
    /// Cone operations on a preset: dual, nef, effective, contains, subdivide.
    Cones {
        #[arg(default_value = "dual", value_parser = ["dual", "nef", "effective", "contains", "subdivide"])]
        op: String,
        /// Catalog for subdivide, as label=class[:mult],...
        #[arg(long)]
        candidates: Option<String>,
    },
    /// Predicted approximation constant from a catalog of curves.
    Predict {
        /// label=class[:mult],...
        #[arg(long)]
        candidates: Option<String>,
        /// Report the subdivision of the nef cone instead of single divisors.
        #[arg(long)]
        over_cone: bool,
    },
    /// List or count rational points of bounded height.
    Enumerate {
        #[arg(long, default_value = "p1", value_parser = ["p1", "p2"])]
        space: String,
        #[arg(long)]
        count: bool,
        /// Report points with dist * H <= threshold near this point of P^2.
        #[arg(long)]
        near: Option<String>,
    },
    /// Empirical approximation exponent from the record frontier.
    Alpha {
        #[arg(long)]
        point: Option<String>,
        /// projective, chart0 or chart1.
        #[arg(long)]
        metric: Option<String>,
        /// a,b for the class aF + bS on a Hirzebruch surface.
        #[arg(long)]
        class: Option<String>,
        /// a,b for O(a, b) on P^1 x P^1.
        #[arg(long)]
        bidegree: Option<String>,
        #[arg(long)]
        grid_height: Option<i64>,
    },
    /// Run the exact fixture suites.
    Verify {
        #[arg(long, default_value = "fixtures")]
        suite: String,
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn flag_params(cli: Cli) -> Params {
    let c = cli.common;
    let mut p = Params {
        preset: c.preset,
        divisor: c.divisor,
        max_height: c.max_height,
        threshold: c.threshold,
        out: c.out,
        format: c.format,
        ..Default::default()
    };
    let task = match cli.command {
        None => None,
        Some(Command::Lattice) => Some("lattice"),
        Some(Command::Cones { op, candidates }) => {
            p.op = Some(op);
            p.candidates = candidates;
            Some("cones")
        }
        Some(Command::Predict { candidates, over_cone }) => {
            p.candidates = candidates;
            p.over_cone = over_cone;
            Some("predict")
        }
        Some(Command::Enumerate { space, count, near }) => {
            p.space = Some(space);
            p.count = count;
            p.near = near;
            Some("enumerate")
        }
        Some(Command::Alpha {
            point,
            metric,
            class,
            bidegree,
            grid_height,
        }) => {
            p.point = point;
            p.metric = metric;
            p.class = class;
            p.bidegree = bidegree;
            p.grid_height = grid_height;
            Some("alpha")
        }
        Some(Command::Verify { suite, samples }) => {
            p.suite = Some(suite);
            p.samples = samples;
            Some("verify")
        }
    };
    p.task = task.map(str::to_string);
    p
}

fn configure_threads() {
    if let Ok(v) = std::env::var("RAPPROX_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    error!("could not size the worker pool: {e}");
                }
            }
            _ => error!("ignoring RAPPROX_THREADS={v:?}"),
        }
    }
}

fn execute(cli: Cli) -> Result<bool, Error> {
    let scenario = cli.common.scenario.clone();
    let flags = flag_params(cli);
    let params = match scenario {
        Some(path) => {
            let text = fs::read_to_string(&path).map_err(|e| Error::Parse(format!("scenario {path}: {e}")))?;
            Params::from_scenario(&text)?.overlay(flags)
        }
        None => flags,
    };
    let format = params.format()?;
    info!("running task {:?}", params.task);
    let report = run(&params)?;
    let text = report.render(format)?;
    match &params.out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Error::Parse(format!("out {path}: {e}")))?;
            info!("wrote {path}");
        }
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    configure_threads();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            error!("one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
