use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skeps::grid::{grid_from_json, grid_to_json};
use skeps::hive::{enumerate_hives, lr_via_hives};
use skeps::lattice::{covers, pi_decompose, pi_enumerate};
use skeps::lconvex::Window;
use skeps::octahedron::{hive_flip, hive_to_skep, propagate, skep_flip, skep_to_hive, SliceKind};
use skeps::oracle::{lr_tableaux, SchurMode};
use skeps::skep::{enumerate_gplus, enumerate_skeps, lr_via_skeps, lr_via_sum, skep_ext};
use skeps::vector::{partitions_in_box, partitions_of};
use skeps::verify::{self, VerifyReport};
use skeps::{Hive, IntVec, Partition, PlusGrid, Skep, TriGrid};

#[derive(Parser)]
#[command(
    name = "skeps",
    version,
    about = "Littlewood-Richardson coefficients via skeps and hives"
)]
struct Cli {
    /// Output format for results that are not files.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Worker threads for sweeps (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one Littlewood-Richardson coefficient.
    Lr {
        #[command(flatten)]
        triple: Triple,
        #[arg(long, value_enum, default_value_t = Model::Skep)]
        model: Model,
    },
    /// List every hive or skep with the given boundary.
    Enumerate {
        #[arg(value_enum)]
        kind: GridKind,
        #[command(flatten)]
        triple: Triple,
        /// Write the JSON list here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count the minus halves extending a plus half with the first boundary fixed.
    Skepext {
        #[arg(long)]
        gplus: PathBuf,
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        lam: IntVec,
    },
    /// Octahedron recurrence bijections on grid files.
    Oct {
        #[arg(value_enum)]
        action: OctAction,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Whether `flip` acts on a hive or a skep.
        #[arg(long, value_enum, default_value_t = GridKind::Hives)]
        kind: GridKind,
        /// The slice the input occupies, for `propagate`.
        #[arg(long, default_value = "hive_bottom")]
        from: SliceKind,
    },
    /// Describe or list the classes of the parallelepiped spanned by two vectors.
    Pi {
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        x: IntVec,
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        y: IntVec,
        #[arg(long)]
        enumerate: bool,
    },
    /// The generated covers below a pair.
    Covers {
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        lam: IntVec,
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        mu: IntVec,
    },
    /// Run a verification campaign. Exits 1 if any check fails.
    Verify {
        #[command(subcommand)]
        campaign: Campaign,
    },
}

#[derive(Args)]
struct Triple {
    #[arg(long, value_parser = parse_partition)]
    lam: Partition,
    #[arg(long, value_parser = parse_partition)]
    mu: Partition,
    #[arg(long, value_parser = parse_partition)]
    nu: Partition,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Hive,
    Skep,
    Sum,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridKind {
    Hives,
    Skeps,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OctAction {
    Hive2skep,
    Skep2hive,
    Flip,
    Propagate,
}

#[derive(Args)]
struct WindowArgs {
    /// Lower corner of the window (defaults to zeros).
    #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
    lo: Option<IntVec>,
    /// Upper corner of the window (defaults to the largest entry of the plus boundary).
    #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
    hi: Option<IntVec>,
}

#[derive(Args)]
struct Sweep {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    max_entry: i64,
}

#[derive(Subcommand)]
enum Campaign {
    /// One coefficient comparison between a pair and a partner pair.
    Lpp {
        #[arg(long, value_parser = parse_partition)]
        lam: Partition,
        #[arg(long, value_parser = parse_partition)]
        mu: Partition,
        #[arg(long, value_parser = parse_partition)]
        lam2: Partition,
        #[arg(long, value_parser = parse_partition)]
        mu2: Partition,
        /// Also check every coefficient against the tableau count.
        #[arg(long)]
        oracle: bool,
    },
    /// Coefficient comparisons over every pair in a box.
    SweepLpp(Sweep),
    /// Extension counts at a pair and at a partner.
    BetterLpp {
        #[arg(long)]
        gplus: PathBuf,
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        lam: IntVec,
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        lam2: IntVec,
    },
    /// Symmetry of extension counts and the flip bijection over a window.
    Commutative {
        #[arg(long)]
        gplus: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// L-log-concavity of extension counts over a window.
    SkepextLlc {
        /// A plus half to check. Without it, plus halves are sampled from a sweep.
        #[arg(long)]
        gplus: Option<PathBuf>,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_entry: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every pair strictly below lies below a generated cover.
    Covers {
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        lam: IntVec,
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        mu: IntVec,
    },
    /// Hive, skep, summed and tableau counts agree on a box.
    Counts(Sweep),
    /// A Schur-valued condition on the built-in example (1S, 2S, 3S or 4S).
    SchurExample {
        #[arg(long)]
        mode: SchurMode,
    },
    /// Evidence on whether coefficients along a sum line are L-log-concave. Never fails.
    ProbeQuestion {
        #[arg(long, value_parser = parse_partition)]
        pi: Partition,
        #[arg(long, value_parser = parse_partition)]
        nu: Partition,
        #[command(flatten)]
        window: WindowArgs,
    },
}

fn parse_vec(s: &str) -> Result<IntVec, String> {
    s.parse::<IntVec>().map_err(|e| e.to_string())
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    Partition::new(parse_vec(s)?.into_inner()).map_err(|e| e.to_string())
}

fn read_grid(path: &Path) -> Result<TriGrid> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    grid_from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Accepts a plus half on its own or a full grid whose plus half is used.
fn read_gplus(path: &Path) -> Result<PlusGrid> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(gp) = serde_json::from_str::<PlusGrid>(&text) {
        return Ok(gp);
    }
    let grid = grid_from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(grid.split().0)
}

fn emit_file(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn window_for(pi: &IntVec, args: &WindowArgs) -> Result<Window> {
    let n = pi.len();
    let top = pi.iter().copied().max().unwrap_or(0);
    let lo = args.lo.clone().unwrap_or_else(|| IntVec::zeros(n));
    let hi = args.hi.clone().unwrap_or_else(|| IntVec(vec![top; n]));
    if lo.len() != n || hi.len() != n {
        bail!("window corners must have length {n}");
    }
    Ok(Window::new(lo, hi)?)
}

fn join(v: &[i64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

enum Outcome {
    Done,
    Violation,
}

fn run(cli: Cli) -> Result<Outcome> {
    let mut stdout = io::stdout().lock();
    let format = cli.format;
    match cli.command {
        Command::Lr {
            triple: Triple { lam, mu, nu },
            model,
        } => {
            let c = match model {
                Model::Hive => lr_via_hives(&lam, &mu, &nu)?,
                Model::Skep => lr_via_skeps(&lam, &mu, &nu)?,
                Model::Sum => lr_via_sum(&lam, &mu, &nu)?,
                Model::Oracle => lr_tableaux(&lam, &mu, &nu),
            };
            match format {
                Format::Table => writeln!(stdout, "{c}")?,
                Format::Json => writeln!(
                    stdout,
                    "{}",
                    serde_json::json!({ "lam": lam, "mu": mu, "nu": nu, "coefficient": c })
                )?,
            }
        }
        Command::Enumerate {
            kind,
            triple: Triple { lam, mu, nu },
            out,
        } => {
            let grids: Vec<TriGrid> = match kind {
                GridKind::Hives => enumerate_hives(&lam, &mu, &nu)?
                    .into_iter()
                    .map(Hive::into_grid)
                    .collect(),
                GridKind::Skeps => enumerate_skeps(&lam, &mu, &nu)?
                    .into_iter()
                    .map(Skep::into_grid)
                    .collect(),
            };
            let text = match (format, &out) {
                (Format::Table, None) => grids
                    .iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join("\n"),
                _ => serde_json::to_string(&grids)? + "\n",
            };
            emit_file(&out, &text)?;
        }
        Command::Skepext { gplus, lam } => {
            let count = skep_ext(&read_gplus(&gplus)?, &lam)?;
            match format {
                Format::Table => writeln!(stdout, "{count}")?,
                Format::Json => writeln!(
                    stdout,
                    "{}",
                    serde_json::json!({ "lam": lam.0, "count": count })
                )?,
            }
        }
        Command::Oct {
            action,
            input,
            out,
            kind,
            from,
        } => {
            let grid = read_grid(&input)?;
            let text = match action {
                OctAction::Hive2skep => grid_to_json(&hive_to_skep(&Hive::new(grid)?)?.into_grid()),
                OctAction::Skep2hive => grid_to_json(&skep_to_hive(&Skep::new(grid)?)?.into_grid()),
                OctAction::Flip => match kind {
                    GridKind::Hives => grid_to_json(&hive_flip(&Hive::new(grid)?)?.into_grid()),
                    GridKind::Skeps => grid_to_json(&skep_flip(&Skep::new(grid)?)?.into_grid()),
                },
                OctAction::Propagate => serde_json::to_string(&propagate(&grid, from))?,
            };
            emit_file(&out, &(text + "\n"))?;
        }
        Command::Pi { x, y, enumerate } => {
            if enumerate {
                let reps = pi_enumerate(&x, &y)?;
                match format {
                    Format::Table => {
                        for r in reps {
                            writeln!(stdout, "{}", join(&r))?;
                        }
                    }
                    Format::Json => writeln!(stdout, "{}", serde_json::to_string(&reps)?)?,
                }
            } else {
                let pp = pi_decompose(&x, &y)?;
                match format {
                    Format::Table => {
                        writeln!(stdout, "base {}", join(&pp.base))?;
                        for (dir, dist) in pp.directions.iter().zip(&pp.distances) {
                            let one_based: Vec<String> =
                                dir.iter().map(|i| (i + 1).to_string()).collect();
                            writeln!(
                                stdout,
                                "direction {{{}}} length {dist}",
                                one_based.join(",")
                            )?;
                        }
                        writeln!(stdout, "classes {}", pp.class_count())?;
                    }
                    Format::Json => writeln!(stdout, "{}", serde_json::to_string(&pp)?)?,
                }
            }
        }
        Command::Covers { lam, mu } => {
            let list = covers(&lam, &mu)?;
            match format {
                Format::Table => {
                    for (a, b) in list {
                        writeln!(stdout, "{} {}", join(&a), join(&b))?;
                    }
                }
                Format::Json => writeln!(stdout, "{}", serde_json::to_string(&list)?)?,
            }
        }
        Command::Verify { campaign } => {
            let probe = matches!(campaign, Campaign::ProbeQuestion { .. });
            let reports = run_campaign(campaign)?;
            let mut failed = false;
            for r in &reports {
                failed |= !r.passed();
                match format {
                    Format::Table => writeln!(stdout, "{r}")?,
                    Format::Json => writeln!(stdout, "{}", r.to_json_line())?,
                }
            }
            if failed && !probe {
                return Ok(Outcome::Violation);
            }
        }
    }
    Ok(Outcome::Done)
}

fn run_campaign(campaign: Campaign) -> Result<Vec<VerifyReport>> {
    Ok(match campaign {
        Campaign::Lpp {
            lam,
            mu,
            lam2,
            mu2,
            oracle,
        } => vec![verify::verify_lpp(&lam, &mu, &lam2, &mu2, oracle)?],
        Campaign::SweepLpp(Sweep { n, max_entry }) => {
            vec![verify::sweep_lpp(n as usize, max_entry)?]
        }
        Campaign::BetterLpp { gplus, lam, lam2 } => vec![verify::verify_better_lpp(
            &read_gplus(&gplus)?,
            &lam,
            &lam2,
        )?],
        Campaign::Commutative { gplus, window } => {
            let gp = read_gplus(&gplus)?;
            let window = window_for(&gp.boundary_plus(), &window)?;
            vec![verify::verify_skep_commutative(&gp, &window)?]
        }
        Campaign::SkepextLlc {
            gplus: Some(path),
            window,
            ..
        } => {
            let gp = read_gplus(&path)?;
            let window = window_for(&gp.boundary_plus(), &window)?;
            vec![verify::verify_skepext_llc(&gp, &window)?]
        }
        Campaign::SkepextLlc {
            gplus: None,
            window,
            samples,
            n,
            max_entry,
            seed,
        } => {
            let pool = gplus_pool(n, max_entry)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut reports = Vec::new();
            for gp in pool.choose_multiple(&mut rng, samples) {
                let window = window_for(&IntVec(vec![max_entry + 1; n]), &window)?;
                reports.push(verify::verify_skepext_llc(gp, &window)?);
            }
            reports
        }
        Campaign::Covers { lam, mu } => vec![verify::verify_covers(&lam, &mu)?],
        Campaign::SchurExample { mode } => vec![verify::schur_example(mode)],
        Campaign::Counts(Sweep { n, max_entry }) => {
            vec![verify::cross_check_counts(n as usize, max_entry)?]
        }
        Campaign::ProbeQuestion { pi, nu, window } => {
            let window = window_for(pi.as_intvec(), &window)?;
            vec![verify::probe_question(&pi, &nu, &window)?]
        }
    })
}

/// Every plus half whose plus boundary is a sum of two partitions in the box.
fn gplus_pool(n: usize, max_entry: i64) -> Result<Vec<PlusGrid>> {
    let parts = partitions_in_box(n, max_entry);
    let mut sums: Vec<Partition> = Vec::new();
    for lam in &parts {
        for mu in &parts {
            sums.push(Partition::new(
                lam.as_intvec().add(mu.as_intvec())?.into_inner(),
            )?);
        }
    }
    sums.sort();
    sums.dedup();
    let mut pool = Vec::new();
    for pi in &sums {
        for nu in partitions_of(pi.size(), n, 2 * max_entry) {
            pool.extend(enumerate_gplus(&nu, pi)?);
        }
    }
    Ok(pool)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("thread pool starts once");
    }
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
