//! pleijel-lab: command-line front end over the verification library.
//!
//! Exit codes: 0 success, 1 usage or computation error, 2 a verdict-bearing
//! command (pleijel, bounds, oracle cross-checks) found a violation.

mod commands;
mod table;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{BoxResult, BoundsArgs, CmdOut, Ctx, PleijelArgs, SweepConfig};
use pleijel_core::potential::RadialPotential;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "pleijel-lab",
    version,
    about = "desk-scale nodal-bound checks for radial Schrodinger operators"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// model: "harmonic", "coulomb", or "powc:<c>,<m>[,<C>,<s>]"
    #[arg(long, global = true)]
    potential: Option<String>,
    /// ambient dimension d >= 2
    #[arg(long, global = true)]
    dim: Option<u32>,
    /// write the result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// solver worker threads (0 = all cores)
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// radial grid override "n,r_min,r_max"
    #[arg(long, global = true)]
    grid: Option<String>,
    /// seed for randomized spot checks
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Dimensional constant pack: volumes, Weyl constant, gamma(d)
    Constants,
    /// Potential-derived radii, degree caps, sector minima
    Potential {
        #[command(subcommand)]
        sub: PotCmd,
    },
    /// Radial and assembled spectra
    Spectrum {
        #[command(subcommand)]
        sub: SpecCmd,
    },
    /// Phase-space volume W(lambda)
    Weyl {
        #[arg(long)]
        lambda: f64,
        /// also report the excluded-ball fraction at this relative radius
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Nodal-domain counts and the bound stack
    Nodal {
        #[command(subcommand)]
        sub: NodalCmd,
    },
    /// mu/n sweep with a verdict against gamma(d)
    Pleijel {
        /// TOML sweep settings; flags override file entries
        #[arg(long)]
        config: Option<PathBuf>,
        /// Courant-index window "lo,hi"
        #[arg(long)]
        window: Option<String>,
        /// shell window "lo,hi" (coulomb)
        #[arg(long)]
        shells: Option<String>,
        /// verdict subrange of --shells
        #[arg(long)]
        verdict_shells: Option<String>,
        #[arg(long)]
        cutoff: Option<f64>,
        /// cross-check this many sampled rows against the grid oracle
        #[arg(long)]
        oracle_check: Option<usize>,
    },
    /// Consolidated bound pipeline across energies
    Bounds {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        lambda: Option<f64>,
        /// extra energies "l1,l2,..."
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long)]
        nu_exponent: Option<f64>,
        #[arg(long)]
        c_split: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
enum PotCmd {
    /// turning radius, degree cap, Hardy exclusion radius at one energy
    Probe {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
    },
}

#[derive(Debug, Subcommand)]
enum SpecCmd {
    /// one angular sector, with honest eigenvector zero counts
    Radial {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        cutoff: f64,
    },
    /// full assembled spectrum below a cutoff
    Table {
        #[arg(long)]
        cutoff: f64,
    },
}

#[derive(Debug, Subcommand)]
enum NodalCmd {
    /// classify one eigenfunction against its annulus partition
    Count {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: u32,
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// drop domains inside this radius
        #[arg(long)]
        exclusion: Option<f64>,
    },
    /// per-element mu/n with the per-level bound columns
    Report {
        #[arg(long)]
        cutoff: f64,
        #[arg(long)]
        nu_exponent: Option<f64>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(false) => {}
        Ok(true) => std::process::exit(2),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> BoxResult<bool> {
    let cfg = match &cli.cmd {
        Cmd::Pleijel { config, .. } | Cmd::Bounds { config, .. } => {
            config.as_deref().map(commands::load_config).transpose()?.unwrap_or_default()
        }
        _ => SweepConfig::default(),
    };

    let pot =
        RadialPotential::parse(cli.potential.as_deref().or(cfg.potential.as_deref()).unwrap_or("harmonic"))?;
    let dim = cli.dim.or(cfg.dim).unwrap_or(2);
    let grid_override = cli
        .grid
        .as_deref()
        .or(cfg.grid.as_deref())
        .map(commands::parse_grid_spec)
        .transpose()?;
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let ctx = Ctx { pot, dim, grid_override, seed };

    let format = match cli.format {
        Some(f) => f,
        None => match cfg.format.as_deref() {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return Err(format!("config format must be csv or json, got {other:?}").into()),
        },
    };
    let out_path = cli.out.clone().or_else(|| cfg.out.clone());

    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build()?;
    let res = pool.install(|| dispatch(&cli, &ctx, &cfg))?;

    let text = match format {
        Format::Csv => res.table.csv(),
        Format::Json => {
            let v = res.json_override.clone().unwrap_or_else(|| res.table.json());
            let mut s = serde_json::to_string_pretty(&v)?;
            s.push('\n');
            s
        }
    };
    match &out_path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(res.failed)
}

fn dispatch(cli: &Cli, ctx: &Ctx, cfg: &SweepConfig) -> BoxResult<CmdOut> {
    match &cli.cmd {
        Cmd::Constants => commands::constants(ctx.dim),
        Cmd::Potential { sub: PotCmd::Probe { lambda, epsilon } } => {
            commands::probe(ctx, *lambda, *epsilon)
        }
        Cmd::Spectrum { sub: SpecCmd::Radial { ell, cutoff } } => {
            commands::spectrum_radial(ctx, *ell, *cutoff)
        }
        Cmd::Spectrum { sub: SpecCmd::Table { cutoff } } => commands::spectrum_table(ctx, *cutoff),
        Cmd::Weyl { lambda, eps } => commands::weyl(ctx, *lambda, *eps),
        Cmd::Nodal { sub: NodalCmd::Count { n, ell, m, exclusion } } => {
            commands::nodal_count(ctx, *n, *ell, *m, *exclusion)
        }
        Cmd::Nodal { sub: NodalCmd::Report { cutoff, nu_exponent } } => {
            commands::nodal_report(ctx, *cutoff, *nu_exponent)
        }
        Cmd::Pleijel { window, shells, verdict_shells, cutoff, oracle_check, .. } => {
            // any range flag on the command line suppresses the file ranges
            let flags_set = window.is_some() || shells.is_some();
            let args = PleijelArgs {
                window: match (window, flags_set) {
                    (Some(s), _) => Some(commands::parse_pair_u64(s)?),
                    (None, true) => None,
                    (None, false) => cfg.window.map(|w| (w[0], w[1])),
                },
                shells: match (shells, flags_set) {
                    (Some(s), _) => Some(commands::parse_pair_u32(s)?),
                    (None, true) => None,
                    (None, false) => cfg.shells.map(|w| (w[0], w[1])),
                },
                verdict_shells: match verdict_shells {
                    Some(s) => Some(commands::parse_pair_u32(s)?),
                    None if flags_set => None,
                    None => cfg.verdict_shells.map(|w| (w[0], w[1])),
                },
                cutoff: cutoff.or(cfg.cutoff),
                oracle_check: oracle_check.or(cfg.oracle_check).unwrap_or(0),
            };
            commands::pleijel(ctx, &args)
        }
        Cmd::Bounds { lambda, sweep, nu_exponent, c_split, .. } => {
            let mut lambdas = Vec::new();
            if let Some(l) = lambda {
                lambdas.push(*l);
            }
            if let Some(s) = sweep {
                lambdas.extend(commands::parse_f64_list(s)?);
            }
            if lambdas.is_empty() {
                if let Some(ls) = &cfg.lambdas {
                    lambdas.extend_from_slice(ls);
                }
            }
            let args = BoundsArgs {
                lambdas,
                nu_exponent: nu_exponent.or(cfg.nu_exponent),
                c_split: c_split.or(cfg.c_split),
            };
            commands::bounds(ctx, &args)
        }
    }
}
