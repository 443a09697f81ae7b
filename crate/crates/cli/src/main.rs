//! Command-line front end for the moment engines: enumeration queries, moment
//! tables, Breuer-Major sweeps, and matrix Monte Carlo cross-checks, with
//! reproducible file outputs (every run that writes files also writes a
//! manifest that replays it byte-identically).

mod output;
mod spec;

use clap::{Parser, Subcommand};
use freechaos::error::{Error, Result};
use freechaos::matrixsim::{empirical_moments, SimConfig};
use freechaos::moments::{
    wiener_mixed_moment_with_cap, wigner_mixed_moment_with_cap, MomentReport,
    DEFAULT_TOTAL_ORDER_CAP,
};
use freechaos::pairings::{
    connected_components, decompose, enumerate_nc2_respecting_with_cap, IntervalPartition,
    DEFAULT_NONCROSSING_CAP,
};
use freechaos::{catalan, distance_bound_order2, fourth_moment_gap, GridSpec, Kernel};
use output::{g17, Table};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const MANIFEST_SCHEMA: &str = "freechaos/manifest/v1";

#[derive(Parser, Debug)]
#[command(name = "freechaos", version, about = "Exact Wigner/Wiener chaos moments and their random-matrix cross-checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Grid as CELLS,HORIZON shared by kernel generators
    #[arg(long, global = true, default_value = "16,1")]
    grid: String,

    /// Seed for random kernels and the Monte Carlo engine
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Total-order cap for the moment engines (env FREECHAOS_MOMENT_CAP)
    #[arg(long, global = true)]
    cap: Option<usize>,

    /// Include the per-pairing breakdown in moment tables
    #[arg(long, global = true)]
    breakdown: bool,

    /// Human-aligned table instead of machine output
    #[arg(long, global = true)]
    pretty: bool,

    /// Directory for output files and the run manifest
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Machine output format
    #[arg(long, global = true, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the noncrossing pairings respecting an interval partition
    Enumerate {
        /// Block sizes, e.g. 4 3 1 2 2
        sizes: Vec<usize>,
        /// Add connectivity columns
        #[arg(long)]
        connected: bool,
        /// Add contraction-word columns
        #[arg(long)]
        decompose: bool,
    },
    /// Mixed moments of Wigner/Wiener integrals of the given kernels
    Moments {
        /// Kernel spec (repeatable); a single spec is repeated --order times
        #[arg(long = "kernel", required = true)]
        kernels: Vec<String>,
        /// Number of factors when one kernel spec is given
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, default_value = "wigner", value_parser = ["wigner", "wiener", "both"])]
        engine: String,
    },
    /// Contraction norms, fourth-moment gaps, distance bounds and moments of
    /// the Breuer-Major kernel family
    BreuerMajor {
        /// Comma-separated list of m values
        #[arg(long, default_value = "1,2,4,16,64")]
        m_list: String,
        /// Grid cells per unit interval
        #[arg(long, default_value_t = 1)]
        cells_per_unit: usize,
        /// Largest moment order reported (even orders only)
        #[arg(long, default_value_t = 8)]
        max_moment_order: usize,
    },
    /// Combinatorial moments vs the matrix Monte Carlo estimate
    Crosscheck {
        #[arg(long)]
        kernel: String,
        /// Sim config JSON file {dimension, samples, seed, grid:{cells,horizon}}
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        dimension: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Moment orders to compare
        #[arg(long, default_value = "1,2,3,4")]
        orders: String,
    },
    /// Re-run a recorded manifest; outputs are reproduced byte-identically
    Replay { manifest: PathBuf },
}

#[derive(Serialize, Deserialize, Debug)]
struct RunManifest {
    schema: String,
    version: String,
    command: String,
    parameters: Vec<String>,
    seed: u64,
    wall_time_s: f64,
    outputs: Vec<String>,
}

#[derive(Deserialize)]
struct SimFileConfig {
    dimension: usize,
    samples: usize,
    seed: u64,
    grid: SimFileGrid,
}

#[derive(Deserialize)]
struct SimFileGrid {
    cells: usize,
    horizon: f64,
}

fn env_cap(name: &str, fallback: usize) -> usize {
    std::env::var(name)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(fallback)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource_guard() {
                eprintln!("hint: retry with a smaller input, or raise the cap explicitly");
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(argv: Vec<String>) -> Result<ExitCode> {
    let cli = match Cli::try_parse_from(
        std::iter::once("freechaos".to_string()).chain(argv.iter().cloned()),
    ) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with its own exit semantics
            if e.use_stderr() {
                eprint!("{e}");
                return Ok(ExitCode::from(2));
            }
            print!("{e}");
            return Ok(ExitCode::SUCCESS);
        }
    };

    if let Cmd::Replay { manifest } = &cli.cmd {
        let text = std::fs::read_to_string(manifest)?;
        let recorded: RunManifest = serde_json::from_str(&text)?;
        if recorded.schema != MANIFEST_SCHEMA {
            return Err(Error::Validation(format!(
                "unsupported manifest schema `{}`",
                recorded.schema
            )));
        }
        return run(recorded.parameters);
    }

    let start = Instant::now();
    let grid = spec::parse_grid(&cli.grid)?;
    let moment_cap = cli
        .cap
        .unwrap_or_else(|| env_cap("FREECHAOS_MOMENT_CAP", DEFAULT_TOTAL_ORDER_CAP));

    let (command, table, exit) = match &cli.cmd {
        Cmd::Enumerate {
            sizes,
            connected,
            decompose,
        } => (
            "enumerate",
            cmd_enumerate(sizes, *connected, *decompose)?,
            ExitCode::SUCCESS,
        ),
        Cmd::Moments {
            kernels,
            order,
            engine,
        } => (
            "moments",
            cmd_moments(kernels, *order, engine, grid, moment_cap, cli.breakdown)?,
            ExitCode::SUCCESS,
        ),
        Cmd::BreuerMajor {
            m_list,
            cells_per_unit,
            max_moment_order,
        } => (
            "breuer-major",
            cmd_breuer_major(m_list, *cells_per_unit, *max_moment_order, moment_cap)?,
            ExitCode::SUCCESS,
        ),
        Cmd::Crosscheck {
            kernel,
            config,
            dimension,
            samples,
            orders,
        } => {
            let (table, ok) = cmd_crosscheck(
                kernel,
                config.as_deref(),
                *dimension,
                *samples,
                orders,
                grid,
                cli.seed,
                moment_cap,
            )?;
            (
                "crosscheck",
                table,
                if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(4)
                },
            )
        }
        Cmd::Replay { .. } => unreachable!("handled above"),
    };

    let rendered = table.render(&cli.format, cli.pretty);
    print!("{rendered}");

    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir)?;
        let file = format!("{command}.{}", Table::extension(&cli.format));
        // files always carry the machine format, --pretty only affects stdout
        std::fs::write(dir.join(&file), table.render(&cli.format, false))?;
        let manifest = RunManifest {
            schema: MANIFEST_SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            parameters: argv,
            seed: cli.seed,
            wall_time_s: start.elapsed().as_secs_f64(),
            outputs: vec![file],
        };
        std::fs::write(
            dir.join(format!("manifest-{command}.json")),
            serde_json::to_string_pretty(&manifest)?,
        )?;
    }
    Ok(exit)
}

fn cmd_enumerate(sizes: &[usize], connected: bool, decompose_words: bool) -> Result<Table> {
    if sizes.is_empty() {
        return Err(Error::Argument("enumerate needs block sizes".into()));
    }
    let ip = IntervalPartition::new(sizes.iter().copied())?;
    let cap = env_cap("FREECHAOS_NC_CAP", DEFAULT_NONCROSSING_CAP);
    let pairings = enumerate_nc2_respecting_with_cap(&ip, cap)?;

    let mut columns = vec!["index", "pairing"];
    if decompose_words {
        columns.extend(["word", "tau"]);
    }
    if connected {
        columns.extend(["connected", "components"]);
    }
    let mut table = Table::new("freechaos/enumerate/v1", &columns);
    let mut connected_count = 0usize;
    for (i, p) in pairings.iter().enumerate() {
        let mut row = vec![i.to_string(), serde_json::to_string(p)?];
        if decompose_words {
            let w = decompose(p, &ip)?;
            let depths: Vec<String> = w.depths().iter().map(|d| d.to_string()).collect();
            row.push(depths.join(","));
            row.push(w.to_string());
        }
        if connected {
            let comps = connected_components(p, &ip)?;
            if comps.len() == 1 {
                connected_count += 1;
            }
            row.push((comps.len() == 1).to_string());
            row.push(serde_json::to_string(&comps)?);
        }
        table.push(row);
    }
    if connected {
        eprintln!("count = {} (connected {connected_count})", pairings.len());
    } else {
        eprintln!("count = {}", pairings.len());
    }
    Ok(table)
}

fn push_moment_rows(table: &mut Table, report: &MomentReport, breakdown: bool) -> Result<()> {
    table.push(vec![
        report.engine.to_string(),
        "total".to_string(),
        String::new(),
        g17(report.value.re),
        g17(report.value.im),
    ]);
    if breakdown {
        for (pairing, term) in &report.terms {
            table.push(vec![
                report.engine.to_string(),
                "term".to_string(),
                serde_json::to_string(pairing)?,
                g17(term.re),
                g17(term.im),
            ]);
        }
    }
    Ok(())
}

fn cmd_moments(
    specs: &[String],
    order: usize,
    engine: &str,
    grid: GridSpec,
    cap: usize,
    breakdown: bool,
) -> Result<Table> {
    let kernels: Vec<Kernel> = specs
        .iter()
        .map(|s| spec::parse_kernel(s, grid))
        .collect::<Result<_>>()?;
    let factors: Vec<&Kernel> = if kernels.len() == 1 {
        if order == 0 {
            return Err(Error::Argument("--order must be >= 1".into()));
        }
        std::iter::repeat(&kernels[0]).take(order).collect()
    } else {
        kernels.iter().collect()
    };
    let mut table = Table::new(
        "freechaos/moments/v1",
        &["engine", "kind", "pairing", "value_re", "value_im"],
    );
    if engine == "wigner" || engine == "both" {
        let report = wigner_mixed_moment_with_cap(&factors, cap)?;
        eprintln!(
            "wigner = {} ({} pairings)",
            g17(report.value.re),
            report.terms.len()
        );
        push_moment_rows(&mut table, &report, breakdown)?;
    }
    if engine == "wiener" || engine == "both" {
        let report = wiener_mixed_moment_with_cap(&factors, cap)?;
        eprintln!(
            "wiener = {} ({} pairings)",
            g17(report.value.re),
            report.terms.len()
        );
        push_moment_rows(&mut table, &report, breakdown)?;
    }
    Ok(table)
}

fn cmd_breuer_major(
    m_list: &str,
    cells_per_unit: usize,
    max_moment_order: usize,
    cap: usize,
) -> Result<Table> {
    let ms = spec::parse_usize_list(m_list)?;
    if cells_per_unit == 0 {
        return Err(Error::Argument("--cells-per-unit must be >= 1".into()));
    }
    if max_moment_order > 8 {
        return Err(Error::Argument("--max-moment-order must be <= 8".into()));
    }
    let even_orders: Vec<usize> = (1..=max_moment_order / 2).map(|k| 2 * k).collect();
    // sparse kernels keep the engine tractable past the default cap
    let cap = cap.max(2 * max_moment_order);

    let mut columns: Vec<String> = vec![
        "m".into(),
        "contraction_norm".into(),
        "gap".into(),
        "bound".into(),
    ];
    for k in &even_orders {
        columns.push(format!("moment_{k}"));
        columns.push(format!("target_{k}"));
    }
    let col_refs: Vec<&str> = columns.iter().map(|s| s.as_str()).collect();
    let mut table = Table::new("freechaos/breuer-major/v1", &col_refs);

    for &m in &ms {
        let grid = GridSpec::new(m * cells_per_unit, m as f64)?;
        let f = Kernel::breuer_major(m, grid)?;
        let contraction_norm = f.contract(&f, 1)?.norm();
        let gap = fourth_moment_gap(&f)?;
        let bound = distance_bound_order2(&f)?.bound;
        let mut row = vec![m.to_string(), g17(contraction_norm), g17(gap), g17(bound)];
        for &k in &even_orders {
            let factors: Vec<&Kernel> = std::iter::repeat(&f).take(k).collect();
            let report = wigner_mixed_moment_with_cap(&factors, cap)?;
            row.push(g17(report.value.re));
            row.push(g17(catalan((k / 2) as u32)? as f64));
        }
        table.push(row);
    }
    Ok(table)
}

#[allow(clippy::too_many_arguments)]
fn cmd_crosscheck(
    kernel_spec: &str,
    config: Option<&Path>,
    dimension: usize,
    samples: usize,
    orders: &str,
    grid: GridSpec,
    seed: u64,
    cap: usize,
) -> Result<(Table, bool)> {
    let cfg = match config {
        Some(path) => {
            let file: SimFileConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            SimConfig::new(
                file.dimension,
                file.samples,
                file.seed,
                GridSpec::new(file.grid.cells, file.grid.horizon)?,
            )?
        }
        None => SimConfig::new(dimension, samples, seed, grid)?,
    };
    let kernel = spec::parse_kernel(kernel_spec, cfg.grid)?;
    if kernel.order() > 2 {
        return Err(Error::Argument(
            "crosscheck supports kernels of order <= 2".into(),
        ));
    }
    let dropped = kernel.diagonal_mass();
    let kernel = kernel.off_diagonal_projection();
    if dropped > 0.0 {
        eprintln!(
            "warning: dropped diagonal-cell mass {} (off-diagonal integral definition)",
            g17(dropped)
        );
    }
    let orders = spec::parse_usize_list(orders)?;

    let estimates = empirical_moments(&kernel, &cfg, &orders)?;
    let mut table = Table::new(
        "freechaos/crosscheck/v1",
        &["order", "combinatorial", "empirical", "std_error", "z"],
    );
    let mut all_ok = true;
    for est in &estimates {
        let factors: Vec<&Kernel> = std::iter::repeat(&kernel).take(est.order).collect();
        let exact = wigner_mixed_moment_with_cap(&factors, cap)?.value.re;
        let z = if est.std_error > 0.0 {
            (est.mean - exact) / est.std_error
        } else if est.mean == exact {
            0.0
        } else {
            f64::INFINITY
        };
        if z.abs() > 5.0 {
            all_ok = false;
        }
        table.push(vec![
            est.order.to_string(),
            g17(exact),
            g17(est.mean),
            g17(est.std_error),
            g17(z),
        ]);
    }
    if !all_ok {
        eprintln!("cross-check failed: |z| > 5 for at least one order");
    }
    Ok((table, all_ok))
}
