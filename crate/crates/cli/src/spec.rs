//! Kernel argument parsing: either a generator spec string
//! (`breuer-major:m=16`, `indicator:0,1`, `indicator:0,1,3`,
//! `random:2,42,mirror`) or a path to a kernel file.

use freechaos::error::{Error, Result};
use freechaos::kernel_io::load_kernel;
use freechaos::{GridSpec, Kernel, Symmetry};
use std::path::Path;

pub fn parse_kernel(spec: &str, grid: GridSpec) -> Result<Kernel> {
    if let Some(args) = spec.strip_prefix("breuer-major:") {
        let m = parse_kv(args, "m")?;
        return Kernel::breuer_major(m, grid);
    }
    if let Some(args) = spec.strip_prefix("indicator:") {
        let parts: Vec<&str> = args.split(',').collect();
        if parts.len() < 2 || parts.len() > 3 {
            return Err(Error::Argument(format!(
                "indicator spec `{spec}` needs a,b[,order]"
            )));
        }
        let a: f64 = parts[0]
            .parse()
            .map_err(|_| Error::Argument(format!("bad indicator bound `{}`", parts[0])))?;
        let b: f64 = parts[1]
            .parse()
            .map_err(|_| Error::Argument(format!("bad indicator bound `{}`", parts[1])))?;
        let order: usize = if parts.len() == 3 {
            parts[2]
                .parse()
                .map_err(|_| Error::Argument(format!("bad indicator order `{}`", parts[2])))?
        } else {
            1
        };
        return Kernel::indicator(grid, a, b, order);
    }
    if let Some(args) = spec.strip_prefix("random:") {
        let parts: Vec<&str> = args.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Argument(format!(
                "random spec `{spec}` needs order,seed,symmetry"
            )));
        }
        let order: usize = parts[0]
            .parse()
            .map_err(|_| Error::Argument(format!("bad random order `{}`", parts[0])))?;
        let seed: u64 = parts[1]
            .parse()
            .map_err(|_| Error::Argument(format!("bad random seed `{}`", parts[1])))?;
        let symmetry: Symmetry = parts[2].parse()?;
        return Kernel::random(order, grid, seed, symmetry);
    }
    if spec.contains(':') {
        return Err(Error::Argument(format!(
            "unknown kernel generator `{spec}` (expected breuer-major:, indicator:, random:, or a file path)"
        )));
    }
    load_kernel(Path::new(spec))
}

fn parse_kv(args: &str, key: &str) -> Result<usize> {
    for part in args.split(',') {
        if let Some(v) = part.strip_prefix(&format!("{key}=")) {
            return v
                .parse()
                .map_err(|_| Error::Argument(format!("bad value `{v}` for `{key}`")));
        }
    }
    Err(Error::Argument(format!("missing `{key}=` in `{args}`")))
}

pub fn parse_grid(spec: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Argument(format!(
            "grid spec `{spec}` must be CELLS,HORIZON"
        )));
    }
    let cells: usize = parts[0]
        .parse()
        .map_err(|_| Error::Argument(format!("bad cell count `{}`", parts[0])))?;
    let horizon: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Argument(format!("bad horizon `{}`", parts[1])))?;
    GridSpec::new(cells, horizon)
}

pub fn parse_usize_list(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Argument(format!("bad integer `{p}` in list")))
        })
        .collect()
}
