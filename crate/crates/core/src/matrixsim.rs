//! Monte Carlo approximation of free Brownian motion by Hermitian matrix
//! Brownian motion: per-cell increments are d x d Hermitian matrices with
//! independent complex-gaussian entries of variance h/d above the diagonal
//! (real, variance h/d, on it). Normalized traces of integrals against these
//! increments estimate the moments the combinatorial engine computes exactly,
//! giving an independent statistical oracle.
//!
//! Multi-indices with repeated cells are excluded from integrals — the
//! off-diagonal definition — so diagonal kernel mass is dropped, not
//! redistributed; [`Kernel::diagonal_mass`] tells callers how much that is.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::kernel::Kernel;
use crate::numeric::GaussianSource;
use num_complex::Complex64;
use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;
use rayon::prelude::*;

/// Distinct-cell guard for integrals of order >= 3.
const GENERIC_ORDER_CELL_GUARD: usize = 4096;

/// `Complex64` is repr(C) with (re, im) f64 fields, so a slice of it can be
/// read as twice as many f64s.
fn complex_as_f64(data: &[Complex64]) -> &[f64] {
    unsafe { std::slice::from_raw_parts(data.as_ptr() as *const f64, 2 * data.len()) }
}

/// `out += a * b` for row-major real matrices, a: m x k, b: k x n.
fn flat_gemm(m: usize, k: usize, n: usize, a: &[f64], b: &[f64], out: &mut [f64]) {
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            n as isize,
            1,
            1.0,
            out.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dimension: usize,
    pub samples: usize,
    pub seed: u64,
    pub grid: GridSpec,
}

impl SimConfig {
    pub fn new(dimension: usize, samples: usize, seed: u64, grid: GridSpec) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Validation("matrix dimension must be >= 2".into()));
        }
        if samples < 1 {
            return Err(Error::Validation("need at least one sample".into()));
        }
        Ok(Self {
            dimension,
            samples,
            seed,
            grid,
        })
    }
}

/// Dense complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add_scaled_assign(&mut self, other: &CMatrix, c: Complex64) {
        debug_assert_eq!(self.dim, other.dim);
        if c.im == 0.0 {
            let s = c.re;
            for (a, b) in self.data.iter_mut().zip(&other.data) {
                a.re += b.re * s;
                a.im += b.im * s;
            }
        } else {
            for (a, b) in self.data.iter_mut().zip(&other.data) {
                *a += b * c;
            }
        }
    }

    fn split(&self) -> (Vec<f64>, Vec<f64>) {
        let re = self.data.iter().map(|z| z.re).collect();
        let im = self.data.iter().map(|z| z.im).collect();
        (re, im)
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        // split into real planes: four real GEMMs beat one pass over
        // interleaved complex values by a wide margin
        fn real_mm(a: &[f64], b: &[f64], d: usize, out: &mut [f64], alpha: f64) {
            unsafe {
                matrixmultiply::dgemm(
                    d,
                    d,
                    d,
                    alpha,
                    a.as_ptr(),
                    d as isize,
                    1,
                    b.as_ptr(),
                    d as isize,
                    1,
                    1.0,
                    out.as_mut_ptr(),
                    d as isize,
                    1,
                );
            }
        }
        let (ar, ai) = self.split();
        let (br, bi) = other.split();
        let mut cr = vec![0.0; d * d];
        let mut ci = vec![0.0; d * d];
        real_mm(&ar, &br, d, &mut cr, 1.0);
        real_mm(&ai, &bi, d, &mut cr, -1.0);
        real_mm(&ar, &bi, d, &mut ci, 1.0);
        real_mm(&ai, &br, d, &mut ci, 1.0);
        CMatrix {
            dim: d,
            data: cr
                .into_iter()
                .zip(ci)
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// `(1/d) Tr`.
    pub fn normalized_trace(&self) -> Complex64 {
        self.trace() / self.dim as f64
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry deviation from Hermitian symmetry, relative to the scale
    /// of the matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let dev = (self.data[i * d + j] - self.data[j * d + i].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst / 1.0f64.max(self.frobenius_norm())
    }

    pub fn hermitized(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[i * d + j] =
                    (self.data[i * d + j] + self.data[j * d + i].conj()) * 0.5;
            }
        }
        out
    }

    /// Spectral norm of a Hermitian matrix by power iteration on the square,
    /// from a fixed deterministic start vector.
    pub fn operator_norm_estimate(&self, iterations: usize) -> f64 {
        let d = self.dim;
        let mut v: Vec<Complex64> = (0..d)
            .map(|i| Complex64::new(1.0 + 0.3 * ((i + 1) as f64).sin(), 0.0))
            .collect();
        let matvec = |x: &[Complex64]| -> Vec<Complex64> {
            let mut y = vec![Complex64::new(0.0, 0.0); d];
            for i in 0..d {
                let row = &self.data[i * d..(i + 1) * d];
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..d {
                    acc += row[j] * x[j];
                }
                y[i] = acc;
            }
            y
        };
        let mut lambda_sq = 0.0;
        for _ in 0..iterations {
            let w = matvec(&matvec(&v));
            let norm_v_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let rayleigh: Complex64 = w
                .iter()
                .zip(&v)
                .map(|(wi, vi)| wi * vi.conj())
                .sum::<Complex64>()
                / norm_v_sq;
            lambda_sq = rayleigh.re.max(0.0);
            let norm_w: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm_w == 0.0 {
                return 0.0;
            }
            for (vi, wi) in v.iter_mut().zip(&w) {
                *vi = wi / norm_w;
            }
        }
        lambda_sq.sqrt()
    }
}

/// Sampled increments of the matrix Brownian motion, one per grid cell.
#[derive(Debug, Clone)]
pub struct MatrixPath {
    dimension: usize,
    grid: GridSpec,
    increments: Vec<CMatrix>,
}

impl MatrixPath {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn increments(&self) -> &[CMatrix] {
        &self.increments
    }
}

fn sample_path_stream(cfg: &SimConfig, stream: u64) -> MatrixPath {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let mut gauss = GaussianSource::from_rng(rng);
    let d = cfg.dimension;
    let h = cfg.grid.step();
    let sig_diag = (h / d as f64).sqrt();
    let sig_off = (h / (2.0 * d as f64)).sqrt();
    let increments = (0..cfg.grid.cells())
        .map(|_| {
            let mut m = CMatrix::zeros(d);
            for i in 0..d {
                for j in i..d {
                    if i == j {
                        m.set(i, i, Complex64::new(sig_diag * gauss.standard_normal(), 0.0));
                    } else {
                        let z = Complex64::new(
                            sig_off * gauss.standard_normal(),
                            sig_off * gauss.standard_normal(),
                        );
                        m.set(i, j, z);
                        m.set(j, i, z.conj());
                    }
                }
            }
            m
        })
        .collect();
    MatrixPath {
        dimension: d,
        grid: cfg.grid,
        increments,
    }
}

/// Samples one path (independent Hermitian increments per cell), reproducible
/// from the seed. Independent per-sample paths come from ChaCha streams
/// derived from (seed, sample index).
pub fn sample_path(cfg: &SimConfig) -> MatrixPath {
    sample_path_stream(cfg, 0)
}

/// Matrix Wigner integral: the sum over multi-indices with pairwise-distinct
/// cells of `f(cells) * dS_{i1} ... dS_{in}` as an ordered matrix product.
///
/// Cells with repeated coordinates are zeroed first (off-diagonal
/// definition); order 0 maps the scalar to a multiple of the identity.
pub fn matrix_wigner_integral(f: &Kernel, path: &MatrixPath) -> Result<CMatrix> {
    f.grid().ensure_matches(path.grid())?;
    let d = path.dimension();
    let cells = f.grid().cells();
    match f.order() {
        0 => {
            let mut m = CMatrix::zeros(d);
            let c = f.scalar_value().unwrap();
            for i in 0..d {
                m.set(i, i, c);
            }
            Ok(m)
        }
        1 => {
            let mut m = CMatrix::zeros(d);
            for (i, inc) in path.increments().iter().enumerate() {
                let c = f.values()[i];
                if c.re != 0.0 || c.im != 0.0 {
                    m.add_scaled_assign(inc, c);
                }
            }
            Ok(m)
        }
        2 => {
            let g = f.off_diagonal_projection();
            // row sums R_i = sum_j g[i, j] dS_j computed as one flat GEMM
            // over the increment planes (cells x 2d^2), then M = sum_i
            // dS_i R_i as ordinary matrix products
            let plane = 2 * d * d;
            let mut s_flat = vec![0.0f64; cells * plane];
            for (j, inc) in path.increments().iter().enumerate() {
                s_flat[j * plane..(j + 1) * plane].copy_from_slice(complex_as_f64(inc.data()));
            }
            let g_re: Vec<f64> = g.values().iter().map(|z| z.re).collect();
            let mut r_flat = vec![0.0f64; cells * plane];
            flat_gemm(cells, cells, plane, &g_re, &s_flat, &mut r_flat);
            if g.values().iter().any(|z| z.im != 0.0) {
                // imaginary weights act on the increment planes rotated by i
                let mut rot = vec![0.0f64; cells * plane];
                for (dst, src) in rot.chunks_exact_mut(2).zip(s_flat.chunks_exact(2)) {
                    dst[0] = -src[1];
                    dst[1] = src[0];
                }
                let g_im: Vec<f64> = g.values().iter().map(|z| z.im).collect();
                flat_gemm(cells, cells, plane, &g_im, &rot, &mut r_flat);
            }
            let mut m = CMatrix::zeros(d);
            let mut row = CMatrix::zeros(d);
            for i in 0..cells {
                let chunk = &r_flat[i * plane..(i + 1) * plane];
                if chunk.iter().all(|&v| v == 0.0) {
                    continue;
                }
                for (dst, src) in row.data.iter_mut().zip(chunk.chunks_exact(2)) {
                    *dst = Complex64::new(src[0], src[1]);
                }
                let term = path.increments()[i].mul(&row);
                m.add_scaled_assign(&term, Complex64::new(1.0, 0.0));
            }
            Ok(m)
        }
        n => {
            let combos = cells.checked_pow(n as u32).unwrap_or(usize::MAX);
            if combos > GENERIC_ORDER_CELL_GUARD {
                return Err(Error::Resource(format!(
                    "order-{n} integral over {cells} cells exceeds the {GENERIC_ORDER_CELL_GUARD}-index guard"
                )));
            }
            let g = f.off_diagonal_projection();
            let mut m = CMatrix::zeros(d);
            let mut idx = vec![0usize; n];
            // depth-first over distinct multi-indices with prefix products
            fn rec(
                depth: usize,
                n: usize,
                cells: usize,
                idx: &mut Vec<usize>,
                prefix: &CMatrix,
                g: &Kernel,
                path: &MatrixPath,
                out: &mut CMatrix,
            ) {
                if depth == n {
                    let c = g.value(idx);
                    if c.re != 0.0 || c.im != 0.0 {
                        out.add_scaled_assign(prefix, c);
                    }
                    return;
                }
                for cell in 0..cells {
                    if idx[..depth].contains(&cell) {
                        continue;
                    }
                    idx[depth] = cell;
                    let next = if depth == 0 {
                        path.increments()[cell].clone()
                    } else {
                        prefix.mul(&path.increments()[cell])
                    };
                    rec(depth + 1, n, cells, idx, &next, g, path, out);
                }
            }
            let id = {
                let mut id = CMatrix::zeros(d);
                for i in 0..d {
                    id.set(i, i, Complex64::new(1.0, 0.0));
                }
                id
            };
            rec(0, n, cells, &mut idx, &id, &g, path, &mut m);
            Ok(m)
        }
    }
}

/// Sample mean and standard error of a trace statistic over independent paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub order: usize,
    pub mean: f64,
    pub std_error: f64,
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs `op` on the hermitized integral of each independent sample path.
///
/// Paths are evaluated in parallel; results come back indexed by sample, so
/// downstream reductions do not depend on thread scheduling.
fn map_samples<T: Send>(
    f: &Kernel,
    cfg: &SimConfig,
    op: impl Fn(&CMatrix) -> T + Sync,
) -> Result<Vec<T>> {
    (0..cfg.samples)
        .into_par_iter()
        .map(|s| {
            let path = sample_path_stream(cfg, s as u64);
            let m = matrix_wigner_integral(f, &path)?.hermitized();
            Ok(op(&m))
        })
        .collect()
}

/// `(1/d) Tr(M^k)` for k = 1..=max_order, for Hermitian `M`.
///
/// Only powers up to ceil(max_order / 2) are multiplied out; higher traces
/// come from Frobenius pairings `Tr(M^{a+b}) = <M^a, M^b>_F`.
fn trace_powers(m: &CMatrix, max_order: usize) -> Vec<f64> {
    let half = max_order.div_ceil(2);
    let mut powers: Vec<CMatrix> = Vec::with_capacity(half);
    powers.push(m.clone());
    for _ in 1..half {
        powers.push(powers.last().unwrap().mul(m));
    }
    let d = m.dim() as f64;
    (1..=max_order)
        .map(|k| {
            if k <= half {
                powers[k - 1].normalized_trace().re
            } else {
                let a = &powers[k / 2 - 1];
                let b = &powers[k - k / 2 - 1];
                let frob: Complex64 = a
                    .data()
                    .iter()
                    .zip(b.data())
                    .map(|(x, y)| x * y.conj())
                    .sum();
                frob.re / d
            }
        })
        .collect()
}

fn estimates_from(per_sample: &[Vec<f64>], orders: &[usize]) -> Vec<MomentEstimate> {
    orders
        .iter()
        .map(|&k| {
            let series: Vec<f64> = per_sample.iter().map(|t| t[k - 1]).collect();
            let (mean, std_error) = mean_and_se(&series);
            MomentEstimate {
                order: k,
                mean,
                std_error,
            }
        })
        .collect()
}

fn check_orders(orders: &[usize]) -> Result<usize> {
    if orders.iter().any(|&k| k == 0 || k > 8) {
        return Err(Error::Argument(
            "empirical moment orders must lie in 1..=8".into(),
        ));
    }
    Ok(orders.iter().copied().max().unwrap_or(0))
}

/// Estimates `(1/d) Tr(M^k)` for `M = I_n(f)` over independent sample paths.
pub fn empirical_moments(
    f: &Kernel,
    cfg: &SimConfig,
    orders: &[usize],
) -> Result<Vec<MomentEstimate>> {
    if orders.is_empty() {
        return Ok(Vec::new());
    }
    let max_order = check_orders(orders)?;
    let per_sample = map_samples(f, cfg, |m| trace_powers(m, max_order))?;
    Ok(estimates_from(&per_sample, orders))
}

/// Spectral norms of `I_n(f)` across sample paths (mean, max).
pub fn empirical_operator_norm(f: &Kernel, cfg: &SimConfig) -> Result<(f64, f64)> {
    let norms = map_samples(f, cfg, |m| m.operator_norm_estimate(150))?;
    let mean = norms.iter().sum::<f64>() / norms.len() as f64;
    let max = norms.iter().cloned().fold(0.0, f64::max);
    Ok((mean, max))
}

/// Moment estimates and spectral norms from a single integral per sample.
#[derive(Debug, Clone)]
pub struct SampleSummary {
    pub moments: Vec<MomentEstimate>,
    pub operator_norm_mean: f64,
    pub operator_norm_max: f64,
}

pub fn empirical_summary(f: &Kernel, cfg: &SimConfig, orders: &[usize]) -> Result<SampleSummary> {
    let max_order = check_orders(orders)?;
    let per_sample = map_samples(f, cfg, |m| {
        (trace_powers(m, max_order), m.operator_norm_estimate(150))
    })?;
    let traces: Vec<Vec<f64>> = per_sample.iter().map(|(t, _)| t.clone()).collect();
    let norms: Vec<f64> = per_sample.iter().map(|(_, n)| *n).collect();
    Ok(SampleSummary {
        moments: estimates_from(&traces, orders),
        operator_norm_mean: norms.iter().sum::<f64>() / norms.len() as f64,
        operator_norm_max: norms.iter().cloned().fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Symmetry;

    fn small_cfg(seed: u64) -> SimConfig {
        SimConfig::new(40, 60, seed, GridSpec::new(4, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn config_validation() {
        let g = GridSpec::new(4, 1.0).unwrap();
        assert!(SimConfig::new(1, 10, 0, g).is_err());
        assert!(SimConfig::new(10, 0, 0, g).is_err());
    }

    #[test]
    fn increments_are_hermitian_and_centered() {
        let cfg = small_cfg(11);
        let h = cfg.grid.step();
        let mut trace_sum = 0.0;
        let mut sq_sum = 0.0;
        let mut count = 0usize;
        for s in 0..cfg.samples {
            let path = sample_path_stream(&cfg, s as u64);
            for inc in path.increments() {
                assert!(inc.hermiticity_defect() == 0.0);
                trace_sum += inc.normalized_trace().re;
                sq_sum += inc.mul(inc).normalized_trace().re;
                count += 1;
            }
        }
        let mean = trace_sum / count as f64;
        // Var((1/d) Tr dS) = h / d^2
        let bound = 4.0 * (h / (cfg.dimension as f64).powi(2) / count as f64).sqrt();
        assert!(mean.abs() <= bound, "mean {mean} vs bound {bound}");
        // E[(1/d) Tr dS^2] = h, sig ~ sqrt(2) h / d per draw
        let mean_sq = sq_sum / count as f64;
        let se = 2.0f64.sqrt() * h / cfg.dimension as f64 / (count as f64).sqrt();
        assert!(
            (mean_sq - h).abs() <= 5.0 * se,
            "mean {mean_sq} vs h {h} (se {se})"
        );
    }

    #[test]
    fn paths_are_seed_deterministic() {
        let cfg = small_cfg(99);
        let a = sample_path(&cfg);
        let b = sample_path(&cfg);
        for (x, y) in a.increments().iter().zip(b.increments()) {
            assert_eq!(x.data(), y.data());
        }
        let other = sample_path(&SimConfig { seed: 100, ..cfg });
        assert_ne!(a.increments()[0].data(), other.increments()[0].data());
    }

    #[test]
    fn zero_kernel_integrates_to_zero() {
        let cfg = small_cfg(1);
        let path = sample_path(&cfg);
        let z = Kernel::zeros(2, cfg.grid).unwrap();
        let m = matrix_wigner_integral(&z, &path).unwrap();
        assert!(m.frobenius_norm() == 0.0);
    }

    #[test]
    fn first_order_integral_of_unit_indicator_is_the_endpoint() {
        // f = 1_[0,1] sums the increments over [0,1]
        let cfg = small_cfg(3);
        let path = sample_path(&cfg);
        let f = Kernel::indicator(cfg.grid, 0.0, 1.0, 1).unwrap();
        let m = matrix_wigner_integral(&f, &path).unwrap();
        let mut direct = CMatrix::zeros(cfg.dimension);
        for inc in path.increments() {
            direct.add_scaled_assign(inc, Complex64::new(1.0, 0.0));
        }
        assert_eq!(m.data(), direct.data());
    }

    #[test]
    fn mirror_kernels_integrate_to_hermitian_matrices() {
        let grid = GridSpec::new(6, 1.0).unwrap();
        let cfg = SimConfig::new(30, 1, 7, grid).unwrap();
        let path = sample_path(&cfg);
        let f = Kernel::random(2, grid, 17, Symmetry::Mirror).unwrap();
        let m = matrix_wigner_integral(&f, &path).unwrap();
        assert!(m.hermiticity_defect() <= 1e-12, "{}", m.hermiticity_defect());
    }

    #[test]
    fn generic_order_matches_the_fast_path() {
        // order-2 fast path vs the generic distinct-index recursion
        let grid = GridSpec::new(4, 1.0).unwrap();
        let cfg = SimConfig::new(12, 1, 5, grid).unwrap();
        let path = sample_path(&cfg);
        let f = Kernel::random(2, grid, 23, Symmetry::None)
            .unwrap()
            .off_diagonal_projection();
        let fast = matrix_wigner_integral(&f, &path).unwrap();
        let mut slow = CMatrix::zeros(cfg.dimension);
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let c = f.value(&[i, j]);
                let prod = path.increments()[i].mul(&path.increments()[j]);
                slow.add_scaled_assign(&prod, c);
            }
        }
        for (a, b) in fast.data().iter().zip(slow.data()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn semicircle_second_and_fourth_moments() {
        let grid = GridSpec::new(4, 1.0).unwrap();
        let cfg = SimConfig::new(80, 80, 2024, grid).unwrap();
        let f = Kernel::indicator(grid, 0.0, 1.0, 1).unwrap();
        let est = empirical_moments(&f, &cfg, &[2, 3, 4]).unwrap();
        assert!((est[0].mean - 1.0).abs() <= 5.0 * est[0].std_error);
        assert!(est[1].mean.abs() <= 5.0 * est[1].std_error);
        assert!((est[2].mean - 2.0).abs() <= 5.0 * est[2].std_error);
    }

    #[test]
    fn empirical_estimates_are_deterministic() {
        let cfg = small_cfg(5);
        let f = Kernel::indicator(cfg.grid, 0.0, 1.0, 1).unwrap();
        let a = empirical_moments(&f, &cfg, &[2, 4]).unwrap();
        let b = empirical_moments(&f, &cfg, &[2, 4]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn operator_norm_estimate_matches_known_matrix() {
        let mut m = CMatrix::zeros(3);
        m.set(0, 0, Complex64::new(2.0, 0.0));
        m.set(1, 1, Complex64::new(-5.0, 0.0));
        m.set(2, 2, Complex64::new(1.0, 0.0));
        m.set(0, 2, Complex64::new(0.5, 0.0));
        m.set(2, 0, Complex64::new(0.5, 0.0));
        let est = m.operator_norm_estimate(200);
        assert!((est - 5.0).abs() < 1e-6, "est {est}");
    }

    #[test]
    fn moment_order_guard() {
        let cfg = small_cfg(6);
        let f = Kernel::indicator(cfg.grid, 0.0, 1.0, 1).unwrap();
        assert!(empirical_moments(&f, &cfg, &[9]).is_err());
    }
}
