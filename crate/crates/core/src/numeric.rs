//! Deterministic summation and random-number helpers used across the engines.

use num_complex::Complex64;
use rand_chacha::ChaCha12Rng;
use rand_core::RngCore;

/// Chunk size below which pairwise summation falls back to a plain loop.
const PAIRWISE_LEAF: usize = 1024;

/// Pairwise (tree) summation of `f(lo), ..., f(hi-1)` without materializing terms.
///
/// The reduction order depends only on the index range, so results are
/// bit-stable regardless of caller context.
pub fn pairwise_sum(lo: usize, hi: usize, f: &impl Fn(usize) -> Complex64) -> Complex64 {
    let len = hi - lo;
    if len <= PAIRWISE_LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            acc += f(i);
        }
        acc
    } else {
        let mid = lo + len / 2;
        pairwise_sum(lo, mid, f) + pairwise_sum(mid, hi, f)
    }
}

/// Real-valued variant of [`pairwise_sum`].
pub fn pairwise_sum_real(lo: usize, hi: usize, f: &impl Fn(usize) -> f64) -> f64 {
    let len = hi - lo;
    if len <= PAIRWISE_LEAF {
        let mut acc = 0.0;
        for i in lo..hi {
            acc += f(i);
        }
        acc
    } else {
        let mid = lo + len / 2;
        pairwise_sum_real(lo, mid, f) + pairwise_sum_real(mid, hi, f)
    }
}

/// Neumaier-compensated accumulator for complex values.
///
/// Used where terms arrive one at a time (depth-first traversals) and a tree
/// reduction is not available.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum_re: f64,
    sum_im: f64,
    c_re: f64,
    c_im: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        let t = self.sum_re + z.re;
        if self.sum_re.abs() >= z.re.abs() {
            self.c_re += (self.sum_re - t) + z.re;
        } else {
            self.c_re += (z.re - t) + self.sum_re;
        }
        self.sum_re = t;

        let t = self.sum_im + z.im;
        if self.sum_im.abs() >= z.im.abs() {
            self.c_im += (self.sum_im - t) + z.im;
        } else {
            self.c_im += (z.im - t) + self.sum_im;
        }
        self.sum_im = t;
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.sum_re + self.c_re, self.sum_im + self.c_im)
    }
}

/// Relative comparison against `tol * max(1, |a|, |b|)`.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1.0_f64.max(a.abs()).max(b.abs())
}

/// Standard-normal source: Box-Muller on top of a ChaCha stream.
///
/// ChaCha is counter based, so (seed, stream) fully determines the sequence on
/// every platform.
pub struct GaussianSource {
    rng: ChaCha12Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn from_rng(rng: ChaCha12Rng) -> Self {
        Self { rng, spare: None }
    }

    /// Uniform in [0, 1) with 53 random bits.
    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] so the log is finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (sin, cos) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        self.spare = Some(r * sin);
        r * cos
    }

    /// Complex gaussian with independent N(0, 1/2) parts, so E|z|^2 = 1.
    pub fn standard_complex(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(s * self.standard_normal(), s * self.standard_normal())
    }
}
