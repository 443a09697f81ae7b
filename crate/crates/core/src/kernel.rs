//! Discretized kernel algebra on `L^2([0,T]^n)`: dense complex arrays on a
//! shared grid with adjoints, symmetry predicates, tensor products and nested
//! p-contractions.
//!
//! Conventions. A kernel of order `n` stores `N^n` cell values row-major (last
//! coordinate fastest). The adjoint reverses coordinate order and conjugates:
//! `f*(t1,..,tn) = conj f(tn,..,t1)`. The nested contraction `f ~p g`
//! integrates f's last p slots against g's first p slots *in reversed order*,
//! each contracted slot contributing one factor of the cell width h; `p = 0`
//! is the tensor product.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::numeric::{pairwise_sum, pairwise_sum_real, GaussianSource};
use num_complex::Complex64;
use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;

/// Allocation guard for dense kernel storage (entries, not bytes).
pub const DEFAULT_MAX_ELEMENTS: usize = 1 << 24;

/// Symmetrization mode for [`Kernel::random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// Raw complex gaussian entries.
    None,
    /// `(g + g*) / ||g + g*||` — mirror symmetric, unit norm.
    Mirror,
    /// Real entries averaged over all coordinate permutations, unit norm.
    Full,
}

impl std::str::FromStr for Symmetry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Symmetry::None),
            "mirror" => Ok(Symmetry::Mirror),
            "full" => Ok(Symmetry::Full),
            other => Err(Error::Argument(format!("unknown symmetry mode `{other}`"))),
        }
    }
}

/// Piecewise-constant complex function on `[0,T]^n`, order 0 being a scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    order: usize,
    grid: GridSpec,
    values: Vec<Complex64>,
}

fn checked_len(order: usize, cells: usize) -> Result<usize> {
    let mut len = 1usize;
    for _ in 0..order {
        len = len
            .checked_mul(cells)
            .filter(|&l| l <= DEFAULT_MAX_ELEMENTS)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "kernel of order {order} on {cells} cells exceeds {DEFAULT_MAX_ELEMENTS} entries"
                ))
            })?;
    }
    Ok(len)
}

impl Kernel {
    pub fn new(order: usize, grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        let len = checked_len(order, grid.cells())?;
        if values.len() != len {
            return Err(Error::Validation(format!(
                "expected {len} values for order {order} on {} cells, got {}",
                grid.cells(),
                values.len()
            )));
        }
        Ok(Self {
            order,
            grid,
            values,
        })
    }

    pub fn zeros(order: usize, grid: GridSpec) -> Result<Self> {
        let len = checked_len(order, grid.cells())?;
        Ok(Self {
            order,
            grid,
            values: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    /// Order-0 kernel holding a single scalar.
    pub fn scalar(grid: GridSpec, value: Complex64) -> Self {
        Self {
            order: 0,
            grid,
            values: vec![value],
        }
    }

    /// Builds a kernel cell-by-cell from multi-indices.
    pub fn from_fn(
        order: usize,
        grid: GridSpec,
        mut f: impl FnMut(&[usize]) -> Complex64,
    ) -> Result<Self> {
        let len = checked_len(order, grid.cells())?;
        let n = grid.cells();
        let mut idx = vec![0usize; order];
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            values.push(f(&idx));
            for k in (0..order).rev() {
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(Self {
            order,
            grid,
            values,
        })
    }

    /// Order-`order` indicator of the box `[a, b]^order`; `a` and `b` must sit
    /// on cell boundaries.
    pub fn indicator(grid: GridSpec, a: f64, b: f64, order: usize) -> Result<Self> {
        if !(0.0..grid.horizon()).contains(&a) || b <= a || b > grid.horizon() {
            return Err(Error::Argument(format!(
                "indicator bounds [{a}, {b}] outside [0, {}]",
                grid.horizon()
            )));
        }
        let h = grid.step();
        let lo = a / h;
        let hi = b / h;
        let eps = 1e-9;
        if (lo - lo.round()).abs() > eps || (hi - hi.round()).abs() > eps {
            return Err(Error::Argument(format!(
                "indicator bounds [{a}, {b}] not aligned with the grid step {h}"
            )));
        }
        let lo = lo.round() as usize;
        let hi = hi.round() as usize;
        Kernel::from_fn(order, grid, |idx| {
            let inside = idx.iter().all(|&i| i >= lo && i < hi);
            Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// The order-2 kernel `(1/sqrt(m)) * sum_{k<m} 1_{(k,k+1]}(x) 1_{(k,k+1]}(y)`.
    ///
    /// Requires an integer horizon >= m whose cells align with unit intervals.
    pub fn breuer_major(m: usize, grid: GridSpec) -> Result<Self> {
        if m == 0 {
            return Err(Error::Argument("breuer-major index m must be >= 1".into()));
        }
        let per_unit = grid.cells_per_unit().ok_or_else(|| {
            Error::Argument(format!(
                "grid {}x[0,{}] is not aligned with integer boundaries",
                grid.cells(),
                grid.horizon()
            ))
        })?;
        if (grid.horizon() as usize) < m {
            return Err(Error::Argument(format!(
                "grid horizon {} shorter than m = {m}",
                grid.horizon()
            )));
        }
        let amp = 1.0 / (m as f64).sqrt();
        Kernel::from_fn(2, grid, |idx| {
            let (u, v) = (idx[0] / per_unit, idx[1] / per_unit);
            Complex64::new(if u == v && u < m { amp } else { 0.0 }, 0.0)
        })
    }

    /// Reproducible pseudo-random kernel; see [`Symmetry`] for the modes.
    pub fn random(order: usize, grid: GridSpec, seed: u64, symmetry: Symmetry) -> Result<Self> {
        if order == 0 {
            return Err(Error::Argument("random kernel needs order >= 1".into()));
        }
        let len = checked_len(order, grid.cells())?;
        let mut gauss = GaussianSource::from_rng(ChaCha12Rng::seed_from_u64(seed));
        match symmetry {
            Symmetry::None => {
                let values = (0..len).map(|_| gauss.standard_complex()).collect();
                Kernel::new(order, grid, values)
            }
            Symmetry::Mirror => {
                let raw = Kernel::new(
                    order,
                    grid,
                    (0..len).map(|_| gauss.standard_complex()).collect(),
                )?;
                let sym = raw.add(&raw.adjoint())?;
                let (unit, _) = sym.normalized()?;
                Ok(unit)
            }
            Symmetry::Full => {
                let raw = Kernel::new(
                    order,
                    grid,
                    (0..len)
                        .map(|_| Complex64::new(gauss.standard_normal(), 0.0))
                        .collect(),
                )?;
                let (unit, _) = raw.symmetrized().normalized()?;
                Ok(unit)
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Scalar value of an order-0 kernel.
    pub fn scalar_value(&self) -> Option<Complex64> {
        (self.order == 0).then(|| self.values[0])
    }

    pub fn linear_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        let n = self.grid.cells();
        idx.iter().fold(0, |acc, &i| acc * n + i)
    }

    pub fn value(&self, idx: &[usize]) -> Complex64 {
        self.values[self.linear_index(idx)]
    }

    /// Reverses the base-N digits of a linear index.
    fn reverse_index(&self, mut lin: usize) -> usize {
        let n = self.grid.cells();
        let mut out = 0;
        for _ in 0..self.order {
            out = out * n + lin % n;
            lin /= n;
        }
        out
    }

    /// `f*(t1,..,tn) = conj f(tn,..,t1)`; an exact involution and isometry.
    pub fn adjoint(&self) -> Kernel {
        let values = (0..self.values.len())
            .map(|i| self.values[self.reverse_index(i)].conj())
            .collect();
        Kernel {
            order: self.order,
            grid: self.grid,
            values,
        }
    }

    /// Entrywise conjugate (no coordinate reversal).
    pub fn conjugate(&self) -> Kernel {
        Kernel {
            order: self.order,
            grid: self.grid,
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Kernel {
        Kernel {
            order: self.order,
            grid: self.grid,
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Kernel) -> Result<Kernel> {
        self.compatible(other)?;
        Ok(Kernel {
            order: self.order,
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Kernel) -> Result<Kernel> {
        self.compatible(other)?;
        Ok(Kernel {
            order: self.order,
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    fn compatible(&self, other: &Kernel) -> Result<()> {
        self.grid.ensure_matches(&other.grid)?;
        if self.order != other.order {
            return Err(Error::Validation(format!(
                "kernel orders differ: {} vs {}",
                self.order, other.order
            )));
        }
        Ok(())
    }

    /// `<f, g> = h^n sum f conj(g)`, conjugate-linear in `g`.
    pub fn inner(&self, other: &Kernel) -> Result<Complex64> {
        self.compatible(other)?;
        let hn = self.grid.step().powi(self.order as i32);
        let s = pairwise_sum(0, self.values.len(), &|i| {
            self.values[i] * other.values[i].conj()
        });
        Ok(hn * s)
    }

    pub fn norm_sq(&self) -> f64 {
        let hn = self.grid.step().powi(self.order as i32);
        hn * pairwise_sum_real(0, self.values.len(), &|i| self.values[i].norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `f / ||f||` together with the original norm.
    pub fn normalized(&self) -> Result<(Kernel, f64)> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate(format!(
                "cannot normalize kernel with norm {norm}"
            )));
        }
        Ok((self.scale(Complex64::new(1.0 / norm, 0.0)), norm))
    }

    /// `||f - f*|| <= tol * max(1, ||f||)`.
    pub fn is_mirror_symmetric(&self, tol: f64) -> bool {
        let hn = self.grid.step().powi(self.order as i32);
        let dev_sq = hn
            * pairwise_sum_real(0, self.values.len(), &|i| {
                (self.values[i] - self.values[self.reverse_index(i)].conj()).norm_sqr()
            });
        dev_sq.sqrt() <= tol * 1.0_f64.max(self.norm())
    }

    /// Real-valued and invariant under all coordinate permutations, within
    /// `tol` relative to `max(1, ||f||)`.
    ///
    /// Permutation invariance is checked on the adjacent transpositions, which
    /// generate the full symmetric group.
    pub fn is_fully_symmetric(&self, tol: f64) -> bool {
        let scale = tol * 1.0_f64.max(self.norm());
        let hn = self.grid.step().powi(self.order as i32);
        let imag_sq = hn * pairwise_sum_real(0, self.values.len(), &|i| self.values[i].im.powi(2));
        if imag_sq.sqrt() > scale {
            return false;
        }
        let n = self.grid.cells();
        for k in 0..self.order.saturating_sub(1) {
            // stride trick: swapping axes k, k+1 permutes linear indices
            let stride_hi = n.pow((self.order - 1 - k) as u32);
            let dev_sq = hn
                * pairwise_sum_real(0, self.values.len(), &|i| {
                    let upper = i / (stride_hi * n);
                    let rem = i % (stride_hi * n);
                    let a = rem / stride_hi;
                    let rem2 = rem % stride_hi;
                    let b = rem2 / (stride_hi / n);
                    let low = rem2 % (stride_hi / n);
                    let swapped =
                        ((upper * n + b) * n + a) * (stride_hi / n) + low;
                    (self.values[i] - self.values[swapped]).norm_sqr()
                });
            if dev_sq.sqrt() > scale {
                return false;
            }
        }
        true
    }

    /// Average over all coordinate permutations.
    ///
    /// Terms are summed in sorted index order, so cells in one symmetry orbit
    /// receive bit-identical values and a fully symmetric result satisfies
    /// `f = f*` exactly.
    pub fn symmetrized(&self) -> Kernel {
        if self.order <= 1 {
            return self.clone();
        }
        let perms = permutations(self.order);
        let n = self.grid.cells();
        let inv = 1.0 / perms.len() as f64;
        let mut digits = vec![0usize; self.order];
        let mut orbit = Vec::with_capacity(perms.len());
        let mut values = Vec::with_capacity(self.values.len());
        for lin in 0..self.values.len() {
            let mut rem = lin;
            for k in (0..self.order).rev() {
                digits[k] = rem % n;
                rem /= n;
            }
            orbit.clear();
            for perm in &perms {
                let mut idx = 0;
                for &s in perm {
                    idx = idx * n + digits[s];
                }
                orbit.push(idx);
            }
            orbit.sort_unstable();
            let mut acc = Complex64::new(0.0, 0.0);
            for &idx in &orbit {
                acc += self.values[idx];
            }
            values.push(acc * inv);
        }
        Kernel {
            order: self.order,
            grid: self.grid,
            values,
        }
    }

    /// Nested p-contraction `f ~p g`: order `n + m - 2p`, f's trailing slots
    /// against g's leading slots in reversed order, one factor of h per
    /// contracted slot. `p = 0` is the tensor product.
    pub fn contract(&self, g: &Kernel, p: usize) -> Result<Kernel> {
        self.grid.ensure_matches(&g.grid)?;
        let (n, m) = (self.order, g.order);
        if p > n.min(m) {
            return Err(Error::Argument(format!(
                "contraction depth {p} exceeds min({n}, {m})"
            )));
        }
        let cells = self.grid.cells();
        let out_order = n + m - 2 * p;
        let _ = checked_len(out_order, cells)?;
        let left = cells.pow((n - p) as u32);
        let mid = cells.pow(p as u32);
        let right = cells.pow((m - p) as u32);
        let hp = self.grid.step().powi(p as i32);
        let reverse_p = |mut s: usize| {
            let mut out = 0;
            for _ in 0..p {
                out = out * cells + s % cells;
                s /= cells;
            }
            out
        };
        let mut values = Vec::with_capacity(left * right);
        for a in 0..left {
            for b in 0..right {
                let sum = pairwise_sum(0, mid, &|s| {
                    self.values[a * mid + s] * g.values[reverse_p(s) * right + b]
                });
                values.push(hp * sum);
            }
        }
        Kernel::new(out_order, self.grid, values)
    }

    /// Zeroes every cell whose multi-index repeats a coordinate.
    pub fn off_diagonal_projection(&self) -> Kernel {
        if self.order <= 1 {
            return self.clone();
        }
        let n = self.grid.cells();
        let mut digits = vec![0usize; self.order];
        let mut values = self.values.clone();
        for (lin, v) in values.iter_mut().enumerate() {
            let mut rem = lin;
            for k in (0..self.order).rev() {
                digits[k] = rem % n;
                rem /= n;
            }
            let mut repeated = false;
            'outer: for i in 0..self.order {
                for j in i + 1..self.order {
                    if digits[i] == digits[j] {
                        repeated = true;
                        break 'outer;
                    }
                }
            }
            if repeated {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        Kernel {
            order: self.order,
            grid: self.grid,
            values,
        }
    }

    /// Squared L2 mass carried by cells with repeated coordinates.
    pub fn diagonal_mass(&self) -> f64 {
        self.norm_sq() - self.off_diagonal_projection().norm_sq()
    }

    /// True iff every cell with a repeated coordinate is exactly zero.
    pub fn vanishes_on_diagonals(&self) -> bool {
        self == &self.off_diagonal_projection()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::approx_eq;

    const TOL: f64 = 1e-10;

    fn grid(n: usize, t: f64) -> GridSpec {
        GridSpec::new(n, t).unwrap()
    }

    #[test]
    fn adjoint_is_an_involution_and_isometry() {
        let f = Kernel::random(3, grid(6, 1.0), 11, Symmetry::None).unwrap();
        assert_eq!(f.adjoint().adjoint(), f);
        assert!(approx_eq(f.adjoint().norm(), f.norm(), 1e-14));
    }

    #[test]
    fn adjoint_of_rank_one_product() {
        // f = g (x) k with order-1 factors: adjoint reverses and conjugates
        let g = Kernel::random(1, grid(5, 1.0), 1, Symmetry::None).unwrap();
        let k = Kernel::random(1, grid(5, 1.0), 2, Symmetry::None).unwrap();
        let f = g.contract(&k, 0).unwrap();
        let expected = k.conjugate().contract(&g.conjugate(), 0).unwrap();
        let dev = f.adjoint().sub(&expected).unwrap().norm();
        assert!(dev < 1e-14);
    }

    #[test]
    fn contraction_adjoint_identity() {
        // (f ~p g)* = g* ~p f* exactly on grid arithmetic
        let f = Kernel::random(2, grid(6, 1.5), 3, Symmetry::None).unwrap();
        let g = Kernel::random(3, grid(6, 1.5), 4, Symmetry::None).unwrap();
        for p in 0..=2 {
            let lhs = f.contract(&g, p).unwrap().adjoint();
            let rhs = g.adjoint().contract(&f.adjoint(), p).unwrap();
            assert!(lhs.sub(&rhs).unwrap().norm() < 1e-13, "p = {p}");
        }
    }

    #[test]
    fn full_contraction_is_the_inner_product_with_adjoint() {
        let f = Kernel::random(2, grid(7, 1.0), 5, Symmetry::None).unwrap();
        let g = Kernel::random(2, grid(7, 1.0), 6, Symmetry::None).unwrap();
        let full = f.contract(&g, 2).unwrap();
        let scalar = full.scalar_value().unwrap();
        let inner = f.inner(&g.adjoint()).unwrap();
        assert!((scalar - inner).norm() < 1e-13);
        // and f ~n g = g ~n f
        let swapped = g.contract(&f, 2).unwrap().scalar_value().unwrap();
        assert!((scalar - swapped).norm() < 1e-13);
    }

    #[test]
    fn zero_contraction_is_tensor_product() {
        let f = Kernel::random(1, grid(4, 1.0), 7, Symmetry::None).unwrap();
        let g = Kernel::random(2, grid(4, 1.0), 8, Symmetry::None).unwrap();
        let t = f.contract(&g, 0).unwrap();
        assert_eq!(t.order(), 3);
        let dev = t.value(&[1, 2, 3]) - f.value(&[1]) * g.value(&[2, 3]);
        assert!(dev.norm() < 1e-15);
    }

    #[test]
    fn contraction_norm_bound() {
        // ||f ~p g|| <= ||f|| ||g|| (iterated Cauchy-Schwarz)
        for seed in 0..5 {
            let f = Kernel::random(2, grid(5, 1.0), seed, Symmetry::None).unwrap();
            let g = Kernel::random(2, grid(5, 1.0), seed + 100, Symmetry::None).unwrap();
            for p in 0..=2 {
                assert!(
                    f.contract(&g, p).unwrap().norm() <= f.norm() * g.norm() * (1.0 + 1e-12),
                    "seed {seed} p {p}"
                );
            }
        }
    }

    #[test]
    fn contraction_is_not_associative() {
        // a concrete witness where ((f ~1 g) ~1 k) != (f ~1 (g ~1 k)): with
        // orders (2, 1, 2), the left side ends up pairing f's leading slot
        // against k, the right side pairs k's trailing slot against f
        let f = Kernel::random(2, grid(4, 1.0), 21, Symmetry::None).unwrap();
        let g = Kernel::random(1, grid(4, 1.0), 22, Symmetry::None).unwrap();
        let k = Kernel::random(2, grid(4, 1.0), 23, Symmetry::None).unwrap();
        let left = f.contract(&g, 1).unwrap().contract(&k, 1).unwrap();
        let right = f.contract(&g.contract(&k, 1).unwrap(), 1).unwrap();
        let gap = left.sub(&right).unwrap().norm();
        assert!(
            gap > 1e-6,
            "expected a genuine associativity failure, gap {gap}"
        );
    }

    #[test]
    fn contraction_rejects_bad_inputs() {
        let f = Kernel::random(2, grid(4, 1.0), 1, Symmetry::None).unwrap();
        let g = Kernel::random(2, grid(5, 1.0), 1, Symmetry::None).unwrap();
        assert!(matches!(f.contract(&g, 1), Err(Error::Grid(_))));
        let k = Kernel::random(1, grid(4, 1.0), 1, Symmetry::None).unwrap();
        assert!(matches!(f.contract(&k, 2), Err(Error::Argument(_))));
    }

    #[test]
    fn inner_product_properties() {
        let f = Kernel::random(2, grid(6, 1.0), 31, Symmetry::None).unwrap();
        let g = Kernel::random(2, grid(6, 1.0), 32, Symmetry::None).unwrap();
        let ff = f.inner(&f).unwrap();
        assert!(ff.im.abs() < 1e-14 && ff.re >= 0.0);
        let fg = f.inner(&g).unwrap();
        let gf = g.inner(&f).unwrap();
        assert!((fg - gf.conj()).norm() < 1e-13);
        // disjoint indicators are orthogonal
        let a = Kernel::indicator(grid(8, 2.0), 0.0, 1.0, 1).unwrap();
        let b = Kernel::indicator(grid(8, 2.0), 1.0, 2.0, 1).unwrap();
        assert_eq!(a.inner(&b).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn mirror_symmetry_predicate() {
        let real1 = Kernel::random(1, grid(8, 1.0), 41, Symmetry::Full).unwrap();
        assert!(real1.is_mirror_symmetric(TOL));
        let asym = Kernel::from_fn(2, grid(4, 1.0), |idx| {
            Complex64::new((idx[0] * 4 + 2 * idx[1]) as f64, 0.0)
        })
        .unwrap();
        assert!(!asym.is_mirror_symmetric(TOL));
        let m = Kernel::random(3, grid(4, 1.0), 42, Symmetry::Mirror).unwrap();
        assert!(m.is_mirror_symmetric(1e-12));
        assert!(approx_eq(m.norm(), 1.0, 1e-12));
    }

    #[test]
    fn full_symmetry_predicate() {
        let box3 = Kernel::indicator(grid(6, 1.0), 0.0, 1.0, 3).unwrap();
        assert!(box3.is_fully_symmetric(TOL));
        let real1 = Kernel::random(1, grid(8, 1.0), 43, Symmetry::None)
            .unwrap()
            .conjugate()
            .add(&Kernel::random(1, grid(8, 1.0), 43, Symmetry::None).unwrap())
            .unwrap()
            .scale(Complex64::new(0.5, 0.0));
        assert!(real1.is_fully_symmetric(TOL)); // single coordinate, real
        let mirror_complex = Kernel::random(2, grid(6, 1.0), 44, Symmetry::Mirror).unwrap();
        assert!(!mirror_complex.is_fully_symmetric(TOL));
        let full = Kernel::random(3, grid(5, 1.0), 45, Symmetry::Full).unwrap();
        assert!(full.is_fully_symmetric(1e-12));
        assert_eq!(full, full.adjoint()); // fully symmetric implies f = f* exactly
    }

    #[test]
    fn breuer_major_kernel_values() {
        let g = grid(16, 4.0);
        for m in [1usize, 2, 4] {
            let f = Kernel::breuer_major(m, g).unwrap();
            assert!(approx_eq(f.norm(), 1.0, 1e-13), "m = {m}");
            assert!(f.is_mirror_symmetric(1e-13));
            assert!(f.is_fully_symmetric(1e-13));
            let c = f.contract(&f, 1).unwrap();
            assert!(
                approx_eq(c.norm(), 1.0 / (m as f64).sqrt(), 1e-12),
                "m = {m}"
            );
        }
        let f1 = Kernel::breuer_major(1, grid(4, 1.0)).unwrap();
        assert!(approx_eq(f1.norm(), 1.0, 1e-14));
        assert!(Kernel::breuer_major(5, grid(4, 1.0)).is_err()); // horizon too short
        assert!(Kernel::breuer_major(2, grid(5, 2.5)).is_err()); // misaligned
    }

    #[test]
    fn random_kernels_are_reproducible() {
        let a = Kernel::random(2, grid(8, 1.0), 99, Symmetry::Mirror).unwrap();
        let b = Kernel::random(2, grid(8, 1.0), 99, Symmetry::Mirror).unwrap();
        assert_eq!(a, b);
        let c = Kernel::random(2, grid(8, 1.0), 100, Symmetry::Mirror).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn off_diagonal_projection_zeroes_repeats() {
        let f = Kernel::random(2, grid(4, 1.0), 7, Symmetry::None).unwrap();
        let g = f.off_diagonal_projection();
        for i in 0..4 {
            assert_eq!(g.value(&[i, i]), Complex64::new(0.0, 0.0));
            for j in 0..4 {
                if i != j {
                    assert_eq!(g.value(&[i, j]), f.value(&[i, j]));
                }
            }
        }
        assert!(g.vanishes_on_diagonals());
        assert!(f.diagonal_mass() > 0.0);
    }

    #[test]
    fn partial_contraction_matches_direct_triple_sum() {
        // sum of all cells of f ~p g (h-weighted) equals the direct sum over
        // every (a, s, b) assignment computed without contract()
        let f = Kernel::random(2, grid(4, 1.0), 61, Symmetry::None).unwrap();
        let g = Kernel::random(2, grid(4, 1.0), 62, Symmetry::None).unwrap();
        let p = 1;
        let c = f.contract(&g, p).unwrap();
        let h = c.grid().step();
        let weighted: Complex64 = c.values().iter().sum::<Complex64>()
            * Complex64::new(h.powi(c.order() as i32), 0.0);
        let mut direct = Complex64::new(0.0, 0.0);
        for a in 0..4 {
            for s in 0..4 {
                for b in 0..4 {
                    direct += f.value(&[a, s]) * g.value(&[s, b]);
                }
            }
        }
        direct *= Complex64::new(h.powi(3), 0.0);
        assert!((weighted - direct).norm() < 1e-13);
    }
}
