//! Exact mixed moments of Wigner and Wiener stochastic integrals over
//! discretized kernels.
//!
//! A product of integrals `I_{n1}(f1) ... I_{nr}(fr)` has expectation equal to
//! a sum of pairing integrals of `f1 (x) ... (x) fr`: over the *noncrossing*
//! pairings respecting `n1 (x) ... (x) nr` in the free (Wigner) case, and over
//! *all* respectful pairings in the classical (Wiener) case. On the grid a
//! pairing integral identifies paired slots and sums over free cell
//! assignments with one factor of h per pair.

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::numeric::CompensatedSum;
use crate::pairings::{
    catalan, enumerate_nc2_respecting_with_cap, for_each_pairing_with_cap, respects,
    IntervalPartition, Pairing,
};
use num_complex::Complex64;
use rayon::prelude::*;

/// Default cap on the total order of a mixed moment (pairing counts and
/// integral loops grow combinatorially past this).
pub const DEFAULT_TOTAL_ORDER_CAP: usize = 12;

/// Which pairing class a moment was summed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentEngine {
    /// Noncrossing respectful pairings (free case).
    Wigner,
    /// All respectful pairings, crossings included (classical case).
    Wiener,
}

impl std::fmt::Display for MomentEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MomentEngine::Wigner => write!(f, "wigner"),
            MomentEngine::Wiener => write!(f, "wiener"),
        }
    }
}

/// A mixed moment with its per-pairing breakdown; `value` is the sum of the
/// contributions.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub engine: MomentEngine,
    pub factor_orders: Vec<usize>,
    pub value: Complex64,
    pub terms: Vec<(Pairing, Complex64)>,
}

/// Pairing integral of `factors[0] (x) ... (x) factors[r-1]` against a complete
/// pairing of the concatenated slots: paired slots are identified and the
/// product is summed over free cell assignments, weighted by `h^k` for `k`
/// pairs.
///
/// Branches whose partial product is exactly zero are skipped; this does not
/// change the sum.
pub fn pairing_integral(pairing: &Pairing, factors: &[&Kernel]) -> Result<Complex64> {
    let total: usize = factors.iter().map(|f| f.order()).sum();
    if total != pairing.ground_size() {
        return Err(Error::Argument(format!(
            "pairing on {} indices vs factors with total order {total}",
            pairing.ground_size()
        )));
    }
    if factors.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let grid = *factors[0].grid();
    for f in &factors[1..] {
        grid.ensure_matches(f.grid())?;
    }

    let k = pairing.pairs().len();
    // union-find is trivial for a pairing: the pair index is the class
    let mut var_of_slot = vec![usize::MAX; total];
    for (q, &(a, b)) in pairing.pairs().iter().enumerate() {
        var_of_slot[a - 1] = q;
        var_of_slot[b - 1] = q;
    }
    // DFS positions: variables ordered by first appearance left to right, so
    // each factor's value becomes available as early as possible
    let mut pos_of_var = vec![usize::MAX; k];
    let mut next_pos = 0;
    for s in 0..total {
        let q = var_of_slot[s];
        if pos_of_var[q] == usize::MAX {
            pos_of_var[q] = next_pos;
            next_pos += 1;
        }
    }
    struct FactorPlan {
        positions: Vec<usize>,
    }
    let mut plans = Vec::with_capacity(factors.len());
    let mut completing: Vec<Vec<usize>> = vec![Vec::new(); k.max(1)];
    let mut slot = 0;
    for (i, f) in factors.iter().enumerate() {
        let positions: Vec<usize> = (0..f.order())
            .map(|j| pos_of_var[var_of_slot[slot + j]])
            .collect();
        slot += f.order();
        let completes_at = positions.iter().copied().max().unwrap_or(0);
        completing[completes_at].push(i);
        plans.push(FactorPlan { positions });
    }

    struct Dfs<'a> {
        cells: usize,
        depth_total: usize,
        factors: &'a [&'a Kernel],
        plans: &'a [FactorPlan],
        completing: &'a [Vec<usize>],
        assignment: Vec<usize>,
        acc: CompensatedSum,
    }
    impl Dfs<'_> {
        fn run(&mut self, depth: usize, prod: Complex64) {
            if depth == self.depth_total {
                self.acc.add(prod);
                return;
            }
            for c in 0..self.cells {
                self.assignment[depth] = c;
                let mut p = prod;
                let mut dead = false;
                for &fi in &self.completing[depth] {
                    let idx = self.plans[fi]
                        .positions
                        .iter()
                        .fold(0, |a, &pp| a * self.cells + self.assignment[pp]);
                    let v = self.factors[fi].values()[idx];
                    if v.re == 0.0 && v.im == 0.0 {
                        dead = true;
                        break;
                    }
                    p *= v;
                }
                if !dead {
                    self.run(depth + 1, p);
                }
            }
        }
    }

    if k == 0 {
        // only order-0 factors: plain product of the scalars
        let mut p = Complex64::new(1.0, 0.0);
        for f in factors {
            p *= f.scalar_value().unwrap();
        }
        return Ok(p);
    }

    let mut dfs = Dfs {
        cells: grid.cells(),
        depth_total: k,
        factors,
        plans: &plans,
        completing: &completing,
        assignment: vec![0; k],
        acc: CompensatedSum::new(),
    };
    dfs.run(0, Complex64::new(1.0, 0.0));
    Ok(dfs.acc.value() * grid.step().powi(k as i32))
}

fn validate_factors(factors: &[&Kernel]) -> Result<Vec<usize>> {
    if factors.is_empty() {
        return Err(Error::Argument("moment needs at least one factor".into()));
    }
    let grid = factors[0].grid();
    for f in factors {
        grid.ensure_matches(f.grid())?;
        if f.order() == 0 {
            return Err(Error::Argument(
                "moment factors must have order >= 1".into(),
            ));
        }
    }
    Ok(factors.iter().map(|f| f.order()).collect())
}

fn sum_terms(
    engine: MomentEngine,
    factor_orders: Vec<usize>,
    pairings: Vec<Pairing>,
    factors: &[&Kernel],
) -> Result<MomentReport> {
    let terms: Vec<(Pairing, Complex64)> = pairings
        .into_par_iter()
        .map(|p| {
            let v = pairing_integral(&p, factors)?;
            Ok((p, v))
        })
        .collect::<Result<_>>()?;
    // fixed pairing order, sequential reduction: bit-stable results
    let mut value = Complex64::new(0.0, 0.0);
    for (_, v) in &terms {
        value += v;
    }
    Ok(MomentReport {
        engine,
        factor_orders,
        value,
        terms,
    })
}

/// Free mixed moment `phi[I_{n1}(f1) ... I_{nr}(fr)]`: the sum of pairing
/// integrals over noncrossing pairings respecting `n1 (x) ... (x) nr`.
///
/// Odd total order yields zero with an empty breakdown.
pub fn wigner_mixed_moment(factors: &[&Kernel]) -> Result<MomentReport> {
    wigner_mixed_moment_with_cap(factors, DEFAULT_TOTAL_ORDER_CAP)
}

pub fn wigner_mixed_moment_with_cap(factors: &[&Kernel], cap: usize) -> Result<MomentReport> {
    let orders = validate_factors(factors)?;
    let total: usize = orders.iter().sum();
    if total % 2 != 0 {
        return Ok(MomentReport {
            engine: MomentEngine::Wigner,
            factor_orders: orders,
            value: Complex64::new(0.0, 0.0),
            terms: Vec::new(),
        });
    }
    if total > cap {
        return Err(Error::Resource(format!(
            "total order {total} exceeds moment cap {cap}"
        )));
    }
    let ip = IntervalPartition::new(orders.iter().copied())?;
    let pairings = enumerate_nc2_respecting_with_cap(&ip, cap.max(total))?;
    sum_terms(MomentEngine::Wigner, orders, pairings, factors)
}

/// Classical mixed moment: the same sum taken over *all* respectful pairings,
/// crossing ones included. Intended for fully symmetric factors.
pub fn wiener_mixed_moment(factors: &[&Kernel]) -> Result<MomentReport> {
    wiener_mixed_moment_with_cap(factors, DEFAULT_TOTAL_ORDER_CAP)
}

pub fn wiener_mixed_moment_with_cap(factors: &[&Kernel], cap: usize) -> Result<MomentReport> {
    let orders = validate_factors(factors)?;
    let total: usize = orders.iter().sum();
    if total % 2 != 0 {
        return Ok(MomentReport {
            engine: MomentEngine::Wiener,
            factor_orders: orders,
            value: Complex64::new(0.0, 0.0),
            terms: Vec::new(),
        });
    }
    if total > cap {
        return Err(Error::Resource(format!(
            "total order {total} exceeds moment cap {cap}"
        )));
    }
    let ip = IntervalPartition::new(orders.iter().copied())?;
    let mut pairings = Vec::new();
    for_each_pairing_with_cap(total, cap.max(total), |p| {
        if respects(p, &ip).expect("sizes match by construction") {
            pairings.push(p.clone());
        }
    })?;
    sum_terms(MomentEngine::Wiener, orders, pairings, factors)
}

/// Chaos decomposition of `I_n(f) I_m(g)`: the component of order
/// `n + m - 2p` is the contraction `f ~p g`, for `0 <= p <= min(n, m)`.
pub fn product_expand(f: &Kernel, g: &Kernel) -> Result<crate::chaos::ChaosElement> {
    f.grid().ensure_matches(g.grid())?;
    let mut out = crate::chaos::ChaosElement::new(*f.grid());
    for p in 0..=f.order().min(g.order()) {
        out.add_component(f.contract(g, p)?)?;
    }
    Ok(out)
}

/// Moments of the semicircle law of variance `t`: zero for odd `k`, scaled
/// Catalan `C_{k/2} t^{k/2}` for even `k`.
pub fn semicircle_moment(k: u32, t: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Argument(format!("variance must be positive, got {t}")));
    }
    if k % 2 == 1 {
        return Ok(0.0);
    }
    Ok(catalan(k / 2)? as f64 * t.powi((k / 2) as i32))
}

/// Chebyshev polynomials of the second kind in monic (semicircle-orthonormal)
/// normalization: `U_0 = 1`, `U_1 = x`, `U_{n+1} = x U_n - U_{n-1}`.
///
/// On `[-2, 2]` they satisfy `U_n(2 cos a) = sin((n+1) a) / sin a`.
pub fn chebyshev_u(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = x;
    for _ in 1..n {
        let next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}
