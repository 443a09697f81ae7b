//! Kernel-level Malliavin operators on the chaos: gradient slots, adapted
//! projection, Clark-Ocone reconstruction, the fourth-moment gap, and the
//! quantitative semicircle-distance bound for double integrals.
//!
//! The gradient of `I_n(f)` splits `f` into `n` bi-kernel slots; slot `k`
//! reads the kernel as (left order k-1, time slot, right order n-k). The
//! adapted projection restricts a slot by comparing cell indices: diagonal
//! cells are not null on a grid, so operators that depend on the diagonal
//! state their convention explicitly instead of resolving it silently.

use crate::chaos::ChaosElement;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use num_complex::Complex64;

/// Default relative tolerance for symmetry checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Renormalization window: operations stated for unit kernels accept a norm
/// within 10% of 1 and rescale, reporting the factor; larger drift errors.
pub fn unit_window(f: &Kernel) -> Result<(Kernel, f64)> {
    let norm = f.norm();
    if (norm - 1.0).abs() > 0.1 {
        return Err(Error::Argument(format!(
            "kernel norm {norm} outside the 10% renormalization window"
        )));
    }
    Ok((f.scale(Complex64::new(1.0 / norm, 0.0)), norm))
}

/// One gradient slot: the kernel of `f(t1,..,t_{k-1}, t, t_{k+1},..,tn)` read
/// as a (left, time, right) bi-kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSlot {
    position: usize, // 1-based slot index k
    kernel: Kernel,
}

impl GradientSlot {
    pub fn position(&self) -> usize {
        self.position
    }

    pub fn left_order(&self) -> usize {
        self.position - 1
    }

    pub fn right_order(&self) -> usize {
        self.kernel.order() - self.position
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    /// Adapted restriction of the slot: keeps a cell only when every other
    /// coordinate's cell strictly precedes the slot coordinate's cell.
    pub fn adapted_restriction(&self) -> Kernel {
        let order = self.kernel.order();
        let n = self.kernel.grid().cells();
        let k = self.position - 1;
        let mut digits = vec![0usize; order];
        let mut values = self.kernel.values().to_vec();
        for (lin, v) in values.iter_mut().enumerate() {
            let mut rem = lin;
            for d in (0..order).rev() {
                digits[d] = rem % n;
                rem /= n;
            }
            let slot_cell = digits[k];
            let adapted = digits
                .iter()
                .enumerate()
                .all(|(j, &c)| j == k || c < slot_cell);
            if !adapted {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        Kernel::new(order, *self.kernel.grid(), values).expect("same shape")
    }
}

/// The `n` slot kernels of the gradient of `I_n(f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientKernels {
    slots: Vec<GradientSlot>,
}

impl GradientKernels {
    pub fn slots(&self) -> &[GradientSlot] {
        &self.slots
    }

    /// `sum_k ||slot_k||^2`, equal to `n ||f||^2`.
    pub fn energy(&self) -> f64 {
        self.slots.iter().map(|s| s.kernel.norm_sq()).sum()
    }
}

/// Gradient of `I_n(f)` at kernel level.
pub fn gradient(f: &Kernel) -> Result<GradientKernels> {
    if f.order() == 0 {
        return Err(Error::Argument(
            "gradient needs a kernel of order >= 1".into(),
        ));
    }
    let slots = (1..=f.order())
        .map(|position| GradientSlot {
            position,
            kernel: f.clone(),
        })
        .collect();
    Ok(GradientKernels { slots })
}

/// Clark-Ocone reconstruction at kernel level: the divergence of the adapted
/// projection of the gradient, `delta(Gamma grad I_n(f))`.
///
/// For each slot the kernel is restricted to cells where all other
/// coordinates strictly precede the slot coordinate, re-inserted at the slot
/// position, and summed. Off the grid diagonal exactly one coordinate is
/// maximal, so the result reproduces `f` cell by cell. Cells with repeated
/// coordinates are grid-ambiguous and must be zero up front.
pub fn clark_ocone_reconstruct(f: &Kernel) -> Result<Kernel> {
    if f.order() == 0 {
        return Err(Error::Argument(
            "reconstruction needs a kernel of order >= 1".into(),
        ));
    }
    if !f.vanishes_on_diagonals() {
        return Err(Error::Precondition(
            "kernel carries mass on diagonal cells; restrict it off-diagonal first".into(),
        ));
    }
    let grad = gradient(f)?;
    let mut out = Kernel::zeros(f.order(), *f.grid())?;
    for slot in grad.slots() {
        out = out.add(&slot.adapted_restriction())?;
    }
    Ok(out)
}

/// Clark-Ocone formula on a chaos expansion: `F = phi(F) + delta(Gamma grad F)`.
pub fn clark_ocone(e: &ChaosElement) -> Result<ChaosElement> {
    let mut out = ChaosElement::new(*e.grid());
    out.add_component(Kernel::scalar(*e.grid(), e.mean()))?;
    for (order, kernel) in e.components() {
        if order == 0 {
            continue;
        }
        out.add_component(clark_ocone_reconstruct(kernel)?)?;
    }
    Ok(out)
}

/// `sum_{p=1}^{n-1} ||f ~p f*||^2 = phi(|I_n(f)|^4) - 2` for unit `f`.
///
/// Always nonnegative; strictly positive for nonzero mirror-symmetric kernels
/// of order >= 2, which is what rules out semicircular laws in higher chaoses.
pub fn fourth_moment_gap(f: &Kernel) -> Result<f64> {
    if f.order() == 0 {
        return Err(Error::Argument(
            "fourth-moment gap needs a kernel of order >= 1".into(),
        ));
    }
    let (unit, _) = unit_window(f)?;
    let adj = unit.adjoint();
    let mut gap = 0.0;
    for p in 1..unit.order() {
        gap += unit.contract(&adj, p)?.norm_sq();
    }
    Ok(gap)
}

/// Distance bound of a double integral from the standard semicircle, with the
/// chaos components backing it.
#[derive(Debug, Clone)]
pub struct DistanceBoundReport {
    /// `(1/2) sqrt(3/2) ||f ~1 f||`.
    pub bound: f64,
    /// `phi(I_2(f)^4) - 2 = ||f ~1 f||^2`.
    pub gap: f64,
    pub contraction_norm: f64,
    /// Kernels of the three bi-chaos components of the Malliavin deviation:
    /// `conj(f) ~1 conj(f)`, `conj(f) ~1 f + f ~1 conj(f)`, `f ~1 f`.
    pub components: [Kernel; 3],
    pub component_norms: [f64; 3],
    /// Squared norm of the Malliavin deviation, recovered from the components
    /// through the bi-chaos isometry: a quarter of the component energy.
    pub deviation_sq: f64,
    /// Norm of the input before rescaling to the unit sphere.
    pub renormalization: f64,
}

/// Semicircle-distance bound for `I_2(f)` with `f` mirror symmetric and of
/// unit norm (within the 10% window).
pub fn distance_bound_order2(f: &Kernel) -> Result<DistanceBoundReport> {
    if f.order() != 2 {
        return Err(Error::Argument(format!(
            "distance bound is for order 2, got order {}",
            f.order()
        )));
    }
    if !f.is_mirror_symmetric(DEFAULT_TOL) {
        return Err(Error::Argument("kernel is not mirror symmetric".into()));
    }
    let (unit, renormalization) = unit_window(f)?;
    let bar = unit.conjugate();
    let c_bar_bar = bar.contract(&bar, 1)?;
    let middle = bar.contract(&unit, 1)?.add(&unit.contract(&bar, 1)?)?;
    let c_ff = unit.contract(&unit, 1)?;
    let component_norms = [c_bar_bar.norm(), middle.norm(), c_ff.norm()];
    let contraction_norm = component_norms[2];
    let gap = contraction_norm * contraction_norm;
    let deviation_sq = component_norms.iter().map(|n| n * n).sum::<f64>() / 4.0;
    Ok(DistanceBoundReport {
        bound: 0.5 * (1.5f64).sqrt() * contraction_norm,
        gap,
        contraction_norm,
        components: [c_bar_bar, middle, c_ff],
        component_norms,
        deviation_sq,
        renormalization,
    })
}

/// The four deviation quantities whose joint vanishing characterizes
/// convergence of `I_2(f_k)` to the standard semicircle.
#[derive(Debug, Clone, Copy)]
pub struct EquivalenceNorms {
    /// Condition (1) proxy: the fourth-moment gap.
    pub fourth_moment_gap: f64,
    /// Condition (2): squared norm of the Malliavin deviation
    /// (`(3/2) * gap` for real kernels).
    pub malliavin_deviation_sq: f64,
    /// Condition (3): sum of the four time-restricted contraction-kernel
    /// squared norms from the adapted-projection deviation.
    pub adapted_deviation_sq: f64,
    /// Condition (4): squared norm of the second-chaos part of the quadratic
    /// variation of the adapted gradient.
    pub quadratic_variation_deviation_sq: f64,
}

/// Restriction modes for [`restricted_contraction`]: which range of the
/// integrated coordinate `t` is kept, by cell-index comparison with the two
/// free coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeRange {
    /// `t <= min(t1, t2)`.
    Lower,
    /// `t >= max(t1, t2)`.
    Upper,
    /// strictly between the two free coordinates.
    Middle,
    /// `t >= t2` only (the adapted-slot restriction).
    FromSecond,
    /// `t >= t1` only.
    FromFirst,
}

/// Time-restricted self-contraction of an order-2 kernel:
/// `K(t1, t2) = h * sum_t f(t, t1) f(t, t2)` over the selected `t` range.
pub fn restricted_contraction(f: &Kernel, range: TimeRange) -> Result<Kernel> {
    if f.order() != 2 {
        return Err(Error::Argument(
            "restricted contraction is defined for order 2".into(),
        ));
    }
    let n = f.grid().cells();
    let h = f.grid().step();
    let mut values = Vec::with_capacity(n * n);
    for t1 in 0..n {
        for t2 in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..n {
                let keep = match range {
                    TimeRange::Lower => t <= t1.min(t2),
                    TimeRange::Upper => t >= t1.max(t2),
                    TimeRange::Middle => t > t1.min(t2) && t < t1.max(t2),
                    TimeRange::FromSecond => t >= t2,
                    TimeRange::FromFirst => t >= t1,
                };
                if keep {
                    acc += f.value(&[t, t1]) * f.value(&[t, t2]);
                }
            }
            values.push(acc * h);
        }
    }
    Kernel::new(2, *f.grid(), values)
}

/// Deviation quantities for a fully symmetric, unit order-2 kernel.
///
/// Time restrictions use half-open cell-index comparisons (`t1 <= t`); the
/// deviations collect the chaos-component norms, where the scalar parts cancel
/// identically in the continuum.
pub fn equivalence_norms_order2(f: &Kernel) -> Result<EquivalenceNorms> {
    if f.order() != 2 {
        return Err(Error::Argument(format!(
            "equivalence norms are for order 2, got order {}",
            f.order()
        )));
    }
    if !f.is_fully_symmetric(DEFAULT_TOL) {
        return Err(Error::Argument("kernel is not fully symmetric".into()));
    }
    let (unit, _) = unit_window(f)?;

    let bound = distance_bound_order2(&unit)?;

    // condition (3): the adapted-projection deviation splits into four
    // restricted contraction kernels, two per symmetric role
    let ka = restricted_contraction(&unit, TimeRange::FromSecond)?;
    let kb = restricted_contraction(&unit, TimeRange::FromFirst)?;
    let adapted_deviation_sq = 2.0 * ka.norm_sq() + 2.0 * kb.norm_sq();

    // condition (4): second-chaos kernel of the quadratic variation
    let qv = restricted_contraction(&unit, TimeRange::Upper)?;
    let quadratic_variation_deviation_sq = qv.norm_sq();

    Ok(EquivalenceNorms {
        fourth_moment_gap: bound.gap,
        malliavin_deviation_sq: bound.deviation_sq,
        adapted_deviation_sq,
        quadratic_variation_deviation_sq,
    })
}
