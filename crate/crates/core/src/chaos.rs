//! Finite chaos expansions `F = sum_n I_n(f_n)`: a map from order to kernel,
//! with the order-0 component playing the role of the mean.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::kernel::Kernel;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// A random-variable stand-in: finitely many kernels indexed by chaos order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosElement {
    grid: GridSpec,
    components: BTreeMap<usize, Kernel>,
}

impl ChaosElement {
    pub fn new(grid: GridSpec) -> Self {
        Self {
            grid,
            components: BTreeMap::new(),
        }
    }

    pub fn from_kernel(kernel: Kernel) -> Self {
        let grid = *kernel.grid();
        let mut e = Self::new(grid);
        e.components.insert(kernel.order(), kernel);
        e
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Adds `kernel` into the component of its order.
    pub fn add_component(&mut self, kernel: Kernel) -> Result<()> {
        self.grid.ensure_matches(kernel.grid())?;
        match self.components.remove(&kernel.order()) {
            Some(existing) => {
                let sum = existing.add(&kernel)?;
                self.components.insert(kernel.order(), sum);
            }
            None => {
                self.components.insert(kernel.order(), kernel);
            }
        }
        Ok(())
    }

    pub fn component(&self, order: usize) -> Option<&Kernel> {
        self.components.get(&order)
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.components.keys().copied()
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Kernel)> {
        self.components.iter().map(|(&n, k)| (n, k))
    }

    /// Expectation: the order-0 component (orthogonality of chaoses).
    pub fn mean(&self) -> Complex64 {
        self.components
            .get(&0)
            .and_then(|k| k.scalar_value())
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// `phi(F* F) = |f_0|^2 + sum_{n >= 1} ||f_n||^2`.
    pub fn second_moment(&self) -> f64 {
        self.components
            .iter()
            .map(|(&n, k)| {
                if n == 0 {
                    k.scalar_value().unwrap().norm_sqr()
                } else {
                    k.norm_sq()
                }
            })
            .sum()
    }

    /// Self-adjoint iff every component is mirror symmetric.
    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.components.iter().all(|(&n, k)| {
            if n == 0 {
                k.scalar_value().unwrap().im.abs() <= tol
            } else {
                k.is_mirror_symmetric(tol)
            }
        })
    }

    /// Free number operator `N0` (scales order n by n) or its inverse.
    ///
    /// The inverse requires a vanishing order-0 component.
    pub fn number_operator(&self, inverse: bool) -> Result<ChaosElement> {
        if inverse {
            if self.mean() != Complex64::new(0.0, 0.0) {
                return Err(Error::Domain(
                    "inverse number operator needs a zero order-0 component".into(),
                ));
            }
        }
        let mut out = ChaosElement::new(self.grid);
        for (&n, k) in &self.components {
            let scaled = if inverse {
                if n == 0 {
                    continue; // zero constant, drop
                }
                k.scale(Complex64::new(1.0 / n as f64, 0.0))
            } else {
                k.scale(Complex64::new(n as f64, 0.0))
            };
            out.components.insert(n, scaled);
        }
        Ok(out)
    }
}
