use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform grid over `[0, T]`: `cells` cells of width `h = T / cells`.
///
/// Every kernel in one computation shares a grid so that contraction indices
/// align exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    cells: usize,
    horizon: f64,
}

impl GridSpec {
    pub fn new(cells: usize, horizon: f64) -> Result<Self> {
        if cells == 0 {
            return Err(Error::Validation("grid needs at least one cell".into()));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::Validation(format!(
                "grid horizon must be positive and finite, got {horizon}"
            )));
        }
        Ok(Self { cells, horizon })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Cell width `h = T / N`.
    pub fn step(&self) -> f64 {
        self.horizon / self.cells as f64
    }

    /// Number of cells per unit length, when the horizon is a whole number
    /// that divides the cell count evenly.
    pub fn cells_per_unit(&self) -> Option<usize> {
        if self.horizon.fract() != 0.0 || self.horizon < 1.0 {
            return None;
        }
        let t = self.horizon as usize;
        (self.cells % t == 0).then(|| self.cells / t)
    }

    pub(crate) fn ensure_matches(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::Grid(format!(
                "grids differ: {}x[0,{}] vs {}x[0,{}]",
                self.cells, self.horizon, other.cells, other.horizon
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_and_alignment() {
        let g = GridSpec::new(32, 4.0).unwrap();
        assert_eq!(g.step(), 0.125);
        assert_eq!(g.cells_per_unit(), Some(8));
        assert_eq!(GridSpec::new(10, 4.0).unwrap().cells_per_unit(), None);
        assert_eq!(GridSpec::new(10, 2.5).unwrap().cells_per_unit(), None);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(GridSpec::new(0, 1.0).is_err());
        assert!(GridSpec::new(4, 0.0).is_err());
        assert!(GridSpec::new(4, f64::NAN).is_err());
    }
}
