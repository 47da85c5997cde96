//! Grid-cached evaluation of `H(f)` over a disk grid.

use crate::error::Result;
use crate::hilbert::{contract, hankel_kernel, power_coefficients, power_len};
use crate::quadrature::DiskGrid;
use crate::series::{horner, PowerSeries, TensorOrder};
use crate::spaces::lp_from_moduli;
use crate::C64;

/// Hankel kernel values `I_j(z)` for every grid node and `j < len`.
pub(crate) struct HankelTable<'g> {
    grid: &'g DiskGrid,
    len: usize,
    rows: Vec<C64>,
}

impl<'g> HankelTable<'g> {
    pub(crate) fn new(grid: &'g DiskGrid, len: usize) -> Self {
        let rows = grid.map(|z| hankel_kernel(z, len)).concat();
        Self { grid, len, rows }
    }

    fn row(&self, i: usize) -> &[C64] {
        &self.rows[i * self.len..(i + 1) * self.len]
    }

    /// `|H(f)(z_i)|` at every node, from the coefficients of `f^{m-1}`.
    pub(crate) fn moduli(&self, b: &[C64]) -> Vec<f64> {
        debug_assert!(b.len() <= self.len);
        self.grid
            .map_indexed(|i, _| contract(b, self.row(i)).norm())
    }
}

/// `||g||_{A^q}` for a polynomial with the given coefficients.
pub(crate) fn poly_bergman_norm(coeffs: &[C64], q: f64, grid: &DiskGrid) -> f64 {
    let moduli = grid.map(|z| horner(coeffs, z).norm());
    lp_from_moduli(&moduli, q, grid)
}

/// Pieces of the scale-invariant ratio `||H(f)||_{A^p} / ||f||_{A^{p(m-1)}}^{m-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RatioParts {
    pub output_norm: f64,
    pub input_norm: f64,
}

impl RatioParts {
    pub(crate) fn ratio(&self, m: TensorOrder) -> f64 {
        self.output_norm / self.input_norm.powi(m.degree() as i32)
    }
}

/// Evaluates the tensor-operator ratio for inputs of a fixed length.
pub(crate) struct RatioEvaluator<'g> {
    p: f64,
    m: TensorOrder,
    n: usize,
    grid: &'g DiskGrid,
    table: HankelTable<'g>,
}

impl<'g> RatioEvaluator<'g> {
    pub(crate) fn new(p: f64, m: TensorOrder, n: usize, grid: &'g DiskGrid) -> Self {
        let table = HankelTable::new(grid, power_len(n, m));
        Self {
            p,
            m,
            n,
            grid,
            table,
        }
    }

    pub(crate) fn parts(&self, f: &PowerSeries) -> Result<RatioParts> {
        debug_assert!(f.len() <= self.n);
        let q = self.p * self.m.degree() as f64;
        let input_norm = poly_bergman_norm(f.coeffs(), q, self.grid);
        let b = power_coefficients(f, self.m)?;
        let output_norm = lp_from_moduli(&self.table.moduli(&b), self.p, self.grid);
        Ok(RatioParts {
            output_norm,
            input_norm,
        })
    }
}
