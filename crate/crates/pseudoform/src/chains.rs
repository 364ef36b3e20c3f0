//! Parametrized cells, weighted chains, and integration of twisted forms.
//!
//! A cell is a smooth map from the unit cube [0,1]^k into space-time together
//! with an ambient orientation tag; a chain is a weighted list of cells of a
//! common parameter dimension carrying the parity its integrands must have.
//! Odd integrands change sign when a cell's orientation tag is reversed,
//! which is exactly what makes flux and circulation integrals well defined
//! without a global orientation choice.

use std::sync::Arc;

use nalgebra::Vector4;

use crate::forms::{DifferentialForm, VectorField};
use crate::numeric::tensor_quadrature;
use crate::orientation::{Orientation, Parity};
use crate::{Error, Result};

/// Default Gauss–Legendre order per axis.
pub const DEFAULT_QUAD_ORDER: usize = 8;
/// Step for finite-difference tangents of cells without exact Jacobians.
pub const CELL_JACOBIAN_FD_STEP: f64 = 1e-5;

type CellMap = dyn Fn(&[f64]) -> Vector4<f64> + Send + Sync;
type CellJacobian = dyn Fn(&[f64]) -> Vec<Vector4<f64>> + Send + Sync;

/// A singular cube: a map [0,1]^k → space-time with an orientation tag.
#[derive(Clone)]
pub struct Cell {
    dim: usize,
    map: Arc<CellMap>,
    jacobian: Option<Arc<CellJacobian>>,
    orientation: Orientation,
}

impl Cell {
    pub fn new(dim: usize, orientation: Orientation, map: Arc<CellMap>) -> Result<Self> {
        if dim > 4 {
            return Err(Error::UnsupportedDegree {
                degree: dim,
                reason: "cells parametrize at most four directions",
            });
        }
        Ok(Self {
            dim,
            map,
            jacobian: None,
            orientation,
        })
    }

    /// Attaches an exact Jacobian: the closure returns the `dim` tangent
    /// columns ∂χ/∂sᵢ at a parameter point.
    pub fn with_jacobian(mut self, jacobian: Arc<CellJacobian>) -> Self {
        self.jacobian = Some(jacobian);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Reverses the ambient orientation tag by the given class.
    pub fn reoriented(mut self, by: crate::orientation::GroupClass) -> Result<Self> {
        self.orientation = self.orientation.apply(by)?;
        Ok(self)
    }

    pub fn point(&self, s: &[f64]) -> Vector4<f64> {
        (self.map)(s)
    }

    /// Tangent columns at a parameter point, exact or by central differences
    /// with step [`CELL_JACOBIAN_FD_STEP`].
    pub fn tangents(&self, s: &[f64]) -> Vec<Vector4<f64>> {
        if let Some(j) = &self.jacobian {
            return j(s);
        }
        let h = CELL_JACOBIAN_FD_STEP;
        (0..self.dim)
            .map(|i| {
                let mut fwd = s.to_vec();
                fwd[i] += h;
                let mut bwd = s.to_vec();
                bwd[i] -= h;
                ((self.map)(&fwd) - (self.map)(&bwd)) / (2.0 * h)
            })
            .collect()
    }

    /// The face with the `i`-th parameter (1-based) frozen at `side` ∈ {0, 1}.
    fn face(&self, i: usize, side: f64) -> Cell {
        let map = self.map.clone();
        let slot = i - 1;
        let jacobian = self.jacobian.clone();
        let face_map: Arc<CellMap> = Arc::new(move |s: &[f64]| {
            let mut full = Vec::with_capacity(s.len() + 1);
            full.extend_from_slice(&s[..slot]);
            full.push(side);
            full.extend_from_slice(&s[slot..]);
            map(&full)
        });
        let face_jacobian: Option<Arc<CellJacobian>> = jacobian.map(|j| {
            let slot = i - 1;
            let out: Arc<CellJacobian> = Arc::new(move |s: &[f64]| {
                let mut full = Vec::with_capacity(s.len() + 1);
                full.extend_from_slice(&s[..slot]);
                full.push(side);
                full.extend_from_slice(&s[slot..]);
                let mut cols = j(&full);
                cols.remove(slot);
                cols
            });
            out
        });
        let mut cell = Cell {
            dim: self.dim - 1,
            map: face_map,
            jacobian: None,
            orientation: self.orientation,
        };
        if let Some(j) = face_jacobian {
            cell = cell.with_jacobian(j);
        }
        cell
    }
}

/// A weighted formal sum of cells of one parameter dimension, tagged with
/// the parity of its admissible integrands.
#[derive(Clone)]
pub struct Chain {
    cells: Vec<(f64, Cell)>,
    parity: Parity,
}

impl Chain {
    pub fn new(parity: Parity) -> Self {
        Self {
            cells: Vec::new(),
            parity,
        }
    }

    pub fn single(cell: Cell, parity: Parity) -> Result<Self> {
        let mut chain = Self::new(parity);
        chain.push(1.0, cell)?;
        Ok(chain)
    }

    pub fn push(&mut self, weight: f64, cell: Cell) -> Result<()> {
        if cell.orientation().model() != self.parity.model() {
            return Err(Error::ModelMismatch(
                cell.orientation().model().label(),
                self.parity.model().label(),
            ));
        }
        if let Some(d) = self.dim() {
            if cell.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: cell.dim(),
                });
            }
        }
        self.cells.push((weight, cell));
        Ok(())
    }

    pub fn cells(&self) -> &[(f64, Cell)] {
        &self.cells
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// The common parameter dimension, absent for empty chains.
    pub fn dim(&self) -> Option<usize> {
        self.cells.first().map(|(_, c)| c.dim())
    }
}

/// ∫_c A by per-axis Gauss–Legendre quadrature of the given order. The form's
/// degree must equal the chain dimension and its parity must equal the chain
/// parity; each cell evaluates the form at its own orientation tag.
pub fn integrate(a: &DifferentialForm, c: &Chain, order: usize) -> Result<f64> {
    if a.parity() != c.parity() {
        return Err(Error::ParityMismatch(
            a.parity().label().into(),
            c.parity().label().into(),
        ));
    }
    if order == 0 {
        return Err(Error::InvalidArgument(
            "quadrature order must be at least 1".into(),
        ));
    }
    let mut total = 0.0;
    for (weight, cell) in &c.cells {
        if a.degree() != cell.dim() {
            return Err(Error::DegreeMismatch {
                expected: cell.dim(),
                found: a.degree(),
            });
        }
        let mut acc = 0.0;
        let mut failure: Option<Error> = None;
        tensor_quadrature(cell.dim(), order, |s, w| {
            if failure.is_some() {
                return;
            }
            let x = cell.point(s);
            let tangents = cell.tangents(s);
            match a
                .value(&x)
                .and_then(|v| v.evaluate(&tangents, cell.orientation()))
            {
                Ok(v) => acc += w * v,
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        total += weight * acc;
    }
    Ok(total)
}

/// The boundary chain with the alternating face weights
/// ∂χ = Σᵢ (−1)^{i−1} (χ\_{(i,1)} − χ\_{(i,0)}); parity and orientation tags
/// carry over.
pub fn boundary(c: &Chain) -> Result<Chain> {
    let mut out = Chain::new(c.parity());
    for (weight, cell) in &c.cells {
        if cell.dim() == 0 {
            return Err(Error::UnsupportedDegree {
                degree: 0,
                reason: "points have no boundary",
            });
        }
        for i in 1..=cell.dim() {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            out.push(weight * sign, cell.face(i, 1.0))?;
            out.push(-weight * sign, cell.face(i, 0.0))?;
        }
    }
    Ok(out)
}

/// |∫_c dA − ∫_{∂c} A|.
pub fn stokes_residual(a: &DifferentialForm, c: &Chain, order: usize) -> Result<f64> {
    let lhs = integrate(&a.d(), c, order)?;
    let rhs = integrate(a, &boundary(c)?, order)?;
    Ok((lhs - rhs).abs())
}

/// The flux of the current X through c against A: ∫_c X ⌟ A.
pub fn wedge_current_integral(
    x_field: &VectorField,
    c: &Chain,
    a: &DifferentialForm,
    order: usize,
) -> Result<f64> {
    integrate(&a.interior_product(x_field)?, c, order)
}

/// |∫_c X ⌟ dA − (∫_c L_X A − ∫_{∂c} X ⌟ A)|: the differential transport
/// balance that ties the Lie derivative to boundary flux.
pub fn current_boundary_residual(
    x_field: &VectorField,
    c: &Chain,
    a: &DifferentialForm,
    order: usize,
) -> Result<f64> {
    let lhs = integrate(&a.d().interior_product(x_field)?, c, order)?;
    let lie = integrate(&a.lie_derivative(x_field)?, c, order)?;
    let flux = integrate(&a.interior_product(x_field)?, &boundary(c)?, order)?;
    Ok((lhs - (lie - flux)).abs())
}
