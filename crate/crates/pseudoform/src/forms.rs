//! Twisted differential form fields and the exterior calculus on them.
//!
//! A field is a map from events to pointwise multicovectors (or densities).
//! Two backings are supported: arbitrary closures, optionally with exact
//! partial derivatives, and polynomial components, for which every derivative
//! is computed symbolically and identities such as d∘d = 0 hold to machine
//! precision. Closure-backed fields without exact partials fall back to
//! central finite differences.

use std::sync::Arc;

use nalgebra::{Matrix4, Vector4};

use crate::multilinear::{
    classify_for, component_count, indices_of, mask_position, masks, merge_sign, Density,
    MultiCovector,
};
use crate::numeric::{gauss_legendre, halton_point};
use crate::orientation::{Orientation, Parity};
use crate::poly::Poly;
use crate::{Error, Result};

/// Default relative step for finite-difference partial derivatives.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Step for finite-difference Jacobians of smooth point maps.
pub const MAP_JACOBIAN_FD_STEP: f64 = 1e-5;
/// Number of probe points used by the closedness pre-check of
/// [`DifferentialForm::homotopy_potential`].
pub const CLOSURE_PROBE_COUNT: usize = 64;
/// Residual bound for the closedness pre-check.
pub const CLOSURE_TOL: f64 = 1e-6;

type CompFn = dyn Fn(&Vector4<f64>) -> Result<MultiCovector> + Send + Sync;
type PartialFn = dyn Fn(&Vector4<f64>, usize) -> Result<MultiCovector> + Send + Sync;
type PointMap = dyn Fn(&Vector4<f64>) -> Vector4<f64> + Send + Sync;
type JacobianFn = dyn Fn(&Vector4<f64>) -> Matrix4<f64> + Send + Sync;
type VecFn = dyn Fn(&Vector4<f64>) -> Result<Vector4<f64>> + Send + Sync;
type VecPartialFn = dyn Fn(&Vector4<f64>, usize) -> Result<Vector4<f64>> + Send + Sync;
type DenFn = dyn Fn(&Vector4<f64>) -> Result<Density> + Send + Sync;
type DenPartialFn = dyn Fn(&Vector4<f64>, usize) -> Result<Density> + Send + Sync;

/// An affine transformation of space-time, x ↦ L x + t.
#[derive(Clone, Copy, Debug)]
pub struct AffineMap {
    linear: Matrix4<f64>,
    translation: Vector4<f64>,
}

impl AffineMap {
    pub fn new(linear: Matrix4<f64>, translation: Vector4<f64>) -> Self {
        Self {
            linear,
            translation,
        }
    }

    pub fn identity() -> Self {
        Self::new(Matrix4::identity(), Vector4::zeros())
    }

    pub fn linear_map(linear: Matrix4<f64>) -> Self {
        Self::new(linear, Vector4::zeros())
    }

    pub fn translation_map(translation: Vector4<f64>) -> Self {
        Self::new(Matrix4::identity(), translation)
    }

    pub fn linear(&self) -> Matrix4<f64> {
        self.linear
    }

    pub fn translation(&self) -> Vector4<f64> {
        self.translation
    }

    pub fn apply(&self, x: &Vector4<f64>) -> Vector4<f64> {
        self.linear * x + self.translation
    }

    /// The composite self ∘ other (apply `other` first).
    pub fn compose(&self, other: &AffineMap) -> Self {
        Self::new(
            self.linear * other.linear,
            self.linear * other.translation + self.translation,
        )
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.linear.try_inverse().ok_or(Error::Singular {
            det: self.linear.determinant(),
        })?;
        Ok(Self::new(inv, -(inv * self.translation)))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 3 || dim == 4 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: 4,
            found: dim,
        })
    }
}

fn shape_check(
    got: &MultiCovector,
    dim: usize,
    degree: usize,
    parity: Parity,
) -> Result<MultiCovector> {
    if got.dim() != dim || got.degree() != degree || got.parity() != parity {
        return Err(Error::InvalidArgument(format!(
            "field closure returned a ({}, {}, {}) value where ({}, {}, {}) was declared",
            got.dim(),
            got.degree(),
            got.parity().label(),
            dim,
            degree,
            parity.label()
        )));
    }
    Ok(got.clone())
}

/// Assembles (dA)ₖ = Σ_{λ∈K} sign(λ, K∖λ) ∂λ a_{K∖λ} from the list of partial
/// derivative values ∂₀a … ∂_{dim−1}a.
fn exterior_from_partials(
    dim: usize,
    degree: usize,
    parity: Parity,
    partials: &[MultiCovector],
) -> MultiCovector {
    let mut coeffs = vec![0.0; component_count(dim, degree + 1)];
    for (pos, &mk) in masks(dim, degree + 1).iter().enumerate() {
        let mut acc = 0.0;
        for lam in indices_of(mk) {
            let bit = 1u8 << lam;
            let rest = mk & !bit;
            acc += merge_sign(bit, rest) * partials[lam].coefficients()[mask_position(dim, rest)];
        }
        coeffs[pos] = acc;
    }
    MultiCovector::new(dim, degree + 1, parity, &coeffs)
        .expect("assembled component count always matches")
}

/// Symbolic exterior derivative of polynomial components.
fn poly_d(dim: usize, degree: usize, polys: &[Poly]) -> Vec<Poly> {
    masks(dim, degree + 1)
        .iter()
        .map(|&mk| {
            let mut acc = Poly::zero();
            for lam in indices_of(mk) {
                let bit = 1u8 << lam;
                let rest = mk & !bit;
                let src = &polys[mask_position(dim, rest)];
                acc = acc.add(&src.partial(lam).scale(merge_sign(bit, rest)));
            }
            acc
        })
        .collect()
}

#[derive(Clone)]
enum Backing {
    Closure {
        value: Arc<CompFn>,
        partial: Option<Arc<PartialFn>>,
    },
    Polynomial(Arc<Vec<Poly>>),
}

/// A twisted differential form field of fixed dimension, degree, and parity.
#[derive(Clone)]
pub struct DifferentialForm {
    dim: usize,
    degree: usize,
    parity: Parity,
    backing: Backing,
    fd_step: f64,
}

impl DifferentialForm {
    /// A space-time (dimension 4) field from a component closure.
    pub fn new(degree: usize, parity: Parity, value: Arc<CompFn>) -> Result<Self> {
        Self::new_in(4, degree, parity, value)
    }

    /// A field of explicit dimension (3 for spatial, 4 for space-time).
    pub fn new_in(dim: usize, degree: usize, parity: Parity, value: Arc<CompFn>) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            degree,
            parity,
            backing: Backing::Closure {
                value,
                partial: None,
            },
            fd_step: DEFAULT_FD_STEP,
        })
    }

    /// A field with polynomial components, one per ascending index tuple.
    /// Such fields differentiate symbolically.
    pub fn from_polys(dim: usize, degree: usize, parity: Parity, polys: Vec<Poly>) -> Result<Self> {
        check_dim(dim)?;
        if polys.len() != component_count(dim, degree) {
            return Err(Error::InvalidArgument(format!(
                "{} components supplied where degree {} in dimension {} has {}",
                polys.len(),
                degree,
                dim,
                component_count(dim, degree)
            )));
        }
        Ok(Self {
            dim,
            degree,
            parity,
            backing: Backing::Polynomial(Arc::new(polys)),
            fd_step: DEFAULT_FD_STEP,
        })
    }

    /// The constant field with the given pointwise value.
    pub fn constant(value: MultiCovector) -> Self {
        let polys = value
            .coefficients()
            .iter()
            .map(|&c| Poly::constant(c))
            .collect();
        Self::from_polys(value.dim(), value.degree(), value.parity(), polys)
            .expect("constant fields are always well-formed")
    }

    /// The zero field of the given shape.
    pub fn zero(dim: usize, degree: usize, parity: Parity) -> Self {
        Self::constant_shape(dim, degree, parity)
    }

    fn constant_shape(dim: usize, degree: usize, parity: Parity) -> Self {
        let polys = vec![Poly::zero(); component_count(dim, degree)];
        Self {
            dim,
            degree,
            parity,
            backing: Backing::Polynomial(Arc::new(polys)),
            fd_step: DEFAULT_FD_STEP,
        }
    }

    /// Attaches exact partial derivatives to a closure-backed field. The
    /// closure receives the base point and the coordinate direction λ and
    /// must return ∂λA there. Polynomial fields already differentiate
    /// exactly and are returned unchanged.
    pub fn with_partials(mut self, partials: Arc<PartialFn>) -> Self {
        if let Backing::Closure { partial, .. } = &mut self.backing {
            *partial = Some(partials);
        }
        self
    }

    /// Overrides the finite-difference step used when no exact partial
    /// derivatives are available.
    pub fn with_fd_step(mut self, step: f64) -> Self {
        self.fd_step = step;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    /// Whether derivatives are exact (symbolic components or attached
    /// partials) rather than finite differences.
    pub fn has_exact_partials(&self) -> bool {
        match &self.backing {
            Backing::Polynomial(_) => true,
            Backing::Closure { partial, .. } => partial.is_some(),
        }
    }

    /// The pointwise value at an event.
    pub fn value(&self, x: &Vector4<f64>) -> Result<MultiCovector> {
        match &self.backing {
            Backing::Closure { value, .. } => {
                shape_check(&value(x)?, self.dim, self.degree, self.parity)
            }
            Backing::Polynomial(polys) => {
                let coeffs: Vec<f64> = polys.iter().map(|p| p.eval(x)).collect();
                MultiCovector::new(self.dim, self.degree, self.parity, &coeffs)
            }
        }
    }

    /// Evaluates the field on a tuple of vectors at an orientation.
    pub fn evaluate(
        &self,
        x: &Vector4<f64>,
        vectors: &[Vector4<f64>],
        o: Orientation,
    ) -> Result<f64> {
        self.value(x)?.evaluate(vectors, o)
    }

    /// The partial derivative ∂λA at an event: exact when available,
    /// otherwise a central difference with step `fd_step · max(1, ‖x‖)`.
    pub fn partial(&self, x: &Vector4<f64>, lam: usize) -> Result<MultiCovector> {
        if lam >= self.dim {
            return Err(Error::InvalidArgument(format!(
                "direction {lam} out of range for dimension {}",
                self.dim
            )));
        }
        match &self.backing {
            Backing::Closure {
                partial: Some(p), ..
            } => shape_check(&p(x, lam)?, self.dim, self.degree, self.parity),
            Backing::Closure { .. } => {
                let h = self.fd_step * x.norm().max(1.0);
                let mut fwd = *x;
                fwd[lam] += h;
                let mut bwd = *x;
                bwd[lam] -= h;
                let plus = self.value(&fwd)?;
                let minus = self.value(&bwd)?;
                Ok(plus.try_sub(&minus)?.scale(0.5 / h))
            }
            Backing::Polynomial(polys) => {
                let coeffs: Vec<f64> = polys.iter().map(|p| p.partial(lam).eval(x)).collect();
                MultiCovector::new(self.dim, self.degree, self.parity, &coeffs)
            }
        }
    }

    fn partials_at(&self, x: &Vector4<f64>) -> Result<Vec<MultiCovector>> {
        (0..self.dim).map(|lam| self.partial(x, lam)).collect()
    }

    /// The exterior derivative. Polynomial fields stay polynomial; closure
    /// fields differentiate their components (exactly or by finite
    /// differences) and assemble the antisymmetrized combination.
    pub fn d(&self) -> Self {
        match &self.backing {
            Backing::Polynomial(polys) => Self {
                dim: self.dim,
                degree: self.degree + 1,
                parity: self.parity,
                backing: Backing::Polynomial(Arc::new(poly_d(self.dim, self.degree, polys))),
                fd_step: self.fd_step,
            },
            Backing::Closure { .. } => {
                let src = self.clone();
                Self {
                    dim: self.dim,
                    degree: self.degree + 1,
                    parity: self.parity,
                    backing: Backing::Closure {
                        value: Arc::new(move |x: &Vector4<f64>| {
                            let parts = src.partials_at(x)?;
                            Ok(exterior_from_partials(
                                src.dim, src.degree, src.parity, &parts,
                            ))
                        }),
                        partial: None,
                    },
                    fd_step: self.fd_step,
                }
            }
        }
    }

    /// The interior product i_X A, inserting the vector field into the first
    /// slot. Exact partials are threaded when both factors carry them.
    pub fn interior_product(&self, field: &VectorField) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::UnsupportedDegree {
                degree: 0,
                reason: "interior product needs at least one slot",
            });
        }
        if field.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: field.dim(),
            });
        }
        let src = self.clone();
        let xf = field.clone();
        let mut out = Self {
            dim: self.dim,
            degree: self.degree - 1,
            parity: self.parity,
            backing: Backing::Closure {
                value: Arc::new(move |x: &Vector4<f64>| src.value(x)?.interior(&xf.value(x)?)),
                partial: None,
            },
            fd_step: self.fd_step,
        };
        if self.has_exact_partials() && field.has_exact_partials() {
            let src = self.clone();
            let xf = field.clone();
            out = out.with_partials(Arc::new(move |x: &Vector4<f64>, lam: usize| {
                let da = src.partial(x, lam)?.interior(&xf.value(x)?)?;
                let dx = src.value(x)?.interior(&xf.partial(x, lam)?)?;
                da.try_add(&dx)
            }));
        }
        Ok(out)
    }

    /// The Lie derivative along a vector field, via the homotopy identity
    /// L_X = i_X ∘ d + d ∘ i_X.
    pub fn lie_derivative(&self, field: &VectorField) -> Result<Self> {
        let first = self.d().interior_product(field)?;
        if self.degree == 0 {
            return Ok(first);
        }
        first.try_add(&self.interior_product(field)?.d())
    }

    /// The pullback along an affine map ψ: (ψ*A)(x) acts on vectors mapped by
    /// the linear part and on orientations by its component class.
    pub fn pullback_affine(&self, map: &AffineMap) -> Result<Self> {
        let cls = classify_for(self.parity, self.dim, &map.linear)?;
        let src = self.clone();
        let m = *map;
        let mut out = Self {
            dim: self.dim,
            degree: self.degree,
            parity: self.parity,
            backing: Backing::Closure {
                value: Arc::new(move |x: &Vector4<f64>| {
                    src.value(&m.apply(x))?.pullback_classified(&m.linear, cls)
                }),
                partial: None,
            },
            fd_step: self.fd_step,
        };
        if self.has_exact_partials() {
            let src = self.clone();
            let m = *map;
            out = out.with_partials(Arc::new(move |x: &Vector4<f64>, lam: usize| {
                let y = m.apply(x);
                let mut chain = MultiCovector::zero(src.dim, src.degree, src.parity);
                for mu in 0..src.dim {
                    let c = m.linear[(mu, lam)];
                    if c != 0.0 {
                        chain = chain.try_add(&src.partial(&y, mu)?.scale(c))?;
                    }
                }
                chain.pullback_classified(&m.linear, cls)
            }));
        }
        Ok(out)
    }

    /// The pullback along a smooth map given by a point closure and an
    /// optional exact Jacobian (columns ∂φ/∂xλ). Without one, the Jacobian
    /// is approximated by central differences with step
    /// [`MAP_JACOBIAN_FD_STEP`], and the component class is determined per
    /// point.
    pub fn pullback_smooth(&self, phi: Arc<PointMap>, jacobian: Option<Arc<JacobianFn>>) -> Self {
        let src = self.clone();
        Self {
            dim: self.dim,
            degree: self.degree,
            parity: self.parity,
            backing: Backing::Closure {
                value: Arc::new(move |x: &Vector4<f64>| {
                    let j = match &jacobian {
                        Some(f) => f(x),
                        None => fd_jacobian(&*phi, x, src.dim),
                    };
                    let cls = classify_for(src.parity, src.dim, &j)?;
                    src.value(&phi(x))?.pullback_classified(&j, cls)
                }),
                partial: None,
            },
            fd_step: self.fd_step,
        }
    }

    /// A primitive of a closed form by the radial homotopy about `center`:
    /// B(x) = ∫₀¹ s^{q−1} (x−x₀) ⌟ A(x₀ + s(x−x₀)) ds, with the integral
    /// taken by Gauss–Legendre quadrature of the given order. Closedness is
    /// pre-checked at [`CLOSURE_PROBE_COUNT`] quasi-random points of the
    /// supplied coordinate box; the worst violation is reported if it
    /// exceeds [`CLOSURE_TOL`].
    pub fn homotopy_potential(
        &self,
        center: &Vector4<f64>,
        bounds: &[(f64, f64)],
        order: usize,
    ) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::UnsupportedDegree {
                degree: 0,
                reason: "potentials exist for degree one and above",
            });
        }
        if bounds.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "{} bounds supplied for dimension {}",
                bounds.len(),
                self.dim
            )));
        }
        let da = self.d();
        let mut worst = (0.0_f64, Vector4::zeros());
        for i in 0..CLOSURE_PROBE_COUNT {
            let p = halton_point(i, bounds);
            let mut x = Vector4::zeros();
            for (k, &v) in p.iter().enumerate() {
                x[k] = v;
            }
            let r = da.value(&x)?.norm_inf();
            if r > worst.0 {
                worst = (r, x);
            }
        }
        if worst.0 > CLOSURE_TOL {
            return Err(Error::NotClosed {
                point: [worst.1[0], worst.1[1], worst.1[2], worst.1[3]],
                residual: worst.0,
            });
        }
        let (nodes, weights) = gauss_legendre(order);
        let src = self.clone();
        let x0 = *center;
        let q = self.degree;
        Ok(Self {
            dim: self.dim,
            degree: self.degree - 1,
            parity: self.parity,
            backing: Backing::Closure {
                value: Arc::new(move |x: &Vector4<f64>| {
                    let v = x - x0;
                    let mut acc = MultiCovector::zero(src.dim, q - 1, src.parity);
                    for (s, w) in nodes.iter().zip(&weights) {
                        let a = src.value(&(x0 + v * *s))?;
                        let factor = w * s.powi(q as i32 - 1);
                        acc = acc.try_add(&a.interior(&v)?.scale(factor))?;
                    }
                    Ok(acc)
                }),
                partial: None,
            },
            fd_step: self.fd_step,
        })
    }

    /// Pointwise sum of two fields of identical shape. Polynomial backings
    /// combine symbolically.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    /// Pointwise difference of two fields of identical shape.
    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        if self.parity != other.parity {
            return Err(Error::ParityMismatch(
                other.parity.label().into(),
                self.parity.label().into(),
            ));
        }
        if let (Backing::Polynomial(a), Backing::Polynomial(b)) = (&self.backing, &other.backing) {
            let polys = a
                .iter()
                .zip(b.iter())
                .map(|(pa, pb)| pa.add(&pb.scale(sign)))
                .collect();
            return Self::from_polys(self.dim, self.degree, self.parity, polys);
        }
        let a = self.clone();
        let b = other.clone();
        let mut out = Self {
            dim: self.dim,
            degree: self.degree,
            parity: self.parity,
            backing: Backing::Closure {
                value: Arc::new(move |x: &Vector4<f64>| {
                    a.value(x)?.try_add(&b.value(x)?.scale(sign))
                }),
                partial: None,
            },
            fd_step: self.fd_step,
        };
        if self.has_exact_partials() && other.has_exact_partials() {
            let a = self.clone();
            let b = other.clone();
            out = out.with_partials(Arc::new(move |x: &Vector4<f64>, lam: usize| {
                a.partial(x, lam)?.try_add(&b.partial(x, lam)?.scale(sign))
            }));
        }
        Ok(out)
    }

    /// Pointwise scalar multiple.
    pub fn scale(&self, factor: f64) -> Self {
        match &self.backing {
            Backing::Polynomial(polys) => Self {
                dim: self.dim,
                degree: self.degree,
                parity: self.parity,
                backing: Backing::Polynomial(Arc::new(
                    polys.iter().map(|p| p.scale(factor)).collect(),
                )),
                fd_step: self.fd_step,
            },
            Backing::Closure { .. } => {
                let src = self.clone();
                let mut out = Self {
                    dim: self.dim,
                    degree: self.degree,
                    parity: self.parity,
                    backing: Backing::Closure {
                        value: Arc::new(move |x: &Vector4<f64>| Ok(src.value(x)?.scale(factor))),
                        partial: None,
                    },
                    fd_step: self.fd_step,
                };
                if self.has_exact_partials() {
                    let src = self.clone();
                    out = out.with_partials(Arc::new(move |x: &Vector4<f64>, lam: usize| {
                        Ok(src.partial(x, lam)?.scale(factor))
                    }));
                }
                out
            }
        }
    }
}

fn fd_jacobian(phi: &PointMap, x: &Vector4<f64>, dim: usize) -> Matrix4<f64> {
    let h = MAP_JACOBIAN_FD_STEP;
    let mut j = Matrix4::identity();
    for lam in 0..dim {
        let mut fwd = *x;
        fwd[lam] += h;
        let mut bwd = *x;
        bwd[lam] -= h;
        let col = (phi(&fwd) - phi(&bwd)) / (2.0 * h);
        for r in 0..dim {
            j[(r, lam)] = col[r];
        }
    }
    j
}

/// A vector field with optional exact partial derivatives. Dimension-3
/// fields keep their fourth component at zero.
#[derive(Clone)]
pub struct VectorField {
    dim: usize,
    value: Arc<VecFn>,
    partial: Option<Arc<VecPartialFn>>,
    fd_step: f64,
}

impl VectorField {
    pub fn new(dim: usize, value: Arc<VecFn>) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            value,
            partial: None,
            fd_step: DEFAULT_FD_STEP,
        })
    }

    pub fn constant(dim: usize, v: Vector4<f64>) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            value: Arc::new(move |_: &Vector4<f64>| Ok(v)),
            partial: Some(Arc::new(|_: &Vector4<f64>, _: usize| Ok(Vector4::zeros()))),
            fd_step: DEFAULT_FD_STEP,
        })
    }

    /// A vector field with polynomial components and symbolic derivatives.
    pub fn from_polys(dim: usize, comps: [Poly; 4]) -> Result<Self> {
        check_dim(dim)?;
        let value_comps = comps.clone();
        let partial_comps = comps;
        Ok(Self {
            dim,
            value: Arc::new(move |x: &Vector4<f64>| {
                Ok(Vector4::from_fn(|i, _| value_comps[i].eval(x)))
            }),
            partial: Some(Arc::new(move |x: &Vector4<f64>, lam: usize| {
                Ok(Vector4::from_fn(|i, _| {
                    partial_comps[i].partial(lam).eval(x)
                }))
            })),
            fd_step: DEFAULT_FD_STEP,
        })
    }

    pub fn with_partials(mut self, partial: Arc<VecPartialFn>) -> Self {
        self.partial = Some(partial);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_exact_partials(&self) -> bool {
        self.partial.is_some()
    }

    pub fn value(&self, x: &Vector4<f64>) -> Result<Vector4<f64>> {
        (self.value)(x)
    }

    pub fn partial(&self, x: &Vector4<f64>, lam: usize) -> Result<Vector4<f64>> {
        if lam >= self.dim {
            return Err(Error::InvalidArgument(format!(
                "direction {lam} out of range for dimension {}",
                self.dim
            )));
        }
        if let Some(p) = &self.partial {
            return p(x, lam);
        }
        let h = self.fd_step * x.norm().max(1.0);
        let mut fwd = *x;
        fwd[lam] += h;
        let mut bwd = *x;
        bwd[lam] -= h;
        Ok((self.value(&fwd)? - self.value(&bwd)?) / (2.0 * h))
    }
}

#[derive(Clone)]
enum DenBacking {
    Closure {
        value: Arc<DenFn>,
        partial: Option<Arc<DenPartialFn>>,
    },
    Polynomial(Arc<Vec<Poly>>),
}

/// A field of twisted multivector densities, the natural integrands of flux
/// and charge bookkeeping. The stated degree and parity are those of the
/// multivector part.
#[derive(Clone)]
pub struct DensityField {
    dim: usize,
    degree: usize,
    parity: Parity,
    backing: DenBacking,
    fd_step: f64,
}

impl DensityField {
    pub fn new(dim: usize, degree: usize, parity: Parity, value: Arc<DenFn>) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            degree,
            parity,
            backing: DenBacking::Closure {
                value,
                partial: None,
            },
            fd_step: DEFAULT_FD_STEP,
        })
    }

    /// A density field with polynomial multivector components.
    pub fn from_polys(dim: usize, degree: usize, parity: Parity, polys: Vec<Poly>) -> Result<Self> {
        check_dim(dim)?;
        if polys.len() != component_count(dim, degree) {
            return Err(Error::InvalidArgument(format!(
                "{} components supplied where degree {} in dimension {} has {}",
                polys.len(),
                degree,
                dim,
                component_count(dim, degree)
            )));
        }
        Ok(Self {
            dim,
            degree,
            parity,
            backing: DenBacking::Polynomial(Arc::new(polys)),
            fd_step: DEFAULT_FD_STEP,
        })
    }

    pub fn with_partials(mut self, partial: Arc<DenPartialFn>) -> Self {
        if let DenBacking::Closure { partial: slot, .. } = &mut self.backing {
            *slot = Some(partial);
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn has_exact_partials(&self) -> bool {
        match &self.backing {
            DenBacking::Polynomial(_) => true,
            DenBacking::Closure { partial, .. } => partial.is_some(),
        }
    }

    fn check_shape(&self, d: &Density) -> Result<Density> {
        if d.dim() != self.dim || d.degree() != self.degree || d.parity() != self.parity {
            return Err(Error::InvalidArgument(format!(
                "density closure returned a ({}, {}, {}) value where ({}, {}, {}) was declared",
                d.dim(),
                d.degree(),
                d.parity().label(),
                self.dim,
                self.degree,
                self.parity.label()
            )));
        }
        Ok(d.clone())
    }

    pub fn value(&self, x: &Vector4<f64>) -> Result<Density> {
        match &self.backing {
            DenBacking::Closure { value, .. } => self.check_shape(&value(x)?),
            DenBacking::Polynomial(polys) => {
                let coeffs: Vec<f64> = polys.iter().map(|p| p.eval(x)).collect();
                let v = crate::multilinear::MultiVector::new(
                    self.dim,
                    self.degree,
                    self.parity,
                    &coeffs,
                )?;
                Ok(Density::new(v))
            }
        }
    }

    pub fn partial(&self, x: &Vector4<f64>, lam: usize) -> Result<Density> {
        if lam >= self.dim {
            return Err(Error::InvalidArgument(format!(
                "direction {lam} out of range for dimension {}",
                self.dim
            )));
        }
        match &self.backing {
            DenBacking::Closure {
                partial: Some(p), ..
            } => self.check_shape(&p(x, lam)?),
            DenBacking::Closure { .. } => {
                let h = self.fd_step * x.norm().max(1.0);
                let mut fwd = *x;
                fwd[lam] += h;
                let mut bwd = *x;
                bwd[lam] -= h;
                Ok(self
                    .value(&fwd)?
                    .try_sub(&self.value(&bwd)?)?
                    .scale(0.5 / h))
            }
            DenBacking::Polynomial(polys) => {
                let coeffs: Vec<f64> = polys.iter().map(|p| p.partial(lam).eval(x)).collect();
                let v = crate::multilinear::MultiVector::new(
                    self.dim,
                    self.degree,
                    self.parity,
                    &coeffs,
                )?;
                Ok(Density::new(v))
            }
        }
    }

    /// The differential form that represents this density under the duality
    /// pairing with the unit volume parity: pointwise Weyl image.
    pub fn weyl_field(&self) -> Result<DifferentialForm> {
        let out_degree = self.dim - self.degree;
        let out_parity = self.parity.product(self.parity.model().volume_parity())?;
        if let DenBacking::Polynomial(polys) = &self.backing {
            let full: u8 = ((1u16 << self.dim) - 1) as u8;
            let out_polys = masks(self.dim, out_degree)
                .iter()
                .map(|&k| {
                    let comp = full & !k;
                    polys[mask_position(self.dim, comp)].scale(merge_sign(comp, k))
                })
                .collect();
            return DifferentialForm::from_polys(self.dim, out_degree, out_parity, out_polys);
        }
        let src = self.clone();
        let mut out = DifferentialForm::new_in(
            self.dim,
            out_degree,
            out_parity,
            Arc::new(move |x: &Vector4<f64>| Ok(src.value(x)?.weyl())),
        )?;
        if self.has_exact_partials() {
            let src = self.clone();
            out = out.with_partials(Arc::new(move |x: &Vector4<f64>, lam: usize| {
                Ok(src.partial(x, lam)?.weyl())
            }));
        }
        Ok(out)
    }

    /// The divergence: the Weyl transport of the exterior derivative of the
    /// Weyl image, dropping the multivector degree by one. Polynomial
    /// backings stay symbolic.
    pub fn div(&self) -> Result<DensityField> {
        if self.degree == 0 {
            return Err(Error::UnsupportedDegree {
                degree: 0,
                reason: "the divergence drops the degree by one",
            });
        }
        let form = self.weyl_field()?;
        let dform = form.d();
        let out_degree = self.degree - 1;
        if let Backing::Polynomial(polys) = &dform.backing {
            let full: u8 = ((1u16 << self.dim) - 1) as u8;
            let out_polys = masks(self.dim, out_degree)
                .iter()
                .map(|&j| {
                    let comp = full & !j;
                    polys[mask_position(self.dim, comp)].scale(merge_sign(j, comp))
                })
                .collect();
            return DensityField::from_polys(self.dim, out_degree, self.parity, out_polys);
        }
        let dim = self.dim;
        DensityField::new(
            dim,
            out_degree,
            self.parity,
            Arc::new(move |x: &Vector4<f64>| Density::weyl_inverse(&dform.value(x)?)),
        )
    }
}
