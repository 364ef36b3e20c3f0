//! Flat space-time structure: the metric, the metric volume form, inertial
//! frames with their spatial splittings, and the constitutive maps that tie
//! field strengths to inductions both in four and in three dimensions.

use nalgebra::{Matrix3, Matrix4, Vector4};

use crate::forms::{AffineMap, DifferentialForm};
use crate::multilinear::{contract, metric_sharp, Density, MultiCovector};
use crate::orientation::{classify_lorentz, GroupClass, OrientationModel, Parity, ParityTag};
use crate::{Error, Result};

/// Frame orthonormality tolerance.
pub const FRAME_TOL: f64 = 1e-8;

/// The metric with signature (+, -, -, -) in the reference basis.
pub fn minkowski_metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// The metric volume form: the top-degree covector with coefficient
/// √|det g| on the reference cobasis, carrying the parity that makes its
/// value flip exactly with determinant-reversing orientation changes
/// (odd in the two-class model, doubly odd in the four-class model).
pub fn volume_form(g: &Matrix4<f64>, model: OrientationModel) -> Result<MultiCovector> {
    let det = g.determinant();
    if det.abs() < 1e-300 {
        return Err(Error::Singular { det });
    }
    MultiCovector::new(4, 4, model.volume_parity(), &[det.abs().sqrt()])
}

/// An inertial frame: an origin event, a future-pointing unit velocity, and a
/// spatial triad, jointly orthonormal for the metric.
#[derive(Clone, Debug)]
pub struct InertialFrame {
    origin: Vector4<f64>,
    u: Vector4<f64>,
    triad: [Vector4<f64>; 3],
}

impl InertialFrame {
    /// The frame at rest in the reference basis.
    pub fn rest(origin: Vector4<f64>) -> Self {
        Self {
            origin,
            u: Vector4::new(1.0, 0.0, 0.0, 0.0),
            triad: [
                Vector4::new(0.0, 1.0, 0.0, 0.0),
                Vector4::new(0.0, 0.0, 1.0, 0.0),
                Vector4::new(0.0, 0.0, 0.0, 1.0),
            ],
        }
    }

    /// A frame moving with velocity `beta` (in units of the speed of light)
    /// relative to the reference rest frame, sharing the given origin. The
    /// axes are the standard boost images of the reference axes.
    pub fn boosted(origin: Vector4<f64>, beta: [f64; 3]) -> Result<Self> {
        let b2 = beta.iter().map(|b| b * b).sum::<f64>();
        if b2 >= 1.0 {
            return Err(Error::InvalidFrame(format!(
                "boost speed {} is not below 1",
                b2.sqrt()
            )));
        }
        let gamma = 1.0 / (1.0 - b2).sqrt();
        let u = Vector4::new(gamma, gamma * beta[0], gamma * beta[1], gamma * beta[2]);
        let mut triad = [Vector4::zeros(); 3];
        for i in 0..3 {
            let mut f = Vector4::zeros();
            f[0] = gamma * beta[i];
            f[i + 1] = 1.0;
            if b2 > 0.0 {
                let scale = (gamma - 1.0) * beta[i] / b2;
                for j in 0..3 {
                    f[j + 1] += scale * beta[j];
                }
            }
            triad[i] = f;
        }
        Self::new(origin, u, triad)
    }

    /// Builds a frame from explicit axes, validating orthonormality and that
    /// the velocity points to the future.
    pub fn new(origin: Vector4<f64>, u: Vector4<f64>, triad: [Vector4<f64>; 3]) -> Result<Self> {
        let frame = Self { origin, u, triad };
        let cls = classify_lorentz(&frame.lift(), &minkowski_metric())
            .map_err(|e| Error::InvalidFrame(format!("axes are not g-orthonormal: {e}")))?;
        if cls.time_preserving() != Some(true) {
            return Err(Error::InvalidFrame(
                "frame velocity points to the past".into(),
            ));
        }
        Ok(frame)
    }

    pub fn origin(&self) -> Vector4<f64> {
        self.origin
    }

    pub fn velocity_unit(&self) -> Vector4<f64> {
        self.u
    }

    pub fn triad(&self) -> &[Vector4<f64>; 3] {
        &self.triad
    }

    /// The linear map sending the reference basis to (u, f₁, f₂, f₃), as the
    /// matrix with those columns.
    pub fn lift(&self) -> Matrix4<f64> {
        Matrix4::from_columns(&[self.u, self.triad[0], self.triad[1], self.triad[2]])
    }

    /// The Lorentz class of the lift map.
    pub fn lift_class(&self) -> Result<GroupClass> {
        classify_lorentz(&self.lift(), &minkowski_metric())
    }

    /// The event with frame time `t` and frame spatial coordinates `y`:
    /// x₀ + c·t·u + Σ yⁱ fᵢ.
    pub fn event(&self, c: f64, t: f64, y: &[f64; 3]) -> Vector4<f64> {
        let mut x = self.origin + self.u * (c * t);
        for (f, yi) in self.triad.iter().zip(y) {
            x += f * *yi;
        }
        x
    }

    /// Splits an event into its frame time and its simultaneity-leaf
    /// projection: t = ⟨g(u), x − x₀⟩ / c and y = x − ⟨g(u), x − x₀⟩ u.
    pub fn spatial_split(&self, c: f64, x: &Vector4<f64>) -> (f64, Vector4<f64>) {
        let g = minkowski_metric();
        let s = (g * self.u).dot(&(x - self.origin));
        (s / c, x - self.u * s)
    }

    /// Triad coordinates of an event's spatial projection:
    /// yⁱ = −⟨g(fᵢ), x − x₀⟩.
    pub fn triad_coordinates(&self, x: &Vector4<f64>) -> [f64; 3] {
        let g = minkowski_metric();
        let d = x - self.origin;
        let mut y = [0.0; 3];
        for (yi, f) in y.iter_mut().zip(&self.triad) {
            *yi = -(g * f).dot(&d);
        }
        y
    }

    /// The spatial metric on frame coordinates, h_ij = −⟨g(fᵢ), fⱼ⟩.
    pub fn spatial_metric(&self) -> Matrix3<f64> {
        let g = minkowski_metric();
        Matrix3::from_fn(|i, j| -(g * self.triad[i]).dot(&self.triad[j]))
    }

    /// The reflection of space-time through this frame's time axis:
    /// ψ(x) = x − 2⟨g(u), x − x₀⟩ u. It fixes the simultaneity leaf through
    /// the origin and reverses the flow of frame time.
    pub fn time_reflection(&self) -> AffineMap {
        let g = minkowski_metric();
        let gu = g * self.u;
        let linear = Matrix4::identity() - 2.0 * self.u * gu.transpose();
        let translation = self.u * (2.0 * gu.dot(&self.origin));
        AffineMap::new(linear, translation)
    }
}

fn constitutive_parity(parity: Parity) -> Result<Parity> {
    let allowed = match parity {
        Parity::Standard(_) => true,
        Parity::Relativistic { temporal, spatial } => temporal != spatial,
    };
    if !allowed {
        return Err(Error::ParityMismatch(
            parity.label().into(),
            "a field-strength or induction parity (odd under exactly one \
             reflection class in the four-class model)"
                .into(),
        ));
    }
    parity.product(parity.model().volume_parity())
}

/// The constitutive map on two-covectors: raise both indices with the metric
/// and contract into the metric volume form. It exchanges field strengths
/// with inductions and multiplies parity by the volume parity.
pub fn constitutive(f: &MultiCovector) -> Result<MultiCovector> {
    if f.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: f.dim(),
        });
    }
    if f.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: f.degree(),
        });
    }
    constitutive_parity(f.parity())?;
    let g = minkowski_metric();
    let sharp = metric_sharp(&g, f)?;
    let vol = volume_form(&g, f.parity().model())?;
    contract(&sharp, &vol)
}

/// The constitutive map applied pointwise to a differential form field,
/// threading exact partial derivatives when the input carries them.
pub fn constitutive_field(f: &DifferentialForm) -> Result<DifferentialForm> {
    if f.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: f.dim(),
        });
    }
    if f.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: f.degree(),
        });
    }
    let parity = constitutive_parity(f.parity())?;
    let value_src = f.clone();
    let partial_src = f.clone();
    let mut out = DifferentialForm::new_in(
        4,
        2,
        parity,
        std::sync::Arc::new(move |x: &Vector4<f64>| constitutive(&value_src.value(x)?)),
    )?;
    if f.has_exact_partials() {
        out = out.with_partials(std::sync::Arc::new(move |x: &Vector4<f64>, lam: usize| {
            constitutive(&partial_src.partial(x, lam)?)
        }));
    }
    Ok(out)
}

fn spatial_sharp_metric(frame: &InertialFrame) -> Matrix4<f64> {
    let h = frame.spatial_metric();
    let mut g = Matrix4::identity();
    for i in 0..3 {
        for j in 0..3 {
            g[(i, j)] = h[(i, j)];
        }
    }
    g
}

/// The spatial constitutive map on electric-type covectors: raise the index
/// with the spatial metric and weight by its volume factor, producing a
/// vector density D̄ⁱ = √(det h) · hⁱʲ Eⱼ.
pub fn spatial_constitutive(frame: &InertialFrame, e: &MultiCovector) -> Result<Density> {
    if e.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: e.dim(),
        });
    }
    if e.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: e.degree(),
        });
    }
    if e.parity() != Parity::Standard(ParityTag::Even) {
        return Err(Error::ParityMismatch(
            e.parity().label().into(),
            "an even spatial covector".into(),
        ));
    }
    let h = frame.spatial_metric();
    let sharp = metric_sharp(&spatial_sharp_metric(frame), e)?;
    Ok(Density::new(sharp.scale(h.determinant().abs().sqrt())))
}

/// The spatial constitutive map on magnetic-type two-covectors: raise both
/// indices with the spatial metric and weight by its volume factor, producing
/// a bivector density H̄ⁱʲ = √(det h) · hⁱᵏ hʲˡ Bₖₗ.
pub fn spatial_constitutive_b(frame: &InertialFrame, b: &MultiCovector) -> Result<Density> {
    if b.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: b.dim(),
        });
    }
    if b.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: b.degree(),
        });
    }
    if b.parity() != Parity::Standard(ParityTag::Even) {
        return Err(Error::ParityMismatch(
            b.parity().label().into(),
            "an even spatial two-covector".into(),
        ));
    }
    let h = frame.spatial_metric();
    let sharp = metric_sharp(&spatial_sharp_metric(frame), b)?;
    Ok(Density::new(sharp.scale(h.determinant().abs().sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orientation::Orientation;
    use approx::assert_relative_eq;

    #[test]
    fn metric_has_trace_signature() {
        let g = minkowski_metric();
        assert_eq!(g[(0, 0)], 1.0);
        assert_eq!(g[(1, 1)], -1.0);
        assert_eq!(g.trace(), -2.0);
    }

    #[test]
    fn volume_form_flips_only_with_determinant() {
        let g = minkowski_metric();
        let basis = [
            Vector4::new(1.0, 0.0, 0.0, 0.0),
            Vector4::new(0.0, 1.0, 0.0, 0.0),
            Vector4::new(0.0, 0.0, 1.0, 0.0),
            Vector4::new(0.0, 0.0, 0.0, 1.0),
        ];
        let vol = volume_form(&g, OrientationModel::Standard).unwrap();
        let oref = Orientation::reference(OrientationModel::Standard);
        let orev = oref.apply(GroupClass::STD_P).unwrap();
        assert_relative_eq!(vol.evaluate(&basis, oref).unwrap(), 1.0);
        assert_relative_eq!(vol.evaluate(&basis, orev).unwrap(), -1.0);

        let vol4 = volume_form(&g, OrientationModel::Relativistic).unwrap();
        let r = Orientation::reference(OrientationModel::Relativistic);
        for cls in [
            GroupClass::LOR_E,
            GroupClass::LOR_T,
            GroupClass::LOR_S,
            GroupClass::LOR_TS,
        ] {
            let o = r.apply(cls).unwrap();
            let expect = cls.det_sign();
            assert_relative_eq!(vol4.evaluate(&basis, o).unwrap(), expect);
        }
    }

    #[test]
    fn boosted_frames_are_orthonormal_and_proper() {
        let origin = Vector4::new(0.5, -1.0, 2.0, 0.0);
        for beta in [[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.3, -0.4, 0.6]] {
            let f = InertialFrame::boosted(origin, beta).unwrap();
            assert_eq!(f.lift_class().unwrap(), GroupClass::LOR_E);
        }
        assert!(InertialFrame::boosted(origin, [0.8, 0.8, 0.0]).is_err());
    }

    #[test]
    fn event_and_split_are_inverse() {
        let origin = Vector4::new(1.0, 2.0, 3.0, 4.0);
        let frame = InertialFrame::boosted(origin, [0.6, 0.0, 0.2]).unwrap();
        let c = 2.0;
        let y = [0.7, -1.3, 0.4];
        let x = frame.event(c, 1.5, &y);
        let (t, leaf) = frame.spatial_split(c, &x);
        assert_relative_eq!(t, 1.5, epsilon = 1e-12);
        let yy = frame.triad_coordinates(&x);
        for i in 0..3 {
            assert_relative_eq!(yy[i], y[i], epsilon = 1e-12);
        }
        // The leaf projection carries the same triad coordinates at time 0.
        let (t0, _) = frame.spatial_split(c, &leaf);
        assert_relative_eq!(t0, 0.0, epsilon = 1e-12);
        let y0 = frame.triad_coordinates(&leaf);
        for i in 0..3 {
            assert_relative_eq!(y0[i], y[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn spatial_metric_of_orthonormal_triad_is_euclidean() {
        let frame = InertialFrame::boosted(Vector4::zeros(), [0.0, 0.5, 0.5]).unwrap();
        let h = frame.spatial_metric();
        assert_relative_eq!(h, Matrix3::identity(), epsilon = 1e-12);
    }

    #[test]
    fn time_reflection_is_an_involution_fixing_the_leaf() {
        for beta in [[0.0, 0.0, 0.0], [0.5, 0.1, -0.2]] {
            let origin = Vector4::new(0.3, 1.0, -2.0, 0.5);
            let frame = InertialFrame::boosted(origin, beta).unwrap();
            let psi = frame.time_reflection();
            // Involution.
            let twice = psi.compose(&psi);
            let x = Vector4::new(2.0, -1.0, 0.5, 3.0);
            assert_relative_eq!(twice.apply(&x), x, epsilon = 1e-12);
            // Fixes origin and spatial axes, reverses the velocity.
            assert_relative_eq!(psi.apply(&origin), origin, epsilon = 1e-12);
            let fx = origin + frame.triad()[1];
            assert_relative_eq!(psi.apply(&fx), fx, epsilon = 1e-12);
            let tu = origin + frame.velocity_unit();
            assert_relative_eq!(
                psi.apply(&tu),
                origin - frame.velocity_unit(),
                epsilon = 1e-12
            );
            // The linear part reverses time orientation and preserves space.
            let cls = classify_lorentz(&psi.linear(), &minkowski_metric()).unwrap();
            assert_eq!(cls, GroupClass::LOR_T);
        }
    }

    #[test]
    fn constitutive_on_basis_two_covectors() {
        // e⁰∧e¹ ↦ −e²∧e³ and e²∧e³ ↦ +e⁰∧e¹.
        let f = MultiCovector::basis(4, &[0, 1], Parity::EVEN).unwrap();
        let g = constitutive(&f).unwrap();
        assert_eq!(g.parity(), Parity::ODD);
        assert_relative_eq!(g.coefficient(&[2, 3]).unwrap(), -1.0);
        assert_relative_eq!(g.norm_inf(), 1.0);

        let f2 = MultiCovector::basis(4, &[2, 3], Parity::EVEN).unwrap();
        let g2 = constitutive(&f2).unwrap();
        assert_relative_eq!(g2.coefficient(&[0, 1]).unwrap(), 1.0);

        // Twice is minus the identity, for both models.
        let coeffs = [1.0, -0.5, 2.0, 0.25, -1.5, 3.0];
        for parity in [Parity::EVEN, Parity::OE] {
            let a = MultiCovector::new(4, 2, parity, &coeffs).unwrap();
            let cc = constitutive(&constitutive(&a).unwrap()).unwrap();
            assert_eq!(cc.parity(), parity);
            assert!(cc.try_sub(&a.scale(-1.0)).unwrap().norm_inf() < 1e-12);
        }
    }

    #[test]
    fn constitutive_rejects_wrong_inputs() {
        let three = MultiCovector::basis(4, &[0, 1, 2], Parity::EVEN).unwrap();
        assert!(matches!(
            constitutive(&three),
            Err(Error::DegreeMismatch { expected: 2, .. })
        ));
        let ee = MultiCovector::basis(4, &[0, 1], Parity::EE).unwrap();
        assert!(matches!(constitutive(&ee), Err(Error::ParityMismatch(..))));
    }

    #[test]
    fn spatial_constitutive_raises_with_unit_factors() {
        let frame = InertialFrame::rest(Vector4::zeros());
        let e = MultiCovector::basis(3, &[1], Parity::EVEN).unwrap();
        let d = spatial_constitutive(&frame, &e).unwrap();
        assert_eq!(d.degree(), 1);
        assert_relative_eq!(d.vector().coefficient(&[1]).unwrap(), 1.0);
        assert_relative_eq!(d.norm_inf(), 1.0);

        let b = MultiCovector::basis(3, &[2, 3], Parity::EVEN);
        assert!(b.is_err()); // dimension-3 indices run 0..=2

        let b = MultiCovector::basis(3, &[1, 2], Parity::EVEN).unwrap();
        let h = spatial_constitutive_b(&frame, &b).unwrap();
        assert_eq!(h.degree(), 2);
        assert_relative_eq!(h.norm_inf(), 1.0);
    }
}
