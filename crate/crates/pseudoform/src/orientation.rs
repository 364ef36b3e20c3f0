//! Orientation models, group classes, parities, and the index character.
//!
//! Two models are supported. In the *standard* model the relevant group is the
//! quotient of GL(V) by its identity component: two classes, the identity `E`
//! and the determinant-reversing class `P`. In the *relativistic* model the
//! group is the component group of the Lorentz group of a metric of signature
//! (+,−,−,−): four classes `E`, `T` (time-reversing), `S` (space-reversing),
//! and `TS`. Parities are characters of these groups; the `index` of a parity
//! on a class is the value ±1 of that character.

use nalgebra::{Matrix4, Vector4};

use crate::{Error, Result};

/// Which orientation group a class or parity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrientationModel {
    /// Two classes: identity and determinant-reversing.
    Standard,
    /// Four classes: identity, time-reversing, space-reversing, and both.
    Relativistic,
}

impl OrientationModel {
    pub fn label(self) -> &'static str {
        match self {
            OrientationModel::Standard => "standard",
            OrientationModel::Relativistic => "relativistic",
        }
    }

    /// All group classes of the model, identity first.
    pub fn classes(self) -> &'static [GroupClass] {
        match self {
            OrientationModel::Standard => &[
                GroupClass::Standard(StandardClass::E),
                GroupClass::Standard(StandardClass::P),
            ],
            OrientationModel::Relativistic => &[
                GroupClass::Lorentz(LorentzClass::E),
                GroupClass::Lorentz(LorentzClass::T),
                GroupClass::Lorentz(LorentzClass::S),
                GroupClass::Lorentz(LorentzClass::Ts),
            ],
        }
    }

    /// All parities of the model, fully even first.
    pub fn parities(self) -> &'static [Parity] {
        match self {
            OrientationModel::Standard => &[Parity::EVEN, Parity::ODD],
            OrientationModel::Relativistic => &[Parity::EE, Parity::OE, Parity::EO, Parity::OO],
        }
    }

    /// The parity that is even on every class.
    pub fn even_parity(self) -> Parity {
        self.parities()[0]
    }

    /// The parity of a volume element: odd on every orientation-reversing class.
    ///
    /// In the standard model this is the odd parity; in the relativistic model
    /// it is (odd, odd), which is odd on `T` and `S` and even on `TS`.
    pub fn volume_parity(self) -> Parity {
        match self {
            OrientationModel::Standard => Parity::ODD,
            OrientationModel::Relativistic => Parity::OO,
        }
    }
}

/// Connected-component class of a structure-preserving linear map, standard model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StandardClass {
    /// Positive determinant.
    E,
    /// Negative determinant.
    P,
}

/// Connected-component class of a Lorentz map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LorentzClass {
    /// Proper orthochronous: preserves time and space orientation.
    E,
    /// Reverses time orientation only (determinant −1).
    T,
    /// Reverses space orientation only (determinant −1).
    S,
    /// Reverses both (determinant +1).
    Ts,
}

/// A connected-component class in either orientation model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupClass {
    Standard(StandardClass),
    Lorentz(LorentzClass),
}

impl GroupClass {
    pub const STD_E: Self = GroupClass::Standard(StandardClass::E);
    pub const STD_P: Self = GroupClass::Standard(StandardClass::P);
    pub const LOR_E: Self = GroupClass::Lorentz(LorentzClass::E);
    pub const LOR_T: Self = GroupClass::Lorentz(LorentzClass::T);
    pub const LOR_S: Self = GroupClass::Lorentz(LorentzClass::S);
    pub const LOR_TS: Self = GroupClass::Lorentz(LorentzClass::Ts);

    pub fn model(self) -> OrientationModel {
        match self {
            GroupClass::Standard(_) => OrientationModel::Standard,
            GroupClass::Lorentz(_) => OrientationModel::Relativistic,
        }
    }

    /// Identity class of a model.
    pub fn identity(model: OrientationModel) -> Self {
        match model {
            OrientationModel::Standard => Self::STD_E,
            OrientationModel::Relativistic => Self::LOR_E,
        }
    }

    pub fn is_identity(self) -> bool {
        self.bits() == 0
    }

    /// Bit encoding. Standard: bit 0 = determinant-reversing. Relativistic:
    /// bit 0 = time-reversing, bit 1 = space-reversing.
    pub(crate) fn bits(self) -> u8 {
        match self {
            GroupClass::Standard(StandardClass::E) => 0b0,
            GroupClass::Standard(StandardClass::P) => 0b1,
            GroupClass::Lorentz(LorentzClass::E) => 0b00,
            GroupClass::Lorentz(LorentzClass::T) => 0b01,
            GroupClass::Lorentz(LorentzClass::S) => 0b10,
            GroupClass::Lorentz(LorentzClass::Ts) => 0b11,
        }
    }

    pub(crate) fn from_bits(model: OrientationModel, bits: u8) -> Self {
        match (model, bits) {
            (OrientationModel::Standard, 0b0) => Self::STD_E,
            (OrientationModel::Standard, 0b1) => Self::STD_P,
            (OrientationModel::Relativistic, 0b00) => Self::LOR_E,
            (OrientationModel::Relativistic, 0b01) => Self::LOR_T,
            (OrientationModel::Relativistic, 0b10) => Self::LOR_S,
            (OrientationModel::Relativistic, 0b11) => Self::LOR_TS,
            _ => unreachable!("invalid class bits"),
        }
    }

    /// Group product of two classes of the same model.
    pub fn compose(self, other: Self) -> Result<Self> {
        if self.model() != other.model() {
            return Err(Error::ModelMismatch(
                self.model().label(),
                other.model().label(),
            ));
        }
        Ok(Self::from_bits(self.model(), self.bits() ^ other.bits()))
    }

    /// Sign of the determinant of any representative.
    pub fn det_sign(self) -> f64 {
        if self.bits().count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Whether representatives preserve time orientation (relativistic only).
    pub fn time_preserving(self) -> Option<bool> {
        match self {
            GroupClass::Standard(_) => None,
            GroupClass::Lorentz(_) => Some(self.bits() & 0b01 == 0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GroupClass::Standard(StandardClass::E) => "E",
            GroupClass::Standard(StandardClass::P) => "P",
            GroupClass::Lorentz(LorentzClass::E) => "E",
            GroupClass::Lorentz(LorentzClass::T) => "T",
            GroupClass::Lorentz(LorentzClass::S) => "S",
            GroupClass::Lorentz(LorentzClass::Ts) => "TS",
        }
    }
}

/// Even/odd tag for one factor of a parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityTag {
    Even,
    Odd,
}

impl ParityTag {
    fn bit(self) -> u8 {
        match self {
            ParityTag::Even => 0,
            ParityTag::Odd => 1,
        }
    }

    fn from_bit(b: u8) -> Self {
        if b & 1 == 0 {
            ParityTag::Even
        } else {
            ParityTag::Odd
        }
    }
}

/// A character of the orientation group: the transformation behaviour of a
/// twisted object when the orientation argument is moved by a group class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Standard(ParityTag),
    Relativistic {
        temporal: ParityTag,
        spatial: ParityTag,
    },
}

impl Parity {
    pub const EVEN: Self = Parity::Standard(ParityTag::Even);
    pub const ODD: Self = Parity::Standard(ParityTag::Odd);
    pub const EE: Self = Parity::Relativistic {
        temporal: ParityTag::Even,
        spatial: ParityTag::Even,
    };
    pub const OE: Self = Parity::Relativistic {
        temporal: ParityTag::Odd,
        spatial: ParityTag::Even,
    };
    pub const EO: Self = Parity::Relativistic {
        temporal: ParityTag::Even,
        spatial: ParityTag::Odd,
    };
    pub const OO: Self = Parity::Relativistic {
        temporal: ParityTag::Odd,
        spatial: ParityTag::Odd,
    };

    pub fn model(self) -> OrientationModel {
        match self {
            Parity::Standard(_) => OrientationModel::Standard,
            Parity::Relativistic { .. } => OrientationModel::Relativistic,
        }
    }

    /// Bit encoding matching [`GroupClass::bits`]: standard bit 0 = odd;
    /// relativistic bit 0 = temporal-odd, bit 1 = spatial-odd.
    pub(crate) fn bits(self) -> u8 {
        match self {
            Parity::Standard(t) => t.bit(),
            Parity::Relativistic { temporal, spatial } => temporal.bit() | (spatial.bit() << 1),
        }
    }

    pub(crate) fn from_bits(model: OrientationModel, bits: u8) -> Self {
        match model {
            OrientationModel::Standard => Parity::Standard(ParityTag::from_bit(bits)),
            OrientationModel::Relativistic => Parity::Relativistic {
                temporal: ParityTag::from_bit(bits),
                spatial: ParityTag::from_bit(bits >> 1),
            },
        }
    }

    /// Pointwise product of characters (componentwise even/odd multiplication).
    pub fn product(self, other: Self) -> Result<Self> {
        if self.model() != other.model() {
            return Err(Error::ModelMismatch(
                self.model().label(),
                other.model().label(),
            ));
        }
        Ok(Self::from_bits(self.model(), self.bits() ^ other.bits()))
    }

    /// Value of the character on a group class: +1 or −1.
    pub fn index(self, cls: GroupClass) -> Result<f64> {
        if self.model() != cls.model() {
            return Err(Error::ModelMismatch(
                self.model().label(),
                cls.model().label(),
            ));
        }
        if (self.bits() & cls.bits()).count_ones().is_multiple_of(2) {
            Ok(1.0)
        } else {
            Ok(-1.0)
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Standard(ParityTag::Even) => "even",
            Parity::Standard(ParityTag::Odd) => "odd",
            Parity::EE => "(e,e)",
            Parity::OE => "(o,e)",
            Parity::EO => "(e,o)",
            Parity::OO => "(o,o)",
        }
    }
}

/// Value of the parity character on a group class (free-function form).
pub fn index(parity: Parity, cls: GroupClass) -> Result<f64> {
    parity.index(cls)
}

/// An orientation of the model vector space, encoded as the group class that
/// moves the fixed reference orientation onto it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Orientation {
    offset: GroupClass,
}

impl Orientation {
    /// The reference orientation of a model.
    pub fn reference(model: OrientationModel) -> Self {
        Orientation {
            offset: GroupClass::identity(model),
        }
    }

    /// The orientation obtained by moving the reference by `offset`.
    pub fn from_offset(offset: GroupClass) -> Self {
        Orientation { offset }
    }

    pub fn offset(self) -> GroupClass {
        self.offset
    }

    pub fn model(self) -> OrientationModel {
        self.offset.model()
    }

    pub fn is_reference(self) -> bool {
        self.offset.is_identity()
    }

    /// Move this orientation by a group class.
    pub fn apply(self, cls: GroupClass) -> Result<Self> {
        Ok(Orientation {
            offset: cls.compose(self.offset)?,
        })
    }
}

const CLASSIFY_DET_TOL: f64 = 1e-12;
const ORTHONORMALITY_TOL: f64 = 1e-8;

/// Component class of an invertible linear map in the standard model.
pub fn classify_gl(m: &Matrix4<f64>) -> Result<GroupClass> {
    let det = m.determinant();
    if det.abs() < CLASSIFY_DET_TOL {
        return Err(Error::Singular { det });
    }
    Ok(if det > 0.0 {
        GroupClass::STD_E
    } else {
        GroupClass::STD_P
    })
}

/// Component class of an invertible linear map of a 3- or 4-dimensional
/// coordinate space in the standard model, via the sign of the determinant of
/// the leading `dim × dim` block.
pub(crate) fn classify_gl_dim(dim: usize, m: &Matrix4<f64>) -> Result<GroupClass> {
    let det = match dim {
        4 => m.determinant(),
        3 => m.fixed_view::<3, 3>(0, 0).determinant(),
        _ => unreachable!("ambient dimension is 3 or 4"),
    };
    if det.abs() < CLASSIFY_DET_TOL {
        return Err(Error::Singular { det });
    }
    Ok(if det > 0.0 {
        GroupClass::STD_E
    } else {
        GroupClass::STD_P
    })
}

/// Component class of a Lorentz map with respect to the metric `g`.
///
/// The map must satisfy mᵀ g m = g entrywise within an absolute tolerance of
/// 1e−8; otherwise the offending entry is reported. Time orientation is probed
/// with the future-pointing timelike eigenvector of `g`.
pub fn classify_lorentz(m: &Matrix4<f64>, g: &Matrix4<f64>) -> Result<GroupClass> {
    let gram = m.transpose() * g * m;
    let dev = gram - g;
    for row in 0..4 {
        for col in 0..4 {
            if dev[(row, col)].abs() > ORTHONORMALITY_TOL {
                return Err(Error::NotOrthonormal {
                    row,
                    col,
                    deviation: dev[(row, col)].abs(),
                });
            }
        }
    }
    let det = m.determinant();
    let u0 = future_timelike_unit(g)?;
    // Time orientation is preserved iff g(m u₀, u₀) > 0.
    let time_component = (g * (m * u0)).dot(&u0);
    let time_reversing = time_component < 0.0;
    let space_reversing = (det < 0.0) != time_reversing;
    let bits = (time_reversing as u8) | ((space_reversing as u8) << 1);
    Ok(GroupClass::from_bits(OrientationModel::Relativistic, bits))
}

/// Future-pointing unit timelike vector of a symmetric metric of signature
/// (+,−,−,−): the eigenvector of the positive eigenvalue, normalized and
/// signed so that its largest-magnitude component is positive.
fn future_timelike_unit(g: &Matrix4<f64>) -> Result<Vector4<f64>> {
    let eig = nalgebra::SymmetricEigen::new(*g);
    let mut best: Option<(f64, usize)> = None;
    for i in 0..4 {
        let lambda = eig.eigenvalues[i];
        if lambda > 0.0 && best.is_none_or(|(l, _)| lambda > l) {
            best = Some((lambda, i));
        }
    }
    let (_, i) = best.ok_or_else(|| {
        Error::InvalidArgument(
            "metric has no positive eigenvalue; expected signature (+,-,-,-)".into(),
        )
    })?;
    let v = eig.eigenvectors.column(i).into_owned();
    let norm2 = (v.transpose() * g * v)[(0, 0)];
    if norm2 <= 0.0 {
        return Err(Error::InvalidArgument(
            "timelike eigenvector has non-positive norm".into(),
        ));
    }
    let mut u = v / norm2.sqrt();
    let lead = (0..4)
        .max_by(|&a, &b| u[a].abs().partial_cmp(&u[b].abs()).unwrap())
        .unwrap();
    if u[lead] < 0.0 {
        u = -u;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::minkowski_metric;

    #[test]
    fn standard_index_table() {
        // Even parity is +1 on both classes; odd parity flips on P.
        assert_eq!(Parity::EVEN.index(GroupClass::STD_E).unwrap(), 1.0);
        assert_eq!(Parity::EVEN.index(GroupClass::STD_P).unwrap(), 1.0);
        assert_eq!(Parity::ODD.index(GroupClass::STD_E).unwrap(), 1.0);
        assert_eq!(Parity::ODD.index(GroupClass::STD_P).unwrap(), -1.0);
    }

    #[test]
    fn relativistic_index_table() {
        let expected: [(Parity, [f64; 4]); 4] = [
            (Parity::EE, [1.0, 1.0, 1.0, 1.0]),
            (Parity::OE, [1.0, -1.0, 1.0, -1.0]),
            (Parity::EO, [1.0, 1.0, -1.0, -1.0]),
            (Parity::OO, [1.0, -1.0, -1.0, 1.0]),
        ];
        let classes = [
            GroupClass::LOR_E,
            GroupClass::LOR_T,
            GroupClass::LOR_S,
            GroupClass::LOR_TS,
        ];
        for (parity, row) in expected {
            for (cls, want) in classes.iter().zip(row) {
                assert_eq!(
                    parity.index(*cls).unwrap(),
                    want,
                    "{} on {}",
                    parity.label(),
                    cls.label()
                );
            }
        }
    }

    #[test]
    fn index_is_multiplicative_in_both_arguments() {
        for model in [OrientationModel::Standard, OrientationModel::Relativistic] {
            for &p in model.parities() {
                for &c1 in model.classes() {
                    for &c2 in model.classes() {
                        let lhs = p.index(c1.compose(c2).unwrap()).unwrap();
                        let rhs = p.index(c1).unwrap() * p.index(c2).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
            for &p1 in model.parities() {
                for &p2 in model.parities() {
                    for &c in model.classes() {
                        let lhs = p1.product(p2).unwrap().index(c).unwrap();
                        let rhs = p1.index(c).unwrap() * p2.index(c).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn parity_product_table() {
        // Componentwise products; in particular (o,e)·(e,e) = (o,e) and
        // (o,e)·(e,o) = (o,o).
        assert_eq!(Parity::OE.product(Parity::EE).unwrap(), Parity::OE);
        assert_eq!(Parity::OE.product(Parity::EO).unwrap(), Parity::OO);
        assert_eq!(Parity::OE.product(Parity::OE).unwrap(), Parity::EE);
        assert_eq!(Parity::OO.product(Parity::OO).unwrap(), Parity::EE);
        assert_eq!(Parity::EO.product(Parity::OO).unwrap(), Parity::OE);
        assert_eq!(Parity::EVEN.product(Parity::ODD).unwrap(), Parity::ODD);
        assert_eq!(Parity::ODD.product(Parity::ODD).unwrap(), Parity::EVEN);
        assert!(Parity::ODD.product(Parity::OO).is_err());
    }

    #[test]
    fn klein_four_composition() {
        use GroupClass as G;
        assert_eq!(G::LOR_T.compose(G::LOR_S).unwrap(), G::LOR_TS);
        assert_eq!(G::LOR_T.compose(G::LOR_TS).unwrap(), G::LOR_S);
        assert_eq!(G::LOR_S.compose(G::LOR_TS).unwrap(), G::LOR_T);
        for &c in OrientationModel::Relativistic.classes() {
            assert_eq!(c.compose(c).unwrap(), G::LOR_E);
        }
        assert!(G::LOR_T.compose(G::STD_P).is_err());
    }

    #[test]
    fn det_signs_match_classes() {
        assert_eq!(GroupClass::STD_E.det_sign(), 1.0);
        assert_eq!(GroupClass::STD_P.det_sign(), -1.0);
        assert_eq!(GroupClass::LOR_E.det_sign(), 1.0);
        assert_eq!(GroupClass::LOR_T.det_sign(), -1.0);
        assert_eq!(GroupClass::LOR_S.det_sign(), -1.0);
        assert_eq!(GroupClass::LOR_TS.det_sign(), 1.0);
    }

    #[test]
    fn classify_gl_by_det_sign() {
        assert_eq!(
            classify_gl(&Matrix4::identity()).unwrap(),
            GroupClass::STD_E
        );
        let mut m = Matrix4::identity();
        m[(2, 2)] = -3.0;
        assert_eq!(classify_gl(&m).unwrap(), GroupClass::STD_P);
        m[(1, 1)] = 0.0;
        assert!(matches!(classify_gl(&m), Err(Error::Singular { .. })));
    }

    #[test]
    fn classify_lorentz_reflections() {
        let g = minkowski_metric();
        let diag = |d: [f64; 4]| Matrix4::from_diagonal(&Vector4::from(d));
        assert_eq!(
            classify_lorentz(&Matrix4::identity(), &g).unwrap(),
            GroupClass::LOR_E
        );
        assert_eq!(
            classify_lorentz(&diag([-1.0, 1.0, 1.0, 1.0]), &g).unwrap(),
            GroupClass::LOR_T
        );
        assert_eq!(
            classify_lorentz(&diag([1.0, -1.0, 1.0, 1.0]), &g).unwrap(),
            GroupClass::LOR_S
        );
        assert_eq!(
            classify_lorentz(&diag([1.0, -1.0, -1.0, -1.0]), &g).unwrap(),
            GroupClass::LOR_S
        );
        assert_eq!(
            classify_lorentz(&diag([-1.0, -1.0, 1.0, 1.0]), &g).unwrap(),
            GroupClass::LOR_TS
        );
        assert_eq!(
            classify_lorentz(&diag([-1.0, -1.0, -1.0, -1.0]), &g).unwrap(),
            GroupClass::LOR_TS
        );
    }

    #[test]
    fn classify_lorentz_boost_is_proper_orthochronous() {
        let g = minkowski_metric();
        for beta in [-0.9, -0.3, 0.5, 0.99] {
            let gamma = 1.0 / (1.0_f64 - beta * beta).sqrt();
            let mut m = Matrix4::identity();
            m[(0, 0)] = gamma;
            m[(0, 1)] = gamma * beta;
            m[(1, 0)] = gamma * beta;
            m[(1, 1)] = gamma;
            assert_eq!(classify_lorentz(&m, &g).unwrap(), GroupClass::LOR_E);
        }
    }

    #[test]
    fn classify_lorentz_rejects_non_orthonormal() {
        let g = minkowski_metric();
        let mut m = Matrix4::identity();
        m[(2, 2)] = 1.5;
        match classify_lorentz(&m, &g) {
            Err(Error::NotOrthonormal {
                row: 2,
                col: 2,
                deviation,
            }) => {
                assert!((deviation - (1.5f64 * 1.5 - 1.0)).abs() < 1e-12);
            }
            other => panic!("expected NotOrthonormal(2,2), got {other:?}"),
        }
    }

    #[test]
    fn orientations_move_by_classes() {
        let o = Orientation::reference(OrientationModel::Relativistic);
        assert!(o.is_reference());
        let ot = o.apply(GroupClass::LOR_T).unwrap();
        assert_eq!(ot.offset(), GroupClass::LOR_T);
        assert_eq!(ot.apply(GroupClass::LOR_T).unwrap(), o);
        assert_eq!(
            ot.apply(GroupClass::LOR_S).unwrap().offset(),
            GroupClass::LOR_TS
        );
    }
}
