//! Pointwise twisted multilinear algebra: multicovectors, multivectors,
//! densities, and the maps between them.
//!
//! Values live over a coordinate space of dimension 3 or 4 with a fixed basis.
//! Components are stored on ascending index tuples in lexicographic order, so
//! a coefficient equals the value of the object on the corresponding basis
//! tuple at the reference orientation; no factorial normalizations appear.
//! Index tuples are encoded as bitmasks, and shuffle signs are inversion
//! counts between masks.

use nalgebra::{Matrix4, Vector4};

use crate::numeric::det_small;
use crate::orientation::{
    classify_gl_dim, classify_lorentz, GroupClass, Orientation, OrientationModel, Parity,
};
use crate::{Error, Result};

/// Ascending index tuples of length `q` from {0,…,dim−1}, lexicographic, as
/// bitmasks. Empty for `q > dim`, so over-degree values have zero components.
pub(crate) fn masks(dim: usize, q: usize) -> &'static [u8] {
    const M3: [&[u8]; 4] = [
        &[0b000],
        &[0b001, 0b010, 0b100],
        &[0b011, 0b101, 0b110],
        &[0b111],
    ];
    const M4: [&[u8]; 5] = [
        &[0b0000],
        &[0b0001, 0b0010, 0b0100, 0b1000],
        &[0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100],
        &[0b0111, 0b1011, 0b1101, 0b1110],
        &[0b1111],
    ];
    match dim {
        3 => M3.get(q).copied().unwrap_or(&[]),
        4 => M4.get(q).copied().unwrap_or(&[]),
        _ => unreachable!("ambient dimension is 3 or 4"),
    }
}

/// Number of components of a degree-`q` object in dimension `dim`.
pub fn component_count(dim: usize, q: usize) -> usize {
    masks(dim, q).len()
}

pub(crate) fn mask_position(dim: usize, mask: u8) -> usize {
    let q = mask.count_ones() as usize;
    masks(dim, q)
        .iter()
        .position(|&m| m == mask)
        .expect("mask belongs to the table")
}

/// Sign of merging two disjoint ascending tuples into one ascending tuple:
/// (−1)^inversions, where an inversion is a pair (i ∈ a, j ∈ b) with j < i.
pub(crate) fn merge_sign(ma: u8, mb: u8) -> f64 {
    let mut inv = 0u32;
    for i in 0..8 {
        if ma >> i & 1 == 1 {
            inv += (mb & ((1u8 << i) - 1)).count_ones();
        }
    }
    if inv.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn indices_of(mask: u8) -> impl Iterator<Item = usize> {
    (0..8).filter(move |i| mask >> i & 1 == 1)
}

fn full_mask(dim: usize) -> u8 {
    (1u8 << dim) - 1
}

fn check_dims(dim: usize) -> Result<()> {
    if dim == 3 || dim == 4 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: 4,
            found: dim,
        })
    }
}

fn check_same(dim_a: usize, dim_b: usize, pa: Parity, pb: Parity) -> Result<()> {
    if dim_a != dim_b {
        return Err(Error::DimensionMismatch {
            expected: dim_a,
            found: dim_b,
        });
    }
    if pa.model() != pb.model() {
        return Err(Error::ModelMismatch(pa.model().label(), pb.model().label()));
    }
    Ok(())
}

/// Determinant of the q×q submatrix of a linear map given by row mask `rows`
/// and column mask `cols`.
fn minor(m: &[[f64; 4]; 4], rows: u8, cols: u8) -> f64 {
    let q = rows.count_ones() as usize;
    debug_assert_eq!(q, cols.count_ones() as usize);
    let mut sub = [[0.0; 4]; 4];
    for (r, i) in indices_of(rows).enumerate() {
        for (c, j) in indices_of(cols).enumerate() {
            sub[r][c] = m[i][j];
        }
    }
    det_small(q, &sub)
}

fn matrix_to_rows(m: &Matrix4<f64>) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = m[(r, c)];
        }
    }
    out
}

/// Signed lookup of a coefficient by an arbitrary repeated-free index tuple.
fn signed_lookup(dim: usize, coeffs: &[f64], indices: &[usize]) -> Result<f64> {
    for &i in indices {
        if i >= dim {
            return Err(Error::InvalidArgument(format!(
                "index {i} out of range for dimension {dim}"
            )));
        }
    }
    let mut mask = 0u8;
    for &i in indices {
        if mask >> i & 1 == 1 {
            return Ok(0.0);
        }
        mask |= 1 << i;
    }
    let mut sign = 1.0;
    let mut idx = indices.to_vec();
    // Bubble sort, counting swaps.
    for i in 0..idx.len() {
        for j in 0..idx.len().saturating_sub(i + 1) {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    Ok(sign * coeffs[mask_position(dim, mask)])
}

/// Shared component operations for covectors and vectors.
fn wedge_components(dim: usize, qa: usize, qb: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let out_masks = masks(dim, qa + qb);
    let mut out = vec![0.0; out_masks.len()];
    for (pa, &ma) in masks(dim, qa).iter().enumerate() {
        if a[pa] == 0.0 {
            continue;
        }
        for (pb, &mb) in masks(dim, qb).iter().enumerate() {
            if ma & mb != 0 || b[pb] == 0.0 {
                continue;
            }
            let m = ma | mb;
            out[mask_position(dim, m)] += merge_sign(ma, mb) * a[pa] * b[pb];
        }
    }
    out
}

/// Apply the degree-`q` compound (exterior power) of a linear map to
/// components: out_J = Σ_I comp_I · det m[sel(I), sel(J)], where `rows_from_in`
/// selects whether the input indexes rows (covector pullback) or columns
/// (vector pushforward).
fn compound_apply(
    dim: usize,
    q: usize,
    m: &[[f64; 4]; 4],
    comps: &[f64],
    input_selects_rows: bool,
) -> Vec<f64> {
    let table = masks(dim, q);
    let mut out = vec![0.0; table.len()];
    for (pj, &mj) in table.iter().enumerate() {
        let mut acc = 0.0;
        for (pi, &mi) in table.iter().enumerate() {
            if comps[pi] == 0.0 {
                continue;
            }
            let d = if input_selects_rows {
                minor(m, mi, mj)
            } else {
                minor(m, mj, mi)
            };
            acc += comps[pi] * d;
        }
        out[pj] = acc;
    }
    out
}

/// Component class of a linear map in the model of the given parity.
pub(crate) fn classify_for(parity: Parity, dim: usize, m: &Matrix4<f64>) -> Result<GroupClass> {
    match parity.model() {
        OrientationModel::Standard => classify_gl_dim(dim, m),
        OrientationModel::Relativistic => {
            if dim != 4 {
                return Err(Error::DimensionMismatch {
                    expected: 4,
                    found: dim,
                });
            }
            classify_lorentz(m, &crate::minkowski::minkowski_metric())
        }
    }
}

/// A twisted antisymmetric multilinear form on the coordinate space.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiCovector {
    dim: usize,
    degree: usize,
    parity: Parity,
    coeffs: Vec<f64>,
}

/// A twisted multivector (formal combination of vector tuples), stored through
/// its components on the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiVector {
    dim: usize,
    degree: usize,
    parity: Parity,
    coeffs: Vec<f64>,
}

macro_rules! common_impl {
    ($ty:ident) => {
        impl $ty {
            /// Build from components on ascending index tuples in
            /// lexicographic order.
            pub fn new(dim: usize, degree: usize, parity: Parity, coeffs: &[f64]) -> Result<Self> {
                check_dims(dim)?;
                let n = component_count(dim, degree);
                if coeffs.len() != n {
                    return Err(Error::DegreeMismatch {
                        expected: n,
                        found: coeffs.len(),
                    });
                }
                Ok(Self {
                    dim,
                    degree,
                    parity,
                    coeffs: coeffs.to_vec(),
                })
            }

            pub fn zero(dim: usize, degree: usize, parity: Parity) -> Self {
                Self {
                    dim,
                    degree,
                    parity,
                    coeffs: vec![0.0; component_count(dim, degree)],
                }
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

            /// Components on ascending tuples in lexicographic order.
            pub fn coefficients(&self) -> &[f64] {
                &self.coeffs
            }

            /// Signed component on an arbitrary index tuple (0 on repeats).
            pub fn coefficient(&self, indices: &[usize]) -> Result<f64> {
                if indices.len() != self.degree {
                    return Err(Error::ArityMismatch {
                        expected: self.degree,
                        found: indices.len(),
                    });
                }
                signed_lookup(self.dim, &self.coeffs, indices)
            }

            pub fn norm_inf(&self) -> f64 {
                self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
            }

            pub fn scale(&self, factor: f64) -> Self {
                let mut out = self.clone();
                for c in &mut out.coeffs {
                    *c *= factor;
                }
                out
            }

            pub fn try_add(&self, other: &Self) -> Result<Self> {
                check_same(self.dim, other.dim, self.parity, other.parity)?;
                if self.degree != other.degree {
                    return Err(Error::DegreeMismatch {
                        expected: self.degree,
                        found: other.degree,
                    });
                }
                if self.parity != other.parity {
                    return Err(Error::ParityMismatch(
                        self.parity.label().to_string(),
                        other.parity.label().to_string(),
                    ));
                }
                let mut out = self.clone();
                for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
                    *c += o;
                }
                Ok(out)
            }

            pub fn try_sub(&self, other: &Self) -> Result<Self> {
                self.try_add(&other.scale(-1.0))
            }
        }
    };
}

common_impl!(MultiCovector);
common_impl!(MultiVector);

impl MultiCovector {
    /// The basis covector e^{i₁…i_q}; a non-ascending index order contributes
    /// its permutation sign.
    pub fn basis(dim: usize, indices: &[usize], parity: Parity) -> Result<Self> {
        check_dims(dim)?;
        let mut mask = 0u8;
        for &i in indices {
            if i >= dim || mask >> i & 1 == 1 {
                return Err(Error::InvalidArgument(format!(
                    "basis indices must be distinct and < {dim}, got {indices:?}"
                )));
            }
            mask |= 1 << i;
        }
        let mut sign = 1.0;
        let mut idx = indices.to_vec();
        for i in 0..idx.len() {
            for j in 0..idx.len().saturating_sub(i + 1) {
                if idx[j] > idx[j + 1] {
                    idx.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        let mut out = Self::zero(dim, indices.len(), parity);
        out.coeffs[mask_position(dim, mask)] = sign;
        Ok(out)
    }

    /// Value on a tuple of vectors at an orientation. For dimension-3 objects
    /// only the leading three vector components participate.
    pub fn evaluate(&self, vectors: &[Vector4<f64>], o: Orientation) -> Result<f64> {
        if vectors.len() != self.degree {
            return Err(Error::ArityMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        if o.model() != self.parity.model() {
            return Err(Error::ModelMismatch(
                o.model().label(),
                self.parity.model().label(),
            ));
        }
        let idx = self.parity.index(o.offset())?;
        let mut sum = 0.0;
        for (pos, &mask) in masks(self.dim, self.degree).iter().enumerate() {
            let c = self.coeffs[pos];
            if c == 0.0 {
                continue;
            }
            // det M with M[r][s] = vectors[s][i_r].
            let mut m = [[0.0; 4]; 4];
            for (r, i) in indices_of(mask).enumerate() {
                for (s, v) in vectors.iter().enumerate() {
                    m[r][s] = v[i];
                }
            }
            sum += c * det_small(self.degree, &m);
        }
        Ok(idx * sum)
    }

    /// First-slot contraction with a fixed vector: (v ⌟ a)(w…) = a(v, w…).
    /// Parity is unchanged; the degree drops by one.
    pub fn interior(&self, v: &Vector4<f64>) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::UnsupportedDegree {
                degree: 0,
                reason: "interior product needs at least one slot",
            });
        }
        let mut out = Self::zero(self.dim, self.degree - 1, self.parity);
        if component_count(self.dim, self.degree) == 0 {
            return Ok(out);
        }
        for (pos, &mask) in masks(self.dim, self.degree - 1).iter().enumerate() {
            let mut acc = 0.0;
            for lam in 0..self.dim {
                let bit = 1u8 << lam;
                if mask & bit != 0 {
                    continue;
                }
                let src = mask_position(self.dim, mask | bit);
                acc += v[lam] * self.coeffs[src] * merge_sign(bit, mask);
            }
            out.coeffs[pos] = acc;
        }
        Ok(out)
    }

    /// Pullback along a linear map ψ: (ψ*a)(v…, o) = a(ψv…, [ψ]o). The class
    /// of ψ is taken in the model of the parity; relativistic objects require
    /// a Lorentz map.
    pub fn pullback(&self, map: &Matrix4<f64>) -> Result<Self> {
        let cls = classify_for(self.parity, self.dim, map)?;
        self.pullback_classified(map, cls)
    }

    /// Pullback with a pre-computed component class.
    pub(crate) fn pullback_classified(&self, map: &Matrix4<f64>, cls: GroupClass) -> Result<Self> {
        let idx = self.parity.index(cls)?;
        let rows = matrix_to_rows(map);
        let mut coeffs = compound_apply(self.dim, self.degree, &rows, &self.coeffs, true);
        for c in &mut coeffs {
            *c *= idx;
        }
        Ok(Self {
            dim: self.dim,
            degree: self.degree,
            parity: self.parity,
            coeffs,
        })
    }
}

impl MultiVector {
    /// The basis multivector e_{i₁…i_q}.
    pub fn basis(dim: usize, indices: &[usize], parity: Parity) -> Result<Self> {
        let c = MultiCovector::basis(dim, indices, parity)?;
        Ok(Self {
            dim: c.dim,
            degree: c.degree,
            parity: c.parity,
            coeffs: c.coeffs,
        })
    }

    /// Pushforward along a linear map ρ: ρ_*[Σ λ (v…, o)] = idx_p([ρ]) [Σ λ (ρv…, o)].
    pub fn pushforward(&self, map: &Matrix4<f64>) -> Result<Self> {
        let cls = classify_for(self.parity, self.dim, map)?;
        self.pushforward_classified(map, cls)
    }

    pub(crate) fn pushforward_classified(
        &self,
        map: &Matrix4<f64>,
        cls: GroupClass,
    ) -> Result<Self> {
        let idx = self.parity.index(cls)?;
        let rows = matrix_to_rows(map);
        let mut coeffs = compound_apply(self.dim, self.degree, &rows, &self.coeffs, false);
        for c in &mut coeffs {
            *c *= idx;
        }
        Ok(Self {
            dim: self.dim,
            degree: self.degree,
            parity: self.parity,
            coeffs,
        })
    }
}

/// Exterior product of twisted multicovectors; parities multiply. Results past
/// the top degree are zero objects with empty component lists.
pub fn wedge(a: &MultiCovector, b: &MultiCovector) -> Result<MultiCovector> {
    check_same(a.dim, b.dim, a.parity, b.parity)?;
    let parity = a.parity.product(b.parity)?;
    let coeffs = wedge_components(a.dim, a.degree, b.degree, &a.coeffs, &b.coeffs);
    Ok(MultiCovector {
        dim: a.dim,
        degree: a.degree + b.degree,
        parity,
        coeffs,
    })
}

/// Exterior product of twisted multivectors.
pub fn wedge_vectors(a: &MultiVector, b: &MultiVector) -> Result<MultiVector> {
    check_same(a.dim, b.dim, a.parity, b.parity)?;
    let parity = a.parity.product(b.parity)?;
    let coeffs = wedge_components(a.dim, a.degree, b.degree, &a.coeffs, &b.coeffs);
    Ok(MultiVector {
        dim: a.dim,
        degree: a.degree + b.degree,
        parity,
        coeffs,
    })
}

/// Canonical pairing of a multicovector with a multivector of the same degree
/// and parity: Σ_I a_I w^I. Orientation-independent exactly when the parities
/// match, which is therefore required.
pub fn pair(a: &MultiCovector, w: &MultiVector) -> Result<f64> {
    check_same(a.dim, w.dim, a.parity, w.parity)?;
    if a.degree != w.degree {
        return Err(Error::DegreeMismatch {
            expected: a.degree,
            found: w.degree,
        });
    }
    if a.parity != w.parity {
        return Err(Error::ParityMismatch(
            a.parity.label().to_string(),
            w.parity.label().to_string(),
        ));
    }
    Ok(a.coeffs.iter().zip(&w.coeffs).map(|(x, y)| x * y).sum())
}

/// Contraction of a multivector with a top multicovector, defined by
/// ⟨e, w ∧ v⟩ = ⟨w ⌟ e, v⟩ for all v of the complementary degree. In
/// components: (w⌟e)_K = e_top · w^{K^c} · sign(K^c, K).
pub fn contract(w: &MultiVector, e: &MultiCovector) -> Result<MultiCovector> {
    check_same(w.dim, e.dim, w.parity, e.parity)?;
    if e.degree != e.dim {
        return Err(Error::DegreeMismatch {
            expected: e.dim,
            found: e.degree,
        });
    }
    if w.degree > w.dim {
        return Err(Error::UnsupportedDegree {
            degree: w.degree,
            reason: "contraction needs degree ≤ dim",
        });
    }
    let parity = w.parity.product(e.parity)?;
    let e_top = e.coeffs[0];
    let dim = w.dim;
    let out_degree = dim - w.degree;
    let table = masks(dim, out_degree);
    let mut coeffs = vec![0.0; table.len()];
    for (pk, &mk) in table.iter().enumerate() {
        let mc = full_mask(dim) & !mk;
        coeffs[pk] = e_top * w.coeffs[mask_position(dim, mc)] * merge_sign(mc, mk);
    }
    Ok(MultiCovector {
        dim,
        degree: out_degree,
        parity,
        coeffs,
    })
}

/// A twisted-multivector-valued density: w ⊗ η with η the *unit* top covector
/// of the fully odd parity (odd in the standard model, (o,o) in the
/// relativistic one). The scale of η is absorbed into the vector part, so the
/// pushforward carries the density factor |det ρ|⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    vector: MultiVector,
}

impl Density {
    pub fn new(vector: MultiVector) -> Self {
        Density { vector }
    }

    pub fn zero(dim: usize, degree: usize, parity: Parity) -> Self {
        Density {
            vector: MultiVector::zero(dim, degree, parity),
        }
    }

    pub fn vector(&self) -> &MultiVector {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.dim
    }

    pub fn degree(&self) -> usize {
        self.vector.degree
    }

    /// Parity of the vector part.
    pub fn parity(&self) -> Parity {
        self.vector.parity
    }

    pub fn norm_inf(&self) -> f64 {
        self.vector.norm_inf()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Density {
            vector: self.vector.scale(factor),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Density {
            vector: self.vector.try_add(&other.vector)?,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(Density {
            vector: self.vector.try_sub(&other.vector)?,
        })
    }

    /// The Weyl isomorphism: w ⊗ η ↦ w ⌟ η, sending a degree-q density to a
    /// twisted multicovector of degree dim − q with the product parity.
    pub fn weyl(&self) -> MultiCovector {
        let model = self.vector.parity.model();
        let top = MultiCovector {
            dim: self.vector.dim,
            degree: self.vector.dim,
            parity: model.volume_parity(),
            coeffs: vec![1.0],
        };
        contract(&self.vector, &top).expect("unit top covector always contracts")
    }

    /// Inverse of the Weyl isomorphism.
    pub fn weyl_inverse(a: &MultiCovector) -> Result<Density> {
        let dim = a.dim;
        if a.degree > dim {
            return Err(Error::UnsupportedDegree {
                degree: a.degree,
                reason: "Weyl inverse needs degree ≤ dim",
            });
        }
        let model = a.parity.model();
        let parity = a.parity.product(model.volume_parity())?;
        let q = dim - a.degree;
        let table = masks(dim, q);
        let mut coeffs = vec![0.0; table.len()];
        for (pi, &mi) in table.iter().enumerate() {
            let mk = full_mask(dim) & !mi;
            // (w⌟η)_K = w^{K^c} sign(K^c, K) with unit η, so invert the sign.
            coeffs[pi] = a.coeffs[mask_position(dim, mk)] * merge_sign(mi, mk);
        }
        Ok(Density {
            vector: MultiVector {
                dim,
                degree: q,
                parity,
                coeffs,
            },
        })
    }

    /// Pushforward of a density: ρ_*(w ⊗ η) = ρ_*w ⊗ (ρ⁻¹)*η = |det ρ|⁻¹ ρ_*w ⊗ η.
    pub fn pushforward(&self, map: &Matrix4<f64>) -> Result<Density> {
        let det = match self.vector.dim {
            4 => map.determinant(),
            3 => map.fixed_view::<3, 3>(0, 0).determinant(),
            _ => unreachable!(),
        };
        if det.abs() < 1e-12 {
            return Err(Error::Singular { det });
        }
        let pushed = self.vector.pushforward(map)?;
        Ok(Density {
            vector: pushed.scale(1.0 / det.abs()),
        })
    }
}

/// Raise indices with the inverse metric: the exterior power ∧^q g⁻¹ applied
/// to a multicovector of degree 1 or 2. For dimension-3 objects the leading
/// 3×3 block of `g` is used.
pub fn metric_sharp(g: &Matrix4<f64>, a: &MultiCovector) -> Result<MultiVector> {
    if !(1..=2).contains(&a.degree) {
        return Err(Error::UnsupportedDegree {
            degree: a.degree,
            reason: "metric sharp supports degrees 1 and 2",
        });
    }
    let ginv = invert_block(a.dim, g)?;
    // out^J = Σ_I det ginv[J, I] a_I: the input indexes columns.
    let coeffs = compound_apply(a.dim, a.degree, &ginv, &a.coeffs, false);
    Ok(MultiVector {
        dim: a.dim,
        degree: a.degree,
        parity: a.parity,
        coeffs,
    })
}

fn invert_block(dim: usize, g: &Matrix4<f64>) -> Result<[[f64; 4]; 4]> {
    let mut out = [[0.0; 4]; 4];
    match dim {
        4 => {
            let inv = g.try_inverse().ok_or(Error::Singular {
                det: g.determinant(),
            })?;
            for r in 0..4 {
                for c in 0..4 {
                    out[r][c] = inv[(r, c)];
                }
            }
        }
        3 => {
            let block = g.fixed_view::<3, 3>(0, 0).into_owned();
            let inv = block.try_inverse().ok_or(Error::Singular {
                det: block.determinant(),
            })?;
            for r in 0..3 {
                for c in 0..3 {
                    out[r][c] = inv[(r, c)];
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orientation::Parity;

    fn ev(dim: usize, indices: &[usize]) -> MultiCovector {
        MultiCovector::basis(dim, indices, Parity::EVEN).unwrap()
    }

    #[test]
    fn component_counts_are_binomials() {
        assert_eq!(component_count(4, 0), 1);
        assert_eq!(component_count(4, 1), 4);
        assert_eq!(component_count(4, 2), 6);
        assert_eq!(component_count(4, 3), 4);
        assert_eq!(component_count(4, 4), 1);
        assert_eq!(component_count(4, 5), 0);
        assert_eq!(component_count(3, 2), 3);
        assert_eq!(component_count(3, 4), 0);
    }

    #[test]
    fn basis_covectors_evaluate_as_determinants() {
        let a = ev(4, &[0, 2]);
        let o = Orientation::reference(OrientationModel::Standard);
        let v1 = Vector4::new(1.0, 0.0, 2.0, 0.0);
        let v2 = Vector4::new(3.0, 0.0, 4.0, 0.0);
        // det [[1,3],[2,4]] = -2.
        assert_eq!(a.evaluate(&[v1, v2], o).unwrap(), -2.0);
    }

    #[test]
    fn odd_values_flip_with_orientation() {
        let a = MultiCovector::basis(4, &[1], Parity::ODD).unwrap();
        let v = Vector4::new(0.0, 5.0, 0.0, 0.0);
        let oref = Orientation::reference(OrientationModel::Standard);
        let orev = oref.apply(GroupClass::STD_P).unwrap();
        assert_eq!(a.evaluate(&[v], oref).unwrap(), 5.0);
        assert_eq!(a.evaluate(&[v], orev).unwrap(), -5.0);
    }

    #[test]
    fn wedge_is_graded_anticommutative_on_basis() {
        let e0 = ev(4, &[0]);
        let e1 = ev(4, &[1]);
        let w01 = wedge(&e0, &e1).unwrap();
        let w10 = wedge(&e1, &e0).unwrap();
        assert_eq!(w01.coefficient(&[0, 1]).unwrap(), 1.0);
        assert_eq!(w10.coefficient(&[0, 1]).unwrap(), -1.0);
        let e23 = ev(4, &[2, 3]);
        let a = wedge(&w01, &e23).unwrap();
        assert_eq!(a.coefficient(&[0, 1, 2, 3]).unwrap(), 1.0);
        // 2-forms commute.
        let b = wedge(&e23, &w01).unwrap();
        assert_eq!(b.coefficient(&[0, 1, 2, 3]).unwrap(), 1.0);
    }

    #[test]
    fn contraction_table_on_minkowski_bivectors() {
        // (e_I ⌟ e^{0123}) for all ascending pairs I, unit odd top covector.
        let top = MultiCovector::new(4, 4, Parity::ODD, &[1.0]).unwrap();
        let cases: [(&[usize], &[usize], f64); 6] = [
            (&[0, 1], &[2, 3], 1.0),
            (&[0, 2], &[1, 3], -1.0),
            (&[0, 3], &[1, 2], 1.0),
            (&[1, 2], &[0, 3], 1.0),
            (&[1, 3], &[0, 2], -1.0),
            (&[2, 3], &[0, 1], 1.0),
        ];
        for (from, to, sign) in cases {
            let w = MultiVector::basis(4, from, Parity::EVEN).unwrap();
            let c = contract(&w, &top).unwrap();
            assert_eq!(c.parity(), Parity::ODD);
            assert_eq!(c.coefficient(to).unwrap(), sign, "{from:?}");
        }
    }

    #[test]
    fn interior_is_first_slot_insertion() {
        // (v ⌟ a)(w…) = a(v, w…) for a random 3-covector.
        let coeffs = [0.7, -1.3, 2.1, 0.4];
        let a = MultiCovector::new(4, 3, Parity::EVEN, &coeffs).unwrap();
        let v = Vector4::new(0.3, -1.1, 0.8, 2.0);
        let w1 = Vector4::new(1.0, 0.5, -0.2, 0.9);
        let w2 = Vector4::new(-0.4, 1.7, 0.6, -1.2);
        let o = Orientation::reference(OrientationModel::Standard);
        let left = a.interior(&v).unwrap().evaluate(&[w1, w2], o).unwrap();
        let right = a.evaluate(&[v, w1, w2], o).unwrap();
        assert!((left - right).abs() < 1e-12);
        // Beyond-top inputs contract to zero objects.
        let empty = MultiCovector::zero(4, 5, Parity::EVEN);
        assert_eq!(empty.interior(&v).unwrap().norm_inf(), 0.0);
    }

    #[test]
    fn weyl_is_involutive_up_to_identity() {
        let w = MultiVector::new(4, 2, Parity::OE, &[1.0, -2.0, 0.5, 3.0, 0.0, 1.5]).unwrap();
        let d = Density::new(w.clone());
        let a = d.weyl();
        assert_eq!(a.degree(), 2);
        assert_eq!(a.parity(), Parity::OE.product(Parity::OO).unwrap());
        let back = Density::weyl_inverse(&a).unwrap();
        assert_eq!(back.vector(), &w);
    }

    #[test]
    fn density_pushforward_scales_by_inverse_absolute_determinant() {
        let w = MultiVector::new(4, 0, Parity::EVEN, &[1.0]).unwrap();
        let d = Density::new(w);
        let m = Matrix4::from_diagonal(&Vector4::new(2.0, 1.0, 1.0, -1.0));
        // Scalar density: idx_even = 1 regardless of class; |det| = 2.
        let pushed = d.pushforward(&m).unwrap();
        assert!((pushed.vector().coefficients()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn metric_sharp_raises_indices_with_signature() {
        let g = crate::minkowski::minkowski_metric();
        let a = MultiCovector::new(4, 1, Parity::EVEN, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let w = metric_sharp(&g, &a).unwrap();
        assert_eq!(w.coefficients(), &[1.0, -2.0, -3.0, -4.0]);
        let f = MultiCovector::basis(4, &[0, 1], Parity::EVEN).unwrap();
        let wf = metric_sharp(&g, &f).unwrap();
        // g⁻¹e⁰ ∧ g⁻¹e¹ = e₀ ∧ (−e₁).
        assert_eq!(wf.coefficient(&[0, 1]).unwrap(), -1.0);
        let s = MultiCovector::basis(4, &[2, 3], Parity::EVEN).unwrap();
        let ws = metric_sharp(&g, &s).unwrap();
        assert_eq!(ws.coefficient(&[2, 3]).unwrap(), 1.0);
        let three = MultiCovector::basis(4, &[0, 1, 2], Parity::EVEN).unwrap();
        assert!(metric_sharp(&g, &three).is_err());
    }

    #[test]
    fn signed_coefficient_lookup_handles_permutations() {
        let a = ev(4, &[1, 3]);
        assert_eq!(a.coefficient(&[1, 3]).unwrap(), 1.0);
        assert_eq!(a.coefficient(&[3, 1]).unwrap(), -1.0);
        assert_eq!(a.coefficient(&[1, 1]).unwrap(), 0.0);
        assert!(a.coefficient(&[1]).is_err());
        assert!(a.coefficient(&[1, 4]).is_err());
    }

    #[test]
    fn pairing_contracts_components() {
        let a = MultiCovector::new(4, 2, Parity::ODD, &[1.0, 0.0, 0.0, 2.0, 0.0, -1.0]).unwrap();
        let w = MultiVector::new(4, 2, Parity::ODD, &[3.0, 1.0, 1.0, -1.0, 1.0, 2.0]).unwrap();
        assert_eq!(pair(&a, &w).unwrap(), 3.0 - 2.0 - 2.0);
    }

    #[test]
    fn relativistic_pullback_requires_lorentz_maps() {
        let a = MultiCovector::basis(4, &[0, 1], Parity::EE).unwrap();
        let mut m = Matrix4::identity();
        m[(1, 1)] = 2.0;
        assert!(matches!(a.pullback(&m), Err(Error::NotOrthonormal { .. })));
        let std = MultiCovector::basis(4, &[0, 1], Parity::EVEN).unwrap();
        assert!(std.pullback(&m).is_ok());
    }

    #[test]
    fn top_covector_pullback_scales_by_det_over_abs_det_for_odd_parity() {
        // Odd top covectors are densities: the pullback factor is det·sign(det) = |det|.
        let top = MultiCovector::new(4, 4, Parity::ODD, &[1.0]).unwrap();
        let m = Matrix4::from_diagonal(&Vector4::new(-2.0, 1.0, 1.0, 1.0));
        let pulled = top.pullback(&m).unwrap();
        assert_eq!(pulled.coefficients()[0], 2.0);
        let even_top = MultiCovector::new(4, 4, Parity::EVEN, &[1.0]).unwrap();
        let pulled = even_top.pullback(&m).unwrap();
        assert_eq!(pulled.coefficients()[0], -2.0);
    }
}
