//! Independent brute-force oracle for the pointwise multilinear algebra.
//!
//! Everything here is computed straight from the definitions — full index
//! tensors, permutation sums with explicit signs, and formal linear
//! combinations of vector tuples — with none of the ascending-tuple or
//! bitmask machinery of the library. The fast implementation must agree with
//! these values on randomized inputs.

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pseudoform::{
    classify_gl, classify_lorentz, contract, metric_sharp, minkowski_metric, pair, wedge, Density,
    GroupClass, MultiCovector, MultiVector, Orientation, OrientationModel, Parity,
};

const SEED: u64 = 20240915;

/// A twisted multicovector stored as a full (not antisymmetrized-compressed)
/// index tensor: `tensor[t]` is the value on the basis tuple whose indices are
/// the digits of `t` in base `dim`, at the reference orientation.
#[derive(Clone)]
struct OracleCovector {
    dim: usize,
    degree: usize,
    parity: Parity,
    tensor: Vec<f64>,
}

fn tuple_of(mut t: usize, dim: usize, degree: usize) -> Vec<usize> {
    let mut idx = vec![0; degree];
    for slot in idx.iter_mut() {
        *slot = t % dim;
        t /= dim;
    }
    idx
}

fn permutation_sign(perm: &[usize]) -> f64 {
    let mut sign = 1.0;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// All permutations of 0..n, generated recursively.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

impl OracleCovector {
    /// Build from the library's coefficient convention: the coefficient on an
    /// ascending tuple is the value on the corresponding basis vectors. The
    /// full tensor is the antisymmetric extension.
    fn from_fast(a: &MultiCovector) -> Self {
        let dim = a.dim();
        let degree = a.degree();
        let total = dim.pow(degree as u32);
        let mut tensor = vec![0.0; total];
        for (t, slot) in tensor.iter_mut().enumerate() {
            let idx = tuple_of(t, dim, degree);
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let mut order: Vec<usize> = (0..degree).collect();
            order.sort_by_key(|&k| idx[k]);
            *slot = permutation_sign(&order) * a.coefficient(&sorted).unwrap();
        }
        OracleCovector {
            dim,
            degree,
            parity: a.parity(),
            tensor,
        }
    }

    /// Definitional evaluation: multilinear expansion over all index tuples,
    /// times the parity index of the orientation offset.
    fn evaluate(&self, vectors: &[Vector4<f64>], o: Orientation) -> f64 {
        assert_eq!(vectors.len(), self.degree);
        let mut sum = 0.0;
        for (t, &val) in self.tensor.iter().enumerate() {
            if val == 0.0 {
                continue;
            }
            let idx = tuple_of(t, self.dim, self.degree);
            let mut prod = val;
            for (k, &i) in idx.iter().enumerate() {
                prod *= vectors[k][i];
            }
            sum += prod;
        }
        self.parity.index(o.offset()).unwrap() * sum
    }
}

/// The classical antisymmetrized wedge: (a ∧ b)(v₁…v_{p+q}, o) =
/// (1/(p! q!)) Σ_σ sign(σ) a(v_{σ(1)}…v_{σ(p)}, o) b(v_{σ(p+1)}…, o).
///
/// At a fixed orientation both factors are ordinary multilinear forms, and the
/// joint orientation index of the product parity comes out automatically.
fn oracle_wedge_evaluate(
    a: &OracleCovector,
    b: &OracleCovector,
    vectors: &[Vector4<f64>],
    o: Orientation,
) -> f64 {
    let p = a.degree;
    let q = b.degree;
    assert_eq!(vectors.len(), p + q);
    let mut total = 0.0;
    for perm in permutations(p + q) {
        let sign = permutation_sign(&perm);
        let va: Vec<Vector4<f64>> = perm[..p].iter().map(|&i| vectors[i]).collect();
        let vb: Vec<Vector4<f64>> = perm[p..].iter().map(|&i| vectors[i]).collect();
        total += sign * a.evaluate(&va, o) * b.evaluate(&vb, o);
    }
    let fact = |n: usize| (1..=n).product::<usize>() as f64;
    total / (fact(p) * fact(q))
}

/// A formal linear combination of vector tuples with orientations: the
/// definitional model of a twisted multivector.
#[derive(Clone)]
struct FormalVector {
    degree: usize,
    parity: Parity,
    terms: Vec<(f64, Vec<Vector4<f64>>, Orientation)>,
}

fn ascending_tuples(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    if degree == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((prefix, start)) = stack.pop() {
        if prefix.len() == degree {
            out.push(prefix);
            continue;
        }
        for i in start..dim {
            let mut next = prefix.clone();
            next.push(i);
            stack.push((next, i + 1));
        }
    }
    out.sort();
    out
}

fn basis_tuple(idx: &[usize]) -> Vec<Vector4<f64>> {
    idx.iter()
        .map(|&i| {
            let mut e = Vector4::zeros();
            e[i] = 1.0;
            e
        })
        .collect()
}

impl FormalVector {
    /// Build from the library's coefficient convention: Σ_I w^I (basis tuple, reference).
    fn from_fast(w: &MultiVector) -> Self {
        let reference = Orientation::reference(w.parity().model());
        let mut terms = Vec::new();
        for idx in ascending_tuples(w.dim(), w.degree()) {
            let c = w.coefficient(&idx).unwrap();
            if c != 0.0 {
                terms.push((c, basis_tuple(&idx), reference));
            }
        }
        FormalVector {
            degree: w.degree(),
            parity: w.parity(),
            terms,
        }
    }

    /// Definitional pairing with a covector of the same parity: Σ λ a(v…, o).
    fn pair(&self, a: &OracleCovector) -> f64 {
        assert_eq!(a.degree, self.degree);
        assert_eq!(a.parity, self.parity);
        self.terms
            .iter()
            .map(|(l, v, o)| l * a.evaluate(v, *o))
            .sum()
    }

    /// Definitional pushforward: idx_p([ρ]) Σ λ (ρv…, o).
    fn pushforward(&self, rho: &Matrix4<f64>, cls: GroupClass) -> FormalVector {
        let idx = self.parity.index(cls).unwrap();
        FormalVector {
            degree: self.degree,
            parity: self.parity,
            terms: self
                .terms
                .iter()
                .map(|(l, v, o)| (idx * l, v.iter().map(|x| rho * x).collect(), *o))
                .collect(),
        }
    }

    /// Formal exterior product: both sides at the reference orientation, tuples
    /// concatenated, parities multiplied.
    fn wedge(&self, other: &FormalVector) -> FormalVector {
        let parity = self.parity.product(other.parity).unwrap();
        let mut terms = Vec::new();
        for (l1, v1, o1) in &self.terms {
            assert!(o1.is_reference());
            for (l2, v2, o2) in &other.terms {
                assert!(o2.is_reference());
                let mut v = v1.clone();
                v.extend_from_slice(v2);
                terms.push((l1 * l2, v, *o1));
            }
        }
        FormalVector {
            degree: self.degree + other.degree,
            parity,
            terms,
        }
    }
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector4<f64> {
    let mut v = Vector4::zeros();
    for i in 0..dim {
        v[i] = rng.gen_range(-2.0..2.0);
    }
    v
}

fn random_covector(
    rng: &mut ChaCha8Rng,
    dim: usize,
    degree: usize,
    parity: Parity,
) -> MultiCovector {
    let n = pseudoform::multilinear::component_count(dim, degree);
    let coeffs: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    MultiCovector::new(dim, degree, parity, &coeffs).unwrap()
}

fn random_multivector(
    rng: &mut ChaCha8Rng,
    dim: usize,
    degree: usize,
    parity: Parity,
) -> MultiVector {
    let n = pseudoform::multilinear::component_count(dim, degree);
    let coeffs: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    MultiVector::new(dim, degree, parity, &coeffs).unwrap()
}

fn orientations(model: OrientationModel) -> Vec<Orientation> {
    model
        .classes()
        .iter()
        .map(|&c| Orientation::reference(model).apply(c).unwrap())
        .collect()
}

#[test]
fn evaluate_matches_full_tensor_expansion() {
    let mut rng = rng();
    for model in [OrientationModel::Standard, OrientationModel::Relativistic] {
        for &parity in model.parities() {
            for dim in [3usize, 4] {
                for degree in 0..=dim {
                    let a = random_covector(&mut rng, dim, degree, parity);
                    let oracle = OracleCovector::from_fast(&a);
                    for o in orientations(model) {
                        for _ in 0..3 {
                            let vectors: Vec<Vector4<f64>> =
                                (0..degree).map(|_| random_vector(&mut rng, dim)).collect();
                            let fast = a.evaluate(&vectors, o).unwrap();
                            let slow = oracle.evaluate(&vectors, o);
                            assert!(
                                (fast - slow).abs() < 1e-9,
                                "dim {dim} degree {degree} parity {}: {fast} vs {slow}",
                                parity.label()
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn wedge_matches_permutation_sum() {
    let mut rng = rng();
    for (pa, pb) in [
        (Parity::EVEN, Parity::EVEN),
        (Parity::EVEN, Parity::ODD),
        (Parity::ODD, Parity::ODD),
        (Parity::EE, Parity::OE),
        (Parity::OE, Parity::EO),
        (Parity::OO, Parity::OE),
    ] {
        for dim in [3usize, 4] {
            for p in 0..=2usize {
                for q in 0..=2usize {
                    if p + q > dim {
                        continue;
                    }
                    let a = random_covector(&mut rng, dim, p, pa);
                    let b = random_covector(&mut rng, dim, q, pb);
                    let w = wedge(&a, &b).unwrap();
                    assert_eq!(w.parity(), pa.product(pb).unwrap());
                    let oa = OracleCovector::from_fast(&a);
                    let ob = OracleCovector::from_fast(&b);
                    for o in orientations(pa.model()) {
                        let vectors: Vec<Vector4<f64>> =
                            (0..p + q).map(|_| random_vector(&mut rng, dim)).collect();
                        let fast = w.evaluate(&vectors, o).unwrap();
                        let slow = oracle_wedge_evaluate(&oa, &ob, &vectors, o);
                        assert!(
                            (fast - slow).abs() < 1e-8,
                            "dim {dim} degrees ({p},{q}): {fast} vs {slow}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn wedge_beyond_top_degree_vanishes() {
    let mut rng = rng();
    let a = random_covector(&mut rng, 4, 3, Parity::EVEN);
    let b = random_covector(&mut rng, 4, 2, Parity::ODD);
    let w = wedge(&a, &b).unwrap();
    assert_eq!(w.degree(), 5);
    assert_eq!(w.parity(), Parity::ODD);
    assert_eq!(w.norm_inf(), 0.0);
}

#[test]
fn pairing_matches_formal_combinations() {
    let mut rng = rng();
    for model in [OrientationModel::Standard, OrientationModel::Relativistic] {
        for &parity in model.parities() {
            for dim in [3usize, 4] {
                for degree in 0..=dim {
                    let a = random_covector(&mut rng, dim, degree, parity);
                    let w = random_multivector(&mut rng, dim, degree, parity);
                    let fast = pair(&a, &w).unwrap();
                    let slow = FormalVector::from_fast(&w).pair(&OracleCovector::from_fast(&a));
                    assert!((fast - slow).abs() < 1e-9, "dim {dim} degree {degree}");
                }
            }
        }
    }
}

#[test]
fn pairing_requires_matching_parity() {
    let mut rng = rng();
    let a = random_covector(&mut rng, 4, 2, Parity::EVEN);
    let w = random_multivector(&mut rng, 4, 2, Parity::ODD);
    assert!(pair(&a, &w).is_err());
}

/// Pullback oracle: (ψ*a)(v…, o) = a(ψv…, [ψ]·o).
#[test]
fn pullback_matches_definition() {
    let mut rng = rng();
    let g = minkowski_metric();
    for trial in 0..12 {
        let standard = trial % 2 == 0;
        let m = if standard {
            random_gl(&mut rng)
        } else {
            random_lorentz(&mut rng)
        };
        let parities: &[Parity] = if standard {
            &[Parity::EVEN, Parity::ODD]
        } else {
            &[Parity::EE, Parity::OE, Parity::EO, Parity::OO]
        };
        let cls = if standard {
            classify_gl(&m).unwrap()
        } else {
            classify_lorentz(&m, &g).unwrap()
        };
        for &parity in parities {
            for degree in 0..=3usize {
                let a = random_covector(&mut rng, 4, degree, parity);
                let pulled = a.pullback(&m).unwrap();
                let oracle = OracleCovector::from_fast(&a);
                for o in orientations(parity.model()) {
                    let vectors: Vec<Vector4<f64>> =
                        (0..degree).map(|_| random_vector(&mut rng, 4)).collect();
                    let fast = pulled.evaluate(&vectors, o).unwrap();
                    let moved: Vec<Vector4<f64>> = vectors.iter().map(|v| m * v).collect();
                    let slow = oracle.evaluate(&moved, o.apply(cls).unwrap());
                    assert!(
                        (fast - slow).abs() < 1e-8 * (1.0 + slow.abs()),
                        "trial {trial} degree {degree} parity {}: {fast} vs {slow}",
                        parity.label()
                    );
                }
            }
        }
    }
}

/// Pushforward oracle: ρ_*[Σ λ (v…, o)] = idx_p([ρ]) [Σ λ (ρv…, o)], observed
/// through definitional pairings.
#[test]
fn pushforward_matches_formal_combinations() {
    let mut rng = rng();
    let g = minkowski_metric();
    for trial in 0..8 {
        let standard = trial % 2 == 0;
        let m = if standard {
            random_gl(&mut rng)
        } else {
            random_lorentz(&mut rng)
        };
        let parities: &[Parity] = if standard {
            &[Parity::EVEN, Parity::ODD]
        } else {
            &[Parity::EE, Parity::OE, Parity::EO, Parity::OO]
        };
        let cls = if standard {
            classify_gl(&m).unwrap()
        } else {
            classify_lorentz(&m, &g).unwrap()
        };
        for &parity in parities {
            for degree in 0..=3usize {
                let w = random_multivector(&mut rng, 4, degree, parity);
                let fast = w.pushforward(&m).unwrap();
                let slow = FormalVector::from_fast(&w).pushforward(&m, cls);
                for _ in 0..3 {
                    let probe = random_covector(&mut rng, 4, degree, parity);
                    let lhs = pair(&probe, &fast).unwrap();
                    let rhs = slow.pair(&OracleCovector::from_fast(&probe));
                    assert!(
                        (lhs - rhs).abs() < 1e-8 * (1.0 + rhs.abs()),
                        "trial {trial} degree {degree}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }
}

/// Contraction oracle: ⟨e, w ∧ v⟩ = ⟨w ⌟ e, v⟩ for random v, both sides
/// computed definitionally where possible.
#[test]
fn contraction_satisfies_defining_identity() {
    let mut rng = rng();
    for model in [OrientationModel::Standard, OrientationModel::Relativistic] {
        let top_parity = model.volume_parity();
        for dim in [3usize, 4] {
            for q in 0..=dim {
                for &pw in model.parities() {
                    let w = random_multivector(&mut rng, dim, q, pw);
                    let e = random_covector(&mut rng, dim, dim, top_parity);
                    let we = contract(&w, &e).unwrap();
                    assert_eq!(we.degree(), dim - q);
                    assert_eq!(we.parity(), pw.product(top_parity).unwrap());
                    let oe = OracleCovector::from_fast(&e);
                    let fw = FormalVector::from_fast(&w);
                    for _ in 0..4 {
                        // v must carry the parity of w⌟e so both pairings are defined.
                        let v = random_multivector(&mut rng, dim, dim - q, we.parity());
                        let lhs = fw.wedge(&FormalVector::from_fast(&v)).pair(&oe);
                        let rhs = pair(&we, &v).unwrap();
                        assert!(
                            (lhs - rhs).abs() < 1e-8 * (1.0 + lhs.abs()),
                            "dim {dim} q {q} parity {}: {lhs} vs {rhs}",
                            pw.label()
                        );
                    }
                }
            }
        }
    }
}

/// Weyl oracle: the Weyl map of w ⊗ (unit odd top covector) contracts w with
/// that covector, and the inverse undoes it for every degree and parity.
#[test]
fn weyl_roundtrip_and_contraction_agree() {
    let mut rng = rng();
    for model in [OrientationModel::Standard, OrientationModel::Relativistic] {
        for dim in [3usize, 4] {
            for q in 0..=dim {
                for &pw in model.parities() {
                    let w = random_multivector(&mut rng, dim, q, pw);
                    let d = Density::new(w.clone());
                    let a = d.weyl();
                    let e = MultiCovector::new(dim, dim, model.volume_parity(), &[1.0]).unwrap();
                    let direct = contract(&w, &e).unwrap();
                    assert_eq!(a.parity(), direct.parity());
                    let diff = a
                        .coefficients()
                        .iter()
                        .zip(direct.coefficients())
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max);
                    assert!(diff < 1e-12);
                    let back = Density::weyl_inverse(&a).unwrap();
                    assert_eq!(back.vector().parity(), pw);
                    let diff = back
                        .vector()
                        .coefficients()
                        .iter()
                        .zip(w.coefficients())
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max);
                    assert!(diff < 1e-12, "roundtrip dim {dim} q {q}");
                }
            }
        }
    }
}

/// Metric sharp oracle on simple wedges: ∧²g⁻¹(α ∧ β) = g⁻¹α ∧ g⁻¹β.
#[test]
fn metric_sharp_respects_simple_wedges() {
    let mut rng = rng();
    let g = minkowski_metric();
    let ginv = g.try_inverse().unwrap();
    for _ in 0..6 {
        let alpha = random_covector(&mut rng, 4, 1, Parity::EVEN);
        let beta = random_covector(&mut rng, 4, 1, Parity::EVEN);
        let ab = wedge(&alpha, &beta).unwrap();
        let sharp_ab = metric_sharp(&g, &ab).unwrap();
        let raise = |a: &MultiCovector| -> Vec<f64> {
            (0..4)
                .map(|i| (0..4).map(|j| ginv[(i, j)] * a.coefficients()[j]).sum())
                .collect()
        };
        let ra = raise(&alpha);
        let rb = raise(&beta);
        for (pos, (i, j)) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
            .iter()
            .enumerate()
        {
            let expect = ra[*i] * rb[*j] - ra[*j] * rb[*i];
            let got = sharp_ab.coefficients()[pos];
            assert!((got - expect).abs() < 1e-10, "component ({i},{j})");
        }
    }
}

fn random_gl(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    loop {
        let mut m: Matrix4<f64> = Matrix4::zeros();
        for r in 0..4 {
            for c in 0..4 {
                m[(r, c)] = rng.gen_range(-1.0..1.0);
            }
        }
        for d in 0..4 {
            m[(d, d)] += if rng.gen_bool(0.5) { 2.0 } else { -2.0 };
        }
        if m.determinant().abs() > 0.1 {
            return m;
        }
    }
}

/// Random Lorentz map: product of boosts and rotations, with optional time and
/// space reflections so that all four components occur.
fn random_lorentz(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    for _ in 0..3 {
        m *= random_boost(rng);
        m *= random_rotation(rng);
    }
    if rng.gen_bool(0.5) {
        m *= Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0));
    }
    if rng.gen_bool(0.5) {
        m *= Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, 1.0, 1.0));
    }
    m
}

fn random_boost(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    let axis = rng.gen_range(0..3usize);
    let rapidity: f64 = rng.gen_range(-1.2..1.2);
    let (c, s) = (rapidity.cosh(), rapidity.sinh());
    let mut m = Matrix4::identity();
    m[(0, 0)] = c;
    m[(0, axis + 1)] = s;
    m[(axis + 1, 0)] = s;
    m[(axis + 1, axis + 1)] = c;
    m
}

fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    let axis = rng.gen_range(0..3usize);
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let (c, s) = (theta.cos(), theta.sin());
    let (i, j) = match axis {
        0 => (2, 3),
        1 => (1, 3),
        _ => (1, 2),
    };
    let mut m = Matrix4::identity();
    m[(i, i)] = c;
    m[(i, j)] = -s;
    m[(j, i)] = s;
    m[(j, j)] = c;
    m
}
