//! Verification suites behind the command-line interface.
//!
//! Each suite assembles a deterministic [`Report`]: the algebra suite checks
//! the orientation-index and parity-product tables plus the invariances of
//! the multilinear layer, the calculus suite checks the differential and
//! integral identities, the Maxwell suite checks field-equation residuals
//! and stationary integral laws for a built-in configuration, and the parity
//! suite emits the time-reflection table and compares it against the
//! embedded expectations.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::{Matrix4, Rotation3, Unit, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::{boundary, current_boundary_residual, integrate, stokes_residual, Cell, Chain};
use crate::electromag::{
    builtin_fields, decompose, integral_laws_stationary, maxwell_residual_3d, maxwell_residual_4d,
    time_reflection_parities, FieldConfiguration, FieldName, IntegralLaw, ParityTable,
};
use crate::forms::{AffineMap, DensityField, DifferentialForm, VectorField};
use crate::minkowski::{
    constitutive, constitutive_field, spatial_constitutive, spatial_constitutive_b, InertialFrame,
};
use crate::multilinear::{masks, pair, wedge, Density, MultiCovector, MultiVector};
use crate::numeric::halton_point;
use crate::orientation::{GroupClass, Orientation, OrientationModel, Parity};
use crate::poly::Poly;
use crate::report::{Check, Report};
use crate::{Error, Result};

/// Default seed of the randomized checks.
pub const DEFAULT_SEED: u64 = 20240915;
/// Environment variable supplying the default quadrature order; explicit
/// flags take precedence.
pub const QUAD_ORDER_ENV: &str = "PSEUDOFORM_QUAD_ORDER";

const FOUR_PI: f64 = 4.0 * PI;

/// Resolves the quadrature order: an explicit flag wins, then the
/// environment variable, then the built-in default.
pub fn resolve_quad_order(flag: Option<usize>) -> usize {
    if let Some(n) = flag {
        return n;
    }
    if let Ok(text) = std::env::var(QUAD_ORDER_ENV) {
        if let Ok(n) = text.trim().parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    crate::chains::DEFAULT_QUAD_ORDER
}

// ---------------------------------------------------------------------------
// Randomized inputs.

fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    let axis = Unit::new_normalize(Vector3::new(
        rng.gen_range(-1.0..1.0) + 1.5,
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    ));
    let rot = Rotation3::from_axis_angle(&axis, rng.gen_range(0.0..std::f64::consts::TAU));
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(rot.matrix());
    m
}

fn boost_matrix(beta: Vector3<f64>) -> Matrix4<f64> {
    let b2 = beta.norm_squared();
    if b2 < 1e-16 {
        return Matrix4::identity();
    }
    let gamma = 1.0 / (1.0 - b2).sqrt();
    let mut m = Matrix4::identity();
    m[(0, 0)] = gamma;
    for i in 0..3 {
        m[(0, i + 1)] = gamma * beta[i];
        m[(i + 1, 0)] = gamma * beta[i];
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            m[(i + 1, j + 1)] = delta + (gamma - 1.0) * beta[i] * beta[j] / b2;
        }
    }
    m
}

fn random_boost(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    let mut beta = Vector3::new(
        rng.gen_range(-0.6..0.6),
        rng.gen_range(-0.6..0.6),
        rng.gen_range(-0.6..0.6),
    );
    if beta.norm() > 0.85 {
        beta *= 0.85 / beta.norm();
    }
    boost_matrix(beta)
}

fn random_proper_lorentz(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    random_rotation(rng) * random_boost(rng)
}

/// A random Lorentz map in the requested group component.
fn random_lorentz_in(rng: &mut ChaCha8Rng, cls: GroupClass) -> Matrix4<f64> {
    let rep = if cls == GroupClass::LOR_E {
        Matrix4::identity()
    } else if cls == GroupClass::LOR_T {
        Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
    } else if cls == GroupClass::LOR_S {
        Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
    } else {
        Matrix4::from_diagonal(&Vector4::new(-1.0, -1.0, -1.0, -1.0))
    };
    rep * random_proper_lorentz(rng)
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn random_multicovector(
    rng: &mut ChaCha8Rng,
    degree: usize,
    parity: Parity,
) -> Result<MultiCovector> {
    let coeffs = random_coeffs(rng, crate::multilinear::component_count(4, degree));
    MultiCovector::new(4, degree, parity, &coeffs)
}

fn random_multivector(rng: &mut ChaCha8Rng, degree: usize, parity: Parity) -> Result<MultiVector> {
    let coeffs = random_coeffs(rng, crate::multilinear::component_count(4, degree));
    MultiVector::new(4, degree, parity, &coeffs)
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: u32) -> Poly {
    let mut p = Poly::constant(rng.gen_range(-1.0..1.0));
    for _ in 0..3 {
        let mut exps = [0u8; 4];
        let mut left = max_deg;
        for e in exps.iter_mut() {
            let k = rng.gen_range(0..=left);
            *e = k as u8;
            left -= k;
        }
        p = p.add(&Poly::term(rng.gen_range(-1.0..1.0), exps));
    }
    p
}

fn random_poly_form(
    rng: &mut ChaCha8Rng,
    degree: usize,
    parity: Parity,
    max_deg: u32,
) -> Result<DifferentialForm> {
    let n = crate::multilinear::component_count(4, degree);
    let polys = (0..n).map(|_| random_poly(rng, max_deg)).collect();
    DifferentialForm::from_polys(4, degree, parity, polys)
}

fn probe_points(count: usize, lo: f64, hi: f64) -> Vec<Vector4<f64>> {
    (0..count)
        .map(|i| {
            let p = halton_point(i, &[(lo, hi); 4]);
            Vector4::new(p[0], p[1], p[2], p[3])
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Algebra suite.

const REL_PARITIES: [Parity; 4] = [Parity::EE, Parity::OE, Parity::EO, Parity::OO];
const REL_CLASSES: [GroupClass; 4] = [
    GroupClass::LOR_E,
    GroupClass::LOR_T,
    GroupClass::LOR_S,
    GroupClass::LOR_TS,
];

/// Orientation-index and parity-product tables, wedge laws on every basis
/// pair, pairing invariance under random Lorentz maps, and the constitutive
/// involution and Poincaré invariance.
pub fn verify_algebra(seed: u64) -> Result<Report> {
    let start = Instant::now();
    let mut rng = rng_from(seed);
    let mut checks = Vec::new();

    // The two-class index table: an odd quantity is blind to the identity
    // component and flips under the determinant-reversing one.
    {
        let expected = [(GroupClass::STD_E, 1.0), (GroupClass::STD_P, -1.0)];
        let mut mismatches = 0usize;
        for (cls, want) in expected {
            if Parity::ODD.index(cls)? != want {
                mismatches += 1;
            }
        }
        checks.push(Check::measure(
            "algebra/index-table/standard",
            mismatches as f64,
            0.0,
        ));
    }

    // The four-class index table: 4 parities × 4 Lorentz components.
    {
        let rows: [(Parity, [f64; 4]); 4] = [
            (Parity::EE, [1.0, 1.0, 1.0, 1.0]),
            (Parity::OE, [1.0, -1.0, 1.0, -1.0]),
            (Parity::EO, [1.0, 1.0, -1.0, -1.0]),
            (Parity::OO, [1.0, -1.0, -1.0, 1.0]),
        ];
        let mut mismatches = 0usize;
        for (parity, want) in rows {
            for (cls, want) in REL_CLASSES.iter().zip(want) {
                if parity.index(*cls)? != want {
                    mismatches += 1;
                }
            }
        }
        checks.push(Check::measure(
            "algebra/index-table/relativistic",
            mismatches as f64,
            0.0,
        ));
    }

    // Parity products: the two-class table and the full sixteen-entry
    // four-class table.
    {
        let table = [
            (Parity::EVEN, Parity::EVEN, Parity::EVEN),
            (Parity::EVEN, Parity::ODD, Parity::ODD),
            (Parity::ODD, Parity::EVEN, Parity::ODD),
            (Parity::ODD, Parity::ODD, Parity::EVEN),
        ];
        let mut mismatches = 0usize;
        for (a, b, want) in table {
            if a.product(b)? != want {
                mismatches += 1;
            }
        }
        checks.push(Check::measure(
            "algebra/parity-product/standard",
            mismatches as f64,
            0.0,
        ));
    }
    {
        use Parity as P;
        let expected: [[Parity; 4]; 4] = [
            [P::EE, P::OE, P::EO, P::OO],
            [P::OE, P::EE, P::OO, P::EO],
            [P::EO, P::OO, P::EE, P::OE],
            [P::OO, P::EO, P::OE, P::EE],
        ];
        let mut mismatches = 0usize;
        for (i, a) in REL_PARITIES.iter().enumerate() {
            for (j, b) in REL_PARITIES.iter().enumerate() {
                if a.product(*b)? != expected[i][j] {
                    mismatches += 1;
                }
            }
        }
        checks.push(Check::measure(
            "algebra/parity-product/relativistic",
            mismatches as f64,
            0.0,
        ));
    }

    // Graded commutativity and associativity on every basis pair and triple,
    // in both models: the coefficients are signed integers, so the equalities
    // must hold exactly.
    {
        let mut mismatches = 0usize;
        let parity_sets: [&[Parity]; 2] = [&[Parity::EVEN, Parity::ODD], &REL_PARITIES];
        for parities in parity_sets {
            for &pa in parities {
                for &pb in parities {
                    for p in 0..=4usize {
                        for q in 0..=(4 - p) {
                            for &ma in masks(4, p) {
                                for &mb in masks(4, q) {
                                    let a = basis_covector(ma, p, pa)?;
                                    let b = basis_covector(mb, q, pb)?;
                                    let ab = wedge(&a, &b)?;
                                    let ba = wedge(&b, &a)?;
                                    let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
                                    if ab.try_sub(&ba.scale(sign))?.norm_inf() != 0.0 {
                                        mismatches += 1;
                                    }
                                    if ab.parity() != pa.product(pb)? {
                                        mismatches += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        checks.push(Check::measure(
            "algebra/wedge/graded-commutativity",
            mismatches as f64,
            0.0,
        ));
    }
    {
        let mut mismatches = 0usize;
        for p in 0..=4usize {
            for q in 0..=(4 - p) {
                for r in 0..=(4 - p - q) {
                    for &ma in masks(4, p) {
                        for &mb in masks(4, q) {
                            for &mc in masks(4, r) {
                                let a = basis_covector(ma, p, Parity::EVEN)?;
                                let b = basis_covector(mb, q, Parity::ODD)?;
                                let c = basis_covector(mc, r, Parity::ODD)?;
                                let left = wedge(&wedge(&a, &b)?, &c)?;
                                let right = wedge(&a, &wedge(&b, &c)?)?;
                                if left.try_sub(&right)?.norm_inf() != 0.0 {
                                    mismatches += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        checks.push(Check::measure(
            "algebra/wedge/associativity",
            mismatches as f64,
            0.0,
        ));
    }

    // The same laws with random coefficients, up to rounding.
    {
        let mut worst = 0.0_f64;
        for i in 0..100 {
            let p = 1 + i % 2;
            let q = 1 + (i / 2) % 2;
            let a = random_multicovector(&mut rng, p, Parity::EVEN)?;
            let b = random_multicovector(&mut rng, q, Parity::EVEN)?;
            let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
            worst = worst.max(
                wedge(&a, &b)?
                    .try_sub(&wedge(&b, &a)?.scale(sign))?
                    .norm_inf(),
            );
        }
        checks.push(Check::measure(
            "algebra/wedge/commutativity-random",
            worst,
            1e-12,
        ));
        let mut worst = 0.0_f64;
        for i in 0..100 {
            let (p, q, r) = ([1, 1, 2][i % 3], [1, 2, 1][i % 3], 1);
            let a = random_multicovector(&mut rng, p, Parity::EVEN)?;
            let b = random_multicovector(&mut rng, q, Parity::EVEN)?;
            let c = random_multicovector(&mut rng, r, Parity::EVEN)?;
            let left = wedge(&wedge(&a, &b)?, &c)?;
            let right = wedge(&a, &wedge(&b, &c)?)?;
            worst = worst.max(left.try_sub(&right)?.norm_inf());
        }
        checks.push(Check::measure(
            "algebra/wedge/associativity-random",
            worst,
            1e-12,
        ));
    }

    // Evaluation is alternating: swapping two arguments flips the sign.
    {
        let nu = Orientation::reference(OrientationModel::Standard);
        let mut worst = 0.0_f64;
        for i in 0..50 {
            let degree = 2 + i % 3;
            let a = random_multicovector(&mut rng, degree, Parity::EVEN)?;
            let mut vectors: Vec<Vector4<f64>> = (0..degree)
                .map(|_| {
                    Vector4::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    )
                })
                .collect();
            let before = a.evaluate(&vectors, nu)?;
            vectors.swap(0, degree - 1);
            let after = a.evaluate(&vectors, nu)?;
            worst = worst.max((before + after).abs());
        }
        checks.push(Check::measure("algebra/alternating", worst, 1e-12));
    }

    // Pairing invariance: the pullback is adjoint to the pushforward under
    // 100 random Lorentz maps covering all four components, in both models.
    {
        let mut worst = 0.0_f64;
        for i in 0..100 {
            let cls = REL_CLASSES[i % 4];
            let m = random_lorentz_in(&mut rng, cls);
            let degree = i % 5;
            let parity = if i % 2 == 0 {
                REL_PARITIES[i % 4]
            } else {
                [Parity::EVEN, Parity::ODD][(i / 2) % 2]
            };
            let a = random_multicovector(&mut rng, degree, parity)?;
            let w = random_multivector(&mut rng, degree, parity)?;
            let lhs = pair(&a.pullback(&m)?, &w)?;
            let rhs = pair(&a, &w.pushforward(&m)?)?;
            let scale = lhs.abs().max(rhs.abs()).max(1e-6);
            worst = worst.max((lhs - rhs).abs() / scale);
        }
        checks.push(Check::measure("algebra/pairing-invariance", worst, 1e-10));
    }

    // The constitutive map squares to minus the identity on 2-forms.
    {
        let mut worst = 0.0_f64;
        for i in 0..50 {
            let parity = [Parity::EVEN, Parity::ODD, Parity::OE, Parity::EO][i % 4];
            let a = random_multicovector(&mut rng, 2, parity)?;
            let cc = constitutive(&constitutive(&a)?)?;
            worst = worst.max(cc.try_add(&a)?.norm_inf());
        }
        checks.push(Check::measure(
            "algebra/constitutive/involution",
            worst,
            1e-12,
        ));
    }

    // Constitutive naturality: applying the vacuum law and pulling back by a
    // Poincaré map commute, for 20 maps spanning all four components.
    {
        let probes = probe_points(5, -0.8, 0.9);
        let mut worst = 0.0_f64;
        for i in 0..20 {
            let cls = REL_CLASSES[i % 4];
            let linear = random_lorentz_in(&mut rng, cls);
            let translation = Vector4::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let map = AffineMap::new(linear, translation);
            let parity = if i % 2 == 0 { Parity::OE } else { Parity::EVEN };
            let f = random_poly_form(&mut rng, 2, parity, 2)?;
            let lhs = constitutive_field(&f.pullback_affine(&map)?)?;
            let rhs = constitutive_field(&f)?.pullback_affine(&map)?;
            for x in &probes {
                worst = worst.max(lhs.value(x)?.try_sub(&rhs.value(x)?)?.norm_inf());
            }
        }
        checks.push(Check::measure("algebra/constitutive/poincare", worst, 1e-8));
    }

    Ok(Report::new(
        "algebra",
        format!("seed={seed}"),
        checks,
        start.elapsed().as_secs_f64(),
    ))
}

fn basis_covector(mask: u8, degree: usize, parity: Parity) -> Result<MultiCovector> {
    let indices: Vec<usize> = crate::multilinear::indices_of(mask).collect();
    debug_assert_eq!(indices.len(), degree);
    MultiCovector::basis(4, &indices, parity)
}

// ---------------------------------------------------------------------------
// Calculus suite.

/// dd = 0 on a 30-form polynomial corpus (exact and finite-difference
/// backings), the boundary theorem with order refinement, the transport
/// balance of currents, the Weyl duality laws, and the homotopy potential.
pub fn verify_calculus(order: usize, fd_step: f64, seed: u64) -> Result<Report> {
    let start = Instant::now();
    let mut rng = rng_from(seed);
    let mut checks = Vec::new();
    let probes = probe_points(4, -0.9, 1.0);
    let parities = [
        Parity::EVEN,
        Parity::ODD,
        Parity::EE,
        Parity::OE,
        Parity::EO,
        Parity::OO,
    ];

    // The 30-form corpus.
    let corpus: Vec<DifferentialForm> = (0..30)
        .map(|i| random_poly_form(&mut rng, i % 3, parities[i % parities.len()], 3))
        .collect::<Result<_>>()?;

    {
        let mut worst_exact = 0.0_f64;
        let mut worst_fd = 0.0_f64;
        for form in &corpus {
            let dd_exact = form.d().d();
            let inner = form.clone();
            let fd_form = DifferentialForm::new(
                form.degree(),
                form.parity(),
                Arc::new(move |x: &Vector4<f64>| inner.value(x)),
            )?
            .with_fd_step(fd_step);
            let dd_fd = fd_form.d().d();
            for x in &probes {
                worst_exact = worst_exact.max(dd_exact.value(x)?.norm_inf());
                worst_fd = worst_fd.max(dd_fd.value(x)?.norm_inf());
            }
        }
        checks.push(Check::measure("calculus/dd/exact", worst_exact, 1e-12));
        checks.push(Check::measure(
            "calculus/dd/finite-difference",
            worst_fd,
            1e-6,
        ));
    }

    // The boundary theorem on 20 random cell/form pairs, and again at a
    // refined order: refinement must not make the residual worse than the
    // coarse value plus slack.
    {
        let mut worst = 0.0_f64;
        let mut worst_refinement = f64::NEG_INFINITY;
        for i in 0..20 {
            let cell_dim = 2 + i % 2;
            let parity = [Parity::EVEN, Parity::ODD][(i / 2) % 2];
            let cell = random_cell(&mut rng, cell_dim, i >= 15)?;
            let chain = Chain::single(cell, parity)?;
            let form = random_poly_form(&mut rng, cell_dim - 1, parity, 3)?;
            let coarse = stokes_residual(&form, &chain, order)?;
            let refined = stokes_residual(&form, &chain, order + 4)?;
            worst = worst.max(coarse);
            worst_refinement = worst_refinement.max(refined - coarse);
        }
        checks.push(Check::measure("calculus/stokes", worst, 1e-6));
        checks.push(Check::measure(
            "calculus/stokes/refinement",
            worst_refinement,
            1e-9,
        ));
    }

    // Transport balance: the interior-product current of the differential
    // equals the transport derivative minus the boundary flux.
    {
        let mut worst = 0.0_f64;
        for i in 0..10 {
            let degree = 1 + i % 2;
            let x_field = VectorField::from_polys(
                4,
                [
                    random_poly(&mut rng, 1),
                    random_poly(&mut rng, 1),
                    random_poly(&mut rng, 1),
                    random_poly(&mut rng, 1),
                ],
            )?;
            let form = random_poly_form(&mut rng, degree, Parity::EVEN, 2)?;
            let cell = random_cell(&mut rng, degree, false)?;
            let chain = Chain::single(cell, Parity::EVEN)?;
            worst = worst.max(current_boundary_residual(&x_field, &chain, &form, order)?);
        }
        checks.push(Check::measure("calculus/transport-balance", worst, 1e-6));
    }

    // Weyl duality: round trip, Lorentz equivariance, and the divergence as
    // the conjugated differential.
    {
        let mut worst = 0.0_f64;
        for i in 0..20 {
            let degree = i % 5;
            let parity = parities[i % parities.len()];
            let w = random_multivector(&mut rng, degree, parity)?;
            let density = Density::new(w.clone());
            let back = Density::weyl_inverse(&density.weyl())?;
            worst = worst.max(back.vector().try_sub(&w)?.norm_inf());
        }
        checks.push(Check::measure("calculus/weyl/round-trip", worst, 1e-10));

        let mut worst = 0.0_f64;
        for i in 0..20 {
            let cls = REL_CLASSES[i % 4];
            let m = random_lorentz_in(&mut rng, cls);
            let m_inv = m.try_inverse().ok_or(Error::Singular { det: 0.0 })?;
            let degree = i % 5;
            let parity = if i % 2 == 0 {
                REL_PARITIES[(i / 2) % 4]
            } else {
                [Parity::EVEN, Parity::ODD][(i / 2) % 2]
            };
            let w = random_multivector(&mut rng, degree, parity)?;
            let density = Density::new(w);
            let lhs = density.pushforward(&m)?.weyl();
            let rhs = density.weyl().pullback(&m_inv)?;
            worst = worst.max(lhs.try_sub(&rhs)?.norm_inf());
        }
        checks.push(Check::measure("calculus/weyl/equivariance", worst, 1e-10));

        let mut worst = 0.0_f64;
        for i in 0..10 {
            let degree = 1 + i % 4;
            let parity = parities[i % parities.len()];
            let n = crate::multilinear::component_count(4, degree);
            let polys = (0..n).map(|_| random_poly(&mut rng, 2)).collect();
            let field = DensityField::from_polys(4, degree, parity, polys)?;
            let lhs = field.div()?.weyl_field()?;
            let rhs = field.weyl_field()?.d();
            for x in &probes {
                worst = worst.max(lhs.value(x)?.try_sub(&rhs.value(x)?)?.norm_inf());
            }
        }
        checks.push(Check::measure("calculus/weyl/divergence-dual", worst, 1e-6));
    }

    // The homotopy potential inverts the differential on closed forms.
    {
        let bounds = [(-1.2, 1.2); 4];
        let inner_probes = probe_points(4, -0.7, 0.8);
        let mut worst = 0.0_f64;
        for i in 0..6 {
            let base_degree = i % 3;
            let potential = random_poly_form(&mut rng, base_degree, Parity::EVEN, 2)?;
            let closed = potential.d();
            let recovered = closed.homotopy_potential(&Vector4::zeros(), &bounds, order)?;
            let closed_again = recovered.d();
            for x in &inner_probes {
                worst = worst.max(
                    closed_again
                        .value(x)?
                        .try_sub(&closed.value(x)?)?
                        .norm_inf(),
                );
            }
        }
        checks.push(Check::measure("calculus/homotopy-potential", worst, 1e-6));
    }

    Ok(Report::new(
        "calculus",
        format!("order={order} fd-step={fd_step:.1e} seed={seed}"),
        checks,
        start.elapsed().as_secs_f64(),
    ))
}

fn random_cell(rng: &mut ChaCha8Rng, dim_cell: usize, trig: bool) -> Result<Cell> {
    let base = Vector4::new(
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
    );
    let lin: Vec<[f64; 4]> = (0..dim_cell)
        .map(|_| {
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]
        })
        .collect();
    let quad: Vec<[f64; 4]> = (0..dim_cell)
        .map(|_| {
            [
                rng.gen_range(-0.3..0.3),
                rng.gen_range(-0.3..0.3),
                rng.gen_range(-0.3..0.3),
                rng.gen_range(-0.3..0.3),
            ]
        })
        .collect();
    let amp = if trig { 0.08 } else { 0.0 };
    Cell::new(
        dim_cell,
        Orientation::reference(OrientationModel::Standard),
        Arc::new(move |s: &[f64]| {
            let mut x = base;
            for (j, sj) in s.iter().enumerate() {
                for r in 0..4 {
                    x[r] += lin[j][r] * sj + quad[j][r] * sj * sj;
                }
            }
            x[0] += amp * (PI * s[0]).sin();
            x
        }),
    )
}

// ---------------------------------------------------------------------------
// Maxwell suite.

fn frame_square(parity: Parity) -> Result<Chain> {
    let cell = Cell::new(
        2,
        Orientation::reference(OrientationModel::Standard),
        Arc::new(|s: &[f64]| Vector4::new(0.2 + 0.5 * s[0], 0.3 + 0.5 * s[1], 0.4, 0.0)),
    )?;
    Chain::single(cell, parity)
}

fn frame_cube(parity: Parity) -> Result<Chain> {
    let cell = Cell::new(
        3,
        Orientation::reference(OrientationModel::Standard),
        Arc::new(|s: &[f64]| {
            Vector4::new(0.2 + 0.5 * s[0], 0.3 + 0.5 * s[1], 0.4 + 0.5 * s[2], 0.0)
        }),
    )?;
    Chain::single(cell, parity)
}

/// A ball of the given radius: the cube is warped radially so its boundary
/// becomes the round sphere.
fn ball_chain(radius: f64, parity: Parity) -> Result<Chain> {
    let cell = Cell::new(
        3,
        Orientation::reference(OrientationModel::Standard),
        Arc::new(move |s: &[f64]| {
            let p = Vector3::new(2.0 * s[0] - 1.0, 2.0 * s[1] - 1.0, 2.0 * s[2] - 1.0);
            let sup = p[0].abs().max(p[1].abs()).max(p[2].abs());
            let len = p.norm();
            if len < 1e-12 {
                return Vector4::zeros();
            }
            let x = p * (radius * sup / len);
            Vector4::new(x[0], x[1], x[2], 0.0)
        }),
    )?;
    Chain::single(cell, parity)
}

/// An axis-aligned box of the given half-width, centered at the origin.
fn box_chain(half: f64, parity: Parity) -> Result<Chain> {
    let cell = Cell::new(
        3,
        Orientation::reference(OrientationModel::Standard),
        Arc::new(move |s: &[f64]| {
            Vector4::new(
                half * (2.0 * s[0] - 1.0),
                half * (2.0 * s[1] - 1.0),
                half * (2.0 * s[2] - 1.0),
                0.0,
            )
        }),
    )?;
    Chain::single(cell, parity)
}

fn corrupted_copy(cfg: &FieldConfiguration) -> Result<FieldConfiguration> {
    let (pf, _) = match cfg.model() {
        OrientationModel::Standard => (Parity::EVEN, Parity::ODD),
        OrientationModel::Relativistic => (Parity::OE, Parity::EO),
    };
    // Add x⁰ e¹∧e²: a flux that grows in time with no matching circulation.
    let bad = DifferentialForm::from_polys(
        4,
        2,
        pf,
        vec![
            Poly::zero(),
            Poly::zero(),
            Poly::zero(),
            Poly::var(0),
            Poly::zero(),
            Poly::zero(),
        ],
    )?;
    FieldConfiguration::new(
        cfg.model(),
        cfg.c(),
        cfg.field_strength().try_add(&bad)?,
        cfg.induction().clone(),
        cfg.current().clone(),
    )
}

/// Field-equation residuals (intrinsic and decomposed), the stationary
/// integral laws, charge conservation, constitutive agreement, and the
/// corrupted-flux detector, for one built-in configuration observed from a
/// frame boosted along the first spatial axis.
pub fn verify_maxwell(field: &str, frame_boost: f64, order: usize) -> Result<Report> {
    let start = Instant::now();
    if !(0.0..0.95).contains(&frame_boost.abs()) {
        return Err(Error::InvalidArgument(format!(
            "frame boost must satisfy |beta| < 0.95, got {frame_boost}"
        )));
    }
    let model = OrientationModel::Standard;
    let c = 1.0;
    let cfg = builtin_fields(field, model, c)?;
    let frame = if frame_boost == 0.0 {
        InertialFrame::rest(Vector4::zeros())
    } else {
        InertialFrame::boosted(Vector4::zeros(), [frame_boost, 0.0, 0.0])?
    };
    let mut checks = Vec::new();

    // Intrinsic residuals and charge conservation.
    {
        let probes = probe_points(10, 0.2, 1.0);
        let (r1, r2) = maxwell_residual_4d(&cfg, &probes)?;
        checks.push(Check::measure("maxwell/4d/field-strength", r1, 1e-6));
        checks.push(Check::measure("maxwell/4d/induction", r2, 1e-6));
        let dj = cfg.current().d();
        let mut worst = 0.0_f64;
        for x in &probes {
            worst = worst.max(dj.value(x)?.norm_inf());
        }
        checks.push(Check::measure(
            "maxwell/4d/charge-conservation",
            worst,
            1e-6,
        ));
    }

    // Decomposed residuals in the observing frame.
    let samples: Vec<(f64, [f64; 3])> = (0..8)
        .map(|i| {
            let p = halton_point(i, &[(0.2, 0.9), (0.3, 1.0), (0.3, 1.0), (0.3, 1.0)]);
            (p[0], [p[1], p[2], p[3]])
        })
        .collect();
    {
        let res = maxwell_residual_3d(&cfg, &frame, &samples)?;
        checks.push(Check::measure("maxwell/3d/faraday", res.faraday, 1e-6));
        checks.push(Check::measure(
            "maxwell/3d/no-monopole",
            res.no_monopole,
            1e-6,
        ));
        checks.push(Check::measure("maxwell/3d/ampere", res.ampere, 1e-6));
        checks.push(Check::measure("maxwell/3d/gauss", res.gauss, 1e-6));
        if let Some(v) = res.faraday_potential {
            checks.push(Check::measure("maxwell/3d/potential-electric", v, 1e-6));
        }
        if let Some(v) = res.flux_potential {
            checks.push(Check::measure("maxwell/3d/potential-flux", v, 1e-6));
        }
    }

    // Stationary integral laws.
    let t0 = 0.4;
    {
        let (law, residual) =
            integral_laws_stationary(&cfg, &frame, &frame_square(Parity::EVEN)?, t0, order)?;
        debug_assert_eq!(law, IntegralLaw::Faraday);
        checks.push(Check::measure("maxwell/integral/faraday", residual, 1e-6));
        let (law, residual) =
            integral_laws_stationary(&cfg, &frame, &frame_square(Parity::ODD)?, t0, order)?;
        debug_assert_eq!(law, IntegralLaw::Ampere);
        checks.push(Check::measure("maxwell/integral/ampere", residual, 1e-6));
        let (law, residual) =
            integral_laws_stationary(&cfg, &frame, &frame_cube(Parity::EVEN)?, t0, order)?;
        debug_assert_eq!(law, IntegralLaw::NoMonopole);
        checks.push(Check::measure(
            "maxwell/integral/no-monopole",
            residual,
            1e-6,
        ));
    }
    match cfg.enclosed_charge() {
        Some(q) => {
            // A charge-enclosing boundary: the flux must equal 4πq at
            // quadrature order at least 12, independent of surface shape.
            let gauss_order = order.max(12);
            let ball = ball_chain(1.0, Parity::ODD)?;
            let (law, residual) = integral_laws_stationary(&cfg, &frame, &ball, t0, gauss_order)?;
            debug_assert_eq!(law, IntegralLaw::Gauss);
            checks.push(Check::measure(
                "maxwell/integral/gauss",
                residual / (FOUR_PI * q.abs()),
                1e-3,
            ));
            let ff = decompose(&cfg, &frame)?;
            let d_now = ff.d.at_time(t0)?;
            let flux_ball = integrate(&d_now, &boundary(&ball)?, gauss_order)?;
            let flux_box = integrate(
                &d_now,
                &boundary(&box_chain(1.0, Parity::ODD)?)?,
                gauss_order,
            )?;
            checks.push(Check::measure(
                "maxwell/integral/gauss-shape",
                (flux_ball - flux_box).abs() / (FOUR_PI * q.abs()),
                1e-3,
            ));
        }
        None => {
            let (law, residual) =
                integral_laws_stationary(&cfg, &frame, &frame_cube(Parity::ODD)?, t0, order)?;
            debug_assert_eq!(law, IntegralLaw::Gauss);
            checks.push(Check::measure("maxwell/integral/gauss", residual, 1e-6));
        }
    }

    // Constitutive agreement, intrinsic and decomposed.
    if cfg.constitutive_consistent() {
        let probes = probe_points(6, 0.2, 1.0);
        let image = constitutive_field(cfg.field_strength())?;
        let mut worst = 0.0_f64;
        for x in &probes {
            worst = worst.max(
                cfg.induction()
                    .value(x)?
                    .try_sub(&image.value(x)?)?
                    .norm_inf(),
            );
        }
        checks.push(Check::measure(
            "maxwell/constitutive/agreement",
            worst,
            1e-8,
        ));

        let ff = decompose(&cfg, &frame)?;
        let mut worst_e = 0.0_f64;
        let mut worst_b = 0.0_f64;
        for &(t, y) in &samples {
            let yv = Vector4::new(y[0], y[1], y[2], 0.0);
            let d_bar = Density::weyl_inverse(&ff.d.value(t, &yv)?)?;
            let from_e = spatial_constitutive(&frame, &ff.e.value(t, &yv)?)?;
            worst_e = worst_e.max(d_bar.try_add(&from_e)?.norm_inf());
            let h_bar = Density::weyl_inverse(&ff.h.value(t, &yv)?)?;
            let from_b = spatial_constitutive_b(&frame, &ff.b.value(t, &yv)?)?;
            worst_b = worst_b.max(h_bar.try_sub(&from_b)?.norm_inf());
        }
        checks.push(Check::measure(
            "maxwell/constitutive/spatial-electric",
            worst_e,
            1e-8,
        ));
        checks.push(Check::measure(
            "maxwell/constitutive/spatial-magnetic",
            worst_b,
            1e-8,
        ));
    }

    // The corrupted-flux detector: a flux growing with no circulation must
    // push the circulation balance far off zero.
    {
        let corrupted = corrupted_copy(&cfg)?;
        let (law, residual) =
            integral_laws_stationary(&corrupted, &frame, &frame_square(Parity::EVEN)?, t0, order)?;
        debug_assert_eq!(law, IntegralLaw::Faraday);
        checks.push(Check::exceeds(
            "maxwell/detector/corrupted-flux",
            residual,
            0.1,
        ));
    }

    Ok(Report::new(
        "maxwell",
        format!("field={field} frame-boost={frame_boost:.2} order={order} model=standard c=1"),
        checks,
        start.elapsed().as_secs_f64(),
    ))
}

// ---------------------------------------------------------------------------
// Parity suite.

/// Decomposes a built-in configuration, measures the time-reflection sign of
/// each object, and compares against the embedded expected table; under the
/// four-class model the table is additionally required to be identical
/// across boosted frames.
pub fn report_parity(model: OrientationModel, field: &str) -> Result<Report> {
    let start = Instant::now();
    let cfg = builtin_fields(field, model, 1.0)?;
    let frame = InertialFrame::rest(Vector4::zeros());
    let table = time_reflection_parities(&cfg, &frame)?;
    let expected = ParityTable::expected(model);
    let mut checks = Vec::new();
    for name in FieldName::ALL {
        checks.push(Check::sign(
            format!("parity/{}", name.label()),
            table.sign(name),
            expected.sign(name),
        ));
    }
    if model == OrientationModel::Relativistic {
        let mut mismatches = 0usize;
        for beta in [0.5, 0.9] {
            let boosted = InertialFrame::boosted(Vector4::zeros(), [beta, 0.0, 0.0])?;
            let other = time_reflection_parities(&cfg, &boosted)?;
            for name in FieldName::ALL {
                if other.sign(name) != table.sign(name) {
                    mismatches += 1;
                }
            }
        }
        checks.push(Check::measure(
            "parity/frame-independence",
            mismatches as f64,
            0.0,
        ));
    }
    Ok(Report::new(
        "parity",
        format!("model={} field={field}", model.label()),
        checks,
        start.elapsed().as_secs_f64(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_suite_passes() {
        let report = verify_algebra(DEFAULT_SEED).unwrap();
        assert!(report.pass, "{}", report.render_text());
    }

    #[test]
    fn calculus_suite_passes() {
        let report = verify_calculus(8, crate::forms::DEFAULT_FD_STEP, DEFAULT_SEED).unwrap();
        assert!(report.pass, "{}", report.render_text());
    }

    #[test]
    fn maxwell_suite_passes_for_plane_wave_and_boost() {
        for boost in [0.0, 0.5] {
            let report = verify_maxwell("plane-wave", boost, 8).unwrap();
            assert!(report.pass, "boost {boost}:\n{}", report.render_text());
        }
    }

    #[test]
    fn maxwell_suite_passes_for_coulomb() {
        let report = verify_maxwell("coulomb", 0.0, 8).unwrap();
        assert!(report.pass, "{}", report.render_text());
    }

    #[test]
    fn parity_suite_passes_for_both_models() {
        for model in [OrientationModel::Standard, OrientationModel::Relativistic] {
            let report = report_parity(model, "plane-wave").unwrap();
            assert!(report.pass, "{}", report.render_text());
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = verify_algebra(7).unwrap();
        let b = verify_algebra(7).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let c = verify_algebra(8).unwrap();
        assert_ne!(a.checks[0].digest, c.checks[0].digest);
    }

    #[test]
    fn quad_order_resolution_prefers_flags() {
        // Combined into one test: environment mutation must not race.
        std::env::remove_var(QUAD_ORDER_ENV);
        assert_eq!(resolve_quad_order(None), crate::chains::DEFAULT_QUAD_ORDER);
        assert_eq!(resolve_quad_order(Some(10)), 10);
        std::env::set_var(QUAD_ORDER_ENV, "14");
        assert_eq!(resolve_quad_order(None), 14);
        assert_eq!(resolve_quad_order(Some(6)), 6);
        std::env::set_var(QUAD_ORDER_ENV, "not-a-number");
        assert_eq!(resolve_quad_order(None), crate::chains::DEFAULT_QUAD_ORDER);
        std::env::remove_var(QUAD_ORDER_ENV);
    }

    #[test]
    fn maxwell_suite_rejects_lightlike_boost() {
        assert!(verify_maxwell("plane-wave", 0.99, 8).is_err());
    }
}
