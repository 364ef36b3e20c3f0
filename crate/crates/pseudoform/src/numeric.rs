//! Shared numeric utilities: Gauss–Legendre quadrature, Halton sampling, and
//! determinants of small matrices.

/// Gauss–Legendre nodes and weights on [0, 1].
///
/// Nodes are computed by Newton iteration on the degree-`n` Legendre
/// polynomial; exactness holds for polynomials of degree ≤ 2n − 1.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Standard initial guess for the i-th root on [-1, 1].
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map from [-1, 1] to [0, 1]; roots come out in descending order.
        nodes[n - 1 - i] = 0.5 * (x + 1.0);
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Legendre polynomial P_n and its derivative at `x`, via the three-term
/// recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Iterate over the tensor grid of `k`-dimensional Gauss–Legendre quadrature
/// on the unit cube, calling `f(point, weight)` for every node.
pub fn tensor_quadrature(k: usize, order: usize, mut f: impl FnMut(&[f64], f64)) {
    let (nodes, weights) = gauss_legendre(order);
    let mut point = vec![0.0; k];
    let mut idx = vec![0usize; k];
    if k == 0 {
        f(&point, 1.0);
        return;
    }
    loop {
        let mut w = 1.0;
        for d in 0..k {
            point[d] = nodes[idx[d]];
            w *= weights[idx[d]];
        }
        f(&point, w);
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < order {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == k {
                return;
            }
        }
    }
}

const HALTON_PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// The `i`-th element (1-based internally; pass any `i ≥ 0`) of the van der
/// Corput sequence in the given base.
fn van_der_corput(mut i: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut f = 1.0 / base as f64;
    while i > 0 {
        result += f * (i % base) as f64;
        i /= base;
        f /= base as f64;
    }
    result
}

/// The `i`-th point of the `dim`-dimensional Halton sequence, scaled to the
/// box with the given per-axis bounds. Deterministic and allocation-light;
/// indices start at 1 internally to avoid the all-zero point.
pub fn halton_point(i: usize, bounds: &[(f64, f64)]) -> Vec<f64> {
    assert!(bounds.len() <= HALTON_PRIMES.len());
    bounds
        .iter()
        .enumerate()
        .map(|(d, &(lo, hi))| lo + (hi - lo) * van_der_corput(i as u64 + 1, HALTON_PRIMES[d]))
        .collect()
}

/// Determinant of the leading `n × n` block of a 4×4 array (n ≤ 4).
pub(crate) fn det_small(n: usize, m: &[[f64; 4]; 4]) -> f64 {
    match n {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        4 => {
            let mut det = 0.0;
            for j in 0..4 {
                let mut sub = [[0.0; 4]; 4];
                for (r, row) in m.iter().enumerate().skip(1) {
                    let mut cc = 0;
                    for (c, &v) in row.iter().enumerate() {
                        if c != j {
                            sub[r - 1][cc] = v;
                            cc += 1;
                        }
                    }
                }
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                det += sign * m[0][j] * det_small(3, &sub);
            }
            det
        }
        _ => unreachable!("determinants only needed up to 4×4"),
    }
}
