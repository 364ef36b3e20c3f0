//! Multivariate polynomials in up to four coordinates, used to build field
//! fixtures with exact partial derivatives.

use nalgebra::Vector4;

/// A polynomial Σ c · x₀^{e₀} x₁^{e₁} x₂^{e₂} x₃^{e₃}.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    terms: Vec<(f64, [u8; 4])>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        if c == 0.0 {
            Self::zero()
        } else {
            Poly {
                terms: vec![(c, [0; 4])],
            }
        }
    }

    /// The coordinate monomial x_i.
    pub fn var(i: usize) -> Self {
        let mut e = [0u8; 4];
        e[i] = 1;
        Poly {
            terms: vec![(1.0, e)],
        }
    }

    pub fn term(c: f64, exponents: [u8; 4]) -> Self {
        if c == 0.0 {
            Self::zero()
        } else {
            Poly {
                terms: vec![(c, exponents)],
            }
        }
    }

    pub fn eval(&self, x: &Vector4<f64>) -> f64 {
        let mut sum = 0.0;
        for (c, e) in &self.terms {
            let mut p = *c;
            for i in 0..4 {
                for _ in 0..e[i] {
                    p *= x[i];
                }
            }
            sum += p;
        }
        sum
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut terms = Vec::new();
        for (c, e) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[i] -= 1;
            terms.push((c * e[i] as f64, ne));
        }
        Poly { terms }.collected()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Poly { terms }.collected()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms = Vec::new();
        for (c1, e1) in &self.terms {
            for (c2, e2) in &other.terms {
                let mut e = [0u8; 4];
                for i in 0..4 {
                    e[i] = e1[i] + e2[i];
                }
                terms.push((c1 * c2, e));
            }
        }
        Poly { terms }.collected()
    }

    pub fn scale(&self, f: f64) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(c, e)| (c * f, *e)).collect(),
        }
        .collected()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merge duplicate monomials and drop zeros.
    fn collected(mut self) -> Poly {
        self.terms.sort_by_key(|(_, e)| *e);
        let mut out: Vec<(f64, [u8; 4])> = Vec::with_capacity(self.terms.len());
        for (c, e) in self.terms {
            if let Some(last) = out.last_mut() {
                if last.1 == e {
                    last.0 += c;
                    continue;
                }
            }
            out.push((c, e));
        }
        out.retain(|(c, _)| *c != 0.0);
        Poly { terms: out }
    }
}
