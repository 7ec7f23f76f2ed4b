//! Exact polynomial interpolation over the rationals.

use num::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::rational::{self, Q};

/// Dense polynomial, coefficients from the constant term upwards, no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Q>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational::to_string).collect()
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let cs = rational::to_string(c);
            match k {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}*n")?,
                _ => write!(f, "{cs}*n^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolynomialJson {
    pub coefficients: Vec<String>,
    pub degree: Option<usize>,
    pub leading: String,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        PolynomialJson { coefficients: p.to_strings(), degree: p.degree(), leading: rational::to_string(&p.leading()) }
    }
}

/// Lagrange interpolation through distinct nodes.
pub fn interpolate(points: &[(Q, Q)]) -> Result<Polynomial> {
    if points.is_empty() {
        return invalid("interpolation needs at least one point");
    }
    for i in 0..points.len() {
        for j in 0..i {
            if points[i].0 == points[j].0 {
                return invalid(format!("duplicate interpolation node {}", rational::to_string(&points[i].0)));
            }
        }
    }
    let k = points.len();
    let mut out = vec![Q::zero(); k];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis numerator prod_{j != i} (x - x_j)
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let scale = yi / denom;
        for (d, c) in basis.iter().enumerate() {
            out[d] += c * &scale;
        }
    }
    Ok(Polynomial::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn recovers_cubic() {
        let p = |n: i64| q(4 * n * n * n - 4 * n);
        let pts: Vec<(Q, Q)> = (1..=4).map(|n| (q(n), p(n))).collect();
        let poly = interpolate(&pts).unwrap();
        assert_eq!(poly.coeffs(), &[q(0), q(-4), q(0), q(4)]);
        assert_eq!(poly.degree(), Some(3));
        assert_eq!(poly.to_string(), "4*n^3 + -4*n");
        assert_eq!(poly.eval(&q(5)), p(5));
    }

    #[test]
    fn duplicate_nodes_rejected() {
        assert!(interpolate(&[(q(1), q(1)), (q(1), q(2))]).is_err());
    }
}
