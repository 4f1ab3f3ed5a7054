//! Ad-invariant symmetric multilinear polynomials on matrix Lie algebras.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::group::{Mat, I};
use crate::error::{Error, Result};

/// Scale of the quadratic trace form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// `Q(X, Y) = -tr(XY) / (8π²)`.
    Basic,
    /// `Q(X, Y) = -tr(XY)`.
    Trace,
}

/// Polynomial descriptor: `{"kind":"trace_form","normalization":"basic"}`
/// or `{"kind":"chern","r":k}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvariantPolynomial {
    TraceForm {
        normalization: Normalization,
    },
    /// `c_r(iX/2π)`, the r-th Chern polynomial.
    Chern {
        r: usize,
    },
}

impl std::str::FromStr for InvariantPolynomial {
    type Err = Error;

    /// Accepts `basic`, `trace`, `chern<r>`, `c<r>` or the JSON descriptor.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            return Ok(serde_json::from_str(t)?);
        }
        let lower = t.to_ascii_lowercase();
        match lower.as_str() {
            "basic" | "trace_form" => return Ok(Self::basic()),
            "trace" => return Ok(Self::TraceForm { normalization: Normalization::Trace }),
            _ => {}
        }
        let digits = lower
            .strip_prefix("chern")
            .or_else(|| lower.strip_prefix('c'))
            .ok_or_else(|| Error::Input(format!("unknown polynomial `{t}`")))?;
        let r: usize =
            digits.trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| Error::Input(format!("bad Chern degree in `{t}`")))?;
        if r == 0 {
            return Err(Error::Input("Chern degree must be positive".into()));
        }
        Ok(Self::Chern { r })
    }
}

impl InvariantPolynomial {
    pub fn basic() -> Self {
        InvariantPolynomial::TraceForm { normalization: Normalization::Basic }
    }

    pub fn degree(&self) -> usize {
        match self {
            InvariantPolynomial::TraceForm { .. } => 2,
            InvariantPolynomial::Chern { r } => *r,
        }
    }

    /// Symmetric multilinear value `Q(X_1, ..., X_r)`.
    pub fn eval(&self, args: &[&Mat]) -> Complex64 {
        assert_eq!(args.len(), self.degree(), "wrong number of arguments");
        match self {
            InvariantPolynomial::TraceForm { normalization } => {
                let t = trace_of_product(args[0], args[1]);
                let s = match normalization {
                    Normalization::Basic => -1.0 / (8.0 * PI * PI),
                    Normalization::Trace => -1.0,
                };
                t * s
            }
            InvariantPolynomial::Chern { r } => polarize(*r, args, |x| chern_value(*r, x)),
        }
    }

    /// Real part of [`Self::eval`]; values on real Lie algebras are real.
    pub fn eval_real(&self, args: &[&Mat]) -> f64 {
        self.eval(args).re
    }
}

fn trace_of_product(a: &Mat, b: &Mat) -> Complex64 {
    let n = a.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

/// `(1/r!) Σ_{S ≠ ∅} (-1)^{r-|S|} p(Σ_{i∈S} X_i)` for a homogeneous `p` of degree `r`.
fn polarize(r: usize, args: &[&Mat], p: impl Fn(&Mat) -> Complex64) -> Complex64 {
    let n = args[0].nrows();
    let mut total = Complex64::new(0.0, 0.0);
    for mask in 1u32..(1 << r) {
        let mut sum = Mat::zeros(n, n);
        for (i, a) in args.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum += *a;
            }
        }
        let sign = if (r - mask.count_ones() as usize).is_multiple_of(2) { 1.0 } else { -1.0 };
        total += p(&sum) * sign;
    }
    let fact: f64 = (1..=r).map(|k| k as f64).product();
    total / fact
}

/// `e_r` of the eigenvalues of `A = iX/2π`, by Newton's identities on power traces.
fn chern_value(r: usize, x: &Mat) -> Complex64 {
    let a = x * (I / (2.0 * PI));
    let mut powers = Vec::with_capacity(r);
    let mut ak = a.clone();
    for _ in 0..r {
        powers.push(ak.trace());
        ak = &ak * &a;
    }
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for k in 1..=r {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 1..=k {
            let sign = if (i - 1) % 2 == 0 { 1.0 } else { -1.0 };
            s += e[k - i] * powers[i - 1] * sign;
        }
        e.push(s / k as f64);
    }
    e[r]
}
