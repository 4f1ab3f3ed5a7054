//! Compact matrix groups `U(n)`, `SU(n)`, `SO(n)` and their Lie algebras.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat = DMatrix<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    U,
    SU,
    SO,
}

/// Group descriptor, serialized as `{"family":"SU","n":2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `SU(2)`, `SU2`, `U(3)`, `SO3` and the JSON descriptor.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            return Ok(serde_json::from_str(t)?);
        }
        let (fam, rest) = if let Some(r) = t.strip_prefix("SU") {
            (Family::SU, r)
        } else if let Some(r) = t.strip_prefix("SO") {
            (Family::SO, r)
        } else if let Some(r) = t.strip_prefix('U') {
            (Family::U, r)
        } else {
            return Err(Error::Input(format!("unknown group `{t}`")));
        };
        let digits = rest.trim_start_matches('(').trim_end_matches(')');
        let n: usize = digits.parse().map_err(|_| Error::Input(format!("bad group size in `{t}`")))?;
        Ok(GroupSpec { family: fam, n })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::U => "U",
            Family::SU => "SU",
            Family::SO => "SO",
        };
        write!(f, "{fam}({})", self.n)
    }
}

#[derive(Clone, Debug)]
pub struct MatrixGroup {
    spec: GroupSpec,
    basis: Vec<Mat>,
    gram_inv: DMatrix<f64>,
}

fn unit(n: usize, j: usize, k: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    m[(j, k)] = Complex64::new(1.0, 0.0);
    m
}

impl MatrixGroup {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        let n = spec.n;
        let valid = match spec.family {
            Family::U => n >= 1,
            Family::SU => n >= 2,
            Family::SO => n >= 2,
        };
        if !valid {
            return Err(Error::Input(format!("unsupported group {spec}")));
        }
        let mut basis = Vec::new();
        match spec.family {
            Family::U => {
                for j in 0..n {
                    basis.push(unit(n, j, j) * I);
                }
            }
            Family::SU => {
                for j in 0..n - 1 {
                    basis.push((unit(n, j, j) - unit(n, j + 1, j + 1)) * I);
                }
            }
            Family::SO => {}
        }
        for j in 0..n {
            for k in j + 1..n {
                if spec.family != Family::SO {
                    basis.push((unit(n, j, k) + unit(n, k, j)) * I);
                }
                basis.push(unit(n, j, k) - unit(n, k, j));
            }
        }
        let d = basis.len();
        let gram = DMatrix::from_fn(d, d, |a, b| real_inner(&basis[a], &basis[b]));
        let gram_inv = gram.try_inverse().expect("basis is linearly independent");
        Ok(MatrixGroup { spec, basis, gram_inv })
    }

    pub fn su2() -> Self {
        Self::new(GroupSpec { family: Family::SU, n: 2 }).expect("valid")
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(self.n(), self.n())
    }

    pub fn algebra_element(&self, coords: &[f64]) -> Mat {
        assert_eq!(coords.len(), self.dim());
        let mut x = Mat::zeros(self.n(), self.n());
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c != 0.0 {
                x += b * Complex64::new(*c, 0.0);
            }
        }
        x
    }

    /// Basis coordinates of a Lie-algebra element (least squares for
    /// matrices outside the algebra).
    pub fn coordinates(&self, x: &Mat) -> Vec<f64> {
        let rhs = nalgebra::DVector::from_iterator(self.dim(), self.basis.iter().map(|b| real_inner(b, x)));
        (&self.gram_inv * rhs).iter().copied().collect()
    }

    pub fn random_algebra<R: Rng>(&self, rng: &mut R, scale: f64) -> Mat {
        let c: Vec<f64> = (0..self.dim()).map(|_| rng.gen_range(-scale..=scale)).collect();
        self.algebra_element(&c)
    }

    /// A random group element `exp(X)` with `X` of size about `scale`.
    pub fn random_element<R: Rng>(&self, rng: &mut R, scale: f64) -> Mat {
        exp(&self.random_algebra(rng, scale))
    }

    /// Distance from the algebra: `|X + X^*|` plus the imaginary part for
    /// `SO(n)` and the trace for `SU(n)`.
    pub fn algebra_defect(&self, x: &Mat) -> f64 {
        let mut d = (x + x.adjoint()).norm();
        match self.spec.family {
            Family::SU => d += x.trace().norm(),
            Family::SO => d += x.iter().map(|z| z.im.abs()).sum::<f64>(),
            Family::U => {}
        }
        d
    }

    /// Distance from the group.
    pub fn group_defect(&self, g: &Mat) -> f64 {
        let mut d = (g.adjoint() * g - self.identity()).norm();
        match self.spec.family {
            Family::SU | Family::SO => d += (g.determinant() - Complex64::new(1.0, 0.0)).norm(),
            Family::U => {}
        }
        if self.spec.family == Family::SO {
            d += g.iter().map(|z| z.im.abs()).sum::<f64>();
        }
        d
    }
}

/// `Re tr(A^* B)`.
pub fn real_inner(a: &Mat, b: &Mat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub fn exp(x: &Mat) -> Mat {
    x.clone().exp()
}

/// `g^{-1}` for unitary `g`.
pub fn inv(g: &Mat) -> Mat {
    g.adjoint()
}

pub fn ad(g: &Mat, x: &Mat) -> Mat {
    g * x * g.adjoint()
}

pub fn bracket(x: &Mat, y: &Mat) -> Mat {
    x * y - y * x
}

/// `(exp(X), d/ds exp(X + sE)|_0)` from the block exponential of
/// `[[X, E], [0, X]]`.
pub fn exp_with_derivative(x: &Mat, e: &Mat) -> (Mat, Mat) {
    let n = x.nrows();
    let mut big = Mat::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(x);
    big.view_mut((n, n), (n, n)).copy_from(x);
    big.view_mut((0, n), (n, n)).copy_from(e);
    let b = big.exp();
    (b.view((0, 0), (n, n)).into_owned(), b.view((0, n), (n, n)).into_owned())
}

/// Algebra coordinates of `E` with `d exp_X(E) = target`, in the least
/// squares sense.
pub fn dexp_solve(x: &Mat, target: &Mat, group: &MatrixGroup) -> Result<Vec<f64>> {
    let n = group.n();
    let cols: Vec<Mat> = group.basis().iter().map(|b| exp_with_derivative(x, b).1).collect();
    let split = |m: &Mat, row: usize| {
        let z = m[((row / 2) % n, (row / 2) / n)];
        if row.is_multiple_of(2) {
            z.re
        } else {
            z.im
        }
    };
    let jac = DMatrix::from_fn(2 * n * n, group.dim(), |row, c| split(&cols[c], row));
    let rhs = nalgebra::DVector::from_fn(2 * n * n, |row, _| split(target, row));
    let sol = jac.svd(true, true).solve(&rhs, 1e-13).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(sol.iter().copied().collect())
}

/// Logarithm of `g` near `X_0`, by Newton iteration on `exp(X) = g`.
pub fn log_near(g: &Mat, x0: &Mat, group: &MatrixGroup) -> Result<Mat> {
    let mut x = x0.clone();
    for _ in 0..60 {
        let resid = g - exp(&x);
        if resid.norm() < 1e-14 {
            return Ok(x);
        }
        let step = dexp_solve(&x, &resid, group)?;
        x += group.algebra_element(&step);
    }
    let r = (exp(&x) - g).norm();
    if r < 1e-10 {
        Ok(x)
    } else {
        Err(Error::Numerical(format!("logarithm did not converge (residual {r:.2e})")))
    }
}

/// `2π`.
pub const TAU: f64 = 2.0 * PI;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bases_and_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for spec in ["U(1)", "U(2)", "SU(2)", "SU(3)", "SO(3)"] {
            let g = MatrixGroup::new(spec.parse().unwrap()).unwrap();
            for b in g.basis() {
                assert!(g.algebra_defect(b) < 1e-14);
                assert!(g.group_defect(&exp(b)) < 1e-12, "{spec}");
            }
            let x = g.random_algebra(&mut rng, 1.0);
            let c = g.coordinates(&x);
            assert!((g.algebra_element(&c) - &x).norm() < 1e-12);
        }
        assert_eq!(MatrixGroup::su2().dim(), 3);
    }

    #[test]
    fn block_exponential_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = MatrixGroup::su2();
        let x = g.random_algebra(&mut rng, 1.0);
        let e = g.random_algebra(&mut rng, 1.0);
        let (ex, d) = exp_with_derivative(&x, &e);
        let h = 1e-5;
        let fd = (exp(&(&x + &e * Complex64::new(h, 0.0))) - exp(&(&x - &e * Complex64::new(h, 0.0)))) / Complex64::new(2.0 * h, 0.0);
        assert!((ex - exp(&x)).norm() < 1e-13);
        assert!((d - fd).norm() < 1e-8);
    }

    #[test]
    fn logarithm() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = MatrixGroup::su2();
        let x = g.random_algebra(&mut rng, 0.5);
        let y = log_near(&exp(&x), &g.algebra_element(&[0.0; 3]), &g).unwrap();
        assert!((x - y).norm() < 1e-10);
    }
}
