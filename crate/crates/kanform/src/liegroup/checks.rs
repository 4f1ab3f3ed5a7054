//! Sampled residual reports for the Shulman ladder, the closedness of `Ω_Q`,
//! its restriction to `X = 0`, Cartan's 3-form and the Cartan homotopy formula.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::forms::{exterior_derivative, random_tangent, DeltaG, FdConfig, GroupForm, Tangent};
use super::group::{bracket, Mat, MatrixGroup};
use super::nerve::{assemble_omega, closure_bidegrees, closure_residual, delta_nerve, shulman_form, simplex_sign};
use super::poly::InvariantPolynomial;

fn sample_point(group: &MatrixGroup, rng: &mut ChaCha8Rng, k: usize, j: usize) -> (Vec<Mat>, Vec<Tangent>) {
    let p: Vec<Mat> = (0..k).map(|_| group.random_element(rng, 1.0)).collect();
    let v = (0..j).map(|_| random_tangent(group, &p, rng)).collect();
    (p, v)
}

fn par_max(samples: usize, seed: u64, f: impl Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync) -> Vec<f64> {
    (0..samples).into_par_iter().map(|s| f(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(s as u64)))).reduce(Vec::new, |a, b| {
        if a.is_empty() {
            return b;
        }
        a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect()
    })
}

/// One rung `d Q^{2r-q-1, q+1} + s δ♮ Q^{2r-q, q} = 0` on `G^{q+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct LadderRung {
    pub q: usize,
    /// `max |d Q^{2r-q-1,q+1} + δ♮ Q^{2r-q,q}|`.
    pub residual_plus: f64,
    /// `max |d Q^{2r-q-1,q+1} - δ♮ Q^{2r-q,q}|`.
    pub residual_minus: f64,
    pub realized_sign: i32,
    pub scale: f64,
}

impl LadderRung {
    pub fn residual(&self) -> f64 {
        self.residual_plus.min(self.residual_minus)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderReport {
    pub samples: usize,
    /// `max |d Q^{2r-1,1}|`: Cartan's form is closed on `G`.
    pub bottom: f64,
    pub rungs: Vec<LadderRung>,
    /// `max |δ♮ Q^{r,r}|` on `G^{r+1}`.
    pub top: f64,
}

impl LadderReport {
    pub fn max_residual(&self) -> f64 {
        self.rungs.iter().map(LadderRung::residual).fold(self.bottom.max(self.top), f64::max)
    }
}

/// The unsigned Shulman forms `∫_{Δ_q} Q(F_q)` and their ladder.
pub fn ladder_check(group: &MatrixGroup, poly: InvariantPolynomial, samples: usize, seed: u64, cfg: FdConfig) -> LadderReport {
    let r = poly.degree();
    let forms: Vec<_> = (1..=r).map(|q| shulman_form(poly, q).expect("q <= r")).collect();
    let x = Mat::zeros(group.n(), group.n());
    let cols = par_max(samples, seed, |rng| {
        let mut out = Vec::new();
        let (p, v) = sample_point(group, rng, 1, 2 * r);
        out.push(exterior_derivative(group, &forms[0], &x, &p, &v, cfg).abs());
        for q in 1..r {
            let j = 2 * r - q;
            let (p, v) = sample_point(group, rng, q + 1, j);
            let d = exterior_derivative(group, &forms[q], &x, &p, &v, cfg);
            let dn = delta_nerve(std::sync::Arc::new(forms[q - 1].clone())).eval(&x, &p, &v);
            out.extend([(d + dn).abs(), (d - dn).abs(), d.abs().max(dn.abs())]);
        }
        let (p, v) = sample_point(group, rng, r + 1, r);
        out.push(delta_nerve(std::sync::Arc::new(forms[r - 1].clone())).eval(&x, &p, &v).abs());
        out
    });
    let rungs = (1..r)
        .map(|q| {
            let (plus, minus, scale) = (cols[3 * q - 2], cols[3 * q - 1], cols[3 * q]);
            LadderRung { q, residual_plus: plus, residual_minus: minus, realized_sign: if plus <= minus { 1 } else { -1 }, scale }
        })
        .collect();
    LadderReport { samples, bottom: cols[0], rungs, top: cols[cols.len() - 1] }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureEntry {
    pub k: usize,
    pub m: usize,
    pub j: usize,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub samples: usize,
    pub entries: Vec<ClosureEntry>,
}

impl ClosureReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.max_residual).fold(0.0, f64::max)
    }
}

/// `d_G Ω_Q = 0` in every bidegree at `samples` random points.
pub fn closure_check(group: &MatrixGroup, poly: InvariantPolynomial, samples: usize, seed: u64, cfg: FdConfig) -> ClosureReport {
    let omega = assemble_omega(poly);
    let degrees = closure_bidegrees(poly.degree());
    let cols = par_max(samples, seed, |rng| {
        degrees
            .iter()
            .map(|&(k, m, j)| {
                let (p, v) = sample_point(group, rng, k, j);
                let x = group.random_algebra(rng, 1.0);
                closure_residual(group, &omega, k, m, j, &x, &p, &v, cfg).abs()
            })
            .collect()
    });
    ClosureReport {
        samples,
        entries: degrees.iter().zip(cols).map(|(&(k, m, j), max_residual)| ClosureEntry { k, m, j, max_residual }).collect(),
    }
}

/// `max |Ω_Q|_{X=0} - Σ_q ε_q Q^{2r-q,q}|` componentwise: the `m ≥ 1`
/// layers vanish at `X = 0` and the `m = 0` layers are the Shulman forms.
pub fn restriction_check(group: &MatrixGroup, poly: InvariantPolynomial, samples: usize, seed: u64) -> f64 {
    let omega = assemble_omega(poly);
    let r = poly.degree();
    let zero = Mat::zeros(group.n(), group.n());
    let cols = par_max(samples, seed, |rng| {
        let mut worst = 0.0f64;
        for q in 1..=r {
            for j in 0..=2 * r - q {
                let (p, v) = sample_point(group, rng, q, j);
                let restricted: f64 = omega.components.iter().filter(|c| c.q == q && c.j == j).map(|c| c.eval(&zero, &p, &v)).sum();
                let shulman =
                    if j == 2 * r - q { simplex_sign(q) * shulman_form(poly, q).expect("q <= r").eval(&zero, &p, &v) } else { 0.0 };
                worst = worst.max((restricted - shulman).abs());
            }
        }
        vec![worst]
    });
    cols[0]
}

#[derive(Clone, Debug, Serialize)]
pub struct CartanFormReport {
    pub samples: usize,
    /// Mean of `Q^{2r-1,1}(g; g x, g y, g z) / Q(x, [y, z])` for `r = 2`.
    pub constant: f64,
    pub max_deviation: f64,
}

/// Cartan's 3-form: `Q^{3,1}` on left-translated frames against `Q(x, [y, z])`.
pub fn cartan_form_check(group: &MatrixGroup, poly: InvariantPolynomial, samples: usize, seed: u64) -> Option<CartanFormReport> {
    if poly.degree() != 2 {
        return None;
    }
    let lambda = shulman_form(poly, 1)?;
    let zero = Mat::zeros(group.n(), group.n());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(samples);
    for _ in 0..samples {
        let g = group.random_element(&mut rng, 1.0);
        let a: Vec<Mat> = (0..3).map(|_| group.random_algebra(&mut rng, 1.0)).collect();
        let v: Vec<Tangent> = a.iter().map(|x| vec![&g * x]).collect();
        let value = lambda.eval(&zero, std::slice::from_ref(&g), &v);
        let closed = poly.eval_real(&[&a[0], &bracket(&a[1], &a[2])]);
        pairs.push((value, closed));
    }
    let (num, den) = pairs.iter().fold((0.0, 0.0), |(n, d), (v, c)| (n + v * c, d + c * c));
    let constant = num / den;
    let max_deviation = pairs.iter().map(|(v, c)| (v - constant * c).abs()).fold(0.0, f64::max);
    Some(CartanFormReport { samples, constant, max_deviation })
}

/// `dω` as a form, by finite differences.
struct Exterior<'a, F: ?Sized> {
    group: &'a MatrixGroup,
    form: &'a F,
    cfg: FdConfig,
}

impl<F: GroupForm + ?Sized> GroupForm for Exterior<'_, F> {
    fn factors(&self) -> usize {
        self.form.factors()
    }
    fn degree(&self) -> usize {
        self.form.degree() + 1
    }
    fn x_degree(&self) -> usize {
        self.form.x_degree()
    }
    fn eval(&self, x: &Mat, p: &[Mat], v: &[Tangent]) -> f64 {
        exterior_derivative(self.group, self.form, x, p, v, self.cfg)
    }
}

/// `max |(d δ_G + δ_G d) ω(X)|`, which is `-L_{X_M} ω = 0` for invariant `ω`.
pub fn cartan_homotopy_check<F: GroupForm + ?Sized>(group: &MatrixGroup, form: &F, samples: usize, seed: u64, cfg: FdConfig) -> f64 {
    let dg = DeltaG { form };
    let d = Exterior { group, form, cfg };
    let dg_d = DeltaG { form: d };
    let cols = par_max(samples, seed, |rng| {
        let (p, v) = sample_point(group, rng, form.factors(), form.degree());
        let x = group.random_algebra(rng, 1.0);
        let a = exterior_derivative(group, &dg, &x, &p, &v, cfg);
        let b = dg_d.eval(&x, &p, &v);
        vec![(a + b).abs()]
    });
    cols[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liegroup::nerve::ChernWeilLayer;

    #[test]
    fn ladder_on_su2() {
        let rep = ladder_check(&MatrixGroup::su2(), InvariantPolynomial::basic(), 3, 1, FdConfig::default());
        assert!(rep.max_residual() < 1e-7, "{rep:?}");
        assert!(rep.rungs[0].scale > 1e-3);
    }

    #[test]
    fn closure_and_restriction() {
        let g = MatrixGroup::su2();
        assert!(closure_check(&g, InvariantPolynomial::basic(), 2, 3, FdConfig::default()).max_residual() < 1e-7);
        assert!(restriction_check(&g, InvariantPolynomial::basic(), 2, 3) < 1e-12);
    }

    #[test]
    fn cartan_three_form() {
        // ∫_0^1 2(s² - s) ds · 3 = -1: λ = ±Q(x, [y, z]) exactly
        let g = MatrixGroup::su2();
        let rep = cartan_form_check(&g, InvariantPolynomial::basic(), 10, 2).unwrap();
        assert!(rep.max_deviation < 1e-12, "{rep:?}");
        assert!((rep.constant.abs() - 1.0).abs() < 1e-10, "{rep:?}");
        assert!(cartan_form_check(&g, InvariantPolynomial::Chern { r: 1 }, 1, 1).is_none());
    }

    #[test]
    fn cartan_homotopy_vanishes_on_invariant_forms() {
        let g = MatrixGroup::su2();
        let lambda = shulman_form(InvariantPolynomial::basic(), 1).unwrap();
        assert!(cartan_homotopy_check(&g, &lambda, 2, 4, FdConfig::default()) < 1e-6);
        let moment = ChernWeilLayer::new(InvariantPolynomial::basic(), 1, 1).unwrap();
        assert!(cartan_homotopy_check(&g, &moment, 2, 5, FdConfig::default()) < 1e-6);
    }
}
