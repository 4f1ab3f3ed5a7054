//! Equivariant differential forms on products `G^N`, word maps between such
//! products, and finite-difference exterior derivatives.
//!
//! A tangent vector at `(g_1, ..., g_N)` is a list of ambient matrices
//! `v_a ∈ T_{g_a} G`. Forms take a Lie-algebra argument `X` for the Cartan
//! model; `x_degree` is the polynomial degree in `X`.

use std::sync::Arc;

use super::group::{exp, exp_with_derivative, inv, Mat, MatrixGroup};
use crate::error::{Error, Result};

pub type Tangent = Vec<Mat>;

pub trait GroupForm: Send + Sync {
    /// Number of group factors `N`.
    fn factors(&self) -> usize;
    /// Form degree.
    fn degree(&self) -> usize;
    /// Polynomial degree in the Lie-algebra argument.
    fn x_degree(&self) -> usize;
    fn eval(&self, x: &Mat, p: &[Mat], v: &[Tangent]) -> f64;
}

impl<F: GroupForm + ?Sized> GroupForm for Arc<F> {
    fn factors(&self) -> usize {
        (**self).factors()
    }
    fn degree(&self) -> usize {
        (**self).degree()
    }
    fn x_degree(&self) -> usize {
        (**self).x_degree()
    }
    fn eval(&self, x: &Mat, p: &[Mat], v: &[Tangent]) -> f64 {
        (**self).eval(x, p, v)
    }
}

impl<F: GroupForm + ?Sized> GroupForm for &F {
    fn factors(&self) -> usize {
        (**self).factors()
    }
    fn degree(&self) -> usize {
        (**self).degree()
    }
    fn x_degree(&self) -> usize {
        (**self).x_degree()
    }
    fn eval(&self, x: &Mat, p: &[Mat], v: &[Tangent]) -> f64 {
        (**self).eval(x, p, v)
    }
}

/// A letter of a word map: input index and inversion flag.
pub type MapLetter = (usize, bool);

/// `G^N → G^k`, each output a word in the inputs. Word maps commute with
/// simultaneous conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordMap {
    pub inputs: usize,
    pub outputs: Vec<Vec<MapLetter>>,
}

impl WordMap {
    pub fn new(inputs: usize, outputs: Vec<Vec<MapLetter>>) -> Self {
        assert!(outputs.iter().flatten().all(|(i, _)| *i < inputs), "letter out of range");
        WordMap { inputs, outputs }
    }

    pub fn identity(n: usize) -> Self {
        WordMap::new(n, (0..n).map(|i| vec![(i, false)]).collect())
    }

    /// Nerve face `∂_p : G^{k} → G^{k-1}`: drop `g_1` (`p = 0`), multiply
    /// `g_p g_{p+1}` (`0 < p < k`), drop `g_k` (`p = k`).
    pub fn nerve_face(k: usize, p: usize) -> Self {
        assert!(k >= 1 && p <= k);
        let mut outs = Vec::with_capacity(k - 1);
        let mut i = 0;
        while i < k {
            if p == 0 && i == 0 || p == k && i == k - 1 {
                i += 1;
                continue;
            }
            if p > 0 && p < k && i == p - 1 {
                outs.push(vec![(i, false), (i + 1, false)]);
                i += 2;
                continue;
            }
            outs.push(vec![(i, false)]);
            i += 1;
        }
        WordMap::new(k, outs)
    }

    pub fn apply(&self, p: &[Mat]) -> Vec<Mat> {
        let n = p[0].nrows();
        self.outputs
            .iter()
            .map(|w| w.iter().fold(Mat::identity(n, n), |acc, &(i, inverse)| if inverse { acc * inv(&p[i]) } else { acc * &p[i] }))
            .collect()
    }

    /// Pushforward of a tangent vector by the product rule.
    pub fn push(&self, p: &[Mat], v: &Tangent) -> Tangent {
        let n = p[0].nrows();
        self.outputs
            .iter()
            .map(|w| {
                let vals: Vec<Mat> = w.iter().map(|&(i, inverse)| if inverse { inv(&p[i]) } else { p[i].clone() }).collect();
                let mut suffix = vec![Mat::identity(n, n); w.len() + 1];
                for s in (0..w.len()).rev() {
                    suffix[s] = &vals[s] * &suffix[s + 1];
                }
                let mut prefix = Mat::identity(n, n);
                let mut out = Mat::zeros(n, n);
                for (s, &(i, inverse)) in w.iter().enumerate() {
                    let d = if inverse { -(&vals[s] * &v[i] * &vals[s]) } else { v[i].clone() };
                    out += &prefix * d * &suffix[s + 1];
                    prefix *= &vals[s];
                }
                out
            })
            .collect()
    }
}

/// `E^* ω` for a word map `E`.
pub struct Pullback<F> {
    pub map: WordMap,
    pub form: F,
}

impl<F: GroupForm> GroupForm for Pullback<F> {
    fn factors(&self) -> usize {
        self.map.inputs
    }
    fn degree(&self) -> usize {
        self.form.degree()
    }
    fn x_degree(&self) -> usize {
        self.form.x_degree()
    }
    fn eval(&self, x: &Mat, p: &[Mat], v: &[Tangent]) -> f64 {
        let q = self.map.apply(p);
        let w: Vec<Tangent> = v.iter().map(|t| self.map.push(p, t)).collect();
        self.form.eval(x, &q, &w)
    }
}

/// Real linear combination of forms of one bidegree on one product.
#[derive(Clone, Default)]
pub struct FormSum {
    pub factors: usize,
    pub degree: usize,
    pub x_degree: usize,
    pub terms: Vec<(f64, Arc<dyn GroupForm>)>,
}

impl FormSum {
    pub fn new(factors: usize, degree: usize, x_degree: usize) -> Self {
        FormSum { factors, degree, x_degree, terms: Vec::new() }
    }

    pub fn push(&mut self, c: f64, f: Arc<dyn GroupForm>) {
        assert_eq!(f.factors(), self.factors);
        assert_eq!(f.degree(), self.degree);
        if c != 0.0 {
            self.terms.push((c, f));
        }
    }
}

impl GroupForm for FormSum {
    fn factors(&self) -> usize {
        self.factors
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn x_degree(&self) -> usize {
        self.x_degree
    }
    fn eval(&self, x: &Mat, p: &[Mat], v: &[Tangent]) -> f64 {
        self.terms.iter().map(|(c, f)| c * f.eval(x, p, v)).sum()
    }
}

/// Fundamental field of simultaneous conjugation: `X g_a - g_a X`.
pub fn conjugation_field(x: &Mat, p: &[Mat]) -> Tangent {
    p.iter().map(|g| x * g - g * x).collect()
}

/// Cartan operator `(δ_G ω)(X; v...) = -ω(X; X_M, v...)`.
pub struct DeltaG<F> {
    pub form: F,
}

impl<F: GroupForm> GroupForm for DeltaG<F> {
    fn factors(&self) -> usize {
        self.form.factors()
    }
    fn degree(&self) -> usize {
        self.form.degree() - 1
    }
    fn x_degree(&self) -> usize {
        self.form.x_degree() + 1
    }
    fn eval(&self, x: &Mat, p: &[Mat], v: &[Tangent]) -> f64 {
        let mut w = Vec::with_capacity(v.len() + 1);
        w.push(conjugation_field(x, p));
        w.extend_from_slice(v);
        -self.form.eval(x, p, &w)
    }
}

/// A form written in coordinates `c ∈ ℝ^dim`, evaluated on coordinate vectors.
pub trait ChartForm {
    fn dim(&self) -> usize;
    fn degree(&self) -> usize;
    fn eval(&self, c: &[f64], dirs: &[Vec<f64>]) -> f64;
}

/// Step and extrapolation settings for finite differences.
#[derive(Clone, Copy, Debug)]
pub struct FdConfig {
    pub step: f64,
    pub richardson: bool,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig { step: 1e-4, richardson: true }
    }
}

/// Directional derivative of `f` at 0 along one parameter.
pub fn fd_derivative(f: impl Fn(f64) -> f64, cfg: FdConfig) -> f64 {
    let central = |h: f64| (f(h) - f(-h)) / (2.0 * h);
    let d1 = central(cfg.step);
    if cfg.richardson {
        let d2 = central(cfg.step / 2.0);
        (4.0 * d2 - d1) / 3.0
    } else {
        d1
    }
}

/// `dω(e_0, ..., e_j) = Σ_a (-1)^a ∂_{e_a} ω(e_0, ..., ê_a, ..., e_j)` for
/// constant coordinate fields `e_a`.
pub fn chart_exterior_derivative(form: &dyn ChartForm, c: &[f64], dirs: &[Vec<f64>], cfg: FdConfig) -> f64 {
    assert_eq!(dirs.len(), form.degree() + 1);
    let mut total = 0.0;
    for a in 0..dirs.len() {
        let rest: Vec<Vec<f64>> = dirs.iter().enumerate().filter(|(b, _)| *b != a).map(|(_, d)| d.clone()).collect();
        let d = fd_derivative(
            |s| {
                let shifted: Vec<f64> = c.iter().zip(&dirs[a]).map(|(x, e)| x + s * e).collect();
                form.eval(&shifted, &rest)
            },
            cfg,
        );
        total += if a % 2 == 0 { d } else { -d };
    }
    total
}

/// Exponential chart `c ↦ (g_a exp(C_a))_a` around a point of `G^N` with a
/// fixed Lie-algebra argument.
pub struct GroupChart<'a, F: ?Sized> {
    pub group: &'a MatrixGroup,
    pub form: &'a F,
    pub base: &'a [Mat],
    pub x: &'a Mat,
}

impl<F: GroupForm + ?Sized> GroupChart<'_, F> {
    fn split<'c>(&self, c: &'c [f64]) -> impl Iterator<Item = &'c [f64]> {
        c.chunks(self.group.dim())
    }

    /// Point and tangent matrices at chart coordinates `c`.
    pub fn realize(&self, c: &[f64], dirs: &[Vec<f64>]) -> (Vec<Mat>, Vec<Tangent>) {
        let xs: Vec<Mat> = self.split(c).map(|ci| self.group.algebra_element(ci)).collect();
        let mut tangents = vec![Vec::with_capacity(xs.len()); dirs.len()];
        let mut point = Vec::with_capacity(xs.len());
        for (a, xa) in xs.iter().enumerate() {
            point.push(&self.base[a] * exp(xa));
            for (t, d) in tangents.iter_mut().zip(dirs) {
                let da = &d[a * self.group.dim()..(a + 1) * self.group.dim()];
                let ea = self.group.algebra_element(da);
                let (_, de) = exp_with_derivative(xa, &ea);
                t.push(&self.base[a] * de);
            }
        }
        (point, tangents)
    }

    /// Chart coordinates of a tangent vector at the base point.
    pub fn coordinates(&self, v: &Tangent) -> Vec<f64> {
        v.iter().zip(self.base).flat_map(|(va, g)| self.group.coordinates(&(inv(g) * va))).collect()
    }
}

impl<F: GroupForm + ?Sized> ChartForm for GroupChart<'_, F> {
    fn dim(&self) -> usize {
        self.base.len() * self.group.dim()
    }
    fn degree(&self) -> usize {
        self.form.degree()
    }
    fn eval(&self, c: &[f64], dirs: &[Vec<f64>]) -> f64 {
        let (p, v) = self.realize(c, dirs);
        self.form.eval(self.x, &p, &v)
    }
}

/// `(dω)(X; v_0, ..., v_j)` at `p` by finite differences in exponential charts.
pub fn exterior_derivative<F: GroupForm + ?Sized>(group: &MatrixGroup, form: &F, x: &Mat, p: &[Mat], v: &[Tangent], cfg: FdConfig) -> f64 {
    let chart = GroupChart { group, form, base: p, x };
    let dirs: Vec<Vec<f64>> = v.iter().map(|t| chart.coordinates(t)).collect();
    let zero = vec![0.0; chart.dim()];
    chart_exterior_derivative(&chart, &zero, &dirs, cfg)
}

/// Estimated truncation error of a finite-difference derivative: the gap
/// between the plain and extrapolated central differences.
pub fn fd_error_estimate(f: impl Fn(f64) -> f64, cfg: FdConfig) -> f64 {
    let plain = fd_derivative(&f, FdConfig { richardson: false, ..cfg });
    let rich = fd_derivative(&f, FdConfig { richardson: true, ..cfg });
    (plain - rich).abs()
}

/// A random tangent vector at `p`: `g_a ξ_a` with random `ξ_a`.
pub fn random_tangent<R: rand::Rng>(group: &MatrixGroup, p: &[Mat], rng: &mut R) -> Tangent {
    p.iter().map(|g| g * group.random_algebra(rng, 1.0)).collect()
}

/// Checks a tangent list is at `p` (each `g_a^{-1} v_a` in the algebra).
pub fn check_tangent(group: &MatrixGroup, p: &[Mat], v: &Tangent) -> Result<()> {
    for (g, va) in p.iter().zip(v) {
        let d = group.algebra_defect(&(inv(g) * va));
        if d > 1e-10 {
            return Err(Error::Numerical(format!("tangent off the group by {d:.2e}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scale(m: &Mat, s: f64) -> Mat {
        m * num_complex::Complex64::new(s, 0.0)
    }
    use crate::liegroup::group::bracket;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Component `⟨θ, b⟩` of the left Maurer–Cartan form.
    struct McComponent {
        b: Mat,
    }

    impl GroupForm for McComponent {
        fn factors(&self) -> usize {
            1
        }
        fn degree(&self) -> usize {
            1
        }
        fn x_degree(&self) -> usize {
            0
        }
        fn eval(&self, _x: &Mat, p: &[Mat], v: &[Tangent]) -> f64 {
            super::super::group::real_inner(&self.b, &(inv(&p[0]) * &v[0][0]))
        }
    }

    #[test]
    fn maurer_cartan_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = MatrixGroup::su2();
        let zero = Mat::zeros(2, 2);
        for _ in 0..5 {
            let b = g.random_algebra(&mut rng, 1.0);
            let form = McComponent { b: b.clone() };
            let p = vec![g.random_element(&mut rng, 2.0)];
            let u = random_tangent(&g, &p, &mut rng);
            let w = random_tangent(&g, &p, &mut rng);
            let d = exterior_derivative(&g, &form, &zero, &p, &[u.clone(), w.clone()], FdConfig::default());
            let br = bracket(&(inv(&p[0]) * &u[0]), &(inv(&p[0]) * &w[0]));
            let expect = -super::super::group::real_inner(&b, &br);
            assert!((d - expect).abs() < 1e-6, "{d} vs {expect}");
        }
    }

    #[test]
    fn word_map_pushforward_matches_fd() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = MatrixGroup::su2();
        let m = WordMap::new(2, vec![vec![(0, false), (1, true), (0, true)], vec![(1, false)]]);
        let p: Vec<Mat> = (0..2).map(|_| g.random_element(&mut rng, 1.0)).collect();
        let xi: Vec<Mat> = (0..2).map(|_| g.random_algebra(&mut rng, 1.0)).collect();
        let v: Tangent = p.iter().zip(&xi).map(|(a, b)| a * b).collect();
        let pushed = m.push(&p, &v);
        let h = 1e-6;
        let moved = |s: f64| -> Vec<Mat> { p.iter().zip(&xi).map(|(a, b)| a * exp(&scale(b, s))).collect() };
        let fd: Vec<Mat> = m.apply(&moved(h)).iter().zip(m.apply(&moved(-h))).map(|(a, b)| scale(&(a - b), 1.0 / (2.0 * h))).collect();
        for (a, b) in pushed.iter().zip(&fd) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn nerve_faces() {
        assert_eq!(WordMap::nerve_face(2, 0).outputs, vec![vec![(1, false)]]);
        assert_eq!(WordMap::nerve_face(2, 1).outputs, vec![vec![(0, false), (1, false)]]);
        assert_eq!(WordMap::nerve_face(2, 2).outputs, vec![vec![(0, false)]]);
        assert_eq!(WordMap::nerve_face(3, 2).outputs, vec![vec![(0, false)], vec![(1, false), (2, false)]]);
    }
}
