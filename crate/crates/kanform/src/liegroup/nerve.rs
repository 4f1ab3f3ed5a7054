//! The simplicial connection on the nerve of `G`, its curvature and moment,
//! and the fiber-integrated Chern–Weil forms `Q^{2m, j, q}` on `G^q`.
//!
//! At `(g_1, ..., g_q; t_0, ..., t_q)` the vertex sections are
//! `h_i = g_{i+1} ... g_q` (`h_q = e`), `a_i = h_i^{-1} dh_i`, and
//! `θ = Σ t_i a_i`. Tangent vectors of `Δ_q` are written in the free
//! coordinates `t_1, ..., t_q` with `t_0 = 1 - Σ t`.

use std::sync::Arc;

use num_complex::Complex64;

use super::forms::{exterior_derivative, DeltaG, FdConfig, FormSum, GroupForm, Pullback, Tangent, WordMap};
use super::group::{bracket, inv, Mat, MatrixGroup};
use super::poly::InvariantPolynomial;
use super::quadrature::SimplexRule;

/// Tangent vector of `G^q × Δ_q`.
#[derive(Clone, Debug)]
pub struct MixedTangent {
    pub g: Tangent,
    /// Components along `t_1, ..., t_q`.
    pub dt: Vec<f64>,
}

/// Vertex sections at one point of `G^q`.
pub struct NervePoint {
    h: Vec<Mat>,
    hinv: Vec<Mat>,
    ginv: Vec<Mat>,
}

impl NervePoint {
    pub fn new(g: &[Mat]) -> Self {
        let q = g.len();
        let n = g.first().map_or(1, |m| m.nrows());
        let mut h = vec![Mat::identity(n, n); q + 1];
        for i in (0..q).rev() {
            h[i] = &g[i] * &h[i + 1];
        }
        let hinv = h.iter().map(inv).collect();
        let ginv = g.iter().map(inv).collect();
        NervePoint { h, hinv, ginv }
    }

    pub fn q(&self) -> usize {
        self.h.len() - 1
    }

    /// `h_i` for `i = 0, ..., q`.
    pub fn section(&self, i: usize) -> &Mat {
        &self.h[i]
    }

    /// `(a_0(v), ..., a_q(v))` with `a_i(v) = Σ_{b > i} Ad_{h_b^{-1}}(g_b^{-1} v_b)`.
    pub fn vertex_forms(&self, v: &Tangent) -> Vec<Mat> {
        let q = self.q();
        let n = self.h[0].nrows();
        let mut a = vec![Mat::zeros(n, n); q + 1];
        for i in (0..q).rev() {
            let b = i + 1;
            let w = &self.hinv[b] * &self.ginv[b - 1] * &v[b - 1] * &self.h[b];
            a[i] = &a[i + 1] + w;
        }
        a
    }
}

/// `(t_0, t_1, ..., t_q)` from the free coordinates.
pub fn barycentric(t: &[f64]) -> Vec<f64> {
    let mut full = Vec::with_capacity(t.len() + 1);
    full.push(1.0 - t.iter().sum::<f64>());
    full.extend_from_slice(t);
    full
}

fn full_dt(dt: &[f64]) -> Vec<f64> {
    barycentric(dt).into_iter().enumerate().map(|(i, x)| if i == 0 { x - 1.0 } else { x }).collect()
}

fn combo(t: &[f64], a: &[Mat]) -> Mat {
    let n = a[0].nrows();
    let mut out = Mat::zeros(n, n);
    for (ti, ai) in t.iter().zip(a) {
        if *ti != 0.0 {
            out += ai * Complex64::new(*ti, 0.0);
        }
    }
    out
}

/// `θ(U)` at barycentric point `t`.
pub fn connection(pt: &NervePoint, t: &[f64], u: &MixedTangent) -> Mat {
    combo(&barycentric(t), &pt.vertex_forms(&u.g))
}

/// `F(U, V) = dθ(U, V) + [θU, θV]`, using `da_i = -[a_i, a_i]`:
/// `Σ_i (dt_i(U) a_i(V) - dt_i(V) a_i(U)) + [θU, θV] - Σ_i t_i [a_i U, a_i V]`.
pub fn curvature(pt: &NervePoint, t: &[f64], u: &MixedTangent, v: &MixedTangent) -> Mat {
    let tf = barycentric(t);
    let au = pt.vertex_forms(&u.g);
    let av = pt.vertex_forms(&v.g);
    curvature_from_parts(&tf, &full_dt(&u.dt), &au, &full_dt(&v.dt), &av)
}

fn curvature_from_parts(tf: &[f64], du: &[f64], au: &[Mat], dv: &[f64], av: &[Mat]) -> Mat {
    let n = au[0].nrows();
    let mut f = Mat::zeros(n, n);
    for i in 0..tf.len() {
        if du[i] != 0.0 {
            f += &av[i] * Complex64::new(du[i], 0.0);
        }
        if dv[i] != 0.0 {
            f -= &au[i] * Complex64::new(dv[i], 0.0);
        }
        if tf[i] != 0.0 {
            f -= bracket(&au[i], &av[i]) * Complex64::new(tf[i], 0.0);
        }
    }
    f + bracket(&combo(tf, au), &combo(tf, av))
}

/// Sign convention of the moment `μ(X) = sign · Σ_i t_i Ad_{h_i^{-1}} X + shift · X`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentConvention {
    pub sign: f64,
    pub shift: f64,
}

/// The convention under which `Q(F + μ)` is closed for `d + δ_G`.
pub const MOMENT: MomentConvention = MomentConvention { sign: -1.0, shift: 0.0 };

pub fn moment_with(pt: &NervePoint, t: &[f64], x: &Mat, conv: MomentConvention) -> Mat {
    let tf = barycentric(t);
    let mut out = x * Complex64::new(conv.shift, 0.0);
    for (i, ti) in tf.iter().enumerate() {
        if *ti != 0.0 {
            out += (&pt.hinv[i] * x * &pt.h[i]) * Complex64::new(conv.sign * ti, 0.0);
        }
    }
    out
}

pub fn moment(pt: &NervePoint, t: &[f64], x: &Mat) -> Mat {
    moment_with(pt, t, x, MOMENT)
}

/// Perfect matchings of `0..n` as ordered pairs `(a, b)`, `a < b`, with the
/// sign of the permutation `(a_1 b_1 a_2 b_2 ...)`.
pub fn matchings(n: usize) -> Vec<(Vec<(usize, usize)>, f64)> {
    fn rec(rest: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        let a = rest[0];
        for k in 1..rest.len() {
            let b = rest[k];
            let remaining: Vec<usize> = rest[1..].iter().copied().filter(|&x| x != b).collect();
            acc.push((a, b));
            rec(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        rec(&(0..n).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    }
    out.into_iter()
        .map(|m| {
            let perm: Vec<usize> = m.iter().flat_map(|&(a, b)| [a, b]).collect();
            (m, permutation_sign(&perm))
        })
        .collect()
}

fn permutation_sign(p: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `∫_{Δ_q} C(r,m) Q(F^{r-m}, μ^m)`, a form of degree `2(r-m) - q` on `G^q`
/// and polynomial degree `m` in `X`. Fiber slots come first:
/// `ω(v) = ∫ Q(...)(∂_{t_1}, ..., ∂_{t_q}, v_1, ..., v_j) dt`.
#[derive(Clone, Debug)]
pub struct ChernWeilLayer {
    pub poly: InvariantPolynomial,
    pub q: usize,
    pub m: usize,
    pub conv: MomentConvention,
    rule: SimplexRule,
    matchings: Vec<(Vec<(usize, usize)>, f64)>,
}

impl ChernWeilLayer {
    /// `None` when the degree `2(r-m) - q` would be negative.
    pub fn new(poly: InvariantPolynomial, q: usize, m: usize) -> Option<Self> {
        Self::with_convention(poly, q, m, MOMENT)
    }

    pub fn with_convention(poly: InvariantPolynomial, q: usize, m: usize, conv: MomentConvention) -> Option<Self> {
        let r = poly.degree();
        if m > r || 2 * (r - m) < q || q == 0 {
            return None;
        }
        let slots = 2 * (r - m);
        let matchings = matchings(slots).into_iter().filter(|(m, _)| m.iter().all(|&(a, b)| !(a < q && b < q))).collect();
        Some(ChernWeilLayer { poly, q, m, conv, rule: SimplexRule::exact_for(q, 2 * r), matchings })
    }

    pub fn r(&self) -> usize {
        self.poly.degree()
    }

    /// The integrand `C(r,m) Q(F^{r-m}, μ^m)(∂_t..., v...)` at `t`.
    pub fn integrand(&self, x: &Mat, pt: &NervePoint, a_v: &[Vec<Mat>], t: &[f64]) -> f64 {
        let r = self.r();
        let p = r - self.m;
        let q = self.q;
        let tf = barycentric(t);
        let n = pt.h[0].nrows();
        let zero_a = vec![Mat::zeros(n, n); q + 1];
        // slot s < q is ∂_{t_{s+1}}; slot s >= q is v_{s-q}
        let slot = |s: usize| -> (Vec<f64>, &[Mat]) {
            if s < q {
                let mut dt = vec![0.0; q];
                dt[s] = 1.0;
                (full_dt(&dt), &zero_a[..])
            } else {
                (vec![0.0; q + 1], &a_v[s - q][..])
            }
        };
        let mu = (self.m > 0).then(|| moment_with(pt, t, x, self.conv));
        let mut total = 0.0;
        let mut cache = std::collections::HashMap::new();
        for (pairs, sign) in &self.matchings {
            let fs: Vec<Mat> = pairs
                .iter()
                .map(|&(a, b)| {
                    cache
                        .entry((a, b))
                        .or_insert_with(|| {
                            let (du, au) = slot(a);
                            let (dv, av) = slot(b);
                            curvature_from_parts(&tf, &du, au, &dv, av)
                        })
                        .clone()
                })
                .collect();
            let mut args: Vec<&Mat> = fs.iter().collect();
            for _ in 0..self.m {
                args.push(mu.as_ref().expect("m > 0"));
            }
            total += sign * self.poly.eval_real(&args);
        }
        binomial(r, self.m) * factorial(p) * total
    }
}

impl GroupForm for ChernWeilLayer {
    fn factors(&self) -> usize {
        self.q
    }
    fn degree(&self) -> usize {
        2 * (self.r() - self.m) - self.q
    }
    fn x_degree(&self) -> usize {
        self.m
    }
    fn eval(&self, x: &Mat, p: &[Mat], v: &[Tangent]) -> f64 {
        assert_eq!(v.len(), self.degree());
        let pt = NervePoint::new(p);
        let a_v: Vec<Vec<Mat>> = v.iter().map(|t| pt.vertex_forms(t)).collect();
        self.rule.integrate(|t| self.integrand(x, &pt, &a_v, t))
    }
}

/// The Shulman form `Q^{2r-q, q} = ∫_{Δ_q} Q(F_q)`: the `X`-free layer.
pub fn shulman_form(poly: InvariantPolynomial, q: usize) -> Option<ChernWeilLayer> {
    if q > poly.degree() {
        return None;
    }
    ChernWeilLayer::new(poly, q, 0)
}

/// One component `Q^{2m, j, q}` of `Ω_Q`.
#[derive(Clone, Debug)]
pub struct OmegaComponent {
    pub m: usize,
    pub j: usize,
    pub q: usize,
    /// Orientation sign `ε_q` of the fiber integral.
    pub sign: f64,
    pub form: Arc<ChernWeilLayer>,
}

impl OmegaComponent {
    pub fn eval(&self, x: &Mat, p: &[Mat], v: &[Tangent]) -> f64 {
        self.sign * self.form.eval(x, p, v)
    }

    /// `ε_q Q^{2m, j, q}` as a standalone form.
    pub fn signed(&self) -> Arc<dyn GroupForm> {
        let mut s = FormSum::new(self.q, self.j, self.m);
        s.push(self.sign, self.form.clone());
        Arc::new(s)
    }
}

/// Orientation sign attached to the `Δ_q` fiber integral in `Ω_Q`.
pub fn simplex_sign(q: usize) -> f64 {
    if q % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// `Ω_Q = Σ Q^{2m, j, q}` over `2m + j + q = 2r`, `1 ≤ q ≤ r`.
#[derive(Clone, Debug)]
pub struct Omega {
    pub poly: InvariantPolynomial,
    pub components: Vec<OmegaComponent>,
}

/// All layers `Q^{2m, j, q}` of `Q(F_q + μ_q)` for one `q`.
pub fn equivariant_forms(poly: InvariantPolynomial, q: usize) -> Vec<OmegaComponent> {
    let r = poly.degree();
    (0..=r)
        .filter_map(|m| ChernWeilLayer::new(poly, q, m))
        .filter(|l| l.q <= r)
        .map(|l| OmegaComponent { m: l.m, j: l.degree(), q: l.q, sign: simplex_sign(l.q), form: Arc::new(l) })
        .collect()
}

pub fn assemble_omega(poly: InvariantPolynomial) -> Omega {
    let r = poly.degree();
    Omega { poly, components: (1..=r).flat_map(|q| equivariant_forms(poly, q)).collect() }
}

impl Omega {
    pub fn component(&self, m: usize, j: usize, q: usize) -> Option<&OmegaComponent> {
        self.components.iter().find(|c| c.m == m && c.j == j && c.q == q)
    }

    /// Restriction to `X = 0`: the Shulman sum (the `m = 0` layers).
    pub fn at_zero(&self) -> Vec<&OmegaComponent> {
        self.components.iter().filter(|c| c.m == 0).collect()
    }
}

/// `δ♮ ω = Σ_{p=0}^{k+1} (-1)^p ∂_p^* ω` for `ω` on `G^k`.
pub fn delta_nerve(form: Arc<dyn GroupForm>) -> FormSum {
    let k = form.factors();
    let mut out = FormSum::new(k + 1, form.degree(), form.x_degree());
    for p in 0..=k + 1 {
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        out.push(sign, Arc::new(Pullback { map: WordMap::nerve_face(k + 1, p), form: form.clone() }));
    }
    out
}

/// Component of `d_G Ω` on `G^k` in bidegree `(2m, j)` with
/// `2m + j + k = 2r + 1`:
/// `d Q^{2m, j-1, k} + δ_G Q^{2m-2, j+1, k} + (-1)^j δ♮ Q^{2m, j, k-1}`.
#[allow(clippy::too_many_arguments)]
pub fn closure_residual(
    group: &MatrixGroup,
    omega: &Omega,
    k: usize,
    m: usize,
    j: usize,
    x: &Mat,
    p: &[Mat],
    v: &[Tangent],
    cfg: FdConfig,
) -> f64 {
    assert_eq!(v.len(), j);
    let mut total = 0.0;
    if j >= 1 {
        if let Some(c) = omega.component(m, j - 1, k) {
            total += c.sign * exterior_derivative(group, c.form.as_ref(), x, p, v, cfg);
        }
    }
    if m >= 1 {
        if let Some(c) = omega.component(m - 1, j + 1, k) {
            total += c.sign * DeltaG { form: c.form.clone() }.eval(x, p, v);
        }
    }
    if k >= 2 {
        if let Some(c) = omega.component(m, j, k - 1) {
            let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
            total += sign * c.sign * delta_nerve(c.form.clone()).eval(x, p, v);
        }
    }
    total
}

/// Bidegrees `(k, m, j)` of all components of `d_G Ω` that can be nonzero.
pub fn closure_bidegrees(r: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for k in 1..=r + 1 {
        for m in 0..=r {
            if 2 * m + k <= 2 * r + 1 {
                let j = 2 * r + 1 - 2 * m - k;
                out.push((k, m, j));
            }
        }
    }
    out
}
