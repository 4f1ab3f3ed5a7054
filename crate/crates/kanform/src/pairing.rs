//! Evaluation maps `Hom(K_q, G) → G^k`, the pairing of nerve forms with
//! bisimplicial chains, the total differential on `Hom(K_•, G)`, and fiber
//! integration over plots.
//!
//! Sign conventions, fixed so that the pairing is a chain map:
//! - a tuple in bar degree `k` is paired with sign `ε_k = (-1)^{k(k+1)/2}`;
//! - on forms of degree `j` on `H_q = Hom(K_q, G)` the total differential is
//!   `D = d + δ_G + (-1)^j δ_♯`, with `δ_♯ = Σ_i (-1)^i (d^i)^*` lowering `q`;
//! - plot integration puts the simplex directions first and carries the sign
//!   `(-1)^{qu + q(q+1)/2}` for output degree `u`.
//!
//! With these, `D⟨Ω, c⟩ = ⟨d_G Ω, c⟩ + ⟨Ω, ∂c⟩` and `d_W ∘ I = I ∘ D`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chains::{total_boundary_raw, Chain};
use crate::error::{Error, Result};
use crate::liegroup::forms::{
    chart_exterior_derivative, exterior_derivative, random_tangent, ChartForm, DeltaG, FdConfig, FormSum, GroupForm, MapLetter, Pullback,
    Tangent, WordMap,
};
use crate::liegroup::nerve::Omega;
use crate::liegroup::quadrature::SimplexRule;
use crate::liegroup::{Mat, MatrixGroup};
use crate::simplicial::FreeSimplicialGroup;
use crate::words::{Generator, Word};

fn parity(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `ε_k = (-1)^{k(k+1)/2}`.
pub fn pairing_sign(k: usize) -> f64 {
    parity(k * (k + 1) / 2)
}

/// `(-1)^{qu + q(q+1)/2}`.
pub fn integration_sign(q: usize, u: usize) -> f64 {
    parity(q * u + q * (q + 1) / 2)
}

/// `H_q = Hom(K_q, G) = G^N`, one factor per free generator of `K_q`.
#[derive(Clone, Debug)]
pub struct RepSpace {
    q: usize,
    generators: Vec<Generator>,
    index: HashMap<Generator, usize>,
}

impl RepSpace {
    pub fn new(k: &FreeSimplicialGroup, q: usize) -> Self {
        let generators = k.generators(q);
        let index = generators.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        RepSpace { q, generators, index }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn position(&self, g: &Generator) -> Option<usize> {
        self.index.get(g).copied()
    }

    fn letters(&self, w: &Word) -> Result<Vec<MapLetter>> {
        w.letters()
            .iter()
            .map(|l| {
                self.position(&l.generator)
                    .map(|i| (i, l.inverse))
                    .ok_or_else(|| Error::Input(format!("generator `{}` has no value in degree {}", l.generator, self.q)))
            })
            .collect()
    }

    /// Evaluation `φ ↦ (φ(w_1), ..., φ(w_k))` as a word map.
    pub fn evaluation(&self, tuple: &[Word]) -> Result<WordMap> {
        let outs = tuple.iter().map(|w| self.letters(w)).collect::<Result<Vec<_>>>()?;
        Ok(WordMap::new(self.len(), outs))
    }

    /// Evaluates a tuple at `p` and pushes tangents forward.
    pub fn evaluate(&self, tuple: &[Word], p: &[Mat], tangents: &[Tangent]) -> Result<(Vec<Mat>, Vec<Tangent>)> {
        let map = self.evaluation(tuple)?;
        Ok((map.apply(p), tangents.iter().map(|v| map.push(p, v)).collect()))
    }
}

/// Coface `d^i : H_{q-1} → H_q`, `φ ↦ φ ∘ d_i`.
pub fn coface_map(k: &FreeSimplicialGroup, lower: &RepSpace, upper: &RepSpace, i: usize) -> Result<WordMap> {
    assert_eq!(lower.q + 1, upper.q);
    let faces: Vec<Word> = upper.generators.iter().map(|g| k.apply_face(upper.q, i, &Word::generator(g.clone()))).collect::<Result<_>>()?;
    let outs = faces.iter().map(|w| lower.letters(w)).collect::<Result<Vec<_>>>()?;
    Ok(WordMap::new(lower.len(), outs))
}

/// `⟨Ω, c⟩`: for each `H_q`, X-degree `m` and form degree `j`, the sum of
/// pullbacks along evaluation maps.
#[derive(Clone)]
pub struct Paired {
    pub spaces: Vec<Arc<RepSpace>>,
    pub components: BTreeMap<(usize, usize, usize), FormSum>,
}

impl Paired {
    /// Component on `H_q` of X-degree `m` and form degree `j`.
    pub fn component(&self, q: usize, m: usize, j: usize) -> Option<&FormSum> {
        self.components.get(&(q, m, j))
    }

    /// Total degree `2m + j - q` of each component.
    pub fn total_degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.components.keys().map(|&(q, m, j)| (2 * m + j) as i64 - q as i64).collect();
        d.sort();
        d.dedup();
        d
    }
}

/// Builds `H_0, ..., H_{max_q}`.
pub fn rep_spaces(k: &FreeSimplicialGroup, max_q: usize) -> Vec<Arc<RepSpace>> {
    (0..=max_q).map(|q| Arc::new(RepSpace::new(k, q))).collect()
}

/// `⟨Ω, c⟩ = Σ_{k,q} ε_k ⟨Ω^k, c_{k,q}⟩`.
pub fn pair(k: &FreeSimplicialGroup, omega: &Omega, c: &Chain) -> Result<Paired> {
    let max_q = c.bidegrees().iter().map(|&(_, q)| q).max().unwrap_or(0);
    pair_in(&rep_spaces(k, max_q), omega, c)
}

/// [`pair`] over prebuilt spaces.
pub fn pair_in(spaces: &[Arc<RepSpace>], omega: &Omega, c: &Chain) -> Result<Paired> {
    let mut components: BTreeMap<(usize, usize, usize), FormSum> = BTreeMap::new();
    for (t, coeff) in c.terms() {
        let space = spaces.get(t.q()).ok_or_else(|| Error::Input(format!("no representation space in degree {}", t.q())))?;
        let n = coeff.to_f64().ok_or_else(|| Error::Numerical("coefficient out of range".into()))?;
        let map = space.evaluation(t.entries())?;
        for comp in omega.components.iter().filter(|comp| comp.q == t.k()) {
            let entry = components.entry((t.q(), comp.m, comp.j)).or_insert_with(|| FormSum::new(space.len(), comp.j, comp.m));
            entry.push(pairing_sign(t.k()) * comp.sign * n, Arc::new(Pullback { map: map.clone(), form: comp.form.clone() }));
        }
    }
    Ok(Paired { spaces: spaces.to_vec(), components })
}

/// `δ_♯ P = Σ_i (-1)^i (d^i)^* P` for a form on `H_{q+1}`.
pub fn delta_sharp(k: &FreeSimplicialGroup, spaces: &[Arc<RepSpace>], q: usize, form: Arc<dyn GroupForm>) -> Result<FormSum> {
    let mut out = FormSum::new(spaces[q].len(), form.degree(), form.x_degree());
    for i in 0..=q + 1 {
        out.push(parity(i), Arc::new(Pullback { map: coface_map(k, &spaces[q], &spaces[q + 1], i)?, form: form.clone() }));
    }
    Ok(out)
}

/// Residuals of `D⟨Ω, c⟩ = ⟨Ω, ∂c⟩` in one output component.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentResidual {
    pub q: usize,
    pub m: usize,
    pub j: usize,
    pub max_residual: f64,
    pub max_lhs: f64,
    pub max_rhs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub samples: usize,
    pub components: Vec<ComponentResidual>,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.components.iter().map(|c| c.max_residual).fold(0.0, f64::max)
    }

    pub fn max_lhs(&self) -> f64 {
        self.components.iter().map(|c| c.max_lhs).fold(0.0, f64::max)
    }

    pub fn max_rhs(&self) -> f64 {
        self.components.iter().map(|c| c.max_rhs).fold(0.0, f64::max)
    }
}

/// `(D P)` in component `(q, m, j)` at one point of `H_q`.
#[allow(clippy::too_many_arguments)]
fn total_differential_at(
    k: &FreeSimplicialGroup,
    group: &MatrixGroup,
    paired: &Paired,
    (q, m, j): (usize, usize, usize),
    x: &Mat,
    p: &[Mat],
    v: &[Tangent],
    cfg: FdConfig,
) -> Result<f64> {
    let mut total = 0.0;
    if j >= 1 {
        if let Some(f) = paired.component(q, m, j - 1) {
            total += exterior_derivative(group, f, x, p, v, cfg);
        }
    }
    if m >= 1 {
        if let Some(f) = paired.component(q, m - 1, j + 1) {
            total += DeltaG { form: f }.eval(x, p, v);
        }
    }
    if let Some(f) = paired.component(q + 1, m, j) {
        let ds = delta_sharp(k, &paired.spaces, q, Arc::new(f.clone()))?;
        total += parity(j) * ds.eval(x, p, v);
    }
    Ok(total)
}

/// Checks `D⟨Ω, c⟩ = ⟨Ω, ∂c⟩` at random points of each `H_q`, assuming
/// `d_G Ω = 0`. `∂c` is the unnormalized total boundary, matching the
/// unnormalized `δ_♯`.
pub fn differential_identity_check(
    k: &FreeSimplicialGroup,
    group: &MatrixGroup,
    omega: &Omega,
    c: &Chain,
    samples: usize,
    seed: u64,
    cfg: FdConfig,
) -> Result<IdentityReport> {
    let r = omega.poly.degree();
    let max_q = c.bidegrees().iter().map(|&(_, q)| q).max().unwrap_or(0);
    let spaces = rep_spaces(k, max_q);
    let paired = pair_in(&spaces, omega, c)?;
    let boundary = pair_in(&spaces, omega, &total_boundary_raw(k, c))?;
    let n = c.total_degree().unwrap_or(0);
    let mut targets = Vec::new();
    for (q, space) in spaces.iter().enumerate().take(max_q + 1) {
        if space.is_empty() {
            continue;
        }
        for m in 0..=r {
            let j = (2 * r + 1 + q) as i64 - n as i64 - 2 * m as i64;
            if j >= 0 {
                targets.push((q, m, j as usize));
            }
        }
    }
    let results: Vec<Vec<(f64, f64)>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s as u64));
            targets
                .iter()
                .map(|&(q, m, j)| {
                    let p: Vec<Mat> = (0..spaces[q].len()).map(|_| group.random_element(&mut rng, 1.0)).collect();
                    let v: Vec<Tangent> = (0..j).map(|_| random_tangent(group, &p, &mut rng)).collect();
                    let x = group.random_algebra(&mut rng, 1.0);
                    let lhs = total_differential_at(k, group, &paired, (q, m, j), &x, &p, &v, cfg)?;
                    let rhs = boundary.component(q, m, j).map_or(0.0, |f| f.eval(&x, &p, &v));
                    Ok((lhs, rhs))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let components = targets
        .iter()
        .enumerate()
        .map(|(t, &(q, m, j))| {
            let mut c = ComponentResidual { q, m, j, max_residual: 0.0, max_lhs: 0.0, max_rhs: 0.0 };
            for sample in &results {
                let (l, r) = sample[t];
                c.max_residual = c.max_residual.max((l - r).abs());
                c.max_lhs = c.max_lhs.max(l.abs());
                c.max_rhs = c.max_rhs.max(r.abs());
            }
            c
        })
        .collect();
    Ok(IdentityReport { samples, components })
}

/// Value of a plot at one generator with derivatives along chart and simplex
/// directions.
#[derive(Clone, Debug)]
pub struct PlotValue {
    pub value: Mat,
    pub w: Vec<Mat>,
    pub t: Vec<Mat>,
}

/// A smooth family `F_q : W × Δ_q → H_q`, given on a chart of `W` through its
/// values on base generators. Degenerate generators follow from
/// `F_q(t)(s_j y) = F_{q-1}(σ^j t)(y)`.
pub trait Plot: Send + Sync {
    /// Data shared by all simplex points at one chart point.
    type Frame;

    /// Dimension of the chart of `W`.
    fn dim(&self) -> usize;

    fn frame(&self, c: &[f64], dirs: &[Vec<f64>]) -> Result<Self::Frame>;

    /// Value of the base generator `name`, of degree `bary.len() - 1`, at the
    /// barycentric point `bary`; `bary_dirs` are barycentric tangent vectors.
    fn base_value(&self, frame: &Self::Frame, name: &str, bary: &[f64], bary_dirs: &[Vec<f64>]) -> Result<PlotValue>;

    /// Chart coordinates of the fundamental field of `X` at `c`, for
    /// `G`-equivariant plots.
    fn action_field(&self, _c: &[f64], _x: &Mat) -> Option<Vec<f64>> {
        None
    }
}

/// Codegeneracy `σ^j : Δ_q → Δ_{q-1}` on barycentric vectors.
fn codegeneracy(j: usize, t: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(t.len() - 1);
    out.extend_from_slice(&t[..j]);
    out.push(t[j] + t[j + 1]);
    out.extend_from_slice(&t[j + 2..]);
    out
}

/// A point of `H_q` on a plot, with pushforwards of chart directions and of
/// `∂/∂t_1, ..., ∂/∂t_q`.
pub struct PlotSample {
    pub point: Vec<Mat>,
    pub w: Vec<Tangent>,
    pub t: Vec<Tangent>,
}

/// Samples `F_q` at free simplex coordinates `t = (t_1, ..., t_q)`.
pub fn sample_plot<P: Plot>(plot: &P, frame: &P::Frame, space: &RepSpace, t: &[f64], n_dirs: usize) -> Result<PlotSample> {
    let q = space.q();
    assert_eq!(t.len(), q);
    let mut bary = Vec::with_capacity(q + 1);
    bary.push(1.0 - t.iter().sum::<f64>());
    bary.extend_from_slice(t);
    let t_dirs: Vec<Vec<f64>> = (1..=q)
        .map(|i| {
            let mut d = vec![0.0; q + 1];
            d[0] = -1.0;
            d[i] = 1.0;
            d
        })
        .collect();
    let mut out = PlotSample {
        point: Vec::with_capacity(space.len()),
        w: vec![Vec::with_capacity(space.len()); n_dirs],
        t: vec![Vec::with_capacity(space.len()); q],
    };
    for g in space.generators() {
        let (mut b, mut d) = (bary.clone(), t_dirs.clone());
        for &j in g.degeneracies() {
            b = codegeneracy(j as usize, &b);
            d = d.iter().map(|v| codegeneracy(j as usize, v)).collect();
        }
        let val = plot.base_value(frame, g.base(), &b, &d)?;
        if val.w.len() != n_dirs || val.t.len() != q {
            return Err(Error::Mismatch(format!("plot value for `{g}` has the wrong number of derivatives")));
        }
        out.point.push(val.value);
        for (slot, m) in out.w.iter_mut().zip(val.w) {
            slot.push(m);
        }
        for (slot, m) in out.t.iter_mut().zip(val.t) {
            slot.push(m);
        }
    }
    Ok(out)
}

/// `I⟨Ω, c⟩` restricted to one output bidegree: an equivariant form on the
/// chart of `W` with X-degree `m` and form degree `u`.
pub struct IntegratedForm<'a, P: Plot> {
    pub plot: &'a P,
    pub paired: &'a Paired,
    pub m: usize,
    pub u: usize,
    /// Gauss points per simplex direction.
    pub order: usize,
}

impl<P: Plot> IntegratedForm<'_, P> {
    pub fn eval(&self, x: &Mat, c: &[f64], dirs: &[Vec<f64>]) -> Result<f64> {
        assert_eq!(dirs.len(), self.u);
        let frame = self.plot.frame(c, dirs)?;
        let mut total = 0.0;
        for (&(q, m, j), form) in &self.paired.components {
            if m != self.m || j != self.u + q {
                continue;
            }
            let space = &self.paired.spaces[q];
            let rule = SimplexRule::collapsed(q, self.order);
            let mut acc = 0.0;
            for (t, wt) in &rule.points {
                let s = sample_plot(self.plot, &frame, space, t, dirs.len())?;
                let mut v = s.t;
                v.extend(s.w);
                acc += wt * form.eval(x, &s.point, &v);
            }
            total += integration_sign(q, self.u) * acc;
        }
        Ok(total)
    }

    /// `(δ_G I)(X; dirs) = -I(X; X_W, dirs)`.
    pub fn delta_g(&self, x: &Mat, c: &[f64], dirs: &[Vec<f64>]) -> Result<f64> {
        let field = self.plot.action_field(c, x).ok_or_else(|| Error::Input("plot is not equivariant".into()))?;
        let mut all = vec![field];
        all.extend_from_slice(dirs);
        Ok(-self.eval(x, c, &all)?)
    }

    /// `dI` at `c` by finite differences in the chart.
    pub fn exterior_derivative(&self, x: &Mat, c: &[f64], dirs: &[Vec<f64>], cfg: FdConfig) -> f64 {
        chart_exterior_derivative(&AtX { form: self, x }, c, dirs, cfg)
    }
}

impl<P: Plot> Clone for IntegratedForm<'_, P> {
    fn clone(&self) -> Self {
        IntegratedForm { ..*self }
    }
}

/// An integrated form at a fixed Lie-algebra argument; failures evaluate to NaN.
struct AtX<'a, 'b, P: Plot> {
    form: &'a IntegratedForm<'b, P>,
    x: &'a Mat,
}

impl<P: Plot> ChartForm for AtX<'_, '_, P> {
    fn dim(&self) -> usize {
        self.form.plot.dim()
    }
    fn degree(&self) -> usize {
        self.form.u
    }
    fn eval(&self, c: &[f64], dirs: &[Vec<f64>]) -> f64 {
        self.form.eval(self.x, c, dirs).unwrap_or(f64::NAN)
    }
}

/// `I⟨Ω, c⟩` in output bidegree `(m, u)`.
pub fn integrate_over_plot<'a, P: Plot>(paired: &'a Paired, plot: &'a P, m: usize, u: usize, order: usize) -> IntegratedForm<'a, P> {
    IntegratedForm { plot, paired, m, u, order }
}

/// A constant function on `G^N`.
pub struct ConstantForm {
    pub factors: usize,
    pub value: f64,
}

impl GroupForm for ConstantForm {
    fn factors(&self) -> usize {
        self.factors
    }
    fn degree(&self) -> usize {
        0
    }
    fn x_degree(&self) -> usize {
        0
    }
    fn eval(&self, _x: &Mat, _p: &[Mat], _v: &[Tangent]) -> f64 {
        self.value
    }
}

/// `pr_1^* a ∧ pr_2^* b` on `G^{k + k'}`.
pub struct Wedge {
    pub a: Arc<dyn GroupForm>,
    pub b: Arc<dyn GroupForm>,
}

impl GroupForm for Wedge {
    fn factors(&self) -> usize {
        self.a.factors() + self.b.factors()
    }
    fn degree(&self) -> usize {
        self.a.degree() + self.b.degree()
    }
    fn x_degree(&self) -> usize {
        self.a.x_degree() + self.b.x_degree()
    }
    fn eval(&self, x: &Mat, p: &[Mat], v: &[Tangent]) -> f64 {
        let ka = self.a.factors();
        let (pa, pb) = p.split_at(ka);
        let da = self.a.degree();
        let n = v.len();
        let mut total = 0.0;
        // (da, n - da)-shuffles as subsets of slot indices
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != da {
                continue;
            }
            let mut va = Vec::with_capacity(da);
            let mut vb = Vec::with_capacity(n - da);
            let mut inversions = 0;
            for (i, t) in v.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    inversions += vb.len();
                    va.push(t[..ka].to_vec());
                } else {
                    vb.push(t[ka..].to_vec());
                }
            }
            total += parity(inversions) * self.a.eval(x, pa, &va) * self.b.eval(x, pb, &vb);
        }
        total
    }
}

/// Degree-wise wedge of two paired collections on `G^k` and `G^{k'}`.
pub fn wedge(a: Arc<dyn GroupForm>, b: Arc<dyn GroupForm>) -> Wedge {
    Wedge { a, b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclelift::surface_cycle;
    use crate::liegroup::forms::fd_derivative;
    use crate::liegroup::group::{exp, inv};
    use crate::liegroup::nerve::assemble_omega;
    use crate::liegroup::InvariantPolynomial;
    use crate::simplicial::builtin_surface;
    use num_complex::Complex64;

    #[test]
    fn evaluation_pushforward() {
        let k = builtin_surface(1);
        let h0 = RepSpace::new(&k, 0);
        assert_eq!(h0.len(), 2);
        let grp = MatrixGroup::su2();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p: Vec<Mat> = (0..2).map(|_| grp.random_element(&mut rng, 1.0)).collect();
        let v = random_tangent(&grp, &p, &mut rng);
        let x1: Word = "x1".parse().unwrap();
        let xx: Word = "x1*x1".parse().unwrap();
        let xi: Word = "x1^-1".parse().unwrap();
        let (q, w) = h0.evaluate(&[x1, xx.clone(), xi], &p, std::slice::from_ref(&v)).unwrap();
        assert!((&q[0] - &p[0]).norm() < 1e-15);
        assert!((&w[0][0] - &v[0]).norm() < 1e-15);
        assert!((&w[0][1] - (&v[0] * &p[0] + &p[0] * &v[0])).norm() < 1e-14);
        let gi = inv(&p[0]);
        assert!((&q[2] - &gi).norm() < 1e-14);
        assert!((&w[0][2] + &gi * &v[0] * &gi).norm() < 1e-14);
        // finite differences through a curve
        let xi_dir = inv(&p[0]) * &v[0];
        let fd = |s: f64| {
            let g = &p[0] * exp(&(&xi_dir * Complex64::new(s, 0.0)));
            let (q, _) = h0.evaluate(std::slice::from_ref(&xx), &[g, p[1].clone()], &[]).unwrap();
            q[0].clone()
        };
        let h = 1e-5;
        let num = (fd(h) - fd(-h)) / Complex64::new(2.0 * h, 0.0);
        assert!((num - &w[0][1]).norm() < 1e-8);
    }

    #[test]
    fn missing_generator_is_an_input_error() {
        let k = builtin_surface(1);
        let h0 = RepSpace::new(&k, 0);
        let w: Word = "r".parse().unwrap();
        assert!(matches!(h0.evaluation(&[w]), Err(Error::Input(_))));
    }

    #[test]
    fn signs() {
        let eps: Vec<f64> = (0..5).map(pairing_sign).collect();
        assert_eq!(eps, vec![1.0, -1.0, -1.0, 1.0, 1.0]);
        assert_eq!(integration_sign(0, 3), 1.0);
        assert_eq!(integration_sign(1, 1), 1.0);
        assert_eq!(integration_sign(1, 2), -1.0);
    }

    #[test]
    fn pairing_is_linear_in_the_chain() {
        let k = builtin_surface(1);
        let omega = assemble_omega(InvariantPolynomial::basic());
        let c = surface_cycle(&k).unwrap();
        let zero = pair(&k, &omega, &Chain::zero()).unwrap();
        assert!(zero.components.is_empty());
        let one = pair(&k, &omega, &c).unwrap();
        let two = pair(&k, &omega, &c.scale(&2.into())).unwrap();
        let grp = MatrixGroup::su2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (key, f) in &one.components {
            let g = two.component(key.0, key.1, key.2).unwrap();
            let p: Vec<Mat> = (0..f.factors()).map(|_| grp.random_element(&mut rng, 1.0)).collect();
            let v: Vec<Tangent> = (0..f.degree()).map(|_| random_tangent(&grp, &p, &mut rng)).collect();
            let x = grp.random_algebra(&mut rng, 1.0);
            assert!((g.eval(&x, &p, &v) - 2.0 * f.eval(&x, &p, &v)).abs() < 1e-12);
        }
        assert_eq!(one.total_degrees(), vec![2]);
    }

    #[test]
    fn omega_is_normalized() {
        // forms vanish on tuples with an identity entry and zero tangent there
        let grp = MatrixGroup::su2();
        let omega = assemble_omega(InvariantPolynomial::basic());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for comp in &omega.components {
            if comp.q < 2 {
                continue;
            }
            for slot in 0..comp.q {
                let mut p: Vec<Mat> = (0..comp.q).map(|_| grp.random_element(&mut rng, 1.0)).collect();
                p[slot] = grp.identity();
                let mut v: Vec<Tangent> = (0..comp.j).map(|_| random_tangent(&grp, &p, &mut rng)).collect();
                for t in &mut v {
                    t[slot] = Mat::zeros(2, 2);
                }
                let x = grp.random_algebra(&mut rng, 1.0);
                assert!(comp.eval(&x, &p, &v).abs() < 1e-12, "({}, {}, {})", comp.m, comp.j, comp.q);
            }
        }
    }

    #[test]
    fn wedge_unit_and_associativity() {
        let grp = MatrixGroup::su2();
        let omega = assemble_omega(InvariantPolynomial::basic());
        let lam: Arc<dyn GroupForm> = omega.component(0, 3, 1).unwrap().signed();
        let mu: Arc<dyn GroupForm> = omega.component(1, 1, 1).unwrap().signed();
        let one: Arc<dyn GroupForm> = Arc::new(ConstantForm { factors: 0, value: 1.0 });
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = grp.random_algebra(&mut rng, 1.0);
        let p: Vec<Mat> = (0..3).map(|_| grp.random_element(&mut rng, 1.0)).collect();
        let unit = wedge(lam.clone(), one.clone());
        let v3: Vec<Tangent> = (0..3).map(|_| random_tangent(&grp, &p[..1], &mut rng)).collect();
        assert!((unit.eval(&x, &p[..1], &v3) - lam.eval(&x, &p[..1], &v3)).abs() < 1e-14);
        assert_eq!((unit.degree(), unit.x_degree(), unit.factors()), (3, 0, 1));
        let ab_c = wedge(Arc::new(wedge(mu.clone(), mu.clone())), mu.clone());
        let a_bc = wedge(mu.clone(), Arc::new(wedge(mu.clone(), mu.clone())));
        assert_eq!((ab_c.degree(), ab_c.x_degree(), ab_c.factors()), (3, 3, 3));
        let v: Vec<Tangent> = (0..3).map(|_| random_tangent(&grp, &p, &mut rng)).collect();
        let l = ab_c.eval(&x, &p, &v);
        assert!((l - a_bc.eval(&x, &p, &v)).abs() < 1e-8 * (1.0 + l.abs()));
        assert!(l.abs() > 1e-8);
    }

    #[test]
    fn surface_pairing_is_closed() {
        let k = builtin_surface(1);
        let grp = MatrixGroup::su2();
        let omega = assemble_omega(InvariantPolynomial::basic());
        let c = surface_cycle(&k).unwrap();
        let rep = differential_identity_check(&k, &grp, &omega, &c, 2, 11, FdConfig::default()).unwrap();
        assert!(rep.max_residual() < 1e-6, "{rep:?}");
        assert!(rep.max_lhs() < 1e-6);
        // non-cycle: drop the bar-degree-2 part
        let top = c.component(1, 1);
        let rep = differential_identity_check(&k, &grp, &omega, &top, 2, 12, FdConfig::default()).unwrap();
        assert!(rep.max_residual() < 1e-6, "{rep:?}");
        assert!(rep.max_rhs() > 1e-3);
    }

    /// `W = ℝ` with `F_1(s; t)(r) = exp(t s X_0)` on the genus-0 surface
    /// group; constant in `t` when `s = 0`.
    struct LinePlot {
        x0: Mat,
    }

    impl Plot for LinePlot {
        type Frame = (f64, Vec<f64>);
        fn dim(&self) -> usize {
            1
        }
        fn frame(&self, c: &[f64], dirs: &[Vec<f64>]) -> Result<Self::Frame> {
            Ok((c[0], dirs.iter().map(|d| d[0]).collect()))
        }
        fn base_value(&self, f: &Self::Frame, name: &str, bary: &[f64], bary_dirs: &[Vec<f64>]) -> Result<PlotValue> {
            assert_eq!(name, "r");
            let t = bary[1];
            let a = &self.x0 * Complex64::new(f.0, 0.0);
            let value = exp(&(&a * Complex64::new(t, 0.0)));
            let w = f.1.iter().map(|ds| &self.x0 * &value * Complex64::new(t * ds, 0.0)).collect();
            let tt = bary_dirs.iter().map(|d| &a * &value * Complex64::new(d[1], 0.0)).collect();
            Ok(PlotValue { value, w, t: tt })
        }
    }

    #[test]
    fn line_plot_integrates_the_one_layer() {
        // genus 0: the cycle is [r] alone, paired with Q^{2,1,1} gives a
        // degree-0 function of X on W after integration over Δ_1
        let k = builtin_surface(0);
        let omega = assemble_omega(InvariantPolynomial::basic());
        let c = surface_cycle(&k).unwrap();
        let paired = pair(&k, &omega, &c).unwrap();
        let grp = MatrixGroup::su2();
        let x0 = grp.algebra_element(&[0.3, -0.2, 0.5]);
        let plot = LinePlot { x0: x0.clone() };
        let mu = integrate_over_plot(&paired, &plot, 1, 0, 8);
        let x = grp.algebra_element(&[0.1, 0.4, -0.3]);
        assert!(mu.eval(&x, &[0.0], &[]).unwrap().abs() < 1e-15);
        // degree-2 part on a 1-dimensional W is a 2-form: zero by dimension
        let omega_c = integrate_over_plot(&paired, &plot, 0, 2, 8);
        let e = vec![vec![1.0]; 2];
        assert!(omega_c.eval(&x, &[0.4], &e).unwrap().abs() < 1e-14);
        // μ is linear in X and smooth in s
        let a = mu.eval(&x, &[0.7], &[]).unwrap();
        let b = mu.eval(&(&x * Complex64::new(2.0, 0.0)), &[0.7], &[]).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-14);
        let d = fd_derivative(|s| mu.eval(&x, &[0.7 + s], &[]).unwrap(), FdConfig::default());
        assert!((mu.exterior_derivative(&x, &[0.7], &[vec![1.0]], FdConfig::default()) - d).abs() < 1e-12);
    }
}
