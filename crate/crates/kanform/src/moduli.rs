//! Extended moduli spaces of surfaces, the Kirillov form on loop-group orbits,
//! the Chern–Simons function of 3-complexes and the `U(n)` generator catalog.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::{boundary_bar, Chain};
use crate::cyclelift::{surface_cycle_with_certificates, threefold_cycle, LiftMethod, LiftOptions};
use crate::error::{Error, Result};
use crate::liegroup::forms::{exterior_derivative, fd_derivative, random_tangent, FdConfig, GroupForm, Tangent, WordMap};
use crate::liegroup::group::{ad, dexp_solve, exp, exp_with_derivative, inv, real_inner, I};
use crate::liegroup::nerve::{assemble_omega, Omega};
use crate::liegroup::quadrature::gauss_legendre;
use crate::liegroup::{Family, GroupSpec, InvariantPolynomial, Mat, MatrixGroup};
use crate::pairing::{differential_identity_check, integrate_over_plot, pair, IntegratedForm, Paired, Plot, PlotValue, RepSpace};
use crate::simplicial::{builtin_surface, FreeSimplicialGroup};
use crate::words::Word;

/// Gauss points per simplex direction for plot integrals.
pub const DEFAULT_PLOT_ORDER: usize = 10;

/// Gauss points per direction for the Chern–Simons integrand, whose sphere
/// map is rational in the simplex coordinates.
pub const CS_PLOT_ORDER: usize = 40;

/// Distance kept from the singular set of `exp` on the regular locus.
pub const REGULAR_MARGIN: f64 = 1e-3;

fn c64(s: f64) -> Complex64 {
    Complex64::new(s, 0.0)
}

/// Eigenvalues `λ_k` of the Hermitian matrix `-iZ`, for `Z` in the algebra.
fn spectrum(z: &Mat) -> Vec<f64> {
    let h = z * (-I);
    let herm = (&h + h.adjoint()) * c64(0.5);
    // real symmetric embedding of the Hermitian matrix
    let n = herm.nrows();
    let real = nalgebra::DMatrix::<f64>::from_fn(2 * n, 2 * n, |a, b| {
        let z = herm[(a % n, b % n)];
        match (a < n, b < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut ev: Vec<f64> = real.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.into_iter().step_by(2).collect()
}

/// Whether `d exp_Z` is invertible with margin: no eigenvalue of `ad_Z` in
/// `2πi(ℤ \ {0})` within `margin`.
pub fn is_regular(z: &Mat, margin: f64) -> bool {
    let ev = spectrum(z);
    for a in &ev {
        for b in &ev {
            let d = (a - b).abs();
            let k = (d / (2.0 * PI)).round();
            if k >= 1.0 && (d - 2.0 * PI * k).abs() < margin {
                return false;
            }
        }
    }
    true
}

/// A point `(w, Z)` with `exp(Z) = r(w)`; `w` is ordered as the generators
/// of `K_0`.
#[derive(Clone, Debug)]
pub struct ModuliPoint {
    pub w: Vec<Mat>,
    pub z: Mat,
}

/// `M = {(w, Z) ∈ G^{2ℓ} × O : exp(Z) = r(w)}` for the genus-`ℓ` surface.
#[derive(Clone)]
pub struct ExtendedModuli {
    pub group: MatrixGroup,
    pub genus: usize,
    pub kan: FreeSimplicialGroup,
    h0: RepSpace,
    relator: WordMap,
}

impl ExtendedModuli {
    pub fn new(group: MatrixGroup, genus: usize) -> Result<Self> {
        let kan = builtin_surface(genus);
        Self::from_kan(group, kan)
    }

    /// Any one-relator complex with a degree-1 generator `r`, `d_1 r = 1`.
    pub fn from_kan(group: MatrixGroup, kan: FreeSimplicialGroup) -> Result<Self> {
        let r: Word = "r".parse()?;
        kan.check_word(1, &r)?;
        if !kan.apply_face(1, 1, &r)?.is_identity() {
            return Err(Error::Input("relator generator must have d_1 r = 1".into()));
        }
        let rel = kan.apply_face(1, 0, &r)?;
        if !rel.exponent_sums().is_zero() {
            return Err(Error::Input(format!("relator {rel} has nonzero exponent sums")));
        }
        let h0 = RepSpace::new(&kan, 0);
        let relator = h0.evaluation(&[rel])?;
        let genus = h0.len() / 2;
        Ok(ExtendedModuli { group, genus, kan, h0, relator })
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.h0.generators().iter().map(|g| g.to_string()).collect()
    }

    pub fn relator(&self, w: &[Mat]) -> Mat {
        if w.is_empty() {
            return self.group.identity();
        }
        self.relator.apply(w).remove(0)
    }

    fn relator_push(&self, w: &[Mat], dw: &Tangent) -> Mat {
        if w.is_empty() {
            return Mat::zeros(self.group.n(), self.group.n());
        }
        self.relator.push(w, dw).remove(0)
    }

    pub fn constraint_residual(&self, p: &ModuliPoint) -> f64 {
        (exp(&p.z) - self.relator(&p.w)).norm()
    }

    /// Newton projection `Z = log(r(w))` near `z0`, rejecting points near the
    /// singular set of `exp`.
    pub fn project(&self, w: Vec<Mat>, z0: &Mat) -> Result<ModuliPoint> {
        let z = crate::liegroup::group::log_near(&self.relator(&w), z0, &self.group)?;
        if !is_regular(&z, REGULAR_MARGIN) {
            return Err(Error::OffConstraint(self.constraint_residual(&ModuliPoint { w, z })));
        }
        Ok(ModuliPoint { w, z })
    }

    /// A point with `w` of size about `scale` and `Z` near 0.
    pub fn random_point<R: Rng>(&self, rng: &mut R, scale: f64) -> Result<ModuliPoint> {
        let w = (0..self.h0.len()).map(|_| self.group.random_element(rng, scale)).collect();
        self.project(w, &Mat::zeros(self.group.n(), self.group.n()))
    }

    pub fn conjugate(&self, p: &ModuliPoint, g: &Mat) -> ModuliPoint {
        ModuliPoint { w: p.w.iter().map(|a| ad(g, a)).collect(), z: ad(g, &p.z) }
    }

    /// `δZ` with `d exp_Z(δZ) = dr(w)[δw]`.
    pub fn tangent(&self, p: &ModuliPoint, dw: &Tangent) -> Result<Mat> {
        let target = self.relator_push(&p.w, dw);
        Ok(self.group.algebra_element(&dexp_solve(&p.z, &target, &self.group)?))
    }

    /// Residual of the linearized constraint.
    pub fn tangent_residual(&self, p: &ModuliPoint, dw: &Tangent, dz: &Mat) -> f64 {
        (exp_with_derivative(&p.z, dz).1 - self.relator_push(&p.w, dw)).norm()
    }

    /// The plot `W → |H|` in an exponential chart of `w` around `base`:
    /// `F_0 = w`, `F_1(t)(r) = exp(t Z)`.
    pub fn plot(&self, base: ModuliPoint) -> ModuliPlot<'_> {
        ModuliPlot { moduli: self, base }
    }
}

/// The moduli plot on a chart centred at `base`.
pub struct ModuliPlot<'a> {
    pub moduli: &'a ExtendedModuli,
    pub base: ModuliPoint,
}

pub struct ModuliFrame {
    w: Vec<Mat>,
    dw: Vec<Tangent>,
    z: Mat,
    dz: Vec<Mat>,
}

impl ModuliPlot<'_> {
    fn chart_point(&self, c: &[f64], dirs: &[Vec<f64>]) -> (Vec<Mat>, Vec<Tangent>) {
        let g = &self.moduli.group;
        let d = g.dim();
        let mut w = Vec::with_capacity(self.base.w.len());
        let mut dw = vec![Vec::with_capacity(self.base.w.len()); dirs.len()];
        for (a, b) in self.base.w.iter().enumerate() {
            let xa = g.algebra_element(&c[a * d..(a + 1) * d]);
            w.push(b * exp(&xa));
            for (slot, dir) in dw.iter_mut().zip(dirs) {
                let e = g.algebra_element(&dir[a * d..(a + 1) * d]);
                slot.push(b * exp_with_derivative(&xa, &e).1);
            }
        }
        (w, dw)
    }

    /// The moduli point at chart coordinates `c`.
    pub fn point(&self, c: &[f64]) -> Result<ModuliPoint> {
        let (w, _) = self.chart_point(c, &[]);
        self.moduli.project(w, &self.base.z)
    }

    /// Chart coordinates at `c = 0` of a tangent `δw`.
    pub fn coordinates(&self, dw: &Tangent) -> Vec<f64> {
        let g = &self.moduli.group;
        dw.iter().zip(&self.base.w).flat_map(|(v, b)| g.coordinates(&(inv(b) * v))).collect()
    }
}

impl Plot for ModuliPlot<'_> {
    type Frame = ModuliFrame;

    fn dim(&self) -> usize {
        self.base.w.len() * self.moduli.group.dim()
    }

    fn frame(&self, c: &[f64], dirs: &[Vec<f64>]) -> Result<ModuliFrame> {
        let (w, dw) = self.chart_point(c, dirs);
        let p = self.moduli.project(w, &self.base.z)?;
        let dz = dw.iter().map(|t| self.moduli.tangent(&p, t)).collect::<Result<_>>()?;
        Ok(ModuliFrame { w: p.w, dw, z: p.z, dz })
    }

    fn base_value(&self, f: &ModuliFrame, name: &str, bary: &[f64], bary_dirs: &[Vec<f64>]) -> Result<PlotValue> {
        let n = self.moduli.group.n();
        if name == "r" && bary.len() == 2 {
            let t = bary[1];
            let tz = &f.z * c64(t);
            let value = exp(&tz);
            let w = f.dz.iter().map(|dz| exp_with_derivative(&tz, &(dz * c64(t))).1).collect();
            let tt = bary_dirs.iter().map(|b| &f.z * &value * c64(b[1])).collect();
            return Ok(PlotValue { value, w, t: tt });
        }
        let a = self
            .moduli
            .h0
            .generators()
            .iter()
            .position(|g| g.base() == name)
            .filter(|_| bary.len() == 1)
            .ok_or_else(|| Error::Input(format!("moduli plot has no value for `{name}` in degree {}", bary.len() - 1)))?;
        Ok(PlotValue { value: f.w[a].clone(), w: f.dw.iter().map(|t| t[a].clone()).collect(), t: vec![Mat::zeros(n, n); bary_dirs.len()] })
    }

    fn action_field(&self, c: &[f64], x: &Mat) -> Option<Vec<f64>> {
        let g = &self.moduli.group;
        let d = g.dim();
        let mut out = Vec::with_capacity(self.dim());
        for (a, b) in self.base.w.iter().enumerate() {
            let xa = g.algebra_element(&c[a * d..(a + 1) * d]);
            let w = b * exp(&xa);
            let target = inv(b) * (x * &w - &w * x);
            out.extend(dexp_solve(&xa, &target, g).ok()?);
        }
        Some(out)
    }
}

/// The closed equivariant 2-form `ω_c + μ♯ = I⟨Ω_Q, c⟩` on `M`.
pub struct SurfaceForms {
    pub moduli: ExtendedModuli,
    pub omega: Omega,
    pub cycle: Chain,
    pub paired: Paired,
    pub order: usize,
}

impl SurfaceForms {
    pub fn new(moduli: ExtendedModuli, poly: InvariantPolynomial, opts: LiftOptions) -> Result<Self> {
        let cycle = surface_cycle_with_certificates(&moduli.kan, opts)?.cycle;
        Self::with_cycle(moduli, poly, cycle)
    }

    pub fn with_cycle(moduli: ExtendedModuli, poly: InvariantPolynomial, cycle: Chain) -> Result<Self> {
        let omega = assemble_omega(poly);
        let paired = pair(&moduli.kan, &omega, &cycle)?;
        Ok(SurfaceForms { moduli, omega, cycle, paired, order: DEFAULT_PLOT_ORDER })
    }

    pub fn omega_c<'a>(&'a self, plot: &'a ModuliPlot<'a>) -> IntegratedForm<'a, ModuliPlot<'a>> {
        integrate_over_plot(&self.paired, plot, 0, 2, self.order)
    }

    pub fn mu_sharp<'a>(&'a self, plot: &'a ModuliPlot<'a>) -> IntegratedForm<'a, ModuliPlot<'a>> {
        integrate_over_plot(&self.paired, plot, 1, 0, self.order)
    }

    /// `μ(p) ∈ g` with `μ♯(X) = Re tr(μ^* X)`.
    pub fn moment(&self, p: &ModuliPoint) -> Result<Mat> {
        let plot = self.moduli.plot(p.clone());
        let mu = self.mu_sharp(&plot);
        let zero = vec![0.0; plot.dim()];
        let g = &self.moduli.group;
        let values = g.basis().iter().map(|b| mu.eval(b, &zero, &[])).collect::<Result<Vec<_>>>()?;
        // μ = Σ c_a e_a with Re tr(e_b^* μ) = values_b
        let gram = nalgebra::DMatrix::from_fn(g.dim(), g.dim(), |a, b| real_inner(&g.basis()[a], &g.basis()[b]));
        let coeffs =
            gram.lu().solve(&nalgebra::DVector::from_vec(values)).ok_or_else(|| Error::Numerical("singular Gram matrix".into()))?;
        Ok(g.algebra_element(coeffs.as_slice()))
    }
}

/// Residuals of the closedness and momentum identities at chart points.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceReport {
    pub samples: usize,
    pub constraint_residual: f64,
    pub tangent_residual: f64,
    /// `max |dω_c|`.
    pub closedness: f64,
    /// `max |δ_G ω_c - dμ♯|`.
    pub momentum_plus: f64,
    /// `max |δ_G ω_c + dμ♯|`.
    pub momentum_minus: f64,
    /// Sign `s` with `δ_G ω_c = s dμ♯`, from the smaller residual.
    pub realized_sign: i32,
    pub max_dmu: f64,
    /// `max |ω_c(g·p) - ω_c(p)|` and `max |μ(g·p) - Ad_g μ(p)|`.
    pub invariance: f64,
    pub rank: Vec<usize>,
}

fn random_dirs<R: Rng>(rng: &mut R, dim: usize, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect()
}

/// Rank of `ω_c` at the chart centre, from its Gram matrix on coordinate vectors.
fn two_form_rank(form: &IntegratedForm<'_, ModuliPlot<'_>>, dim: usize) -> Result<usize> {
    let zero = vec![0.0; dim];
    let x = Mat::zeros(form.plot.moduli.group.n(), form.plot.moduli.group.n());
    let e = |a: usize| {
        let mut v = vec![0.0; dim];
        v[a] = 1.0;
        v
    };
    let mut m = nalgebra::DMatrix::<f64>::zeros(dim, dim);
    for a in 0..dim {
        for b in a + 1..dim {
            let v = form.eval(&x, &zero, &[e(a), e(b)])?;
            m[(a, b)] = v;
            m[(b, a)] = -v;
        }
    }
    let scale = m.norm().max(1e-300);
    Ok(m.svd(false, false).singular_values.iter().filter(|s| **s > 1e-8 * scale).count())
}

/// Checks `dω_c = 0`, the momentum identity and invariance at `samples`
/// random chart centres.
pub fn verify_surface(forms: &SurfaceForms, samples: usize, seed: u64, cfg: FdConfig) -> Result<SurfaceReport> {
    let m = &forms.moduli;
    let g = &m.group;
    let rows: Vec<[f64; 8]> = (0..samples)
        .into_par_iter()
        .map(|s| -> Result<[f64; 8]> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s as u64));
            let p = m.random_point(&mut rng, 0.6)?;
            let plot = m.plot(p.clone());
            let dim = plot.dim();
            let zero = vec![0.0; dim];
            let om = forms.omega_c(&plot);
            let mu = forms.mu_sharp(&plot);
            let x = g.random_algebra(&mut rng, 1.0);
            let dirs3 = random_dirs(&mut rng, dim, 3);
            let closed = om.exterior_derivative(&x, &zero, &dirs3, cfg).abs();
            let u = &dirs3[..1];
            let dg = om.delta_g(&x, &zero, u)?;
            let dmu = mu.exterior_derivative(&x, &zero, u, cfg);
            // tangent constraint
            let frame = plot.frame(&zero, u)?;
            let dw: Tangent = frame.dw[0].clone();
            let tres = m.tangent_residual(&p, &dw, &frame.dz[0]);
            // invariance under conjugation
            let h = g.random_element(&mut rng, 1.0);
            let pc = m.conjugate(&p, &h);
            let plot_c = m.plot(pc.clone());
            let tangents: Vec<Tangent> = dirs3[..2]
                .iter()
                .map(|d| plot.frame(&zero, std::slice::from_ref(d)).map(|f| f.dw[0].iter().map(|v| ad(&h, v)).collect()))
                .collect::<Result<_>>()?;
            let dirs_c: Vec<Vec<f64>> = tangents.iter().map(|t| plot_c.coordinates(t)).collect();
            let om_c = forms.omega_c(&plot_c);
            let inv1 = (om_c.eval(&x, &zero, &dirs_c)? - om.eval(&x, &zero, &dirs3[..2])?).abs();
            let inv2 = (forms.moment(&pc)? - ad(&h, &forms.moment(&p)?)).norm();
            Ok([m.constraint_residual(&p), tres, closed, (dg - dmu).abs(), (dg + dmu).abs(), dmu.abs(), inv1.max(inv2), 0.0])
        })
        .collect::<Result<_>>()?;
    let col = |i: usize| rows.iter().map(|r| r[i]).fold(0.0, f64::max);
    let rank = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let p = m.random_point(&mut rng, 0.6)?;
        let plot = m.plot(p);
        vec![two_form_rank(&forms.omega_c(&plot), plot.dim())?]
    };
    let (plus, minus) = (col(3), col(4));
    Ok(SurfaceReport {
        samples,
        constraint_residual: col(0),
        tangent_residual: col(1),
        closedness: col(2),
        momentum_plus: plus,
        momentum_minus: minus,
        realized_sign: if plus <= minus { 1 } else { -1 },
        max_dmu: col(5),
        invariance: col(6),
        rank,
    })
}

/// Two lifts of the bar-degree-2 column and the spread of the difference of
/// their moment maps across chart points.
#[derive(Clone, Debug, Serialize)]
pub struct LiftShiftReport {
    pub lifts_differ: bool,
    /// Mean of `μ_1 - μ_2` over the sample (algebra coordinates).
    pub shift: Vec<f64>,
    /// `max |μ_1 - μ_2 - shift|`.
    pub spread: f64,
    /// Same for the moment map with the bar-degree-2 column dropped.
    pub dropped_spread: f64,
}

/// Compares `μ` for the telescoping lift, a second lift differing by a bar
/// boundary, and the truncated cycle.
pub fn lift_shift(moduli: &ExtendedModuli, poly: InvariantPolynomial, samples: usize, seed: u64) -> Result<LiftShiftReport> {
    let first =
        surface_cycle_with_certificates(&moduli.kan, LiftOptions { method: Some(LiftMethod::Telescoping), ..LiftOptions::default() })?
            .cycle;
    let mut second =
        surface_cycle_with_certificates(&moduli.kan, LiftOptions { method: Some(LiftMethod::Linear), ..LiftOptions::default() })?.cycle;
    if second == first {
        let gens = moduli.h0.generators();
        let a = Word::generator(gens[0].clone());
        let b = Word::generator(gens[gens.len() - 1].clone());
        let extra = boundary_bar(&Chain::single(0, vec![a.clone(), b, a.invert()], 1));
        second = second.plus(&extra);
    }
    let dropped = first.component(1, 1);
    let f1 = SurfaceForms::with_cycle(moduli.clone(), poly, first.clone())?;
    let f2 = SurfaceForms::with_cycle(moduli.clone(), poly, second.clone())?;
    let f3 = SurfaceForms::with_cycle(moduli.clone(), poly, dropped)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = &moduli.group;
    let mut diffs = Vec::new();
    let mut drops = Vec::new();
    for _ in 0..samples {
        let p = moduli.random_point(&mut rng, 0.6)?;
        let m1 = f1.moment(&p)?;
        diffs.push(g.coordinates(&(&m1 - f2.moment(&p)?)));
        drops.push(g.coordinates(&(&m1 - f3.moment(&p)?)));
    }
    let spread = |v: &[Vec<f64>]| -> (Vec<f64>, f64) {
        let d = g.dim();
        let mean: Vec<f64> = (0..d).map(|a| v.iter().map(|x| x[a]).sum::<f64>() / v.len().max(1) as f64).collect();
        let s = v.iter().map(|x| x.iter().zip(&mean).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)).fold(0.0, f64::max);
        (mean, s)
    };
    let (shift, s1) = spread(&diffs);
    let (_, s2) = spread(&drops);
    Ok(LiftShiftReport { lifts_differ: first != second, shift, spread: s1, dropped_spread: s2 })
}

/// The genus-0 orbit plot `h ↦ (Z = Ad_h X_0)`, `F_1(t)(r) = exp(t Z)`.
pub struct OrbitPlot<'a> {
    pub group: &'a MatrixGroup,
    pub x0: Mat,
}

pub struct OrbitFrame {
    z: Mat,
    dz: Vec<Mat>,
}

impl Plot for OrbitPlot<'_> {
    type Frame = OrbitFrame;

    fn dim(&self) -> usize {
        self.group.dim()
    }

    fn frame(&self, c: &[f64], dirs: &[Vec<f64>]) -> Result<OrbitFrame> {
        let a = self.group.algebra_element(c);
        let h = exp(&a);
        let hi = inv(&h);
        let z = &h * &self.x0 * &hi;
        let residual = (exp(&z) - self.group.identity()).norm();
        if residual > 1e-9 {
            return Err(Error::OffConstraint(residual));
        }
        let dz = dirs
            .iter()
            .map(|d| {
                let dh = exp_with_derivative(&a, &self.group.algebra_element(d)).1;
                &dh * &self.x0 * &hi - &z * &dh * &hi
            })
            .collect();
        Ok(OrbitFrame { z, dz })
    }

    fn base_value(&self, f: &OrbitFrame, name: &str, bary: &[f64], bary_dirs: &[Vec<f64>]) -> Result<PlotValue> {
        if name != "r" || bary.len() != 2 {
            return Err(Error::Input(format!("orbit plot has no value for `{name}`")));
        }
        let t = bary[1];
        let tz = &f.z * c64(t);
        let value = exp(&tz);
        let w = f.dz.iter().map(|dz| exp_with_derivative(&tz, &(dz * c64(t))).1).collect();
        let tt = bary_dirs.iter().map(|b| &f.z * &value * c64(b[1])).collect();
        Ok(PlotValue { value, w, t: tt })
    }

    fn action_field(&self, c: &[f64], x: &Mat) -> Option<Vec<f64>> {
        let a = self.group.algebra_element(c);
        dexp_solve(&a, &(x * exp(&a)), self.group).ok()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KirillovReport {
    pub samples: usize,
    /// Mean of `ω([a, Z], [b, Z]) / Q(Z, [a, b])`.
    pub constant: f64,
    /// Standard deviation over mean of the ratios.
    pub relative_spread: f64,
    pub max_abs_form: f64,
    /// Relative spread of the ratio against `⟨v, [a, b]⟩` for a fixed `v`.
    pub control_spread: f64,
}

fn mean_and_spread(v: &[f64]) -> (f64, f64) {
    let n = v.len().max(1) as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt() / mean.abs().max(1e-300))
}

/// Restricts the genus-0 2-form to the conjugation orbit of `X_0`
/// (`exp X_0 = e`) at random orbit points `Z = Ad_h X_0` and compares
/// `ω([a, Z], [b, Z])` with `Q(Z, [a, b])`. The spread is NaN when the KKS
/// form vanishes identically.
pub fn kirillov_check(group: &MatrixGroup, x0: &Mat, poly: InvariantPolynomial, samples: usize, seed: u64) -> Result<KirillovReport> {
    let residual = (exp(x0) - group.identity()).norm();
    if residual > 1e-9 {
        return Err(Error::OffConstraint(residual));
    }
    let kan = builtin_surface(0);
    let forms = SurfaceForms::new(ExtendedModuli::from_kan(group.clone(), kan)?, poly, LiftOptions::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = vec![0.0; group.dim()];
    let zx = Mat::zeros(group.n(), group.n());
    let (mut ratios, mut control, mut max_abs) = (Vec::new(), Vec::new(), 0.0f64);
    // control: B(a, b) = <v, [a, b]> for a fixed v off the orbit point
    let v: Vec<f64> = (0..group.dim()).map(|a| 1.0 / (1.0 + a as f64)).collect();
    for _ in 0..samples {
        let h = group.random_element(&mut rng, 1.0);
        let xs = ad(&h, x0);
        let plot = OrbitPlot { group, x0: xs.clone() };
        let om = integrate_over_plot(&forms.paired, &plot, 0, 2, 2 * DEFAULT_PLOT_ORDER);
        let da: Vec<f64> = (0..group.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let db: Vec<f64> = (0..group.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let val = om.eval(&zx, &zero, &[da.clone(), db.clone()])?;
        max_abs = max_abs.max(val.abs());
        let (a, b) = (group.algebra_element(&da), group.algebra_element(&db));
        let br = &a * &b - &b * &a;
        let kks = poly.eval_real(&[&xs, &br]);
        if kks.abs() > 1e-12 {
            ratios.push(val / kks);
        }
        let skew: f64 = group.coordinates(&br).iter().zip(&v).map(|(p, q)| p * q).sum();
        if skew.abs() > 1e-12 {
            control.push(val / skew);
        }
    }
    let (constant, relative_spread) = if ratios.is_empty() { (0.0, f64::NAN) } else { mean_and_spread(&ratios) };
    let control_spread = if control.is_empty() { 0.0 } else { mean_and_spread(&control).1 };
    Ok(KirillovReport { samples, constant, relative_spread, max_abs_form: max_abs, control_spread })
}

/// A real number modulo 1, represented in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CircleValue(f64);

impl CircleValue {
    pub fn new(x: f64) -> Self {
        let r = x.rem_euclid(1.0);
        CircleValue(if r >= 1.0 { 0.0 } else { r })
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// `su(2)` matrices `iσ_1, iσ_2, iσ_3`.
fn pauli() -> [Mat; 3] {
    let z = c64(0.0);
    let o = c64(1.0);
    [Mat::from_row_slice(2, 2, &[z, I, I, z]), Mat::from_row_slice(2, 2, &[z, o, -o, z]), Mat::from_row_slice(2, 2, &[I, z, z, -I])]
}

/// A smooth map `Δ_2 → S^2` of degree one sending `∂Δ_2` to `(0, 0, 1)`,
/// with its derivative along barycentric directions.
fn sphere_map(t: &[f64], dirs: &[Vec<f64>]) -> ([f64; 3], Vec<[f64; 3]>) {
    let s3 = 3f64.sqrt() / 2.0;
    let verts = [(1.0, 0.0), (-0.5, s3), (-0.5, -s3)];
    let plane = |u: &[f64]| -> (f64, f64) { (0..3).fold((0.0, 0.0), |(x, y), i| (x + u[i] * verts[i].0, y + u[i] * verts[i].1)) };
    let (wx, wy) = plane(t);
    let f = 27.0 * t[0] * t[1] * t[2];
    let num = [2.0 * f * wx, 2.0 * f * wy, wx * wx + wy * wy - f * f];
    let den = wx * wx + wy * wy + f * f;
    let n = [num[0] / den, num[1] / den, num[2] / den];
    let dn = dirs
        .iter()
        .map(|b| {
            let (dx, dy) = plane(b);
            let df = 27.0 * (b[0] * t[1] * t[2] + t[0] * b[1] * t[2] + t[0] * t[1] * b[2]);
            let dnum = [2.0 * (df * wx + f * dx), 2.0 * (df * wy + f * dy), 2.0 * (wx * dx + wy * dy) - 2.0 * f * df];
            let dden = 2.0 * (wx * dx + wy * dy) + 2.0 * f * df;
            [(dnum[0] - n[0] * dden) / den, (dnum[1] - n[1] * dden) / den, (dnum[2] - n[2] * dden) / den]
        })
        .collect();
    (n, dn)
}

/// Degree-`k` sweep of the minimal 3-sphere over `W = S^1 × SU(2)`:
/// `F_2(s, h; t)(σ) = h exp(kπ s N(t)) exp(-kπ s N_0) h^{-1}` with
/// `N(t) = n(t)·iσ`. Chart coordinates are `(s, a)` with `h = exp(a)`.
pub struct SweepPlot {
    pub group: MatrixGroup,
    pub winding: i32,
}

pub struct SweepFrame {
    s: f64,
    ds: Vec<f64>,
    h: Mat,
    dh: Vec<Mat>,
}

impl SweepPlot {
    pub fn new(winding: i32) -> Self {
        SweepPlot { group: MatrixGroup::su2(), winding }
    }

    fn n_matrix(n: &[f64; 3]) -> Mat {
        let p = pauli();
        &p[0] * c64(n[0]) + &p[1] * c64(n[1]) + &p[2] * c64(n[2])
    }
}

impl Plot for SweepPlot {
    type Frame = SweepFrame;

    fn dim(&self) -> usize {
        1 + self.group.dim()
    }

    fn frame(&self, c: &[f64], dirs: &[Vec<f64>]) -> Result<SweepFrame> {
        let a = self.group.algebra_element(&c[1..]);
        let h = exp(&a);
        let dh = dirs.iter().map(|d| exp_with_derivative(&a, &self.group.algebra_element(&d[1..])).1).collect();
        Ok(SweepFrame { s: c[0], ds: dirs.iter().map(|d| d[0]).collect(), h, dh })
    }

    fn base_value(&self, f: &SweepFrame, name: &str, bary: &[f64], bary_dirs: &[Vec<f64>]) -> Result<PlotValue> {
        if name != "sigma" || bary.len() != 3 {
            return Err(Error::Input(format!("sweep plot has no value for `{name}`")));
        }
        let k = self.winding as f64 * PI;
        let (n, dn) = sphere_map(bary, bary_dirs);
        let nm = Self::n_matrix(&n);
        let n0 = Self::n_matrix(&[0.0, 0.0, 1.0]);
        let arg = &nm * c64(k * f.s);
        let a = exp(&arg);
        let b = exp(&(&n0 * c64(-k * f.s)));
        let phi = &a * &b;
        let hi = inv(&f.h);
        let value = &f.h * &phi * &hi;
        let conj = |dphi: &Mat| &f.h * dphi * &hi;
        let w =
            f.ds.iter()
                .zip(&f.dh)
                .map(|(ds, dh)| {
                    let dphi = (&nm * &a * &b - &a * &n0 * &b) * c64(k * ds);
                    conj(&dphi) + dh * &phi * &hi - &value * dh * &hi
                })
                .collect();
        let t = dn
            .iter()
            .map(|d| {
                let da = exp_with_derivative(&arg, &(Self::n_matrix(d) * c64(k * f.s))).1;
                conj(&(da * &b))
            })
            .collect();
        Ok(PlotValue { value, w, t })
    }

    fn action_field(&self, c: &[f64], x: &Mat) -> Option<Vec<f64>> {
        let a = self.group.algebra_element(&c[1..]);
        let mut out = vec![0.0];
        out.extend(dexp_solve(&a, &(x * exp(&a)), &self.group).ok()?);
        Some(out)
    }
}

/// `ψ = I⟨Ω_Q, c⟩` for a 3-complex cycle and a plot.
pub struct ChernSimons<'a, P: Plot> {
    pub paired: Paired,
    pub plot: &'a P,
    pub order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChernSimonsReport {
    pub period: f64,
    pub nearest_integer: i64,
    pub distance: f64,
    pub circle_value: CircleValue,
    pub closedness: f64,
    pub delta_g: f64,
    /// `|period(g·loop) - period(loop)|`.
    pub equivariance: f64,
}

impl<'a, P: Plot> ChernSimons<'a, P> {
    pub fn new(kan: &FreeSimplicialGroup, poly: InvariantPolynomial, plot: &'a P) -> Result<Self> {
        let cycle = threefold_cycle(kan)?;
        let omega = assemble_omega(poly);
        Ok(ChernSimons { paired: pair(kan, &omega, &cycle)?, plot, order: CS_PLOT_ORDER })
    }

    pub fn psi(&self) -> IntegratedForm<'_, P> {
        integrate_over_plot(&self.paired, self.plot, 0, 1, self.order)
    }

    /// `∫ ψ` along the chart path `s ↦ γ(s)`, `s ∈ [0, 1]`, with `n` Gauss points.
    pub fn path_integral(&self, path: &dyn Fn(f64) -> (Vec<f64>, Vec<f64>), n: usize, x: &Mat) -> Result<f64> {
        let psi = self.psi();
        gauss_legendre(n)
            .iter()
            .map(|&(s, w)| {
                let (c, dc) = path(s);
                Ok(w * psi.eval(x, &c, &[dc])?)
            })
            .sum()
    }
}

/// Period of the sweep loop `s ↦ (s, a)`, closedness of `ψ` and `δ_G ψ` at
/// random chart points, and invariance of the period under conjugation.
pub fn chern_simons_sweep(winding: i32, samples: usize, seed: u64, cfg: FdConfig) -> Result<ChernSimonsReport> {
    let kan = crate::simplicial::minimal_three_sphere();
    let plot = SweepPlot::new(winding);
    let cs = ChernSimons::new(&kan, InvariantPolynomial::basic(), &plot)?;
    let g = &plot.group;
    let zx = Mat::zeros(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a0 = vec![0.0; g.dim()];
    let a1: Vec<f64> = (0..g.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let loop_at = |a: Vec<f64>| {
        move |s: f64| {
            let mut c = vec![s];
            c.extend_from_slice(&a);
            let mut dc = vec![1.0];
            dc.extend(std::iter::repeat_n(0.0, a.len()));
            (c, dc)
        }
    };
    let n = 24;
    let period = cs.path_integral(&loop_at(a0), n, &zx)?;
    let moved = cs.path_integral(&loop_at(a1), n, &zx)?;
    let psi = cs.psi();
    let mut closedness = 0.0f64;
    let mut delta_g = 0.0f64;
    for _ in 0..samples {
        let mut c = vec![rng.gen_range(0.0..1.0)];
        c.extend((0..g.dim()).map(|_| rng.gen_range(-1.0..=1.0)));
        let dirs = random_dirs(&mut rng, plot.dim(), 2);
        closedness = closedness.max(psi.exterior_derivative(&zx, &c, &dirs, cfg).abs());
        for b in g.basis() {
            delta_g = delta_g.max(psi.delta_g(b, &c, &[])?.abs());
        }
    }
    let nearest = period.round();
    Ok(ChernSimonsReport {
        period,
        nearest_integer: nearest as i64,
        distance: (period - nearest).abs(),
        circle_value: CircleValue::new(period),
        closedness,
        delta_g,
        equivariance: (moved - period).abs(),
    })
}

/// A plot that sends every generator to the identity.
pub struct ConstantPlot {
    pub n: usize,
    pub dim: usize,
}

impl Plot for ConstantPlot {
    /// Number of chart directions.
    type Frame = usize;

    fn dim(&self) -> usize {
        self.dim
    }

    fn frame(&self, _c: &[f64], dirs: &[Vec<f64>]) -> Result<usize> {
        Ok(dirs.len())
    }

    fn base_value(&self, f: &usize, _name: &str, _bary: &[f64], bary_dirs: &[Vec<f64>]) -> Result<PlotValue> {
        Ok(PlotValue {
            value: Mat::identity(self.n, self.n),
            w: vec![Mat::zeros(self.n, self.n); *f],
            t: vec![Mat::zeros(self.n, self.n); bary_dirs.len()],
        })
    }

    fn action_field(&self, _c: &[f64], _x: &Mat) -> Option<Vec<f64>> {
        Some(vec![0.0; self.dim])
    }
}

/// Chart domain of a plot descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotDomain {
    pub kind: String,
    pub dim: usize,
    pub bounds: Vec<[f64; 2]>,
}

/// `{"domain":{"kind":"box","dim":d,"bounds":[[lo,hi],…]},
/// "degrees":{"2":"sphere_sweep"},"equivariant":true}`.
///
/// Registered families: `sphere_sweep` (degree 2, parameter `winding`, on
/// `(s, a) ∈ R × su(2)`) and `constant` (any degree).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotDescriptor {
    pub domain: PlotDomain,
    pub degrees: BTreeMap<String, String>,
    pub equivariant: bool,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

pub const PLOT_FAMILIES: [&str; 2] = ["constant", "sphere_sweep"];

/// A plot built from a descriptor.
pub enum NamedPlot {
    Constant(ConstantPlot),
    Sweep(SweepPlot),
}

impl PlotDescriptor {
    pub fn instantiate(&self, group: &MatrixGroup) -> Result<NamedPlot> {
        let d = &self.domain;
        if d.kind != "box" {
            return Err(Error::Input(format!("unknown domain kind `{}`", d.kind)));
        }
        if d.bounds.len() != d.dim || d.bounds.iter().any(|b| b[0].is_nan() || b[1].is_nan() || b[0] > b[1]) {
            return Err(Error::Input("box bounds must be dim ordered pairs".into()));
        }
        for (deg, fam) in &self.degrees {
            if !PLOT_FAMILIES.contains(&fam.as_str()) {
                return Err(Error::Input(format!("unknown plot family `{fam}` in degree {deg}")));
            }
        }
        let sweep = self.degrees.values().any(|f| f == "sphere_sweep");
        if !sweep {
            return Ok(NamedPlot::Constant(ConstantPlot { n: group.n(), dim: d.dim }));
        }
        if self.degrees.iter().any(|(k, f)| f == "sphere_sweep" && k != "2") {
            return Err(Error::Input("sphere_sweep is a degree-2 family".into()));
        }
        if !self.equivariant {
            return Err(Error::Input("sphere_sweep is equivariant".into()));
        }
        if group.spec() != MatrixGroup::su2().spec() {
            return Err(Error::Input(format!("sphere_sweep needs SU(2), got {}", group.spec())));
        }
        let winding = self.params.get("winding").copied().unwrap_or(1.0);
        if winding.fract() != 0.0 {
            return Err(Error::Input(format!("winding {winding} is not an integer")));
        }
        let plot = SweepPlot::new(winding as i32);
        if d.dim != plot.dim() {
            return Err(Error::Input(format!("sphere_sweep lives on a {}-dimensional box", plot.dim())));
        }
        Ok(NamedPlot::Sweep(plot))
    }

    /// A uniform point of the box.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.domain.bounds.iter().map(|b| if b[0] < b[1] { rng.gen_range(b[0]..b[1]) } else { b[0] }).collect()
    }
}

/// Chart path through `points`, piecewise linear; `closed` marks a loop in
/// the plot so the integral is a period.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathDescriptor {
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub closed: bool,
}

impl<P: Plot> ChernSimons<'_, P> {
    /// `∫ ψ` along a piecewise linear path.
    pub fn polyline_integral(&self, group: &MatrixGroup, points: &[Vec<f64>], n: usize) -> Result<f64> {
        let dim = self.plot.dim();
        if points.len() < 2 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::Input(format!("path needs at least two points of dimension {dim}")));
        }
        let x = Mat::zeros(group.n(), group.n());
        points
            .windows(2)
            .map(|seg| {
                let dc: Vec<f64> = seg[1].iter().zip(&seg[0]).map(|(b, a)| b - a).collect();
                let path = |s: f64| (seg[0].iter().zip(&dc).map(|(a, d)| a + s * d).collect(), dc.clone());
                self.path_integral(&path, n, &x)
            })
            .sum()
    }

    /// `max |dψ|` and `max |δ_G ψ(X)|` over basis `X` at sampled chart points.
    pub fn residuals(&self, group: &MatrixGroup, points: &[Vec<f64>], seed: u64, cfg: FdConfig) -> Result<(f64, f64)> {
        let psi = self.psi();
        let zx = Mat::zeros(group.n(), group.n());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut closed, mut dg) = (0.0f64, 0.0f64);
        for c in points {
            let dirs = random_dirs(&mut rng, self.plot.dim(), 2);
            closed = closed.max(psi.exterior_derivative(&zx, c, &dirs, cfg).abs());
            for b in group.basis() {
                dg = dg.max(psi.delta_g(b, c, &[])?.abs());
            }
        }
        Ok((closed, dg))
    }
}

/// Report of `Ψ` along a path of a descriptor plot.
#[derive(Clone, Debug, Serialize)]
pub struct PathReport {
    pub integral: f64,
    /// `Ψ(end) - Ψ(start)` mod 1.
    pub circle_value: CircleValue,
    pub closed: bool,
    pub nearest_integer: Option<i64>,
    pub distance: Option<f64>,
    pub closedness: f64,
    pub delta_g: f64,
}

fn path_report<P: Plot>(
    cs: &ChernSimons<'_, P>,
    group: &MatrixGroup,
    desc: &PlotDescriptor,
    path: &PathDescriptor,
    samples: usize,
    seed: u64,
    cfg: FdConfig,
) -> Result<PathReport> {
    let integral = cs.polyline_integral(group, &path.points, 24)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..samples).map(|_| desc.sample(&mut rng)).collect();
    let (closedness, delta_g) = cs.residuals(group, &points, seed, cfg)?;
    let nearest = integral.round();
    Ok(PathReport {
        integral,
        circle_value: CircleValue::new(integral),
        closed: path.closed,
        nearest_integer: path.closed.then_some(nearest as i64),
        distance: path.closed.then_some((integral - nearest).abs()),
        closedness,
        delta_g,
    })
}

/// `Ψ` along `path` for the plot `desc` of the 3-complex `kan`.
#[allow(clippy::too_many_arguments)]
pub fn chern_simons_path(
    kan: &FreeSimplicialGroup,
    group: &MatrixGroup,
    poly: InvariantPolynomial,
    desc: &PlotDescriptor,
    path: &PathDescriptor,
    samples: usize,
    seed: u64,
    cfg: FdConfig,
) -> Result<PathReport> {
    match desc.instantiate(group)? {
        NamedPlot::Constant(p) => path_report(&ChernSimons::new(kan, poly, &p)?, group, desc, path, samples, seed, cfg),
        NamedPlot::Sweep(p) => {
            let sigma_only = kan.base_generators(0).is_empty() && kan.base_generators(1).is_empty();
            if !sigma_only {
                return Err(Error::Input("sphere_sweep plots the minimal 3-sphere only".into()));
            }
            path_report(&ChernSimons::new(kan, poly, &p)?, group, desc, path, samples, seed, cfg)
        }
    }
}

/// `α = ⟨Q^{0,2,2}, c_{2,1}⟩` on `H_1` and the word map
/// `i = Σ_p (-1)^p ev_{d_p σ}` against which `dα = ± i^* λ`.
pub struct AlphaForm {
    pub kan: FreeSimplicialGroup,
    pub space: RepSpace,
    pub alpha: crate::liegroup::forms::FormSum,
    pub lambda_pullback: crate::liegroup::forms::FormSum,
}

impl AlphaForm {
    pub fn new(kan: FreeSimplicialGroup, poly: InvariantPolynomial) -> Result<Self> {
        let cycle = threefold_cycle(&kan)?;
        let omega = assemble_omega(poly);
        let space = RepSpace::new(&kan, 1);
        let q022 = omega.component(0, 2, 2).ok_or_else(|| Error::Input("polynomial has no Q^{0,2,2} layer".into()))?;
        let lam = omega.component(0, 3, 1).ok_or_else(|| Error::Input("polynomial has no Q^{0,3,1} layer".into()))?;
        let mut alpha = crate::liegroup::forms::FormSum::new(space.len(), 2, 0);
        for (t, c) in cycle.component(2, 1).terms() {
            let n = num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
            alpha.push(
                n * q022.sign,
                std::sync::Arc::new(crate::liegroup::forms::Pullback { map: space.evaluation(t.entries())?, form: q022.form.clone() }),
            );
        }
        let sigma: Word = "sigma".parse()?;
        let mut lambda_pullback = crate::liegroup::forms::FormSum::new(space.len(), 3, 0);
        for p in 0..=2 {
            let face = kan.apply_face(2, p, &sigma)?;
            if face.is_identity() {
                continue;
            }
            lambda_pullback.push(
                if p % 2 == 0 { 1.0 } else { -1.0 } * lam.sign,
                std::sync::Arc::new(crate::liegroup::forms::Pullback { map: space.evaluation(&[face])?, form: lam.form.clone() }),
            );
        }
        Ok(AlphaForm { kan, space, alpha, lambda_pullback })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaReport {
    pub samples: usize,
    /// `max |dα - i^*λ|`.
    pub residual_plus: f64,
    /// `max |dα + i^*λ|`.
    pub residual_minus: f64,
    pub realized_sign: i32,
    pub max_lambda: f64,
}

pub fn alpha_check(a: &AlphaForm, group: &MatrixGroup, samples: usize, seed: u64, cfg: FdConfig) -> Result<AlphaReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut plus, mut minus, mut lam) = (0.0f64, 0.0f64, 0.0f64);
    let x = Mat::zeros(group.n(), group.n());
    for _ in 0..samples {
        if a.space.is_empty() {
            break;
        }
        let p: Vec<Mat> = (0..a.space.len()).map(|_| group.random_element(&mut rng, 1.0)).collect();
        let v: Vec<Tangent> = (0..3).map(|_| random_tangent(group, &p, &mut rng)).collect();
        let da = if a.alpha.terms.is_empty() { 0.0 } else { exterior_derivative(group, &a.alpha, &x, &p, &v, cfg) };
        let il = a.lambda_pullback.eval(&x, &p, &v);
        plus = plus.max((da - il).abs());
        minus = minus.max((da + il).abs());
        lam = lam.max(il.abs());
    }
    Ok(AlphaReport {
        samples,
        residual_plus: plus,
        residual_minus: minus,
        realized_sign: if plus <= minus { 1 } else { -1 },
        max_lambda: lam,
    })
}

/// One generator of the equivariant cohomology of `Hom(π_1 Σ, U(n))`.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: String,
    /// The cycle paired with `Ω_r`: `c`, a generator name, or `point`.
    pub cycle: String,
    pub r: usize,
    pub j: Option<usize>,
    pub degree: usize,
    /// Degree of the backing paired form, `2r - |c|`.
    pub paired_degree: i64,
    pub closedness: f64,
}

/// `f_r = ⟨Ω_r, c⟩`, `b_r^j = ⟨Ω_r, u_j⟩`, `a_r = Q_r` for Chern polynomials
/// `Q_r`, `r = 1..n`, on the genus-`ℓ` surface.
pub fn un_generator_catalog(genus: usize, n: usize, samples: usize, seed: u64, cfg: FdConfig) -> Result<Vec<CatalogEntry>> {
    let group = MatrixGroup::new(GroupSpec { family: Family::U, n })?;
    let kan = builtin_surface(genus);
    let surface = surface_cycle_with_certificates(&kan, LiftOptions::default())?.cycle;
    // u_j = [x_j] come first, then v_j = [y_j]
    let gens = RepSpace::new(&kan, 0).generators().to_vec();
    let one_cycles: Vec<(String, Chain)> = gens
        .iter()
        .step_by(2)
        .chain(gens.iter().skip(1).step_by(2))
        .map(|g| (g.to_string(), Chain::single(0, vec![Word::generator(g.clone())], 1)))
        .collect();
    let mut out = Vec::new();
    for r in 1..=n {
        let poly = InvariantPolynomial::Chern { r };
        let omega = assemble_omega(poly);
        let mut push = |name: String, kind: &str, j: Option<usize>, cycle: &str, c: &Chain, cdeg: usize| -> Result<()> {
            // only classes with |c| < 2|Q| = 4r are generators
            if cdeg >= 4 * r {
                return Ok(());
            }
            let paired = pair(&kan, &omega, c)?;
            let pd = paired.total_degrees().first().copied().unwrap_or(2 * r as i64 - cdeg as i64);
            let rep = differential_identity_check(&kan, &group, &omega, c, samples, seed, cfg)?;
            out.push(CatalogEntry {
                name,
                kind: kind.into(),
                cycle: cycle.into(),
                r,
                j,
                degree: 2 * r - cdeg,
                paired_degree: pd,
                closedness: rep.max_residual(),
            });
            Ok(())
        };
        push(format!("f_{r}"), "f", None, "c", &surface, 2)?;
        for (j, (g, u)) in one_cycles.iter().enumerate() {
            push(format!("b_{r}^{}", j + 1), "b", Some(j + 1), g, u, 1)?;
        }
        // a_r = Q_r on a point: d_G-closed exactly; the residual is Ad-invariance
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut inv_res = 0.0f64;
        for _ in 0..samples {
            let x = group.random_algebra(&mut rng, 1.0);
            let h = group.random_element(&mut rng, 1.0);
            let xs: Vec<&Mat> = std::iter::repeat_n(&x, r).collect();
            let y = ad(&h, &x);
            let ys: Vec<&Mat> = std::iter::repeat_n(&y, r).collect();
            inv_res = inv_res.max((poly.eval(&xs) - poly.eval(&ys)).norm());
        }
        out.push(CatalogEntry {
            name: format!("a_{r}"),
            kind: "a".into(),
            cycle: "point".into(),
            r,
            j: None,
            degree: 2 * r,
            paired_degree: 2 * r as i64,
            closedness: inv_res,
        });
    }
    Ok(out)
}

fn chern_one_forms(genus: usize, n: usize) -> Result<SurfaceForms> {
    let group = MatrixGroup::new(GroupSpec { family: Family::U, n })?;
    let moduli = ExtendedModuli::new(group, genus)?;
    SurfaceForms::new(moduli, InvariantPolynomial::Chern { r: 1 }, LiftOptions::default())
}

fn f1_at(forms: &SurfaceForms, p: &ModuliPoint) -> Result<f64> {
    let plot = forms.moduli.plot(p.clone());
    let f1 = integrate_over_plot(&forms.paired, &plot, 0, 0, forms.order);
    let n = forms.moduli.group.n();
    f1.eval(&Mat::zeros(n, n), &vec![0.0; plot.dim()], &[])
}

/// `max |∂f_1|` along random chart directions of the `U(n)` extended moduli
/// space: `f_1` is locally constant.
pub fn f1_gradient(genus: usize, n: usize, samples: usize, seed: u64, cfg: FdConfig) -> Result<f64> {
    let forms = chern_one_forms(genus, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let x = Mat::zeros(n, n);
    for _ in 0..samples {
        let p = forms.moduli.random_point(&mut rng, 0.6)?;
        let plot = forms.moduli.plot(p);
        let f1 = integrate_over_plot(&forms.paired, &plot, 0, 0, forms.order);
        let dir = random_dirs(&mut rng, plot.dim(), 1).remove(0);
        let d = fd_derivative(
            |s| {
                let c: Vec<f64> = dir.iter().map(|e| s * e).collect();
                f1.eval(&x, &c, &[]).unwrap_or(f64::NAN)
            },
            cfg,
        );
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

/// `f_1` at a moduli point of the genus-`ℓ`, `U(n)` extended moduli space.
pub fn f1_value(genus: usize, n: usize, p: &ModuliPoint) -> Result<f64> {
    let forms = chern_one_forms(genus, n)?;
    f1_at(&forms, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_locus() {
        let g = MatrixGroup::su2();
        assert!(is_regular(&Mat::zeros(2, 2), REGULAR_MARGIN));
        let x0 = g.algebra_element(&[PI, 0.0, 0.0]);
        assert!(!is_regular(&x0, REGULAR_MARGIN));
        let x1 = g.algebra_element(&[PI - 0.1, 0.0, 0.0]);
        assert!(is_regular(&x1, REGULAR_MARGIN));
    }

    #[test]
    fn projection_and_tangents() {
        let m = ExtendedModuli::new(MatrixGroup::su2(), 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = m.random_point(&mut rng, 0.5).unwrap();
        assert!(m.constraint_residual(&p) < 1e-9);
        let dw = random_tangent(&m.group, &p.w, &mut rng);
        let dz = m.tangent(&p, &dw).unwrap();
        assert!(m.tangent_residual(&p, &dw, &dz) < 1e-8);
        let h = m.group.random_element(&mut rng, 1.0);
        assert!(m.constraint_residual(&m.conjugate(&p, &h)) < 1e-9);
        let e = ModuliPoint { w: vec![m.group.identity(); 2], z: Mat::zeros(2, 2) };
        assert_eq!(m.constraint_residual(&e), 0.0);
    }

    #[test]
    fn surface_forms_genus_one() {
        let m = ExtendedModuli::new(MatrixGroup::su2(), 1).unwrap();
        let forms = SurfaceForms::new(m, InvariantPolynomial::basic(), LiftOptions::default()).unwrap();
        let rep = verify_surface(&forms, 2, 7, FdConfig::default()).unwrap();
        assert!(rep.closedness < 1e-6, "{rep:?}");
        assert!(rep.momentum_minus < 1e-6, "{rep:?}");
        assert!(rep.max_dmu > 1e-3);
        assert_eq!(rep.realized_sign, -1);
        assert!(rep.invariance < 1e-8, "{rep:?}");
    }

    #[test]
    fn circle_values() {
        assert_eq!(CircleValue::new(2.25).value(), 0.25);
        assert!((CircleValue::new(-0.25).value() - 0.75).abs() < 1e-15);
        assert_eq!(CircleValue::new(-1e-18).value(), 0.0);
    }

    #[test]
    fn sphere_map_derivative() {
        let t = [0.2, 0.5, 0.3];
        let b = vec![vec![-1.0, 1.0, 0.0]];
        let (_, dn) = sphere_map(&t, &b);
        let h = 1e-6;
        let (np, _) = sphere_map(&[0.2 - h, 0.5 + h, 0.3], &[]);
        let (nm, _) = sphere_map(&[0.2 + h, 0.5 - h, 0.3], &[]);
        for i in 0..3 {
            assert!(((np[i] - nm[i]) / (2.0 * h) - dn[0][i]).abs() < 1e-7);
        }
        let (edge, _) = sphere_map(&[0.0, 0.4, 0.6], &[]);
        assert_eq!(edge, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn trivial_sweep_has_zero_period() {
        let rep = chern_simons_sweep(0, 1, 3, FdConfig::default()).unwrap();
        assert!(rep.period.abs() < 1e-12);
    }

    #[test]
    fn kirillov_constant_and_controls() {
        let g = MatrixGroup::su2();
        let x0 = g.algebra_element(&[0.0, 0.0, 2.0 * PI]);
        let rep = kirillov_check(&g, &x0, InvariantPolynomial::basic(), 20, 1).unwrap();
        assert!(rep.relative_spread < 1e-10, "{rep:?}");
        assert!(rep.control_spread > 1e-2, "{rep:?}");
        assert!(rep.constant.abs() > 1e-3);
        let zero = kirillov_check(&g, &Mat::zeros(2, 2), InvariantPolynomial::basic(), 5, 1).unwrap();
        assert!(zero.max_abs_form < 1e-12);
        assert!(zero.relative_spread.is_nan());
        let off = g.algebra_element(&[0.0, 0.0, 1.0]);
        assert!(matches!(kirillov_check(&g, &off, InvariantPolynomial::basic(), 5, 1), Err(Error::OffConstraint(_))));
    }

    #[test]
    fn alpha_on_the_trivial_and_synthetic_threefolds() {
        let g = MatrixGroup::su2();
        let trivial = AlphaForm::new(crate::simplicial::minimal_three_sphere(), InvariantPolynomial::basic()).unwrap();
        assert!(trivial.alpha.terms.is_empty());
        assert!(trivial.lambda_pullback.terms.is_empty());
        let kan = crate::simplicial::builtin_threefold(&crate::simplicial::sphere_cross_circle_data()).unwrap();
        let a = AlphaForm::new(kan, InvariantPolynomial::basic()).unwrap();
        let rep = alpha_check(&a, &g, 4, 2, FdConfig::default()).unwrap();
        assert!(rep.max_lambda > 1e-3);
        assert_eq!(rep.realized_sign, 1);
        assert!(rep.residual_plus < 1e-6, "{rep:?}");
    }

    #[test]
    fn lift_shift_is_constant() {
        let m = ExtendedModuli::new(MatrixGroup::su2(), 1).unwrap();
        let rep = lift_shift(&m, InvariantPolynomial::basic(), 3, 3).unwrap();
        assert!(rep.lifts_differ);
        assert!(rep.spread < 1e-6, "{rep:?}");
    }

    #[test]
    fn catalog_degrees() {
        let cat = un_generator_catalog(1, 2, 2, 1, FdConfig::default()).unwrap();
        let names: Vec<_> = cat.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["f_1", "b_1^1", "b_1^2", "a_1", "f_2", "b_2^1", "b_2^2", "a_2"]);
        for e in &cat {
            let want = match e.kind.as_str() {
                "f" => 2 * e.r - 2,
                "b" => 2 * e.r - 1,
                _ => 2 * e.r,
            };
            assert_eq!(e.degree, want);
            assert_eq!(e.paired_degree, want as i64);
            assert!(e.closedness < 1e-8, "{e:?}");
        }
        assert_eq!(cat[1].cycle, "x1");
        assert_eq!(cat[2].cycle, "y1");
    }

    #[test]
    fn f1_detects_the_topological_type() {
        let i = Complex64::new(0.0, 1.0);
        let (z, o) = (c64(0.0), c64(1.0));
        // quaternion units with commutator -1 = exp(πi) in U(2)
        let a = Mat::from_row_slice(2, 2, &[z, i, i, z]);
        let b = Mat::from_row_slice(2, 2, &[z, o, -o, z]);
        let p = ModuliPoint { w: vec![a, b], z: Mat::identity(2, 2) * (i * PI) };
        assert!((f1_value(1, 2, &p).unwrap() - 1.0).abs() < 1e-9);
        let e = ModuliPoint { w: vec![Mat::identity(2, 2); 2], z: Mat::zeros(2, 2) };
        assert!(f1_value(1, 2, &e).unwrap().abs() < 1e-12);
        assert!(f1_gradient(1, 2, 2, 1, FdConfig::default()).unwrap() < 1e-8);
    }

    #[test]
    fn degree_one_sweep() {
        let rep = chern_simons_sweep(1, 1, 3, FdConfig::default()).unwrap();
        assert_eq!(rep.nearest_integer.abs(), 1);
        assert!(rep.distance < 1e-6, "{rep:?}");
        assert!(rep.closedness < 1e-6);
        assert!(rep.delta_g < 1e-8);
        assert!(rep.equivariance < 1e-9);
    }

    #[test]
    fn descriptor_plots() {
        let g = MatrixGroup::su2();
        let text = r#"{"domain":{"kind":"box","dim":4,"bounds":[[0,1],[-1,1],[-1,1],[-1,1]]},
            "degrees":{"2":"sphere_sweep"},"equivariant":true}"#;
        let desc: PlotDescriptor = serde_json::from_str(text).unwrap();
        let path = PathDescriptor { points: vec![vec![0.0, 0.1, 0.0, 0.0], vec![1.0, 0.1, 0.0, 0.0]], closed: true };
        let kan = crate::simplicial::minimal_three_sphere();
        let rep = chern_simons_path(&kan, &g, InvariantPolynomial::basic(), &desc, &path, 1, 4, FdConfig::default()).unwrap();
        assert_eq!(rep.nearest_integer.map(i64::abs), Some(1));
        assert!(rep.distance.unwrap() < 1e-6);
        let mut constant = desc.clone();
        constant.degrees.insert("2".into(), "constant".into());
        let rep = chern_simons_path(&kan, &g, InvariantPolynomial::basic(), &constant, &path, 1, 4, FdConfig::default()).unwrap();
        assert_eq!(rep.integral, 0.0);
        let mut bad = desc.clone();
        bad.degrees.insert("1".into(), "sphere_sweep".into());
        assert!(matches!(bad.instantiate(&g), Err(Error::Input(_))));
        let mut unknown = desc;
        unknown.degrees.insert("2".into(), "torus".into());
        assert!(matches!(unknown.instantiate(&g), Err(Error::Input(_))));
    }
}
