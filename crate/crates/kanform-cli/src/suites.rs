//! Verification suites shared by `verify` and the per-topic commands.

use kanform::chains::{retract_to_cellular, total_boundary, CellularComplex, Chain};
use kanform::cyclelift::{surface_cycle, threefold_cycle, unit_multiple};
use kanform::liegroup::checks::{cartan_form_check, closure_check, ladder_check, restriction_check};
use kanform::liegroup::forms::FdConfig;
use kanform::liegroup::nerve::assemble_omega;
use kanform::liegroup::{InvariantPolynomial, MatrixGroup};
use kanform::moduli::{
    alpha_check, chern_simons_sweep, f1_gradient, kirillov_check, lift_shift, un_generator_catalog, verify_surface, AlphaForm,
    ExtendedModuli, SurfaceForms,
};
use kanform::pairing::differential_identity_check;
use kanform::simplicial::{builtin_surface, builtin_threefold, minimal_three_sphere, sphere_cross_circle_data, FreeSimplicialGroup};
use kanform::{cyclelift::LiftOptions, Result};
use serde_json::{json, Value};

use crate::report::{Check, Tolerances};

pub const SUITES: [&str; 9] = ["chains", "ladder", "omega", "pairing", "moduli", "cs", "alpha", "catalog", "kirillov"];

pub struct Ctx {
    pub group: MatrixGroup,
    pub poly: InvariantPolynomial,
    pub samples: usize,
    pub seed: u64,
    pub tol: Tolerances,
    pub cfg: FdConfig,
}

pub type Outcome = (Value, Vec<Check>);

/// Sign and orientation conventions recorded in every numerical report.
pub fn conventions() -> Value {
    json!({
        "delta_g": "(δ_G ω)(X; v…) = -ω(X; X_M, v…), X_M(g) = Xg - gX",
        "moment": "μ_q(X) = -Σ t_i Ad(h_i^{-1}) X, h_i = g_{i+1}⋯g_q",
        "orientation": "ε_q = (-1)^{q+1} on Q^{2m,j,q}",
        "pairing_sign": "(-1)^{k(k+1)/2} on bar degree k",
        "integration_sign": "(-1)^{qu + q(q+1)/2}, simplex directions first",
        "basic_normalization": "Q(X,Y) = -tr(XY)/(8π²)",
    })
}

/// Total boundary zero and retraction to a unit multiple of the top cell.
pub fn cycle_checks(k: &FreeSimplicialGroup, c: &Chain, label: &str) -> Result<Outcome> {
    let boundary = total_boundary(k, c);
    let y = CellularComplex::from_kan(k);
    let retraction = retract_to_cellular(k, &y, c)?;
    let unit = unit_multiple(&retraction);
    let checks = vec![
        Check::holds(format!("{label}: total boundary = 0"), boundary.is_zero()),
        Check::holds(format!("{label}: retracts to ±(top cell)"), unit.is_some()),
    ];
    Ok((json!({ "terms": c.len(), "retraction": retraction }), checks))
}

pub fn chains(ctx: &Ctx, genus: usize) -> Result<Outcome> {
    let _ = ctx;
    let mut payload = serde_json::Map::new();
    let mut checks = Vec::new();
    for g in 0..=genus.max(2) {
        let k = builtin_surface(g);
        let (v, c) = cycle_checks(&k, &surface_cycle(&k)?, &format!("surface genus {g}"))?;
        payload.insert(format!("surface_{g}"), v);
        checks.extend(c);
    }
    for (name, k) in
        [("minimal_three_sphere", minimal_three_sphere()), ("sphere_cross_circle", builtin_threefold(&sphere_cross_circle_data())?)]
    {
        let (v, c) = cycle_checks(&k, &threefold_cycle(&k)?, name)?;
        payload.insert(name.into(), v);
        checks.extend(c);
    }
    Ok((Value::Object(payload), checks))
}

pub fn ladder(ctx: &Ctx) -> Result<Outcome> {
    let rep = ladder_check(&ctx.group, ctx.poly, ctx.samples, ctx.seed, ctx.cfg);
    let tol = ctx.tol.get(1e-5);
    let mut checks = vec![Check::at_most("d Q^{2r-1,1} = 0", rep.bottom, tol)];
    for r in &rep.rungs {
        checks.push(
            Check::at_most(format!("d Q^{{·,{}}} ± δ♮ Q^{{·,{}}} = 0", r.q + 1, r.q), r.residual(), tol)
                .with_note(format!("realized sign {:+}", r.realized_sign)),
        );
    }
    checks.push(Check::at_most("δ♮ Q^{r,r} = 0", rep.top, tol));
    if let Some(c) = cartan_form_check(&ctx.group, ctx.poly, ctx.samples, ctx.seed) {
        checks.push(
            Check::at_most("Q^{3,1} ∝ Q(x,[y,z])", c.max_deviation, ctx.tol.get(1e-9)).with_note(format!("constant {:.12}", c.constant)),
        );
    }
    Ok((serde_json::to_value(&rep)?, checks))
}

pub fn omega(ctx: &Ctx) -> Result<Outcome> {
    let rest = restriction_check(&ctx.group, ctx.poly, ctx.samples, ctx.seed);
    let closure = closure_check(&ctx.group, ctx.poly, ctx.samples, ctx.seed, ctx.cfg);
    let checks = vec![
        Check::at_most("Ω_Q at X=0 = Shulman sum", rest, ctx.tol.get(1e-9)),
        Check::at_most("d_G Ω_Q = 0", closure.max_residual(), ctx.tol.get(1e-5)),
    ];
    Ok((json!({ "restriction": rest, "closure": closure }), checks))
}

pub fn pairing(ctx: &Ctx, k: &FreeSimplicialGroup, c: &Chain) -> Result<Outcome> {
    let (cyc, mut checks) = cycle_checks(k, c, "cycle")?;
    checks.truncate(1);
    let omega = assemble_omega(ctx.poly);
    let rep = differential_identity_check(k, &ctx.group, &omega, c, ctx.samples, ctx.seed, ctx.cfg)?;
    checks.push(Check::at_most("D⟨Ω,c⟩ = ⟨d_GΩ,c⟩ + ⟨Ω,∂c⟩", rep.max_residual(), ctx.tol.get(1e-5)));
    Ok((json!({ "cycle": cyc, "identity": rep }), checks))
}

pub fn moduli(ctx: &Ctx, genus: usize) -> Result<Outcome> {
    let m = ExtendedModuli::new(ctx.group.clone(), genus)?;
    let forms = SurfaceForms::new(m.clone(), ctx.poly, LiftOptions::default())?;
    let rep = verify_surface(&forms, ctx.samples, ctx.seed, ctx.cfg)?;
    let shift = lift_shift(&m, ctx.poly, ctx.samples.clamp(2, 8), ctx.seed)?;
    let tol = ctx.tol.get(1e-5);
    let checks = vec![
        Check::at_most("exp(Z) = r(w)", rep.constraint_residual, ctx.tol.get(1e-9)),
        Check::at_most("linearized constraint", rep.tangent_residual, ctx.tol.get(1e-8)),
        Check::at_most("dω_c = 0", rep.closedness, tol),
        Check::at_most("δ_G ω_c = dμ♯", rep.momentum_plus, tol)
            .informational("d_G(ω_c + μ♯) = 0 with d_G = d + δ_G forces δ_G ω_c = -dμ♯; see the realized-sign check"),
        Check::at_most("δ_G ω_c = -dμ♯ (realized sign)", rep.momentum_minus, tol),
        Check::at_most("G-invariance of ω_c and μ", rep.invariance, ctx.tol.get(1e-8)),
        Check::holds("two distinct lifts of c_{2,0}", shift.lifts_differ),
        Check::at_most("μ shift between lifts is constant", shift.spread, ctx.tol.get(1e-6)),
    ];
    Ok((json!({ "genus": genus, "surface": rep, "lift_shift": shift }), checks))
}

pub fn cs(ctx: &Ctx) -> Result<Outcome> {
    let rep = chern_simons_sweep(1, ctx.samples.min(10), ctx.seed, ctx.cfg)?;
    let checks = vec![
        Check::at_most("dψ = 0", rep.closedness, ctx.tol.get(1e-5)),
        Check::at_most("δ_G ψ(X) = 0", rep.delta_g, ctx.tol.get(1e-6)),
        Check::at_most("period is an integer", rep.distance, ctx.tol.get(1e-3)),
        Check::holds("degree-1 sweep has nonzero period", rep.nearest_integer != 0),
        Check::at_most("period is conjugation invariant", rep.equivariance, ctx.tol.get(1e-6)),
    ];
    Ok((serde_json::to_value(&rep)?, checks))
}

pub fn alpha(ctx: &Ctx) -> Result<Outcome> {
    let a = AlphaForm::new(builtin_threefold(&sphere_cross_circle_data())?, InvariantPolynomial::basic())?;
    let rep = alpha_check(&a, &MatrixGroup::su2(), ctx.samples, ctx.seed, ctx.cfg)?;
    let residual = rep.residual_plus.min(rep.residual_minus);
    let checks = vec![Check::at_most("dα = ±i*λ", residual, ctx.tol.get(1e-5)).with_note(format!("realized sign {:+}", rep.realized_sign))];
    Ok((serde_json::to_value(&rep)?, checks))
}

pub fn catalog(ctx: &Ctx, genus: usize, n: usize) -> Result<Outcome> {
    let entries = un_generator_catalog(genus, n, ctx.samples, ctx.seed, ctx.cfg)?;
    let grad = f1_gradient(genus, n, ctx.samples.clamp(1, 10), ctx.seed, ctx.cfg)?;
    let mut checks = Vec::new();
    for e in &entries {
        let want = match e.kind.as_str() {
            "f" => 2 * e.r - 2,
            "b" => 2 * e.r - 1,
            _ => 2 * e.r,
        };
        checks.push(Check::holds(format!("|{}| = {want}", e.name), e.degree == want && e.paired_degree == want as i64));
        checks.push(Check::at_most(format!("{} closed", e.name), e.closedness, ctx.tol.get(1e-5)));
    }
    checks.push(Check::at_most("f_1 locally constant", grad, ctx.tol.get(1e-6)));
    Ok((json!({ "genus": genus, "n": n, "generators": entries, "f1_gradient": grad }), checks))
}

pub fn kirillov(ctx: &Ctx) -> Result<Outcome> {
    let g = MatrixGroup::su2();
    let x0 = g.algebra_element(&[0.0, 0.0, 2.0 * std::f64::consts::PI]);
    let rep = kirillov_check(&g, &x0, InvariantPolynomial::basic(), ctx.samples.max(20), ctx.seed)?;
    let checks = vec![
        Check::at_most("ω ∝ ω_KKS on the orbit", rep.relative_spread, ctx.tol.get(1e-4))
            .with_note(format!("constant {:.12}", rep.constant)),
        Check::holds("non-invariant control is detected", rep.control_spread > ctx.tol.get(1e-4)),
    ];
    Ok((serde_json::to_value(&rep)?, checks))
}
