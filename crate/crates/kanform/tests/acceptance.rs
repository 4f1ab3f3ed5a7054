//! Acceptance gate: one line per criterion, exit status nonzero on a gating
//! failure. Oracles for the exact algebra are re-derived here from the
//! definitions rather than taken from the library.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use kanform::chains::{boundary_bar, boundary_simp, normalize, retract_to_cellular, total_boundary, CellularChain, CellularComplex, Chain};
use kanform::cyclelift::LiftOptions;
use kanform::cyclelift::{surface_cycle, threefold_cycle};
use kanform::liegroup::checks::{closure_check, ladder_check, restriction_check};
use kanform::liegroup::forms::FdConfig;
use kanform::liegroup::nerve::assemble_omega;
use kanform::liegroup::{InvariantPolynomial, MatrixGroup};
use kanform::moduli::{
    chern_simons_sweep, f1_gradient, kirillov_check, lift_shift, un_generator_catalog, verify_surface, ExtendedModuli, SurfaceForms,
};
use kanform::pairing::differential_identity_check;
use kanform::simplicial::{builtin_surface, builtin_threefold, minimal_three_sphere, sphere_cross_circle_data, FreeSimplicialGroup};
use kanform::words::{Letter, Word};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_917;

struct Outcome {
    pass: bool,
    /// A failing non-gating line records a documented deviation.
    gating: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, gating: true, detail }
}

// ---------------------------------------------------------------------------
// Independent oracles for the exact chain algebra.

fn oracle_sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn add(out: &mut Chain, q: usize, entries: Vec<Word>, coeff: i64) {
    *out = out.plus(&Chain::single(q, entries, coeff));
}

/// `[x_2|…|x_k] + Σ_{i=1}^{k-1} (-1)^i [x_1|…|x_i x_{i+1}|…|x_k] + (-1)^k [x_1|…|x_{k-1}]`.
fn oracle_bar(c: &Chain) -> Chain {
    let mut out = Chain::zero();
    for (t, coeff) in c.terms() {
        let coeff: i64 = coeff.try_into().unwrap();
        let e = t.entries();
        let k = e.len();
        if k < 2 {
            continue;
        }
        add(&mut out, t.q(), e[1..].to_vec(), coeff);
        for i in 1..k {
            let mut merged = e[..i - 1].to_vec();
            merged.push(e[i - 1].multiply(&e[i]));
            merged.extend_from_slice(&e[i + 1..]);
            add(&mut out, t.q(), merged, oracle_sign(i) * coeff);
        }
        add(&mut out, t.q(), e[..k - 1].to_vec(), oracle_sign(k) * coeff);
    }
    out
}

/// `Σ_p (-1)^p d_p` applied to every entry.
fn oracle_simp(k: &FreeSimplicialGroup, c: &Chain) -> Chain {
    let mut out = Chain::zero();
    for (t, coeff) in c.terms() {
        if t.q() == 0 {
            continue;
        }
        let coeff: i64 = coeff.try_into().unwrap();
        for p in 0..=t.q() {
            let faces = t.entries().iter().map(|w| k.apply_face(t.q(), p, w).unwrap()).collect();
            add(&mut out, t.q() - 1, faces, oracle_sign(p) * coeff);
        }
    }
    out
}

/// `∂_♮ + (-1)^k ∂_♯`, ♯-normalized.
fn oracle_total(k: &FreeSimplicialGroup, c: &Chain) -> Chain {
    let mut out = oracle_bar(c);
    for (bk, q) in c.bidegrees() {
        out = out.plus(&oracle_simp(k, &c.component(bk, q)).scale(&BigInt::from(oracle_sign(bk))));
    }
    normalize(k, &out)
}

/// Exponent sums of nondegenerate letters in bar-degree-1 terms.
fn oracle_retract(c: &Chain, degree: usize) -> CellularChain {
    let mut coefficients = BTreeMap::<String, i64>::new();
    for (t, coeff) in c.terms() {
        if t.k() != 1 {
            continue;
        }
        let coeff: i64 = coeff.try_into().unwrap();
        for l in t.entries()[0].letters() {
            if !l.generator.is_degenerate() {
                *coefficients.entry(l.generator.base().to_owned()).or_default() += l.exponent() * coeff;
            }
        }
    }
    coefficients.retain(|_, v| *v != 0);
    CellularChain { degree, coefficients }
}

fn random_word<R: Rng>(k: &FreeSimplicialGroup, q: usize, rng: &mut R) -> Word {
    let gens = k.generators(q);
    let len = rng.gen_range(1..=3);
    Word::reduce((0..len).map(|_| Letter::new(gens[rng.gen_range(0..gens.len())].clone(), if rng.gen() { 1 } else { -1 })))
}

/// A nonzero ♯-normalized chain of bidegree `(bk, q)`.
fn random_chain<R: Rng>(k: &FreeSimplicialGroup, bk: usize, q: usize, rng: &mut R) -> Chain {
    loop {
        let mut c = Chain::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let entries = (0..bk).map(|_| random_word(k, q, rng)).collect();
            let coeff = rng.gen_range(1..=3) * if rng.gen() { 1 } else { -1 };
            c = c.plus(&Chain::single(q, entries, coeff));
        }
        let c = normalize(k, &c);
        if !c.is_zero() {
            return c;
        }
    }
}

fn test_complexes() -> Vec<(&'static str, FreeSimplicialGroup)> {
    vec![("genus-2 surface", builtin_surface(2)), ("S^2 x S^1", builtin_threefold(&sphere_cross_circle_data()).unwrap())]
}

// ---------------------------------------------------------------------------

fn chain_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut count = 0;
    let mut failures = Vec::new();
    for (name, k) in test_complexes() {
        for q in 0..=3 {
            for bk in 1..=4 - q {
                for _ in 0..500 {
                    let c = random_chain(&k, bk, q, &mut rng);
                    count += 1;
                    let bar = boundary_bar(&c);
                    let simp = boundary_simp(&k, &c);
                    let total = total_boundary(&k, &c);
                    let ok = bar == oracle_bar(&c)
                        && normalize(&k, &simp) == normalize(&k, &oracle_simp(&k, &c))
                        && total == oracle_total(&k, &c)
                        && boundary_bar(&bar).is_zero()
                        && boundary_simp(&k, &simp).is_zero()
                        && total_boundary(&k, &total).is_zero();
                    if !ok {
                        failures.push(format!("{name} ({bk},{q}): {c}"));
                    }
                }
            }
        }
    }
    outcome(failures.is_empty(), format!("{count} chains, {} failures {:?}", failures.len(), failures.first()))
}

fn retraction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut bad = 0;
    let mut count = 0;
    for (_, k) in test_complexes() {
        let y = CellularComplex::from_kan(&k);
        for q in 0..=2 {
            for bk in 1..=3 - q {
                for _ in 0..100 {
                    let c = random_chain(&k, bk, q, &mut rng);
                    let n = bk + q;
                    let r = retract_to_cellular(&k, &y, &c).unwrap();
                    let dr = retract_to_cellular(&k, &y, &total_boundary(&k, &c)).unwrap();
                    count += 1;
                    let expected = y.boundary(&oracle_retract(&c, n)).unwrap();
                    if r != oracle_retract(&c, n) || dr.coefficients != expected.coefficients {
                        bad += 1;
                    }
                }
            }
        }
    }
    let mut tops = Vec::new();
    for genus in 0..=2 {
        let k = builtin_surface(genus);
        tops.push((format!("genus {genus}"), k.clone(), surface_cycle(&k).unwrap(), "r"));
    }
    let s3 = minimal_three_sphere();
    tops.push(("minimal S^3".into(), s3.clone(), threefold_cycle(&s3).unwrap(), "sigma"));
    let mut top_ok = true;
    for (name, k, c, cell) in &tops {
        let y = CellularComplex::from_kan(k);
        let r = retract_to_cellular(k, &y, c).unwrap();
        let unit = r.coefficients.len() == 1 && r.coefficients.get(*cell).is_some_and(|v| v.abs() == 1);
        if !unit {
            top_ok = false;
            eprintln!("{name}: retraction {:?}", r.coefficients);
        }
    }
    outcome(bad == 0 && top_ok, format!("{count} random chains, {bad} mismatches; top cells {}", if top_ok { "±1" } else { "wrong" }))
}

fn certificates() -> Outcome {
    let mut all_zero = true;
    for genus in 0..=2 {
        let k = builtin_surface(genus);
        all_zero &= total_boundary(&k, &surface_cycle(&k).unwrap()).is_zero();
    }
    for k in [minimal_three_sphere(), builtin_threefold(&sphere_cross_circle_data()).unwrap()] {
        all_zero &= total_boundary(&k, &threefold_cycle(&k).unwrap()).is_zero();
    }
    let k = builtin_surface(1);
    let c20 = surface_cycle(&k).unwrap().component(2, 0);
    let relator = k.parse_word(0, "x1*y1*x1^-1*y1^-1").unwrap();
    let expanded = oracle_bar(&c20) == Chain::single(0, vec![relator], 1);
    outcome(all_zero && expanded, format!("total boundaries zero: {all_zero}; ∂_♮ c_{{2,0}} = [x y x^-1 y^-1]: {expanded}"))
}

fn ladder() -> Outcome {
    let rep = ladder_check(&MatrixGroup::su2(), InvariantPolynomial::basic(), 50, SEED, FdConfig::default());
    let first = rep.rungs.iter().find(|r| r.q == 1).map_or(f64::INFINITY, |r| r.residual());
    let worst = rep.bottom.max(first);
    outcome(
        worst <= 1e-5,
        format!("dQ^{{3,1}} {:.2e}, dQ^{{2,2}} ± δ♮Q^{{3,1}} {first:.2e}, all rungs {:.2e}", rep.bottom, rep.max_residual()),
    )
}

fn equivariant_extension() -> Outcome {
    let g = MatrixGroup::su2();
    let q = InvariantPolynomial::basic();
    let rest = restriction_check(&g, q, 50, SEED);
    let closure = closure_check(&g, q, 50, SEED, FdConfig::default()).max_residual();
    outcome(rest <= 1e-9 && closure <= 1e-5, format!("restriction {rest:.2e}, d_GΩ_Q {closure:.2e}"))
}

fn pairing_identity() -> Outcome {
    let k = builtin_surface(1);
    let g = MatrixGroup::su2();
    let omega = assemble_omega(InvariantPolynomial::basic());
    let c = surface_cycle(&k).unwrap();
    let cycle = differential_identity_check(&k, &g, &omega, &c, 50, SEED, FdConfig::default()).unwrap();
    // [r] alone is not a cycle: D⟨Ω,c⟩ must reproduce the nonzero ⟨Ω,∂c⟩.
    let partial = c.component(1, 1);
    let control = differential_identity_check(&k, &g, &omega, &partial, 50, SEED, FdConfig::default()).unwrap();
    let pass = cycle.max_residual() <= 1e-5 && control.max_residual() <= 1e-5 && control.max_rhs() > 1e-3;
    outcome(
        pass,
        format!(
            "cycle {:.2e}; non-cycle control {:.2e} against |⟨Ω,∂c⟩| up to {:.2e}",
            cycle.max_residual(),
            control.max_residual(),
            control.max_rhs()
        ),
    )
}

fn moduli(stated_sign: &mut Option<Outcome>) -> Outcome {
    let m = ExtendedModuli::new(MatrixGroup::su2(), 1).unwrap();
    let forms = SurfaceForms::new(m.clone(), InvariantPolynomial::basic(), LiftOptions::default()).unwrap();
    let rep = verify_surface(&forms, 50, SEED, FdConfig::default()).unwrap();
    let shift = lift_shift(&m, InvariantPolynomial::basic(), 8, SEED).unwrap();
    *stated_sign = Some(Outcome {
        pass: rep.momentum_plus <= 1e-5,
        gating: false,
        detail: format!(
            "|δ_Gω_c - dμ♯| = {:.2e}; realized |δ_Gω_c + dμ♯| = {:.2e} (d_G = d + δ_G on ω_c + μ♯ forces the minus sign)",
            rep.momentum_plus, rep.momentum_minus
        ),
    });
    let pass = rep.closedness <= 1e-5 && rep.momentum_minus <= 1e-5 && shift.lifts_differ && shift.spread <= 1e-6;
    outcome(
        pass,
        format!(
            "dω_c {:.2e}, momentum (realized sign) {:.2e}, lift shift spread {:.2e} over distinct lifts: {}",
            rep.closedness, rep.momentum_minus, shift.spread, shift.lifts_differ
        ),
    )
}

fn chern_simons() -> Outcome {
    let rep = chern_simons_sweep(1, 10, SEED, FdConfig::default()).unwrap();
    let trivial = chern_simons_sweep(0, 2, SEED, FdConfig::default()).unwrap();
    let pass =
        rep.closedness <= 1e-5 && rep.delta_g <= 1e-6 && rep.distance <= 1e-3 && rep.nearest_integer != 0 && trivial.distance <= 1e-3;
    outcome(
        pass,
        format!("dψ {:.2e}, δ_Gψ {:.2e}, period {:.9} (trivial sweep {:.2e})", rep.closedness, rep.delta_g, rep.period, trivial.period),
    )
}

fn catalog() -> Outcome {
    let entries = un_generator_catalog(1, 2, 10, SEED, FdConfig::default()).unwrap();
    let grad = f1_gradient(1, 2, 10, SEED, FdConfig::default()).unwrap();
    let mut counts = BTreeMap::<&str, usize>::new();
    let mut ok = true;
    for e in &entries {
        *counts.entry(e.kind.as_str()).or_default() += 1;
        // |f_r| = 2r-2, |b_r^j| = 2r-1, |a_r| = 2r.
        let want = match e.kind.as_str() {
            "f" => 2 * e.r - 2,
            "b" => 2 * e.r - 1,
            "a" => 2 * e.r,
            _ => usize::MAX,
        };
        ok &= e.degree == want && e.paired_degree == want as i64 && e.closedness <= 1e-5;
    }
    let expected: BTreeMap<&str, usize> = [("a", 2), ("b", 4), ("f", 2)].into();
    let closed = entries.iter().map(|e| e.closedness).fold(0.0, f64::max);
    outcome(
        ok && counts == expected && grad <= 1e-6,
        format!("{} generators {counts:?}, closedness {closed:.2e}, f_1 gradient {grad:.2e}", entries.len()),
    )
}

fn kirillov() -> Outcome {
    let g = MatrixGroup::su2();
    let x0 = g.algebra_element(&[0.0, 0.0, 2.0 * std::f64::consts::PI]);
    let rep = kirillov_check(&g, &x0, InvariantPolynomial::basic(), 20, SEED).unwrap();
    outcome(
        rep.relative_spread <= 1e-4,
        format!("constant {:.9}, relative spread {:.2e} over {} pairs", rep.constant, rep.relative_spread, rep.samples),
    )
}

type Criterion<'a> = (&'static str, u64, Box<dyn FnOnce() -> Outcome + 'a>);

fn main() {
    let mut stated_sign = None;
    let criteria: Vec<Criterion> = vec![
        ("exact chain algebra", 10, Box::new(chain_algebra)),
        ("cellular retraction", 5, Box::new(retraction)),
        ("cycle certificates", 5, Box::new(certificates)),
        ("Shulman ladder", 60, Box::new(ladder)),
        ("equivariant extension", 120, Box::new(equivariant_extension)),
        ("pairing identity", 120, Box::new(pairing_identity)),
        ("extended moduli", 180, Box::new(|| moduli(&mut stated_sign))),
        ("Chern-Simons", 300, Box::new(chern_simons)),
        ("U(n) catalog", 180, Box::new(catalog)),
        ("Kirillov form", 60, Box::new(kirillov)),
    ];
    let mut failed = 0;
    let mut lines = Vec::new();
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(limit);
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        lines.push(format!(
            "criterion {:>2} {:<22} {} {:>7.2}s/<{limit}s  {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            o.detail
        ));
    }
    let deviations = usize::from(stated_sign.as_ref().is_some_and(|o| !o.pass));
    if let Some(o) = stated_sign {
        lines.insert(
            7,
            format!(
                "criterion  7 {:<22} {}  {}",
                "momentum, stated sign",
                if o.pass {
                    "PASS"
                } else if o.gating {
                    "FAIL"
                } else {
                    "FAIL (recorded deviation, non-gating)"
                },
                o.detail
            ),
        );
    }
    for l in &lines {
        println!("{l}");
    }
    println!("acceptance: {} of 10 criteria pass; {deviations} recorded deviation(s)", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
