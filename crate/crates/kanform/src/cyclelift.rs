//! Lifting bar cycles through `∂_♮` and assembling total cycles of `|NK|`.
//!
//! Every lift is checked exactly (`∂_♮ z = b`) before it is returned.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chains::{boundary_bar, boundary_simp, normalize, total_boundary, BarTuple, CellularChain, CellularComplex, Chain};
use crate::error::{Error, Result};
use crate::intlinalg::{solve_sparse, SparseRow};
use crate::simplicial::FreeSimplicialGroup;
use crate::words::{ExponentVector, Generator, Word};

/// Default closure depth of the linear method.
pub const DEFAULT_LINEAR_DEPTH: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftMethod {
    Telescoping,
    Linear,
}

impl std::str::FromStr for LiftMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "telescoping" => Ok(LiftMethod::Telescoping),
            "linear" => Ok(LiftMethod::Linear),
            _ => Err(Error::Input(format!("unknown lift method `{s}`"))),
        }
    }
}

/// A solved lifting problem `∂_♮ solution = target`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftCertificate {
    pub target: Chain,
    pub solution: Chain,
    pub method: LiftMethod,
    pub depth: usize,
}

impl LiftCertificate {
    /// `∂_♮ solution - target`.
    pub fn residual(&self) -> Chain {
        boundary_bar(&self.solution).minus(&self.target)
    }

    pub fn verify(&self) -> Result<()> {
        if self.residual().is_zero() {
            Ok(())
        } else {
            Err(Error::Certificate)
        }
    }
}

/// Options for [`bar_lift`]. `method: None` picks telescoping in bar degree 1
/// and the linear method above, falling back to telescoping when the linear
/// candidate basis is exhausted.
#[derive(Clone, Copy, Debug)]
pub struct LiftOptions {
    pub method: Option<LiftMethod>,
    pub depth: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { method: None, depth: DEFAULT_LINEAR_DEPTH }
    }
}

/// Solves `∂_♮ z = b` for `b` homogeneous in bar degree `k`.
pub fn bar_lift(b: &Chain, method: LiftMethod, depth: usize) -> Result<Chain> {
    Ok(lift_with_certificate(b, method, depth)?.solution)
}

pub fn lift_with_certificate(b: &Chain, method: LiftMethod, depth: usize) -> Result<LiftCertificate> {
    if b.is_zero() {
        return Ok(LiftCertificate { target: Chain::zero(), solution: Chain::zero(), method, depth });
    }
    let k = bar_degree(b)?;
    if k == 1 {
        let obstruction = exponent_obstruction(b);
        if !obstruction.is_zero() {
            return Err(Error::Obstruction(obstruction));
        }
    } else if !boundary_bar(b).is_zero() {
        return Err(Error::NotACycle);
    }
    let solution = match method {
        LiftMethod::Telescoping => telescoping(b, k),
        LiftMethod::Linear => linear(b, depth)?,
    };
    let cert = LiftCertificate { target: b.clone(), solution, method, depth: if method == LiftMethod::Linear { depth } else { 0 } };
    cert.verify()?;
    Ok(cert)
}

/// Default method selection with the linear-to-telescoping fallback.
pub fn lift_auto(b: &Chain, opts: LiftOptions) -> Result<LiftCertificate> {
    match opts.method {
        Some(m) => lift_with_certificate(b, m, opts.depth),
        None if b.is_zero() || bar_degree(b)? == 1 => lift_with_certificate(b, LiftMethod::Telescoping, 0),
        None => match lift_with_certificate(b, LiftMethod::Linear, opts.depth) {
            Err(Error::LinearExhausted { .. }) => lift_with_certificate(b, LiftMethod::Telescoping, 0),
            other => other,
        },
    }
}

fn bar_degree(b: &Chain) -> Result<usize> {
    let ks: BTreeSet<usize> = b.terms().map(|(t, _)| t.k()).collect();
    match ks.len() {
        1 => Ok(*ks.iter().next().expect("one element")),
        _ => Err(Error::Input("lift target must have a single bar degree".into())),
    }
}

/// Generator-wise exponent sums of a bar-degree-1 chain.
pub fn exponent_obstruction(b: &Chain) -> ExponentVector {
    let mut total = ExponentVector::default();
    for (t, c) in b.terms() {
        let n: i64 = c.try_into().unwrap_or(i64::MAX);
        for (g, e) in t.entries()[0].exponent_sums().iter() {
            total.add(g, e * n);
        }
    }
    total
}

fn telescoping(b: &Chain, k: usize) -> Chain {
    let mut z = Chain::zero();
    for (t, c) in b.terms() {
        let part = if k == 1 {
            telescope_word(t.q(), &t.entries()[0])
        } else {
            // H_k[t_1|...|t_k] = (-1)^{k-1} [t_1|...|t_{k-1}| H_1[t_k]]
            let head = &t.entries()[..k - 1];
            let tail = fox_homotopy(t.q(), &t.entries()[k - 1]);
            let mut part = Chain::zero();
            for (u, cu) in tail.terms() {
                let mut e = head.to_vec();
                e.extend_from_slice(u.entries());
                part = part.plus(&Chain::single(t.q(), e, cu.clone()));
            }
            if k.is_multiple_of(2) {
                part.negate()
            } else {
                part
            }
        };
        z = z.plus(&part.scale(c));
    }
    z
}

/// `Σ_{a_i = g^{-1}} [g|g^{-1}] - Σ_i [a_i | a_{i+1}...a_n]`, whose bar
/// boundary is `[w] - Σ_g e_g(w) [g]`.
fn telescope_word(q: usize, w: &Word) -> Chain {
    let n = w.len();
    let mut z = Chain::zero();
    for (i, l) in w.letters().iter().enumerate() {
        if l.inverse {
            let g = Word::generator(l.generator.clone());
            z = z.plus(&Chain::single(q, vec![g.clone(), g.invert()], 1));
        }
        if i + 1 < n {
            z = z.plus(&Chain::single(q, vec![w.prefix(i + 1).suffix(i), w.suffix(i + 1)], -1));
        }
    }
    z
}

/// Contracting homotopy in bar degree 1 from the Fox calculus:
/// `-Σ_{a_i = g} [a_1...a_{i-1}|g] + Σ_{a_i = g^{-1}} [a_1...a_i|g]`.
fn fox_homotopy(q: usize, w: &Word) -> Chain {
    let mut z = Chain::zero();
    for (i, l) in w.letters().iter().enumerate() {
        let g = Word::generator(l.generator.clone());
        if l.inverse {
            z = z.plus(&Chain::single(q, vec![w.prefix(i + 1), g], 1));
        } else {
            z = z.plus(&Chain::single(q, vec![w.prefix(i), g], -1));
        }
    }
    z
}

fn letters_of(t: &BarTuple) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for w in t.entries() {
        for g in w.support() {
            let g = Word::generator(g);
            out.insert(g.invert());
            out.insert(g);
        }
    }
    out
}

/// `(k+1)`-tuples having `t` as a face: single-position splittings
/// `[..|u|v|..]` with `uv = t_i`, and end extensions `[g|t]`, `[t|g]` by
/// letters of `t`.
fn cofaces(t: &BarTuple) -> Vec<BarTuple> {
    let q = t.q();
    let e = t.entries();
    let mut out = Vec::new();
    for (i, w) in e.iter().enumerate() {
        for cut in 1..w.len() {
            let mut v = e[..i].to_vec();
            v.push(w.prefix(cut));
            v.push(w.suffix(cut));
            v.extend_from_slice(&e[i + 1..]);
            out.extend(BarTuple::new(q, v));
        }
    }
    for g in letters_of(t) {
        let mut front = vec![g.clone()];
        front.extend_from_slice(e);
        out.extend(BarTuple::new(q, front));
        let mut back = e.to_vec();
        back.push(g);
        out.extend(BarTuple::new(q, back));
    }
    out
}

fn linear(b: &Chain, depth: usize) -> Result<Chain> {
    let mut rows: BTreeSet<BarTuple> = b.terms().map(|(t, _)| t.clone()).collect();
    let mut cands: BTreeSet<BarTuple> = BTreeSet::new();
    let mut frontier: Vec<BarTuple> = rows.iter().cloned().collect();
    for _ in 0..depth {
        let mut fresh = Vec::new();
        for t in &frontier {
            for c in cofaces(t) {
                if cands.insert(c.clone()) {
                    fresh.push(c);
                }
            }
        }
        let mut next = Vec::new();
        for c in &fresh {
            for (f, _) in boundary_bar(&Chain::single(c.q(), c.entries().to_vec(), 1)).terms() {
                if rows.insert(f.clone()) {
                    next.push(f.clone());
                }
            }
        }
        frontier = next;
    }
    let row_index: Vec<BarTuple> = rows.into_iter().collect();
    let col_index: Vec<BarTuple> = cands.into_iter().collect();
    let mut a: Vec<SparseRow> = vec![SparseRow::new(); row_index.len()];
    for (j, c) in col_index.iter().enumerate() {
        for (f, v) in boundary_bar(&Chain::single(c.q(), c.entries().to_vec(), 1)).terms() {
            let i = row_index.binary_search(f).expect("row present");
            a[i].insert(j, v.clone());
        }
    }
    let rhs: Vec<BigInt> = row_index.iter().map(|t| b.coefficient(t)).collect();
    let x = solve_sparse(&a, &rhs, col_index.len()).ok_or(Error::LinearExhausted { depth, basis: col_index.len() })?;
    let mut z = Chain::zero();
    for (c, v) in col_index.iter().zip(x) {
        if !v.is_zero() {
            z.add_term(c.clone(), v);
        }
    }
    Ok(z)
}

/// A total cycle together with the lifts that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedCycle {
    pub cycle: Chain,
    pub certificates: Vec<LiftCertificate>,
}

/// Completes a top column `c_{1,r-1}` to a total cycle by solving
/// `∂_♮ c_{k+1} = (-1)^{k+1} ∂_♯ c_k` for `k = 1, ..., r-1`.
pub fn complete_column(k: &FreeSimplicialGroup, top: &Chain, opts: LiftOptions) -> Result<LiftedCycle> {
    let top = normalize(k, top);
    let mut cycle = top.clone();
    let mut certificates = Vec::new();
    let mut current = top;
    let mut bar = 1usize;
    while !current.is_zero() {
        let q = current.terms().next().expect("nonzero").0.q();
        if q == 0 {
            break;
        }
        let mut target = normalize(k, &boundary_simp(k, &current));
        if bar.is_multiple_of(2) {
            target = target.negate();
        }
        let cert = lift_auto(&target, opts)?;
        current = normalize(k, &cert.solution);
        cycle = cycle.plus(&current);
        certificates.push(cert);
        bar += 1;
    }
    let d = total_boundary(k, &cycle);
    if !d.is_zero() {
        return Err(Error::NotACycle);
    }
    Ok(LiftedCycle { cycle, certificates })
}

/// `c = c_{2,0} + [r]` on a surface group.
pub fn surface_cycle(k: &FreeSimplicialGroup) -> Result<Chain> {
    Ok(surface_cycle_with_certificates(k, LiftOptions::default())?.cycle)
}

pub fn surface_cycle_with_certificates(k: &FreeSimplicialGroup, opts: LiftOptions) -> Result<LiftedCycle> {
    let r = base_of_degree(k, "r", 1)?;
    complete_column(k, &Chain::single(1, vec![Word::generator(r)], 1), opts)
}

/// `c = c_{3,0} + c_{2,1} + [σ]` on a three-complex group.
pub fn threefold_cycle(k: &FreeSimplicialGroup) -> Result<Chain> {
    Ok(threefold_cycle_with_certificates(k, LiftOptions::default())?.cycle)
}

pub fn threefold_cycle_with_certificates(k: &FreeSimplicialGroup, opts: LiftOptions) -> Result<LiftedCycle> {
    let sigma = base_of_degree(k, "sigma", 2)?;
    complete_column(k, &Chain::single(2, vec![Word::generator(sigma)], 1), opts)
}

fn base_of_degree(k: &FreeSimplicialGroup, name: &str, q: usize) -> Result<Generator> {
    match k.base(name) {
        Some(b) if b.degree == q => Ok(Generator::new(name)?),
        _ => Err(Error::Input(format!("complex has no degree-{q} generator `{name}`"))),
    }
}

/// A total cycle retracting to the cellular cycle `z` (degree at most 3).
pub fn cycle_from_cellular(z: &CellularChain, k: &FreeSimplicialGroup, y: &CellularComplex, opts: LiftOptions) -> Result<LiftedCycle> {
    if z.degree == 0 || z.degree > 3 {
        return Err(Error::Input(format!("cellular degree {} outside 1..=3", z.degree)));
    }
    // A nonzero cellular boundary is the abelianized obstruction to lifting.
    let dz = y.boundary(z)?;
    if !dz.is_zero() {
        let mut v = ExponentVector::default();
        for (cell, c) in &dz.coefficients {
            v.add(&Generator::new(cell).map_err(Error::Parse)?, *c);
        }
        return Err(Error::Obstruction(v));
    }
    let q = z.degree - 1;
    let mut top = Chain::zero();
    for (cell, c) in &z.coefficients {
        let g = base_of_degree(k, cell, q)?;
        top = top.plus(&Chain::single(q, vec![Word::generator(g)], *c));
    }
    complete_column(k, &top, opts)
}

/// `-1`, `0` or `1` times the single cell of `chain`, if it has that shape.
pub fn unit_multiple(chain: &CellularChain) -> Option<(String, i64)> {
    let mut it = chain.coefficients.iter();
    let (cell, c) = it.next()?;
    (it.next().is_none() && BigInt::from(*c).abs().is_one()).then(|| (cell.clone(), *c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::retract_to_cellular;
    use crate::simplicial::{builtin_surface, builtin_threefold, minimal_three_sphere, sphere_cross_circle_data};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn genus_one_five_terms() {
        let b = Chain::single(0, vec![w("x*y*x^-1*y^-1")], 1);
        let z = bar_lift(&b, LiftMethod::Telescoping, 0).unwrap();
        let expect = [
            (vec!["x", "y*x^-1*y^-1"], -1),
            (vec!["y", "x^-1*y^-1"], -1),
            (vec!["x^-1", "y^-1"], -1),
            (vec!["x", "x^-1"], 1),
            (vec!["y", "y^-1"], 1),
        ]
        .iter()
        .fold(Chain::zero(), |acc, (e, c)| acc.plus(&Chain::single(0, e.iter().map(|s| w(s)).collect(), *c)));
        assert_eq!(z, expect);
    }

    #[test]
    fn obstruction_and_zero() {
        let b = Chain::single(0, vec![w("x")], 1);
        match bar_lift(&b, LiftMethod::Telescoping, 0) {
            Err(Error::Obstruction(v)) => assert_eq!(v.to_string(), "{x:1}"),
            other => panic!("{other:?}"),
        }
        assert!(bar_lift(&Chain::zero(), LiftMethod::Linear, 3).unwrap().is_zero());
    }

    #[test]
    fn higher_lifts_agree_in_boundary() {
        // a 2-cycle: boundary of [x|y|x^-1]
        let b = boundary_bar(&Chain::single(0, vec![w("x"), w("y"), w("x^-1")], 1));
        for m in [LiftMethod::Telescoping, LiftMethod::Linear] {
            let z = bar_lift(&b, m, 3).unwrap();
            assert_eq!(boundary_bar(&z), b);
        }
    }

    #[test]
    fn surfaces() {
        for genus in 0..=2 {
            let k = builtin_surface(genus);
            let c = surface_cycle(&k).unwrap();
            assert!(total_boundary(&k, &c).is_zero());
            if genus == 0 {
                assert_eq!(c.len(), 1);
            }
        }
    }

    #[test]
    fn threefolds() {
        let s3 = minimal_three_sphere();
        let c = threefold_cycle(&s3).unwrap();
        assert_eq!(c.len(), 1);

        let k = builtin_threefold(&sphere_cross_circle_data()).unwrap();
        let lifted = threefold_cycle_with_certificates(&k, LiftOptions::default()).unwrap();
        assert!(total_boundary(&k, &lifted.cycle).is_zero());
        for cert in &lifted.certificates {
            cert.verify().unwrap();
        }
        let y = CellularComplex::from_kan(&k);
        let image = retract_to_cellular(&k, &y, &lifted.cycle).unwrap();
        assert_eq!(unit_multiple(&image).map(|(c, v)| (c, v.abs())), Some(("sigma".into(), 1)));

        let mut bad = sphere_cross_circle_data();
        bad.sigma_faces = ["r".into(), "1".into(), "1".into()];
        let k = builtin_threefold(&bad).unwrap();
        match threefold_cycle(&k) {
            Err(Error::Obstruction(v)) => assert_eq!(v.to_string(), "{r:1}"),
            other => panic!("{other:?}"),
        }
    }
}
