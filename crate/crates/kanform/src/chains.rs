//! Integer bar bicomplex `C_♮(K_♯)` of a free simplicial group.
//!
//! A term `[w_1|...|w_k]` in simplicial degree `q` has bidegree `(k, q)` and
//! total degree `k + q`. Bar degree 0 is collapsed. No stored tuple has an
//! identity entry, and no coefficient is zero.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{invariant_factors, rank, IntMatrix};
use crate::simplicial::FreeSimplicialGroup;
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BarTuple {
    q: usize,
    entries: Vec<Word>,
}

impl BarTuple {
    /// `None` if an entry is the identity (the tuple is zero) or `entries` is empty.
    pub fn new(q: usize, entries: Vec<Word>) -> Option<Self> {
        if entries.is_empty() || entries.iter().any(Word::is_identity) {
            None
        } else {
            Some(BarTuple { q, entries })
        }
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn entries(&self) -> &[Word] {
        &self.entries
    }
}

impl Ord for BarTuple {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.k(), self.q, &self.entries).cmp(&(other.k(), other.q, &other.entries))
    }
}

impl PartialOrd for BarTuple {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BarTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, w) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "]_{}", self.q)
    }
}

/// Sparse integer combination of bar tuples, possibly of mixed bidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    terms: BTreeMap<BarTuple, BigInt>,
}

/// A chain of one bidegree.
pub type BiChain = Chain;
/// A chain of one total degree, stored as the sum of its components.
pub type TotalChain = Chain;

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    /// `coeff · [entries]` in degree `q`; zero if an entry is the identity.
    pub fn single(q: usize, entries: Vec<Word>, coeff: impl Into<BigInt>) -> Self {
        let mut c = Chain::zero();
        if let Some(t) = BarTuple::new(q, entries) {
            c.add_term(t, coeff.into());
        }
        c
    }

    pub fn add_term(&mut self, t: BarTuple, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_entries(&mut self, q: usize, entries: Vec<Word>, coeff: &BigInt) {
        if let Some(t) = BarTuple::new(q, entries) {
            self.add_term(t, coeff.clone());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BarTuple, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coefficient(&self, t: &BarTuple) -> BigInt {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    pub fn plus(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &Chain) -> Chain {
        self.plus(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, s: &BigInt) -> Chain {
        if s.is_zero() {
            return Chain::zero();
        }
        Chain { terms: self.terms.iter().map(|(t, c)| (t.clone(), c * s)).collect() }
    }

    pub fn negate(&self) -> Chain {
        self.scale(&-BigInt::one())
    }

    /// The `(k, q)` component.
    pub fn component(&self, k: usize, q: usize) -> Chain {
        Chain { terms: self.terms.iter().filter(|(t, _)| t.k() == k && t.q == q).map(|(t, c)| (t.clone(), c.clone())).collect() }
    }

    /// Bidegrees `(k, q)` with nonzero components, ascending.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.terms.keys().map(|t| (t.k(), t.q)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Total degree if homogeneous; `None` for zero or mixed chains.
    pub fn total_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|t| t.k() + t.q);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Checks all entries are words of the right degree in `k`.
    pub fn check(&self, k: &FreeSimplicialGroup) -> Result<()> {
        for t in self.terms.keys() {
            for w in &t.entries {
                k.check_word(t.q, w)?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Vec<ChainTermJson> {
        self.terms.iter().map(|(t, c)| ChainTermJson { coeff: c.clone(), k: t.k(), q: t.q, tuple: t.entries.clone() }).collect()
    }

    pub fn from_json(terms: &[ChainTermJson]) -> Result<Chain> {
        let mut c = Chain::zero();
        for term in terms {
            if term.tuple.len() != term.k {
                return Err(Error::Input(format!("term declares k={} but has {} entries", term.k, term.tuple.len())));
            }
            c.add_entries(term.q, term.tuple.clone(), &term.coeff);
        }
        Ok(c)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let mag = c.abs();
            if i > 0 {
                write!(f, " ")?;
            }
            if mag.is_one() {
                write!(f, "{sign}{t}")?;
            } else {
                write!(f, "{sign}{mag}{t}")?;
            }
        }
        Ok(())
    }
}

/// One serialized term; fields are emitted in the order `coeff, k, q, tuple`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainTermJson {
    #[serde(with = "coeff_serde")]
    pub coeff: BigInt,
    pub k: usize,
    pub q: usize,
    pub tuple: Vec<Word>,
}

impl Serialize for Chain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<ChainTermJson>::deserialize(d)?;
        Chain::from_json(&terms).map_err(serde::de::Error::custom)
    }
}

/// Coefficients are JSON integers; decimal strings are accepted on input.
mod coeff_serde {
    use super::*;

    pub fn serialize<S: serde::Serializer>(c: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        match c.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => Err(serde::ser::Error::custom(format!("coefficient {c} exceeds 64 bits"))),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(BigInt::from(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

fn sign(e: usize) -> BigInt {
    if e.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Reduced inhomogeneous bar differential `∂_♮`; zero on bar degree 1.
pub fn boundary_bar(c: &Chain) -> Chain {
    let mut out = Chain::zero();
    for (t, coeff) in &c.terms {
        let k = t.k();
        if k < 2 {
            continue;
        }
        let e = &t.entries;
        out.add_entries(t.q, e[1..].to_vec(), coeff);
        for i in 1..k {
            let mut v = Vec::with_capacity(k - 1);
            v.extend_from_slice(&e[..i - 1]);
            v.push(e[i - 1].multiply(&e[i]));
            v.extend_from_slice(&e[i + 1..]);
            out.add_entries(t.q, v, &(coeff * sign(i)));
        }
        out.add_entries(t.q, e[..k - 1].to_vec(), &(coeff * sign(k)));
    }
    out
}

/// `∂_♯ = Σ_p (-1)^p d_p` entrywise; zero in simplicial degree 0. The output is
/// not ♯-normalized.
pub fn boundary_simp(k: &FreeSimplicialGroup, c: &Chain) -> Chain {
    let mut out = Chain::zero();
    for (t, coeff) in &c.terms {
        if t.q == 0 {
            continue;
        }
        for p in 0..=t.q {
            let v = t.entries.iter().map(|w| k.face_unchecked(p, w)).collect();
            out.add_entries(t.q - 1, v, &(coeff * sign(p)));
        }
    }
    out
}

/// Whether all entries lie in the image of one `s_j`.
pub fn is_jointly_degenerate(k: &FreeSimplicialGroup, t: &BarTuple) -> bool {
    (0..t.q).any(|j| t.entries.iter().all(|w| k.in_degeneracy_image(j, w)))
}

/// ♯-normalization: jointly degenerate tuples are projected to zero.
pub fn normalize(k: &FreeSimplicialGroup, c: &Chain) -> Chain {
    Chain { terms: c.terms.iter().filter(|(t, _)| !is_jointly_degenerate(k, t)).map(|(t, v)| (t.clone(), v.clone())).collect() }
}

/// `∂ = ∂_♮ + (-1)^k ∂_♯` without normalizing the result.
pub fn total_boundary_raw(k: &FreeSimplicialGroup, c: &Chain) -> Chain {
    let mut out = boundary_bar(c);
    for (bk, q) in c.bidegrees() {
        if q == 0 {
            continue;
        }
        let part = boundary_simp(k, &c.component(bk, q));
        out = out.plus(&part.scale(&sign(bk)));
    }
    out
}

/// Total differential on ♯-normalized chains; the output is ♯-normalized.
pub fn total_boundary(k: &FreeSimplicialGroup, c: &Chain) -> Chain {
    normalize(k, &total_boundary_raw(k, c))
}

/// Cell data of a CW complex with integer boundary matrices.
///
/// `boundaries[d]` is the matrix of `∂_d : C_d → C_{d-1}` (rows indexed by
/// `(d-1)`-cells); `boundaries[0]` is the empty map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellularComplex {
    pub cells: Vec<Vec<String>>,
    pub boundaries: Vec<Vec<Vec<i64>>>,
}

/// Sparse cellular chain: cell name → coefficient, per degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellularChain {
    pub degree: usize,
    pub coefficients: BTreeMap<String, i64>,
}

impl CellularChain {
    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(|c| *c == 0)
    }

    fn add(&mut self, cell: &str, c: i64) {
        let e = self.coefficients.entry(cell.to_string()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coefficients.remove(cell);
        }
    }
}

/// Homology of one degree: `ℤ^free_rank ⊕ ⊕ ℤ/t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "H_{} = {}", self.degree, parts.join(" + "))
    }
}

fn base_exponent_sums(k: &FreeSimplicialGroup, w: &Word) -> BTreeMap<String, i64> {
    let mut out = BTreeMap::new();
    for (g, n) in w.exponent_sums().iter() {
        if !g.is_degenerate() && *n != 0 && k.base(g.base()).is_some() {
            *out.entry(g.base().to_string()).or_insert(0) += n;
        }
    }
    out
}

impl CellularComplex {
    /// The complex `Y` whose `(q+1)`-cells are the base generators of `K_q`
    /// plus one 0-cell `*`, with `∂ g = -Σ_p (-1)^p ε(d_p g)`.
    pub fn from_kan(k: &FreeSimplicialGroup) -> Self {
        let top = k.max_degree();
        let mut cells = vec![vec!["*".to_string()]];
        for q in 0..=top {
            cells.push(k.base_generators(q).iter().map(|g| g.to_string()).collect());
        }
        while cells.len() > 1 && cells.last().is_some_and(Vec::is_empty) {
            cells.pop();
        }
        let mut boundaries = vec![Vec::new()];
        for d in 1..cells.len() {
            let rows = cells[d - 1].len();
            let mut m = vec![vec![0i64; cells[d].len()]; rows];
            if d >= 2 {
                for (col, name) in cells[d].iter().enumerate() {
                    let b = k.base(name).expect("cell from generator");
                    for (p, face) in b.faces.iter().enumerate() {
                        let s = if p % 2 == 0 { -1 } else { 1 };
                        for (g, n) in base_exponent_sums(k, face) {
                            let row = cells[d - 1].iter().position(|c| *c == g).expect("face in complex");
                            m[row][col] += s * n;
                        }
                    }
                }
            }
            boundaries.push(m);
        }
        CellularComplex { cells, boundaries }
    }

    pub fn dimension(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    fn matrix(&self, d: usize) -> IntMatrix {
        if d == 0 || d >= self.cells.len() {
            let rows = if d == 0 { 0 } else { self.cells.get(d - 1).map_or(0, Vec::len) };
            return IntMatrix::zeros(rows, self.cells.get(d).map_or(0, Vec::len));
        }
        let mut m = IntMatrix::zeros(self.cells[d - 1].len(), self.cells[d].len());
        for (i, row) in self.boundaries[d].iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells.is_empty() || self.boundaries.len() != self.cells.len() {
            return Err(Error::InvalidComplex("one boundary matrix per cell degree required".into()));
        }
        for d in 1..self.cells.len() {
            let m = &self.boundaries[d];
            if m.len() != self.cells[d - 1].len() || m.iter().any(|r| r.len() != self.cells[d].len()) {
                return Err(Error::InvalidComplex(format!("boundary matrix {d} has the wrong shape")));
            }
        }
        for d in 2..self.cells.len() {
            let prod = self.matrix(d - 1).mul(&self.matrix(d));
            if (0..prod.rows()).any(|i| (0..prod.cols()).any(|j| !prod[(i, j)].is_zero())) {
                return Err(Error::InvalidComplex(format!("boundary squares to nonzero in degree {d}")));
            }
        }
        Ok(())
    }

    pub fn boundary(&self, z: &CellularChain) -> Result<CellularChain> {
        let d = z.degree;
        let mut out = CellularChain { degree: d.saturating_sub(1), coefficients: BTreeMap::new() };
        if d == 0 || d >= self.cells.len() {
            return Ok(out);
        }
        for (cell, c) in &z.coefficients {
            let col = self.cells[d].iter().position(|x| x == cell).ok_or_else(|| Error::Mismatch(format!("no {d}-cell `{cell}`")))?;
            for (row, name) in self.cells[d - 1].iter().enumerate() {
                let v = self.boundaries[d][row][col];
                if v != 0 {
                    out.add(name, v * c);
                }
            }
        }
        Ok(out)
    }
}

/// Projection onto cellular chains: keeps bar degree 1 and takes exponent
/// sums on nondegenerate generators, landing in `C_{q+1}(Y)`.
pub fn retract_to_cellular(k: &FreeSimplicialGroup, y: &CellularComplex, c: &Chain) -> Result<CellularChain> {
    let degree = c.total_degree().unwrap_or(0);
    let mut out = CellularChain { degree, coefficients: BTreeMap::new() };
    for (t, coeff) in &c.terms {
        if t.k() != 1 {
            continue;
        }
        let coeff = coeff.to_i64().ok_or_else(|| Error::Numerical("coefficient exceeds 64 bits".into()))?;
        for (g, n) in base_exponent_sums(k, &t.entries[0]) {
            let known = y.cells.get(t.q + 1).is_some_and(|cs| cs.contains(&g));
            if !known {
                return Err(Error::Mismatch(format!("generator `{g}` of degree {} is not a {}-cell", t.q, t.q + 1)));
            }
            out.add(&g, n * coeff);
        }
    }
    Ok(out)
}

/// Homology of a cellular complex, one group per degree.
pub fn cellular_homology(y: &CellularComplex) -> Vec<HomologyGroup> {
    (0..y.cells.len())
        .map(|d| {
            let n = y.cells[d].len();
            let rank_out = rank(&y.matrix(d));
            let into = y.matrix(d + 1);
            let factors = invariant_factors(&into);
            let rank_in = factors.len();
            HomologyGroup { degree: d, free_rank: n - rank_out - rank_in, torsion: factors.into_iter().filter(|f| !f.is_one()).collect() }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{builtin_surface, builtin_threefold, RelatorSpec, ThreefoldData};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn bar_examples() {
        let c = Chain::single(0, vec![w("x"), w("x^-1")], 1);
        let expect = Chain::single(0, vec![w("x^-1")], 1).plus(&Chain::single(0, vec![w("x")], 1));
        assert_eq!(boundary_bar(&c), expect);

        let c = Chain::single(0, vec![w("x"), w("y")], 1);
        let expect = Chain::single(0, vec![w("y")], 1).minus(&Chain::single(0, vec![w("x*y")], 1)).plus(&Chain::single(0, vec![w("x")], 1));
        assert_eq!(boundary_bar(&c), expect);
    }

    #[test]
    fn simp_examples() {
        let k = builtin_surface(1);
        let r = Chain::single(1, vec![w("r")], 1);
        assert_eq!(boundary_simp(&k, &r), Chain::single(0, vec![w("x1*y1*x1^-1*y1^-1")], 1));
        let s0x = Chain::single(1, vec![w("s0.x1")], 1);
        assert!(boundary_simp(&k, &s0x).is_zero());
        assert!(normalize(&k, &s0x).is_zero());
        // product of degenerates from different s_j is not jointly degenerate
        let mixed = Chain::single(2, vec![w("s0.r*s1.r")], 1);
        assert_eq!(normalize(&k, &mixed), mixed);
    }

    #[test]
    fn json_layout() {
        let c = Chain::single(0, vec![w("x"), w("y^-1")], -2);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"[{"coeff":-2,"k":2,"q":0,"tuple":["x","y^-1"]}]"#);
        let back: Chain = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn homology_examples() {
        let h = cellular_homology(&CellularComplex::from_kan(&builtin_surface(2)));
        let ranks: Vec<usize> = h.iter().map(|g| g.free_rank).collect();
        assert_eq!(ranks, vec![1, 4, 1]);

        let rp2 = builtin_threefold(&ThreefoldData {
            generators: vec!["x".into()],
            relators: vec![RelatorSpec::Word("x*x".into())],
            sigma_faces: ["1".into(), "1".into(), "1".into()],
        })
        .unwrap();
        let y = CellularComplex::from_kan(&rp2);
        y.validate().unwrap();
        let h = cellular_homology(&y);
        assert_eq!(h[1].free_rank, 0);
        assert_eq!(h[1].torsion, vec![BigInt::from(2)]);
        assert_eq!(h[3].free_rank, 1);
    }
}
