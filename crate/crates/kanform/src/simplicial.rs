//! Free simplicial groups given by generator-level face data.
//!
//! Only nondegenerate ("base") generators are stored. A degenerate generator
//! `s_{i1}...s_{ip} b` is materialized on demand and its faces follow from
//! the simplicial identities, so `K_q` is free on all degeneracies of base
//! generators of degree at most `q`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::words::{insert_degeneracy, Generator, Letter, Word};

/// Default truncation bound for stored degrees.
pub const DEFAULT_MAX_DEGREE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseGenerator {
    pub degree: usize,
    /// `faces[i] = d_i(g)`, words in degree `degree - 1`; empty in degree 0.
    pub faces: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeSimplicialGroup {
    bases: BTreeMap<Arc<str>, BaseGenerator>,
    max_degree: usize,
}

impl FreeSimplicialGroup {
    pub fn new(max_degree: usize) -> Self {
        FreeSimplicialGroup { bases: BTreeMap::new(), max_degree }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Adds a base generator. Faces are checked only by [`Self::check_identities`].
    pub fn add_generator(&mut self, name: &str, degree: usize, faces: Vec<Word>) -> Result<Generator> {
        let g = Generator::new(name)?;
        if self.bases.contains_key(name) {
            return Err(Error::InvalidComplex(format!("duplicate generator `{name}`")));
        }
        let expected = if degree == 0 { 0 } else { degree + 1 };
        if faces.len() != expected {
            return Err(Error::InvalidComplex(format!(
                "generator `{name}` of degree {degree} needs {expected} faces, got {}",
                faces.len()
            )));
        }
        self.bases.insert(g.base_arc().clone(), BaseGenerator { degree, faces });
        Ok(g)
    }

    pub fn base(&self, name: &str) -> Option<&BaseGenerator> {
        self.bases.get(name)
    }

    /// Base generators in degree `q`, sorted by name.
    pub fn base_generators(&self, q: usize) -> Vec<Generator> {
        self.bases.iter().filter(|(_, b)| b.degree == q).map(|(n, _)| Generator::from_parts(n.clone(), Vec::new())).collect()
    }

    pub fn generator_degree(&self, g: &Generator) -> Result<usize> {
        let b = self.bases.get(g.base()).ok_or_else(|| ParseError::UnknownGenerator(g.to_string()))?;
        Ok(b.degree + g.degeneracies().len())
    }

    /// All free generators of `K_q`: degeneracies of base generators.
    pub fn generators(&self, q: usize) -> Vec<Generator> {
        let mut out = Vec::new();
        for (name, b) in &self.bases {
            if b.degree > q {
                continue;
            }
            for chain in decreasing_subsets(q, q - b.degree) {
                out.push(Generator::from_parts(name.clone(), chain));
            }
        }
        out.sort();
        out
    }

    /// Checks every letter of `w` is a known generator of degree `q`.
    pub fn check_word(&self, q: usize, w: &Word) -> Result<()> {
        for l in w.letters() {
            let d = self.generator_degree(&l.generator)?;
            if d != q {
                return Err(Error::Mismatch(format!("generator `{}` has degree {d}, expected {q}", l.generator)));
            }
        }
        Ok(())
    }

    /// Parses a word and checks it lives in degree `q`.
    pub fn parse_word(&self, q: usize, text: &str) -> Result<Word> {
        let w: Word = text.parse()?;
        self.check_word(q, &w)?;
        Ok(w)
    }

    fn generator_face(&self, g: &Generator, i: usize) -> Word {
        let base = &self.bases[g.base()];
        face_of_chain(g.base_arc(), g.degeneracies(), i, &|j| base.faces[j].clone())
    }

    /// `d_i` on a word of degree `q`, extended homomorphically.
    pub fn apply_face(&self, q: usize, i: usize, w: &Word) -> Result<Word> {
        if q == 0 || i > q {
            return Err(Error::FaceIndex { degree: q, index: i });
        }
        self.check_word(q, w)?;
        Ok(self.face_unchecked(i, w))
    }

    pub(crate) fn face_unchecked(&self, i: usize, w: &Word) -> Word {
        w.substitute(|g| self.generator_face(g, i))
    }

    /// `s_j` on a word; images are the tagged degenerate generators.
    pub fn apply_degeneracy(&self, q: usize, j: usize, w: &Word) -> Result<Word> {
        if j > q {
            return Err(Error::FaceIndex { degree: q, index: j });
        }
        self.check_word(q, w)?;
        Ok(degenerate_word(j, w))
    }

    /// Whether `w ∈ K_q` lies in the image of `s_j`.
    pub(crate) fn in_degeneracy_image(&self, j: usize, w: &Word) -> bool {
        degenerate_word(j, &self.face_unchecked(j, w)) == *w
    }

    /// Verifies `d_i d_j = d_{j-1} d_i` (i < j) on every base generator up to
    /// `max_degree`, and that face words live in the right degree.
    pub fn check_identities(&self) -> Result<()> {
        for (name, b) in &self.bases {
            for (i, f) in b.faces.iter().enumerate() {
                self.check_word(b.degree - 1, f).map_err(|e| Error::SimplicialIdentity(format!("face d{i} of `{name}`: {e}")))?;
            }
            if b.degree < 2 || b.degree > self.max_degree {
                continue;
            }
            let q = b.degree;
            for j in 1..=q {
                for i in 0..j {
                    let lhs = self.face_unchecked(i, &b.faces[j]);
                    let rhs = self.face_unchecked(j - 1, &b.faces[i]);
                    if lhs != rhs {
                        return Err(Error::SimplicialIdentity(format!("d{i} d{j} {name} = {lhs} but d{} d{i} {name} = {rhs}", j - 1)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> KanJson {
        KanJson {
            schema_version: 1,
            max_degree: self.max_degree,
            generators: self
                .bases
                .iter()
                .map(|(n, b)| GeneratorJson { name: n.to_string(), degree: b.degree, faces: b.faces.clone() })
                .collect(),
        }
    }

    pub fn from_json(j: &KanJson) -> Result<Self> {
        let mut k = FreeSimplicialGroup::new(j.max_degree);
        for g in &j.generators {
            k.add_generator(&g.name, g.degree, g.faces.clone())?;
        }
        k.check_identities()?;
        Ok(k)
    }
}

/// Serialized form of a [`FreeSimplicialGroup`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct KanJson {
    pub schema_version: u32,
    pub max_degree: usize,
    pub generators: Vec<GeneratorJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: usize,
    pub faces: Vec<Word>,
}

pub(crate) fn degenerate_word(j: usize, w: &Word) -> Word {
    Word::reduce(w.letters().iter().map(|l| Letter { generator: l.generator.degenerate(j as u8), inverse: l.inverse }))
}

/// Strictly decreasing sequences of length `len` drawn from `0..q`.
fn decreasing_subsets(q: usize, len: usize) -> Vec<Vec<u8>> {
    fn rec(max_exclusive: usize, len: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if len == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in (len - 1..max_exclusive).rev() {
            prefix.push(v as u8);
            rec(v, len - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len <= q {
        rec(q, len, &mut Vec::new(), &mut out);
    }
    out
}

/// `d_i` applied to `s_chain(b)`, pushing the face through the degeneracies
/// with the simplicial identities; `base_face(i)` supplies `d_i b`.
fn face_of_chain(base: &Arc<str>, chain: &[u8], i: usize, base_face: &dyn Fn(usize) -> Word) -> Word {
    match chain.split_first() {
        None => base_face(i),
        Some((&j, rest)) => {
            let j = j as usize;
            if i < j {
                degenerate_word(j - 1, &face_of_chain(base, rest, i, base_face))
            } else if i == j || i == j + 1 {
                Word::generator(Generator::from_parts(base.clone(), rest.to_vec()))
            } else {
                degenerate_word(j, &face_of_chain(base, rest, i - 1, base_face))
            }
        }
    }
}

/// Simplicial model of the closed orientable surface of genus `genus`:
/// `x_j, y_j` in degree 0 and `r` in degree 1 with `d_0 r = Π[x_j, y_j]`,
/// `d_1 r = 1`.
pub fn builtin_surface(genus: usize) -> FreeSimplicialGroup {
    let mut k = FreeSimplicialGroup::new(DEFAULT_MAX_DEGREE);
    let mut relator = Word::identity();
    for j in 1..=genus {
        let x = k.add_generator(&format!("x{j}"), 0, vec![]).expect("fresh name");
        let y = k.add_generator(&format!("y{j}"), 0, vec![]).expect("fresh name");
        relator = relator.multiply(&Word::commutator(&Word::generator(x), &Word::generator(y)));
    }
    k.add_generator("r", 1, vec![relator, Word::identity()]).expect("fresh name");
    k
}

/// Presentation data of a 3-complex with one 3-cell.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ThreefoldData {
    pub generators: Vec<String>,
    pub relators: Vec<RelatorSpec>,
    /// Words in `K_1` for `d_0 σ, d_1 σ, d_2 σ`.
    pub sigma_faces: [String; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum RelatorSpec {
    Named { name: String, word: String },
    Word(String),
}

/// Builds the free simplicial group of a 3-complex from generators, relators
/// (degree 1, `d_0 r_j` = relator word, `d_1 r_j = 1`) and a degree-2
/// generator `sigma` with the supplied faces.
pub fn builtin_threefold(data: &ThreefoldData) -> Result<FreeSimplicialGroup> {
    let mut k = FreeSimplicialGroup::new(DEFAULT_MAX_DEGREE);
    for g in &data.generators {
        k.add_generator(g, 0, vec![])?;
    }
    for (i, r) in data.relators.iter().enumerate() {
        let (name, word) = match r {
            RelatorSpec::Named { name, word } => (name.clone(), word.clone()),
            RelatorSpec::Word(w) => (format!("r{}", i + 1), w.clone()),
        };
        let w = k.parse_word(0, &word)?;
        k.add_generator(&name, 1, vec![w, Word::identity()])?;
    }
    let faces = data.sigma_faces.iter().map(|s| k.parse_word(1, s)).collect::<Result<Vec<_>>>()?;
    k.add_generator("sigma", 2, faces)?;
    k.check_identities()?;
    Ok(k)
}

/// The minimal 3-sphere: a single degree-2 generator with trivial faces.
pub fn minimal_three_sphere() -> FreeSimplicialGroup {
    builtin_threefold(&ThreefoldData { generators: vec![], relators: vec![], sigma_faces: ["1".into(), "1".into(), "1".into()] })
        .expect("trivial faces satisfy the identities")
}

/// `S^2 x S^1` with cells `x` (1-cell), `r` (2-cell with trivial attaching
/// word) and the 3-cell attached along the identity `r (s0 x) r^-1 (s0 x)^-1`.
pub fn sphere_cross_circle_data() -> ThreefoldData {
    ThreefoldData {
        generators: vec!["x".into()],
        relators: vec![RelatorSpec::Named { name: "r".into(), word: "1".into() }],
        sigma_faces: ["r*s0.x*r^-1*s0.x^-1".into(), "1".into(), "1".into()],
    }
}

/// Complex descriptor: `{"kind":"surface","genus":ℓ}`, a threefold
/// presentation, or a reduced simplicial set by nondegenerate simplices.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComplexDescriptor {
    Surface {
        genus: usize,
    },
    Threefold(ThreefoldData),
    SimplicialSet {
        simplices: BTreeMap<String, usize>,
        faces: BTreeMap<String, Vec<String>>,
        /// Degenerate simplices are implicit (`s_i.y` references); only an
        /// empty map is accepted.
        #[serde(default)]
        degeneracies: BTreeMap<String, serde_json::Value>,
    },
}

impl ComplexDescriptor {
    pub fn build(&self) -> Result<FreeSimplicialGroup> {
        match self {
            ComplexDescriptor::Surface { genus } => Ok(builtin_surface(*genus)),
            ComplexDescriptor::Threefold(data) => builtin_threefold(data),
            ComplexDescriptor::SimplicialSet { simplices, faces, degeneracies } => {
                if let Some(name) = degeneracies.keys().next() {
                    return Err(Error::Input(format!(
                        "explicit degeneracy data for `{name}`: degenerate simplices are written as s_i.y references"
                    )));
                }
                kan_loop_group(&ReducedSimplicialSet::new(simplices, faces)?, DEFAULT_MAX_DEGREE)
            }
        }
    }
}

/// A reduced simplicial set given by its nondegenerate simplices.
///
/// Faces are references `s_{i1}...s_{ip}.y` to (possibly degenerate)
/// simplices, written with the generator syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSimplicialSet {
    simplices: BTreeMap<Arc<str>, (usize, Vec<Generator>)>,
    vertex: Arc<str>,
}

impl ReducedSimplicialSet {
    pub fn new(simplices: &BTreeMap<String, usize>, faces: &BTreeMap<String, Vec<String>>) -> Result<Self> {
        let vertices: Vec<&String> = simplices.iter().filter(|(_, &d)| d == 0).map(|(n, _)| n).collect();
        if vertices.len() != 1 {
            return Err(Error::InvalidComplex(format!("reduced simplicial set needs exactly one vertex, found {}", vertices.len())));
        }
        let mut map = BTreeMap::new();
        for (name, &deg) in simplices {
            Generator::new(name)?;
            let fs = match faces.get(name) {
                Some(fs) => fs.iter().map(|f| f.parse::<Generator>()).collect::<Result<Vec<_>, ParseError>>()?,
                None => Vec::new(),
            };
            let expected = if deg == 0 { 0 } else { deg + 1 };
            if fs.len() != expected {
                return Err(Error::InvalidComplex(format!("simplex `{name}` of degree {deg} needs {expected} faces")));
            }
            map.insert(Arc::from(name.as_str()), (deg, fs));
        }
        let set = ReducedSimplicialSet { simplices: map, vertex: Arc::from(vertices[0].as_str()) };
        set.check_identities()?;
        Ok(set)
    }

    /// The vertex alone.
    pub fn point() -> Self {
        let simplices = BTreeMap::from([("v".to_string(), 0)]);
        Self::new(&simplices, &BTreeMap::new()).expect("valid")
    }

    /// One vertex and one nondegenerate edge.
    pub fn circle() -> Self {
        let simplices = BTreeMap::from([("v".to_string(), 0), ("a".to_string(), 1)]);
        let faces = BTreeMap::from([("a".to_string(), vec!["v".to_string(), "v".to_string()])]);
        Self::new(&simplices, &faces).expect("valid")
    }

    /// One vertex and one nondegenerate 2-simplex with totally degenerate faces.
    pub fn sphere2() -> Self {
        let simplices = BTreeMap::from([("v".to_string(), 0), ("t".to_string(), 2)]);
        let faces = BTreeMap::from([("t".to_string(), vec!["s0.v".to_string(); 3])]);
        Self::new(&simplices, &faces).expect("valid")
    }

    fn degree_of(&self, r: &Generator) -> Result<usize> {
        let (d, _) = self.simplices.get(r.base()).ok_or_else(|| ParseError::UnknownGenerator(r.to_string()))?;
        Ok(d + r.degeneracies().len())
    }

    /// `d_i` of a simplex reference.
    fn face(&self, r: &Generator, i: usize) -> Generator {
        fn rec(set: &ReducedSimplicialSet, base: &Arc<str>, chain: &[u8], i: usize) -> Generator {
            match chain.split_first() {
                None => set.simplices[base].1[i].clone(),
                Some((&j, rest)) => {
                    let j = j as usize;
                    if i < j {
                        rec(set, base, rest, i).degenerate(j as u8 - 1)
                    } else if i == j || i == j + 1 {
                        Generator::from_parts(base.clone(), rest.to_vec())
                    } else {
                        rec(set, base, rest, i - 1).degenerate(j as u8)
                    }
                }
            }
        }
        rec(self, r.base_arc(), r.degeneracies(), i)
    }

    pub fn check_identities(&self) -> Result<()> {
        for (name, (deg, fs)) in &self.simplices {
            for f in fs {
                let d = self.degree_of(f)?;
                if d + 1 != *deg {
                    return Err(Error::SimplicialIdentity(format!("face `{f}` of `{name}` has degree {d}")));
                }
            }
            if *deg < 2 {
                continue;
            }
            for j in 1..=*deg {
                for i in 0..j {
                    let lhs = self.face(&fs[j], i);
                    let rhs = self.face(&fs[i], j - 1);
                    if lhs != rhs {
                        return Err(Error::SimplicialIdentity(format!("d{i} d{j} {name} = {lhs} but d{} d{i} {name} = {rhs}", j - 1)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Nondegenerate simplices of degree `n`, sorted.
    pub fn nondegenerate(&self, n: usize) -> Vec<String> {
        self.simplices.iter().filter(|(_, (d, _))| *d == n).map(|(name, _)| name.to_string()).collect()
    }

    /// Class of a simplex of degree `n >= 1` in `GX_{n-1}`: trivial on the
    /// image of `s_0`, otherwise the generator with shifted degeneracies.
    fn loop_class(&self, r: &Generator) -> Word {
        let chain = r.degeneracies();
        if r.base() == &*self.vertex || chain.last() == Some(&0) {
            return Word::identity();
        }
        let shifted = chain.iter().map(|j| j - 1).collect();
        Word::generator(Generator::from_parts(r.base_arc().clone(), shifted))
    }
}

/// Kan's loop group: `K_n` is free on the nondegenerate `(n+1)`-simplices,
/// with `d_0 x̄ = \overline{d_1 x} (\overline{d_0 x})^{-1}` and
/// `d_i x̄ = \overline{d_{i+1} x}` for `i >= 1`.
pub fn kan_loop_group(x: &ReducedSimplicialSet, max_degree: usize) -> Result<FreeSimplicialGroup> {
    if max_degree < 1 {
        return Err(Error::Input("max_degree must be at least 1".into()));
    }
    let mut k = FreeSimplicialGroup::new(max_degree);
    for (name, (deg, faces)) in &x.simplices {
        if *deg == 0 || *deg > max_degree + 1 {
            continue;
        }
        let n = deg - 1;
        let fs = if n == 0 {
            vec![]
        } else {
            let mut fs = Vec::with_capacity(n + 1);
            fs.push(x.loop_class(&faces[1]).multiply(&x.loop_class(&faces[0]).invert()));
            for i in 1..=n {
                fs.push(x.loop_class(&faces[i + 1]));
            }
            fs
        };
        k.add_generator(name, n, fs)?;
    }
    k.check_identities()?;
    Ok(k)
}

/// Degeneracy chain in normal form from an arbitrary application order
/// (innermost first).
pub fn degeneracy_chain(innermost_first: &[u8]) -> Vec<u8> {
    innermost_first.iter().fold(Vec::new(), |chain, &j| insert_degeneracy(j, &chain))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn complex_descriptors() {
        let d: ComplexDescriptor = serde_json::from_str(r#"{"kind":"surface","genus":2}"#).unwrap();
        assert_eq!(d.build().unwrap(), builtin_surface(2));
        let t = r#"{"kind":"threefold","generators":["x"],"relators":[{"name":"r","word":"1"}],
            "sigma_faces":["r*s0.x*r^-1*s0.x^-1","1","1"]}"#;
        let d: ComplexDescriptor = serde_json::from_str(t).unwrap();
        assert_eq!(d.build().unwrap(), builtin_threefold(&sphere_cross_circle_data()).unwrap());
        let bad = t.replace(r#""1","1"]"#, r#""s0.x","1"]"#);
        let d: ComplexDescriptor = serde_json::from_str(&bad).unwrap();
        let err = d.build().unwrap_err();
        assert!(matches!(err, Error::SimplicialIdentity(_)), "{err:?}");
        let c = r#"{"kind":"simplicial_set","simplices":{"v":0,"a":1},"faces":{"a":["v","v"]}}"#;
        let d: ComplexDescriptor = serde_json::from_str(c).unwrap();
        assert_eq!(d.build().unwrap().generators(0).len(), 1);
        let e = c.replace("}}", r#"},"degeneracies":{"a":[]}}"#);
        let d: ComplexDescriptor = serde_json::from_str(&e).unwrap();
        assert!(matches!(d.build(), Err(Error::Input(_))));
    }

    #[test]
    fn surface_faces() {
        let k = builtin_surface(1);
        let r = w("r");
        assert!(k.apply_face(1, 1, &r).unwrap().is_identity());
        assert_eq!(k.apply_face(1, 0, &r).unwrap(), w("x1*y1*x1^-1*y1^-1"));
        assert!(k.apply_face(1, 0, &Word::identity()).unwrap().is_identity());
        assert!(matches!(k.apply_face(1, 2, &r), Err(Error::FaceIndex { .. })));

        let k0 = builtin_surface(0);
        assert!(k0.base_generators(0).is_empty());
        assert!(k0.apply_face(1, 0, &r).unwrap().is_identity());

        let k2 = builtin_surface(2);
        let d0 = k2.apply_face(1, 0, &r).unwrap();
        assert_eq!(d0, w("x1*y1*x1^-1*y1^-1*x2*y2*x2^-1*y2^-1"));
        assert!(d0.exponent_sums().is_zero());
    }

    #[test]
    fn degenerate_faces() {
        let k = builtin_surface(1);
        let s0x = w("s0.x1");
        assert_eq!(k.apply_face(1, 0, &s0x).unwrap(), w("x1"));
        assert_eq!(k.apply_face(1, 1, &s0x).unwrap(), w("x1"));
        // d_0 s_1 r = s_0 d_0 r
        let s1r = w("s1.r");
        assert_eq!(k.apply_face(2, 0, &s1r).unwrap(), degenerate_word(0, &w("x1*y1*x1^-1*y1^-1")));
        assert_eq!(k.apply_face(2, 1, &s1r).unwrap(), w("r"));
        assert_eq!(k.apply_face(2, 2, &s1r).unwrap(), w("r"));
    }

    #[test]
    fn generator_enumeration() {
        let k = builtin_surface(1);
        let names: Vec<String> = k.generators(1).iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["r", "s0.x1", "s0.y1"]);
        // degree 2: s0.r, s1.r, s1.s0.x1, s1.s0.y1
        assert_eq!(k.generators(2).len(), 4);
    }

    #[test]
    fn identities_on_degenerates() {
        let k = builtin_surface(2);
        for q in 2..=4 {
            for g in k.generators(q) {
                let gw = Word::generator(g.clone());
                for j in 1..=q {
                    for i in 0..j {
                        let lhs = k.face_unchecked(i, &k.face_unchecked(j, &gw));
                        let rhs = k.face_unchecked(j - 1, &k.face_unchecked(i, &gw));
                        assert_eq!(lhs, rhs, "{g} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn threefolds() {
        let s3 = minimal_three_sphere();
        assert_eq!(s3.base_generators(2).len(), 1);
        assert!(builtin_threefold(&sphere_cross_circle_data()).is_ok());

        // d0 d0 sigma must equal d0 d1 sigma
        let bad = ThreefoldData {
            generators: vec!["x".into()],
            relators: vec![RelatorSpec::Word("x*x".into())],
            sigma_faces: ["r1".into(), "1".into(), "1".into()],
        };
        assert!(matches!(builtin_threefold(&bad), Err(Error::SimplicialIdentity(_))));
    }

    #[test]
    fn kan_examples() {
        let k = kan_loop_group(&ReducedSimplicialSet::point(), 3).unwrap();
        assert!(k.generators(0).is_empty() && k.generators(2).is_empty());

        let k = kan_loop_group(&ReducedSimplicialSet::circle(), 3).unwrap();
        assert_eq!(k.base_generators(0).len(), 1);
        for q in 1..=3 {
            assert!(k.base_generators(q).is_empty());
            assert!(k.generators(q).iter().all(|g| g.is_degenerate()));
        }

        let k = kan_loop_group(&ReducedSimplicialSet::sphere2(), 3).unwrap();
        assert!(k.generators(0).is_empty());
        assert_eq!(k.base_generators(1).len(), 1);
        let t = w("t");
        assert!(k.apply_face(1, 0, &t).unwrap().is_identity());
        assert!(k.apply_face(1, 1, &t).unwrap().is_identity());
    }

    #[test]
    fn non_reduced_rejected() {
        let simplices = BTreeMap::from([("v".to_string(), 0), ("u".to_string(), 0)]);
        assert!(ReducedSimplicialSet::new(&simplices, &BTreeMap::new()).is_err());
    }
}
