//! Closed-tensor words over an alphabet of representations, and free
//! dg-categories on dg-graphs truncated by path length.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::exactla::{CochainComplex, Rational, SparseMatrix};
use crate::group::FiniteGroup;
use crate::koszul;
use crate::repcat::Representation;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Word {
    One,
    Zero,
    Leaf(String),
    Tensor(Box<Word>, Box<Word>),
    Hom(Box<Word>, Box<Word>),
    Oplus(Box<Word>, Box<Word>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordOp {
    Tensor,
    Hom,
    Oplus,
}

impl WordOp {
    pub const ALL: [WordOp; 3] = [WordOp::Tensor, WordOp::Hom, WordOp::Oplus];

    fn keyword(self) -> &'static str {
        match self {
            WordOp::Tensor => "tensor",
            WordOp::Hom => "hom",
            WordOp::Oplus => "oplus",
        }
    }
}

impl Word {
    pub fn leaf(name: &str) -> Word {
        Word::Leaf(name.to_string())
    }

    pub fn node(op: WordOp, x: Word, y: Word) -> Word {
        let (x, y) = (Box::new(x), Box::new(y));
        match op {
            WordOp::Tensor => Word::Tensor(x, y),
            WordOp::Hom => Word::Hom(x, y),
            WordOp::Oplus => Word::Oplus(x, y),
        }
    }

    pub fn tensor(x: Word, y: Word) -> Word {
        Word::node(WordOp::Tensor, x, y)
    }

    pub fn hom(x: Word, y: Word) -> Word {
        Word::node(WordOp::Hom, x, y)
    }

    pub fn oplus(x: Word, y: Word) -> Word {
        Word::node(WordOp::Oplus, x, y)
    }

    /// Parses `1`, `0`, leaf names, `tensor(x,y)`, `hom(x,y)` and `oplus(x,y)`.
    pub fn parse(s: &str) -> Result<Word> {
        let mut p = Parser { src: s, pos: 0 };
        let w = p.word()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(Error::Parse(format!("trailing input at byte {} in {s:?}", p.pos)));
        }
        Ok(w)
    }

    pub fn depth(&self) -> usize {
        match self {
            Word::One | Word::Zero | Word::Leaf(_) => 0,
            Word::Tensor(x, y) | Word::Hom(x, y) | Word::Oplus(x, y) => 1 + x.depth().max(y.depth()),
        }
    }

    /// Leaf names in left-to-right order.
    pub fn leaves(&self) -> Vec<&str> {
        match self {
            Word::One | Word::Zero => vec![],
            Word::Leaf(n) => vec![n.as_str()],
            Word::Tensor(x, y) | Word::Hom(x, y) | Word::Oplus(x, y) => {
                let mut v = x.leaves();
                v.extend(y.leaves());
                v
            }
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::One => write!(f, "1"),
            Word::Zero => write!(f, "0"),
            Word::Leaf(n) => write!(f, "{n}"),
            Word::Tensor(x, y) => write!(f, "tensor({x},{y})"),
            Word::Hom(x, y) => write!(f, "hom({x},{y})"),
            Word::Oplus(x, y) => write!(f, "oplus({x},{y})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?} at byte {} in {:?}", self.pos, self.src)))
        }
    }

    fn token(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find(|c: char| c == '(' || c == ')' || c == ',' || c.is_whitespace()).unwrap_or(rest.len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn word(&mut self) -> Result<Word> {
        let tok = self.token().to_string();
        if tok.is_empty() {
            return Err(Error::Parse(format!("expected a word at byte {} in {:?}", self.pos, self.src)));
        }
        self.skip_ws();
        let op = WordOp::ALL.into_iter().find(|op| op.keyword() == tok);
        match op {
            Some(op) if self.src[self.pos..].starts_with('(') => {
                self.expect('(')?;
                let x = self.word()?;
                self.expect(',')?;
                let y = self.word()?;
                self.expect(')')?;
                Ok(Word::node(op, x, y))
            }
            _ => Ok(match tok.as_str() {
                "1" => Word::One,
                "0" => Word::Zero,
                _ => Word::Leaf(tok),
            }),
        }
    }
}

/// The zero representation of `group`.
pub fn zero_rep(group: Arc<FiniteGroup>) -> Representation {
    Representation::trivial(group, 0)
}

/// Evaluates a word: `1` is the trivial line, `0` the zero space, and the
/// nodes are tensor product, internal hom and direct sum.
pub fn evaluate_word(
    group: &Arc<FiniteGroup>,
    context: &BTreeMap<String, Representation>,
    w: &Word,
) -> Result<Representation> {
    Ok(match w {
        Word::One => Representation::trivial(group.clone(), 1),
        Word::Zero => zero_rep(group.clone()),
        Word::Leaf(n) => {
            let r = context.get(n).ok_or_else(|| Error::Invalid(format!("unresolved leaf {n}")))?;
            if !crate::repcat::same_group(r.group(), group) {
                return Err(Error::GroupMismatch(format!("leaf {n} is a representation of another group")));
            }
            r.clone()
        }
        Word::Tensor(x, y) => evaluate_word(group, context, x)?.tensor(&evaluate_word(group, context, y)?)?,
        Word::Hom(x, y) => evaluate_word(group, context, x)?.hom(&evaluate_word(group, context, y)?)?,
        Word::Oplus(x, y) => evaluate_word(group, context, x)?.oplus(&evaluate_word(group, context, y)?)?,
    })
}

/// Number of words of depth at most `p` over an alphabet of size `s`, or
/// `None` on overflow.
pub fn word_count(s: usize, p: usize) -> Option<u128> {
    let base = s as u128 + 2;
    let mut n = base;
    for _ in 0..p {
        n = n.checked_mul(n)?.checked_mul(3)?.checked_add(base)?;
    }
    Some(n)
}

/// All words of depth at most `p`: leaves (alphabet, then `1`, `0`) followed
/// by `op(x, y)` for each operation and each ordered pair from depth `p − 1`.
pub fn words_up_to_depth(alphabet: &[String], p: usize, budget: usize) -> Result<Vec<Word>> {
    match word_count(alphabet.len(), p) {
        Some(n) if n <= budget as u128 => {}
        n => {
            return Err(Error::BudgetExceeded(format!(
                "{} words of depth ≤ {p} exceed the budget {budget}",
                n.map_or_else(|| "too many".to_string(), |n| n.to_string())
            )))
        }
    }
    let leaves: Vec<Word> =
        alphabet.iter().map(|a| Word::leaf(a)).chain([Word::One, Word::Zero]).collect();
    let mut level = leaves.clone();
    for _ in 0..p {
        let mut next = leaves.clone();
        for op in WordOp::ALL {
            for x in &level {
                for y in &level {
                    next.push(Word::node(op, x.clone(), y.clone()));
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// A dg-graph: vertices and, per ordered pair, a non-negatively graded edge
/// complex starting in degree 0.
#[derive(Clone, Debug)]
pub struct DgGraph {
    vertices: Vec<String>,
    edges: BTreeMap<(usize, usize), CochainComplex>,
}

impl DgGraph {
    pub fn new(vertices: Vec<String>) -> Self {
        DgGraph { vertices, edges: BTreeMap::new() }
    }

    /// Sets the edge complex `Ed(a, b)`. Complexes starting above degree 0
    /// are padded with zeros.
    pub fn set_edges(&mut self, a: usize, b: usize, complex: CochainComplex) -> Result<()> {
        if a >= self.vertices.len() || b >= self.vertices.len() {
            return Err(Error::OutOfRange(format!("edge {a}→{b} in a graph with {} vertices", self.vertices.len())));
        }
        if complex.lo() < 0 {
            return Err(Error::Invalid("edge complexes are non-negatively graded".into()));
        }
        let pad = complex.lo() as usize;
        let mut dims = vec![0; pad];
        dims.extend_from_slice(complex.dims());
        let mut diffs: Vec<SparseMatrix> = (0..pad)
            .map(|k| SparseMatrix::zeros(dims[k + 1], dims[k]))
            .collect();
        for n in complex.lo()..complex.hi() {
            diffs.push(complex.differential(n).expect("in range").clone());
        }
        self.edges.insert((a, b), CochainComplex::new(0, dims, diffs)?);
        Ok(())
    }

    /// Edges concentrated in one degree with zero differential.
    pub fn set_edges_in_degree(&mut self, a: usize, b: usize, degree: usize, count: usize) -> Result<()> {
        self.set_edges(a, b, CochainComplex::single(degree as i64, count))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edges(&self, a: usize, b: usize) -> Option<&CochainComplex> {
        self.edges.get(&(a, b)).filter(|c| c.dims().iter().any(|d| *d > 0))
    }
}

/// A basis element of a free hom complex: a vertex path `v₀ → ⋯ → v_l` and
/// one basis vector `(degree, index)` of each edge complex along it, listed
/// in path order. The empty path is the identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathBasis {
    pub path: Vec<usize>,
    pub factors: Vec<(usize, usize)>,
}

impl PathBasis {
    pub fn identity(v: usize) -> Self {
        PathBasis { path: vec![v], factors: vec![] }
    }

    pub fn source(&self) -> usize {
        self.path[0]
    }

    pub fn target(&self) -> usize {
        *self.path.last().expect("nonempty path")
    }

    pub fn length(&self) -> usize {
        self.factors.len()
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.0).sum()
    }

    /// `self ∘ before`: concatenation of paths.
    pub fn after(&self, before: &PathBasis) -> Option<PathBasis> {
        if before.target() != self.source() {
            return None;
        }
        let mut path = before.path.clone();
        path.extend_from_slice(&self.path[1..]);
        let mut factors = before.factors.clone();
        factors.extend_from_slice(&self.factors);
        Some(PathBasis { path, factors })
    }

    pub fn label(&self, g: &DgGraph) -> String {
        if self.factors.is_empty() {
            return format!("id_{}", g.vertices[self.path[0]]);
        }
        let parts: Vec<String> = (0..self.factors.len())
            .rev()
            .map(|i| {
                let (d, k) = self.factors[i];
                format!("{}→{}[{d}:{k}]", g.vertices[self.path[i]], g.vertices[self.path[i + 1]])
            })
            .collect();
        parts.join("⊗")
    }
}

/// A linear combination of path basis elements.
pub type PathElement = BTreeMap<PathBasis, Rational>;

/// The free dg-category on a dg-graph with morphisms of path length at most `cap`.
#[derive(Clone, Debug)]
pub struct FreeDgCat {
    graph: DgGraph,
    cap: usize,
}

/// A truncated free hom complex with its basis per degree.
#[derive(Clone, Debug)]
pub struct FreeHom {
    pub source: usize,
    pub target: usize,
    pub cap: usize,
    pub basis: Vec<Vec<PathBasis>>,
    pub labels: Vec<Vec<String>>,
    pub complex: CochainComplex,
}

impl FreeHom {
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }
}

impl FreeDgCat {
    pub fn new(graph: DgGraph, cap: usize) -> Self {
        FreeDgCat { graph, cap }
    }

    pub fn graph(&self) -> &DgGraph {
        &self.graph
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Every basis element from `v` to `w`, ordered by path and factors.
    pub fn basis(&self, v: usize, w: usize) -> Vec<PathBasis> {
        let mut out = Vec::new();
        if v == w {
            out.push(PathBasis::identity(v));
        }
        let mut stack = vec![vec![v]];
        while let Some(path) = stack.pop() {
            let l = path.len() - 1;
            if l >= 1 && *path.last().expect("nonempty") == w {
                self.expand_factors(&path, &mut out);
            }
            if l < self.cap {
                let last = *path.last().expect("nonempty");
                for next in (0..self.graph.vertices.len()).rev() {
                    if self.graph.edges(last, next).is_some() {
                        let mut p = path.clone();
                        p.push(next);
                        stack.push(p);
                    }
                }
            }
        }
        out.sort();
        out
    }

    fn expand_factors(&self, path: &[usize], out: &mut Vec<PathBasis>) {
        let choices: Vec<Vec<(usize, usize)>> = path
            .windows(2)
            .map(|e| {
                let c = self.graph.edges(e[0], e[1]).expect("edge on path");
                (0..c.dims().len()).flat_map(|d| (0..c.dims()[d]).map(move |k| (d, k))).collect()
            })
            .collect();
        let mut idx = vec![0usize; choices.len()];
        loop {
            out.push(PathBasis {
                path: path.to_vec(),
                factors: idx.iter().zip(&choices).map(|(i, c)| c[*i]).collect(),
            });
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Differential with Koszul signs: `d(x_l ⊗ ⋯ ⊗ x_1) = Σ ± x_l ⊗ ⋯ ⊗ dx_i ⊗ ⋯ ⊗ x_1`.
    pub fn differential(&self, x: &PathElement) -> PathElement {
        let mut out = PathElement::new();
        for (b, c) in x {
            for i in 0..b.factors.len() {
                let (d, k) = b.factors[i];
                let edge = self.graph.edges(b.path[i], b.path[i + 1]).expect("edge on path");
                let Some(m) = edge.differential(d as i64) else { continue };
                let prefix: usize = b.factors[i + 1..].iter().map(|f| f.0).sum();
                let sign = koszul::leibniz(prefix);
                for r in 0..m.rows() {
                    let Some(v) = m.row(r).get(&k) else { continue };
                    let mut nb = b.clone();
                    nb.factors[i] = (d + 1, r);
                    let coeff = if sign { -(c * v) } else { c * v };
                    add_term(&mut out, nb, coeff);
                }
            }
        }
        out
    }

    /// `after ∘ before` by concatenation, or `None` if a resulting path
    /// exceeds the length cap or the endpoints do not match.
    pub fn compose(&self, after: &PathElement, before: &PathElement) -> Option<PathElement> {
        let mut out = PathElement::new();
        for (a, x) in after {
            for (b, y) in before {
                let ab = a.after(b)?;
                if ab.length() > self.cap {
                    return None;
                }
                add_term(&mut out, ab, x * y);
            }
        }
        Some(out)
    }

    /// The hom complex `Hom(v, w)` truncated at the path-length cap.
    pub fn hom(&self, v: usize, w: usize) -> Result<FreeHom> {
        let all = self.basis(v, w);
        let top = all.iter().map(PathBasis::degree).max().unwrap_or(0);
        let mut basis: Vec<Vec<PathBasis>> = vec![Vec::new(); top + 1];
        for b in all {
            let d = b.degree();
            basis[d].push(b);
        }
        let index: Vec<BTreeMap<&PathBasis, usize>> =
            basis.iter().map(|bs| bs.iter().enumerate().map(|(i, b)| (b, i)).collect()).collect();
        let mut diffs = Vec::with_capacity(top);
        for d in 0..top {
            let mut m = SparseMatrix::zeros(basis[d + 1].len(), basis[d].len());
            for (j, b) in basis[d].iter().enumerate() {
                let image = self.differential(&PathElement::from([(b.clone(), Rational::one())]));
                for (nb, c) in image {
                    m.set(index[d + 1][&nb], j, c);
                }
            }
            diffs.push(m);
        }
        let dims = basis.iter().map(Vec::len).collect();
        let labels = basis.iter().map(|bs| bs.iter().map(|b| b.label(&self.graph)).collect()).collect();
        Ok(FreeHom { source: v, target: w, cap: self.cap, basis, labels, complex: CochainComplex::new(0, dims, diffs)? })
    }
}

fn add_term(out: &mut PathElement, b: PathBasis, c: Rational) {
    let entry = out.entry(b.clone()).or_insert_with(Rational::zero);
    *entry += c;
    if entry.is_zero() {
        out.remove(&b);
    }
}
