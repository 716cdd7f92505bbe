//! Finite simplicial sets stored through their nondegenerate simplices.
//!
//! Every simplex is written uniquely as `η*(y)` with `η: [n] ↠ [m]` a monotone
//! surjection and `y` nondegenerate (Eilenberg–Zilber). Faces of a nondegenerate
//! simplex are stored in this form; faces and vertices of arbitrary simplices
//! are derived from them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::derham::LocalSystem;
use crate::exactla::{CochainComplex, Rational, SparseMatrix};
use crate::group::FiniteGroup;
use crate::{Error, Result};

pub type SimplexId = usize;

/// Default coset budget for enumeration.
pub const DEFAULT_COSET_BUDGET: usize = 10_000;

/// `η*(id)` with `surj` the values of a monotone surjection `[n] ↠ [dim id]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub surj: Vec<usize>,
    pub id: SimplexId,
}

impl Simplex {
    pub fn nondegenerate(id: SimplexId, dim: usize) -> Self {
        Simplex { surj: (0..=dim).collect(), id }
    }

    pub fn dim(&self) -> usize {
        self.surj.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.surj.len() != self.surj.last().map_or(0, |m| m + 1)
    }

    /// `s_i` of this simplex.
    pub fn degeneracy(&self, i: usize) -> Simplex {
        assert!(i <= self.dim(), "degeneracy s_{i} on a {}-simplex", self.dim());
        let mut surj = self.surj.clone();
        surj.insert(i, self.surj[i]);
        Simplex { surj, id: self.id }
    }

    /// Degeneracy word `[i1, …, ik]` read as `s_{i1} ∘ … ∘ s_{ik}`.
    pub fn apply_degeneracies(&self, word: &[usize]) -> Result<Simplex> {
        let mut x = self.clone();
        for &i in word.iter().rev() {
            if i > x.dim() {
                return Err(Error::Invalid(format!("degeneracy s_{i} on a {}-simplex", x.dim())));
            }
            x = x.degeneracy(i);
        }
        Ok(x)
    }

    /// A degeneracy word producing this simplex from its nondegenerate part.
    pub fn degeneracy_word(&self) -> Vec<usize> {
        // s_{j1} ∘ … ∘ s_{jk} with j1 > … > jk, where j are the positions with η(j) = η(j+1)
        let mut word: Vec<usize> =
            (0..self.dim()).filter(|&j| self.surj[j] == self.surj[j + 1]).collect();
        word.reverse();
        word
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSimplicialSet {
    names: Vec<String>,
    dims: Vec<usize>,
    by_dim: Vec<Vec<SimplexId>>,
    faces: Vec<Vec<Simplex>>,
    base: SimplexId,
}

/// JSON id: either a number or a string.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(untagged)]
pub enum IdJson {
    Num(u64),
    Str(String),
}

impl fmt::Display for IdJson {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdJson::Num(n) => write!(f, "{n}"),
            IdJson::Str(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceJson {
    /// `[i1, …, ik]` meaning `s_{i1} ∘ … ∘ s_{ik}` applied to `target`.
    #[serde(default)]
    pub degeneracies: Vec<usize>,
    pub target: IdJson,
}

/// JSON schema `{dim, simplices: [[id, …] per dim], faces: {id: [face, …]}, base}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplicialSetJson {
    pub dim: usize,
    pub simplices: Vec<Vec<IdJson>>,
    #[serde(default)]
    pub faces: BTreeMap<String, Vec<FaceJson>>,
    pub base: IdJson,
}

impl FinSimplicialSet {
    /// Build from names, dimensions and faces, validating the simplicial identities.
    pub fn new(names: Vec<String>, dims: Vec<usize>, faces: Vec<Vec<Simplex>>, base: SimplexId) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Invalid("empty simplicial set".into()));
        }
        if dims.len() != n || faces.len() != n {
            return Err(Error::Invalid("names, dims and faces must have equal length".into()));
        }
        if base >= n || dims[base] != 0 {
            return Err(Error::Invalid("base must be a vertex".into()));
        }
        let top = dims.iter().copied().max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top + 1];
        for (id, d) in dims.iter().enumerate() {
            by_dim[*d].push(id);
        }
        for (id, fs) in faces.iter().enumerate() {
            let d = dims[id];
            let expected = if d == 0 { 0 } else { d + 1 };
            if fs.len() != expected {
                return Err(Error::Invalid(format!("{} has {} faces, expected {expected}", names[id], fs.len())));
            }
            for f in fs {
                if f.id >= n {
                    return Err(Error::Invalid(format!("face of {} references unknown simplex {}", names[id], f.id)));
                }
                let ok = f.surj.len() == d
                    && f.surj.first() == Some(&0)
                    && f.surj.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
                    && *f.surj.last().expect("nonempty") == dims[f.id];
                if !ok {
                    return Err(Error::Invalid(format!(
                        "face of {} onto {} is not a {}-simplex",
                        names[id],
                        names[f.id],
                        d - 1
                    )));
                }
            }
        }
        let k = FinSimplicialSet { names, dims, by_dim, faces, base };
        k.check_identities()?;
        Ok(k)
    }

    fn check_identities(&self) -> Result<()> {
        for id in 0..self.len() {
            let d = self.dims[id];
            if d < 2 {
                continue;
            }
            let x = Simplex::nondegenerate(id, d);
            for j in 1..=d {
                for i in 0..j {
                    let lhs = self.face(&self.face(&x, j), i);
                    let rhs = self.face(&self.face(&x, i), j - 1);
                    if lhs != rhs {
                        return Err(Error::Invalid(format!(
                            "simplicial identity d_{i} d_{j} = d_{} d_{i} fails on {}",
                            j - 1,
                            self.names[id]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(j: &SimplicialSetJson) -> Result<Self> {
        if j.simplices.len() != j.dim + 1 {
            return Err(Error::Invalid(format!("expected {} simplex lists, got {}", j.dim + 1, j.simplices.len())));
        }
        let mut names = Vec::new();
        let mut dims = Vec::new();
        let mut index: BTreeMap<String, SimplexId> = BTreeMap::new();
        for (d, ids) in j.simplices.iter().enumerate() {
            for s in ids {
                let name = s.to_string();
                if index.insert(name.clone(), names.len()).is_some() {
                    return Err(Error::Invalid(format!("duplicate simplex id {name}")));
                }
                names.push(name);
                dims.push(d);
            }
        }
        let mut faces = vec![Vec::new(); names.len()];
        for (key, fs) in &j.faces {
            let id = *index.get(key).ok_or_else(|| Error::Invalid(format!("faces given for unknown id {key}")))?;
            let mut out = Vec::with_capacity(fs.len());
            for f in fs {
                let t = *index
                    .get(&f.target.to_string())
                    .ok_or_else(|| Error::Invalid(format!("face of {key} references unknown id {}", f.target)))?;
                out.push(Simplex::nondegenerate(t, dims[t]).apply_degeneracies(&f.degeneracies)?);
            }
            faces[id] = out;
        }
        let base = *index.get(&j.base.to_string()).ok_or_else(|| Error::Invalid(format!("unknown base {}", j.base)))?;
        Self::new(names, dims, faces, base)
    }

    pub fn to_json(&self) -> SimplicialSetJson {
        SimplicialSetJson {
            dim: self.dim(),
            simplices: self.by_dim.iter().map(|ids| ids.iter().map(|i| IdJson::Str(self.names[*i].clone())).collect()).collect(),
            faces: (0..self.len())
                .filter(|i| self.dims[*i] > 0)
                .map(|i| {
                    let fs = self.faces[i]
                        .iter()
                        .map(|f| FaceJson { degeneracies: f.degeneracy_word(), target: IdJson::Str(self.names[f.id].clone()) })
                        .collect();
                    (self.names[i].clone(), fs)
                })
                .collect(),
            base: IdJson::Str(self.names[self.base].clone()),
        }
    }

    /// Ordered simplicial complex generated by the given facets (vertex lists).
    /// Base vertex is the smallest label.
    pub fn from_facets(facets: &[Vec<usize>]) -> Result<Self> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in facets {
            let mut v = f.clone();
            v.sort_unstable();
            v.dedup();
            if v.len() != f.len() || v.is_empty() {
                return Err(Error::Invalid(format!("facet {f:?} must list distinct vertices")));
            }
            let k = v.len();
            for mask in 1u32..(1 << k) {
                all.insert((0..k).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect());
            }
        }
        let mut sorted: Vec<Vec<usize>> = all.into_iter().collect();
        sorted.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let index: BTreeMap<&Vec<usize>, SimplexId> = sorted.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let names = sorted
            .iter()
            .map(|s| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .map(|s| format!("[{s}]"))
            .collect();
        let dims = sorted.iter().map(|s| s.len() - 1).collect();
        let faces = sorted
            .iter()
            .map(|s| {
                if s.len() == 1 {
                    return Vec::new();
                }
                (0..s.len())
                    .map(|i| {
                        let mut f = s.clone();
                        f.remove(i);
                        Simplex::nondegenerate(index[&f], f.len() - 1)
                    })
                    .collect()
            })
            .collect();
        Self::new(names, dims, faces, 0)
    }

    pub fn standard_simplex(n: usize) -> Self {
        Self::from_facets(&[(0..=n).collect()]).expect("standard simplex")
    }

    /// `∂Δⁿ` for `n ≥ 1`.
    pub fn simplex_boundary(n: usize) -> Self {
        assert!(n >= 1);
        let facets: Vec<Vec<usize>> = (0..=n).map(|i| (0..=n).filter(|&v| v != i).collect()).collect();
        Self::from_facets(&facets).expect("boundary of a simplex")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Top dimension.
    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn simplex_dim(&self, id: SimplexId) -> usize {
        self.dims[id]
    }

    pub fn name(&self, id: SimplexId) -> &str {
        &self.names[id]
    }

    pub fn id_of(&self, name: &str) -> Option<SimplexId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn base(&self) -> SimplexId {
        self.base
    }

    /// Nondegenerate simplices of dimension `d`.
    pub fn simplices(&self, d: usize) -> &[SimplexId] {
        self.by_dim.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts().iter().enumerate().map(|(d, c)| if d % 2 == 0 { *c as i64 } else { -(*c as i64) }).sum()
    }

    /// Stored face `d_i` of a nondegenerate simplex.
    pub fn stored_face(&self, id: SimplexId, i: usize) -> &Simplex {
        &self.faces[id][i]
    }

    pub fn nondegenerate(&self, id: SimplexId) -> Simplex {
        Simplex::nondegenerate(id, self.dims[id])
    }

    /// `θ*(id)` for a monotone map `θ: [k] → [dim id]`.
    pub fn restrict(&self, id: SimplexId, theta: &[usize]) -> Simplex {
        let mut image = theta.to_vec();
        image.dedup();
        let eta: Vec<usize> = theta.iter().map(|t| image.binary_search(t).expect("monotone")).collect();
        let base = self.restrict_injective(id, &image);
        Simplex { surj: eta.iter().map(|&e| base.surj[e]).collect(), id: base.id }
    }

    fn restrict_injective(&self, id: SimplexId, image: &[usize]) -> Simplex {
        let m = self.dims[id];
        if image.len() == m + 1 {
            return Simplex::nondegenerate(id, m);
        }
        let v = (0..=m).rev().find(|v| image.binary_search(v).is_err()).expect("missing vertex");
        let face = &self.faces[id][v];
        let theta: Vec<usize> = image.iter().map(|&x| face.surj[if x < v { x } else { x - 1 }]).collect();
        self.restrict(face.id, &theta)
    }

    /// `d_i` of an arbitrary simplex.
    pub fn face(&self, x: &Simplex, i: usize) -> Simplex {
        let n = x.dim();
        assert!(n >= 1 && i <= n, "face d_{i} of a {n}-simplex");
        let theta: Vec<usize> = (0..n).map(|k| x.surj[if k < i { k } else { k + 1 }]).collect();
        self.restrict(x.id, &theta)
    }

    /// Vertex `j` of a simplex, as a vertex id.
    pub fn vertex(&self, x: &Simplex, j: usize) -> SimplexId {
        self.restrict(x.id, &[x.surj[j]]).id
    }

    /// The edge from vertex `a` to vertex `b` (`a < b`) of a simplex.
    pub fn edge(&self, x: &Simplex, a: usize, b: usize) -> Simplex {
        assert!(a < b);
        self.restrict(x.id, &[x.surj[a], x.surj[b]])
    }

    /// Connected components of the vertex set, as a component index per vertex id.
    pub fn components(&self) -> BTreeMap<SimplexId, usize> {
        let mut adj: BTreeMap<SimplexId, Vec<SimplexId>> = self.simplices(0).iter().map(|v| (*v, vec![])).collect();
        for &e in self.simplices(1) {
            let x = self.nondegenerate(e);
            let (a, b) = (self.vertex(&x, 0), self.vertex(&x, 1));
            adj.get_mut(&a).expect("vertex").push(b);
            adj.get_mut(&b).expect("vertex").push(a);
        }
        let mut comp = BTreeMap::new();
        let mut next = 0;
        for &v in self.simplices(0) {
            if comp.contains_key(&v) {
                continue;
            }
            comp.insert(v, next);
            let mut queue = VecDeque::from([v]);
            while let Some(x) = queue.pop_front() {
                for y in &adj[&x] {
                    if !comp.contains_key(y) {
                        comp.insert(*y, next);
                        queue.push_back(*y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().values().all(|c| *c == 0)
    }
}

/// Map of simplicial sets given on nondegenerate simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub images: Vec<Simplex>,
}

impl SimplicialMap {
    pub fn new(source: &FinSimplicialSet, target: &FinSimplicialSet, images: Vec<Simplex>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::Invalid("one image per nondegenerate simplex required".into()));
        }
        let f = SimplicialMap { images };
        for id in 0..source.len() {
            let img = &f.images[id];
            if img.id >= target.len() || img.dim() != source.simplex_dim(id) || *img.surj.last().expect("nonempty") != target.simplex_dim(img.id) {
                return Err(Error::Invalid(format!("image of {} has the wrong dimension", source.name(id))));
            }
            let x = source.nondegenerate(id);
            for i in (0..=x.dim()).filter(|_| x.dim() > 0) {
                if f.apply(&source.face(&x, i)) != target.face(img, i) {
                    return Err(Error::Invalid(format!("map does not commute with d_{i} on {}", source.name(id))));
                }
            }
        }
        Ok(f)
    }

    pub fn identity(k: &FinSimplicialSet) -> Self {
        SimplicialMap { images: (0..k.len()).map(|id| k.nondegenerate(id)).collect() }
    }

    /// Image of an arbitrary simplex `η*(y)`, namely `η*(f(y))`.
    pub fn apply(&self, x: &Simplex) -> Simplex {
        let img = &self.images[x.id];
        Simplex { surj: x.surj.iter().map(|&k| img.surj[k]).collect(), id: img.id }
    }
}

/// A letter `x_gen` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, inv: !self.inv }
    }

    fn column(self) -> usize {
        2 * self.gen + usize::from(self.inv)
    }
}

pub type Word = Vec<Letter>;

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn cyclic_reduce(w: &[Letter]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == w[w.len() - 1].inverse() {
        w.pop();
        w.remove(0);
    }
    w
}

pub fn render_word(w: &[Letter]) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter()
        .map(|l| if l.inv { format!("x{}^-1", l.gen) } else { format!("x{}", l.gen) })
        .collect::<Vec<_>>()
        .join("·")
}

/// Edge-path group presentation with the word of every nondegenerate edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Word>,
    /// Spanning-tree edges (all labeled by the empty word).
    pub tree: BTreeSet<SimplexId>,
    /// Every nondegenerate edge as a word in the generators.
    pub edge_words: BTreeMap<SimplexId, Word>,
}

/// Generators are the non-tree nondegenerate edges; each nondegenerate
/// 2-simplex `σ` gives the relator `w(d₀σ)·w(d₂σ)·w(d₁σ)⁻¹`.
pub fn fundamental_group_presentation(k: &FinSimplicialSet) -> Result<Presentation> {
    if !k.is_connected() {
        return Err(Error::Invalid("simplicial set is not connected".into()));
    }
    let mut adj: BTreeMap<SimplexId, Vec<(SimplexId, SimplexId)>> = BTreeMap::new();
    for &e in k.simplices(1) {
        let x = k.nondegenerate(e);
        let (a, b) = (k.vertex(&x, 0), k.vertex(&x, 1));
        adj.entry(a).or_default().push((b, e));
        adj.entry(b).or_default().push((a, e));
    }
    let mut tree = BTreeSet::new();
    let mut seen = BTreeSet::from([k.base()]);
    let mut queue = VecDeque::from([k.base()]);
    while let Some(v) = queue.pop_front() {
        for (w, e) in adj.get(&v).into_iter().flatten() {
            if seen.insert(*w) {
                tree.insert(*e);
                queue.push_back(*w);
            }
        }
    }
    let mut edge_words = BTreeMap::new();
    let mut generators = 0;
    for &e in k.simplices(1) {
        if tree.contains(&e) {
            edge_words.insert(e, Vec::new());
        } else {
            edge_words.insert(e, vec![Letter { gen: generators, inv: false }]);
            generators += 1;
        }
    }
    let word_of = |x: &Simplex| -> Word {
        if x.is_degenerate() {
            Vec::new()
        } else {
            edge_words[&x.id].clone()
        }
    };
    let mut relators = Vec::new();
    for &t in k.simplices(2) {
        let x = k.nondegenerate(t);
        let mut r = word_of(&k.edge(&x, 1, 2));
        r.extend(word_of(&k.edge(&x, 0, 1)));
        r.extend(inverse_word(&word_of(&k.edge(&x, 0, 2))));
        let r = cyclic_reduce(&r);
        if !r.is_empty() {
            relators.push(r);
        }
    }
    Ok(Presentation { generators, relators, tree, edge_words })
}

impl Presentation {
    /// Tietze moves: repeatedly eliminate a generator occurring exactly once in some relator.
    pub fn simplify(&self) -> Presentation {
        let mut relators: Vec<Word> = self.relators.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
        let mut edge_words = self.edge_words.clone();
        let mut alive: Vec<bool> = vec![true; self.generators];
        loop {
            relators.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            relators.dedup();
            let mut found = None;
            'search: for (ri, r) in relators.iter().enumerate() {
                for (pos, l) in r.iter().enumerate() {
                    if r.iter().filter(|m| m.gen == l.gen).count() == 1 {
                        found = Some((ri, pos));
                        break 'search;
                    }
                }
            }
            let Some((ri, pos)) = found else { break };
            let r = relators.remove(ri);
            let x = r[pos];
            // r = u x^ε v  ⇒  x^ε = u⁻¹ v⁻¹
            let mut value: Word = inverse_word(&r[..pos]);
            value.extend(inverse_word(&r[pos + 1..]));
            let value = if x.inv { inverse_word(&value) } else { value };
            let subst = |w: &Word| -> Word {
                let mut out = Vec::with_capacity(w.len());
                for l in w {
                    if l.gen == x.gen {
                        if l.inv {
                            out.extend(inverse_word(&value));
                        } else {
                            out.extend(value.iter().copied());
                        }
                    } else {
                        out.push(*l);
                    }
                }
                free_reduce(&out)
            };
            relators = relators.iter().map(|w| cyclic_reduce(&subst(w))).filter(|w| !w.is_empty()).collect();
            for w in edge_words.values_mut() {
                *w = subst(w);
            }
            alive[x.gen] = false;
        }
        let renumber: BTreeMap<usize, usize> =
            alive.iter().enumerate().filter(|(_, a)| **a).enumerate().map(|(new, (old, _))| (old, new)).collect();
        let rn = |w: &Word| -> Word { w.iter().map(|l| Letter { gen: renumber[&l.gen], inv: l.inv }).collect() };
        let mut relators: Vec<Word> = relators.iter().map(rn).collect();
        relators.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        Presentation {
            generators: renumber.len(),
            relators,
            tree: self.tree.clone(),
            edge_words: edge_words.iter().map(|(e, w)| (*e, rn(w))).collect(),
        }
    }

    /// Invariant factors of the abelianization: `(free rank, torsion orders > 1)`.
    pub fn abelianization(&self) -> (usize, Vec<u64>) {
        let rows: Vec<Vec<i128>> = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![0i128; self.generators];
                for l in r {
                    row[l.gen] += if l.inv { -1 } else { 1 };
                }
                row
            })
            .collect();
        let diag = diagonalize(rows, self.generators);
        let nonzero = diag.iter().filter(|d| **d != 0).count();
        let mut torsion: Vec<u64> = diag.iter().filter(|d| **d > 1).map(|d| *d as u64).collect();
        torsion.sort_unstable();
        (self.generators - nonzero, torsion)
    }

    /// Evaluate a word under an assignment of group elements to generators.
    pub fn evaluate(group: &FiniteGroup, images: &[usize], w: &[Letter]) -> usize {
        w.iter().fold(group.identity(), |acc, l| {
            let g = images[l.gen];
            group.mul(acc, if l.inv { group.inv(g) } else { g })
        })
    }
}

/// Integer diagonalization by row and column operations.
fn diagonalize(mut a: Vec<Vec<i128>>, cols: usize) -> Vec<i128> {
    let rows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if a[r][c] != 0 && best.is_none_or(|(br, bc)| a[r][c].abs() < a[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((r, c)) = best else { break };
        a.swap(t, r);
        for row in a.iter_mut() {
            row.swap(t, c);
        }
        loop {
            let p = a[t][t];
            let mut clean = true;
            for r in t + 1..rows {
                let q = a[r][t].div_euclid(p);
                if q != 0 {
                    for c in t..cols {
                        a[r][c] -= q * a[t][c];
                    }
                }
                clean &= a[r][t] == 0;
            }
            for c in t + 1..cols {
                let q = a[t][c].div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut() {
                        row[c] -= q * row[t];
                    }
                }
                clean &= a[t][c] == 0;
            }
            if clean {
                break;
            }
            let mut best = (t, t);
            for r in t..rows {
                if a[r][t] != 0 && a[r][t].abs() < a[best.0][best.1].abs() {
                    best = (r, t);
                }
            }
            for c in t..cols {
                if a[t][c] != 0 && a[t][c].abs() < a[best.0][best.1].abs() {
                    best = (t, c);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

const NONE: usize = usize::MAX;

/// Coset table of a subgroup, rows indexed by cosets and columns by letters
/// (`2·gen` for `x_gen`, `2·gen + 1` for its inverse). Coset 0 is the subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub generators: usize,
    pub table: Vec<Vec<usize>>,
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    budget: usize,
}

impl Enumerator {
    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.table.len() >= self.budget {
            return Err(Error::BudgetExceeded(format!(
                "coset enumeration exceeded {} cosets; the fundamental group is infinite or too large",
                self.budget
            )));
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        Ok(())
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.table[g][x];
                if d == NONE {
                    continue;
                }
                self.table[d][x ^ 1] = NONE;
                let (mu, nu) = (self.rep(g), self.rep(d));
                if self.table[mu][x] != NONE {
                    let t = self.table[mu][x];
                    self.merge(nu, t, &mut queue);
                } else if self.table[nu][x ^ 1] != NONE {
                    let t = self.table[nu][x ^ 1];
                    self.merge(mu, t, &mut queue);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][x ^ 1] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0isize, w.len() as isize - 1);
        loop {
            while i <= j && self.table[f][w[i as usize]] != NONE {
                f = self.table[f][w[i as usize]];
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.table[b][w[j as usize] ^ 1] != NONE {
                b = self.table[b][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            } else if i == j {
                let x = w[i as usize];
                self.table[f][x] = b;
                self.table[b][x ^ 1] = f;
                return Ok(());
            } else {
                self.define(f, w[i as usize])?;
            }
        }
    }
}

/// Hasselgrove–Leech–Trotter coset enumeration with a hard coset budget.
pub fn enumerate_cosets(generators: usize, relators: &[Word], subgroup: &[Word], budget: usize) -> Result<CosetTable> {
    let cols = 2 * generators;
    let mut e = Enumerator { cols, table: vec![vec![NONE; cols]], parent: vec![0], budget };
    let as_cols = |w: &Word| -> Vec<usize> { w.iter().map(|l| l.column()).collect() };
    let rels: Vec<Vec<usize>> = relators.iter().map(as_cols).collect();
    for w in subgroup {
        e.scan_and_fill(0, &as_cols(w))?;
    }
    let mut c = 0;
    while c < e.table.len() {
        if e.live(c) {
            for r in &rels {
                if !e.live(c) {
                    break;
                }
                e.scan_and_fill(c, r)?;
            }
            if e.live(c) {
                for x in 0..cols {
                    if e.table[c][x] == NONE {
                        e.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.live(c)).collect();
    let renumber: BTreeMap<usize, usize> = live.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let table = live
        .iter()
        .map(|&c| (0..cols).map(|x| renumber[&e.rep(e.table[c][x])]).collect())
        .collect();
    Ok(CosetTable { generators, table })
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn trace(&self, start: usize, w: &[Letter]) -> usize {
        w.iter().fold(start, |c, l| self.table[c][l.column()])
    }

    /// For the trivial subgroup: the group with elements named by shortlex words,
    /// and the image of each generator.
    pub fn regular_group(&self) -> Result<(FiniteGroup, Vec<usize>)> {
        let n = self.len();
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for gen in 0..self.generators {
                for inv in [false, true] {
                    let l = Letter { gen, inv };
                    let d = self.table[c][l.column()];
                    if words[d].is_none() {
                        let mut w = words[c].clone().expect("visited");
                        w.push(l);
                        words[d] = Some(w);
                        queue.push_back(d);
                    }
                }
            }
        }
        let words: Vec<Word> = words.into_iter().map(|w| w.expect("table is connected")).collect();
        let table = (0..n).map(|a| (0..n).map(|b| self.trace(a, &words[b])).collect()).collect();
        let names = words.iter().map(|w| render_word(w)).collect();
        let group = FiniteGroup::new(names, table)?;
        let images = (0..self.generators).map(|g| self.table[0][2 * g]).collect();
        Ok((group, images))
    }
}

/// Group-valued labels on nondegenerate edges satisfying the 2-simplex cocycle condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabeling {
    pub group: Arc<FiniteGroup>,
    pub labels: BTreeMap<SimplexId, usize>,
}

impl EdgeLabeling {
    pub fn trivial(k: &FinSimplicialSet, group: Arc<FiniteGroup>) -> Self {
        let e = group.identity();
        EdgeLabeling { labels: k.simplices(1).iter().map(|id| (*id, e)).collect(), group }
    }

    /// Label of an arbitrary 1-simplex; degenerate edges carry the identity.
    pub fn label(&self, x: &Simplex) -> usize {
        if x.is_degenerate() {
            self.group.identity()
        } else {
            self.labels[&x.id]
        }
    }

    pub fn validate(&self, k: &FinSimplicialSet) -> Result<()> {
        for &e in k.simplices(1) {
            if self.labels.get(&e).is_none_or(|g| *g >= self.group.order()) {
                return Err(Error::Invalid(format!("edge {} has no valid label", k.name(e))));
            }
        }
        for &t in k.simplices(2) {
            let x = k.nondegenerate(t);
            let l01 = self.label(&k.edge(&x, 0, 1));
            let l12 = self.label(&k.edge(&x, 1, 2));
            let l02 = self.label(&k.edge(&x, 0, 2));
            if l02 != self.group.mul(l12, l01) {
                return Err(Error::Invalid(format!("cocycle condition fails on {}", k.name(t))));
            }
        }
        Ok(())
    }
}

pub fn edge_labeling_from_hom(
    k: &FinSimplicialSet,
    presentation: &Presentation,
    group: Arc<FiniteGroup>,
    hom: &[usize],
) -> Result<EdgeLabeling> {
    if hom.len() != presentation.generators || hom.iter().any(|g| *g >= group.order()) {
        return Err(Error::Invalid(format!("need one group element per generator ({})", presentation.generators)));
    }
    for (i, r) in presentation.relators.iter().enumerate() {
        if Presentation::evaluate(&group, hom, r) != group.identity() {
            return Err(Error::Invalid(format!("relation {i} ({}) violated by the homomorphism", render_word(r))));
        }
    }
    let labels = presentation
        .edge_words
        .iter()
        .map(|(e, w)| (*e, Presentation::evaluate(&group, hom, w)))
        .collect();
    let l = EdgeLabeling { group, labels };
    l.validate(k)?;
    Ok(l)
}

/// `π₁(K, base)` as a finite group, with the labeling realizing it.
#[derive(Clone, Debug)]
pub struct FundamentalGroup {
    pub presentation: Presentation,
    pub group: Arc<FiniteGroup>,
    pub generator_images: Vec<usize>,
    pub labeling: EdgeLabeling,
}

pub fn finite_fundamental_group(k: &FinSimplicialSet, budget: usize) -> Result<FundamentalGroup> {
    let presentation = fundamental_group_presentation(k)?.simplify();
    let table = enumerate_cosets(presentation.generators, &presentation.relators, &[], budget)?;
    let (group, generator_images) = table.regular_group()?;
    let group = Arc::new(group);
    let labeling = edge_labeling_from_hom(k, &presentation, group.clone(), &generator_images)?;
    Ok(FundamentalGroup { presentation, group, generator_images, labeling })
}

/// The labeling from the lexicographically first surjective homomorphism
/// `π₁(K) → group`, with generator images enumerated as an odometer over
/// element indices. At most `budget` assignments are tried.
pub fn first_surjective_labeling(k: &FinSimplicialSet, group: Arc<FiniteGroup>, budget: usize) -> Result<EdgeLabeling> {
    let p = fundamental_group_presentation(k)?.simplify();
    let n = group.order();
    let mut images = vec![0usize; p.generators];
    for _ in 0..budget {
        let relations_hold = p.relators.iter().all(|r| Presentation::evaluate(&group, &images, r) == group.identity());
        if relations_hold && group.generated_subgroup(&images).len() == n {
            return edge_labeling_from_hom(k, &p, group, &images);
        }
        let mut i = images.len();
        loop {
            if i == 0 {
                return Err(Error::Invalid(format!("no surjective homomorphism from π₁ onto a group of order {n}")));
            }
            i -= 1;
            images[i] += 1;
            if images[i] < n {
                break;
            }
            images[i] = 0;
        }
    }
    Err(Error::BudgetExceeded(format!("more than {budget} generator assignments")))
}

/// A finite covering with a free right action of `G` by deck transformations.
/// Cover simplex `(τ, g)` has id `τ·|G| + g`.
#[derive(Clone, Debug)]
pub struct CoverData {
    pub space: Arc<FinSimplicialSet>,
    pub group: Arc<FiniteGroup>,
    base_len: usize,
}

impl CoverData {
    pub fn lift(&self, base_id: SimplexId, g: usize) -> SimplexId {
        base_id * self.group.order() + g
    }

    pub fn projection(&self, id: SimplexId) -> SimplexId {
        id / self.group.order()
    }

    pub fn sheet(&self, id: SimplexId) -> usize {
        id % self.group.order()
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }

    /// Deck transformation `(τ, g) ↦ (τ, g·k)` on nondegenerate ids.
    pub fn deck(&self, k: usize, id: SimplexId) -> SimplexId {
        self.lift(self.projection(id), self.group.mul(self.sheet(id), k))
    }

    pub fn deck_simplex(&self, k: usize, x: &Simplex) -> Simplex {
        Simplex { surj: x.surj.clone(), id: self.deck(k, x.id) }
    }

    pub fn project_simplex(&self, x: &Simplex) -> Simplex {
        Simplex { surj: x.surj.clone(), id: self.projection(x.id) }
    }

    /// Constructive check of the covering invariants.
    pub fn verify(&self, base: &FinSimplicialSet, budget: usize) -> Result<()> {
        let cover = &*self.space;
        let n = self.group.order();
        if cover.counts() != base.counts().iter().map(|c| c * n).collect::<Vec<_>>() {
            return Err(Error::Verification("simplex counts are not multiplied by |G|".into()));
        }
        if cover.euler_characteristic() != base.euler_characteristic() * n as i64 {
            return Err(Error::Verification("Euler characteristic is not multiplied by |G|".into()));
        }
        for id in 0..cover.len() {
            let x = cover.nondegenerate(id);
            for i in (0..=x.dim()).filter(|_| x.dim() > 0) {
                let f = cover.face(&x, i);
                if self.project_simplex(&f) != base.face(&base.nondegenerate(self.projection(id)), i) {
                    return Err(Error::Verification(format!("projection is not simplicial at {}", cover.name(id))));
                }
                for k in self.group.elements() {
                    let moved = cover.face(&cover.nondegenerate(self.deck(k, id)), i);
                    if moved != self.deck_simplex(k, &f) {
                        return Err(Error::Verification("deck transformation is not simplicial".into()));
                    }
                }
            }
        }
        for &v in cover.simplices(0) {
            for k in self.group.elements() {
                if k != self.group.identity() && self.deck(k, v) == v {
                    return Err(Error::Verification("deck action is not free".into()));
                }
            }
        }
        if !cover.is_connected() {
            return Err(Error::Verification("cover is not connected".into()));
        }
        let p = fundamental_group_presentation(cover)?.simplify();
        let t = enumerate_cosets(p.generators, &p.relators, &[], budget)?;
        if t.len() != 1 {
            return Err(Error::Verification(format!("cover has fundamental group of order {}", t.len())));
        }
        Ok(())
    }
}

/// The universal cover from a labeling that realizes the full `π₁(K)`.
pub fn universal_cover(k: &FinSimplicialSet, labeling: &EdgeLabeling, budget: usize) -> Result<CoverData> {
    labeling.validate(k)?;
    let pi1 = finite_fundamental_group(k, budget)?;
    let group = labeling.group.clone();
    let n = group.order();
    if pi1.group.order() != n {
        return Err(Error::Invalid(format!(
            "labeling group has order {n}, but π₁ has order {}",
            pi1.group.order()
        )));
    }
    let labels: Vec<usize> = labeling.labels.values().copied().collect();
    if group.generated_subgroup(&labels).len() != n {
        return Err(Error::Invalid("edge labels do not generate the group".into()));
    }
    let mut names = Vec::with_capacity(k.len() * n);
    let mut dims = Vec::with_capacity(k.len() * n);
    let mut faces = Vec::with_capacity(k.len() * n);
    for id in 0..k.len() {
        let x = k.nondegenerate(id);
        for g in group.elements() {
            names.push(format!("{}@{}", k.name(id), group.name(g)));
            dims.push(x.dim());
            let fs = if x.dim() == 0 {
                Vec::new()
            } else {
                (0..=x.dim())
                    .map(|i| {
                        let f = k.stored_face(id, i);
                        // vertex 0 of d₀ is vertex 1 of x; move along the edge 01
                        let sheet = if i == 0 { group.mul(labeling.label(&k.edge(&x, 0, 1)), g) } else { g };
                        Simplex { surj: f.surj.clone(), id: f.id * n + sheet }
                    })
                    .collect()
            };
            faces.push(fs);
        }
    }
    let space = FinSimplicialSet::new(names, dims, faces, k.base() * n + group.identity())?;
    let cover = CoverData { space: Arc::new(space), group, base_len: k.len() };
    cover.verify(k, budget)?;
    Ok(cover)
}

/// Normalized cochains on nondegenerate simplices with twisted coefficients:
/// `(δc)(σ) = Σ (−1)^i T_i⁻¹ c(d_i σ)`, with `T_0` the transport along the edge 01.
pub fn twisted_cochain_complex(k: &FinSimplicialSet, l: &LocalSystem) -> CochainComplex {
    let r = l.fiber_dim();
    let top = k.dim();
    let index: Vec<BTreeMap<SimplexId, usize>> =
        (0..=top).map(|d| k.simplices(d).iter().enumerate().map(|(i, id)| (*id, i)).collect()).collect();
    let dims: Vec<usize> = (0..=top).map(|d| k.simplices(d).len() * r).collect();
    let mut diffs = Vec::with_capacity(top);
    for q in 0..top {
        let mut m = SparseMatrix::zeros(dims[q + 1], dims[q]);
        for (row, &s) in k.simplices(q + 1).iter().enumerate() {
            let x = k.nondegenerate(s);
            for i in 0..=q + 1 {
                let f = k.face(&x, i);
                if f.is_degenerate() {
                    continue;
                }
                let col = index[q][&f.id];
                let t_inv = if i == 0 { l.transport(&k.edge(&x, 0, 1)).inverse().expect("invertible transport") } else { crate::exactla::Matrix::identity(r) };
                let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
                for a in 0..r {
                    for b in 0..r {
                        let v = &t_inv.data[a][b];
                        if !v.is_zero() {
                            m.add_to(row * r + a, col * r + b, &(v * &sign));
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    CochainComplex::new(0, dims, diffs).expect("twisted cochains form a complex")
}
