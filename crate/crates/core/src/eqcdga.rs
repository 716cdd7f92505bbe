//! Finite-group-equivariant commutative dg-algebras presented by free graded
//! generators, the hom complexes `A ⊗^G Hom(V, W)`, and the checks relating
//! them to the de Rham side.
//!
//! Every graded computation takes an explicit degree bound `N`; hom complexes
//! are built through degree `N + 1` so that cohomology through `N` is exact.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::derham::{adr_component, local_system_from_rep, tdr_compose, AdrComponent, LocalSystem, MatchingFamily};
use crate::exactla::{
    int, kernel_basis, rank_of_vectors, serde_rational, CochainComplex, KernelBasis, Matrix, Rational, SparseMatrix,
    SparseVec,
};
use crate::group::FiniteGroup;
use crate::koszul;
use crate::nabla::{self, PolyForm};
use crate::repcat::{regular_representation, same_group, GroupRef, Representation};
use crate::simpset::{universal_cover, EdgeLabeling, FinSimplicialSet};
use crate::wordcat::{evaluate_word, Word};
use crate::{Error, Result};

/// Exponent vector, one entry per generator.
pub type Exponents = Vec<u32>;

/// A polynomial in the generators of a [`FreeGca`], stored on canonically
/// ordered monomials `x_0^{e_0} ⋯ x_{n-1}^{e_{n-1}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn monomial(m: Exponents, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scaled(&-Rational::one()))
    }

    pub fn scaled(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Coefficient of the unit monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms.iter().find(|(m, _)| m.iter().all(|e| *e == 0)).map_or_else(Rational::zero, |(_, c)| c.clone())
    }
}

/// A free graded-commutative algebra: polynomial on even generators,
/// exterior on odd ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGca {
    names: Vec<String>,
    degrees: Vec<usize>,
}

impl FreeGca {
    pub fn new(names: Vec<String>, degrees: Vec<usize>) -> Result<Self> {
        if names.len() != degrees.len() {
            return Err(Error::DimensionMismatch("one degree per generator".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Invalid(format!("duplicate generator {n}")));
            }
            if n.is_empty() || n.contains(|c: char| c.is_whitespace() || "*^+()".contains(c)) {
                return Err(Error::Invalid(format!("bad generator name {n:?}")));
            }
        }
        Ok(FreeGca { names, degrees })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn unit_monomial(&self) -> Exponents {
        vec![0; self.len()]
    }

    pub fn one(&self) -> Poly {
        self.constant(Rational::one())
    }

    pub fn constant(&self, c: Rational) -> Poly {
        Poly::monomial(self.unit_monomial(), c)
    }

    pub fn gen(&self, i: usize) -> Poly {
        let mut m = self.unit_monomial();
        m[i] = 1;
        Poly::monomial(m, Rational::one())
    }

    pub fn monomial_degree(&self, m: &[u32]) -> usize {
        m.iter().zip(&self.degrees).map(|(e, d)| *e as usize * d).sum()
    }

    fn is_odd(&self, i: usize) -> bool {
        self.degrees[i] % 2 == 1
    }

    /// `a·b` as `±` a canonical monomial, or `None` when an odd generator squares.
    pub fn mul_monomials(&self, a: &[u32], b: &[u32]) -> Option<(bool, Exponents)> {
        let mut negative = false;
        let mut out = Vec::with_capacity(a.len());
        for i in 0..a.len() {
            let e = a[i] + b[i];
            if self.is_odd(i) && e > 1 {
                return None;
            }
            out.push(e);
        }
        // move each odd factor of b left past the odd factors of a with larger index
        for j in 0..b.len() {
            if b[j] == 1 && self.is_odd(j) {
                for i in j + 1..a.len() {
                    if a[i] == 1 && self.is_odd(i) {
                        negative = !negative;
                    }
                }
            }
        }
        Some((negative, out))
    }

    pub fn mul(&self, p: &Poly, q: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, x) in &p.terms {
            for (b, y) in &q.terms {
                if let Some((neg, m)) = self.mul_monomials(a, b) {
                    let c = x * y;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, p: &Poly, e: u32) -> Poly {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, p))
    }

    /// `Some(Some(d))` for a nonzero homogeneous polynomial of degree `d`,
    /// `Some(None)` for zero, `None` if inhomogeneous.
    pub fn degree(&self, p: &Poly) -> Option<Option<usize>> {
        let mut degs = p.terms.keys().map(|m| self.monomial_degree(m));
        match degs.next() {
            None => Some(None),
            Some(d) => degs.all(|e| e == d).then_some(Some(d)),
        }
    }

    /// The algebra map sending generator `i` to `images[i]` in `target`.
    pub fn extend(&self, p: &Poly, target: &FreeGca, images: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &p.terms {
            let mut prod = target.constant(c.clone());
            for (i, e) in m.iter().enumerate() {
                if *e > 0 {
                    prod = target.mul(&prod, &target.pow(&images[i], *e));
                }
            }
            out.add_assign(&prod);
        }
        out
    }

    /// The degree +1 derivation with `d(x_i) = dx[i]`.
    pub fn derivation(&self, p: &Poly, dx: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &p.terms {
            for i in 0..m.len() {
                if m[i] == 0 || dx[i].is_zero() {
                    continue;
                }
                let mut prefix = self.unit_monomial();
                prefix[..i].copy_from_slice(&m[..i]);
                let mut suffix = self.unit_monomial();
                suffix[i + 1..].copy_from_slice(&m[i + 1..]);
                let mut lower = self.unit_monomial();
                lower[i] = m[i] - 1;
                // d(x^e) = e x^{e-1} dx; odd generators only occur with e = 1
                let dpow = self.mul(&Poly::monomial(lower, int(m[i] as i64)), &dx[i]);
                let sign = koszul::leibniz(self.monomial_degree(&prefix));
                let term = self.mul(&self.mul(&Poly::monomial(prefix, c.clone()), &dpow), &Poly::monomial(suffix, Rational::one()));
                out.add_assign(&if sign { term.scaled(&-Rational::one()) } else { term });
            }
        }
        out
    }

    pub fn render_monomial(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| if *e == 1 { self.names[i].clone() } else { format!("{}^{e}", self.names[i]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn render(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in p.terms.iter().rev().enumerate() {
            let mono = self.render_monomial(m);
            let unit = m.iter().all(|e| *e == 0);
            let (neg, abs) = if c < &Rational::zero() { (true, -c.clone()) } else { (false, c.clone()) };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if unit {
                let _ = write!(s, "{abs}");
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                let _ = write!(s, "{abs}*{mono}");
            }
        }
        s
    }

    pub fn poly_from_json(&self, terms: &[TermJson]) -> Result<Poly> {
        let mut out = Poly::zero();
        for t in terms {
            let mut p = self.constant(t.coeff.clone());
            for (name, e) in &t.monomial {
                let i = self.generator(name).ok_or_else(|| Error::Invalid(format!("unknown generator {name}")))?;
                p = self.mul(&p, &self.pow(&self.gen(i), *e));
            }
            out.add_assign(&p);
        }
        Ok(out)
    }

    pub fn poly_to_json(&self, p: &Poly) -> Vec<TermJson> {
        p.terms
            .iter()
            .map(|(m, c)| TermJson {
                coeff: c.clone(),
                monomial: m.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| (self.names[i].clone(), *e)).collect(),
            })
            .collect()
    }
}

/// One term `coeff · Π name^exponent`; the factors multiply in the listed order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    #[serde(with = "serde_rational")]
    pub coeff: Rational,
    #[serde(default)]
    pub monomial: Vec<(String, u32)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: usize,
}

/// JSON schema of a presented equivariant cdga. Missing differentials are
/// zero; generators missing from an element's action are fixed by it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CdgaJson {
    pub group: GroupRef,
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub differential: BTreeMap<String, Vec<TermJson>>,
    #[serde(default)]
    pub action: BTreeMap<String, BTreeMap<String, Vec<TermJson>>>,
}

/// A free graded-commutative algebra on generators of degree ≥ 1 with a
/// differential and a right action of a finite group by dg-automorphisms,
/// augmented by sending every generator to 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedGCdga {
    group: Arc<FiniteGroup>,
    algebra: FreeGca,
    differential: Vec<Poly>,
    /// `action[g][i] = x_i · g`.
    action: Vec<Vec<Poly>>,
}

impl PresentedGCdga {
    /// Validates degrees, `d∘d = 0`, the action laws, compatibility of the
    /// action with `d`, and `H⁰ = ℚ`, `H¹ = 0`.
    pub fn new(
        group: Arc<FiniteGroup>,
        algebra: FreeGca,
        differential: Vec<Poly>,
        action: Vec<Vec<Poly>>,
    ) -> Result<Self> {
        let n = algebra.len();
        if let Some(i) = algebra.degrees.iter().position(|d| *d == 0) {
            return Err(Error::Invalid(format!("generator {} has degree 0", algebra.names[i])));
        }
        if differential.len() != n || action.len() != group.order() || action.iter().any(|a| a.len() != n) {
            return Err(Error::DimensionMismatch("differential and action need one entry per generator".into()));
        }
        for i in 0..n {
            let name = &algebra.names[i];
            match algebra.degree(&differential[i]) {
                Some(None) => {}
                Some(Some(d)) if d == algebra.degrees[i] + 1 => {}
                _ => return Err(Error::Invalid(format!("d({name}) is not homogeneous of degree {}", algebra.degrees[i] + 1))),
            }
            for g in group.elements() {
                match algebra.degree(&action[g][i]) {
                    Some(Some(d)) if d == algebra.degrees[i] => {}
                    _ => {
                        return Err(Error::Invalid(format!(
                            "{name}·{} is not nonzero homogeneous of degree {}",
                            group.name(g),
                            algebra.degrees[i]
                        )))
                    }
                }
            }
        }
        let a = PresentedGCdga { group, algebra, differential, action };
        for i in 0..n {
            let x = a.algebra.gen(i);
            let name = &a.algebra.names[i];
            if !a.d(&a.d(&x)).is_zero() {
                return Err(Error::NotAComplex(a.algebra.degrees[i] as i64));
            }
            if a.act(&x, a.group.identity()) != x {
                return Err(Error::Invalid(format!("the identity does not fix {name}")));
            }
            for g in a.group.elements() {
                let xg = a.act(&x, g);
                if a.d(&xg) != a.act(&a.d(&x), g) {
                    return Err(Error::Invalid(format!("action of {} does not commute with d on {name}", a.group.name(g))));
                }
                for h in a.group.elements() {
                    if a.act(&xg, h) != a.act(&x, a.group.mul(g, h)) {
                        return Err(Error::Invalid(format!(
                            "({name}·{})·{} ≠ {name}·({}{})",
                            a.group.name(g),
                            a.group.name(h),
                            a.group.name(g),
                            a.group.name(h)
                        )));
                    }
                }
            }
        }
        // H⁰ = ℚ holds because generators have positive degree; H¹ = 0 needs d injective on A¹
        let basis = GradedBasis::new(&a.algebra, 2);
        let d1 = a.d_matrix(&basis, 1);
        if crate::exactla::rank(&d1) != basis.dim(1) {
            return Err(Error::Invalid("H¹ ≠ 0: the cdga is not 1-connected".into()));
        }
        Ok(a)
    }

    pub fn from_json(j: &CdgaJson, resolve: impl Fn(&str) -> Option<FiniteGroup>) -> Result<Self> {
        let group = match &j.group {
            GroupRef::Named(name) => resolve(name).ok_or_else(|| Error::Invalid(format!("unknown group {name}")))?,
            GroupRef::Inline(g) => FiniteGroup::from_json(g)?,
        };
        Self::from_json_in(j, Arc::new(group))
    }

    /// Like [`from_json`](Self::from_json) with the group already resolved.
    pub fn from_json_in(j: &CdgaJson, group: Arc<FiniteGroup>) -> Result<Self> {
        let algebra = FreeGca::new(
            j.generators.iter().map(|g| g.name.clone()).collect(),
            j.generators.iter().map(|g| g.degree).collect(),
        )?;
        for name in j.differential.keys() {
            if algebra.generator(name).is_none() {
                return Err(Error::Invalid(format!("differential given for unknown generator {name}")));
            }
        }
        let differential = algebra
            .names
            .iter()
            .map(|n| j.differential.get(n).map_or_else(|| Ok(Poly::zero()), |t| algebra.poly_from_json(t)))
            .collect::<Result<Vec<_>>>()?;
        for (el, m) in &j.action {
            if group.element(el).is_none() {
                return Err(Error::Invalid(format!("action given for unknown element {el}")));
            }
            if let Some(name) = m.keys().find(|n| algebra.generator(n).is_none()) {
                return Err(Error::Invalid(format!("action given on unknown generator {name}")));
            }
        }
        let mut action = Vec::with_capacity(group.order());
        for g in group.elements() {
            let given = j.action.get(group.name(g));
            let row = (0..algebra.len())
                .map(|i| match given.and_then(|m| m.get(&algebra.names[i])) {
                    Some(t) => algebra.poly_from_json(t),
                    None => Ok(algebra.gen(i)),
                })
                .collect::<Result<Vec<_>>>()?;
            action.push(row);
        }
        Self::new(group, algebra, differential, action)
    }

    pub fn to_json(&self) -> CdgaJson {
        let alg = &self.algebra;
        CdgaJson {
            group: GroupRef::Inline(self.group.to_json()),
            generators: alg
                .names
                .iter()
                .zip(&alg.degrees)
                .map(|(n, d)| GeneratorJson { name: n.clone(), degree: *d })
                .collect(),
            differential: alg
                .names
                .iter()
                .zip(&self.differential)
                .filter(|(_, p)| !p.is_zero())
                .map(|(n, p)| (n.clone(), alg.poly_to_json(p)))
                .collect(),
            action: self
                .group
                .elements()
                .filter(|g| *g != self.group.identity())
                .map(|g| {
                    let m = (0..alg.len())
                        .filter(|i| self.action[g][*i] != alg.gen(*i))
                        .map(|i| (alg.names[i].clone(), alg.poly_to_json(&self.action[g][i])))
                        .collect();
                    (self.group.name(g).to_string(), m)
                })
                .collect(),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn algebra(&self) -> &FreeGca {
        &self.algebra
    }

    pub fn generator_differential(&self, i: usize) -> &Poly {
        &self.differential[i]
    }

    pub fn generator_action(&self, g: usize, i: usize) -> &Poly {
        &self.action[g][i]
    }

    pub fn d(&self, p: &Poly) -> Poly {
        self.algebra.derivation(p, &self.differential)
    }

    /// The right action `p ↦ p·g`.
    pub fn act(&self, p: &Poly, g: usize) -> Poly {
        self.algebra.extend(p, &self.algebra, &self.action[g])
    }

    pub fn basis(&self, n: usize) -> GradedBasis {
        GradedBasis::new(&self.algebra, n)
    }

    /// `d: A^n → A^{n+1}` in the monomial bases; needs `n + 1 ≤` the bound.
    pub fn d_matrix(&self, basis: &GradedBasis, n: usize) -> SparseMatrix {
        let mut m = SparseMatrix::zeros(basis.dim(n + 1), basis.dim(n));
        for (j, mono) in basis.monomials[n].iter().enumerate() {
            for (i, c) in basis.coords(&self.d(&Poly::monomial(mono.clone(), Rational::one()))) {
                m.set(i, j, c);
            }
        }
        m
    }

    /// Columns of `a ↦ a·g` on `A^n`.
    fn action_columns(&self, basis: &GradedBasis, n: usize, g: usize) -> Vec<SparseVec> {
        basis.monomials[n].iter().map(|m| basis.coords(&self.act(&Poly::monomial(m.clone(), Rational::one()), g))).collect()
    }

    fn d_columns(&self, basis: &GradedBasis, n: usize) -> Vec<SparseVec> {
        basis.monomials[n].iter().map(|m| basis.coords(&self.d(&Poly::monomial(m.clone(), Rational::one())))).collect()
    }
}

/// Monomial basis of `A^n` for `n ≤ degree_bound`, each degree sorted in
/// decreasing lexicographic order of exponent vectors.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub degree_bound: usize,
    pub monomials: Vec<Vec<Exponents>>,
    index: Vec<HashMap<Exponents, usize>>,
}

impl GradedBasis {
    /// Every generator must have positive degree.
    pub fn new(alg: &FreeGca, degree_bound: usize) -> Self {
        assert!(alg.degrees.iter().all(|d| *d > 0), "graded basis needs positive generator degrees");
        let mut monomials = vec![Vec::new(); degree_bound + 1];
        let mut current = alg.unit_monomial();
        fill(alg, 0, 0, degree_bound, &mut current, &mut monomials);
        for ms in &mut monomials {
            ms.sort_by(|a, b| b.cmp(a));
        }
        let index = monomials.iter().map(|ms| ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()).collect();
        GradedBasis { degree_bound, monomials, index }
    }

    pub fn dim(&self, n: usize) -> usize {
        self.monomials.get(n).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.monomials.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, m: &Exponents) -> Option<usize> {
        let n = self.index.iter().position(|ix| ix.contains_key(m))?;
        self.index[n].get(m).copied()
    }

    /// Coordinates of a homogeneous polynomial in its degree's basis.
    pub fn coords(&self, p: &Poly) -> SparseVec {
        p.terms
            .iter()
            .map(|(m, c)| {
                let i = self.index_of(m).expect("monomial within the degree bound");
                (i, c.clone())
            })
            .collect()
    }

    pub fn labels(&self, alg: &FreeGca, n: usize) -> Vec<String> {
        self.monomials[n].iter().map(|m| alg.render_monomial(m)).collect()
    }
}

fn fill(alg: &FreeGca, i: usize, deg: usize, bound: usize, current: &mut Exponents, out: &mut [Vec<Exponents>]) {
    if i == alg.len() {
        out[deg].push(current.clone());
        return;
    }
    let d = alg.degrees[i];
    let max = if d % 2 == 1 { 1 } else { u32::MAX };
    let mut e = 0u32;
    while deg + e as usize * d <= bound && e <= max {
        current[i] = e;
        fill(alg, i + 1, deg + e as usize * d, bound, current, out);
        e += 1;
    }
    current[i] = 0;
}

/// `A ⊗^G Hom(V, W)` through degree `N + 1`, ambient index `a·dim H + h`.
#[derive(Clone, Debug)]
pub struct THomComplex {
    pub degree_bound: usize,
    pub hom: Representation,
    /// `(dim W, dim V)`: hom elements are `dim W × dim V` matrices.
    pub shape: (usize, usize),
    pub basis: GradedBasis,
    pub invariants: Vec<KernelBasis>,
    pub complex: CochainComplex,
}

/// Cochain and cohomology dimensions of a hom complex in degrees `0..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TCohomology {
    pub degree_bound: usize,
    pub cochain_dims: Vec<usize>,
    pub cohomology: Vec<usize>,
}

impl THomComplex {
    pub fn cochain_dims(&self) -> Vec<usize> {
        self.complex.dims()[..=self.degree_bound].to_vec()
    }

    pub fn cohomology(&self) -> Vec<usize> {
        (0..=self.degree_bound).map(|n| self.complex.cohomology_dim(n as i64)).collect()
    }

    pub fn report(&self) -> TCohomology {
        TCohomology { degree_bound: self.degree_bound, cochain_dims: self.cochain_dims(), cohomology: self.cohomology() }
    }

    /// The invariant element with the given coordinates, as a matrix over `A`.
    pub fn element(&self, n: usize, coords: &[Rational]) -> HomElement {
        HomElement::from_ambient(&self.basis, n, &self.shape, &self.invariants[n].combine(coords))
    }
}

fn add_entry(v: &mut SparseVec, i: usize, c: Rational) {
    let e = v.entry(i).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&i);
    }
}

/// `R_g ⊗ 1 − 1 ⊗ ρ(g)` stacked over generators of `G`, on `A^n ⊗ H`.
fn invariant_constraints(a: &PresentedGCdga, basis: &GradedBasis, n: usize, rep: &Representation) -> SparseMatrix {
    let dh = rep.dim();
    let cols = basis.dim(n) * dh;
    let gens = a.group.generators();
    let mut entries = Vec::new();
    for (k, &g) in gens.iter().enumerate() {
        let off = k * cols;
        let rg = a.action_columns(basis, n, g);
        let rho = rep.matrix(g);
        for (ai, col) in rg.iter().enumerate() {
            for h in 0..dh {
                let c = ai * dh + h;
                for (b, x) in col {
                    entries.push((off + b * dh + h, c, x.clone()));
                }
                for h2 in 0..dh {
                    let r = &rho.data[h2][h];
                    if !r.is_zero() {
                        entries.push((off + ai * dh + h2, c, -r.clone()));
                    }
                }
            }
        }
    }
    SparseMatrix::from_triplets(gens.len() * cols, cols, entries)
}

/// `(d ⊗ 1)` applied to an ambient vector of `A^n ⊗ H`.
fn apply_d(dcols: &[SparseVec], dh: usize, v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (idx, c) in v {
        let (ai, h) = (idx / dh, idx % dh);
        for (b, x) in &dcols[ai] {
            add_entry(&mut out, b * dh + h, c * x);
        }
    }
    out
}

/// `A ⊗^G H` for a representation `H` of `A`'s group, degrees `0..=N+1`;
/// `shape` is the matrix shape of elements of `H` (rows × cols = dim H).
pub fn invariant_complex(
    a: &PresentedGCdga,
    h: &Representation,
    shape: (usize, usize),
    degree_bound: usize,
) -> Result<THomComplex> {
    if shape.0 * shape.1 != h.dim() {
        return Err(Error::DimensionMismatch(format!("shape {shape:?} for a representation of dimension {}", h.dim())));
    }
    if !same_group(a.group(), h.group()) {
        return Err(Error::GroupMismatch("the representation is not over the cdga's group".into()));
    }
    let top = degree_bound + 1;
    let basis = GradedBasis::new(&a.algebra, top);
    let dh = h.dim();
    let invariants: Vec<KernelBasis> = (0..=top).map(|n| kernel_basis(&invariant_constraints(a, &basis, n, h))).collect();
    let mut diffs = Vec::with_capacity(top);
    for n in 0..top {
        let dcols = a.d_columns(&basis, n);
        let mut m = SparseMatrix::zeros(invariants[n + 1].dim(), invariants[n].dim());
        for (j, v) in invariants[n].vectors.iter().enumerate() {
            let image = apply_d(&dcols, dh, v);
            let coords = invariants[n + 1].try_coords(&image).ok_or_else(|| {
                Error::Verification(format!("d does not preserve invariants in degree {n}"))
            })?;
            for (i, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(i, j, c);
                }
            }
        }
        diffs.push(m);
    }
    let dims = invariants.iter().map(KernelBasis::dim).collect();
    Ok(THomComplex { degree_bound, hom: h.clone(), shape, basis, invariants, complex: CochainComplex::new(0, dims, diffs)? })
}

/// `Hom_{T(G,A)}(V, W) = A ⊗^G Hom(V, W)`.
pub fn t_hom_complex(a: &PresentedGCdga, v: &Representation, w: &Representation, degree_bound: usize) -> Result<THomComplex> {
    if !same_group(a.group(), v.group()) || !same_group(a.group(), w.group()) {
        return Err(Error::GroupMismatch("representations are not over the cdga's group".into()));
    }
    invariant_complex(a, &v.hom(w)?, (w.dim(), v.dim()), degree_bound)
}

pub fn t_cohomology(a: &PresentedGCdga, v: &Representation, w: &Representation, degree_bound: usize) -> Result<TCohomology> {
    Ok(t_hom_complex(a, v, w, degree_bound)?.report())
}

/// `Hom_{T^c(G,A)}(X, Y) = Hom_{T(G,A)}(RX, RY)` for words over named representations.
pub fn tc_hom(
    a: &PresentedGCdga,
    context: &BTreeMap<String, Representation>,
    x: &Word,
    y: &Word,
    degree_bound: usize,
) -> Result<THomComplex> {
    let rx = evaluate_word(a.group(), context, x)?;
    let ry = evaluate_word(a.group(), context, y)?;
    t_hom_complex(a, &rx, &ry, degree_bound)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularIsoReport {
    pub degree_bound: usize,
    pub source_dims: Vec<usize>,
    pub target_dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub chain_map: bool,
}

/// Checks that `a ↦ Σ_g (a·g) ⊗ δ_g` is a chain isomorphism
/// `A → A ⊗^G V_r` in degrees `≤ N`. Failure is an error.
pub fn regular_iso_check(a: &PresentedGCdga, degree_bound: usize) -> Result<RegularIsoReport> {
    let vr = regular_representation(a.group.clone()).left;
    let order = a.group.order();
    let target = invariant_complex(a, &vr, (order, 1), degree_bound)?;
    let basis = &target.basis;
    let psi = |n: usize, col: &SparseVec| -> SparseVec {
        let mut out = SparseVec::new();
        for g in a.group.elements() {
            let rg = a.action_columns(basis, n, g);
            for (ai, c) in col {
                for (b, x) in &rg[*ai] {
                    add_entry(&mut out, b * order + g, c * x);
                }
            }
        }
        out
    };
    let mut report = RegularIsoReport {
        degree_bound,
        source_dims: Vec::new(),
        target_dims: Vec::new(),
        ranks: Vec::new(),
        chain_map: true,
    };
    for n in 0..=degree_bound {
        let images: Vec<SparseVec> = (0..basis.dim(n)).map(|i| psi(n, &SparseVec::from([(i, Rational::one())]))).collect();
        for (i, v) in images.iter().enumerate() {
            if target.invariants[n].try_coords(v).is_none() {
                return Err(Error::Verification(format!(
                    "image of {} is not invariant",
                    a.algebra.render_monomial(&basis.monomials[n][i])
                )));
            }
        }
        let r = rank_of_vectors(basis.dim(n) * order, &images);
        report.source_dims.push(basis.dim(n));
        report.target_dims.push(target.invariants[n].dim());
        report.ranks.push(r);
        if r != basis.dim(n) || r != target.invariants[n].dim() {
            return Err(Error::Verification(format!(
                "degree {n}: rank {r}, dim A^n = {}, dim invariants = {}",
                basis.dim(n),
                target.invariants[n].dim()
            )));
        }
        if n < degree_bound {
            let dcols = a.d_columns(basis, n);
            for (i, v) in images.iter().enumerate() {
                let lhs = psi(n + 1, &dcols[i]);
                let rhs = apply_d(&dcols, order, v);
                if lhs != rhs {
                    report.chain_map = false;
                    return Err(Error::Verification(format!("not a chain map at degree {n}")));
                }
            }
        }
    }
    Ok(report)
}

/// An element of `A ⊗ Hom(V, W)`: a `rows × cols` matrix over `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomElement {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Poly>,
}

impl HomElement {
    pub fn zero(rows: usize, cols: usize) -> Self {
        HomElement { rows, cols, entries: vec![Poly::zero(); rows * cols] }
    }

    /// `1 ⊗ m` for a scalar matrix.
    pub fn from_matrix(alg: &FreeGca, m: &Matrix) -> Self {
        HomElement {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().flatten().map(|c| alg.constant(c.clone())).collect(),
        }
    }

    pub fn identity(alg: &FreeGca, n: usize) -> Self {
        Self::from_matrix(alg, &Matrix::identity(n))
    }

    /// From an ambient vector of `A^n ⊗ Hom(V, W)` with `Hom` flattened row-major.
    pub fn from_ambient(basis: &GradedBasis, n: usize, shape: &(usize, usize), v: &SparseVec) -> Self {
        let (rows, cols) = *shape;
        let dh = rows * cols;
        let mut out = HomElement::zero(rows, cols);
        for (idx, c) in v {
            out.entries[idx % dh].add_term(basis.monomials[n][idx / dh].clone(), c.clone());
        }
        out
    }

    /// Ambient vector in `A^n ⊗ Hom`; every entry must be homogeneous of degree `n`.
    pub fn to_ambient(&self, basis: &GradedBasis) -> SparseVec {
        let dh = self.rows * self.cols;
        let mut out = SparseVec::new();
        for (h, p) in self.entries.iter().enumerate() {
            for (m, c) in p.terms() {
                out.insert(basis.index_of(m).expect("within bound") * dh + h, c.clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &HomElement) -> Result<HomElement> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("cannot add matrices of different shapes".into()));
        }
        Ok(HomElement {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn scaled(&self, c: &Rational) -> HomElement {
        HomElement { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|p| p.scaled(c)).collect() }
    }

    /// Degree if homogeneous; `Some(None)` for zero.
    pub fn degree(&self, alg: &FreeGca) -> Option<Option<usize>> {
        let mut d = None;
        for p in &self.entries {
            match alg.degree(p)? {
                None => {}
                Some(e) if d.is_none() || d == Some(e) => d = Some(e),
                Some(_) => return None,
            }
        }
        Some(d)
    }

    /// `self ∘ before`, entrywise products in `A` with `self`'s factor first.
    pub fn after(&self, alg: &FreeGca, before: &HomElement) -> Result<HomElement> {
        if self.cols != before.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, before.rows, before.cols
            )));
        }
        let mut out = HomElement::zero(self.rows, before.cols);
        for i in 0..self.rows {
            for j in 0..before.cols {
                for k in 0..self.cols {
                    let (a, b) = (&self.entries[i * self.cols + k], &before.entries[k * before.cols + j]);
                    if !a.is_zero() && !b.is_zero() {
                        out.entries[i * before.cols + j].add_assign(&alg.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn differential(&self, a: &PresentedGCdga) -> HomElement {
        HomElement { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|p| a.d(p)).collect() }
    }
}

/// `Σ α_i ⊗ ω_i` in `Hom ⊗ ∇(1,*)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathElement {
    pub terms: Vec<(HomElement, PolyForm)>,
}

impl PathElement {
    pub fn simple(alpha: HomElement, omega: PolyForm) -> Self {
        PathElement { terms: vec![(alpha, omega)] }
    }

    /// Collects terms by monomial of the form.
    pub fn normalized(&self) -> Result<BTreeMap<nabla::Monomial, HomElement>> {
        let mut out: BTreeMap<nabla::Monomial, HomElement> = BTreeMap::new();
        for (alpha, omega) in &self.terms {
            for (m, c) in omega.terms() {
                let x = alpha.scaled(c);
                match out.get_mut(m) {
                    Some(acc) => *acc = acc.add(&x)?,
                    None => {
                        out.insert(m.clone(), x);
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn equals(&self, other: &PathElement) -> Result<bool> {
        Ok(self.normalized()? == other.normalized()?)
    }

    /// Evaluation at `t₁ = endpoint` (0 or 1), killing `dt₁`.
    pub fn evaluate(&self, endpoint: usize, rows: usize, cols: usize) -> Result<HomElement> {
        if endpoint > 1 {
            return Err(Error::OutOfRange(format!("endpoint {endpoint} of the interval")));
        }
        let mut out = HomElement::zero(rows, cols);
        for (alpha, omega) in &self.terms {
            // t₁ = 0 is vertex 0, the face opposite vertex 1
            let point = omega.face_map(1 - endpoint)?;
            let c = point.coefficient(&nabla::Monomial::one(0));
            out = out.add(&alpha.scaled(&c))?;
        }
        Ok(out)
    }
}

/// `(β⊗η)∘(α⊗ω) = (−1)^{|η||α|} (β∘α)⊗(η·ω)`, extended bilinearly. `x`
/// holds the `α⊗ω` terms and `y` the `β⊗η` terms.
pub fn path_compose(alg: &FreeGca, x: &PathElement, y: &PathElement) -> Result<PathElement> {
    let mut terms = Vec::new();
    for (alpha, omega) in &x.terms {
        for (beta, eta) in &y.terms {
            if omega.dim() != 1 || eta.dim() != 1 {
                return Err(Error::Invalid("path coefficients must be forms on the 1-simplex".into()));
            }
            let da = alpha.degree(alg).ok_or_else(|| Error::Invalid("inhomogeneous hom element".into()))?;
            let composite = beta.after(alg, alpha)?;
            for de in 0..=1 {
                let part = eta.degree_part(de);
                if part.is_zero() {
                    continue;
                }
                let negative = koszul::path_compose(de, da.unwrap_or(0));
                let c = if negative { composite.scaled(&-Rational::one()) } else { composite.clone() };
                terms.push((c, part.wedge(omega)?));
            }
        }
    }
    Ok(PathElement { terms })
}

/// Name of the interval coordinate and its differential in path algebras.
pub const PATH_T: &str = "t1";
pub const PATH_DT: &str = "dt1";

/// `B ⊗ ∇(1,*)` as the free graded-commutative algebra on the generators of
/// `B` together with `t1` (degree 0) and `dt1` (degree 1), with its differential.
pub fn path_algebra(b: &PresentedGCdga) -> Result<(FreeGca, Vec<Poly>)> {
    let mut names = b.algebra.names.clone();
    let mut degrees = b.algebra.degrees.clone();
    names.extend([PATH_T.to_string(), PATH_DT.to_string()]);
    degrees.extend([0, 1]);
    let ext = FreeGca::new(names, degrees)?;
    let n = b.algebra.len();
    let embed: Vec<Poly> = (0..n).map(|i| ext.gen(i)).collect();
    let mut d: Vec<Poly> = b.differential.iter().map(|p| b.algebra.extend(p, &ext, &embed)).collect();
    d.push(ext.gen(n + 1));
    d.push(Poly::zero());
    Ok((ext, d))
}

/// A morphism `(G, A) → (H, B)`: `group_map: H → G` on every element and the
/// images of the generators of `A` in `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdgaMorphism {
    pub group_map: Vec<usize>,
    pub images: Vec<Poly>,
}

/// Two morphisms and a candidate right homotopy `A → B ⊗ ∇(1,*)` on generators.
#[derive(Clone, Debug)]
pub struct HomotopyCandidate {
    pub source: Arc<PresentedGCdga>,
    pub target: Arc<PresentedGCdga>,
    pub f1: CdgaMorphism,
    pub f2: CdgaMorphism,
    pub homotopy: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Failures of `f` to be a morphism of equivariant cdgas.
pub fn morphism_failures(a: &PresentedGCdga, b: &PresentedGCdga, f: &CdgaMorphism, label: &str) -> Vec<String> {
    let mut out = Vec::new();
    let (g, h) = (&a.group, &b.group);
    if f.group_map.len() != h.order() || f.group_map.iter().any(|x| *x >= g.order()) {
        out.push(format!("{label}: group map needs one element of the source group per target element"));
        return out;
    }
    if !h.is_homomorphism(g, &f.group_map) {
        out.push(format!("{label}: group map is not a homomorphism"));
    }
    if f.images.len() != a.algebra.len() {
        out.push(format!("{label}: expected {} generator images", a.algebra.len()));
        return out;
    }
    let apply = |p: &Poly| a.algebra.extend(p, &b.algebra, &f.images);
    for i in 0..a.algebra.len() {
        let name = &a.algebra.names[i];
        match b.algebra.degree(&f.images[i]) {
            Some(None) => {}
            Some(Some(d)) if d == a.algebra.degrees[i] => {}
            _ => out.push(format!("{label}: image of {name} is not homogeneous of degree {}", a.algebra.degrees[i])),
        }
        if apply(a.generator_differential(i)) != b.d(&f.images[i]) {
            out.push(format!("{label}: does not commute with d on generator {name}"));
        }
        for k in h.generators() {
            if apply(a.generator_action(f.group_map[k], i)) != b.act(&f.images[i], k) {
                out.push(format!("{label}: not equivariant on generator {name} for {}", h.name(k)));
            }
        }
    }
    out
}

/// Checks that the candidate extends to a map of augmented equivariant
/// dg-algebras `A → B ⊗ ∇(1,*)` with value `f1` at `t1 = 0` and `f2` at `t1 = 1`.
pub fn verify_right_homotopy(c: &HomotopyCandidate) -> Result<HomotopyReport> {
    if c.f1.group_map != c.f2.group_map {
        return Err(Error::GroupMismatch("the two morphisms have different group components".into()));
    }
    let (a, b) = (&*c.source, &*c.target);
    let mut failures = morphism_failures(a, b, &c.f1, "f1");
    failures.extend(morphism_failures(a, b, &c.f2, "f2"));
    let (ext, dext) = path_algebra(b)?;
    if c.homotopy.len() != a.algebra.len() {
        return Err(Error::DimensionMismatch(format!("expected {} homotopy values", a.algebra.len())));
    }
    let n = b.algebra.len();
    let h_of = |p: &Poly| a.algebra.extend(p, &ext, &c.homotopy);
    let embed: Vec<Poly> = (0..n).map(|i| ext.gen(i)).collect();
    let act_ext = |p: &Poly, k: usize| {
        let mut images: Vec<Poly> = (0..n).map(|i| b.algebra.extend(b.generator_action(k, i), &ext, &embed)).collect();
        images.push(ext.gen(n));
        images.push(ext.gen(n + 1));
        ext.extend(p, &ext, &images)
    };
    let eval = |p: &Poly, t: i64| {
        let mut images: Vec<Poly> = (0..n).map(|i| b.algebra.gen(i)).collect();
        images.push(b.algebra.constant(int(t)));
        images.push(Poly::zero());
        ext.extend(p, &b.algebra, &images)
    };
    for i in 0..a.algebra.len() {
        let name = &a.algebra.names[i];
        let hx = &c.homotopy[i];
        match ext.degree(hx) {
            Some(None) => {}
            Some(Some(d)) if d == a.algebra.degrees[i] => {}
            _ => failures.push(format!("H({name}) is not homogeneous of degree {}", a.algebra.degrees[i])),
        }
        if ext.derivation(hx, &dext) != h_of(a.generator_differential(i)) {
            failures.push(format!("d∘H ≠ H∘d on generator {name}"));
        }
        for k in b.group.generators() {
            if h_of(a.generator_action(c.f1.group_map[k], i)) != act_ext(hx, k) {
                failures.push(format!("H is not equivariant on generator {name} for {}", b.group.name(k)));
            }
        }
        if hx.terms().keys().any(|m| m[..n].iter().all(|e| *e == 0)) {
            failures.push(format!("H({name}) has a component in 1 ⊗ ∇(1,*), so H is not augmented"));
        }
        if eval(hx, 0) != c.f1.images[i] {
            failures.push(format!("H({name}) at t1 = 0 differs from f1({name})"));
        }
        if eval(hx, 1) != c.f2.images[i] {
            failures.push(format!("H({name}) at t1 = 1 differs from f2({name})"));
        }
    }
    Ok(HomotopyReport { ok: failures.is_empty(), failures })
}

/// `H(x) = f(x) ⊗ 1`.
pub fn constant_homotopy(source: Arc<PresentedGCdga>, target: Arc<PresentedGCdga>, f: CdgaMorphism) -> Result<HomotopyCandidate> {
    let (ext, _) = path_algebra(&target)?;
    let embed: Vec<Poly> = (0..target.algebra.len()).map(|i| ext.gen(i)).collect();
    let homotopy = f.images.iter().map(|p| target.algebra.extend(p, &ext, &embed)).collect();
    Ok(HomotopyCandidate { source, target, f1: f.clone(), f2: f, homotopy })
}

/// JSON form of a morphism: group map `{target element: source element}` and
/// generator images in the target.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismJson {
    pub group_map: BTreeMap<String, String>,
    pub generators: BTreeMap<String, Vec<TermJson>>,
}

/// JSON form of a homotopy candidate between named or inline cdgas. The
/// homotopy values use the extra generators `t1` and `dt1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomotopyJson {
    pub source: String,
    pub target: String,
    pub f1: MorphismJson,
    pub f2: MorphismJson,
    pub homotopy: BTreeMap<String, Vec<TermJson>>,
}

impl HomotopyCandidate {
    pub fn from_json(j: &HomotopyJson, resolve: impl Fn(&str) -> Option<Arc<PresentedGCdga>>) -> Result<Self> {
        let source = resolve(&j.source).ok_or_else(|| Error::Invalid(format!("unknown cdga {}", j.source)))?;
        let target = resolve(&j.target).ok_or_else(|| Error::Invalid(format!("unknown cdga {}", j.target)))?;
        let morphism = |m: &MorphismJson| -> Result<CdgaMorphism> {
            let mut group_map = Vec::with_capacity(target.group.order());
            for h in target.group.elements() {
                let name = m
                    .group_map
                    .get(target.group.name(h))
                    .ok_or_else(|| Error::Invalid(format!("group map misses {}", target.group.name(h))))?;
                group_map.push(source.group.element(name).ok_or_else(|| Error::Invalid(format!("unknown element {name}")))?);
            }
            let images = generator_values(&source.algebra, &target.algebra, &m.generators)?;
            Ok(CdgaMorphism { group_map, images })
        };
        let f1 = morphism(&j.f1)?;
        let f2 = morphism(&j.f2)?;
        let (ext, _) = path_algebra(&target)?;
        let homotopy = generator_values(&source.algebra, &ext, &j.homotopy)?;
        Ok(HomotopyCandidate { source, target, f1, f2, homotopy })
    }
}

fn generator_values(source: &FreeGca, target: &FreeGca, m: &BTreeMap<String, Vec<TermJson>>) -> Result<Vec<Poly>> {
    if let Some(n) = m.keys().find(|n| source.generator(n).is_none()) {
        return Err(Error::Invalid(format!("value given for unknown generator {n}")));
    }
    source
        .names
        .iter()
        .map(|n| m.get(n).map_or_else(|| Ok(Poly::zero()), |t| target.poly_from_json(t)))
        .collect()
}

/// One hom complex in the pushout square, by corner and degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushoutRow {
    pub source: String,
    pub target: String,
    pub degree: usize,
    pub top_left: usize,
    pub top_right: usize,
    pub bottom_left: usize,
    pub bottom_right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushoutReport {
    pub degree_bound: usize,
    pub rows: Vec<PushoutRow>,
    pub failures: Vec<String>,
}

impl PushoutReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Hom data of the four corners for one ordered pair of test objects.
struct Corners {
    shape: (usize, usize),
    top_left: Vec<Matrix>,
    bottom_left: THomComplex,
}

/// Checks strict commutativity of the square
/// `T^c(G,k) → Vect`, `T^c(G,k) → T^c(G,A)`, `T^c(G,A) → T̃`, `Vect → T̃`
/// on the hom complexes between the given objects, degrees `≤ N`, together
/// with compatibility of every corner map with `d` and with composition.
pub fn pushout_square_check(
    a: &PresentedGCdga,
    objects: &[(String, Representation)],
    degree_bound: usize,
) -> Result<PushoutReport> {
    let alg = &a.algebra;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut corners: BTreeMap<(usize, usize), Corners> = BTreeMap::new();
    for (x, (xn, xv)) in objects.iter().enumerate() {
        for (y, (yn, yv)) in objects.iter().enumerate() {
            let top_left = xv.equivariant_maps(yv)?;
            let bottom_left = t_hom_complex(a, xv, yv, degree_bound)?;
            let shape = (yv.dim(), xv.dim());
            let basis = &bottom_left.basis;
            let dh = shape.0 * shape.1;
            for n in 0..=degree_bound {
                rows.push(PushoutRow {
                    source: xn.clone(),
                    target: yn.clone(),
                    degree: n,
                    top_left: if n == 0 { top_left.len() } else { 0 },
                    top_right: if n == 0 { dh } else { 0 },
                    bottom_left: bottom_left.invariants[n].dim(),
                    bottom_right: basis.dim(n) * dh,
                });
            }
            // the square on degree 0: both composites send f to 1 ⊗ f
            for (k, f) in top_left.iter().enumerate() {
                let via_unit = HomElement::from_matrix(alg, f).to_ambient(basis);
                if bottom_left.invariants[0].try_coords(&via_unit).is_none() {
                    failures.push(format!("{xn}→{yn}: unit image of equivariant map {k} is not invariant"));
                }
                let via_vect = HomElement::from_matrix(alg, &Matrix::unflatten(shape.0, shape.1, &f.flatten()));
                if via_vect.to_ambient(basis) != via_unit {
                    failures.push(format!("{xn}→{yn}: square does not commute on equivariant map {k}"));
                }
            }
            // the inclusion of invariants commutes with d
            for n in 0..degree_bound {
                let dn = bottom_left.complex.differential(n as i64).expect("in range");
                for (k, v) in bottom_left.invariants[n].vectors.iter().enumerate() {
                    let outer = HomElement::from_ambient(basis, n, &shape, v).differential(a).to_ambient(basis);
                    let column: Vec<Rational> = (0..dn.rows()).map(|i| dn.get(i, k)).collect();
                    if outer != bottom_left.invariants[n + 1].combine(&column) {
                        failures.push(format!("{xn}→{yn}: inclusion does not commute with d in degree {n}"));
                    }
                }
            }
            corners.insert((x, y), Corners { shape, top_left, bottom_left });
        }
    }
    // functoriality on sampled composable pairs
    const SAMPLES: usize = 3;
    for ((x, y), first) in &corners {
        for ((y2, z), second) in &corners {
            if y != y2 {
                continue;
            }
            let target = &corners[&(*x, *z)];
            let (xn, zn) = (&objects[*x].0, &objects[*z].0);
            for f in first.top_left.iter().take(SAMPLES) {
                for g in second.top_left.iter().take(SAMPLES) {
                    let gf = g.mul(f);
                    let lhs = HomElement::from_matrix(alg, &gf);
                    let rhs = HomElement::from_matrix(alg, g).after(alg, &HomElement::from_matrix(alg, f))?;
                    if lhs != rhs || target.bottom_left.invariants[0].try_coords(&lhs.to_ambient(&target.bottom_left.basis)).is_none() {
                        failures.push(format!("{xn}→{zn}: unit map does not respect composition"));
                    }
                }
            }
            for n in 0..=degree_bound {
                for m in 0..=degree_bound - n {
                    for u in first.bottom_left.invariants[n].vectors.iter().take(SAMPLES) {
                        for v in second.bottom_left.invariants[m].vectors.iter().take(SAMPLES) {
                            let e1 = HomElement::from_ambient(&first.bottom_left.basis, n, &first.shape, u);
                            let e2 = HomElement::from_ambient(&second.bottom_left.basis, m, &second.shape, v);
                            let comp = e2.after(alg, &e1)?;
                            let amb = comp.to_ambient(&target.bottom_left.basis);
                            if target.bottom_left.invariants[n + m].try_coords(&amb).is_none() {
                                failures.push(format!(
                                    "{xn}→{zn}: composite of invariants in degrees {n}, {m} is not invariant"
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    failures.dedup();
    Ok(PushoutReport { degree_bound, rows, failures })
}

/// One `(degree, weight)` cell of the comparison with the cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiRow {
    pub degree: usize,
    pub max_weight: usize,
    pub source_dim: usize,
    pub cover_dim: usize,
    pub invariant_dim: usize,
    pub image_rank: usize,
    pub injective: bool,
    pub image_is_invariants: bool,
    pub chain_map: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiReport {
    pub group_order: usize,
    pub cover_counts: Vec<usize>,
    pub degree_bound: usize,
    pub weight_cap: usize,
    pub rows: Vec<PhiRow>,
    pub composition: bool,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.composition && self.rows.iter().all(|r| r.injective && r.image_is_invariants && r.chain_map)
    }
}

/// `Φ`: a family `ω` in `A_dR(K, Hom(L, L′))` goes to the cover family
/// `(τ, g) ↦ ρ_H(g)⁻¹ ω_τ`, a form with values in the constant system
/// `Hom_Vect(V, W)`. The deck action is `(k⋆ω̃)_(σ,g) = ρ_H(k) ω̃_(σ,gk)`.
struct PhiSetup<'a> {
    cover: crate::simpset::CoverData,
    hom: &'a Representation,
    inverse_mats: Vec<Matrix>,
}

impl PhiSetup<'_> {
    fn family(&self, f: &MatchingFamily) -> MatchingFamily {
        let n = self.cover.group.order();
        let forms = (0..self.cover.space.len())
            .map(|id| {
                let (tau, g) = (id / n, id % n);
                mix(&self.inverse_mats[g], &f.forms[tau])
            })
            .collect();
        MatchingFamily { degree: f.degree, forms }
    }

    fn deck(&self, k: usize, f: &MatchingFamily) -> MatchingFamily {
        let forms = (0..self.cover.space.len())
            .map(|id| mix(self.hom.matrix(k), &f.forms[self.cover.deck(k, id)]))
            .collect();
        MatchingFamily { degree: f.degree, forms }
    }
}

fn mix(m: &Matrix, forms: &[PolyForm]) -> Vec<PolyForm> {
    (0..m.rows)
        .map(|a| {
            let mut acc = PolyForm::zero(forms.first().map_or(0, PolyForm::dim));
            for (b, f) in forms.iter().enumerate() {
                if !m.data[a][b].is_zero() {
                    acc.add_assign(&f.scaled(&m.data[a][b]));
                }
            }
            acc
        })
        .collect()
}

/// Compares `A_dR(K, Hom(L, L′))` with `(Hom(V, W) ⊗ A_dR(K̃))^{π₁}` for the
/// local systems of `V`, `W` through `labeling`, in every degree `≤ N` and
/// weight `≤ weight_cap`. The labeling must realize all of `π₁(K)`.
pub fn phi_comparison(
    k: &Arc<FinSimplicialSet>,
    labeling: &EdgeLabeling,
    v: &Representation,
    w: &Representation,
    degree_bound: usize,
    weight_cap: usize,
    coset_budget: usize,
) -> Result<PhiReport> {
    let hom = v.hom(w)?;
    let cover = universal_cover(k, labeling, coset_budget)?;
    let group = cover.group.clone();
    let l_hom = local_system_from_rep(k.clone(), labeling, &hom)?;
    let dh = hom.dim();
    let constant = LocalSystem::constant(cover.space.clone(), dh);
    let setup = PhiSetup {
        inverse_mats: group.elements().map(|g| hom.matrix(group.inv(g)).clone()).collect(),
        hom: &hom,
        cover,
    };
    let cover_space = setup.cover.space.clone();
    let gens = group.generators();
    let mut rows = Vec::new();
    for q in 0..=degree_bound {
        for wt in 0..=weight_cap {
            let src = adr_component(k, &l_hom, q, wt)?;
            let tgt = adr_component(&cover_space, &constant, q, wt)?;
            let families: Vec<MatchingFamily> = (0..src.dim()).map(|i| src.family(k, &unit(src.dim(), i))).collect();
            let images: Vec<MatchingFamily> = families.iter().map(|f| setup.family(f)).collect();
            let ambient = images.iter().map(|f| tgt.ambient_of(f)).collect::<Result<Vec<_>>>()?;
            let in_target = ambient.iter().all(|x| tgt.kernel.try_coords(x).is_some());
            let image_rank = rank_of_vectors(tgt.ambient, &ambient);
            let fixed = images.iter().all(|f| gens.iter().all(|&g| setup.deck(g, f) == *f));
            let invariant_dim = invariant_dimension(&tgt, &cover_space, &setup, &gens)?;
            let chain_map = families.iter().zip(&images).all(|(f, img)| setup.family(&f.differential()) == img.differential());
            rows.push(PhiRow {
                degree: q,
                max_weight: wt,
                source_dim: src.dim(),
                cover_dim: tgt.dim(),
                invariant_dim,
                image_rank,
                injective: in_target && image_rank == src.dim(),
                image_is_invariants: fixed && image_rank == invariant_dim,
                chain_map,
            });
        }
    }
    let composition = phi_composition_check(k, labeling, v, w, &setup, weight_cap.min(2))?;
    Ok(PhiReport {
        group_order: group.order(),
        cover_counts: cover_space.counts(),
        degree_bound,
        weight_cap,
        rows,
        composition,
    })
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn invariant_dimension(
    tgt: &AdrComponent,
    cover: &FinSimplicialSet,
    setup: &PhiSetup<'_>,
    gens: &[usize],
) -> Result<usize> {
    let d = tgt.dim();
    // columns of the stacked map (k⋆ − 1) over the generators k
    let mut columns: Vec<SparseVec> = Vec::with_capacity(d);
    for i in 0..d {
        let f = tgt.family(cover, &unit(d, i));
        let orig = tgt.ambient_of(&f)?;
        let mut col = SparseVec::new();
        for (k, &g) in gens.iter().enumerate() {
            let mut diff = tgt.ambient_of(&setup.deck(g, &f))?;
            crate::exactla::axpy(&mut diff, &-Rational::one(), &orig);
            col.extend(diff.into_iter().map(|(idx, c)| (k * tgt.ambient + idx, c)));
        }
        columns.push(col);
    }
    Ok(d - rank_of_vectors(gens.len() * tgt.ambient, &columns))
}

/// `Φ(f ∘ g) = Φ(f) ∘ Φ(g)` for sampled `g ∈ A_dR(Hom(L, L′))`, `f ∈ A_dR(End(L′))`.
fn phi_composition_check(
    k: &Arc<FinSimplicialSet>,
    labeling: &EdgeLabeling,
    v: &Representation,
    w: &Representation,
    setup: &PhiSetup<'_>,
    weight: usize,
) -> Result<bool> {
    const SAMPLES: usize = 3;
    let end_w = w.hom(w)?;
    let l_end = local_system_from_rep(k.clone(), labeling, &end_w)?;
    let l_hom = local_system_from_rep(k.clone(), labeling, setup.hom)?;
    let group = setup.cover.group.clone();
    let end_setup = PhiSetup {
        inverse_mats: group.elements().map(|g| end_w.matrix(group.inv(g)).clone()).collect(),
        hom: &end_w,
        cover: setup.cover.clone(),
    };
    let (dv, dw) = (v.dim(), w.dim());
    for q1 in 0..=1 {
        for q2 in 0..=1 {
            let fs = adr_component(k, &l_end, q1, weight)?;
            let gs = adr_component(k, &l_hom, q2, weight)?;
            for i in 0..fs.dim().min(SAMPLES) {
                for j in 0..gs.dim().min(SAMPLES) {
                    let f = fs.family(k, &unit(fs.dim(), i));
                    let g = gs.family(k, &unit(gs.dim(), j));
                    let lhs = setup.family(&tdr_compose(&f, &g, dw, dw, dv)?);
                    let rhs = tdr_compose(&end_setup.family(&f), &setup.family(&g), dw, dw, dv)?;
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The `(ℤ/2, M)` model of `RP²` with the six-vertex triangulation labeled
/// by the surjection of its fundamental group onto `ℤ/2`.
#[derive(Clone, Debug)]
pub struct Rp2Fixture {
    pub cdga: PresentedGCdga,
    pub space: Arc<FinSimplicialSet>,
    pub labeling: EdgeLabeling,
}

pub fn rp2_fixture() -> Rp2Fixture {
    let cdga = crate::fixtures::rp2_model();
    let space = Arc::new(crate::fixtures::rp2_6());
    let labeling = crate::simpset::first_surjective_labeling(&space, cdga.group().clone(), 1 << 16)
        .expect("RP² has fundamental group ℤ/2");
    Rp2Fixture { cdga, space, labeling }
}
