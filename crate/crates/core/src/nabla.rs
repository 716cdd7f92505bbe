//! Polynomial differential forms on standard simplices.
//!
//! `∇(p,*)` is generated by barycentric coordinates `t_0..t_p` and their
//! differentials subject to `Σ t_j = 1` and `Σ dt_j = 0`. Forms are kept in
//! reduced coordinates: `t_0` and `dt_0` are eliminated, so a form is a
//! unique linear combination of monomials `t_1^{a_1}⋯t_p^{a_p} dt_I`.
//!
//! The weight of a monomial is `Σ a_j + |I|`. It is preserved by `d` and `∧`
//! and by every simplicial operator that does not send a reduced coordinate
//! onto an eliminated one. In general a simplicial operator maps forms of
//! weight `≤ W` to forms of weight `≤ W`, so the spaces `F_W ∇(p,q)` of forms
//! of weight at most `W` form a finite-dimensional simplicial cochain complex
//! exhausting `∇`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactla::{int, Rational, SparseMatrix};
use crate::{Error, Result};

/// `t^a dt_I` in reduced coordinates. Bit `j-1` of `dts` marks `dt_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub dts: u32,
}

impl Monomial {
    pub fn one(p: usize) -> Self {
        Monomial { exps: vec![0; p], dts: 0 }
    }

    pub fn degree(&self) -> usize {
        self.dts.count_ones() as usize
    }

    pub fn weight(&self) -> usize {
        self.exps.iter().map(|a| *a as usize).sum::<usize>() + self.degree()
    }

    /// Indices `j ≥ 1` of the differentials, increasing.
    pub fn dt_indices(&self) -> Vec<usize> {
        (0..32).filter(|b| self.dts >> b & 1 == 1).map(|b| b + 1).collect()
    }
}

/// Sign of `dt_A ∧ dt_B` relative to the sorted product, or `None` if the
/// sets overlap.
fn wedge_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

/// Element of `∇(p,*)`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyForm {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "∇({}) {}", self.dim, self)
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            for (j, a) in m.exps.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(format!("t{}", j + 1)),
                    _ => factors.push(format!("t{}^{}", j + 1, a)),
                }
            }
            for j in m.dt_indices() {
                factors.push(format!("dt{j}"));
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} * {}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// JSON encoding of one monomial term.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MonomialJson {
    #[serde(with = "crate::exactla::serde_rational")]
    pub coeff: Rational,
    pub exps: Vec<u32>,
    pub dts: Vec<usize>,
}

impl PolyForm {
    pub fn zero(dim: usize) -> Self {
        PolyForm { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::term(dim, Monomial::one(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn term(dim: usize, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.exps.len(), dim, "monomial arity does not match simplex dimension");
        assert!(m.dts >> dim == 0, "dt index beyond simplex dimension");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        PolyForm { dim, terms }
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut f = Self::zero(dim);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    /// Barycentric coordinate `t_j`, `0 ≤ j ≤ p`.
    pub fn t(dim: usize, j: usize) -> Self {
        assert!(j <= dim, "coordinate t{j} does not exist on ∇({dim})");
        if j == 0 {
            let mut f = Self::one(dim);
            for k in 1..=dim {
                let mut exps = vec![0; dim];
                exps[k - 1] = 1;
                f.add_term(Monomial { exps, dts: 0 }, -Rational::one());
            }
            f
        } else {
            let mut exps = vec![0; dim];
            exps[j - 1] = 1;
            Self::term(dim, Monomial { exps, dts: 0 }, Rational::one())
        }
    }

    /// Differential `dt_j`, `0 ≤ j ≤ p`.
    pub fn dt(dim: usize, j: usize) -> Self {
        Self::t(dim, j).differential()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Form degree, if the form is homogeneous. The zero form has no degree.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Largest weight among the monomials (0 for the zero form).
    pub fn weight(&self) -> usize {
        self.terms.keys().map(Monomial::weight).max().unwrap_or(0)
    }

    pub fn is_weight_homogeneous(&self, w: usize) -> bool {
        self.terms.keys().all(|m| m.weight() == w)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, other: &PolyForm) {
        assert_eq!(self.dim, other.dim, "adding forms on different simplices");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add(&other.scaled(&-Rational::one()))
    }

    pub fn scaled(&self, c: &Rational) -> PolyForm {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        PolyForm { dim: self.dim, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Component of form degree `q`.
    pub fn degree_part(&self, q: usize) -> PolyForm {
        PolyForm {
            dim: self.dim,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == q).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Graded-commutative product.
    pub fn wedge(&self, other: &PolyForm) -> Result<PolyForm> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "wedge of forms on ∇({}) and ∇({})",
                self.dim, other.dim
            )));
        }
        Ok(self.wedge_unchecked(other))
    }

    pub(crate) fn wedge_unchecked(&self, other: &PolyForm) -> PolyForm {
        let mut out = PolyForm::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let Some(neg) = wedge_sign(ma.dts, mb.dts) else { continue };
                let exps = ma.exps.iter().zip(&mb.exps).map(|(a, b)| a + b).collect();
                let c = ca * cb;
                out.add_term(Monomial { exps, dts: ma.dts | mb.dts }, if neg { -c } else { c });
            }
        }
        out
    }

    /// `d(t_j) = dt_j`, extended as a derivation.
    pub fn differential(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.dim);
        for (m, c) in &self.terms {
            for j in 0..self.dim {
                let a = m.exps[j];
                if a == 0 || m.dts >> j & 1 == 1 {
                    continue;
                }
                // t^a dt_I -> a t^{a-e_j} dt_j ∧ dt_I
                let mut exps = m.exps.clone();
                exps[j] -= 1;
                let neg = (m.dts & ((1u32 << j) - 1)).count_ones() % 2 == 1;
                let coeff = c * int(a as i64);
                out.add_term(Monomial { exps, dts: m.dts | (1 << j) }, if neg { -coeff } else { coeff });
            }
        }
        out
    }

    /// Pullback along a monotone map `θ: [n] -> [p]` given as the list
    /// `θ(0), …, θ(n)`; the barycentric coordinate `t_j` of `∇(p)` goes to
    /// `Σ_{θ(k)=j} t_k` in `∇(n)`.
    pub fn pullback(&self, theta: &[usize]) -> Result<PolyForm> {
        let n = theta.len().checked_sub(1).ok_or_else(|| Error::Invalid("empty simplicial operator".into()))?;
        if theta.windows(2).any(|w| w[0] > w[1]) || theta.iter().any(|&x| x > self.dim) {
            return Err(Error::Invalid(format!("{theta:?} is not a monotone map into [{}]", self.dim)));
        }
        let images = PullbackImages::new(theta, self.dim, n);
        Ok(images.apply(self))
    }

    /// Face operator `d_i: ∇(p) -> ∇(p-1)`.
    pub fn face_map(&self, i: usize) -> Result<PolyForm> {
        let p = self.dim;
        if p == 0 || i > p {
            return Err(Error::OutOfRange(format!("face d_{i} on ∇({p})")));
        }
        let theta: Vec<usize> = (0..p).map(|k| if k < i { k } else { k + 1 }).collect();
        self.pullback(&theta)
    }

    /// Degeneracy operator `s_i: ∇(p) -> ∇(p+1)`.
    pub fn degeneracy_map(&self, i: usize) -> Result<PolyForm> {
        let p = self.dim;
        if i > p {
            return Err(Error::OutOfRange(format!("degeneracy s_{i} on ∇({p})")));
        }
        let theta: Vec<usize> = (0..=p + 1).map(|k| if k <= i { k } else { k - 1 }).collect();
        self.pullback(&theta)
    }

    /// `∫_{Δ^p}` of the top-degree part, with `dt_1∧⋯∧dt_p` positively oriented.
    pub fn integrate(&self) -> Rational {
        let full = if self.dim == 0 { 0 } else { (1u32 << self.dim) - 1 };
        let mut s = Rational::zero();
        for (m, c) in &self.terms {
            if m.dts != full {
                continue;
            }
            // ∫ t^a dt_1..dt_p = Π a_j! / (|a| + p)!
            let mut num = BigInt::one();
            for a in &m.exps {
                num *= factorial(*a as u64);
            }
            let total: u64 = m.exps.iter().map(|a| *a as u64).sum::<u64>() + self.dim as u64;
            s += c * Rational::new(num, factorial(total));
        }
        s
    }

    pub fn to_json(&self) -> Vec<MonomialJson> {
        self.terms
            .iter()
            .map(|(m, c)| MonomialJson { coeff: c.clone(), exps: m.exps.clone(), dts: m.dt_indices() })
            .collect()
    }

    pub fn from_json(dim: usize, terms: &[MonomialJson]) -> Result<PolyForm> {
        let mut f = PolyForm::zero(dim);
        for t in terms {
            if t.exps.len() != dim {
                return Err(Error::Parse(format!("monomial has {} exponents on ∇({dim})", t.exps.len())));
            }
            let mut dts = 0u32;
            let mut prev = 0;
            for &j in &t.dts {
                if j == 0 || j > dim || j <= prev {
                    return Err(Error::Parse(format!("dt indices {:?} must increase within 1..={dim}", t.dts)));
                }
                prev = j;
                dts |= 1 << (j - 1);
            }
            f.add_term(Monomial { exps: t.exps.clone(), dts }, t.coeff.clone());
        }
        Ok(f)
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Images of the reduced generators under a pullback, with cached powers.
struct PullbackImages {
    n: usize,
    t_img: Vec<PolyForm>,
    dt_img: Vec<PolyForm>,
    powers: Vec<Vec<PolyForm>>,
}

impl PullbackImages {
    fn new(theta: &[usize], p: usize, n: usize) -> Self {
        let mut t_img = Vec::with_capacity(p);
        for j in 1..=p {
            let mut f = PolyForm::zero(n);
            for (k, &tk) in theta.iter().enumerate() {
                if tk == j {
                    f.add_assign(&PolyForm::t(n, k));
                }
            }
            t_img.push(f);
        }
        let dt_img = t_img.iter().map(PolyForm::differential).collect();
        let powers = vec![vec![PolyForm::one(n)]; p];
        PullbackImages { n, t_img, dt_img, powers }
    }

    fn power(&mut self, j: usize, a: usize) -> PolyForm {
        while self.powers[j].len() <= a {
            let next = self.powers[j].last().expect("power 0").wedge_unchecked(&self.t_img[j]);
            self.powers[j].push(next);
        }
        self.powers[j][a].clone()
    }

    fn monomial(&mut self, m: &Monomial) -> PolyForm {
        let mut f = PolyForm::one(self.n);
        for (j, a) in m.exps.iter().enumerate() {
            if *a > 0 {
                let pw = self.power(j, *a as usize);
                f = f.wedge_unchecked(&pw);
            }
        }
        for j in m.dt_indices() {
            f = f.wedge_unchecked(&self.dt_img[j - 1]);
        }
        f
    }

    fn apply(mut self, form: &PolyForm) -> PolyForm {
        let mut out = PolyForm::zero(self.n);
        for (m, c) in &form.terms {
            out.add_assign(&self.monomial(m).scaled(c));
        }
        out
    }
}

/// Basis of the weight-`w`, degree-`q` part of `∇(p,*)`, in lexicographic
/// monomial order. Its size is `C(w-q+p-1, p-1)·C(p,q)` for `w ≥ q`.
pub fn monomial_basis(p: usize, q: usize, w: usize) -> Vec<PolyForm> {
    monomials(p, q, w).into_iter().map(|m| PolyForm::term(p, m, Rational::one())).collect()
}

/// Monomials of exact weight `w` and degree `q` on `∇(p)`.
pub fn monomials(p: usize, q: usize, w: usize) -> Vec<Monomial> {
    if q > p || w < q {
        return Vec::new();
    }
    let poly_deg = w - q;
    let mut exps_list = Vec::new();
    compositions(p, poly_deg as u32, &mut Vec::new(), &mut exps_list);
    if p == 0 {
        return if poly_deg == 0 && q == 0 { vec![Monomial::one(0)] } else { Vec::new() };
    }
    let masks: Vec<u32> = (0u32..(1 << p)).filter(|m| m.count_ones() as usize == q).collect();
    let mut out = Vec::with_capacity(exps_list.len() * masks.len());
    for exps in exps_list {
        for &dts in &masks {
            out.push(Monomial { exps: exps.clone(), dts });
        }
    }
    out
}

fn compositions(parts: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() == parts {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if prefix.len() + 1 == parts {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for a in (0..=total).rev() {
        prefix.push(a);
        compositions(parts, total - a, prefix, out);
        prefix.pop();
    }
}

/// Indexed monomial basis of `F_W ∇(p,q)`: every monomial of degree `q` and
/// weight at most `W`.
#[derive(Clone, Debug)]
pub struct FilteredBasis {
    pub p: usize,
    pub q: usize,
    pub max_weight: usize,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl FilteredBasis {
    pub fn new(p: usize, q: usize, max_weight: usize) -> Self {
        let monomials: Vec<Monomial> = (0..=max_weight).flat_map(|w| monomials(p, q, w)).collect();
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        FilteredBasis { p, q, max_weight, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn form(&self, i: usize) -> PolyForm {
        PolyForm::term(self.p, self.monomials[i].clone(), Rational::one())
    }

    /// Coordinates of a form in this basis; fails if a monomial is missing.
    pub fn coords(&self, f: &PolyForm) -> Result<BTreeMap<usize, Rational>> {
        f.terms()
            .iter()
            .map(|(m, c)| {
                self.index_of(m)
                    .map(|i| (i, c.clone()))
                    .ok_or_else(|| Error::Invalid(format!("monomial {m:?} outside the filtered basis")))
            })
            .collect()
    }

    pub fn assemble(&self, coords: &BTreeMap<usize, Rational>) -> PolyForm {
        PolyForm::from_terms(self.p, coords.iter().map(|(i, c)| (self.monomials[*i].clone(), c.clone())))
    }
}

/// Matrix of the pullback `θ^*: F_W ∇(p,q) -> F_W ∇(n,q)` in filtered bases.
pub fn operator_matrix(theta: &[usize], source: &FilteredBasis, target: &FilteredBasis) -> Result<SparseMatrix> {
    assert_eq!(source.q, target.q);
    let mut images = PullbackImages::new(theta, source.p, target.p);
    let mut out = SparseMatrix::zeros(target.len(), source.len());
    for (col, m) in source.monomials.iter().enumerate() {
        let img = images.monomial(m);
        for (mm, c) in img.terms() {
            let row = target
                .index_of(mm)
                .ok_or_else(|| Error::Invalid(format!("image monomial {mm:?} leaves F_{}", target.max_weight)))?;
            out.set(row, col, c.clone());
        }
    }
    Ok(out)
}

/// Matrix of `d: F_W ∇(p,q) -> F_W ∇(p,q+1)`.
pub fn differential_matrix(source: &FilteredBasis, target: &FilteredBasis) -> SparseMatrix {
    assert_eq!(source.p, target.p);
    assert_eq!(source.q + 1, target.q);
    let mut out = SparseMatrix::zeros(target.len(), source.len());
    for (col, m) in source.monomials.iter().enumerate() {
        let img = PolyForm::term(source.p, m.clone(), Rational::one()).differential();
        for (mm, c) in img.terms() {
            let row = target.index_of(mm).expect("d preserves weight");
            out.set(row, col, c.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{frac, CochainComplex};
    use proptest::prelude::*;

    fn t(p: usize, j: usize) -> PolyForm {
        PolyForm::t(p, j)
    }
    fn dt(p: usize, j: usize) -> PolyForm {
        PolyForm::dt(p, j)
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(PolyForm::one(1).wedge(&t(1, 1)).unwrap(), t(1, 1));
        assert!(dt(1, 1).wedge(&dt(1, 1)).unwrap().is_zero());
        let lhs = t(2, 1).wedge(&dt(2, 2)).unwrap().wedge(&dt(2, 1)).unwrap();
        let rhs = t(2, 1).wedge(&dt(2, 1)).unwrap().wedge(&dt(2, 2)).unwrap().scaled(&int(-1));
        assert_eq!(lhs, rhs);
        assert!(t(1, 1).wedge(&t(2, 1)).is_err());
    }

    #[test]
    fn differential_examples() {
        let t1 = t(1, 1);
        assert_eq!(t1.wedge(&t1).unwrap().differential(), t1.wedge(&dt(1, 1)).unwrap().scaled(&int(2)));
        assert!(dt(1, 1).differential().is_zero());
        let prod = t(2, 1).wedge(&t(2, 2)).unwrap();
        let expect = t(2, 2).wedge(&dt(2, 1)).unwrap().add(&t(2, 1).wedge(&dt(2, 2)).unwrap());
        assert_eq!(prod.differential(), expect);
    }

    #[test]
    fn eliminated_coordinates() {
        assert_eq!(t(2, 0).add(&t(2, 1)).add(&t(2, 2)), PolyForm::one(2));
        assert!(dt(3, 0).add(&dt(3, 1)).add(&dt(3, 2)).add(&dt(3, 3)).is_zero());
    }

    #[test]
    fn face_examples() {
        assert!(t(1, 1).face_map(1).unwrap().is_zero());
        assert_eq!(t(1, 1).face_map(0).unwrap(), PolyForm::one(0));
        let f = t(2, 1).wedge(&dt(2, 2)).unwrap();
        assert!(f.face_map(2).unwrap().is_zero());
        assert!(matches!(t(1, 1).face_map(2), Err(Error::OutOfRange(_))));
        assert!(matches!(PolyForm::one(0).face_map(0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(PolyForm::one(0).degeneracy_map(0).unwrap(), PolyForm::one(1));
        assert_eq!(t(0, 0).degeneracy_map(0).unwrap(), PolyForm::one(1));
        assert_eq!(t(1, 1).degeneracy_map(0).unwrap(), t(2, 2));
        assert!(matches!(t(1, 1).degeneracy_map(2), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn basis_examples() {
        assert_eq!(monomial_basis(1, 0, 0), vec![PolyForm::one(1)]);
        assert_eq!(monomial_basis(1, 1, 1), vec![dt(1, 1)]);
        let b = monomial_basis(2, 1, 2);
        assert_eq!(b.len(), 4);
        for f in [
            t(2, 1).wedge(&dt(2, 1)).unwrap(),
            t(2, 1).wedge(&dt(2, 2)).unwrap(),
            t(2, 2).wedge(&dt(2, 1)).unwrap(),
            t(2, 2).wedge(&dt(2, 2)).unwrap(),
        ] {
            assert!(b.contains(&f));
        }
        assert!(monomial_basis(2, 3, 5).is_empty());
        assert!(monomial_basis(2, 2, 1).is_empty());
    }

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Exhaustive enumeration of exponent vectors and dt sets.
    fn brute_count(p: usize, q: usize, w: usize) -> usize {
        let mut count = 0;
        let bound = w as u32 + 1;
        let total = (bound as usize).pow(p as u32);
        for code in 0..total {
            let mut c = code;
            let mut s = 0usize;
            for _ in 0..p {
                s += c % bound as usize;
                c /= bound as usize;
            }
            for mask in 0u32..(1 << p) {
                if mask.count_ones() as usize == q && s + q == w {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn basis_dimension_formula() {
        for p in 1..=4 {
            for q in 0..=4 {
                for w in 0..=4 {
                    let n = monomial_basis(p, q, w).len();
                    let formula = if w >= q { binom(w - q + p - 1, p - 1) * binom(p, q) } else { 0 };
                    assert_eq!(n, formula, "p={p} q={q} w={w}");
                    assert_eq!(n, brute_count(p, q, w), "p={p} q={q} w={w}");
                }
            }
        }
    }

    #[test]
    fn weight_pieces_of_simplex() {
        for p in 0..=3 {
            for w in 0..=4 {
                let bases: Vec<FilteredBasis> = (0..=p).map(|q| exact_weight_basis(p, q, w)).collect();
                let diffs = (0..p).map(|q| differential_matrix(&bases[q], &bases[q + 1])).collect();
                let cx = CochainComplex::new(0, bases.iter().map(|b| b.len()).collect(), diffs).unwrap();
                let h = cx.cohomology_dims();
                for (q, d) in h {
                    let expect = usize::from(w == 0 && q == 0);
                    assert_eq!(d, expect, "p={p} w={w} q={q}");
                }
            }
        }
    }

    fn exact_weight_basis(p: usize, q: usize, w: usize) -> FilteredBasis {
        let monomials = monomials(p, q, w);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        FilteredBasis { p, q, max_weight: w, monomials, index }
    }

    #[test]
    fn integration_values() {
        // ∫_0^1 t dt = 1/2 ; ∫_{Δ²} t1 dt1 dt2 = 1/6
        assert_eq!(t(1, 1).wedge(&dt(1, 1)).unwrap().integrate(), frac(1, 2));
        let f = t(2, 1).wedge(&dt(2, 1)).unwrap().wedge(&dt(2, 2)).unwrap();
        assert_eq!(f.integrate(), frac(1, 6));
        assert_eq!(PolyForm::constant(0, int(3)).integrate(), int(3));
    }

    #[test]
    fn render_and_json() {
        let f = t(2, 1).wedge(&dt(2, 2)).unwrap().scaled(&int(2));
        assert_eq!(f.to_string(), "2 * t1*dt2");
        let back = PolyForm::from_json(2, &f.to_json()).unwrap();
        assert_eq!(back, f);
        let bad = [MonomialJson { coeff: int(1), exps: vec![0, 0], dts: vec![2, 1] }];
        assert!(PolyForm::from_json(2, &bad).is_err());
    }

    fn arb_form(p: usize, max_w: usize) -> impl Strategy<Value = PolyForm> {
        let terms = proptest::collection::vec(
            (proptest::collection::vec(0u32..3, p), 0u32..(1 << p), -3i64..=3),
            0..4,
        );
        terms.prop_map(move |ts| {
            let mut f = PolyForm::zero(p);
            for (exps, dts, c) in ts {
                let m = Monomial { exps, dts };
                if m.weight() <= max_w {
                    f.add_term(m, int(c));
                }
            }
            f
        })
    }

    fn homogeneous_parts(f: &PolyForm) -> Vec<(usize, PolyForm)> {
        (0..=f.dim()).map(|q| (q, f.degree_part(q))).filter(|(_, g)| !g.is_zero()).collect()
    }

    fn sign(k: usize) -> Rational {
        if k % 2 == 0 { int(1) } else { int(-1) }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn leibniz(a in arb_form(3, 5), b in arb_form(3, 5)) {
            for (qa, ap) in homogeneous_parts(&a) {
                let lhs = ap.wedge(&b).unwrap().differential();
                let rhs = ap.differential().wedge(&b).unwrap()
                    .add(&ap.wedge(&b.differential()).unwrap().scaled(&sign(qa)));
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn d_squared_zero(a in arb_form(4, 6)) {
            prop_assert!(a.differential().differential().is_zero());
        }

        #[test]
        fn graded_commutative(a in arb_form(3, 5), b in arb_form(3, 5)) {
            for (qa, ap) in homogeneous_parts(&a) {
                for (qb, bp) in homogeneous_parts(&b) {
                    let lhs = ap.wedge(&bp).unwrap();
                    let rhs = bp.wedge(&ap).unwrap().scaled(&sign(qa * qb));
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }

        #[test]
        fn simplicial_identities(a in arb_form(3, 4), i in 0usize..=3, j in 0usize..=3) {
            // d_i d_j = d_{j-1} d_i for i < j
            if i < j {
                let lhs = a.face_map(j).unwrap().face_map(i).unwrap();
                let rhs = a.face_map(i).unwrap().face_map(j - 1).unwrap();
                // composition order: (d_i d_j)(a) means apply the operator d_i d_j of Δ;
                // on forms the pullbacks compose contravariantly.
                prop_assert_eq!(lhs, rhs);
            }
            // s_j s_i = s_i s_{j-1} for i < j (as operators), s-faces mixed identities
            let p = a.dim();
            if i <= j && j <= p {
                let lhs = a.degeneracy_map(i).unwrap().degeneracy_map(j + 1).unwrap();
                let rhs = a.degeneracy_map(j).unwrap().degeneracy_map(i).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
            if j <= p {
                let s = a.degeneracy_map(j).unwrap();
                // d_j s_j = d_{j+1} s_j = id
                prop_assert_eq!(&s.face_map(j).unwrap(), &a);
                prop_assert_eq!(&s.face_map(j + 1).unwrap(), &a);
                if i < j {
                    prop_assert_eq!(s.face_map(i).unwrap(), a.face_map(i).unwrap().degeneracy_map(j - 1).unwrap());
                }
                if i > j + 1 && i <= p + 1 {
                    prop_assert_eq!(s.face_map(i).unwrap(), a.face_map(i - 1).unwrap().degeneracy_map(j).unwrap());
                }
            }
        }

        #[test]
        fn simplicial_operators_commute_with_d_and_filtration(a in arb_form(3, 5), i in 0usize..=3) {
            let f = a.face_map(i).unwrap();
            prop_assert_eq!(a.differential().face_map(i).unwrap(), f.differential());
            prop_assert!(f.weight() <= a.weight());
            let s = a.degeneracy_map(i).unwrap();
            prop_assert_eq!(a.differential().degeneracy_map(i).unwrap(), s.differential());
            // degeneracies never touch the eliminated coordinate, so weight is exact
            for m in a.terms().keys() {
                let single = PolyForm::term(3, m.clone(), int(1));
                let img = single.degeneracy_map(i).unwrap();
                prop_assert!(img.is_weight_homogeneous(m.weight()));
            }
            if i >= 1 {
                for m in a.terms().keys() {
                    let img = PolyForm::term(3, m.clone(), int(1)).face_map(i).unwrap();
                    prop_assert!(img.is_weight_homogeneous(m.weight()));
                }
            }
        }

        #[test]
        fn face_maps_multiplicative(a in arb_form(3, 4), b in arb_form(3, 4), i in 0usize..=3) {
            let lhs = a.wedge(&b).unwrap().face_map(i).unwrap();
            let rhs = a.face_map(i).unwrap().wedge(&b.face_map(i).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn stokes(a in arb_form(2, 5), b in arb_form(3, 5)) {
            for form in [a, b] {
                let p = form.dim();
                let w = form.degree_part(p - 1);
                let lhs = w.differential().integrate();
                let mut rhs = Rational::zero();
                for i in 0..=p {
                    rhs += sign(i) * w.face_map(i).unwrap().integrate();
                }
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
