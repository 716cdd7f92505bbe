//! Finite-dimensional rational representations of a finite group.
//!
//! Bases are fixed so that the forgetful functor is strict: `tensor(V, W)`
//! uses the Kronecker basis `e_i ⊗ f_j ↦ i·dim W + j`, and `hom(V, W)` is
//! `W ⊗ V*`, i.e. a `dim W × dim V` matrix flattened row-major.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactla::{kernel_basis, serde_matrix, Echelon, Matrix, Rational, SparseMatrix, SparseVec};
use crate::group::{FiniteGroup, GroupJson};
use crate::{Error, Result};

/// Largest group order accepted by [`tensor_automorphisms`].
pub const TANNAKA_BUDGET: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<Matrix>,
}

/// Either the name of a known group or an inline table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Named(String),
    Inline(GroupJson),
}

/// JSON schema `{group, dim, matrices: {element: [[rational strings]]}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub group: GroupRef,
    pub dim: usize,
    pub matrices: BTreeMap<String, MatrixJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(#[serde(with = "serde_matrix")] pub Vec<Vec<Rational>>);

pub fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Representation {
    pub fn new(group: Arc<FiniteGroup>, dim: usize, matrices: Vec<Matrix>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::Invalid(format!(
                "expected {} matrices, got {}",
                group.order(),
                matrices.len()
            )));
        }
        for (g, m) in matrices.iter().enumerate() {
            if m.rows != dim || m.cols != dim {
                return Err(Error::DimensionMismatch(format!(
                    "matrix of {} is {}x{}, expected {dim}x{dim}",
                    group.name(g),
                    m.rows,
                    m.cols
                )));
            }
        }
        if !matrices[group.identity()].is_identity() {
            return Err(Error::Invalid("ρ(e) is not the identity".into()));
        }
        for a in group.elements() {
            for b in group.elements() {
                if matrices[a].mul(&matrices[b]) != matrices[group.mul(a, b)] {
                    return Err(Error::Invalid(format!(
                        "ρ({})ρ({}) ≠ ρ({}·{})",
                        group.name(a),
                        group.name(b),
                        group.name(a),
                        group.name(b)
                    )));
                }
            }
        }
        Ok(Representation { group, dim, matrices })
    }

    pub fn trivial(group: Arc<FiniteGroup>, dim: usize) -> Self {
        let matrices = vec![Matrix::identity(dim); group.order()];
        Representation { group, dim, matrices }
    }

    /// One-dimensional representation through a character `G → {±1}`.
    pub fn from_sign(group: Arc<FiniteGroup>, sign: impl Fn(usize) -> i64) -> Result<Self> {
        let matrices = group.elements().map(|g| Matrix::from_ints(&[&[sign(g)]])).collect();
        Self::new(group, 1, matrices)
    }

    pub fn from_json(j: &RepresentationJson, resolve: impl Fn(&str) -> Option<FiniteGroup>) -> Result<Self> {
        let group = match &j.group {
            GroupRef::Named(name) => resolve(name).ok_or_else(|| Error::Invalid(format!("unknown group {name}")))?,
            GroupRef::Inline(g) => FiniteGroup::from_json(g)?,
        };
        let mut matrices = Vec::with_capacity(group.order());
        for g in group.elements() {
            let m = j
                .matrices
                .get(group.name(g))
                .ok_or_else(|| Error::Invalid(format!("no matrix for element {}", group.name(g))))?;
            if m.0.len() != j.dim || m.0.iter().any(|r| r.len() != j.dim) {
                return Err(Error::DimensionMismatch(format!("matrix of {} is not {}x{}", group.name(g), j.dim, j.dim)));
            }
            matrices.push(Matrix { rows: j.dim, cols: j.dim, data: m.0.clone() });
        }
        Self::new(Arc::new(group), j.dim, matrices)
    }

    pub fn to_json(&self) -> RepresentationJson {
        RepresentationJson {
            group: GroupRef::Inline(self.group.to_json()),
            dim: self.dim,
            matrices: self
                .group
                .elements()
                .map(|g| (self.group.name(g).to_string(), MatrixJson(self.matrices[g].data.clone())))
                .collect(),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn character(&self) -> Vec<Rational> {
        self.matrices.iter().map(Matrix::trace).collect()
    }

    fn check_group(&self, other: &Representation) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch("representations of different groups".into()))
        }
    }

    fn build(&self, dim: usize, f: impl Fn(usize) -> Matrix) -> Representation {
        Representation { group: self.group.clone(), dim, matrices: self.group.elements().map(f).collect() }
    }

    pub fn tensor(&self, other: &Representation) -> Result<Representation> {
        self.check_group(other)?;
        Ok(self.build(self.dim * other.dim, |g| self.matrices[g].kron(&other.matrices[g])))
    }

    pub fn dual(&self) -> Representation {
        self.build(self.dim, |g| self.matrices[self.group.inv(g)].transpose())
    }

    /// `hom(V, W) = W ⊗ V*`; `self` is `V`.
    pub fn hom(&self, target: &Representation) -> Result<Representation> {
        target.tensor(&self.dual())
    }

    pub fn oplus(&self, other: &Representation) -> Result<Representation> {
        self.check_group(other)?;
        Ok(self.build(self.dim + other.dim, |g| self.matrices[g].block_diag(&other.matrices[g])))
    }

    /// The underlying space with trivial action.
    pub fn underlying(&self) -> Representation {
        Representation::trivial(self.group.clone(), self.dim)
    }

    pub fn is_equivariant(&self, target: &Representation, m: &Matrix) -> bool {
        m.rows == target.dim
            && m.cols == self.dim
            && self.group.elements().all(|g| m.mul(&self.matrices[g]) == target.matrices[g].mul(m))
    }

    /// Basis of `Hom_G(self, target)`.
    pub fn equivariant_maps(&self, target: &Representation) -> Result<Vec<Matrix>> {
        self.check_group(target)?;
        let gens = self.group.generators();
        let cs = commutation_constraints(
            target.dim,
            self.dim,
            gens.iter().map(|&g| (&target.matrices[g], &self.matrices[g])),
        );
        let k = kernel_basis(&cs);
        Ok(k.vectors.iter().map(|v| unflatten_sparse(target.dim, self.dim, v)).collect())
    }

    /// `v ↦ (v' ↦ (g ↦ ⟨v', g v⟩))` into `hom(dual(V_u), V_r)`, with two retractions.
    pub fn phi_embedding(&self) -> PhiEmbedding {
        let n = self.dim;
        let order = self.group.order();
        let reg = regular_representation(self.group.clone());
        let target = self.underlying().dual().hom(&reg.left).expect("same group");
        let mut phi = Matrix::zeros(order * n, n);
        for h in self.group.elements() {
            for i in 0..n {
                for j in 0..n {
                    phi.data[h * n + i][j] = self.matrices[h].data[i][j].clone();
                }
            }
        }
        let e = self.group.identity();
        let mut eval = Matrix::zeros(n, order * n);
        for i in 0..n {
            eval.data[i][e * n + i] = Rational::one();
        }
        let mut avg = Matrix::zeros(n, order * n);
        for g in self.group.elements() {
            let term = self.matrices[g].mul(&eval).mul(&target.matrices[self.group.inv(g)]);
            avg = avg.add(&term);
        }
        let equivariant_retraction = avg.scaled(&Rational::new(1.into(), (order as i64).into()));
        PhiEmbedding {
            morphism: RepMorphism { source: self.clone(), target, matrix: phi },
            evaluation: eval,
            equivariant_retraction,
        }
    }
}

/// Rows encoding `A·X = X·B` for an unknown `rows × cols` matrix `X`, flattened row-major.
pub(crate) fn commutation_constraints<'a>(
    rows: usize,
    cols: usize,
    pairs: impl Iterator<Item = (&'a Matrix, &'a Matrix)>,
) -> SparseMatrix {
    let mut out = SparseMatrix::zeros(0, rows * cols);
    for (a, b) in pairs {
        for i in 0..rows {
            for j in 0..cols {
                let mut row = SparseVec::new();
                // (A X)_{ij} = Σ_k A_ik X_kj
                for k in 0..rows {
                    let x = &a.data[i][k];
                    if !x.is_zero() {
                        *row.entry(k * cols + j).or_insert_with(Rational::zero) += x;
                    }
                }
                // (X B)_{ij} = Σ_k X_ik B_kj
                for k in 0..cols {
                    let x = &b.data[k][j];
                    if !x.is_zero() {
                        *row.entry(i * cols + k).or_insert_with(Rational::zero) -= x;
                    }
                }
                row.retain(|_, v| !v.is_zero());
                if !row.is_empty() {
                    out.push_row(row);
                }
            }
        }
    }
    out
}

fn unflatten_sparse(rows: usize, cols: usize, v: &SparseVec) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for (k, x) in v {
        m.data[k / cols][k % cols] = x.clone();
    }
    m
}

/// An equivariant linear map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMorphism {
    pub source: Representation,
    pub target: Representation,
    pub matrix: Matrix,
}

impl RepMorphism {
    pub fn new(source: Representation, target: Representation, matrix: Matrix) -> Result<Self> {
        if matrix.rows != target.dim || matrix.cols != source.dim {
            return Err(Error::DimensionMismatch(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows, matrix.cols, target.dim, source.dim
            )));
        }
        if !source.is_equivariant(&target, &matrix) {
            return Err(Error::Invalid("matrix is not equivariant".into()));
        }
        Ok(RepMorphism { source, target, matrix })
    }

    pub fn compose(&self, before: &RepMorphism) -> Result<RepMorphism> {
        if before.target != self.source {
            return Err(Error::DimensionMismatch("composable morphisms need matching objects".into()));
        }
        Ok(RepMorphism {
            source: before.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&before.matrix),
        })
    }
}

/// Output of [`Representation::phi_embedding`].
#[derive(Clone, Debug)]
pub struct PhiEmbedding {
    pub morphism: RepMorphism,
    /// Evaluation at the identity element.
    pub evaluation: Matrix,
    /// Group average of `evaluation`; an equivariant retraction.
    pub equivariant_retraction: Matrix,
}

/// `V_r` on the δ-basis with `[ρ(g)α](g') = α(g'g)` and `[ϱ(g)α](g') = α(gg')`.
#[derive(Clone, Debug)]
pub struct RegularRep {
    pub left: Representation,
    /// `ϱ(g)`, an anti-homomorphism: `ϱ(g)ϱ(h) = ϱ(hg)`.
    pub right: Vec<Matrix>,
}

pub fn regular_representation(group: Arc<FiniteGroup>) -> RegularRep {
    let n = group.order();
    let perm = |f: &dyn Fn(usize) -> usize| {
        let mut m = Matrix::zeros(n, n);
        for h in 0..n {
            m.data[f(h)][h] = Rational::one();
        }
        m
    };
    // ρ(g)δ_h = δ_{h g⁻¹}, ϱ(g)δ_h = δ_{g⁻¹ h}
    let left = group.elements().map(|g| perm(&|h| group.mul(h, group.inv(g)))).collect();
    let right = group.elements().map(|g| perm(&|h| group.mul(group.inv(g), h))).collect();
    RegularRep { left: Representation { group: group.clone(), dim: n, matrices: left }, right }
}

/// The first nontrivial character `G → {±1}` (generator images in odometer
/// order), as a one-dimensional representation.
pub fn sign_representation(group: Arc<FiniteGroup>) -> Option<Representation> {
    let gens = group.generators();
    for mask in 1u64..(1u64 << gens.len().min(63)) {
        let mut value: Vec<Option<i64>> = vec![None; group.order()];
        value[group.identity()] = Some(1);
        let mut queue = std::collections::VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (k, g) in gens.iter().enumerate() {
                let y = group.mul(x, *g);
                if value[y].is_none() {
                    let s = if mask >> k & 1 == 1 { -1 } else { 1 };
                    value[y] = Some(value[x].expect("visited") * s);
                    queue.push_back(y);
                }
            }
        }
        let chi: Vec<i64> = value.into_iter().map(|v| v.expect("generated")).collect();
        let is_hom = group
            .elements()
            .all(|a| group.elements().all(|b| chi[group.mul(a, b)] == chi[a] * chi[b]));
        if is_hom {
            return Representation::from_sign(group.clone(), |g| chi[g]).ok();
        }
    }
    None
}

/// The group of tensor automorphisms of the fiber functor, computed on `V_r`.
#[derive(Clone, Debug)]
pub struct TannakaGroup {
    pub group: FiniteGroup,
    /// Automorphisms of `ω(V_r)`, indexed like `group`.
    pub automorphisms: Vec<Matrix>,
    /// `φ_G` as a map of element indices `G → group`.
    pub phi: Vec<usize>,
}

/// Invertible endomorphisms of `ω(V_r)` commuting with `End_G(V_r)` and
/// respecting the pointwise product and unit of functions on `G`.
pub fn tensor_automorphisms(group: Arc<FiniteGroup>) -> Result<TannakaGroup> {
    let n = group.order();
    if n > TANNAKA_BUDGET {
        return Err(Error::BudgetExceeded(format!("group order {n} exceeds {TANNAKA_BUDGET}")));
    }
    let reg = regular_representation(group.clone());
    // End_G(V_r) is spanned by the right translations.
    let endos = reg.left.equivariant_maps(&reg.left)?;
    let commutant_eqs =
        commutation_constraints(n, n, endos.iter().map(|m| (m, m)));
    let commutant = kernel_basis(&commutant_eqs);
    let commutant_rows = SparseMatrix::from_rows(n * n, commutant.vectors.clone());
    let commutant_ech: Echelon = crate::exactla::echelon(&commutant_rows);

    // An algebra automorphism sends the minimal idempotent δ_e to some δ_x, and
    // commuting with ϱ then fixes it on every δ_h = ϱ(h⁻¹)δ_e.
    let unit: Vec<Rational> = vec![Rational::one(); n];
    let mut autos = Vec::new();
    for x in group.elements() {
        let mut a = Matrix::zeros(n, n);
        for h in group.elements() {
            let image_col = reg.right[group.inv(h)].data.iter().map(|row| row[x].clone()).collect::<Vec<_>>();
            for (r, v) in image_col.into_iter().enumerate() {
                a.data[r][h] = v;
            }
        }
        if !commutant_ech.contains_in_rowspace(&crate::exactla::to_sparse(&a.flatten())) {
            continue;
        }
        if a.mul_vec(&unit) != unit || a.inverse().is_none() {
            continue;
        }
        let multiplicative = group.elements().all(|h| {
            group.elements().all(|k| {
                let ah: Vec<Rational> = a.data.iter().map(|r| r[h].clone()).collect();
                let ak: Vec<Rational> = a.data.iter().map(|r| r[k].clone()).collect();
                let prod: Vec<Rational> = ah.iter().zip(&ak).map(|(p, q)| p * q).collect();
                let expect: Vec<Rational> = if h == k { ah.clone() } else { vec![Rational::zero(); n] };
                prod == expect
            })
        });
        if multiplicative {
            autos.push(a);
        }
    }

    let mut phi = Vec::with_capacity(n);
    for g in group.elements() {
        let pos = autos
            .iter()
            .position(|a| a == reg.left.matrix(g))
            .ok_or_else(|| Error::Verification(format!("φ_G({}) is not a tensor automorphism", group.name(g))))?;
        phi.push(pos);
    }
    if autos.len() != n || phi.iter().collect::<BTreeSet<_>>().len() != n {
        return Err(Error::Verification(format!(
            "found {} tensor automorphisms, expected exactly the {} images of φ_G",
            autos.len(),
            n
        )));
    }
    let table: Vec<Vec<usize>> = autos
        .iter()
        .map(|a| {
            autos
                .iter()
                .map(|b| {
                    let ab = a.mul(b);
                    autos.iter().position(|c| *c == ab).expect("closed under composition")
                })
                .collect()
        })
        .collect();
    let mut names = vec![String::new(); n];
    for g in group.elements() {
        names[phi[g]] = format!("φ({})", group.name(g));
    }
    let aut_group = FiniteGroup::new(names, table)?;
    if !group.is_homomorphism(&aut_group, &phi) {
        return Err(Error::Verification("φ_G is not a homomorphism".into()));
    }
    Ok(TannakaGroup { group: aut_group, automorphisms: autos, phi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn sign_z2() -> Representation {
        Representation::from_sign(z2(), |g| if g == 0 { 1 } else { -1 }).unwrap()
    }

    fn s3_standard() -> Representation {
        let g = Arc::new(FiniteGroup::symmetric3());
        // permutation rep on ℚ³ restricted to the sum-zero plane, basis e0-e1, e1-e2
        let mats = g
            .elements()
            .map(|x| {
                let perm: Vec<usize> = (0..3)
                    .map(|i| {
                        // recover the permutation from the element name "(abc)"
                        let name = g.name(x);
                        if name == "e" {
                            i
                        } else {
                            name.as_bytes()[1 + i] as usize - b'0' as usize
                        }
                    })
                    .collect();
                let image = |v: [i64; 3]| {
                    let mut w = [0i64; 3];
                    for i in 0..3 {
                        w[perm[i]] += v[i];
                    }
                    w
                };
                let b1 = image([1, -1, 0]);
                let b2 = image([0, 1, -1]);
                // coordinates in basis (1,-1,0), (0,1,-1): a·b1 + b·b2 = (a, b - a, -b)
                let coords = |w: [i64; 3]| [w[0], -w[2]];
                let c1 = coords(b1);
                let c2 = coords(b2);
                Matrix::from_ints(&[&[c1[0], c2[0]], &[c1[1], c2[1]]])
            })
            .collect();
        Representation::new(g, 2, mats).unwrap()
    }

    #[test]
    fn rejects_non_homomorphism() {
        let g = z2();
        let m = vec![Matrix::identity(1), Matrix::from_ints(&[&[2]])];
        assert!(Representation::new(g, 1, m).is_err());
    }

    #[test]
    fn tensor_examples() {
        let v = sign_z2();
        let one = Representation::trivial(z2(), 1);
        assert_eq!(one.tensor(&v).unwrap(), v);
        assert_eq!(v.tensor(&v).unwrap(), one);
        assert_eq!(v.hom(&one).unwrap(), v);
        let z3 = Arc::new(FiniteGroup::cyclic(3));
        assert!(matches!(v.tensor(&Representation::trivial(z3, 1)), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn hom_is_conjugation() {
        let v = s3_standard();
        let w = v.oplus(&Representation::trivial(v.group().clone(), 1)).unwrap();
        let h = v.hom(&w).unwrap();
        let f = Matrix::from_ints(&[&[1, 2], &[0, -1], &[3, 5]]);
        for g in v.group().elements() {
            let direct = w.matrix(g).mul(&f).mul(&v.matrix(v.group().inv(g)).clone());
            let via = Matrix::unflatten(3, 2, &h.matrix(g).mul_vec(&f.flatten()));
            assert_eq!(direct, via);
        }
    }

    #[test]
    fn regular_examples() {
        let r = regular_representation(Arc::new(FiniteGroup::trivial()));
        assert_eq!(r.left.dim(), 1);
        let r = regular_representation(z2());
        assert_eq!(r.left.matrix(1), &Matrix::from_ints(&[&[0, 1], &[1, 0]]));
        let s3 = Arc::new(FiniteGroup::symmetric3());
        let r = regular_representation(s3.clone());
        let chi = r.left.character();
        assert_eq!(chi[s3.identity()], int(6));
        assert!(s3.elements().filter(|&g| g != s3.identity()).all(|g| chi[g].is_zero()));
        for g in s3.elements() {
            for h in s3.elements() {
                assert_eq!(r.left.matrix(g).mul(&r.right[h]), r.right[h].mul(r.left.matrix(g)));
                assert_eq!(r.right[g].mul(&r.right[h]), r.right[s3.mul(h, g)]);
            }
        }
    }

    #[test]
    fn phi_examples() {
        let one = Representation::trivial(z2(), 1);
        let p = one.phi_embedding();
        assert_eq!(p.morphism.matrix, Matrix::from_ints(&[&[1], &[1]]));
        let p = sign_z2().phi_embedding();
        assert_eq!(p.morphism.matrix, Matrix::from_ints(&[&[1], &[-1]]));
        assert!(p.evaluation.mul(&p.morphism.matrix).is_identity());
        let p = s3_standard().phi_embedding();
        assert_eq!(p.morphism.matrix.rank(), 2);
        for p in [sign_z2().phi_embedding(), s3_standard().phi_embedding()] {
            let m = &p.morphism;
            assert!(m.source.is_equivariant(&m.target, &m.matrix));
            assert!(m.target.is_equivariant(&m.source, &p.equivariant_retraction));
            assert!(p.equivariant_retraction.mul(&m.matrix).is_identity());
        }
    }

    #[test]
    fn equivariant_maps_of_regular() {
        let s3 = Arc::new(FiniteGroup::symmetric3());
        let r = regular_representation(s3);
        assert_eq!(r.left.equivariant_maps(&r.left).unwrap().len(), 6);
        let std = s3_standard();
        assert_eq!(std.equivariant_maps(&std).unwrap().len(), 1);
        assert_eq!(std.equivariant_maps(&r.left).unwrap().len(), 2);
    }

    /// Brute force: all `f: G → G` with `β ↦ β∘f` commuting with `ϱ` and invertible.
    fn brute_force_automorphisms(g: &Arc<FiniteGroup>) -> BTreeSet<Vec<usize>> {
        let n = g.order();
        let reg = regular_representation(g.clone());
        let mut out = BTreeSet::new();
        let total = n.pow(n as u32);
        for code in 0..total {
            let f: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
            if f.iter().collect::<BTreeSet<_>>().len() != n {
                continue;
            }
            // (β∘f) on δ_h is the indicator of f⁻¹(h)
            let mut a = Matrix::zeros(n, n);
            for (x, fx) in f.iter().enumerate() {
                a.data[x][*fx] = Rational::one();
            }
            if reg.right.iter().all(|r| r.mul(&a) == a.mul(r)) {
                out.insert(f);
            }
        }
        out
    }

    #[test]
    fn tannaka_matches_brute_force() {
        for g in [FiniteGroup::trivial(), FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::klein_four(), FiniteGroup::symmetric3()] {
            let g = Arc::new(g);
            let t = tensor_automorphisms(g.clone()).unwrap();
            assert!(g.isomorphism_to(&t.group).is_some());
            let brute = brute_force_automorphisms(&g);
            assert_eq!(brute.len(), t.automorphisms.len());
            for a in &t.automorphisms {
                let f: Vec<usize> = (0..g.order()).map(|x| (0..g.order()).find(|&y| a.data[x][y].is_one()).unwrap()).collect();
                assert!(brute.contains(&f));
            }
        }
    }

    #[test]
    fn tannaka_budget() {
        let big = Arc::new(FiniteGroup::cyclic(25));
        assert!(matches!(tensor_automorphisms(big), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn json_roundtrip() {
        let v = s3_standard();
        let j = serde_json::to_string(&v.to_json()).unwrap();
        let back: RepresentationJson = serde_json::from_str(&j).unwrap();
        let w = Representation::from_json(&back, |_| None).unwrap();
        assert_eq!(w.dim(), 2);
        assert_eq!(w.matrices(), v.matrices());
    }
}
