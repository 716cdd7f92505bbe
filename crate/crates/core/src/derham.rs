//! Local systems and the twisted polynomial de Rham complex `A_dR(K, L)`.
//!
//! A local system assigns to each simplex the fiber at its vertex 0. The face
//! `d_0` moves vertex 0 to vertex 1, so its transport is the edge-01 matrix;
//! every other face keeps vertex 0 and transports by the identity.
//!
//! A family `(ω_σ)` over nondegenerate simplices matches when
//! `T_i · d_i(ω_σ) = η*(ω_τ)` for every face `d_i σ = η*(τ)`.
//!
//! Weight is an exhaustive filtration here: `F_W A_dR` collects forms of
//! weight at most `W`. Cohomology is computed for growing `W`, and a degree is
//! certified once integration over simplices identifies `H(F_W A_dR)` with the
//! twisted simplicial cohomology.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactla::{axpy, kernel_basis, rank_of_vectors, CochainComplex, KernelBasis, Matrix, Rational, SparseMatrix, SparseVec};
use crate::nabla::{differential_matrix, operator_matrix, FilteredBasis, PolyForm};
use crate::repcat::{same_group, Representation};
use crate::simpset::{twisted_cochain_complex, EdgeLabeling, FinSimplicialSet, Simplex, SimplexId, SimplicialMap};
use crate::{Error, Result};

/// Default weight cap for stabilization.
pub const DEFAULT_WEIGHT_CAP: usize = 8;

#[derive(Clone, Debug)]
pub struct LocalSystem {
    space: Arc<FinSimplicialSet>,
    dim: usize,
    transports: BTreeMap<SimplexId, Matrix>,
    inverses: BTreeMap<SimplexId, Matrix>,
}

fn same_space(a: &Arc<FinSimplicialSet>, b: &Arc<FinSimplicialSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl LocalSystem {
    /// Transports on nondegenerate edges, from vertex 0 to vertex 1.
    pub fn new(space: Arc<FinSimplicialSet>, dim: usize, transports: BTreeMap<SimplexId, Matrix>) -> Result<Self> {
        let mut inverses = BTreeMap::new();
        for &e in space.simplices(1) {
            let t = transports
                .get(&e)
                .ok_or_else(|| Error::Invalid(format!("no transport on edge {}", space.name(e))))?;
            if t.rows != dim || t.cols != dim {
                return Err(Error::DimensionMismatch(format!("transport on {} is not {dim}x{dim}", space.name(e))));
            }
            let inv = t
                .inverse()
                .ok_or_else(|| Error::Invalid(format!("transport on {} is not invertible", space.name(e))))?;
            inverses.insert(e, inv);
        }
        let l = LocalSystem { space, dim, transports, inverses };
        for &s in l.space.simplices(2) {
            let x = l.space.nondegenerate(s);
            let lhs = l.transport(&l.space.edge(&x, 0, 2));
            let rhs = l.transport(&l.space.edge(&x, 1, 2)).mul(&l.transport(&l.space.edge(&x, 0, 1)));
            if lhs != rhs {
                return Err(Error::Invalid(format!("transports are not flat on {}", l.space.name(s))));
            }
        }
        Ok(l)
    }

    pub fn constant(space: Arc<FinSimplicialSet>, dim: usize) -> Self {
        let transports = space.simplices(1).iter().map(|e| (*e, Matrix::identity(dim))).collect();
        Self::new(space, dim, transports).expect("constant system")
    }

    pub fn space(&self) -> &Arc<FinSimplicialSet> {
        &self.space
    }

    pub fn fiber_dim(&self) -> usize {
        self.dim
    }

    /// Transport along a 1-simplex, identity on degenerate ones.
    pub fn transport(&self, edge: &Simplex) -> Matrix {
        if edge.is_degenerate() {
            Matrix::identity(self.dim)
        } else {
            self.transports[&edge.id].clone()
        }
    }

    pub fn transport_inverse(&self, edge: &Simplex) -> Matrix {
        if edge.is_degenerate() {
            Matrix::identity(self.dim)
        } else {
            self.inverses[&edge.id].clone()
        }
    }

    /// `L(a)` for the inclusion of vertex `j` of `x` as a 0-simplex: transport
    /// from the fiber at vertex 0 to the fiber at vertex `j`.
    pub fn transport_to_vertex(&self, x: &Simplex, j: usize) -> Matrix {
        if j == 0 {
            Matrix::identity(self.dim)
        } else {
            self.transport(&self.space.edge(x, 0, j))
        }
    }

    /// `T_i` for the face `d_i` of `x`.
    pub fn face_transport(&self, x: &Simplex, i: usize) -> Matrix {
        if i == 0 {
            self.transport_to_vertex(x, 1)
        } else {
            Matrix::identity(self.dim)
        }
    }

    fn check_base(&self, other: &LocalSystem) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::Invalid("local systems live on different simplicial sets".into()))
        }
    }

    fn combine(&self, other: &LocalSystem, dim: usize, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> Result<LocalSystem> {
        self.check_base(other)?;
        let transports = self
            .space
            .simplices(1)
            .iter()
            .map(|e| (*e, f(&self.transports[e], &other.transports[e])))
            .collect();
        LocalSystem::new(self.space.clone(), dim, transports)
    }

    /// Pullback along a simplicial map `f: source → self.space`.
    pub fn pullback(&self, source: Arc<FinSimplicialSet>, f: &SimplicialMap) -> Result<LocalSystem> {
        let transports = source.simplices(1).iter().map(|e| (*e, self.transport(&f.apply(&source.nondegenerate(*e))))).collect();
        LocalSystem::new(source, self.dim, transports)
    }
}

/// Constant fibers `V`, edge `e` transporting by `ρ(λ(e))`.
pub fn local_system_from_rep(
    space: Arc<FinSimplicialSet>,
    labeling: &EdgeLabeling,
    rep: &Representation,
) -> Result<LocalSystem> {
    if !same_group(&labeling.group, rep.group()) {
        return Err(Error::GroupMismatch("labeling and representation use different groups".into()));
    }
    labeling.validate(&space)?;
    let transports = space.simplices(1).iter().map(|e| (*e, rep.matrix(labeling.labels[e]).clone())).collect();
    LocalSystem::new(space, rep.dim(), transports)
}

pub fn ls_tensor(a: &LocalSystem, b: &LocalSystem) -> Result<LocalSystem> {
    a.combine(b, a.dim * b.dim, |x, y| x.kron(y))
}

pub fn ls_oplus(a: &LocalSystem, b: &LocalSystem) -> Result<LocalSystem> {
    a.combine(b, a.dim + b.dim, |x, y| x.block_diag(y))
}

pub fn ls_dual(a: &LocalSystem) -> LocalSystem {
    let transports = a.inverses.iter().map(|(e, m)| (*e, m.transpose())).collect();
    LocalSystem::new(a.space.clone(), a.dim, transports).expect("dual of a local system")
}

/// `Hom(L, L′) = L′ ⊗ L*`, with fiber `dim L′ × dim L` matrices flattened row-major.
pub fn ls_hom(source: &LocalSystem, target: &LocalSystem) -> Result<LocalSystem> {
    ls_tensor(target, &ls_dual(source))
}

/// Placement of each simplex's coefficients inside the ambient product space.
#[derive(Clone, Debug)]
pub struct Block {
    pub simplex: SimplexId,
    pub offset: usize,
    pub basis: Arc<FilteredBasis>,
}

/// `F_W A^q_dR(K, L)`: the matching families in degree `q`, weight `≤ W`.
#[derive(Clone, Debug)]
pub struct AdrComponent {
    pub degree: usize,
    pub max_weight: usize,
    pub fiber_dim: usize,
    pub ambient: usize,
    pub blocks: Vec<Block>,
    block_of: HashMap<SimplexId, usize>,
    pub kernel: KernelBasis,
}

#[derive(Default)]
struct BasisCache(HashMap<(usize, usize, usize), Arc<FilteredBasis>>);

impl BasisCache {
    fn get(&mut self, p: usize, q: usize, w: usize) -> Arc<FilteredBasis> {
        self.0.entry((p, q, w)).or_insert_with(|| Arc::new(FilteredBasis::new(p, q, w))).clone()
    }
}

impl AdrComponent {
    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    pub fn block(&self, simplex: SimplexId) -> Option<&Block> {
        self.block_of.get(&simplex).map(|i| &self.blocks[*i])
    }

    /// Ambient coordinate of coefficient `a`, monomial `m` on `simplex`.
    fn coord(&self, b: &Block, a: usize, m: usize) -> usize {
        b.offset + a * b.basis.len() + m
    }

    /// The family with the given coordinates in the kernel basis.
    pub fn family(&self, k: &FinSimplicialSet, coords: &[Rational]) -> MatchingFamily {
        self.family_from_ambient(k, &self.kernel.combine(coords))
    }

    pub fn family_from_ambient(&self, k: &FinSimplicialSet, v: &SparseVec) -> MatchingFamily {
        let forms = (0..k.len())
            .map(|id| {
                let p = k.simplex_dim(id);
                match self.block(id) {
                    None => vec![PolyForm::zero(p); self.fiber_dim],
                    Some(b) => (0..self.fiber_dim)
                        .map(|a| {
                            let coords: BTreeMap<usize, Rational> = (0..b.basis.len())
                                .filter_map(|m| v.get(&self.coord(b, a, m)).map(|x| (m, x.clone())))
                                .collect();
                            b.basis.assemble(&coords)
                        })
                        .collect(),
                }
            })
            .collect();
        MatchingFamily { degree: self.degree, forms }
    }

    pub fn ambient_of(&self, f: &MatchingFamily) -> Result<SparseVec> {
        let mut v = SparseVec::new();
        for (id, forms) in f.forms.iter().enumerate() {
            if forms.len() != self.fiber_dim {
                return Err(Error::DimensionMismatch(format!("family has {} coefficients, expected {}", forms.len(), self.fiber_dim)));
            }
            match self.block(id) {
                None => {
                    if forms.iter().any(|x| !x.is_zero()) {
                        return Err(Error::Invalid("nonzero form on a simplex of too small dimension".into()));
                    }
                }
                Some(b) => {
                    for (a, form) in forms.iter().enumerate() {
                        for (m, c) in b.basis.coords(form)? {
                            v.insert(self.coord(b, a, m), c);
                        }
                    }
                }
            }
        }
        Ok(v)
    }

    /// Kernel coordinates of a family, or an error if it is not in this component.
    pub fn coords_of(&self, f: &MatchingFamily) -> Result<Vec<Rational>> {
        let v = self.ambient_of(f)?;
        self.kernel
            .try_coords(&v)
            .ok_or_else(|| Error::Verification("family does not satisfy the matching conditions".into()))
    }
}

/// The matching system for degree `q` and weight `≤ w`, solved exactly.
pub fn adr_component(k: &FinSimplicialSet, l: &LocalSystem, q: usize, w: usize) -> Result<AdrComponent> {
    adr_component_cached(k, l, q, w, &mut BasisCache::default())
}

fn adr_component_cached(k: &FinSimplicialSet, l: &LocalSystem, q: usize, w: usize, cache: &mut BasisCache) -> Result<AdrComponent> {
    if !std::ptr::eq(&**l.space(), k) && **l.space() != *k {
        return Err(Error::Invalid("local system lives on a different simplicial set".into()));
    }
    let r = l.fiber_dim();
    let mut blocks = Vec::new();
    let mut block_of = HashMap::new();
    let mut offset = 0;
    for id in 0..k.len() {
        let p = k.simplex_dim(id);
        if p < q {
            continue;
        }
        let basis = cache.get(p, q, w);
        block_of.insert(id, blocks.len());
        let len = basis.len();
        blocks.push(Block { simplex: id, offset, basis });
        offset += r * len;
    }
    let mut comp = AdrComponent {
        degree: q,
        max_weight: w,
        fiber_dim: r,
        ambient: offset,
        blocks,
        block_of,
        kernel: KernelBasis { cols: 0, vectors: vec![], free_cols: vec![] },
    };
    let mut constraints = SparseMatrix::zeros(0, offset);
    for id in 0..k.len() {
        let p = k.simplex_dim(id);
        if p == 0 || p - 1 < q {
            continue;
        }
        let x = k.nondegenerate(id);
        let bs = comp.block(id).expect("block").clone();
        let bf = cache.get(p - 1, q, w);
        if bf.is_empty() {
            continue;
        }
        for i in 0..=p {
            let face = k.stored_face(id, i);
            let delta: Vec<usize> = (0..p).map(|j| if j < i { j } else { j + 1 }).collect();
            let dmat = operator_matrix(&delta, &bs.basis, &bf)?;
            let t = l.face_transport(&x, i);
            let tau = comp.block(face.id).cloned();
            let emat = match &tau {
                Some(tb) => Some(operator_matrix(&face.surj, &tb.basis, &bf)?),
                None => None,
            };
            for a in 0..r {
                for row in 0..bf.len() {
                    let mut v = SparseVec::new();
                    for b in 0..r {
                        let tab = &t.data[a][b];
                        if tab.is_zero() {
                            continue;
                        }
                        for (col, c) in dmat.row(row) {
                            *v.entry(comp.coord(&bs, b, *col)).or_insert_with(Rational::zero) += tab * c;
                        }
                    }
                    if let (Some(tb), Some(e)) = (&tau, &emat) {
                        for (col, c) in e.row(row) {
                            *v.entry(comp.coord(tb, a, *col)).or_insert_with(Rational::zero) -= c;
                        }
                    }
                    v.retain(|_, x| !x.is_zero());
                    if !v.is_empty() {
                        constraints.push_row(v);
                    }
                }
            }
        }
    }
    comp.kernel = kernel_basis(&constraints);
    Ok(comp)
}

/// `F_W A_dR(K, L)` in degrees `0..=dim K`.
#[derive(Clone, Debug)]
pub struct AdrComplex {
    pub max_weight: usize,
    pub components: Vec<AdrComponent>,
    pub complex: CochainComplex,
}

impl AdrComplex {
    pub fn new(k: &FinSimplicialSet, l: &LocalSystem, w: usize) -> Result<Self> {
        Self::up_to_degree(k, l, w, k.dim())
    }

    /// Degrees `0..=top`; the last differential maps into degree `top + 1` only
    /// when `top < dim K`.
    pub fn up_to_degree(k: &FinSimplicialSet, l: &LocalSystem, w: usize, top: usize) -> Result<Self> {
        let mut cache = BasisCache::default();
        let top = top.min(k.dim());
        let components: Vec<AdrComponent> =
            (0..=top).map(|q| adr_component_cached(k, l, q, w, &mut cache)).collect::<Result<_>>()?;
        let mut diffs = Vec::with_capacity(top);
        for q in 0..top {
            diffs.push(component_differential(&components[q], &components[q + 1], &mut cache)?);
        }
        let complex = CochainComplex::new(0, components.iter().map(AdrComponent::dim).collect(), diffs)?;
        Ok(AdrComplex { max_weight: w, components, complex })
    }
}

/// Matrix of `d` in kernel coordinates.
fn component_differential(src: &AdrComponent, dst: &AdrComponent, cache: &mut BasisCache) -> Result<SparseMatrix> {
    let r = src.fiber_dim;
    let mut dmats: HashMap<SimplexId, SparseMatrix> = HashMap::new();
    for b in &src.blocks {
        if let Some(tb) = dst.block(b.simplex) {
            let _ = cache;
            dmats.insert(b.simplex, differential_matrix(&b.basis, &tb.basis));
        }
    }
    let mut out = SparseMatrix::zeros(dst.dim(), src.dim());
    for (col, v) in src.kernel.vectors.iter().enumerate() {
        let img = apply_blockwise(src, dst, &dmats, r, v);
        let coords = dst
            .kernel
            .try_coords(&img)
            .ok_or_else(|| Error::Verification("d does not preserve the matching conditions".into()))?;
        for (row, x) in coords.into_iter().enumerate() {
            if !x.is_zero() {
                out.set(row, col, x);
            }
        }
    }
    Ok(out)
}

fn apply_blockwise(
    src: &AdrComponent,
    dst: &AdrComponent,
    mats: &HashMap<SimplexId, SparseMatrix>,
    r: usize,
    v: &SparseVec,
) -> SparseVec {
    let mut out = SparseVec::new();
    for b in &src.blocks {
        let (Some(tb), Some(m)) = (dst.block(b.simplex), mats.get(&b.simplex)) else { continue };
        for a in 0..r {
            let seg: SparseVec = (0..b.basis.len())
                .filter_map(|i| v.get(&src.coord(b, a, i)).map(|x| (i, x.clone())))
                .collect();
            if seg.is_empty() {
                continue;
            }
            for (row, x) in m.mul_vec(&seg) {
                out.insert(dst.coord(tb, a, row), x);
            }
        }
    }
    out
}

/// Integration over nondegenerate `q`-simplices, from ambient coordinates to
/// twisted cochains.
fn integration_matrix(k: &FinSimplicialSet, comp: &AdrComponent) -> SparseMatrix {
    let q = comp.degree;
    let r = comp.fiber_dim;
    let mut m = SparseMatrix::zeros(k.simplices(q).len() * r, comp.ambient);
    for (pos, &s) in k.simplices(q).iter().enumerate() {
        let b = comp.block(s).expect("q-simplex block");
        let values: Vec<Rational> = (0..b.basis.len()).map(|i| b.basis.form(i).integrate()).collect();
        for a in 0..r {
            for (i, x) in values.iter().enumerate() {
                if !x.is_zero() {
                    m.set(pos * r + a, comp.coord(b, a, i), x.clone());
                }
            }
        }
    }
    m
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WeightRow {
    pub max_weight: usize,
    pub cochain_dims: Vec<usize>,
    pub cohomology: Vec<usize>,
    /// Integration is an isomorphism onto twisted cohomology in this degree.
    pub certified: Vec<bool>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AdrReport {
    pub oracle: Vec<usize>,
    pub rows: Vec<WeightRow>,
    pub stabilized_at: Option<usize>,
    /// Cohomology at the stabilizing weight, or at the cap if none.
    pub cohomology: Vec<usize>,
}

impl AdrReport {
    pub fn stabilized(&self) -> bool {
        self.stabilized_at.is_some()
    }
}

/// Certify each degree of `F_W A_dR(K, L)` against twisted cochains.
pub fn certify(k: &FinSimplicialSet, l: &LocalSystem, adr: &AdrComplex, oracle: &CochainComplex) -> Result<WeightRow> {
    let top = adr.components.len() - 1;
    let h = adr.complex.cohomology_dims();
    let mut cohomology = Vec::new();
    let mut certified = Vec::new();
    for q in 0..=top {
        let hq = h[&(q as i64)];
        let oq = oracle.cohomology_dim(q as i64);
        cohomology.push(hq);
        if hq != oq {
            certified.push(false);
            continue;
        }
        let comp = &adr.components[q];
        let cycles = match adr.complex.differential(q as i64) {
            Some(d) => kernel_basis(d).vectors,
            None => (0..comp.dim()).map(|i| SparseVec::from([(i, Rational::one())])).collect(),
        };
        let integ = integration_matrix(k, comp);
        let cols = k.simplices(q).len() * l.fiber_dim();
        let mut boundaries: Vec<SparseVec> = match q.checked_sub(1).and_then(|p| oracle.differential(p as i64)) {
            Some(d) => d.transpose().row_vecs().to_vec(),
            None => Vec::new(),
        };
        let base_rank = rank_of_vectors(cols, &boundaries);
        for z in &cycles {
            let mut amb = SparseVec::new();
            for (i, x) in z {
                axpy(&mut amb, x, &comp.kernel.vectors[*i]);
            }
            boundaries.push(integ.mul_vec(&amb));
        }
        let total = rank_of_vectors(cols, &boundaries);
        certified.push(total - base_rank == oq);
    }
    Ok(WeightRow { max_weight: adr.max_weight, cochain_dims: adr.complex.dims().to_vec(), cohomology, certified })
}

/// Grow the weight until every degree is certified or `weight_cap` is reached.
pub fn adr_cohomology(k: &FinSimplicialSet, l: &LocalSystem, weight_cap: usize) -> Result<AdrReport> {
    let oracle = twisted_cochain_complex(k, l);
    let oracle_dims: Vec<usize> = (0..=k.dim()).map(|q| oracle.cohomology_dim(q as i64)).collect();
    let mut rows = Vec::new();
    let mut stabilized_at = None;
    for w in 0..=weight_cap {
        let adr = AdrComplex::new(k, l, w)?;
        let row = certify(k, l, &adr, &oracle)?;
        let done = row.certified.iter().all(|c| *c);
        rows.push(row);
        if done {
            stabilized_at = Some(w);
            break;
        }
    }
    let cohomology = rows.last().expect("at least weight 0").cohomology.clone();
    Ok(AdrReport { oracle: oracle_dims, rows, stabilized_at, cohomology })
}

/// `Hom_{T_dR(K)}(L, L′) = A_dR(K, Hom(L, L′))`, weight by weight.
#[derive(Clone, Debug)]
pub struct TdrHomComplex {
    pub source: LocalSystem,
    pub target: LocalSystem,
    pub hom: LocalSystem,
    pub pieces: Vec<AdrComplex>,
}

impl TdrHomComplex {
    pub fn new(k: &FinSimplicialSet, source: &LocalSystem, target: &LocalSystem, max_weight: usize) -> Result<Self> {
        let hom = ls_hom(source, target)?;
        let pieces = (0..=max_weight).map(|w| AdrComplex::new(k, &hom, w)).collect::<Result<_>>()?;
        Ok(TdrHomComplex { source: source.clone(), target: target.clone(), hom, pieces })
    }

    pub fn report(&self, k: &FinSimplicialSet) -> Result<AdrReport> {
        adr_cohomology(k, &self.hom, self.pieces.len() - 1)
    }
}

/// One `L(σ)`-valued form of a fixed degree per nondegenerate simplex. For
/// `Hom` systems the coefficients are a row-major `dim L′ × dim L` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingFamily {
    pub degree: usize,
    pub forms: Vec<Vec<PolyForm>>,
}

impl MatchingFamily {
    pub fn zero(k: &FinSimplicialSet, degree: usize, fiber_dim: usize) -> Self {
        MatchingFamily {
            degree,
            forms: (0..k.len()).map(|id| vec![PolyForm::zero(k.simplex_dim(id)); fiber_dim]).collect(),
        }
    }

    /// The identity of `Hom(L, L)`.
    pub fn identity(k: &FinSimplicialSet, rank: usize) -> Self {
        let forms = (0..k.len())
            .map(|id| {
                let p = k.simplex_dim(id);
                (0..rank * rank)
                    .map(|i| if i / rank == i % rank { PolyForm::one(p) } else { PolyForm::zero(p) })
                    .collect()
            })
            .collect();
        MatchingFamily { degree: 0, forms }
    }

    pub fn weight(&self) -> usize {
        self.forms.iter().flatten().map(PolyForm::weight).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.forms.iter().flatten().all(PolyForm::is_zero)
    }

    pub fn differential(&self) -> MatchingFamily {
        MatchingFamily {
            degree: self.degree + 1,
            forms: self.forms.iter().map(|fs| fs.iter().map(PolyForm::differential).collect()).collect(),
        }
    }

    pub fn add(&self, other: &MatchingFamily) -> Result<MatchingFamily> {
        if self.degree != other.degree || self.forms.len() != other.forms.len() {
            return Err(Error::DimensionMismatch("families of different type".into()));
        }
        Ok(MatchingFamily {
            degree: self.degree,
            forms: self.forms.iter().zip(&other.forms).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect()).collect(),
        })
    }

    pub fn scaled(&self, c: &Rational) -> MatchingFamily {
        MatchingFamily { degree: self.degree, forms: self.forms.iter().map(|fs| fs.iter().map(|f| f.scaled(c)).collect()).collect() }
    }

    /// Check `T_i · d_i(ω_σ) = η*(ω_τ)` on every stored face.
    pub fn is_matching(&self, k: &FinSimplicialSet, l: &LocalSystem) -> bool {
        let r = l.fiber_dim();
        if self.forms.len() != k.len() || self.forms.iter().any(|fs| fs.len() != r) {
            return false;
        }
        for id in 0..k.len() {
            let p = k.simplex_dim(id);
            if self.forms[id].iter().any(|f| f.dim() != p || f.degree().is_some_and(|d| d != self.degree)) {
                return false;
            }
            if p == 0 {
                continue;
            }
            let x = k.nondegenerate(id);
            for i in 0..=p {
                let face = k.stored_face(id, i);
                let t = l.face_transport(&x, i);
                let restricted: Vec<PolyForm> =
                    self.forms[id].iter().map(|f| f.face_map(i).expect("face in range")).collect();
                for a in 0..r {
                    let mut lhs = PolyForm::zero(p - 1);
                    for (b, f) in restricted.iter().enumerate() {
                        lhs.add_assign(&f.scaled(&t.data[a][b]));
                    }
                    let rhs = self.forms[face.id][a].pullback(&face.surj).expect("monotone");
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Simplexwise wedge-and-compose `(η·b)∘(ω·a) = (η∧ω)·(b∘a)`; `f: L′ → L″`
/// has `rows × mid` coefficients and `g: L → L′` has `mid × cols`.
pub fn tdr_compose(f: &MatchingFamily, g: &MatchingFamily, rows: usize, mid: usize, cols: usize) -> Result<MatchingFamily> {
    if f.forms.len() != g.forms.len() {
        return Err(Error::Invalid("families over different simplicial sets".into()));
    }
    let mut forms = Vec::with_capacity(f.forms.len());
    for (fs, gs) in f.forms.iter().zip(&g.forms) {
        if fs.len() != rows * mid || gs.len() != mid * cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}-entry and {}-entry coefficient matrices as {rows}x{mid} and {mid}x{cols}",
                fs.len(),
                gs.len()
            )));
        }
        let p = fs.first().or(gs.first()).map_or(0, PolyForm::dim);
        let mut out = vec![PolyForm::zero(p); rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                for k in 0..mid {
                    let a = &fs[i * mid + k];
                    let b = &gs[k * cols + j];
                    if !a.is_zero() && !b.is_zero() {
                        out[i * cols + j].add_assign(&a.wedge_unchecked(b));
                    }
                }
            }
        }
        forms.push(out);
    }
    Ok(MatchingFamily { degree: f.degree + g.degree, forms })
}

/// `Hom(f, g)(α) = (−1)^{|f|(|g|+|α|)} g∘α∘f` for `f: A′ → A`, `α: A → B`, `g: B → B′`.
/// Shapes are fiber dimensions `(A′, A, B, B′)`.
pub fn internal_hom_action(
    f: &MatchingFamily,
    g: &MatchingFamily,
    alpha: &MatchingFamily,
    dims: (usize, usize, usize, usize),
) -> Result<MatchingFamily> {
    let (a1, a, b, b1) = dims;
    let af = tdr_compose(alpha, f, b, a, a1)?;
    let gaf = tdr_compose(g, &af, b1, b, a1)?;
    let negative = crate::koszul::internal_hom(f.degree, g.degree, alpha.degree);
    Ok(if negative { gaf.scaled(&-Rational::one()) } else { gaf })
}

/// `(f*ω)_σ = η*(ω_τ)` where `f(σ) = η*(τ)`.
pub fn pullback_along(source: &FinSimplicialSet, map: &SimplicialMap, family: &MatchingFamily) -> MatchingFamily {
    let forms = (0..source.len())
        .map(|id| {
            let img = &map.images[id];
            family.forms[img.id].iter().map(|f| f.pullback(&img.surj).expect("monotone")).collect()
        })
        .collect();
    MatchingFamily { degree: family.degree, forms }
}

/// CSV table `max_weight,degree,cochain_dim,cohomology,certified,oracle`.
pub fn report_csv(report: &AdrReport) -> String {
    let mut out = String::from("max_weight,degree,cochain_dim,cohomology,certified,oracle\n");
    for row in &report.rows {
        for (q, h) in row.cohomology.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.max_weight, q, row.cochain_dims[q], h, row.certified[q], report.oracle[q]
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::simpset::{edge_labeling_from_hom, fundamental_group_presentation};

    fn boundary_sign() -> (Arc<FinSimplicialSet>, LocalSystem) {
        let k = Arc::new(FinSimplicialSet::simplex_boundary(2));
        let p = fundamental_group_presentation(&k).unwrap();
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let lab = edge_labeling_from_hom(&k, &p, z2.clone(), &[1]).unwrap();
        let sign = Representation::from_sign(z2, |g| if g == 0 { 1 } else { -1 }).unwrap();
        let l = local_system_from_rep(k.clone(), &lab, &sign).unwrap();
        (k, l)
    }

    #[test]
    fn component_examples() {
        let pt = Arc::new(FinSimplicialSet::standard_simplex(0));
        let c = adr_component(&pt, &LocalSystem::constant(pt.clone(), 1), 0, 0).unwrap();
        assert_eq!(c.dim(), 1);
        let b = Arc::new(FinSimplicialSet::simplex_boundary(2));
        let c = adr_component(&b, &LocalSystem::constant(b.clone(), 1), 0, 0).unwrap();
        assert_eq!(c.dim(), 1);
        let (k, l) = boundary_sign();
        assert_eq!(adr_component(&k, &l, 0, 0).unwrap().dim(), 0);
    }

    #[test]
    fn cohomology_examples() {
        let d2 = Arc::new(FinSimplicialSet::standard_simplex(2));
        let r = adr_cohomology(&d2, &LocalSystem::constant(d2.clone(), 1), 8).unwrap();
        assert_eq!(r.stabilized_at, Some(0));
        assert_eq!(r.cohomology, vec![1, 0, 0]);
        let b = Arc::new(FinSimplicialSet::simplex_boundary(2));
        let r = adr_cohomology(&b, &LocalSystem::constant(b.clone(), 1), 8).unwrap();
        assert!(r.stabilized());
        assert_eq!(r.cohomology, vec![1, 1]);
        let (k, l) = boundary_sign();
        let r = adr_cohomology(&k, &l, 8).unwrap();
        assert!(r.stabilized());
        assert_eq!(r.cohomology, vec![0, 0]);
        assert_eq!(r.oracle, vec![0, 0]);
    }

    #[test]
    fn twisted_oracle_on_circle() {
        let (k, l) = boundary_sign();
        let c = twisted_cochain_complex(&k, &l);
        assert_eq!(c.dims(), &[3, 3]);
        assert_eq!(c.cohomology_dim(0), 0);
        assert_eq!(c.cohomology_dim(1), 0);
        let one = LocalSystem::constant(k.clone(), 1);
        let c = twisted_cochain_complex(&k, &one);
        assert_eq!((c.cohomology_dim(0), c.cohomology_dim(1)), (1, 1));
    }

    #[test]
    fn local_system_operations() {
        let (k, l) = boundary_sign();
        let one = LocalSystem::constant(k.clone(), 1);
        let t = ls_tensor(&one, &l).unwrap();
        assert_eq!(t.transports, l.transports);
        let h = ls_hom(&l, &l).unwrap();
        assert_eq!(h.transports, one.transports);
        let s = ls_oplus(&l, &one).unwrap();
        assert_eq!(s.fiber_dim(), 2);
        let other = Arc::new(FinSimplicialSet::simplex_boundary(2));
        let foreign = LocalSystem::constant(Arc::new(FinSimplicialSet::standard_simplex(1)), 1);
        assert!(ls_tensor(&foreign, &LocalSystem::constant(other, 1)).is_err());
        let d1 = Arc::new(FinSimplicialSet::standard_simplex(1));
        let singular = BTreeMap::from([(d1.simplices(1)[0], Matrix::from_ints(&[&[0]]))]);
        assert!(LocalSystem::new(d1, 1, singular).is_err());
    }

    #[test]
    fn composition_on_interval() {
        let d1 = FinSimplicialSet::standard_simplex(1);
        let family = |f: PolyForm, g: PolyForm| MatchingFamily {
            degree: f.degree().unwrap_or(0),
            forms: vec![vec![PolyForm::zero(0)], vec![PolyForm::zero(0)], vec![f.add(&g)]],
        };
        let dt = family(PolyForm::dt(1, 1), PolyForm::zero(1));
        let t = family(PolyForm::t(1, 1), PolyForm::zero(1));
        let c = tdr_compose(&dt, &t, 1, 1, 1).unwrap();
        assert_eq!(c.forms[2][0], PolyForm::t(1, 1).wedge(&PolyForm::dt(1, 1)).unwrap());
        assert_eq!(c.degree, 1);
        let id = MatchingFamily::identity(&d1, 1);
        assert_eq!(tdr_compose(&id, &t, 1, 1, 1).unwrap().forms, t.forms);
        let two = tdr_compose(&dt, &dt, 1, 1, 1).unwrap();
        assert_eq!(two.degree, 2);
    }

    fn top_only(k: &FinSimplicialSet, degree: usize, f: PolyForm) -> MatchingFamily {
        let mut m = MatchingFamily::zero(k, degree, 1);
        let top = k.simplices(k.dim())[0];
        m.forms[top][0] = f;
        m
    }

    #[test]
    fn internal_hom_signs() {
        let k = FinSimplicialSet::standard_simplex(2);
        let id = MatchingFamily::identity(&k, 1);
        let alpha = top_only(&k, 1, PolyForm::dt(2, 2));
        assert_eq!(internal_hom_action(&id, &id, &alpha, (1, 1, 1, 1)).unwrap(), alpha);
        let f = top_only(&k, 1, PolyForm::dt(2, 1));
        let g = top_only(&k, 0, PolyForm::t(2, 1));
        let r = internal_hom_action(&f, &g, &alpha, (1, 1, 1, 1)).unwrap();
        // deg f = 1, deg g = 0, deg α = 1: sign −1 on g∘α∘f = t₁ dt₂ dt₁ = −t₁ dt₁ dt₂
        let expect = PolyForm::t(2, 1).wedge(&PolyForm::dt(2, 1)).unwrap().wedge(&PolyForm::dt(2, 2)).unwrap();
        assert_eq!(r.forms[k.simplices(2)[0]][0], expect);
    }

    #[test]
    fn identity_family_matches() {
        let (k, l) = boundary_sign();
        let h = ls_hom(&l, &l).unwrap();
        let id = MatchingFamily::identity(&k, 1);
        assert!(id.is_matching(&k, &h));
        let comp = adr_component(&k, &h, 0, 0).unwrap();
        assert!(comp.coords_of(&id).is_ok());
    }
}
