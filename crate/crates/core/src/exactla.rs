//! Sparse exact linear algebra over the rationals and cohomology of finite
//! cochain complexes.
//!
//! Everything here is exact: no floating point is used anywhere. Sparse
//! elimination picks the sparsest available column as pivot to contain
//! fill-in; small matrices go through a dense Gauss-Jordan path.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Exact rational number. Serialized as `"p/q"` (or `"p"` when `q = 1`).
pub type Rational = BigRational;

/// A sparse vector: index -> nonzero entry.
pub type SparseVec = BTreeMap<usize, Rational>;

/// Below this many rows and columns elimination runs on a dense copy.
pub const DENSE_CUTOFF: usize = 64;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_string(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
}

/// serde adapter for a single rational as a `"p/q"` string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = RationalRepr::deserialize(d)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }

    /// Accept both `"3/4"` and bare JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RationalRepr {
        Str(String),
        Int(i64),
    }

    impl RationalRepr {
        pub(crate) fn into_rational(self) -> Result<Rational, String> {
            match self {
                RationalRepr::Str(s) => parse_rational(&s).map_err(|e| e.to_string()),
                RationalRepr::Int(n) => Ok(int(n)),
            }
        }
    }
}

/// serde adapter for a dense rational matrix as nested string arrays.
pub mod serde_matrix {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.len()))?;
        for row in m {
            let strs: Vec<String> = row.iter().map(|q| q.to_string()).collect();
            seq.serialize_element(&strs)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let raw: Vec<Vec<serde_rational::RationalRepr>> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| x.into_rational().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Sparse rational matrix stored as one ordered map per row.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}, nnz={})", self.rows, self.cols, self.nnz())
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, Rational::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Self {
        let mut m = SparseMatrix { rows: rows.len(), cols, data: rows };
        for row in &mut m.data {
            row.retain(|c, v| {
                assert!(*c < cols, "column index {c} out of bounds ({cols})");
                !v.is_zero()
            });
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged dense matrix");
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { rows: rows.len(), cols, data }
    }

    /// Build from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, Rational)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in entries {
            m.add_to(r, c, &v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r].get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        if v.is_zero() {
            return;
        }
        let slot = self.data[r].entry(c).or_insert_with(Rational::zero);
        *slot += v;
        if slot.is_zero() {
            self.data[r].remove(&c);
        }
    }

    /// Append a row; the column count must already accommodate its indices.
    pub fn push_row(&mut self, row: SparseVec) {
        debug_assert!(row.keys().all(|&c| c < self.cols));
        self.data.push(row.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        self.rows += 1;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                t.data[*c].insert(r, v.clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (r, row) in self.data.iter().enumerate() {
            let s = sparse_dot(row, v);
            if !s.is_zero() {
                out.insert(r, s);
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    let slot = acc.entry(*c).or_insert_with(Rational::zero);
                    *slot += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[r] = acc;
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut d = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                d[r][*c] = v.clone();
            }
        }
        d
    }
}

pub fn sparse_dot(a: &SparseVec, b: &SparseVec) -> Rational {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut s = Rational::zero();
    for (i, x) in small {
        if let Some(y) = large.get(i) {
            s += x * y;
        }
    }
    s
}

/// `target += factor * source`, dropping cancelled entries.
pub fn axpy(target: &mut SparseVec, factor: &Rational, source: &SparseVec) {
    if factor.is_zero() {
        return;
    }
    for (c, v) in source {
        let slot = target.entry(*c).or_insert_with(Rational::zero);
        *slot += factor * v;
        if slot.is_zero() {
            target.remove(c);
        }
    }
}

pub fn scale(v: &mut SparseVec, factor: &Rational) {
    if factor.is_zero() {
        v.clear();
        return;
    }
    for x in v.values_mut() {
        *x *= factor;
    }
}

pub fn to_sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Fully reduced row echelon data: each pivot row has a one in its pivot
/// column and zeros in every other pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub cols: usize,
    /// pivot column -> reduced row
    pub pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// Reduce `v` against the pivot rows; the result has no pivot-column entries.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        let hits: Vec<(usize, Rational)> = out
            .iter()
            .filter(|(c, _)| self.pivots.contains_key(c))
            .map(|(c, x)| (*c, x.clone()))
            .collect();
        for (c, x) in hits {
            let row = &self.pivots[&c];
            axpy(&mut out, &(-x), row);
        }
        out
    }

    pub fn contains_in_rowspace(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Basis of the null space. Vector `j` has a one at the `j`-th free column
    /// and zeros at all other free columns.
    pub fn kernel(&self) -> KernelBasis {
        let free = self.free_columns();
        let mut free_pos = vec![usize::MAX; self.cols];
        for (j, f) in free.iter().enumerate() {
            free_pos[*f] = j;
        }
        let mut vectors: Vec<SparseVec> = free
            .iter()
            .map(|f| {
                let mut v = SparseVec::new();
                v.insert(*f, Rational::one());
                v
            })
            .collect();
        for (pc, row) in &self.pivots {
            for (c, x) in row {
                if *c != *pc {
                    let j = free_pos[*c];
                    debug_assert!(j != usize::MAX, "reduced row touches another pivot");
                    vectors[j].insert(*pc, -x.clone());
                }
            }
        }
        KernelBasis { cols: self.cols, vectors, free_cols: free }
    }
}

/// Null-space basis together with the free columns that index it.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub cols: usize,
    pub vectors: Vec<SparseVec>,
    pub free_cols: Vec<usize>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates of a vector known to lie in the span.
    pub fn coords(&self, v: &SparseVec) -> Vec<Rational> {
        self.free_cols
            .iter()
            .map(|f| v.get(f).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    /// Coordinates, or `None` if `v` is not in the span.
    pub fn try_coords(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        let c = self.coords(v);
        let back = self.combine(&c);
        if &back == v {
            Some(c)
        } else {
            None
        }
    }

    pub fn combine(&self, coeffs: &[Rational]) -> SparseVec {
        let mut out = SparseVec::new();
        for (x, v) in coeffs.iter().zip(&self.vectors) {
            axpy(&mut out, x, v);
        }
        out
    }
}

/// Gauss-Jordan elimination. Dense below [`DENSE_CUTOFF`], sparse otherwise.
pub fn echelon(m: &SparseMatrix) -> Echelon {
    if m.rows() < DENSE_CUTOFF && m.cols() < DENSE_CUTOFF {
        echelon_dense(m)
    } else {
        echelon_sparse(m)
    }
}

pub fn echelon_dense(m: &SparseMatrix) -> Echelon {
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let pivots = pivot_cols
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c, to_sparse(&a[i])))
        .collect();
    Echelon { cols, pivots }
}

/// Sparse incremental Gauss-Jordan. Rows are inserted one at a time, reduced
/// against the current pivots, and pivot on the entry whose column is the
/// sparsest in the input matrix.
pub fn echelon_sparse(m: &SparseMatrix) -> Echelon {
    let cols = m.cols();
    let mut col_count = vec![0usize; cols];
    for row in m.row_vecs() {
        for c in row.keys() {
            col_count[*c] += 1;
        }
    }
    // Process sparse rows first; it keeps the pivot rows short.
    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.sort_by_key(|&r| m.row(r).len());

    let mut pivots: BTreeMap<usize, SparseVec> = BTreeMap::new();
    // column -> set of pivot columns whose rows have an entry there
    let mut occurs: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();

    for r in order {
        let mut v = m.row(r).clone();
        loop {
            let hit = v.iter().find(|(c, _)| pivots.contains_key(c)).map(|(c, x)| (*c, x.clone()));
            let Some((c, x)) = hit else { break };
            let row = &pivots[&c];
            axpy(&mut v, &(-x), row);
        }
        if v.is_empty() {
            continue;
        }
        let pc = *v
            .keys()
            .min_by_key(|c| (col_count[**c], **c))
            .expect("nonempty row");
        let inv = v[&pc].recip();
        scale(&mut v, &inv);
        // eliminate pc from existing pivot rows
        if let Some(users) = occurs.remove(&pc) {
            for u in users {
                let row = pivots.get_mut(&u).expect("pivot row");
                let Some(f) = row.get(&pc).cloned() else { continue };
                let before: Vec<usize> = row.keys().copied().collect();
                axpy(row, &(-f), &v);
                let after: BTreeSet<usize> = row.keys().copied().collect();
                for c in before {
                    if !after.contains(&c) && c != u {
                        if let Some(s) = occurs.get_mut(&c) {
                            s.remove(&u);
                        }
                    }
                }
                for c in after {
                    if c != u {
                        occurs.entry(c).or_default().insert(u);
                    }
                }
            }
        }
        for c in v.keys() {
            if *c != pc {
                occurs.entry(*c).or_default().insert(pc);
            }
        }
        pivots.insert(pc, v);
    }
    Echelon { cols, pivots }
}

pub fn rank(m: &SparseMatrix) -> usize {
    echelon(m).rank()
}

pub fn kernel_basis(m: &SparseMatrix) -> KernelBasis {
    echelon(m).kernel()
}

/// Rank of a family of vectors of length `cols`.
pub fn rank_of_vectors(cols: usize, vs: &[SparseVec]) -> usize {
    rank(&SparseMatrix::from_rows(cols, vs.to_vec()))
}

/// A finite cochain complex `C^lo -> C^{lo+1} -> ... -> C^hi`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    lo: i64,
    dims: Vec<usize>,
    /// `diffs[k]` maps degree `lo + k` to `lo + k + 1`; shape `dims[k+1] x dims[k]`.
    diffs: Vec<SparseMatrix>,
}

impl CochainComplex {
    /// `diffs` must contain one matrix per consecutive pair of degrees.
    pub fn new(lo: i64, dims: Vec<usize>, diffs: Vec<SparseMatrix>) -> Result<Self, Error> {
        if dims.is_empty() {
            if !diffs.is_empty() {
                return Err(Error::Invalid("differentials given for an empty complex".into()));
            }
            return Ok(CochainComplex { lo, dims, diffs });
        }
        if diffs.len() + 1 != dims.len() {
            return Err(Error::Invalid(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(Error::Invalid(format!(
                    "differential in degree {} has shape {}x{}, expected {}x{}",
                    lo + k as i64,
                    d.rows(),
                    d.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        for k in 0..diffs.len().saturating_sub(1) {
            if !diffs[k + 1].mul(&diffs[k]).is_zero() {
                return Err(Error::NotAComplex(lo + k as i64));
            }
        }
        Ok(CochainComplex { lo, dims, diffs })
    }

    /// Complex concentrated in one degree.
    pub fn single(degree: i64, dim: usize) -> Self {
        CochainComplex { lo: degree, dims: vec![dim], diffs: vec![] }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// The differential leaving degree `n`, if it is inside the stored range.
    pub fn differential(&self, n: i64) -> Option<&SparseMatrix> {
        if n < self.lo {
            return None;
        }
        self.diffs.get((n - self.lo) as usize)
    }

    fn rank_out(&self, n: i64) -> usize {
        self.differential(n).map_or(0, rank)
    }

    /// `dim H^n = dim ker d^n - rank d^{n-1}` for every stored degree.
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        let ranks: Vec<usize> = (0..self.diffs.len()).map(|k| rank(&self.diffs[k])).collect();
        let mut out = BTreeMap::new();
        for (k, dim) in self.dims.iter().enumerate() {
            let n = self.lo + k as i64;
            let out_rank = ranks.get(k).copied().unwrap_or(0);
            let in_rank = if k == 0 { 0 } else { ranks[k - 1] };
            out.insert(n, dim - out_rank - in_rank);
        }
        out
    }

    pub fn cohomology_dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            return 0;
        }
        let k = (n - self.lo) as usize;
        let in_rank = if k == 0 { 0 } else { self.rank_out(n - 1) };
        self.dims[k] - self.rank_out(n) - in_rank
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, d)| if (self.lo + k as i64) % 2 == 0 { *d as i64 } else { -(*d as i64) })
            .sum()
    }
}

/// Dense rational matrix used for representations and small transports.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Rational>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![vec![Rational::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    pub fn from_rows(data: Vec<Vec<Rational>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows, cols, data }
    }

    pub fn from_ints(data: &[&[i64]]) -> Self {
        Self::from_rows(data.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect())
    }

    pub fn scalar(x: Rational) -> Self {
        Matrix { rows: 1, cols: 1, data: vec![vec![x]] }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (ro, r) in out.data.iter_mut().zip(&other.data) {
            for (x, y) in ro.iter_mut().zip(r) {
                *x += y;
            }
        }
        out
    }

    pub fn scaled(&self, f: &Rational) -> Matrix {
        let mut out = self.clone();
        for r in out.data.iter_mut() {
            for x in r.iter_mut() {
                *x *= f;
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }

    /// Kronecker product; row index of `a (x) b` is `i * b.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self.data[i][j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = &other.data[k][l];
                        if !b.is_zero() {
                            out.data[i * other.rows + k][j * other.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] = self.data[i][j].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.data[self.rows + i][self.cols + j] = other.data[i][j].clone();
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !a[i][c].is_zero())?;
            a.swap(c, p);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x *= &inv;
            }
            let pr = a[c].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != c && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pr) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Some(Matrix::from_rows(a.into_iter().map(|r| r[n..].to_vec()).collect()))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.data.iter().enumerate().all(|(i, r)| {
                r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.data[i][i].clone()).sum()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| r.iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        SparseMatrix::from_dense(&self.data)
    }

    /// Row-major flattening, index `i * cols + j`.
    pub fn flatten(&self) -> Vec<Rational> {
        self.data.iter().flat_map(|r| r.iter().cloned()).collect()
    }

    pub fn unflatten(rows: usize, cols: usize, v: &[Rational]) -> Matrix {
        assert_eq!(v.len(), rows * cols);
        Matrix::from_rows(v.chunks(cols.max(1)).take(rows).map(|c| c.to_vec()).collect())
    }

    pub fn rank(&self) -> usize {
        rank(&self.to_sparse())
    }

    pub fn max_abs_numerator(&self) -> BigInt {
        self.data
            .iter()
            .flat_map(|r| r.iter())
            .map(|x| x.numer().abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}
