//! Exact dense linear algebra over a [`Field`]: canonical reduced row
//! echelon forms, kernels, affine system solving with infeasibility
//! certificates, and subspace lattice operations.
//!
//! Pivot selection is leftmost-nonzero with first-row tie-break, so every
//! reduced form is the canonical one and two row-equivalent matrices reduce
//! to identical objects. Subspaces are stored through their RREF bases and
//! therefore compare by `==`.

use crate::field::{Field, Row};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

/// Dense matrix with rows stored in the field's row representation
/// (bit-packed for GF(2)).
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F::Row>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: (0..rows).map(|_| F::Row::zeros(cols)).collect() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<F::Row>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        Matrix { rows: rows.len(), cols, data: rows }
    }

    pub fn from_vecs(entries: Vec<Vec<F>>) -> Self {
        let cols = entries.first().map_or(0, Vec::len);
        let data: Vec<F::Row> = entries.iter().map(|r| F::Row::from_slice(r)).collect();
        Matrix { rows: data.len(), cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if !v.is_zero() {
                    m.data[i].set(j, v);
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i].get(j)
    }
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i].set(j, v);
    }
    pub fn row(&self, i: usize) -> &F::Row {
        &self.data[i]
    }
    pub fn row_mut(&mut self, i: usize) -> &mut F::Row {
        &mut self.data[i]
    }
    pub fn rows_iter(&self) -> impl Iterator<Item = &F::Row> {
        self.data.iter()
    }
    pub fn take_rows(self) -> Vec<F::Row> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Row::is_zero)
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut t = Matrix::<F>::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            self.data[i].for_nonzero(|j, v: F| t.data[j].set(i, v));
        }
        t
    }

    /// y = A * x
    pub fn mul_vec(&self, x: &F::Row) -> F::Row {
        debug_assert_eq!(x.len(), self.cols);
        let mut y = F::Row::zeros(self.rows);
        for (i, r) in self.data.iter().enumerate() {
            let d = r.dot(x);
            if !d.is_zero() {
                y.set(i, d);
            }
        }
        y
    }

    pub fn mul_mat(&self, other: &Matrix<F>) -> Matrix<F> {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let acc: &mut F::Row = &mut out.data[i];
            self.data[i].for_nonzero(|k, v: F| acc.axpy(&v, &other.data[k]));
        }
        out
    }

    /// self += c * other
    pub fn axpy(&mut self, c: &F, other: &Matrix<F>) {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            a.axpy(c, b);
        }
    }

    /// Linear combination of the rows of `self` with coefficients `v`,
    /// i.e. `self^T * v`, support-driven. This is the cheap way to apply a
    /// linear map stored in column-major (transposed) form to a sparse
    /// vector.
    pub fn combine_rows(&self, v: &F::Row) -> F::Row {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = F::Row::zeros(self.cols);
        v.for_nonzero(|i, c: F| out.axpy(&c, &self.data[i]));
        out
    }

    pub fn stack(top: &Matrix<F>, bottom: &Matrix<F>) -> Matrix<F> {
        debug_assert_eq!(top.cols, bottom.cols);
        let mut data = top.data.clone();
        data.extend(bottom.data.iter().cloned());
        Matrix { rows: top.rows + bottom.rows, cols: top.cols, data }
    }

    /// Canonical reduced row echelon form.
    pub fn rref(&self) -> Rref<F> {
        let mut basis = RrefBasis::new(self.cols);
        for r in &self.data {
            basis.insert(r.clone());
        }
        Rref { pivots: basis.pivots.clone(), rank: basis.rank(), basis }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Null space {v : A v = 0} as a canonical subspace.
    pub fn kernel(&self) -> Subspace<F> {
        let red = self.rref();
        let mut pivot_of_col = vec![usize::MAX; self.cols];
        for (k, &p) in red.pivots.iter().enumerate() {
            pivot_of_col[p] = k;
        }
        let mut rows = Vec::new();
        for f in 0..self.cols {
            if pivot_of_col[f] != usize::MAX {
                continue;
            }
            let mut v = F::Row::zeros(self.cols);
            v.set(f, F::one());
            for (k, &p) in red.pivots.iter().enumerate() {
                let c = red.basis.rows[k].get(f);
                if !c.is_zero() {
                    v.set(p, -c);
                }
            }
            rows.push(v);
        }
        Subspace::from_rows(rows, self.cols)
    }

    /// Column space as a canonical subspace.
    pub fn column_space(&self) -> Subspace<F> {
        let t = self.transpose();
        Subspace::from_rows(t.data, self.rows)
    }
}

/// Result of a canonical row reduction.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub basis: RrefBasis<F>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl<F: Field> Rref<F> {
    /// The reduced matrix, padded with zero rows to the requested row count.
    pub fn to_matrix(&self, rows: usize) -> Matrix<F> {
        let cols = self.basis.cols;
        let mut data = self.basis.rows.clone();
        while data.len() < rows {
            data.push(F::Row::zeros(cols));
        }
        Matrix::from_rows(data, cols)
    }
}

// ---------------------------------------------------------------------------
// Incremental RREF basis
// ---------------------------------------------------------------------------

/// A row space maintained in reduced row echelon form under streamed row
/// insertion. Rows are kept sorted by pivot column; the form stays fully
/// reduced after every insert, so the content is canonical at all times.
#[derive(Clone, Debug, PartialEq)]
pub struct RrefBasis<F: Field> {
    cols: usize,
    rows: Vec<F::Row>,
    pivots: Vec<usize>,
}

impl<F: Field> RrefBasis<F> {
    pub fn new(cols: usize) -> Self {
        RrefBasis { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn rows(&self) -> &[F::Row] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `row` modulo the current basis (kill all pivot coordinates).
    pub fn reduce(&self, row: &mut F::Row) {
        for (k, &p) in self.pivots.iter().enumerate() {
            let c = row.get(p);
            if !c.is_zero() {
                row.axpy(&(-c), &self.rows[k]);
            }
        }
    }

    /// Insert a row; returns `true` when the rank grew.
    pub fn insert(&mut self, mut row: F::Row) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        self.reduce(&mut row);
        let Some(p) = row.leading() else { return false };
        let inv = row.get(p).inv().expect("nonzero leading entry");
        row.scale(&inv);
        // keep the form reduced: clear the new pivot column above and below
        for r in &mut self.rows {
            let c = r.get(p);
            if !c.is_zero() {
                r.axpy(&(-c), &row);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, row);
        true
    }

    pub fn contains(&self, row: &F::Row) -> bool {
        let mut r = row.clone();
        self.reduce(&mut r);
        r.is_zero()
    }
}

// ---------------------------------------------------------------------------
// Subspace
// ---------------------------------------------------------------------------

/// Linear subspace of k^n in canonical form: the basis rows are the RREF of
/// any spanning set, with strictly increasing pivots. Equal subspaces are
/// structurally equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: RrefBasis<F>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: RrefBasis::new(ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        let mut basis = RrefBasis::new(ambient);
        for i in 0..ambient {
            let mut r = F::Row::zeros(ambient);
            r.set(i, F::one());
            basis.insert(r);
        }
        Subspace { ambient, basis }
    }

    pub fn from_rows(rows: Vec<F::Row>, ambient: usize) -> Self {
        let mut basis = RrefBasis::new(ambient);
        for r in rows {
            basis.insert(r);
        }
        Subspace { ambient, basis }
    }

    pub fn from_basis(basis: RrefBasis<F>) -> Self {
        Subspace { ambient: basis.cols(), basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }
    pub fn basis_rows(&self) -> &[F::Row] {
        self.basis.rows()
    }
    pub fn pivots(&self) -> &[usize] {
        self.basis.pivots()
    }
    pub fn rref_basis(&self) -> &RrefBasis<F> {
        &self.basis
    }

    pub fn contains(&self, v: &F::Row) -> Result<bool, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector length {} vs ambient {}",
                v.len(),
                self.ambient
            )));
        }
        Ok(self.basis.contains(v))
    }

    /// Canonical coset representative: `v` with all pivot coordinates of
    /// this subspace eliminated.
    pub fn reduce_vec(&self, v: &F::Row) -> F::Row {
        let mut r = v.clone();
        self.basis.reduce(&mut r);
        r
    }

    pub fn contains_subspace(&self, other: &Subspace<F>) -> bool {
        other.basis_rows().iter().all(|r| self.basis.contains(r))
    }

    /// Span of the union.
    pub fn sum(&self, other: &Subspace<F>) -> Result<Subspace<F>, LinalgError> {
        self.check_ambient(other)?;
        let mut basis = self.basis.clone();
        for r in other.basis_rows() {
            basis.insert(r.clone());
        }
        Ok(Subspace { ambient: self.ambient, basis })
    }

    /// Set intersection of two subspaces.
    ///
    /// Solves U^T a = W^T b by taking the kernel of the ambient x (dim U +
    /// dim W) matrix [U^T | -W^T]; the intersection is spanned by the U^T a
    /// parts of that kernel.
    pub fn intersect(&self, other: &Subspace<F>) -> Result<Subspace<F>, LinalgError> {
        self.check_ambient(other)?;
        let (du, dw) = (self.dim(), other.dim());
        if du == 0 || dw == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        let mut m = Matrix::<F>::zeros(self.ambient, du + dw);
        for (j, r) in self.basis_rows().iter().enumerate() {
            r.for_nonzero(|i, v| m.set(i, j, v));
        }
        for (j, r) in other.basis_rows().iter().enumerate() {
            r.for_nonzero(|i, v| m.set(i, du + j, -v));
        }
        let ker = m.kernel();
        let mut rows = Vec::with_capacity(ker.dim());
        for k in ker.basis_rows() {
            let mut v = F::Row::zeros(self.ambient);
            for (j, r) in self.basis_rows().iter().enumerate() {
                let c = k.get(j);
                if !c.is_zero() {
                    v.axpy(&c, r);
                }
            }
            rows.push(v);
        }
        Ok(Subspace::from_rows(rows, self.ambient))
    }

    /// Intersection of a nonempty family.
    pub fn intersect_all(spaces: &[Subspace<F>]) -> Result<Subspace<F>, LinalgError> {
        let mut it = spaces.iter();
        let first = it.next().expect("nonempty family");
        let mut acc = first.clone();
        for s in it {
            acc = acc.intersect(s)?;
        }
        Ok(acc)
    }

    fn check_ambient(&self, other: &Subspace<F>) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch(format!(
                "ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Affine subspaces and system solving
// ---------------------------------------------------------------------------

/// Certificate that a linear system is infeasible: a left combination of the
/// original rows that zeroes the coefficient side but not the right-hand
/// side. `witness_row` is the index of the inserted row whose reduction
/// exposed the inconsistency.
#[derive(Clone, Debug, PartialEq)]
pub struct Infeasibility<F: Field> {
    pub witness_row: usize,
    /// Coefficients over the original rows; `None` when the solver was run
    /// without row retention.
    pub combination: Option<F::Row>,
}

/// Affine solution set in canonical form. `particular` (when present) has
/// all pivot coordinates of `direction` equal to zero, which makes the
/// representative unique.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSubspace<F: Field> {
    pub ambient: usize,
    pub particular: Option<F::Row>,
    pub direction: Subspace<F>,
    pub infeasibility: Option<Infeasibility<F>>,
}

impl<F: Field> AffineSubspace<F> {
    pub fn empty(ambient: usize, cert: Option<Infeasibility<F>>) -> Self {
        AffineSubspace {
            ambient,
            particular: None,
            direction: Subspace::zero(ambient),
            infeasibility: cert,
        }
    }

    pub fn full(ambient: usize) -> Self {
        AffineSubspace {
            ambient,
            particular: Some(F::Row::zeros(ambient)),
            direction: Subspace::full(ambient),
            infeasibility: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    pub fn dim(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.direction.dim())
    }

    pub fn contains(&self, v: &F::Row) -> Result<bool, LinalgError> {
        match &self.particular {
            None => Ok(false),
            Some(p) => {
                if v.len() != self.ambient {
                    return Err(LinalgError::DimensionMismatch(format!(
                        "vector length {} vs ambient {}",
                        v.len(),
                        self.ambient
                    )));
                }
                let mut diff = v.clone();
                diff.axpy(&-F::one(), p);
                Ok(self.direction.rref_basis().contains(&diff))
            }
        }
    }
}

/// Streaming exact solver for `A x = b`: rows are pushed one at a time as
/// `(coefficients, rhs)` and reduced immediately, so very tall systems never
/// need to be materialized. The rhs travels as an extra trailing column that
/// is excluded from pivot selection.
pub struct LinearSystem<F: Field> {
    cols: usize,
    basis: RrefBasis<F>,
    pushed: usize,
    infeasible_at: Option<usize>,
    retained: Option<Vec<(F::Row, F)>>,
}

impl<F: Field> LinearSystem<F> {
    pub fn new(cols: usize) -> Self {
        LinearSystem {
            cols,
            basis: RrefBasis::new(cols + 1),
            pushed: 0,
            infeasible_at: None,
            retained: None,
        }
    }

    /// Keep pushed rows so an infeasibility combination can be recovered.
    pub fn retain_rows(mut self) -> Self {
        self.retained = Some(Vec::new());
        self
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows_pushed(&self) -> usize {
        self.pushed
    }

    pub fn is_infeasible(&self) -> bool {
        self.infeasible_at.is_some()
    }

    pub fn push_row(&mut self, row: F::Row, rhs: F) {
        debug_assert_eq!(row.len(), self.cols);
        let index = self.pushed;
        self.pushed += 1;
        if let Some(store) = &mut self.retained {
            store.push((row.clone(), rhs.clone()));
        }
        let mut aug = F::Row::zeros(self.cols + 1);
        row.for_nonzero(|i, v| aug.set(i, v));
        if !rhs.is_zero() {
            aug.set(self.cols, rhs);
        }
        let mut reduced = aug;
        self.basis.reduce(&mut reduced);
        match reduced.leading() {
            Some(p) if p == self.cols => {
                // 0 = nonzero
                if self.infeasible_at.is_none() {
                    self.infeasible_at = Some(index);
                }
                let inv = reduced.get(p).inv().expect("nonzero");
                reduced.scale(&inv);
                // keep it in the basis so later rows reduce against it too
                self.raw_insert(reduced, p);
            }
            Some(p) => {
                let inv = reduced.get(p).inv().expect("nonzero");
                reduced.scale(&inv);
                self.raw_insert(reduced, p);
            }
            None => {}
        }
    }

    fn raw_insert(&mut self, row: F::Row, p: usize) {
        for r in &mut self.basis.rows {
            let c = r.get(p);
            if !c.is_zero() {
                r.axpy(&(-c), &row);
            }
        }
        let at = self.basis.pivots.partition_point(|&q| q < p);
        self.basis.pivots.insert(at, p);
        self.basis.rows.insert(at, row);
    }

    /// Convenience wrapper around [`push_row`](Self::push_row) for an
    /// A-valued equation given as scalar coefficients.
    pub fn push_scalar_row(&mut self, coeffs: &[(usize, F)], rhs: F) {
        let mut row = F::Row::zeros(self.cols);
        for (i, c) in coeffs {
            row.add_at(*i, c);
        }
        self.push_row(row, rhs);
    }

    /// Finish: canonical affine solution set (empty iff inconsistent).
    pub fn solve(self) -> AffineSubspace<F> {
        let cols = self.cols;
        if let Some(at) = self.infeasible_at {
            let combination = self.retained.as_deref().and_then(|rows| farkas(rows, cols));
            return AffineSubspace::empty(
                cols,
                Some(Infeasibility { witness_row: at, combination }),
            );
        }
        // split the augmented basis back into coefficient rows + rhs
        let mut coeff = RrefBasis::<F>::new(cols);
        let mut rhs_of_pivot: Vec<(usize, F)> = Vec::new();
        for (k, row) in self.basis.rows.iter().enumerate() {
            let p = self.basis.pivots[k];
            debug_assert!(p < cols);
            let mut r = F::Row::zeros(cols);
            row.for_nonzero(|i, v| {
                if i < cols {
                    r.set(i, v);
                }
            });
            rhs_of_pivot.push((p, row.get(cols)));
            coeff.pivots.push(p);
            coeff.rows.push(r);
        }
        // direction = kernel of the reduced coefficient matrix
        let direction =
            Matrix::from_rows(coeff.rows.clone(), cols).kernel();
        // free variables zero, then reduce mod direction pivots for the
        // canonical representative
        let mut particular = F::Row::zeros(cols);
        for (p, v) in &rhs_of_pivot {
            if !v.is_zero() {
                particular.set(*p, v.clone());
            }
        }
        let particular = direction.reduce_vec(&particular);
        AffineSubspace { ambient: cols, particular: Some(particular), direction, infeasibility: None }
    }
}

/// Repeated-solve helper for `M x = b` with a fixed `M`: one elimination of
/// the row-augmented [M | I], then each solve is a back-substitution. Rows
/// whose M-part reduced to zero carry the dependency combinations used for
/// consistency checks.
pub struct PreSolver<F: Field> {
    cols: usize,
    nrows: usize,
    /// (pivot column, combination-of-original-rows) per pivot row.
    pivot_rows: Vec<(usize, F::Row)>,
    /// Combinations that annihilate M; b must be orthogonal to these.
    null_rows: Vec<F::Row>,
}

impl<F: Field> PreSolver<F> {
    pub fn new(m: &Matrix<F>) -> Self {
        let (nrows, cols) = (m.nrows(), m.ncols());
        let mut basis = RrefBasis::<F>::new(cols + nrows);
        for i in 0..nrows {
            let mut row = F::Row::zeros(cols + nrows);
            m.row(i).for_nonzero(|j, v: F| row.set(j, v));
            row.set(cols + i, F::one());
            basis.insert(row);
        }
        let mut pivot_rows = Vec::new();
        let mut null_rows = Vec::new();
        for (k, &p) in basis.pivots().iter().enumerate() {
            let full = &basis.rows()[k];
            let mut t = F::Row::zeros(nrows);
            full.for_nonzero(|j, v: F| {
                if j >= cols {
                    t.set(j - cols, v);
                }
            });
            if p < cols {
                pivot_rows.push((p, t));
            } else {
                null_rows.push(t);
            }
        }
        PreSolver { cols, nrows, pivot_rows, null_rows }
    }

    /// A solution of `M x = b` with free coordinates zero, or `None` when
    /// the system is inconsistent.
    pub fn solve(&self, b: &F::Row) -> Option<F::Row> {
        debug_assert_eq!(b.len(), self.nrows);
        for t in &self.null_rows {
            if !t.dot(b).is_zero() {
                return None;
            }
        }
        let mut x = F::Row::zeros(self.cols);
        for (p, t) in &self.pivot_rows {
            let v = t.dot(b);
            if !v.is_zero() {
                x.set(*p, v);
            }
        }
        Some(x)
    }
}

/// Left combination y with y^T A = 0 and y^T b = 1, found by solving the
/// transposed system; used to certify infeasibility.
fn farkas<F: Field>(rows: &[(F::Row, F)], cols: usize) -> Option<F::Row> {
    let n = rows.len();
    let mut sys = LinearSystem::<F>::new(n);
    // equations: sum_i y_i * A[i][j] = 0 for each column j
    for j in 0..cols {
        let mut row = F::Row::zeros(n);
        for (i, (a, _)) in rows.iter().enumerate() {
            let v = a.get(j);
            if !v.is_zero() {
                row.set(i, v);
            }
        }
        sys.push_row(row, F::zero());
    }
    // and sum_i y_i * b_i = 1
    let mut brow = F::Row::zeros(n);
    for (i, (_, b)) in rows.iter().enumerate() {
        if !b.is_zero() {
            brow.set(i, b.clone());
        }
    }
    sys.push_row(brow, F::one());
    sys.solve().particular
}

/// Solve `m x = b` exactly. The result is the canonical affine subspace;
/// on inconsistency the certificate includes the original-row combination.
pub fn solve_affine<F: Field>(m: &Matrix<F>, b: &F::Row) -> Result<AffineSubspace<F>, LinalgError> {
    if b.len() != m.nrows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "rhs length {} vs {} rows",
            b.len(),
            m.nrows()
        )));
    }
    let mut sys = LinearSystem::new(m.ncols()).retain_rows();
    for i in 0..m.nrows() {
        sys.push_row(m.row(i).clone(), b.get(i));
    }
    Ok(sys.solve())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use num_rational::BigRational;
    use num_traits::Zero;

    type F2 = Gf<2>;
    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn gf2_mat(rows: &[&[u64]]) -> Matrix<F2> {
        Matrix::from_vecs(rows.iter().map(|r| r.iter().map(|&v| Gf(v)).collect()).collect())
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = Matrix::<F2>::identity(3);
        assert_eq!(m.rref().to_matrix(3), m);
    }

    #[test]
    fn rref_row_subtraction_gf2() {
        let m = gf2_mat(&[&[1, 1], &[1, 1]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.to_matrix(2), gf2_mat(&[&[1, 1], &[0, 0]]));
    }

    /// Independent elimination oracle with fraction arithmetic, used to pin
    /// the rational RREF example.
    fn oracle_rref(rows: &mut Vec<Vec<BigRational>>) {
        let cols = rows.first().map_or(0, Vec::len);
        let mut lead = 0;
        for r in 0..rows.len() {
            let mut found = None;
            'scan: for j in lead..cols {
                for i in r..rows.len() {
                    if !rows[i][j].is_zero() {
                        found = Some((i, j));
                        break 'scan;
                    }
                }
            }
            let Some((i, j)) = found else { break };
            rows.swap(r, i);
            let inv = rows[r][j].recip();
            for x in rows[r].iter_mut() {
                *x *= inv.clone();
            }
            for i in 0..rows.len() {
                if i != r && !rows[i][j].is_zero() {
                    let c = rows[i][j].clone();
                    for k in 0..cols {
                        let t = c.clone() * rows[r][k].clone();
                        rows[i][k] -= t;
                    }
                }
            }
            lead = j + 1;
        }
    }

    #[test]
    fn rref_rank2_rational_matches_oracle() {
        let raw = vec![
            vec![q(2), q(4), q(6)],
            vec![q(1), q(3), q(5)],
            vec![q(3), q(7), q(11)], // row1 + row2
        ];
        let m = Matrix::from_vecs(raw.clone());
        let red = m.rref();
        assert_eq!(red.rank, 2);
        let mut expect = raw;
        oracle_rref(&mut expect);
        assert_eq!(red.to_matrix(3), Matrix::from_vecs(expect));
        // idempotent
        let again = red.to_matrix(3).rref();
        assert_eq!(again.to_matrix(3), red.to_matrix(3));
    }

    #[test]
    fn solve_zero_matrix() {
        // 0 x = 0: everything
        let m = Matrix::<F2>::zeros(2, 3);
        let s = solve_affine(&m, &BitRowOf(&[0, 0])).unwrap();
        assert!(!s.is_empty());
        assert_eq!(s.direction.dim(), 3);
        // 0 x = b, b != 0: empty with certificate
        let s = solve_affine(&m, &BitRowOf(&[1, 0])).unwrap();
        assert!(s.is_empty());
        let cert = s.infeasibility.unwrap();
        assert_eq!(cert.witness_row, 0);
        let comb = cert.combination.unwrap();
        assert_eq!(comb.get(0), Gf(1));
    }

    #[allow(non_snake_case)]
    fn BitRowOf(bits: &[u64]) -> <F2 as Field>::Row {
        let v: Vec<F2> = bits.iter().map(|&b| Gf(b)).collect();
        Row::from_slice(&v)
    }

    #[test]
    fn solve_feasible_residuals_vanish() {
        let m = gf2_mat(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = BitRowOf(&[1, 0]);
        let s = solve_affine(&m, &b).unwrap();
        let p = s.particular.clone().unwrap();
        assert_eq!(m.mul_vec(&p), b);
        for d in s.direction.basis_rows() {
            assert!(m.mul_vec(d).is_zero());
        }
        // canonical representative has direction-pivot coordinates zero
        for &p_col in s.direction.pivots() {
            assert!(p.get(p_col).is_zero());
        }
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        assert_eq!(Matrix::<F2>::identity(4).kernel().dim(), 0);
    }

    #[test]
    fn rank_nullity() {
        let m = gf2_mat(&[&[1, 0, 1, 1], &[0, 1, 1, 0], &[1, 1, 0, 1]]);
        assert_eq!(m.rank() + m.kernel().dim(), m.ncols());
    }

    #[test]
    fn infeasibility_combination_certifies() {
        // x + y = 1, x + y = 0 over QQ
        let m = Matrix::from_vecs(vec![vec![q(1), q(1)], vec![q(1), q(1)]]);
        let b: DenseRowQ = Row::from_slice(&[q(1), q(0)]);
        let s = solve_affine(&m, &b).unwrap();
        assert!(s.is_empty());
        let cert = s.infeasibility.unwrap();
        assert_eq!(cert.witness_row, 1);
        let y = cert.combination.unwrap();
        // y^T A = 0 and y^T b != 0
        for j in 0..2 {
            let mut acc = q(0);
            for i in 0..2 {
                acc += y.get(i) * m.get(i, j);
            }
            assert!(acc.is_zero());
        }
        let mut ydotb = q(0);
        for i in 0..2 {
            ydotb += y.get(i) * b.get(i);
        }
        assert!(!ydotb.is_zero());
    }

    type DenseRowQ = crate::field::DenseRow<BigRational>;

    #[test]
    fn subspace_lattice() {
        let u = Subspace::<F2>::from_rows(vec![BitRowOf(&[1, 0, 0]), BitRowOf(&[0, 1, 0])], 3);
        let w = Subspace::<F2>::from_rows(vec![BitRowOf(&[0, 1, 0]), BitRowOf(&[0, 0, 1])], 3);
        let i = u.intersect(&w).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&BitRowOf(&[0, 1, 0])).unwrap());
        // V cap V = V, V cap 0 = 0
        assert_eq!(u.intersect(&u).unwrap(), u);
        assert_eq!(u.intersect(&Subspace::zero(3)).unwrap().dim(), 0);
        // dim(U) + dim(W) = dim(U+W) + dim(U cap W)
        let s = u.sum(&w).unwrap();
        assert_eq!(u.dim() + w.dim(), s.dim() + i.dim());
        // membership basics
        assert!(u.contains(&BitRowOf(&[0, 0, 0])).unwrap());
        assert!(!u.contains(&BitRowOf(&[0, 0, 1])).unwrap());
        assert!(u
            .contains(&BitRowOf(&[1, 0]))
            .is_err());
    }
}
