//! Finite-dimensional commutative algebras presented as monomial-ideal
//! quotients k[x_1..x_n]/I (or as audited raw multiplication tables),
//! their elements, and their derivations.
//!
//! The basis of a monomial quotient is the set of standard monomials (those
//! not divisible by any ideal generator) in graded lexicographic order with
//! the declared variable order. Products of standard monomials are either a
//! single standard monomial or zero, which the multiplication fast path
//! exploits throughout the tensor machinery.

use crate::field::{Field, Row};
use crate::linalg::{Matrix, Subspace};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("quotient is infinite-dimensional: variable {0} has no pure power in the ideal")]
    InfiniteDimensional(String),
    #[error("multiplication table fails the {law} audit at basis indices {indices:?}")]
    InvalidTable { law: &'static str, indices: Vec<usize> },
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("coefficient vector has length {got}, algebra dimension is {want}")]
    WrongLength { got: usize, want: usize },
    #[error("derivation images do not descend: ideal generator {generator} has nonzero image")]
    IllDefined { generator: String },
    #[error("matrix is not a derivation: Leibniz rule fails at basis pair ({i}, {j})")]
    NotDerivation { i: usize, j: usize },
    #[error("unknown variable index {0}")]
    UnknownVariable(usize),
    #[error("table algebra has no unit element")]
    NoUnit,
    #[error("ideal contains 1; the quotient is the zero ring")]
    ZeroQuotient,
}

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

/// Monomial as an exponent vector over the declared variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[v] = 1;
        Monomial { exps }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Graded lexicographic order: lower degree first, then lexicographically
    /// larger exponent vector first (so x precedes y precedes z).
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.exps.cmp(&self.exps))
    }

    pub fn render(&self, variables: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (v, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(variables[v].clone()),
                _ => parts.push(format!("{}^{}", variables[v], e)),
            }
        }
        parts.join("*")
    }
}

// ---------------------------------------------------------------------------
// Presentation
// ---------------------------------------------------------------------------

/// Input data for [`Algebra::build`]: a monomial-ideal quotient, or a raw
/// multiplication table for algebras that are not monomial quotients.
#[derive(Debug, Clone)]
pub struct Presentation<F: Field> {
    pub variables: Vec<String>,
    pub ideal: Vec<Monomial>,
    /// Explicit table `basis x basis -> coefficient vector`; when present the
    /// monomial data is ignored and the table is audited instead.
    pub alt_table: Option<TablePresentation<F>>,
}

#[derive(Debug, Clone)]
pub struct TablePresentation<F: Field> {
    pub labels: Vec<String>,
    pub table: Vec<Vec<Vec<F>>>,
}

// ---------------------------------------------------------------------------
// Algebra
// ---------------------------------------------------------------------------

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

/// A finite-dimensional commutative unital algebra with a canonically
/// ordered basis and a total multiplication table.
#[derive(Debug)]
pub struct Algebra<F: Field> {
    id: u64,
    variables: Vec<String>,
    ideal: Vec<Monomial>,
    /// Standard monomials in grlex order; empty for table algebras.
    basis: Vec<Monomial>,
    labels: Vec<String>,
    index: HashMap<Monomial, usize>,
    dim: usize,
    unit: usize,
    /// table[i][j] = coefficients of e_i * e_j.
    table: Vec<Vec<Vec<F>>>,
    /// Monomial fast path: product of basis monomials is a single basis
    /// element or zero. `None` for table algebras.
    mono_prod: Option<Vec<Vec<Option<usize>>>>,
    /// Multiplication operators: mult_ops[i] = matrix of x -> e_i * x.
    mult_ops: Vec<Matrix<F>>,
}

/// Element of an [`Algebra`]: a coefficient vector over the canonical basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement<F: Field> {
    pub(crate) algebra: u64,
    pub coeffs: Vec<F>,
}

impl<F: Field> AlgElement<F> {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.algebra, other.algebra, "algebra mismatch");
        AlgElement {
            algebra: self.algebra,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.algebra, other.algebra, "algebra mismatch");
        AlgElement {
            algebra: self.algebra,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        AlgElement { algebra: self.algebra, coeffs: self.coeffs.iter().map(|a| -a.clone()).collect() }
    }

    pub fn scaled(&self, c: &F) -> Self {
        AlgElement {
            algebra: self.algebra,
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn to_row(&self) -> F::Row {
        F::Row::from_slice(&self.coeffs)
    }
}

impl<F: Field> Algebra<F> {
    /// Build an algebra from a presentation.
    pub fn build(p: &Presentation<F>) -> Result<Arc<Self>, AlgebraError> {
        match &p.alt_table {
            Some(t) => Self::from_table(t.labels.clone(), t.table.clone()),
            None => Self::from_monomial_quotient(p.variables.clone(), p.ideal.clone()),
        }
    }

    pub fn from_monomial_quotient(
        variables: Vec<String>,
        ideal: Vec<Monomial>,
    ) -> Result<Arc<Self>, AlgebraError> {
        let nvars = variables.len();
        if ideal.iter().any(Monomial::is_one) {
            return Err(AlgebraError::ZeroQuotient);
        }
        // finiteness: every variable needs a pure power among the generators
        let mut cap = vec![0u32; nvars];
        for (v, var) in variables.iter().enumerate() {
            let pure = ideal
                .iter()
                .filter(|g| g.exps.iter().enumerate().all(|(w, &e)| w == v || e == 0))
                .map(|g| g.exps[v])
                .filter(|&e| e > 0)
                .min();
            match pure {
                Some(e) => cap[v] = e,
                None => return Err(AlgebraError::InfiniteDimensional(var.clone())),
            }
        }
        // enumerate standard monomials below the caps
        let mut basis = Vec::new();
        let mut stack = vec![0u32; nvars];
        enumerate(&mut basis, &mut stack, 0, &cap, &ideal);
        basis.sort_by(Monomial::grlex_cmp);
        let index: HashMap<Monomial, usize> =
            basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let dim = basis.len();
        let unit = index[&Monomial::one(nvars)];
        let labels = basis.iter().map(|m| m.render(&variables)).collect();

        let mut mono_prod = vec![vec![None; dim]; dim];
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let prod = basis[i].mul(&basis[j]);
                let k = if ideal.iter().any(|g| g.divides(&prod)) {
                    None
                } else {
                    Some(index[&prod])
                };
                mono_prod[i][j] = k;
                let mut coeffs = vec![F::zero(); dim];
                if let Some(k) = k {
                    coeffs[k] = F::one();
                }
                table[i][j] = coeffs;
            }
        }

        let mut alg = Algebra {
            id: NEXT_ALGEBRA_ID.fetch_add(1, AtomicOrdering::Relaxed),
            variables,
            ideal,
            basis,
            labels,
            index,
            dim,
            unit,
            table,
            mono_prod: Some(mono_prod),
            mult_ops: Vec::new(),
        };
        alg.mult_ops = alg.build_mult_ops();
        Ok(Arc::new(alg))
    }

    /// Algebra from a raw multiplication table; the table is audited for
    /// commutativity, associativity and a unit before being accepted.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<Vec<F>>>) -> Result<Arc<Self>, AlgebraError> {
        let dim = labels.len();
        if table.len() != dim
            || table.iter().any(|r| r.len() != dim || r.iter().any(|e| e.len() != dim))
        {
            return Err(AlgebraError::WrongLength { got: table.len(), want: dim });
        }
        // commutativity
        for i in 0..dim {
            for j in 0..i {
                if table[i][j] != table[j][i] {
                    return Err(AlgebraError::InvalidTable {
                        law: "commutativity",
                        indices: vec![i, j],
                    });
                }
            }
        }
        // unit
        let unit = (0..dim)
            .find(|&u| (0..dim).all(|j| is_unit_row(&table[u][j], j)))
            .ok_or(AlgebraError::NoUnit)?;

        let mut alg = Algebra {
            id: NEXT_ALGEBRA_ID.fetch_add(1, AtomicOrdering::Relaxed),
            variables: Vec::new(),
            ideal: Vec::new(),
            basis: Vec::new(),
            labels,
            index: HashMap::new(),
            dim,
            unit,
            table,
            mono_prod: None,
            mult_ops: Vec::new(),
        };
        alg.mult_ops = alg.build_mult_ops();
        // associativity on all basis triples
        for i in 0..dim {
            for j in 0..dim {
                let ij = alg.mul_basis(i, j).to_vec();
                for k in 0..dim {
                    let jk = alg.mul_basis(j, k).to_vec();
                    let lhs = alg.mul_element_raw(&ij, k);
                    let rhs = alg.mul_raw_element(i, &jk);
                    if lhs != rhs {
                        return Err(AlgebraError::InvalidTable {
                            law: "associativity",
                            indices: vec![i, j, k],
                        });
                    }
                }
            }
        }
        Ok(Arc::new(alg))
    }

    fn build_mult_ops(&self) -> Vec<Matrix<F>> {
        (0..self.dim)
            .map(|i| {
                Matrix::from_fn(self.dim, self.dim, |r, j| self.table[i][j][r].clone())
            })
            .collect()
    }

    pub fn id(&self) -> u64 {
        self.id
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn unit_index(&self) -> usize {
        self.unit
    }
    pub fn variables(&self) -> &[String] {
        &self.variables
    }
    pub fn ideal(&self) -> &[Monomial] {
        &self.ideal
    }
    pub fn basis_monomials(&self) -> &[Monomial] {
        &self.basis
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Basis-product fast path: `Some(k)` when e_i * e_j = e_k, `None` when
    /// the product is zero. Absent for table algebras.
    pub fn mono_prod(&self, i: usize, j: usize) -> Option<Option<usize>> {
        self.mono_prod.as_ref().map(|t| t[i][j])
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[F] {
        &self.table[i][j]
    }

    /// Matrix of multiplication by e_i.
    pub fn mult_op_basis(&self, i: usize) -> &Matrix<F> {
        &self.mult_ops[i]
    }

    /// Matrix of multiplication by an arbitrary element.
    pub fn mult_op(&self, a: &AlgElement<F>) -> Matrix<F> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, c) in a.coeffs.iter().enumerate() {
            if !c.is_zero() {
                m.axpy(c, &self.mult_ops[i]);
            }
        }
        m
    }

    pub fn zero(&self) -> AlgElement<F> {
        AlgElement { algebra: self.id, coeffs: vec![F::zero(); self.dim] }
    }

    pub fn one(&self) -> AlgElement<F> {
        self.basis_el(self.unit)
    }

    pub fn basis_el(&self, i: usize) -> AlgElement<F> {
        let mut coeffs = vec![F::zero(); self.dim];
        coeffs[i] = F::one();
        AlgElement { algebra: self.id, coeffs }
    }

    pub fn element(&self, coeffs: Vec<F>) -> Result<AlgElement<F>, AlgebraError> {
        if coeffs.len() != self.dim {
            return Err(AlgebraError::WrongLength { got: coeffs.len(), want: self.dim });
        }
        Ok(AlgElement { algebra: self.id, coeffs })
    }

    pub fn element_from_row(&self, row: &F::Row) -> AlgElement<F> {
        AlgElement { algebra: self.id, coeffs: row.to_vec() }
    }

    /// Class of a monomial in the quotient: a basis element or zero.
    pub fn reduce_monomial(&self, m: &Monomial) -> AlgElement<F> {
        match self.monomial_index(m) {
            Some(k) => self.basis_el(k),
            None => self.zero(),
        }
    }

    pub fn monomial_index(&self, m: &Monomial) -> Option<usize> {
        if self.ideal.iter().any(|g| g.divides(m)) {
            None
        } else {
            self.index.get(m).copied()
        }
    }

    pub fn owns(&self, el: &AlgElement<F>) -> bool {
        el.algebra == self.id && el.coeffs.len() == self.dim
    }

    fn check(&self, el: &AlgElement<F>) -> Result<(), AlgebraError> {
        if el.algebra != self.id {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(())
    }

    /// Bilinear extension of the multiplication table.
    pub fn multiply(
        &self,
        a: &AlgElement<F>,
        b: &AlgElement<F>,
    ) -> Result<AlgElement<F>, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub fn mul_unchecked(&self, a: &AlgElement<F>, b: &AlgElement<F>) -> AlgElement<F> {
        let mut out = vec![F::zero(); self.dim];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let c = ca.clone() * cb.clone();
                match self.mono_prod.as_ref().map(|t| t[i][j]) {
                    Some(Some(k)) => out[k] = out[k].clone() + c,
                    Some(None) => {}
                    None => {
                        for (k, t) in self.table[i][j].iter().enumerate() {
                            if !t.is_zero() {
                                out[k] = out[k].clone() + c.clone() * t.clone();
                            }
                        }
                    }
                }
            }
        }
        AlgElement { algebra: self.id, coeffs: out }
    }

    /// e_i * v, using the monomial fast path where available.
    pub fn mul_basis_element(&self, i: usize, v: &AlgElement<F>) -> AlgElement<F> {
        let mut out = vec![F::zero(); self.dim];
        for (j, c) in v.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match self.mono_prod.as_ref().map(|t| t[i][j]) {
                Some(Some(k)) => out[k] = out[k].clone() + c.clone(),
                Some(None) => {}
                None => {
                    for (k, t) in self.table[i][j].iter().enumerate() {
                        if !t.is_zero() {
                            out[k] = out[k].clone() + c.clone() * t.clone();
                        }
                    }
                }
            }
        }
        AlgElement { algebra: self.id, coeffs: out }
    }

    fn mul_element_raw(&self, a: &[F], k: usize) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (r, t) in self.table[i][k].iter().enumerate() {
                if !t.is_zero() {
                    out[r] = out[r].clone() + c.clone() * t.clone();
                }
            }
        }
        out
    }

    fn mul_raw_element(&self, i: usize, a: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (j, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (r, t) in self.table[i][j].iter().enumerate() {
                if !t.is_zero() {
                    out[r] = out[r].clone() + c.clone() * t.clone();
                }
            }
        }
        out
    }

    /// Ann_A(S) = {a : a s = 0 for all s in S}, the kernel of the stacked
    /// multiplication matrices.
    pub fn annihilator(&self, gens: &[AlgElement<F>]) -> Result<Subspace<F>, AlgebraError> {
        assert!(!gens.is_empty(), "annihilator needs a nonempty generating set");
        let mut stacked = self.mult_op(&gens[0]);
        for g in &gens[1..] {
            self.check(g)?;
            stacked = Matrix::stack(&stacked, &self.mult_op(g));
        }
        Ok(stacked.kernel())
    }

    pub fn render(&self, el: &AlgElement<F>) -> String {
        let mut parts = Vec::new();
        for (i, c) in el.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(self.labels[i].clone());
            } else {
                parts.push(format!("{}*{}", c, self.labels[i]));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Full commutativity/associativity/unitality audit over basis tuples.
    pub fn audit(&self) -> Result<(), AlgebraError> {
        for j in 0..self.dim {
            if !is_unit_row(&self.table[self.unit][j], j) {
                return Err(AlgebraError::InvalidTable { law: "unitality", indices: vec![j] });
            }
        }
        for i in 0..self.dim {
            for j in 0..i {
                if self.table[i][j] != self.table[j][i] {
                    return Err(AlgebraError::InvalidTable {
                        law: "commutativity",
                        indices: vec![i, j],
                    });
                }
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.table[i][j].clone();
                for k in 0..self.dim {
                    let jk = self.table[j][k].clone();
                    if self.mul_element_raw(&ij, k) != self.mul_raw_element(i, &jk) {
                        return Err(AlgebraError::InvalidTable {
                            law: "associativity",
                            indices: vec![i, j, k],
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn is_unit_row<F: Field>(row: &[F], j: usize) -> bool {
    row.iter().enumerate().all(|(k, c)| if k == j { c.is_one() } else { c.is_zero() })
}

fn enumerate(
    out: &mut Vec<Monomial>,
    stack: &mut Vec<u32>,
    v: usize,
    cap: &[u32],
    ideal: &[Monomial],
) {
    if v == cap.len() {
        let m = Monomial { exps: stack.clone() };
        if !ideal.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
        return;
    }
    for e in 0..cap[v] {
        stack[v] = e;
        enumerate(out, stack, v + 1, cap, ideal);
    }
    stack[v] = 0;
}

// ---------------------------------------------------------------------------
// Derivations
// ---------------------------------------------------------------------------

/// A k-linear derivation D of the algebra, stored as its matrix on the
/// canonical basis. Construction always verifies the Leibniz rule
/// D(ab) = a D(b) + D(a) b on all basis pairs.
#[derive(Debug, Clone)]
pub struct Derivation<F: Field> {
    algebra: u64,
    pub matrix: Matrix<F>,
    /// Images of the presentation variables, when built from them.
    pub generator_images: Option<Vec<AlgElement<F>>>,
}

impl<F: Field> Derivation<F> {
    /// Extend variable images to the whole algebra by the Leibniz rule and
    /// verify well-definedness on the ideal generators.
    ///
    /// For a standard monomial m = prod v^{a_v} the extension is
    /// D(m) = sum_v a_v (m / v) D(v); the same formula applied to each ideal
    /// generator must reduce to zero in the quotient.
    pub fn from_images(
        algebra: &Arc<Algebra<F>>,
        images: &[AlgElement<F>],
    ) -> Result<Self, AlgebraError> {
        let nvars = algebra.variables().len();
        if images.len() != nvars {
            return Err(AlgebraError::WrongLength { got: images.len(), want: nvars });
        }
        for img in images {
            if !algebra.owns(img) {
                return Err(AlgebraError::AlgebraMismatch);
            }
        }
        let leibniz_image = |m: &Monomial| -> AlgElement<F> {
            let mut acc = algebra.zero();
            for v in 0..nvars {
                let a = m.exps[v];
                if a == 0 {
                    continue;
                }
                let mut lowered = m.clone();
                lowered.exps[v] -= 1;
                let factor = algebra.reduce_monomial(&lowered);
                if factor.is_zero() {
                    continue;
                }
                let term = algebra.mul_unchecked(&factor, &images[v]);
                acc = acc.add(&term.scaled(&F::from_integer(i64::from(a))));
            }
            acc
        };
        // well-definedness: the Leibniz expansion of each ideal generator
        // must vanish in A
        for g in algebra.ideal() {
            if !leibniz_image(g).is_zero() {
                return Err(AlgebraError::IllDefined {
                    generator: g.render(algebra.variables()),
                });
            }
        }
        let dim = algebra.dim();
        let mut matrix = Matrix::zeros(dim, dim);
        for (j, m) in algebra.basis_monomials().iter().enumerate() {
            let img = leibniz_image(m);
            for (r, c) in img.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    matrix.set(r, j, c.clone());
                }
            }
        }
        let der = Derivation { algebra: algebra.id(), matrix, generator_images: Some(images.to_vec()) };
        der.leibniz_audit(algebra)?;
        Ok(der)
    }

    /// Wrap a raw matrix, verifying the Leibniz rule.
    pub fn from_matrix(algebra: &Arc<Algebra<F>>, matrix: Matrix<F>) -> Result<Self, AlgebraError> {
        if matrix.nrows() != algebra.dim() || matrix.ncols() != algebra.dim() {
            return Err(AlgebraError::WrongLength { got: matrix.nrows(), want: algebra.dim() });
        }
        let der = Derivation { algebra: algebra.id(), matrix, generator_images: None };
        der.leibniz_audit(algebra)?;
        Ok(der)
    }

    pub fn zero(algebra: &Arc<Algebra<F>>) -> Self {
        Derivation {
            algebra: algebra.id(),
            matrix: Matrix::zeros(algebra.dim(), algebra.dim()),
            generator_images: None,
        }
    }

    fn leibniz_audit(&self, algebra: &Arc<Algebra<F>>) -> Result<(), AlgebraError> {
        for i in 0..algebra.dim() {
            for j in 0..=i {
                if !self.leibniz_holds(algebra, i, j) {
                    return Err(AlgebraError::NotDerivation { i, j });
                }
            }
        }
        Ok(())
    }

    fn leibniz_holds(&self, algebra: &Arc<Algebra<F>>, i: usize, j: usize) -> bool {
        let ei = algebra.basis_el(i);
        let ej = algebra.basis_el(j);
        let prod = algebra.mul_unchecked(&ei, &ej);
        let lhs = self.apply(algebra, &prod);
        let rhs = algebra
            .mul_unchecked(&ei, &self.apply(algebra, &ej))
            .add(&algebra.mul_unchecked(&self.apply(algebra, &ei), &ej));
        lhs == rhs
    }

    pub fn apply(&self, algebra: &Arc<Algebra<F>>, a: &AlgElement<F>) -> AlgElement<F> {
        debug_assert_eq!(self.algebra, a.algebra);
        let row = self.matrix.mul_vec(&a.to_row());
        algebra.element_from_row(&row)
    }

    /// Column space of the derivation matrix.
    pub fn image(&self) -> Subspace<F> {
        self.matrix.column_space()
    }

    /// D1 o D2 - D2 o D1; always a derivation again.
    pub fn commutator(&self, other: &Derivation<F>) -> Result<Derivation<F>, AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let mut m = self.matrix.mul_mat(&other.matrix);
        let n = other.matrix.mul_mat(&self.matrix);
        m.axpy(&-F::one(), &n);
        Ok(Derivation { algebra: self.algebra, matrix: m, generator_images: None })
    }

    pub fn algebra_id(&self) -> u64 {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

impl<F: Field> fmt::Display for AlgElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // coefficients only; use Algebra::render for named output
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    type F2 = Gf<2>;

    pub(crate) fn mono(exps: &[u32]) -> Monomial {
        Monomial { exps: exps.to_vec() }
    }

    /// A = k[x,y]/<xy, x^2, y^2>
    fn example1_presentation<F: Field>() -> Presentation<F> {
        Presentation {
            variables: vec!["x".into(), "y".into()],
            ideal: vec![mono(&[1, 1]), mono(&[2, 0]), mono(&[0, 2])],
            alt_table: None,
        }
    }

    #[test]
    fn example1_basis() {
        let a = Algebra::<BigRational>::build(&example1_presentation()).unwrap();
        assert_eq!(a.dim(), 3);
        let labels: Vec<&str> = a.labels().iter().map(String::as_str).collect();
        assert_eq!(labels, ["1", "x", "y"]);
        assert_eq!(a.unit_index(), 0);
    }

    #[test]
    fn empty_variable_list_gives_dim_one() {
        let p = Presentation::<F2> { variables: vec![], ideal: vec![], alt_table: None };
        let a = Algebra::build(&p).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.labels(), &["1"]);
    }

    #[test]
    fn infinite_dimensional_detected() {
        let p = Presentation::<F2> {
            variables: vec!["x".into(), "y".into()],
            ideal: vec![mono(&[2, 0])],
            alt_table: None,
        };
        assert_eq!(
            Algebra::build(&p).unwrap_err(),
            AlgebraError::InfiniteDimensional("y".into())
        );
    }

    #[test]
    fn example1_products() {
        let a = Algebra::<F2>::build(&example1_presentation()).unwrap();
        let x = a.basis_el(1);
        let y = a.basis_el(2);
        // 1 * a = a
        assert_eq!(a.multiply(&a.one(), &x).unwrap(), x);
        // x * y = 0 (ideal)
        assert!(a.multiply(&x, &y).unwrap().is_zero());
        a.audit().unwrap();
    }

    #[test]
    fn grlex_order_is_canonical() {
        // three variables, caps 3/3/2, cross generators
        let p = Presentation::<F2> {
            variables: vec!["x".into(), "y".into(), "z".into()],
            ideal: vec![mono(&[3, 0, 0]), mono(&[0, 3, 0]), mono(&[0, 0, 2]), mono(&[1, 1, 1])],
            alt_table: None,
        };
        let a = Algebra::build(&p).unwrap();
        let labels: Vec<&str> = a.labels().iter().map(String::as_str).collect();
        assert_eq!(
            labels,
            [
                "1", "x", "y", "z", "x^2", "x*y", "x*z", "y^2", "y*z", "x^2*y", "x^2*z", "x*y^2",
                "y^2*z", "x^2*y^2"
            ]
        );
        a.audit().unwrap();
    }

    #[test]
    fn annihilators_in_example1() {
        let a = Algebra::<BigRational>::build(&example1_presentation()).unwrap();
        // Ann({1}) = 0
        assert_eq!(a.annihilator(&[a.one()]).unwrap().dim(), 0);
        // Ann({y}) = span{x, y}
        let ann = a.annihilator(&[a.basis_el(2)]).unwrap();
        assert_eq!(ann.dim(), 2);
        assert!(ann.contains(&a.basis_el(1).to_row()).unwrap());
        assert!(ann.contains(&a.basis_el(2).to_row()).unwrap());
    }

    #[test]
    fn kernel_of_unit_multiplication_is_zero_in_dim_one() {
        let p = Presentation::<F2> { variables: vec![], ideal: vec![], alt_table: None };
        let a = Algebra::build(&p).unwrap();
        assert_eq!(a.mult_op(&a.one()).kernel().dim(), 0);
    }

    #[test]
    fn example1_derivation() {
        let a = Algebra::<BigRational>::build(&example1_presentation()).unwrap();
        // E(x) = y, E(y) = 0
        let e = Derivation::from_images(&a, &[a.basis_el(2), a.zero()]).unwrap();
        assert!(e.apply(&a, &a.one()).is_zero());
        assert_eq!(e.apply(&a, &a.basis_el(1)), a.basis_el(2));
        // Im(E) = span{y}
        let im = e.image();
        assert_eq!(im.dim(), 1);
        assert!(im.contains(&a.basis_el(2).to_row()).unwrap());
        // all-zero images give the zero derivation
        let z = Derivation::from_images(&a, &[a.zero(), a.zero()]).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn ill_defined_derivation_reports_generator() {
        // In k[x]/<x^2> (char 0), D(x) = 1 violates D(x^2) = 2x * 1 != 0.
        let p = Presentation::<BigRational> {
            variables: vec!["x".into()],
            ideal: vec![mono(&[2])],
            alt_table: None,
        };
        let a = Algebra::build(&p).unwrap();
        let err = Derivation::from_images(&a, &[a.one()]).unwrap_err();
        assert_eq!(err, AlgebraError::IllDefined { generator: "x^2".into() });
    }

    #[test]
    fn commutator_of_mult_like_derivations() {
        let a = Algebra::<F2>::build(&example1_presentation()).unwrap();
        let e = Derivation::from_images(&a, &[a.basis_el(2), a.zero()]).unwrap();
        // [D, D] = 0
        assert!(e.commutator(&e).unwrap().is_zero());
    }

    #[test]
    fn table_algebra_audit() {
        let one = |k: usize| {
            let mut v = vec![F2::zero(); 2];
            v[k] = F2::one();
            v
        };
        let zero = || vec![F2::zero(); 2];

        // k[e]/(e^2 = e) with basis {1, e}: valid
        let table = vec![vec![one(0), one(1)], vec![one(1), one(1)]];
        let a = Algebra::<F2>::from_table(vec!["1".into(), "e".into()], table).unwrap();
        assert_eq!(a.unit_index(), 0);
        a.audit().unwrap();

        // a*a = a, all other products zero: commutative, associative, no unit
        let no_unit = vec![vec![one(0), zero()], vec![zero(), zero()]];
        assert_eq!(
            Algebra::<F2>::from_table(vec!["a".into(), "b".into()], no_unit).unwrap_err(),
            AlgebraError::NoUnit
        );

        // non-commutative table is rejected before anything else
        let noncomm = vec![vec![one(0), one(1)], vec![zero(), one(1)]];
        assert!(matches!(
            Algebra::<F2>::from_table(vec!["1".into(), "e".into()], noncomm).unwrap_err(),
            AlgebraError::InvalidTable { law: "commutativity", .. }
        ));
    }

    #[test]
    fn mismatched_elements_rejected() {
        let a = Algebra::<F2>::build(&example1_presentation()).unwrap();
        let b = Algebra::<F2>::build(&example1_presentation()).unwrap();
        assert_eq!(
            a.multiply(&a.one(), &b.one()).unwrap_err(),
            AlgebraError::AlgebraMismatch
        );
    }
}
