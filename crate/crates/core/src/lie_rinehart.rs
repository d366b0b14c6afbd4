//! Lie-Rinehart structures over a Jacobi algebra.
//!
//! The canonical structure lives on the tensor square A (x) A with anchor
//! rho(a (x) b) = a Phi_b and bracket
//!
//! ```text
//! [a(x)f, b(x)g] = ab (x) {f,g} + a Phi_f(b) (x) g - b Phi_g(a) (x) f
//! ```
//!
//! Everything else here is a quotient or subquotient of it: the 1-jet
//! module (A (x) A)/I^2 with I = Ker(mu), the Kaehler differentials I/I^2,
//! the image modules h*L of the multiplication maps mu_h (with descended
//! bracket [h z, h g] = h [z, g]), and the A h (x) A construction those two
//! combine into. Modules are represented as (span, relations) pairs of
//! subspaces of a fixed ambient coordinate space, with canonical coset
//! representatives, so equality of module elements is exact.

use crate::algebra::{AlgElement, Algebra, AlgebraError};
use crate::field::{Field, Row};
use crate::jacobi::{JacobiBracket, JacobiError};
use crate::linalg::{Matrix, PreSolver, RrefBasis, Subspace};
use crate::report::{CheckScope, VerificationReport, Witness};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;
use thiserror::Error;

/// Above this module dimension, the Jacobi-identity and anchor-homomorphism
/// checks of [`LieRinehartStructure::verify`] run on the distinguished
/// generator set instead of the full k-basis.
pub const VERIFY_FULL_DIM_CAP: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RinehartError {
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("quotient condition (1) fails: anchor nonzero on Ker(mu_h); witness {witness}")]
    Condition1 { witness: String },
    #[error("quotient condition (2) fails: Ker(mu_h) is not a Lie ideal; witness ({xi}, {gamma})")]
    Condition2 { xi: String, gamma: String },
    #[error("Ah(x)A hypothesis fails: r * {{e_{i}, e_{j}}} != 0 for r = {r}")]
    HypothesisViolation { r: String, i: usize, j: usize },
    #[error("jet descent check failed: {0}")]
    DescentFailure(String),
    #[error("vector lies outside the module span")]
    OutsideSpan,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

// ---------------------------------------------------------------------------
// Tensor-square formula engine
// ---------------------------------------------------------------------------

/// Precomputed tables for evaluating the A (x) A bracket and anchor.
/// Ambient vectors index e_s (x) e_t at s*d + t.
pub struct TensorOps<F: Field> {
    algebra: Arc<Algebra<F>>,
    dim: usize,
    /// {e_i, e_j} table.
    brk: Vec<Vec<AlgElement<F>>>,
    /// Phi_{e_j}(e_s) = {e_j, e_s} + e_s * {1, e_j}.
    phi_val: Vec<Vec<AlgElement<F>>>,
    /// Anchor of the elementary tensor e_i (x) e_j as an operator on A.
    anchor_elem: Vec<Matrix<F>>,
}

impl<F: Field> TensorOps<F> {
    pub fn new(bracket: &JacobiBracket<F>) -> Arc<Self> {
        let algebra = bracket.algebra().clone();
        let d = algebra.dim();
        let unit = algebra.unit_index();
        let brk: Vec<Vec<AlgElement<F>>> = (0..d)
            .map(|i| (0..d).map(|j| bracket.basis_bracket(i, j).clone()).collect())
            .collect();
        let phi_val: Vec<Vec<AlgElement<F>>> = (0..d)
            .map(|j| {
                (0..d)
                    .map(|s| {
                        brk[j][s].add(&algebra.mul_basis_element(s, &brk[unit][j]))
                    })
                    .collect()
            })
            .collect();
        // phi matrix of e_j, then anchor_elem[(i,j)] = Mul_{e_i} . Phi_{e_j}
        let phi_mat: Vec<Matrix<F>> = (0..d)
            .map(|j| Matrix::from_fn(d, d, |r, s| phi_val[j][s].coeffs[r].clone()))
            .collect();
        let mut anchor_elem = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                anchor_elem.push(algebra.mult_op_basis(i).mul_mat(&phi_mat[j]));
            }
        }
        Arc::new(TensorOps { algebra, dim: d, brk, phi_val, anchor_elem })
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim * self.dim
    }

    /// {e_s, e_t} from the underlying Jacobi table.
    pub(crate) fn brk_val(&self, s: usize, t: usize) -> &AlgElement<F> {
        &self.brk[s][t]
    }

    #[inline]
    pub fn idx(&self, s: usize, t: usize) -> usize {
        s * self.dim + t
    }

    /// out += c * ((e_i * v) (x) e_t), allocation-free via the monomial
    /// product fast path.
    fn scatter_mul_tensor(&self, i: usize, v: &AlgElement<F>, t: usize, c: &F, out: &mut F::Row) {
        for (q, cq) in v.coeffs.iter().enumerate() {
            if cq.is_zero() {
                continue;
            }
            match self.algebra.mono_prod(i, q) {
                Some(Some(p)) => out.add_at(self.idx(p, t), &(c.clone() * cq.clone())),
                Some(None) => {}
                None => {
                    for (p, cp) in self.algebra.mul_basis(i, q).iter().enumerate() {
                        if !cp.is_zero() {
                            out.add_at(
                                self.idx(p, t),
                                &(c.clone() * cq.clone() * cp.clone()),
                            );
                        }
                    }
                }
            }
        }
    }

    /// out += c * [e_i (x) e_j, e_s (x) e_t].
    pub fn add_pair_bracket(&self, i: usize, j: usize, s: usize, t: usize, c: &F, out: &mut F::Row) {
        // (e_i e_s) (x) {e_j, e_t}
        let jt = &self.brk[j][t];
        if !jt.is_zero() {
            self.scatter_mul_tensor_swapped(i, s, jt, c, out);
        }
        // + (e_i Phi_{e_j}(e_s)) (x) e_t
        self.scatter_mul_tensor(i, &self.phi_val[j][s], t, c, out);
        // - (e_s Phi_{e_t}(e_i)) (x) e_j
        self.scatter_mul_tensor(s, &self.phi_val[t][i], j, &(-c.clone()), out);
    }

    /// out += c * ((e_i e_s) (x) v).
    fn scatter_mul_tensor_swapped(
        &self,
        i: usize,
        s: usize,
        v: &AlgElement<F>,
        c: &F,
        out: &mut F::Row,
    ) {
        match self.algebra.mono_prod(i, s) {
            Some(Some(p)) => {
                for (q, cq) in v.coeffs.iter().enumerate() {
                    if !cq.is_zero() {
                        out.add_at(self.idx(p, q), &(c.clone() * cq.clone()));
                    }
                }
            }
            Some(None) => {}
            None => {
                for (p, cp) in self.algebra.mul_basis(i, s).iter().enumerate() {
                    if cp.is_zero() {
                        continue;
                    }
                    for (q, cq) in v.coeffs.iter().enumerate() {
                        if !cq.is_zero() {
                            out.add_at(self.idx(p, q), &(c.clone() * cp.clone() * cq.clone()));
                        }
                    }
                }
            }
        }
    }

    /// Bilinear extension of the bracket to ambient vectors.
    pub fn bracket_ambient(&self, v: &F::Row, w: &F::Row) -> F::Row {
        let d = self.dim;
        let mut out = F::Row::zeros(self.ambient_dim());
        v.for_nonzero(|vi, cv: F| {
            let (i, j) = (vi / d, vi % d);
            w.for_nonzero(|wi, cw: F| {
                let (s, t) = (wi / d, wi % d);
                self.add_pair_bracket(i, j, s, t, &(cv.clone() * cw.clone()), &mut out);
            });
        });
        out
    }

    /// Anchor of an ambient vector, as an operator on A.
    pub fn anchor_ambient(&self, v: &F::Row) -> Matrix<F> {
        let d = self.dim;
        let mut m = Matrix::zeros(d, d);
        v.for_nonzero(|vi, c: F| m.axpy(&c, &self.anchor_elem[vi]));
        m
    }

    /// Ambient product (componentwise in the algebra A (x) A).
    pub fn tensor_mul(&self, v: &F::Row, w: &F::Row) -> F::Row {
        let d = self.dim;
        let mut out = F::Row::zeros(self.ambient_dim());
        v.for_nonzero(|vi, cv: F| {
            let (i, j) = (vi / d, vi % d);
            w.for_nonzero(|wi, cw: F| {
                let (s, t) = (wi / d, wi % d);
                let c = cv.clone() * cw.clone();
                match (self.algebra.mono_prod(i, s), self.algebra.mono_prod(j, t)) {
                    (Some(p), Some(q)) => {
                        if let (Some(p), Some(q)) = (p, q) {
                            out.add_at(self.idx(p, q), &c);
                        }
                    }
                    _ => {
                        let ps = self
                            .algebra
                            .mul_unchecked(&self.algebra.basis_el(i), &self.algebra.basis_el(s));
                        let qt = self
                            .algebra
                            .mul_unchecked(&self.algebra.basis_el(j), &self.algebra.basis_el(t));
                        for (p, cp) in ps.coeffs.iter().enumerate() {
                            if cp.is_zero() {
                                continue;
                            }
                            for (q, cq) in qt.coeffs.iter().enumerate() {
                                if !cq.is_zero() {
                                    out.add_at(
                                        self.idx(p, q),
                                        &(c.clone() * cp.clone() * cq.clone()),
                                    );
                                }
                            }
                        }
                    }
                }
            });
        });
        out
    }

    /// lambda(a) = a (x) 1.
    pub fn lambda(&self, a: &AlgElement<F>) -> F::Row {
        let u = self.algebra.unit_index();
        let mut out = F::Row::zeros(self.ambient_dim());
        for (s, c) in a.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.set(self.idx(s, u), c.clone());
            }
        }
        out
    }

    /// 1 (x) a.
    pub fn rho_embed(&self, a: &AlgElement<F>) -> F::Row {
        let u = self.algebra.unit_index();
        let mut out = F::Row::zeros(self.ambient_dim());
        for (t, c) in a.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.set(self.idx(u, t), c.clone());
            }
        }
        out
    }

    /// Multiplication map mu : A (x) A -> A as a d x d^2 matrix.
    pub fn mu_matrix(&self) -> Matrix<F> {
        let d = self.dim;
        let mut m = Matrix::zeros(d, d * d);
        for s in 0..d {
            for t in 0..d {
                for (r, c) in self.algebra.mul_basis(s, t).iter().enumerate() {
                    if !c.is_zero() {
                        m.set(r, self.idx(s, t), c.clone());
                    }
                }
            }
        }
        m
    }

    /// mu applied to an ambient vector.
    pub fn mu_apply(&self, v: &F::Row) -> AlgElement<F> {
        let d = self.dim;
        let mut out = self.algebra.zero();
        v.for_nonzero(|vi, c: F| {
            let (s, t) = (vi / d, vi % d);
            for (r, m) in self.algebra.mul_basis(s, t).iter().enumerate() {
                if !m.is_zero() {
                    out.coeffs[r] = out.coeffs[r].clone() + c.clone() * m.clone();
                }
            }
        });
        out
    }

    /// I = Ker(mu) and I^2, the latter spanned as the ideal generated by the
    /// pairwise products of d(e_u) = 1 (x) e_u - e_u (x) 1.
    pub fn ideal_squares(&self) -> (Subspace<F>, Subspace<F>) {
        let d = self.dim;
        let i_space = self.mu_matrix().kernel();
        let unit = self.algebra.unit_index();
        let mut core: Vec<F::Row> = Vec::new();
        for u in 0..d {
            if u == unit {
                continue;
            }
            let mut du = self.rho_embed(&self.algebra.basis_el(u));
            du.axpy(&-F::one(), &self.lambda(&self.algebra.basis_el(u)));
            for v in 0..=u {
                if v == unit {
                    continue;
                }
                let mut dv = self.rho_embed(&self.algebra.basis_el(v));
                dv.axpy(&-F::one(), &self.lambda(&self.algebra.basis_el(v)));
                core.push(self.tensor_mul(&du, &dv));
            }
        }
        let mut basis = RrefBasis::new(self.ambient_dim());
        for p in &core {
            if p.is_zero() {
                continue;
            }
            for s in 0..d {
                for t in 0..d {
                    let mut e = F::Row::zeros(self.ambient_dim());
                    e.set(self.idx(s, t), F::one());
                    basis.insert(self.tensor_mul(&e, p));
                }
            }
        }
        (i_space, Subspace::from_basis(basis))
    }
}

// ---------------------------------------------------------------------------
// A-modules as subquotients
// ---------------------------------------------------------------------------

/// A finite-dimensional A-module presented as a subquotient span/rels of an
/// ambient coordinate space, with canonical coset representatives (the RREF
/// of the reduced span). Elements are coordinate vectors over `reps`.
pub struct AModule<F: Field> {
    ambient_dim: usize,
    span: Subspace<F>,
    rels: Subspace<F>,
    reps: Vec<F::Row>,
    /// Ambient pivot column of each rep -> rep index map (usize::MAX when
    /// the column is not a rep pivot).
    pivot_to_rep: Vec<usize>,
    /// `true` when reps are exactly the ambient unit vectors.
    trivial_coords: bool,
    /// action_t[a] has row k = coordinates of e_a * rep_k.
    action_t: Vec<Matrix<F>>,
    /// Distinguished A-module generators, as coordinate vectors.
    generators: Vec<F::Row>,
}

impl<F: Field> AModule<F> {
    pub fn new(
        algebra: &Arc<Algebra<F>>,
        span: Subspace<F>,
        rels: Subspace<F>,
        ambient_act: impl Fn(usize, &F::Row) -> F::Row,
        generators_ambient: &[F::Row],
    ) -> Result<Self, RinehartError> {
        let ambient_dim = span.ambient_dim();
        if rels.ambient_dim() != ambient_dim {
            return Err(RinehartError::Shape("span/rels ambient mismatch".into()));
        }
        let mut rep_basis = RrefBasis::<F>::new(ambient_dim);
        for r in span.basis_rows() {
            rep_basis.insert(rels.reduce_vec(r));
        }
        let reps: Vec<F::Row> = rep_basis.rows().to_vec();
        let dim = reps.len();
        let trivial_coords = ambient_dim == dim
            && reps.iter().enumerate().all(|(k, r)| {
                r.leading() == Some(k) && r.get(k).is_one() && r.support().len() == 1
            });
        let mut pivot_to_rep = vec![usize::MAX; ambient_dim];
        for (k, &p) in rep_basis.pivots().iter().enumerate() {
            pivot_to_rep[p] = k;
        }

        let mut module = AModule {
            ambient_dim,
            span,
            rels,
            reps,
            pivot_to_rep,
            trivial_coords,
            action_t: Vec::new(),
            generators: Vec::new(),
        };
        let mut action_t = Vec::with_capacity(algebra.dim());
        for a in 0..algebra.dim() {
            let rows: Vec<F::Row> = (0..dim)
                .map(|k| module.coords_ambient(&ambient_act(a, &module.reps[k])))
                .collect::<Result<_, _>>()?;
            action_t.push(Matrix::from_rows(rows, dim));
        }
        module.action_t = action_t;
        module.generators = generators_ambient
            .iter()
            .map(|g| module.coords_ambient(g))
            .collect::<Result<_, _>>()?;
        Ok(module)
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn span(&self) -> &Subspace<F> {
        &self.span
    }
    pub fn rels(&self) -> &Subspace<F> {
        &self.rels
    }
    pub fn reps(&self) -> &[F::Row] {
        &self.reps
    }
    pub fn generators(&self) -> &[F::Row] {
        &self.generators
    }

    pub fn zero_el(&self) -> F::Row {
        F::Row::zeros(self.dim())
    }

    pub fn basis_coord(&self, k: usize) -> F::Row {
        let mut v = self.zero_el();
        v.set(k, F::one());
        v
    }

    /// Canonical ambient representative of a coordinate vector.
    pub fn to_ambient(&self, coords: &F::Row) -> F::Row {
        if self.trivial_coords {
            return coords.clone();
        }
        let mut out = F::Row::zeros(self.ambient_dim);
        coords.for_nonzero(|k, c: F| out.axpy(&c, &self.reps[k]));
        out
    }

    /// Coordinates of an ambient vector: reduce modulo the relations, then
    /// express in the representative basis. Errors when the vector is not
    /// in span + rels.
    ///
    /// The reps are in RREF, so the coordinate at rep k is just the entry
    /// of the reduced vector at that rep's pivot; a final reconstruction
    /// compare catches vectors outside the span.
    pub fn coords_ambient(&self, v: &F::Row) -> Result<F::Row, RinehartError> {
        let resid = self.rels.reduce_vec(v);
        if self.trivial_coords {
            return Ok(resid);
        }
        let mut coords = self.zero_el();
        resid.for_nonzero(|i, c: F| {
            let k = self.pivot_to_rep[i];
            if k != usize::MAX {
                coords.set(k, c);
            }
        });
        let mut back = F::Row::zeros(self.ambient_dim);
        coords.for_nonzero(|k, c: F| back.axpy(&c, &self.reps[k]));
        if back == resid {
            Ok(coords)
        } else {
            Err(RinehartError::OutsideSpan)
        }
    }

    /// e_a * x in coordinates.
    pub fn act_basis(&self, a: usize, x: &F::Row) -> F::Row {
        self.action_t[a].combine_rows(x)
    }

    /// Action of an arbitrary algebra element.
    pub fn act(&self, a: &AlgElement<F>, x: &F::Row) -> F::Row {
        let mut out = self.zero_el();
        for (i, c) in a.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut t = self.act_basis(i, x);
                t.scale(c);
                out.axpy(&F::one(), &t);
            }
        }
        out
    }

    /// Module invariants: act(a) . act(b) = act(a b) on all algebra basis
    /// pairs, and the A-span of the generators is the whole module.
    pub fn audit(&self, algebra: &Arc<Algebra<F>>, cap: usize) -> VerificationReport {
        let mut report = VerificationReport::with_cap("a-module", CheckScope::Full, cap);
        let d = algebra.dim();
        for a in 0..d {
            for b in 0..d {
                // row k of compose = act_a(act_b(rep_k))
                let ok = (0..self.dim()).all(|k| {
                    let ab = self.act_basis(a, &self.action_t[b].row(k).clone());
                    let direct = self.act(
                        &algebra.element_from_row(
                            &F::Row::from_slice(algebra.mul_basis(a, b)),
                        ),
                        &self.basis_coord(k),
                    );
                    ab == direct
                });
                report.record(ok, || Witness {
                    law: "action-multiplicativity".into(),
                    indices: vec![a, b],
                    detail: "act(a) . act(b) != act(a*b)".into(),
                });
            }
        }
        // A-span of the generators
        let mut span = RrefBasis::<F>::new(self.dim());
        for g in &self.generators {
            for a in 0..d {
                span.insert(self.act_basis(a, g));
            }
            span.insert(g.clone());
        }
        report.record(span.rank() == self.dim(), || Witness {
            law: "generators-span".into(),
            indices: vec![],
            detail: format!("A-span of generators has dim {} of {}", span.rank(), self.dim()),
        });
        report
    }
}

// ---------------------------------------------------------------------------
// Lie-Rinehart structures
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    TensorSquare,
    Jet,
    AhTensor,
    QuotientByH,
    Custom,
}

/// Extra context carried by Ah (x) A structures, used by the specialized
/// connection solvers.
pub struct AhData<F: Field> {
    pub h: AlgElement<F>,
    pub annihilator: Subspace<F>,
    pub bracket: JacobiBracket<F>,
}

pub(crate) struct DescendData<F: Field> {
    pub parent: Arc<LieRinehartStructure<F>>,
    /// Transpose of mu_h on parent coordinates (rows = columns of mu_h).
    pub mu_h_t: Matrix<F>,
    /// Row k = a chosen mu_h-preimage of the k-th module basis element.
    /// Any linear choice works: the descended bracket and anchor do not
    /// depend on it once the quotient conditions hold.
    pub basis_preimages: Matrix<F>,
}

impl<F: Field> DescendData<F> {
    fn preimage_of(&self, coords: &F::Row) -> F::Row {
        self.basis_preimages.combine_rows(coords)
    }
}

pub(crate) enum BracketEval<F: Field> {
    Tensor(Arc<TensorOps<F>>),
    Descended(Arc<DescendData<F>>),
    /// table[i][j] = coordinates of [e_i, e_j].
    Table(Vec<Vec<F::Row>>),
}

pub(crate) enum AnchorEval<F: Field> {
    Tensor(Arc<TensorOps<F>>),
    Descended(Arc<DescendData<F>>),
    /// Per module basis element: an operator on A.
    Table(Vec<Matrix<F>>),
}

static NEXT_STRUCTURE_ID: AtomicU64 = AtomicU64::new(1);

pub struct LieRinehartStructure<F: Field> {
    id: u64,
    algebra: Arc<Algebra<F>>,
    module: AModule<F>,
    bracket: BracketEval<F>,
    anchor: AnchorEval<F>,
    provenance: Provenance,
    ah: Option<AhData<F>>,
    verified: bool,
}

impl<F: Field> LieRinehartStructure<F> {
    pub fn id(&self) -> u64 {
        self.id
    }
    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }
    pub fn module(&self) -> &AModule<F> {
        &self.module
    }
    pub fn dim(&self) -> usize {
        self.module.dim()
    }
    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
    pub fn ah_data(&self) -> Option<&AhData<F>> {
        self.ah.as_ref()
    }
    /// The Jacobi bracket an Ah (x) A structure was built from.
    pub fn jacobi_bracket(&self) -> Option<&JacobiBracket<F>> {
        self.ah.as_ref().map(|a| &a.bracket)
    }
    pub fn is_verified(&self) -> bool {
        self.verified
    }
    pub(crate) fn tensor_ops(&self) -> Option<&Arc<TensorOps<F>>> {
        match &self.bracket {
            BracketEval::Tensor(t) => Some(t),
            _ => None,
        }
    }
    pub(crate) fn descended(&self) -> Option<&Arc<DescendData<F>>> {
        match &self.bracket {
            BracketEval::Descended(d) => Some(d),
            _ => None,
        }
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &F::Row, y: &F::Row) -> F::Row {
        match &self.bracket {
            BracketEval::Tensor(ops) => {
                let v = self.module.to_ambient(x);
                let w = self.module.to_ambient(y);
                let b = ops.bracket_ambient(&v, &w);
                self.module
                    .coords_ambient(&b)
                    .expect("tensor bracket lands in the module")
            }
            BracketEval::Descended(d) => {
                let p1 = d.preimage_of(x);
                let p2 = d.preimage_of(y);
                let w = d.parent.bracket(&p1, &p2);
                let hv = d.mu_h_t.combine_rows(&w);
                self.module.coords_ambient(&hv).expect("h * [z, g] lies in h*L")
            }
            BracketEval::Table(t) => {
                let mut out = self.module.zero_el();
                x.for_nonzero(|i, ci: F| {
                    y.for_nonzero(|j, cj: F| {
                        out.axpy(&(ci.clone() * cj.clone()), &t[i][j]);
                    });
                });
                out
            }
        }
    }

    /// Anchor of a coordinate vector, as an operator (derivation matrix)
    /// on A.
    pub fn anchor_matrix(&self, x: &F::Row) -> Matrix<F> {
        match &self.anchor {
            AnchorEval::Tensor(ops) => ops.anchor_ambient(&self.module.to_ambient(x)),
            AnchorEval::Descended(d) => d.parent.anchor_matrix(&d.preimage_of(x)),
            AnchorEval::Table(mats) => {
                let d = self.algebra.dim();
                let mut m = Matrix::zeros(d, d);
                x.for_nonzero(|i, c: F| m.axpy(&c, &mats[i]));
                m
            }
        }
    }

    pub fn anchor_apply(&self, x: &F::Row, a: &AlgElement<F>) -> AlgElement<F> {
        let m = self.anchor_matrix(x);
        self.algebra.element_from_row(&m.mul_vec(&a.to_row()))
    }

    pub fn act(&self, a: &AlgElement<F>, x: &F::Row) -> F::Row {
        self.module.act(a, x)
    }

    /// The canonical tensor-square structure (A, A (x) A).
    pub fn tensor_square(bracket: &JacobiBracket<F>) -> Result<Self, RinehartError> {
        bracket.require_valid()?;
        let ops = TensorOps::new(bracket);
        let algebra = ops.algebra().clone();
        let d = algebra.dim();
        let n = ops.ambient_dim();
        let module = AModule::new(
            &algebra,
            Subspace::full(n),
            Subspace::zero(n),
            |a, v| tensor_left_mult(&algebra, a, v),
            &(0..d)
                .map(|j| ops.rho_embed(&algebra.basis_el(j)))
                .collect::<Vec<_>>(),
        )?;
        Ok(LieRinehartStructure {
            id: NEXT_STRUCTURE_ID.fetch_add(1, AtomicOrdering::Relaxed),
            algebra,
            module,
            bracket: BracketEval::Tensor(ops.clone()),
            anchor: AnchorEval::Tensor(ops),
            provenance: Provenance::TensorSquare,
            ah: None,
            verified: false,
        })
    }

    /// Custom structure from explicit coordinate-level tables.
    pub fn from_tables(
        algebra: Arc<Algebra<F>>,
        module: AModule<F>,
        bracket_table: Vec<Vec<F::Row>>,
        anchor_mats: Vec<Matrix<F>>,
        provenance: Provenance,
    ) -> Result<Self, RinehartError> {
        let dim = module.dim();
        if bracket_table.len() != dim
            || bracket_table.iter().any(|r| r.len() != dim)
            || anchor_mats.len() != dim
        {
            return Err(RinehartError::Shape("table dimensions".into()));
        }
        Ok(LieRinehartStructure {
            id: NEXT_STRUCTURE_ID.fetch_add(1, AtomicOrdering::Relaxed),
            algebra,
            module,
            bracket: BracketEval::Table(bracket_table),
            anchor: AnchorEval::Table(anchor_mats),
            provenance,
            ah: None,
            verified: false,
        })
    }

    /// Materialize the bracket and anchor as coordinate tables (only
    /// sensible for small modules; used by the diagnostics suite).
    pub fn materialize_tables(&self) -> (Vec<Vec<F::Row>>, Vec<Matrix<F>>) {
        let dim = self.dim();
        let table: Vec<Vec<F::Row>> = (0..dim)
            .map(|i| {
                let ei = self.module.basis_coord(i);
                (0..dim).map(|j| self.bracket(&ei, &self.module.basis_coord(j))).collect()
            })
            .collect();
        let anchors: Vec<Matrix<F>> =
            (0..dim).map(|i| self.anchor_matrix(&self.module.basis_coord(i))).collect();
        (table, anchors)
    }

    /// Image quotient by mu_h: the structure (A, h*L) with bracket
    /// [h z, h g] = h [z, g] and anchor rho(h z) = rho(z), accepted only
    /// when the two lemma conditions hold (anchor vanishes on K = Ker(mu_h)
    /// and K is a Lie ideal).
    pub fn quotient_by_h(
        self: &Arc<Self>,
        h: &AlgElement<F>,
    ) -> Result<LieRinehartStructure<F>, RinehartError> {
        let algebra = self.algebra.clone();
        let dim = self.dim();
        // mu_h on module coordinates, in transposed (row k = h * e_k) form
        let mu_h_t = Matrix::from_rows(
            (0..dim).map(|k| self.module.act(h, &self.module.basis_coord(k))).collect(),
            dim,
        );
        let mu_h = mu_h_t.transpose();
        let kernel = mu_h.kernel();

        // condition (1): anchor vanishes on K
        for xi in kernel.basis_rows() {
            if !self.anchor_matrix(xi).is_zero() {
                return Err(RinehartError::Condition1 { witness: render_coords::<F>(xi) });
            }
        }
        // condition (2): h * [xi, e_g] = 0 for xi in K, e_g basis
        for xi in kernel.basis_rows() {
            for g in 0..dim {
                let b = self.bracket(xi, &self.module.basis_coord(g));
                if !self.module.act(h, &b).is_zero() {
                    return Err(RinehartError::Condition2 {
                        xi: render_coords::<F>(xi),
                        gamma: format!("e_{g}"),
                    });
                }
            }
        }

        let span = mu_h.column_space();
        let preimage = PreSolver::new(&mu_h);
        let generators: Vec<F::Row> =
            self.module.generators().iter().map(|g| mu_h_t.combine_rows(g)).collect();
        let parent_action = |a: usize, v: &F::Row| self.module.act_basis(a, v);
        let module = AModule::new(
            &algebra,
            span,
            Subspace::zero(dim),
            parent_action,
            &generators,
        )?;
        let basis_preimages = Matrix::from_rows(
            module
                .reps()
                .iter()
                .map(|r| preimage.solve(r).expect("rep lies in Im(mu_h)"))
                .collect(),
            dim,
        );
        let data = Arc::new(DescendData { parent: self.clone(), mu_h_t, basis_preimages });
        Ok(LieRinehartStructure {
            id: NEXT_STRUCTURE_ID.fetch_add(1, AtomicOrdering::Relaxed),
            algebra,
            module,
            bracket: BracketEval::Descended(data.clone()),
            anchor: AnchorEval::Descended(data),
            provenance: Provenance::QuotientByH,
            ah: None,
            verified: false,
        })
    }

    /// Verify the Lie-Rinehart axioms:
    /// (i) the bracket is alternating, (ii) Jacobi identity, (iii) the
    /// anchor is a Lie algebra map, (iv) the anchor is A-linear, (v) the
    /// Leibniz rule [xi, a z] = a [xi, z] + rho(xi)(a) z.
    ///
    /// Modules of dimension <= [`VERIFY_FULL_DIM_CAP`] get (ii) and (iii)
    /// on the full basis; larger ones on the generator set (recorded in
    /// the report scope). Sets the verified flag on success.
    pub fn verify(&mut self, witness_cap: usize) -> VerificationReport {
        let report = self.verification_report(witness_cap);
        self.verified = report.passed();
        report
    }

    pub fn verification_report(&self, witness_cap: usize) -> VerificationReport {
        let dim = self.dim();
        let full = dim <= VERIFY_FULL_DIM_CAP;
        let scope = if full { CheckScope::Full } else { CheckScope::Generators };
        let mut report = VerificationReport::with_cap("lie-rinehart", scope, witness_cap);
        let alg = &self.algebra;
        let d = alg.dim();
        let basis: Vec<F::Row> = (0..dim).map(|k| self.module.basis_coord(k)).collect();

        // Full basis-pair bracket table. Skipped for tensor-square modules,
        // whose direct evaluation is cheaper than the table would be.
        let cache_pairs = dim <= 600;
        let pair: Vec<Vec<F::Row>> = if cache_pairs {
            (0..dim)
                .map(|i| (0..dim).map(|j| self.bracket(&basis[i], &basis[j])).collect())
                .collect()
        } else {
            Vec::new()
        };
        let pair_at = |i: usize, j: usize| -> F::Row {
            if cache_pairs {
                pair[i][j].clone()
            } else {
                self.bracket(&basis[i], &basis[j])
            }
        };
        // bracket of a basis element with an arbitrary vector, through the
        // cache when it exists (the evaluators are bilinear by construction)
        let bracket_basis_vec = |i: usize, w: &F::Row| -> F::Row {
            if cache_pairs {
                let mut out = self.module.zero_el();
                w.for_nonzero(|k, c: F| out.axpy(&c, &pair[i][k]));
                out
            } else {
                self.bracket(&basis[i], w)
            }
        };
        let anchors: Vec<Matrix<F>> = basis.iter().map(|x| self.anchor_matrix(x)).collect();

        // (i) alternating on all basis pairs
        for i in 0..dim {
            for j in 0..=i {
                let ok = if i == j {
                    pair_at(i, i).is_zero()
                } else {
                    let mut s = pair_at(j, i);
                    s.axpy(&F::one(), &pair_at(i, j));
                    s.is_zero()
                };
                report.record(ok, || Witness {
                    law: "bracket-alternating".into(),
                    indices: vec![i, j],
                    detail: "[x,y] + [y,x] != 0 or [x,x] != 0".into(),
                });
            }
        }

        // (ii), (iii) quantify over the full basis below the cap, otherwise
        // over the generator set
        let quant: Vec<F::Row> =
            if full { basis.clone() } else { self.module.generators().to_vec() };

        // (ii) Jacobi identity
        for (i, x) in quant.iter().enumerate() {
            for (j, y) in quant.iter().enumerate() {
                let xy = self.bracket(x, y);
                for (k, z) in quant.iter().enumerate() {
                    let mut cyc = self.bracket(x, &self.bracket(y, z));
                    cyc.axpy(&F::one(), &self.bracket(y, &self.bracket(z, x)));
                    cyc.axpy(&F::one(), &self.bracket(z, &xy));
                    report.record(cyc.is_zero(), || Witness {
                        law: "jacobi-identity".into(),
                        indices: vec![i, j, k],
                        detail: "cyclic sum != 0".into(),
                    });
                }
            }
        }

        // (iii) anchor is a Lie algebra map into derivations
        for (i, x) in quant.iter().enumerate() {
            let ax = self.anchor_matrix(x);
            let is_der = crate::algebra::Derivation::from_matrix(alg, ax.clone()).is_ok();
            report.record(is_der, || Witness {
                law: "anchor-into-derivations".into(),
                indices: vec![i],
                detail: "rho(x) violates the Leibniz rule on A".into(),
            });
            for (j, y) in quant.iter().enumerate() {
                let ay = self.anchor_matrix(y);
                let lhs = self.anchor_matrix(&self.bracket(x, y));
                let mut comm = ax.mul_mat(&ay);
                let n = ay.mul_mat(&ax);
                comm.axpy(&-F::one(), &n);
                report.record(lhs == comm, || Witness {
                    law: "anchor-lie-homomorphism".into(),
                    indices: vec![i, j],
                    detail: "rho([x,y]) != [rho(x), rho(y)]".into(),
                });
            }
        }

        // (iv) anchor A-linearity on all (algebra basis, module basis)
        // pairs; the anchor evaluator is linear, so rho(a x) expands over
        // the action column
        for a in 0..d {
            let mul_a = alg.mult_op_basis(a);
            for (k, x) in basis.iter().enumerate() {
                let ax_col = self.module.act_basis(a, x);
                let mut lhs = Matrix::zeros(d, d);
                ax_col.for_nonzero(|m, c: F| lhs.axpy(&c, &anchors[m]));
                let rhs = mul_a.mul_mat(&anchors[k]);
                report.record(lhs == rhs, || Witness {
                    law: "anchor-a-linearity".into(),
                    indices: vec![a, k],
                    detail: "rho(a x) != a rho(x)".into(),
                });
            }
        }

        // (v) Leibniz rule [x, a y] = a [x, y] + rho(x)(a) y over all basis
        // pairs and algebra basis elements
        for (i, _) in basis.iter().enumerate() {
            for a in 0..d {
                let ea = alg.basis_el(a);
                let rho_x_a = alg.element_from_row(&anchors[i].mul_vec(&ea.to_row()));
                for (j, y) in basis.iter().enumerate() {
                    let ay = self.module.act_basis(a, y);
                    let lhs = bracket_basis_vec(i, &ay);
                    let mut rhs = self.module.act(&ea, &pair_at(i, j));
                    rhs.axpy(&F::one(), &self.module.act(&rho_x_a, y));
                    report.record(lhs == rhs, || Witness {
                        law: "leibniz-rule".into(),
                        indices: vec![i, a, j],
                        detail: "[x, a y] != a [x,y] + rho(x)(a) y".into(),
                    });
                }
            }
        }

        report
    }
}

/// Ambient action of e_a on A (x) A: multiply the left tensor factor.
fn tensor_left_mult<F: Field>(algebra: &Arc<Algebra<F>>, a: usize, v: &F::Row) -> F::Row {
    let d = algebra.dim();
    let mut out = F::Row::zeros(d * d);
    v.for_nonzero(|vi, c: F| {
        let (s, t) = (vi / d, vi % d);
        match algebra.mono_prod(a, s) {
            Some(Some(p)) => out.add_at(p * d + t, &c),
            Some(None) => {}
            None => {
                for (p, cp) in algebra.mul_basis(a, s).iter().enumerate() {
                    if !cp.is_zero() {
                        out.add_at(p * d + t, &(c.clone() * cp.clone()));
                    }
                }
            }
        }
    });
    out
}

fn render_coords<F: Field>(v: &F::Row) -> String {
    let mut parts = Vec::new();
    v.for_nonzero(|i, c: F| parts.push(format!("{c}*e_{i}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

// ---------------------------------------------------------------------------
// 1-jets and Kaehler differentials
// ---------------------------------------------------------------------------

/// Data attached to the 1-jet construction J^1(A) = (A (x) A)/I^2.
pub struct JetData<F: Field> {
    pub i_subspace: Subspace<F>,
    pub i2_subspace: Subspace<F>,
    /// j^1(e_k) in module coordinates.
    pub jet_map: Vec<F::Row>,
    pub omega: AModule<F>,
    pub(crate) ops: Arc<TensorOps<F>>,
}

impl<F: Field> JetData<F> {
    pub fn jet_of(&self, jet: &LieRinehartStructure<F>, a: &AlgElement<F>) -> F::Row {
        let mut out = jet.module().zero_el();
        for (k, c) in a.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.axpy(c, &self.jet_map[k]);
            }
        }
        out
    }

    pub fn omega_dim(&self) -> usize {
        self.omega.dim()
    }

    /// The canonical splitting J^1(A) -> A + Omega^1(A):
    /// class(v) -> (mu(v), class of v - lambda(mu(v))).
    pub fn split(
        &self,
        jet: &LieRinehartStructure<F>,
        x: &F::Row,
    ) -> Result<(AlgElement<F>, F::Row), RinehartError> {
        let v = jet.module().to_ambient(x);
        let mu = self.ops.mu_apply(&v);
        let mut diff = v;
        diff.axpy(&-F::one(), &self.ops.lambda(&mu));
        let omega_coords = self.omega.coords_ambient(&diff)?;
        Ok((mu, omega_coords))
    }

    /// Inverse of [`split`](Self::split): (c, w) -> class(lambda(c) + w).
    pub fn unsplit(
        &self,
        jet: &LieRinehartStructure<F>,
        c: &AlgElement<F>,
        omega_coords: &F::Row,
    ) -> Result<F::Row, RinehartError> {
        let mut v = self.ops.lambda(c);
        v.axpy(&F::one(), &self.omega.to_ambient(omega_coords));
        jet.module().coords_ambient(&v)
    }
}

/// Kaehler differentials Omega^1(A) = I/I^2 with d(a) = class of
/// 1 (x) a - a (x) 1.
pub fn kahler_differentials<F: Field>(
    bracket_free_algebra: &Arc<Algebra<F>>,
) -> Result<(AModule<F>, Subspace<F>, Subspace<F>), RinehartError> {
    // a bracket is not needed; build the plain tensor helpers through a
    // zero bracket
    let zero = JacobiBracket::from_vector_field(
        bracket_free_algebra.clone(),
        &crate::algebra::Derivation::zero(bracket_free_algebra),
    );
    let ops = TensorOps::new(&zero);
    let (i_space, i2_space) = ops.ideal_squares();
    let algebra = bracket_free_algebra;
    let d = algebra.dim();
    let unit = algebra.unit_index();
    let mut gens = Vec::new();
    for j in 0..d {
        if j == unit {
            continue;
        }
        let mut dj = ops.rho_embed(&algebra.basis_el(j));
        dj.axpy(&-F::one(), &ops.lambda(&algebra.basis_el(j)));
        gens.push(dj);
    }
    let module = AModule::new(
        algebra,
        i_space.clone(),
        i2_space.clone(),
        |a, v| tensor_left_mult(algebra, a, v),
        &gens,
    )?;
    Ok((module, i_space, i2_space))
}

/// The 1-jet Lie-Rinehart structure (A, J^1(A)) with anchor j^1(a) -> Phi_a
/// and bracket [j^1 f, j^1 g] = j^1({f,g}), realized by descending the
/// tensor-square formulas modulo I^2. The descent conditions are verified
/// exhaustively before the structure is returned.
pub fn jet_module<F: Field>(
    bracket: &JacobiBracket<F>,
) -> Result<(LieRinehartStructure<F>, JetData<F>), RinehartError> {
    bracket.require_valid()?;
    let ops = TensorOps::new(bracket);
    let algebra = ops.algebra().clone();
    let d = algebra.dim();
    let n = ops.ambient_dim();
    let (i_space, i2_space) = ops.ideal_squares();

    let descent = descent_report(&ops, &i2_space, crate::report::DEFAULT_WITNESS_CAP);
    if !descent.passed() {
        return Err(RinehartError::DescentFailure(descent.to_string()));
    }

    let gens: Vec<F::Row> = (0..d).map(|j| ops.rho_embed(&algebra.basis_el(j))).collect();
    let module = AModule::new(
        &algebra,
        Subspace::full(n),
        i2_space.clone(),
        |a, v| tensor_left_mult(&algebra, a, v),
        &gens,
    )?;
    let jet_map: Vec<F::Row> = (0..d)
        .map(|k| module.coords_ambient(&ops.rho_embed(&algebra.basis_el(k))))
        .collect::<Result<_, _>>()?;

    let omega = AModule::new(
        &algebra,
        i_space.clone(),
        i2_space.clone(),
        |a, v| tensor_left_mult(&algebra, a, v),
        &{
            let unit = algebra.unit_index();
            (0..d)
                .filter(|&j| j != unit)
                .map(|j| {
                    let mut dj = ops.rho_embed(&algebra.basis_el(j));
                    dj.axpy(&-F::one(), &ops.lambda(&algebra.basis_el(j)));
                    dj
                })
                .collect::<Vec<_>>()
        },
    )?;

    let jet = LieRinehartStructure {
        id: NEXT_STRUCTURE_ID.fetch_add(1, AtomicOrdering::Relaxed),
        algebra,
        module,
        bracket: BracketEval::Tensor(ops.clone()),
        anchor: AnchorEval::Tensor(ops.clone()),
        provenance: Provenance::Jet,
        ah: None,
        verified: false,
    };
    let data = JetData { i_subspace: i_space, i2_subspace: i2_space, jet_map, omega, ops };
    Ok((jet, data))
}

/// Exhaustive descent check for Theorem-1-style quotients: the tensor
/// bracket maps (A (x) A) x I^2 into I^2, and the anchor kills I^2.
pub fn jet_descent_check<F: Field>(
    bracket: &JacobiBracket<F>,
    witness_cap: usize,
) -> Result<VerificationReport, RinehartError> {
    bracket.require_valid()?;
    let ops = TensorOps::new(bracket);
    let (_, i2_space) = ops.ideal_squares();
    Ok(descent_report(&ops, &i2_space, witness_cap))
}

fn descent_report<F: Field>(
    ops: &TensorOps<F>,
    i2: &Subspace<F>,
    cap: usize,
) -> VerificationReport {
    let d = ops.algebra().dim();
    let n = ops.ambient_dim();
    let mut report = VerificationReport::with_cap("jet-descent", CheckScope::Full, cap);
    // [v, w] in I^2 for every elementary v and every I^2 basis vector w.
    // For fixed v the map w -> [v, w] is linear; build it once per v (rows
    // indexed by elementary w) and apply it to the I^2 basis by row
    // combination.
    for i in 0..d {
        for j in 0..d {
            let mut op_rows = Vec::with_capacity(n);
            for s in 0..d {
                for t in 0..d {
                    let mut out = F::Row::zeros(n);
                    ops.add_pair_bracket(i, j, s, t, &F::one(), &mut out);
                    op_rows.push(out);
                }
            }
            let op = Matrix::<F>::from_rows(op_rows, n);
            for (wk, w) in i2.basis_rows().iter().enumerate() {
                let b = op.combine_rows(w);
                report.record(i2.rref_basis().contains(&b), || Witness {
                    law: "bracket-preserves-i2".into(),
                    indices: vec![i, j, wk],
                    detail: "[e_i (x) e_j, w] leaves I^2".into(),
                });
            }
        }
    }
    // rho(w) = 0 for every I^2 basis vector
    for (wk, w) in i2.basis_rows().iter().enumerate() {
        report.record(ops.anchor_ambient(w).is_zero(), || Witness {
            law: "anchor-kills-i2".into(),
            indices: vec![wk],
            detail: "rho(w) != 0 for w in I^2".into(),
        });
    }
    report
}

// ---------------------------------------------------------------------------
// Ah (x) A
// ---------------------------------------------------------------------------

/// The structure (A, A h (x) A): the quotient of the tensor square by
/// mu_h, accepted under the hypothesis r * {.,.} = 0 for every r in
/// Ann_A({h}).
pub fn ah_tensor_module<F: Field>(
    bracket: &JacobiBracket<F>,
    h: &AlgElement<F>,
) -> Result<LieRinehartStructure<F>, RinehartError> {
    bracket.require_valid()?;
    let algebra = bracket.algebra().clone();
    let ann = algebra.annihilator(&[h.clone()])?;
    let d = algebra.dim();
    for r in ann.basis_rows() {
        let re = algebra.element_from_row(r);
        for i in 0..d {
            for j in 0..=i {
                let prod = algebra.mul_unchecked(&re, bracket.basis_bracket(i, j));
                if !prod.is_zero() {
                    return Err(RinehartError::HypothesisViolation {
                        r: algebra.render(&re),
                        i,
                        j,
                    });
                }
            }
        }
    }
    let ts = Arc::new(LieRinehartStructure::tensor_square(bracket)?);
    let mut quotient = ts.quotient_by_h(h)?;
    quotient.provenance = Provenance::AhTensor;
    quotient.ah = Some(AhData { h: h.clone(), annihilator: ann, bracket: bracket.clone() });
    Ok(quotient)
}

// ---------------------------------------------------------------------------
// (A, Der(A))
// ---------------------------------------------------------------------------

/// Subspace of End(A) (matrices flattened row-major) cut out by the
/// Leibniz rule; the space of derivations of A.
pub fn derivation_space<F: Field>(algebra: &Arc<Algebra<F>>) -> Subspace<F> {
    let d = algebra.dim();
    let idx = |r: usize, c: usize| r * d + c;
    let mut sys: Vec<F::Row> = Vec::new();
    for i in 0..d {
        for j in 0..=i {
            let prod = algebra.mul_basis(i, j).to_vec();
            for r in 0..d {
                // D(e_i e_j)_r - (e_i D(e_j))_r - (D(e_i) e_j)_r = 0
                let mut row = F::Row::zeros(d * d);
                for (k, c) in prod.iter().enumerate() {
                    if !c.is_zero() {
                        row.add_at(idx(r, k), c);
                    }
                }
                for s in 0..d {
                    // e_i * (D e_j) contributes Mul_i[r][s] * D[s][j]
                    let mi = algebra.mult_op_basis(i).get(r, s);
                    if !mi.is_zero() {
                        row.add_at(idx(s, j), &-mi);
                    }
                    let mj = algebra.mult_op_basis(j).get(r, s);
                    if !mj.is_zero() {
                        row.add_at(idx(s, i), &-mj);
                    }
                }
                sys.push(row);
            }
        }
    }
    Matrix::from_rows(sys, d * d).kernel()
}

/// The fundamental example (A, Der(A)) with the commutator bracket and the
/// identity anchor, built on explicit tables.
pub fn der_structure<F: Field>(
    algebra: &Arc<Algebra<F>>,
) -> Result<LieRinehartStructure<F>, RinehartError> {
    let d = algebra.dim();
    let der = derivation_space(algebra);
    let gens = der.basis_rows().to_vec();
    let module = AModule::new(
        algebra,
        der.clone(),
        Subspace::zero(d * d),
        |a, v| {
            // a * D = Mul_a . D on flattened matrices
            let mut out = F::Row::zeros(d * d);
            v.for_nonzero(|vi, c: F| {
                let (r, col) = (vi / d, vi % d);
                for rr in 0..d {
                    let m = algebra.mult_op_basis(a).get(rr, r);
                    if !m.is_zero() {
                        out.add_at(rr * d + col, &(m * c.clone()));
                    }
                }
            });
            out
        },
        &gens,
    )?;
    let to_matrix = |v: &F::Row| -> Matrix<F> {
        let mut m = Matrix::zeros(d, d);
        v.for_nonzero(|vi, c: F| m.set(vi / d, vi % d, c));
        m
    };
    let dim = module.dim();
    let mats: Vec<Matrix<F>> = module.reps().iter().map(&to_matrix).collect();
    let mut bracket_table = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut comm = mats[i].mul_mat(&mats[j]);
            let n = mats[j].mul_mat(&mats[i]);
            comm.axpy(&-F::one(), &n);
            let mut flat = F::Row::zeros(d * d);
            for r in 0..d {
                comm.row(r).for_nonzero(|c, v: F| flat.set(r * d + c, v));
            }
            row.push(module.coords_ambient(&flat)?);
        }
        bracket_table.push(row);
    }
    LieRinehartStructure::from_tables(
        algebra.clone(),
        module,
        bracket_table,
        mats,
        Provenance::Custom,
    )
}
