//! Right connection characters on A, their curvature, and the exact
//! solvers deciding whether a Lie-Rinehart structure admits a (flat) right
//! connection — equivalently, whether its universal enveloping algebra
//! admits an antipode.
//!
//! A right connection character is a k-linear map delta: L -> A with
//!
//! ```text
//! delta(a xi) = a delta(xi) - rho(xi)(a)
//! ```
//!
//! and curvature C(xi, zeta) = -rho(xi)(delta zeta) + rho(zeta)(delta xi)
//! + delta([xi, zeta]), evaluated at 1 (the operator is A-trilinear, so
//! nothing is lost). Both conditions are linear in delta, so existence and
//! flatness are exact affine feasibility questions.
//!
//! On Ah (x) A structures the solvers use the Dee parametrization: every
//! connection character is phi(a h (x) b) = a D(b) + {a,b} - a {1,b} for a
//! map D: A -> A with r D(a) = {a, r} for all r in Ann_A({h}), which cuts
//! the unknown count from dim(L) * dim(A) to dim(A)^2. The plain
//! formulation stays available as the independent cross-check.

use crate::algebra::{AlgElement, Algebra, AlgebraError};
use crate::field::{Field, Row};
use crate::jacobi::{JacobiBracket, JacobiError};
use crate::lie_rinehart::{JetData, LieRinehartStructure, Provenance, RinehartError};
use crate::linalg::{
    solve_affine, AffineSubspace, Infeasibility, LinalgError, LinearSystem, Matrix, Subspace,
};
use crate::report::{CheckScope, VerificationReport, Witness};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConnectError {
    #[error(transparent)]
    Rinehart(#[from] RinehartError),
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("connection axiom fails: {0}")]
    AxiomViolation(String),
    #[error("the canonical jet map is not well defined: gamma does not kill I^2 (row {0})")]
    NotWellDefined(usize),
    #[error("map violates the Dee constraint r*D(a) = {{a,r}} at (r index {r}, basis {a})")]
    DeeConstraint { r: usize, a: usize },
    #[error("structure has not passed verify_lie_rinehart")]
    UnverifiedStructure,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

// ---------------------------------------------------------------------------
// Connection characters and curvature
// ---------------------------------------------------------------------------

/// A verified right connection character delta: L -> A, stored as a
/// dim(L) x dim(A) coefficient grid (row k = delta of the k-th module
/// basis element).
pub struct ConnectionCharacter<F: Field> {
    pub structure: Arc<LieRinehartStructure<F>>,
    pub matrix: Matrix<F>,
}

impl<F: Field> ConnectionCharacter<F> {
    /// Wrap a delta matrix after checking the connection axiom on all
    /// (algebra basis, module basis) pairs.
    pub fn new(
        structure: Arc<LieRinehartStructure<F>>,
        matrix: Matrix<F>,
    ) -> Result<Self, ConnectError> {
        let report = connection_axiom_check(&structure, &matrix)?;
        if !report.passed() {
            let w = &report.failures[0];
            return Err(ConnectError::AxiomViolation(format!(
                "{} at {:?}: {}",
                w.law, w.indices, w.detail
            )));
        }
        Ok(ConnectionCharacter { structure, matrix })
    }

    /// delta(x) for a module coordinate vector.
    pub fn apply(&self, x: &F::Row) -> AlgElement<F> {
        self.structure.algebra().element_from_row(&self.matrix.combine_rows(x))
    }

    /// Curvature at 1_A:
    /// C(xi, zeta) = -rho(xi)(delta zeta) + rho(zeta)(delta xi)
    ///               + delta([xi, zeta]).
    pub fn curvature(&self, xi: &F::Row, zeta: &F::Row) -> AlgElement<F> {
        let s = &self.structure;
        let d_zeta = self.apply(zeta);
        let d_xi = self.apply(xi);
        let mut out = s.anchor_apply(zeta, &d_xi).sub(&s.anchor_apply(xi, &d_zeta));
        out = out.add(&self.apply(&s.bracket(xi, zeta)));
        out
    }

    /// Zero curvature on all module basis pairs i < j.
    pub fn is_flat(&self) -> bool {
        let dim = self.structure.dim();
        let basis: Vec<F::Row> =
            (0..dim).map(|k| self.structure.module().basis_coord(k)).collect();
        for i in 0..dim {
            for j in (i + 1)..dim {
                if !self.curvature(&basis[i], &basis[j]).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Residuals delta(a xi) - a delta(xi) + rho(xi)(a) over all pairs of
/// algebra and module basis elements.
pub fn connection_axiom_check<F: Field>(
    structure: &LieRinehartStructure<F>,
    delta: &Matrix<F>,
) -> Result<VerificationReport, ConnectError> {
    let alg = structure.algebra();
    let (d, dim) = (alg.dim(), structure.dim());
    if delta.nrows() != dim || delta.ncols() != d {
        return Err(ConnectError::Shape(format!(
            "delta is {}x{}, expected {}x{}",
            delta.nrows(),
            delta.ncols(),
            dim,
            d
        )));
    }
    let mut report = VerificationReport::new("connection-axiom", CheckScope::Full);
    for (k, xi) in (0..dim).map(|k| (k, structure.module().basis_coord(k))) {
        let rho = structure.anchor_matrix(&xi);
        let delta_xi = alg.element_from_row(&delta.combine_rows(&xi));
        for a in 0..d {
            let ea = alg.basis_el(a);
            let a_xi = structure.module().act_basis(a, &xi);
            let lhs = alg.element_from_row(&delta.combine_rows(&a_xi));
            let rhs = alg
                .mul_unchecked(&ea, &delta_xi)
                .sub(&alg.element_from_row(&rho.mul_vec(&ea.to_row())));
            let residual = lhs.sub(&rhs);
            report.record(residual.is_zero(), || Witness {
                law: "connection-axiom".into(),
                indices: vec![a, k],
                detail: format!("residual = {}", alg.render(&residual)),
            });
        }
    }
    Ok(report)
}

/// The flat connection character of Theorem 3.6 on the 1-jet module:
/// phi(a j1(b)) = {a, b}. Well-definedness (gamma kills I^2) is checked
/// before the axiom check runs; a failure there signals an invalid bracket
/// upstream.
pub fn canonical_jet_connection<F: Field>(
    jet: &Arc<LieRinehartStructure<F>>,
    data: &JetData<F>,
) -> Result<ConnectionCharacter<F>, ConnectError> {
    if jet.provenance() != Provenance::Jet {
        return Err(ConnectError::Precondition("structure is not a jet module".into()));
    }
    let ops = jet.tensor_ops().expect("jet modules carry tensor ops");
    let alg = jet.algebra();
    let d = alg.dim();
    let gamma = |v: &F::Row| -> AlgElement<F> {
        let mut out = alg.zero();
        v.for_nonzero(|vi, c: F| {
            let (s, t) = (vi / d, vi % d);
            out = out.add(&ops.brk_val(s, t).scaled(&c));
        });
        out
    };
    for (k, w) in data.i2_subspace.basis_rows().iter().enumerate() {
        if !gamma(w).is_zero() {
            return Err(ConnectError::NotWellDefined(k));
        }
    }
    let rows: Vec<F::Row> = jet
        .module()
        .reps()
        .iter()
        .map(|rep| gamma(rep).to_row())
        .collect();
    ConnectionCharacter::new(jet.clone(), Matrix::from_rows(rows, d))
}

// ---------------------------------------------------------------------------
// Generic solvers
// ---------------------------------------------------------------------------

/// Unknown layout for generic delta solving: delta(basis k) coefficient c
/// sits at k * dim(A) + c.
fn delta_cols<F: Field>(structure: &LieRinehartStructure<F>) -> usize {
    structure.dim() * structure.algebra().dim()
}

fn push_axiom_rows<F: Field>(structure: &LieRinehartStructure<F>, sys: &mut LinearSystem<F>) {
    let alg = structure.algebra();
    let (d, dim) = (alg.dim(), structure.dim());
    let unit = alg.unit_index();
    for k in 0..dim {
        let xi = structure.module().basis_coord(k);
        let rho = structure.anchor_matrix(&xi);
        for a in 0..d {
            if a == unit {
                continue; // 1 * xi = xi makes the row trivial
            }
            let a_xi = structure.module().act_basis(a, &xi);
            let mul_a = alg.mult_op_basis(a);
            let rho_a = rho.mul_vec(&alg.basis_el(a).to_row());
            for r in 0..d {
                let mut row = F::Row::zeros(delta_cols(structure));
                a_xi.for_nonzero(|m, c: F| row.add_at(m * d + r, &c));
                for c in 0..d {
                    let v = mul_a.get(r, c);
                    if !v.is_zero() {
                        row.add_at(k * d + c, &(-v));
                    }
                }
                sys.push_row(row, -rho_a.get(r));
            }
        }
    }
}

fn push_curvature_rows<F: Field>(structure: &LieRinehartStructure<F>, sys: &mut LinearSystem<F>) {
    let alg = structure.algebra();
    let (d, dim) = (alg.dim(), structure.dim());
    let basis: Vec<F::Row> = (0..dim).map(|k| structure.module().basis_coord(k)).collect();
    let anchors: Vec<Matrix<F>> = basis.iter().map(|x| structure.anchor_matrix(x)).collect();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let bracket = structure.bracket(&basis[i], &basis[j]);
            for r in 0..d {
                let mut row = F::Row::zeros(delta_cols(structure));
                for c in 0..d {
                    let v = anchors[i].get(r, c);
                    if !v.is_zero() {
                        row.add_at(j * d + c, &(-v));
                    }
                    let v = anchors[j].get(r, c);
                    if !v.is_zero() {
                        row.add_at(i * d + c, &v);
                    }
                }
                bracket.for_nonzero(|m, c: F| row.add_at(m * d + r, &c));
                sys.push_row(row, F::zero());
            }
        }
    }
}

/// All right connection characters on A, by direct elimination of the
/// axiom rows over dim(L) * dim(A) unknowns. Empty iff no right connection
/// exists.
pub fn solve_connection_generic<F: Field>(
    structure: &LieRinehartStructure<F>,
) -> AffineSubspace<F> {
    let cols = delta_cols(structure);
    let mut sys = LinearSystem::new(cols);
    if cols <= 4096 {
        sys = sys.retain_rows();
    }
    push_axiom_rows(structure, &mut sys);
    sys.solve()
}

/// Flat right connection characters: axiom rows plus curvature rows over
/// basis pairs i < j. On Ah (x) A structures the Dee-specialized system is
/// solved instead and mapped back to delta space.
pub fn solve_flat_connection<F: Field>(
    structure: &Arc<LieRinehartStructure<F>>,
) -> Result<AffineSubspace<F>, ConnectError> {
    if structure.provenance() == Provenance::AhTensor {
        return solve_flat_via_dee(structure);
    }
    let cols = delta_cols(structure);
    let mut sys = LinearSystem::new(cols);
    if cols <= 4096 {
        sys = sys.retain_rows();
    }
    push_axiom_rows(structure, &mut sys);
    push_curvature_rows(structure, &mut sys);
    Ok(sys.solve())
}

// ---------------------------------------------------------------------------
// The Dee parametrization on Ah (x) A
// ---------------------------------------------------------------------------

/// A map D: A -> A satisfying the twist constraint
/// r * D(a) = {a, r} for all r in Ann_A({h}) and a in A.
pub struct DeeMap<F: Field> {
    pub matrix: Matrix<F>,
    pub h: AlgElement<F>,
}

impl<F: Field> DeeMap<F> {
    pub fn new(
        bracket: &JacobiBracket<F>,
        h: &AlgElement<F>,
        matrix: Matrix<F>,
    ) -> Result<Self, ConnectError> {
        bracket.require_valid()?;
        let alg = bracket.algebra();
        let d = alg.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(ConnectError::Shape("Dee matrix must be dim(A) x dim(A)".into()));
        }
        let ann = alg.annihilator(&[h.clone()])?;
        for (ri, r) in ann.basis_rows().iter().enumerate() {
            let re = alg.element_from_row(r);
            for a in 0..d {
                let da = alg.element_from_row(&matrix.mul_vec(&alg.basis_el(a).to_row()));
                let lhs = alg.mul_unchecked(&re, &da);
                let rhs = bracket.eval(&alg.basis_el(a), &re);
                if lhs != rhs {
                    return Err(ConnectError::DeeConstraint { r: ri, a });
                }
            }
        }
        Ok(DeeMap { matrix, h: h.clone() })
    }

    pub fn apply(&self, alg: &Arc<Algebra<F>>, a: &AlgElement<F>) -> AlgElement<F> {
        alg.element_from_row(&self.matrix.mul_vec(&a.to_row()))
    }

    /// Flattened unknown layout used by the Dee solvers: D(e_b)_q at
    /// b * dim(A) + q.
    pub fn to_flat(&self) -> F::Row {
        let d = self.matrix.ncols();
        let mut out = F::Row::zeros(d * d);
        for b in 0..d {
            for q in 0..d {
                let v = self.matrix.get(q, b);
                if !v.is_zero() {
                    out.set(b * d + q, v);
                }
            }
        }
        out
    }

    pub fn from_flat(h: &AlgElement<F>, d: usize, flat: &F::Row) -> Self {
        let mut matrix = Matrix::zeros(d, d);
        flat.for_nonzero(|i, v: F| matrix.set(i % d, i / d, v));
        DeeMap { matrix, h: h.clone() }
    }
}

fn check_ah_hypothesis<F: Field>(
    bracket: &JacobiBracket<F>,
    ann: &Subspace<F>,
) -> Result<(), ConnectError> {
    let alg = bracket.algebra();
    let d = alg.dim();
    for r in ann.basis_rows() {
        let re = alg.element_from_row(r);
        for i in 0..d {
            for j in 0..=i {
                if !alg.mul_unchecked(&re, bracket.basis_bracket(i, j)).is_zero() {
                    return Err(ConnectError::Precondition(format!(
                        "r * {{e_{i}, e_{j}}} != 0 for r = {}",
                        alg.render(&re)
                    )));
                }
            }
        }
    }
    Ok(())
}

fn push_dee_constraint_rows<F: Field>(
    bracket: &JacobiBracket<F>,
    ann: &Subspace<F>,
    sys: &mut LinearSystem<F>,
) {
    let alg = bracket.algebra();
    let d = alg.dim();
    for r in ann.basis_rows() {
        let re = alg.element_from_row(r);
        let mul_r = alg.mult_op(&re);
        for b in 0..d {
            let rhs = bracket.eval(&alg.basis_el(b), &re);
            for c in 0..d {
                let mut row = F::Row::zeros(d * d);
                for q in 0..d {
                    let v = mul_r.get(c, q);
                    if !v.is_zero() {
                        row.set(b * d + q, v);
                    }
                }
                sys.push_row(row, rhs.coeffs[c].clone());
            }
        }
    }
}

fn push_dee_curvature_rows<F: Field>(bracket: &JacobiBracket<F>, sys: &mut LinearSystem<F>) {
    let alg = bracket.algebra();
    let d = alg.dim();
    let one = alg.one();
    // operators used by the curvature formula, per basis element
    let left: Vec<Matrix<F>> = (0..d).map(|a| bracket.left_op(&alg.basis_el(a))).collect();
    let right: Vec<Matrix<F>> = (0..d).map(|b| bracket.right_op(&alg.basis_el(b))).collect();
    let mul_one_brk: Vec<Matrix<F>> = (0..d)
        .map(|a| alg.mult_op(&bracket.eval(&one, &alg.basis_el(a))))
        .collect();
    for a in 0..d {
        for b in (a + 1)..d {
            let ab = bracket.basis_bracket(a, b).clone();
            for c in 0..d {
                // C(a,b)_c = D({a,b})_c - {a, D(b)}_c - {D(a), b}_c
                //            - ({1,a} D(b))_c + (D(a) {1,b})_c = 0
                let mut row = F::Row::zeros(d * d);
                for (m, v) in ab.coeffs.iter().enumerate() {
                    if !v.is_zero() {
                        row.add_at(m * d + c, v);
                    }
                }
                for q in 0..d {
                    let v = left[a].get(c, q);
                    if !v.is_zero() {
                        row.add_at(b * d + q, &(-v));
                    }
                    let v = right[b].get(c, q);
                    if !v.is_zero() {
                        row.add_at(a * d + q, &(-v));
                    }
                    let v = mul_one_brk[a].get(c, q);
                    if !v.is_zero() {
                        row.add_at(b * d + q, &(-v));
                    }
                    let v = mul_one_brk[b].get(c, q);
                    if !v.is_zero() {
                        row.add_at(a * d + q, &v);
                    }
                }
                sys.push_row(row, F::zero());
            }
        }
    }
}

/// The affine set of all maps D: A -> A satisfying the twist constraint,
/// over dim(A)^2 unknowns. Per the affine-space remark its direction equals
/// Lin_k(A, H) with H the intersection of the annihilators of Ann_A({h}).
pub fn dee_solution_space<F: Field>(
    bracket: &JacobiBracket<F>,
    h: &AlgElement<F>,
) -> Result<AffineSubspace<F>, ConnectError> {
    bracket.require_valid()?;
    let alg = bracket.algebra();
    let ann = alg.annihilator(&[h.clone()])?;
    check_ah_hypothesis(bracket, &ann)?;
    let d = alg.dim();
    let mut sys = LinearSystem::new(d * d).retain_rows();
    push_dee_constraint_rows(bracket, &ann, &mut sys);
    Ok(sys.solve())
}

/// Constraint rows plus flatness rows in Dee space.
pub fn dee_flat_solution_space<F: Field>(
    bracket: &JacobiBracket<F>,
    h: &AlgElement<F>,
) -> Result<AffineSubspace<F>, ConnectError> {
    bracket.require_valid()?;
    let alg = bracket.algebra();
    let ann = alg.annihilator(&[h.clone()])?;
    check_ah_hypothesis(bracket, &ann)?;
    let d = alg.dim();
    let mut sys = LinearSystem::new(d * d).retain_rows();
    push_dee_constraint_rows(bracket, &ann, &mut sys);
    push_dee_curvature_rows(bracket, &mut sys);
    Ok(sys.solve())
}

/// Curvature of the connection induced by D, directly from the twist
/// formula:
/// C(a, b) = D({a,b}) - {a, D(b)} - {D(a), b} - {1,a} D(b) + D(a) {1,b}.
pub fn curvature_from_dee<F: Field>(
    bracket: &JacobiBracket<F>,
    dee: &DeeMap<F>,
    a: &AlgElement<F>,
    b: &AlgElement<F>,
) -> AlgElement<F> {
    let alg = bracket.algebra();
    let one = alg.one();
    let da = dee.apply(alg, a);
    let db = dee.apply(alg, b);
    dee.apply(alg, &bracket.eval(a, b))
        .sub(&bracket.eval(a, &db))
        .sub(&bracket.eval(&da, b))
        .sub(&alg.mul_unchecked(&bracket.eval(&one, a), &db))
        .add(&alg.mul_unchecked(&da, &bracket.eval(&one, b)))
}

/// Affine translation from Dee space to delta space on an Ah (x) A
/// structure: delta(rep_k) = sum over the preimage decomposition of rep_k
/// of a D(b) + {a,b} - a {1,b}.
pub struct DeeDeltaMap<F: Field> {
    structure: Arc<LieRinehartStructure<F>>,
    /// Chosen tensor-square preimages of the module basis reps.
    preimages: Vec<F::Row>,
}

impl<F: Field> DeeDeltaMap<F> {
    pub fn new(
        structure: &Arc<LieRinehartStructure<F>>,
        bracket: &JacobiBracket<F>,
    ) -> Result<Self, ConnectError> {
        if structure.provenance() != Provenance::AhTensor {
            return Err(ConnectError::Precondition("not an Ah (x) A structure".into()));
        }
        let _ = bracket.require_valid()?;
        let data = structure
            .descended()
            .ok_or_else(|| ConnectError::Precondition("missing descent data".into()))?;
        let dim = structure.dim();
        let preimages: Vec<F::Row> = (0..dim)
            .map(|k| {
                let mut unit = F::Row::zeros(dim);
                unit.set(k, F::one());
                data.basis_preimages.combine_rows(&unit)
            })
            .collect();
        Ok(DeeDeltaMap { structure: structure.clone(), preimages })
    }

    /// delta matrix of a concrete Dee map.
    pub fn delta_of(&self, bracket: &JacobiBracket<F>, dee: &DeeMap<F>) -> Matrix<F> {
        let alg = self.structure.algebra();
        let d = alg.dim();
        let one = alg.one();
        let rows: Vec<F::Row> = self
            .preimages
            .iter()
            .map(|pre| {
                let mut acc = alg.zero();
                pre.for_nonzero(|vi, c: F| {
                    let (s, t) = (vi / d, vi % d);
                    let es = alg.basis_el(s);
                    let et = alg.basis_el(t);
                    let term = alg
                        .mul_basis_element(s, &dee.apply(alg, &et))
                        .add(bracket.basis_bracket(s, t))
                        .sub(&alg.mul_unchecked(&es, &bracket.eval(&one, &et)));
                    acc = acc.add(&term.scaled(&c));
                });
                acc.to_row()
            })
            .collect();
        Matrix::from_rows(rows, d)
    }

    /// Push an affine subspace of Dee maps through to delta space.
    pub fn map_affine(
        &self,
        bracket: &JacobiBracket<F>,
        h: &AlgElement<F>,
        dee_space: &AffineSubspace<F>,
    ) -> AffineSubspace<F> {
        let alg = self.structure.algebra();
        let d = alg.dim();
        let dim = self.structure.dim();
        let cols = dim * d;
        let Some(part) = &dee_space.particular else {
            return AffineSubspace::empty(cols, dee_space.infeasibility.clone());
        };
        let part_map = DeeMap::from_flat(h, d, part);
        let particular = flatten_delta(&self.delta_of(bracket, &part_map));
        // linear part: delta_dir(rep) = sum over preimage terms of
        // e_s * D_dir(e_t)
        let dirs: Vec<F::Row> = dee_space
            .direction
            .basis_rows()
            .iter()
            .map(|dir| {
                let dir_map = DeeMap::from_flat(h, d, dir);
                let rows: Vec<F::Row> = self
                    .preimages
                    .iter()
                    .map(|pre| {
                        let mut acc = alg.zero();
                        pre.for_nonzero(|vi, c: F| {
                            let (s, t) = (vi / d, vi % d);
                            let term = alg
                                .mul_basis_element(s, &dir_map.apply(alg, &alg.basis_el(t)));
                            acc = acc.add(&term.scaled(&c));
                        });
                        acc.to_row()
                    })
                    .collect();
                flatten_delta(&Matrix::<F>::from_rows(rows, d))
            })
            .collect();
        let direction = Subspace::from_rows(dirs, cols);
        let particular = direction.reduce_vec(&particular);
        AffineSubspace { ambient: cols, particular: Some(particular), direction, infeasibility: None }
    }
}

fn flatten_delta<F: Field>(m: &Matrix<F>) -> F::Row {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut out = F::Row::zeros(rows * cols);
    for k in 0..rows {
        m.row(k).for_nonzero(|c, v: F| out.set(k * cols + c, v));
    }
    out
}

fn solve_flat_via_dee<F: Field>(
    structure: &Arc<LieRinehartStructure<F>>,
) -> Result<AffineSubspace<F>, ConnectError> {
    let ah = structure
        .ah_data()
        .ok_or_else(|| ConnectError::Precondition("missing Ah data".into()))?;
    let bracket = &ah.bracket;
    let dee = dee_flat_solution_space(bracket, &ah.h)?;
    let map = DeeDeltaMap::new(structure, bracket)?;
    Ok(map.map_affine(bracket, &ah.h, &dee))
}

/// The connection character phi(a h (x) b) = a D(b) + {a,b} - a {1,b}
/// induced by a valid Dee map.
pub fn connection_from_dee<F: Field>(
    structure: &Arc<LieRinehartStructure<F>>,
    bracket: &JacobiBracket<F>,
    dee: &DeeMap<F>,
) -> Result<ConnectionCharacter<F>, ConnectError> {
    let map = DeeDeltaMap::new(structure, bracket)?;
    ConnectionCharacter::new(structure.clone(), map.delta_of(bracket, dee))
}

// ---------------------------------------------------------------------------
// Obstruction certificates
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionKind {
    /// Theorem 2 part 2(a): some a with a r = {1, r} for all r must exist.
    Existence2a,
    /// Theorem 2 part 2(b): {b, S_1} must meet Im({1, .}).
    Flatness2b,
    /// The fundamental lemma: a zeta in K forces a b with a b = rho(zeta)(a).
    Fundamental,
}

/// A reproducible linear-feasibility certificate: re-solving the stored
/// system must reproduce the recorded status.
pub struct ObstructionCertificate<F: Field> {
    pub kind: ObstructionKind,
    pub obstructed: bool,
    /// Canonical solution witness when unobstructed.
    pub witness: Option<F::Row>,
    /// Full solution set of the certificate system when unobstructed.
    pub solution: Option<AffineSubspace<F>>,
    pub infeasibility: Option<Infeasibility<F>>,
    pub h: AlgElement<F>,
    pub b: Option<AlgElement<F>>,
    system: Matrix<F>,
    rhs: F::Row,
}

impl<F: Field> ObstructionCertificate<F> {
    fn from_solution(
        kind: ObstructionKind,
        h: AlgElement<F>,
        b: Option<AlgElement<F>>,
        system: Matrix<F>,
        rhs: F::Row,
        sol: AffineSubspace<F>,
    ) -> Self {
        ObstructionCertificate {
            kind,
            obstructed: sol.is_empty(),
            witness: sol.particular.clone(),
            infeasibility: sol.infeasibility.clone(),
            solution: if sol.is_empty() { None } else { Some(sol) },
            h,
            b,
            system,
            rhs,
        }
    }

    /// Re-run the stored linear system and compare against the recorded
    /// status.
    pub fn re_evaluate(&self) -> bool {
        match solve_affine(&self.system, &self.rhs) {
            Ok(sol) => sol.is_empty() == self.obstructed,
            Err(_) => false,
        }
    }

    pub fn system(&self) -> (&Matrix<F>, &F::Row) {
        (&self.system, &self.rhs)
    }
}

/// Theorem 2 part 2(a): solve a r = {1, r} over all annihilator basis
/// elements r. Obstructed means no right (A, Ah (x) A)-connection exists.
pub fn obstruction_existence<F: Field>(
    bracket: &JacobiBracket<F>,
    h: &AlgElement<F>,
) -> Result<ObstructionCertificate<F>, ConnectError> {
    bracket.require_valid()?;
    let alg = bracket.algebra();
    let ann = alg.annihilator(&[h.clone()])?;
    check_ah_hypothesis(bracket, &ann)?;
    let (system, rhs) = existence_system(bracket, &ann);
    let sol = solve_affine(&system, &rhs)?;
    Ok(ObstructionCertificate::from_solution(
        ObstructionKind::Existence2a,
        h.clone(),
        None,
        system,
        rhs,
        sol,
    ))
}

fn existence_system<F: Field>(
    bracket: &JacobiBracket<F>,
    ann: &Subspace<F>,
) -> (Matrix<F>, F::Row) {
    let alg = bracket.algebra();
    let d = alg.dim();
    let one = alg.one();
    let mut rows: Vec<F::Row> = Vec::new();
    let mut rhs_entries: Vec<F> = Vec::new();
    for r in ann.basis_rows() {
        let re = alg.element_from_row(r);
        let mul_r = alg.mult_op(&re);
        let target = bracket.eval(&one, &re);
        for c in 0..d {
            rows.push(mul_r.row(c).clone());
            rhs_entries.push(target.coeffs[c].clone());
        }
    }
    (Matrix::from_rows(rows, d), F::Row::from_slice(&rhs_entries))
}

/// S_a = {s : r s = {a, r} for all r in Ann_A({h})}.
pub fn solution_set_s<F: Field>(
    bracket: &JacobiBracket<F>,
    h: &AlgElement<F>,
    a: &AlgElement<F>,
) -> Result<AffineSubspace<F>, ConnectError> {
    bracket.require_valid()?;
    let alg = bracket.algebra();
    let ann = alg.annihilator(&[h.clone()])?;
    check_ah_hypothesis(bracket, &ann)?;
    let d = alg.dim();
    let mut sys = LinearSystem::new(d).retain_rows();
    for r in ann.basis_rows() {
        let re = alg.element_from_row(r);
        let mul_r = alg.mult_op(&re);
        let target = bracket.eval(a, &re);
        for c in 0..d {
            sys.push_row(mul_r.row(c).clone(), target.coeffs[c].clone());
        }
    }
    Ok(sys.solve())
}

/// Theorem 2 part 2(b), in the proof's linear form: for b with {1,b} = 0,
/// flatness forces some s in S_1 and c in A with {b, s} = {1, c}. The test
/// is the affine membership {b, s0 + H} meets Im({1, .}).
pub fn obstruction_flatness<F: Field>(
    bracket: &JacobiBracket<F>,
    h: &AlgElement<F>,
    b: &AlgElement<F>,
) -> Result<ObstructionCertificate<F>, ConnectError> {
    bracket.require_valid()?;
    let alg = bracket.algebra();
    let d = alg.dim();
    let one = alg.one();
    if !bracket.eval(&one, b).is_zero() {
        return Err(ConnectError::Precondition("{1, b} != 0".into()));
    }
    let s1 = solution_set_s(bracket, h, &one)?;
    let Some(s0) = &s1.particular else {
        return Err(ConnectError::Precondition("S_1 is empty".into()));
    };
    // unknowns: alpha over the direction of S_1, plus a preimage c; the
    // equation is {b, s0} = -sum alpha_i {b, h_i} + {1, c}
    let dirs = s1.direction.basis_rows();
    let one_op = bracket.left_op(&one);
    let cols = dirs.len() + d;
    let mut rows: Vec<F::Row> = Vec::new();
    let mut rhs_entries: Vec<F> = Vec::new();
    let u0 = bracket.eval(b, &alg.element_from_row(s0));
    for c in 0..d {
        let mut row = F::Row::zeros(cols);
        for (i, dir) in dirs.iter().enumerate() {
            let db = bracket.eval(b, &alg.element_from_row(dir));
            let v = -db.coeffs[c].clone();
            if !v.is_zero() {
                row.set(i, v);
            }
        }
        for q in 0..d {
            let v = one_op.get(c, q);
            if !v.is_zero() {
                row.set(dirs.len() + q, v);
            }
        }
        rows.push(row);
        rhs_entries.push(u0.coeffs[c].clone());
    }
    let system = Matrix::from_rows(rows, cols);
    let rhs = F::Row::from_slice(&rhs_entries);
    let sol = solve_affine(&system, &rhs)?;
    Ok(ObstructionCertificate::from_solution(
        ObstructionKind::Flatness2b,
        h.clone(),
        Some(b.clone()),
        system,
        rhs,
        sol,
    ))
}

/// The fundamental obstruction: given zeta in L and a in A with
/// a zeta in K = Ker(mu_h), a right connection forces a b with
/// a b = rho(zeta)(a); if none exists there is no right (A, hL)-connection.
pub fn fundamental_obstruction<F: Field>(
    structure: &LieRinehartStructure<F>,
    h: &AlgElement<F>,
    zeta: &F::Row,
    a: &AlgElement<F>,
) -> Result<ObstructionCertificate<F>, ConnectError> {
    let alg = structure.algebra();
    let a_zeta = structure.act(a, zeta);
    if !structure.act(h, &a_zeta).is_zero() {
        return Err(ConnectError::Precondition("a * zeta is not in Ker(mu_h)".into()));
    }
    let rho_zeta_a = structure.anchor_apply(zeta, a);
    let system = alg.mult_op(a);
    let rhs = rho_zeta_a.to_row();
    let sol = solve_affine(&system, &rhs)?;
    Ok(ObstructionCertificate::from_solution(
        ObstructionKind::Fundamental,
        h.clone(),
        None,
        system,
        rhs,
        sol,
    ))
}

// ---------------------------------------------------------------------------
// Antipode verdict
// ---------------------------------------------------------------------------

pub enum AntipodeAnswer<F: Field> {
    /// A flat right connection character witnesses the antipode.
    Yes(ConnectionCharacter<F>),
    No(NoAntipode<F>),
}

pub struct NoAntipode<F: Field> {
    pub infeasibility: Option<Infeasibility<F>>,
    /// Populated on Ah (x) A structures: the paper-style obstruction.
    pub obstruction: Option<ObstructionCertificate<F>>,
}

pub struct AntipodeVerdict<F: Field> {
    pub structure_id: u64,
    pub answer: AntipodeAnswer<F>,
}

impl<F: Field> AntipodeVerdict<F> {
    pub fn admits_antipode(&self) -> bool {
        matches!(self.answer, AntipodeAnswer::Yes(_))
    }
}

/// Decide whether the universal enveloping algebra of the structure admits
/// an antipode: yes iff a flat right connection character exists. The
/// witness is re-checked against the axiom and zero curvature; on
/// Ah (x) A structures with dim(A) <= 12 the Dee-specialized result is
/// cross-checked against the plain formulation.
pub fn antipode_verdict<F: Field>(
    structure: &Arc<LieRinehartStructure<F>>,
) -> Result<AntipodeVerdict<F>, ConnectError> {
    if !structure.is_verified() {
        return Err(ConnectError::UnverifiedStructure);
    }
    let alg = structure.algebra();
    let flat = solve_flat_connection(structure)?;

    if structure.provenance() == Provenance::AhTensor && alg.dim() <= 12 {
        let generic = generic_flat_feasible(structure);
        if generic != !flat.is_empty() {
            return Err(ConnectError::Inconsistency(format!(
                "Dee-specialized solver says feasible={}, generic says feasible={}",
                !flat.is_empty(),
                generic
            )));
        }
    }

    match &flat.particular {
        Some(part) => {
            let d = alg.dim();
            let dim = structure.dim();
            let mut matrix = Matrix::zeros(dim, d);
            part.for_nonzero(|i, v: F| matrix.set(i / d, i % d, v));
            let delta = ConnectionCharacter::new(structure.clone(), matrix)?;
            if !delta.is_flat() {
                return Err(ConnectError::Inconsistency(
                    "flat solver produced a non-flat witness".into(),
                ));
            }
            Ok(AntipodeVerdict {
                structure_id: structure.id(),
                answer: AntipodeAnswer::Yes(delta),
            })
        }
        None => {
            let obstruction = if structure.provenance() == Provenance::AhTensor {
                let ah = structure.ah_data().expect("ah data");
                let bracket = &ah.bracket;
                let existence = obstruction_existence(bracket, &ah.h)?;
                if existence.obstructed {
                    Some(existence)
                } else {
                    // connections exist but none is flat: find an
                    // obstructing b with {1, b} = 0
                    let mut found = None;
                    for bidx in 0..alg.dim() {
                        let b = alg.basis_el(bidx);
                        if !bracket.eval(&alg.one(), &b).is_zero() {
                            continue;
                        }
                        let cert = obstruction_flatness(bracket, &ah.h, &b)?;
                        if cert.obstructed {
                            found = Some(cert);
                            break;
                        }
                    }
                    found
                }
            } else {
                None
            };
            Ok(AntipodeVerdict {
                structure_id: structure.id(),
                answer: AntipodeAnswer::No(NoAntipode {
                    infeasibility: flat.infeasibility.clone(),
                    obstruction,
                }),
            })
        }
    }
}

/// Feasibility of the plain flat system (axiom + curvature rows over the
/// full module basis), used as the independent oracle for the Dee path.
pub fn generic_flat_feasible<F: Field>(structure: &LieRinehartStructure<F>) -> bool {
    let mut sys = LinearSystem::new(delta_cols(structure));
    push_axiom_rows(structure, &mut sys);
    push_curvature_rows(structure, &mut sys);
    !sys.solve().is_empty()
}
