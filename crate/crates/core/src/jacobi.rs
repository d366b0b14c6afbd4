//! Jacobi brackets on a finite-dimensional commutative algebra.
//!
//! A Jacobi bracket is an alternating k-bilinear Lie bracket {.,.} satisfying
//! the generalized Leibniz rule
//!
//! ```text
//! {a*b, c} = a*{b, c} + b*{a, c} - a*b*{1, c}
//! ```
//!
//! Poisson brackets are the special case {1,.} = 0. Brackets are stored as a
//! basis x basis value table plus the recipe that produced them, and carry a
//! tri-state verification flag: constructors never verify, and the operations
//! that consume a bracket demand a prior successful [`JacobiBracket::verify`].
//! That matters because the derivation-pair recipe only yields the Jacobi
//! identity under extra vanishing hypotheses.

use crate::algebra::{AlgElement, Algebra, AlgebraError, Derivation};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::report::{CheckScope, VerificationReport, Witness};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JacobiError {
    #[error("bracket has not been verified valid (state: {0:?})")]
    NotVerified(Verified),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketRecipe {
    /// {a,b} = a E(b) - E(a) b for a derivation E.
    VectorField,
    /// {a,b} = E(a) F(b) - F(a) E(b) + a E(b) - E(a) b for derivations E, F.
    DerivationPair,
    RawTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verified {
    Unchecked,
    Valid,
    Invalid,
}

#[derive(Debug, Clone)]
pub struct JacobiBracket<F: Field> {
    algebra: Arc<Algebra<F>>,
    /// table[i][j] = {e_i, e_j}.
    table: Vec<Vec<AlgElement<F>>>,
    pub recipe: BracketRecipe,
    verified: Verified,
}

impl<F: Field> JacobiBracket<F> {
    /// Bracket of a vector field: {a,b} = a E(b) - E(a) b.
    pub fn from_vector_field(algebra: Arc<Algebra<F>>, e: &Derivation<F>) -> Self {
        let dim = algebra.dim();
        let table = (0..dim)
            .map(|i| {
                let ei = algebra.basis_el(i);
                let dei = e.apply(&algebra, &ei);
                (0..dim)
                    .map(|j| {
                        let ej = algebra.basis_el(j);
                        let dej = e.apply(&algebra, &ej);
                        algebra
                            .mul_unchecked(&ei, &dej)
                            .sub(&algebra.mul_unchecked(&dei, &ej))
                    })
                    .collect()
            })
            .collect();
        JacobiBracket { algebra, table, recipe: BracketRecipe::VectorField, verified: Verified::Unchecked }
    }

    /// Bracket of a derivation pair:
    /// {a,b} = E(a) F(b) - F(a) E(b) + a E(b) - E(a) b.
    ///
    /// This formula does not satisfy the Jacobi identity in general, which is
    /// exactly why verification stays mandatory.
    pub fn from_derivation_pair(
        algebra: Arc<Algebra<F>>,
        e: &Derivation<F>,
        f: &Derivation<F>,
    ) -> Self {
        let dim = algebra.dim();
        let table = (0..dim)
            .map(|i| {
                let ei = algebra.basis_el(i);
                let dei = e.apply(&algebra, &ei);
                let fei = f.apply(&algebra, &ei);
                (0..dim)
                    .map(|j| {
                        let ej = algebra.basis_el(j);
                        let dej = e.apply(&algebra, &ej);
                        let fej = f.apply(&algebra, &ej);
                        algebra
                            .mul_unchecked(&dei, &fej)
                            .sub(&algebra.mul_unchecked(&fei, &dej))
                            .add(&algebra.mul_unchecked(&ei, &dej))
                            .sub(&algebra.mul_unchecked(&dei, &ej))
                    })
                    .collect()
            })
            .collect();
        JacobiBracket {
            algebra,
            table,
            recipe: BracketRecipe::DerivationPair,
            verified: Verified::Unchecked,
        }
    }

    /// Bracket from a raw value table {e_i, e_j}.
    pub fn from_table(
        algebra: Arc<Algebra<F>>,
        table: Vec<Vec<AlgElement<F>>>,
    ) -> Result<Self, AlgebraError> {
        let dim = algebra.dim();
        if table.len() != dim || table.iter().any(|r| r.len() != dim) {
            return Err(AlgebraError::WrongLength { got: table.len(), want: dim });
        }
        for row in &table {
            for v in row {
                if !algebra.owns(v) {
                    return Err(AlgebraError::AlgebraMismatch);
                }
            }
        }
        Ok(JacobiBracket { algebra, table, recipe: BracketRecipe::RawTable, verified: Verified::Unchecked })
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }

    pub fn verified(&self) -> Verified {
        self.verified
    }

    pub fn is_valid(&self) -> bool {
        self.verified == Verified::Valid
    }

    pub fn require_valid(&self) -> Result<(), JacobiError> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(JacobiError::NotVerified(self.verified))
        }
    }

    /// Table entry {e_i, e_j}.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &AlgElement<F> {
        &self.table[i][j]
    }

    /// Bilinear extension of the table.
    pub fn eval(&self, a: &AlgElement<F>, b: &AlgElement<F>) -> AlgElement<F> {
        let mut out = self.algebra.zero();
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                out = out.add(&self.table[i][j].scaled(&(ca.clone() * cb.clone())));
            }
        }
        out
    }

    /// {1, b}.
    pub fn bracket_with_one(&self, b: &AlgElement<F>) -> AlgElement<F> {
        self.eval(&self.algebra.one(), b)
    }

    /// Matrix of the operator {a, .}.
    pub fn left_op(&self, a: &AlgElement<F>) -> Matrix<F> {
        let dim = self.algebra.dim();
        Matrix::from_fn(dim, dim, |r, j| {
            let mut acc = F::zero();
            for (i, c) in a.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc + c.clone() * self.table[i][j].coeffs[r].clone();
                }
            }
            acc
        })
    }

    /// Matrix of the operator {., b}.
    pub fn right_op(&self, b: &AlgElement<F>) -> Matrix<F> {
        let dim = self.algebra.dim();
        Matrix::from_fn(dim, dim, |r, i| {
            let mut acc = F::zero();
            for (j, c) in b.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc + c.clone() * self.table[i][j].coeffs[r].clone();
                }
            }
            acc
        })
    }

    /// true iff {1, e_i} = 0 for every basis element, i.e. the bracket is
    /// Poisson.
    pub fn is_poisson(&self) -> bool {
        let u = self.algebra.unit_index();
        self.table[u].iter().all(AlgElement::is_zero)
    }

    /// Check alternation, the Jacobi identity and the generalized Leibniz
    /// rule on all basis tuples; sets the verification flag.
    pub fn verify(&mut self, witness_cap: usize) -> VerificationReport {
        let report = self.verification_report(witness_cap);
        self.verified = if report.passed() { Verified::Valid } else { Verified::Invalid };
        report
    }

    /// The checks behind [`verify`](Self::verify), without mutating the flag.
    pub fn verification_report(&self, witness_cap: usize) -> VerificationReport {
        let alg = &self.algebra;
        let dim = alg.dim();
        let mut report =
            VerificationReport::with_cap("jacobi-bracket", CheckScope::Full, witness_cap);

        // alternating: zero diagonal and antisymmetric table
        for i in 0..dim {
            report.record(self.table[i][i].is_zero(), || Witness {
                law: "alternating-diagonal".into(),
                indices: vec![i, i],
                detail: format!("{{e_i, e_i}} = {}", alg.render(&self.table[i][i])),
            });
            for j in 0..i {
                let sum = self.table[i][j].add(&self.table[j][i]);
                report.record(sum.is_zero(), || Witness {
                    law: "alternating-antisymmetry".into(),
                    indices: vec![i, j],
                    detail: format!("{{e_i, e_j}} + {{e_j, e_i}} = {}", alg.render(&sum)),
                });
            }
        }

        // Jacobi identity on all basis triples
        for i in 0..dim {
            let ei = alg.basis_el(i);
            for j in 0..dim {
                let ej = alg.basis_el(j);
                for k in 0..dim {
                    let ek = alg.basis_el(k);
                    let cyc = self
                        .eval(&ei, &self.table[j][k])
                        .add(&self.eval(&ej, &self.eval(&ek, &ei)))
                        .add(&self.eval(&ek, &self.table[i][j]));
                    report.record(cyc.is_zero(), || Witness {
                        law: "jacobi-identity".into(),
                        indices: vec![i, j, k],
                        detail: format!("cyclic sum = {}", alg.render(&cyc)),
                    });
                }
            }
        }

        // generalized Leibniz rule on all basis triples
        let one = alg.one();
        for i in 0..dim {
            let ei = alg.basis_el(i);
            for j in 0..dim {
                let ej = alg.basis_el(j);
                let prod = alg.mul_unchecked(&ei, &ej);
                for k in 0..dim {
                    let ek = alg.basis_el(k);
                    let lhs = self.eval(&prod, &ek);
                    let rhs = alg
                        .mul_unchecked(&ei, &self.table[j][k])
                        .add(&alg.mul_unchecked(&ej, &self.table[i][k]))
                        .sub(&alg.mul_unchecked(&prod, &self.eval(&one, &ek)));
                    let residual = lhs.sub(&rhs);
                    report.record(residual.is_zero(), || Witness {
                        law: "generalized-leibniz".into(),
                        indices: vec![i, j, k],
                        detail: format!("residual = {}", alg.render(&residual)),
                    });
                }
            }
        }

        report
    }

    /// Hamiltonian derivation of `a`: Phi_a(c) = {a, c} + c * {1, a}.
    /// Demands a verified bracket; the result is audited as a derivation.
    pub fn hamiltonian(&self, a: &AlgElement<F>) -> Result<Derivation<F>, JacobiError> {
        self.require_valid()?;
        let m = self.hamiltonian_matrix(a);
        Ok(Derivation::from_matrix(&self.algebra, m)?)
    }

    /// Matrix of Phi_a without the validity gate (used internally by the
    /// verifier itself and by the diagnostic suite).
    pub fn hamiltonian_matrix(&self, a: &AlgElement<F>) -> Matrix<F> {
        let mut m = self.left_op(a);
        let one_a = self.bracket_with_one(a);
        m.axpy(&F::one(), &self.algebra.mult_op(&one_a));
        m
    }

    /// Check that Phi is a Lie algebra homomorphism into derivations:
    /// each Phi_{e_i} satisfies Leibniz, and Phi_{{a,b}} = [Phi_a, Phi_b]
    /// on all basis pairs.
    ///
    /// This is a diagnostic: it runs on unverified brackets too, since on a
    /// bracket that passed [`verify`](Self::verify) the homomorphism property
    /// is a theorem and the check could never fail.
    pub fn verify_hamiltonian_hom(&self, witness_cap: usize) -> VerificationReport {
        let alg = &self.algebra;
        let dim = alg.dim();
        let mut report =
            VerificationReport::with_cap("hamiltonian-hom", CheckScope::Full, witness_cap);
        let phis: Vec<Matrix<F>> =
            (0..dim).map(|i| self.hamiltonian_matrix(&alg.basis_el(i))).collect();

        for (i, phi) in phis.iter().enumerate() {
            let leibniz_ok = (0..dim).all(|a| {
                (0..=a).all(|b| {
                    let ea = alg.basis_el(a);
                    let eb = alg.basis_el(b);
                    let prod = alg.mul_unchecked(&ea, &eb);
                    let lhs = alg.element_from_row(&phi.mul_vec(&prod.to_row()));
                    let rhs = alg
                        .mul_unchecked(&ea, &alg.element_from_row(&phi.mul_vec(&eb.to_row())))
                        .add(&alg.mul_unchecked(
                            &alg.element_from_row(&phi.mul_vec(&ea.to_row())),
                            &eb,
                        ));
                    lhs == rhs
                })
            });
            report.record(leibniz_ok, || Witness {
                law: "phi-is-derivation".into(),
                indices: vec![i],
                detail: "Phi_{e_i} violates the Leibniz rule".into(),
            });
        }

        for i in 0..dim {
            for j in 0..dim {
                let phi_bracket = self.hamiltonian_matrix(&self.table[i][j]);
                let mut comm = phis[i].mul_mat(&phis[j]);
                let n = phis[j].mul_mat(&phis[i]);
                comm.axpy(&-F::one(), &n);
                report.record(phi_bracket == comm, || Witness {
                    law: "phi-lie-homomorphism".into(),
                    indices: vec![i, j],
                    detail: "Phi_{{e_i,e_j}} != [Phi_{e_i}, Phi_{e_j}]".into(),
                });
            }
        }

        report
    }
}
