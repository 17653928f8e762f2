//! Integral symmetric bilinear forms: invariants, classification of
//! unimodular forms, characteristic vectors, isometry and automorphism search.

pub mod named;
mod search;
mod vectors;

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{self, determinant, dot, Inertia, Int, IntMatrix, LinalgError};

pub use search::{
    automorphism_group, isometry, AutomorphismGroup, GroupOrder, IsometryOutcome, SearchBound, DEFAULT_BOUND,
};
pub use vectors::short_vectors;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("form is not unimodular (determinant {det})")]
    NotUnimodular { det: Int },
    #[error("even unimodular form with signature {signature} not divisible by 8")]
    EvenSignatureViolation { signature: i64 },
    #[error("map is not an isometry: {0}")]
    NotAnIsometry(String),
    #[error("bad form specification: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A symmetric integer Gram matrix with cached determinant, inertia and parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralForm {
    gram: IntMatrix,
    det: Int,
    inertia: Inertia,
    parity: Parity,
}

impl IntegralForm {
    pub fn new(gram: IntMatrix) -> Result<Self, FormError> {
        if !gram.is_square() {
            return Err(LinalgError::NotSquare { rows: gram.rows(), cols: gram.cols() }.into());
        }
        if !gram.is_symmetric() {
            return Err(FormError::NotSymmetric);
        }
        let det = determinant(&gram)?;
        let inertia = linalg::inertia(&gram)?;
        let parity =
            if (0..gram.rows()).all(|i| (&gram[(i, i)] % Int::from(2)).is_zero()) { Parity::Even } else { Parity::Odd };
        Ok(IntegralForm { gram, det, inertia, parity })
    }

    /// The rank-0 form.
    pub fn empty() -> Self {
        Self::new(IntMatrix::zeros(0, 0)).expect("empty form")
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn determinant(&self) -> &Int {
        &self.det
    }

    pub fn inertia(&self) -> Inertia {
        self.inertia
    }

    pub fn signature(&self) -> i64 {
        self.inertia.signature()
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs() == Int::from(1)
    }

    pub fn is_definite(&self) -> bool {
        self.rank() > 0 && self.inertia.is_definite()
    }

    pub fn is_indefinite(&self) -> bool {
        self.inertia.n_plus > 0 && self.inertia.n_minus > 0
    }

    pub fn pair(&self, x: &[Int], y: &[Int]) -> Int {
        dot(x, &self.gram.mul_vec(y))
    }

    pub fn norm(&self, x: &[Int]) -> Int {
        self.pair(x, x)
    }

    pub fn direct_sum(&self, other: &IntegralForm) -> IntegralForm {
        IntegralForm::new(self.gram.direct_sum(&other.gram)).expect("block sum of symmetric forms")
    }

    pub fn negated(&self) -> IntegralForm {
        IntegralForm::new(self.gram.neg()).expect("negation keeps symmetry")
    }

    /// The form in a new basis given by the columns of `p`: `pᵀ · gram · p`.
    pub fn transformed(&self, p: &IntMatrix) -> IntegralForm {
        IntegralForm::new(p.congruence(&self.gram)).expect("congruence keeps symmetry")
    }

    pub(crate) fn require_unimodular(&self) -> Result<(), FormError> {
        if self.is_unimodular() {
            Ok(())
        } else {
            Err(FormError::NotUnimodular { det: self.det.clone() })
        }
    }

    pub(crate) fn gram_i64(&self) -> Vec<Vec<i64>> {
        self.gram.to_i64_rows().expect("Gram entries exceed i64")
    }
}

/// Name of a unimodular isometry class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormName {
    Empty,
    /// p⟨1⟩ ⊕ q⟨−1⟩
    OddIndefinite {
        p: usize,
        q: usize,
    },
    /// a·E8 ⊕ b·H, with a < 0 meaning |a| copies of −E8
    EvenIndefinite {
        e8: i64,
        hyperbolic: usize,
    },
    /// Definite forms are presented by their own Gram matrix.
    Definite(IntMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormClass {
    pub rank: usize,
    pub signature: i64,
    pub parity: Parity,
    pub name: FormName,
}

impl FormName {
    /// (rank, signature, parity) read back from the name alone.
    pub fn invariants(&self) -> (usize, i64, Parity) {
        match self {
            FormName::Empty => (0, 0, Parity::Even),
            FormName::OddIndefinite { p, q } => (p + q, *p as i64 - *q as i64, Parity::Odd),
            FormName::EvenIndefinite { e8, hyperbolic } => {
                (8 * e8.unsigned_abs() as usize + 2 * hyperbolic, 8 * e8, Parity::Even)
            }
            FormName::Definite(g) => {
                let f = IntegralForm::new(g.clone()).expect("stored Gram is symmetric");
                (f.rank(), f.signature(), f.parity())
            }
        }
    }
}

impl fmt::Display for FormName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormName::Empty => write!(f, "Empty"),
            FormName::OddIndefinite { p, q } => write!(f, "Odd-indefinite({p},{q})"),
            FormName::EvenIndefinite { e8, hyperbolic } => {
                write!(f, "Even-indefinite({e8},{hyperbolic})")
            }
            FormName::Definite(g) => {
                let rows: Vec<String> = (0..g.rows())
                    .map(|i| g.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
                    .collect();
                write!(f, "Definite([{}])", rows.join(";"))
            }
        }
    }
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [rank {}, signature {}, {}]", self.name, self.rank, self.signature, self.parity)
    }
}

/// Classifies a unimodular form: indefinite forms by rank, signature and
/// parity; definite forms are returned with their Gram matrix.
pub fn classify_unimodular(form: &IntegralForm) -> Result<FormClass, FormError> {
    form.require_unimodular()?;
    let (rank, signature, parity) = (form.rank(), form.signature(), form.parity());
    if parity == Parity::Even && signature % 8 != 0 {
        return Err(FormError::EvenSignatureViolation { signature });
    }
    let name = if rank == 0 {
        FormName::Empty
    } else if !form.is_indefinite() {
        FormName::Definite(form.gram().clone())
    } else {
        let inertia = form.inertia();
        match parity {
            Parity::Odd => FormName::OddIndefinite { p: inertia.n_plus, q: inertia.n_minus },
            Parity::Even => FormName::EvenIndefinite {
                e8: signature / 8,
                hyperbolic: (rank - signature.unsigned_abs() as usize) / 2,
            },
        }
    };
    Ok(FormClass { rank, signature, parity, name })
}

/// The characteristic vector mod 2: the unique `v` with
/// `f(v, x) ≡ f(x, x) (mod 2)` for all `x`.
pub fn characteristic_vector(form: &IntegralForm) -> Result<Vec<u8>, FormError> {
    form.require_unimodular()?;
    let n = form.rank();
    let bit = |x: &Int| -> u8 { (x % Int::from(2)).abs().to_u8().expect("residue") };
    // augmented system G v = diag(G) over GF(2)
    let mut rows: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            let mut r: Vec<u8> = form.gram().row(i).iter().map(bit).collect();
            r.push(bit(&form.gram()[(i, i)]));
            r
        })
        .collect();
    let mut pivot_cols = Vec::with_capacity(n);
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| rows[i][c] == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..n {
            if i != r && rows[i][c] == 1 {
                let pivot_row = rows[r].clone();
                for (a, b) in rows[i].iter_mut().zip(pivot_row) {
                    *a ^= b;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    // odd determinant: full rank mod 2
    assert_eq!(r, n, "unimodular form must be nonsingular mod 2");
    let mut v = vec![0u8; n];
    for (i, &c) in pivot_cols.iter().enumerate() {
        v[c] = rows[i][n];
    }
    Ok(v)
}

/// An integer matrix `p` with `pᵀ · gram_from · p = gram_to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryMap {
    matrix: IntMatrix,
}

impl IsometryMap {
    pub fn identity(n: usize) -> Self {
        IsometryMap { matrix: IntMatrix::identity(n) }
    }

    /// Checks `pᵀ · from · p = to` and `det p = ±1` exactly before wrapping.
    pub fn verified(matrix: IntMatrix, from: &IntegralForm, to: &IntegralForm) -> Result<Self, FormError> {
        if matrix.rows() != from.rank() || matrix.cols() != to.rank() {
            return Err(FormError::NotAnIsometry(format!(
                "shape {}x{} does not match ranks {} and {}",
                matrix.rows(),
                matrix.cols(),
                from.rank(),
                to.rank()
            )));
        }
        if &matrix.congruence(from.gram()) != to.gram() {
            return Err(FormError::NotAnIsometry("Gram matrix not preserved".into()));
        }
        if determinant(&matrix)?.abs() != Int::from(1) {
            return Err(FormError::NotAnIsometry("determinant is not ±1".into()));
        }
        Ok(IsometryMap { matrix })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn compose(&self, other: &IsometryMap) -> IsometryMap {
        IsometryMap { matrix: &self.matrix * &other.matrix }
    }
}

#[cfg(test)]
mod tests {
    use super::named::{e8_gram, parse_form_spec};
    use super::*;

    fn form(rows: &[&[i64]]) -> IntegralForm {
        IntegralForm::new(IntMatrix::from_rows(rows)).unwrap()
    }

    #[test]
    fn classify_examples() {
        let h = classify_unimodular(&form(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(h.name, FormName::EvenIndefinite { e8: 0, hyperbolic: 1 });
        let odd = classify_unimodular(&form(&[&[1, 0], &[0, -1]])).unwrap();
        assert_eq!(odd.name, FormName::OddIndefinite { p: 1, q: 1 });
        let k = parse_form_spec("E8+E8+H+H+H").unwrap();
        let c = classify_unimodular(&k).unwrap();
        assert_eq!((c.rank, c.signature), (22, 16));
        assert_eq!(c.name, FormName::EvenIndefinite { e8: 2, hyperbolic: 3 });
        let k3 = parse_form_spec("-E8+-E8+H+H+H").unwrap();
        assert_eq!(classify_unimodular(&k3).unwrap().name, FormName::EvenIndefinite { e8: -2, hyperbolic: 3 });
        assert_eq!(classify_unimodular(&IntegralForm::empty()).unwrap().name, FormName::Empty);
        let e8 = classify_unimodular(&IntegralForm::new(e8_gram()).unwrap()).unwrap();
        assert!(matches!(e8.name, FormName::Definite(_)));
        assert_eq!(e8.name.invariants(), (8, 8, Parity::Even));
    }

    #[test]
    fn classify_errors() {
        assert!(matches!(classify_unimodular(&form(&[&[2]])), Err(FormError::NotUnimodular { .. })));
        assert!(matches!(IntegralForm::new(IntMatrix::from_rows(&[[1, 2], [0, 1]])), Err(FormError::NotSymmetric)));
    }

    #[test]
    fn characteristic_examples() {
        let h = form(&[&[0, 1], &[1, 0]]);
        assert_eq!(characteristic_vector(&h).unwrap(), vec![0, 0]);
        let d = form(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(characteristic_vector(&d).unwrap(), vec![1, 1, 1]);
        let m = form(&[&[1, 1], &[1, 2]]);
        let v = characteristic_vector(&m).unwrap();
        assert_eq!(v, vec![0, 1]);
        // defining congruences: f(v, e_i) ≡ f(e_i, e_i) mod 2
        let vi: Vec<Int> = v.iter().map(|&b| Int::from(b)).collect();
        for i in 0..2 {
            let ei = crate::linalg::unit_vec(2, i);
            assert_eq!((m.pair(&vi, &ei) - m.norm(&ei)) % 2, Int::zero());
        }
        assert_eq!(characteristic_vector(&IntegralForm::new(e8_gram()).unwrap()).unwrap(), vec![0; 8]);
    }

    #[test]
    fn isometry_map_verification() {
        let a = form(&[&[1, 0], &[0, 1]]);
        let b = form(&[&[1, 1], &[1, 2]]);
        let p = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
        assert!(IsometryMap::verified(p.clone(), &a, &b).is_ok());
        assert!(IsometryMap::verified(p, &a, &a).is_err());
    }
}
