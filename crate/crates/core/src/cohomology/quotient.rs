use num_traits::{One, Signed, Zero};

use super::ring::GradedRing;
use super::CohomologyError;
use crate::forms::IntegralForm;
use crate::linalg::{dot, extend_primitive_with_inverse, Int, IntMatrix, LinalgError};

/// The quotient `V = H²/⟨f⟩` with a chosen splitting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    /// Unimodular, first column `f`; the other columns lift a basis of `V`.
    pub basis_change: IntMatrix,
    pub inverse: IntMatrix,
    /// `r × b₂`: coordinates in `V` of a class of `H²`.
    pub projection: IntMatrix,
    /// `b₂ × r`: the section `V → H²`.
    pub lift: IntMatrix,
}

impl QuotientData {
    pub fn rank(&self) -> usize {
        self.lift.cols()
    }

    pub fn project(&self, x: &[Int]) -> Vec<Int> {
        self.projection.mul_vec(x)
    }

    pub fn lift_vec(&self, v: &[Int]) -> Vec<Int> {
        self.lift.mul_vec(v)
    }

    /// Coefficient of `f` in `x = lift(project(x)) + c·f`.
    pub fn f_component(&self, x: &[Int]) -> Int {
        dot(self.inverse.row(0), x)
    }
}

/// Splits off `f`. A signed standard basis vector keeps the remaining
/// standard basis vectors in order, so the projection just drops a coordinate.
pub fn quotient_by_f(ring: &GradedRing, f: &[Int]) -> Result<QuotientData, CohomologyError> {
    let n = ring.betti(2);
    if f.len() != n {
        return Err(CohomologyError::Shape(format!("f has {} entries, expected {n}", f.len())));
    }
    let nonzero: Vec<usize> = (0..n).filter(|&i| !f[i].is_zero()).collect();
    let (basis_change, inverse) = if nonzero.len() == 1 && f[nonzero[0]].abs().is_one() {
        let k = nonzero[0];
        let mut b = IntMatrix::zeros(n, n);
        b[(k, 0)] = f[k].clone();
        for (col, i) in (0..n).filter(|&i| i != k).enumerate() {
            b[(i, col + 1)] = Int::one();
        }
        let inv = crate::linalg::inverse_unimodular(&b)?;
        (b, inv)
    } else {
        extend_primitive_with_inverse(f).map_err(|e| match e {
            LinalgError::NotPrimitive { gcd } => CohomologyError::NotPrimitive { gcd },
            other => other.into(),
        })?
    };
    let r = n - 1;
    let projection = inverse.submatrix(1..n, 0..n);
    let lift = basis_change.submatrix(0..n, 1..n);
    debug_assert_eq!(projection.rows(), r);
    Ok(QuotientData { basis_change, inverse, projection, lift })
}

/// `T[a][b] = ⟨f ∪ e_a ∪ e_b, [N]⟩` on `H²`.
pub(crate) fn f_pairing(ring: &GradedRing, f: &[Int]) -> IntMatrix {
    let n = ring.betti(2);
    let b4 = ring.betti(4);
    // W[c][b] = ⟨h_c ∪ e_b, [N]⟩ for h_c in H⁴
    let cup42 = ring.cup(4, 2);
    let mut w = IntMatrix::zeros(b4, n);
    for c in 0..b4 {
        for b in 0..n {
            w[(c, b)] = ring.evaluate(cup42.get(c, b));
        }
    }
    let mut t = IntMatrix::zeros(n, n);
    for a in 0..n {
        let fa = ring.product(2, f, 2, &crate::linalg::unit_vec(n, a));
        for b in 0..n {
            t[(a, b)] = dot(&fa, &w.column(b));
        }
    }
    t
}

/// The form `(x, y) ↦ ⟨f ∪ x ∪ y, [N]⟩` on `V`, after checking that it does
/// not depend on the lift (`⟨f ∪ f ∪ x, [N]⟩ = 0` for all `x`).
pub fn triple_form(ring: &GradedRing, f: &[Int], q: &QuotientData) -> Result<IntegralForm, CohomologyError> {
    let t = f_pairing(ring, f);
    let ff = t.transpose().mul_vec(f);
    if let Some((index, value)) = ff.iter().enumerate().find(|(_, v)| !v.is_zero()) {
        return Err(CohomologyError::IllDefined { index: index + 1, value: value.clone() });
    }
    let gram = q.lift.congruence(&t);
    Ok(IntegralForm::new(gram)?)
}

/// `⟨x ∪ y, [N]⟩` for `x ∈ H^k`, `y ∈ H^{6-k}`.
pub fn poincare_pairing(ring: &GradedRing, k: usize) -> Result<IntMatrix, CohomologyError> {
    let top = ring.dimension();
    if k > top {
        return Err(CohomologyError::Shape(format!("degree {k} exceeds the dimension {top}")));
    }
    for d in [k, top - k] {
        if !ring.torsion(d).is_empty() {
            return Err(CohomologyError::TorsionPresent { degree: d });
        }
    }
    let t = ring.cup(k, top - k);
    let (rows, cols) = (ring.betti(k), ring.betti(top - k));
    let mut m = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = ring.evaluate(t.get(i, j));
        }
    }
    Ok(m)
}
