use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Int, IntMatrix, LinalgError};

/// Result of a Smith normal form computation: `u · m · v = s`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero invariant factors d₁ | d₂ | ….
    pub fn invariant_factors(&self) -> Vec<Int> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &s[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if s[(bi, bj)].abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { u, s, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&pivot);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&pivot);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: pull an offending row into the pivot row and retry
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = Int::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, s, v }
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &IntMatrix) -> Result<Int, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Int::one());
    }
    let mut a = m.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(Int::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = val / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// True iff `det m = ±1`; the 0×0 matrix counts as unimodular.
pub fn is_unimodular(m: &IntMatrix) -> Result<bool, LinalgError> {
    Ok(determinant(m)?.abs().is_one())
}

/// Integer solution of `a · x = b`, if one exists.
pub fn solve_integer_linear(a: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Int>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch { expected: (a.rows(), 1), found: (b.len(), 1) });
    }
    let snf = smith_normal_form(a);
    Ok(solve_with_smith(&snf, b))
}

pub(crate) fn solve_with_smith(snf: &SmithForm, b: &[Int]) -> Option<Vec<Int>> {
    let c = snf.u.mul_vec(b);
    let (rows, cols) = (snf.s.rows(), snf.s.cols());
    let mut y = vec![Int::zero(); cols];
    for i in 0..rows {
        let d = if i < cols { snf.s[(i, i)].clone() } else { Int::zero() };
        if d.is_zero() {
            if !c[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = c[i].div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Inverse of a matrix with determinant ±1.
pub fn inverse_unimodular(m: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let snf = smith_normal_form(m);
    if !snf.s.is_identity() {
        return Err(LinalgError::NotInvertible);
    }
    Ok(&snf.v * &snf.u)
}

/// Basis matrix `b` with first column `f`, together with its inverse.
pub fn extend_primitive_with_inverse(f: &[Int]) -> Result<(IntMatrix, IntMatrix), LinalgError> {
    let n = f.len();
    let mut v = f.to_vec();
    let mut e = IntMatrix::identity(n);
    let mut e_inv = IntMatrix::identity(n);
    for i in 1..n {
        if v[i].is_zero() {
            continue;
        }
        let (a, b) = (v[0].clone(), v[i].clone());
        let eg = a.extended_gcd(&b);
        let (g, x, y) = (eg.gcd, eg.x, eg.y);
        let (ag, bg) = (&a / &g, &b / &g);
        e.combine_rows(0, i, &x, &y, &-&bg, &ag);
        e_inv.combine_cols(0, i, &ag, &bg, &-&y, &x);
        v[0] = g;
        v[i] = Int::zero();
    }
    if n == 0 || !v[0].abs().is_one() {
        let gcd = v.first().map(|g| g.abs()).unwrap_or_else(Int::zero);
        return Err(LinalgError::NotPrimitive { gcd });
    }
    if v[0].is_negative() {
        e.negate_row(0);
        e_inv.negate_col(0);
    }
    Ok((e_inv, e))
}

/// A unimodular matrix whose first column is the primitive vector `f`.
pub fn extend_primitive_to_basis(f: &[Int]) -> Result<IntMatrix, LinalgError> {
    extend_primitive_with_inverse(f).map(|(b, _)| b)
}
