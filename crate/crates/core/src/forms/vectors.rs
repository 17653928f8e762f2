//! Vector enumeration: all lattice vectors of bounded norm for a definite
//! form (exact rational LDLᵀ bounds), and bounded-entry boxes for indefinite
//! forms.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::IntegralForm;
use crate::linalg::Int;

/// q(x) = Σ_k d_k (x_k + Σ_{i>k} l[i][k] x_i)²
struct Ldl {
    d: Vec<BigRational>,
    l: Vec<Vec<BigRational>>,
}

fn ldl(gram: &[Vec<i64>]) -> Ldl {
    let n = gram.len();
    let g = |i: usize, j: usize| BigRational::from_integer(Int::from(gram[i][j]));
    let mut d = vec![BigRational::zero(); n];
    let mut l = vec![vec![BigRational::zero(); n]; n];
    for j in 0..n {
        let mut dj = g(j, j);
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        assert!(dj.is_positive(), "form is not positive definite");
        for i in j + 1..n {
            let mut v = g(i, j);
            for k in 0..j {
                v -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = v / &dj;
        }
        d[j] = dj;
    }
    Ldl { d, l }
}

/// All nonzero vectors `x` with `q(x) = norm` for a definite form, sorted
/// lexicographically. For negative definite forms `norm` is negative.
pub fn short_vectors(form: &IntegralForm, norm: i64) -> Vec<Vec<i64>> {
    let mut gram = form.gram_i64();
    let mut target = norm;
    if form.inertia().n_minus > 0 {
        for row in gram.iter_mut() {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
        target = -norm;
    }
    let mut out = vectors_up_to(&gram, target);
    out.retain(|(_, q)| *q == target);
    let mut vs: Vec<Vec<i64>> = out.into_iter().map(|(v, _)| v).collect();
    vs.sort();
    vs
}

/// All nonzero vectors with positive definite norm at most `bound`, with norms.
pub(crate) fn vectors_up_to(gram: &[Vec<i64>], bound: i64) -> Vec<(Vec<i64>, i64)> {
    let n = gram.len();
    let mut out = Vec::new();
    if n == 0 || bound <= 0 {
        return out;
    }
    let f = ldl(gram);
    let mut x = vec![0i64; n];
    descend(&f, gram, n - 1, BigRational::from_integer(Int::from(bound)), &mut x, &mut out);
    out
}

fn descend(
    f: &Ldl,
    gram: &[Vec<i64>],
    k: usize,
    remaining: BigRational,
    x: &mut [i64],
    out: &mut Vec<(Vec<i64>, i64)>,
) {
    let n = x.len();
    let mut center = BigRational::zero();
    for i in k + 1..n {
        if x[i] != 0 {
            center -= &f.l[i][k] * BigRational::from_integer(Int::from(x[i]));
        }
    }
    let fits = |xk: i64| -> Option<BigRational> {
        let t = BigRational::from_integer(Int::from(xk)) - &center;
        let used = &f.d[k] * &t * &t;
        (used <= remaining).then(|| &remaining - used)
    };
    let start = center.floor().to_integer().to_i64().expect("coordinate bound");
    let mut visit = |xk: i64, rest: BigRational, x: &mut [i64]| {
        x[k] = xk;
        if k == 0 {
            if x.iter().any(|&c| c != 0) {
                out.push((x.to_vec(), norm_of(gram, x)));
            }
        } else {
            descend(f, gram, k - 1, rest, x, out);
        }
    };
    let mut xk = start;
    while let Some(rest) = fits(xk) {
        visit(xk, rest, x);
        xk -= 1;
    }
    let mut xk = start + 1;
    while let Some(rest) = fits(xk) {
        visit(xk, rest, x);
        xk += 1;
    }
    x[k] = 0;
}

pub(crate) fn norm_of(gram: &[Vec<i64>], x: &[i64]) -> i64 {
    let mut q = 0i64;
    for (i, row) in gram.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        for (j, g) in row.iter().enumerate() {
            q += x[i] * g * x[j];
        }
    }
    q
}

/// Nonzero vectors with entries in `[-bound, bound]` and the given norm.
/// When the full box exceeds `limit` points only vectors with at most two
/// nonzero entries are produced; the second flag reports whether the box
/// was complete.
pub(crate) fn box_vectors(gram: &[Vec<i64>], norm: i64, bound: i64, limit: u64) -> (Vec<Vec<i64>>, bool) {
    let n = gram.len();
    let side = (2 * bound + 1) as u64;
    let full = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(side)).is_some_and(|t| t <= limit);
    let mut out = Vec::new();
    if full {
        let mut x = vec![-bound; n];
        loop {
            if x.iter().any(|&c| c != 0) && norm_of(gram, &x) == norm {
                out.push(x.clone());
            }
            // odometer
            let mut i = n;
            loop {
                if i == 0 {
                    out.sort();
                    return (out, true);
                }
                i -= 1;
                if x[i] < bound {
                    x[i] += 1;
                    break;
                }
                x[i] = -bound;
            }
        }
    }
    for i in 0..n {
        for a in -bound..=bound {
            if a == 0 {
                continue;
            }
            let mut x = vec![0; n];
            x[i] = a;
            if norm_of(gram, &x) == norm {
                out.push(x.clone());
            }
            for j in i + 1..n {
                for b in -bound..=bound {
                    if b == 0 {
                        continue;
                    }
                    x[j] = b;
                    if norm_of(gram, &x) == norm {
                        out.push(x.clone());
                    }
                }
                x[j] = 0;
            }
        }
    }
    out.sort();
    (out, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::named::e8_gram;
    use crate::linalg::IntMatrix;

    #[test]
    fn e8_has_240_roots() {
        let e8 = IntegralForm::new(e8_gram()).unwrap();
        assert_eq!(short_vectors(&e8, 2).len(), 240);
        let neg = e8.negated();
        assert_eq!(short_vectors(&neg, -2).len(), 240);
    }

    #[test]
    fn standard_lattice_counts() {
        let z3 = IntegralForm::new(IntMatrix::identity(3)).unwrap();
        assert_eq!(short_vectors(&z3, 1).len(), 6);
        assert_eq!(short_vectors(&z3, 2).len(), 12);
        assert_eq!(short_vectors(&z3, 3).len(), 8);
    }

    #[test]
    fn box_enumeration_hyperbolic() {
        let h = vec![vec![0, 1], vec![1, 0]];
        let (v, full) = box_vectors(&h, 0, 1, 1000);
        assert!(full);
        assert_eq!(v, vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
    }
}
