use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{IntMatrix, LinalgError};

/// Sylvester inertia of a real symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn dimension(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    pub fn is_definite(&self) -> bool {
        self.n_zero == 0 && (self.n_plus == 0 || self.n_minus == 0)
    }
}

/// Inertia by exact rational symmetric elimination, pivoting on a nonzero
/// diagonal entry when one exists and on a 2×2 block `[[0, a], [a, 0]]`
/// otherwise.
pub fn inertia(g: &IntMatrix) -> Result<Inertia, LinalgError> {
    if !g.is_square() {
        return Err(LinalgError::NotSquare { rows: g.rows(), cols: g.cols() });
    }
    if !g.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let n = g.rows();
    let mut a: Vec<Vec<BigRational>> =
        (0..n).map(|i| g.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut out = Inertia { n_plus: 0, n_minus: 0, n_zero: 0 };

    while !a.is_empty() {
        let m = a.len();
        if let Some(p) = (0..m).find(|&i| !a[i][i].is_zero()) {
            let d = a[p][p].clone();
            if d.is_positive() {
                out.n_plus += 1;
            } else {
                out.n_minus += 1;
            }
            let rest: Vec<usize> = (0..m).filter(|&i| i != p).collect();
            let next =
                rest.iter().map(|&i| rest.iter().map(|&j| &a[i][j] - &a[i][p] * &a[p][j] / &d).collect()).collect();
            a = next;
            continue;
        }
        let pair = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        let Some((p, q)) = pair else {
            out.n_zero += m;
            break;
        };
        // block [[0, c], [c, 0]] has inertia (1, 1, 0); its inverse is [[0, 1/c], [1/c, 0]]
        out.n_plus += 1;
        out.n_minus += 1;
        let c = a[p][q].clone();
        let rest: Vec<usize> = (0..m).filter(|&i| i != p && i != q).collect();
        let next = rest
            .iter()
            .map(|&i| {
                rest.iter()
                    .map(|&j| {
                        let correction = (&a[i][p] * &a[q][j] + &a[i][q] * &a[p][j]) / &c;
                        &a[i][j] - correction
                    })
                    .collect()
            })
            .collect();
        a = next;
    }
    Ok(out)
}
