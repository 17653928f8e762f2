//! Surface rings and the cohomology of a product `M × Σ_g`.
//!
//! Basis of each degree of `H*(M × Σ_g)`, where `e_1..e_r` is the basis of
//! `H²(M)` carrying the form `s`, `g_M` generates `H⁴(M)`, and
//! `α_1..α_{2g}` is `a_1..a_g, b_1..b_g`:
//!
//! | degree | basis |
//! |---|---|
//! | 0 | `1` |
//! | 1 | `α_k` |
//! | 2 | `e_1..e_r`, then `f = [F]` |
//! | 3 | `e_i × α_k` at position `k·r + i` |
//! | 4 | `g_M`, then `e_i × [F]` |
//! | 5 | `g_M × α_k` |
//! | 6 | `g_M × [F]`, evaluating to 1 |

use std::collections::BTreeMap;

use num_traits::Zero;

use super::data::ManifoldData;
use super::ring::{degree_pairs, CupTensor, GradedRing};
use super::CohomologyError;
use crate::forms::{characteristic_vector, IntegralForm};
use crate::linalg::{Int, IntMatrix};

/// Symplectic pairing `ω(a_i, b_i) = 1 = -ω(b_i, a_i)`.
pub fn omega(g: usize, k: usize, l: usize) -> i64 {
    if k < g && l == k + g {
        1
    } else if k >= g && l + g == k {
        -1
    } else {
        0
    }
}

pub fn surface_ring(g: usize) -> Result<GradedRing, CohomologyError> {
    if g == 0 {
        return Err(CohomologyError::GenusZero);
    }
    let betti = [1, 2 * g, 1, 0, 0, 0, 0];
    let mut cup11 = CupTensor::zeros(2 * g, 2 * g, 1);
    for k in 0..2 * g {
        for l in 0..2 * g {
            cup11.get_mut(k, l)[0] = Int::from(omega(g, k, l));
        }
    }
    let cups = BTreeMap::from([((1, 1), cup11)]);
    GradedRing::with_dimension(2, betti, Default::default(), cups, vec![Int::from(1)])
}

/// Index helpers for the product basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KunnethLayout {
    pub rank: usize,
    pub genus: usize,
}

impl KunnethLayout {
    pub fn betti(&self) -> [usize; 7] {
        let (r, n) = (self.rank, 2 * self.genus);
        [1, n, r + 1, n * r, r + 1, n, 1]
    }

    pub fn f(&self) -> usize {
        self.rank
    }

    pub fn h3(&self, k: usize, i: usize) -> usize {
        k * self.rank + i
    }

    pub fn cross4(&self, i: usize) -> usize {
        1 + i
    }

    /// Decomposes a basis index of degree `d` into (M-degree, M-index, F-degree, F-index).
    fn factors(&self, d: usize, idx: usize) -> (usize, usize, usize, usize) {
        let r = self.rank;
        match d {
            0 => (0, 0, 0, 0),
            1 => (0, 0, 1, idx),
            2 if idx < r => (2, idx, 0, 0),
            2 => (0, 0, 2, 0),
            3 => (2, idx % r, 1, idx / r),
            4 if idx == 0 => (4, 0, 0, 0),
            4 => (2, idx - 1, 2, 0),
            5 => (4, 0, 1, idx),
            6 => (4, 0, 2, 0),
            _ => unreachable!("degree above 6"),
        }
    }

    fn index(&self, dm: usize, im: usize, df: usize, jf: usize) -> usize {
        match (dm, df) {
            (0, 0) => 0,
            (0, 1) => jf,
            (2, 0) => im,
            (0, 2) => self.rank,
            (2, 1) => self.h3(jf, im),
            (4, 0) => 0,
            (2, 2) => self.cross4(im),
            (4, 1) => jf,
            (4, 2) => 0,
            _ => unreachable!("no such product class"),
        }
    }
}

/// Product in `H*(M)`: unit, `e_i ∪ e_j = s_ij g_M`, zero above degree 4.
fn m_product(s: &IntMatrix, a: (usize, usize), b: (usize, usize)) -> Option<(usize, usize, Int)> {
    match (a, b) {
        ((0, _), (d, i)) | ((d, i), (0, _)) => Some((d, i, Int::from(1))),
        ((2, i), (2, j)) => Some((4, 0, s[(i, j)].clone())),
        _ => None,
    }
}

fn f_product(g: usize, a: (usize, usize), b: (usize, usize)) -> Option<(usize, usize, Int)> {
    match (a, b) {
        ((0, _), (d, i)) | ((d, i), (0, _)) => Some((d, i, Int::from(1))),
        ((1, k), (1, l)) => Some((2, 0, Int::from(omega(g, k, l)))),
        _ => None,
    }
}

/// The product ring for any symmetric Gram matrix `s` (unimodularity is
/// the caller's concern). Since `H*(M)` is concentrated in even degrees the
/// Koszul sign of the tensor product is always +1.
pub(crate) fn product_ring(s: &IntMatrix, g: usize) -> GradedRing {
    let layout = KunnethLayout { rank: s.rows(), genus: g };
    let betti = layout.betti();
    let mut cups = BTreeMap::new();
    for (k, l) in degree_pairs() {
        let mut t = CupTensor::zeros(betti[k], betti[l], betti[k + l]);
        for i in 0..betti[k] {
            let (dm1, im1, df1, if1) = layout.factors(k, i);
            for j in 0..betti[l] {
                let (dm2, im2, df2, if2) = layout.factors(l, j);
                let Some((dm, im, cm)) = m_product(s, (dm1, im1), (dm2, im2)) else { continue };
                let Some((df, jf, cf)) = f_product(g, (df1, if1), (df2, if2)) else { continue };
                let c = cm * cf;
                if !c.is_zero() {
                    t.get_mut(i, j)[layout.index(dm, im, df, jf)] = c;
                }
            }
        }
        cups.insert((k, l), t);
    }
    GradedRing::new(betti, Default::default(), cups, vec![Int::from(1)]).expect("product shapes are consistent")
}

/// Full data of `M × Σ_g` for a Gram matrix, with the given `w₂` on `H²(M)`
/// and `p₁` pairing on `f`.
pub(crate) fn product_data(s: &IntMatrix, g: usize, w2_m: Vec<u8>, p1_f: Int) -> ManifoldData {
    let r = s.rows();
    let ring = product_ring(s, g);
    let mut f = vec![Int::zero(); r + 1];
    f[r] = Int::from(1);
    let mut w2 = w2_m;
    w2.push(0);
    let mut p1 = vec![Int::zero(); r + 1];
    p1[r] = p1_f;
    ManifoldData {
        ring,
        genus: g,
        u1: IntMatrix::identity(2 * g),
        f,
        w2,
        p1,
        action: vec![IntMatrix::identity(r); 2 * g],
        cover_rank: r,
    }
}

/// Cohomology data of `M × Σ_g` where `M` has intersection form `s`.
pub fn kunneth_product(s: &IntegralForm, g: usize) -> Result<ManifoldData, CohomologyError> {
    if g == 0 {
        return Err(CohomologyError::GenusZero);
    }
    s.require_unimodular()?;
    let w2 = characteristic_vector(s)?;
    Ok(product_data(s.gram(), g, w2, Int::from(3 * s.signature())))
}
