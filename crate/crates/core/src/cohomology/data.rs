use num_traits::{One, Zero};

use super::ring::GradedRing;
use super::CohomologyError;
use crate::linalg::{inverse_unimodular, Int, IntMatrix};

/// A ring together with the surface data: genus, `u*` on `H¹`, the class
/// `f = u*[F]`, `w₂`, the `p₁` pairings on `H²` and the action of the
/// surface group generators on `H₂` of the universal cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldData {
    pub ring: GradedRing,
    pub genus: usize,
    /// `b₁ × 2g`, columns are `u*(a_1..a_g, b_1..b_g)`.
    pub u1: IntMatrix,
    pub f: Vec<Int>,
    pub w2: Vec<u8>,
    /// `p1[i] = ⟨e_i ∪ p₁, [N]⟩`.
    pub p1: Vec<Int>,
    /// One `cover_rank × cover_rank` matrix per generator.
    pub action: Vec<IntMatrix>,
    pub cover_rank: usize,
}

impl ManifoldData {
    /// Dimension consistency between the fields and the ring.
    pub fn check_shapes(&self) -> Result<(), CohomologyError> {
        let b1 = self.ring.betti(1);
        let b2 = self.ring.betti(2);
        let err = |m: String| Err(CohomologyError::Shape(m));
        if self.u1.rows() != b1 || self.u1.cols() != 2 * self.genus {
            return err(format!("u1 is {}x{}, expected {}x{}", self.u1.rows(), self.u1.cols(), b1, 2 * self.genus));
        }
        if self.f.len() != b2 {
            return err(format!("f has {} entries, expected {b2}", self.f.len()));
        }
        if self.w2.len() != b2 {
            return err(format!("w2 has {} entries, expected {b2}", self.w2.len()));
        }
        if self.w2.iter().any(|&x| x > 1) {
            return err("w2 entries must be 0 or 1".into());
        }
        if self.p1.len() != b2 {
            return err(format!("p1 has {} entries, expected {b2}", self.p1.len()));
        }
        if self.action.len() != 2 * self.genus {
            return err(format!("{} action matrices, expected {}", self.action.len(), 2 * self.genus));
        }
        for (n, a) in self.action.iter().enumerate() {
            if a.rows() != self.cover_rank || a.cols() != self.cover_rank {
                return err(format!(
                    "action matrix {} is {}x{}, expected {}x{}",
                    n + 1,
                    a.rows(),
                    a.cols(),
                    self.cover_rank,
                    self.cover_rank
                ));
            }
        }
        Ok(())
    }

    /// Changes the basis of `H²` only: new basis vector `j` is
    /// `Σ_i u[i][j] e_i`. Other degrees keep their bases.
    pub fn change_h2_basis(&self, u: &IntMatrix) -> Result<ManifoldData, CohomologyError> {
        let mut bases: [IntMatrix; 7] = std::array::from_fn(|k| IntMatrix::identity(self.ring.betti(k)));
        bases[2] = u.clone();
        self.rebase(&bases)
    }

    /// Transports every field to new bases of all degrees.
    pub fn rebase(&self, bases: &[IntMatrix; 7]) -> Result<ManifoldData, CohomologyError> {
        let ring = self.ring.rebase(bases)?;
        let inv1 = inverse_unimodular(&bases[1])?;
        let inv2 = inverse_unimodular(&bases[2])?;
        let w2_int: Vec<Int> = self.w2.iter().map(|&x| Int::from(x)).collect();
        let w2 = inv2.mul_vec(&w2_int).iter().map(mod2).collect();
        Ok(ManifoldData {
            ring,
            genus: self.genus,
            u1: &inv1 * &self.u1,
            f: inv2.mul_vec(&self.f),
            w2,
            p1: bases[2].transpose().mul_vec(&self.p1),
            action: self.action.clone(),
            cover_rank: self.cover_rank,
        })
    }
}

pub(crate) fn mod2(x: &Int) -> u8 {
    if (x % Int::from(2)).is_zero() {
        0
    } else {
        1
    }
}

pub(crate) fn is_primitive(v: &[Int]) -> bool {
    use num_integer::Integer;
    v.iter().fold(Int::zero(), |g, x| g.gcd(x)).is_one()
}
