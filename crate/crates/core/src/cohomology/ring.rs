//! Graded-commutative rings described by structure constants in degrees 0..=6.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::CohomologyError;
use crate::linalg::{Int, IntMatrix};

pub const TOP_DEGREE: usize = 6;

/// Structure constants of `H^k × H^l → H^{k+l}`: entry `(i, j)` is the
/// coordinate vector of `e_i ∪ e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupTensor {
    left: usize,
    right: usize,
    out: usize,
    data: Vec<Int>,
}

impl CupTensor {
    pub fn zeros(left: usize, right: usize, out: usize) -> Self {
        CupTensor { left, right, out, data: vec![Int::zero(); left * right * out] }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.left, self.right, self.out)
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        assert!(i < self.left && j < self.right, "cup index out of range");
        (i * self.right + j) * self.out
    }

    pub fn get(&self, i: usize, j: usize) -> &[Int] {
        let o = self.offset(i, j);
        &self.data[o..o + self.out]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut [Int] {
        let o = self.offset(i, j);
        &mut self.data[o..o + self.out]
    }

    pub fn set(&mut self, i: usize, j: usize, v: &[Int]) {
        assert_eq!(v.len(), self.out);
        self.get_mut(i, j).clone_from_slice(v);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// `x ∪ y` for coordinate vectors.
    pub fn apply(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.out];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (o, t) in out.iter_mut().zip(self.get(i, j)) {
                    if !t.is_zero() {
                        *o += &c * t;
                    }
                }
            }
        }
        out
    }

    /// Tensor of `(i, j) ↦ (a·e_i) ∪ (b·e_j)` where `a`, `b` act on input
    /// coordinates by their columns; `a` has `left` rows.
    pub fn pull_back(&self, a: &IntMatrix, b: &IntMatrix) -> CupTensor {
        assert_eq!(a.rows(), self.left);
        assert_eq!(b.rows(), self.right);
        let (nl, nr, no) = (a.cols(), b.cols(), self.out);
        let mut half = CupTensor::zeros(self.left, nr, no);
        for p in 0..self.left {
            for q in 0..self.right {
                let src = self.get(p, q);
                if src.iter().all(Zero::is_zero) {
                    continue;
                }
                for j in 0..nr {
                    let c = &b[(q, j)];
                    if c.is_zero() {
                        continue;
                    }
                    for (o, t) in half.get_mut(p, j).iter_mut().zip(src) {
                        *o += c * t;
                    }
                }
            }
        }
        let mut full = CupTensor::zeros(nl, nr, no);
        for p in 0..self.left {
            for i in 0..nl {
                let c = &a[(p, i)];
                if c.is_zero() {
                    continue;
                }
                for j in 0..nr {
                    let src = half.get(p, j).to_vec();
                    for (o, t) in full.get_mut(i, j).iter_mut().zip(&src) {
                        *o += c * t;
                    }
                }
            }
        }
        full
    }

    /// Applies `m` to every output vector.
    pub fn map_out(&self, m: &IntMatrix) -> CupTensor {
        assert_eq!(m.cols(), self.out);
        let mut t = CupTensor::zeros(self.left, self.right, m.rows());
        for i in 0..self.left {
            for j in 0..self.right {
                let v = m.mul_vec(self.get(i, j));
                t.set(i, j, &v);
            }
        }
        t
    }

    /// Tensor of the opposite order, `(j, i) ↦ sign · (e_i ∪ e_j)`.
    pub fn swapped(&self, sign: i32) -> CupTensor {
        let mut t = CupTensor::zeros(self.right, self.left, self.out);
        for i in 0..self.left {
            for j in 0..self.right {
                let v: Vec<Int> = self.get(i, j).iter().map(|x| x * sign).collect();
                t.set(j, i, &v);
            }
        }
        t
    }

    /// Unit tensor `1 ∪ e_j = e_j` (or `e_j ∪ 1` when `unit_left` is false).
    pub fn unit(b: usize, unit_left: bool) -> CupTensor {
        let mut t = if unit_left { CupTensor::zeros(1, b, b) } else { CupTensor::zeros(b, 1, b) };
        for j in 0..b {
            let (p, q) = if unit_left { (0, j) } else { (j, 0) };
            t.get_mut(p, q)[j] = Int::one();
        }
        t
    }
}

pub(crate) fn degree_pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..=TOP_DEGREE).flat_map(|k| (0..=TOP_DEGREE - k).map(move |l| (k, l)))
}

fn slot(k: usize, l: usize) -> usize {
    k * (TOP_DEGREE + 1) + l
}

/// Free ranks, torsion invariant factors, cup products and the evaluation
/// on the top degree. Torsion classes carry no structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    /// Formal dimension: the degree carrying `eval`.
    top: usize,
    betti: [usize; 7],
    torsion: [Vec<Int>; 7],
    cups: Vec<Option<CupTensor>>,
    eval: Vec<Int>,
}

impl GradedRing {
    /// Checks shapes only; the ring axioms are checked by [`validate_ring`].
    /// Pairs missing from `cups` are filled with the standard unit when one
    /// degree is zero and with zero otherwise.
    pub fn new(
        betti: [usize; 7],
        torsion: [Vec<Int>; 7],
        cups: BTreeMap<(usize, usize), CupTensor>,
        eval: Vec<Int>,
    ) -> Result<Self, CohomologyError> {
        Self::with_dimension(TOP_DEGREE, betti, torsion, cups, eval)
    }

    /// As [`GradedRing::new`] for a ring of formal dimension `top ≤ 6`;
    /// classes above `top` must have rank zero.
    pub fn with_dimension(
        top: usize,
        betti: [usize; 7],
        torsion: [Vec<Int>; 7],
        mut cups: BTreeMap<(usize, usize), CupTensor>,
        eval: Vec<Int>,
    ) -> Result<Self, CohomologyError> {
        if top > TOP_DEGREE || betti[top + 1..].iter().any(|&b| b != 0) {
            return Err(CohomologyError::Shape(format!("classes above the formal dimension {top}")));
        }
        if eval.len() != betti[top] {
            return Err(CohomologyError::Shape(format!(
                "evaluation has {} entries but b{top} = {}",
                eval.len(),
                betti[top]
            )));
        }
        for (k, factors) in torsion.iter().enumerate() {
            for (n, d) in factors.iter().enumerate() {
                if d < &Int::from(2) {
                    return Err(CohomologyError::Shape(format!("torsion factor {d} in degree {k} is not at least 2")));
                }
                if n > 0 && !d.is_multiple_of(&factors[n - 1]) {
                    return Err(CohomologyError::Shape(format!(
                        "torsion factors in degree {k} do not form a divisibility chain"
                    )));
                }
            }
        }
        let mut slots = vec![None; (TOP_DEGREE + 1) * (TOP_DEGREE + 1)];
        for (k, l) in degree_pairs() {
            let expected = (betti[k], betti[l], betti[k + l]);
            let t = match cups.remove(&(k, l)) {
                Some(t) => t,
                None if k == 0 && betti[0] == 1 => CupTensor::unit(betti[l], true),
                None if l == 0 && betti[0] == 1 => CupTensor::unit(betti[k], false),
                None => CupTensor::zeros(expected.0, expected.1, expected.2),
            };
            if t.dims() != expected {
                return Err(CohomologyError::Shape(format!(
                    "cup({k},{l}) has shape {:?}, expected {:?}",
                    t.dims(),
                    expected
                )));
            }
            slots[slot(k, l)] = Some(t);
        }
        if let Some(&(k, l)) = cups.keys().next() {
            return Err(CohomologyError::Shape(format!("cup({k},{l}) lands above degree 6")));
        }
        Ok(GradedRing { top, betti, torsion, cups: slots, eval })
    }

    pub fn dimension(&self) -> usize {
        self.top
    }

    pub fn betti(&self, k: usize) -> usize {
        self.betti[k]
    }

    pub fn betti_numbers(&self) -> [usize; 7] {
        self.betti
    }

    pub fn torsion(&self, k: usize) -> &[Int] {
        &self.torsion[k]
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }

    pub fn cup(&self, k: usize, l: usize) -> &CupTensor {
        assert!(k + l <= TOP_DEGREE, "cup({k},{l}) exceeds the top degree");
        self.cups[slot(k, l)].as_ref().expect("all slots filled")
    }

    pub fn eval(&self) -> &[Int] {
        &self.eval
    }

    pub fn product(&self, k: usize, x: &[Int], l: usize, y: &[Int]) -> Vec<Int> {
        self.cup(k, l).apply(x, y)
    }

    /// `⟨x, [N]⟩` for `x` in the top degree.
    pub fn evaluate(&self, x: &[Int]) -> Int {
        crate::linalg::dot(x, &self.eval)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    pub fn set_cup(&mut self, k: usize, l: usize, t: CupTensor) -> Result<(), CohomologyError> {
        if k + l > TOP_DEGREE || t.dims() != (self.betti[k], self.betti[l], self.betti[k + l]) {
            return Err(CohomologyError::Shape(format!("cup({k},{l}) has the wrong shape")));
        }
        self.cups[slot(k, l)] = Some(t);
        Ok(())
    }

    pub fn set_product(&mut self, k: usize, l: usize, i: usize, j: usize, v: &[Int]) {
        self.cups[slot(k, l)].as_mut().expect("all slots filled").set(i, j, v);
    }

    pub fn with_eval(mut self, eval: Vec<Int>) -> Self {
        assert_eq!(eval.len(), self.betti[self.top]);
        self.eval = eval;
        self
    }

    pub fn with_torsion(mut self, k: usize, factors: Vec<Int>) -> Self {
        self.torsion[k] = factors;
        self
    }

    /// The same ring in new bases: column `j` of `bases[k]` gives the old
    /// coordinates of the new `j`-th basis vector of `H^k`.
    pub fn rebase(&self, bases: &[IntMatrix; 7]) -> Result<GradedRing, CohomologyError> {
        let mut inverses = Vec::with_capacity(7);
        for (k, b) in bases.iter().enumerate() {
            if b.rows() != self.betti[k] || b.cols() != self.betti[k] {
                return Err(CohomologyError::Shape(format!("basis change in degree {k} has the wrong size")));
            }
            inverses.push(crate::linalg::inverse_unimodular(b)?);
        }
        let mut cups = BTreeMap::new();
        for (k, l) in degree_pairs() {
            let t = self.cup(k, l).pull_back(&bases[k], &bases[l]).map_out(&inverses[k + l]);
            cups.insert((k, l), t);
        }
        let top = &bases[self.top];
        let eval = (0..top.cols()).map(|j| crate::linalg::dot(&top.column(j), &self.eval)).collect();
        GradedRing::with_dimension(self.top, self.betti, self.torsion.clone(), cups, eval)
    }
}

/// A failed ring axiom. Indices are 1-based as in the file format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingViolation {
    UnitRank { b0: usize },
    Unit { degree: usize, index: usize },
    GradedCommutativity { k: usize, l: usize, i: usize, j: usize },
    Associativity { degrees: [usize; 3], indices: [usize; 3] },
    Orientation { detail: String },
}

impl fmt::Display for RingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingViolation::UnitRank { b0 } => write!(f, "unit: b0 = {b0}, expected 1"),
            RingViolation::Unit { degree, index } => {
                write!(f, "unit: 1 ∪ x ≠ x for basis class {index} of H^{degree}")
            }
            RingViolation::GradedCommutativity { k, l, i, j } => {
                write!(f, "graded commutativity: cup({l},{k})({j},{i}) ≠ (-1)^{} cup({k},{l})({i},{j})", k * l)
            }
            RingViolation::Associativity { degrees: [a, b, c], indices: [i, j, p] } => {
                write!(f, "associativity: (x∪y)∪z ≠ x∪(y∪z) for x = {i} in H^{a}, y = {j} in H^{b}, z = {p} in H^{c}")
            }
            RingViolation::Orientation { detail } => write!(f, "orientation: {detail}"),
        }
    }
}

/// Checks unit, graded commutativity, associativity and orientation.
/// Associativity reports at most one witness per degree triple.
pub fn validate_ring(r: &GradedRing) -> Vec<RingViolation> {
    let mut out = Vec::new();
    if r.betti(0) != 1 {
        out.push(RingViolation::UnitRank { b0: r.betti(0) });
    } else {
        for l in 0..=TOP_DEGREE {
            let (left, right) = (r.cup(0, l), r.cup(l, 0));
            for j in 0..r.betti(l) {
                let e = crate::linalg::unit_vec(r.betti(l), j);
                if left.get(0, j) != e.as_slice() || right.get(j, 0) != e.as_slice() {
                    out.push(RingViolation::Unit { degree: l, index: j + 1 });
                }
            }
        }
    }
    for (k, l) in degree_pairs() {
        if k > l {
            continue;
        }
        let sign = if (k * l) % 2 == 0 { 1 } else { -1 };
        let (a, b) = (r.cup(k, l), r.cup(l, k));
        for i in 0..r.betti(k) {
            for j in 0..r.betti(l) {
                if k == l && j < i {
                    continue;
                }
                let ok = a.get(i, j).iter().zip(b.get(j, i)).all(|(x, y)| x * sign == *y);
                if !ok {
                    out.push(RingViolation::GradedCommutativity { k, l, i: i + 1, j: j + 1 });
                }
            }
        }
    }
    for a in 1..=TOP_DEGREE {
        for b in 1..=TOP_DEGREE - a {
            for c in 1..=TOP_DEGREE - a - b {
                if let Some(v) = associativity_witness(r, a, b, c) {
                    out.push(v);
                }
            }
        }
    }
    let top = r.dimension();
    if r.betti(top) != 1 {
        out.push(RingViolation::Orientation { detail: format!("b{top} = {}, expected 1", r.betti(top)) });
    } else if !r.eval()[0].is_one() && !(-&r.eval()[0]).is_one() {
        out.push(RingViolation::Orientation { detail: format!("the top class evaluates to {}, not ±1", r.eval()[0]) });
    }
    out
}

fn associativity_witness(r: &GradedRing, a: usize, b: usize, c: usize) -> Option<RingViolation> {
    let (xy, xy_z) = (r.cup(a, b), r.cup(a + b, c));
    let (yz, x_yz) = (r.cup(b, c), r.cup(a, b + c));
    for i in 0..r.betti(a) {
        let ei = crate::linalg::unit_vec(r.betti(a), i);
        for j in 0..r.betti(b) {
            let left_inner = xy.get(i, j);
            for p in 0..r.betti(c) {
                let ep = crate::linalg::unit_vec(r.betti(c), p);
                let lhs = xy_z.apply(left_inner, &ep);
                let rhs = x_yz.apply(&ei, yz.get(j, p));
                if lhs != rhs {
                    return Some(RingViolation::Associativity { degrees: [a, b, c], indices: [i + 1, j + 1, p + 1] });
                }
            }
        }
    }
    None
}
