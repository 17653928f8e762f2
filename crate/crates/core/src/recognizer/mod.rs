//! Decides whether cohomology data comes from a product `M × Σ_g` with `M`
//! closed and simply connected, producing the ring isomorphism on success.
//!
//! The pipeline runs the ring axioms, torsion, the surface-group condition
//! (C1), the triviality of the action on `H₂` of the cover (C2), the form on
//! `V = H²/⟨f⟩` (C3) and finally the search for the isomorphism with the
//! model product (C4 with clauses i..iv).

mod phi;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cohomology::{
    is_primitive, kunneth_product, mod2, omega, poincare_pairing, quotient_by_f, triple_form, validate_ring,
    CohomologyError, ManifoldData,
};
use crate::forms::{classify_unimodular, FormClass, FormError, IntegralForm, IsometryMap, SearchBound};
use crate::linalg::{determinant, is_unimodular, unit_vec, Int, IntMatrix};

pub use phi::{realize_isometry, search_phi, PhiCandidate, PhiOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    C1,
    C2,
    C3,
    C4i,
    C4ii,
    C4iii,
    C4iv,
    RingAxioms,
    Torsion,
    Orientation,
}

impl Condition {
    pub const ALL: [Condition; 10] = [
        Condition::C1,
        Condition::C2,
        Condition::C3,
        Condition::C4i,
        Condition::C4ii,
        Condition::C4iii,
        Condition::C4iv,
        Condition::RingAxioms,
        Condition::Torsion,
        Condition::Orientation,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            Condition::C1 => "C1",
            Condition::C2 => "C2",
            Condition::C3 => "C3",
            Condition::C4i => "C4i",
            Condition::C4ii => "C4ii",
            Condition::C4iii => "C4iii",
            Condition::C4iv => "C4iv",
            Condition::RingAxioms => "RingAxioms",
            Condition::Torsion => "Torsion",
            Condition::Orientation => "Orientation",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Condition::ALL.into_iter().find(|c| c.code() == s).ok_or_else(|| format!("unknown condition `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recognition {
    pub form_class: FormClass,
    pub genus: usize,
    /// `phi[k]` maps the model basis of degree `k` (columns) into the input.
    pub phi: Vec<IntMatrix>,
    pub psi: IsometryMap,
    pub lift_coeffs: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Recognized(Box<Recognition>),
    Rejected { condition: Condition, witness: String },
    Inconclusive { bound: SearchBound },
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Recognized(_) => "recognized",
            Verdict::Rejected { .. } => "rejected",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn condition(&self) -> Option<Condition> {
        match self {
            Verdict::Rejected { condition, .. } => Some(*condition),
            _ => None,
        }
    }

    pub fn recognition(&self) -> Option<&Recognition> {
        match self {
            Verdict::Recognized(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerCheck {
    pub actual: i64,
    pub expected: i64,
}

impl EulerCheck {
    pub fn holds(&self) -> bool {
        self.actual == self.expected
    }
}

/// Determinant of the degree-`k` Poincaré pairing; `None` when it is not
/// square or torsion is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityCheck {
    pub degree: usize,
    pub determinant: Option<Int>,
}

impl DualityCheck {
    pub fn holds(&self) -> bool {
        self.determinant.as_ref().is_some_and(|d| d.abs().is_one())
    }
}

/// Advisory checks; they never change the verdict.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub euler: Option<EulerCheck>,
    pub duality: Vec<DualityCheck>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecognitionReport {
    pub verdict: Verdict,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizerError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("verification failed: {0}")]
    Verification(String),
}

/// Euler characteristic against `(2 - 2g)(r + 2)` with `r = b₂ - 1`, and
/// the determinant of every Poincaré pairing.
pub fn diagnostics(d: &ManifoldData) -> Diagnostics {
    let ring = &d.ring;
    let mut out = Diagnostics::default();
    if ring.betti(2) >= 1 {
        let r = ring.betti(2) as i64 - 1;
        out.euler =
            Some(EulerCheck { actual: ring.euler_characteristic(), expected: (2 - 2 * d.genus as i64) * (r + 2) });
    }
    let top = ring.dimension();
    for k in 0..=top {
        let det = poincare_pairing(ring, k).ok().filter(IntMatrix::is_square).and_then(|p| determinant(&p).ok());
        out.duality.push(DualityCheck { degree: k, determinant: det });
    }
    if let Some(e) = &out.euler {
        if !e.holds() {
            out.notes.push(format!("Euler characteristic {} differs from {}", e.actual, e.expected));
        }
    }
    for c in &out.duality {
        if !c.holds() {
            match &c.determinant {
                Some(det) => out.notes.push(format!("degree {} Poincaré pairing has determinant {det}", c.degree)),
                None => {
                    out.notes.push(format!("degree {} Poincaré pairing is not square or not torsion-free", c.degree))
                }
            }
        }
    }
    out
}

/// Surface relations: `b₁ = 2g`, `u*` invertible on `H¹`,
/// `u*(x) ∪ u*(y) = ω(x, y) f`, `u*(x) ∪ f = 0`, `f ∪ f = 0`, `f` primitive.
pub fn check_condition1(d: &ManifoldData) -> Result<(), String> {
    let ring = &d.ring;
    let n = 2 * d.genus;
    if d.genus == 0 {
        return Err("genus must be at least 1".into());
    }
    if ring.betti(1) != n {
        return Err(format!("b1 = {} but 2g = {n}", ring.betti(1)));
    }
    if !is_unimodular(&d.u1).unwrap_or(false) {
        return Err("u* not surjective on H¹ (u1 is not invertible over ℤ)".into());
    }
    if !is_primitive(&d.f) {
        return Err("f = u*[F] is not primitive".into());
    }
    let u: Vec<Vec<Int>> = (0..n).map(|k| d.u1.column(k)).collect();
    for k in 0..n {
        for l in 0..n {
            let lhs = ring.product(1, &u[k], 1, &u[l]);
            let rhs: Vec<Int> = d.f.iter().map(|x| x * omega(d.genus, k, l)).collect();
            if lhs != rhs {
                return Err(format!("u*(α{}) ∪ u*(α{}) ≠ ω(α{}, α{})·f", k + 1, l + 1, k + 1, l + 1));
            }
        }
        if ring.product(1, &u[k], 2, &d.f).iter().any(|x| !x.is_zero()) {
            return Err(format!("u*(α{}) ∪ f ≠ 0", k + 1));
        }
    }
    if ring.product(2, &d.f, 2, &d.f).iter().any(|x| !x.is_zero()) {
        return Err("f ∪ f ≠ 0".into());
    }
    Ok(())
}

/// Trivial action on `H₂` of the cover and `r' = b₂ - 1`.
pub fn check_condition2(d: &ManifoldData) -> Result<(), String> {
    let b2 = d.ring.betti(2);
    if d.cover_rank + 1 != b2 {
        return Err(format!("cover rank r' = {} but b2 - 1 = {}", d.cover_rank, b2 as i64 - 1));
    }
    if d.action.len() != 2 * d.genus {
        return Err(format!("{} action matrices for {} generators", d.action.len(), 2 * d.genus));
    }
    let names = |n: usize| if n < d.genus { format!("a{}", n + 1) } else { format!("b{}", n - d.genus + 1) };
    for (n, a) in d.action.iter().enumerate() {
        if !a.is_identity() {
            return Err(format!("generator {} acts nontrivially on H₂ of the cover", names(n)));
        }
    }
    Ok(())
}

/// Unimodularity, and signature divisible by 16 when `w₂ = 0`.
pub fn check_condition3(i_n: &IntegralForm, w2: &[u8]) -> Result<(), String> {
    if !i_n.is_unimodular() {
        return Err(format!("I(N) has determinant {}, not ±1", i_n.determinant()));
    }
    let sigma = i_n.signature();
    if w2.iter().all(|&x| x == 0) && sigma.rem_euclid(16) != 0 {
        return Err(format!("w2 = 0 but the signature {sigma} is not divisible by 16"));
    }
    Ok(())
}

fn rejected(condition: Condition, witness: impl Into<String>) -> Verdict {
    Verdict::Rejected { condition, witness: witness.into() }
}

/// The full decision pipeline. Never fails: every problem is a verdict.
pub fn recognize(d: &ManifoldData, bound: SearchBound) -> RecognitionReport {
    if let Err(e) = d.check_shapes() {
        return RecognitionReport {
            verdict: rejected(Condition::RingAxioms, e.to_string()),
            diagnostics: Diagnostics::default(),
        };
    }
    let diagnostics = diagnostics(d);
    let verdict = decide(d, bound);
    RecognitionReport { verdict, diagnostics }
}

fn decide(d: &ManifoldData, bound: SearchBound) -> Verdict {
    let violations = validate_ring(&d.ring);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return rejected(Condition::RingAxioms, list.join("; "));
    }
    if let Some(k) = (0..=6).find(|&k| !d.ring.torsion(k).is_empty()) {
        let factors: Vec<String> = d.ring.torsion(k).iter().map(ToString::to_string).collect();
        return rejected(
            Condition::Torsion,
            format!("H^{k} has torsion with invariant factors {}; a product M × F is torsion-free", factors.join(" ")),
        );
    }
    if let Err(w) = check_condition1(d) {
        return rejected(Condition::C1, w);
    }
    if let Err(w) = check_condition2(d) {
        return rejected(Condition::C2, w);
    }
    let q = match quotient_by_f(&d.ring, &d.f) {
        Ok(q) => q,
        Err(e) => return rejected(Condition::C1, e.to_string()),
    };
    let i_n = match triple_form(&d.ring, &d.f, &q) {
        Ok(i) => i,
        Err(e) => return rejected(Condition::C1, e.to_string()),
    };
    if let Err(w) = check_condition3(&i_n, &d.w2) {
        return rejected(Condition::C3, w);
    }
    let model = match kunneth_product(&i_n, d.genus) {
        Ok(m) => m,
        Err(e) => return rejected(Condition::C3, e.to_string()),
    };
    match search_phi(&model, d, bound) {
        PhiOutcome::Found { phi, candidate } => {
            let form_class = classify_unimodular(&i_n).expect("unimodular after C3");
            Verdict::Recognized(Box::new(Recognition {
                form_class,
                genus: d.genus,
                phi,
                psi: candidate.psi,
                lift_coeffs: candidate.c,
            }))
        }
        PhiOutcome::Obstruction { condition, witness } => rejected(condition, witness),
        PhiOutcome::Inconclusive { bound } => Verdict::Inconclusive { bound },
    }
}

/// `w₂` as integers, for linear algebra.
pub(crate) fn w2_int(w2: &[u8]) -> Vec<Int> {
    w2.iter().map(|&x| Int::from(x)).collect()
}

pub(crate) fn reduce2(v: &[Int]) -> Vec<u8> {
    v.iter().map(mod2).collect()
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Int> {
    unit_vec(n, i)
}
