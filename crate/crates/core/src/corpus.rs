//! Fixtures: products `M × Σ_g` built from named forms, the sphere bundle
//! with the cohomology ring of `S⁴ × Σ_g` but `w₂ ≠ 0`, and single-field
//! mutations of products with the rejection they must trigger.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::cohomology::{kunneth_product, product_data, quotient_by_f, triple_form, CohomologyError, ManifoldData};
use crate::forms::named::{e8_gram, parse_form_spec};
use crate::forms::{classify_unimodular, FormClass, FormError, IntegralForm, IsometryMap};
use crate::linalg::{inverse_unimodular, Int, IntMatrix};
use crate::recognizer::{Condition, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown mutation `{0}` (expected one of: action, det, spin-sigma8, w2, p1-f, p1-lattice, orientation, torsion)")]
    UnknownMutation(String),
    #[error("mutation {mutation} does not apply: {reason}")]
    NotApplicable { mutation: Mutation, reason: String },
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Form(#[from] FormError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Recognized { class: FormClass, genus: usize },
    Rejected(Condition),
}

impl Expected {
    pub fn matches(&self, verdict: &Verdict) -> bool {
        match (self, verdict) {
            (Expected::Recognized { class, genus }, Verdict::Recognized(r)) => {
                &r.form_class == class && r.genus == *genus
            }
            (Expected::Rejected(c), Verdict::Rejected { condition, .. }) => c == condition,
            _ => false,
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Recognized { class, genus } => write!(f, "recognized {} genus {genus}", class.name),
            Expected::Rejected(c) => write!(f, "rejected {c}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub data: ManifoldData,
    pub expected: Expected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// First generator acts by `-id`.
    Action,
    /// `s ↦ DᵀsD` with `D = diag(2, 1, ..)`.
    Det,
    /// Replaces the form by `E8` with `w₂ = 0`.
    SpinSigma8,
    /// Flips the `f`-component of `w₂`.
    W2,
    /// Adds 1 to `⟨p₁ ∪ f, [N]⟩`.
    P1AtF,
    /// Adds 1 to `⟨p₁ ∪ e_1, [N]⟩`.
    P1AtLattice,
    /// Negates the evaluation.
    Orientation,
    /// Adds `ℤ/2` to `H³`.
    Torsion,
}

impl Mutation {
    pub const ALL: [Mutation; 8] = [
        Mutation::Action,
        Mutation::Det,
        Mutation::SpinSigma8,
        Mutation::W2,
        Mutation::P1AtF,
        Mutation::P1AtLattice,
        Mutation::Orientation,
        Mutation::Torsion,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Mutation::Action => "action",
            Mutation::Det => "det",
            Mutation::SpinSigma8 => "spin-sigma8",
            Mutation::W2 => "w2",
            Mutation::P1AtF => "p1-f",
            Mutation::P1AtLattice => "p1-lattice",
            Mutation::Orientation => "orientation",
            Mutation::Torsion => "torsion",
        }
    }

    pub fn expected(&self) -> Condition {
        match self {
            Mutation::Action => Condition::C2,
            Mutation::Det | Mutation::SpinSigma8 => Condition::C3,
            Mutation::W2 => Condition::C4iii,
            Mutation::P1AtF | Mutation::P1AtLattice => Condition::C4iv,
            Mutation::Orientation => Condition::Orientation,
            Mutation::Torsion => Condition::Torsion,
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutation::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| CorpusError::UnknownMutation(s.to_string()))
    }
}

/// The form of a product in its canonical basis.
fn base_form(d: &ManifoldData) -> Result<IntegralForm, CohomologyError> {
    let q = quotient_by_f(&d.ring, &d.f)?;
    triple_form(&d.ring, &d.f, &q)
}

/// Applies one mutation to product data.
pub fn mutate_data(d: &ManifoldData, kind: Mutation) -> Result<ManifoldData, CorpusError> {
    let not_applicable = |reason: &str| CorpusError::NotApplicable { mutation: kind, reason: reason.into() };
    let mut out = d.clone();
    match kind {
        Mutation::Action => {
            if d.cover_rank == 0 || d.action.is_empty() {
                return Err(not_applicable("-id equals id on a zero-rank cover"));
            }
            out.action[0] = d.action[0].neg();
        }
        Mutation::Det => {
            let s = base_form(d)?;
            if s.rank() == 0 {
                return Err(not_applicable("the form is empty"));
            }
            let mut diag = vec![1i64; s.rank()];
            diag[0] = 2;
            let gram = IntMatrix::diagonal(&diag).congruence(s.gram());
            let w2 = d.w2[..s.rank()].to_vec();
            out = product_data(&gram, d.genus, w2, Int::from(3 * s.signature()));
        }
        Mutation::SpinSigma8 => {
            out = product_data(&e8_gram(), d.genus, vec![0; 8], Int::from(24));
        }
        Mutation::W2 => {
            for (w, f) in out.w2.iter_mut().zip(&d.f) {
                if crate::cohomology::mod2(f) == 1 {
                    *w ^= 1;
                }
            }
        }
        Mutation::P1AtF => {
            let k = d.f.iter().position(|x| !x.is_zero()).ok_or_else(|| not_applicable("f is zero"))?;
            // p1·f grows by f_k, which is ±1 for product data
            out.p1[k] += &d.f[k];
        }
        Mutation::P1AtLattice => {
            if d.cover_rank == 0 {
                return Err(not_applicable("H²(M) is zero"));
            }
            out.p1[0] += 1;
        }
        Mutation::Orientation => {
            let eval = d.ring.eval().iter().map(|x| -x).collect();
            out.ring = d.ring.clone().with_eval(eval);
        }
        Mutation::Torsion => {
            out.ring = d.ring.clone().with_torsion(3, vec![Int::from(2)]);
        }
    }
    Ok(out)
}

pub fn mutate(f: &Fixture, kind: Mutation) -> Result<Fixture, CorpusError> {
    let data = mutate_data(&f.data, kind)?;
    Ok(Fixture {
        name: format!("{}-{}", f.name, kind.name()),
        description: format!("{} with mutation {}", f.description, kind.name()),
        data,
        expected: Expected::Rejected(kind.expected()),
    })
}

/// A positive fixture `M × Σ_g`.
pub fn product_fixture(name: &str, description: &str, s: &IntegralForm, genus: usize) -> Result<Fixture, CorpusError> {
    let data = kunneth_product(s, genus)?;
    let class = classify_unimodular(s)?;
    Ok(Fixture {
        name: name.into(),
        description: description.into(),
        data,
        expected: Expected::Recognized { class, genus },
    })
}

/// The ring of `S⁴ × Σ_g` with `w₂` nonzero on `f`: an `S⁴`-bundle over the
/// surface that is not a product.
pub fn s4_bundle(genus: usize) -> Result<ManifoldData, CorpusError> {
    let mut d = kunneth_product(&IntegralForm::empty(), genus)?;
    d.w2 = vec![1];
    Ok(d)
}

/// Re-expresses `H²` of product data so that recognition reports `psi`:
/// the new basis is `ψ⁻¹ ⊕ id_f` in terms of the old one.
pub fn permute_h2(d: &ManifoldData, psi: &IsometryMap) -> Result<ManifoldData, CorpusError> {
    let inv = inverse_unimodular(psi.matrix()).map_err(CohomologyError::from)?;
    let p = inv.direct_sum(&IntMatrix::identity(1));
    Ok(d.change_h2_basis(&p)?)
}

fn spec(s: &str) -> IntegralForm {
    parse_form_spec(s).expect("built-in form specification")
}

/// Positive products, the standard negative examples, and every
/// mutation of `CP² × T²`.
pub fn standard_fixtures() -> Vec<Fixture> {
    let positive = [
        ("cp2_torus", "CP² × T²", "<1>", 1),
        ("cp2_sigma2", "CP² × Σ₂", "<1>", 2),
        ("cp2_sigma3", "CP² × Σ₃", "<1>", 3),
        ("s2xs2_torus", "(S² × S²) × T²", "H", 1),
        ("s2xs2_sigma2", "(S² × S²) × Σ₂", "H", 2),
        ("k3_torus", "K3 × T²", "-E8+-E8+H+H+H", 1),
        ("s4_sigma2", "S⁴ × Σ₂", "empty", 2),
    ];
    let mut out: Vec<Fixture> = positive
        .iter()
        .map(|&(name, desc, form, g)| product_fixture(name, desc, &spec(form), g).expect("unimodular"))
        .collect();

    out.push(Fixture {
        name: "s4bundle_w2".into(),
        description: "S⁴-bundle over Σ₂ with the ring of S⁴ × Σ₂ and w2 ≠ 0".into(),
        data: s4_bundle(2).expect("genus 2"),
        expected: Expected::Rejected(Condition::C4iii),
    });
    out.push(Fixture {
        name: "spin_e8_torus".into(),
        description: "E8 form with w2 = 0, signature 8".into(),
        data: product_data(&e8_gram(), 1, vec![0; 8], Int::from(24)),
        expected: Expected::Rejected(Condition::C3),
    });
    out.push(Fixture {
        name: "det2_torus".into(),
        description: "triple product form of determinant 2".into(),
        data: product_data(&IntMatrix::diagonal(&[2]), 1, vec![0], Int::from(3)),
        expected: Expected::Rejected(Condition::C3),
    });
    let base = out[0].clone();
    for m in Mutation::ALL {
        out.push(mutate(&base, m).expect("CP² × T² admits every mutation"));
    }
    out
}
