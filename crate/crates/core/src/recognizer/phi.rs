//! Construction and verification of the ring isomorphism from the model
//! product to the input.
//!
//! Degree 1 is `u*`. In degree 2 the classes of `H²(M)` go to
//! `L(e_i) = lift(ψ e_i) + c_i f`. The coefficients are forced: the image of
//! `H²(M)` must be isotropic for the triple product, which for the lifts
//! `l_i` and `t_ijk = ⟨l_i ∪ l_j ∪ l_k, [N]⟩` reads
//! `t_ijk + c_i s_jk + c_j s_ik + c_k s_ij = 0`. Contracting with `s⁻¹` gives
//! `(r + 2) c_i = -Σ s⁻¹_jk t_ijk`. Changing `ψ` only replaces `c` by `ψᵀc`.
//! Degrees 3..6 are products of degrees 1 and 2, except `H⁴(M)` when `r = 0`,
//! which is fixed by duality with `f`.

use std::collections::{HashSet, VecDeque};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{reduce2, unit, w2_int, Condition, RecognizerError};
use crate::cohomology::{f_pairing, kunneth_product, quotient_by_f, KunnethLayout, ManifoldData, QuotientData};
use crate::forms::{automorphism_group, characteristic_vector, GroupOrder, IntegralForm, IsometryMap, SearchBound};
use crate::linalg::{dot, inverse_unimodular, is_unimodular, smith_normal_form, solve_with_smith, Int, IntMatrix};

/// Upper limit on the number of `ψ` tried.
const MAX_CANDIDATES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiCandidate {
    pub psi: IsometryMap,
    /// `L(e_i) = lift(ψ e_i) + c_i f`.
    pub c: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiOutcome {
    Found { phi: Vec<IntMatrix>, candidate: PhiCandidate },
    Obstruction { condition: Condition, witness: String },
    Inconclusive { bound: SearchBound },
}

fn obstruction(condition: Condition, witness: impl Into<String>) -> PhiOutcome {
    PhiOutcome::Obstruction { condition, witness: witness.into() }
}

/// The form of a model built by `kunneth_product`: `e_i ∪ e_j = s_ij g_M`.
fn model_form(model: &ManifoldData) -> Result<IntegralForm, RecognizerError> {
    let r = model.cover_rank;
    let cup = model.ring.cup(2, 2);
    let mut g = IntMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            g[(i, j)] = cup.get(i, j)[0].clone();
        }
    }
    Ok(IntegralForm::new(g)?)
}

/// Integer `x` with `Σ x_ab s_ab = 1`, as a list of nonzero terms.
fn unit_combination(s: &IntMatrix) -> Option<Vec<(usize, usize, Int)>> {
    let mut g = Int::zero();
    let mut terms: Vec<(usize, usize, Int)> = Vec::new();
    for a in 0..s.rows() {
        for b in 0..s.cols() {
            let v = &s[(a, b)];
            if v.is_zero() {
                continue;
            }
            let e = g.extended_gcd(v);
            for t in terms.iter_mut() {
                t.2 *= &e.x;
            }
            terms.push((a, b, e.y));
            g = e.gcd;
        }
    }
    if g.is_negative() {
        for t in terms.iter_mut() {
            t.2 = -&t.2;
        }
        g = -g;
    }
    (g == Int::from(1)).then_some(terms)
}

/// Solves the isotropy system for the lift coefficients at `ψ = id`.
fn splitting(input: &ManifoldData, q: &QuotientData, s: &IntegralForm) -> Result<Vec<Int>, String> {
    let r = s.rank();
    if r == 0 {
        return Ok(Vec::new());
    }
    let lifts: Vec<Vec<Int>> = (0..r).map(|a| q.lift.column(a)).collect();
    let mut t = vec![vec![vec![Int::zero(); r]; r]; r];
    for a in 0..r {
        let m = f_pairing(&input.ring, &lifts[a]);
        for b in 0..r {
            let mb = m.transpose().mul_vec(&lifts[b]);
            for c in 0..r {
                t[a][b][c] = dot(&mb, &lifts[c]);
            }
        }
    }
    let sinv = inverse_unimodular(s.gram()).map_err(|e| e.to_string())?;
    let denom = Int::from(r as i64 + 2);
    let mut c = Vec::with_capacity(r);
    for a in 0..r {
        let mut acc = Int::zero();
        for b in 0..r {
            for d in 0..r {
                acc += &sinv[(b, d)] * &t[a][b][d];
            }
        }
        let (quot, rem) = (-acc).div_rem(&denom);
        if !rem.is_zero() {
            return Err(format!("H²(M) admits no isotropic lift: coefficient {} is not integral", a + 1));
        }
        c.push(quot);
    }
    let gs = s.gram();
    for a in 0..r {
        for b in a..r {
            for d in b..r {
                let v = &t[a][b][d] + &c[a] * &gs[(b, d)] + &c[b] * &gs[(a, d)] + &c[d] * &gs[(a, b)];
                if !v.is_zero() {
                    return Err(format!(
                        "H²(M) admits no isotropic lift: triple product of lifts {} {} {} is {v}",
                        a + 1,
                        b + 1,
                        d + 1
                    ));
                }
            }
        }
    }
    Ok(c)
}

/// `ψ` for which the degree-3 map is the identity on the block `e_i × α_1`,
/// if that is an automorphism.
fn aligned_candidate(input: &ManifoldData, q: &QuotientData, s: &IntegralForm) -> Option<IsometryMap> {
    let r = s.rank();
    let layout = KunnethLayout { rank: r, genus: input.genus };
    let ring = &input.ring;
    if r == 0 || input.genus == 0 || ring.betti(3) != layout.betti()[3] {
        return None;
    }
    let b2 = ring.betti(2);
    let b3 = ring.betti(3);
    let u0 = input.u1.column(0);
    let columns: Vec<Vec<Int>> = (0..b2).map(|a| ring.product(2, &unit(b2, a), 1, &u0)).collect();
    let m = IntMatrix::from_columns(b3, &columns);
    let snf = smith_normal_form(&m);
    let mut psi_cols = Vec::with_capacity(r);
    for i in 0..r {
        let x = solve_with_smith(&snf, &unit(b3, layout.h3(0, i)))?;
        psi_cols.push(q.project(&x));
    }
    IsometryMap::verified(IntMatrix::from_columns(r, &psi_cols), s, s).ok()
}

/// Breadth-first words in the generators, deduplicated, identity excluded.
fn generator_words(s: &IntegralForm, bound: SearchBound, limit: usize) -> (Vec<IsometryMap>, bool) {
    let Ok(group) = automorphism_group(s, bound) else { return (Vec::new(), false) };
    let complete = matches!(group.order, GroupOrder::Exact(_));
    let mut seen: HashSet<IntMatrix> = HashSet::from([IntMatrix::identity(s.rank())]);
    let mut out = Vec::new();
    let mut queue = VecDeque::from([IsometryMap::identity(s.rank())]);
    while let Some(w) = queue.pop_front() {
        for g in &group.generators {
            let next = w.compose(g);
            if seen.insert(next.matrix().clone()) {
                out.push(next.clone());
                if out.len() >= limit {
                    return (out, complete);
                }
                queue.push_back(next);
            }
        }
    }
    (out, complete)
}

/// Images of the model basis, degree by degree.
fn build_phi(
    input: &ManifoldData,
    q: &QuotientData,
    s: &IntegralForm,
    cand: &PhiCandidate,
) -> Result<Vec<IntMatrix>, String> {
    let ring = &input.ring;
    let r = s.rank();
    let g = input.genus;
    let layout = KunnethLayout { rank: r, genus: g };
    let b = ring.betti_numbers();
    let u: Vec<Vec<Int>> = (0..2 * g).map(|k| input.u1.column(k)).collect();
    let f = &input.f;

    let mut l: Vec<Vec<Int>> = Vec::with_capacity(r);
    for i in 0..r {
        let mut v = q.lift_vec(&cand.psi.matrix().column(i));
        for (x, y) in v.iter_mut().zip(f) {
            *x += &cand.c[i] * y;
        }
        l.push(v);
    }
    let mut deg2 = l.clone();
    deg2.push(f.clone());

    let mut deg3 = vec![Vec::new(); layout.betti()[3]];
    for k in 0..2 * g {
        for i in 0..r {
            deg3[layout.h3(k, i)] = ring.product(2, &l[i], 1, &u[k]);
        }
    }

    let top_m = if r > 0 {
        let terms = unit_combination(s.gram()).ok_or("form has no unit combination")?;
        let mut acc = vec![Int::zero(); b[4]];
        for (a, c, x) in terms {
            for (o, y) in acc.iter_mut().zip(ring.product(2, &l[a], 2, &l[c])) {
                *o += &x * y;
            }
        }
        acc
    } else {
        if b[4] != 1 {
            return Err(format!("b4 = {}, expected 1", b[4]));
        }
        let h = unit(1, 0);
        let e = ring.evaluate(&ring.product(4, &h, 2, f));
        if !e.abs().is_one() {
            return Err(format!("the generator of H⁴ pairs with f to {e}, not ±1"));
        }
        vec![e]
    };
    let mut deg4 = vec![top_m.clone()];
    deg4.extend(l.iter().map(|li| ring.product(2, li, 2, f)));
    let deg5: Vec<Vec<Int>> = u.iter().map(|uk| ring.product(4, &top_m, 1, uk)).collect();
    let deg6 = vec![ring.product(4, &top_m, 2, f)];

    let cols = [vec![unit(b[0], 0)], u.clone(), deg2, deg3, deg4, deg5, deg6];
    Ok(cols.iter().enumerate().map(|(k, c)| IntMatrix::from_columns(b[k], c)).collect())
}

/// Checks that `phi` is an isomorphism of graded rings from `model` to
/// `input` satisfying clauses i..iv.
pub(crate) fn verify_phi(
    model: &ManifoldData,
    input: &ManifoldData,
    phi: &[IntMatrix],
) -> Result<(), (Condition, String)> {
    let (mr, ir) = (&model.ring, &input.ring);
    let fail = |c: Condition, m: String| Err((c, m));
    for k in 0..=6 {
        let p = &phi[k];
        if p.rows() != ir.betti(k) || p.cols() != mr.betti(k) {
            return fail(Condition::C4ii, format!("φ{k} has shape {}x{}", p.rows(), p.cols()));
        }
        if !is_unimodular(p).unwrap_or(false) {
            return fail(Condition::C4ii, format!("φ{k} is not invertible over ℤ"));
        }
    }
    for k in 0..=6 {
        for l in 0..=6 - k {
            let lhs = mr.cup(k, l).map_out(&phi[k + l]);
            let rhs = ir.cup(k, l).pull_back(&phi[k], &phi[l]);
            if lhs != rhs {
                let (i, j) = (0..mr.betti(k))
                    .flat_map(|i| (0..mr.betti(l)).map(move |j| (i, j)))
                    .find(|&(i, j)| lhs.get(i, j) != rhs.get(i, j))
                    .expect("tensors differ somewhere");
                return fail(
                    Condition::C4ii,
                    format!("φ is not multiplicative on basis classes {} of H^{k} and {} of H^{l}", i + 1, j + 1),
                );
            }
        }
    }
    if phi[1] != input.u1 {
        return fail(Condition::C4ii, "φ on H¹ differs from u*".into());
    }
    if phi[2].mul_vec(&model.f) != input.f {
        return fail(Condition::C4ii, "φ does not send [F] to f".into());
    }
    let top: Vec<Int> = (0..mr.betti(6)).map(|j| ir.evaluate(&phi[6].column(j))).collect();
    if top != mr.eval() {
        let negated: Vec<Int> = mr.eval().iter().map(|x| -x).collect();
        if top == negated {
            return fail(Condition::Orientation, "φ([M] × [F]) = -[N]; re-run with the evaluation negated".into());
        }
        return fail(Condition::C4i, "φ([M] × [F]) ≠ [N]".into());
    }
    if reduce2(&phi[2].mul_vec(&w2_int(&model.w2))) != input.w2 {
        return fail(Condition::C4iii, "φ(w2(M × F)) ≠ w2(N)".into());
    }
    if phi[2].transpose().mul_vec(&input.p1) != model.p1 {
        return fail(Condition::C4iv, "p1 pairings are not preserved by φ".into());
    }
    Ok(())
}

/// Searches for the isomorphism `H*(model) → H*(input)`. The model must be
/// the output of `kunneth_product` for the form of the input on `V`.
pub fn search_phi(model: &ManifoldData, input: &ManifoldData, bound: SearchBound) -> PhiOutcome {
    let s = match model_form(model) {
        Ok(s) => s,
        Err(e) => return obstruction(Condition::C3, e.to_string()),
    };
    let r = s.rank();
    let q = match quotient_by_f(&input.ring, &input.f) {
        Ok(q) => q,
        Err(e) => return obstruction(Condition::C1, e.to_string()),
    };
    let sigma = s.signature();
    let p1f = dot(&input.p1, &input.f);
    let expected = Int::from(3 * sigma);
    if p1f != expected {
        if sigma != 0 && p1f == -&expected {
            return obstruction(
                Condition::Orientation,
                format!("⟨p1 ∪ f, [N]⟩ = {p1f} = -3·sign(I(N)); re-run with the evaluation negated"),
            );
        }
        return obstruction(Condition::C4iv, format!("⟨p1 ∪ f, [N]⟩ = {p1f}, expected 3·sign = {expected}"));
    }
    if model.ring.betti_numbers() != input.ring.betti_numbers() {
        return obstruction(
            Condition::C4ii,
            format!(
                "Betti numbers {:?} differ from those of the product {:?}",
                input.ring.betti_numbers(),
                model.ring.betti_numbers()
            ),
        );
    }
    let kappa = match splitting(input, &q, &s) {
        Ok(c) => c,
        Err(w) => return obstruction(Condition::C4ii, w),
    };
    // clause iv on H²(M): p1 must vanish on every L(e_i)
    let p1_lift = q.lift.transpose().mul_vec(&input.p1);
    for i in 0..r {
        let v = &p1_lift[i] + &kappa[i] * &p1f;
        if !v.is_zero() {
            return obstruction(
                Condition::C4iv,
                format!("⟨p1 ∪ L(e{}), [N]⟩ = {v}, but p1(M × F) vanishes on H²(M)", i + 1),
            );
        }
    }
    // clause iii, split into the V-part and the f-part
    let characteristic = characteristic_vector(&s).expect("unimodular");
    let w2 = w2_int(&input.w2);
    let w_v = reduce2(&q.project(&w2));
    if w_v != characteristic {
        return obstruction(
            Condition::C4iii,
            format!("w2 reduces to {w_v:?} on V, which is not characteristic for I(N) ({characteristic:?})"),
        );
    }
    let w_f = crate::cohomology::mod2(&q.f_component(&w2));
    let kappa_char: Int = characteristic.iter().zip(&kappa).filter(|(&v, _)| v == 1).map(|(_, k)| k.clone()).sum();
    if crate::cohomology::mod2(&kappa_char) != w_f {
        return obstruction(
            Condition::C4iii,
            format!(
                "the f-component of w2 is {w_f}, but w2(M × F) has f-component {}",
                crate::cohomology::mod2(&kappa_char)
            ),
        );
    }

    let identity = IsometryMap::identity(r);
    let mut tried: Vec<IntMatrix> = Vec::new();
    let mut first_failure: Option<(Condition, String)> = None;
    let mut attempt = |psi: IsometryMap, tried: &mut Vec<IntMatrix>| -> Option<PhiOutcome> {
        if tried.contains(psi.matrix()) {
            return None;
        }
        tried.push(psi.matrix().clone());
        let c = psi.matrix().transpose().mul_vec(&kappa);
        let cand = PhiCandidate { psi, c };
        let result = build_phi(input, &q, &s, &cand)
            .map_err(|w| (Condition::C4ii, w))
            .and_then(|phi| verify_phi(model, input, &phi).map(|_| phi));
        match result {
            Ok(phi) => Some(PhiOutcome::Found { phi, candidate: cand }),
            Err(e) => {
                first_failure.get_or_insert(e);
                None
            }
        }
    };
    if let Some(psi) = aligned_candidate(input, &q, &s) {
        if let Some(found) = attempt(psi, &mut tried) {
            return found;
        }
    }
    if let Some(found) = attempt(identity, &mut tried) {
        return found;
    }
    let (words, complete) = generator_words(&s, bound, MAX_CANDIDATES);
    for psi in words {
        if let Some(found) = attempt(psi, &mut tried) {
            return found;
        }
    }
    let (condition, witness) = first_failure.expect("at least one candidate tried");
    if s.is_indefinite() && (condition == Condition::C4ii) && !complete {
        return PhiOutcome::Inconclusive { bound };
    }
    obstruction(condition, witness)
}

/// The ring automorphism of `M × Σ_g` induced by an isometry of `s`,
/// extended by the identity on `H²(F)` and `H¹`.
pub fn realize_isometry(s: &IntegralForm, g: usize, psi: &IsometryMap) -> Result<Vec<IntMatrix>, RecognizerError> {
    let psi = IsometryMap::verified(psi.matrix().clone(), s, s)?;
    let model = kunneth_product(s, g)?;
    let q = quotient_by_f(&model.ring, &model.f)?;
    let cand = PhiCandidate { psi, c: vec![Int::zero(); s.rank()] };
    let phi = build_phi(&model, &q, s, &cand).map_err(RecognizerError::Verification)?;
    verify_phi(&model, &model, &phi).map_err(|(_, w)| RecognizerError::Verification(w))?;
    Ok(phi)
}
