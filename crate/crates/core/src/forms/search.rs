//! Isometry and automorphism search by backtracking over candidate basis
//! images that reproduce the target Gram matrix entry by entry.
//!
//! Definite forms use complete candidate sets (all vectors of the required
//! norm), so a failed search is a proof of non-existence and automorphism
//! groups come with exact orders from a stabilizer chain. Indefinite forms
//! only see vectors with entries in `[-bound, bound]`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use super::vectors::{box_vectors, short_vectors};
use super::{FormError, IntegralForm, IsometryMap};
use crate::linalg::{Int, IntMatrix};

/// Maximum absolute entry of candidate vectors for indefinite forms.
pub type SearchBound = i64;

pub const DEFAULT_BOUND: SearchBound = 3;

/// Largest box `(2B+1)^r` enumerated in full; bigger boxes fall back to
/// vectors with at most two nonzero entries.
const BOX_LIMIT: u64 = 400_000;
/// Node budget per indefinite backtracking run.
const NODE_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsometryOutcome {
    Found(IsometryMap),
    /// Certificate naming the invariant that differs, or the exhausted
    /// complete search.
    NotIsometric(String),
    /// Same invariants (so classification guarantees an isometry), but
    /// none was found with entries bounded by `bound`.
    Inconclusive {
        bound: SearchBound,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupOrder {
    Exact(u128),
    /// Number of automorphisms whose matrix entries lie in `[-bound, bound]`.
    WithinBound {
        count: u128,
        bound: SearchBound,
    },
    Unknown,
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Exact(n) => write!(f, "{n}"),
            GroupOrder::WithinBound { count, bound } => {
                write!(f, "{count} (automorphisms with entries in [-{bound},{bound}])")
            }
            GroupOrder::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub generators: Vec<IsometryMap>,
    pub order: GroupOrder,
}

struct Cand {
    v: Vec<i64>,
    gv: Vec<i64>,
}

struct Backtrack<'a> {
    target: &'a [Vec<i64>],
    cands: Vec<Vec<Cand>>,
    order: Vec<usize>,
    budget: u64,
    nodes: u64,
    exhausted: bool,
}

impl<'a> Backtrack<'a> {
    fn new(
        lattice: &[Vec<i64>],
        target: &'a [Vec<i64>],
        vectors: Vec<Vec<Vec<i64>>>,
        order: Vec<usize>,
        budget: u64,
    ) -> Self {
        let cands = vectors
            .into_iter()
            .map(|vs| {
                vs.into_iter()
                    .map(|v| {
                        let gv = lattice.iter().map(|row| dot64(row, &v)).collect();
                        Cand { v, gv }
                    })
                    .collect()
            })
            .collect();
        Backtrack { target, cands, order, budget, nodes: 0, exhausted: false }
    }

    fn compatible(&self, chosen: &[usize], pos: usize, c: usize) -> bool {
        let col = self.order[pos];
        let cand = &self.cands[col][c];
        chosen.iter().enumerate().all(|(q, &cq)| {
            let col_q = self.order[q];
            dot64(&self.cands[col_q][cq].v, &cand.gv) == self.target[col][col_q]
        })
    }

    /// Depth-first extension of `chosen`; `visit` returns false to stop.
    fn extend(&mut self, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&Self, &[usize]) -> bool) -> bool {
        let pos = chosen.len();
        if pos == self.order.len() {
            return visit(self, chosen);
        }
        let col = self.order[pos];
        for c in 0..self.cands[col].len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exhausted = true;
                return false;
            }
            if !self.compatible(chosen, pos, c) {
                continue;
            }
            chosen.push(c);
            let go_on = self.extend(chosen, visit);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    fn first(&mut self, prefix: &[usize]) -> Option<Vec<usize>> {
        for pos in 0..prefix.len() {
            if !self.compatible(&prefix[..pos], pos, prefix[pos]) {
                return None;
            }
        }
        let mut found = None;
        let mut chosen = prefix.to_vec();
        self.extend(&mut chosen, &mut |_, sol| {
            found = Some(sol.to_vec());
            false
        });
        found
    }

    fn count_all(&mut self) -> Option<u128> {
        let mut count = 0u128;
        let mut chosen = Vec::new();
        self.extend(&mut chosen, &mut |_, _| {
            count += 1;
            true
        });
        (!self.exhausted).then_some(count)
    }

    /// Column `col` of the solution is the image of basis vector `col`.
    fn matrix(&self, sol: &[usize]) -> Vec<Vec<i64>> {
        let n = self.order.len();
        let mut cols = vec![Vec::new(); n];
        for (pos, &c) in sol.iter().enumerate() {
            let col = self.order[pos];
            cols[col] = self.cands[col][c].v.clone();
        }
        cols
    }

    fn index_of(&self, col: usize, v: &[i64]) -> Option<usize> {
        self.cands[col].binary_search_by(|c| c.v.as_slice().cmp(v)).ok()
    }
}

fn dot64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn apply(cols: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let n = cols.first().map_or(0, |c| c.len());
    let mut out = vec![0i64; n];
    for (c, &x) in cols.iter().zip(v) {
        if x != 0 {
            for (o, y) in out.iter_mut().zip(c) {
                *o += x * y;
            }
        }
    }
    out
}

fn to_int_matrix(cols: &[Vec<i64>]) -> IntMatrix {
    let n = cols.len();
    let columns: Vec<Vec<Int>> = cols.iter().map(|c| c.iter().map(|&x| Int::from(x)).collect()).collect();
    IntMatrix::from_columns(n, &columns)
}

fn unit64(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Candidate images per basis column: all vectors of the same norm.
fn candidate_sets(lattice: &IntegralForm, norms: &[i64], bound: SearchBound) -> (Vec<Vec<Vec<i64>>>, bool) {
    let mut cache: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
    let gram = lattice.gram_i64();
    let mut complete = true;
    let sets = norms
        .iter()
        .map(|&q| {
            cache
                .entry(q)
                .or_insert_with(|| {
                    if lattice.is_definite() {
                        short_vectors(lattice, q)
                    } else {
                        let (vs, full) = box_vectors(&gram, q, bound, BOX_LIMIT);
                        complete &= full;
                        vs
                    }
                })
                .clone()
        })
        .collect();
    (sets, complete)
}

fn invariant_certificate(f1: &IntegralForm, f2: &IntegralForm) -> Option<String> {
    if f1.rank() != f2.rank() {
        return Some(format!("rank differs: {} vs {}", f1.rank(), f2.rank()));
    }
    if f1.parity() != f2.parity() {
        return Some(format!("parity differs: {} vs {}", f1.parity(), f2.parity()));
    }
    if f1.signature() != f2.signature() {
        return Some(format!("signature differs: {} vs {}", f1.signature(), f2.signature()));
    }
    if f1.determinant() != f2.determinant() {
        return Some(format!("determinant differs: {} vs {}", f1.determinant(), f2.determinant()));
    }
    None
}

/// Searches for `p` with `pᵀ · gram(f1) · p = gram(f2)`.
pub fn isometry(f1: &IntegralForm, f2: &IntegralForm, bound: SearchBound) -> Result<IsometryOutcome, FormError> {
    f1.require_unimodular()?;
    f2.require_unimodular()?;
    if let Some(cert) = invariant_certificate(f1, f2) {
        return Ok(IsometryOutcome::NotIsometric(cert));
    }
    let n = f1.rank();
    if f1.gram() == f2.gram() {
        return Ok(IsometryOutcome::Found(IsometryMap::identity(n)));
    }
    let target = f2.gram_i64();
    let norms: Vec<i64> = (0..n).map(|i| target[i][i]).collect();
    let (sets, _) = candidate_sets(f1, &norms, bound);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (norms[i].abs(), i));
    let definite = f1.is_definite();
    let budget = if definite { u64::MAX } else { NODE_BUDGET };
    let mut bt = Backtrack::new(&f1.gram_i64(), &target, sets, order, budget);
    match bt.first(&[]) {
        Some(sol) => {
            let p = to_int_matrix(&bt.matrix(&sol));
            Ok(IsometryOutcome::Found(IsometryMap::verified(p, f1, f2)?))
        }
        None if definite => Ok(IsometryOutcome::NotIsometric(
            "exhaustive search over all vectors of the required norms found no isometry".into(),
        )),
        None => Ok(IsometryOutcome::Inconclusive { bound }),
    }
}

struct Chain {
    generators: Vec<Vec<Vec<i64>>>,
    order: u128,
    complete: bool,
}

/// Stabilizer chain: for each level ℓ (from the last basis vector up), the
/// orbit of e_ℓ under the pointwise stabilizer of e_0..e_{ℓ-1}. Candidates
/// outside the current orbit are tested by a single backtracking search; a
/// success adds a generator. The order is the product of the orbit sizes.
fn stabilizer_chain(form: &IntegralForm, bound: SearchBound, budget: u64) -> Chain {
    let n = form.rank();
    let gram = form.gram_i64();
    let norms: Vec<i64> = (0..n).map(|i| gram[i][i]).collect();
    let (sets, box_complete) = candidate_sets(form, &norms, bound);
    let mut bt = Backtrack::new(&gram, &gram, sets, (0..n).collect(), budget);
    let mut generators: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut order = 1u128;
    let mut complete = box_complete;

    let fixed: Vec<usize> =
        (0..n).map(|j| bt.index_of(j, &unit64(n, j)).expect("basis vector is a candidate")).collect();

    for level in (0..n).rev() {
        let admissible: HashSet<Vec<i64>> = bt.cands[level]
            .iter()
            .filter(|c| (0..level).all(|j| c.gv[j] == gram[level][j]))
            .map(|c| c.v.clone())
            .collect();
        let orbit_of = |gens: &[Vec<Vec<i64>>]| -> HashSet<Vec<i64>> {
            let start = unit64(n, level);
            let mut seen = HashSet::from([start.clone()]);
            let mut queue = VecDeque::from([start]);
            while let Some(w) = queue.pop_front() {
                for g in gens {
                    let u = apply(g, &w);
                    if (form.is_definite() || admissible.contains(&u)) && seen.insert(u.clone()) {
                        queue.push_back(u);
                    }
                }
            }
            seen
        };
        let mut orbit = orbit_of(&generators);
        let mut todo: Vec<&Cand> = bt.cands[level].iter().filter(|c| admissible.contains(&c.v)).collect();
        todo.sort_by(|a, b| a.v.cmp(&b.v));
        let todo: Vec<Vec<i64>> = todo.into_iter().map(|c| c.v.clone()).collect();
        for v in todo {
            if orbit.contains(&v) {
                continue;
            }
            let mut prefix = fixed[..level].to_vec();
            prefix.push(bt.index_of(level, &v).expect("candidate"));
            bt.nodes = 0;
            bt.exhausted = false;
            match bt.first(&prefix) {
                Some(sol) => {
                    generators.push(bt.matrix(&sol));
                    orbit = orbit_of(&generators);
                }
                None => complete &= !bt.exhausted,
            }
        }
        order = order.saturating_mul(orbit.len() as u128);
    }
    Chain { generators, order, complete }
}

/// Generators of the automorphism group and its order (exact for definite
/// forms; for indefinite forms the count of automorphisms within the entry
/// bound, when that box can be searched completely).
pub fn automorphism_group(form: &IntegralForm, bound: SearchBound) -> Result<AutomorphismGroup, FormError> {
    form.require_unimodular()?;
    let n = form.rank();
    if n == 0 {
        return Ok(AutomorphismGroup { generators: Vec::new(), order: GroupOrder::Exact(1) });
    }
    let wrap = |gens: Vec<Vec<Vec<i64>>>| -> Result<Vec<IsometryMap>, FormError> {
        gens.iter().map(|g| IsometryMap::verified(to_int_matrix(g), form, form)).collect()
    };
    if form.is_definite() {
        let chain = stabilizer_chain(form, bound, u64::MAX);
        let order = if chain.complete { GroupOrder::Exact(chain.order) } else { GroupOrder::Unknown };
        return Ok(AutomorphismGroup { generators: wrap(chain.generators)?, order });
    }
    let chain = stabilizer_chain(form, bound, NODE_BUDGET);
    let gram = form.gram_i64();
    let norms: Vec<i64> = (0..n).map(|i| gram[i][i]).collect();
    let (sets, full_box) = candidate_sets(form, &norms, bound);
    let order = if full_box {
        let mut bt = Backtrack::new(&gram, &gram, sets, (0..n).collect(), NODE_BUDGET);
        match bt.count_all() {
            Some(count) => GroupOrder::WithinBound { count, bound },
            None => GroupOrder::Unknown,
        }
    } else {
        GroupOrder::Unknown
    };
    Ok(AutomorphismGroup { generators: wrap(chain.generators)?, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::named::{e8_gram, parse_form_spec};

    fn form(rows: &[&[i64]]) -> IntegralForm {
        IntegralForm::new(IntMatrix::from_rows(rows)).unwrap()
    }

    #[test]
    fn identity_for_equal_forms() {
        let f = parse_form_spec("H+<1>").unwrap();
        match isometry(&f, &f, DEFAULT_BOUND).unwrap() {
            IsometryOutcome::Found(m) => assert!(m.is_identity()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn definite_isometry_found() {
        let a = form(&[&[1, 0], &[0, 1]]);
        let b = form(&[&[1, 1], &[1, 2]]);
        match isometry(&a, &b, DEFAULT_BOUND).unwrap() {
            IsometryOutcome::Found(m) => assert_eq!(&m.matrix().congruence(a.gram()), b.gram()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parity_certificate() {
        let a = form(&[&[1, 0], &[0, 1]]);
        let h = form(&[&[0, 1], &[1, 0]]);
        match isometry(&a, &h, DEFAULT_BOUND).unwrap() {
            IsometryOutcome::NotIsometric(cert) => assert!(cert.contains("parity")),
            other => panic!("{other:?}"),
        }
        let odd = form(&[&[1, 0], &[0, -1]]);
        match isometry(&odd, &h, DEFAULT_BOUND).unwrap() {
            IsometryOutcome::NotIsometric(cert) => assert!(cert.contains("parity")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn indefinite_isometry_after_basis_change() {
        let h = form(&[&[0, 1], &[1, 0]]);
        let p = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
        let h2 = h.transformed(&p);
        match isometry(&h, &h2, DEFAULT_BOUND).unwrap() {
            IsometryOutcome::Found(m) => assert_eq!(&m.matrix().congruence(h.gram()), h2.gram()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_group_orders() {
        let one = form(&[&[1]]);
        assert_eq!(automorphism_group(&one, 1).unwrap().order, GroupOrder::Exact(2));
        let z2 = form(&[&[1, 0], &[0, 1]]);
        assert_eq!(automorphism_group(&z2, 1).unwrap().order, GroupOrder::Exact(8));
        let h = form(&[&[0, 1], &[1, 0]]);
        let g = automorphism_group(&h, 1).unwrap();
        assert_eq!(g.order, GroupOrder::WithinBound { count: 4, bound: 1 });
        assert!(!g.generators.is_empty());
        let z3 = IntegralForm::new(IntMatrix::identity(3)).unwrap();
        assert_eq!(automorphism_group(&z3, 1).unwrap().order, GroupOrder::Exact(48));
        let e = automorphism_group(&IntegralForm::empty(), 1).unwrap();
        assert_eq!(e.order, GroupOrder::Exact(1));
    }

    #[test]
    fn negative_definite_group() {
        let f = parse_form_spec("<-1>+<-1>").unwrap();
        assert_eq!(automorphism_group(&f, 1).unwrap().order, GroupOrder::Exact(8));
    }

    #[test]
    fn e8_generators_are_isometries() {
        let e8 = IntegralForm::new(e8_gram()).unwrap();
        let g = automorphism_group(&e8, DEFAULT_BOUND).unwrap();
        for m in &g.generators {
            assert_eq!(&m.matrix().congruence(e8.gram()), e8.gram());
        }
    }
}
