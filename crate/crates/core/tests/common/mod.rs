//! Oracles shared by the integration tests. None of them calls back into
//! the routine it is used to check.
#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use prodrecog::cohomology::ManifoldData;
use prodrecog::linalg::IntMatrix;
use rand::Rng;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Coefficients `c_0..c_n` of `det(xI - A)` by Faddeev–LeVerrier; every
/// division is exact over ℤ.
pub fn char_poly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let a: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for t in 0..n {
                    s += &a[i][t] * &m[t][j];
                }
                if i == j {
                    s += &c[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut tr = BigInt::zero();
        for i in 0..n {
            for t in 0..n {
                tr += &a[i][t] * &m[t][i];
            }
        }
        c[n - k] = -tr / big(k as i64);
    }
    c
}

fn sign_changes(coeffs: &[BigInt]) -> usize {
    let signs: Vec<bool> = coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `(n_plus, n_minus, n_zero)` of a symmetric matrix. Its characteristic
/// polynomial has only real roots, so Descartes' sign counts are exact.
pub fn sign_count_inertia(a: &[Vec<i64>]) -> (usize, usize, usize) {
    let c = char_poly(a);
    let zero = c.iter().position(|x| !x.is_zero()).unwrap_or(c.len() - 1);
    let plus = sign_changes(&c);
    let reflected: Vec<BigInt> = c.iter().enumerate().map(|(i, x)| if i % 2 == 1 { -x } else { x.clone() }).collect();
    let minus = sign_changes(&reflected);
    (plus, minus, zero)
}

/// Random unimodular matrix with entries in `[-max, max]`, built from
/// elementary operations that keep that bound.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, max: i64, steps: usize) -> IntMatrix {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n == 0 {
        return IntMatrix::zeros(0, 0);
    }
    for _ in 0..steps {
        match rng.gen_range(0..4) {
            0 if n > 1 => {
                let (a, b) = distinct(rng, n);
                for row in &mut m {
                    row.swap(a, b);
                }
            }
            1 => {
                let a = rng.gen_range(0..n);
                for row in &mut m {
                    row[a] = -row[a];
                }
            }
            _ if n > 1 => {
                let (dst, src) = distinct(rng, n);
                let k = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
                if m.iter().all(|row| (row[dst] + k * row[src]).abs() <= max) {
                    for row in &mut m {
                        row[dst] += k * row[src];
                    }
                }
            }
            _ => {}
        }
    }
    IntMatrix::from_rows(&m)
}

fn distinct<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

fn bareiss_det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

pub fn det(m: &IntMatrix) -> BigInt {
    bareiss_det(m)
}

/// Product of basis classes computed straight from the stored tensor.
fn cup(d: &ManifoldData, k: usize, x: &[BigInt], l: usize, y: &[BigInt]) -> Vec<BigInt> {
    let t = d.ring.cup(k, l);
    let out = d.ring.betti(k + l);
    let mut v = vec![BigInt::zero(); out];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (o, c) in t.get(i, j).iter().enumerate() {
                v[o] += xi * yj * c;
            }
        }
    }
    v
}

/// Checks a map `model → input` degree by degree: unimodular in every
/// degree, multiplicative on every pair of basis classes, `φ₁ = u1`,
/// `φ₂(f) = f`, and the fundamental class, `w₂`, `p₁` preserved.
pub fn check_phi(model: &ManifoldData, input: &ManifoldData, phi: &[IntMatrix]) -> Result<(), String> {
    if phi.len() != 7 {
        return Err(format!("{} degrees", phi.len()));
    }
    for (k, p) in phi.iter().enumerate() {
        let b = input.ring.betti(k);
        if p.rows() != b || p.cols() != model.ring.betti(k) {
            return Err(format!("degree {k} has shape {}×{}", p.rows(), p.cols()));
        }
        if bareiss_det(p).abs() != BigInt::one() {
            return Err(format!("degree {k} not invertible over ℤ"));
        }
    }
    for k in 0..=6 {
        for l in 0..=6 - k {
            for i in 0..model.ring.betti(k) {
                for j in 0..model.ring.betti(l) {
                    let lhs = phi[k + l].mul_vec(model.ring.cup(k, l).get(i, j));
                    let rhs = cup(input, k, &phi[k].column(i), l, &phi[l].column(j));
                    if lhs != rhs {
                        return Err(format!("not multiplicative at degrees ({k},{l}), classes ({i},{j})"));
                    }
                }
            }
        }
    }
    if phi[1] != input.u1 {
        return Err("φ₁ differs from u1".into());
    }
    let f_model = model.f.clone();
    if phi[2].mul_vec(&f_model) != input.f {
        return Err("φ₂ does not fix f".into());
    }
    let top = phi[6].column(0);
    let pairing: BigInt = top.iter().zip(input.ring.eval()).map(|(a, b)| a * b).sum();
    if pairing != model.ring.eval()[0] {
        return Err("fundamental class not preserved".into());
    }
    // w2 is stored as a class, p1 as the functional x ↦ ⟨p1 ∪ x, [N]⟩
    let w_model: Vec<BigInt> = model.w2.iter().map(|&b| big(i64::from(b))).collect();
    let w_image = phi[2].mul_vec(&w_model);
    for (a, &b) in w_image.iter().zip(&input.w2) {
        if ((a % 2) + 2) % 2 != big(i64::from(b)) {
            return Err("w2 not preserved".into());
        }
    }
    for j in 0..model.ring.betti(2) {
        let p: BigInt = phi[2].column(j).iter().zip(&input.p1).map(|(a, b)| a * b).sum();
        if p != model.p1[j] {
            return Err(format!("p1 differs on class {j}"));
        }
    }
    Ok(())
}
