//! Standard unimodular forms and the `+`-joined composition syntax
//! (`<1>`, `<-1>`, `H`, `E8`, `-E8`, e.g. `-E8+-E8+H+H+H`).

use super::{FormError, IntegralForm};
use crate::linalg::IntMatrix;

/// Positive definite E8 Gram matrix from the Dynkin diagram: a chain
/// 0-1-2-3-4-5-6 with node 7 attached to node 4.
pub fn e8_gram() -> IntMatrix {
    let mut g = IntMatrix::zeros(8, 8);
    for i in 0..8 {
        g[(i, i)] = 2.into();
    }
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    for (a, b) in edges {
        g[(a, b)] = (-1).into();
        g[(b, a)] = (-1).into();
    }
    g
}

pub fn hyperbolic_gram() -> IntMatrix {
    IntMatrix::from_rows(&[[0, 1], [1, 0]])
}

fn summand(token: &str) -> Result<IntMatrix, FormError> {
    let t = token.trim();
    let (negate, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let gram = match body {
        "H" => hyperbolic_gram(),
        "E8" => e8_gram(),
        "empty" | "Empty" | "0" => IntMatrix::zeros(0, 0),
        _ => {
            let inner = body
                .strip_prefix('<')
                .and_then(|s| s.strip_suffix('>'))
                .ok_or_else(|| FormError::BadSpec(format!("unknown summand `{t}`")))?;
            let n: i64 =
                inner.trim().parse().map_err(|_| FormError::BadSpec(format!("bad diagonal entry in `{t}`")))?;
            IntMatrix::diagonal(&[n])
        }
    };
    Ok(if negate { gram.neg() } else { gram })
}

/// Parses a `+`- (or `⊕`-) joined composition of named summands.
pub fn parse_form_spec(spec: &str) -> Result<IntegralForm, FormError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(FormError::BadSpec("empty specification".into()));
    }
    let mut gram = IntMatrix::zeros(0, 0);
    for token in spec.split(['+', '⊕']) {
        if token.trim().is_empty() {
            return Err(FormError::BadSpec(format!("empty summand in `{spec}`")));
        }
        gram = gram.direct_sum(&summand(token)?);
    }
    IntegralForm::new(gram)
}
