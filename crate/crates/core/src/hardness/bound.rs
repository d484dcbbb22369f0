use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::f_hat;
use crate::error::{Error, Result};

fn choose(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::from(1);
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// Exact `P[X >= t]` for `X` the number of good elements in a uniform
/// `m`-subset of `n` elements, `k` of them good.
pub fn hypergeometric_tail(n: usize, k: usize, m: usize, t: usize) -> BigRational {
    let total = choose(n, m);
    let hits: BigInt = (t..=k.min(m)).map(|j| choose(k, j) * choose(n - k, m - j)).sum();
    BigRational::new(hits, total)
}

/// Upper bound on the expected value, as a fraction of the optimum, of an
/// algorithm whose buffer behaves like a uniform `m`-subset and which can only
/// tell good from bad elements once it holds `r - 1` good ones:
/// `(1 - pk)·f̂(0, k) + pk`, with `p = P[>= r-1 good in the buffer]`.
/// Clamped to 1 when `pk > 1`.
pub fn prop_lb_bound(n: usize, k: usize, m: usize, r: usize) -> Result<f64> {
    if r == 0 || m > n || k > n {
        return Err(Error::InvalidInput(format!("need r >= 1, m <= n, k <= n (n={n}, k={k}, m={m}, r={r})")));
    }
    let p = hypergeometric_tail(n, k, m, r - 1).to_f64().unwrap_or(1.0);
    let pk = p * k as f64;
    if pk > 1.0 {
        log::warn!("bound is vacuous: p·k = {pk} > 1 for n={n}, k={k}, m={m}, r={r}");
        return Ok(1.0);
    }
    Ok((1.0 - pk) * f_hat(k, 0, k) + pk)
}
