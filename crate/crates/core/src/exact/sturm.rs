//! Exact real-root counting with Sturm sequences.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::IntPoly;
use super::ExactError;

/// Sturm chain `f, f', -rem, ...` with each member replaced by a positive
/// multiple of itself (primitive parts), which leaves all signs intact.
pub fn sturm_chain(f: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![f.clone()];
    if f.deg() == 0 {
        return chain;
    }
    chain.push(f.derivative());
    loop {
        let n = chain.len();
        let r = chain[n - 2].pseudo_rem_abs(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        let c = r.content();
        chain.push(-r.div_scalar_exact(&c));
    }
    chain
}

fn sign_at_pos_inf(f: &IntPoly) -> Ordering {
    f.leading()
        .map_or(Ordering::Equal, |c| c.sign().cmp(&num_bigint::Sign::NoSign))
}

fn sign_at_neg_inf(f: &IntPoly) -> Ordering {
    let s = sign_at_pos_inf(f);
    if f.deg() % 2 == 1 {
        s.reverse()
    } else {
        s
    }
}

fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut v = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn variations_at(chain: &[IntPoly], x: Option<&BigRational>, pos_inf: bool) -> usize {
    match x {
        Some(x) => variations(chain.iter().map(|p| p.sign_at(x))),
        None if pos_inf => variations(chain.iter().map(sign_at_pos_inf)),
        None => variations(chain.iter().map(sign_at_neg_inf)),
    }
}

/// Number of distinct real roots of `f` in `(lo, hi]`; `None` stands for the
/// corresponding infinity. Non-squarefree input is accepted as long as no
/// endpoint is a root.
pub fn sturm_real_root_count(
    f: &IntPoly,
    lo: Option<&BigRational>,
    hi: Option<&BigRational>,
) -> Result<usize, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if let (Some(a), Some(b)) = (lo, hi) {
        if a >= b {
            return Ok(0);
        }
    }
    if f.deg() == 0 {
        return Ok(0);
    }
    if !f.is_squarefree() {
        for x in [lo, hi].into_iter().flatten() {
            if f.sign_at(x) == Ordering::Equal {
                return Err(ExactError::NotSquarefreeAtEndpoint);
            }
        }
    }
    let chain = sturm_chain(f);
    let vlo = variations_at(&chain, lo, false);
    let vhi = variations_at(&chain, hi, true);
    Ok(vlo.saturating_sub(vhi))
}

/// Number of distinct real roots of `f` on the whole line.
pub fn real_root_count(f: &IntPoly) -> usize {
    sturm_real_root_count(f, None, None).expect("no finite endpoints")
}

/// True when `f` vanishes at the rational `x`.
pub fn is_root(f: &IntPoly, x: &BigRational) -> bool {
    f.eval_rational(x).is_zero()
}

/// Upper bound on the absolute value of real roots (Cauchy).
pub fn cauchy_bound(f: &IntPoly) -> BigRational {
    let lc = f.leading().expect("nonzero").abs();
    let m = f.coeffs()[..f.deg()]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    BigRational::new(m, lc) + BigRational::from_integer(1.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn basic_counts() {
        assert_eq!(real_root_count(&p(&[-2, 0, 1])), 2);
        assert_eq!(real_root_count(&p(&[1, 0, 1])), 0);
        // roots 1, 2, 3
        let f = &(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[-3, 1]);
        assert_eq!(
            sturm_real_root_count(&f, Some(&r(1, 1)), Some(&r(3, 1))).unwrap(),
            2
        );
        assert_eq!(
            sturm_real_root_count(&f, Some(&r(0, 1)), Some(&r(5, 2))).unwrap(),
            2
        );
        assert_eq!(sturm_real_root_count(&f, None, Some(&r(1, 1))).unwrap(), 1);
    }

    #[test]
    fn multiple_roots_counted_once() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[2, 1]);
        assert_eq!(real_root_count(&f), 2);
        assert!(matches!(
            sturm_real_root_count(&f, Some(&r(1, 1)), None),
            Err(ExactError::NotSquarefreeAtEndpoint)
        ));
    }

    #[test]
    fn cleared_cubic_from_constructor() {
        // x(x^2 - 3) + 15/16^4 with denominators cleared.
        let d = 16i64.pow(4);
        let f = p(&[15, -3 * d, 0, d]);
        assert_eq!(real_root_count(&f), 3);
    }
}
