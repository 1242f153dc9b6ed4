//! Cyclotomic polynomials and recognition of roots of unity.

use super::intfactor::euler_phi;
use super::poly::IntPoly;

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn mobius(mut n: u64) -> i32 {
    let mut m = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            m = -m;
        }
        p += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

fn t_pow_minus_one(d: u64) -> IntPoly {
    let mut c = vec![0i64; d as usize + 1];
    c[0] = -1;
    c[d as usize] = 1;
    IntPoly::from_i64s(&c)
}

/// The `n`-th cyclotomic polynomial `prod_{d | n} (t^d - 1)^mu(n/d)`.
pub fn cyclotomic_poly(n: u64) -> IntPoly {
    assert!(n > 0);
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for d in divisors(n) {
        match mobius(n / d) {
            1 => num = &num * &t_pow_minus_one(d),
            -1 => den = &den * &t_pow_minus_one(d),
            _ => {}
        }
    }
    num.exact_div(&den).expect("cyclotomic quotient is exact")
}

/// All `n` with `phi(n) <= bound`, ascending. Uses `phi(n) >= sqrt(n/2)`.
pub fn orders_with_phi_at_most(bound: u64) -> Vec<u64> {
    (1..=2 * bound * bound)
        .filter(|&n| euler_phi(n) <= bound)
        .collect()
}

/// `Some(n)` when `f` (up to sign) is the `n`-th cyclotomic polynomial.
pub fn cyclotomic_order(f: &IntPoly) -> Option<u64> {
    let d = f.degree()? as u64;
    if d == 0 {
        return None;
    }
    let f = f.primitive_part();
    // quick rejections: cyclotomic polynomials are monic with constant
    // term +-1
    if !f.is_monic() || f.coeff(0).magnitude() != &num_bigint::BigUint::from(1u32) {
        return None;
    }
    (1..=2 * d * d)
        .filter(|&n| euler_phi(n) == d)
        .find(|&n| cyclotomic_poly(n) == f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), p(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), p(&[1, 1]));
        assert_eq!(cyclotomic_poly(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_poly(15).deg(), 8);
    }

    #[test]
    fn recognition() {
        assert_eq!(cyclotomic_order(&p(&[1, 1, 1])), Some(3));
        assert_eq!(cyclotomic_order(&p(&[5, -1, 1])), None);
        assert_eq!(cyclotomic_order(&p(&[1, 0, -1, 0, 1])), Some(12));
        assert_eq!(cyclotomic_order(&p(&[1, 1])), Some(2));
    }

    #[test]
    fn product_of_all_cyclotomics_dividing() {
        // t^n - 1 = prod_{d|n} Phi_d
        for n in 1..40u64 {
            let prod = divisors(n)
                .into_iter()
                .fold(IntPoly::one(), |a, d| &a * &cyclotomic_poly(d));
            assert_eq!(prod, t_pow_minus_one(n));
        }
    }

    #[test]
    fn phi_bound_list() {
        let l = orders_with_phi_at_most(2);
        assert_eq!(l, vec![1, 2, 3, 4, 6]);
    }
}
