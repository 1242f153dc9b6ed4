//! Integer factorization helpers: primality, Pollard–Brent, prime powers and
//! squarefree kernels. Inputs stay small (at most a few dozen digits), so a
//! `u64`/`u128` fast path with a `BigInt` fallback is enough.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn mul_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_u64(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1u64 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_u64(r, a, n);
        }
        a = mul_u64(a, a, n);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin with the first twenty prime bases; deterministic for 64-bit
/// inputs and overwhelmingly reliable beyond.
pub fn is_prime(n: &BigInt) -> bool {
    if let Some(x) = n.to_u64() {
        return is_prime_u64(x);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [
        2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ] {
        let a = BigInt::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn brent_u64(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_u64(x, x, n) + c) % n;
    let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
    let (mut x, mut ys);
    let mut g;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_u64(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += m;
            if k >= r || g != 1 {
                break;
            }
        }
        r *= 2;
        if g != 1 {
            break;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_big(n: &BigInt, c: u64) -> Option<BigInt> {
    let c = BigInt::from(c);
    let f = |x: &BigInt| (x * x + &c) % n;
    let mut x = BigInt::from(2);
    let mut y = x.clone();
    for i in 1u64..1 << 24 {
        x = f(&x);
        y = f(&f(&y));
        let g = (&x - &y).abs().gcd(n);
        if !g.is_one() {
            return (&g != n).then_some(g);
        }
        if i % 4096 == 0 && x == y {
            return None;
        }
    }
    None
}

fn split(n: &BigInt) -> BigInt {
    for c in 1u64.. {
        let d = match n.to_u64() {
            Some(x) => brent_u64(x, c).map(BigInt::from),
            None => brent_big(n, c),
        };
        if let Some(d) = d {
            return d;
        }
    }
    unreachable!()
}

fn factor_into(n: BigInt, out: &mut BTreeMap<BigInt, u32>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let r = n.sqrt();
    if &r * &r == n {
        factor_into(r.clone(), out);
        factor_into(r, out);
        return;
    }
    let d = split(&n);
    let e = &n / &d;
    factor_into(d, out);
    factor_into(e, out);
}

/// Prime factorization of `|n|` (`n != 0`), primes ascending.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero(), "factorization of zero");
    let mut n = n.abs();
    let mut out = BTreeMap::new();
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let p = BigInt::from(p);
        while (&n % &p).is_zero() {
            n /= &p;
            *out.entry(p.clone()).or_insert(0) += 1;
        }
    }
    let mut d = 53u64;
    while d < 10_000 {
        let db = BigInt::from(d);
        if &db * &db > n {
            break;
        }
        while (&n % &db).is_zero() {
            n /= &db;
            *out.entry(db.clone()).or_insert(0) += 1;
        }
        d += 2;
    }
    factor_into(n, &mut out);
    out.into_iter().collect()
}

/// `(p, v)` with `q = p^v`, or `None` if `q` is not a prime power > 1.
pub fn prime_power(q: &BigInt) -> Option<(BigInt, u32)> {
    if q <= &BigInt::one() {
        return None;
    }
    let f = factor_integer(q);
    (f.len() == 1).then(|| f[0].clone())
}

/// Squarefree kernel keeping the sign: `n = s * k^2` with `s` squarefree.
pub fn squarefree_kernel(n: &BigInt) -> BigInt {
    assert!(!n.is_zero(), "squarefree kernel of zero");
    let mut s = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    for (p, e) in factor_integer(n) {
        if e % 2 == 1 {
            s *= p;
        }
    }
    s
}

pub fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

/// Integer square root of a perfect square, `None` otherwise.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Euler's totient of a machine-size integer.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// Kronecker symbol `(a/p)` for an odd prime `p` (Euler's criterion).
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    if pow_u64(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}
