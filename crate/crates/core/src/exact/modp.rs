//! Polynomial arithmetic over small prime fields, used by the modular stage of
//! integer factorization and by residue-shape checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::poly::IntPoly;

/// Dense polynomial over `F_p`, ascending, no trailing zeros. `p < 2^31`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyModP {
    pub p: u64,
    pub c: Vec<u64>,
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero");
    powmod(a, p - 2, p)
}

pub fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

impl PolyModP {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyModP { p, c }
    }

    pub fn from_int(f: &IntPoly, p: u64) -> Self {
        Self::new(p, f.coeffs().iter().map(|x| bigint_mod(x, p)).collect())
    }

    pub fn to_int_symmetric(&self) -> IntPoly {
        let half = self.p / 2;
        IntPoly::new(
            self.c
                .iter()
                .map(|&x| {
                    if x > half {
                        BigInt::from(x) - BigInt::from(self.p)
                    } else {
                        BigInt::from(x)
                    }
                })
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        PolyModP { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = invmod(self.lc(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, s: u64) -> Self {
        Self::new(
            self.p,
            self.c.iter().map(|&x| mulmod(x, s, self.p)).collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        Self::new(
            p,
            (0..n)
                .map(|i| {
                    (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % p
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        Self::new(
            p,
            (0..n)
                .map(|i| {
                    (self.c.get(i).copied().unwrap_or(0) + p - o.c.get(i).copied().unwrap_or(0)) % p
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        Self::new(p, out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        if self.degree().is_none_or(|n| n < dd) {
            return (Self::zero(p), self.clone());
        }
        let inv = invmod(d.lc(), p);
        let mut r = self.c.clone();
        let n = r.len() - 1;
        let mut q = vec![0u64; n - dd + 1];
        for i in (0..=n - dd).rev() {
            let c = mulmod(r[i + dd], inv, p);
            if c == 0 {
                continue;
            }
            q[i] = c;
            for (j, &dc) in d.c.iter().enumerate() {
                r[i + j] = (r[i + j] + p - mulmod(c, dc, p)) % p;
            }
        }
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = invmod(r0.lc(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &x)| mulmod(x, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn mulmod_poly(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    pub fn powmod_poly(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod_poly(&base, m);
            }
            base = base.mulmod_poly(&base, m);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.c.iter().rev() {
            acc = (mulmod(acc, x, self.p) + c) % self.p;
        }
        acc
    }
}

/// Factorization of a monic squarefree polynomial over `F_p` (p odd) into
/// monic irreducibles: distinct-degree then equal-degree splitting.
pub fn factor_squarefree_modp<R: Rng>(f: &PolyModP, rng: &mut R) -> Vec<PolyModP> {
    let p = f.p;
    debug_assert!(p > 2);
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = PolyModP::x(p);
    let mut xp = x.clone();
    let mut d = 0usize;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        xp = xp.powmod_poly(p as u128, &rest);
        let g = xp.sub(&x).gcd(&rest);
        if g.deg() > 0 {
            equal_degree_split(&g, d, rng, &mut out);
            rest = rest.div_rem(&g).0;
            xp = xp.rem(&rest);
        }
    }
    if rest.deg() > 0 {
        out.push(rest.monic());
    }
    out.sort_by(|a, b| {
        a.c.len()
            .cmp(&b.c.len())
            .then_with(|| a.c.iter().rev().cmp(b.c.iter().rev()))
    });
    out
}

fn equal_degree_split<R: Rng>(f: &PolyModP, d: usize, rng: &mut R, out: &mut Vec<PolyModP>) {
    let p = f.p;
    let n = f.deg();
    if n == d {
        out.push(f.monic());
        return;
    }
    loop {
        let a = PolyModP::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.deg() == 0 {
            continue;
        }
        // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p - 1)/2)
        let mut t = a.clone();
        let mut norm = a.clone();
        for _ in 1..d {
            t = t.powmod_poly(p as u128, f);
            norm = norm.mulmod_poly(&t, f);
        }
        let b = norm
            .powmod_poly(((p - 1) / 2) as u128, f)
            .sub(&PolyModP::one(p));
        let g = b.gcd(f);
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_rem(&g).0;
            equal_degree_split(&g, d, rng, out);
            equal_degree_split(&h, d, rng, out);
            return;
        }
    }
}
