//! Complex balls with dyadic centres: `(re + i im) / 2^prec` with an upper
//! bound `rad / 2^prec` on the distance to the represented number. Every
//! operation rounds outward, so the enclosure is rigorous.
//!
//! Also fixed-point `atan`/`pi` for phase extraction; those are heuristic
//! inputs to lattice reduction and carry no error bound.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub re: BigInt,
    pub im: BigInt,
    pub rad: BigInt,
    pub prec: u32,
}

pub fn isqrt_floor(n: &BigInt) -> BigInt {
    n.sqrt()
}

pub fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &r * &r < *n {
        r + 1
    } else {
        r
    }
}

/// `ceil(a / 2^k)` for `a >= 0`.
fn shr_ceil(a: &BigInt, k: u32) -> BigInt {
    let mask = (BigInt::one() << k) - 1;
    let q: BigInt = a >> k;
    if (a & &mask).is_zero() {
        q
    } else {
        q + 1
    }
}

impl Ball {
    pub fn exact(re: BigInt, im: BigInt, prec: u32) -> Self {
        Ball {
            re,
            im,
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn integer(n: &BigInt, prec: u32) -> Self {
        Ball::exact(n << prec, BigInt::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Ball::integer(&BigInt::one(), prec)
    }

    pub fn conj(&self) -> Self {
        Ball {
            re: self.re.clone(),
            im: -&self.im,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    /// `|centre|^2` in units of `2^-2prec`.
    pub fn mid_norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Upper bound on `|centre|` in ulps.
    pub fn mid_abs_upper(&self) -> BigInt {
        isqrt_ceil(&self.mid_norm_sq())
    }

    /// Upper bound on `|z|` over the ball, in ulps.
    pub fn abs_upper(&self) -> BigInt {
        self.mid_abs_upper() + &self.rad
    }

    /// Lower bound on `|z|` over the ball, in ulps (may be negative).
    pub fn abs_lower(&self) -> BigInt {
        isqrt_floor(&self.mid_norm_sq()) - &self.rad
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        assert_eq!(self.prec, o.prec, "mixed precisions");
        let p = self.prec;
        let re = (&self.re * &o.re - &self.im * &o.im) >> p;
        let im = (&self.re * &o.im + &self.im * &o.re) >> p;
        let err =
            self.mid_abs_upper() * &o.rad + o.mid_abs_upper() * &self.rad + &self.rad * &o.rad;
        // truncating both components loses less than sqrt(2) ulp
        let rad = shr_ceil(&err, p) + 2;
        Ball {
            re,
            im,
            rad,
            prec: p,
        }
    }

    pub fn pow(&self, mut e: u64) -> Ball {
        let mut acc = Ball::one(self.prec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn sub_integer(&self, n: &BigInt) -> Ball {
        Ball {
            re: &self.re - (n << self.prec),
            im: self.im.clone(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    /// True when the closed disks intersect.
    pub fn overlaps(&self, o: &Ball) -> bool {
        let dr = &self.re - &o.re;
        let di = &self.im - &o.im;
        let r = &self.rad + &o.rad;
        &dr * &dr + &di * &di <= &r * &r
    }

    /// True when `o` lies inside `self`.
    pub fn contains(&self, o: &Ball) -> bool {
        let dr = &self.re - &o.re;
        let di = &self.im - &o.im;
        let gap = &self.rad - &o.rad;
        !gap.is_negative() && &dr * &dr + &di * &di <= &gap * &gap
    }

    /// Same number at a higher precision (exact).
    pub fn widen(&self, prec: u32) -> Ball {
        assert!(prec >= self.prec);
        let s = prec - self.prec;
        Ball {
            re: &self.re << s,
            im: &self.im << s,
            rad: &self.rad << s,
            prec,
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            to_f64_scaled(&self.re, self.prec),
            to_f64_scaled(&self.im, self.prec),
        )
    }

    pub fn radius_f64(&self) -> f64 {
        to_f64_scaled(&self.rad, self.prec)
    }
}

/// `x / 2^k` as a float (for display and seeding only).
pub fn to_f64_scaled(x: &BigInt, k: u32) -> f64 {
    let bits = x.bits() as i64;
    let shift = (bits - 60).max(0);
    let m = (x >> shift as u32).to_f64().unwrap_or(0.0);
    m * 2f64.powi((shift - k as i64) as i32)
}

/// `x * 2^k` rounded to an integer.
pub fn from_f64_scaled(x: f64, k: u32) -> BigInt {
    if x == 0.0 || !x.is_finite() {
        return BigInt::zero();
    }
    let (mant, exp) = frexp(x);
    let m = BigInt::from((mant * 2f64.powi(53)) as i64);
    let e = exp as i64 - 53 + k as i64;
    if e >= 0 {
        m << e as u32
    } else {
        m >> (-e) as u32
    }
}

fn frexp(x: f64) -> (f64, i32) {
    let e = x.abs().log2().floor() as i32 + 1;
    (x / 2f64.powi(e), e)
}

/// `atan(t)` for a fixed-point `t` with `|t| <= 1`.
fn atan_small(t: &BigInt, prec: u32) -> BigInt {
    let one = BigInt::one() << prec;
    // halve the argument: atan t = 2 atan(t / (1 + sqrt(1 + t^2)))
    let mut t = t.clone();
    let halvings = 8;
    for _ in 0..halvings {
        let t2 = (&t * &t) >> prec;
        let s = ((&one + t2) << prec).sqrt();
        t = (&t << prec) / (&one + s);
    }
    let t2 = (&t * &t) >> prec;
    let mut term = t.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        let c = &term / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += c;
        } else {
            sum -= c;
        }
        // truncate toward zero so negative terms also vanish
        term = (&term * &t2) / &one;
        k += 1;
    }
    sum << halvings
}

/// `atan(1/n)` by the Gregory series.
fn atan_inv(n: u64, prec: u32) -> BigInt {
    let n2 = BigInt::from(n * n);
    let mut term = (BigInt::one() << prec) / BigInt::from(n);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        let c = &term / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += c;
        } else {
            sum -= c;
        }
        term /= &n2;
        k += 1;
    }
    sum
}

/// `pi * 2^prec` (Machin).
pub fn pi_fixed(prec: u32) -> BigInt {
    let g = prec + 16;
    let pi = atan_inv(5, g) * 16 - atan_inv(239, g) * 4;
    pi >> 16
}

/// Argument of `re + i im` divided by `pi`, in `(-1, 1]`, as `x * 2^prec`.
pub fn arg_over_pi(re: &BigInt, im: &BigInt, prec: u32) -> BigInt {
    let g = prec + 32;
    let pi = pi_fixed(g);
    let half_pi = &pi >> 1;
    let a = if re.is_zero() && im.is_zero() {
        BigInt::zero()
    } else if im.abs() <= re.abs() {
        let t = (im << g) / re;
        let base = atan_small(&t, g);
        match re.sign() {
            Sign::Minus if im.is_negative() => base - &pi,
            Sign::Minus => base + &pi,
            _ => base,
        }
    } else {
        let t = (re << g) / im;
        let base = atan_small(&t, g);
        if im.is_positive() {
            &half_pi - base
        } else {
            -&half_pi - base
        }
    };
    (a << prec) / pi
}
