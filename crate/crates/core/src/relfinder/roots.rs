//! Certified isolation of the distinct roots of a Weil polynomial.
//!
//! Seeds come from a double-precision Aberth iteration; each seed is polished
//! by Newton's method in fixed point and then enclosed by the a-posteriori
//! bound `min_i |z - a_i| <= n |f(z) / f'(z)|`, with `f(z)` and `f'(z)`
//! evaluated exactly at the dyadic centre. Pairwise-disjoint disks, one per
//! root of the squarefree `f`, each contain exactly one root.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::ball::{from_f64_scaled, isqrt_ceil, isqrt_floor, Ball};
use super::RelError;
use crate::exact::IntPoly;
use crate::weil::WeilPolynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedRoot {
    pub ball: Ball,
    /// Index of `q/a`, which for a Weil number is the complex conjugate.
    pub partner: usize,
    pub conjugate: usize,
}

impl CertifiedRoot {
    pub fn approx(&self) -> (f64, f64) {
        self.ball.to_f64()
    }

    pub fn is_real(&self) -> bool {
        self.ball.im.magnitude() <= self.ball.rad.magnitude()
    }
}

fn horner_f64(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        df = df * z + f;
        f = f * z + a;
    }
    (f, df)
}

/// Double-precision Aberth–Ehrlich iteration for all roots of `f`.
pub fn aberth(f: &IntPoly) -> Vec<Complex64> {
    let n = f.deg();
    let lc = f.leading().and_then(|x| x.to_f64()).unwrap_or(1.0);
    let c: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|a| a.to_f64().unwrap_or(0.0) / lc)
        .collect();
    if n == 1 {
        return vec![Complex64::new(-c[0], 0.0)];
    }
    let r0 = c[0].abs().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (fv, dv) = horner_f64(&c, z[k]);
            if fv == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = fv / dv;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

/// Gaussian-integer Horner: returns `2^(prec * deg) * f(z)` exactly.
fn eval_exact(f: &IntPoly, re: &BigInt, im: &BigInt, prec: u32) -> (BigInt, BigInt) {
    let n = f.deg();
    let (mut ar, mut ai) = (f.coeff(n), BigInt::zero());
    for k in (0..n).rev() {
        let nr = &ar * re - &ai * im;
        let ni = &ar * im + &ai * re;
        ar = nr + (f.coeff(k) << (prec as usize * (n - k)));
        ai = ni;
    }
    (ar, ai)
}

/// Fixed-point Horner (truncating), used only for Newton steps.
fn eval_fixed(f: &IntPoly, re: &BigInt, im: &BigInt, prec: u32) -> (BigInt, BigInt) {
    let n = f.deg();
    let (mut ar, mut ai) = (f.coeff(n) << prec, BigInt::zero());
    for k in (0..n).rev() {
        let nr = (&ar * re - &ai * im) >> prec;
        let ni = (&ar * im + &ai * re) >> prec;
        ar = nr + (f.coeff(k) << prec);
        ai = ni;
    }
    (ar, ai)
}

fn newton_polish(
    f: &IntPoly,
    df: &IntPoly,
    re: &mut BigInt,
    im: &mut BigInt,
    prec: u32,
    steps: usize,
) {
    for _ in 0..steps {
        let (fr, fi) = eval_fixed(f, re, im, prec);
        let (dr, di) = eval_fixed(df, re, im, prec);
        let den = &dr * &dr + &di * &di;
        if den.is_zero() {
            return;
        }
        let nr = &fr * &dr + &fi * &di;
        let ni = &fi * &dr - &fr * &di;
        let sr = (nr << prec) / &den;
        let si = (ni << prec) / &den;
        if sr.is_zero() && si.is_zero() {
            return;
        }
        *re -= sr;
        *im -= si;
    }
}

/// Rigorous radius (in ulps) of a disk around `re + i im` containing a root.
fn radius(f: &IntPoly, df: &IntPoly, re: &BigInt, im: &BigInt, prec: u32) -> Option<BigInt> {
    let (fr, fi) = eval_exact(f, re, im, prec);
    let num = &fr * &fr + &fi * &fi;
    if num.is_zero() {
        return Some(BigInt::zero());
    }
    let (gr, gi) = eval_exact(df, re, im, prec);
    let den = isqrt_floor(&(&gr * &gr + &gi * &gi));
    if den.is_zero() {
        return None;
    }
    // n |F| / |G| with F = 2^(pn) f(z), G = 2^(p(n-1)) f'(z)
    let n = BigInt::from(f.deg());
    let top = n * isqrt_ceil(&num);
    Some((&top + &den - 1) / &den)
}

/// Certified disks at a fixed precision, seeded by `seeds` (in order).
fn certify_at(f: &IntPoly, seeds: &[Ball], prec: u32) -> Option<Vec<Ball>> {
    let df = f.derivative();
    let steps = 4 + (prec / 40).max(1).ilog2() as usize;
    let mut out = Vec::with_capacity(seeds.len());
    for s in seeds {
        let s = if s.prec <= prec {
            s.widen(prec)
        } else {
            shrink(s, prec)
        };
        let (mut re, mut im) = (s.re.clone(), s.im.clone());
        newton_polish(f, &df, &mut re, &mut im, prec, steps);
        let rad = radius(f, &df, &re, &im, prec)?;
        out.push(Ball { re, im, rad, prec });
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if out[i].overlaps(&out[j]) {
                return None;
            }
        }
    }
    Some(out)
}

fn shrink(b: &Ball, prec: u32) -> Ball {
    let s = b.prec - prec;
    Ball {
        re: &b.re >> s,
        im: &b.im >> s,
        rad: (&b.rad >> s) + 2,
        prec,
    }
}

/// Roots are ordered by argument in `(-pi, pi]`.
fn arg_key(z: &Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}

/// Distinct roots of a Weil polynomial, certified and paired.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub pmin: IntPoly,
    pub roots: Vec<CertifiedRoot>,
    pub prec: u32,
    pub max_prec: u32,
}

impl RootSet {
    /// Initial certification at the smallest precision in the schedule
    /// (starting from `start`, doubling up to `cap`) that isolates and pairs
    /// all roots.
    pub fn new(w: &WeilPolynomial, start: u32, cap: u32) -> Result<RootSet, RelError> {
        let pmin = w.poly().squarefree_part();
        let mut approx = aberth(&pmin);
        approx.sort_by(|a, b| arg_key(a).total_cmp(&arg_key(b)));
        let seeds: Vec<Ball> = approx
            .iter()
            .map(|z| Ball::exact(from_f64_scaled(z.re, 64), from_f64_scaled(z.im, 64), 64))
            .collect();
        let mut prec = start.max(64);
        loop {
            if let Some(balls) = certify_at(&pmin, &seeds, prec) {
                if let Some(roots) = pair(&balls) {
                    return Ok(RootSet {
                        pmin,
                        roots,
                        prec,
                        max_prec: cap,
                    });
                }
            }
            prec *= 2;
            if prec > cap {
                return Err(RelError::PrecisionExhausted { bits: cap });
            }
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Re-certifies every root at precision `prec`, checking that each new
    /// disk lies inside the old one so that root indices are preserved.
    pub fn refine(&mut self, prec: u32) -> Result<(), RelError> {
        if prec <= self.prec {
            return Ok(());
        }
        if prec > self.max_prec {
            return Err(RelError::PrecisionExhausted {
                bits: self.max_prec,
            });
        }
        let seeds: Vec<Ball> = self.roots.iter().map(|r| r.ball.clone()).collect();
        let balls = certify_at(&self.pmin, &seeds, prec)
            .ok_or(RelError::PrecisionExhausted { bits: prec })?;
        for (old, new) in seeds.iter().zip(&balls) {
            if !old.widen(prec).contains(new) {
                return Err(RelError::PrecisionExhausted { bits: prec });
            }
        }
        for (r, b) in self.roots.iter_mut().zip(balls) {
            r.ball = b;
        }
        self.prec = prec;
        Ok(())
    }

    /// Indices of roots with positive imaginary part: one per pair
    /// `{a, q/a}` with `a != q/a`.
    pub fn pair_representatives(&self) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&i| {
                self.roots[i].partner != i && self.roots[i].ball.im.sign() == num_bigint::Sign::Plus
            })
            .collect()
    }
}

/// Conjugation pairing by disk intersection; `None` when ambiguous.
fn pair(balls: &[Ball]) -> Option<Vec<CertifiedRoot>> {
    let mut out = Vec::with_capacity(balls.len());
    for (i, b) in balls.iter().enumerate() {
        let c = b.conj();
        let hits: Vec<usize> = (0..balls.len())
            .filter(|&j| balls[j].overlaps(&c))
            .collect();
        if hits.len() != 1 {
            return None;
        }
        let j = hits[0];
        // a non-real root's disk must stay off the real axis
        if j != i && b.im.magnitude() <= b.rad.magnitude() {
            return None;
        }
        out.push(CertifiedRoot {
            ball: b.clone(),
            partner: j,
            conjugate: j,
        });
    }
    // involution check
    (0..out.len())
        .all(|i| out[out[i].partner].partner == i)
        .then_some(out)
}
