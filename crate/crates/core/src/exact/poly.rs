//! Dense univariate polynomials over the integers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial with arbitrary-precision integer coefficients, stored in
/// ascending degree order with no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `t - r`
    pub fn linear_root(r: &BigInt) -> Self {
        Self::new(vec![-r, BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0. Only for callers that
    /// have already excluded zero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    pub fn div_scalar_exact(&self, c: &BigInt) -> IntPoly {
        if c.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        // Homogenised Horner keeps everything in integers until the end.
        let (num, den) = (x.numer(), x.denom());
        let n = self.coeffs.len();
        if n == 0 {
            return BigRational::zero();
        }
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        // acc = den^(n-1) * f(x) after n steps the extra factor is den^n / den
        let d = num_traits::pow(den.clone(), n - 1);
        BigRational::new(acc, d)
    }

    /// Sign of `f(x)` for rational `x`.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        self.eval_rational(x).cmp(&BigRational::zero())
    }

    pub fn pow(&self, mut e: u32) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `f(c t)`
    pub fn scale_variable(&self, c: &BigInt) -> IntPoly {
        let mut pw = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        IntPoly::new(out)
    }

    /// `f(-t)`
    pub fn negate_variable(&self) -> IntPoly {
        self.scale_variable(&BigInt::from(-1))
    }

    /// `f(g(t))`
    pub fn compose(&self, g: &IntPoly) -> IntPoly {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &IntPoly::constant(c.clone());
        }
        acc
    }

    /// `t^deg f(1/t)`; drops the factor of `t` dividing `f`.
    pub fn reverse(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// Multiplicity of the root 0.
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Division by a monic polynomial over the integers.
    pub fn div_rem_monic(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.deg();
        if self.degree().is_none_or(|n| n < dd) {
            return (IntPoly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let n = r.len() - 1;
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let c = std::mem::take(&mut r[i + dd]);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs[..dd].iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        (IntPoly::new(q), IntPoly::new(r))
    }

    /// Exact quotient `self / d` over the integers, or `None` when `d` does
    /// not divide `self` in `Z[t]`.
    pub fn exact_div(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let dd = d.deg();
        let n = self.deg();
        if n < dd {
            return None;
        }
        let lc = d.leading().unwrap();
        // Cheap rejection on the constant terms.
        let tz = d.trailing_zeros();
        if self.trailing_zeros() < tz {
            return None;
        }
        let d0 = &d.coeffs[tz];
        let s0 = &self.coeffs[tz];
        if !s0.is_zero() && !(s0 % d0).is_zero() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let c = std::mem::take(&mut r[i + dd]);
            if c.is_zero() {
                continue;
            }
            let (qc, rem) = c.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs[..dd].iter().enumerate() {
                r[i + j] -= &qc * dc;
            }
            q[i] = qc;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder `|lc(d)|^(deg self - deg d + 1) * self mod d`. Using the
    /// absolute value of the leading coefficient keeps the sign of the
    /// remainder meaningful for Sturm sequences.
    pub fn pseudo_rem_abs(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo-division by zero");
        let Some(n) = self.degree() else {
            return IntPoly::zero();
        };
        if n < dd {
            return self.clone();
        }
        let lc = d.leading().unwrap().abs();
        let sgn = d.leading().unwrap().is_negative();
        let mut r = self.coeffs.clone();
        let mut steps = 0usize;
        for i in (0..=n - dd).rev() {
            // r <- lc * r - c * t^i * (sign-adjusted) d
            let c = std::mem::take(&mut r[i + dd]);
            for x in r.iter_mut().take(i + dd) {
                *x *= &lc;
            }
            steps += 1;
            if c.is_zero() {
                continue;
            }
            let c = if sgn { -c } else { c };
            for (j, dc) in d.coeffs[..dd].iter().enumerate() {
                r[i + j] -= &c * dc;
            }
        }
        // Uniform power: multiply up to exponent n - dd + 1.
        let want = n - dd + 1;
        if steps < want {
            let extra = num_traits::pow(lc, want - steps);
            for x in r.iter_mut() {
                *x *= &extra;
            }
        }
        r.truncate(dd);
        IntPoly::new(r)
    }

    /// Greatest common divisor in `Z[t]`, primitive with positive leading
    /// coefficient (content gcd included). `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem_abs(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&c)
    }

    /// Primitive gcd ignoring contents.
    pub fn gcd_primitive(&self, other: &IntPoly) -> IntPoly {
        self.gcd(other).primitive_part()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd_primitive(&self.derivative()).is_constant()
    }

    /// Squarefree part (primitive, positive leading coefficient).
    pub fn squarefree_part(&self) -> IntPoly {
        let f = self.primitive_part();
        let g = f.gcd_primitive(&f.derivative());
        if g.is_constant() {
            return f;
        }
        f.exact_div(&g).expect("gcd divides").primitive_part()
    }

    /// Yun's squarefree decomposition of the primitive part: returns
    /// `(a_i, i)` with `f = prod a_i^i`, each `a_i` squarefree, primitive,
    /// pairwise coprime and non-constant.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, u32)> {
        let f = self.primitive_part();
        let mut out = Vec::new();
        if f.is_constant() {
            return out;
        }
        // Division by a primitive factor of an integer polynomial stays in
        // Z[t] (Gauss), so no rescaling is needed along the way.
        let df = f.derivative();
        let a0 = f.gcd_primitive(&df);
        let mut b = f.exact_div(&a0).expect("gcd divides f");
        let c = df.exact_div(&a0).expect("gcd divides f'");
        let mut d = &c - &b.derivative();
        let mut i = 1u32;
        loop {
            let a = b.gcd_primitive(&d);
            if !a.is_constant() {
                out.push((a.primitive_part(), i));
            }
            b = b.exact_div(&a).expect("gcd divides b");
            if b.is_constant() {
                break;
            }
            let c = d.exact_div(&a).expect("gcd divides d");
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Sign-preserving lexicographic key used for deterministic ordering:
    /// by degree, then coefficients from the top down.
    pub fn ordering_key(&self, other: &IntPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Infinity norm of the coefficient vector.
    pub fn max_norm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Ceiling of the Euclidean norm of the coefficient vector.
    pub fn l2_norm_ceil(&self) -> BigInt {
        let s: BigInt = self.coeffs.iter().map(|c| c * c).sum();
        let r = s.sqrt();
        if &r * &r == s {
            r
        } else {
            r + 1
        }
    }

    /// Ascending coefficients formatted as a comma-separated list.
    pub fn to_csv(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Clears denominators: returns a primitive integer polynomial proportional
/// to the rational one, plus the positive rational factor `s` such that
/// `rational = s * integer` up to sign of the leading coefficient.
pub fn from_rational_coeffs(c: &[BigRational]) -> (IntPoly, BigRational) {
    let mut l = BigInt::one();
    for x in c {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = c.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let p = IntPoly::new(ints);
    let cont = p.content();
    if cont.is_zero() {
        return (p, BigRational::zero());
    }
    let prim = p.div_scalar_exact(&cont);
    (prim, BigRational::new(cont, l))
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => out.push(a + b),
                (Some(a), None) => out.push(a.clone()),
                (None, Some(b)) => out.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        IntPoly::new(out)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: IntPoly) -> IntPoly {
        &self + &rhs
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: IntPoly) -> IntPoly {
        &self - &rhs
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: IntPoly) -> IntPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn canonical_form_strips_leading_zeros() {
        let f = IntPoly::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(f.degree(), Some(1));
        assert_eq!(IntPoly::from_i64s(&[0, 0]).degree(), None);
    }

    #[test]
    fn exact_division() {
        let f = &p(&[-1, 1]) * &p(&[5, -1, 1]);
        assert_eq!(f.exact_div(&p(&[-1, 1])), Some(p(&[5, -1, 1])));
        assert_eq!(f.exact_div(&p(&[1, 1])), None);
        assert_eq!(p(&[1, 0, 2]).exact_div(&p(&[0, 2])), None);
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]);
        let b = p(&[5, -1, 1]);
        let f = &(&a * &a) * &b;
        let g = &a * &p(&[1, 1]);
        assert_eq!(f.gcd_primitive(&g), a);
        assert_eq!(f.squarefree_part(), &a * &b);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(b.clone(), 1), (a.clone(), 2)]);
    }

    #[test]
    fn yun_on_higher_powers() {
        let a = p(&[2, 1]);
        let b = p(&[5, -1, 1]);
        let f = &(&a.pow(3) * &b.pow(2)).scale(&BigInt::from(6)) * &IntPoly::one();
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(b, 2), (a, 3)]);
    }

    #[test]
    fn rational_evaluation() {
        let f = p(&[-2, 0, 1]);
        let x = BigRational::new(3.into(), 2.into());
        assert_eq!(f.eval_rational(&x), BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn pseudo_remainder_sign() {
        // x^2 + 1 mod (-x + 1): remainder 2 scaled by |lc|^2 = 1.
        let r = p(&[1, 0, 1]).pseudo_rem_abs(&p(&[1, -1]));
        assert_eq!(r, p(&[2]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[5, -1, 1]).to_string(), "t^2 - t + 5");
        assert_eq!(p(&[0, -3, 0, 1]).to_string(), "t^3 - 3t");
    }
}
