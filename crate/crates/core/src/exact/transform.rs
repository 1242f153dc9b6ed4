//! Root transforms (powers, pairwise products, pairwise ratios) computed
//! exactly through Newton power sums: the power sums of the transformed root
//! multiset are products of power sums of the inputs, and Newton's
//! identities turn them back into coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{from_rational_coeffs, IntPoly};
use super::ExactError;

/// Power sums `p_1..p_count` of the roots of a monic polynomial given by
/// ascending coefficients.
fn power_sums<T>(c: &[T], count: usize) -> Vec<T>
where
    T: Clone
        + Zero
        + for<'a> std::ops::Mul<&'a T, Output = T>
        + std::ops::Neg<Output = T>
        + From<BigInt>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
    for<'a> T: std::ops::AddAssign<&'a T>,
{
    let n = c.len() - 1;
    // e_j in the identity: f = t^n + a_1 t^(n-1) + ... + a_n with a_j = c[n-j]
    let a = |j: usize| &c[n - j];
    let mut p: Vec<T> = Vec::with_capacity(count + 1);
    p.push(T::zero());
    for k in 1..=count {
        let mut s = T::zero();
        for j in 1..k.min(n + 1) {
            s += &(a(j) * &p[k - j]);
        }
        if k <= n {
            s += &(a(k).clone() * &T::from(BigInt::from(k)));
        }
        p.push(-s);
    }
    p.remove(0);
    p
}

/// Monic polynomial (ascending, rational) of degree `n` with the given power
/// sums `p_1..p_n`.
fn from_power_sums(p: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut a = vec![BigRational::one()];
    for k in 1..=n {
        let mut s = p[k - 1].clone();
        for j in 1..k {
            s += &a[j] * &p[k - j - 1];
        }
        a.push(-s / BigRational::from_integer(BigInt::from(k)));
    }
    a.reverse();
    a
}

fn from_power_sums_int(p: &[BigInt], n: usize) -> IntPoly {
    let mut a = vec![BigInt::one()];
    for k in 1..=n {
        let mut s = p[k - 1].clone();
        for j in 1..k {
            s += &a[j] * &p[k - j - 1];
        }
        // exact: the transformed roots are algebraic integers
        a.push(-s / BigInt::from(k));
    }
    a.reverse();
    IntPoly::new(a)
}

fn require_monic(f: &IntPoly) -> Result<(), ExactError> {
    if f.is_zero() || !f.is_monic() {
        return Err(ExactError::NotMonic);
    }
    Ok(())
}

/// Monic polynomial whose roots are the `n`-th powers of the roots of `f`.
pub fn power_transform(f: &IntPoly, n: u32) -> Result<IntPoly, ExactError> {
    require_monic(f)?;
    if n == 0 {
        return Err(ExactError::ZeroExponent);
    }
    if n == 1 {
        return Ok(f.clone());
    }
    let d = f.deg();
    let ps = power_sums(f.coeffs(), d * n as usize);
    let s: Vec<BigInt> = (1..=d).map(|k| ps[k * n as usize - 1].clone()).collect();
    Ok(from_power_sums_int(&s, d))
}

/// Monic polynomial whose roots are all products `a*b` of a root of `f` and
/// a root of `g`.
pub fn product_transform(f: &IntPoly, g: &IntPoly) -> Result<IntPoly, ExactError> {
    require_monic(f)?;
    require_monic(g)?;
    let n = f.deg() * g.deg();
    let pf = power_sums(f.coeffs(), n);
    let pg = power_sums(g.coeffs(), n);
    let s: Vec<BigInt> = pf.iter().zip(&pg).map(|(a, b)| a * b).collect();
    Ok(from_power_sums_int(&s, n))
}

/// Polynomial whose roots are all ratios `a/b` with `f(a) = 0 = g(b)`. The
/// monic transform has rational coefficients in general; it is returned as
/// the proportional primitive integer polynomial with positive leading
/// coefficient.
pub fn ratio_transform(f: &IntPoly, g: &IntPoly) -> Result<IntPoly, ExactError> {
    require_monic(f)?;
    require_monic(g)?;
    let g0 = g.coeff(0);
    if g0.is_zero() {
        return Err(ExactError::ZeroConstantTerm);
    }
    let n = f.deg() * g.deg();
    // roots 1/b: reversed g divided by g(0)
    let g0r = BigRational::from_integer(g0);
    let rev: Vec<BigRational> = g
        .reverse()
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()) / &g0r)
        .collect();
    let pf = power_sums(f.coeffs(), n);
    let pg = power_sums(&rev, n);
    let s: Vec<BigRational> = pf
        .iter()
        .zip(&pg)
        .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
        .collect();
    let (poly, _) = from_rational_coeffs(&from_power_sums(&s, n));
    Ok(poly.primitive_part())
}

/// Power sums of the roots of a monic integer polynomial.
pub fn integer_power_sums(f: &IntPoly, count: usize) -> Vec<BigInt> {
    power_sums(f.coeffs(), count)
}
