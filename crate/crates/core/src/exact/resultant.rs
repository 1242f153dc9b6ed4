//! Resultants by the subresultant pseudo-remainder sequence.
//!
//! Convention: `res(f, g) = lc(f)^deg(g) * prod_{f(a)=0} g(a)`, i.e. the
//! determinant of the Sylvester matrix with the rows of `f` on top.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::IntPoly;
use super::ExactError;

/// `lc(d)^(deg a - deg d + 1) * a mod d`, keeping the sign of `lc(d)`.
fn pseudo_rem(a: &IntPoly, d: &IntPoly) -> IntPoly {
    let n = a.deg();
    let dd = d.deg();
    let lc = d.leading().unwrap().clone();
    let mut r = a.coeffs().to_vec();
    for i in (0..=n - dd).rev() {
        let c = std::mem::take(&mut r[i + dd]);
        for x in r.iter_mut().take(i + dd) {
            *x *= &lc;
        }
        if c.is_zero() {
            continue;
        }
        for (j, dc) in d.coeffs()[..dd].iter().enumerate() {
            r[i + j] -= &c * dc;
        }
    }
    r.truncate(dd);
    IntPoly::new(r)
}

fn odd(n: usize) -> bool {
    n % 2 == 1
}

pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt, ExactError> {
    if f.is_zero() || g.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let (m, n) = (f.deg(), g.deg());
    if n == 0 {
        return Ok(num_traits::pow(g.coeff(0), m));
    }
    if m == 0 {
        return Ok(num_traits::pow(f.coeff(0), n));
    }
    let (ca, cb) = (f.content(), g.content());
    let mut a = f.div_scalar_exact(&ca);
    let mut b = g.div_scalar_exact(&cb);
    let t = num_traits::pow(ca, n) * num_traits::pow(cb, m);
    let mut s = BigInt::one();
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if odd(m) && odd(n) {
            s = -s;
        }
    }
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.deg() - b.deg();
        if odd(a.deg()) && odd(b.deg()) {
            s = -s;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        let div = &gg * num_traits::pow(h.clone(), delta);
        b = r.div_scalar_exact(&div);
        gg = a.leading().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(gg.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
        if b.is_zero() {
            return Ok(BigInt::zero());
        }
        if b.deg() == 0 {
            let da = a.deg();
            let lb = b.coeff(0);
            // h <- h^(1 - da) * lb^da
            let h = num_traits::pow(lb, da) / num_traits::pow(h, da - 1);
            return Ok(s * t * h);
        }
    }
}

/// Discriminant with the usual normalisation `res(f, f') = (-1)^(n(n-1)/2) lc(f) disc(f)`.
pub fn discriminant(f: &IntPoly) -> Result<BigInt, ExactError> {
    let n = f.deg();
    if n < 1 {
        return Err(ExactError::ZeroPolynomial);
    }
    if n == 1 {
        return Ok(BigInt::one());
    }
    let r = resultant(f, &f.derivative())?;
    let d = r / f.leading().unwrap();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}
