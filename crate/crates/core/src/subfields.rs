//! Imaginary quadratic subfields of sextic CM fields `Q[t]/(P_min)` and the
//! norm condition on the conjugate-cubic factorization `P_min = G * conj(G)`.
//!
//! For a Weil sextic `P(t) = t^3 h(t + q/t)` the CM field is `K(sqrt(delta))`
//! with `K = Q[x]/(h)` totally real and `delta = x^2 - 4q`. An imaginary
//! quadratic `Q(sqrt m)` lies in it iff `m * delta` is a square in `K`, which
//! forces `m = N_{K/Q}(delta) = h(2 sqrt q) h(-2 sqrt q)` modulo squares. So
//! there is a single candidate, and it is confirmed or rejected by solving
//! for `G` exactly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::intfactor::{exact_sqrt, legendre, squarefree_kernel};
use crate::exact::{discriminant, is_irreducible, IntPoly};
use crate::weil::{real_polynomial, WeilPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubfieldError {
    #[error("NotSextic: degree {0}")]
    NotSextic(usize),
    #[error("NotIrreducible")]
    NotIrreducible,
    #[error(
        "NotWeil: constant term is not q^3 for a prime power q satisfying the functional equation"
    )]
    NotWeil,
    #[error("NotElliptic: genus {0}")]
    NotElliptic(usize),
    #[error("NotOrdinary: p divides the trace")]
    NotOrdinary,
}

/// `a0 + a1 sqrt(m)` with `m` squarefree, `m != 0, 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticElement {
    pub a0: BigRational,
    pub a1: BigRational,
    pub m: BigInt,
}

impl QuadraticElement {
    pub fn new(a0: BigRational, a1: BigRational, m: BigInt) -> Self {
        QuadraticElement { a0, a1, m }
    }

    pub fn rational(a0: BigRational, m: &BigInt) -> Self {
        QuadraticElement {
            a0,
            a1: BigRational::zero(),
            m: m.clone(),
        }
    }

    pub fn zero(m: &BigInt) -> Self {
        Self::rational(BigRational::zero(), m)
    }

    pub fn one(m: &BigInt) -> Self {
        Self::rational(BigRational::one(), m)
    }

    pub fn conj(&self) -> Self {
        QuadraticElement {
            a0: self.a0.clone(),
            a1: -&self.a1,
            m: self.m.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadraticElement {
            a0: &self.a0 + &o.a0,
            a1: &self.a1 + &o.a1,
            m: self.m.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadraticElement {
            a0: &self.a0 - &o.a0,
            a1: &self.a1 - &o.a1,
            m: self.m.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = BigRational::from_integer(self.m.clone());
        QuadraticElement {
            a0: &self.a0 * &o.a0 + m * &self.a1 * &o.a1,
            a1: &self.a0 * &o.a1 + &self.a1 * &o.a0,
            m: self.m.clone(),
        }
    }

    pub fn norm(&self) -> BigRational {
        &self.a0 * &self.a0 - BigRational::from_integer(self.m.clone()) * &self.a1 * &self.a1
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a1.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.a1.is_zero()
    }

    /// Membership in the ring of integers of `Q(sqrt m)`.
    pub fn is_integral(&self) -> bool {
        let two = BigInt::from(2);
        let (x, y) = (
            &self.a0 * BigRational::from_integer(two.clone()),
            &self.a1 * BigRational::from_integer(two.clone()),
        );
        if !x.is_integer() || !y.is_integer() {
            return false;
        }
        let (x, y) = (x.to_integer(), y.to_integer());
        if self.m.mod_floor(&BigInt::from(4)) == BigInt::one() {
            (&x - &y).is_even()
        } else {
            x.is_even() && y.is_even()
        }
    }
}

impl fmt::Display for QuadraticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a1.is_zero() {
            return write!(f, "{}", self.a0);
        }
        let sign = if self.a1.is_negative() { "-" } else { "+" };
        write!(f, "{} {} {}*sqrt({})", self.a0, sign, self.a1.abs(), self.m)
    }
}

/// Witness `P_min = G * conj(G)` over `Q(sqrt m)`, `G = t^3 + A t^2 + B t + C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugateFactorization {
    pub m: BigInt,
    /// Coefficients `[C, B, A]` ascending; `G` is monic.
    pub g: [QuadraticElement; 3],
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl ConjugateFactorization {
    pub fn a(&self) -> &QuadraticElement {
        &self.g[2]
    }

    pub fn b(&self) -> &QuadraticElement {
        &self.g[1]
    }

    pub fn c(&self) -> &QuadraticElement {
        &self.g[0]
    }

    /// Coefficients (ascending) of `G * conj(G)`; exact, the irrational parts
    /// must cancel.
    pub fn expand(&self) -> Vec<QuadraticElement> {
        let one = QuadraticElement::one(&self.m);
        let g: Vec<QuadraticElement> = self.g.iter().cloned().chain([one]).collect();
        let gb: Vec<QuadraticElement> = g.iter().map(|x| x.conj()).collect();
        let mut out = vec![QuadraticElement::zero(&self.m); 7];
        for (i, x) in g.iter().enumerate() {
            for (j, y) in gb.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        out
    }

    /// True when `G * conj(G)` equals `pmin` coefficient-wise.
    pub fn reexpands_to(&self, pmin: &IntPoly) -> bool {
        pmin.deg() == 6
            && self
                .expand()
                .iter()
                .enumerate()
                .all(|(i, c)| c.a1.is_zero() && c.a0 == rat(pmin.coeff(i)))
    }
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    Some(BigRational::new(
        exact_sqrt(x.numer())?,
        exact_sqrt(x.denom())?,
    ))
}

/// `q` with `pmin(0) = q^3` and the `eps = +1` functional equation.
fn weil_q(pmin: &IntPoly) -> Option<BigInt> {
    let c0 = pmin.coeff(0);
    if !c0.is_positive() {
        return None;
    }
    let q = c0.cbrt();
    if &q * &q * &q != c0 {
        return None;
    }
    let mut qi = BigInt::one();
    for i in 0..=6 {
        if pmin.coeff(i) * &qi != &c0 * pmin.coeff(6 - i) {
            return None;
        }
        qi *= &q;
    }
    Some(q)
}

/// The unique candidate `m`: squarefree kernel of `h(2 sqrt q) h(-2 sqrt q)`.
pub fn norm_candidate(pmin: &IntPoly, q: &BigInt) -> BigInt {
    let h = real_polynomial(pmin, q);
    let y = BigInt::from(4) * q;
    // h(x) = E(x^2) + x O(x^2)
    let e = h.coeff(0) + h.coeff(2) * &y;
    let o = h.coeff(1) + h.coeff(3) * &y;
    let n = &e * &e - &y * &o * &o;
    squarefree_kernel(&n)
}

fn canonical(g: [QuadraticElement; 3]) -> [QuadraticElement; 3] {
    // choose between G and conj(G): first nonzero irrational part positive
    let flip = [&g[2], &g[1], &g[0]]
        .iter()
        .find(|x| !x.a1.is_zero())
        .is_some_and(|x| x.a1.is_negative());
    if flip {
        [g[0].conj(), g[1].conj(), g[2].conj()]
    } else {
        g
    }
}

/// Solves `G * conj(G) = pmin` over `Q(sqrt m)` for a Weil sextic with the
/// given `q`, using `C conj(A) = q B` (the roots of `conj(G)` are `q/a`).
pub fn solve_conjugate_factorization(
    pmin: &IntPoly,
    q: &BigInt,
    m: &BigInt,
) -> Option<ConjugateFactorization> {
    if pmin.deg() != 6 || !m.is_negative() {
        return None;
    }
    let p = |k: usize| rat(pmin.coeff(6 - k));
    let two = rat(2);
    let qr = rat(q.clone());
    let mr = rat(m.clone());
    let a0 = p(1) / &two;
    // |A - conj(A)| = |2 a1 sqrt m| <= 6 sqrt q
    let kmax = (BigInt::from(36) * q / m.abs()).sqrt();
    let kmax = kmax.to_i64()?;
    if kmax > 64 {
        // large q: factor over Q(sqrt m) directly rather than scan traces
        let g = factor_over_quadratic(pmin, m)?;
        let cf = ConjugateFactorization {
            m: m.clone(),
            g: [g[0].clone(), g[1].clone(), g[2].clone()],
        };
        return cf.reexpands_to(pmin).then(|| ConjugateFactorization {
            m: cf.m,
            g: canonical(cf.g),
        });
    }
    let q_el = |a: BigRational, b: BigRational| QuadraticElement::new(a, b, m.clone());
    for k in 0..=kmax {
        let a1 = BigRational::new(k.into(), 2.into());
        let b0 = (p(2) - &a0 * &a0 + &mr * &a1 * &a1) / &two;
        let d = &a0 * &a0 - &mr * &a1 * &a1;
        let rhs3 = p(3) / &two;
        let mut cands: Vec<(BigRational, BigRational, BigRational)> = Vec::new();
        if d.is_zero() {
            // A = 0: C conj(A) = q B forces B = 0
            if b0.is_zero() {
                let c0 = rhs3.clone();
                if let Some(c1) = rational_sqrt(&((&c0 * &c0 - &qr * &qr * &qr) / &mr)) {
                    cands.push((BigRational::zero(), c0.clone(), c1.clone()));
                    cands.push((BigRational::zero(), c0, -c1));
                }
            }
        } else if a1.is_zero() {
            let c0 = &qr * &b0 / &a0;
            if &c0 + &a0 * &b0 == rhs3 {
                let num = (&c0 * &c0 - &qr * &qr * &qr) * &a0 * &a0 / (&mr * &qr * &qr);
                if let Some(b1) = rational_sqrt(&num) {
                    for b1 in [b1.clone(), -b1] {
                        let c1 = &qr * &b1 / &a0;
                        cands.push((b1, c0.clone(), c1));
                    }
                }
            }
        } else if d == qr {
            if &a0 * &b0 * &two == rhs3 {
                if let Some(b1) = rational_sqrt(&((&b0 * &b0 - &qr * &qr) / &mr)) {
                    for b1 in [b1.clone(), -b1] {
                        let c0 = &a0 * &b0 + &mr * &a1 * &b1;
                        let c1 = &a1 * &b0 + &a0 * &b1;
                        cands.push((b1, c0, c1));
                    }
                }
            }
        } else {
            // c0 = q (a0 b0 + m a1 b1)/D, c1 = q (a1 b0 + a0 b1)/D and
            // c0 + a0 b0 - m a1 b1 = p3/2 is linear in b1
            let coef = &mr * &a1 * (&qr - &d) / &d;
            let rhs = &rhs3 - &a0 * &b0 - &qr * &a0 * &b0 / &d;
            let b1 = rhs / coef;
            let c0 = &qr * (&a0 * &b0 + &mr * &a1 * &b1) / &d;
            let c1 = &qr * (&a1 * &b0 + &a0 * &b1) / &d;
            cands.push((b1, c0, c1));
        }
        for (b1, c0, c1) in cands {
            let cf = ConjugateFactorization {
                m: m.clone(),
                g: [
                    q_el(c0, c1),
                    q_el(b0.clone(), b1),
                    q_el(a0.clone(), a1.clone()),
                ],
            };
            if cf.reexpands_to(pmin) {
                return Some(ConjugateFactorization {
                    m: cf.m,
                    g: canonical(cf.g),
                });
            }
        }
    }
    None
}

/// Every imaginary quadratic `Q(sqrt m)` inside `Q[t]/(pmin)` with its
/// conjugate-cubic witness (at most one exists for a sextic CM field).
pub fn quadratic_subfields(pmin: &IntPoly) -> Result<Vec<ConjugateFactorization>, SubfieldError> {
    if pmin.deg() != 6 {
        return Err(SubfieldError::NotSextic(pmin.deg()));
    }
    if !is_irreducible(pmin) {
        return Err(SubfieldError::NotIrreducible);
    }
    let q = weil_q(pmin).ok_or(SubfieldError::NotWeil)?;
    let m = norm_candidate(pmin, &q);
    if !m.is_negative() {
        return Ok(Vec::new());
    }
    Ok(solve_conjugate_factorization(pmin, &q, &m)
        .into_iter()
        .collect())
}

/// `G(0)^2 = q^3` in `Q(sqrt m)`, i.e. `c1 = 0` and `c0^2 = q^3`.
pub fn norm_condition(cf: &ConjugateFactorization, q: &BigInt) -> bool {
    let c = cf.c();
    c.a1.is_zero() && &c.a0 * &c.a0 == rat(q.pow(3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Decomposition of the prime `p` in `Q(sqrt m)`.
pub fn p_splits(m: &BigInt, p: u64) -> Splitting {
    let m4 = m.mod_floor(&BigInt::from(4)).to_u64().unwrap();
    let disc = if m4 == 1 { m.clone() } else { m * 4 };
    if p == 2 {
        if m4 != 1 {
            return Splitting::Ramified;
        }
        return if m.mod_floor(&BigInt::from(8)) == BigInt::one() {
            Splitting::Split
        } else {
            Splitting::Inert
        };
    }
    match legendre(&disc, p) {
        0 => Splitting::Ramified,
        1 => Splitting::Split,
        _ => Splitting::Inert,
    }
}

fn ord_p_int(x: &BigInt, p: &BigInt) -> u64 {
    let mut x = x.clone();
    let mut k = 0;
    while !x.is_zero() && (&x % p).is_zero() {
        x /= p;
        k += 1;
    }
    k
}

/// A square root of `m` modulo `p^k` for `p` split in `Q(sqrt m)`.
fn padic_sqrt(m: &BigInt, p: u64, k: u32) -> BigInt {
    let pb = BigInt::from(p);
    let pk = pb.pow(k);
    if p == 2 {
        // m = 1 mod 8; fix one bit at a time
        let mut s = BigInt::one();
        for j in 3..=k + 1 {
            let mod_j = BigInt::one() << (j + 1);
            if (&s * &s - m).mod_floor(&mod_j) != BigInt::zero() {
                s += BigInt::one() << (j - 1);
            }
        }
        return s.mod_floor(&pk);
    }
    let mr = m.mod_floor(&pb).to_u64().expect("small");
    let r = (1..p)
        .find(|&r| (r as u128 * r as u128 % p as u128) as u64 == mr)
        .expect("m is a square mod p");
    let mut s = BigInt::from(r);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let pp = pb.pow(prec);
        let inv = (&s * 2u32).modinv(&pp).expect("2s is a unit");
        s = (&s - (&s * &s - m) * inv).mod_floor(&pp);
    }
    s.mod_floor(&pk)
}

/// Valuation of `z != 0` at one fixed prime above a split `p`; the other
/// prime gives `v_p(N z)` minus this.
pub fn split_valuation(z: &QuadraticElement, p: u64) -> i64 {
    assert!(!z.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let d = z.a0.denom().lcm(z.a1.denom());
    let x = z.a0.numer() * (&d / z.a0.denom());
    let y = z.a1.numer() * (&d / z.a1.denom());
    // the valuation of x + y sqrt m at one prime is at most v_p of its norm
    let k = ord_p_int(&(&x * &x - &z.m * &y * &y), &pb) as u32 + 2;
    let s = padic_sqrt(&z.m, p, k);
    let r = (x + y * s).mod_floor(&pb.pow(k));
    let v = if r.is_zero() {
        k as u64
    } else {
        ord_p_int(&r, &pb)
    };
    v as i64 - ord_p_int(&d, &pb) as i64
}

/// CM field `Q(sqrt(a^2 - 4q))` of an ordinary elliptic `t^2 - a t + q`,
/// as the squarefree kernel.
pub fn elliptic_cm_field(w: &WeilPolynomial) -> Result<BigInt, SubfieldError> {
    if w.g() != 1 {
        return Err(SubfieldError::NotElliptic(w.g()));
    }
    let a = -w.poly().coeff(1);
    if (&a % w.p()).is_zero() {
        return Err(SubfieldError::NotOrdinary);
    }
    Ok(squarefree_kernel(&(&a * &a - BigInt::from(4) * w.q())))
}

/// Whether the totally real cubic `Q[x]/(h)` is Galois (square
/// discriminant). Informational only.
pub fn cubic_subfield_is_galois(pmin: &IntPoly, q: &BigInt) -> Option<bool> {
    let h = real_polynomial(pmin, q);
    if h.deg() != 3 {
        return None;
    }
    let d = discriminant(&h).ok()?;
    Some(exact_sqrt(&d).is_some())
}

impl QuadraticElement {
    pub fn inv(&self) -> Self {
        let n = self.norm();
        let c = self.conj();
        QuadraticElement {
            a0: &c.a0 / &n,
            a1: &c.a1 / &n,
            m: self.m.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(QuadraticElement::one(&self.m), |acc, _| acc.mul(self))
    }
}

/// Ascending coefficients over `Q(sqrt m)`, no trailing zeros.
type QPoly = Vec<QuadraticElement>;

fn qtrim(mut f: QPoly) -> QPoly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

fn qmul(f: &QPoly, g: &QPoly, m: &BigInt) -> QPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![QuadraticElement::zero(m); f.len() + g.len() - 1];
    for (i, x) in f.iter().enumerate() {
        for (j, y) in g.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    qtrim(out)
}

fn qrem(f: &QPoly, d: &QPoly) -> QPoly {
    let mut r = f.clone();
    let inv = d.last().expect("nonzero divisor").inv();
    while r.len() >= d.len() {
        let c = r.last().unwrap().mul(&inv);
        let shift = r.len() - d.len();
        for (i, x) in d.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&c.mul(x));
        }
        r.pop();
        r = qtrim(r);
    }
    r
}

fn qmonic(f: QPoly) -> QPoly {
    let inv = f.last().unwrap().inv();
    f.iter().map(|c| c.mul(&inv)).collect()
}

fn qgcd(f: &QPoly, g: &QPoly) -> QPoly {
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_empty() {
        let r = qrem(&a, &b);
        a = b;
        b = r;
    }
    qmonic(a)
}

fn lift(f: &IntPoly, m: &BigInt) -> QPoly {
    f.coeffs()
        .iter()
        .map(|c| QuadraticElement::rational(rat(c.clone()), m))
        .collect()
}

/// `f(t + c)` for `c` in `Q(sqrt m)`.
fn qshift(f: &QPoly, c: &QuadraticElement, m: &BigInt) -> QPoly {
    let lin = vec![c.clone(), QuadraticElement::one(m)];
    let mut acc: QPoly = Vec::new();
    for a in f.iter().rev() {
        acc = qmul(&acc, &lin, m);
        if acc.is_empty() {
            acc.push(a.clone());
        } else {
            acc[0] = acc[0].add(a);
        }
        acc = qtrim(acc);
    }
    acc
}

/// Monic `G` over `Q(sqrt m)` with `pmin = G * conj(G)` and `G != conj(G)`,
/// for an irreducible `pmin` that splits over `Q(sqrt m)` (Trager's norm
/// method).
pub fn factor_over_quadratic(pmin: &IntPoly, m: &BigInt) -> Option<QPoly> {
    let n = pmin.deg();
    if n < 2 || n % 2 == 1 || m.is_zero() || exact_sqrt(m).is_some() {
        return None;
    }
    let f = lift(pmin, m);
    for s in 1i64..=30 {
        let c = QuadraticElement::new(BigRational::zero(), rat(-s), m.clone());
        let shifted = qshift(&f, &c, m);
        // N(t) = A^2 - m B^2 with pmin(t - s sqrt m) = A + B sqrt m
        let a = IntPoly::new(shifted.iter().map(|x| x.a0.to_integer()).collect());
        let b = IntPoly::new(shifted.iter().map(|x| x.a1.to_integer()).collect());
        let norm = &(&a * &a) - &(&b * &b).scale(m);
        if !norm.is_squarefree() {
            continue;
        }
        let factors = crate::exact::factor_over_integers(&norm).ok()?;
        if factors.len() < 2 {
            return None;
        }
        let f1 = lift(&factors[0].0, m);
        let back = qshift(&f1, &c.conj(), m);
        let g = qgcd(&f, &back);
        if g.len() != n / 2 + 1 {
            return None;
        }
        let gb: QPoly = g.iter().map(|x| x.conj()).collect();
        return (qmul(&g, &gb, m) == f && g != gb).then_some(g);
    }
    None
}

/// `N_{E/B}(q^-1 a^2) = G(0)^2 / q^deg(G)` for `pmin = G conj(G)`.
pub fn relative_norm(g: &[QuadraticElement], q: &BigInt) -> QuadraticElement {
    let c = &g[0];
    let qk = rat(q.pow((g.len() - 1) as u32));
    let c2 = c.mul(c);
    QuadraticElement {
        a0: &c2.a0 / &qk,
        a1: &c2.a1 / &qk,
        m: c.m.clone(),
    }
}

/// Roots of unity in an imaginary quadratic field have order dividing 4 or 6.
pub fn is_root_of_unity(x: &QuadraticElement) -> bool {
    x.pow(12) == QuadraticElement::one(&x.m)
}

/// Multiplicative order of `x` if it is a root of unity.
pub fn root_of_unity_order(x: &QuadraticElement) -> Option<u64> {
    let one = QuadraticElement::one(&x.m);
    [1u32, 2, 3, 4, 6]
        .into_iter()
        .find(|&k| x.pow(k) == one)
        .map(u64::from)
}

/// Imaginary quadratic subfields of `Q[t]/(pmin)` for an irreducible Weil
/// polynomial over `q`, as squarefree `m < 0`, ascending.
pub fn imaginary_quadratic_subfields(pmin: &IntPoly, q: &BigInt) -> Vec<BigInt> {
    let n = pmin.deg();
    if n < 2 || n % 2 == 1 {
        return Vec::new();
    }
    let mut cands: Vec<BigInt> = Vec::new();
    match n {
        2 => {
            let d = pmin.coeff(1) * pmin.coeff(1) - BigInt::from(4) * pmin.coeff(0);
            if !d.is_zero() {
                cands.push(squarefree_kernel(&d));
            }
        }
        4 => {
            // E = K(sqrt delta), K = Q(sqrt D) real quadratic: a biquadratic
            // E has N(delta) = n^2; (sqrt delta + sqrt delta')^2 = Tr delta
            // +- 2n gives one quadratic subfield, times D the other
            let h = real_polynomial(pmin, q);
            let (h1, h0) = (h.coeff(1), h.coeff(0));
            let q4 = BigInt::from(4) * q;
            let nd = (&q4 + &h0) * (&q4 + &h0) - &q4 * &h1 * &h1;
            if let Some(r) = exact_sqrt(&nd) {
                let tr: BigInt = &h1 * &h1 - &h0 * 2 - BigInt::from(8) * q;
                let dk = &h1 * &h1 - &h0 * 4;
                for s in [&tr + &r * 2, &tr - &r * 2] as [BigInt; 2] {
                    if !s.is_zero() {
                        cands.push(squarefree_kernel(&s));
                        cands.push(squarefree_kernel(&(&s * &dk)));
                    }
                }
            }
        }
        6 => cands.push(norm_candidate(pmin, q)),
        _ => {
            if let Ok(d) = discriminant(pmin) {
                let primes: Vec<BigInt> = crate::exact::intfactor::factor_integer(&d)
                    .into_iter()
                    .map(|(p, _)| p)
                    .collect();
                if primes.len() <= 16 {
                    for mask in 0u32..(1 << primes.len()) {
                        let k: BigInt = primes
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask >> i & 1 == 1)
                            .map(|(_, p)| p.clone())
                            .product();
                        cands.push(-k);
                    }
                }
            }
        }
    }
    cands.sort();
    cands.dedup();
    cands
        .into_iter()
        .filter(|m| m.is_negative() && factor_over_quadratic(pmin, m).is_some())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::intfactor::factor_integer;
    use crate::weil::validate;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn el(a0: i64, a1: i64, m: i64) -> QuadraticElement {
        QuadraticElement::new(rat(a0), rat(a1), b(m))
    }

    fn from_g(
        a: QuadraticElement,
        bb: QuadraticElement,
        c: QuadraticElement,
    ) -> (ConjugateFactorization, IntPoly) {
        let cf = ConjugateFactorization {
            m: a.m.clone(),
            g: [c, bb, a],
        };
        let coeffs: Vec<BigInt> = cf.expand().iter().map(|x| x.a0.to_integer()).collect();
        (cf, IntPoly::new(coeffs))
    }

    /// Dual route: try every negative squarefree kernel of a divisor of
    /// disc(pmin).
    fn subfields_by_discriminant(pmin: &IntPoly, q: &BigInt) -> Vec<BigInt> {
        let d = discriminant(pmin).unwrap();
        let primes: Vec<BigInt> = factor_integer(&d).into_iter().map(|(p, _)| p).collect();
        let mut found = Vec::new();
        for mask in 0u32..(1 << primes.len()) {
            let mut k = BigInt::one();
            for (i, p) in primes.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    k *= p;
                }
            }
            let m = -k;
            if solve_conjugate_factorization(pmin, q, &m).is_some() {
                found.push(m);
            }
        }
        found
    }

    #[test]
    fn quadratic_arithmetic() {
        let x = el(1, 2, -1);
        let y = el(3, -1, -1);
        assert_eq!(x.mul(&y), el(5, 5, -1));
        assert_eq!(x.norm(), rat(5));
        assert_eq!(x.mul(&x.conj()).a0, x.norm());
        assert!(QuadraticElement::new(
            BigRational::new(1.into(), 2.into()),
            BigRational::new(1.into(), 2.into()),
            b(-3)
        )
        .is_integral());
        assert!(!QuadraticElement::new(
            BigRational::new(1.into(), 2.into()),
            BigRational::new(1.into(), 2.into()),
            b(-1)
        )
        .is_integral());
    }

    #[test]
    fn splitting_of_primes() {
        assert_eq!(p_splits(&b(-1), 5), Splitting::Split);
        assert_eq!(p_splits(&b(-1), 3), Splitting::Inert);
        assert_eq!(p_splits(&b(-1), 2), Splitting::Ramified);
        assert_eq!(p_splits(&b(-7), 2), Splitting::Split);
        assert_eq!(p_splits(&b(-3), 2), Splitting::Inert);
        assert_eq!(p_splits(&b(-3), 3), Splitting::Ramified);
    }

    #[test]
    fn elliptic_fields() {
        let w = validate(&IntPoly::from_i64s(&[5, -1, 1]), &b(5)).unwrap();
        assert_eq!(elliptic_cm_field(&w).unwrap(), b(-19));
        let w = validate(&IntPoly::from_i64s(&[5, -2, 1]), &b(5)).unwrap();
        assert_eq!(elliptic_cm_field(&w).unwrap(), b(-1));
        let w = validate(&IntPoly::from_i64s(&[9, -3, 1]), &b(9)).unwrap();
        assert_eq!(elliptic_cm_field(&w), Err(SubfieldError::NotOrdinary));
    }

    #[test]
    fn norm_conditions() {
        let (cf, _) = from_g(el(0, 1, -1), el(3, 0, -1), el(-27, 0, -1));
        assert!(norm_condition(&cf, &b(9)));
        assert!(!norm_condition(&cf, &b(8)));
        for c in -200..200 {
            let (cf, _) = from_g(el(0, 1, -1), el(3, 0, -1), el(c, 0, -1));
            assert!(!norm_condition(&cf, &b(5)));
        }
    }

    #[test]
    fn round_trip_through_constructor() {
        // G = t^3 + i t^2 + 3t - 27 over q = 9 (need not be Weil)
        let (_, p) = from_g(el(0, 1, -1), el(3, 0, -1), el(-27, 0, -1));
        if let Ok(w) = validate(&p, &b(9)) {
            let cf = quadratic_subfields(w.poly()).unwrap();
            assert_eq!(cf.len(), 1);
            assert_eq!(cf[0].m, b(-1));
        }
    }

    #[test]
    fn weil_sextics_from_conjugate_cubics() {
        // q = 9, m = -1: G with C conj(A) = q B built from A and C = -27
        let q = b(9);
        let mut seen = 0;
        for a0 in -4i64..=4 {
            for a1 in -4i64..=4 {
                let a = el(a0, a1, -1);
                let c = el(-27, 0, -1);
                // B = conj(A) C / q
                let bb = a.conj().mul(&c);
                let bb = QuadraticElement::new(&bb.a0 / rat(9), &bb.a1 / rat(9), b(-1));
                if !bb.is_integral() {
                    continue;
                }
                let (cf, p) = from_g(a, bb, c);
                let Ok(w) = validate(&p, &q) else { continue };
                if !is_irreducible(w.poly()) {
                    continue;
                }
                seen += 1;
                let found = quadratic_subfields(w.poly()).unwrap();
                assert_eq!(found.len(), 1);
                assert_eq!(found[0].m, b(-1));
                assert!(found[0].reexpands_to(w.poly()));
                assert!(
                    found[0] == cf
                        || found[0].g == [cf.g[0].conj(), cf.g[1].conj(), cf.g[2].conj()]
                );
                assert!(norm_condition(&found[0], &q));
                assert_eq!(subfields_by_discriminant(w.poly(), &q), vec![b(-1)]);
                assert_eq!(imaginary_quadratic_subfields(w.poly(), &q), vec![b(-1)]);
                let g = factor_over_quadratic(w.poly(), &b(-1)).unwrap();
                assert_eq!(relative_norm(&g, &q), QuadraticElement::one(&b(-1)));
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn generic_sextic_has_no_subfield() {
        // (x^3 - 3x + 1) is the real cubic of a cyclic field; take a
        // non-Galois totally real cubic instead: h = x^3 - 4x + 1, q = 2
        // P(t) = t^3 h(t + 2/t)
        let h = IntPoly::from_i64s(&[1, -4, 0, 1]);
        let q = b(2);
        let mut p = IntPoly::zero();
        for (j, c) in h.coeffs().iter().enumerate() {
            p = p + IntPoly::monomial(c.clone(), 3 - j)
                * IntPoly::from_i64s(&[2, 0, 1]).pow(j as u32);
        }
        let w = validate(&p, &q).unwrap();
        assert!(is_irreducible(w.poly()));
        let found = quadratic_subfields(w.poly()).unwrap();
        assert!(subfields_by_discriminant(w.poly(), &q).is_empty());
        assert!(found.is_empty());
        assert_eq!(
            quadratic_subfields(&IntPoly::from_i64s(&[5, -1, 1])),
            Err(SubfieldError::NotSextic(2))
        );
    }

    #[test]
    fn subfields_in_low_degree() {
        let q = b(5);
        assert_eq!(
            imaginary_quadratic_subfields(&IntPoly::from_i64s(&[5, -1, 1]), &q),
            vec![b(-19)]
        );
        // sqrt 2 + i over q = 3: E = Q(sqrt 2, i) contains Q(i) and Q(sqrt -2)
        let f = IntPoly::from_i64s(&[9, 0, -2, 0, 1]);
        assert!(is_irreducible(&f));
        assert_eq!(imaginary_quadratic_subfields(&f, &b(3)), vec![b(-2), b(-1)]);
        let g = factor_over_quadratic(&f, &b(-1)).unwrap();
        assert_eq!(g.len(), 3);
        // a generic quartic CM field has none
        let f = IntPoly::from_i64s(&[25, 2, 3, 1, 1]);
        if validate(&f, &q).is_ok() && is_irreducible(&f) {
            assert!(imaginary_quadratic_subfields(&f, &q).is_empty());
        }
        let x = QuadraticElement::new(rat(0), rat(1), b(-1));
        assert!(is_root_of_unity(&x));
        assert!(!is_root_of_unity(
            &QuadraticElement::new(rat(3), rat(4), b(-1)).mul(&QuadraticElement::new(
                rat(1),
                BigRational::zero(),
                b(-1)
            ))
        ));
    }

    #[test]
    fn split_valuations() {
        let z = QuadraticElement::new(rat(2), rat(1), b(-1));
        let (v, vb) = (split_valuation(&z, 5), split_valuation(&z.conj(), 5));
        assert_eq!((v.min(vb), v.max(vb)), (0, 1));
        // (2 + i)^3 / 5 has valuations 3 - 1 = 2 and -1
        let y = z.pow(3).mul(&QuadraticElement::rational(
            BigRational::new(1.into(), 5.into()),
            &b(-1),
        ));
        assert_eq!(split_valuation(&y, 5), 3 * v - 1);
        // 2 splits in Q(sqrt -7): (1 + sqrt -7)/2 has norm 2
        let h = BigRational::new(1.into(), 2.into());
        let w = QuadraticElement::new(h.clone(), h, b(-7));
        assert_eq!(split_valuation(&w, 2) + split_valuation(&w.conj(), 2), 1);
        assert_eq!(
            split_valuation(&w.pow(5), 2) + split_valuation(&w.conj().pow(5), 2),
            5
        );
    }
}
