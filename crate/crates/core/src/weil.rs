//! Weil q-polynomials: exact validation, eigenvalue structure, base change
//! and torsion among root ratios.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::exact::cyclotomic::{cyclotomic_poly, orders_with_phi_at_most};
use crate::exact::intfactor::{exact_sqrt, prime_power};
use crate::exact::modp::PolyModP;
use crate::exact::sturm::sturm_real_root_count;
use crate::exact::{factor_over_integers, power_transform, product_transform, IntPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeilError {
    #[error("NotMonic: leading coefficient is {lc}")]
    NotMonic { lc: BigInt },
    #[error("OddDegree: degree {degree} is not a positive even number")]
    OddDegree { degree: usize },
    #[error("NotPrimePower: q = {q}")]
    NotPrimePower { q: BigInt },
    #[error("FunctionalEquationFails: coefficient of t^{index}")]
    FunctionalEquationFails { index: usize },
    #[error("RiemannHypothesisFails: {check} ({found} of {expected} roots)")]
    RiemannHypothesisFails {
        check: &'static str,
        found: usize,
        expected: usize,
    },
}

/// A validated Weil `q`-polynomial of degree `2g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilPolynomial {
    poly: IntPoly,
    q: BigInt,
    p: BigInt,
    v: u32,
    g: usize,
}

impl WeilPolynomial {
    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// Sign `eps` of the functional equation `t^2g P(q/t) = eps q^g P(t)`.
    pub fn epsilon(&self) -> i32 {
        if self.poly.coeff(0).is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn sqrt_q(&self) -> Option<BigInt> {
        exact_sqrt(&self.q)
    }
}

/// `h` with `P(t) = t^k h(t + q/t)` for a polynomial of degree `2k`
/// satisfying the `eps = +1` functional equation. Coefficients are peeled
/// off top-down against the basis `t^(k-j) (t^2 + q)^j`.
pub fn real_polynomial(poly: &IntPoly, q: &BigInt) -> IntPoly {
    let k = poly.deg() / 2;
    let base = IntPoly::new(vec![q.clone(), BigInt::zero(), BigInt::one()]);
    let mut rest = poly.coeffs().to_vec();
    let mut h = vec![BigInt::zero(); k + 1];
    let mut pw = vec![IntPoly::one()];
    for j in 1..=k {
        let next = &pw[j - 1] * &base;
        pw.push(next);
    }
    for j in (0..=k).rev() {
        let c = rest.get(k + j).cloned().unwrap_or_default();
        if c.is_zero() {
            continue;
        }
        for (i, b) in pw[j].coeffs().iter().enumerate() {
            rest[k - j + i] -= &c * b;
        }
        h[j] = c;
    }
    debug_assert!(rest.iter().all(|c| c.is_zero()));
    IntPoly::new(h)
}

/// Exact check that every root of `h` is real and lies in `[-2 sqrt q, 2 sqrt q]`.
fn check_real_roots(h: &IntPoly, q: &BigInt) -> Result<(), WeilError> {
    if h.deg() == 0 {
        return Ok(());
    }
    let sf = h.squarefree_part();
    let n = sf.deg();
    let real = sturm_real_root_count(&sf, None, None).expect("no endpoints");
    if real != n {
        return Err(WeilError::RiemannHypothesisFails {
            check: "real roots of t + q/t image",
            found: real,
            expected: n,
        });
    }
    // H(y) = prod (y - (4q - r^2)) = (-1)^n S(4q - y) with S having roots r^2.
    let s = power_transform(&sf, 2).expect("monic");
    let four_q = BigInt::from(4) * q;
    let sub = IntPoly::new(vec![four_q, -BigInt::one()]);
    let mut big_h = s.compose(&sub);
    if n % 2 == 1 {
        big_h = -big_h;
    }
    let hs = big_h.squarefree_part();
    let zero = BigRational::zero();
    let mut neg = sturm_real_root_count(&hs, None, Some(&zero)).expect("squarefree");
    if hs.coeff(0).is_zero() {
        neg -= 1;
    }
    if neg > 0 {
        return Err(WeilError::RiemannHypothesisFails {
            check: "roots inside [-2 sqrt q, 2 sqrt q]",
            found: n - neg,
            expected: n,
        });
    }
    Ok(())
}

pub fn validate(poly: &IntPoly, q: &BigInt) -> Result<WeilPolynomial, WeilError> {
    if !poly.is_monic() {
        return Err(WeilError::NotMonic {
            lc: poly.leading().cloned().unwrap_or_default(),
        });
    }
    let deg = poly.deg();
    if deg == 0 || deg % 2 == 1 {
        return Err(WeilError::OddDegree { degree: deg });
    }
    let (p, v) = prime_power(q).ok_or_else(|| WeilError::NotPrimePower { q: q.clone() })?;
    let g = deg / 2;
    // a_i q^i = eps q^g a_{2g-i}, with eps fixed by i = 0
    let qg = q.pow(g as u32);
    let a0 = poly.coeff(0);
    let eps = if a0 == qg {
        BigInt::one()
    } else if a0 == -&qg {
        -BigInt::one()
    } else {
        return Err(WeilError::FunctionalEquationFails { index: 0 });
    };
    let mut qi = BigInt::one();
    for i in 0..=deg {
        if poly.coeff(i) * &qi != &eps * &qg * poly.coeff(deg - i) {
            return Err(WeilError::FunctionalEquationFails { index: i });
        }
        qi *= q;
    }
    let even = if eps.is_one() {
        poly.clone()
    } else {
        // eps = -1 forces (t^2 - q) | P and leaves an eps = +1 cofactor
        let t2q = IntPoly::new(vec![-q.clone(), BigInt::zero(), BigInt::one()]);
        poly.exact_div(&t2q)
            .ok_or(WeilError::FunctionalEquationFails { index: 0 })?
    };
    check_real_roots(&real_polynomial(&even, q), q)?;
    Ok(WeilPolynomial {
        poly: poly.clone(),
        q: q.clone(),
        p,
        v,
        g,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SqrtRoot {
    None,
    Plus,
    Minus,
    Both,
}

impl SqrtRoot {
    fn join(self, other: SqrtRoot) -> SqrtRoot {
        use SqrtRoot::*;
        match (self, other) {
            (None, x) | (x, None) => x,
            (a, b) if a == b => a,
            _ => Both,
        }
    }
}

/// One isotypic piece `f^e` of a Weil polynomial, `f` irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub pmin: IntPoly,
    pub e: u32,
    pub r_count: usize,
    /// Number of pairs `{a, q/a}` of distinct roots with `a != q/a`.
    pub d: usize,
    pub sqrt_root: SqrtRoot,
}

impl Component {
    /// Rank of the endomorphism ring, `sum m(a)^2 = r_count e^2`.
    pub fn end_rank(&self) -> usize {
        self.r_count * (self.e as usize).pow(2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenvalueStructure {
    /// Polynomial with the distinct roots, `P_min`.
    pub pmin: IntPoly,
    /// `Some(e)` when `P = pmin^e` with `pmin` irreducible.
    pub e: Option<u32>,
    pub d: usize,
    pub sqrt_root: SqrtRoot,
    pub r_count: usize,
    pub components: Vec<Component>,
}

impl EigenvalueStructure {
    pub fn simple(&self) -> bool {
        self.components.len() == 1
    }
}

fn sqrt_root_of(f: &IntPoly, q: &BigInt) -> SqrtRoot {
    match exact_sqrt(q) {
        Some(s) => {
            if *f == IntPoly::linear_root(&s) {
                SqrtRoot::Plus
            } else if *f == IntPoly::linear_root(&-s) {
                SqrtRoot::Minus
            } else {
                SqrtRoot::None
            }
        }
        None => {
            if *f == IntPoly::new(vec![-q.clone(), BigInt::zero(), BigInt::one()]) {
                SqrtRoot::Both
            } else {
                SqrtRoot::None
            }
        }
    }
}

pub fn eigenvalue_structure(w: &WeilPolynomial) -> EigenvalueStructure {
    let factors = factor_over_integers(&w.poly).expect("nonzero");
    let mut components = Vec::new();
    let mut pmin = IntPoly::one();
    let mut sqrt_root = SqrtRoot::None;
    let mut d = 0;
    for (f, e) in factors {
        let sr = sqrt_root_of(&f, &w.q);
        let selfpaired = match sr {
            SqrtRoot::None => 0,
            SqrtRoot::Both => 2,
            _ => 1,
        };
        let r = f.deg();
        let cd = (r - selfpaired) / 2;
        d += cd;
        sqrt_root = sqrt_root.join(sr);
        pmin = &pmin * &f;
        components.push(Component {
            pmin: f,
            e,
            r_count: r,
            d: cd,
            sqrt_root: sr,
        });
    }
    let e = (components.len() == 1).then(|| components[0].e);
    EigenvalueStructure {
        r_count: pmin.deg(),
        pmin,
        e,
        d,
        sqrt_root,
        components,
    }
}

/// Base change to `F_{q^n}`: roots are replaced by their `n`-th powers.
pub fn base_change(w: &WeilPolynomial, n: u32) -> Result<WeilPolynomial, WeilError> {
    if n == 1 {
        return Ok(w.clone());
    }
    let poly = power_transform(&w.poly, n).expect("monic, n > 0");
    validate(&poly, &w.q.pow(n))
}

fn cyclotomic_table(bound: u64) -> &'static [(u64, IntPoly)] {
    static TABLE: OnceLock<Vec<(u64, IntPoly)>> = OnceLock::new();
    const MAX_BOUND: u64 = 8 * 7;
    assert!(bound <= MAX_BOUND, "torsion search bound too large");
    TABLE.get_or_init(|| {
        orders_with_phi_at_most(MAX_BOUND)
            .into_iter()
            .map(|n| (n, cyclotomic_poly(n)))
            .collect()
    })
}

/// Orders `n` with `Phi_n | f`, over all `n` with `phi(n) <= bound`.
pub fn cyclotomic_divisor_orders(f: &IntPoly, bound: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    if f.deg() == 0 {
        return out;
    }
    // Phi_n | f over Z implies Phi_n | f mod a prime: screen there first
    const SCREEN: u64 = 4_294_967_291;
    let fm = PolyModP::from_int(f, SCREEN);
    for (n, phi) in cyclotomic_table(bound) {
        if phi.deg() as u64 > bound.min(f.deg() as u64) {
            continue;
        }
        if !fm.rem(&PolyModP::from_int(phi, SCREEN)).is_zero() {
            continue;
        }
        let (_, r) = f.div_rem_monic(phi);
        if r.is_zero() {
            out.insert(*n);
        }
    }
    out
}

/// Orders of roots of unity among ratios `a/b` of distinct roots (this
/// includes `a / (q/a) = a^2/q`).
pub fn ratio_torsion_orders(w: &WeilPolynomial) -> BTreeSet<u64> {
    let pmin = w.poly.squarefree_part();
    let r = pmin.deg();
    if r < 2 {
        return BTreeSet::new();
    }
    // 1/b = conj(b)/q with conj(b) again a root, so the ratios are the
    // products a b'/q: an integral transform, much cheaper than the rational one
    let ratios = product_transform(&pmin, &pmin)
        .expect("monic")
        .scale_variable(&w.q)
        .primitive_part();
    let ones = IntPoly::from_i64s(&[-1, 1]).pow(r as u32);
    let rest = ratios.exact_div(&ones).expect("a/a = 1 occurs r times");
    cyclotomic_divisor_orders(&rest, (r * (r - 1)) as u64)
}

/// Polynomial (primitive) whose roots are `a^2/q` over the distinct roots.
pub fn normalized_square_poly(w: &WeilPolynomial) -> IntPoly {
    let pmin = w.poly.squarefree_part();
    let s = power_transform(&pmin, 2).expect("monic");
    s.scale_variable(&w.q).primitive_part()
}

/// Orders of the roots of unity among the `q^-1 a^2`.
pub fn normalized_square_torsion(w: &WeilPolynomial) -> BTreeSet<u64> {
    let t = normalized_square_poly(w);
    let r = t.deg() as u64;
    cyclotomic_divisor_orders(&t, r)
}

/// Least common multiple of a set of orders (1 for the empty set).
pub fn lcm_of(orders: &BTreeSet<u64>) -> u64 {
    orders.iter().fold(1u64, |a, &b| num_integer::lcm(a, b))
}

/// Decimal strings of the ascending coefficients.
pub fn coeff_strings(f: &IntPoly) -> Vec<String> {
    f.coeffs().iter().map(|c| c.to_string()).collect()
}

pub fn q_as_u64(w: &WeilPolynomial) -> Option<u64> {
    w.q.to_u64()
}
