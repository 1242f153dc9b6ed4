//! Enumeration of Weil polynomials, the conjugate-cubic search for non-neat
//! sextics, and the totally real cubic constructor.
//!
//! Enumeration walks the real polynomial `h` with `P(t) = t^g h(t + q/t)`:
//! `P` is Weil (with `P(0) = q^g`) iff `h` has all roots real in
//! `[-2 sqrt q, 2 sqrt q]`. By Rolle every derivative inherits this, and
//! fixing the top coefficients of `h` one at a time leaves an interval for
//! the next one, read off the critical values of the derivative one order
//! up. Floating point only prunes (with a margin); every emitted polynomial
//! is validated exactly.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::classify::{classify_auto, ClassificationReport, ClassifyError};
use crate::exact::intfactor::{exact_sqrt, is_prime_u64, legendre, prime_power, squarefree_kernel};
use crate::exact::modp::PolyModP;
use crate::exact::sturm::real_root_count;
use crate::exact::{is_irreducible, IntPoly};
use crate::newton::{classify_newton, newton_polygon, NewtonType};
use crate::relfinder::RelationConfig;
use crate::subfields::{p_splits, ConjugateFactorization, QuadraticElement, Splitting};
use crate::weil::{validate, WeilPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("NotPrimePower: q = {0}")]
    NotPrimePower(u64),
    #[error("QNotSquare: q = {0}")]
    QNotSquare(u64),
    #[error("BSplitAtP: {p} splits in Q(sqrt({m}))")]
    BSplitAtP { p: u64, m: i64 },
    #[error("NotImaginaryQuadratic: m = {0} must be negative and squarefree")]
    NotImaginaryQuadratic(i64),
    #[error("ResidueConditionFails: {l} is a square mod {p}")]
    ResidueConditionFails { p: u64, l: u64 },
    #[error("InvalidPrimes: p = {p}, l = {l}")]
    InvalidPrimes { p: u64, l: u64 },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchSpec {
    pub g: usize,
    pub q: u64,
    /// Optional caps on `|a_i|`, `i = 1..`, for `P = t^2g + a_1 t^(2g-1) + ...`;
    /// intersected with the bounds implied by the Riemann hypothesis.
    pub bounds: Vec<Option<u64>>,
    pub irreducible_only: bool,
    pub newton: Option<NewtonType>,
    /// Keep only this neatness verdict (after base change to sufficiency).
    pub neat: Option<bool>,
    pub limit: Option<usize>,
}

impl SearchSpec {
    pub fn new(g: usize, q: u64) -> Self {
        SearchSpec {
            g,
            q,
            ..Default::default()
        }
    }
}

/// `sum_k h_k t^(g-k) (t^2 + q)^k`, ascending.
pub fn from_real_polynomial(h: &[i64], q: i64) -> IntPoly {
    let g = h.len() - 1;
    let mut out = vec![0i128; 2 * g + 1];
    // (t^2 + q)^k by repeated multiplication
    let mut pw = vec![1i128];
    for (k, &hk) in h.iter().enumerate() {
        if hk != 0 {
            for (i, &c) in pw.iter().enumerate() {
                out[g - k + i] += hk as i128 * c;
            }
        }
        let mut next = vec![0i128; pw.len() + 2];
        for (i, &c) in pw.iter().enumerate() {
            next[i] += q as i128 * c;
            next[i + 2] += c;
        }
        pw = next;
    }
    IntPoly::new(out.into_iter().map(BigInt::from).collect())
}

fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |a, &k| a * x + k)
}

fn real_roots_sorted(c: &[f64]) -> Option<Vec<f64>> {
    let n = c.len() - 1;
    if n == 0 {
        return Some(Vec::new());
    }
    if n == 1 {
        return Some(vec![-c[0] / c[1]]);
    }
    let lc = c[n];
    let mon: Vec<f64> = c.iter().map(|x| x / lc).collect();
    let roots = float_aberth(&mon);
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if roots.iter().any(|z| z.im.abs() > 1e-6 * scale) {
        return None;
    }
    let mut r: Vec<f64> = roots.iter().map(|z| z.re).collect();
    r.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Some(r)
}

fn float_aberth(mon: &[f64]) -> Vec<num_complex::Complex64> {
    use num_complex::Complex64 as C;
    let n = mon.len() - 1;
    let r0 = 1.0 + mon[..n].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            C::from_polar(
                r0 * 0.7,
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..200 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (mut p, mut dp) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
            for &c in mon.iter().rev() {
                dp = dp * z[i] + p;
                p = p * z[i] + C::new(c, 0.0);
            }
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: C = (0..n)
                .filter(|&j| j != i)
                .map(|j| C::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (C::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Integer range for `h_k` given `h_{k+1..g}`, or `None` if empty.
fn coefficient_range(h_top: &[i64], k: usize, bound: f64) -> Option<(i64, i64)> {
    // derivative of order k without its constant term, ascending in x
    let g = h_top.len() + k;
    let fact = |n: usize| (1..=n).map(|x| x as f64).product::<f64>();
    let mut f = vec![0.0; g - k + 1];
    for j in k + 1..=g {
        f[j - k] = h_top[j - k - 1] as f64 * fact(j) / fact(j - k);
    }
    let n = g - k;
    let df: Vec<f64> = (1..=n).map(|i| f[i] * i as f64).collect();
    let crit = real_roots_sorted(&df)?;
    if crit.iter().any(|&x| x.abs() > bound * (1.0 + 1e-9) + 1e-9) {
        return None;
    }
    // F + C: at the i-th critical point from the right the sign is (-1)^(i+1)
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut need = |val: f64, sign: f64| {
        // sign * (val + C) >= 0
        if sign > 0.0 {
            lo = lo.max(-val);
        } else {
            hi = hi.min(-val);
        }
    };
    need(eval(&f, bound), 1.0);
    need(
        eval(&f, -bound),
        if n.is_multiple_of(2) { 1.0 } else { -1.0 },
    );
    for (i, &x) in crit.iter().rev().enumerate() {
        need(eval(&f, x), if i % 2 == 0 { -1.0 } else { 1.0 });
    }
    let kf = fact(k);
    let slack = 1e-9 * (lo.abs().max(hi.abs()) + 1.0);
    let lo = ((lo - slack) / kf).floor() as i64 - 1;
    let hi = ((hi + slack) / kf).ceil() as i64 + 1;
    (lo <= hi).then_some((lo, hi))
}

fn walk(
    h_top: &mut Vec<i64>,
    k: usize,
    bound: f64,
    spec: &SearchSpec,
    out: &mut Vec<WeilPolynomial>,
) {
    let Some((lo, hi)) = coefficient_range(h_top, k, bound) else {
        return;
    };
    for c in lo..=hi {
        if k == 0 {
            let mut h = vec![c];
            h.extend(h_top.iter().copied());
            let poly = from_real_polynomial(&h, spec.q as i64);
            if !within_bounds(&poly, spec) {
                continue;
            }
            if let Ok(w) = validate(&poly, &BigInt::from(spec.q)) {
                out.push(w);
            }
        } else {
            h_top.insert(0, c);
            let ok = prefix_within_bounds(h_top, spec);
            if ok {
                walk(h_top, k - 1, bound, spec, out);
            }
            h_top.remove(0);
        }
    }
}

/// `a_i` is `h_{g-i}` plus terms in higher coefficients; only `a_1 = h_{g-1}`
/// is checked before the polynomial is complete.
fn prefix_within_bounds(h_top: &[i64], spec: &SearchSpec) -> bool {
    let g = spec.g;
    if h_top.len() == 1 && g >= 1 {
        if let Some(Some(b)) = spec.bounds.first() {
            return h_top[0].unsigned_abs() <= *b;
        }
    }
    true
}

fn within_bounds(poly: &IntPoly, spec: &SearchSpec) -> bool {
    let n = poly.deg();
    spec.bounds.iter().enumerate().all(|(i, b)| match b {
        Some(b) => poly.coeff(n - i - 1).abs() <= BigInt::from(*b),
        None => true,
    })
}

fn passes_filters(w: &WeilPolynomial, spec: &SearchSpec) -> bool {
    if spec.irreducible_only && !is_irreducible(w.poly()) {
        return false;
    }
    if let Some(t) = spec.newton {
        if !classify_newton(&newton_polygon(w), w.g())
            .labels
            .contains(&t)
        {
            return false;
        }
    }
    if let Some(neat) = spec.neat {
        match classify_auto(w, None) {
            Ok(r) if r.neat == neat => {}
            _ => return false,
        }
    }
    true
}

/// All Weil polynomials with `P(0) = q^g` in the box, lexicographic in
/// `(a_1, ..., a_g)`.
pub fn enumerate_weil(spec: &SearchSpec) -> Result<Vec<WeilPolynomial>, SearchError> {
    if prime_power(&BigInt::from(spec.q)).is_none() {
        return Err(SearchError::NotPrimePower(spec.q));
    }
    let g = spec.g;
    if g == 0 {
        return Ok(Vec::new());
    }
    let bound = 2.0 * (spec.q as f64).sqrt();
    let (lo, hi) = coefficient_range(&[1], g - 1, bound).expect("x^g + c is admissible");
    let firsts: Vec<i64> = (lo..=hi).collect();
    let chunks: Vec<Vec<WeilPolynomial>> = firsts
        .par_iter()
        .map(|&c| {
            let mut top = vec![c, 1];
            let mut out = Vec::new();
            if !prefix_within_bounds(&top[..1], spec) {
                return out;
            }
            if g == 1 {
                let poly = from_real_polynomial(&[c, 1], spec.q as i64);
                if within_bounds(&poly, spec) {
                    if let Ok(w) = validate(&poly, &BigInt::from(spec.q)) {
                        out.push(w);
                    }
                }
            } else {
                walk(&mut top, g - 2, bound, spec, &mut out);
            }
            out.retain(|w| passes_filters(w, spec));
            out
        })
        .collect();
    // h_{g-1} = a_1 ascending, and deeper levels ascend likewise
    let mut all: Vec<WeilPolynomial> = chunks.into_iter().flatten().collect();
    if let Some(n) = spec.limit {
        all.truncate(n);
    }
    Ok(all)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonNeatSpec {
    pub p: u64,
    pub q: u64,
    pub m: i64,
    /// Cap on `|A|^2` (default `9q`, from `|A| <= 3 sqrt q`).
    pub a_norm_bound: Option<u64>,
    pub limit: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct NonNeatInstance {
    pub weil: WeilPolynomial,
    pub witness: ConjugateFactorization,
    pub report: ClassificationReport,
}

fn int_elements(m: i64, norm_bound: u64) -> Vec<(BigInt, BigInt, i64)> {
    // (x, y, den) for (x + y sqrt m) / den in the ring of integers
    let half = m.rem_euclid(4) == 1;
    let den: i64 = if half { 2 } else { 1 };
    // |(x + y sqrt m)/den|^2 = (x^2 - m y^2) / den^2 <= bound
    let lim = den * den * norm_bound as i64;
    let xmax = (lim as f64).sqrt() as i64 + 1;
    let ymax = ((lim as f64) / (-m as f64)).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for x in -xmax..=xmax {
        for y in -ymax..=ymax {
            if half && (x - y).rem_euclid(2) != 0 {
                continue;
            }
            if x * x - m * y * y <= lim {
                out.push((BigInt::from(x), BigInt::from(y), den));
            }
        }
    }
    out
}

/// Weil sextics `G * conj(G)` with `G = t^3 + A t^2 + B t + C` over
/// `Q(sqrt m)`, `C = +-q^(3/2)` and `B = C conj(A) / q`, that classify as
/// non-neat (after base change to sufficiency).
pub fn find_non_neat_sextics(spec: &NonNeatSpec) -> Result<Vec<NonNeatInstance>, SearchError> {
    let (p, q, m) = (spec.p, spec.q, spec.m);
    let qb = BigInt::from(q);
    match prime_power(&qb) {
        Some((pp, _)) if pp == BigInt::from(p) => {}
        _ => return Err(SearchError::NotPrimePower(q)),
    }
    let Some(s) = exact_sqrt(&qb) else {
        return Err(SearchError::QNotSquare(q));
    };
    if m >= 0 || squarefree_kernel(&BigInt::from(m)) != BigInt::from(m) {
        return Err(SearchError::NotImaginaryQuadratic(m));
    }
    let mb = BigInt::from(m);
    if p_splits(&mb, p) == Splitting::Split {
        return Err(SearchError::BSplitAtP { p, m });
    }
    let rat = |x: &BigInt, den: i64| num_rational::BigRational::new(x.clone(), BigInt::from(den));
    let elems = int_elements(m, spec.a_norm_bound.unwrap_or(9 * q));
    let s3 = s.pow(3);
    let mut seen: HashSet<IntPoly> = HashSet::new();
    let mut out = Vec::new();
    for (x, y, den) in &elems {
        let a = QuadraticElement::new(rat(x, *den), rat(y, *den), mb.clone());
        for sign in [1i64, -1] {
            let c = QuadraticElement::rational(rat(&(&s3 * sign), 1), &mb);
            // B = C conj(A) / q = +-s conj(A)
            let b = a
                .conj()
                .mul(&QuadraticElement::rational(rat(&(&s * sign), 1), &mb));
            let cf = ConjugateFactorization {
                m: mb.clone(),
                g: [c, b, a.clone()],
            };
            let coeffs = cf.expand();
            if coeffs
                .iter()
                .any(|c| !c.is_rational() || !c.a0.is_integer())
            {
                continue;
            }
            let poly = IntPoly::new(coeffs.iter().map(|c| c.a0.to_integer()).collect());
            if seen.contains(&poly) {
                continue;
            }
            seen.insert(poly.clone());
            let Ok(w) = validate(&poly, &qb) else {
                continue;
            };
            if !is_irreducible(&poly) {
                continue;
            }
            if !classify_newton(&newton_polygon(&w), 3)
                .labels
                .contains(&NewtonType::AlmostOrdinary)
            {
                continue;
            }
            let report = match classify_auto(&w, Some(&RelationConfig::default())) {
                Ok(r) => r,
                Err(ClassifyError::TorsionBoundExceeded { .. }) => continue,
                Err(e) => return Err(e.into()),
            };
            if report.neat {
                continue;
            }
            out.push(NonNeatInstance {
                weil: w,
                witness: cf,
                report,
            });
            if spec.limit.is_some_and(|l| out.len() >= l) {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicReport {
    pub p: u64,
    pub l: u64,
    /// `D x^3 - D l x + p l` with `D = (p l + 1)^4`: `D f(x)` cleared.
    pub poly: IntPoly,
    pub denominator: BigInt,
    pub eisenstein: bool,
    pub real_roots: usize,
    /// Degrees of the irreducible factors mod `p`, ascending.
    pub modp_shape: Vec<usize>,
    pub quadratic_irreducible_mod_p: bool,
}

impl CubicReport {
    pub fn all_pass(&self) -> bool {
        self.eisenstein
            && self.real_roots == 3
            && self.modp_shape == [1, 2]
            && self.quadratic_irreducible_mod_p
    }
}

fn eisenstein_at(f: &IntPoly, l: &BigInt) -> bool {
    let n = f.deg();
    let l2 = l * l;
    !(f.coeff(n) % l).is_zero()
        && (0..n).all(|i| (f.coeff(i) % l).is_zero())
        && !(f.coeff(0) % &l2).is_zero()
}

/// The cubic `x (x^2 - l) + p l / (p l + 1)^4`, with its three checks.
pub fn construct_totally_real_cubic(p: u64, l: u64) -> Result<CubicReport, SearchError> {
    if p == 2 || !is_prime_u64(p) || !is_prime_u64(l) || p == l {
        return Err(SearchError::InvalidPrimes { p, l });
    }
    if legendre(&BigInt::from(l), p) != -1 {
        return Err(SearchError::ResidueConditionFails { p, l });
    }
    let (pb, lb) = (BigInt::from(p), BigInt::from(l));
    let d = (&pb * &lb + 1u32).pow(4);
    let poly = IntPoly::new(vec![&pb * &lb, -(&d * &lb), BigInt::zero(), d.clone()]);
    let eisenstein = eisenstein_at(&poly, &lb);
    let real_roots = real_root_count(&poly);
    let fp = PolyModP::from_int(&poly, p);
    let roots: Vec<u64> = (0..p).filter(|&x| fp.eval(x) == 0).collect();
    let (modp_shape, quadratic_irreducible_mod_p) =
        match (fp.deg(), fp.is_squarefree(), roots.len()) {
            (3, true, 1) => {
                // the cofactor of the single root is an irreducible quadratic
                let lin = PolyModP::new(p, vec![(p - roots[0]) % p, 1]);
                let (quad, r) = fp.div_rem(&lin);
                let irr = r.is_zero() && (0..p).all(|x| quad.eval(x) != 0);
                (vec![1, 2], irr)
            }
            (3, true, 3) => (vec![1, 1, 1], false),
            (3, true, 0) => (vec![3], false),
            _ => (vec![], false),
        };
    Ok(CubicReport {
        p,
        l,
        poly,
        denominator: d,
        eisenstein,
        real_roots,
        modp_shape,
        quadratic_irreducible_mod_p,
    })
}

/// Coefficients `a_1..a_g` of `t^(2g-1)..t^g` (the free ones).
pub fn free_coefficients(w: &WeilPolynomial) -> Vec<i64> {
    let n = w.poly().deg();
    (1..=w.g())
        .map(|i| w.poly().coeff(n - i).to_i64().expect("small"))
        .collect()
}
