//! Exact verification of multiplicative relations among Weil numbers, and
//! the relation lattice of `{q^-1 a^2}` found by phase-lattice reduction.
//!
//! Equality test. `x = prod_{e>0} a^e prod_{e<0} (q/a)^|e|` is an algebraic
//! integer and the claim `prod a^e = q^M` becomes `x = T := q^(M + N_-)`.
//! Every Galois conjugate of `x` has absolute value `q^(sum|e|/2)`, so the
//! claim fails outright unless `sum|e| = 2(M + N_-)`. Otherwise all
//! conjugates of `x - T` are at most `2T` in absolute value, and a nonzero
//! `x - T` has norm at least 1, whence `|x - T| >= (2T)^-(D-1)` with `D` the
//! degree of the splitting field. A ball for `x` at enough precision then
//! decides equality exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::ball::{arg_over_pi, Ball};
use super::lattice::{hnf, is_saturated, lll};
use super::roots::RootSet;
use super::RelError;
use crate::exact::factor_over_integers;
use crate::exact::IntPoly;
use crate::newton::newton_polygon;
use crate::weil::WeilPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationConfig {
    pub exponent_bound: u32,
    pub start_prec: u32,
    pub max_prec: u32,
    pub degree_cap: u64,
}

impl Default for RelationConfig {
    fn default() -> Self {
        RelationConfig {
            exponent_bound: 20,
            start_prec: 128,
            max_prec: 8192,
            degree_cap: 6u64.pow(6),
        }
    }
}

/// Replayable witness that `prod a_i^{e_i} = q^m` holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCertificate {
    /// Exponents over the distinct roots, in `RootSet` order.
    pub exponents: Vec<i64>,
    pub m: i64,
    /// `x = q^target_exponent` is the equality actually decided.
    pub target_exponent: u64,
    /// Upper bound on the degree of the splitting field.
    pub degree_bound: u64,
    /// A nonzero `x - T` has `|x - T| >= 2^-separation_bits`.
    pub separation_bits: u64,
    /// Working precision at which `|x - T| < 2^-separation_bits` was shown.
    pub precision: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    /// Absolute values differ: `|x| = q^(sum/2)` but `|T| = q^target`.
    Archimedean {
        abs_exponent_sum: u64,
        target_exponent: i64,
    },
    /// The enclosure of `x - T` excludes zero.
    Separated { precision: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds(RelationCertificate),
    Refuted(Refutation),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }
}

/// Degree bound for the splitting field of `pmin`: `2^d d!` per CM factor of
/// degree `2d`, 2 for `t^2 - q`, 1 for linear factors, multiplied.
pub fn splitting_degree_bound(pmin: &IntPoly) -> u64 {
    let factors = factor_over_integers(pmin).expect("nonzero");
    let mut d = 1u64;
    for (f, _) in factors {
        let n = f.deg() as u64;
        let b = match n {
            0 | 1 => 1,
            _ if f.coeff(1).is_zero() && n == 2 => 2,
            _ => {
                let h = n / 2;
                (1..=h).fold(1u64 << h.min(62), |a, k| a.saturating_mul(k))
            }
        };
        d = d.saturating_mul(b);
    }
    d
}

fn ball_of_product(rs: &RootSet, e: &[i64]) -> Ball {
    let mut x = Ball::one(rs.prec);
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let j = if k > 0 { i } else { rs.roots[i].partner };
        x = x.mul(&rs.roots[j].ball.pow(k.unsigned_abs()));
    }
    x
}

/// Decides `prod a_i^{e_i} = q^m` over the distinct roots `rs`.
pub fn verify_relation(
    rs: &mut RootSet,
    q: &BigInt,
    e: &[i64],
    m: i64,
    cfg: &RelationConfig,
) -> Result<Verdict, RelError> {
    assert_eq!(e.len(), rs.len(), "one exponent per distinct root");
    let abs_sum: u64 = e.iter().map(|k| k.unsigned_abs()).sum();
    let neg: i64 = e.iter().filter(|&&k| k < 0).map(|k| -k).sum();
    let target = m + neg;
    if target < 0 || 2 * target as u64 != abs_sum {
        return Ok(Verdict::Refuted(Refutation::Archimedean {
            abs_exponent_sum: abs_sum,
            target_exponent: target,
        }));
    }
    let t = q.pow(target as u32);
    let degree = splitting_degree_bound(&rs.pmin);
    if degree > cfg.degree_cap {
        return Err(RelError::DegreeOverflow {
            degree,
            cap: cfg.degree_cap,
        });
    }
    let sep_bits = (degree - 1) * (BigInt::from(2) * &t).bits();
    let mut prec = rs.prec.max(cfg.start_prec);
    loop {
        rs.refine(prec)?;
        let x = ball_of_product(rs, e);
        let diff = x.sub_integer(&t);
        if diff.abs_lower().is_positive() {
            return Ok(Verdict::Refuted(Refutation::Separated { precision: prec }));
        }
        if (prec as u64) > sep_bits {
            let bound = BigInt::one() << (prec as u64 - sep_bits);
            if diff.abs_upper() < bound {
                return Ok(Verdict::Holds(RelationCertificate {
                    exponents: e.to_vec(),
                    m,
                    target_exponent: target as u64,
                    degree_bound: degree,
                    separation_bits: sep_bits,
                    precision: prec,
                }));
            }
        }
        prec = prec
            .checked_mul(2)
            .filter(|&p| p <= cfg.max_prec)
            .ok_or(RelError::PrecisionExhausted { bits: cfg.max_prec })?;
    }
}

/// Re-runs the equality test recorded in a certificate.
pub fn replay(
    w: &WeilPolynomial,
    cert: &RelationCertificate,
    cfg: &RelationConfig,
) -> Result<bool, RelError> {
    let mut rs = RootSet::new(w, cfg.start_prec, cfg.max_prec)?;
    Ok(verify_relation(&mut rs, w.q(), &cert.exponents, cert.m, cfg)?.holds())
}

/// Exponents over distinct roots for `prod_j (a_{r_j}^2 / q)^{v_j} = 1`.
pub fn lift_to_roots(rs: &RootSet, reps: &[usize], v: &[i64]) -> (Vec<i64>, i64) {
    let mut e = vec![0i64; rs.len()];
    for (&r, &k) in reps.iter().zip(v) {
        e[r] = 2 * k;
    }
    (e, v.iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeStatus {
    CompleteUpToH,
}

/// Nontrivial relations among the pair representatives `b_j = a_j^2/q`.
/// Relations `b(a) b(q/a) = 1` and the free exponent on `b = 1` (the trivial
/// sublattice) are implicit; `full_basis` spells them out.
#[derive(Debug, Clone)]
pub struct RelationLattice {
    pub roots: RootSet,
    pub reps: Vec<usize>,
    pub basis: Vec<Vec<i64>>,
    pub certificates: Vec<RelationCertificate>,
    pub exponent_bound: u32,
    pub status: LatticeStatus,
    pub saturated: bool,
}

impl RelationLattice {
    pub fn d(&self) -> usize {
        self.reps.len()
    }

    /// Basis of all relations among `{a^2/q}` indexed by distinct roots:
    /// the trivial vectors followed by the lifted nontrivial ones.
    pub fn full_basis(&self) -> Vec<Vec<i64>> {
        let n = self.roots.len();
        let mut out = Vec::new();
        for i in 0..n {
            let j = self.roots.roots[i].partner;
            let mut v = vec![0i64; n];
            if j == i {
                v[i] = 1;
                out.push(v);
            } else if i < j {
                v[i] = 1;
                v[j] = 1;
                out.push(v);
            }
        }
        for b in &self.basis {
            let mut v = vec![0i64; n];
            for (&r, &k) in self.reps.iter().zip(b) {
                v[r] = k;
            }
            out.push(v);
        }
        out
    }
}

fn to_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| i64::try_from(x).ok()).collect()
}

/// Candidate relations from LLL on `[I | round(2^k theta)]` with the extra
/// row `(0, 2^k)`, where `theta_j = arg(b_j) / 2pi` mod 1.
fn phase_candidates(rs: &mut RootSet, reps: &[usize], h: u32) -> Result<Vec<Vec<i64>>, RelError> {
    let d = reps.len();
    let k = 32 * (d as u32 + 2);
    let need = (k + 64).next_power_of_two();
    if rs.prec < need {
        rs.refine(need)?;
    }
    // arg(a^2/q) / 2pi = arg(a) / pi
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(d + 1);
    for (j, &r) in reps.iter().enumerate() {
        let b = &rs.roots[r].ball;
        let theta = arg_over_pi(&b.re, &b.im, k);
        let mut row = vec![BigInt::zero(); d + 1];
        row[j] = BigInt::one();
        row[d] = theta;
        rows.push(row);
    }
    let mut last = vec![BigInt::zero(); d + 1];
    last[d] = BigInt::one() << k;
    rows.push(last);
    lll(&mut rows);
    let mut out = Vec::new();
    for row in rows {
        let Some(v) = to_i64(&row[..d]) else { continue };
        if v.iter().all(|&x| x == 0) || v.iter().any(|x| x.unsigned_abs() > h as u64) {
            continue;
        }
        let l1: u64 = v.iter().map(|x| x.unsigned_abs()).sum();
        if row[d].abs() > BigInt::from(2 * l1 + 8) {
            continue;
        }
        let s = if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            -1
        } else {
            1
        };
        out.push(v.iter().map(|x| s * x).collect());
    }
    Ok(out)
}

pub fn relation_lattice(
    w: &WeilPolynomial,
    cfg: &RelationConfig,
) -> Result<RelationLattice, RelError> {
    let mut rs = RootSet::new(w, cfg.start_prec, cfg.max_prec)?;
    let reps = rs.pair_representatives();
    let mut verified: Vec<Vec<BigInt>> = Vec::new();
    if !reps.is_empty() {
        for v in phase_candidates(&mut rs, &reps, cfg.exponent_bound)? {
            let (e, m) = lift_to_roots(&rs, &reps, &v);
            if verify_relation(&mut rs, w.q(), &e, m, cfg)?.holds() {
                verified.push(v.iter().map(|&x| BigInt::from(x)).collect());
            }
        }
    }
    let basis_big = hnf(&verified);
    let saturated = is_saturated(&basis_big);
    let mut basis = Vec::new();
    let mut certificates = Vec::new();
    for row in &basis_big {
        let v = to_i64(row).expect("small HNF entries");
        let (e, m) = lift_to_roots(&rs, &reps, &v);
        match verify_relation(&mut rs, w.q(), &e, m, cfg)? {
            Verdict::Holds(c) => certificates.push(c),
            Verdict::Refuted(r) => {
                unreachable!("integer combination of verified relations refuted: {r:?}")
            }
        }
        basis.push(v);
    }
    Ok(RelationLattice {
        roots: rs,
        reps,
        basis,
        certificates,
        exponent_bound: cfg.exponent_bound,
        status: LatticeStatus::CompleteUpToH,
        saturated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    CertifiedRelationsOnly,
    CertifiedExact,
}

#[derive(Debug, Clone)]
pub struct OracleRank {
    pub rank: usize,
    /// Proven lower bound, independent of the relation search.
    pub lower_bound: usize,
    pub confidence: Confidence,
    pub lattice: RelationLattice,
}

/// `rank = d - rank(nontrivial relations)`: an upper bound proven by the
/// certificates, exact if no relation of height above `H` is missing. The
/// lower bound is 1 as soon as some slope differs from 1/2 (then some
/// `a^2/q` has nonzero valuation above `p` and infinite order), else 0.
pub fn oracle_rank(w: &WeilPolynomial, cfg: &RelationConfig) -> Result<OracleRank, RelError> {
    let lattice = relation_lattice(w, cfg)?;
    let rank = lattice.d() - lattice.basis.len();
    let half = num_rational::BigRational::new(1.into(), 2.into());
    let lower_bound = usize::from(newton_polygon(w).segments.iter().any(|(c, _)| *c != half));
    let confidence = if rank <= lower_bound {
        Confidence::CertifiedExact
    } else {
        Confidence::CertifiedRelationsOnly
    };
    Ok(OracleRank {
        rank,
        lower_bound: lower_bound.min(rank),
        confidence,
        lattice,
    })
}

/// Gcd of the entries; used to report non-primitive vectors.
pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |a, &b| a.gcd(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::{base_change, validate};

    fn w(c: &[i64], q: i64) -> WeilPolynomial {
        validate(&IntPoly::from_i64s(c), &BigInt::from(q)).unwrap()
    }

    fn cfg() -> RelationConfig {
        RelationConfig::default()
    }

    #[test]
    fn trivial_relation_holds() {
        let wp = w(&[5, -1, 1], 5);
        let mut rs = RootSet::new(&wp, 128, 8192).unwrap();
        let v = verify_relation(&mut rs, wp.q(), &[1, 1], 1, &cfg()).unwrap();
        assert!(v.holds());
        // a^2 = q fails (not supersingular)
        let v = verify_relation(&mut rs, wp.q(), &[2, 0], 1, &cfg()).unwrap();
        assert!(!v.holds());
        // wrong absolute value
        let v = verify_relation(&mut rs, wp.q(), &[3, 0], 1, &cfg()).unwrap();
        assert!(matches!(
            v,
            Verdict::Refuted(Refutation::Archimedean { .. })
        ));
    }

    #[test]
    fn elliptic_ranks() {
        let o = oracle_rank(&w(&[5, -1, 1], 5), &cfg()).unwrap();
        assert_eq!((o.rank, o.confidence), (1, Confidence::CertifiedExact));
        let o = oracle_rank(&w(&[4, -4, 1], 4), &cfg()).unwrap();
        assert_eq!((o.rank, o.confidence), (0, Confidence::CertifiedExact));
        let o = oracle_rank(&w(&[25, 10, 1], 25), &cfg()).unwrap();
        assert_eq!(o.rank, 0);
    }

    #[test]
    fn torsion_relation_not_saturated() {
        // t^2 + 5: b = a^2/5 = -1, so b^2 = 1 but b != 1
        let o = oracle_rank(&w(&[5, 0, 1], 5), &cfg()).unwrap();
        assert_eq!(o.rank, 0);
        assert_eq!(o.lattice.basis, vec![vec![2]]);
        assert!(!o.lattice.saturated);
        let o = oracle_rank(&base_change(&w(&[5, 0, 1], 5), 2).unwrap(), &cfg()).unwrap();
        assert_eq!(o.rank, 0);
        assert!(o.lattice.saturated);
    }

    #[test]
    fn certificates_replay() {
        let wp = w(&[5, 0, 1], 5);
        let o = oracle_rank(&wp, &cfg()).unwrap();
        for c in &o.lattice.certificates {
            assert!(replay(&wp, c, &cfg()).unwrap());
        }
        assert_eq!(o.lattice.full_basis().len(), 2);
    }

    #[test]
    fn degree_bounds() {
        assert_eq!(splitting_degree_bound(&IntPoly::from_i64s(&[5, -1, 1])), 2);
        assert_eq!(splitting_degree_bound(&IntPoly::from_i64s(&[-5, 0, 1])), 2);
        assert_eq!(
            splitting_degree_bound(&IntPoly::from_i64s(&[125, 0, 0, 5, 0, 0, 1])),
            48
        );
    }
}
