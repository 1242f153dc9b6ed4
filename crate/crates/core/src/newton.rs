//! Newton polygons of Weil polynomials (normalised so that `ord(q) = 1`) and
//! slope-type classification.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::weil::WeilPolynomial;

/// Segments `(slope, length)` with slopes the root valuations, strictly
/// increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub segments: Vec<(BigRational, usize)>,
}

fn ord_p(a: &BigInt, p: &BigInt) -> u64 {
    let mut a = a.clone();
    let mut k = 0;
    loop {
        let (q, r) = a.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        a = q;
        k += 1;
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

impl NewtonPolygon {
    pub fn length(&self, c: &BigRational) -> usize {
        self.segments
            .iter()
            .find(|(s, _)| s == c)
            .map_or(0, |(_, l)| *l)
    }

    pub fn slopes(&self) -> BTreeSet<BigRational> {
        self.segments.iter().map(|(s, _)| s.clone()).collect()
    }

    pub fn total_length(&self) -> usize {
        self.segments.iter().map(|(_, l)| l).sum()
    }

    /// Checks the invariants every Weil polynomial satisfies: total length,
    /// `c <-> 1 - c` symmetry and slopes in `[0, 1]`.
    pub fn check_invariants(&self, g: usize) -> Result<(), String> {
        if self.total_length() != 2 * g {
            return Err(format!(
                "lengths sum to {} instead of {}",
                self.total_length(),
                2 * g
            ));
        }
        for (c, l) in &self.segments {
            let dual = BigRational::one() - c;
            if self.length(&dual) != *l {
                return Err(format!(
                    "slope {c} has length {l} but {dual} has {}",
                    self.length(&dual)
                ));
            }
            if c < &BigRational::zero() || c > &BigRational::one() {
                return Err(format!("slope {c} outside [0, 1]"));
            }
        }
        Ok(())
    }

    /// Integrality of `c * length(c)` and evenness of `length(1/2)`. These
    /// hold for Frobenius polynomials of abelian varieties but can fail for
    /// a bare Weil polynomial (e.g. `t^2 + 2t + 8`, whose Weil number is the
    /// Frobenius of a surface, not of an elliptic curve).
    pub fn check_integrality(&self) -> Result<(), String> {
        for (c, l) in &self.segments {
            if !(c * BigRational::from_integer((*l).into())).is_integer() {
                return Err(format!("slope {c} times length {l} is not integral"));
            }
            if *c == half() && l % 2 == 1 {
                return Err(format!("slope 1/2 has odd length {l}"));
            }
        }
        Ok(())
    }

    pub fn is_integral(&self) -> bool {
        self.check_integrality().is_ok()
    }

    /// Largest denominator among slopes other than 1/2 (1 if none).
    pub fn max_denominator(&self) -> BigInt {
        self.segments
            .iter()
            .filter(|(c, _)| *c != half())
            .map(|(c, _)| c.denom().clone())
            .max()
            .unwrap_or_else(BigInt::one)
    }
}

/// Lower convex hull of `(i, ord_p(a_i)/v)`; slopes are reported as root
/// valuations in ascending order, so a unit root contributes slope 0.
pub fn newton_polygon(w: &WeilPolynomial) -> NewtonPolygon {
    let v = BigInt::from(w.v());
    let pts: Vec<(usize, BigRational)> = w
        .poly()
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| (i, BigRational::new(ord_p(a, w.p()).into(), v.clone())))
        .collect();
    let mut hull: Vec<(usize, BigRational)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let (x1, y1) = &hull[hull.len() - 2];
            let (x2, y2) = &hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let lhs = (y2 - y1) * BigRational::from_integer((pt.0 - x1).into());
            let rhs = (&pt.1 - y1) * BigRational::from_integer((x2 - x1).into());
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut segments: Vec<(BigRational, usize)> = hull
        .windows(2)
        .map(|s| {
            let len = s[1].0 - s[0].0;
            let slope = (&s[0].1 - &s[1].1) / BigRational::from_integer(len.into());
            (slope, len)
        })
        .collect();
    segments.reverse();
    let np = NewtonPolygon { segments };
    if let Err(e) = np.check_invariants(w.g()) {
        panic!("Newton polygon invariant violated for {}: {e}", w.poly());
    }
    np
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NewtonType {
    Ordinary,
    Supersingular,
    AlmostOrdinary,
    K3Type,
    Other,
}

impl NewtonType {
    pub fn as_str(&self) -> &'static str {
        match self {
            NewtonType::Ordinary => "ordinary",
            NewtonType::Supersingular => "supersingular",
            NewtonType::AlmostOrdinary => "almost_ordinary",
            NewtonType::K3Type => "k3_type",
            NewtonType::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonClass {
    pub labels: BTreeSet<NewtonType>,
    pub primary: NewtonType,
}

/// All applicable labels; the primary one follows the precedence
/// ordinary > supersingular > almost ordinary > K3 type.
pub fn classify_newton(np: &NewtonPolygon, _g: usize) -> NewtonClass {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let h = half();
    let slopes = np.slopes();
    let mut labels = BTreeSet::new();
    if slopes == BTreeSet::from([zero.clone(), one.clone()]) {
        labels.insert(NewtonType::Ordinary);
    }
    if slopes == BTreeSet::from([h.clone()]) {
        labels.insert(NewtonType::Supersingular);
    }
    if slopes == BTreeSet::from([zero.clone(), h.clone(), one.clone()]) && np.length(&h) == 2 {
        labels.insert(NewtonType::AlmostOrdinary);
    }
    let within = slopes.iter().all(|s| *s == zero || *s == h || *s == one);
    if within && np.length(&zero) == 1 && np.length(&one) == 1 {
        labels.insert(NewtonType::K3Type);
    }
    let primary = labels.iter().next().copied().unwrap_or(NewtonType::Other);
    if labels.is_empty() {
        labels.insert(NewtonType::Other);
    }
    NewtonClass { labels, primary }
}

/// True iff `e` divides the length of every segment.
pub fn slope_divisibility_check(np: &NewtonPolygon, e: u32) -> bool {
    e > 0 && np.segments.iter().all(|(_, l)| l % e as usize == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntPoly;
    use crate::weil::{base_change, validate};
    use proptest::prelude::*;

    fn w(c: &[i64], q: i64) -> WeilPolynomial {
        validate(&IntPoly::from_i64s(c), &BigInt::from(q)).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ordinary_and_supersingular() {
        let np = newton_polygon(&w(&[5, -1, 1], 5));
        assert_eq!(np.segments, vec![(r(0, 1), 1), (r(1, 1), 1)]);
        let c = classify_newton(&np, 1);
        assert_eq!(c.primary, NewtonType::Ordinary);
        assert!(c.labels.contains(&NewtonType::K3Type));
        let np = newton_polygon(&w(&[5, 0, 1], 5));
        assert_eq!(np.segments, vec![(r(1, 2), 2)]);
        assert_eq!(classify_newton(&np, 1).primary, NewtonType::Supersingular);
    }

    #[test]
    fn almost_ordinary_shape() {
        let np = NewtonPolygon {
            segments: vec![(r(0, 1), 2), (r(1, 2), 2), (r(1, 1), 2)],
        };
        assert!(np.check_invariants(3).is_ok());
        let c = classify_newton(&np, 3);
        assert_eq!(c.primary, NewtonType::AlmostOrdinary);
        assert!(slope_divisibility_check(&np, 2));
        assert!(!slope_divisibility_check(&np, 4));
    }

    #[test]
    fn non_prime_q_normalisation() {
        // t^2 - 2t + 4 over q = 4 (roots 1 +- i sqrt 3, supersingular: p | a)
        let np = newton_polygon(&w(&[4, -2, 1], 4));
        assert_eq!(np.segments, vec![(r(1, 2), 2)]);
        // t^2 - t + 4 is ordinary over q = 4
        let np = newton_polygon(&w(&[4, -1, 1], 4));
        assert_eq!(np.segments, vec![(r(0, 1), 1), (r(1, 1), 1)]);
    }

    proptest! {
        #[test]
        fn elliptic_ordinary_iff_p_not_dividing_trace(q in prop::sample::select(vec![2i64, 3, 4, 5, 7, 8, 9, 25]), a in -10i64..11) {
            prop_assume!(a * a <= 4 * q);
            let wp = w(&[q, -a, 1], q);
            let p = wp.p().clone();
            let np = newton_polygon(&wp);
            let ord = classify_newton(&np, 1).primary == NewtonType::Ordinary;
            prop_assert_eq!(ord, !(BigInt::from(a) % &p).is_zero());
                prop_assert_eq!(np.is_integral(), !(q == 8 && a.abs() == 2));
            for n in [2u32, 3] {
                prop_assert_eq!(&newton_polygon(&base_change(&wp, n).unwrap()), &np);
            }
        }
    }
}
