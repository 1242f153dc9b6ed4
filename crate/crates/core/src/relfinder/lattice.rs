//! Small-dimension integer lattices: integral LLL reduction, row Hermite
//! normal form, rank and saturation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest integer to a / b, b > 0
    let num: BigInt = a * 2 + b;
    num.div_floor(&(b * 2))
}

/// LLL with `delta = 3/4`, in place, in the integral (fraction-free) form:
/// `d[i]` are the Gram determinants and `lam[k][j] = d[j+1] mu[k][j]`, all
/// integers, updated incrementally. Rows must be linearly independent.
pub fn lll(b: &mut [Vec<BigInt>]) {
    let n = b.len();
    if n < 2 {
        return;
    }
    // 1-based Gram data: d[0] = 1, d[i] for the first i rows
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::one();
    d[1] = dot(&b[0], &b[0]);
    let mut kmax = 0usize;
    let mut k = 1usize;
    let red = |b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize| {
        let twice: BigInt = &lam[k][l] * 2;
        if twice.abs() > d[l + 1] {
            let r = round_div(&lam[k][l], &d[l + 1]);
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &r * y;
            }
            lam[k][l] -= &r * &d[l + 1];
            for i in 0..l {
                let t = &r * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "dependent rows");
                    d[k + 1] = u;
                }
            }
        }
        loop {
            red(b, &mut lam, &d, k, k - 1);
            let lhs = &d[k + 1] * &d[k - 1] * 4;
            let rhs = &d[k] * &d[k] * 3 - &lam[k][k - 1] * &lam[k][k - 1] * 4;
            if lhs >= rhs {
                break;
            }
            // swap rows k-1 and k
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let bb = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k + 1];
            }
            d[k] = bb;
            if k > 1 {
                k -= 1;
            }
        }
        for l in (0..k.saturating_sub(1)).rev() {
            red(b, &mut lam, &d, k, l);
        }
        k += 1;
    }
}

/// Row Hermite normal form of the lattice spanned by `rows` (zero rows
/// dropped): upper echelon, positive pivots, entries above pivots reduced
/// into `[0, pivot)`.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if a.is_empty() {
        return a;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let piv = (r..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| a[i][c].abs());
            let Some(p) = piv else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if !a[i][c].is_zero() {
                    let f = a[i][c].div_floor(&a[r][c]);
                    let pr = a[r].clone();
                    for (x, y) in a[i].iter_mut().zip(&pr) {
                        *x -= &f * y;
                    }
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let pr = a[r].clone();
            for i in 0..r {
                let f = a[i][c].div_floor(&pr[c]);
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a
}

/// Rank over `Q`.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    hnf(rows).len()
}

fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// A full-rank set of rows spans a saturated lattice iff the gcd of its
/// maximal minors is 1.
pub fn is_saturated(rows: &[Vec<BigInt>]) -> bool {
    let b = hnf(rows);
    if b.is_empty() {
        return true;
    }
    let (r, cols) = (b.len(), b[0].len());
    let mut g = BigInt::zero();
    for s in subsets(cols, r) {
        let m: Vec<Vec<BigInt>> = b
            .iter()
            .map(|row| s.iter().map(|&c| row[c].clone()).collect())
            .collect();
        g = g.gcd(&det_bareiss(m));
        if g.is_one() {
            return true;
        }
    }
    g.is_one()
}

pub fn norm_sq(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn lll_first_vector_within_guarantee() {
        let orig = m(&[&[1, 0, 0, 1345], &[0, 1, 0, 35], &[0, 0, 1, 154]]);
        let mut b = orig.clone();
        lll(&mut b);
        let mut best: Option<BigInt> = None;
        for x in -15i64..=15 {
            for y in -15i64..=15 {
                for z in -15i64..=15 {
                    if (x, y, z) == (0, 0, 0) {
                        continue;
                    }
                    let v: Vec<BigInt> = (0..4)
                        .map(|c| &orig[0][c] * x + &orig[1][c] * y + &orig[2][c] * z)
                        .collect();
                    let n = norm_sq(&v);
                    if best.as_ref().is_none_or(|b| n < *b) {
                        best = Some(n);
                    }
                }
            }
        }
        assert!(norm_sq(&b[0]) <= best.unwrap() * 4);
        assert_eq!(hnf(&b), hnf(&orig));
    }

    #[test]
    fn integer_relation_from_phases() {
        // theta_1 + theta_2 + theta_3 = 2 is a (1, 1, 1) relation mod 1
        let c = 1i64 << 40;
        let t1 = 0.1234567f64;
        let t2 = 0.3123f64;
        let t3 = 2.0 - t1 - t2;
        let col = |t: f64| (t * c as f64).round() as i64;
        let mut b = m(&[
            &[1, 0, 0, col(t1)],
            &[0, 1, 0, col(t2)],
            &[0, 0, 1, col(t3)],
            &[0, 0, 0, c],
        ]);
        lll(&mut b);
        let found = b.iter().any(|v| {
            v[3].abs() <= BigInt::from(4) && v[..3].iter().all(|x| x.abs() == BigInt::one())
        });
        assert!(found, "{b:?}");
    }

    #[test]
    fn hnf_shape() {
        let h = hnf(&m(&[&[2, 4, 6], &[1, 1, 1], &[3, 5, 7]]));
        assert_eq!(h, m(&[&[1, 1, 1], &[0, 2, 4]]));
        assert!(!is_saturated(&m(&[&[2, 4, 6]])));
        assert!(is_saturated(&m(&[&[1, 1, 1], &[0, 1, 2]])));
        assert!(!is_saturated(&m(&[&[1, 1, 1], &[0, 2, 4]])));
    }

    proptest! {
        #[test]
        fn hnf_preserves_lattice(rows in prop::collection::vec(prop::collection::vec(-9i64..10, 4), 1..4)) {
            let a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let h = hnf(&a);
            // same rank, and every original row lies in the HNF lattice (and vice versa by rank + det)
            prop_assert_eq!(h.len(), rank(&a));
            let mut both = h.clone();
            both.extend(a.iter().cloned());
            prop_assert_eq!(hnf(&both), h.clone());
            for i in 0..h.len() {
                let lead = h[i].iter().position(|x| !x.is_zero()).unwrap();
                prop_assert!(h[i][lead].is_positive());
                for k in 0..i {
                    prop_assert!(h[k][lead] >= BigInt::zero() && h[k][lead] < h[i][lead]);
                }
            }
        }
    }
}
