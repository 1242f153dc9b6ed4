//! Factorization in `Z[t]`: squarefree decomposition, modular factorization
//! at a well-chosen small prime, Hensel lifting past the Mignotte bound and
//! subset recombination.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{bigint_mod, factor_squarefree_modp, PolyModP};
use super::poly::IntPoly;
use super::ExactError;

const CANDIDATE_PRIMES: usize = 6;

/// Irreducible factorization over the integers. Factors are primitive with
/// positive leading coefficient, ordered by degree then coefficients; the
/// content and sign of `f` are dropped.
pub fn factor_over_integers(f: &IntPoly) -> Result<Vec<(IntPoly, u32)>, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        for g in factor_squarefree(&part) {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| a.0.ordering_key(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

/// Re-expands a factorization; used by tests and by callers that want to
/// double-check a decomposition.
pub fn expand_factorization(factors: &[(IntPoly, u32)]) -> IntPoly {
    factors
        .iter()
        .fold(IntPoly::one(), |acc, (g, e)| &acc * &g.pow(*e))
}

pub fn is_irreducible(f: &IntPoly) -> bool {
    match factor_over_integers(f) {
        Ok(fs) => fs.len() == 1 && fs[0].1 == 1 && !f.is_constant(),
        Err(_) => false,
    }
}

/// Factors a primitive squarefree polynomial of positive degree.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let mut f = f.primitive_part();
    let mut out = Vec::new();
    if f.trailing_zeros() > 0 {
        out.push(IntPoly::from_i64s(&[0, 1]));
        f = f.exact_div(&IntPoly::from_i64s(&[0, 1])).unwrap();
    }
    if f.deg() == 0 {
        return out;
    }
    if f.deg() == 1 {
        out.push(f);
        return out;
    }
    out.extend(zassenhaus(&f));
    out
}

fn small_primes() -> impl Iterator<Item = u64> {
    (11u64..).step_by(2).filter(|&n| {
        let mut d = 3;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        true
    })
}

/// Subset sums of modular factor degrees: the only degrees a true factor can
/// have.
fn possible_degrees(degs: &[usize]) -> BTreeSet<usize> {
    let mut s = BTreeSet::from([0usize]);
    for &d in degs {
        let next: Vec<usize> = s.iter().map(|x| x + d).collect();
        s.extend(next);
    }
    s
}

fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.deg();
    let lc = f.leading().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_u64 ^ n as u64);

    let mut best: Option<(u64, Vec<PolyModP>)> = None;
    let mut allowed: Option<BTreeSet<usize>> = None;
    let mut tried = 0;
    for p in small_primes() {
        if bigint_mod(&lc, p) == 0 {
            continue;
        }
        let fp = PolyModP::from_int(f, p);
        if fp.deg() != n || !fp.is_squarefree() {
            continue;
        }
        let facs = factor_squarefree_modp(&fp, &mut rng);
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        let degs: Vec<usize> = facs.iter().map(|g| g.deg()).collect();
        let pd = possible_degrees(&degs);
        let inter: BTreeSet<usize> = match &allowed {
            Some(a) => a.intersection(&pd).copied().collect(),
            None => pd,
        };
        if inter.len() == 2 {
            // Only 0 and n survive: irreducible.
            return vec![f.clone()];
        }
        allowed = Some(inter);
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= CANDIDATE_PRIMES {
            break;
        }
    }
    let (p, facs) = best.expect("some prime works for a squarefree polynomial");

    // Coefficients of any factor (scaled by lc) are bounded by
    // |lc| * 2^n * ||f||_2 (Mignotte).
    let bound = &lc.abs() * (BigInt::one() << n) * f.l2_norm_ceil();
    let two_bound = &bound * 2;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut k = 1u32;
    while modulus <= two_bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_lift_all(f, &facs, p, k);
    recombine(f, lifted, &modulus)
}

fn sym_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn poly_mod(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn modp_to_int(f: &PolyModP) -> IntPoly {
    IntPoly::new(f.c.iter().map(|&x| BigInt::from(x)).collect())
}

fn int_to_modp(f: &IntPoly, p: u64) -> PolyModP {
    PolyModP::from_int(f, p)
}

/// Lifts `f = lc * prod facs (mod p)` to monic factors modulo `p^k`.
fn hensel_lift_all(f: &IntPoly, facs: &[PolyModP], p: u64, k: u32) -> Vec<IntPoly> {
    let m = BigInt::from(p).pow(k);
    let lc = f.leading().unwrap();
    let lc_inv = lc.extended_gcd(&m).x.mod_floor(&m);
    let monic_f = poly_mod(&f.scale(&lc_inv), &m);
    let mut out = Vec::with_capacity(facs.len());
    lift_tree(&monic_f, facs, p, k, &mut out);
    out
}

fn lift_tree(target: &IntPoly, facs: &[PolyModP], p: u64, k: u32, out: &mut Vec<IntPoly>) {
    if facs.len() == 1 {
        out.push(target.clone());
        return;
    }
    let mid = facs.len() / 2;
    let g0 = facs[..mid].iter().fold(PolyModP::one(p), |a, b| a.mul(b));
    let h0 = facs[mid..].iter().fold(PolyModP::one(p), |a, b| a.mul(b));
    let (g, h) = hensel_two(target, &g0, &h0, p, k);
    lift_tree(&g, &facs[..mid], p, k, out);
    lift_tree(&h, &facs[mid..], p, k, out);
}

/// Linear Hensel lifting of a monic `target = g0 * h0 (mod p)` with coprime
/// monic `g0`, `h0` to monic factors modulo `p^k`.
fn hensel_two(
    target: &IntPoly,
    g0: &PolyModP,
    h0: &PolyModP,
    p: u64,
    k: u32,
) -> (IntPoly, IntPoly) {
    let (one, s, t) = g0.ext_gcd(h0);
    debug_assert_eq!(one, PolyModP::one(p));
    let pb = BigInt::from(p);
    let mut g = modp_to_int(g0);
    let mut h = modp_to_int(h0);
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let diff = poly_mod(&(target - &(&g * &h)), &next);
        // diff is divisible by p^j
        let e = IntPoly::new(diff.coeffs().iter().map(|c| c / &pj).collect());
        let e = int_to_modp(&e, p);
        if !e.is_zero() {
            let te = t.mul(&e);
            let (q, dg) = te.div_rem(g0);
            let dh = s.mul(&e).add(&q.mul(h0));
            g = poly_mod(&(&g + &modp_to_int(&dg).scale(&pj)), &next);
            h = poly_mod(&(&h + &modp_to_int(&dh).scale(&pj)), &next);
        }
        pj = next;
    }
    (g, h)
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    // Lexicographic k-subsets of 0..n; `visit` returns true to stop.
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] == i + n - k {
            return;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn recombine(f: &IntPoly, mut lifted: Vec<IntPoly>, m: &BigInt) -> Vec<IntPoly> {
    let mut found = Vec::new();
    let mut rest = f.clone();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let lc = rest.leading().unwrap().clone();
        let c0 = &lc * rest.coeff(0);
        let mut hit: Option<(Vec<usize>, IntPoly, IntPoly)> = None;
        combinations(lifted.len(), s, |idx| {
            // Constant-term pretest.
            let mut k0 = lc.clone();
            for &i in idx {
                k0 = sym_mod(&(k0 * lifted[i].coeff(0)), m);
            }
            if k0.is_zero() || !(&c0 % &k0).is_zero() {
                return false;
            }
            let mut g = IntPoly::constant(lc.clone());
            for &i in idx {
                g = poly_mod(&(&g * &lifted[i]), m);
            }
            let g =
                IntPoly::new(g.coeffs().iter().map(|c| sym_mod(c, m)).collect()).primitive_part();
            if let Some(q) = rest.exact_div(&g) {
                hit = Some((idx.to_vec(), g, q));
                return true;
            }
            false
        });
        match hit {
            Some((idx, g, q)) => {
                found.push(g);
                rest = q.primitive_part();
                for &i in idx.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => s += 1,
        }
    }
    if rest.deg() > 0 {
        found.push(rest);
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn cyclotomic_splitting_of_t4_minus_1() {
        let fs = factor_over_integers(&p(&[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(
            fs,
            vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1), (p(&[1, 0, 1]), 1)]
        );
    }

    #[test]
    fn perfect_power_of_irreducible() {
        let g = p(&[5, -1, 1]);
        let fs = factor_over_integers(&g.pow(3)).unwrap();
        assert_eq!(fs, vec![(g, 3)]);
    }

    #[test]
    fn zero_rejected() {
        assert!(matches!(
            factor_over_integers(&IntPoly::zero()),
            Err(ExactError::ZeroPolynomial)
        ));
    }

    #[test]
    fn swinnerton_dyer_like_many_modular_factors() {
        // (t^2-2)(t^2-3)(t^2-5)(t^2-6) splits heavily modulo small primes.
        let f = [2, 3, 5, 6]
            .iter()
            .fold(IntPoly::one(), |acc, &a| &acc * &p(&[-a, 0, 1]));
        let fs = factor_over_integers(&f).unwrap();
        assert_eq!(fs.len(), 4);
        assert_eq!(expand_factorization(&fs), f);
    }

    #[test]
    fn irreducible_octic_stays_whole() {
        // t^8 - 8t^6 + ... minimal polynomial of sqrt2+sqrt3+sqrt5 is degree 8
        let f = p(&[576, 0, -960, 0, 352, 0, -40, 0, 1]);
        assert_eq!(factor_over_integers(&f).unwrap(), vec![(f, 1)]);
    }

    #[test]
    fn non_monic_and_content() {
        let f = &p(&[3, 6]) * &p(&[1, 0, 4]); // 3 (2t+1)(4t^2+1)
        let fs = factor_over_integers(&f).unwrap();
        assert_eq!(fs, vec![(p(&[1, 2]), 1), (p(&[1, 0, 4]), 1)]);
    }

    #[test]
    fn factor_t_extracted() {
        let f = &p(&[0, 1]) * &p(&[5, -1, 1]);
        let fs = factor_over_integers(&f).unwrap();
        assert_eq!(fs, vec![(p(&[0, 1]), 1), (p(&[5, -1, 1]), 1)]);
    }

    #[test]
    fn combinations_enumerates_all() {
        let mut seen = Vec::new();
        combinations(4, 2, |s| {
            seen.push(s.to_vec());
            false
        });
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[5], vec![2, 3]);
    }
}
