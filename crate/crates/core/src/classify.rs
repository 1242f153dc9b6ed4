//! Neatness and multiplicative rank for dimension at most 3.
//!
//! Over a sufficiently large field (no nontrivial torsion among the
//! eigenvalues) the rank depends only on the set of distinct roots:
//! supersingular pieces contribute nothing, simple pieces contribute their
//! pair count `d` unless they are the exceptional almost ordinary sextics,
//! and an ordinary elliptic factor is absorbed by a larger factor exactly
//! when its CM field embeds there with a norm of infinite order.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::exact::intfactor::squarefree_kernel;
use crate::exact::sturm::real_root_count;
use crate::exact::IntPoly;
use crate::newton::{classify_newton, newton_polygon, NewtonPolygon, NewtonType};
use crate::relfinder::{oracle_rank, Confidence, RelError, RelationConfig};
use crate::subfields::{
    factor_over_quadratic, imaginary_quadratic_subfields, is_root_of_unity, norm_condition,
    p_splits, quadratic_subfields, relative_norm, root_of_unity_order, split_valuation,
    ConjugateFactorization, QuadraticElement, Splitting,
};
use crate::weil::{
    base_change, eigenvalue_structure, lcm_of, normalized_square_torsion, ratio_torsion_orders,
    validate, WeilError, WeilPolynomial,
};

/// Doublings tried after the lcm guess before giving up.
pub const MAX_DOUBLINGS: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("NotSufficientlyLarge: base change by {degree} is required")]
    NotSufficientlyLarge { degree: u32 },
    #[error("DimensionTooLarge: g = {g} (at most 3)")]
    DimensionTooLarge { g: usize },
    #[error("TorsionBoundExceeded: torsion persists after extension of degree {degree}")]
    TorsionBoundExceeded { degree: u32 },
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Oracle(#[from] RelError),
}

/// Integer kernel of a small matrix (rows of equal length), by unimodular
/// column reduction.
fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut pivot_col = 0;
    for r in 0..a.len() {
        // clear row r right of pivot_col by Euclid on column pairs
        loop {
            let nz: Vec<usize> = (pivot_col..n).filter(|&c| a[r][c] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&c) = nz.first() {
                    for row in a.iter_mut() {
                        row.swap(c, pivot_col);
                    }
                    for row in u.iter_mut() {
                        row.swap(c, pivot_col);
                    }
                    pivot_col += 1;
                }
                break;
            }
            let c0 = *nz.iter().min_by_key(|&&c| a[r][c].abs()).expect("nonempty");
            for &c in &nz {
                if c == c0 {
                    continue;
                }
                let f = a[r][c] / a[r][c0];
                for row in a.iter_mut() {
                    row[c] -= f * row[c0];
                }
                for row in u.iter_mut() {
                    row[c] -= f * row[c0];
                }
            }
        }
    }
    (pivot_col..n)
        .map(|c| u.iter().map(|row| row[c] as i64).collect())
        .collect()
}

/// Orders of roots of unity in `Gamma` that lie in an imaginary quadratic
/// subfield `B` of some component. The elements of `Gamma` in `B` that the
/// components see are `q` and `b_c = prod` (roots of `G_c`), of weight
/// `deg G_c`, where `pmin_c = G_c conj(G_c)` over `B`. A product of weight 0
/// is a root of unity iff its valuation at one prime above `p` vanishes
/// (automatic unless `p` splits), so the torsion is spanned by the values
/// at a kernel basis of (weight, valuation). This catches relative norms
/// of finite order and relations across components that no single ratio
/// exhibits.
pub fn quadratic_torsion_orders(w: &WeilPolynomial) -> BTreeSet<u64> {
    let q = w.q();
    let p = w.p().to_u64();
    let mut gens: BTreeMap<BigInt, Vec<(QuadraticElement, i64)>> = BTreeMap::new();
    for c in eigenvalue_structure(w).components {
        if c.pmin.deg() < 2 || c.pmin.deg() % 2 == 1 {
            continue;
        }
        for m in imaginary_quadratic_subfields(&c.pmin, q) {
            let Some(g) = factor_over_quadratic(&c.pmin, &m) else {
                continue;
            };
            let k = g.len() - 1;
            let b = if k % 2 == 0 {
                g[0].clone()
            } else {
                g[0].mul(&QuadraticElement::rational(
                    BigRational::from_integer((-1).into()),
                    &m,
                ))
            };
            gens.entry(m).or_default().push((b, k as i64));
        }
    }
    let mut out = BTreeSet::new();
    for (m, mut gs) in gens {
        gs.push((
            QuadraticElement::rational(BigRational::from_integer(q.clone()), &m),
            2,
        ));
        let split = p.filter(|&p| p_splits(&m, p) == Splitting::Split);
        let mut rows = vec![gs.iter().map(|(_, k)| *k).collect::<Vec<_>>()];
        if let Some(p) = split {
            rows.push(gs.iter().map(|(b, _)| split_valuation(b, p)).collect());
        }
        for v in integer_kernel(&rows, gs.len()) {
            let mut z = QuadraticElement::one(&m);
            for ((b, _), &e) in gs.iter().zip(&v) {
                let f = if e < 0 { b.inv() } else { b.clone() };
                z = z.mul(&f.pow(e.unsigned_abs() as u32));
            }
            out.extend(root_of_unity_order(&z));
        }
    }
    out.remove(&1);
    out
}

/// Orders of nontrivial roots of unity among root ratios, `q^-1 a^2` and
/// relative norms.
fn torsion_orders(w: &WeilPolynomial) -> BTreeSet<u64> {
    let mut t = ratio_torsion_orders(w);
    t.extend(normalized_square_torsion(w).into_iter().filter(|&n| n > 1));
    t.extend(quadratic_torsion_orders(w));
    t
}

pub fn is_sufficiently_large(w: &WeilPolynomial) -> bool {
    torsion_orders(w).is_empty()
}

/// Least `n` (when the lcm guess verifies) with `F_{q^n}` sufficiently large.
pub fn sufficiency_degree(w: &WeilPolynomial) -> Result<u32, ClassifyError> {
    let orders = torsion_orders(w);
    if orders.is_empty() {
        return Ok(1);
    }
    let n0 = lcm_of(&orders);
    let mut n =
        u32::try_from(n0).map_err(|_| ClassifyError::TorsionBoundExceeded { degree: u32::MAX })?;
    for _ in 0..=MAX_DOUBLINGS {
        if is_sufficiently_large(&base_change(w, n)?) {
            return Ok(n);
        }
        n *= 2;
    }
    Err(ClassifyError::TorsionBoundExceeded { degree: n / 2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RankSource {
    Theorem,
    OracleDecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub pmin: IntPoly,
    pub e: u32,
    pub d: usize,
    pub newton: NewtonType,
    pub supersingular: bool,
    /// Squarefree `m` with `Q[t]/(pmin) = Q(sqrt m)`, for quadratic pieces.
    pub cm_field: Option<BigInt>,
    /// Rank of the piece on its own.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCheck {
    pub rank: usize,
    pub lower_bound: usize,
    pub confidence: Confidence,
    pub relations: Vec<Vec<i64>>,
    pub saturated: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub g: usize,
    pub q: BigInt,
    pub poly: IntPoly,
    pub sufficiently_large: bool,
    pub sufficiency_degree: u32,
    /// Degree of the extension applied before classifying (1 for `classify`).
    pub extension_degree: u32,
    pub components: Vec<ComponentReport>,
    pub simple: bool,
    pub irreducible: bool,
    pub neat: bool,
    pub rank: usize,
    pub gamma_rank: usize,
    pub newton: NewtonType,
    pub newton_polygon: NewtonPolygon,
    /// Breakpoints integral, as for the characteristic polynomial of an
    /// abelian variety of dimension `g`.
    pub newton_integral: bool,
    pub condition_i: bool,
    pub condition_ii: bool,
    pub condition_iii: bool,
    pub witness: Option<ConjugateFactorization>,
    pub rank_source: RankSource,
    pub oracle: Option<OracleCheck>,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    pub fn conditions(&self) -> [bool; 3] {
        [self.condition_i, self.condition_ii, self.condition_iii]
    }

    pub fn oracle_disagrees(&self) -> bool {
        self.oracle.as_ref().is_some_and(|o| !o.agrees)
    }

    /// Structural invariants every report must satisfy.
    pub fn check_invariants(&self) -> Result<(), String> {
        let deg_pmin: usize = self.components.iter().map(|c| c.pmin.deg()).sum();
        if self.rank > self.g {
            return Err(format!("rank {} exceeds g = {}", self.rank, self.g));
        }
        if self.gamma_rank != self.rank + 1 {
            return Err("gamma_rank != rank + 1".into());
        }
        if self.gamma_rank > deg_pmin / 2 + 1 {
            return Err(format!(
                "gamma_rank {} exceeds floor(deg pmin / 2) + 1",
                self.gamma_rank
            ));
        }
        if (self.rank == 0) != (self.newton == NewtonType::Supersingular) {
            return Err("rank = 0 must coincide with supersingularity".into());
        }
        let all = self.condition_i && self.condition_ii && self.condition_iii;
        if self.neat && all {
            return Err("conditions (i)-(iii) hold but reported neat".into());
        }
        if !self.neat {
            if !(self.g == 3 && self.irreducible && self.condition_i && self.condition_ii) {
                return Err(
                    "non-neat outside irreducible sextics with conditions (i), (ii)".into(),
                );
            }
            if self.rank != 2 {
                return Err("non-neat threefold must have rank 2".into());
            }
        }
        if self.neat && self.simple {
            let d = self.components[0].d;
            if self.rank != d && !self.components[0].supersingular {
                return Err(format!(
                    "simple neat piece with rank {} != d = {d}",
                    self.rank
                ));
            }
        }
        Ok(())
    }
}

fn newton_type(w: &WeilPolynomial) -> NewtonType {
    classify_newton(&newton_polygon(w), w.g()).primary
}

/// A component as a Weil polynomial of its own (squared if of odd degree).
fn component_weil(pmin: &IntPoly, q: &BigInt) -> WeilPolynomial {
    let k = if pmin.deg() % 2 == 1 { 2 } else { 1 };
    validate(&pmin.pow(k), q).expect("factor of a Weil polynomial")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SexticConditions {
    pub i: bool,
    pub ii: bool,
    pub iii: bool,
    pub witness: Option<ConjugateFactorization>,
}

/// Conditions (i)-(iii) for an irreducible Weil sextic.
pub fn sextic_conditions(w: &WeilPolynomial) -> SexticConditions {
    let pmin = w.poly();
    let i = real_root_count(pmin) == 0;
    let witness = quadratic_subfields(pmin)
        .ok()
        .and_then(|v| v.into_iter().find(|cf| norm_condition(cf, w.q())));
    let iii = classify_newton(&newton_polygon(w), 3)
        .labels
        .contains(&NewtonType::AlmostOrdinary);
    SexticConditions {
        i,
        ii: witness.is_some(),
        iii,
        witness,
    }
}

fn component_reports(w: &WeilPolynomial) -> Vec<ComponentReport> {
    let es = eigenvalue_structure(w);
    es.components
        .iter()
        .map(|c| {
            let cw = component_weil(&c.pmin, w.q());
            let newton = newton_type(&cw);
            let supersingular = newton == NewtonType::Supersingular;
            let cm_field = (c.pmin.deg() == 2).then(|| {
                squarefree_kernel(
                    &(c.pmin.coeff(1) * c.pmin.coeff(1) - BigInt::from(4) * c.pmin.coeff(0)),
                )
            });
            let rank = if supersingular {
                0
            } else if c.pmin.deg() == 6 {
                // (ii) alone already gives the relation prod a_i^2 = q^3
                let s = sextic_conditions(&cw);
                if s.i && s.ii {
                    2
                } else {
                    3
                }
            } else {
                c.d
            };
            ComponentReport {
                pmin: c.pmin.clone(),
                e: c.e,
                d: c.d,
                newton,
                supersingular,
                cm_field,
                rank,
            }
        })
        .collect()
}

fn norm_has_infinite_order(pmin: &IntPoly, m: &BigInt, q: &BigInt) -> Option<bool> {
    let g = factor_over_quadratic(pmin, m)?;
    Some(!is_root_of_unity(&relative_norm(&g, q)))
}

/// Rank of the product of non-simple pieces. Returns `None` when the
/// theorems do not pin it down.
fn product_rank(parts: &[&ComponentReport], q: &BigInt, notes: &mut Vec<String>) -> Option<usize> {
    let live: Vec<&&ComponentReport> = parts.iter().filter(|c| !c.supersingular).collect();
    let mut fields: BTreeSet<BigInt> = BTreeSet::new();
    let mut big = Vec::new();
    for c in &live {
        match &c.cm_field {
            Some(m) => {
                fields.insert(m.clone());
            }
            None => big.push(**c),
        }
    }
    // one-dimensional norm-one T-units: elliptic pieces with the same CM
    // field share their rank, distinct fields meet only in torsion
    let mut rank: usize = big.iter().map(|c| c.rank).sum::<usize>() + fields.len();
    if big.len() > 1 {
        notes.push("several pieces of dimension > 1: rank left to the oracle".into());
        return None;
    }
    if let Some(x) = big.first() {
        if x.e > 1 && !fields.is_empty() {
            notes.push("non-elliptic piece with multiplicity > 1 next to an elliptic one: rank left to the oracle".into());
            return None;
        }
        for m in &fields {
            let embeds = imaginary_quadratic_subfields(&x.pmin, q).contains(m);
            if embeds && norm_has_infinite_order(&x.pmin, m, q) == Some(true) {
                notes.push(format!(
                    "elliptic CM field Q(sqrt({m})) embeds with norm of infinite order: absorbed"
                ));
                rank -= 1;
            }
        }
    }
    Some(rank)
}

fn require_small(w: &WeilPolynomial) -> Result<(), ClassifyError> {
    if w.g() > 3 {
        return Err(ClassifyError::DimensionTooLarge { g: w.g() });
    }
    let n = sufficiency_degree(w)?;
    if n != 1 {
        return Err(ClassifyError::NotSufficientlyLarge { degree: n });
    }
    Ok(())
}

fn oracle_check(
    w: &WeilPolynomial,
    rank: usize,
    cfg: &RelationConfig,
) -> Result<OracleCheck, ClassifyError> {
    let o = oracle_rank(w, cfg)?;
    Ok(OracleCheck {
        rank: o.rank,
        lower_bound: o.lower_bound,
        confidence: o.confidence,
        relations: o.lattice.basis.clone(),
        saturated: o.lattice.saturated,
        agrees: o.rank == rank,
    })
}

fn classify_inner(
    w: &WeilPolynomial,
    cfg: Option<&RelationConfig>,
) -> Result<ClassificationReport, ClassifyError> {
    require_small(w)?;
    let q = w.q().clone();
    let components = component_reports(w);
    let simple = components.len() == 1;
    let irreducible = simple && components[0].e == 1;
    let np = newton_polygon(w);
    let newton = classify_newton(&np, w.g()).primary;
    let mut notes = Vec::new();
    let (mut ci, mut cii, mut ciii, mut witness) = (false, false, false, None);
    let mut neat = true;
    let mut theorem_applies = true;
    let mut source = RankSource::Theorem;
    let rank = if simple {
        let c = &components[0];
        if irreducible && w.g() == 3 && !c.supersingular {
            let s = sextic_conditions(w);
            (ci, cii, ciii, witness) = (s.i, s.ii, s.iii, s.witness);
            neat = !(ci && cii && ciii);
            if ci && cii && !ciii {
                // the classification rules this out for abelian threefolds,
                // so P is not one's characteristic polynomial; the norm
                // relation still makes the eigenvalues non-neat
                neat = false;
                theorem_applies = false;
                notes.push(format!(
                    "conditions (i), (ii) hold but the Newton polygon is {}: not the characteristic polynomial of an abelian threefold; rank left to the oracle",
                    newton.as_str()
                ));
            }
        }
        theorem_applies.then_some(c.rank)
    } else {
        let parts: Vec<&ComponentReport> = components.iter().collect();
        product_rank(&parts, &q, &mut notes)
    };
    let oracle = match (rank, cfg) {
        (Some(r), Some(cfg)) => Some(oracle_check(w, r, cfg)?),
        (Some(_), None) => None,
        (None, _) => {
            let cfg = cfg.copied().unwrap_or_default();
            let mut o = oracle_check(w, 0, &cfg)?;
            o.agrees = true;
            source = RankSource::OracleDecided;
            if o.confidence != Confidence::CertifiedExact {
                notes.push(format!(
                    "oracle rank certified as an upper bound only (relations of height <= {})",
                    cfg.exponent_bound
                ));
            }
            Some(o)
        }
    };
    let rank = rank.unwrap_or_else(|| oracle.as_ref().expect("oracle ran").rank);
    Ok(ClassificationReport {
        g: w.g(),
        q,
        poly: w.poly().clone(),
        sufficiently_large: true,
        sufficiency_degree: 1,
        extension_degree: 1,
        components,
        simple,
        irreducible,
        neat,
        rank,
        gamma_rank: rank + 1,
        newton,
        newton_integral: np.is_integral(),
        newton_polygon: np,
        condition_i: ci,
        condition_ii: cii,
        condition_iii: ciii,
        witness,
        rank_source: source,
        oracle,
        notes,
    })
}

/// Classifies a sufficiently large `W` with `g <= 3` from the theorems alone
/// (the oracle only fills in ranks the theorems leave open).
pub fn classify(w: &WeilPolynomial) -> Result<ClassificationReport, ClassifyError> {
    classify_inner(w, None)
}

/// As `classify`, with the relation oracle run and compared on every input.
pub fn classify_with_oracle(
    w: &WeilPolynomial,
    cfg: &RelationConfig,
) -> Result<ClassificationReport, ClassifyError> {
    classify_inner(w, Some(cfg))
}

/// Base change to the sufficiency degree, then classify there.
pub fn classify_auto(
    w: &WeilPolynomial,
    cfg: Option<&RelationConfig>,
) -> Result<ClassificationReport, ClassifyError> {
    let n = sufficiency_degree(w)?;
    let wb = base_change(w, n)?;
    let mut r = classify_inner(&wb, cfg)?;
    r.sufficiency_degree = n;
    r.extension_degree = n;
    if n > 1 {
        r.notes.push(format!(
            "classified over F_{} (base change of degree {n} from F_{})",
            wb.q(),
            w.q()
        ));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InertFinding {
    pub m: String,
    pub splitting: Splitting,
    pub norm_is_one: bool,
    pub rank_below_d: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityFinding {
    pub slopes: Vec<String>,
    pub g: usize,
    pub rank: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairField {
    pub m: String,
    pub p_splits: bool,
    pub norms_of_infinite_order: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairFinding {
    pub left: usize,
    pub right: usize,
    pub rank_left: usize,
    pub rank_right: usize,
    pub rank_pair: usize,
    pub collapse: bool,
    pub fields: Vec<PairField>,
    pub holds: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub inert: Vec<InertFinding>,
    pub parity: Option<ParityFinding>,
    pub pairs: Vec<PairFinding>,
    /// Any entry here means an implementation bug.
    pub contradictions: Vec<String>,
}

fn one_q(m: &BigInt) -> QuadraticElement {
    QuadraticElement::one(m)
}

/// Necessary conditions from the theorems, checked against a finished
/// report of the same polynomial.
pub fn theorem_diagnostics(w: &WeilPolynomial, report: &ClassificationReport) -> Diagnostics {
    let mut out = Diagnostics::default();
    let q = w.q();
    let p = w.p().to_u64();
    let comps = &report.components;
    if report.simple && !comps[0].supersingular && comps[0].pmin.deg() > 2 {
        let c = &comps[0];
        for m in imaginary_quadratic_subfields(&c.pmin, q) {
            let Some(p) = p else { break };
            let splitting = p_splits(&m, p);
            if splitting == Splitting::Split {
                continue;
            }
            let g = factor_over_quadratic(&c.pmin, &m).expect("subfield has a witness");
            let norm_is_one = relative_norm(&g, q) == one_q(&m);
            let rank_below_d = report.rank < c.d;
            let holds = norm_is_one && rank_below_d;
            if !holds {
                out.contradictions.push(format!("inert field Q(sqrt({m})): norm = 1 is {norm_is_one}, rank < d is {rank_below_d}"));
            }
            out.inert.push(InertFinding {
                m: m.to_string(),
                splitting,
                norm_is_one,
                rank_below_d,
                holds,
            });
        }
    }
    if report.irreducible {
        let half = BigRational::new(1.into(), 2.into());
        let slopes = report.newton_polygon.slopes();
        let two_sided = slopes.len() == 2 && slopes.iter().all(|s| *s != half);
        if two_sided {
            let holds = report.rank + 1 != report.g || report.g.is_multiple_of(2);
            if !holds {
                out.contradictions.push(format!(
                    "rank g - 1 = {} with g odd and two slopes",
                    report.rank
                ));
            }
            out.parity = Some(ParityFinding {
                slopes: slopes.iter().map(|s| s.to_string()).collect(),
                g: report.g,
                rank: report.rank,
                holds,
            });
        }
    }
    let live: Vec<usize> = (0..comps.len())
        .filter(|&i| !comps[i].supersingular)
        .collect();
    for (a, &i) in live.iter().enumerate() {
        for &j in &live[a + 1..] {
            let mut scratch = Vec::new();
            let Some(rank_pair) = product_rank(&[&comps[i], &comps[j]], q, &mut scratch) else {
                continue;
            };
            let (ri, rj) = (comps[i].rank, comps[j].rank);
            let collapse = rank_pair + 1 == ri + rj;
            let mut fields = Vec::new();
            if collapse {
                let fi = subfields_of(&comps[i], q);
                let fj = subfields_of(&comps[j], q);
                for m in fi.intersection(&fj) {
                    let splits = p.is_some_and(|p| p_splits(m, p) == Splitting::Split);
                    let inf = [&comps[i], &comps[j]]
                        .iter()
                        .all(|c| norm_has_infinite_order(&c.pmin, m, q) == Some(true));
                    fields.push(PairField {
                        m: m.to_string(),
                        p_splits: splits,
                        norms_of_infinite_order: inf,
                    });
                }
            }
            let holds = !collapse
                || fields
                    .iter()
                    .any(|f| f.p_splits && f.norms_of_infinite_order);
            if !holds {
                out.contradictions.push(format!(
                    "rank collapse of pieces {i}, {j} without a witnessing quadratic field"
                ));
            }
            out.pairs.push(PairFinding {
                left: i,
                right: j,
                rank_left: ri,
                rank_right: rj,
                rank_pair,
                collapse,
                fields,
                holds,
            });
        }
    }
    out
}

fn subfields_of(c: &ComponentReport, q: &BigInt) -> BTreeSet<BigInt> {
    match &c.cm_field {
        Some(m) => BTreeSet::from([m.clone()]),
        None => imaginary_quadratic_subfields(&c.pmin, q)
            .into_iter()
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourfoldReport {
    /// `(deg pmin, multiplicity)` per piece.
    pub decomposition: Vec<(usize, u32)>,
    pub newton: NewtonType,
    pub oracle_rank: usize,
    pub confidence: Confidence,
    /// Some imaginary quadratic field embeds in every piece.
    pub condition_i: Option<bool>,
    /// A non-neat almost ordinary threefold piece is present.
    pub condition_ii: Option<bool>,
    pub flagged: bool,
}

pub fn fourfold_diagnostic(
    w: &WeilPolynomial,
    cfg: &RelationConfig,
) -> Result<FourfoldReport, ClassifyError> {
    if w.g() != 4 {
        return Err(ClassifyError::DimensionTooLarge { g: w.g() });
    }
    let n = sufficiency_degree(w)?;
    if n != 1 {
        return Err(ClassifyError::NotSufficientlyLarge { degree: n });
    }
    let q = w.q();
    let comps = component_reports(w);
    let decomposition = comps.iter().map(|c| (c.pmin.deg(), c.e)).collect();
    let newton = newton_type(w);
    let o = oracle_rank(w, cfg)?;
    let (mut ci, mut cii) = (None, None);
    if o.rank == 3 {
        let mut common: Option<BTreeSet<BigInt>> = None;
        for c in comps.iter().filter(|c| !c.supersingular) {
            let f = subfields_of(c, q);
            common = Some(match common {
                None => f,
                Some(acc) => acc.intersection(&f).cloned().collect(),
            });
        }
        ci = Some(common.is_some_and(|s| !s.is_empty()));
        cii = Some(
            comps.len() > 1
                && comps
                    .iter()
                    .any(|c| c.pmin.deg() == 6 && c.e == 1 && c.rank == 2),
        );
    }
    let flagged = ci == Some(true) || cii == Some(true);
    Ok(FourfoldReport {
        decomposition,
        newton,
        oracle_rank: o.rank,
        confidence: o.confidence,
        condition_i: ci,
        condition_ii: cii,
        flagged,
    })
}
