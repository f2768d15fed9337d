//! Freeness criteria on a residue class `c = r(b)` modulo `q`.
//!
//! Three equivalent tests are implemented independently:
//!
//! * the `w_j` test on the associated order with `b_max = c`
//!   ([`crate::assoc_order`]),
//! * Miyata's triple inequality `r(-c) + r(-ic) - r(-hc) > 0` over the
//!   triples `h <= i <= j < q`, `i + j = q - 1 + h`, `C(i, h) ≢ 0 (mod p)`,
//! * membership of `c` in the digit-condition set `S(q)`.
//!
//! Only the residue matters: all ramification numbers agree modulo `q`.
//! [`freeness`] with [`Method::All`] evaluates all three and refuses to
//! return a report when they disagree.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::assoc_order::freeness_witness;
use crate::digits::PrimePower;
use crate::error::{out_of_range, Error, Result};
use crate::scalar::Int;

/// A predicate outcome with the lexicographically smallest counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    fn from_witness(witness: Option<W>) -> Self {
        Verdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// A triple `(h, i, j)` violating Miyata's inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triple<I> {
    pub h: I,
    pub i: I,
    pub j: I,
}

/// A pair `(u, v)` for which every digit position of `r(hu) + r(hv)`
/// reaches `p - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Pair<I> {
    pub u: I,
    pub v: I,
}

/// The residue class must satisfy `1 <= c <= q - 1` and `gcd(c, p) = 1`.
pub fn check_residue<I: Int>(c: I, pp: &PrimePower<I>) -> Result<()> {
    if c < I::one() || c >= pp.q() {
        return Err(out_of_range(
            "c",
            c,
            format!("1 <= c <= q - 1 = {}", pp.q() - I::one()),
        ));
    }
    if (c % pp.p()).is_zero() {
        return Err(Error::NotCoprime {
            b: c.to_string(),
            p: pp.p().to_string(),
        });
    }
    Ok(())
}

/// The unique `1 <= h <= q - 1` with `h c ≡ -1 (mod q)`.
pub fn h_c<I: Int>(c: I, pp: &PrimePower<I>) -> Result<I> {
    check_residue(c, pp)?;
    let q = pp.q();
    let eg = c.extended_gcd(&q);
    debug_assert!(eg.gcd.is_one());
    Ok((-eg.x).mod_floor(&q))
}

/// Miyata's condition for the residue class `c`.
///
/// Triples are visited in lexicographic order: `h` ascending, then `i`
/// ascending over the `i` with `C(i, h) ≢ 0 (mod p)`, i.e. `h ⪯ i`.
pub fn miyata_condition<I: Int>(c: I, pp: &PrimePower<I>) -> Result<Verdict<Triple<I>>> {
    check_residue(c, pp)?;
    Ok(Verdict::from_witness(miyata_witness(c, pp)))
}

fn miyata_witness<I: Int>(c: I, pp: &PrimePower<I>) -> Option<Triple<I>> {
    let q = pp.q();
    let q1 = pp.q_usize() - 1;
    let base = (-c).mod_floor(&q);
    for h in 0..=q1 {
        let rh = (-I::from_idx(h) * c).mod_floor(&q);
        // j >= i  <=>  2i <= q - 1 + h
        let i_max = (q1 + h) / 2;
        for i in pp.dominating(h) {
            if i > i_max {
                break;
            }
            let ri = (-I::from_idx(i) * c).mod_floor(&q);
            if base + ri - rh <= I::zero() {
                return Some(Triple {
                    h: I::from_idx(h),
                    i: I::from_idx(i),
                    j: I::from_idx(q1 + h - i),
                });
            }
        }
    }
    None
}

/// Membership of `c` in `S(q)`: for all `u, v >= 1` with `u + v < c` some
/// digit position `s` has `r(hu)_(s) + r(hv)_(s) < p - 1`.
pub fn in_s_q<I: Int>(c: I, pp: &PrimePower<I>) -> Result<Verdict<Pair<I>>> {
    let h = h_c(c, pp)?;
    Ok(Verdict::from_witness(sq_witness(c, h, pp)))
}

fn sq_witness<I: Int>(c: I, h: I, pp: &PrimePower<I>) -> Option<Pair<I>> {
    let q = pp.q();
    let q1 = pp.q_usize() - 1;
    let c = c.idx();
    // r(h·v) for v < c
    let mut hv = vec![0usize; c];
    let mut acc = I::zero();
    for slot in hv.iter_mut().skip(1) {
        acc = (acc + h).mod_floor(&q);
        *slot = acc.idx();
    }
    // (u, v) fails iff every digit of r(hu) + r(hv) is >= p - 1, i.e.
    // q - 1 - r(hu) ⪯ r(hv). Failures are symmetric, so u <= v suffices
    // to find the smallest one.
    for u in 1..c {
        if 2 * u >= c {
            break;
        }
        let complement = q1 - hv[u];
        if let Some(k) = hv[u..c - u]
            .iter()
            .position(|&x| pp.leq_index(complement, x))
        {
            return Some(Pair {
                u: I::from_idx(u),
                v: I::from_idx(u + k),
            });
        }
    }
    None
}

/// Which of the sufficient divisibility conditions `c` meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Divisibility {
    /// `c | q - 1` and no smaller `d` works.
    DividesQMinus1,
    /// `c | p^d - 1` for this smallest `d <= n`.
    DividesPowerMinus1 {
        d: u32,
    },
    None,
}

impl Divisibility {
    pub fn is_none(self) -> bool {
        self == Divisibility::None
    }
}

impl fmt::Display for Divisibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divisibility::DividesQMinus1 => f.write_str("divides_q_minus_1"),
            Divisibility::DividesPowerMinus1 { d } => write!(f, "divides_p_d_minus_1(d={d})"),
            Divisibility::None => f.write_str("none"),
        }
    }
}

impl Serialize for Divisibility {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Smallest `d` in `1..=n+1` with `c | p^d - 1`.
pub fn divisibility_test<I: Int>(c: I, pp: &PrimePower<I>) -> Result<Divisibility> {
    check_residue(c, pp)?;
    let levels = pp.n() + 1;
    let d = (1..=levels).find(|&d| ((pp.pow(d) - I::one()) % c).is_zero());
    Ok(match d {
        Some(d) if d == levels => Divisibility::DividesQMinus1,
        Some(d) => Divisibility::DividesPowerMinus1 { d },
        None => Divisibility::None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    W,
    Miyata,
    Sq,
    All,
}

impl Method {
    fn wants(self, other: Method) -> bool {
        self == Method::All || self == other
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "w" => Ok(Method::W),
            "miyata" => Ok(Method::Miyata),
            "sq" => Ok(Method::Sq),
            "all" => Ok(Method::All),
            other => Err(format!(
                "unknown method {other:?} (expected w, miyata, sq or all)"
            )),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::W => "w",
            Method::Miyata => "miyata",
            Method::Sq => "sq",
            Method::All => "all",
        })
    }
}

/// Verdicts of the requested criteria for one residue class. Criteria that
/// were not requested are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport<I> {
    pub c: I,
    pub h_c: I,
    pub verdict_w: Option<bool>,
    pub verdict_miyata: Option<bool>,
    pub verdict_sq: Option<bool>,
    pub divisibility: Divisibility,
    pub failing_j: Option<I>,
    pub witness_miyata: Option<Triple<I>>,
    pub witness_sq: Option<Pair<I>>,
}

impl<I: Int> CriterionReport<I> {
    fn evaluate(c: I, pp: &PrimePower<I>, method: Method) -> Result<Self> {
        let h = h_c(c, pp)?;
        let mut report = CriterionReport {
            c,
            h_c: h,
            verdict_w: None,
            verdict_miyata: None,
            verdict_sq: None,
            divisibility: divisibility_test(c, pp)?,
            failing_j: None,
            witness_miyata: None,
            witness_sq: None,
        };
        if method.wants(Method::W) {
            report.failing_j = freeness_witness(c, pp)?;
            report.verdict_w = Some(report.failing_j.is_none());
        }
        if method.wants(Method::Miyata) {
            report.witness_miyata = miyata_witness(c, pp);
            report.verdict_miyata = Some(report.witness_miyata.is_none());
        }
        if method.wants(Method::Sq) {
            report.witness_sq = sq_witness(c, h, pp);
            report.verdict_sq = Some(report.witness_sq.is_none());
        }
        Ok(report)
    }

    /// The common verdict of the evaluated criteria, `None` if they disagree.
    pub fn verdict(&self) -> Option<bool> {
        let mut seen = [self.verdict_w, self.verdict_miyata, self.verdict_sq]
            .into_iter()
            .flatten();
        let first = seen.next()?;
        seen.all(|v| v == first).then_some(first)
    }

    pub fn is_consistent(&self) -> bool {
        self.verdict().is_some()
    }

    fn alarm(&self) -> Error {
        Error::ConsistencyAlarm {
            c: self.c.to_string(),
            detail: format!(
                "w = {:?} (failing j {:?}), miyata = {:?} (witness {:?}), sq = {:?} (witness {:?})",
                self.verdict_w,
                self.failing_j,
                self.verdict_miyata,
                self.witness_miyata,
                self.verdict_sq,
                self.witness_sq
            ),
        }
    }
}

/// Evaluates the requested criteria for `c`.
///
/// With [`Method::All`], a disagreement between the three criteria is an
/// [`Error::ConsistencyAlarm`].
pub fn freeness<I: Int>(c: I, pp: &PrimePower<I>, method: Method) -> Result<CriterionReport<I>> {
    let report = CriterionReport::evaluate(c, pp, method)?;
    if !report.is_consistent() {
        return Err(report.alarm());
    }
    Ok(report)
}

/// Every admissible residue class in ascending order.
pub fn admissible_residues<I: Int>(pp: &PrimePower<I>) -> impl Iterator<Item = I> + '_ {
    let p = pp.p_usize();
    (1..pp.q_usize())
        .filter(move |c| c % p != 0)
        .map(I::from_idx)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport<I> {
    pub p: I,
    pub n: u32,
    pub q: I,
    pub reports: Vec<CriterionReport<I>>,
    /// `S(q)`, ascending.
    pub free: Vec<I>,
    pub non_free_count: usize,
    pub mismatches: Vec<I>,
}

/// Runs all three criteria on every admissible `c`. Work is spread over the
/// current rayon pool; the result is in ascending `c` order.
///
/// Any disagreement is returned as an [`Error::ConsistencyAlarm`] listing
/// every mismatching class.
pub fn equivalence_report<I: Int>(pp: &PrimePower<I>) -> Result<EquivalenceReport<I>> {
    let residues: Vec<I> = admissible_residues(pp).collect();
    let reports = residues
        .par_iter()
        .map(|&c| CriterionReport::evaluate(c, pp, Method::All))
        .collect::<Result<Vec<_>>>()?;
    let mismatches: Vec<&CriterionReport<I>> =
        reports.iter().filter(|r| !r.is_consistent()).collect();
    if let Some(first) = mismatches.first() {
        let Error::ConsistencyAlarm { detail, .. } = first.alarm() else {
            unreachable!()
        };
        let all: Vec<String> = mismatches.iter().map(|r| r.c.to_string()).collect();
        return Err(Error::ConsistencyAlarm {
            c: all.join(","),
            detail: format!("q = {}: {} mismatches; first: {detail}", pp.q(), all.len()),
        });
    }
    let free: Vec<I> = reports
        .iter()
        .filter(|r| r.verdict() == Some(true))
        .map(|r| r.c)
        .collect();
    Ok(EquivalenceReport {
        p: pp.p(),
        n: pp.n(),
        q: pp.q(),
        non_free_count: reports.len() - free.len(),
        free,
        mismatches: Vec::new(),
        reports,
    })
}

/// A free residue class that meets none of the divisibility conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConverseWitness<I> {
    pub p: I,
    pub n: u32,
    pub q: I,
    pub c: I,
}

/// Searches every admissible `c` of every `q` in `pp_list` (each with
/// `n >= 2`) for free classes with no divisibility certificate. Results are
/// ordered by input position, then by `c`.
pub fn converse_search<I: Int>(pp_list: &[PrimePower<I>]) -> Result<Vec<ConverseWitness<I>>> {
    if let Some(pp) = pp_list.iter().find(|pp| pp.n() < 2) {
        return Err(Error::ConverseLevel(pp.n()));
    }
    let mut out = Vec::new();
    for pp in pp_list {
        let candidates: Vec<I> = admissible_residues(pp)
            .filter(|&c| {
                divisibility_test(c, pp)
                    .map(Divisibility::is_none)
                    .unwrap_or(false)
            })
            .collect();
        let found = candidates
            .par_iter()
            .map(|&c| freeness(c, pp, Method::All).map(|r| (c, r.verdict() == Some(true))))
            .collect::<Result<Vec<_>>>()?;
        out.extend(
            found
                .into_iter()
                .filter(|&(_, free)| free)
                .map(|(c, _)| ConverseWitness {
                    p: pp.p(),
                    n: pp.n(),
                    q: pp.q(),
                    c,
                }),
        );
    }
    Ok(out)
}
