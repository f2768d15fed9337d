//! The associated order of `O_L` in `K[G]`, in terms of the scaffold basis
//! `{Ψ^(j)}`.
//!
//! With `d_a = ⌊(1 + a) b_max / q⌋` and
//! `w_j = min { d_{a+j} - d_a : a ⪯ q-1-j }`, the elements `t^(-w_j) Ψ^(j)`
//! form an `O_K`-basis of the associated order, and `O_L` is free over it iff
//! `w_j = d_j - d_0` for every `j`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::digits::PrimePower;
use crate::error::{Error, Result};
use crate::extension::check_break;
use crate::scalar::Int;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderData<I> {
    pub q: I,
    pub b_max: I,
    pub d: Vec<I>,
    pub w: Vec<I>,
    pub free: bool,
    /// Smallest `j` with `w_j != d_j - d_0`.
    pub failing_j: Option<I>,
}

fn d_table<I: Int>(b_max: I, pp: &PrimePower<I>) -> Result<Vec<I>> {
    let q = pp.q();
    q.checked_mul(&b_max).ok_or(Error::Overflow("d_a"))?;
    let mut d = Vec::with_capacity(pp.q_usize());
    let mut prod = I::zero();
    for _ in 0..pp.q_usize() {
        prod += b_max;
        d.push(prod.div_floor(&q));
    }
    Ok(d)
}

pub fn order_data<I: Int>(b_max: I, pp: &PrimePower<I>) -> Result<OrderData<I>> {
    check_break(b_max, pp)?;
    let d = d_table(b_max, pp)?;
    let q1 = pp.q_usize() - 1;
    let w: Vec<I> = (0..pp.q_usize())
        .map(|j| {
            pp.dominated_by(q1 - j)
                .map(|a| d[a + j] - d[a])
                .min()
                .expect("a = 0 is always admissible")
        })
        .collect();
    let failing_j = (0..w.len()).find(|&j| w[j] != d[j] - d[0]).map(I::from_idx);
    Ok(OrderData {
        q: pp.q(),
        b_max,
        free: failing_j.is_none(),
        failing_j,
        d,
        w,
    })
}

/// Freeness verdict without materializing `w`; stops at the first failing
/// `j`, which is the smallest one.
pub fn freeness_witness<I: Int>(b_max: I, pp: &PrimePower<I>) -> Result<Option<I>> {
    check_break(b_max, pp)?;
    let d = d_table(b_max, pp)?;
    let q1 = pp.q_usize() - 1;
    for j in 1..pp.q_usize() {
        let bound = d[j] - d[0];
        if pp.dominated_by(q1 - j).any(|a| d[a + j] - d[a] < bound) {
            return Ok(Some(I::from_idx(j)));
        }
    }
    Ok(None)
}

/// `v_K(c)` for a coefficient `c` of `K`; `Infinite` stands for `c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffValuation<I> {
    Finite(I),
    Infinite,
}

impl<I: Int> CoeffValuation<I> {
    fn at_least(self, bound: I) -> bool {
        match self {
            CoeffValuation::Finite(v) => v >= bound,
            CoeffValuation::Infinite => true,
        }
    }
}

impl<I: Ord> PartialOrd for CoeffValuation<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: Ord> Ord for CoeffValuation<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        use CoeffValuation::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => Ordering::Less,
            (Infinite, Finite(_)) => Ordering::Greater,
            (Infinite, Infinite) => Ordering::Equal,
        }
    }
}

impl<I: fmt::Display> fmt::Display for CoeffValuation<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffValuation::Finite(v) => write!(f, "{v}"),
            CoeffValuation::Infinite => f.write_str("inf"),
        }
    }
}

impl<I: Serialize> Serialize for CoeffValuation<I> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CoeffValuation::Finite(v) => v.serialize(s),
            CoeffValuation::Infinite => s.serialize_str("inf"),
        }
    }
}

fn check_profile<I: Int>(coeff_vals: &[CoeffValuation<I>], order: &OrderData<I>) -> Result<()> {
    if coeff_vals.len() != order.d.len() {
        return Err(Error::LengthMismatch {
            expected: order.d.len(),
            got: coeff_vals.len(),
        });
    }
    Ok(())
}

/// Whether `α = Σ c_j Ψ^(j)` maps every `ρ_a` into `O_L`, decided directly:
/// `v_K(c_j) >= d_a - d_{j+a}` whenever `j ⪯ q-1-a`.
pub fn membership_oracle<I: Int>(
    coeff_vals: &[CoeffValuation<I>],
    order: &OrderData<I>,
    pp: &PrimePower<I>,
) -> Result<bool> {
    check_profile(coeff_vals, order)?;
    let q = pp.q_usize();
    let d = &order.d;
    for (j, &c) in coeff_vals.iter().enumerate() {
        if c == CoeffValuation::Infinite {
            continue;
        }
        for a in 0..q {
            if pp.leq_index(j, q - 1 - a) && !c.at_least(d[a] - d[j + a]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Membership through the basis `{t^(-w_j) Ψ^(j)}`: `v_K(c_j) >= -w_j`.
pub fn member_by_basis<I: Int>(
    coeff_vals: &[CoeffValuation<I>],
    order: &OrderData<I>,
) -> Result<bool> {
    check_profile(coeff_vals, order)?;
    Ok(coeff_vals
        .iter()
        .zip(&order.w)
        .all(|(&c, &w)| c.at_least(-w)))
}

/// `t^(-w_j) Ψ^(j)` sends the generator to `ρ_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisImage<I> {
    pub j: I,
    /// Exponent of `t` in the basis element, `-w_j`.
    pub t_exponent: I,
    pub image_index: I,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeGenerator<I> {
    /// Any `ρ_*` with this `v_L` generates `O_L` freely.
    pub valuation: I,
    pub images: Vec<BasisImage<I>>,
}

impl<I: Int> fmt::Display for FreeGenerator<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "any rho_* with v_L(rho_*) = {}", self.valuation)
    }
}

pub fn free_generator_check<I: Int>(order: &OrderData<I>) -> Option<FreeGenerator<I>> {
    if !order.free {
        return None;
    }
    let images = order
        .w
        .iter()
        .enumerate()
        .map(|(j, &w)| BasisImage {
            j: I::from_idx(j),
            t_exponent: -w,
            image_index: I::from_idx(j),
        })
        .collect();
    Some(FreeGenerator {
        valuation: order.b_max.mod_floor(&order.q),
        images,
    })
}
