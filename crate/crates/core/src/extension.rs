//! Valuation-level model of near one-dimensional elementary abelian
//! extensions of `K = k((t))`.
//!
//! An extension is described only through `b = -v_K(β)` and the valuations
//! `v_K(Ω_0), ..., v_K(Ω_n)`. The scaffold `Ψ_0, ..., Ψ_n` is not built
//! explicitly; its effect on valuations is taken as given, which is all the
//! freeness computation needs.

use num_rational::Ratio;
use serde::Serialize;

use crate::digits::PrimePower;
use crate::error::{out_of_range, Error, Result};
use crate::scalar::Int;

/// Validated parameters of a near one-dimensional elementary abelian
/// extension of degree `q = p^(n+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionParams<I> {
    pp: PrimePower<I>,
    b: I,
    omega_vals: Vec<I>,
    /// Ω's of equal valuation are assumed to have residues linearly
    /// independent over F_p. Recorded, never checked.
    pub independence_assumed: bool,
}

impl<I: Int> ExtensionParams<I> {
    pub fn new(pp: PrimePower<I>, b: I, omega_vals: Vec<I>) -> Result<Self> {
        validate_params(pp, b, omega_vals)
    }

    pub fn prime_power(&self) -> &PrimePower<I> {
        &self.pp
    }

    pub fn b(&self) -> I {
        self.b
    }

    pub fn omega_vals(&self) -> &[I] {
        &self.omega_vals
    }

    /// `m_j = v(Ω_{j-1}) - v(Ω_j)` for `1 <= j <= n`.
    pub fn m(&self, j: usize) -> I {
        self.omega_vals[j - 1] - self.omega_vals[j]
    }
}

/// Checks `b > 0`, `gcd(b, p) = 1` and the normalization and ordering of the
/// Ω valuations.
pub fn validate_params<I: Int>(
    pp: PrimePower<I>,
    b: I,
    omega_vals: Vec<I>,
) -> Result<ExtensionParams<I>> {
    check_break(b, &pp)?;
    if omega_vals.len() != pp.width() {
        return Err(Error::OmegaLength {
            expected: pp.width(),
            got: omega_vals.len(),
        });
    }
    if !omega_vals[0].is_zero() {
        return Err(Error::OmegaNormalization(omega_vals[0].to_string()));
    }
    if let Some((index, v)) = omega_vals.iter().enumerate().find(|(_, v)| v.is_positive()) {
        return Err(Error::OmegaPositive {
            index,
            value: v.to_string(),
        });
    }
    for index in 1..omega_vals.len() {
        if omega_vals[index] > omega_vals[index - 1] {
            return Err(Error::OmegaNotMonotone {
                index,
                value: omega_vals[index].to_string(),
                prev_value: omega_vals[index - 1].to_string(),
            });
        }
    }
    Ok(ExtensionParams {
        pp,
        b,
        omega_vals,
        independence_assumed: true,
    })
}

/// A ramification number must be positive and prime to p.
pub(crate) fn check_break<I: Int>(b: I, pp: &PrimePower<I>) -> Result<()> {
    if b < I::one() {
        return Err(out_of_range("b", b, "b >= 1"));
    }
    if (b % pp.p()).is_zero() {
        return Err(Error::NotCoprime {
            b: b.to_string(),
            p: pp.p().to_string(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationData<I> {
    /// `b_(0), ..., b_(n)`, non-decreasing.
    pub breaks: Vec<I>,
    /// The lower ramification numbers, strictly increasing.
    pub distinct_breaks: Vec<I>,
    pub b_max: I,
}

/// `b_(i) = b + p^n Σ_{j=1}^{i} p^j m_j`.
pub fn ramification_breaks<I: Int>(params: &ExtensionParams<I>) -> Result<RamificationData<I>> {
    let pp = params.prime_power();
    let overflow = || Error::Overflow("ramification breaks");
    let p_n = pp.pow(pp.n());
    let mut breaks = Vec::with_capacity(pp.width());
    let mut acc = params.b();
    breaks.push(acc);
    for j in 1..pp.width() {
        let step = p_n
            .checked_mul(&pp.pow(j as u32))
            .and_then(|w| w.checked_mul(&params.m(j)))
            .ok_or_else(overflow)?;
        acc = acc.checked_add(&step).ok_or_else(overflow)?;
        breaks.push(acc);
    }
    let mut distinct_breaks = breaks.clone();
    distinct_breaks.dedup();
    let b_max = *breaks.last().expect("at least one break");
    Ok(RamificationData {
        breaks,
        distinct_breaks,
        b_max,
    })
}

/// Lower bound `T_i` on `v_K(ε_i)`:
///
/// `T_i = p^n v(Ω_i) - b + (p^n - 1) b / p^n - (p - 1) Σ_{j=1}^{n-1} p^j v(Ω_j)`.
///
/// An error term is admissible iff its valuation is strictly greater.
pub fn epsilon_threshold<I: Int>(params: &ExtensionParams<I>, i: usize) -> Result<Ratio<I>> {
    let pp = params.prime_power();
    if i >= pp.width() {
        return Err(out_of_range("i", i, format!("0 <= i <= n = {}", pp.n())));
    }
    let overflow = || Error::Overflow("epsilon threshold");
    let p_n = pp.pow(pp.n());
    let omega = params.omega_vals();
    let mut sum = I::zero();
    for (j, &v) in omega
        .iter()
        .enumerate()
        .take(pp.width().saturating_sub(1))
        .skip(1)
    {
        let term = pp.pow(j as u32).checked_mul(&v).ok_or_else(overflow)?;
        sum = sum.checked_add(&term).ok_or_else(overflow)?;
    }
    let integral = p_n
        .checked_mul(&omega[i])
        .and_then(|x| x.checked_sub(&params.b()))
        .and_then(|x| {
            (pp.p() - I::one())
                .checked_mul(&sum)
                .and_then(|s| x.checked_sub(&s))
        })
        .ok_or_else(overflow)?;
    let middle = (p_n - I::one())
        .checked_mul(&params.b())
        .ok_or_else(overflow)?;
    let middle = Ratio::new(middle, p_n);
    Ok(Ratio::from_integer(integral) + middle)
}

/// Whether an error term of valuation `v_eps` is small enough at index `i`.
pub fn error_term_admissible<I: Int>(
    params: &ExtensionParams<I>,
    i: usize,
    v_eps: I,
) -> Result<bool> {
    Ok(Ratio::from_integer(v_eps) > epsilon_threshold(params, i)?)
}

fn check_scaffold_args<I: Int>(a: I, b_max: I, q: I) -> Result<()> {
    if q < I::one() {
        return Err(out_of_range("q", q, "q >= 1"));
    }
    if a < I::zero() || a >= q {
        return Err(out_of_range("a", a, format!("0 <= a < q = {q}")));
    }
    if b_max < I::one() {
        return Err(out_of_range("b_max", b_max, "b_max >= 1"));
    }
    Ok(())
}

/// `d_a = ⌊(1 + a) b_max / q⌋`.
pub fn d_value<I: Int>(a: I, b_max: I, q: I) -> Result<I> {
    check_scaffold_args(a, b_max, q)?;
    let prod = (a + I::one())
        .checked_mul(&b_max)
        .ok_or(Error::Overflow("d_a"))?;
    Ok(prod.div_floor(&q))
}

/// `v_L(ρ_a) = r((1 + a) b_max)`.
pub fn rho_valuation<I: Int>(a: I, b_max: I, q: I) -> Result<I> {
    check_scaffold_args(a, b_max, q)?;
    let prod = (a + I::one())
        .checked_mul(&b_max)
        .ok_or(Error::Overflow("v_L(rho_a)"))?;
    Ok(prod.mod_floor(&q))
}

/// `Ψ^(a) Ψ^(j)`: `Some(a + j)` when the base-p addition has no carries,
/// `None` for the zero element.
pub fn psi_mult<I: Int>(a: I, j: I, pp: &PrimePower<I>) -> Result<Option<I>> {
    pp.check_index("a", a)?;
    pp.check_index("j", j)?;
    let q1 = pp.q_usize() - 1;
    Ok(pp.leq_index(a.idx(), q1 - j.idx()).then(|| a + j))
}

/// An element `t^e ρ_k` of `O_L`, or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoAction<I> {
    Zero,
    Term { t_exponent: I, target_index: I },
}

impl<I: Int> RhoAction<I> {
    /// `ρ_a` itself.
    pub fn basis(a: I) -> Self {
        RhoAction::Term {
            t_exponent: I::zero(),
            target_index: a,
        }
    }

    /// Applies `Ψ^(j)` to this element.
    pub fn then(self, j: I, b_max: I, pp: &PrimePower<I>) -> Result<Self> {
        match self {
            RhoAction::Zero => {
                pp.check_index("j", j)?;
                Ok(RhoAction::Zero)
            }
            RhoAction::Term {
                t_exponent,
                target_index,
            } => Ok(match psi_action_on_rho(j, target_index, b_max, pp)? {
                RhoAction::Zero => RhoAction::Zero,
                RhoAction::Term {
                    t_exponent: e,
                    target_index,
                } => RhoAction::Term {
                    t_exponent: t_exponent + e,
                    target_index,
                },
            }),
        }
    }

    /// `v_L` of the element, `None` for zero. Uses `v_L(t) = q`.
    pub fn valuation(self, b_max: I, q: I) -> Result<Option<I>> {
        match self {
            RhoAction::Zero => Ok(None),
            RhoAction::Term {
                t_exponent,
                target_index,
            } => Ok(Some(
                q * t_exponent + rho_valuation(target_index, b_max, q)?,
            )),
        }
    }
}

/// `Ψ^(j) ρ_a = t^(d_{a+j} - d_a) ρ_{a+j}` if `a ⪯ q-1-j`, else zero.
pub fn psi_action_on_rho<I: Int>(j: I, a: I, b_max: I, pp: &PrimePower<I>) -> Result<RhoAction<I>> {
    match psi_mult(a, j, pp)? {
        None => Ok(RhoAction::Zero),
        Some(target) => {
            let q = pp.q();
            Ok(RhoAction::Term {
                t_exponent: d_value(target, b_max, q)? - d_value(a, b_max, q)?,
                target_index: target,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: i64, n: u32) -> PrimePower<i64> {
        PrimePower::new(p, n).unwrap()
    }

    fn params(p: i64, n: u32, b: i64, omega: &[i64]) -> Result<ExtensionParams<i64>> {
        ExtensionParams::new(pp(p, n), b, omega.to_vec())
    }

    #[test]
    fn validation() {
        assert!(params(2, 1, 3, &[0, -1]).is_ok());
        assert!(params(3, 2, 2, &[0, -1, -1]).is_ok());
        assert!(matches!(
            params(2, 1, 4, &[0, -1]),
            Err(Error::NotCoprime { .. })
        ));
        assert!(matches!(
            params(2, 1, 0, &[0, -1]),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            params(3, 2, 2, &[0, -2, -1]),
            Err(Error::OmegaNotMonotone { index: 2, .. })
        ));
        assert!(matches!(
            params(2, 1, 3, &[-1, -2]),
            Err(Error::OmegaNormalization(_))
        ));
        assert!(matches!(
            params(2, 1, 3, &[0, 1]),
            Err(Error::OmegaPositive { index: 1, .. })
        ));
        assert!(matches!(
            params(2, 1, 3, &[0]),
            Err(Error::OmegaLength {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn breaks_examples() {
        let r = ramification_breaks(&params(2, 1, 3, &[0, -1]).unwrap()).unwrap();
        assert_eq!(r.breaks, vec![3, 7]);
        assert_eq!(r.distinct_breaks, vec![3, 7]);
        assert_eq!(r.b_max, 7);

        let r = ramification_breaks(&params(2, 1, 3, &[0, 0]).unwrap()).unwrap();
        assert_eq!(r.breaks, vec![3, 3]);
        assert_eq!(r.distinct_breaks, vec![3]);
        assert_eq!(r.b_max, 3);

        let r = ramification_breaks(&params(3, 2, 2, &[0, -1, -3]).unwrap()).unwrap();
        assert_eq!(r.breaks, vec![2, 29, 191]);
        assert!(r.breaks.iter().all(|b| b % 27 == 2));
    }

    #[test]
    fn breaks_overflow_is_reported() {
        let p = params(2, 1, 3, &[0, i64::MIN / 2]).unwrap();
        assert_eq!(
            ramification_breaks(&p),
            Err(Error::Overflow("ramification breaks"))
        );
    }

    #[test]
    fn threshold_examples() {
        let p = params(2, 1, 3, &[0, -1]).unwrap();
        assert_eq!(epsilon_threshold(&p, 1).unwrap(), Ratio::new(-7, 2));
        assert_eq!(epsilon_threshold(&p, 0).unwrap(), Ratio::new(-3, 2));
        assert!(error_term_admissible(&p, 1, -3).unwrap());
        assert!(!error_term_admissible(&p, 1, -4).unwrap());
        assert!(epsilon_threshold(&p, 2).is_err());

        for prime in [2, 3, 5, 7] {
            let p = params(prime, 0, 4 * prime + 1, &[0]).unwrap();
            assert_eq!(
                epsilon_threshold(&p, 0).unwrap(),
                Ratio::from_integer(-(4 * prime + 1))
            );
        }
    }

    #[test]
    fn threshold_is_fractional_and_strict() {
        let p = params(3, 1, 3 * 3 - 1, &[0, 0]).unwrap();
        // T_0 = -8 + 2·8/3 = -8/3
        assert_eq!(epsilon_threshold(&p, 0).unwrap(), Ratio::new(-8, 3));
        let p = params(2, 1, 1, &[0, 0]).unwrap();
        // T_0 = -1 + 1/2 = -1/2, T_1 likewise
        assert_eq!(epsilon_threshold(&p, 1).unwrap(), Ratio::new(-1, 2));
        assert!(error_term_admissible(&p, 1, 0).unwrap());
        assert!(!error_term_admissible(&p, 1, -1).unwrap());
    }

    #[test]
    fn d_value_examples() {
        let d: Vec<i64> = (0..4).map(|a| d_value(a, 3, 4).unwrap()).collect();
        assert_eq!(d, vec![0, 1, 2, 3]);
        let d: Vec<i64> = (0..4).map(|a| d_value(a, 7, 4).unwrap()).collect();
        assert_eq!(d, vec![1, 3, 5, 7]);
        assert_eq!(d_value(26, 11, 27).unwrap(), 11);
        assert!(d_value(4, 3, 4).is_err());
        assert!(d_value(0, 0, 4).is_err());
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_valuation(0, 3, 4).unwrap(), 3);
        assert_eq!(rho_valuation(1, 3, 4).unwrap(), 2);
        let sweep: Vec<i64> = (0..4).map(|a| rho_valuation(a, 3, 4).unwrap()).collect();
        assert_eq!(sweep, vec![3, 2, 1, 0]);
        assert!(rho_valuation(-1, 3, 4).is_err());
    }

    #[test]
    fn psi_examples() {
        let pp = pp(2, 1);
        assert_eq!(psi_mult(1, 2, &pp).unwrap(), Some(3));
        assert_eq!(psi_mult(1, 1, &pp).unwrap(), None);
        for j in 0..4 {
            assert_eq!(psi_mult(0, j, &pp).unwrap(), Some(j));
        }
        assert!(psi_mult(4, 0, &pp).is_err());
    }

    #[test]
    fn action_examples() {
        let pp = pp(2, 1);
        assert_eq!(
            psi_action_on_rho(1, 0, 3, &pp).unwrap(),
            RhoAction::Term {
                t_exponent: 1,
                target_index: 1
            }
        );
        assert_eq!(psi_action_on_rho(1, 1, 3, &pp).unwrap(), RhoAction::Zero);
        for a in 0..4 {
            assert_eq!(
                psi_action_on_rho(0, a, 3, &pp).unwrap(),
                RhoAction::basis(a)
            );
        }
        assert_eq!(
            RhoAction::basis(0)
                .then(1, 3, &pp)
                .unwrap()
                .valuation(3, 4)
                .unwrap(),
            Some(4 + 2)
        );
    }
}
