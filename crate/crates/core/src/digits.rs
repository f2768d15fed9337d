//! Base-p digit arithmetic on the range `[0, q)` with `q = p^(n+1)`.

use std::fmt;

use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::scalar::Int;

/// Largest modulus accepted anywhere in the crate.
pub const Q_HARD_CAP: u64 = 1 << 32;

/// The prime power `q = p^(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower<I> {
    p: I,
    n: u32,
    q: I,
    p_idx: usize,
    q_idx: usize,
}

impl<I: Int> PrimePower<I> {
    /// Builds `q = p^(n+1)`, checking primality of `p` by trial division.
    ///
    /// `q` must not exceed [`Q_HARD_CAP`] and `q²` must fit in `I`, so that
    /// products of two residues never overflow.
    pub fn new(p: I, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        let too_large = || Error::ModulusTooLarge {
            p: p.to_string(),
            levels: n.saturating_add(1),
        };
        let levels = n.checked_add(1).ok_or_else(too_large)?;
        let q = num_traits::checked_pow(p, levels as usize).ok_or_else(too_large)?;
        let q_u64 = q.to_u64().ok_or_else(too_large)?;
        if q_u64 > Q_HARD_CAP || q.checked_mul(&q).is_none() {
            return Err(too_large());
        }
        let p_idx = p.to_usize().ok_or_else(too_large)?;
        let q_idx = q.to_usize().ok_or_else(too_large)?;
        Ok(PrimePower {
            p,
            n,
            q,
            p_idx,
            q_idx,
        })
    }

    pub fn p(&self) -> I {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> I {
        self.q
    }

    /// Number of base-p digits, `n + 1`.
    pub fn width(&self) -> usize {
        self.n as usize + 1
    }

    pub fn p_usize(&self) -> usize {
        self.p_idx
    }

    pub fn q_usize(&self) -> usize {
        self.q_idx
    }

    /// `p^e` for `0 <= e <= n + 1`.
    pub fn pow(&self, e: u32) -> I {
        num_traits::pow(self.p, e as usize)
    }

    pub(crate) fn check_index(&self, what: &'static str, x: I) -> Result<()> {
        if x < I::zero() || x >= self.q {
            return Err(out_of_range(
                what,
                x,
                format!("0 <= {what} < q = {}", self.q),
            ));
        }
        Ok(())
    }

    /// Digitwise comparison on indices already known to lie in `[0, q)`.
    #[inline]
    pub fn leq_index(&self, x: usize, y: usize) -> bool {
        if self.p_idx == 2 {
            return x & !y == 0;
        }
        let p = self.p_idx;
        let (mut x, mut y) = (x, y);
        while x != 0 {
            if x % p > y % p {
                return false;
            }
            x /= p;
            y /= p;
        }
        true
    }

    /// Every `a <= m` digitwise, in increasing order.
    pub fn dominated_by(&self, m: usize) -> DigitBox {
        let upper = self.index_digits(m);
        DigitBox::new(vec![0; self.width()], upper, self.p_idx)
    }

    /// Every `i` in `[0, q)` with `h <= i` digitwise, in increasing order.
    pub fn dominating(&self, h: usize) -> DigitBox {
        let lower = self.index_digits(h);
        DigitBox::new(lower, vec![self.p_idx - 1; self.width()], self.p_idx)
    }

    fn index_digits(&self, mut x: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.width());
        for _ in 0..self.width() {
            out.push(x % self.p_idx);
            x /= self.p_idx;
        }
        out
    }
}

impl<I: Int> fmt::Display for PrimePower<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.n + 1)
    }
}

/// Trial division.
pub fn is_prime<I: Int>(p: I) -> bool {
    let two = I::one() + I::one();
    if p < two {
        return false;
    }
    let mut d = two;
    while d <= p / d {
        if (p % d).is_zero() {
            return false;
        }
        d += I::one();
    }
    true
}

/// Base-p digits `[x_(0), ..., x_(n)]`, least significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DigitVector<I>(Vec<I>);

impl<I: Int> DigitVector<I> {
    pub fn as_slice(&self) -> &[I] {
        &self.0
    }

    /// `Σ digits[s]·p^s`.
    pub fn value(&self, pp: &PrimePower<I>) -> I {
        self.0
            .iter()
            .rev()
            .fold(I::zero(), |acc, &d| acc * pp.p() + d)
    }
}

impl<I: Int> fmt::Display for DigitVector<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // most significant digit first, the way numbers are written
        for d in self.0.iter().rev() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

pub fn digits<I: Int>(x: I, pp: &PrimePower<I>) -> Result<DigitVector<I>> {
    pp.check_index("x", x)?;
    let mut rest = x;
    let mut out = Vec::with_capacity(pp.width());
    for _ in 0..pp.width() {
        out.push(rest % pp.p());
        rest /= pp.p();
    }
    Ok(DigitVector(out))
}

/// Least non-negative residue of `x` modulo `q`.
pub fn residue<I: Int>(x: I, q: I) -> Result<I> {
    if q <= I::zero() {
        return Err(out_of_range("q", q, "q >= 1"));
    }
    Ok(x.mod_floor(&q))
}

/// `x ⪯ y`: every base-p digit of `x` is at most the matching digit of `y`.
pub fn digit_leq<I: Int>(x: I, y: I, pp: &PrimePower<I>) -> Result<bool> {
    pp.check_index("x", x)?;
    pp.check_index("y", y)?;
    Ok(pp.leq_index(x.idx(), y.idx()))
}

/// Whether `C(i, h) ≢ 0 (mod p)`, decided by checking that adding `h` and
/// `i - h` in base p produces no carry.
pub fn binomial_nonzero_mod_p<I: Int>(i: I, h: I, p: I) -> Result<bool> {
    if p < I::one() + I::one() {
        return Err(out_of_range("p", p, "p >= 2"));
    }
    if h < I::zero() || i < h {
        return Err(out_of_range("h", h, format!("0 <= h <= i = {i}")));
    }
    let (mut x, mut y) = (h, i - h);
    while !x.is_zero() && !y.is_zero() {
        if x % p + y % p >= p {
            return Ok(false);
        }
        x /= p;
        y /= p;
    }
    Ok(true)
}

/// Iterator over all integers whose base-p digits lie in per-position
/// intervals `[lower[s], upper[s]]`, in increasing order.
#[derive(Debug, Clone)]
pub struct DigitBox {
    lower: Vec<usize>,
    upper: Vec<usize>,
    current: Vec<usize>,
    weights: Vec<usize>,
    value: usize,
    done: bool,
}

impl DigitBox {
    fn new(lower: Vec<usize>, upper: Vec<usize>, p: usize) -> Self {
        let mut weights = Vec::with_capacity(lower.len());
        let mut w = 1usize;
        for _ in 0..lower.len() {
            weights.push(w);
            w = w.saturating_mul(p);
        }
        let value = lower.iter().zip(&weights).map(|(d, w)| d * w).sum();
        let done = lower.iter().zip(&upper).any(|(lo, hi)| lo > hi);
        DigitBox {
            current: lower.clone(),
            lower,
            upper,
            weights,
            value,
            done,
        }
    }
}

impl Iterator for DigitBox {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.done {
            return None;
        }
        let out = self.value;
        // odometer, least significant digit fastest
        let mut s = 0;
        loop {
            if s == self.current.len() {
                self.done = true;
                break;
            }
            if self.current[s] < self.upper[s] {
                self.current[s] += 1;
                self.value += self.weights[s];
                break;
            }
            self.value -= (self.current[s] - self.lower[s]) * self.weights[s];
            self.current[s] = self.lower[s];
            s += 1;
        }
        Some(out)
    }
}
