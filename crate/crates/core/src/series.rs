//! Truncated formal power series in one variable over exact rationals.
//!
//! A [`TruncatedSeries`] of order `N` is known modulo `t^(N+1)` and stores
//! exactly `N + 1` coefficients. Binary operations never extend what is
//! known: the result carries the smaller of the two input orders.

use crate::rational::{rat, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("division by a series with zero constant term")]
    DivisionByNonUnit,
    #[error("base series must have constant term 1, found {found}")]
    BasePointNotOne { found: Rational },
    #[error("exp needs a series with zero constant term, found {found}")]
    ExpOfNonNilpotent { found: Rational },
    #[error("inner series of a composition must have zero constant term, found {found}")]
    InnerSeriesNotNilpotent { found: Rational },
    #[error("series is not reversible: need g(0) = 0 and g'(0) != 0")]
    NotReversible,
    #[error("coefficient {requested} requested from a series of order {order}")]
    OrderExceeded { requested: usize, order: usize },
}

#[derive(Clone)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Series known to `order`, built from the leading coefficients of
    /// `coeffs`. Missing coefficients are zero, extra ones are dropped.
    pub fn from_coeffs(coeffs: Vec<Rational>, order: usize) -> Self {
        let mut coeffs = coeffs;
        coeffs.resize(order + 1, Rational::zero());
        TruncatedSeries { coeffs }
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::from_coeffs(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::from_coeffs(vec![c], order)
    }

    /// The identity series `t`. At order 0 this is the zero series.
    pub fn variable(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    /// `c * t^k`.
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// `1 + c t`.
    pub fn linear(c: Rational, order: usize) -> Self {
        Self::from_coeffs(vec![Rational::one(), c], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Coefficient of `t^n`.
    pub fn coeff(&self, n: usize) -> Result<Rational, SeriesError> {
        self.coeffs
            .get(n)
            .cloned()
            .ok_or(SeriesError::OrderExceeded {
                requested: n,
                order: self.order(),
            })
    }

    /// Forget everything above `order`. Never extends.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first coefficient (up to the common order) where the two
    /// series differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by `t^k`; the order grows by `k` since nothing new is unknown.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs }
    }

    /// Divide by `t^k`. The first `k` coefficients must vanish and `k` must
    /// not exceed the order.
    fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs[..k].iter().all(Zero::is_zero));
        TruncatedSeries {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Formal derivative. Known to one order less; an order-0 series yields
    /// the zero series of order 0.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::DivisionByNonUnit);
        }
        let n = self.order();
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-(acc * &inv0));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `self / g`, the unique `h` with `h * g = self` to the common order.
    pub fn div(&self, g: &Self) -> Result<Self, SeriesError> {
        let order = self.order().min(g.order());
        Ok(&self.truncate(order) * &g.truncate(order).inverse()?)
    }

    /// Formal exponential of a series without constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpOfNonNilpotent {
                found: self.coeffs[0].clone(),
            });
        }
        // g = exp f satisfies g' = f' g, i.e. n g_n = sum_k k f_k g_{n-k}.
        let n = self.order();
        let mut g: Vec<Rational> = Vec::with_capacity(n + 1);
        g.push(Rational::one());
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &g[m - k] * rat(k as i64);
                }
            }
            g.push(acc / rat(m as i64));
        }
        Ok(TruncatedSeries { coeffs: g })
    }

    /// Formal logarithm of a series with constant term 1.
    #[allow(clippy::needless_range_loop)]
    pub fn log(&self) -> Result<Self, SeriesError> {
        self.check_base_point()?;
        // f' = f h' with h = log f gives m h_m = m f_m - sum_{k<m} k h_k f_{m-k}.
        let n = self.order();
        let mut h: Vec<Rational> = Vec::with_capacity(n + 1);
        h.push(Rational::zero());
        for m in 1..=n {
            let mut acc = &self.coeffs[m] * rat(m as i64);
            for k in 1..m {
                if !h[k].is_zero() {
                    acc -= &h[k] * &self.coeffs[m - k] * rat(k as i64);
                }
            }
            h.push(acc / rat(m as i64));
        }
        Ok(TruncatedSeries { coeffs: h })
    }

    /// `self^q` for rational `q`, defined as `exp(q log self)`.
    pub fn pow_rational(&self, q: &Rational) -> Result<Self, SeriesError> {
        self.check_base_point()?;
        if q.is_zero() {
            return Ok(Self::one(self.order()));
        }
        self.log()?.scale(q).exp()
    }

    fn check_base_point(&self) -> Result<(), SeriesError> {
        if self.coeffs[0].is_one() {
            Ok(())
        } else {
            Err(SeriesError::BasePointNotOne {
                found: self.coeffs[0].clone(),
            })
        }
    }

    /// `self(g(t))`, known to the smaller of the two orders.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if !g.coeffs[0].is_zero() {
            return Err(SeriesError::InnerSeriesNotNilpotent {
                found: g.coeffs[0].clone(),
            });
        }
        let order = self.order().min(g.order());
        let g = g.truncate(order);
        let mut acc = Self::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = &acc * &g;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse by Newton iteration on `g(h) = t`.
    ///
    /// Each step doubles the number of correct coefficients, from order 1 to
    /// order `2m + 1`.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        check_reversible(self)?;
        let n = self.order();
        let g1 = &self.coeffs[1];
        let mut h = Self::monomial(g1.recip(), 1, n.min(1));
        let mut known = 1;
        while known < n {
            let target = (2 * known + 1).min(n);
            let g = self.truncate(target);
            let h_ext = Self::from_coeffs(h.coeffs.clone(), target);
            let residual = &g.compose(&h_ext)? - &Self::variable(target);
            // residual = O(t^(known+1)); divide it out so g'(h) is only needed
            // to the precision that matters.
            let lowered = residual.shift_down(known + 1);
            let slope = g.derivative().compose(&h_ext)?;
            let correction = lowered.div(&slope)?.shift_up(known + 1);
            h = &h_ext - &correction.truncate(target);
            known = target;
        }
        Ok(h)
    }

    /// Apply `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

pub(crate) fn check_reversible(g: &TruncatedSeries) -> Result<(), SeriesError> {
    if g.order() == 0 || !g.coeffs[0].is_zero() || g.coeffs[1].is_zero() {
        return Err(SeriesError::NotReversible);
    }
    Ok(())
}

/// Equality is coefficient-wise up to the common order.
impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({self})")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        self.map_coeffs(|c| -c)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        // Convolve integer numerators over a common denominator, then
        // normalize once per coefficient.
        let (da, a) = common_denominator(&self.coeffs[..=order]);
        let (db, b) = common_denominator(&rhs.coeffs[..=order]);
        let mut acc = vec![BigInt::zero(); order + 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[..=order - i].iter().enumerate() {
                if !y.is_zero() {
                    acc[i + j] += x * y;
                }
            }
        }
        let d = da * db;
        TruncatedSeries {
            coeffs: acc
                .into_iter()
                .map(|n| Rational::new(n, d.clone()))
                .collect(),
        }
    }
}

fn common_denominator(c: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let d = c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let nums = c.iter().map(|q| q.numer() * (&d / q.denom())).collect();
    (d, nums)
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
