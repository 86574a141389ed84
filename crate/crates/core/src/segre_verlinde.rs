//! Closed-form Segre and Verlinde series of moduli spaces of sheaves on a K3
//! surface, number extraction, and the exact check of the Segre–Verlinde
//! variable change.
//!
//! Notation: `ρ` is the rank of the Mukai vector, `s` the rank of the
//! K-theory class, and for the Verlinde side the series are written in a
//! parameter `ν` with `w = ν (1 + ν)^(r²/ρ² - 1)`.

use crate::error::{Error, Result};
use crate::rational::{frac, rat, Rational};
use crate::reversion::{self, Reverter};
use crate::series::TruncatedSeries;
use num_traits::{One, Zero};
use std::sync::Arc;

/// Extra coefficients carried beyond `n` when extracting a number.
pub const DEFAULT_GUARD_TERMS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreParams {
    pub rho: u32,
    pub s: Rational,
    pub c2: i64,
    pub c1sq: i64,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerlindeParams {
    pub rho: u32,
    pub r: i64,
    pub chi_l: i64,
    pub n: u32,
}

/// `V_s`, `W_s`, `X_s` as series in `t`.
#[derive(Debug, Clone)]
pub struct SegreSeries {
    pub v: TruncatedSeries,
    pub w: TruncatedSeries,
    pub x: TruncatedSeries,
}

/// `F_r`, `G_r` and the variable change `w(ν)`, all as series in `ν`.
#[derive(Debug, Clone)]
pub struct VerlindeSeries {
    pub f: TruncatedSeries,
    pub g: TruncatedSeries,
    pub w_of_nu: TruncatedSeries,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub rho: u32,
    pub r: i64,
    pub order: usize,
    pub g_identity_holds: bool,
    pub f_identity_holds: bool,
    /// Lowest power of `t` at which either identity fails.
    pub first_discrepant_order: Option<usize>,
}

impl CorrespondenceReport {
    pub fn holds(&self) -> bool {
        self.f_identity_holds && self.g_identity_holds
    }
}

fn check_rho(rho: u32) -> Result<Rational> {
    if rho == 0 {
        Err(Error::InvalidRho)
    } else {
        Ok(rat(rho as i64))
    }
}

/// `(1 + c t)^e`.
fn linear_power(c: &Rational, e: &Rational, order: usize) -> Result<TruncatedSeries> {
    Ok(TruncatedSeries::linear(c.clone(), order).pow_rational(e)?)
}

fn product(factors: &[TruncatedSeries]) -> TruncatedSeries {
    let order = factors.iter().map(TruncatedSeries::order).min().unwrap_or(0);
    factors
        .iter()
        .fold(TruncatedSeries::one(order), |acc, f| &acc * f)
}

/// Series computations parameterized by the reversion strategy and the
/// number of guard terms.
#[derive(Clone)]
pub struct Engine {
    reverter: Arc<dyn Reverter>,
    guard: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            reverter: Arc::new(reversion::Newton),
            guard: DEFAULT_GUARD_TERMS,
        }
    }
}

impl Engine {
    pub fn new(reverter: Arc<dyn Reverter>, guard: usize) -> Self {
        Engine { reverter, guard }
    }

    /// Engine using a strategy from the built-in registry.
    pub fn with_reverter(name: &str) -> Result<Self> {
        let reverter = reversion::builtin()
            .get(name)
            .ok_or_else(|| Error::UnknownReverter(name.to_string()))?;
        Ok(Engine {
            reverter,
            guard: DEFAULT_GUARD_TERMS,
        })
    }

    pub fn reverter_name(&self) -> &'static str {
        self.reverter.name()
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    pub fn build_vwx(&self, rho: u32, s: &Rational, order: usize) -> Result<SegreSeries> {
        let rho_q = check_rho(rho)?;
        let q = s / &rho_q;
        let one = Rational::one();
        let half = frac(1, 2);
        let a = &one - &q;
        let b = rat(2) - &q;
        let ab = &a * &b;

        let v = product(&[
            linear_power(&a, &(&one - s), order)?,
            linear_power(&b, s, order)?,
            linear_power(&a, &(&rho_q - &one), order)?,
        ]);
        let w = product(&[
            linear_power(&a, &(&half * s - &one), order)?,
            linear_power(&b, &(&half * (&one - s)), order)?,
            linear_power(&a, &(&half - &half * &rho_q), order)?,
        ]);
        let s_sq = s * s;
        let rho_m1 = &rho_q - &one;
        let x = product(&[
            linear_power(&a, &(&half * &s_sq - s), order)?,
            linear_power(&b, &(&half - &half * &s_sq), order)?,
            linear_power(&ab, &(-&half), order)?,
            linear_power(&a, &(-(&rho_m1 * &rho_m1) / (rat(2) * &rho_q) * s), order)?,
        ]);
        Ok(SegreSeries { v, w, x })
    }

    /// `z(t) = t (1 + (1 - s/ρ) t)^(1 - s/ρ)`.
    pub fn segre_z_of_t(&self, rho: u32, s: &Rational, order: usize) -> Result<TruncatedSeries> {
        let rho_q = check_rho(rho)?;
        let a = Rational::one() - s / &rho_q;
        let factor = linear_power(&a, &a, order)?;
        Ok(factor.shift_up(1).truncate(order))
    }

    /// Inverse variable change `t(z)`.
    pub fn segre_variable_change(
        &self,
        rho: u32,
        s: &Rational,
        order: usize,
    ) -> Result<TruncatedSeries> {
        let z = self.segre_z_of_t(rho, s, order)?;
        Ok(self.reverter.revert(&z)?)
    }

    /// `Coeff_{z^n}(V^c2 W^c1sq X^2)` with the default guard terms.
    pub fn segre_number(&self, p: &SegreParams) -> Result<Rational> {
        self.segre_number_at_order(p, p.n as usize + self.guard)
    }

    pub fn segre_number_at_order(&self, p: &SegreParams, order: usize) -> Result<Rational> {
        let n = p.n as usize;
        if order < n {
            return Err(Error::OrderTooSmall { order, n });
        }
        let series = self.build_vwx(p.rho, &p.s, order)?;
        let integrand = product(&[
            series.v.pow_rational(&rat(p.c2))?,
            series.w.pow_rational(&rat(p.c1sq))?,
            series.x.pow_rational(&rat(2))?,
        ]);
        let t_of_z = self.segre_variable_change(p.rho, &p.s, order)?;
        Ok(integrand.compose(&t_of_z)?.coeff(n)?)
    }

    pub fn build_fg(&self, rho: u32, r: i64, order: usize) -> Result<VerlindeSeries> {
        let rho_q = check_rho(rho)?;
        let k = rat(r * r) / (&rho_q * &rho_q);
        let one = Rational::one();
        let f = product(&[
            linear_power(&one, &k, order)?,
            linear_power(&k, &rat(-1), order)?,
        ]);
        let g = TruncatedSeries::linear(one.clone(), order);
        let w_of_nu = linear_power(&one, &(&k - &one), order)?
            .shift_up(1)
            .truncate(order);
        Ok(VerlindeSeries { f, g, w_of_nu })
    }

    /// `Coeff_{w^n}(G^χ(L) F)`; the exponent of `F` is `χ(O_S)/2 = 1`.
    pub fn verlinde_number(&self, p: &VerlindeParams) -> Result<Rational> {
        self.verlinde_number_at_order(p, p.n as usize + self.guard)
    }

    pub fn verlinde_number_at_order(&self, p: &VerlindeParams, order: usize) -> Result<Rational> {
        let n = p.n as usize;
        if order < n {
            return Err(Error::OrderTooSmall { order, n });
        }
        let series = self.build_fg(p.rho, p.r, order)?;
        let integrand = &series.g.pow_rational(&rat(p.chi_l))? * &series.f;
        let nu_of_w = self.reverter.revert(&series.w_of_nu)?;
        Ok(integrand.compose(&nu_of_w)?.coeff(n)?)
    }

    pub fn check_correspondence(&self, rho: u32, r: i64, order: usize) -> Result<CorrespondenceReport> {
        self.check_correspondence_perturbed(rho, r, order, &Rational::zero())
    }

    /// As [`Engine::check_correspondence`], with `shift` added to the
    /// exponent of `V_s` on the F side.
    ///
    /// Both sides are expanded in `t`: the Verlinde series through
    /// `ν = t (1 - (r/ρ) t)^(-1)` and the Segre combination directly.
    pub fn check_correspondence_perturbed(
        &self,
        rho: u32,
        r: i64,
        order: usize,
        shift: &Rational,
    ) -> Result<CorrespondenceReport> {
        let rho_q = check_rho(rho)?;
        let s = &rho_q + rat(r);
        let segre = self.build_vwx(rho, &s, order)?;
        let verlinde = self.build_fg(rho, r, order)?;

        let nu_of_t = linear_power(&(-rat(r) / &rho_q), &rat(-1), order)?
            .shift_up(1)
            .truncate(order);
        let f_lhs = verlinde.f.compose(&nu_of_t)?;
        let g_lhs = verlinde.g.compose(&nu_of_t)?;

        // (s/ρ)(√ρ - 1/√ρ)² = (s/ρ)(ρ - 2 + 1/ρ)
        let v_exp = &s / &rho_q * (&rho_q - rat(2) + rho_q.recip()) + shift;
        let w_exp = rat(-4) * &s / &rho_q;
        let f_rhs = product(&[
            segre.v.pow_rational(&v_exp)?,
            segre.w.pow_rational(&w_exp)?,
            segre.x.pow_rational(&rat(2))?,
        ]);
        let g_rhs = product(&[segre.v.clone(), segre.w.pow_rational(&rat(2))?]);

        let f_diff = f_lhs.first_difference(&f_rhs);
        let g_diff = g_lhs.first_difference(&g_rhs);
        let first = match (f_diff, g_diff) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Ok(CorrespondenceReport {
            rho,
            r,
            order,
            g_identity_holds: g_diff.is_none(),
            f_identity_holds: f_diff.is_none(),
            first_discrepant_order: first,
        })
    }
}

pub fn build_vwx(rho: u32, s: &Rational, order: usize) -> Result<SegreSeries> {
    Engine::default().build_vwx(rho, s, order)
}

pub fn segre_variable_change(rho: u32, s: &Rational, order: usize) -> Result<TruncatedSeries> {
    Engine::default().segre_variable_change(rho, s, order)
}

pub fn segre_number(p: &SegreParams) -> Result<Rational> {
    Engine::default().segre_number(p)
}

pub fn build_fg(rho: u32, r: i64, order: usize) -> Result<VerlindeSeries> {
    Engine::default().build_fg(rho, r, order)
}

pub fn verlinde_number(p: &VerlindeParams) -> Result<Rational> {
    Engine::default().verlinde_number(p)
}

pub fn check_correspondence(rho: u32, r: i64, order: usize) -> Result<CorrespondenceReport> {
    Engine::default().check_correspondence(rho, r, order)
}
