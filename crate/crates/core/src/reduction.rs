//! Moving tautological integrals from a moduli space `M` of sheaves with
//! Mukai vector `v` to the Hilbert scheme of `n = dim M / 2` points.
//!
//! Everything here works with numeric invariants of K-theory classes: the
//! integrals only depend on the pairings of a fixed list of Mukai-lattice
//! classes, and those pairings are functions of these invariants.

use crate::error::{Error, Result};
use crate::rational::{frac, is_even_integer, is_integer, rat, serde_str, Rational};
use crate::segre_verlinde::{Engine, SegreParams};
use serde::{Deserialize, Serialize};

/// Numeric shadow of a K-theory class `α`: `rk`, `c1²`, `c1·L`, `v2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KClassInvariants {
    #[serde(with = "serde_str")]
    pub rank: Rational,
    #[serde(with = "serde_str")]
    pub c1sq: Rational,
    #[serde(rename = "c1L", with = "serde_str")]
    pub c1l: Rational,
    #[serde(with = "serde_str")]
    pub v2: Rational,
}

impl KClassInvariants {
    pub fn new(rank: Rational, c1sq: Rational, c1l: Rational, v2: Rational) -> Self {
        KClassInvariants { rank, c1sq, c1l, v2 }
    }

    pub fn from_ints(rank: i64, c1sq: i64, c1l: i64, v2: i64) -> Self {
        Self::new(rat(rank), rat(c1sq), rat(c1l), rat(v2))
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0, 0)
    }

    /// `v(α)·v(α) = c1² - 2 rk v2`.
    pub fn mukai_square(&self) -> Rational {
        &self.c1sq - rat(2) * &self.rank * &self.v2
    }

    /// `c2 = rk + c1²/2 - v2`, from `v = ch · √td` with `√td = 1 + p`.
    pub fn c2(&self) -> Rational {
        &self.rank + &self.c1sq / rat(2) - &self.v2
    }
}

/// Integrand data on `M`: `∫_M c(α_M) exp(μ(L) + u μ(p))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliData {
    pub rho: u32,
    pub n: u32,
    pub alpha: KClassInvariants,
    #[serde(rename = "Lsq", with = "serde_str")]
    pub l_sq: Rational,
    #[serde(with = "serde_str")]
    pub u: Rational,
}

impl ModuliData {
    pub fn new(rho: u32, n: u32, alpha: KClassInvariants, l_sq: Rational, u: Rational) -> Result<Self> {
        let m = ModuliData { rho, n, alpha, l_sq, u };
        m.validate()?;
        Ok(m)
    }

    /// Deserialized values bypass [`ModuliData::new`]; call this on them.
    pub fn validate(&self) -> Result<()> {
        if self.rho == 0 {
            return Err(Error::InvalidRho);
        }
        if self.n == 0 {
            return Err(Error::InvalidN);
        }
        Ok(())
    }

    fn rho_q(&self) -> Rational {
        rat(self.rho as i64)
    }

    /// `v·v = 2n - 2`.
    pub fn v_square(&self) -> Rational {
        rat(2 * self.n as i64 - 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionWarning {
    /// `rk(α)/ρ` is not an integer, so no integral class realizes `β`.
    NonIntegralRank,
    /// `c1(β)²` must be even on a K3 surface.
    OddC1Square,
}

/// Hilbert-scheme data `∫_{S^[n]} c(β) exp(μ(L) + u' μ(p))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTarget {
    pub n: u32,
    pub beta: KClassInvariants,
    #[serde(rename = "Lsq", with = "serde_str")]
    pub l_sq: Rational,
    #[serde(with = "serde_str")]
    pub u_prime: Rational,
    pub warnings: Vec<ReductionWarning>,
}

/// Pairings among the five classes that govern the integrals.
///
/// On `M` the classes are `v`, `p/ρ`, `α' = v(α)^∨ e^{c1(v)/ρ}`,
/// `L' = L e^{c1(v)/ρ}` and `u p`. On the Hilbert scheme they are
/// `1 - (n-1)p`, `p`, `v(β)^∨`, `L` and `u' p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingList {
    /// (i) `v · α'`
    #[serde(with = "serde_str")]
    pub v_alpha: Rational,
    /// (ii) `(p/ρ) · α'`
    #[serde(with = "serde_str")]
    pub p_alpha: Rational,
    /// (iii) `α' · α'`
    #[serde(with = "serde_str")]
    pub alpha_alpha: Rational,
    /// (iv) `[v · L', α' · L', L' · L']`
    #[serde(with = "serde_str::vec")]
    pub l_pairings: Vec<Rational>,
    /// `u p` against `[v, p/ρ, α', L']`.
    #[serde(with = "serde_str::vec")]
    pub u_pairings: Vec<Rational>,
}

/// Solve for `β` and `u'`: `rk β = rk α / ρ`, `v2(β) = ρ v2(α)`, `c1²` and
/// `c1·L` unchanged, `u' = ρ u`.
pub fn reduce_to_hilbert(m: &ModuliData) -> Result<ReductionTarget> {
    m.validate()?;
    let rho = m.rho_q();
    let beta = KClassInvariants {
        rank: &m.alpha.rank / &rho,
        c1sq: m.alpha.c1sq.clone(),
        c1l: m.alpha.c1l.clone(),
        v2: &rho * &m.alpha.v2,
    };
    let mut warnings = Vec::new();
    if !is_integer(&beta.rank) {
        warnings.push(ReductionWarning::NonIntegralRank);
    }
    if !is_even_integer(&beta.c1sq) {
        warnings.push(ReductionWarning::OddC1Square);
    }
    Ok(ReductionTarget {
        n: m.n,
        beta,
        l_sq: m.l_sq.clone(),
        u_prime: &rho * &m.u,
        warnings,
    })
}

/// The pairing list on `M`.
pub fn dependence_pairings(m: &ModuliData) -> Result<PairingList> {
    m.validate()?;
    let rho = m.rho_q();
    let a = &m.alpha;
    let p_alpha = -(&a.rank / &rho);
    let up = &m.u * &rho;
    Ok(PairingList {
        v_alpha: -(&a.v2 * &rho) + frac(1, 2) * (&a.rank / &rho) * m.v_square(),
        alpha_alpha: a.mukai_square(),
        l_pairings: vec![rat(0), -a.c1l.clone(), m.l_sq.clone()],
        // p/ρ pairs with [v, p/ρ, α', L'] as [-1, 0, (ii), 0].
        u_pairings: vec![-up.clone(), rat(0), &up * &p_alpha, rat(0)],
        p_alpha,
    })
}

/// The pairing list on the Hilbert scheme for a reduction target.
pub fn hilbert_pairings(t: &ReductionTarget) -> PairingList {
    let b = &t.beta;
    let n = t.n as i64;
    let p_alpha = -b.rank.clone();
    PairingList {
        v_alpha: -b.v2.clone() + frac(1, 2) * &b.rank * rat(2 * n - 2),
        alpha_alpha: b.mukai_square(),
        l_pairings: vec![rat(0), -b.c1l.clone(), t.l_sq.clone()],
        u_pairings: vec![-t.u_prime.clone(), rat(0), &t.u_prime * &p_alpha, rat(0)],
        p_alpha,
    }
}

/// `∫_M c(α_M) exp(μ(L) + u μ(p))` for a two-dimensional `M`, i.e.
/// `∫_S c(β) exp(L + u ρ p) = c2(β) + c1(β)·L + L²/2 + u ρ`.
pub fn dim2_evaluate(m: &ModuliData) -> Result<Rational> {
    m.validate()?;
    if m.n != 1 {
        return Err(Error::DimensionMismatch { n: m.n });
    }
    let target = reduce_to_hilbert(m)?;
    let beta = &target.beta;
    Ok(beta.c2() + &beta.c1l + &target.l_sq / rat(2) + target.u_prime)
}

/// Compare the Segre series at `n = 1` with the closed form, taking
/// `v2(α) = s + c1²/2 - c2`.
pub fn segre_cross_check(rho: u32, s: i64, c2: i64, c1sq: i64) -> Result<bool> {
    segre_cross_check_with(&Engine::default(), rho, s, c2, c1sq)
}

pub fn segre_cross_check_with(engine: &Engine, rho: u32, s: i64, c2: i64, c1sq: i64) -> Result<bool> {
    let series_side = engine.segre_number(&SegreParams {
        rho,
        s: rat(s),
        c2,
        c1sq,
        n: 1,
    })?;
    let alpha = KClassInvariants {
        rank: rat(s),
        c1sq: rat(c1sq),
        c1l: rat(0),
        v2: rat(s) + frac(c1sq, 2) - rat(c2),
    };
    let m = ModuliData::new(rho, 1, alpha, rat(0), rat(0))?;
    Ok(series_side == dim2_evaluate(&m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(rho: u32, n: u32, alpha: (i64, i64, i64, i64), l_sq: i64, u: i64) -> ModuliData {
        let (r, c, l, v) = alpha;
        ModuliData::new(rho, n, KClassInvariants::from_ints(r, c, l, v), rat(l_sq), rat(u)).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let t = reduce_to_hilbert(&md(2, 3, (2, 4, 5, 3), 6, 1)).unwrap();
        assert_eq!(t.beta, KClassInvariants::from_ints(1, 4, 5, 6));
        assert_eq!(t.u_prime, rat(2));
        assert!(t.warnings.is_empty());

        let m = md(1, 4, (3, -2, 7, 5), 2, -3);
        let t = reduce_to_hilbert(&m).unwrap();
        assert_eq!(t.beta, m.alpha);
        assert_eq!(t.u_prime, m.u);

        let t = reduce_to_hilbert(&md(3, 2, (2, 0, 0, 0), 0, 0)).unwrap();
        assert_eq!(t.beta.rank, frac(2, 3));
        assert_eq!(t.warnings, vec![ReductionWarning::NonIntegralRank]);
    }

    #[test]
    fn odd_c1_square_is_flagged() {
        let t = reduce_to_hilbert(&md(1, 2, (1, 3, 0, 0), 0, 0)).unwrap();
        assert_eq!(t.warnings, vec![ReductionWarning::OddC1Square]);
    }

    #[test]
    fn invalid_data_rejected() {
        let a = KClassInvariants::zero();
        assert_eq!(
            ModuliData::new(0, 2, a.clone(), rat(0), rat(0)).unwrap_err(),
            Error::InvalidRho
        );
        assert_eq!(ModuliData::new(1, 0, a, rat(0), rat(0)).unwrap_err(), Error::InvalidN);
    }

    #[test]
    fn dependence_examples() {
        let n = 5;
        let p = dependence_pairings(&md(1, n, (1, 0, 0, 1 - n as i64), 0, 0)).unwrap();
        assert_eq!(p.v_alpha, rat(2 * n as i64 - 2));

        let p = dependence_pairings(&md(3, 2, (0, 0, 0, 0), 7, 0)).unwrap();
        assert_eq!(p.v_alpha, rat(0));
        assert_eq!(p.p_alpha, rat(0));
        assert_eq!(p.alpha_alpha, rat(0));
        assert_eq!(p.l_pairings, vec![rat(0), rat(0), rat(7)]);

        let p = dependence_pairings(&md(2, 3, (2, 4, 5, 3), 6, 1)).unwrap();
        assert_eq!(p.v_alpha, rat(-4));
        assert_eq!(p.p_alpha, rat(-1));
        assert_eq!(p.alpha_alpha, rat(-8));
        assert_eq!(p.l_pairings, vec![rat(0), rat(-5), rat(6)]);
        assert_eq!(p.u_pairings, vec![rat(-2), rat(0), rat(-2), rat(0)]);
    }

    #[test]
    fn hilbert_examples() {
        let m = md(2, 3, (2, 4, 5, 3), 6, 1);
        let t = reduce_to_hilbert(&m).unwrap();
        assert_eq!(hilbert_pairings(&t), dependence_pairings(&m).unwrap());

        let zero = ReductionTarget {
            n: 4,
            beta: KClassInvariants::zero(),
            l_sq: rat(0),
            u_prime: rat(0),
            warnings: vec![],
        };
        let p = hilbert_pairings(&zero);
        assert_eq!((p.v_alpha, p.p_alpha, p.alpha_alpha), (rat(0), rat(0), rat(0)));

        let unit = ReductionTarget {
            n: 1,
            beta: KClassInvariants::from_ints(1, 0, 0, 0),
            ..zero
        };
        let p = hilbert_pairings(&unit);
        assert_eq!((p.v_alpha, p.p_alpha, p.alpha_alpha), (rat(0), rat(-1), rat(0)));
    }

    #[test]
    fn dim2_examples() {
        assert_eq!(dim2_evaluate(&md(2, 1, (2, 0, 0, 0), 0, 0)).unwrap(), rat(1));
        for rho in 1..=4 {
            assert_eq!(dim2_evaluate(&md(rho, 1, (0, 0, 0, 0), 0, 1)).unwrap(), rat(rho as i64));
        }
        for v2 in -3..=3 {
            assert_eq!(dim2_evaluate(&md(1, 1, (1, 2, 0, v2), 0, 0)).unwrap(), rat(2 - v2));
        }
        assert_eq!(
            dim2_evaluate(&md(1, 2, (1, 0, 0, 0), 0, 0)).unwrap_err(),
            Error::DimensionMismatch { n: 2 }
        );
    }

    #[test]
    fn dim2_is_linear_in_u_and_l_square() {
        let at = |l_sq: i64, u: i64| dim2_evaluate(&md(3, 1, (4, 2, -1, 5), l_sq, u)).unwrap();
        assert_eq!(at(0, 1) - at(0, 0), rat(3));
        assert_eq!(at(0, 2) - at(0, 1), rat(3));
        assert_eq!(at(1, 0) - at(0, 0), frac(1, 2));
        assert_eq!(at(2, 0) - at(1, 0), frac(1, 2));
    }

    #[test]
    fn reduction_fixes_rank_one_targets() {
        let m = md(4, 3, (8, -6, 3, 1), 4, 2);
        let t = reduce_to_hilbert(&m).unwrap();
        let again = ModuliData::new(1, t.n, t.beta.clone(), t.l_sq.clone(), t.u_prime.clone()).unwrap();
        let t2 = reduce_to_hilbert(&again).unwrap();
        assert_eq!(t2.beta, t.beta);
        assert_eq!(t2.u_prime, t.u_prime);
    }

    #[test]
    fn cross_check_examples() {
        assert!(segre_cross_check(1, 1, 5, 0).unwrap());
        assert!(segre_cross_check(2, 2, 0, 0).unwrap());
        assert!(segre_cross_check(3, 1, 1, 2).unwrap());
    }

    #[test]
    fn json_shapes() {
        let m = md(2, 3, (2, 4, 5, 3), 6, 1);
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(json["alpha"]["c1L"], "5");
        assert_eq!(json["Lsq"], "6");
        let back: ModuliData = serde_json::from_value(json).unwrap();
        assert_eq!(back, m);

        let t = reduce_to_hilbert(&md(3, 2, (2, 0, 0, 0), 0, 1)).unwrap();
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["u_prime"], "3");
        assert_eq!(json["beta"]["rank"], "2/3");
        assert_eq!(json["warnings"][0], "non_integral_rank");
    }
}
