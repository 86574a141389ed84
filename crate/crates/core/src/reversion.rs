//! Interchangeable series-reversion algorithms, looked up by name.
//!
//! Every variable change in the crate goes through a [`Reverter`]. The
//! default is Newton iteration; the term-by-term solver is kept as a slower
//! alternative that can be selected at runtime for cross-checking.

use crate::series::{check_reversible, SeriesError, TruncatedSeries};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

pub trait Reverter: Send + Sync {
    fn name(&self) -> &'static str;

    /// Compositional inverse of `g`, with `g(0) = 0` and `g'(0) != 0`.
    fn revert(&self, g: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError>;
}

/// Quadratically convergent Newton iteration on composition.
#[derive(Debug, Default, Clone, Copy)]
pub struct Newton;

impl Reverter for Newton {
    fn name(&self) -> &'static str {
        "newton"
    }

    fn revert(&self, g: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        g.revert()
    }
}

/// Solves `[t^k] g(h(t)) = 0` for one coefficient of `h` at a time.
#[derive(Debug, Default, Clone, Copy)]
pub struct Termwise;

impl Reverter for Termwise {
    fn name(&self) -> &'static str {
        "termwise"
    }

    fn revert(&self, g: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        check_reversible(g)?;
        let order = g.order();
        let slope_inv = g.coeffs()[1].recip();
        let mut h = TruncatedSeries::monomial(slope_inv.clone(), 1, order);
        // With h_k still zero, [t^k] g(h) = (everything except g_1 h_k).
        for k in 2..=order {
            let head = h.truncate(k);
            let partial = g.truncate(k).compose(&head)?.coeff(k)?;
            let mut coeffs = h.coeffs().to_vec();
            coeffs[k] = -(partial * &slope_inv);
            h = TruncatedSeries::from_coeffs(coeffs, order);
        }
        Ok(h)
    }
}

/// Name-indexed set of reversion strategies.
#[derive(Clone, Default)]
pub struct ReverterRegistry {
    entries: BTreeMap<&'static str, Arc<dyn Reverter>>,
}

impl ReverterRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding the built-in strategies.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(Newton));
        r.register(Arc::new(Termwise));
        r
    }

    /// Adds a strategy, replacing any previous one with the same name.
    pub fn register(&mut self, reverter: Arc<dyn Reverter>) {
        self.entries.insert(reverter.name(), reverter);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Reverter>> {
        self.entries.get(name).cloned()
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

/// The process-wide registry with the built-in strategies.
pub fn builtin() -> &'static ReverterRegistry {
    static REGISTRY: OnceLock<ReverterRegistry> = OnceLock::new();
    REGISTRY.get_or_init(ReverterRegistry::with_builtins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn builtins_are_registered() {
        let names: Vec<_> = builtin().names().collect();
        assert_eq!(names, ["newton", "termwise"]);
        assert!(builtin().get("lagrange").is_none());
    }

    #[test]
    fn strategies_agree() {
        let g = TruncatedSeries::from_coeffs(vec![rat(0), rat(3), rat(-2), rat(7), rat(1)], 9);
        let a = Newton.revert(&g).unwrap();
        let b = Termwise.revert(&g).unwrap();
        assert_eq!(a, b);
        assert_eq!(g.compose(&b).unwrap(), TruncatedSeries::variable(9));
    }

    #[test]
    fn termwise_rejects_bad_input() {
        let g = TruncatedSeries::from_ints(&[1, 1], 4);
        assert_eq!(Termwise.revert(&g).unwrap_err(), SeriesError::NotReversible);
    }

    #[test]
    fn registering_replaces_by_name() {
        struct Fake;
        impl Reverter for Fake {
            fn name(&self) -> &'static str {
                "newton"
            }
            fn revert(&self, _: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
                Err(SeriesError::NotReversible)
            }
        }
        let mut r = ReverterRegistry::with_builtins();
        r.register(Arc::new(Fake));
        let g = TruncatedSeries::variable(3);
        assert!(r.get("newton").unwrap().revert(&g).is_err());
    }
}
