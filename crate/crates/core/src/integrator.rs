//! The two integration backends behind one trait, selected by name at
//! runtime. The incidence recursion is the primary engine; torus
//! localization is the independent oracle. Both must agree wherever both
//! apply, and the cache records which backend produced each value.

use crate::bott::oracle_integrate;
use crate::rat::Q;
use crate::recursion::{integrate, EngineError, IntegralCache, IntegralKey, Provenance};
use crate::ClassExpr;

pub trait Integrator: Sync + Send {
    fn name(&self) -> &'static str;
    fn provenance(&self) -> Provenance;
    fn integrate(&self, x: &ClassExpr, cache: &IntegralCache) -> Result<Q, EngineError>;
}

/// Reduction along the incidence variety down to n = 1.
pub struct RecursionIntegrator;

impl Integrator for RecursionIntegrator {
    fn name(&self) -> &'static str {
        "recursion"
    }
    fn provenance(&self) -> Provenance {
        Provenance::Recursion
    }
    fn integrate(&self, x: &ClassExpr, cache: &IntegralCache) -> Result<Q, EngineError> {
        integrate(x, cache)
    }
}

/// Bott residue sums over monomial-ideal fixed points.
pub struct LocalizationIntegrator;

impl Integrator for LocalizationIntegrator {
    fn name(&self) -> &'static str {
        "bott"
    }
    fn provenance(&self) -> Provenance {
        Provenance::Oracle
    }
    fn integrate(&self, x: &ClassExpr, cache: &IntegralCache) -> Result<Q, EngineError> {
        let value = oracle_integrate(x)?;
        // Record monomial integrals so cross-backend agreement is enforced
        // by the cache integrity check.
        if x.num_terms() == 1 {
            if let Some((m, c)) = x.terms().next() {
                if c == &crate::rat::qi(1) && x.degree() == Some(2 * x.ctx.n) {
                    cache.store(
                        IntegralKey {
                            n: x.ctx.n,
                            d: x.ctx.dvalue(),
                            mono: m.to_string(),
                        },
                        value.clone(),
                        Provenance::Oracle,
                    )?;
                }
            }
        }
        Ok(value)
    }
}

/// All registered backends.
pub fn registry() -> Vec<Box<dyn Integrator>> {
    vec![Box::new(RecursionIntegrator), Box::new(LocalizationIntegrator)]
}

/// Look a backend up by its registered name.
pub fn lookup(name: &str) -> Option<Box<dyn Integrator>> {
    registry().into_iter().find(|b| b.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;
    use crate::ring::RingContext;

    #[test]
    fn backends_by_name_agree() {
        let cache = IntegralCache::new();
        let ctx = RingContext::hilb(2, 3).unwrap();
        let x = ctx.theta(2, 1).pow(2).mul(&ctx.p(2));
        let a = lookup("recursion")
            .unwrap()
            .integrate(&x, &cache)
            .unwrap();
        let b = lookup("bott").unwrap().integrate(&x, &cache).unwrap();
        assert_eq!(a, qi(9));
        assert_eq!(a, b);
        assert!(lookup("unknown").is_none());
    }
}
