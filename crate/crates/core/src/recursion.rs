//! The computational heart: pull classes back along the degree-(n+1) cover
//! of Hilb(n+1) by the incidence variety, push forward to Hilb(n), integrate
//! by induction down to n = 1, and decide class vanishing by the Poincare
//! pairing against the theta-monomial spanning set.

use crate::rat::{q_str, qi, Q};
use crate::ring::{
    theta_monomials_of_degree, Gen, Monomial, RingContext, RingError, SpaceKind,
};
use crate::spaces::{abc_poly_formal, base_value, ABCKind};
use crate::ClassExpr;
use num::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("expected a class on {expected}, got one on {got}")]
    WrongSpace { expected: String, got: String },
    #[error("inhomogeneous class where a homogeneous one is required: {0}")]
    Inhomogeneous(String),
    #[error("cache integrity: key {key} already stored with value {old}, refusing {new}")]
    CacheConflict { key: String, old: String, new: String },
    #[error("localization weights degenerate for every seed tried")]
    DegenerateWeights,
    #[error("localization disagreement between weight seeds: {0} vs {1}")]
    SeedDisagreement(String, String),
    #[error("{0}")]
    Unsupported(String),
}

/// Where a cached integral came from.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Recursion,
    Oracle,
}

/// Key of one memoized integral: space parameters plus the canonical
/// monomial string, which determines the value.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntegralKey {
    pub n: u32,
    pub d: u32,
    pub mono: String,
}

#[derive(Clone, Debug)]
struct Slot {
    value: Q,
    provenance: Vec<Provenance>,
}

/// Exported form of a cache entry (used by the persistent store).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub key: IntegralKey,
    pub value: Q,
    pub provenance: Provenance,
}

/// Memoized integral store. Writes are idempotent: inserting the same value
/// twice is fine, inserting a different value for an existing key is a hard
/// integrity error.
#[derive(Default)]
pub struct IntegralCache {
    map: Mutex<HashMap<IntegralKey, Slot>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl IntegralCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, key: &IntegralKey) -> Option<Q> {
        let map = self.map.lock().unwrap();
        match map.get(key) {
            Some(slot) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(slot.value.clone())
            }
            None => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    pub fn store(&self, key: IntegralKey, value: Q, prov: Provenance) -> Result<(), EngineError> {
        let mut map = self.map.lock().unwrap();
        match map.get_mut(&key) {
            Some(slot) => {
                if slot.value != value {
                    return Err(EngineError::CacheConflict {
                        key: format!("({},{},{})", key.n, key.d, key.mono),
                        old: q_str(&slot.value),
                        new: q_str(&value),
                    });
                }
                if !slot.provenance.contains(&prov) {
                    slot.provenance.push(prov);
                    slot.provenance.sort();
                }
                Ok(())
            }
            None => {
                map.insert(
                    key,
                    Slot {
                        value,
                        provenance: vec![prov],
                    },
                );
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stats(&self) -> (u64, u64) {
        (
            self.hits.load(Ordering::Relaxed),
            self.misses.load(Ordering::Relaxed),
        )
    }

    pub fn entries(&self) -> Vec<CacheEntry> {
        let map = self.map.lock().unwrap();
        let mut out: Vec<CacheEntry> = map
            .iter()
            .flat_map(|(k, slot)| {
                slot.provenance.iter().map(move |&p| CacheEntry {
                    key: k.clone(),
                    value: slot.value.clone(),
                    provenance: p,
                })
            })
            .collect();
        out.sort_by(|a, b| {
            (a.key.n, a.key.d, &a.key.mono, a.provenance).cmp(&(
                b.key.n,
                b.key.d,
                &b.key.mono,
                b.provenance,
            ))
        });
        out
    }
}

/// Pull a class on Hilb(n+1) back to the incidence variety of level n,
/// substituting the recursion formulas for every theta and P generator and
/// expanding fully into the incidence catalog. Degree is preserved.
pub fn pullback_psi(x: &ClassExpr) -> Result<ClassExpr, EngineError> {
    let src = x.ctx;
    if src.kind != SpaceKind::Hilb || src.n < 2 {
        return Err(EngineError::WrongSpace {
            expected: "Hilb(n+1) with n >= 1".into(),
            got: format!("{:?}(n={})", src.kind, src.n),
        });
    }
    let n = src.n - 1; // target incidence level
    let d = src.dvalue();
    let tgt = RingContext::incidence(n, d)?;
    let l_plus_dh = tgt
        .gen(Gen::L)
        .add(&tgt.gen(Gen::H).scale(&qi(d as i64)));
    let h = tgt.gen(Gen::H);
    let h2 = h.pow(2);

    let subst = |g: Gen| -> ClassExpr {
        match g {
            Gen::Theta { i, j } => {
                let ii = i as i64;
                let a = abc_poly_formal(ABCKind::A, ii, &tgt);
                match j {
                    2 => tgt.theta(ii, 2).sub(&a.mul(&h2)),
                    1 => {
                        let b = abc_poly_formal(ABCKind::B, ii, &tgt);
                        tgt.theta(ii, 1).sub(&a.mul(&h)).sub(&b.mul(&h2))
                    }
                    0 => {
                        let b = abc_poly_formal(ABCKind::B, ii, &tgt);
                        let c = abc_poly_formal(ABCKind::C, ii, &tgt);
                        tgt.theta(ii, 0)
                            .sub(&a)
                            .sub(&b.mul(&h))
                            .sub(&c.mul(&h2))
                    }
                    _ => unreachable!(),
                }
            }
            Gen::P { i } => {
                let ii = i as i64;
                if i as u32 == src.n {
                    tgt.p(ii - 1).mul(&l_plus_dh)
                } else {
                    tgt.p(ii).add(&tgt.p(ii - 1).mul(&l_plus_dh))
                }
            }
            Gen::Xi => panic!("xi cannot appear on Hilb(n)"),
            other => panic!("generator {} unexpected on Hilb(n >= 2)", other),
        }
    };
    Ok(x.substitute(&tgt, subst))
}

/// Push a class on the incidence variety of level n down to Hilb(n):
/// linear over pullback coefficients, sending H^j L^i to (-1)^i th(i,j)(n).
/// Lowers degree by exactly 2.
pub fn pushforward_phi(y: &ClassExpr) -> Result<ClassExpr, EngineError> {
    let src = y.ctx;
    if src.kind != SpaceKind::Incidence {
        return Err(EngineError::WrongSpace {
            expected: "Incidence(n)".into(),
            got: format!("{:?}", src.kind),
        });
    }
    let tgt = RingContext::hilb(src.n, src.dvalue())?;
    let mut out = tgt.zero();
    for (m, c) in y.terms() {
        let (j, rest) = m.split_gen(Gen::H);
        let (i, core) = rest.split_gen(Gen::L);
        let theta = tgt.theta(i as i64, j as i64);
        if theta.is_zero_expr() {
            continue;
        }
        let coeff = if i % 2 == 1 { -c.clone() } else { c.clone() };
        // core carries the phi-pullback part verbatim down to Hilb(n).
        let core_expr = monomial_expr(&tgt, &core);
        out = out.add(&core_expr.mul(&theta).scale(&coeff));
    }
    Ok(out)
}

/// Integrate a homogeneous class of degree 2n over Hilb(n). Classes of any
/// other (pure) degree integrate to zero; mixed-degree input is rejected.
/// Computed by the incidence recursion with per-monomial memoization.
pub fn integrate(x: &ClassExpr, cache: &IntegralCache) -> Result<Q, EngineError> {
    let ctx = x.ctx;
    if ctx.kind != SpaceKind::Hilb {
        return Err(EngineError::WrongSpace {
            expected: "Hilb(n)".into(),
            got: format!("{:?}", ctx.kind),
        });
    }
    if x.is_zero_expr() {
        return Ok(Q::zero());
    }
    if !x.is_homogeneous() {
        return Err(EngineError::Inhomogeneous(x.to_string()));
    }
    if x.degree() != Some(2 * ctx.n) {
        return Ok(Q::zero());
    }
    let d = ctx.dvalue();
    let mut acc = Q::zero();
    for (m, c) in x.terms() {
        acc += c.clone() * integrate_monomial(m, ctx.n, d, cache)?;
    }
    Ok(acc)
}

fn integrate_monomial(
    m: &Monomial,
    n: u32,
    d: u32,
    cache: &IntegralCache,
) -> Result<Q, EngineError> {
    if n == 1 {
        return Ok(integrate_base(m, d));
    }
    let key = IntegralKey {
        n,
        d,
        mono: m.to_string(),
    };
    if let Some(v) = cache.lookup(&key) {
        return Ok(v);
    }
    let ctx = RingContext::hilb(n, d)?;
    let single = monomial_expr(&ctx, m);
    let pulled = pullback_psi(&single)?;
    let pushed = pushforward_phi(&pulled)?;
    let val = integrate(&pushed, cache)? / qi(n as i64);
    cache.store(key, val.clone(), Provenance::Recursion)?;
    Ok(val)
}

/// n = 1 base case: substitute the n = 1 theta/P values on the surface and
/// read off the H^2 coefficient (the fundamental integral of P^2 is 1).
fn integrate_base(m: &Monomial, d: u32) -> Q {
    let surface = RingContext::surface();
    let mut expr = surface.one();
    for &(g, e) in m.0.iter() {
        expr = expr.mul(&base_value(g, d).pow(e));
        if expr.is_zero_expr() {
            return Q::zero();
        }
    }
    expr.coefficient(&Monomial::from_gen(Gen::H, 2))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingVerdict {
    Zero,
    Nonzero,
}

/// The complementary-degree monomials and pairing integrals witnessing a
/// zero/nonzero verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingCertificate {
    pub degree: u32,
    pub monomials: Vec<String>,
    pub integrals: Vec<String>,
    pub verdict: PairingVerdict,
    /// Index of the first nonzero pairing, when the verdict is nonzero.
    pub witness: Option<usize>,
}

impl PairingCertificate {
    pub fn is_zero(&self) -> bool {
        self.verdict == PairingVerdict::Zero
    }
}

/// Decide class vanishing on Hilb(n) by pairing against every
/// theta-monomial of complementary degree. Valid by Poincare duality since
/// the theta classes generate the cohomology ring.
pub fn is_zero(x: &ClassExpr, cache: &IntegralCache) -> Result<(bool, PairingCertificate), EngineError> {
    let ctx = x.ctx;
    if ctx.kind != SpaceKind::Hilb {
        return Err(EngineError::WrongSpace {
            expected: "Hilb(n)".into(),
            got: format!("{:?}", ctx.kind),
        });
    }
    if !x.is_homogeneous() {
        return Err(EngineError::Inhomogeneous(x.to_string()));
    }
    let k = x.degree().unwrap_or(0);
    if k > 2 * ctx.n {
        // truncated to zero already; certify trivially
        return Ok((
            true,
            PairingCertificate {
                degree: k,
                monomials: vec![],
                integrals: vec![],
                verdict: PairingVerdict::Zero,
                witness: None,
            },
        ));
    }
    let monos = theta_monomials_of_degree(&ctx, 2 * ctx.n - k);
    let pairings: Result<Vec<Q>, EngineError> = monos
        .par_iter()
        .map(|m| integrate(&x.mul(&monomial_expr(&ctx, m)), cache))
        .collect();
    let pairings = pairings?;
    let witness = pairings.iter().position(|v| !v.is_zero());
    let cert = PairingCertificate {
        degree: k,
        monomials: monos.iter().map(|m| m.to_string()).collect(),
        integrals: pairings.iter().map(q_str).collect(),
        verdict: if witness.is_none() {
            PairingVerdict::Zero
        } else {
            PairingVerdict::Nonzero
        },
        witness,
    };
    Ok((witness.is_none(), cert))
}

/// Pairing vector of a class of degree k against the theta-monomials of
/// complementary degree; equal vectors mean equal classes. This is the
/// coordinate system the filtration solver works in.
pub fn pairing_vector(x: &ClassExpr, cache: &IntegralCache) -> Result<Vec<Q>, EngineError> {
    let ctx = x.ctx;
    let k = match x.degree() {
        Some(k) => k,
        None if x.is_zero_expr() => {
            return Ok(vec![]);
        }
        None => return Err(EngineError::Inhomogeneous(x.to_string())),
    };
    if k > 2 * ctx.n {
        return Ok(vec![]);
    }
    let monos = theta_monomials_of_degree(&ctx, 2 * ctx.n - k);
    monos
        .par_iter()
        .map(|m| integrate(&x.mul(&monomial_expr(&ctx, m)), cache))
        .collect()
}

/// Exact rank of the Gram matrix pairing degree-k monomials against
/// degree-(2n-k) monomials. Equals the 2k-th Betti number when the pairing
/// is nondegenerate on the monomial spanning sets.
pub fn pair_rank(n: u32, d: u32, k: u32, cache: &IntegralCache) -> Result<usize, EngineError> {
    let ctx = RingContext::hilb(n, d)?;
    if k > 2 * n {
        return Ok(0);
    }
    let rows_m = theta_monomials_of_degree(&ctx, k);
    let cols_m = theta_monomials_of_degree(&ctx, 2 * n - k);
    let gram: Result<Vec<Vec<Q>>, EngineError> = rows_m
        .par_iter()
        .map(|rm| {
            let rexpr = monomial_expr(&ctx, rm);
            cols_m
                .iter()
                .map(|cm| integrate(&rexpr.mul(&monomial_expr(&ctx, cm)), cache))
                .collect()
        })
        .collect();
    Ok(crate::linalg::rank(gram?))
}

/// Convenience: build a one-term expression from a monomial.
pub fn monomial_expr(ctx: &RingContext, m: &Monomial) -> ClassExpr {
    m.0.iter()
        .fold(ctx.one(), |acc, &(g, e)| acc.mul(&ctx.gen(g).pow(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qr;

    #[test]
    fn base_integration() {
        let cache = IntegralCache::new();
        let ctx = RingContext::hilb(1, 3).unwrap();
        // int_S th(2,1) P(1) = int_S (-H)(3H) = -3
        let x = ctx.theta(2, 1).mul(&ctx.gen(Gen::P { i: 1 }));
        assert_eq!(integrate(&x, &cache).unwrap(), qi(-3));
        // int_S th(2,2) = -1
        assert_eq!(integrate(&ctx.theta(2, 2), &cache).unwrap(), qi(-1));
        // wrong degree integrates to zero
        assert_eq!(integrate(&ctx.theta(2, 1), &cache).unwrap(), qi(0));
        // mixed degree rejected
        let mixed = ctx.theta(2, 1).add(&ctx.theta(2, 2));
        assert!(integrate(&mixed, &cache).is_err());
    }

    #[test]
    fn pullback_small_cases() {
        let h3 = RingContext::hilb(3, 3).unwrap();
        let inc2 = RingContext::incidence(2, 3).unwrap();
        // th(2,2)(3) -> th(2,2)(2) - H^2 (A_2 = 1)
        let pulled = pullback_psi(&h3.theta(2, 2)).unwrap();
        let expect = inc2.theta(2, 2).sub(&inc2.gen(Gen::H).pow(2));
        assert_eq!(pulled, expect);
        // th(3,0)(3) -> th(3,0)(2) + 2L - 3H
        let pulled = pullback_psi(&h3.theta(3, 0)).unwrap();
        let expect = inc2
            .theta(3, 0)
            .add(&inc2.gen(Gen::L).scale(&qi(2)))
            .sub(&inc2.gen(Gen::H).scale(&qi(3)));
        assert_eq!(pulled, expect);
        // P(3) -> P(2)(L + 3H)
        let pulled = pullback_psi(&h3.p(3)).unwrap();
        let expect = inc2
            .p(2)
            .mul(&inc2.gen(Gen::L).add(&inc2.gen(Gen::H).scale(&qi(3))));
        assert_eq!(pulled, expect);
        // xi rejected / wrong space rejected
        let pl = RingContext::hilb_times_linsys(2, 3).unwrap();
        assert!(pullback_psi(&pl.gen(Gen::Xi)).is_err());
    }

    #[test]
    fn pullback_is_ring_homomorphism() {
        let h3 = RingContext::hilb(3, 4).unwrap();
        let x = h3.theta(2, 1).add(&h3.p(1));
        let y = h3.theta(3, 0).sub(&h3.theta(2, 2));
        let lhs = pullback_psi(&x.mul(&y)).unwrap();
        let rhs = pullback_psi(&x).unwrap().mul(&pullback_psi(&y).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pushforward_base_rules() {
        let inc = RingContext::incidence(2, 3).unwrap();
        let h2c = RingContext::hilb(2, 3).unwrap();
        let h = inc.gen(Gen::H);
        // H^2 -> th(0,2) = 1
        assert_eq!(pushforward_phi(&h.pow(2)).unwrap(), h2c.one());
        // H -> 0, 1 -> 0
        assert!(pushforward_phi(&h).unwrap().is_zero_expr());
        assert!(pushforward_phi(&inc.one()).unwrap().is_zero_expr());
        // L*H^j -> -th(1,j) = 0
        let l = inc.gen(Gen::L);
        assert!(pushforward_phi(&l.mul(&h)).unwrap().is_zero_expr());
        // phi^*(th(2,1)) * H * L^2 -> th(2,1)*th(2,1)
        let y = inc.theta(2, 1).mul(&h).mul(&l.pow(2));
        assert_eq!(
            pushforward_phi(&y).unwrap(),
            h2c.theta(2, 1).mul(&h2c.theta(2, 1))
        );
        // degree drops by 2
        let y = inc.theta(2, 1).mul(&h.pow(2)).mul(&l.pow(2));
        let down = pushforward_phi(&y).unwrap();
        assert_eq!(down, h2c.theta(2, 1).mul(&h2c.theta(2, 2)));
        assert_eq!(down.degree(), Some(y.degree().unwrap() - 2));
    }

    #[test]
    fn lemma_inp13_small() {
        let cache = IntegralCache::new();
        // int th(2,1)^n P(n) = (-1)^n d^n
        for (n, d, want) in [(1u32, 3u32, -3i64), (2, 3, 9), (2, 4, 16), (3, 3, -27)] {
            let ctx = RingContext::hilb(n, d).unwrap();
            let x = ctx.theta(2, 1).pow(n).mul(&ctx.p(n as i64));
            assert_eq!(integrate(&x, &cache).unwrap(), qi(want), "n={} d={}", n, d);
        }
    }

    #[test]
    fn theta20_is_minus_n() {
        let cache = IntegralCache::new();
        for n in 2..=3u32 {
            let ctx = RingContext::hilb(n, 3).unwrap();
            let x = ctx.theta(2, 0).add(&ctx.scalar(qi(n as i64)));
            let (zero, cert) = is_zero(&x, &cache).unwrap();
            assert!(zero, "th(2,0)({}) = -{} failed: {:?}", n, n, cert.witness);
        }
    }

    #[test]
    fn memoization_hits() {
        let cache = IntegralCache::new();
        let ctx = RingContext::hilb(2, 3).unwrap();
        let x = ctx.theta(2, 1).pow(2).mul(&ctx.p(2));
        integrate(&x, &cache).unwrap();
        let before = cache.stats().0;
        integrate(&x, &cache).unwrap();
        assert!(cache.stats().0 > before);
        assert_eq!(integrate(&x, &cache).unwrap(), qi(9));
    }

    #[test]
    fn concurrent_idempotent_writes() {
        let cache = IntegralCache::new();
        let ctx = RingContext::hilb(2, 3).unwrap();
        let x = ctx.theta(2, 1).pow(2).mul(&ctx.p(2));
        let values: Vec<Q> = (0..32)
            .into_par_iter()
            .map(|_| integrate(&x, &cache).unwrap())
            .collect();
        assert!(values.iter().all(|v| *v == qi(9)));
    }

    #[test]
    fn cache_conflict_detected() {
        let cache = IntegralCache::new();
        let key = IntegralKey {
            n: 2,
            d: 3,
            mono: "th(2,1)^2*P(2)".into(),
        };
        cache.store(key.clone(), qi(9), Provenance::Recursion).unwrap();
        cache.store(key.clone(), qi(9), Provenance::Oracle).unwrap();
        assert!(cache.store(key, qr(1, 2), Provenance::Oracle).is_err());
    }
}
