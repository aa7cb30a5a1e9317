//! The ring A*(Hilb(n) x |dH|): the xi-homogenized tautological class
//! P(xi), the gamma generators obtained from the twisted Chern character of
//! the universal ideal sheaf, the exponential twist transformation, and
//! spanning sets of the subring they generate.

use crate::rat::{factorial, qi, Q};
use crate::ring::{Gen, RingContext, SpaceKind};
use crate::spaces::{chern_character_sigma, reduce_scalar_theta};
use crate::ClassExpr;
use num::{One, Zero};

/// Index pair of one gamma generator; the class lives in degree k + j - 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GammaSymbol {
    pub k: i64,
    pub j: i64,
}

impl GammaSymbol {
    pub fn degree(&self) -> i64 {
        self.k + self.j - 1
    }

    pub fn label(&self) -> String {
        format!("gamma({},{})", self.k, self.j)
    }

    pub fn class(&self, n: u32, d: u32) -> ClassExpr {
        gamma_class(self.k, self.j, n, d)
    }
}

/// P(xi) = P(n) + P(n-1) xi + ... + P(1) xi^(n-1) + xi^n, homogeneous of
/// degree n on Hilb(n) x |dH|.
pub fn p_xi(n: u32, d: u32) -> ClassExpr {
    let ctx = RingContext::hilb_times_linsys(n, d).unwrap();
    let xi = ctx.gen(Gen::Xi);
    let mut acc = ctx.zero();
    for i in 0..=n as i64 {
        acc = acc.add(&ctx.p(i).mul(&xi.pow(n - i as u32)));
    }
    acc
}

/// exp(x) truncated at total degree `cap` (x must have positive degrees).
fn exp_truncated(x: &ClassExpr, cap: u32) -> ClassExpr {
    let ctx = x.ctx;
    let mut acc = ctx.one();
    let mut power = ctx.one();
    for t in 1..=cap {
        power = power.mul(x);
        if power.is_zero_expr() {
            break;
        }
        acc = acc.add(&power.scale(&(Q::one() / factorial(t))));
    }
    acc
}

/// Transport a class on Hilb(n) x S with no surface factor left (pure theta
/// polynomial) into the Hilb(n) x |dH| ring.
fn to_linsys(x: &ClassExpr, tgt: &RingContext) -> ClassExpr {
    x.substitute(tgt, |g| match g {
        Gen::Theta { i, j } => tgt.theta(i as i64, j as i64),
        Gen::H => panic!("surface factor survived the Kuenneth extraction"),
        other => panic!("unexpected generator {}", other),
    })
}

/// The H^(2-j) Kuenneth component of (ch(ideal sheaf) * exp((1/d)H_(n) + (d+a) q*H))_s
/// transported to Hilb(n) x |dH|. H_(n) = -th(2,1)(n).
fn twisted_ch_component(s: i64, j: i64, a: &Q, n: u32, d: u32, tgt: &RingContext) -> ClassExpr {
    if s < 0 {
        return tgt.zero();
    }
    let hs = RingContext::hilb_times_surface(n).unwrap();
    let h = hs.gen(Gen::H);
    let h_n = hs.theta(2, 1).neg();
    let beta = h_n
        .scale(&(Q::one() / qi(d as i64)))
        .add(&h.scale(&(qi(d as i64) + a.clone())));
    // ch(I_n) = 1 - sum_k ch_k(O_Sigma)
    let mut ch_ideal = hs.one();
    for k in 2..=(s as u32).min(2 * n + 4) as i64 {
        ch_ideal = ch_ideal.sub(&chern_character_sigma(k, n));
    }
    let integrand = ch_ideal.mul(&exp_truncated(&beta, s as u32 + 2));
    let part = integrand.homogeneous_part(s as u32);
    let component = part.coefficient_of(Gen::H, (2 - j) as u32);
    to_linsys(&component, tgt)
}

/// gamma_k(j) with the integrand twisted by exp(a q*H + b xi); (a, b) = (0, 0)
/// is the plain gamma class. The closed forms of the untwisted classes are
/// reproduced exactly (with the th(2,0) = -n reduction applied, as printed).
pub fn gamma_twist(k: i64, j: i64, a: &Q, b: &Q, n: u32, d: u32) -> ClassExpr {
    let tgt = RingContext::hilb_times_linsys(n, d).unwrap();
    assert!((0..=2).contains(&j), "j must be 0, 1 or 2");
    assert!(k >= 0, "k must be >= 0");
    let xi = tgt.gen(Gen::Xi);
    // exp(b xi) factored out of the surface-factor computation.
    let mut acc = tgt.zero();
    for t in 0..=(k + 1) {
        let comp = twisted_ch_component(k + 1 - t, j, a, n, d, &tgt);
        if comp.is_zero_expr() {
            continue;
        }
        let coef = num::pow::Pow::pow(b.clone(), t as usize) / factorial(t as u32);
        acc = acc.add(&comp.mul(&xi.pow(t as u32)).scale(&coef));
    }
    // delta-correction: the H^(2-j) component of
    // exp((1/d)H_(n) + a q*H + (b-1) xi), i.e. a^(2-j)/(2-j)! times the
    // degree k+j-1 part of exp((1/d)H_(n) + (b-1) xi).
    let corr_deg = k + j - 1;
    if corr_deg >= 0 {
        let h_n = tgt.theta(2, 1).neg();
        let arg = h_n
            .scale(&(Q::one() / qi(d as i64)))
            .add(&xi.scale(&(b.clone() - Q::one())));
        let e = exp_truncated(&arg, corr_deg as u32);
        let scale = num::pow::Pow::pow(a.clone(), (2 - j) as usize) / factorial((2 - j) as u32);
        acc = acc.sub(&e.homogeneous_part(corr_deg as u32).scale(&scale));
    }
    reduce_scalar_theta(&acc)
}

/// The tautological class gamma_k(j) on Hilb(n) x |dH|.
pub fn gamma_class(k: i64, j: i64, n: u32, d: u32) -> ClassExpr {
    gamma_twist(k, j, &Q::zero(), &Q::zero(), n, d)
}

/// The twist transformation through its closed recombination formulas
/// (an independent route used to cross-check `gamma_twist`):
///
///   g'_k(2) = g_k(2) + sum_{i>=1} b^i/i! xi^i g_{k-i}(2)
///   g'_k(1) = g_k(1) + sum b^i/i! xi^i g_{k-i}(1) + sum a b^(i-1)/(i-1)! xi^(i-1) g_{k-i}(2)
///   g'_k(0) = g_k(0) + sum b^i/i! xi^i g_{k-i}(0) + sum a b^(i-1)/(i-1)! xi^(i-1) g_{k-i}(1)
///             + sum_{i>=2} a^2 b^(i-2)/(2 (i-2)!) xi^(i-2) g_{k-i}(2)
pub fn comal_twist(k: i64, j: i64, a: &Q, b: &Q, n: u32, d: u32) -> ClassExpr {
    let tgt = RingContext::hilb_times_linsys(n, d).unwrap();
    let xi = tgt.gen(Gen::Xi);
    let g = |kk: i64, jj: i64| -> ClassExpr {
        if kk < 0 {
            tgt.zero()
        } else {
            gamma_class(kk, jj, n, d)
        }
    };
    let mut acc = g(k, j);
    for i in 1..=k {
        let bi = num::pow::Pow::pow(b.clone(), i as usize);
        let t1 = g(k - i, j)
            .mul(&xi.pow(i as u32))
            .scale(&(bi.clone() / factorial(i as u32)));
        acc = acc.add(&t1);
        if j <= 1 {
            let c = a.clone() * num::pow::Pow::pow(b.clone(), (i - 1) as usize)
                / factorial((i - 1) as u32);
            let t2 = g(k - i, j + 1).mul(&xi.pow((i - 1) as u32)).scale(&c);
            acc = acc.add(&t2);
        }
        if j == 0 && i >= 2 {
            let c = a.clone() * a.clone() * num::pow::Pow::pow(b.clone(), (i - 2) as usize)
                / (qi(2) * factorial((i - 2) as u32));
            let t3 = g(k - i, 2).mul(&xi.pow((i - 2) as u32)).scale(&c);
            acc = acc.add(&t3);
        }
    }
    acc
}

/// The gamma generators of positive degree with k <= k_cap, with their
/// canonical labels; formally-zero generators are dropped.
pub fn gamma_generators(n: u32, d: u32, k_cap: u32) -> Vec<(String, ClassExpr)> {
    let mut out = Vec::new();
    for k in 0..=k_cap as i64 {
        for j in 0..=2i64 {
            let sym = GammaSymbol { k, j };
            if sym.degree() < 1 {
                continue;
            }
            let g = sym.class(n, d);
            if !g.is_zero_expr() {
                out.push((sym.label(), g));
            }
        }
    }
    out
}

/// All monomials in the gamma generators (k-indices <= k_cap) of total
/// degree m/2, as labelled classes. This is the spanning set of the
/// degree-m piece of the subring the gamma classes generate.
pub fn gamma_span(m: u32, n: u32, d: u32, k_cap: u32) -> Vec<(String, ClassExpr)> {
    assert!(m % 2 == 0, "cohomological degree must be even");
    let half = m / 2;
    let gens = gamma_generators(n, d, k_cap);
    let ctx = RingContext::hilb_times_linsys(n, d).unwrap();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u32, Vec<(usize, u32)>)> = vec![(0, half, Vec::new())];
    while let Some((idx, rem, chosen)) = stack.pop() {
        if rem == 0 {
            let mut label = String::new();
            let mut expr = ctx.one();
            for &(gi, e) in &chosen {
                if !label.is_empty() {
                    label.push('*');
                }
                if e == 1 {
                    label.push_str(&gens[gi].0);
                } else {
                    label.push_str(&format!("{}^{}", gens[gi].0, e));
                }
                expr = expr.mul(&gens[gi].1.pow(e));
            }
            if chosen.is_empty() {
                label.push('1');
            }
            out.push((label, expr));
            continue;
        }
        if idx >= gens.len() {
            continue;
        }
        let gd = gens[idx].1.degree().unwrap_or(0).max(1);
        for e in 0..=(rem / gd) {
            let mut c = chosen.clone();
            if e > 0 {
                c.push((idx, e));
            }
            stack.push((idx + 1, rem - e * gd, c));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// gamma expressed on Hilb(n) when it has no xi part (used by the
/// structural sub-claims of the flagship theorem).
pub fn gamma_on_hilb(x: &ClassExpr, d: u32) -> Result<ClassExpr, crate::recursion::EngineError> {
    assert_eq!(x.ctx.kind, SpaceKind::HilbTimesLinSys);
    let tgt = RingContext::hilb(x.ctx.n, d)?;
    let mut bad = false;
    for (m, _) in x.terms() {
        if m.exponent(Gen::Xi) > 0 {
            bad = true;
        }
    }
    if bad {
        return Err(crate::recursion::EngineError::Unsupported(
            "class has xi-terms; it does not descend to Hilb(n)".into(),
        ));
    }
    Ok(x.substitute(&tgt, |g| match g {
        Gen::Theta { i, j } => tgt.theta(i as i64, j as i64),
        Gen::P { i } => tgt.p(i as i64),
        other => panic!("unexpected generator {}", other),
    }))
}

/// Pull a class on Hilb(n) back to Hilb(n) x |dH| along the projection.
pub fn lift_to_linsys(x: &ClassExpr, d: u32) -> ClassExpr {
    assert_eq!(x.ctx.kind, SpaceKind::Hilb);
    let tgt = RingContext::hilb_times_linsys(x.ctx.n, d).unwrap();
    x.substitute(&tgt, |g| match g {
        Gen::Theta { i, j } => tgt.theta(i as i64, j as i64),
        Gen::P { i } => tgt.p(i as i64),
        other => panic!("generator {} does not lift to the product", other),
    })
}

/// Decompose a class on Hilb(n) x |dH| into its xi-graded components:
/// x = sum_e xi^e * (component_e pulled back from Hilb(n)).
pub fn xi_components(x: &ClassExpr, d: u32) -> Vec<ClassExpr> {
    let b = x.ctx.b();
    let hilb = RingContext::hilb(x.ctx.n, d).unwrap();
    let mut out = Vec::with_capacity(b as usize + 1);
    for e in 0..=b {
        let comp = x.coefficient_of(Gen::Xi, e);
        out.push(comp.substitute(&hilb, |g| match g {
            Gen::Theta { i, j } => hilb.theta(i as i64, j as i64),
            Gen::P { i } => hilb.p(i as i64),
            other => panic!("unexpected generator {} in xi-component", other),
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qr;

    #[test]
    fn p_xi_shape() {
        let x = p_xi(2, 3);
        assert_eq!(x.degree(), Some(2));
        let ctx = x.ctx;
        let xi = ctx.gen(Gen::Xi);
        let expect = ctx
            .p(2)
            .add(&ctx.p(1).mul(&xi))
            .add(&xi.pow(2));
        assert_eq!(x, expect);
        assert_eq!(p_xi(1, 4).degree(), Some(1));
    }

    #[test]
    fn exfga_closed_forms_n2_d3() {
        let (n, d) = (2u32, 3u32);
        let ctx = RingContext::hilb_times_linsys(n, d).unwrap();
        let xi = ctx.gen(Gen::Xi);
        let dd = qi(d as i64);
        assert!(gamma_class(0, 0, n, d).is_zero_expr());
        assert_eq!(gamma_class(0, 1, n, d), ctx.scalar(dd.clone()));
        assert_eq!(gamma_class(0, 2, n, d), xi);
        assert_eq!(
            gamma_class(1, 0, n, d),
            ctx.scalar(dd.clone() * dd.clone() / qi(2) - qi(n as i64))
        );
        assert!(gamma_class(1, 1, n, d).is_zero_expr());
        let g12 = ctx
            .theta(2, 2)
            .sub(&ctx.theta(2, 1).mul(&xi).scale(&(Q::one() / dd.clone())))
            .sub(&xi.pow(2).scale(&qr(1, 2)));
        assert_eq!(gamma_class(1, 2, n, d), g12);
        let g20 = ctx
            .theta(2, 1)
            .scale(&((dd.clone() + qi(2 * n as i64) / dd.clone()) / qi(2)))
            .sub(&ctx.theta(3, 0).scale(&qr(1, 2)));
        assert_eq!(gamma_class(2, 0, n, d), g20);
        let g21 = ctx
            .theta(2, 1)
            .pow(2)
            .scale(&(Q::one() / dd.clone()))
            .add(&ctx.theta(3, 1))
            .sub(&ctx.theta(2, 2).scale(&(qi(2) * dd.clone())))
            .scale(&qr(-1, 2));
        assert_eq!(gamma_class(2, 1, n, d), g21);
        let g30 = ctx
            .theta(4, 0)
            .add(&ctx.theta(2, 1).mul(&ctx.theta(3, 0)).scale(&(qi(3) / dd.clone())))
            .sub(
                &ctx.theta(2, 1)
                    .pow(2)
                    .scale(&(qi(3 * n as i64) / (dd.clone() * dd.clone()) + qi(2))),
            )
            .scale(&qr(1, 6))
            .add(&g21.scale(&dd.clone()))
            .add(&ctx.theta(2, 2).scale(&(qi(n as i64) / qi(6) - dd.clone() * dd.clone() / qi(2))));
        assert_eq!(gamma_class(3, 0, n, d), g30);
    }

    #[test]
    fn gamma_degrees() {
        for (k, j) in [(0i64, 2i64), (1, 2), (2, 1), (2, 0), (3, 0)] {
            let g = gamma_class(k, j, 2, 3);
            if !g.is_zero_expr() {
                assert_eq!(g.degree(), Some((k + j - 1) as u32), "gamma({},{})", k, j);
            }
        }
    }

    #[test]
    fn twist_examples() {
        let (n, d) = (2u32, 3u32);
        let ctx = RingContext::hilb_times_linsys(n, d).unwrap();
        let xi = ctx.gen(Gen::Xi);
        for (a, b) in [(qi(1), qi(0)), (qi(0), qi(1)), (qi(2), qi(-3))] {
            for j in 0..=2 {
                assert_eq!(
                    gamma_twist(0, j, &a, &b, n, d),
                    gamma_class(0, j, n, d),
                    "gamma'_0({}) with a={} b={}",
                    j,
                    a,
                    b
                );
            }
            let want = xi.scale(&(b.clone() * qi(d as i64) + a.clone()));
            assert_eq!(gamma_twist(1, 1, &a, &b, n, d), want);
        }
        // identity twist
        assert_eq!(
            gamma_twist(2, 1, &Q::zero(), &Q::zero(), 2, 3),
            gamma_class(2, 1, 2, 3)
        );
    }

    #[test]
    fn twist_matches_closed_recombination() {
        let (n, d) = (2u32, 3u32);
        let (a, b) = (qi(2), qi(-1));
        for k in 0..=3i64 {
            for j in 0..=2i64 {
                assert_eq!(
                    gamma_twist(k, j, &a, &b, n, d),
                    comal_twist(k, j, &a, &b, n, d),
                    "k={} j={}",
                    k,
                    j
                );
            }
        }
    }

    #[test]
    fn twist_composition_is_additive() {
        let (n, d) = (2u32, 4u32);
        let (a1, b1) = (qi(1), qr(1, 2));
        let (a2, b2) = (qi(-2), qi(1));
        // Twisting the integrand twice multiplies the exponentials, so the
        // one-shot twist by the summed parameters must agree with the closed
        // recombination applied to the once-twisted family.
        for k in 0..=2i64 {
            for j in 0..=2i64 {
                let direct = gamma_twist(k, j, &(a1.clone() + a2.clone()), &(b1.clone() + b2.clone()), n, d);
                // recombine with (a2, b2) over the (a1, b1)-twisted family
                let tgt = RingContext::hilb_times_linsys(n, d).unwrap();
                let xi = tgt.gen(Gen::Xi);
                let g = |kk: i64, jj: i64| -> ClassExpr {
                    if kk < 0 {
                        tgt.zero()
                    } else {
                        gamma_twist(kk, jj, &a1, &b1, n, d)
                    }
                };
                let mut acc = g(k, j);
                for i in 1..=k {
                    let bi = num::pow::Pow::pow(b2.clone(), i as usize);
                    acc = acc.add(
                        &g(k - i, j)
                            .mul(&xi.pow(i as u32))
                            .scale(&(bi / factorial(i as u32))),
                    );
                    if j <= 1 {
                        let c = a2.clone() * num::pow::Pow::pow(b2.clone(), (i - 1) as usize)
                            / factorial((i - 1) as u32);
                        acc = acc.add(&g(k - i, j + 1).mul(&xi.pow((i - 1) as u32)).scale(&c));
                    }
                    if j == 0 && i >= 2 {
                        let c = a2.clone() * a2.clone()
                            * num::pow::Pow::pow(b2.clone(), (i - 2) as usize)
                            / (qi(2) * factorial((i - 2) as u32));
                        acc = acc.add(&g(k - i, 2).mul(&xi.pow((i - 2) as u32)).scale(&c));
                    }
                }
                assert_eq!(direct, acc, "k={} j={}", k, j);
            }
        }
    }

    #[test]
    fn symbols_know_their_degree() {
        let s = GammaSymbol { k: 3, j: 0 };
        assert_eq!(s.degree(), 2);
        assert_eq!(s.label(), "gamma(3,0)");
        assert_eq!(s.class(2, 3), gamma_class(3, 0, 2, 3));
        assert_eq!(GammaSymbol { k: 0, j: 2 }.degree(), 1);
        assert_eq!(GammaSymbol { k: 1, j: 1 }.degree(), 1); // the zero class
        assert_eq!(GammaSymbol { k: 0, j: 1 }.degree(), 0); // a scalar
    }

    #[test]
    fn span_degree_one_and_zero() {
        let span = gamma_span(2, 2, 3, 6);
        let labels: Vec<&str> = span.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, vec!["gamma(0,2)", "gamma(2,0)"]);
        let span0 = gamma_span(0, 2, 3, 6);
        assert_eq!(span0.len(), 1);
        assert_eq!(span0[0].0, "1");
        // degree-2 spanning set
        let span4 = gamma_span(4, 2, 3, 6);
        let labels: Vec<&str> = span4.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(
            labels,
            vec![
                "gamma(0,2)*gamma(2,0)",
                "gamma(0,2)^2",
                "gamma(1,2)",
                "gamma(2,0)^2",
                "gamma(2,1)",
                "gamma(3,0)"
            ]
        );
    }
}
