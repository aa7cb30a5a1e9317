//! The named verification suites behind `verify <lemma-id>`: one strategy
//! object per suite, registered by id and dispatched at runtime.

use crate::report::Report;
use num::Zero;
use tautring::gamma::{comal_twist, gamma_class, gamma_twist};
use tautring::perversity::{a_class, default_k_cap, gamma20_on_hilb, verify_theorem_main3};
use tautring::rat::{qi, qr, Q};
use tautring::recursion::{
    integrate, is_zero, pushforward_phi, IntegralCache, PairingCertificate,
};
use tautring::ring::{Gen, RingContext};
use tautring::spaces::minus_l_pow;
use tautring::ClassExpr;

#[derive(Clone, Copy, Debug)]
pub struct SuiteParams {
    pub n: u32,
    pub d: u32,
    pub k_cap: Option<u32>,
    pub i_lo: i64,
    pub i_hi: i64,
    pub j_lo: i64,
    pub j_hi: i64,
}

impl SuiteParams {
    pub fn new(n: u32, d: u32) -> Self {
        SuiteParams {
            n,
            d,
            k_cap: None,
            i_lo: 2,
            i_hi: 3,
            j_lo: 2,
            j_hi: 3,
        }
    }
}

pub trait LemmaSuite: Sync {
    fn id(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn run(&self, p: &SuiteParams, cache: &IntegralCache, report: &mut Report) -> anyhow::Result<()>;
}

fn witness_line(cert: &PairingCertificate) -> String {
    match cert.witness {
        Some(w) => format!(
            "nonzero: pairing against {} = {}",
            cert.monomials[w], cert.integrals[w]
        ),
        None => format!("all {} pairings vanish", cert.monomials.len()),
    }
}

fn check_zero(
    report: &mut Report,
    cache: &IntegralCache,
    id: String,
    x: &ClassExpr,
) -> anyhow::Result<()> {
    let (z, cert) = is_zero(x, cache).map_err(|e| anyhow::anyhow!("{}", e))?;
    report.verdict(id, z, witness_line(&cert));
    Ok(())
}

fn check_nonzero(
    report: &mut Report,
    cache: &IntegralCache,
    id: String,
    x: &ClassExpr,
) -> anyhow::Result<()> {
    let (z, cert) = is_zero(x, cache).map_err(|e| anyhow::anyhow!("{}", e))?;
    report.verdict(id, !z, witness_line(&cert));
    Ok(())
}

struct Pnt2;
impl LemmaSuite for Pnt2 {
    fn id(&self) -> &'static str {
        "pnt2"
    }
    fn describe(&self) -> &'static str {
        "th(i,2)P(n) = 0 and its two lower companions, all catalog i"
    }
    fn run(&self, p: &SuiteParams, cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let ctx = RingContext::hilb(p.n, p.d)?;
        let nn = p.n as i64;
        let dd = qi(p.d as i64);
        for i in 2..=(2 * nn + 2) {
            let one = ctx.theta(i, 2).mul(&ctx.p(nn));
            check_zero(r, cache, format!("pnt2.1[i={}]", i), &one)?;
            let two = ctx
                .theta(i, 2)
                .mul(&ctx.p(nn - 1))
                .sub(&ctx.theta(i, 1).mul(&ctx.p(nn)).scale(&(Q::from(qi(1)) / dd.clone())));
            check_zero(r, cache, format!("pnt2.2[i={}]", i), &two)?;
            let three = ctx
                .theta(i, 2)
                .mul(&ctx.p(nn - 2))
                .sub(&ctx.theta(i, 1).mul(&ctx.p(nn - 1)).scale(&(qi(1) / dd.clone())))
                .add(
                    &ctx.theta(i, 0)
                        .mul(&ctx.p(nn))
                        .scale(&(qi(1) / (dd.clone() * dd.clone()))),
                );
            check_zero(r, cache, format!("pnt2.3[i={}]", i), &three)?;
        }
        Ok(())
    }
}

struct Inp13;
impl LemmaSuite for Inp13 {
    fn id(&self) -> &'static str {
        "inp13"
    }
    fn describe(&self) -> &'static str {
        "the closed-form integral (-1)^n d^n and its companion vanishing"
    }
    fn run(&self, p: &SuiteParams, cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let ctx = RingContext::hilb(p.n, p.d)?;
        let nn = p.n as i64;
        let x = ctx.theta(2, 1).pow(p.n).mul(&ctx.p(nn));
        let got = integrate(&x, cache).map_err(|e| anyhow::anyhow!("{}", e))?;
        let want = if p.n % 2 == 0 {
            qi((p.d as i64).pow(p.n))
        } else {
            -qi((p.d as i64).pow(p.n))
        };
        r.verdict(
            "inp13.1",
            got == want,
            format!("integral = {} (expected {})", got, want),
        );
        let coeff = qi(2 * (nn - 1)) / qi(p.d as i64) + qi(3);
        let y = ctx
            .theta(3, 0)
            .sub(&ctx.theta(2, 1).scale(&coeff))
            .mul(&ctx.theta(2, 1).pow(p.n - 1))
            .mul(&ctx.p(nn));
        let got2 = integrate(&y, cache).map_err(|e| anyhow::anyhow!("{}", e))?;
        r.verdict(
            "inp13.2",
            got2.is_zero(),
            format!("integral = {} (expected 0)", got2),
        );
        Ok(())
    }
}

struct Pnt31;
impl LemmaSuite for Pnt31 {
    fn id(&self) -> &'static str {
        "pnt31"
    }
    fn describe(&self) -> &'static str {
        "((1/d) th(j,1) th(i,1) + th(i+j-1,1)) P(n) = 0"
    }
    fn run(&self, p: &SuiteParams, cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let ctx = RingContext::hilb(p.n, p.d)?;
        let nn = p.n as i64;
        let dd = qi(p.d as i64);
        for i in p.i_lo..=p.i_hi {
            for j in p.j_lo..=p.j_hi {
                let x = ctx
                    .theta(j, 1)
                    .mul(&ctx.theta(i, 1))
                    .scale(&(qi(1) / dd.clone()))
                    .add(&ctx.theta(i + j - 1, 1))
                    .mul(&ctx.p(nn));
                check_zero(r, cache, format!("pnt31[i={},j={}]", i, j), &x)?;
            }
        }
        Ok(())
    }
}

/// LHS - RHS of the first appendix identity (the k = 0 case), as classes.
pub fn g22tp2_difference(ctx: &RingContext, i: i64, j: i64) -> ClassExpr {
    let nn = ctx.n as i64;
    let dd = ctx.dvalue() as i64;
    let lhs = ctx
        .theta(i, 1)
        .mul(&ctx.theta(j, 1))
        .scale(&(qi(1) / qi(dd)))
        .add(&ctx.theta(i + j - 1, 1))
        .mul(&ctx.p(nn - 1));
    let r1 = ctx
        .theta(i, 0)
        .mul(&ctx.theta(j, 1))
        .add(&ctx.theta(j, 0).mul(&ctx.theta(i, 1)))
        .scale(&(qi(1) / qi(dd)))
        .add(&ctx.theta(i + j - 1, 0))
        .mul(&ctx.p(nn))
        .scale(&(qi(2 * dd - 1) / qi(dd * (dd - 2))));
    let r2 = ctx
        .theta(i + j - 2, 1)
        .mul(&ctx.p(nn))
        .scale(&(qi(3) / qi(dd - 2)));
    let r3 = ctx
        .theta(i, 1)
        .mul(&ctx.theta(j - 2, 2))
        .add(&ctx.theta(i - 2, 2).mul(&ctx.theta(j, 1)))
        .mul(&ctx.p(nn))
        .scale(&(qi(3) / qi(dd - 2)));
    lhs.sub(&r1).sub(&r2).add(&r3)
}

/// LHS - RHS of the second appendix identity (the k = 0 case), as classes.
pub fn g3tp2_difference(ctx: &RingContext, i: i64, j: i64) -> ClassExpr {
    let nn = ctx.n as i64;
    let dd = ctx.dvalue() as i64;
    let lhs = ctx
        .theta(i + j - 1, 0)
        .sub(&ctx.theta(i + j - 2, 1).scale(&qi(dd)))
        .scale(&qi(j - i))
        .mul(&ctx.p(nn));
    let rhs = ctx
        .theta(i, 0)
        .mul(&ctx.theta(j, 1))
        .sub(&ctx.theta(i, 1).mul(&ctx.theta(j, 0)))
        .scale(&(qi(i + j - 2) / qi(dd)))
        .add(
            &ctx.theta(i, 1)
                .mul(&ctx.theta(j - 2, 2))
                .sub(&ctx.theta(i - 2, 2).mul(&ctx.theta(j, 1)))
                .scale(&qi(dd * (i + j - 2))),
        )
        .mul(&ctx.p(nn));
    lhs.sub(&rhs)
}

struct Pnt32;
impl LemmaSuite for Pnt32 {
    fn id(&self) -> &'static str {
        "pnt32"
    }
    fn describe(&self) -> &'static str {
        "the P(n-1)-reduction identity of the first appendix"
    }
    fn run(&self, p: &SuiteParams, cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let ctx = RingContext::hilb(p.n, p.d)?;
        for i in p.i_lo..=p.i_hi {
            for j in p.j_lo..=p.j_hi {
                if j < i {
                    continue;
                }
                let x = g22tp2_difference(&ctx, i, j);
                check_zero(r, cache, format!("pnt32[i={},j={}]", i, j), &x)?;
            }
        }
        Ok(())
    }
}

struct Pnt41;
impl LemmaSuite for Pnt41 {
    fn id(&self) -> &'static str {
        "pnt41"
    }
    fn describe(&self) -> &'static str {
        "the antisymmetric P(n)-identity of the second appendix"
    }
    fn run(&self, p: &SuiteParams, cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let ctx = RingContext::hilb(p.n, p.d)?;
        for i in p.i_lo..=p.i_hi {
            for j in p.j_lo..=p.j_hi {
                if j < i {
                    continue;
                }
                let x = g3tp2_difference(&ctx, i, j);
                check_zero(r, cache, format!("pnt41[i={},j={}]", i, j), &x)?;
            }
        }
        Ok(())
    }
}

struct Svopn;
impl LemmaSuite for Svopn {
    fn id(&self) -> &'static str {
        "svopn"
    }
    fn describe(&self) -> &'static str {
        "pushforward identities for H^2 P(n)(L+dH) and th(i,1) H P(n)(L+dH)"
    }
    fn run(&self, p: &SuiteParams, cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let inc = RingContext::incidence(p.n, p.d)?;
        let h = inc.gen(Gen::H);
        let l_plus_dh = inc.gen(Gen::L).add(&h.scale(&qi(p.d as i64)));
        let pn = inc.p(p.n as i64);
        for t in 0..=2u32 {
            let mult = minus_l_pow(&inc, t);
            let x = h.pow(2).mul(&pn).mul(&l_plus_dh).mul(&mult);
            let pushed = pushforward_phi(&x).map_err(|e| anyhow::anyhow!("{}", e))?;
            check_zero(r, cache, format!("svopn.1[t={}]", t), &pushed)?;
            for i in p.i_lo..=p.i_hi.max(4) {
                let lhs = inc.theta(i, 1).mul(&h).mul(&pn).mul(&l_plus_dh);
                let rhs = minus_l_pow(&inc, i as u32)
                    .mul(&h)
                    .mul(&pn)
                    .scale(&qi(p.d as i64));
                let x = lhs.sub(&rhs).mul(&mult);
                let pushed = pushforward_phi(&x).map_err(|e| anyhow::anyhow!("{}", e))?;
                check_zero(r, cache, format!("svopn.2[i={},t={}]", i, t), &pushed)?;
            }
        }
        Ok(())
    }
}

struct Sp22tp;
impl LemmaSuite for Sp22tp {
    fn id(&self) -> &'static str {
        "sp22tp"
    }
    fn describe(&self) -> &'static str {
        "-2 gamma_2(1) P(n-1) = -(2(2d-1)/(d(d-2))) gamma_2(0) P(n) as classes"
    }
    fn run(&self, p: &SuiteParams, cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let ctx = RingContext::hilb(p.n, p.d)?;
        let nn = p.n as i64;
        let dd = p.d as i64;
        let g21 = tautring::gamma::gamma_on_hilb(&gamma_class(2, 1, p.n, p.d), p.d)
            .map_err(|e| anyhow::anyhow!("{}", e))?;
        let lhs = g21.mul(&ctx.p(nn - 1)).scale(&qi(-2));
        let rhs = gamma20_on_hilb(&ctx)
            .mul(&ctx.p(nn))
            .scale(&(qi(-2 * (2 * dd - 1)) / qi(dd * (dd - 2))));
        check_zero(r, cache, "sp22tp".to_string(), &lhs.sub(&rhs))?;
        Ok(())
    }
}

struct Nezan;
impl LemmaSuite for Nezan {
    fn id(&self) -> &'static str {
        "nezan"
    }
    fn describe(&self) -> &'static str {
        "the obstruction class a_n does not vanish"
    }
    fn run(&self, p: &SuiteParams, cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let ctx = RingContext::hilb(p.n, p.d)?;
        check_nonzero(r, cache, "nezan".to_string(), &a_class(&ctx))?;
        Ok(())
    }
}

struct Nog2;
impl LemmaSuite for Nog2 {
    fn id(&self) -> &'static str {
        "nog2"
    }
    fn describe(&self) -> &'static str {
        "gamma_2(0) P(n) does not vanish"
    }
    fn run(&self, p: &SuiteParams, cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let ctx = RingContext::hilb(p.n, p.d)?;
        let x = gamma20_on_hilb(&ctx).mul(&ctx.p(p.n as i64));
        check_nonzero(r, cache, "nog2".to_string(), &x)?;
        Ok(())
    }
}

struct Exfga;
impl LemmaSuite for Exfga {
    fn id(&self) -> &'static str {
        "exfga"
    }
    fn describe(&self) -> &'static str {
        "the nine closed forms of the low gamma classes, as formal identities"
    }
    fn run(&self, p: &SuiteParams, _cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let (n, d) = (p.n, p.d);
        let ctx = RingContext::hilb_times_linsys(n, d)?;
        let xi = ctx.gen(Gen::Xi);
        let nn = n as i64;
        let dd = d as i64;
        let expected: Vec<(i64, i64, ClassExpr)> = vec![
            (0, 0, ctx.zero()),
            (0, 1, ctx.scalar(qi(dd))),
            (0, 2, xi.clone()),
            (1, 0, ctx.scalar(qr(dd * dd, 2) - qi(nn))),
            (1, 1, ctx.zero()),
            (
                1,
                2,
                ctx.theta(2, 2)
                    .sub(&ctx.theta(2, 1).mul(&xi).scale(&(qi(1) / qi(dd))))
                    .sub(&xi.pow(2).scale(&qr(1, 2))),
            ),
            (
                2,
                0,
                ctx.theta(2, 1)
                    .scale(&((qi(dd) + qi(2 * nn) / qi(dd)) / qi(2)))
                    .sub(&ctx.theta(3, 0).scale(&qr(1, 2))),
            ),
            (
                2,
                1,
                ctx.theta(2, 1)
                    .pow(2)
                    .scale(&(qi(1) / qi(dd)))
                    .add(&ctx.theta(3, 1))
                    .sub(&ctx.theta(2, 2).scale(&qi(2 * dd)))
                    .scale(&qr(-1, 2)),
            ),
            (
                3,
                0,
                ctx.theta(4, 0)
                    .add(
                        &ctx.theta(2, 1)
                            .mul(&ctx.theta(3, 0))
                            .scale(&(qi(3) / qi(dd))),
                    )
                    .sub(
                        &ctx.theta(2, 1)
                            .pow(2)
                            .scale(&(qi(3 * nn) / qi(dd * dd) + qi(2))),
                    )
                    .scale(&qr(1, 6))
                    .add(&gamma_class(2, 1, n, d).scale(&qi(dd)))
                    .add(&ctx.theta(2, 2).scale(&(qi(nn) / qi(6) - qr(dd * dd, 2)))),
            ),
        ];
        for (k, j, want) in expected {
            let got = gamma_class(k, j, n, d);
            r.verdict(
                format!("exfga[gamma({},{})]", k, j),
                got == want,
                if got == want {
                    "formal identity".to_string()
                } else {
                    format!("got {}", got)
                },
            );
        }
        Ok(())
    }
}

struct ComalTwist;
impl LemmaSuite for ComalTwist {
    fn id(&self) -> &'static str {
        "comal-twist"
    }
    fn describe(&self) -> &'static str {
        "exponential-twist algebra: fixed points, the linear case, two routes"
    }
    fn run(&self, p: &SuiteParams, _cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let (n, d) = (p.n, p.d);
        let ctx = RingContext::hilb_times_linsys(n, d)?;
        let xi = ctx.gen(Gen::Xi);
        for (a, b) in [(qi(1), qi(0)), (qi(0), qi(1)), (qi(2), qi(-3))] {
            for j in 0..=2i64 {
                let got = gamma_twist(0, j, &a, &b, n, d);
                let want = gamma_class(0, j, n, d);
                r.verdict(
                    format!("twist.g0[j={},a={},b={}]", j, a, b),
                    got == want,
                    "gamma'_0(j) = gamma_0(j)",
                );
            }
            let got = gamma_twist(1, 1, &a, &b, n, d);
            let want = xi.scale(&(b.clone() * qi(d as i64) + a.clone()));
            r.verdict(
                format!("twist.g11[a={},b={}]", a, b),
                got == want,
                "gamma'_1(1) = (bd+a) xi",
            );
        }
        // integrand route vs closed recombination route
        let (a, b) = (qi(2), qi(-1));
        for k in 0..=3i64 {
            for j in 0..=2i64 {
                let direct = gamma_twist(k, j, &a, &b, n, d);
                let closed = comal_twist(k, j, &a, &b, n, d);
                r.verdict(
                    format!("twist.routes[k={},j={}]", k, j),
                    direct == closed,
                    "integrand route = closed recombination",
                );
            }
        }
        Ok(())
    }
}

struct Main3;
impl LemmaSuite for Main3 {
    fn id(&self) -> &'static str {
        "main3"
    }
    fn describe(&self) -> &'static str {
        "flagship filtration values (expected 1, 2, 3) with structural sub-claims"
    }
    fn run(&self, p: &SuiteParams, cache: &IntegralCache, r: &mut Report) -> anyhow::Result<()> {
        let cap = p.k_cap.unwrap_or_else(|| default_k_cap(p.n));
        let rep =
            verify_theorem_main3(p.n, p.d, cap, cache).map_err(|e| anyhow::anyhow!("{}", e))?;
        for s in &rep.sub_claims {
            r.verdict(format!("main3.{}", s.id), s.pass, s.detail.clone());
        }
        for (pr, want) in rep.reports.iter().zip([1i64, 2, 3]) {
            r.verdict(
                format!("main3.ap[{}]", pr.class_id),
                pr.almost_perversity == want,
                format!(
                    "almost perversity = {} (expected {}; k_cap = {})",
                    pr.almost_perversity, want, cap
                ),
            );
        }
        r.certificates = serde_json::to_value(&rep)?;
        Ok(())
    }
}

/// All registered suites.
pub fn registry() -> Vec<Box<dyn LemmaSuite>> {
    vec![
        Box::new(Pnt2),
        Box::new(Inp13),
        Box::new(Pnt31),
        Box::new(Pnt32),
        Box::new(Pnt41),
        Box::new(Svopn),
        Box::new(Sp22tp),
        Box::new(Nezan),
        Box::new(Nog2),
        Box::new(Main3),
        Box::new(Exfga),
        Box::new(ComalTwist),
    ]
}

pub fn lookup(id: &str) -> Option<Box<dyn LemmaSuite>> {
    registry().into_iter().find(|s| s.id() == id)
}

pub fn suite_ids() -> Vec<&'static str> {
    registry().iter().map(|s| s.id()).collect()
}
