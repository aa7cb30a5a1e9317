//! Concrete base-case data and structural polynomials: the diagonal Chern
//! classes on S x S, the n = 1 theta values, the A/B/C correction polynomials
//! of the incidence recursion, tautological Chern symbols, and the
//! Chern-character conversion.

use crate::rat::{binomial, factorial, qi, Q};
use crate::ring::{Gen, RingContext, SpaceKind};
use crate::ClassExpr;
use num::One;

/// Which of the three correction polynomials of the incidence recursion.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ABCKind {
    A,
    B,
    C,
}

/// c_i of the diagonal structure sheaf on S x S, as a polynomial in the two
/// hyperplane pullbacks h1, h2 (h1^3 = h2^3 = 0).
///
/// The Chern polynomial is the Koszul ratio with numerator 1 - (h1+2h2)t and
/// denominator roots b1, b2 with b1+b2 = h1+2h2, b1*b2 = h1^2+h1*h2+h2^2.
/// This normalization is pinned by the n = 1 theta values it must reproduce
/// (c_1 = 0, c_2 = -(h1^2+h1h2+h2^2), c_3 = -3h1^2h2-3h1h2^2, c_4 = -6h1^2h2^2).
pub fn diagonal_chern(i: i64) -> ClassExpr {
    let ctx = RingContext::surface_square();
    if i == 0 {
        return ctx.one();
    }
    if !(0..=4).contains(&i) {
        return ctx.zero();
    }
    let h1 = ctx.gen(Gen::H1);
    let h2 = ctx.gen(Gen::H2);
    let e1 = h1.add(&h2.scale(&qi(2)));
    let e2 = h1.pow(2).add(&h1.mul(&h2)).add(&h2.pow(2));
    // Complete homogeneous h_k of the two denominator roots:
    // h_k = e1*h_{k-1} - e2*h_{k-2}.
    let mut hs: Vec<ClassExpr> = vec![ctx.one(), e1.clone()];
    for k in 2..=i as usize {
        let next = e1.mul(&hs[k - 1]).sub(&e2.mul(&hs[k - 2]));
        hs.push(next);
    }
    // c_i = h_i - (h1+2h2)*h_{i-1}.
    hs[i as usize].sub(&e1.mul(&hs[i as usize - 1]))
}

/// th(i,j)(1): the Kuenneth component of diagonal_chern(i) against H^(2-j) on
/// the second factor, transported to the surface ring.
pub fn base_theta(i: i64, j: i64) -> ClassExpr {
    let surface = RingContext::surface();
    if !(0..=2).contains(&j) {
        return surface.zero();
    }
    let c = diagonal_chern(i);
    let comp = c.coefficient_of(Gen::H2, (2 - j) as u32);
    comp.substitute(&surface, |g| match g {
        Gen::H1 => surface.gen(Gen::H),
        _ => unreachable!("diagonal classes live in h1, h2"),
    })
}

/// Evaluate the whole base-case table, used when the recursion bottoms out:
/// th(i,j)(1) -> surface value, P(1) -> dH, H -> H.
pub fn base_value(g: Gen, d: u32) -> ClassExpr {
    let surface = RingContext::surface();
    match g {
        Gen::Theta { i, j } => base_theta(i as i64, j as i64),
        Gen::P { i: 1 } => surface.gen(Gen::H).scale(&qi(d as i64)),
        Gen::H => surface.gen(Gen::H),
        _ => panic!("generator {} has no n = 1 base value", g),
    }
}

/// (-L)^k as a class on the incidence variety.
pub fn minus_l_pow(ctx: &RingContext, k: u32) -> ClassExpr {
    if k == 0 {
        return ctx.one();
    }
    let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
    ctx.gen(Gen::L).pow(k).scale(&sign)
}

/// The exact finite sums defining the correction polynomials of the
/// incidence recursion, in generators th(.) and (-L)^k. All inner sums run
/// from k = 0; empty sums are zero. `reduce_scalar_theta` substitutes
/// th(2,0) by -n (a proven class identity), which is how the polynomials are
/// reported; the recursion itself consumes the formal variant.
pub fn abc_poly_formal(kind: ABCKind, i: i64, ctx: &RingContext) -> ClassExpr {
    assert_eq!(ctx.kind, SpaceKind::Incidence, "A/B/C live on the incidence variety");
    let mut acc = ctx.zero();
    if i < 0 {
        return acc;
    }
    match kind {
        ABCKind::A => {
            for k in 0..=(i - 2) {
                let term = ctx
                    .theta(i - k - 2, 2)
                    .mul(&minus_l_pow(ctx, k as u32))
                    .scale(&qi(k + 1));
                acc = acc.add(&term);
            }
        }
        ABCKind::B => {
            for k in 0..=(i - 3) {
                let term = ctx
                    .theta(i - k - 3, 2)
                    .mul(&minus_l_pow(ctx, k as u32))
                    .scale(&(qi(3) * binomial((k + 2) as u32, 2)));
                acc = acc.add(&term);
            }
            for k in 0..=(i - 2) {
                let term = ctx
                    .theta(i - k - 2, 1)
                    .mul(&minus_l_pow(ctx, k as u32))
                    .scale(&qi(k + 1));
                acc = acc.add(&term);
            }
        }
        ABCKind::C => {
            for k in 0..=(i - 4) {
                let term = ctx
                    .theta(i - k - 4, 2)
                    .mul(&minus_l_pow(ctx, k as u32))
                    .scale(&(qi(6) * binomial((k + 3) as u32, 3)));
                acc = acc.add(&term);
            }
            for k in 0..=(i - 3) {
                let term = ctx
                    .theta(i - k - 3, 1)
                    .mul(&minus_l_pow(ctx, k as u32))
                    .scale(&(qi(3) * binomial((k + 2) as u32, 2)));
                acc = acc.add(&term);
            }
            for k in 0..=(i - 2) {
                let term = ctx
                    .theta(i - k - 2, 0)
                    .mul(&minus_l_pow(ctx, k as u32))
                    .scale(&qi(k + 1));
                acc = acc.add(&term);
            }
        }
    }
    acc
}

/// Substitute the degree-0 generator th(2,0) by -n, a class identity the
/// recursion engine verifies independently. Used where printed closed forms
/// are expected (A/B/C values, the gamma classes).
pub fn reduce_scalar_theta(x: &ClassExpr) -> ClassExpr {
    let n = x.ctx.n as i64;
    let ctx = x.ctx;
    x.substitute(&ctx, |g| match g {
        Gen::Theta { i: 2, j: 0 } => ctx.scalar(qi(-n)),
        _ => ctx.gen(g),
    })
}

/// Public A/B/C values as printed (with the th(2,0) = -n reduction applied).
pub fn abc_poly(kind: ABCKind, i: i64, ctx: &RingContext) -> ClassExpr {
    reduce_scalar_theta(&abc_poly_formal(kind, i, ctx))
}

/// The Chern symbol P(i) on Hilb(n): unit for i = 0, zero outside 0..=n, the
/// generator otherwise. For n = 1 the explicit values are returned
/// (P(1) = dH on the surface S^[1] = S).
pub fn chern_p(i: i64, n: u32, d: u32) -> Result<ClassExpr, crate::ring::RingError> {
    let ctx = RingContext::hilb(n, d)?;
    if n == 1 {
        if i < 0 || i > 1 {
            return Ok(ctx.zero());
        }
        if i == 0 {
            return Ok(ctx.one());
        }
        return Ok(ctx.gen(Gen::H).scale(&qi(d as i64)));
    }
    Ok(ctx.p(i))
}

/// c_i of the universal-subscheme sheaf on Hilb(n) x S, the Kuenneth
/// expansion th(i,2) + th(i,1) H + th(i,0) H^2.
pub fn chern_sigma(i: i64, ctx: &RingContext) -> ClassExpr {
    assert_eq!(ctx.kind, SpaceKind::HilbTimesSurface);
    if i == 0 {
        return ctx.one();
    }
    let h = ctx.gen(Gen::H);
    ctx.theta(i, 2)
        .add(&ctx.theta(i, 1).mul(&h))
        .add(&ctx.theta(i, 0).mul(&h.pow(2)))
}

/// ch_k of the universal-subscheme sheaf on Hilb(n) x S, via Newton's
/// identities from the c_i (rank 0, so ch_0 = ch_1 = 0 by the codimension-2
/// support). The power sums satisfy
/// p_k = sum_{t=1..k-1} (-1)^(t-1) c_t p_{k-t} + (-1)^(k-1) k c_k.
pub fn chern_character_sigma(k: i64, n: u32) -> ClassExpr {
    let ctx = RingContext::hilb_times_surface(n).unwrap();
    if k < 0 {
        return ctx.zero();
    }
    let k = k as usize;
    if k == 0 {
        return ctx.zero(); // rank 0
    }
    let kmax = (2 * n + 2) as usize;
    let mut cs: Vec<ClassExpr> = Vec::with_capacity(kmax + 1);
    for i in 0..=kmax.max(k) {
        cs.push(if i <= kmax {
            chern_sigma(i as i64, &ctx)
        } else {
            ctx.zero()
        });
    }
    let mut ps: Vec<ClassExpr> = vec![ctx.zero(); k + 1];
    for m in 1..=k {
        let mut p = ctx.zero();
        for t in 1..m {
            let s = cs[t].mul(&ps[m - t]);
            if (t - 1) % 2 == 0 {
                p = p.add(&s);
            } else {
                p = p.sub(&s);
            }
        }
        let lead = cs[m].scale(&qi(m as i64));
        if (m - 1) % 2 == 0 {
            p = p.add(&lead);
        } else {
            p = p.sub(&lead);
        }
        ps[m] = p;
    }
    ps[k].scale(&(Q::one() / factorial(k as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qr;
    use crate::ring::Monomial;

    fn ss() -> RingContext {
        RingContext::surface_square()
    }

    #[test]
    fn diagonal_chern_low_degrees() {
        let ctx = ss();
        assert_eq!(diagonal_chern(0), ctx.one());
        assert!(diagonal_chern(1).is_zero_expr());
        let h1 = ctx.gen(Gen::H1);
        let h2 = ctx.gen(Gen::H2);
        let c2 = h1.pow(2).add(&h1.mul(&h2)).add(&h2.pow(2)).neg();
        assert_eq!(diagonal_chern(2), c2);
        let c3 = h1
            .pow(2)
            .mul(&h2)
            .add(&h1.mul(&h2.pow(2)))
            .scale(&qi(-3));
        assert_eq!(diagonal_chern(3), c3);
        // Frozen from the brute-force Koszul expansion to order t^4.
        let c4 = h1.pow(2).mul(&h2.pow(2)).scale(&qi(-6));
        assert_eq!(diagonal_chern(4), c4);
        assert!(diagonal_chern(5).is_zero_expr());
        assert!(diagonal_chern(-1).is_zero_expr());
    }

    #[test]
    fn base_theta_table() {
        let s = RingContext::surface();
        let h = s.gen(Gen::H);
        assert_eq!(base_theta(2, 0), s.scalar(qi(-1)));
        assert_eq!(base_theta(2, 1), h.scale(&qi(-1)));
        assert_eq!(base_theta(2, 2), h.pow(2).scale(&qi(-1)));
        assert_eq!(base_theta(3, 0), h.scale(&qi(-3)));
        assert_eq!(base_theta(3, 1), h.pow(2).scale(&qi(-3)));
        assert!(base_theta(3, 2).is_zero_expr());
        assert_eq!(base_theta(4, 0), h.pow(2).scale(&qi(-6)));
        assert!(base_theta(4, 1).is_zero_expr());
        assert!(base_theta(4, 2).is_zero_expr());
        assert_eq!(base_theta(0, 2), s.one());
        assert!(base_theta(1, 1).is_zero_expr());
    }

    #[test]
    fn abc_small_values() {
        let ctx = RingContext::incidence(2, 3).unwrap();
        assert_eq!(abc_poly(ABCKind::A, 2, &ctx), ctx.one());
        assert!(abc_poly(ABCKind::B, 2, &ctx).is_zero_expr());
        assert!(abc_poly(ABCKind::C, 2, &ctx).is_zero_expr());
        let l = ctx.gen(Gen::L);
        assert_eq!(abc_poly(ABCKind::A, 3, &ctx), l.scale(&qi(-2)));
        assert_eq!(abc_poly(ABCKind::B, 3, &ctx), ctx.scalar(qi(3)));
        assert!(abc_poly(ABCKind::C, 3, &ctx).is_zero_expr());
        let a4 = l.pow(2).scale(&qi(3)).add(&ctx.theta(2, 2));
        assert_eq!(abc_poly(ABCKind::A, 4, &ctx), a4);
        let b4 = l.scale(&qi(-9)).add(&ctx.theta(2, 1));
        assert_eq!(abc_poly(ABCKind::B, 4, &ctx), b4);
        // C_4 = (6 - n) after the th(2,0) = -n reduction.
        assert_eq!(abc_poly(ABCKind::C, 4, &ctx), ctx.scalar(qi(6 - 2)));
        let c4_formal = abc_poly_formal(ABCKind::C, 4, &ctx);
        assert_eq!(
            c4_formal,
            ctx.scalar(qi(6)).add(&ctx.theta(2, 0))
        );
        assert!(abc_poly(ABCKind::A, 1, &ctx).is_zero_expr());
        assert!(abc_poly(ABCKind::A, -1, &ctx).is_zero_expr());
    }

    #[test]
    fn chern_p_values() {
        let s1 = chern_p(1, 1, 4).unwrap();
        let surface_like = RingContext::hilb(1, 4).unwrap();
        assert_eq!(s1, surface_like.gen(Gen::H).scale(&qi(4)));
        assert_eq!(chern_p(0, 3, 3).unwrap(), RingContext::hilb(3, 3).unwrap().one());
        assert!(chern_p(-1, 3, 3).unwrap().is_zero_expr());
        assert!(chern_p(4, 3, 3).unwrap().is_zero_expr());
        let p2 = chern_p(2, 2, 3).unwrap();
        assert_eq!(p2.degree(), Some(2));
    }

    #[test]
    fn chern_character_low_terms() {
        let n = 2;
        let ctx = RingContext::hilb_times_surface(n).unwrap();
        assert!(chern_character_sigma(0, n).is_zero_expr());
        assert!(chern_character_sigma(1, n).is_zero_expr());
        // ch_2 = -c_2 when c_1 = 0.
        assert_eq!(chern_character_sigma(2, n), chern_sigma(2, &ctx).neg());
        // ch_3 = c_3/2.
        assert_eq!(chern_character_sigma(3, n), chern_sigma(3, &ctx).scale(&qr(1, 2)));
        // ch_2 component against H is -th(2,1), i.e. the class H_(n).
        let ch2 = chern_character_sigma(2, n);
        assert_eq!(ch2.coefficient_of(Gen::H, 1), ctx.theta(2, 1).neg());
        // Newton recurrence inverted: recompute every c_k from the power
        // sums via k e_k = sum_{t=1..k} (-1)^(t-1) e_{k-t} p_t and compare.
        let kmax = (2 * n + 2) as usize;
        let ps: Vec<ClassExpr> = (0..=kmax)
            .map(|k| chern_character_sigma(k as i64, n).scale(&factorial(k as u32)))
            .collect();
        let mut es: Vec<ClassExpr> = vec![ctx.one()];
        for k in 1..=kmax {
            let mut acc = ctx.zero();
            for t in 1..=k {
                let term = es[k - t].mul(&ps[t]);
                if (t - 1) % 2 == 0 {
                    acc = acc.add(&term);
                } else {
                    acc = acc.sub(&term);
                }
            }
            es.push(acc.scale(&(Q::one() / qi(k as i64))));
        }
        for k in 0..=kmax {
            assert_eq!(es[k], chern_sigma(k as i64, &ctx), "c_{} mismatch", k);
        }
    }

    #[test]
    fn base_value_map() {
        let s = RingContext::surface();
        assert_eq!(base_value(Gen::P { i: 1 }, 5), s.gen(Gen::H).scale(&qi(5)));
        assert_eq!(base_value(Gen::Theta { i: 2, j: 1 }, 5), s.gen(Gen::H).neg());
        let m = Monomial::from_gen(Gen::H, 1);
        assert_eq!(base_value(Gen::H, 3).coefficient(&m), qi(1));
    }
}
