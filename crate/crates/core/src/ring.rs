//! Exact-rational graded-commutative polynomial arithmetic over the named
//! generators of the spaces the engine works on, with degree-based truncation
//! and canonical normal forms.
//!
//! A [`ClassExpr`] is a formal linear combination of [`Monomial`]s attached to
//! a [`RingContext`]. Equality of `ClassExpr` is *formal* equality of term
//! maps; deciding whether a formal expression vanishes as a cohomology class
//! is the job of the recursion engine's pairing test.

use crate::rat::Q;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A named multiplicative generator. Ordering is lexicographic on
/// (kind, i, j), which fixes the canonical monomial order everywhere
/// (printing, cache keys, enumeration).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    /// Kuenneth component `th(i,j)` of c_i of the universal-subscheme sheaf;
    /// degree i+j-2.
    Theta { i: u8, j: u8 },
    /// Chern class `P(i)` of the rank-n tautological bundle of dH; degree i.
    P { i: u8 },
    /// Hyperplane class of a surface factor (on the incidence variety this is
    /// the pullback along the added-point map); H^3 = 0.
    H,
    /// Tautological line class on the incidence variety.
    L,
    /// Hyperplane class of the linear system |dH|; xi^(b+1) = 0.
    Xi,
    /// First factor hyperplane on S x S.
    H1,
    /// Second factor hyperplane on S x S.
    H2,
}

impl Gen {
    pub fn degree(&self) -> u32 {
        match *self {
            Gen::Theta { i, j } => (i as u32 + j as u32).saturating_sub(2),
            Gen::P { i } => i as u32,
            _ => 1,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gen::Theta { i, j } => write!(f, "th({},{})", i, j),
            Gen::P { i } => write!(f, "P({})", i),
            Gen::H => write!(f, "H"),
            Gen::L => write!(f, "L"),
            Gen::Xi => write!(f, "xi"),
            Gen::H1 => write!(f, "h1"),
            Gen::H2 => write!(f, "h2"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SpaceKind {
    /// S = P^2 itself.
    Surface,
    /// S x S, used for the diagonal Chern computation.
    SurfaceSquare,
    /// The Hilbert scheme of n points.
    Hilb,
    /// The incidence variety of nested pairs of lengths n, n+1.
    Incidence,
    /// Hilb(n) x S.
    HilbTimesSurface,
    /// Hilb(n) x |dH|.
    HilbTimesLinSys,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("n must be >= 1 (got {0})")]
    BadN(i64),
    #[error("d must be >= 3 on spaces carrying |dH| data (got {0})")]
    BadD(i64),
    #[error("space {0:?} requires the degree parameter d")]
    MissingD(SpaceKind),
    #[error("mixed ring contexts: {0} vs {1}")]
    MixedContexts(String, String),
    #[error("generator {0} is not in the catalog of {1}")]
    ForeignGenerator(String, String),
    #[error("expression is not homogeneous")]
    Inhomogeneous,
    #[error("{0}")]
    Other(String),
}

/// Immutable space descriptor plus the derived dimension. Cheap to copy;
/// every `ClassExpr` carries one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RingContext {
    pub kind: SpaceKind,
    pub n: u32,
    pub d: Option<u32>,
    pub dim: u32,
}

/// dim |dH| = d(d+3)/2.
pub fn linsys_dim(d: u32) -> u32 {
    d * (d + 3) / 2
}

/// Build a context, validating the space's parameter requirements.
/// Spaces carrying tautological bundles of dH or the linear system reject
/// d <= 2 (the recursion identities contain 1/d and 1/(d-2) denominators).
pub fn make_context(kind: SpaceKind, n: u32, d: Option<u32>) -> Result<RingContext, RingError> {
    if n == 0 {
        return Err(RingError::BadN(n as i64));
    }
    let needs_d = matches!(
        kind,
        SpaceKind::Hilb | SpaceKind::Incidence | SpaceKind::HilbTimesLinSys
    );
    if needs_d {
        match d {
            None => return Err(RingError::MissingD(kind)),
            Some(dv) if dv < 3 => return Err(RingError::BadD(dv as i64)),
            _ => {}
        }
    }
    let dim = match kind {
        SpaceKind::Surface => 2,
        SpaceKind::SurfaceSquare => 4,
        SpaceKind::Hilb => 2 * n,
        SpaceKind::Incidence | SpaceKind::HilbTimesSurface => 2 * n + 2,
        SpaceKind::HilbTimesLinSys => 2 * n + linsys_dim(d.unwrap()),
    };
    Ok(RingContext {
        kind,
        n,
        d: if needs_d { d } else { None },
        dim,
    })
}

impl RingContext {
    pub fn surface() -> Self {
        make_context(SpaceKind::Surface, 1, None).unwrap()
    }
    pub fn surface_square() -> Self {
        make_context(SpaceKind::SurfaceSquare, 1, None).unwrap()
    }
    pub fn hilb(n: u32, d: u32) -> Result<Self, RingError> {
        make_context(SpaceKind::Hilb, n, Some(d))
    }
    pub fn incidence(n: u32, d: u32) -> Result<Self, RingError> {
        make_context(SpaceKind::Incidence, n, Some(d))
    }
    pub fn hilb_times_surface(n: u32) -> Result<Self, RingError> {
        make_context(SpaceKind::HilbTimesSurface, n, None)
    }
    pub fn hilb_times_linsys(n: u32, d: u32) -> Result<Self, RingError> {
        make_context(SpaceKind::HilbTimesLinSys, n, Some(d))
    }

    pub fn dvalue(&self) -> u32 {
        self.d.expect("context carries no d")
    }

    /// dim |dH| for spaces that carry the linear-system factor.
    pub fn b(&self) -> u32 {
        linsys_dim(self.dvalue())
    }

    fn has_theta(&self) -> bool {
        matches!(
            self.kind,
            SpaceKind::Hilb
                | SpaceKind::Incidence
                | SpaceKind::HilbTimesSurface
                | SpaceKind::HilbTimesLinSys
        )
    }

    fn has_p(&self) -> bool {
        matches!(
            self.kind,
            SpaceKind::Hilb | SpaceKind::Incidence | SpaceKind::HilbTimesLinSys
        )
    }

    /// Catalog membership. Theta indices are dimension-bounded:
    /// th(i,2) needs i <= 2n, th(i,1) needs i <= 2n+1, th(i,0) needs i <= 2n+2.
    pub fn allows(&self, g: Gen) -> bool {
        match g {
            Gen::Theta { i, j } => {
                self.has_theta() && j <= 2 && i >= 2 && (i as u32) <= 2 * self.n + 2 - j as u32
            }
            Gen::P { i } => self.has_p() && i >= 1 && (i as u32) <= self.n,
            Gen::H => matches!(
                self.kind,
                SpaceKind::Surface | SpaceKind::Incidence | SpaceKind::HilbTimesSurface
            ) || (self.kind == SpaceKind::Hilb && self.n == 1),
            Gen::L => self.kind == SpaceKind::Incidence,
            Gen::Xi => self.kind == SpaceKind::HilbTimesLinSys,
            Gen::H1 | Gen::H2 => self.kind == SpaceKind::SurfaceSquare,
        }
    }

    /// Nilpotency cap: highest power of the generator that survives.
    pub fn cap(&self, g: Gen) -> Option<u32> {
        match g {
            Gen::H | Gen::H1 | Gen::H2 => Some(2),
            Gen::Xi => Some(self.b()),
            _ => None,
        }
    }

    /// All catalog generators, in canonical order.
    pub fn catalog(&self) -> Vec<Gen> {
        let mut gens = Vec::new();
        if self.has_theta() {
            for i in 2..=(2 * self.n + 2) as u8 {
                for j in 0..=2u8 {
                    let g = Gen::Theta { i, j };
                    if self.allows(g) {
                        gens.push(g);
                    }
                }
            }
        }
        if self.has_p() {
            for i in 1..=self.n as u8 {
                gens.push(Gen::P { i });
            }
        }
        for g in [Gen::H, Gen::L, Gen::Xi, Gen::H1, Gen::H2] {
            if self.allows(g) {
                gens.push(g);
            }
        }
        gens.sort();
        gens
    }

    fn label(&self) -> String {
        match self.kind {
            SpaceKind::Surface => "Surface".into(),
            SpaceKind::SurfaceSquare => "SurfaceSquare".into(),
            SpaceKind::Hilb => format!("Hilb({},d={})", self.n, self.dvalue()),
            SpaceKind::Incidence => format!("Incidence({},d={})", self.n, self.dvalue()),
            SpaceKind::HilbTimesSurface => format!("Hilb({})xS", self.n),
            SpaceKind::HilbTimesLinSys => {
                format!("Hilb({})x|{}H|", self.n, self.dvalue())
            }
        }
    }

    pub fn zero(&self) -> ClassExpr {
        ClassExpr {
            ctx: *self,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> ClassExpr {
        self.scalar(Q::one())
    }

    pub fn scalar(&self, c: Q) -> ClassExpr {
        let mut e = self.zero();
        e.insert_term(Monomial::one(), c);
        e
    }

    pub fn gen(&self, g: Gen) -> ClassExpr {
        assert!(
            self.allows(g),
            "generator {} not in catalog of {}",
            g,
            self.label()
        );
        let mut e = self.zero();
        e.insert_term(Monomial::from_gen(g, 1), Q::one());
        e
    }

    /// th(i,j) with the index conventions applied: the unit for (0,2), zero
    /// for negative/underflowing indices, i = 1, (0,0), (0,1), and anything
    /// past the dimension-forced catalog bound.
    pub fn theta(&self, i: i64, j: i64) -> ClassExpr {
        if !(0..=2).contains(&j) || i < 0 {
            return self.zero();
        }
        if i == 0 {
            return if j == 2 { self.one() } else { self.zero() };
        }
        if i == 1 {
            return self.zero();
        }
        let g = Gen::Theta {
            i: i as u8,
            j: j as u8,
        };
        if self.allows(g) {
            self.gen(g)
        } else {
            self.zero()
        }
    }

    /// P(i): the unit for i = 0, zero outside 0..=n, the symbol otherwise.
    pub fn p(&self, i: i64) -> ClassExpr {
        if i < 0 || i > self.n as i64 {
            return self.zero();
        }
        if i == 0 {
            return self.one();
        }
        self.gen(Gen::P { i: i as u8 })
    }

    /// True if the monomial survives nilpotency caps and dimension truncation.
    fn mono_ok(&self, m: &Monomial) -> bool {
        if m.degree() > self.dim {
            return false;
        }
        m.0.iter().all(|&(g, e)| match self.cap(g) {
            Some(c) => e <= c,
            None => true,
        })
    }
}

/// Sorted exponent list; the canonical key of a term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(pub Vec<(Gen, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_gen(g: Gen, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(g, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(g, e)| g.degree() * e).sum()
    }

    pub fn exponent(&self, g: Gen) -> u32 {
        self.0
            .iter()
            .find(|&&(h, _)| h == g)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(Gen, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ga, ea)), Some(&&(gb, eb))) => {
                    if ga == gb {
                        out.push((ga, ea + eb));
                        a.next();
                        b.next();
                    } else if ga < gb {
                        out.push((ga, ea));
                        a.next();
                    } else {
                        out.push((gb, eb));
                        b.next();
                    }
                }
                (Some(_), None) => {
                    out.extend(a.by_ref().copied());
                    break;
                }
                (None, Some(_)) => {
                    out.extend(b.by_ref().copied());
                    break;
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Remove one generator (all its powers), returning (exponent, rest).
    pub fn split_gen(&self, g: Gen) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut e = 0;
        for &(h, k) in &self.0 {
            if h == g {
                e = k;
            } else {
                rest.push((h, k));
            }
        }
        (e, Monomial(rest))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(g, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", g)?;
            } else {
                write!(f, "{}^{}", g, e)?;
            }
        }
        Ok(())
    }
}

/// An exact-rational linear combination of graded monomials attached to a
/// space context. Always kept in canonical form: no zero coefficients, no
/// monomial above the space dimension or a nilpotency cap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassExpr {
    pub ctx: RingContext,
    terms: BTreeMap<Monomial, Q>,
}

impl ClassExpr {
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero_expr(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    fn insert_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() || !self.ctx.mono_ok(&m) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn assert_same_ctx(&self, other: &ClassExpr) {
        assert_eq!(
            self.ctx,
            other.ctx,
            "mixed ring contexts: {} vs {}",
            self.ctx.label(),
            other.ctx.label()
        );
    }

    pub fn checked_add(&self, other: &ClassExpr) -> Result<ClassExpr, RingError> {
        if self.ctx != other.ctx {
            return Err(RingError::MixedContexts(
                self.ctx.label(),
                other.ctx.label(),
            ));
        }
        Ok(self.add(other))
    }

    pub fn checked_mul(&self, other: &ClassExpr) -> Result<ClassExpr, RingError> {
        if self.ctx != other.ctx {
            return Err(RingError::MixedContexts(
                self.ctx.label(),
                other.ctx.label(),
            ));
        }
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &ClassExpr) -> ClassExpr {
        self.assert_same_ctx(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ClassExpr) -> ClassExpr {
        self.assert_same_ctx(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> ClassExpr {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> ClassExpr {
        let mut out = self.ctx.zero();
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &ClassExpr) -> ClassExpr {
        self.assert_same_ctx(other);
        let mut out = self.ctx.zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                out.insert_term(m, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> ClassExpr {
        let mut out = self.ctx.one();
        for _ in 0..e {
            out = out.mul(self);
            if out.is_zero_expr() {
                break;
            }
        }
        out
    }

    /// The homogeneous part of the given degree.
    pub fn homogeneous_part(&self, deg: u32) -> ClassExpr {
        let mut out = self.ctx.zero();
        for (m, c) in &self.terms {
            if m.degree() == deg {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// The coefficient class of an exact power of one generator: terms whose
    /// g-exponent equals `power`, with the g-factor removed. Out-of-range
    /// selectors yield zero.
    pub fn coefficient_of(&self, g: Gen, power: u32) -> ClassExpr {
        let mut out = self.ctx.zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_gen(g);
            if e == power {
                out.insert_term(rest, c.clone());
            }
        }
        out
    }

    /// Degree if homogeneous (zero expression counts as homogeneous of any
    /// degree and reports None).
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let first = it.next()?.degree();
        for m in it {
            if m.degree() != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero_expr() || self.degree().is_some()
    }

    /// Substitute every generator by an expression in the target context.
    /// This is how pullbacks and base-case evaluations are realized; the map
    /// extends multiplicatively and linearly.
    pub fn substitute<F>(&self, target: &RingContext, f: F) -> ClassExpr
    where
        F: Fn(Gen) -> ClassExpr,
    {
        let mut out = target.zero();
        for (m, c) in &self.terms {
            let mut term = target.scalar(c.clone());
            for &(g, e) in &m.0 {
                if term.is_zero_expr() {
                    break;
                }
                term = term.mul(&f(g).pow(e));
            }
            out = out.add(&term);
        }
        out
    }

    /// Exact scalar value of a degree-0 expression in a context where the
    /// empty monomial is the only degree-0 monomial present.
    pub fn scalar_part(&self) -> Q {
        self.coefficient(&Monomial::one())
    }
}

/// Identity re-normalization. Expressions are canonical by construction;
/// this exists so the normal-form contract has an explicit witness.
pub fn canonicalize(x: &ClassExpr) -> ClassExpr {
    let mut out = x.ctx.zero();
    for (m, c) in &x.terms {
        out.insert_term(m.clone(), c.clone());
    }
    out
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", crate::rat::q_str(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", crate::rat::q_str(&mag), m)?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &ClassExpr {
    type Output = ClassExpr;
    fn add(self, rhs: &ClassExpr) -> ClassExpr {
        ClassExpr::add(self, rhs)
    }
}

impl std::ops::Sub for &ClassExpr {
    type Output = ClassExpr;
    fn sub(self, rhs: &ClassExpr) -> ClassExpr {
        ClassExpr::sub(self, rhs)
    }
}

impl std::ops::Mul for &ClassExpr {
    type Output = ClassExpr;
    fn mul(self, rhs: &ClassExpr) -> ClassExpr {
        ClassExpr::mul(self, rhs)
    }
}

/// All monomials of the given total degree in `gens` (each of positive
/// degree), respecting nilpotency caps. Deterministic order: lexicographic in
/// the exponent vector over the sorted generator list.
pub fn monomials_of_degree(ctx: &RingContext, gens: &[Gen], deg: u32) -> Vec<Monomial> {
    let mut sorted: Vec<Gen> = gens.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = Vec::new();
    let mut current: Vec<(Gen, u32)> = Vec::new();
    fn rec(
        ctx: &RingContext,
        gens: &[Gen],
        idx: usize,
        remaining: u32,
        current: &mut Vec<(Gen, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(Monomial(current.clone()));
            return;
        }
        if idx >= gens.len() {
            return;
        }
        let g = gens[idx];
        let gd = g.degree();
        debug_assert!(gd > 0, "degree-0 generators cannot be enumerated");
        let mut emax = remaining / gd;
        if let Some(cap) = ctx.cap(g) {
            emax = emax.min(cap);
        }
        for e in (0..=emax).rev() {
            if e > 0 {
                current.push((g, e));
            }
            rec(ctx, gens, idx + 1, remaining - e * gd, current, out);
            if e > 0 {
                current.pop();
            }
        }
    }
    rec(ctx, &sorted, 0, deg, &mut current, &mut out);
    out.sort();
    out
}

/// The pairing basis used by the zero test: all theta-monomials of the given
/// degree. th(2,0) (degree 0, a scalar as a class) is excluded, which keeps
/// enumeration finite without shrinking the span.
pub fn theta_monomials_of_degree(ctx: &RingContext, deg: u32) -> Vec<Monomial> {
    let gens: Vec<Gen> = ctx
        .catalog()
        .into_iter()
        .filter(|g| matches!(g, Gen::Theta { .. }) && g.degree() > 0)
        .collect();
    monomials_of_degree(ctx, &gens, deg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qi, qr};

    #[test]
    fn context_dimensions() {
        let h2 = RingContext::hilb(2, 3).unwrap();
        assert_eq!(h2.dim, 4);
        let pl = RingContext::hilb_times_linsys(2, 3).unwrap();
        assert_eq!(pl.dim, 4 + 9);
        assert_eq!(pl.b(), 9);
        assert!(RingContext::hilb(2, 2).is_err());
        assert!(make_context(SpaceKind::Hilb, 0, Some(3)).is_err());
        assert!(make_context(SpaceKind::Hilb, 2, None).is_err());
    }

    #[test]
    fn hilb2_catalog_bounds() {
        let ctx = RingContext::hilb(2, 3).unwrap();
        assert!(ctx.allows(Gen::Theta { i: 4, j: 2 }));
        assert!(!ctx.allows(Gen::Theta { i: 5, j: 2 }));
        assert!(ctx.allows(Gen::Theta { i: 5, j: 1 }));
        assert!(!ctx.allows(Gen::Theta { i: 6, j: 1 }));
        assert!(ctx.allows(Gen::Theta { i: 6, j: 0 }));
        assert!(!ctx.allows(Gen::Theta { i: 7, j: 0 }));
        assert!(ctx.allows(Gen::P { i: 2 }));
        assert!(!ctx.allows(Gen::P { i: 3 }));
        assert!(!ctx.allows(Gen::H));
        assert!(RingContext::hilb(1, 3).unwrap().allows(Gen::H));
    }

    #[test]
    fn nilpotency_and_truncation() {
        let s = RingContext::surface();
        let h = s.gen(Gen::H);
        assert!(h.pow(3).is_zero_expr());
        let pl = RingContext::hilb_times_linsys(2, 3).unwrap();
        let xi = pl.gen(Gen::Xi);
        assert!(!xi.pow(9).is_zero_expr());
        assert!(xi.pow(10).is_zero_expr());
        let h2 = RingContext::hilb(2, 3).unwrap();
        let t = h2.theta(2, 2);
        assert!(t.pow(3).is_zero_expr()); // degree 6 > dim 4
    }

    #[test]
    fn theta_conventions() {
        let ctx = RingContext::hilb(2, 3).unwrap();
        assert_eq!(ctx.theta(0, 2), ctx.one());
        assert!(ctx.theta(0, 0).is_zero_expr());
        assert!(ctx.theta(0, 1).is_zero_expr());
        assert!(ctx.theta(1, 0).is_zero_expr());
        assert!(ctx.theta(1, 1).is_zero_expr());
        assert!(ctx.theta(1, 2).is_zero_expr());
        assert!(ctx.theta(-2, 2).is_zero_expr());
        assert!(ctx.theta(5, 2).is_zero_expr()); // beyond catalog: zero by dimension
        assert_eq!(ctx.p(0), ctx.one());
        assert!(ctx.p(-1).is_zero_expr());
        assert!(ctx.p(3).is_zero_expr());
    }

    #[test]
    fn arithmetic_and_normal_form() {
        let ctx = RingContext::hilb(2, 3).unwrap();
        let t = ctx.theta(2, 1);
        let two_t = t.add(&t);
        assert_eq!(two_t, t.scale(&qi(2)));
        assert_eq!(ctx.scalar(qr(2, 4)), ctx.scalar(qr(1, 2)));
        let diff = two_t.sub(&t).sub(&t);
        assert!(diff.is_zero_expr());
        assert_eq!(canonicalize(&two_t), two_t);
    }

    #[test]
    fn display_round_values() {
        let ctx = RingContext::hilb(2, 3).unwrap();
        let e = ctx
            .theta(2, 1)
            .pow(2)
            .scale(&qr(1, 3))
            .sub(&ctx.p(2))
            .add(&ctx.one());
        assert_eq!(format!("{}", e), "1 + 1/3*th(2,1)^2 - P(2)");
    }

    #[test]
    fn monomial_enumeration() {
        let ctx = RingContext::hilb(2, 3).unwrap();
        let deg1 = theta_monomials_of_degree(&ctx, 1);
        assert_eq!(deg1.len(), 2); // th(2,1), th(3,0)
        let deg2 = theta_monomials_of_degree(&ctx, 2);
        assert_eq!(deg2.len(), 6);
        let deg0 = theta_monomials_of_degree(&ctx, 0);
        assert_eq!(deg0, vec![Monomial::one()]);
    }

    #[test]
    fn extraction() {
        let ctx = RingContext::hilb_times_surface(2).unwrap();
        let h = ctx.gen(Gen::H);
        let x = ctx
            .theta(2, 2)
            .add(&ctx.theta(2, 1).mul(&h))
            .add(&ctx.theta(3, 0).mul(&h.pow(2)));
        assert_eq!(x.coefficient_of(Gen::H, 2), ctx.theta(3, 0));
        assert_eq!(x.coefficient_of(Gen::H, 0), ctx.theta(2, 2));
        assert_eq!(x.homogeneous_part(2), ctx.theta(2, 2).add(&ctx.theta(2, 1).mul(&h)));
        assert!(x.homogeneous_part(40).is_zero_expr());
    }
}
