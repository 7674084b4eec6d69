//! Binary forms over `F_q`, projective points and the `SL_2` substitution action.
//!
//! A form of degree `d` is stored as `c_0, ..., c_d` with `c_i` the
//! coefficient of `X0^(d-i) X1^i`. All textual and JSON I/O uses this order.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{canonical_field, enumerate_field, Fel, FieldCtx};
use crate::unipoly::{format_element_list, parse_element_list, UPoly};

pub const GUARD_OVERRIDE_ENV: &str = "FILLCURVE_GUARD_OVERRIDE";

/// Size guards for the exhaustive operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Largest `q` for which `G_q` may be enumerated.
    pub enumerate_q: u64,
    /// Largest `q` for which `SL_2(F_q)` may be listed.
    pub sl2_q: u64,
    /// Largest `q` for an orbit-reduced census.
    pub census_q: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            enumerate_q: 5,
            sl2_q: 25,
            census_q: 5,
        }
    }
}

impl Guards {
    pub fn unlimited() -> Self {
        Guards {
            enumerate_q: u64::MAX,
            sl2_q: u64::MAX,
            census_q: u64::MAX,
        }
    }

    /// Defaults, lifted entirely by `allow_large` or a nonempty
    /// `FILLCURVE_GUARD_OVERRIDE` other than `0`.
    pub fn from_env(allow_large: bool) -> Self {
        let env = std::env::var(GUARD_OVERRIDE_ENV)
            .map(|v| !v.is_empty() && v != "0")
            .unwrap_or(false);
        if allow_large || env {
            Guards::unlimited()
        } else {
            Guards::default()
        }
    }
}

#[derive(Clone)]
pub struct BinForm {
    ctx: FieldCtx,
    degree: usize,
    c: Vec<u32>,
}

impl BinForm {
    /// From `c_0..c_d`; the degree is `coeffs.len() - 1`.
    pub fn new(ctx: &FieldCtx, coeffs: &[Fel]) -> Result<BinForm> {
        if coeffs.is_empty() {
            return Err(Error::Parse("a form needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| c.ctx() != ctx) {
            return Err(Error::MixedFields);
        }
        Ok(BinForm {
            ctx: ctx.clone(),
            degree: coeffs.len() - 1,
            c: coeffs
                .iter()
                .flat_map(|x| x.digits().iter().copied())
                .collect(),
        })
    }

    pub fn from_ints(ctx: &FieldCtx, coeffs: &[i64]) -> BinForm {
        let elems: Vec<Fel> = coeffs.iter().map(|&n| Fel::from_int(ctx, n)).collect();
        BinForm::new(ctx, &elems).expect("nonempty")
    }

    pub(crate) fn from_raw(ctx: &FieldCtx, degree: usize, c: Vec<u32>) -> BinForm {
        debug_assert_eq!(c.len(), (degree + 1) * ctx.width());
        BinForm {
            ctx: ctx.clone(),
            degree,
            c,
        }
    }

    pub fn zero(ctx: &FieldCtx, degree: usize) -> BinForm {
        BinForm::from_raw(ctx, degree, vec![0; (degree + 1) * ctx.width()])
    }

    /// Parses `c0,c1,...,cd` (same syntax as [`UPoly::parse`]).
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<BinForm> {
        BinForm::new(ctx, &parse_element_list(ctx, s)?)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Order of the coefficient field.
    pub fn q(&self) -> u64 {
        self.ctx.order_u64().expect("small coefficient field")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub(crate) fn coeff_raw(&self, i: usize) -> &[u32] {
        let w = self.ctx.width();
        &self.c[i * w..(i + 1) * w]
    }

    pub fn coeff(&self, i: usize) -> Fel {
        Fel::from_raw(&self.ctx, self.coeff_raw(i).to_vec())
    }

    pub fn coeffs(&self) -> Vec<Fel> {
        (0..=self.degree).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        FieldCtx::is_zero_raw(&self.c)
    }

    /// `f(x0, x1)` for coordinates in this field or a descendant.
    pub fn eval(&self, x0: &Fel, x1: &Fel) -> Result<Fel> {
        let target = x0.ctx();
        if x1.ctx() != target {
            return Err(Error::MixedFields);
        }
        if !target.has_level(&self.ctx) {
            return Err(Error::IncompatibleFields {
                field: self.ctx.to_string(),
            });
        }
        Ok(Fel::from_raw(
            target,
            self.eval_raw(target, x0.digits(), x1.digits()),
        ))
    }

    pub fn eval_point(&self, pt: &ProjPoint) -> Result<Fel> {
        self.eval(&pt.x0, &pt.x1)
    }

    pub(crate) fn eval_raw(&self, target: &FieldCtx, x0: &[u32], x1: &[u32]) -> Vec<u32> {
        let d = self.degree;
        let pow0 = powers(target, x0, d);
        let pow1 = powers(target, x1, d);
        let mut acc = target.zero_raw();
        for i in 0..=d {
            let ci = self.coeff_raw(i);
            if FieldCtx::is_zero_raw(ci) {
                continue;
            }
            let mono = target.mul_raw(&pow0[d - i], &pow1[i]);
            let term = target.mul_raw(&mono, &target.lift_raw(ci));
            target.add_raw(&mut acc, &term);
        }
        acc
    }

    /// Partial derivative in `X0` (`var = 0`) or `X1` (`var = 1`).
    pub fn partial(&self, var: usize) -> BinForm {
        assert!(var < 2, "binary forms have two variables");
        let d = self.degree;
        let w = self.ctx.width();
        if d == 0 {
            return BinForm::zero(&self.ctx, 0);
        }
        let mut c = vec![0u32; d * w];
        for j in 0..d {
            // X0-derivative: X0^(d-1-j) X1^j comes from c_j * (d - j).
            // X1-derivative: X0^(d-1-j) X1^j comes from c_(j+1) * (j + 1).
            let (src, k) = if var == 0 { (j, d - j) } else { (j + 1, j + 1) };
            let chunk = &mut c[j * w..(j + 1) * w];
            chunk.copy_from_slice(self.coeff_raw(src));
            self.ctx.scale_int_raw(chunk, k as u64);
        }
        BinForm::from_raw(&self.ctx, d - 1, c)
    }

    /// `f(1, x)`: the coefficient of `x^i` is `c_i`.
    pub fn dehomogenize(&self) -> UPoly {
        UPoly::from_raw(&self.ctx, self.c.clone())
    }

    /// Multiplies by `X0^e0 X1^e1`.
    pub fn mul_monomial(&self, e0: usize, e1: usize) -> BinForm {
        let w = self.ctx.width();
        let degree = self.degree + e0 + e1;
        let mut c = vec![0u32; (degree + 1) * w];
        c[e1 * w..(e1 + self.degree + 1) * w].copy_from_slice(&self.c);
        BinForm::from_raw(&self.ctx, degree, c)
    }

    pub fn try_add(&self, other: &BinForm) -> Result<BinForm> {
        if self.ctx != other.ctx {
            return Err(Error::MixedFields);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut c = self.c.clone();
        self.ctx.add_raw(&mut c, &other.c);
        Ok(BinForm::from_raw(&self.ctx, self.degree, c))
    }

    pub fn scale(&self, k: &Fel) -> BinForm {
        let w = self.ctx.width();
        let mut c = self.c.clone();
        for chunk in c.chunks_mut(w) {
            let t = self.ctx.mul_raw(chunk, k.digits());
            chunk.copy_from_slice(&t);
        }
        BinForm::from_raw(&self.ctx, self.degree, c)
    }

    /// The first `F_q`-rational zero in the order `(1:t)` for `t` in
    /// [`enumerate_field`] order, then `(0:1)`.
    pub fn rational_point(&self) -> Result<Option<ProjPoint>> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let p = self.dehomogenize();
        for t in enumerate_field(&self.ctx) {
            if FieldCtx::is_zero_raw(&p.eval_raw(&self.ctx, t.digits())) {
                return Ok(Some(ProjPoint::new(Fel::one(&self.ctx), t)?));
            }
        }
        if FieldCtx::is_zero_raw(self.coeff_raw(self.degree)) {
            return Ok(Some(ProjPoint::new(
                Fel::zero(&self.ctx),
                Fel::one(&self.ctx),
            )?));
        }
        Ok(None)
    }

    pub fn has_rational_point(&self) -> Result<bool> {
        // c_0 = f(1:0) and c_d = f(0:1): cheap early exits.
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        if FieldCtx::is_zero_raw(self.coeff_raw(0))
            || FieldCtx::is_zero_raw(self.coeff_raw(self.degree))
        {
            return Ok(true);
        }
        Ok(self.rational_point()?.is_some())
    }

    /// `(A f)(X0, X1) = f(a X0 + b X1, c X0 + d X1)`.
    ///
    /// With this convention `A (B f) = (B A) f`: substitution is a right action.
    pub fn act(&self, m: &SL2Mat) -> Result<BinForm> {
        if m.ctx != self.ctx {
            return Err(Error::MixedFields);
        }
        let ctx = &self.ctx;
        let d = self.degree;
        let l1 = UPoly::from_coeffs(ctx, &[m.a.clone(), m.b.clone()])?;
        let l2 = UPoly::from_coeffs(ctx, &[m.c.clone(), m.d.clone()])?;
        let mut p1 = vec![UPoly::one(ctx)];
        let mut p2 = vec![UPoly::one(ctx)];
        for k in 0..d {
            p1.push(&p1[k] * &l1);
            p2.push(&p2[k] * &l2);
        }
        let mut acc = UPoly::zero(ctx);
        for i in 0..=d {
            let ci = self.coeff_raw(i);
            if FieldCtx::is_zero_raw(ci) {
                continue;
            }
            acc = &acc + &(&p1[d - i] * &p2[i]).scale_raw(ci);
        }
        let w = ctx.width();
        let mut c = acc.raw().to_vec();
        c.resize((d + 1) * w, 0);
        Ok(BinForm::from_raw(ctx, d, c))
    }
}

fn powers(ctx: &FieldCtx, x: &[u32], n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(ctx.one_raw());
    for k in 0..n {
        let next = ctx.mul_raw(&out[k], x);
        out.push(next);
    }
    out
}

impl PartialEq for BinForm {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.c == other.c && self.ctx == other.ctx
    }
}

impl Eq for BinForm {}

impl Hash for BinForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.degree.hash(state);
        self.c.hash(state);
    }
}

/// Lexicographic on `c_0, ..., c_d`, `c_0` most significant.
impl Ord for BinForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.c.cmp(&other.c))
    }
}

impl PartialOrd for BinForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_element_list(&self.ctx, &self.coeffs()))
    }
}

impl fmt::Debug for BinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinForm[{}]({})", self.ctx, self)
    }
}

/// A point `(x0 : x1)` of `P^1`, normalized so the first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    x0: Fel,
    x1: Fel,
}

impl ProjPoint {
    pub fn new(x0: Fel, x1: Fel) -> Result<ProjPoint> {
        if x0.ctx() != x1.ctx() {
            return Err(Error::MixedFields);
        }
        if !x0.is_zero() {
            let inv = x0.inv()?;
            Ok(ProjPoint {
                x1: &x1 * &inv,
                x0: Fel::one(x0.ctx()),
            })
        } else if !x1.is_zero() {
            Ok(ProjPoint {
                x1: Fel::one(x1.ctx()),
                x0,
            })
        } else {
            Err(Error::ZeroPoint)
        }
    }

    pub fn x0(&self) -> &Fel {
        &self.x0
    }

    pub fn x1(&self) -> &Fel {
        &self.x1
    }

    /// All `q + 1` points of `P^1(F_q)`.
    pub fn rational_points(ctx: &FieldCtx) -> Vec<ProjPoint> {
        let mut pts: Vec<ProjPoint> = enumerate_field(ctx)
            .into_iter()
            .map(|t| ProjPoint {
                x0: Fel::one(ctx),
                x1: t,
            })
            .collect();
        pts.push(ProjPoint {
            x0: Fel::zero(ctx),
            x1: Fel::one(ctx),
        });
        pts
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.x0, self.x1)
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A matrix `[[a, b], [c, d]]` with `ad - bc = 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct SL2Mat {
    ctx: FieldCtx,
    a: Fel,
    b: Fel,
    c: Fel,
    d: Fel,
}

impl SL2Mat {
    pub fn new(a: Fel, b: Fel, c: Fel, d: Fel) -> Result<SL2Mat> {
        let ctx = a.ctx().clone();
        if [&b, &c, &d].iter().any(|x| x.ctx() != &ctx) {
            return Err(Error::MixedFields);
        }
        if !(&(&a * &d) - &(&b * &c)).is_one() {
            return Err(Error::NotSpecialLinear);
        }
        Ok(SL2Mat { ctx, a, b, c, d })
    }

    pub fn identity(ctx: &FieldCtx) -> SL2Mat {
        SL2Mat {
            ctx: ctx.clone(),
            a: Fel::one(ctx),
            b: Fel::zero(ctx),
            c: Fel::zero(ctx),
            d: Fel::one(ctx),
        }
    }

    /// `[[1, t], [0, 1]]`.
    pub fn upper(t: &Fel) -> SL2Mat {
        let ctx = t.ctx();
        SL2Mat {
            ctx: ctx.clone(),
            a: Fel::one(ctx),
            b: t.clone(),
            c: Fel::zero(ctx),
            d: Fel::one(ctx),
        }
    }

    /// `[[1, 0], [t, 1]]`.
    pub fn lower(t: &Fel) -> SL2Mat {
        let ctx = t.ctx();
        SL2Mat {
            ctx: ctx.clone(),
            a: Fel::one(ctx),
            b: Fel::zero(ctx),
            c: t.clone(),
            d: Fel::one(ctx),
        }
    }

    pub fn entries(&self) -> [&Fel; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, o: &SL2Mat) -> SL2Mat {
        SL2Mat {
            ctx: self.ctx.clone(),
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }
}

impl fmt::Debug for SL2Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// All of `SL_2(F_q)`, `q (q^2 - 1)` matrices, in lexicographic order of
/// `(a, b, c, d)`.
pub fn enumerate_sl2(q: u64, guards: &Guards) -> Result<Vec<SL2Mat>> {
    if q > guards.sl2_q {
        return Err(Error::TooLarge {
            what: format!("SL2 enumeration for q = {q}"),
            limit: guards.sl2_q,
        });
    }
    let ctx = canonical_field(q)?;
    let elems = enumerate_field(&ctx);
    let mut out = Vec::with_capacity((q * (q * q - 1)) as usize);
    for a in &elems {
        for b in &elems {
            for c in &elems {
                if a.is_zero() {
                    // need -bc = 1, so c = -1/b and d is free
                    if b.is_zero() || !(&(b * c) + &Fel::one(&ctx)).is_zero() {
                        continue;
                    }
                    for d in &elems {
                        out.push(SL2Mat {
                            ctx: ctx.clone(),
                            a: a.clone(),
                            b: b.clone(),
                            c: c.clone(),
                            d: d.clone(),
                        });
                    }
                } else {
                    let d = &(&Fel::one(&ctx) + &(b * c)) * &a.inv()?;
                    out.push(SL2Mat {
                        ctx: ctx.clone(),
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                        d,
                    });
                }
            }
        }
    }
    out.sort_by(|x, y| {
        x.entries()
            .iter()
            .zip(y.entries().iter())
            .map(|(u, v)| u.cmp(v))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    });
    Ok(out)
}

/// `G_q`: all degree-`(q+1)` forms without an `F_q`-rational zero, in
/// lexicographic coefficient order.
pub fn enumerate_gq(q: u64, guards: &Guards) -> Result<Vec<BinForm>> {
    if q > guards.enumerate_q {
        return Err(Error::TooLarge {
            what: format!("G_q enumeration for q = {q}"),
            limit: guards.enumerate_q,
        });
    }
    let ctx = canonical_field(q)?;
    let d = q as usize + 1;
    let total = q.checked_pow(d as u32 + 1).ok_or(Error::TooLarge {
        what: format!("G_q enumeration for q = {q}"),
        limit: guards.enumerate_q,
    })?;
    let digits: Vec<Vec<u32>> = (0..q).map(|i| ctx.digits_of_index(i)).collect();
    let mut out = Vec::new();
    for n in 0..total {
        // c_0 is the most significant base-q digit of n
        let mut c = Vec::with_capacity((d + 1) * ctx.width());
        let mut div = total / q;
        let mut rem = n;
        for _ in 0..=d {
            c.extend_from_slice(&digits[(rem / div) as usize]);
            rem %= div;
            div = (div / q).max(1);
        }
        let f = BinForm::from_raw(&ctx, d, c);
        if !f.is_zero() && !f.has_rational_point()? {
            out.push(f);
        }
    }
    Ok(out)
}

/// A uniform draw from `G_q` by rejection sampling.
pub fn random_gq<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> BinForm {
    let q = ctx.order_u64().expect("small field");
    let d = q as usize + 1;
    loop {
        let c: Vec<u32> = (0..=d)
            .flat_map(|_| ctx.digits_of_index(rng.gen_range(0..q)))
            .collect();
        let f = BinForm::from_raw(ctx, d, c);
        if !f.is_zero() && !f.has_rational_point().expect("nonzero") {
            return f;
        }
    }
}

/// A uniformly random element of `SL_2(F_q)`.
pub fn random_sl2<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> SL2Mat {
    let q = ctx.order_u64().expect("small field");
    loop {
        let e: Vec<Fel> = (0..3)
            .map(|_| Fel::from_index(ctx, rng.gen_range(0..q)))
            .collect();
        if e[0].is_zero() {
            continue;
        }
        // d = (1 + b c) / a
        let d = &(&Fel::one(ctx) + &(&e[1] * &e[2])) * &e[0].inv().expect("nonzero");
        return SL2Mat::new(e[0].clone(), e[1].clone(), e[2].clone(), d).expect("det 1");
    }
}
