//! Dense univariate polynomials over a [`FieldCtx`].
//!
//! Coefficients are stored lowest degree first as one flat digit vector with
//! stride `ctx.width()`; the zero polynomial is the empty vector and there is
//! never a trailing zero coefficient.

mod factor;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Fel, FieldCtx};

pub use factor::Factorization;

#[derive(Clone)]
pub struct UPoly {
    ctx: FieldCtx,
    c: Vec<u32>,
}

impl UPoly {
    pub fn zero(ctx: &FieldCtx) -> UPoly {
        UPoly {
            ctx: ctx.clone(),
            c: Vec::new(),
        }
    }

    pub fn one(ctx: &FieldCtx) -> UPoly {
        UPoly {
            ctx: ctx.clone(),
            c: ctx.one_raw(),
        }
    }

    /// The polynomial `X`.
    pub fn x(ctx: &FieldCtx) -> UPoly {
        let mut c = ctx.zero_raw();
        c.extend(ctx.one_raw());
        UPoly {
            ctx: ctx.clone(),
            c,
        }
    }

    /// `c * X^deg`.
    pub fn monomial(c: &Fel, deg: usize) -> UPoly {
        let ctx = c.ctx();
        let mut v = vec![0; deg * ctx.width()];
        v.extend_from_slice(c.digits());
        UPoly::from_raw(ctx, v)
    }

    pub(crate) fn from_raw(ctx: &FieldCtx, mut c: Vec<u32>) -> UPoly {
        let w = ctx.width();
        debug_assert_eq!(c.len() % w, 0);
        while c.len() >= w && FieldCtx::is_zero_raw(&c[c.len() - w..]) {
            c.truncate(c.len() - w);
        }
        UPoly {
            ctx: ctx.clone(),
            c,
        }
    }

    /// From coefficients, lowest degree first.
    pub fn from_coeffs(ctx: &FieldCtx, coeffs: &[Fel]) -> Result<UPoly> {
        if coeffs.iter().any(|x| x.ctx() != ctx) {
            return Err(Error::MixedFields);
        }
        let c = coeffs
            .iter()
            .flat_map(|x| x.digits().iter().copied())
            .collect();
        Ok(UPoly::from_raw(ctx, c))
    }

    /// From prime-field integers, lowest degree first.
    pub fn from_ints(ctx: &FieldCtx, coeffs: &[i64]) -> UPoly {
        let c = coeffs
            .iter()
            .flat_map(|&n| Fel::from_int(ctx, n).into_raw())
            .collect();
        UPoly::from_raw(ctx, c)
    }

    /// Parses `c0,c1,...` (prime-field integers) or `e0;e1;...` with each
    /// `ei` in the element syntax of [`Fel::parse`].
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<UPoly> {
        let coeffs = parse_element_list(ctx, s)?;
        UPoly::from_coeffs(ctx, &coeffs)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.c
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let n = self.len();
        (n > 0).then(|| n - 1)
    }

    fn len(&self) -> usize {
        self.c.len() / self.ctx.width()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.len() == 1 && self.ctx.is_one_raw(&self.c)
    }

    pub(crate) fn coeff_raw(&self, i: usize) -> &[u32] {
        let w = self.ctx.width();
        &self.c[i * w..(i + 1) * w]
    }

    /// Coefficient of `X^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Fel {
        if i < self.len() {
            Fel::from_raw(&self.ctx, self.coeff_raw(i).to_vec())
        } else {
            Fel::zero(&self.ctx)
        }
    }

    pub fn coeffs(&self) -> Vec<Fel> {
        (0..self.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn leading(&self) -> Option<Fel> {
        self.degree().map(|d| self.coeff(d))
    }

    pub fn is_monic(&self) -> bool {
        self.degree()
            .is_some_and(|d| self.ctx.is_one_raw(self.coeff_raw(d)))
    }

    fn check(&self, other: &UPoly) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn try_add(&self, other: &UPoly) -> Result<UPoly> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &UPoly) -> Result<UPoly> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn try_mul(&self, other: &UPoly) -> Result<UPoly> {
        self.check(other)?;
        Ok(UPoly::from_raw(
            &self.ctx,
            poly_mul(&self.ctx, &self.c, &other.c),
        ))
    }

    fn add_unchecked(&self, other: &UPoly) -> UPoly {
        let (long, short) = if self.c.len() >= other.c.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut c = long.c.clone();
        self.ctx.add_raw(&mut c[..short.c.len()], &short.c);
        UPoly::from_raw(&self.ctx, c)
    }

    fn sub_unchecked(&self, other: &UPoly) -> UPoly {
        let mut c = self.c.clone();
        if c.len() < other.c.len() {
            c.resize(other.c.len(), 0);
        }
        self.ctx.sub_raw(&mut c[..other.c.len()], &other.c);
        UPoly::from_raw(&self.ctx, c)
    }

    /// Multiplies every coefficient by `k`.
    pub fn scale(&self, k: &Fel) -> UPoly {
        assert!(k.ctx() == &self.ctx, "scalar from another field");
        self.scale_raw(k.digits())
    }

    pub(crate) fn scale_raw(&self, k: &[u32]) -> UPoly {
        let w = self.ctx.width();
        let mut c = vec![0; self.c.len()];
        for (out, a) in c.chunks_mut(w).zip(self.c.chunks(w)) {
            self.ctx.mul_into(a, k, out);
        }
        UPoly::from_raw(&self.ctx, c)
    }

    /// The monic associate (zero stays zero).
    pub fn monic(&self) -> UPoly {
        match self.degree() {
            None => self.clone(),
            Some(d) => {
                let inv = self.ctx.inv_raw(self.coeff_raw(d)).expect("nonzero");
                self.scale_raw(&inv)
            }
        }
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divmod(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        self.check(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.divmod_unchecked(d))
    }

    pub(crate) fn divmod_unchecked(&self, d: &UPoly) -> (UPoly, UPoly) {
        let (q, r) = poly_divmod(&self.ctx, &self.c, &d.c, true);
        (UPoly::from_raw(&self.ctx, q), UPoly::from_raw(&self.ctx, r))
    }

    pub(crate) fn rem_unchecked(&self, d: &UPoly) -> UPoly {
        let (_, r) = poly_divmod(&self.ctx, &self.c, &d.c, false);
        UPoly::from_raw(&self.ctx, r)
    }

    /// Exact quotient; panics in debug builds if `d` does not divide `self`.
    pub(crate) fn div_exact(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.divmod_unchecked(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub(crate) fn mul_mod(&self, other: &UPoly, m: &UPoly) -> UPoly {
        UPoly::from_raw(&self.ctx, poly_mul(&self.ctx, &self.c, &other.c)).rem_unchecked(m)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &UPoly) -> UPoly {
        let base = self.rem_unchecked(m);
        let mut result = UPoly::one(&self.ctx).rem_unchecked(m);
        for i in (0..e.bits()).rev() {
            result = result.mul_mod(&result, m);
            if e.bit(i) {
                result = result.mul_mod(&base, m);
            }
        }
        result
    }

    /// Horner evaluation at a point of this field or of a descendant field.
    pub fn eval(&self, x: &Fel) -> Result<Fel> {
        let target = x.ctx();
        if !target.has_level(&self.ctx) {
            return Err(Error::IncompatibleFields {
                field: self.ctx.to_string(),
            });
        }
        Ok(Fel::from_raw(target, self.eval_raw(target, x.digits())))
    }

    pub(crate) fn eval_raw(&self, target: &FieldCtx, x: &[u32]) -> Vec<u32> {
        let mut acc = target.zero_raw();
        for i in (0..self.len()).rev() {
            acc = target.mul_raw(&acc, x);
            let ci = target.lift_raw(self.coeff_raw(i));
            target.add_raw(&mut acc, &ci);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> UPoly {
        let w = self.ctx.width();
        if self.len() <= 1 {
            return UPoly::zero(&self.ctx);
        }
        let mut c = self.c[w..].to_vec();
        for (i, chunk) in c.chunks_mut(w).enumerate() {
            self.ctx.scale_int_raw(chunk, (i + 1) as u64);
        }
        UPoly::from_raw(&self.ctx, c)
    }

    /// Monic gcd; `gcd(a, 0) = monic(a)`.
    pub fn monic_gcd(&self, other: &UPoly) -> Result<UPoly> {
        self.check(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        Ok(self.gcd_unchecked(other))
    }

    pub(crate) fn gcd_unchecked(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem_unchecked(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` not normalized.
    pub fn ext_gcd(&self, other: &UPoly) -> (UPoly, UPoly, UPoly) {
        let ctx = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UPoly::one(ctx), UPoly::zero(ctx));
        let (mut t0, mut t1) = (UPoly::zero(ctx), UPoly::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divmod_unchecked(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub_unchecked(&(&q * &s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub_unchecked(&(&q * &t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        (r0, s0, t0)
    }

    /// Reinterprets the coefficients in a descendant field.
    pub fn lift(&self, target: &FieldCtx) -> Result<UPoly> {
        if !target.has_level(&self.ctx) {
            return Err(Error::IncompatibleFields {
                field: self.ctx.to_string(),
            });
        }
        let c = (0..self.len())
            .flat_map(|i| target.lift_raw(self.coeff_raw(i)))
            .collect();
        Ok(UPoly::from_raw(target, c))
    }

    /// Canonical order: by degree, then lexicographically on the coefficients
    /// from the constant term up.
    pub fn canonical_cmp(&self, other: &UPoly) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.c.cmp(&other.c))
    }
}

pub(crate) fn parse_element_list(ctx: &FieldCtx, s: &str) -> Result<Vec<Fel>> {
    let s = s.trim();
    if s.contains(';') {
        s.split(';').map(|t| Fel::parse(ctx, t)).collect()
    } else {
        let tokens: Vec<&str> = s.split(',').collect();
        if ctx.width() > 1 && !tokens.len().is_multiple_of(ctx.width()) {
            return Err(Error::Parse(format!(
                "{} digits is not a whole number of {}-digit elements; separate elements with ';'",
                tokens.len(),
                ctx.width()
            )));
        }
        tokens
            .chunks(ctx.width())
            .map(|chunk| Fel::parse(ctx, &chunk.join(",")))
            .collect()
    }
}

pub(crate) fn format_element_list(ctx: &FieldCtx, elems: &[Fel]) -> String {
    let parts: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
    parts.join(if ctx.width() == 1 { "," } else { ";" })
}

fn poly_mul(ctx: &FieldCtx, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let w = ctx.width();
    let (na, nb) = (a.len() / w, b.len() / w);
    if w == 1 {
        let p = ctx.p() as u64;
        let mut acc = vec![0u64; na + nb - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let ai = ai as u64;
            for (j, &bj) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + ai * bj as u64) % p;
            }
        }
        return acc.into_iter().map(|x| x as u32).collect();
    }
    let mut out = vec![0u32; (na + nb - 1) * w];
    let mut tmp = vec![0u32; w];
    for i in 0..na {
        let ai = &a[i * w..(i + 1) * w];
        if FieldCtx::is_zero_raw(ai) {
            continue;
        }
        for j in 0..nb {
            let bj = &b[j * w..(j + 1) * w];
            if FieldCtx::is_zero_raw(bj) {
                continue;
            }
            ctx.mul_into(ai, bj, &mut tmp);
            ctx.add_raw(&mut out[(i + j) * w..(i + j + 1) * w], &tmp);
        }
    }
    out
}

/// Returns `(quotient, remainder)` digit vectors (not normalized).
fn poly_divmod(ctx: &FieldCtx, a: &[u32], d: &[u32], want_q: bool) -> (Vec<u32>, Vec<u32>) {
    let w = ctx.width();
    let (na, nd) = (a.len() / w, d.len() / w);
    assert!(nd > 0, "division by the zero polynomial");
    if na < nd {
        return (Vec::new(), a.to_vec());
    }
    let lc_inv = ctx
        .inv_raw(&d[(nd - 1) * w..])
        .expect("nonzero leading coefficient");
    let mut q = if want_q {
        vec![0u32; (na - nd + 1) * w]
    } else {
        Vec::new()
    };
    if w == 1 {
        let p = ctx.p() as u64;
        let inv = lc_inv[0] as u64;
        let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
        for i in (nd - 1..na).rev() {
            let c = (r[i] * inv) % p;
            if c == 0 {
                continue;
            }
            if want_q {
                q[i + 1 - nd] = c as u32;
            }
            let negc = p - c;
            let off = i + 1 - nd;
            for (k, &dk) in d.iter().enumerate() {
                r[off + k] = (r[off + k] + negc * dk as u64) % p;
            }
        }
        r.truncate(nd - 1);
        return (q, r.into_iter().map(|x| x as u32).collect());
    }
    let mut r = a.to_vec();
    let mut tmp = vec![0u32; w];
    for i in (nd - 1..na).rev() {
        let c = ctx.mul_raw(&r[i * w..(i + 1) * w], &lc_inv);
        if FieldCtx::is_zero_raw(&c) {
            continue;
        }
        let off = i + 1 - nd;
        if want_q {
            q[off * w..(off + 1) * w].copy_from_slice(&c);
        }
        for k in 0..nd {
            let dk = &d[k * w..(k + 1) * w];
            if FieldCtx::is_zero_raw(dk) {
                continue;
            }
            ctx.mul_into(&c, dk, &mut tmp);
            ctx.sub_raw(&mut r[(off + k) * w..(off + k + 1) * w], &tmp);
        }
    }
    r.truncate((nd - 1) * w);
    (q, r)
}

impl PartialEq for UPoly {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.ctx == other.ctx
    }
}

impl Eq for UPoly {}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly[{}]({})", self.ctx, self)
    }
}

/// Coefficients from the constant term up, in the list syntax accepted by
/// [`UPoly::parse`]. The zero polynomial prints as `0`.
impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        f.write_str(&format_element_list(&self.ctx, &self.coeffs()))
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr for &UPoly {
            type Output = UPoly;
            fn $m(self, rhs: &UPoly) -> UPoly {
                self.$try(rhs).expect("operands over the same field")
            }
        }
        impl $tr for UPoly {
            type Output = UPoly;
            fn $m(self, rhs: UPoly) -> UPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        let mut c = self.c.clone();
        self.ctx.neg_raw(&mut c);
        UPoly::from_raw(&self.ctx, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::canonical_field;

    fn f3() -> FieldCtx {
        canonical_field(3).unwrap()
    }

    #[test]
    fn ring_arithmetic() {
        let f3 = f3();
        let a = UPoly::from_ints(&f3, &[1, 1]);
        let b = UPoly::from_ints(&f3, &[2, 1]);
        assert_eq!(&a * &b, UPoly::from_ints(&f3, &[2, 0, 1]));
        assert_eq!(&a + &UPoly::zero(&f3), a);
        let x2 = UPoly::from_ints(&f3, &[0, 0, 1]);
        let (q, r) = x2.divmod(&UPoly::x(&f3)).unwrap();
        assert_eq!(q, UPoly::x(&f3));
        assert!(r.is_zero());
        assert!(matches!(
            a.divmod(&UPoly::zero(&f3)),
            Err(Error::DivisionByZero)
        ));
        let f9 = canonical_field(9).unwrap();
        assert!(matches!(
            a.try_add(&UPoly::one(&f9)),
            Err(Error::MixedFields)
        ));
    }

    #[test]
    fn derivative_and_eval() {
        let f3 = f3();
        assert!(UPoly::from_ints(&f3, &[0, 0, 0, 1]).derivative().is_zero());
        let d = UPoly::from_ints(&f3, &[0, 0, 0, 1, 1]).derivative();
        assert_eq!(d, UPoly::from_ints(&f3, &[0, 0, 0, 1]));
        let f9 = canonical_field(9).unwrap();
        let t = f9.generator().unwrap();
        assert!(UPoly::from_ints(&f3, &[1, 0, 1])
            .eval(&t)
            .unwrap()
            .is_zero());
        let f5 = canonical_field(5).unwrap();
        assert!(UPoly::from_ints(&f3, &[1]).eval(&Fel::one(&f5)).is_err());
    }

    #[test]
    fn gcds() {
        let f3 = f3();
        let a = UPoly::from_ints(&f3, &[-1, 0, 1]);
        let b = UPoly::from_ints(&f3, &[-1, 1]);
        assert_eq!(a.monic_gcd(&b).unwrap(), UPoly::from_ints(&f3, &[2, 1]));
        let c = UPoly::from_ints(&f3, &[2, 0, 2]);
        assert_eq!(
            c.monic_gcd(&UPoly::zero(&f3)).unwrap(),
            UPoly::from_ints(&f3, &[1, 0, 1])
        );
        let i1 = UPoly::from_ints(&f3, &[1, 0, 1]);
        let i2 = UPoly::from_ints(&f3, &[2, 1, 1]);
        assert!(i1.monic_gcd(&i2).unwrap().is_one());
        assert!(matches!(
            UPoly::zero(&f3).monic_gcd(&UPoly::zero(&f3)),
            Err(Error::BothZero)
        ));
    }

    #[test]
    fn ext_gcd_cofactors() {
        let f5 = canonical_field(5).unwrap();
        let a = UPoly::from_ints(&f5, &[1, 2, 3, 4]);
        let b = UPoly::from_ints(&f5, &[2, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn parse_and_display() {
        let f3 = f3();
        let p = UPoly::parse(&f3, "1,0,2,0,1").unwrap();
        assert_eq!(p.degree(), Some(4));
        assert_eq!(p.to_string(), "1,0,2,0,1");
        let f9 = canonical_field(9).unwrap();
        let q = UPoly::parse(&f9, "0,1;1,0;1").unwrap();
        assert_eq!(q.to_string(), "0,1;1,0;1,0");
        let r = UPoly::parse(&f9, "0,1,1,0").unwrap();
        assert_eq!(r.degree(), Some(1));
        assert!(UPoly::parse(&f9, "0,1,1").is_err());
    }
}
