//! Finite fields as towers of simple extensions.
//!
//! A [`FieldCtx`] is either a prime field `F_p` or `B[t]/(m)` for a base
//! context `B` and a monic irreducible `m` over `B`. Elements are stored as
//! flat little-endian digit vectors over `F_p`: an element of `B[t]/(m)` is the
//! concatenation of its `deg m` coefficients over `B`, each of which is again
//! flattened. Two consequences are used throughout the crate:
//!
//! * addition, negation and scaling by an integer are digitwise mod `p`,
//!   independent of the tower;
//! * an element of any ancestor field `A` embeds into a descendant by padding
//!   its digits with zeros, and the digit vector of a descendant element split
//!   into chunks of `A.width()` digits is its coordinate vector over `A`.
//!
//! Lexicographic order on elements is lexicographic order on the digit
//! vector, first digit most significant. All deterministic tie-breaking
//! (enumeration order, lex-smallest roots, canonical moduli) uses it.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::unipoly::UPoly;

/// Descriptor of a finite field. Cheap to clone; immutable.
#[derive(Clone)]
pub struct FieldCtx(Arc<FieldData>);

struct FieldData {
    p: u32,
    width: usize,
    order: BigUint,
    kind: Kind,
}

enum Kind {
    Prime,
    Extension {
        base: FieldCtx,
        degree: usize,
        /// Monic modulus, `(degree + 1) * base.width()` digits.
        modulus: Vec<u32>,
    },
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^k`, returning `(p, k)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn canonical_cache() -> &'static Mutex<HashMap<u64, FieldCtx>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, FieldCtx>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The field of order `q`: `F_p` itself, or `F_p[z]/(m)` with `m` the
/// lexicographically smallest monic irreducible of degree `k` (coefficients
/// compared constant term first).
pub fn canonical_field(q: u64) -> Result<FieldCtx> {
    let (p, k) = prime_power(q).ok_or(Error::NotAPrimePower(q))?;
    if let Some(ctx) = canonical_cache().lock().unwrap().get(&q) {
        return Ok(ctx.clone());
    }
    let fp = FieldCtx::prime(p)?;
    let ctx = if k == 1 {
        fp
    } else {
        let modulus = smallest_monic_irreducible(&fp, k as usize);
        FieldCtx::extension_unchecked(&fp, &modulus)
    };
    canonical_cache().lock().unwrap().insert(q, ctx.clone());
    Ok(ctx)
}

/// Lex-smallest monic irreducible of degree `k` over `base`, using the
/// Rabin test.
pub(crate) fn smallest_monic_irreducible(base: &FieldCtx, k: usize) -> UPoly {
    let elems = enumerate_field(base);
    let n = elems.len();
    let mut idx = vec![0usize; k];
    loop {
        let mut coeffs: Vec<Fel> = idx.iter().map(|&i| elems[i].clone()).collect();
        coeffs.push(Fel::one(base));
        let m = UPoly::from_coeffs(base, &coeffs).expect("same field");
        if m.is_irreducible().expect("degree >= 1") {
            return m;
        }
        // Increment with the constant term most significant.
        let mut pos = k;
        loop {
            if pos == 0 {
                unreachable!("an irreducible polynomial of every degree exists");
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

impl FieldCtx {
    pub fn prime(p: u64) -> Result<FieldCtx> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotAPrime(p));
        }
        Ok(FieldCtx(Arc::new(FieldData {
            p: p as u32,
            width: 1,
            order: BigUint::from(p),
            kind: Kind::Prime,
        })))
    }

    /// `base[t]/(modulus)`; the modulus must be monic and irreducible.
    pub fn extension(base: &FieldCtx, modulus: &UPoly) -> Result<FieldCtx> {
        if modulus.ctx() != base {
            return Err(Error::MixedFields);
        }
        let deg = modulus.degree().ok_or(Error::DegreeZero)?;
        if deg == 0 {
            return Err(Error::DegreeZero);
        }
        if !base.is_one_raw(modulus.coeff_raw(deg)) {
            return Err(Error::NotMonic);
        }
        if !modulus.is_irreducible()? {
            return Err(Error::NotIrreducible);
        }
        Ok(Self::extension_unchecked(base, modulus))
    }

    /// Like [`FieldCtx::extension`] for a modulus already known to be monic
    /// and irreducible (e.g. a factor returned by [`UPoly::factor`]).
    pub(crate) fn extension_unchecked(base: &FieldCtx, modulus: &UPoly) -> FieldCtx {
        let degree = modulus.degree().expect("nonzero modulus");
        debug_assert!(degree >= 1);
        FieldCtx(Arc::new(FieldData {
            p: base.0.p,
            width: base.width() * degree,
            order: base.order().pow(degree as u32),
            kind: Kind::Extension {
                base: base.clone(),
                degree,
                modulus: modulus.raw().to_vec(),
            },
        }))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    pub(crate) fn p(&self) -> u32 {
        self.0.p
    }

    pub fn order(&self) -> &BigUint {
        &self.0.order
    }

    /// The order as a `u64`, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.0.order.to_u64()
    }

    /// Number of `F_p` digits per element, i.e. the degree over the prime field.
    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self.0.kind, Kind::Prime)
    }

    /// Degree over the immediate base (1 for a prime field).
    pub fn degree(&self) -> usize {
        match &self.0.kind {
            Kind::Prime => 1,
            Kind::Extension { degree, .. } => *degree,
        }
    }

    pub fn base(&self) -> Option<&FieldCtx> {
        match &self.0.kind {
            Kind::Prime => None,
            Kind::Extension { base, .. } => Some(base),
        }
    }

    pub fn modulus(&self) -> Option<UPoly> {
        match &self.0.kind {
            Kind::Prime => None,
            Kind::Extension { base, modulus, .. } => Some(UPoly::from_raw(base, modulus.clone())),
        }
    }

    /// This field followed by its bases, down to the prime field.
    pub fn tower(&self) -> impl Iterator<Item = &FieldCtx> {
        std::iter::successors(Some(self), |c| c.base())
    }

    /// Whether `sub` is this field or one of its bases.
    pub fn has_level(&self, sub: &FieldCtx) -> bool {
        self.tower().any(|c| c == sub)
    }

    /// The tower level of the given order, if any.
    pub fn level_of_order(&self, order: &BigUint) -> Option<&FieldCtx> {
        self.tower().find(|c| c.order() == order)
    }

    pub fn same(&self, other: &FieldCtx) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Degree over `F_q` for `q = p^k`, when `k` divides the width.
    pub fn degree_over(&self, q: u64) -> Option<usize> {
        let (p, k) = prime_power(q)?;
        if p != self.characteristic() || !self.width().is_multiple_of(k as usize) {
            return None;
        }
        Some(self.width() / k as usize)
    }

    // ---- raw digit-vector arithmetic -------------------------------------

    pub(crate) fn zero_raw(&self) -> Vec<u32> {
        vec![0; self.width()]
    }

    pub(crate) fn one_raw(&self) -> Vec<u32> {
        let mut v = self.zero_raw();
        v[0] = 1;
        v
    }

    pub(crate) fn raw_from_u64(&self, n: u64) -> Vec<u32> {
        let mut v = self.zero_raw();
        v[0] = (n % self.0.p as u64) as u32;
        v
    }

    #[inline]
    pub(crate) fn is_zero_raw(a: &[u32]) -> bool {
        a.iter().all(|&d| d == 0)
    }

    #[inline]
    pub(crate) fn is_one_raw(&self, a: &[u32]) -> bool {
        a[0] == 1 && a[1..].iter().all(|&d| d == 0)
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: &mut [u32], b: &[u32]) {
        let p = self.0.p;
        for (x, &y) in a.iter_mut().zip(b) {
            let s = *x + y;
            *x = if s >= p { s - p } else { s };
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: &mut [u32], b: &[u32]) {
        let p = self.0.p;
        for (x, &y) in a.iter_mut().zip(b) {
            *x = if *x >= y { *x - y } else { *x + p - y };
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: &mut [u32]) {
        let p = self.0.p;
        for x in a.iter_mut() {
            if *x != 0 {
                *x = p - *x;
            }
        }
    }

    /// Multiplies by the integer `k` (an element of the prime field).
    pub(crate) fn scale_int_raw(&self, a: &mut [u32], k: u64) {
        let p = self.0.p as u64;
        let k = k % p;
        for x in a.iter_mut() {
            *x = ((*x as u64 * k) % p) as u32;
        }
    }

    pub(crate) fn mul_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = self.zero_raw();
        self.mul_into(a, b, &mut out);
        out
    }

    /// `out = a * b`. `out` must not alias the inputs.
    pub(crate) fn mul_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        match &self.0.kind {
            Kind::Prime => {
                out[0] = ((a[0] as u64 * b[0] as u64) % self.0.p as u64) as u32;
            }
            Kind::Extension {
                base,
                degree,
                modulus,
            } => ext_mul(self.0.p, base, *degree, modulus, a, b, out),
        }
    }

    pub(crate) fn inv_raw(&self, a: &[u32]) -> Option<Vec<u32>> {
        if Self::is_zero_raw(a) {
            return None;
        }
        match &self.0.kind {
            Kind::Prime => Some(vec![inv_mod(a[0], self.0.p)]),
            Kind::Extension { base, degree, .. } => {
                let modulus = self.modulus().expect("extension");
                let (g, s, _) = UPoly::from_raw(base, a.to_vec()).ext_gcd(&modulus);
                // g is a nonzero constant because the modulus is irreducible.
                let ginv = base.inv_raw(g.coeff_raw(0))?;
                let mut out = s.scale_raw(&ginv).raw().to_vec();
                out.resize(degree * base.width(), 0);
                Some(out)
            }
        }
    }

    pub(crate) fn pow_u64_raw(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut result = self.one_raw();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_raw(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        result
    }

    pub(crate) fn pow_big_raw(&self, a: &[u32], e: &BigUint) -> Vec<u32> {
        let mut result = self.one_raw();
        for i in (0..e.bits()).rev() {
            result = self.mul_raw(&result, &result);
            if e.bit(i) {
                result = self.mul_raw(&result, a);
            }
        }
        result
    }

    /// Embeds an element of an ancestor level (given by its digits).
    pub(crate) fn lift_raw(&self, a: &[u32]) -> Vec<u32> {
        let mut v = a.to_vec();
        v.resize(self.width(), 0);
        v
    }

    /// `a^(p^-1)`: the inverse of the absolute Frobenius.
    pub(crate) fn pth_root_raw(&self, a: &[u32]) -> Vec<u32> {
        let mut r = a.to_vec();
        for _ in 1..self.width() {
            r = self.pow_u64_raw(&r, self.0.p as u64);
        }
        r
    }

    /// Digits of the `index`-th element in lexicographic order.
    pub(crate) fn digits_of_index(&self, mut index: u64) -> Vec<u32> {
        let p = self.0.p as u64;
        let mut v = self.zero_raw();
        for d in v.iter_mut().rev() {
            *d = (index % p) as u32;
            index /= p;
        }
        v
    }

    pub(crate) fn index_of_digits(&self, a: &[u32]) -> u64 {
        let p = self.0.p as u64;
        a.iter().fold(0u64, |acc, &d| acc * p + d as u64)
    }

    /// The class of `t` in `base[t]/(m)`.
    pub fn generator(&self) -> Option<Fel> {
        let base = self.base()?;
        let mut v = self.zero_raw();
        if self.degree() > 1 {
            v[base.width()] = 1;
        } else {
            // degree-one extension: t is the root of the linear modulus
            let m = self.modulus().expect("extension");
            let mut c = m.coeff_raw(0).to_vec();
            base.neg_raw(&mut c);
            v.copy_from_slice(&c);
        }
        Some(Fel {
            ctx: self.clone(),
            v,
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn ext_mul(
    p: u32,
    base: &FieldCtx,
    m: usize,
    modulus: &[u32],
    a: &[u32],
    b: &[u32],
    out: &mut [u32],
) {
    let w = base.width();
    if w == 1 {
        let p = p as u64;
        let mut acc = vec![0u64; 2 * m - 1];
        for i in 0..m {
            let ai = a[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..m {
                acc[i + j] = (acc[i + j] + ai * b[j] as u64) % p;
            }
        }
        for d in (m..2 * m - 1).rev() {
            let c = acc[d];
            if c == 0 {
                continue;
            }
            let negc = p - c;
            for k in 0..m {
                acc[d - m + k] = (acc[d - m + k] + negc * modulus[k] as u64) % p;
            }
        }
        for i in 0..m {
            out[i] = acc[i] as u32;
        }
        return;
    }
    let mut acc = vec![0u32; (2 * m - 1) * w];
    let mut tmp = vec![0u32; w];
    for i in 0..m {
        let ai = &a[i * w..(i + 1) * w];
        if FieldCtx::is_zero_raw(ai) {
            continue;
        }
        for j in 0..m {
            let bj = &b[j * w..(j + 1) * w];
            if FieldCtx::is_zero_raw(bj) {
                continue;
            }
            base.mul_into(ai, bj, &mut tmp);
            base.add_raw(&mut acc[(i + j) * w..(i + j + 1) * w], &tmp);
        }
    }
    for d in (m..2 * m - 1).rev() {
        let c = acc[d * w..(d + 1) * w].to_vec();
        if FieldCtx::is_zero_raw(&c) {
            continue;
        }
        for k in 0..m {
            let mk = &modulus[k * w..(k + 1) * w];
            if FieldCtx::is_zero_raw(mk) {
                continue;
            }
            base.mul_into(&c, mk, &mut tmp);
            base.sub_raw(&mut acc[(d - m + k) * w..(d - m + k + 1) * w], &tmp);
        }
    }
    out.copy_from_slice(&acc[..m * w]);
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p as i64) as u32
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.p != other.0.p || self.0.width != other.0.width {
            return false;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Prime, Kind::Prime) => true,
            (
                Kind::Extension {
                    base: b1,
                    modulus: m1,
                    ..
                },
                Kind::Extension {
                    base: b2,
                    modulus: m2,
                    ..
                },
            ) => m1 == m2 && b1 == b2,
            _ => false,
        }
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Prime => write!(f, "F_{}", self.0.p),
            Kind::Extension { base, .. } => {
                write!(f, "{:?}[t]/({})", base, self.modulus().expect("extension"))
            }
        }
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.order)
    }
}

/// All elements of `ctx` in lexicographic digit order, starting from zero.
pub fn enumerate_field(ctx: &FieldCtx) -> Vec<Fel> {
    let n = ctx.order_u64().expect("field too large to enumerate");
    (0..n)
        .map(|i| Fel {
            ctx: ctx.clone(),
            v: ctx.digits_of_index(i),
        })
        .collect()
}

/// One root of the irreducible `m` (over some level `F_q` of `target`)
/// inside `target`: the lexicographically smallest one.
pub fn embed_root(m: &UPoly, target: &FieldCtx) -> Result<Fel> {
    let deg = m.degree().ok_or(Error::NoRootInTarget)?;
    if !target.has_level(m.ctx()) {
        return Err(Error::IncompatibleFields {
            field: m.ctx().to_string(),
        });
    }
    let rel = target.width() / m.ctx().width();
    if deg == 0 || !rel.is_multiple_of(deg) {
        return Err(Error::NoRootInTarget);
    }
    m.roots_in_field(target)?
        .into_iter()
        .next()
        .ok_or(Error::NoRootInTarget)
}

/// An element of a finite field.
#[derive(Clone)]
pub struct Fel {
    ctx: FieldCtx,
    v: Vec<u32>,
}

impl Fel {
    pub fn zero(ctx: &FieldCtx) -> Fel {
        Fel {
            ctx: ctx.clone(),
            v: ctx.zero_raw(),
        }
    }

    pub fn one(ctx: &FieldCtx) -> Fel {
        Fel {
            ctx: ctx.clone(),
            v: ctx.one_raw(),
        }
    }

    /// The image of the integer `n` in the prime field, embedded in `ctx`.
    pub fn from_int(ctx: &FieldCtx, n: i64) -> Fel {
        let p = ctx.characteristic() as i64;
        Fel {
            ctx: ctx.clone(),
            v: ctx.raw_from_u64(n.rem_euclid(p) as u64),
        }
    }

    /// From flat `F_p` digits; each digit must be below `p`.
    pub fn from_digits(ctx: &FieldCtx, digits: Vec<u32>) -> Result<Fel> {
        if digits.len() != ctx.width() {
            return Err(Error::Parse(format!(
                "expected {} digits, got {}",
                ctx.width(),
                digits.len()
            )));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= ctx.p()) {
            return Err(Error::Parse(format!("digit {d} out of range")));
        }
        Ok(Fel {
            ctx: ctx.clone(),
            v: digits,
        })
    }

    pub(crate) fn from_raw(ctx: &FieldCtx, v: Vec<u32>) -> Fel {
        debug_assert_eq!(v.len(), ctx.width());
        Fel {
            ctx: ctx.clone(),
            v,
        }
    }

    /// Element from its coefficients over the immediate base.
    pub fn from_coeffs(ctx: &FieldCtx, coeffs: &[Fel]) -> Result<Fel> {
        let base = match ctx.base() {
            None => {
                return match coeffs {
                    [c] if c.ctx == *ctx => Ok(c.clone()),
                    _ => Err(Error::MixedFields),
                }
            }
            Some(b) => b,
        };
        if coeffs.len() != ctx.degree() || coeffs.iter().any(|c| c.ctx != *base) {
            return Err(Error::MixedFields);
        }
        Ok(Fel {
            ctx: ctx.clone(),
            v: coeffs.iter().flat_map(|c| c.v.iter().copied()).collect(),
        })
    }

    /// The `index`-th element of [`enumerate_field`].
    pub fn from_index(ctx: &FieldCtx, index: u64) -> Fel {
        Fel {
            ctx: ctx.clone(),
            v: ctx.digits_of_index(index),
        }
    }

    pub fn index(&self) -> u64 {
        self.ctx.index_of_digits(&self.v)
    }

    /// Parses the textual element syntax: a single integer (an element of the
    /// prime field) or the comma-separated digits `a0,a1,...`.
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<Fel> {
        let p = ctx.characteristic() as i64;
        let digits: Vec<u32> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map(|d| d.rem_euclid(p) as u32)
                    .map_err(|e| Error::Parse(format!("bad element digit {t:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        if digits.len() == 1 {
            return Ok(Fel {
                ctx: ctx.clone(),
                v: ctx.raw_from_u64(digits[0] as u64),
            });
        }
        Fel::from_digits(ctx, digits)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn digits(&self) -> &[u32] {
        &self.v
    }

    pub(crate) fn into_raw(self) -> Vec<u32> {
        self.v
    }

    /// Coefficients over the immediate base (the element itself for `F_p`).
    pub fn coeffs(&self) -> Vec<Fel> {
        match self.ctx.base() {
            None => vec![self.clone()],
            Some(base) => self
                .v
                .chunks(base.width())
                .map(|c| Fel::from_raw(base, c.to_vec()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        FieldCtx::is_zero_raw(&self.v)
    }

    pub fn is_one(&self) -> bool {
        self.ctx.is_one_raw(&self.v)
    }

    fn check(&self, other: &Fel) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn try_add(&self, other: &Fel) -> Result<Fel> {
        self.check(other)?;
        let mut v = self.v.clone();
        self.ctx.add_raw(&mut v, &other.v);
        Ok(Fel::from_raw(&self.ctx, v))
    }

    pub fn try_sub(&self, other: &Fel) -> Result<Fel> {
        self.check(other)?;
        let mut v = self.v.clone();
        self.ctx.sub_raw(&mut v, &other.v);
        Ok(Fel::from_raw(&self.ctx, v))
    }

    pub fn try_mul(&self, other: &Fel) -> Result<Fel> {
        self.check(other)?;
        Ok(Fel::from_raw(
            &self.ctx,
            self.ctx.mul_raw(&self.v, &other.v),
        ))
    }

    pub fn try_div(&self, other: &Fel) -> Result<Fel> {
        self.check(other)?;
        let inv = other.inv()?;
        Ok(Fel::from_raw(&self.ctx, self.ctx.mul_raw(&self.v, &inv.v)))
    }

    pub fn inv(&self) -> Result<Fel> {
        self.ctx
            .inv_raw(&self.v)
            .map(|v| Fel::from_raw(&self.ctx, v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> Fel {
        Fel::from_raw(&self.ctx, self.ctx.pow_u64_raw(&self.v, e))
    }

    pub fn pow_big(&self, e: &BigUint) -> Fel {
        Fel::from_raw(&self.ctx, self.ctx.pow_big_raw(&self.v, e))
    }

    /// `a^(base_order^i)`.
    pub fn frobenius(&self, base_order: u64, i: usize) -> Fel {
        let mut r = self.v.clone();
        for _ in 0..i {
            r = self.ctx.pow_u64_raw(&r, base_order);
        }
        Fel::from_raw(&self.ctx, r)
    }

    /// Whether the element lies in `F_(q^m)`, i.e. `a^(q^m) = a`.
    pub fn in_subfield(&self, m: usize, q: u64) -> Result<bool> {
        let degree = self
            .ctx
            .degree_over(q)
            .ok_or_else(|| Error::NoSuchSubfield(q.to_string()))?;
        if m == 0 || degree % m != 0 {
            return Err(Error::BadSubfieldDegree { m, degree });
        }
        Ok(self.frobenius(q, m).v == self.v)
    }

    /// Embeds into a descendant field.
    pub fn lift(&self, target: &FieldCtx) -> Result<Fel> {
        if !target.has_level(&self.ctx) {
            return Err(Error::IncompatibleFields {
                field: self.ctx.to_string(),
            });
        }
        Ok(Fel::from_raw(target, target.lift_raw(&self.v)))
    }

    /// Minimal polynomial over the tower level of order `q`, found as the
    /// first linear dependency among `1, a, a^2, ...`.
    pub fn minimal_polynomial(&self, q: u64) -> Result<UPoly> {
        let sub = self
            .ctx
            .level_of_order(&BigUint::from(q))
            .ok_or_else(|| Error::NoSuchSubfield(q.to_string()))?
            .clone();
        let sw = sub.width();
        let dim = self.ctx.width() / sw;
        // Echelon rows: (pivot, vector of `dim` coords, combination over powers).
        let mut rows: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new();
        let mut power = self.ctx.one_raw();
        for k in 0..=dim {
            let mut vec = power.clone();
            let mut comb = vec![0u32; (dim + 1) * sw];
            comb[k * sw..(k + 1) * sw].copy_from_slice(&sub.one_raw());
            for (pc, row, rcomb) in &rows {
                let c = vec[pc * sw..(pc + 1) * sw].to_vec();
                if FieldCtx::is_zero_raw(&c) {
                    continue;
                }
                axpy(&sub, &mut vec, &c, row);
                axpy(&sub, &mut comb, &c, rcomb);
            }
            match (0..dim).find(|&i| !FieldCtx::is_zero_raw(&vec[i * sw..(i + 1) * sw])) {
                None => {
                    comb.truncate((k + 1) * sw);
                    return Ok(UPoly::from_raw(&sub, comb));
                }
                Some(pc) => {
                    let inv = sub.inv_raw(&vec[pc * sw..(pc + 1) * sw]).expect("nonzero");
                    scale_chunks(&sub, &mut vec, &inv);
                    scale_chunks(&sub, &mut comb, &inv);
                    rows.push((pc, vec, comb));
                }
            }
            power = self.ctx.mul_raw(&power, &self.v);
        }
        Err(Error::Internal("no linear dependency among powers".into()))
    }
}

/// `x -= c * y`, chunkwise over `sub`.
pub(crate) fn axpy(sub: &FieldCtx, x: &mut [u32], c: &[u32], y: &[u32]) {
    let w = sub.width();
    for (xc, yc) in x.chunks_mut(w).zip(y.chunks(w)) {
        if FieldCtx::is_zero_raw(yc) {
            continue;
        }
        let t = sub.mul_raw(c, yc);
        sub.sub_raw(xc, &t);
    }
}

/// Multiplies each `sub`-chunk of `x` by `c`.
pub(crate) fn scale_chunks(sub: &FieldCtx, x: &mut [u32], c: &[u32]) {
    let w = sub.width();
    for xc in x.chunks_mut(w) {
        let t = sub.mul_raw(xc, c);
        xc.copy_from_slice(&t);
    }
}

impl PartialEq for Fel {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.ctx == other.ctx
    }
}

impl Eq for Fel {}

impl Hash for Fel {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.v.hash(state);
    }
}

impl PartialOrd for Fel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.v.cmp(&other.v)
    }
}

impl fmt::Debug for Fel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Fel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.v.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

macro_rules! fel_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr for &Fel {
            type Output = Fel;
            fn $m(self, rhs: &Fel) -> Fel {
                self.$try(rhs).expect("operands in the same field")
            }
        }
        impl $tr for Fel {
            type Output = Fel;
            fn $m(self, rhs: Fel) -> Fel {
                (&self).$m(&rhs)
            }
        }
    };
}

fel_binop!(Add, add, try_add);
fel_binop!(Sub, sub, try_sub);
fel_binop!(Mul, mul, try_mul);

impl Neg for &Fel {
    type Output = Fel;
    fn neg(self) -> Fel {
        let mut v = self.v.clone();
        self.ctx.neg_raw(&mut v);
        Fel::from_raw(&self.ctx, v)
    }
}

impl Neg for Fel {
    type Output = Fel;
    fn neg(self) -> Fel {
        -&self
    }
}

/// `(Q^e - 1) / 2` for the odd field order `Q`.
pub(crate) fn half_order_pow_minus_one(order: &BigUint, e: usize) -> BigUint {
    (order.pow(e as u32) - BigUint::one()) >> 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldCtx {
        canonical_field(9).unwrap()
    }

    #[test]
    fn prime_power_splitting() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn canonical_fields() {
        let f7 = canonical_field(7).unwrap();
        assert!(f7.is_prime_field());
        assert_eq!(f7.order_u64(), Some(7));
        // z^2 + 1 is the lex-smallest monic irreducible quadratic over F_3
        let m = f9().modulus().unwrap();
        assert_eq!(m.to_string(), "1,0,1");
        assert!(matches!(
            canonical_field(12),
            Err(Error::NotAPrimePower(12))
        ));
        let f4 = canonical_field(4).unwrap();
        assert_eq!(f4.modulus().unwrap().to_string(), "1,1,1");
    }

    #[test]
    fn small_arithmetic() {
        let f3 = canonical_field(3).unwrap();
        let two = Fel::from_int(&f3, 2);
        assert_eq!((&two * &two), Fel::one(&f3));
        assert_eq!(two.pow(2), Fel::one(&f3));
        let z = f9().generator().unwrap();
        assert_eq!(&z * &z, Fel::from_int(&f9(), -1));
        assert_eq!((&z * &z).to_string(), "2,0");
        assert!(matches!(Fel::zero(&f3).inv(), Err(Error::DivisionByZero)));
        assert!(matches!(two.try_add(&z), Err(Error::MixedFields)));
    }

    #[test]
    fn frobenius_and_subfields() {
        let z = f9().generator().unwrap();
        assert_eq!(z.frobenius(3, 1), Fel::from_int(&f9(), 2) * z.clone());
        assert_eq!(z.frobenius(3, 0), z);
        let c = Fel::from_int(&f9(), 2);
        assert_eq!(c.frobenius(3, 1), c);
        assert!(c.in_subfield(1, 3).unwrap());
        assert!(!z.in_subfield(1, 3).unwrap());
        assert!(z.in_subfield(2, 3).unwrap());
        assert!(matches!(
            z.in_subfield(3, 3),
            Err(Error::BadSubfieldDegree { .. })
        ));
    }

    #[test]
    fn minimal_polynomials() {
        let f9 = f9();
        let z = f9.generator().unwrap();
        assert_eq!(z.minimal_polynomial(3).unwrap().to_string(), "1,0,1");
        let c = Fel::from_int(&f9, 2);
        // X - 2 = X + 1 over F_3
        assert_eq!(c.minimal_polynomial(3).unwrap().to_string(), "1,1");
        let zp1 = &z + &Fel::one(&f9);
        let mp = zp1.minimal_polynomial(3).unwrap();
        // brute force: the unique monic quadratic over F_3 annihilating z+1
        let f3 = canonical_field(3).unwrap();
        let mut found = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                let v = &(&zp1 * &zp1) + &(&Fel::from_int(&f9, a) * &zp1);
                if (&v + &Fel::from_int(&f9, b)).is_zero() {
                    found.push(UPoly::from_ints(&f3, &[b, a, 1]));
                }
            }
        }
        assert_eq!(found, vec![mp.clone()]);
        assert_eq!(mp.to_string(), "2,1,1");
    }

    #[test]
    fn embed_roots() {
        let f3 = canonical_field(3).unwrap();
        let f9 = f9();
        let m = UPoly::from_ints(&f3, &[1, 0, 1]);
        assert_eq!(embed_root(&m, &f9).unwrap(), f9.generator().unwrap());
        let lin = UPoly::from_ints(&f3, &[1, 1]); // X + 1, root 2
        assert_eq!(embed_root(&lin, &f9).unwrap(), Fel::from_int(&f9, 2));
        let f27 = canonical_field(27).unwrap();
        assert!(matches!(embed_root(&m, &f27), Err(Error::NoRootInTarget)));
    }

    #[test]
    fn enumeration() {
        let f2 = canonical_field(2).unwrap();
        let e: Vec<String> = enumerate_field(&f2).iter().map(|x| x.to_string()).collect();
        assert_eq!(e, ["0", "1"]);
        let e3: Vec<String> = enumerate_field(&canonical_field(3).unwrap())
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(e3, ["0", "1", "2"]);
        let f4 = enumerate_field(&canonical_field(4).unwrap());
        assert_eq!(f4.len(), 4);
        assert!(f4[0].is_zero());
        let f9 = enumerate_field(&f9());
        for w in f9.windows(2) {
            assert!(w[0] < w[1]);
        }
        for (i, x) in f9.iter().enumerate() {
            assert_eq!(x.index(), i as u64);
        }
    }

    #[test]
    fn tower_of_height_three() {
        let f4 = canonical_field(4).unwrap();
        let m = smallest_monic_irreducible(&f4, 3);
        let k = FieldCtx::extension(&f4, &m).unwrap();
        let m2 = smallest_monic_irreducible(&k, 2);
        let l = FieldCtx::extension(&k, &m2).unwrap();
        assert_eq!(l.order_u64(), Some(4096));
        assert_eq!(l.tower().count(), 4);
        let u = l.generator().unwrap();
        let t = k.generator().unwrap().lift(&l).unwrap();
        let x = &u + &t;
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(x.pow(4095).is_one());
        let mp = x.minimal_polynomial(4).unwrap();
        assert_eq!(mp.degree(), Some(6));
        assert!(mp.eval(&x).unwrap().is_zero());
    }

    #[test]
    fn extension_rejects_reducible_modulus() {
        let f5 = canonical_field(5).unwrap();
        let m = UPoly::from_ints(&f5, &[1, 0, 1]); // 2 is a root
        assert!(matches!(
            FieldCtx::extension(&f5, &m),
            Err(Error::NotIrreducible)
        ));
    }

    #[test]
    fn parse_elements() {
        let f9 = f9();
        assert_eq!(Fel::parse(&f9, "0,1").unwrap(), f9.generator().unwrap());
        assert_eq!(Fel::parse(&f9, "2").unwrap(), Fel::from_int(&f9, 2));
        assert_eq!(Fel::parse(&f9, "-1").unwrap(), Fel::from_int(&f9, 2));
        assert!(Fel::parse(&f9, "x").is_err());
        assert!(Fel::parse(&f9, "1,2,0").is_err());
    }
}
