//! Squarefree, distinct-degree and equal-degree factorization.
//!
//! Equal-degree splitting is Cantor–Zassenhaus in odd characteristic and the
//! absolute-trace method in characteristic two. The returned factors are
//! sorted canonically, so the output does not depend on the random stream.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};

use super::UPoly;
use crate::error::{Error, Result};
use crate::field::{half_order_pow_minus_one, Fel, FieldCtx};

/// `unit * prod(factor^multiplicity)`, factors monic irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fel,
    pub factors: Vec<(UPoly, usize)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> UPoly {
        let mut acc = UPoly::monomial(&self.unit, 0);
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = &acc * f;
            }
        }
        acc
    }

    /// Factor degrees with multiplicity, e.g. `[2, 2]` for a square of a quadratic.
    pub fn degree_pattern(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f.degree().unwrap_or(0), *m))
            .collect();
        v.sort_unstable();
        v
    }
}

impl UPoly {
    /// Full factorization into monic irreducibles.
    pub fn factor<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Factorization> {
        let deg = self.degree().ok_or(Error::DegreeZero)?;
        if deg == 0 {
            return Err(Error::DegreeZero);
        }
        let unit = self.leading().expect("nonzero");
        let monic = self.monic();
        let mut factors = Vec::new();
        for (sqf, mult) in squarefree_decomposition(&monic) {
            for (part, d) in distinct_degree(&sqf) {
                for irr in equal_degree(&part, d, rng) {
                    factors.push((irr, mult));
                }
            }
        }
        factors.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
        Ok(Factorization { unit, factors })
    }

    /// Rabin's test: `f | X^(Q^n) - X` and `gcd(f, X^(Q^(n/r)) - X) = 1` for
    /// every prime `r | n`, where `Q` is the field order and `n = deg f`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = self.degree().ok_or(Error::DegreeZero)?;
        if n == 0 {
            return Err(Error::DegreeZero);
        }
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let x = UPoly::x(&self.ctx);
        let order = self.ctx.order().clone();
        let mut powers = Vec::with_capacity(n);
        let mut h = x.rem_unchecked(&f);
        for _ in 0..n {
            h = h.pow_mod(&order, &f);
            powers.push(h.clone());
        }
        if powers[n - 1] != x.rem_unchecked(&f) {
            return Ok(false);
        }
        for r in prime_divisors(n) {
            let g = f.gcd_unchecked(&powers[n / r - 1].sub_unchecked(&x));
            if !g.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All roots in the descendant field `target`, sorted, without multiplicity.
    pub fn roots_in_field(&self, target: &FieldCtx) -> Result<Vec<Fel>> {
        let f = self.lift(target)?;
        if f.is_zero() {
            return Err(Error::DegreeZero);
        }
        if f.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let f = f.monic();
        let x = UPoly::x(target);
        let frob = x.pow_mod(target.order(), &f);
        let split = f.gcd_unchecked(&frob.sub_unchecked(&x.rem_unchecked(&f)));
        if split.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let mut roots: Vec<Fel> = equal_degree(&split, 1, &mut rng)
            .into_iter()
            .map(|lin| -&lin.coeff(0))
            .collect();
        roots.sort();
        Ok(roots)
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `f(X) = g(X)^p`: returns `g`. All exponents of `f` must be multiples of `p`.
fn pth_root(f: &UPoly) -> UPoly {
    let ctx = &f.ctx;
    let p = ctx.characteristic() as usize;
    let deg = f.degree().expect("nonzero");
    let mut c = Vec::with_capacity((deg / p + 1) * ctx.width());
    for i in (0..=deg).step_by(p) {
        c.extend(ctx.pth_root_raw(f.coeff_raw(i)));
    }
    UPoly::from_raw(ctx, c)
}

/// Yun-style squarefree decomposition of a monic polynomial, extended to
/// characteristic `p` by extracting `p`-th roots.
pub(crate) fn squarefree_decomposition(f: &UPoly) -> Vec<(UPoly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = f.ctx.characteristic() as usize;
    let df = f.derivative();
    if df.is_zero() {
        for (g, m) in squarefree_decomposition(&pth_root(f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd_unchecked(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while w.degree() != Some(0) {
        let y = w.gcd_unchecked(&c);
        let z = w.div_exact(&y);
        if z.degree() != Some(0) {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if c.degree() != Some(0) {
        for (g, m) in squarefree_decomposition(&pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a monic squarefree polynomial into products of irreducibles of
/// equal degree `d`.
pub(crate) fn distinct_degree(f: &UPoly) -> Vec<(UPoly, usize)> {
    let ctx = &f.ctx;
    let order = ctx.order().clone();
    let x = UPoly::x(ctx);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem_unchecked(&rest);
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&order, &rest);
        let g = rest.gcd_unchecked(&h.sub_unchecked(&x));
        if g.degree() != Some(0) {
            rest = rest.div_exact(&g);
            h = h.rem_unchecked(&rest);
            out.push((g, d));
        }
    }
    if let Some(n) = rest.degree() {
        if n > 0 {
            out.push((rest, n));
        }
    }
    out
}

fn random_poly<R: Rng + ?Sized>(ctx: &FieldCtx, len: usize, rng: &mut R) -> UPoly {
    let p = ctx.p();
    let c = (0..len * ctx.width())
        .map(|_| rng.gen_range(0..p))
        .collect();
    UPoly::from_raw(ctx, c)
}

/// Splits a monic squarefree product of irreducibles of degree `d`.
pub(crate) fn equal_degree<R: Rng + ?Sized>(f: &UPoly, d: usize, rng: &mut R) -> Vec<UPoly> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.clone()];
    }
    let ctx = &f.ctx;
    let odd = ctx.characteristic() != 2;
    let exponent = if odd {
        half_order_pow_minus_one(ctx.order(), d)
    } else {
        BigUint::from(0u32)
    };
    loop {
        let a = random_poly(ctx, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if odd {
            a.pow_mod(&exponent, f).sub_unchecked(&UPoly::one(ctx))
        } else {
            // Absolute trace of a in F_(2^(width*d)), taken mod f.
            let mut t = a.rem_unchecked(f);
            let mut s = t.clone();
            for _ in 1..ctx.width() * d {
                t = t.mul_mod(&t, f);
                s = s.add_unchecked(&t);
            }
            s
        };
        let g = f.gcd_unchecked(&b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let h = f.div_exact(&g);
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::canonical_field;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn internal_polynomial_of_square_of_quadratic() {
        let f3 = canonical_field(3).unwrap();
        let f = UPoly::from_ints(&f3, &[1, 0, 1, 0, 1, 0, 1]);
        let fac = f.factor(&mut rng()).unwrap();
        assert!(fac.unit.is_one());
        let got: Vec<(String, usize)> = fac
            .factors
            .iter()
            .map(|(g, m)| (g.to_string(), *m))
            .collect();
        assert_eq!(
            got,
            vec![
                ("1,0,1".to_string(), 1),
                ("2,1,1".to_string(), 1),
                ("2,2,1".to_string(), 1)
            ]
        );
    }

    #[test]
    fn small_cases() {
        let f3 = canonical_field(3).unwrap();
        let fac = UPoly::from_ints(&f3, &[-1, 0, 1])
            .factor(&mut rng())
            .unwrap();
        assert_eq!(
            fac.factors,
            vec![
                (UPoly::from_ints(&f3, &[1, 1]), 1),
                (UPoly::from_ints(&f3, &[2, 1]), 1)
            ]
        );
        let f2 = canonical_field(2).unwrap();
        let fac = UPoly::from_ints(&f2, &[0, 0, 0, 0, 1])
            .factor(&mut rng())
            .unwrap();
        assert_eq!(fac.factors, vec![(UPoly::x(&f2), 4)]);
        assert!(matches!(
            UPoly::one(&f2).factor(&mut rng()),
            Err(Error::DegreeZero)
        ));
    }

    #[test]
    fn irreducibility() {
        let f3 = canonical_field(3).unwrap();
        let f5 = canonical_field(5).unwrap();
        assert!(UPoly::from_ints(&f3, &[1, 0, 1]).is_irreducible().unwrap());
        assert!(!UPoly::from_ints(&f5, &[1, 0, 1]).is_irreducible().unwrap());
        assert!(UPoly::from_ints(&f5, &[3, 1]).is_irreducible().unwrap());
        // (x^2+1)^2 over F_3 has no roots but is reducible
        assert!(!UPoly::from_ints(&f3, &[1, 0, 2, 0, 1])
            .is_irreducible()
            .unwrap());
        assert!(matches!(
            UPoly::one(&f3).is_irreducible(),
            Err(Error::DegreeZero)
        ));
    }

    #[test]
    fn roots() {
        let f3 = canonical_field(3).unwrap();
        let f9 = canonical_field(9).unwrap();
        let m = UPoly::from_ints(&f3, &[1, 0, 1]);
        assert!(m.roots_in_field(&f3).unwrap().is_empty());
        let r: Vec<String> = m
            .roots_in_field(&f9)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(r, ["0,1", "0,2"]);
        let lin = UPoly::from_ints(&f3, &[1, 1]);
        assert_eq!(
            lin.roots_in_field(&f9).unwrap(),
            vec![Fel::from_int(&f9, 2)]
        );
        // brute-force cross-check of X^2+1 over F_9
        let scan: Vec<Fel> = crate::field::enumerate_field(&f9)
            .into_iter()
            .filter(|x| m.eval(x).unwrap().is_zero())
            .collect();
        assert_eq!(scan, m.roots_in_field(&f9).unwrap());
    }

    #[test]
    fn characteristic_two_extension() {
        let f4 = canonical_field(4).unwrap();
        let z = f4.generator().unwrap();
        // (X + z)(X^2 + X + z) (X + 1)^2 over F_4
        let a = UPoly::from_coeffs(&f4, &[z.clone(), Fel::one(&f4)]).unwrap();
        let b = UPoly::from_coeffs(&f4, &[z.clone(), Fel::one(&f4), Fel::one(&f4)]).unwrap();
        let c = UPoly::from_ints(&f4, &[1, 1]);
        let f = &(&a * &b) * &(&c * &c);
        let fac = f.factor(&mut rng()).unwrap();
        assert_eq!(fac.expand(), f);
        for (g, _) in &fac.factors {
            assert!(g.is_irreducible().unwrap());
        }
        assert_eq!(fac.degree_pattern(), vec![1, 1, 1, 2]);
    }
}
