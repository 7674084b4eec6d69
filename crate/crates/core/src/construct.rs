//! Explicit smooth curves: a partner `g` for any `f` in `G_q` (odd `q`), and
//! the symmetric family `C_{f,f}`.
//!
//! For `q > 5` the partner is `g = b X0^(q+1) + a X0 X1^q + X1^(q+1)` with
//! `X^2 + a X + b` irreducible over `F_q`. A singular point of `C_{f,g}` forces
//! `x = X1/X0` to be a root of `X^2 + a X + b`, and the remaining condition
//! reads `x^q = -f_Y1(1, y)` for a zero `y` of `Q(1, y)`,
//! `Q = Y0^q f_Y0 + Y1^q f_Y1`. So it suffices to pick the quadratic whose
//! roots avoid the at most `2q` values `-f_Y1(1, y)` lying in
//! `F_(q^2) \ F_q`, and there are `(q^2 - q)/2 > 2q` quadratics to pick from.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::binform::{enumerate_gq, BinForm, Guards};
use crate::curve::{check_smoothness, ensure_no_rational_point, internal_form};
use crate::error::{Error, Result, Side};
use crate::field::{canonical_field, enumerate_field, Fel, FieldCtx};
use crate::unipoly::UPoly;

/// Audit data of the quadratic-avoidance construction.
#[derive(Debug, Clone)]
pub struct GaloisTrace {
    pub lambda1: Fel,
    pub lambda2: Fel,
    pub k: Fel,
    /// Sorted by [`UPoly::canonical_cmp`].
    pub excluded_quadratics: Vec<UPoly>,
    pub chosen_quadratic: UPoly,
}

#[derive(Debug, Clone)]
pub enum PartnerTrace {
    Galois(GaloisTrace),
    /// Lex search over `G_q`, used for `q <= 5`.
    Search {
        candidates_tried: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub method: String,
    pub g: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub excluded_quadratics: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chosen_quadratic: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub candidates_tried: Option<usize>,
}

fn strings(p: &UPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

impl PartnerTrace {
    pub fn to_json(&self, g: &BinForm) -> TraceJson {
        let g = g.coeffs().iter().map(|c| c.to_string()).collect();
        match self {
            PartnerTrace::Galois(t) => TraceJson {
                method: "galois".into(),
                g,
                lambda1: Some(t.lambda1.to_string()),
                lambda2: Some(t.lambda2.to_string()),
                k: Some(t.k.to_string()),
                excluded_quadratics: Some(t.excluded_quadratics.iter().map(strings).collect()),
                chosen_quadratic: Some(strings(&t.chosen_quadratic)),
                candidates_tried: None,
            },
            PartnerTrace::Search { candidates_tried } => TraceJson {
                method: "search".into(),
                g,
                lambda1: None,
                lambda2: None,
                k: None,
                excluded_quadratics: None,
                chosen_quadratic: None,
                candidates_tried: Some(*candidates_tried),
            },
        }
    }
}

fn require_odd(ctx: &FieldCtx) -> Result<()> {
    if ctx.characteristic() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    Ok(())
}

/// A `g` with `C_{f,g}` smooth, for `f` of degree `q + 1` over odd `F_q`
/// without rational points. The result is re-checked before returning.
pub fn construct_partner<R: Rng + ?Sized>(
    f: &BinForm,
    rng: &mut R,
) -> Result<(BinForm, PartnerTrace)> {
    let ctx = f.ctx();
    require_odd(ctx)?;
    let q = f.q();
    if f.degree() != q as usize + 1 {
        return Err(Error::DegreeMismatch {
            expected: q as usize + 1,
            got: f.degree(),
        });
    }
    ensure_no_rational_point(f, Side::F)?;
    if q <= 5 {
        return search_partner(f, q, rng);
    }

    let excluded = excluded_quadratics(f, rng)?;
    let elems = enumerate_field(ctx);
    let one = Fel::one(ctx);
    let mut chosen = None;
    'outer: for b in &elems {
        for a in &elems {
            let quad = UPoly::from_coeffs(ctx, &[b.clone(), a.clone(), one.clone()])?;
            if quad.is_irreducible()? && !excluded.contains(&quad) {
                chosen = Some((a.clone(), b.clone(), quad));
                break 'outer;
            }
        }
    }
    let (a, b, quad) = chosen.ok_or_else(|| Error::Internal("no admissible quadratic".into()))?;
    let q1 = q as usize + 1;
    let mut coeffs = vec![Fel::zero(ctx); q1 + 1];
    coeffs[0] = b.clone();
    coeffs[q1 - 1] = a.clone();
    coeffs[q1] = one;
    let g = BinForm::new(ctx, &coeffs)?;
    let lambda2 = b.inv()?;
    let trace = GaloisTrace {
        lambda1: &a * &lambda2,
        k: b,
        lambda2,
        excluded_quadratics: excluded,
        chosen_quadratic: quad,
    };
    if !check_smoothness(f, &g, rng)?.smooth {
        return Err(Error::Internal(format!(
            "constructed partner {g} is singular for {f}"
        )));
    }
    Ok((g, PartnerTrace::Galois(trace)))
}

/// Minimal polynomials of the values `-f_Y1(1, y)` in `F_(q^2) \ F_q`, `y`
/// running over the projective zeros of `Q`, including `(0:1)` when
/// `Q(1, y)` drops degree.
pub fn excluded_quadratics<R: Rng + ?Sized>(f: &BinForm, rng: &mut R) -> Result<Vec<UPoly>> {
    let ctx = f.ctx();
    let q = f.q();
    let qt = internal_form(f).dehomogenize();
    let fy1 = f.partial(1);
    let mut out: Vec<UPoly> = Vec::new();
    let keep = |v: Fel, out: &mut Vec<UPoly>| -> Result<()> {
        if v.ctx().degree_over(q).is_some_and(|n| n % 2 == 0)
            && v.in_subfield(2, q)?
            && !v.in_subfield(1, q)?
        {
            let m = v.minimal_polynomial(q)?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        Ok(())
    };
    for (h, _) in qt.factor(rng)?.factors {
        let deg = h.degree().unwrap_or(0);
        if deg % 2 != 0 {
            continue;
        }
        let k = FieldCtx::extension_unchecked(ctx, &h);
        let gamma = k.generator().expect("proper extension");
        for i in 0..deg {
            let conj = gamma.frobenius(q, i);
            let v = -&fy1.eval(&Fel::one(&k), &conj)?;
            keep(v, &mut out)?;
        }
    }
    if qt.degree() < Some(2 * q as usize) {
        let v = -&fy1.eval(&Fel::zero(ctx), &Fel::one(ctx))?;
        keep(v, &mut out)?;
    }
    out.sort_by(|x, y| x.canonical_cmp(y));
    Ok(out)
}

fn search_partner<R: Rng + ?Sized>(
    f: &BinForm,
    q: u64,
    rng: &mut R,
) -> Result<(BinForm, PartnerTrace)> {
    for (i, g) in enumerate_gq(q, &Guards::default())?.into_iter().enumerate() {
        if check_smoothness(f, &g, rng)?.smooth {
            return Ok((
                g,
                PartnerTrace::Search {
                    candidates_tried: i + 1,
                },
            ));
        }
    }
    Err(Error::Internal(format!("no smooth partner for {f}")))
}

/// The `lambda` outside `{-(u^2 + u) : u in F_q}`, in field order.
pub fn symmetric_lambda_candidates(q: u64) -> Result<Vec<Fel>> {
    let ctx = canonical_field(q)?;
    require_odd(&ctx)?;
    let elems = enumerate_field(&ctx);
    let image: Vec<Fel> = elems.iter().map(|u| -&(&(u * u) + u)).collect();
    Ok(elems.into_iter().filter(|l| !image.contains(l)).collect())
}

/// `Y0^(q+1) + s Y0 Y1^q + lambda Y1^(q+1)` (variants 0, 1 with `s = 1, -1`)
/// or `Y0^(q+1) + s Y0^q Y1 + lambda Y1^(q+1)` (variants 2, 3 with `s = 1, -1`),
/// `lambda` the `index`-th symmetric candidate.
pub fn symmetric_form(q: u64, variant: usize, index: usize) -> Result<BinForm> {
    let ctx = canonical_field(q)?;
    require_odd(&ctx)?;
    if variant > 3 {
        return Err(Error::IndexOutOfRange {
            index: variant,
            len: 4,
        });
    }
    let cands = symmetric_lambda_candidates(q)?;
    let lambda = cands.get(index).ok_or(Error::IndexOutOfRange {
        index,
        len: cands.len(),
    })?;
    let d = q as usize + 1;
    let mut c = vec![Fel::zero(&ctx); d + 1];
    c[0] = Fel::one(&ctx);
    c[d] = lambda.clone();
    let sign = if variant.is_multiple_of(2) { 1 } else { -1 };
    let slot = if variant < 2 { d - 1 } else { 1 };
    c[slot] = Fel::from_int(&ctx, sign);
    BinForm::new(&ctx, &c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binform::random_gq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lambda_candidates() {
        let s = |q| {
            symmetric_lambda_candidates(q)
                .unwrap()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(s(3), ["2"]);
        assert_eq!(s(7), ["3", "4", "6"]);
        for q in [5, 9, 11, 13] {
            assert_eq!(s(q).len() as u64, (q - 1) / 2);
        }
        assert!(matches!(
            symmetric_lambda_candidates(4),
            Err(Error::EvenCharacteristic)
        ));
    }

    #[test]
    fn symmetric_forms() {
        assert_eq!(symmetric_form(3, 0, 0).unwrap().to_string(), "1,0,0,1,2");
        assert_eq!(symmetric_form(3, 1, 0).unwrap().to_string(), "1,0,0,2,2");
        assert_eq!(symmetric_form(3, 2, 0).unwrap().to_string(), "1,1,0,0,2");
        assert_eq!(symmetric_form(3, 3, 0).unwrap().to_string(), "1,2,0,0,2");
        assert!(matches!(
            symmetric_form(3, 0, 1),
            Err(Error::IndexOutOfRange { index: 1, len: 1 })
        ));
    }

    #[test]
    fn galois_partner_q7() {
        let ctx = canonical_field(7).unwrap();
        let f = BinForm::from_ints(&ctx, &[1, 0, 0, 0, 0, 0, 0, 1, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (g, trace) = construct_partner(&f, &mut rng).unwrap();
        let PartnerTrace::Galois(t) = trace else {
            panic!("q = 7 uses the Galois path")
        };
        assert!(check_smoothness(&f, &g, &mut rng).unwrap().smooth);
        assert!(!g.has_rational_point().unwrap());
        assert!(t.chosen_quadratic.is_irreducible().unwrap());
        assert!(!t.excluded_quadratics.contains(&t.chosen_quadratic));
        assert!(t.excluded_quadratics.len() <= 14);
        // Euler's criterion: disc^((q-1)/2) = -1
        let disc = &(&t.lambda1 * &t.lambda1) - &(&Fel::from_int(&ctx, 4) * &t.lambda2);
        assert_eq!(disc.pow(3), Fel::from_int(&ctx, -1));
        assert_eq!(&t.k * &t.lambda2, Fel::one(&ctx));
    }

    #[test]
    fn search_partner_q3() {
        let ctx = canonical_field(3).unwrap();
        let f = BinForm::from_ints(&ctx, &[1, 0, -1, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (g, trace) = construct_partner(&f, &mut rng).unwrap();
        assert!(matches!(trace, PartnerTrace::Search { .. }));
        assert!(check_smoothness(&f, &g, &mut rng).unwrap().smooth);
    }

    #[test]
    fn even_characteristic_is_rejected() {
        let ctx = canonical_field(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = random_gq(&ctx, &mut rng);
        assert!(matches!(
            construct_partner(&f, &mut rng),
            Err(Error::EvenCharacteristic)
        ));
    }

    #[test]
    fn trace_json_round_trip() {
        let ctx = canonical_field(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_gq(&ctx, &mut rng);
        let (g, trace) = construct_partner(&f, &mut rng).unwrap();
        let js = serde_json::to_string(&trace.to_json(&g)).unwrap();
        let back: TraceJson = serde_json::from_str(&js).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), js);
        assert_eq!(back.method, "galois");
    }
}
