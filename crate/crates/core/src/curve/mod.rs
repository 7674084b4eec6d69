//! The minimal-degree space-filling curves `C_{f,g}` on `P^1 x P^1` and
//! their smoothness test.
//!
//! `C_{f,g}` is cut out by
//! `F = f(Y) (X0^q X1 - X0 X1^q) + g(X) (Y0^q Y1 - Y0 Y1^q)`, of bidegree
//! `(q+1, q+1)`. When neither `V(f)` nor `V(g)` has an `F_q`-point, a singular
//! point `(1:a) x (1:b)` has `a, b` outside `F_q`, and satisfies
//!
//! * `p(a) = 0` with `p(x) = P(1, x)`, `P = X0^q g_X0 + X1^q g_X1`,
//! * `qt(b) = 0` with `qt(y) = Q(1, y)`, `Q = Y0^q f_Y0 + Y1^q f_Y1`,
//! * `f_Y0(1, b) = g_X1(1, a) b^q`.
//!
//! The two internal equations say `g_X1 / X0^q = -g_X0 / X1^q` and
//! `-f_Y1 / Y0^q = f_Y0 / Y1^q`, so the single cross equation links the two
//! chains. [`singular_witness`] runs over the irreducible factors of `p`,
//! takes a gcd over each factor's field and re-verifies every candidate on
//! the Jacobian, so a returned witness is always a genuine singular point.

mod oracle;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::binform::{BinForm, ProjPoint};
use crate::error::{Error, Result, Side};
use crate::field::{Fel, FieldCtx};
use crate::unipoly::UPoly;

pub use oracle::{scan_oracle, DEFAULT_SCAN_BUDGET};

/// A bihomogeneous form of bidegree `(dx, dy)`.
///
/// Entry `(i, j)` is the coefficient of `X0^(dx-i) X1^i Y0^(dy-j) Y1^j`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiForm {
    ctx: FieldCtx,
    dx: usize,
    dy: usize,
    c: Vec<u32>,
}

impl BiForm {
    pub fn zero(ctx: &FieldCtx, dx: usize, dy: usize) -> BiForm {
        BiForm {
            ctx: ctx.clone(),
            dx,
            dy,
            c: vec![0; (dx + 1) * (dy + 1) * ctx.width()],
        }
    }

    /// `a(X) * b(Y)`.
    pub fn tensor(a: &BinForm, b: &BinForm) -> Result<BiForm> {
        if a.ctx() != b.ctx() {
            return Err(Error::MixedFields);
        }
        let ctx = a.ctx();
        let mut out = BiForm::zero(ctx, a.degree(), b.degree());
        for i in 0..=a.degree() {
            let ai = a.coeff_raw(i);
            if FieldCtx::is_zero_raw(ai) {
                continue;
            }
            for j in 0..=b.degree() {
                let t = ctx.mul_raw(ai, b.coeff_raw(j));
                out.slot_mut(i, j).copy_from_slice(&t);
            }
        }
        Ok(out)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.dx, self.dy)
    }

    fn slot(&self, i: usize, j: usize) -> &[u32] {
        let w = self.ctx.width();
        let k = (i * (self.dy + 1) + j) * w;
        &self.c[k..k + w]
    }

    fn slot_mut(&mut self, i: usize, j: usize) -> &mut [u32] {
        let w = self.ctx.width();
        let k = (i * (self.dy + 1) + j) * w;
        &mut self.c[k..k + w]
    }

    pub fn coeff(&self, i: usize, j: usize) -> Fel {
        Fel::from_raw(&self.ctx, self.slot(i, j).to_vec())
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, v: &Fel) -> Result<()> {
        if v.ctx() != &self.ctx {
            return Err(Error::MixedFields);
        }
        self.slot_mut(i, j).copy_from_slice(v.digits());
        Ok(())
    }

    pub fn nonzero_terms(&self) -> usize {
        self.c
            .chunks(self.ctx.width())
            .filter(|c| !FieldCtx::is_zero_raw(c))
            .count()
    }

    pub fn try_add(&self, other: &BiForm) -> Result<BiForm> {
        if self.ctx != other.ctx {
            return Err(Error::MixedFields);
        }
        if self.bidegree() != other.bidegree() {
            return Err(Error::DegreeMismatch {
                expected: self.dx,
                got: other.dx,
            });
        }
        let mut c = self.c.clone();
        self.ctx.add_raw(&mut c, &other.c);
        Ok(BiForm { c, ..self.clone() })
    }

    /// Partial derivative in `X0, X1, Y0, Y1` for `var = 0, 1, 2, 3`.
    pub fn partial(&self, var: usize) -> BiForm {
        assert!(var < 4, "four variables");
        let (dx, dy) = (self.dx, self.dy);
        let x_side = var < 2;
        if (x_side && dx == 0) || (!x_side && dy == 0) {
            let (ndx, ndy) = if x_side { (0, dy) } else { (dx, 0) };
            return BiForm::zero(&self.ctx, ndx, ndy);
        }
        let (ndx, ndy) = if x_side { (dx - 1, dy) } else { (dx, dy - 1) };
        let mut out = BiForm::zero(&self.ctx, ndx, ndy);
        for i in 0..=ndx {
            for j in 0..=ndy {
                let (si, sj, k) = match var {
                    0 => (i, j, dx - i),
                    1 => (i + 1, j, i + 1),
                    2 => (i, j, dy - j),
                    _ => (i, j + 1, j + 1),
                };
                let mut v = self.slot(si, sj).to_vec();
                self.ctx.scale_int_raw(&mut v, k as u64);
                out.slot_mut(i, j).copy_from_slice(&v);
            }
        }
        out
    }

    /// Value at `(x0:x1) x (y0:y1)`, coordinates in a descendant field.
    pub fn eval(&self, x0: &Fel, x1: &Fel, y0: &Fel, y1: &Fel) -> Result<Fel> {
        let target = x0.ctx();
        if [x1, y0, y1].iter().any(|v| v.ctx() != target) {
            return Err(Error::MixedFields);
        }
        if !target.has_level(&self.ctx) {
            return Err(Error::IncompatibleFields {
                field: self.ctx.to_string(),
            });
        }
        let pw = |v: &Fel, n: usize| -> Vec<Vec<u32>> {
            let mut out = vec![target.one_raw()];
            for k in 0..n {
                let next = target.mul_raw(&out[k], v.digits());
                out.push(next);
            }
            out
        };
        let (px0, px1) = (pw(x0, self.dx), pw(x1, self.dx));
        let (py0, py1) = (pw(y0, self.dy), pw(y1, self.dy));
        let mut acc = target.zero_raw();
        for i in 0..=self.dx {
            let xm = target.mul_raw(&px0[self.dx - i], &px1[i]);
            let mut inner = target.zero_raw();
            for j in 0..=self.dy {
                let c = self.slot(i, j);
                if FieldCtx::is_zero_raw(c) {
                    continue;
                }
                let ym = target.mul_raw(&py0[self.dy - j], &py1[j]);
                target.add_raw(&mut inner, &target.mul_raw(&ym, &target.lift_raw(c)));
            }
            target.add_raw(&mut acc, &target.mul_raw(&xm, &inner));
        }
        Ok(Fel::from_raw(target, acc))
    }

    pub fn eval_points(&self, x: &ProjPoint, y: &ProjPoint) -> Result<Fel> {
        self.eval(x.x0(), x.x1(), y.x0(), y.x1())
    }
}

impl fmt::Debug for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiForm[{}; ({}, {})]{{", self.ctx, self.dx, self.dy)?;
        let mut first = true;
        for i in 0..=self.dx {
            for j in 0..=self.dy {
                let c = self.slot(i, j);
                if !FieldCtx::is_zero_raw(c) {
                    if !first {
                        write!(f, ", ")?;
                    }
                    first = false;
                    write!(f, "({i},{j}): {}", Fel::from_raw(&self.ctx, c.to_vec()))?;
                }
            }
        }
        write!(f, "}}")
    }
}

/// `X0^q X1 - X0 X1^q` as a form of degree `q + 1`.
pub fn bracket_form(ctx: &FieldCtx) -> Result<BinForm> {
    let q = ctx.order_u64().ok_or_else(|| Error::TooLarge {
        what: "field order".into(),
        limit: u64::MAX,
    })? as usize;
    let mut c = vec![Fel::zero(ctx); q + 2];
    c[1] = Fel::one(ctx);
    c[q] = -&Fel::one(ctx);
    BinForm::new(ctx, &c)
}

/// The curve `C_{f,g}` with its defining form and first partials.
#[derive(Clone, Debug)]
pub struct Curve {
    q: u64,
    f: BinForm,
    g: BinForm,
    form: BiForm,
    partials: [BiForm; 4],
}

pub fn build_curve(f: &BinForm, g: &BinForm) -> Result<Curve> {
    if f.ctx() != g.ctx() {
        return Err(Error::MixedFields);
    }
    let ctx = f.ctx();
    let q = f.q();
    let d = q as usize + 1;
    for form in [f, g] {
        if form.degree() != d {
            return Err(Error::DegreeMismatch {
                expected: d,
                got: form.degree(),
            });
        }
        if form.is_zero() {
            return Err(Error::ZeroForm);
        }
    }
    let bracket = bracket_form(ctx)?;
    let form = BiForm::tensor(&bracket, f)?.try_add(&BiForm::tensor(g, &bracket)?)?;
    let partials = [0, 1, 2, 3].map(|v| form.partial(v));
    Ok(Curve {
        q,
        f: f.clone(),
        g: g.clone(),
        form,
        partials,
    })
}

impl Curve {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn f(&self) -> &BinForm {
        &self.f
    }

    pub fn g(&self) -> &BinForm {
        &self.g
    }

    pub fn form(&self) -> &BiForm {
        &self.form
    }

    /// `F, F_X0, F_X1, F_Y0, F_Y1` at `(x0:x1) x (y0:y1)`.
    pub fn jacobian_values(&self, x0: &Fel, x1: &Fel, y0: &Fel, y1: &Fel) -> Result<[Fel; 5]> {
        let v0 = self.form.eval(x0, x1, y0, y1)?;
        let mut out = [v0.clone(), v0.clone(), v0.clone(), v0.clone(), v0];
        for (k, p) in self.partials.iter().enumerate() {
            out[k + 1] = p.eval(x0, x1, y0, y1)?;
        }
        Ok(out)
    }

    pub fn is_singular_at(&self, x0: &Fel, x1: &Fel, y0: &Fel, y1: &Fel) -> Result<bool> {
        Ok(self
            .jacobian_values(x0, x1, y0, y1)?
            .iter()
            .all(Fel::is_zero))
    }
}

/// Whether `F` vanishes at all `(q+1)^2` points of `(P^1 x P^1)(F_q)`.
pub fn verify_space_filling(c: &Curve) -> bool {
    bi_form_fills(c.form())
}

/// Whether a form of any bidegree vanishes on every `F_q`-point.
pub fn bi_form_fills(form: &BiForm) -> bool {
    let pts = ProjPoint::rational_points(form.ctx());
    pts.iter().all(|x| {
        pts.iter()
            .all(|y| form.eval_points(x, y).map(|v| v.is_zero()).unwrap_or(false))
    })
}

/// A verified singular point `(1:alpha) x (1:beta)` of some `C_{f,g}`.
#[derive(Clone, Debug)]
pub struct SingularWitness {
    alpha_minpoly: UPoly,
    beta_minpoly: UPoly,
    beta_minpoly_over_k: Option<UPoly>,
    alpha: Fel,
    beta: Fel,
    compositum: FieldCtx,
}

impl SingularWitness {
    /// Checks the point against the Jacobian of `curve`; `None` unless all
    /// five values vanish with `alpha, beta` nonzero and outside `F_q`.
    pub fn verified(
        curve: &Curve,
        alpha: Fel,
        beta: Fel,
        beta_minpoly_over_k: Option<UPoly>,
    ) -> Result<Option<SingularWitness>> {
        let l = alpha.ctx().clone();
        if beta.ctx() != &l {
            return Err(Error::MixedFields);
        }
        let q = curve.q;
        if alpha.is_zero()
            || beta.is_zero()
            || alpha.in_subfield(1, q)?
            || beta.in_subfield(1, q)?
        {
            return Ok(None);
        }
        let one = Fel::one(&l);
        if !curve.is_singular_at(&one, &alpha, &one, &beta)? {
            return Ok(None);
        }
        Ok(Some(SingularWitness {
            alpha_minpoly: alpha.minimal_polynomial(q)?,
            beta_minpoly: beta.minimal_polynomial(q)?,
            beta_minpoly_over_k,
            alpha,
            beta,
            compositum: l,
        }))
    }

    /// Minimal polynomial of `alpha` over `F_q`.
    pub fn alpha_minpoly(&self) -> &UPoly {
        &self.alpha_minpoly
    }

    /// Minimal polynomial of `beta` over `F_q`.
    pub fn beta_minpoly(&self) -> &UPoly {
        &self.beta_minpoly
    }

    /// The factor of the gcd over `K = F_q(alpha)` that produced `beta`.
    pub fn beta_minpoly_over_k(&self) -> Option<&UPoly> {
        self.beta_minpoly_over_k.as_ref()
    }

    pub fn alpha(&self) -> &Fel {
        &self.alpha
    }

    pub fn beta(&self) -> &Fel {
        &self.beta
    }

    pub fn compositum(&self) -> &FieldCtx {
        &self.compositum
    }

    /// Degree of the compositum over `F_q`.
    pub fn compositum_degree(&self) -> usize {
        let q = self.alpha_minpoly.ctx().order_u64().expect("small base");
        self.compositum.degree_over(q).expect("tower over F_q")
    }

    pub fn point(&self) -> (ProjPoint, ProjPoint) {
        let one = Fel::one(&self.compositum);
        (
            ProjPoint::new(one.clone(), self.alpha.clone()).expect("nonzero"),
            ProjPoint::new(one, self.beta.clone()).expect("nonzero"),
        )
    }

    /// Re-runs the Jacobian check against `curve`.
    pub fn check(&self, curve: &Curve) -> Result<bool> {
        let one = Fel::one(&self.compositum);
        curve.is_singular_at(&one, &self.alpha, &one, &self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FactorGcd,
    ScanOracle,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckStats {
    pub factors_examined: usize,
    pub gcds_computed: usize,
}

#[derive(Debug, Clone)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub witness: Option<SingularWitness>,
    pub method: Method,
    pub stats: CheckStats,
}

/// Serialized form of a [`SmoothnessReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub smooth: bool,
    pub method: Method,
    pub witness: Option<WitnessJson>,
    pub stats: CheckStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub alpha_minpoly: Vec<String>,
    pub beta_minpoly: Vec<String>,
    pub compositum_degree: usize,
}

impl SmoothnessReport {
    fn new(witness: Option<SingularWitness>, method: Method, stats: CheckStats) -> Self {
        SmoothnessReport {
            smooth: witness.is_none(),
            witness,
            method,
            stats,
        }
    }

    pub fn to_json(&self) -> ReportJson {
        let strs = |p: &UPoly| p.coeffs().iter().map(|c| c.to_string()).collect();
        ReportJson {
            smooth: self.smooth,
            method: self.method,
            witness: self.witness.as_ref().map(|w| WitnessJson {
                alpha_minpoly: strs(&w.alpha_minpoly),
                beta_minpoly: strs(&w.beta_minpoly),
                compositum_degree: w.compositum_degree(),
            }),
            stats: self.stats,
        }
    }
}

pub(crate) fn ensure_no_rational_point(form: &BinForm, side: Side) -> Result<()> {
    if let Some(pt) = form.rational_point()? {
        return Err(Error::PreconditionViolated {
            side,
            point: pt.to_string(),
        });
    }
    Ok(())
}

/// `Y0^q f_Y0 + Y1^q f_Y1` for a form of degree `q + 1`.
pub fn internal_form(f: &BinForm) -> BinForm {
    let q = f.q() as usize;
    f.partial(0)
        .mul_monomial(q, 0)
        .try_add(&f.partial(1).mul_monomial(0, q))
        .expect("same field and degree")
}

/// Per-`g` data for repeated smoothness checks against many `f`.
pub struct SmoothnessChecker {
    g: BinForm,
    q: usize,
    candidates: Vec<AlphaData>,
}

struct AlphaData {
    k: FieldCtx,
    alpha: Fel,
    /// `g_X1(1, alpha)`
    c: Vec<u32>,
}

impl SmoothnessChecker {
    pub fn new<R: Rng + ?Sized>(g: &BinForm, rng: &mut R) -> Result<SmoothnessChecker> {
        ensure_no_rational_point(g, Side::G)?;
        let ctx = g.ctx();
        let p = internal_form(g).dehomogenize();
        let g_x1 = g.partial(1);
        let mut candidates = Vec::new();
        for (h, _) in p.factor(rng)?.factors {
            if h.degree() < Some(2) {
                continue;
            }
            let k = FieldCtx::extension_unchecked(ctx, &h);
            let alpha = k.generator().expect("proper extension");
            let c = g_x1.eval_raw(&k, &k.one_raw(), alpha.digits());
            candidates.push(AlphaData { k, alpha, c });
        }
        Ok(SmoothnessChecker {
            g: g.clone(),
            q: g.q() as usize,
            candidates,
        })
    }

    pub fn g(&self) -> &BinForm {
        &self.g
    }

    pub fn check<R: Rng + ?Sized>(&self, f: &BinForm, rng: &mut R) -> Result<SmoothnessReport> {
        let curve = build_curve(f, &self.g)?;
        ensure_no_rational_point(f, Side::F)?;
        let q = self.q;
        let qt = internal_form(f).dehomogenize();
        let fy0 = f.partial(0).dehomogenize();
        let mut stats = CheckStats::default();
        for cand in &self.candidates {
            stats.factors_examined += 1;
            let k = &cand.k;
            let qt_k = qt.lift(k)?;
            let mut r = fy0.lift(k)?.raw().to_vec();
            let w = k.width();
            r.resize(r.len().max((q + 1) * w), 0);
            k.sub_raw(&mut r[q * w..(q + 1) * w], &cand.c);
            let r = UPoly::from_raw(k, r);
            let gcd = qt_k.gcd_unchecked(&r);
            stats.gcds_computed += 1;
            if gcd.degree().unwrap_or(0) == 0 {
                continue;
            }
            for (m, _) in gcd.factor(rng)?.factors {
                let (alpha, beta) = if m.degree() == Some(1) {
                    (cand.alpha.clone(), -&m.coeff(0))
                } else {
                    let l = FieldCtx::extension_unchecked(k, &m);
                    (
                        cand.alpha.lift(&l)?,
                        l.generator().expect("proper extension"),
                    )
                };
                if let Some(w) = SingularWitness::verified(&curve, alpha, beta, Some(m))? {
                    return Ok(SmoothnessReport::new(Some(w), Method::FactorGcd, stats));
                }
            }
        }
        Ok(SmoothnessReport::new(None, Method::FactorGcd, stats))
    }
}

/// A singular point of `C_{f,g}`, or `None` when the curve is smooth.
///
/// Requires `V(f)` and `V(g)` to have no `F_q`-rational point.
pub fn singular_witness<R: Rng + ?Sized>(
    f: &BinForm,
    g: &BinForm,
    rng: &mut R,
) -> Result<Option<SingularWitness>> {
    Ok(check_smoothness(f, g, rng)?.witness)
}

/// [`singular_witness`] with the full report.
pub fn check_smoothness<R: Rng + ?Sized>(
    f: &BinForm,
    g: &BinForm,
    rng: &mut R,
) -> Result<SmoothnessReport> {
    build_curve(f, g)?;
    ensure_no_rational_point(f, Side::F)?;
    SmoothnessChecker::new(g, rng)?.check(f, rng)
}

/// Smoothness verdict with a fixed internal seed.
pub fn is_smooth(f: &BinForm, g: &BinForm) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    Ok(singular_witness(f, g, &mut rng)?.is_none())
}

/// Homma's bound `(q-1)(q^4-1) / (q(q^3-1) - 3(q-1)) * k` on the number of
/// rational points of a nondegenerate irreducible degree-`k` curve in `P^3`.
pub fn homma_bound(q: u64, k: u64) -> BigRational {
    let q = BigInt::from(q);
    let one = BigInt::from(1);
    let num = (&q - &one) * (q.pow(4) - &one) * BigInt::from(k);
    let den = &q * (q.pow(3) - &one) - BigInt::from(3) * (&q - &one);
    BigRational::new(num, den)
}
