//! Brute-force singularity search, independent of factorization and gcds.
//!
//! Phase one scans every element of `F_(q^d)`, `d = 1..2q`, for zeros of the
//! internal polynomials `p` and `qt` and records the exact degrees that occur.
//! Phase two takes each pair of occurring degrees `(d1, d2)`, builds
//! `L = F_(q^lcm(d1, d2))`, realizes its subfields `F_(q^d1)` and `F_(q^d2)`
//! as kernels of `Frob^d - 1` over `F_q`, scans them in full for the zeros
//! again and tests every pair on the Jacobian.
//!
//! Every field here is `F_q[t]/(h)` with `h` the lex-smallest monic of its
//! degree that passes a linear-algebra irreducibility test:
//! `t^(q^n) = t` mod `h` makes `h` squarefree, and then the Berlekamp
//! subalgebra `ker(Frob - 1)` is one-dimensional iff `h` is irreducible.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{build_curve, ensure_no_rational_point, internal_form, SingularWitness};
use crate::binform::BinForm;
use crate::error::{Error, Result, Side};
use crate::field::{Fel, FieldCtx};
use crate::unipoly::UPoly;

pub const DEFAULT_SCAN_BUDGET: u128 = 10_000_000;

/// Exhaustive search for a singular point of `C_{f,g}`.
///
/// `budget` caps the number of field elements scanned; when the search
/// would need more, [`Error::BudgetExceeded`] reports how many.
pub fn scan_oracle(f: &BinForm, g: &BinForm, budget: u128) -> Result<Option<SingularWitness>> {
    let curve = build_curve(f, g)?;
    ensure_no_rational_point(f, Side::F)?;
    ensure_no_rational_point(g, Side::G)?;
    let base = f.ctx().clone();
    let q = f.q();
    let top = 2 * q as usize;
    let phase_one: u128 = (1..=top).map(|d| (q as u128).pow(d as u32)).sum();
    if phase_one > budget {
        return Err(Error::BudgetExceeded {
            needed: phase_one,
            budget,
        });
    }
    let p = internal_form(g).dehomogenize();
    let qt = internal_form(f).dehomogenize();

    let mut p_degrees = BTreeSet::new();
    let mut q_degrees = BTreeSet::new();
    for d in 1..=top {
        let e = scanned_field(&base, d);
        for idx in 0..(q as u128).pow(d as u32) {
            let x = Fel::from_index(&e, idx as u64);
            let in_p = p.eval(&x)?.is_zero();
            let in_q = qt.eval(&x)?.is_zero();
            if (in_p || in_q) && exact_degree(&x, q, d) == d {
                if in_p {
                    p_degrees.insert(d);
                }
                if in_q {
                    q_degrees.insert(d);
                }
            }
        }
    }

    let mut total = phase_one;
    for &d1 in &p_degrees {
        for &d2 in &q_degrees {
            total += (q as u128).pow(d1 as u32) + (q as u128).pow(d2 as u32);
        }
    }
    if total > budget {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget,
        });
    }

    let mut fields: BTreeMap<usize, FieldCtx> = BTreeMap::new();
    for &d1 in &p_degrees {
        for &d2 in &q_degrees {
            let m = lcm(d1, d2);
            let l = fields
                .entry(m)
                .or_insert_with(|| scanned_field(&base, m))
                .clone();
            let alphas = subfield_roots(&l, q, d1, &p)?;
            let betas = subfield_roots(&l, q, d2, &qt)?;
            let one = Fel::one(&l);
            for a in &alphas {
                for b in &betas {
                    if curve.is_singular_at(&one, a, &one, b)? {
                        return match SingularWitness::verified(&curve, a.clone(), b.clone(), None)?
                        {
                            Some(w) => Ok(Some(w)),
                            None => Err(Error::Internal(format!(
                                "singular point with a coordinate in F_{q}"
                            ))),
                        };
                    }
                }
            }
        }
    }
    Ok(None)
}

fn lcm(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Degree over `F_q` of `x`, an element of a field of degree `d` over `F_q`.
fn exact_degree(x: &Fel, q: u64, d: usize) -> usize {
    (1..=d)
        .filter(|e| d.is_multiple_of(*e))
        .find(|&e| x.frobenius(q, e) == *x)
        .expect("x^(q^d) = x")
}

/// `F_(q^d)` as `base[t]/(h)`, `h` the lex-smallest irreducible monic of
/// degree `d` (constant term most significant).
fn scanned_field(base: &FieldCtx, d: usize) -> FieldCtx {
    if d == 1 {
        return base.clone();
    }
    let q = base.order_u64().expect("small base");
    let w = base.width();
    let count = BigUint::from(q).pow(d as u32);
    let mut idx = BigUint::from(0u32);
    while idx < count {
        // constant term is the most significant digit of idx
        let mut digits = vec![0u32; (d + 1) * w];
        let mut rest = idx.clone();
        for i in (0..d).rev() {
            let r = (&rest % q).to_u64().expect("digit");
            rest /= q;
            digits[i * w..(i + 1) * w].copy_from_slice(&base.digits_of_index(r));
        }
        digits[d * w..].copy_from_slice(&base.one_raw());
        let h = UPoly::from_raw(base, digits);
        if irreducible_by_linear_algebra(&h, q) {
            return FieldCtx::extension_unchecked(base, &h);
        }
        idx += 1u32;
    }
    unreachable!("irreducible polynomials of every degree exist")
}

fn irreducible_by_linear_algebra(h: &UPoly, q: u64) -> bool {
    let base = h.ctx();
    let n = h.degree().expect("nonzero");
    let x = UPoly::x(base);
    let xq = x.pow_mod(&BigUint::from(q), h);
    let mut frob = x.clone();
    for _ in 0..n {
        frob = frob.pow_mod(&BigUint::from(q), h);
    }
    if frob != x.divmod(h).expect("nonzero").1 {
        return false;
    }
    // column j: (t^j)^q - t^j = xq^j - t^j
    let mut cols = Vec::with_capacity(n);
    let mut pw = UPoly::one(base);
    for j in 0..n {
        let mut col: Vec<Fel> = (0..n).map(|i| pw.coeff(i)).collect();
        col[j] = &col[j] - &Fel::one(base);
        cols.push(col);
        pw = (&pw * &xq).divmod(h).expect("nonzero").1;
    }
    kernel(&cols, n).len() == 1
}

/// Basis of `{ v : sum_j v_j cols[j] = 0 }`, columns of length `rows`.
fn kernel(cols: &[Vec<Fel>], rows: usize) -> Vec<Vec<Fel>> {
    let n = cols.len();
    // row-major copy: a[i][j] = cols[j][i]
    let mut a: Vec<Vec<Fel>> = (0..rows)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let k = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&k * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let zero = cols
        .first()
        .and_then(|c| c.first())
        .map(|x| Fel::zero(x.ctx()))
        .expect("nonempty matrix");
    let one = Fel::one(zero.ctx());
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); n];
        v[free] = one.clone();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[row][free];
        }
        basis.push(v);
    }
    basis
}

/// Zeros of `poly` of exact degree `d` over `F_q` inside `l`, found by
/// scanning the whole subfield `F_(q^d)` of `l`, in lex order.
fn subfield_roots(l: &FieldCtx, q: u64, d: usize, poly: &UPoly) -> Result<Vec<Fel>> {
    let base = poly.ctx();
    let n = l.degree_over(q).expect("tower over F_q");
    let sub: Vec<Fel> = if d == n {
        (0..q.pow(d as u32))
            .map(|i| Fel::from_index(l, i))
            .collect()
    } else {
        let gen = l.generator().expect("proper extension");
        let phi = gen.frobenius(q, d);
        let mut cols = Vec::with_capacity(n);
        let mut pw = Fel::one(l);
        let mut phi_pw = Fel::one(l);
        for _ in 0..n {
            let diff = &phi_pw - &pw;
            cols.push(diff.coeffs());
            pw = &pw * &gen;
            phi_pw = &phi_pw * &phi;
        }
        let basis = kernel(&cols, n);
        if basis.len() != d {
            return Err(Error::Internal(format!(
                "subfield of degree {d} has dimension {}",
                basis.len()
            )));
        }
        let elems: Vec<Fel> = basis
            .iter()
            .map(|v| Fel::from_coeffs(l, v).expect("coordinates over F_q"))
            .collect();
        let mut all = Vec::with_capacity(q.pow(d as u32) as usize);
        for idx in 0..q.pow(d as u32) {
            let mut acc = Fel::zero(l);
            let mut rest = idx;
            for e in &elems {
                let c = Fel::from_index(base, rest % q);
                rest /= q;
                if !c.is_zero() {
                    acc = &acc + &(&e.clone() * &c.lift(l)?);
                }
            }
            all.push(acc);
        }
        all
    };
    let mut roots: Vec<Fel> = sub
        .into_iter()
        .filter(|x| poly.eval(x).map(|v| v.is_zero()).unwrap_or(false))
        .filter(|x| exact_degree(x, q, n) == d)
        .collect();
    roots.sort();
    Ok(roots)
}
