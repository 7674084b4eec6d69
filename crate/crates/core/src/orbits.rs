//! `SL_2(F_q)`-orbits on `G_q` and orbit-reduced censuses of smooth pairs.
//!
//! Smoothness of `C_{f,g}` only depends on the orbits of `f` and `g`, so a
//! census checks one pair of representatives per pair of orbits and weights
//! it by the product of the orbit sizes.
//!
//! In the census matrix, rows index the orbit of `f` and columns the orbit
//! of `g`; `smooth_partners[j]` lists the `f`-orbits that make a smooth
//! curve with the `g`-orbit `j`.

use std::collections::{HashMap, VecDeque};
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::binform::{enumerate_gq, enumerate_sl2, random_gq, BinForm, Guards, SL2Mat};
use crate::curve::SmoothnessChecker;
use crate::error::{Error, Result};
use crate::field::{canonical_field, enumerate_field, FieldCtx};
use crate::rng::{mix, par_map, task_rng};

pub const CENSUS_SCHEMA_VERSION: u32 = 1;

/// Columns of [`CensusResult::write_csv`], version 1.
pub const CSV_COLUMNS: [&str; 5] = [
    "f_orbit",
    "g_orbit",
    "f_orbit_size",
    "g_orbit_size",
    "smooth",
];

#[derive(Debug, Clone)]
pub struct Orbit {
    pub representative: BinForm,
    pub size: usize,
    /// Sorted.
    pub members: Vec<BinForm>,
}

impl Orbit {
    /// Shape of the factorization of `f(1, x)`, e.g. `2^2`, `2+2`, `4`.
    ///
    /// A drop in degree counts as linear factors at infinity.
    pub fn factor_type(&self) -> String {
        factor_type(&self.representative)
    }
}

pub fn factor_type(f: &BinForm) -> String {
    let p = f.dehomogenize();
    let mut parts: Vec<(usize, usize)> = Vec::new();
    if let Some(deg) = p.degree() {
        if deg > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let fact = p.factor(&mut rng).expect("positive degree");
            parts.extend(
                fact.factors
                    .iter()
                    .map(|(h, m)| (h.degree().unwrap_or(0), *m)),
            );
        }
        if deg < f.degree() {
            parts.push((1, f.degree() - deg));
        }
    }
    parts.sort();
    parts
        .iter()
        .map(|&(d, m)| {
            if m == 1 {
                d.to_string()
            } else {
                format!("{d}^{m}")
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

#[derive(Debug, Clone)]
pub struct OrbitTable {
    pub q: u64,
    /// Sorted by `(size, representative)`.
    pub orbits: Vec<Orbit>,
    pub total: usize,
    index: HashMap<BinForm, usize>,
}

impl OrbitTable {
    fn from_classes(q: u64, classes: Vec<Vec<BinForm>>) -> OrbitTable {
        let mut orbits: Vec<Orbit> = classes
            .into_iter()
            .map(|mut members| {
                members.sort();
                Orbit {
                    representative: members[0].clone(),
                    size: members.len(),
                    members,
                }
            })
            .collect();
        orbits.sort_by(|a, b| (a.size, &a.representative).cmp(&(b.size, &b.representative)));
        let mut index = HashMap::new();
        for (i, o) in orbits.iter().enumerate() {
            for m in &o.members {
                index.insert(m.clone(), i);
            }
        }
        OrbitTable {
            q,
            total: index.len(),
            orbits,
            index,
        }
    }

    /// Index of the orbit containing `f`.
    pub fn orbit_of(&self, f: &BinForm) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.size).collect()
    }

    pub fn representatives(&self) -> Vec<BinForm> {
        self.orbits
            .iter()
            .map(|o| o.representative.clone())
            .collect()
    }
}

/// `[[1, t], [0, 1]]` and `[[1, 0], [t, 1]]` for `t != 0`; they generate `SL_2(F_q)`.
pub fn sl2_generators(ctx: &FieldCtx) -> Vec<SL2Mat> {
    enumerate_field(ctx)
        .into_iter()
        .filter(|t| !t.is_zero())
        .flat_map(|t| [SL2Mat::upper(&t), SL2Mat::lower(&t)])
        .collect()
}

/// Orbits of a set of forms closed under the action, found by BFS over
/// [`sl2_generators`].
pub fn orbit_decomposition(forms: &[BinForm], q: u64) -> Result<OrbitTable> {
    let ctx = canonical_field(q)?;
    let gens = sl2_generators(&ctx);
    decompose(forms, q, |f| {
        gens.iter().map(|m| f.act(m)).collect::<Result<Vec<_>>>()
    })
}

/// Same as [`orbit_decomposition`] but applying every element of `SL_2(F_q)`.
pub fn orbit_decomposition_full_group(
    forms: &[BinForm],
    q: u64,
    guards: &Guards,
) -> Result<OrbitTable> {
    let group = enumerate_sl2(q, guards)?;
    decompose(forms, q, |f| {
        group.iter().map(|m| f.act(m)).collect::<Result<Vec<_>>>()
    })
}

fn decompose<N>(forms: &[BinForm], q: u64, neighbours: N) -> Result<OrbitTable>
where
    N: Fn(&BinForm) -> Result<Vec<BinForm>>,
{
    let position: HashMap<&BinForm, usize> =
        forms.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut seen = vec![false; forms.len()];
    let mut classes = Vec::new();
    for start in 0..forms.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut class = vec![forms[start].clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for h in neighbours(&forms[i])? {
                let j = *position.get(&h).ok_or(Error::NotClosed)?;
                if !seen[j] {
                    seen[j] = true;
                    class.push(h);
                    queue.push_back(j);
                }
            }
        }
        classes.push(class);
    }
    Ok(OrbitTable::from_classes(q, classes))
}

#[derive(Debug, Clone)]
pub struct CensusResult {
    pub q: u64,
    pub table: OrbitTable,
    /// `smooth_matrix[i][j]`: `C_{f,g}` is smooth for `f` in orbit `i`, `g` in orbit `j`.
    pub smooth_matrix: Vec<Vec<bool>>,
}

impl CensusResult {
    pub fn group_order(&self) -> u64 {
        self.q * (self.q * self.q - 1)
    }

    pub fn total_pairs(&self) -> u64 {
        (self.table.total as u64).pow(2)
    }

    pub fn total_smooth_pairs(&self) -> u64 {
        let sizes = self.table.sizes();
        let mut total = 0u64;
        for (i, row) in self.smooth_matrix.iter().enumerate() {
            for (j, &s) in row.iter().enumerate() {
                if s {
                    total += (sizes[i] * sizes[j]) as u64;
                }
            }
        }
        total
    }

    /// `F(O_j)`: the `f`-orbits smooth against the `g`-orbit `j`.
    pub fn smooth_partners(&self, j: usize) -> Vec<usize> {
        (0..self.smooth_matrix.len())
            .filter(|&i| self.smooth_matrix[i][j])
            .collect()
    }

    pub fn to_json(&self) -> CensusJson {
        let n = self.table.orbits.len();
        CensusJson {
            schema_version: CENSUS_SCHEMA_VERSION,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            q: self.q,
            group_order: self.group_order(),
            gq_size: self.table.total,
            orbits: self
                .table
                .orbits
                .iter()
                .enumerate()
                .map(|(index, o)| OrbitJson {
                    index,
                    size: o.size,
                    representative: o
                        .representative
                        .coeffs()
                        .iter()
                        .map(|c| c.to_string())
                        .collect(),
                    factor_type: o.factor_type(),
                })
                .collect(),
            smooth_matrix: self.smooth_matrix.clone(),
            smooth_partners: (0..n).map(|j| self.smooth_partners(j)).collect(),
            total_pairs: self.total_pairs(),
            total_smooth_pairs: self.total_smooth_pairs(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        let sizes = self.table.sizes();
        for (i, row) in self.smooth_matrix.iter().enumerate() {
            for (j, &s) in row.iter().enumerate() {
                w.write_record([
                    i.to_string(),
                    j.to_string(),
                    sizes[i].to_string(),
                    sizes[j].to_string(),
                    s.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Serialized census; field order is the on-disk order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusJson {
    pub schema_version: u32,
    pub library_version: String,
    pub q: u64,
    pub group_order: u64,
    pub gq_size: usize,
    pub orbits: Vec<OrbitJson>,
    pub smooth_matrix: Vec<Vec<bool>>,
    pub smooth_partners: Vec<Vec<usize>>,
    pub total_pairs: u64,
    pub total_smooth_pairs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub index: usize,
    pub size: usize,
    pub representative: Vec<String>,
    pub factor_type: String,
}

/// `G_q` and its orbit table.
pub fn orbits(q: u64, guards: &Guards) -> Result<OrbitTable> {
    orbit_decomposition(&enumerate_gq(q, guards)?, q)
}

/// Orbit-reduced census of smooth pairs in `G_q x G_q`.
pub fn census(q: u64, jobs: usize, seed: u64, guards: &Guards) -> Result<CensusResult> {
    if q > guards.census_q {
        return Err(Error::TooLarge {
            what: format!("census for q = {q}"),
            limit: guards.census_q,
        });
    }
    let table = orbits(q, guards)?;
    let reps = table.representatives();
    let smooth_matrix = smooth_matrix(&reps, &reps, jobs, seed)?;
    Ok(CensusResult {
        q,
        table,
        smooth_matrix,
    })
}

/// Verdicts for all pairs, `out[i][j]` for `fs[i]` against `gs[j]`.
pub fn smooth_matrix(
    fs: &[BinForm],
    gs: &[BinForm],
    jobs: usize,
    seed: u64,
) -> Result<Vec<Vec<bool>>> {
    let checkers: Vec<SmoothnessChecker> = par_map(gs.len(), jobs, |j| {
        SmoothnessChecker::new(&gs[j], &mut task_rng(seed, j as u64))
    })?
    .into_iter()
    .collect::<Result<_>>()?;
    let (nf, ng) = (fs.len(), gs.len());
    let flat: Vec<bool> = par_map(nf * ng, jobs, |k| {
        let (i, j) = (k / ng, k % ng);
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, (ng + k) as u64));
        checkers[j].check(&fs[i], &mut rng).map(|r| r.smooth)
    })?
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(flat.chunks(ng.max(1)).map(|r| r.to_vec()).collect())
}

/// Smooth-pair count over all of `G_q x G_q`, without orbit reduction.
pub fn census_unreduced(q: u64, jobs: usize, seed: u64, guards: &Guards) -> Result<Vec<Vec<bool>>> {
    let forms = enumerate_gq(q, guards)?;
    smooth_matrix(&forms, &forms, jobs, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleStats {
    pub q: u64,
    pub n: u64,
    pub seed: u64,
    pub smooth: u64,
}

/// Counts smooth curves among `n` independent uniform pairs `(f, g)` from
/// `G_q x G_q`. Draw `i` uses the stream `mix(seed, i)`: first `f`, then `g`.
pub fn sample_stats(q: u64, n: u64, seed: u64, jobs: usize) -> Result<SampleStats> {
    let ctx = canonical_field(q)?;
    let verdicts = par_map(n as usize, jobs, |i| {
        let mut rng = task_rng(seed, i as u64);
        let f = random_gq(&ctx, &mut rng);
        let g = random_gq(&ctx, &mut rng);
        SmoothnessChecker::new(&g, &mut rng)?
            .check(&f, &mut rng)
            .map(|r| r.smooth)
    })?;
    let mut smooth = 0;
    for v in verdicts {
        smooth += v? as u64;
    }
    Ok(SampleStats { q, n, seed, smooth })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q3_orbits() {
        let t = orbits(3, &Guards::default()).unwrap();
        assert_eq!(t.sizes(), vec![3, 3, 6, 6, 6, 12, 12]);
        assert_eq!(t.total, 48);
        let o22 = BinForm::from_ints(&canonical_field(3).unwrap(), &[1, 0, -1, 0, 1]);
        let i = t.orbit_of(&o22).unwrap();
        assert_eq!(t.orbits[i].size, 3);
        assert_eq!(t.orbits[i].factor_type(), "2^2");
    }

    #[test]
    fn bfs_matches_full_group() {
        let g = Guards::default();
        for q in [2, 3, 4] {
            let forms = enumerate_gq(q, &g).unwrap();
            let a = orbit_decomposition(&forms, q).unwrap();
            let b = orbit_decomposition_full_group(&forms, q, &g).unwrap();
            assert_eq!(a.representatives(), b.representatives());
            assert_eq!(a.sizes(), b.sizes());
        }
    }

    #[test]
    fn not_closed_is_detected() {
        let ctx = canonical_field(3).unwrap();
        let f = BinForm::from_ints(&ctx, &[1, 0, 0, 0, 1]);
        assert!(matches!(
            orbit_decomposition(&[f], 3),
            Err(Error::NotClosed)
        ));
    }

    #[test]
    fn fixed_form_is_a_singleton_orbit() {
        // the bracket is fixed by all of SL_2
        let ctx = canonical_field(3).unwrap();
        let b = crate::curve::bracket_form(&ctx).unwrap();
        let t = orbit_decomposition(&[b], 3).unwrap();
        assert_eq!(t.sizes(), vec![1]);
    }

    #[test]
    fn q2_census_is_empty() {
        let c = census(2, 1, 0, &Guards::default()).unwrap();
        assert_eq!(c.total_pairs(), 4);
        assert_eq!(c.total_smooth_pairs(), 0);
    }

    #[test]
    fn census_guard() {
        assert!(matches!(
            census(7, 1, 0, &Guards::default()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn sample_zero() {
        let s = sample_stats(3, 0, 5, 1).unwrap();
        assert_eq!((s.smooth, s.n), (0, 0));
    }

    #[test]
    fn csv_shape() {
        let c = census(2, 1, 0, &Guards::default()).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        assert_eq!(lines.len(), 1 + c.table.orbits.len().pow(2));
    }
}
