//! Level-by-level multiplicities of the spectrum of `P_n`.
//!
//! A finite set of conjugate classes is tracked explicitly: the zero class,
//! the nonzero eigenvalue of `P_0`, the exceptional classes, and every class
//! that some tracked value or critical point of `R` is carried onto by
//! iterating `R`. The preimages of a tracked class that nothing maps onto
//! are never tracked; they enter the spectrum as whole blocks
//! `R^{-k}(t)` sharing the multiplicity `mult_{n-k}(t)`.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::schur::{schur_extract, DecimationData};
use crate::algebra::factor::factor_rational;
use crate::algebra::integer::FactoredRational;
use crate::algebra::matrix::char_poly;
use crate::algebra::numfield::image_minpoly;
use crate::algebra::poly::UniPoly;
use crate::algebra::preimage::pullback;
use crate::error::{Error, Result};
use crate::fractal::build::{build_graph, vertex_count};
use crate::fractal::schema::SubstitutionSchema;
use crate::matrix_tree::laplacians;

/// Orbit length explored when closing the tracked set.
const ORBIT_STEPS: usize = 64;
/// Refuse schemas whose tracked set grows beyond this.
const MAX_TRACKED: usize = 512;
/// Levels inspected when labelling classes as A or B.
const ORIGIN_HORIZON: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Origin {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "zero")]
    Zero,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::A => "A",
            Origin::B => "B",
            Origin::Zero => "zero",
        }
    }
}

/// A class whose multiplicity is computed individually at every level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackedClass {
    pub minpoly: UniPoly,
    /// Index into `DecimationData::exceptional`.
    pub exceptional: Option<usize>,
    /// Index of the tracked class containing `R(theta)`; `None` when that
    /// image is a pole or not tracked.
    pub image: Option<usize>,
    /// Whether some tracked value or critical point maps onto this class.
    /// Preimages of split classes are tracked themselves.
    pub split: bool,
    pub norm: BigRational,
    pub root_sum: BigRational,
}

/// One entry of the spectrum: the depth-`depth` preimages of `base` under
/// `R`, all with the same multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralClass {
    pub base: UniPoly,
    pub base_index: usize,
    pub depth: usize,
    pub origin: Origin,
    /// `deg(base) * d^depth`.
    pub degree: BigInt,
    /// Sum of all roots of the depth-`depth` preimage polynomial.
    pub root_sum: BigRational,
}

/// The spectrum of `P_n` as a multiset of classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralMultiset {
    pub level: usize,
    pub vertex_count: BigInt,
    pub entries: Vec<(SpectralClass, BigInt)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumJson {
    pub level: usize,
    pub classes: Vec<SpectrumClassJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumClassJson {
    pub minpoly: Vec<String>,
    pub depth: usize,
    pub origin: Origin,
    pub mult: String,
}

impl SpectralMultiset {
    pub fn total_degree(&self) -> BigInt {
        self.entries.iter().map(|(c, m)| &c.degree * m).sum()
    }

    /// Sum of all eigenvalues with multiplicity; equals the trace of `P_n`.
    pub fn trace(&self) -> BigRational {
        self.entries
            .iter()
            .map(|(c, m)| &c.root_sum * BigRational::from_integer(m.clone()))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn zero_multiplicity(&self) -> BigInt {
        self.entries
            .iter()
            .filter(|(c, _)| c.origin == Origin::Zero)
            .map(|(_, m)| m.clone())
            .sum()
    }

    pub fn to_json(&self) -> SpectrumJson {
        SpectrumJson {
            level: self.level,
            classes: self
                .entries
                .iter()
                .map(|(c, m)| SpectrumClassJson {
                    minpoly: c.base.coeffs().iter().map(|q| format!("{}/{}", q.numer(), q.denom())).collect(),
                    depth: c.depth,
                    origin: c.origin,
                    mult: m.to_string(),
                })
                .collect(),
        }
    }

    /// Monic product of every entry's preimage polynomial raised to its
    /// multiplicity. Only sensible for small levels.
    pub fn expand(&self, dd: &DecimationData) -> Result<UniPoly> {
        let mut acc = UniPoly::one();
        for (c, m) in &self.entries {
            let mut h = c.base.clone();
            for _ in 0..c.depth {
                h = pullback(&h, &dd.r)?;
            }
            let e: u64 = m
                .try_into()
                .map_err(|_| Error::CapExceeded(format!("multiplicity {m} too large to expand")))?;
            acc = &acc * &h.pow(e);
        }
        Ok(acc.monic())
    }
}

/// Spectral decimation for one schema. Multiplicity tables are extended on
/// demand behind a lock, so one engine can serve concurrent readers.
#[derive(Debug)]
pub struct SpectrumEngine {
    data: DecimationData,
    tracked: Vec<TrackedClass>,
    table: RwLock<Table>,
    schema: SubstitutionSchema,
}

#[derive(Debug, Default)]
struct Table {
    sizes: Vec<BigInt>,
    mults: Vec<Vec<BigInt>>,
}

pub const ZERO_CLASS: usize = 0;

impl SpectrumEngine {
    pub fn new(s: &SubstitutionSchema) -> Result<Self> {
        let data = schur_extract(s)?;
        let tracked = close_tracked(&data)?;
        let engine = SpectrumEngine { data, tracked, table: RwLock::new(Table::default()), schema: s.clone() };
        engine.ensure_level(0)?;
        Ok(engine)
    }

    /// An engine from the process-wide cache, keyed by the schema's JSON.
    pub fn shared(s: &SubstitutionSchema) -> Result<Arc<SpectrumEngine>> {
        static CACHE: OnceLock<RwLock<HashMap<String, Arc<SpectrumEngine>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let key = s.to_json_string();
        if let Some(e) = cache.read().expect("engine cache").get(&key) {
            return Ok(e.clone());
        }
        let engine = Arc::new(SpectrumEngine::new(s)?);
        Ok(cache.write().expect("engine cache").entry(key).or_insert(engine).clone())
    }

    pub fn data(&self) -> &DecimationData {
        &self.data
    }

    pub fn tracked(&self) -> &[TrackedClass] {
        &self.tracked
    }

    pub fn schema(&self) -> &SubstitutionSchema {
        &self.schema
    }

    /// Multiplicities of every tracked class at level `n`.
    pub fn multiplicities(&self, n: usize) -> Result<Vec<BigInt>> {
        self.ensure_level(n)?;
        Ok(self.table.read().expect("table lock").mults[n].clone())
    }

    pub fn vertex_count(&self, n: usize) -> Result<BigInt> {
        self.ensure_level(n)?;
        Ok(self.table.read().expect("table lock").sizes[n].clone())
    }

    /// `mult_n` of a tracked class given by its monic minimal polynomial;
    /// zero for classes that are not tracked.
    pub fn multiplicity_of(&self, minpoly: &UniPoly, n: usize) -> Result<BigInt> {
        let m = self.multiplicities(n)?;
        Ok(self.index_of(&minpoly.monic()).map(|i| m[i].clone()).unwrap_or_default())
    }

    pub fn index_of(&self, monic: &UniPoly) -> Option<usize> {
        self.tracked.iter().position(|t| &t.minpoly == monic)
    }

    fn ensure_level(&self, n: usize) -> Result<()> {
        if self.table.read().expect("table lock").mults.len() > n {
            return Ok(());
        }
        let mut table = self.table.write().expect("table lock");
        let n0 = self.data.boundary_size;
        let cells = BigInt::from(self.data.num_cells);
        while table.mults.len() <= n {
            let level = table.mults.len();
            let size = vertex_count(&self.schema, level);
            let mut mults = vec![BigInt::zero(); self.tracked.len()];
            if level == 0 {
                mults[ZERO_CLASS] = BigInt::one();
                let top = UniPoly::linear_root(BigRational::new(BigInt::from(n0), BigInt::from(n0 - 1)));
                let i = self.tracked.iter().position(|t| t.minpoly == top).expect("base class is tracked");
                mults[i] = BigInt::from(n0 - 1);
            } else {
                let prev = &table.mults[level - 1];
                let prev_size = &table.sizes[level - 1];
                let scale = num_traits::pow(cells.clone(), level - 1);
                for (i, t) in self.tracked.iter().enumerate() {
                    let prev_image = t.image.map(|j| prev[j].clone()).unwrap_or_default();
                    mults[i] = if i == ZERO_CLASS {
                        BigInt::one()
                    } else if let Some(e) = t.exceptional {
                        self.data.exceptional[e].multiplicity(&scale, prev_size, &prev_image)
                    } else {
                        prev_image
                    };
                    if mults[i].is_negative() {
                        return Err(Error::Invariant(format!(
                            "negative multiplicity {} for class {} at level {level}",
                            mults[i], t.minpoly
                        )));
                    }
                }
            }
            table.sizes.push(size);
            table.mults.push(mults);
            let level_set = self.assemble(level, &table)?;
            check_invariants(&level_set)?;
        }
        Ok(())
    }

    /// B for classes whose preimages enter the spectrum as blocks, A for
    /// the remaining nonzero classes.
    fn origin(&self, i: usize, table: &Table, horizon: usize) -> Origin {
        if i == ZERO_CLASS {
            return Origin::Zero;
        }
        let top = horizon.min(table.mults.len() - 1);
        let feeds = !self.tracked[i].split && (0..top).any(|n| !table.mults[n][i].is_zero());
        if feeds {
            Origin::B
        } else {
            Origin::A
        }
    }

    fn assemble(&self, n: usize, table: &Table) -> Result<SpectralMultiset> {
        let d = self.data.degree;
        let p_prev = self.data.r.num().coeff(d - 1);
        let q_prev = self.data.r.den().coeff(d - 1);
        let p_lead = &self.data.p_lead;
        let horizon = n.max(ORIGIN_HORIZON);
        let mut entries = Vec::new();
        for (i, t) in self.tracked.iter().enumerate() {
            let g = t.minpoly.deg();
            if !table.mults[n][i].is_zero() {
                let origin = self.origin(i, table, horizon);
                entries.push((
                    SpectralClass {
                        base: t.minpoly.clone(),
                        base_index: i,
                        depth: 0,
                        origin,
                        degree: BigInt::from(g),
                        root_sum: t.root_sum.clone(),
                    },
                    table.mults[n][i].clone(),
                ));
            }
            if t.split {
                continue;
            }
            let mut count = BigInt::from(g);
            let mut sum = t.root_sum.clone();
            for k in 1..=n {
                // roots of Q^N h(P/Q) for monic h of degree N and root sum s
                let nn = BigRational::from_integer(count.clone());
                sum = -((&nn * &p_prev) - (&q_prev * &sum)) / p_lead;
                count *= BigInt::from(d);
                let mu = &table.mults[n - k][i];
                if mu.is_zero() {
                    continue;
                }
                entries.push((
                    SpectralClass {
                        base: t.minpoly.clone(),
                        base_index: i,
                        depth: k,
                        origin: Origin::B,
                        degree: count.clone(),
                        root_sum: sum.clone(),
                    },
                    mu.clone(),
                ));
            }
        }
        Ok(SpectralMultiset { level: n, vertex_count: table.sizes[n].clone(), entries })
    }

    /// Every tracked class that is an eigenvalue at some level, labelled.
    pub fn labelled_classes(&self) -> Result<Vec<(UniPoly, Origin)>> {
        self.ensure_level(ORIGIN_HORIZON)?;
        let table = self.table.read().expect("table lock");
        Ok((0..self.tracked.len())
            .filter(|&i| table.mults.iter().any(|m| !m[i].is_zero()))
            .map(|i| (self.tracked[i].minpoly.clone(), self.origin(i, &table, table.mults.len())))
            .collect())
    }

    pub fn spectrum(&self, n: usize) -> Result<SpectralMultiset> {
        self.ensure_level(n.max(ORIGIN_HORIZON))?;
        let table = self.table.read().expect("table lock");
        self.assemble(n, &table)
    }

    /// Product of all nonzero eigenvalues of `P_n` in factored form.
    pub fn eigenvalue_product(&self, n: usize) -> Result<FactoredRational> {
        let mults = (0..=n).map(|l| self.multiplicities(l)).collect::<Result<Vec<_>>>()?;
        let d = BigInt::from(self.data.degree);
        let odd_d = self.data.degree % 2 == 1;
        let ratio = FactoredRational::from_rational(&self.data.preimage_ratio())?;
        let mut acc = FactoredRational::one();
        for (i, t) in self.tracked.iter().enumerate() {
            if i == ZERO_CLASS {
                continue;
            }
            let g = BigInt::from(t.minpoly.deg());
            let mut norm_exp = mults[n][i].clone();
            let mut ratio_exp = BigInt::zero();
            let mut sign_flips = BigInt::zero();
            if !t.split {
                // depth k preimages: norm(t) * ratio^(g (d^k - 1)/(d - 1)),
                // with a sign (-1)^(g k) when d is odd
                let mut geometric = BigInt::zero();
                let mut dk = BigInt::one();
                for k in 1..=n {
                    geometric += &dk;
                    dk *= &d;
                    let mu = &mults[n - k][i];
                    if mu.is_zero() {
                        continue;
                    }
                    norm_exp += mu;
                    ratio_exp += mu * &g * &geometric;
                    if odd_d && (&g * BigInt::from(k)).is_odd() {
                        sign_flips += mu;
                    }
                }
            }
            if norm_exp.is_zero() {
                continue;
            }
            let norm = FactoredRational::from_rational(&t.norm)?;
            acc = acc.mul(&norm.pow(&norm_exp)).mul(&ratio.pow(&ratio_exp));
            if sign_flips.is_odd() {
                acc = acc.mul(&FactoredRational::from_integer(&BigInt::from(-1))?);
            }
        }
        Ok(acc)
    }
}

fn check_invariants(set: &SpectralMultiset) -> Result<()> {
    let n = set.level;
    let deg = set.total_degree();
    if deg != set.vertex_count {
        return Err(Error::Invariant(format!(
            "level {n}: spectrum has {deg} eigenvalues but V_n has {} vertices",
            set.vertex_count
        )));
    }
    let trace = set.trace();
    if trace != BigRational::from_integer(set.vertex_count.clone()) {
        return Err(Error::Invariant(format!("level {n}: eigenvalue sum {trace} differs from trace {}", set.vertex_count)));
    }
    let z = set.zero_multiplicity();
    if !z.is_one() {
        return Err(Error::Invariant(format!("level {n}: eigenvalue 0 has multiplicity {z}")));
    }
    Ok(())
}

/// Builds the tracked set and closes it under the splitting rule.
fn close_tracked(dd: &DecimationData) -> Result<Vec<TrackedClass>> {
    let n0 = dd.boundary_size;
    let mut classes: Vec<UniPoly> = vec![UniPoly::x()];
    let push = |classes: &mut Vec<UniPoly>, f: UniPoly| {
        if !classes.contains(&f) {
            classes.push(f);
        }
    };
    for e in &dd.exceptional {
        push(&mut classes, e.minpoly.clone());
    }
    push(&mut classes, UniPoly::linear_root(BigRational::new(BigInt::from(n0), BigInt::from(n0 - 1))));

    let r_prime = dd.r.derivative();
    let probes: Vec<UniPoly> = if r_prime.num().is_constant() {
        Vec::new()
    } else {
        factor_rational(r_prime.num())?.factors.into_iter().map(|(f, _)| f.monic()).collect()
    };
    let lo = BigRational::zero();
    let hi = BigRational::from_integer(BigInt::from(2));

    let mut expanded: Vec<bool> = Vec::new();
    let mut split: Vec<bool>;
    loop {
        split = vec![false; classes.len()];
        let seeds: Vec<UniPoly> = classes.iter().chain(probes.iter()).cloned().collect();
        for seed in seeds {
            let mut cur = seed.clone();
            let mut seen = BTreeSet::new();
            seen.insert(format!("{cur}"));
            for _ in 0..ORBIT_STEPS {
                let img = match image_minpoly(&cur, &dd.r) {
                    Ok(img) => img,
                    Err(Error::Pole) => break,
                    Err(e) => return Err(e),
                };
                if let Some(j) = classes.iter().position(|c| c == &img) {
                    split[j] = true;
                    break;
                }
                if img.count_real_roots_in(&lo, &hi) != img.deg() || !seen.insert(format!("{img}")) {
                    break;
                }
                cur = img;
            }
        }
        expanded.resize(classes.len(), false);
        let mut changed = false;
        for j in 0..classes.len() {
            if split[j] && !expanded[j] {
                expanded[j] = true;
                for (f, _) in factor_rational(&pullback(&classes[j], &dd.r)?)?.factors {
                    let f = f.monic();
                    if !classes.contains(&f) {
                        classes.push(f);
                        changed = true;
                    }
                }
            }
        }
        if classes.len() > MAX_TRACKED {
            return Err(Error::DecimationInapplicable(format!(
                "more than {MAX_TRACKED} eigenvalue classes would need individual tracking"
            )));
        }
        if !changed && split.len() == classes.len() {
            break;
        }
    }

    let mut out = Vec::with_capacity(classes.len());
    for (i, f) in classes.iter().enumerate() {
        let image = match image_minpoly(f, &dd.r) {
            Ok(img) => classes.iter().position(|c| c == &img),
            Err(Error::Pole) => None,
            Err(e) => return Err(e),
        };
        out.push(TrackedClass {
            minpoly: f.clone(),
            exceptional: dd.exceptional.iter().position(|e| &e.minpoly == f),
            image,
            split: split[i],
            norm: f.root_product(),
            root_sum: f.root_sum(),
        });
    }
    Ok(out)
}

/// Compares the decimation spectrum of level `n` with the characteristic
/// polynomial of the built graph's probabilistic Laplacian.
pub fn charpoly_check(s: &SubstitutionSchema, n: usize) -> Result<bool> {
    let engine = SpectrumEngine::new(s)?;
    charpoly_check_with(&engine, n)
}

pub fn charpoly_check_with(engine: &SpectrumEngine, n: usize) -> Result<bool> {
    let predicted = engine.spectrum(n)?.expand(engine.data())?;
    let g = build_graph(engine.schema(), n)?;
    let actual = char_poly(&laplacians(&g)?.p)?.monic();
    if predicted == actual {
        return Ok(true);
    }
    let top = predicted.deg().max(actual.deg());
    let i = (0..=top).rev().find(|&i| predicted.coeff(i) != actual.coeff(i)).unwrap_or(0);
    Err(Error::Mismatch(format!(
        "level {n}: characteristic polynomials differ at x^{i}: decimation gives {}, graph gives {}",
        predicted.coeff(i),
        actual.coeff(i)
    )))
}

/// The spectrum of `P_n` for a decimation-eligible schema.
pub fn spectrum(s: &SubstitutionSchema, n: usize) -> Result<SpectralMultiset> {
    SpectrumEngine::new(s)?.spectrum(n)
}
