//! Pfaffian minors of skew-symmetric polynomial matrices.
//!
//! Index sets are bitmasks over `0..m` (printed 1-based). The wedge-power
//! definition is the reference; the recursion and derivative formulas use
//! prefactors calibrated against it once per process (see [`calibration`]).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::One;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactpoly::{Ambient, PolyError, Polynomial, Rational};
use crate::vectorfield::{FieldError, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PfaffianError {
    #[error("index {0} is not in {1}")]
    NotInSet(usize, IndexSet),
    #[error("index set {0} has odd cardinality")]
    OddSize(IndexSet),
    #[error("rank {r} must be even and smaller than {m}")]
    BadRank { r: usize, m: usize },
    #[error("index {index} out of range for size {m}")]
    OutOfRange { index: usize, m: usize },
    #[error("matrix size {0} exceeds the supported maximum of 32")]
    TooLarge(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Subset of `{0..32}`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_bits(bits: u32) -> Self {
        IndexSet(bits)
    }

    /// From 0-based indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        IndexSet(it.into_iter().fold(0, |b, i| b | (1 << i)))
    }

    /// From 1-based labels, as written in the literature.
    pub fn from_labels<I: IntoIterator<Item = usize>>(it: I) -> Self {
        Self::from_indices(it.into_iter().map(|i| i - 1))
    }

    /// `{0..m}`.
    pub fn full(m: usize) -> Self {
        if m >= 32 {
            IndexSet(u32::MAX)
        } else {
            IndexSet((1u32 << m) - 1)
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn without(self, i: usize) -> Self {
        IndexSet(self.0 & !(1 << i))
    }

    pub fn with(self, i: usize) -> Self {
        IndexSet(self.0 | (1 << i))
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Increasing 0-based elements.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// Number of elements strictly smaller than `i`.
    pub fn rank_of(self, i: usize) -> usize {
        (self.0 & ((1u32 << i) - 1)).count_ones() as usize
    }

    /// 1-based labels.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// All subsets of `{0..m}` of cardinality `l`, lexicographic in sorted
    /// element lists.
    pub fn subsets(m: usize, l: usize) -> Vec<IndexSet> {
        (0..m)
            .combinations(l)
            .map(IndexSet::from_indices)
            .collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().iter().join(","))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

/// `ε(I, j)`: sign of moving `e_j` to its sorted slot in `⋀_{i∈I} e_i`.
pub fn epsilon_sign(set: IndexSet, j: usize) -> Result<i64, PfaffianError> {
    if !set.contains(j) {
        return Err(PfaffianError::NotInSet(j, set));
    }
    Ok(parity(set.rank_of(j)))
}

fn parity(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Skew-symmetric `m x m` matrix with polynomial entries; only `i < j` is stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SkewMatrix {
    m: usize,
    ambient: Ambient,
    upper: Vec<Polynomial>,
}

impl SkewMatrix {
    pub fn zero(m: usize, ambient: Ambient) -> Self {
        SkewMatrix {
            m,
            ambient,
            upper: vec![Polynomial::zero(ambient); m * m.saturating_sub(1) / 2],
        }
    }

    /// Build from `a(i, j)` for `i < j` (0-based).
    pub fn from_fn<F>(m: usize, ambient: Ambient, mut a: F) -> Result<Self, PfaffianError>
    where
        F: FnMut(usize, usize) -> Polynomial,
    {
        if m > 32 {
            return Err(PfaffianError::TooLarge(m));
        }
        let mut out = Self::zero(m, ambient);
        for i in 0..m {
            for j in i + 1..m {
                let v = a(i, j).embed(ambient)?;
                let k = out.slot(i, j);
                out.upper[k] = v;
            }
        }
        Ok(out)
    }

    /// From a full square matrix; only the strict upper triangle is read.
    pub fn from_rows(rows: &[Vec<Polynomial>], ambient: Ambient) -> Result<Self, PfaffianError> {
        Self::from_fn(rows.len(), ambient, |i, j| rows[i][j].clone())
    }

    /// Constant matrix from rationals (upper triangle read).
    pub fn from_rational(rows: &[Vec<Rational>]) -> Self {
        let amb = Ambient::base(0);
        Self::from_fn(rows.len(), amb, |i, j| Polynomial::constant(amb, rows[i][j].clone()))
            .expect("constant entries")
    }

    /// `Σ e_{2k-1} ∧ e_{2k}` padded with zero rows up to `m`.
    pub fn standard_block(m: usize, pairs: usize) -> Self {
        let amb = Ambient::base(0);
        Self::from_fn(m, amb, |i, j| {
            if i % 2 == 0 && j == i + 1 && i / 2 < pairs {
                Polynomial::one(amb)
            } else {
                Polynomial::zero(amb)
            }
        })
        .expect("constant entries")
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.m);
        i * (2 * self.m - i - 1) / 2 + (j - i - 1)
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    /// `a_ij` with `a_ji = -a_ij` and zero diagonal.
    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[self.slot(i, j)].clone(),
            std::cmp::Ordering::Greater => -&self.upper[self.slot(j, i)],
            std::cmp::Ordering::Equal => Polynomial::zero(self.ambient),
        }
    }

    /// Reference to the stored `a_ij`, `i < j`.
    pub fn upper(&self, i: usize, j: usize) -> &Polynomial {
        &self.upper[self.slot(i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(Polynomial::is_zero)
    }

    pub fn map<F>(&self, ambient: Ambient, mut f: F) -> Result<SkewMatrix, PfaffianError>
    where
        F: FnMut(&Polynomial) -> Result<Polynomial, PolyError>,
    {
        let upper = self
            .upper
            .iter()
            .map(|p| f(p).and_then(|q| q.embed(ambient)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SkewMatrix {
            m: self.m,
            ambient,
            upper,
        })
    }

    /// Entries evaluated at a rational point; the result is a constant matrix.
    pub fn evaluate(&self, point: &[Rational]) -> Result<SkewMatrix, PfaffianError> {
        let amb = Ambient::base(0);
        self.map(amb, |p| Ok(Polynomial::constant(amb, p.eval_rational(point)?)))
    }

    /// Entries of a constant matrix as rationals.
    pub fn rational_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.entry(i, j).constant_term()).collect())
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<Polynomial>> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// `M · v` for a polynomial vector `v` of length `m`.
    pub fn apply(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>, PfaffianError> {
        let mut out = vec![Polynomial::zero(self.ambient); self.m];
        for (i, slot) in out.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i == j || vj.is_zero() {
                    continue;
                }
                let a = self.entry(i, j);
                if !a.is_zero() {
                    *slot = slot.checked_add(&a.checked_mul(&vj.embed(self.ambient)?)?)?;
                }
            }
        }
        Ok(out)
    }

    fn check_set(&self, set: IndexSet) -> Result<(), PfaffianError> {
        if let Some(bad) = set.iter().find(|&i| i >= self.m) {
            return Err(PfaffianError::OutOfRange { index: bad, m: self.m });
        }
        Ok(())
    }
}

impl fmt::Debug for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SkewMatrix {}x{} over {}", self.m, self.m, self.ambient)?;
        for i in 0..self.m {
            let row: Vec<String> = (0..self.m).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Sign of `e_S ∧ e_T` relative to `e_{S∪T}` (disjoint sets).
fn wedge_sign(s: IndexSet, t: IndexSet) -> i64 {
    let mut swaps = 0usize;
    for i in s.iter() {
        swaps += (t.0 & ((1u32 << i) - 1)).count_ones() as usize;
    }
    parity(swaps)
}

type Multivector = BTreeMap<IndexSet, Polynomial>;

fn wedge(a: &Multivector, b: &Multivector) -> Result<Multivector, PolyError> {
    let mut out: Multivector = BTreeMap::new();
    for (s, p) in a {
        for (t, q) in b {
            if s.0 & t.0 != 0 {
                continue;
            }
            let term = p.checked_mul(q)?.scale_int(wedge_sign(*s, *t));
            let key = IndexSet(s.0 | t.0);
            let merged = match out.remove(&key) {
                Some(prev) => prev.checked_add(&term)?,
                None => term,
            };
            if !merged.is_zero() {
                out.insert(key, merged);
            }
        }
    }
    Ok(out)
}

/// `φ(A, I)`: coefficient of `⋀_{i∈I} e_i` in `(1/s!) ⋀^s A_I`, `s = |I|/2`.
/// `1` on the empty set and `0` on odd sets.
pub fn pfaffian_by_definition(a: &SkewMatrix, set: IndexSet) -> Result<Polynomial, PfaffianError> {
    a.check_set(set)?;
    let amb = a.ambient;
    if set.len() % 2 == 1 {
        return Ok(Polynomial::zero(amb));
    }
    let s = set.len() / 2;
    let mut two_form: Multivector = BTreeMap::new();
    for (i, j) in set.iter().collect_vec().into_iter().tuple_combinations() {
        let v = a.upper(i, j);
        if !v.is_zero() {
            two_form.insert(IndexSet::from_indices([i, j]), v.clone());
        }
    }
    let mut power: Multivector = BTreeMap::from([(IndexSet::EMPTY, Polynomial::one(amb))]);
    let mut factorial = Rational::one();
    for k in 1..=s {
        power = wedge(&power, &two_form)?;
        factorial *= Rational::from_integer(k.into());
    }
    Ok(power
        .remove(&set)
        .map(|p| p.scale(&factorial.recip()))
        .unwrap_or_else(|| Polynomial::zero(amb)))
}

/// Calibrated prefactors of the expansion and derivative formulas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Calibration {
    /// `|I| -> c(|I|)` in the pivot expansion.
    pub recursion: BTreeMap<usize, String>,
    /// `|I| -> c'(|I|)` in the derivative formula.
    pub derivative: BTreeMap<usize, String>,
    #[serde(skip)]
    recursion_values: BTreeMap<usize, Rational>,
    #[serde(skip)]
    derivative_values: BTreeMap<usize, Rational>,
}

/// Largest `|I|` calibrated; larger sets reuse the value at this size.
pub const CALIBRATED_UP_TO: usize = 16;

impl Calibration {
    pub fn recursion_prefactor(&self, size: usize) -> Rational {
        let k = size.min(CALIBRATED_UP_TO);
        self.recursion_values[&k].clone()
    }

    pub fn derivative_prefactor(&self, size: usize) -> Rational {
        let k = size.min(CALIBRATED_UP_TO);
        self.derivative_values[&k].clone()
    }
}

/// Prefactors fixed by comparing the unscaled formulas with the wedge
/// definition on block matrices, for every even size up to 16.
pub fn calibration() -> &'static Calibration {
    static CAL: OnceLock<Calibration> = OnceLock::new();
    CAL.get_or_init(|| {
        let mut recursion_values = BTreeMap::new();
        let mut derivative_values = BTreeMap::new();
        for size in (2..=CALIBRATED_UP_TO).step_by(2) {
            let block = SkewMatrix::standard_block(size, size / 2);
            let full = IndexSet::full(size);
            let truth = pfaffian_by_definition(&block, full).expect("block");
            let raw = pivot_sum(&block, full, 0, &|t| pfaffian_by_definition(&block, t))
                .expect("block");
            recursion_values.insert(size, truth.constant_term() / raw.constant_term());

            // a_12 = x1, other pairs 1: φ = x1 and d/dx1 φ = 1.
            let amb = Ambient::base(1);
            let scaled = SkewMatrix::from_fn(size, amb, |i, j| match (i, j) {
                (0, 1) => Polynomial::x(amb, 0),
                _ if i % 2 == 0 && j == i + 1 => Polynomial::one(amb),
                _ => Polynomial::zero(amb),
            })
            .expect("block");
            let d = VectorField::coordinate(1, 0);
            let truth = d.apply(&pfaffian_by_definition(&scaled, full).expect("block")).expect("d");
            let raw = derivative_sum(&scaled, full, &d, &|t| pfaffian_by_definition(&scaled, t))
                .expect("block");
            derivative_values.insert(size, truth.constant_term() / raw.constant_term());
        }
        Calibration {
            recursion: recursion_values.iter().map(|(k, v)| (*k, v.to_string())).collect(),
            derivative: derivative_values.iter().map(|(k, v)| (*k, v.to_string())).collect(),
            recursion_values,
            derivative_values,
        }
    })
}

fn pivot_sum<F>(a: &SkewMatrix, set: IndexSet, pivot: usize, phi: &F) -> Result<Polynomial, PfaffianError>
where
    F: Fn(IndexSet) -> Result<Polynomial, PfaffianError>,
{
    let outer = epsilon_sign(set, pivot)?;
    let rest = set.without(pivot);
    let mut acc = Polynomial::zero(a.ambient);
    for j in rest.iter() {
        let aij = a.entry(pivot, j);
        if aij.is_zero() {
            continue;
        }
        let sign = outer * epsilon_sign(rest, j)?;
        let term = aij.checked_mul(&phi(rest.without(j))?)?.scale_int(sign);
        acc = acc.checked_add(&term)?;
    }
    Ok(acc)
}

fn derivative_sum<F>(
    a: &SkewMatrix,
    set: IndexSet,
    d: &VectorField,
    phi: &F,
) -> Result<Polynomial, PfaffianError>
where
    F: Fn(IndexSet) -> Result<Polynomial, PfaffianError>,
{
    let amb = a.ambient;
    let mut acc = Polynomial::zero(amb);
    for i in set.iter() {
        let rest = set.without(i);
        for j in rest.iter() {
            let da = d.apply(&a.entry(i, j))?;
            if da.is_zero() {
                continue;
            }
            let sign = epsilon_sign(set, i)? * epsilon_sign(rest, j)?;
            let term = phi(rest.without(j))?.checked_mul(&da.embed(amb)?)?.scale_int(sign);
            acc = acc.checked_add(&term)?;
        }
    }
    Ok(acc)
}

/// Expansion along the pivot `i0`, recursing on the same formula.
pub fn pfaffian_by_recursion(a: &SkewMatrix, set: IndexSet, pivot: usize) -> Result<Polynomial, PfaffianError> {
    a.check_set(set)?;
    if set.len() % 2 == 1 {
        return Err(PfaffianError::OddSize(set));
    }
    if set.is_empty() {
        return Ok(Polynomial::one(a.ambient));
    }
    if !set.contains(pivot) {
        return Err(PfaffianError::NotInSet(pivot, set));
    }
    let c = calibration().recursion_prefactor(set.len());
    let raw = pivot_sum(a, set, pivot, &|t| match t.min() {
        None => Ok(Polynomial::one(a.ambient)),
        Some(p) => pfaffian_by_recursion(a, t, p),
    })?;
    Ok(raw.scale(&c))
}

/// `D φ(A, I)` via the calibrated derivative formula. `D` acts on the
/// entries; a base derivation is applied to phase-space entries through its
/// embedding.
pub fn pfaffian_derivative(a: &SkewMatrix, set: IndexSet, d: &VectorField) -> Result<Polynomial, PfaffianError> {
    a.check_set(set)?;
    if set.len() % 2 == 1 {
        return Err(PfaffianError::OddSize(set));
    }
    let d = if d.ambient() != a.ambient && a.ambient.has_fiber() {
        d.to_phase()?
    } else {
        d.clone()
    };
    let table = PfaffianTable::new(a, set.len());
    let c = calibration().derivative_prefactor(set.len().max(2));
    let raw = derivative_sum(a, set, &d, &|t| Ok(table.get(t).clone()))?;
    Ok(raw.scale(&c))
}

/// Memoized `φ(A, I)` for every `I ⊂ {0..m}` with `|I| <= max_size`.
#[derive(Debug, Clone)]
pub struct PfaffianTable {
    m: usize,
    ambient: Ambient,
    values: HashMap<IndexSet, Polynomial>,
    zero: Polynomial,
}

impl PfaffianTable {
    pub fn new(a: &SkewMatrix, max_size: usize) -> Self {
        let c = calibration();
        let mut values: HashMap<IndexSet, Polynomial> = HashMap::new();
        values.insert(IndexSet::EMPTY, Polynomial::one(a.ambient));
        let top = max_size.min(a.m);
        for size in (2..=top).step_by(2) {
            let cs = c.recursion_prefactor(size);
            let layer: Vec<(IndexSet, Polynomial)> = IndexSet::subsets(a.m, size)
                .into_iter()
                .map(|set| {
                    let pivot = set.min().expect("nonempty");
                    let raw = pivot_sum(a, set, pivot, &|t| Ok(values[&t].clone()))
                        .expect("entries share the matrix ambient");
                    (set, raw.scale(&cs))
                })
                .collect();
            values.extend(layer);
        }
        PfaffianTable {
            m: a.m,
            ambient: a.ambient,
            values,
            zero: Polynomial::zero(a.ambient),
        }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    /// `φ(A, I)`; odd sets give zero. Panics if `|I|` exceeds the table.
    pub fn get(&self, set: IndexSet) -> &Polynomial {
        if set.len() % 2 == 1 {
            return &self.zero;
        }
        self.values
            .get(&set)
            .unwrap_or_else(|| panic!("pfaffian of {set} not tabulated"))
    }

    /// Minors of size `r` in lexicographic order.
    pub fn minors(&self, r: usize) -> Vec<(IndexSet, Polynomial)> {
        IndexSet::subsets(self.m, r)
            .into_iter()
            .map(|s| (s, self.get(s).clone()))
            .collect()
    }
}

/// `Z_I = Σ_{i∈I} ε(I, i) φ(A, I∖{i}) e_i` for `|I| = r + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelGenerator {
    pub index_set: IndexSet,
    /// `(i, ε(I,i) φ(A, I∖{i}))` for each `i ∈ I`, 0-based `i`.
    #[serde(serialize_with = "ser_coeffs")]
    pub coefficients: Vec<(usize, Polynomial)>,
}

fn ser_coeffs<S: Serializer>(c: &[(usize, Polynomial)], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<(usize, String)> = c.iter().map(|(i, p)| (i + 1, p.to_string())).collect();
    v.serialize(s)
}

impl KernelGenerator {
    /// Dense vector of length `m`.
    pub fn dense(&self, m: usize, ambient: Ambient) -> Vec<Polynomial> {
        let mut v = vec![Polynomial::zero(ambient); m];
        for (i, c) in &self.coefficients {
            v[*i] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|(_, c)| c.is_zero())
    }
}

/// One generator per `I ∈ Λ_{r+1}`, lexicographic.
pub fn kernel_generators(a: &SkewMatrix, r: usize) -> Result<Vec<KernelGenerator>, PfaffianError> {
    if r % 2 == 1 || r >= a.m {
        return Err(PfaffianError::BadRank { r, m: a.m });
    }
    let table = PfaffianTable::new(a, r);
    Ok(kernel_generators_from_table(&table, r))
}

pub fn kernel_generators_from_table(table: &PfaffianTable, r: usize) -> Vec<KernelGenerator> {
    IndexSet::subsets(table.m, r + 1)
        .into_iter()
        .map(|set| KernelGenerator {
            index_set: set,
            coefficients: set
                .iter()
                .map(|i| (i, table.get(set.without(i)).scale_int(parity(set.rank_of(i)))))
                .collect(),
        })
        .collect()
}

/// Largest even `r` with a nonzero `φ(A, I)`, `|I| = r`. With `at`, the
/// entries are evaluated first.
pub fn skew_rank(a: &SkewMatrix, at: Option<&[Rational]>) -> Result<usize, PfaffianError> {
    let a = match at {
        Some(point) => a.evaluate(point)?,
        None => a.clone(),
    };
    Ok(skew_rank_with_table(&PfaffianTable::new(&a, a.m)))
}

pub fn skew_rank_with_table(table: &PfaffianTable) -> usize {
    let mut r = 0;
    let mut size = 2;
    while size <= table.m {
        if IndexSet::subsets(table.m, size)
            .into_iter()
            .any(|s| table.values.get(&s).is_some_and(|p| !p.is_zero()))
        {
            r = size;
        } else {
            break;
        }
        size += 2;
    }
    r
}

/// `Det` of the square submatrix with the given rows and columns (ordered
/// increasingly), by Laplace expansion memoized over used columns.
pub fn minor_determinant(
    a: &SkewMatrix,
    rows: IndexSet,
    cols: IndexSet,
) -> Result<Polynomial, PfaffianError> {
    a.check_set(rows)?;
    a.check_set(cols)?;
    let amb = a.ambient;
    if rows.len() != cols.len() {
        return Ok(Polynomial::zero(amb));
    }
    let row_list: Vec<usize> = rows.iter().collect();
    let col_list: Vec<usize> = cols.iter().collect();
    let k = row_list.len();
    // dp[mask] over local column indices; rows are assigned in order.
    let mut dp: HashMap<u32, Polynomial> = HashMap::from([(0u32, Polynomial::one(amb))]);
    for &row in &row_list {
        let mut next: HashMap<u32, Polynomial> = HashMap::new();
        for (mask, val) in &dp {
            for (c, &col) in col_list.iter().enumerate() {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let e = a.entry(row, col);
                if e.is_zero() {
                    continue;
                }
                let above = (mask >> (c + 1)).count_ones() as usize;
                let term = val.checked_mul(&e)?.scale_int(parity(above));
                let key = mask | (1 << c);
                let merged = match next.remove(&key) {
                    Some(prev) => prev.checked_add(&term)?,
                    None => term,
                };
                next.insert(key, merged);
            }
        }
        dp = next;
    }
    let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    Ok(dp.remove(&full).unwrap_or_else(|| Polynomial::zero(amb)))
}
