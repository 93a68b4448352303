//! Complete censuses of order-`m` minors.
//!
//! [`enumerate_minors`] visits every `(row subset, column subset)` pair and
//! computes each determinant exactly. The default strategy walks row subsets
//! as a prefix tree: for a row prefix of length `k` it keeps all `k x k`
//! minors on those rows (indexed by colex rank of the column subset), and
//! extends them to `k + 1` rows by cofactor expansion along the new row. Each
//! minor then costs `m` multiply-adds. Values stay within Hadamard's bound,
//! so `i64` is exact for every supported order.
//!
//! When the per-order subset tables would be too large (minor order close to
//! the column count), the search falls back to fraction-free elimination over
//! column subsets, which shares prefix work between siblings and skips
//! dependent prefixes in bulk.
//!
//! [`sum_squares_gram`] uses `det(B B^T) = sum of det(M)^2` over the maximal
//! minors `M` of each `m`-row slice `B`, so it only needs `C(rows, m)` Gram
//! determinants. It cannot count zeros.
//!
//! Work is split into independent tasks whose partial results are merged by
//! integer addition, so the output does not depend on the number of threads.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{PrimInt, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::det::{self, MAX_I64_ORDER, MAX_MINOR_ORDER};
use crate::error::{Error, Result};
use crate::matrix::SignMatrix;
use crate::rational::{int_json, uint_json};
use crate::subsets::{choose_u128, rank, BinomialTable, Colex};

pub const DEFAULT_WORK_CAP: u64 = 1_000_000_000;

const FULL_ENGINE_HINT: &str = "use the gram engine for sum-of-squares queries or raise --work-cap";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Maximum number of minors a full enumeration may visit.
    pub work_cap: u64,
    pub strategy: Strategy,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            work_cap: DEFAULT_WORK_CAP,
            strategy: Strategy::Auto,
        }
    }
}

/// How [`enumerate_minors_with`] evaluates determinants. All strategies give
/// identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Row-prefix expansion unless its tables are too large.
    #[default]
    Auto,
    RowPrefix,
    ColumnElimination,
    /// One independent determinant per minor.
    Direct,
}

/// Entry cap for the row-prefix subset tables under [`Strategy::Auto`].
pub const ROW_PREFIX_TABLE_LIMIT: u128 = 1 << 22;

/// Exact census of the order-`m` minors of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorStats {
    pub order_m: usize,
    pub total_count: BigUint,
    /// `Z(m, A)`.
    pub zero_count: BigUint,
    /// `Y(m, A)`.
    pub nonzero_count: BigUint,
    pub sum_squares: BigUint,
    /// Determinant value to count, ascending; only filled when requested.
    pub histogram: Option<BTreeMap<i128, u64>>,
}

impl MinorStats {
    /// `det,count` CSV, rows ascending by determinant.
    pub fn histogram_csv(&self) -> Option<String> {
        let h = self.histogram.as_ref()?;
        let mut s = String::from("det,count\n");
        for (d, c) in h {
            s.push_str(&format!("{d},{c}\n"));
        }
        Some(s)
    }
}

impl Serialize for MinorStats {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MinorStats", 6)?;
        st.serialize_field("order_m", &self.order_m)?;
        st.serialize_field("total_count", &uint_json(&self.total_count))?;
        st.serialize_field("zero_count", &uint_json(&self.zero_count))?;
        st.serialize_field("nonzero_count", &uint_json(&self.nonzero_count))?;
        st.serialize_field("sum_squares", &uint_json(&self.sum_squares))?;
        if let Some(h) = &self.histogram {
            let rows: Vec<serde_json::Value> = h
                .iter()
                .map(|(d, c)| {
                    serde_json::json!({
                        "det": int_json(&BigInt::from(*d)),
                        "count": int_json(&BigInt::from(*c)),
                    })
                })
                .collect();
            st.serialize_field("histogram", &rows)?;
        }
        st.end()
    }
}

fn check_order(a: &SignMatrix, m: usize) -> Result<()> {
    if m == 0 || m > a.rows().min(a.cols()) {
        return Err(Error::Domain(format!(
            "minor order {m} must lie in 1..={} for a {}x{} matrix",
            a.rows().min(a.cols()),
            a.rows(),
            a.cols()
        )));
    }
    if m > MAX_MINOR_ORDER {
        return Err(Error::UnsupportedOrder {
            order: m,
            max: MAX_MINOR_ORDER,
        });
    }
    Ok(())
}

/// Number of order-`m` minors, `C(rows, m) * C(cols, m)`, saturating.
pub fn minor_count(a: &SignMatrix, m: usize) -> u128 {
    choose_u128(a.rows(), m).saturating_mul(choose_u128(a.cols(), m))
}

pub fn enumerate_minors(a: &SignMatrix, m: usize, with_histogram: bool) -> Result<MinorStats> {
    enumerate_minors_with(a, m, with_histogram, &EngineConfig::default())
}

pub fn enumerate_minors_with(
    a: &SignMatrix,
    m: usize,
    with_histogram: bool,
    cfg: &EngineConfig,
) -> Result<MinorStats> {
    check_order(a, m)?;
    let total = minor_count(a, m);
    if total > cfg.work_cap as u128 {
        return Err(Error::Budget {
            required: total,
            cap: cfg.work_cap,
            hint: FULL_ENGINE_HINT,
        });
    }
    let strategy = resolve(cfg.strategy, a, m);
    let partial = match strategy {
        Strategy::RowPrefix => row_prefix(a, m, m, with_histogram).swap_remove(m),
        _ => by_row_subset(a, m, with_histogram, strategy == Strategy::Direct),
    };
    Ok(partial.finish(m))
}

fn resolve(strategy: Strategy, a: &SignMatrix, m: usize) -> Strategy {
    match strategy {
        Strategy::Auto => {
            let short = a.rows().min(a.cols());
            if row_prefix_table_size(short, m) <= ROW_PREFIX_TABLE_LIMIT {
                Strategy::RowPrefix
            } else {
                Strategy::ColumnElimination
            }
        }
        s => s,
    }
}

/// Censuses for every order `1..=highest`, element `m - 1` for order `m`.
///
/// The work cap applies to the total number of minors over all orders. With
/// the row-prefix strategy all orders come from a single walk.
pub fn enumerate_minors_all(
    a: &SignMatrix,
    highest: usize,
    with_histogram: bool,
    cfg: &EngineConfig,
) -> Result<Vec<MinorStats>> {
    check_order(a, highest)?;
    let total: u128 = (1..=highest).map(|m| minor_count(a, m)).sum();
    if total > cfg.work_cap as u128 {
        return Err(Error::Budget {
            required: total,
            cap: cfg.work_cap,
            hint: FULL_ENGINE_HINT,
        });
    }
    if resolve(cfg.strategy, a, highest) == Strategy::RowPrefix {
        return Ok(row_prefix(a, 1, highest, with_histogram)
            .into_iter()
            .enumerate()
            .skip(1)
            .map(|(m, p)| p.finish(m))
            .collect());
    }
    (1..=highest)
        .map(|m| enumerate_minors_with(a, m, with_histogram, cfg))
        .collect()
}

/// One task per contiguous block of row subsets; each row subset is handled
/// by the column search or the direct scan.
fn by_row_subset(a: &SignMatrix, m: usize, with_histogram: bool, direct: bool) -> Partial {
    let row_subsets = choose_u128(a.rows(), m) as u64;
    let binom = BinomialTable::new(a.cols(), m);
    block_ranges(row_subsets)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc = Partial::new(m, with_histogram);
            let mut it = Colex::from_rank(a.rows(), m, lo);
            for _ in lo..hi {
                let rows = it.peek().expect("rank within range");
                if direct {
                    direct_scan(a, rows, &mut acc);
                } else if m <= MAX_I64_ORDER {
                    column_search::<i64>(a, rows, &binom, &mut acc);
                } else {
                    column_search::<i128>(a, rows, &binom, &mut acc);
                }
                it.advance();
            }
            acc
        })
        .reduce(|| Partial::new(m, with_histogram), Partial::merge)
}

/// Contiguous rank blocks over `0..count`, sized for load balancing.
fn block_ranges(count: u64) -> Vec<(u64, u64)> {
    let threads = rayon::current_num_threads() as u64;
    let target = (threads * 16).max(1);
    let size = count.div_ceil(target).max(1);
    (0..count)
        .step_by(size as usize)
        .map(|lo| (lo, (lo + size).min(count)))
        .collect()
}

/// Per-worker accumulator.
struct Partial {
    visited: u64,
    zeros: u64,
    sum_sq: u128,
    sum_sq_spill: BigUint,
    hist: Option<Histogram>,
}

impl Partial {
    fn new(m: usize, with_histogram: bool) -> Self {
        Self {
            visited: 0,
            zeros: 0,
            sum_sq: 0,
            sum_sq_spill: BigUint::zero(),
            hist: with_histogram.then(|| Histogram::new(m)),
        }
    }

    #[inline]
    fn record(&mut self, det: i128) {
        self.visited += 1;
        if det == 0 {
            self.zeros += 1;
        } else {
            let sq = (det.unsigned_abs()).pow(2);
            match self.sum_sq.checked_add(sq) {
                Some(v) => self.sum_sq = v,
                None => {
                    self.sum_sq_spill += self.sum_sq;
                    self.sum_sq = sq;
                }
            }
        }
        if let Some(h) = &mut self.hist {
            h.add(det, 1);
        }
    }

    /// Same as [`Partial::record`]; the caller adds the visit count in bulk.
    #[inline(always)]
    fn record_small(&mut self, det: i64) {
        self.zeros += (det == 0) as u64;
        let sq = det.unsigned_abs() as u128 * det.unsigned_abs() as u128;
        match self.sum_sq.checked_add(sq) {
            Some(v) => self.sum_sq = v,
            None => {
                self.sum_sq_spill += self.sum_sq;
                self.sum_sq = sq;
            }
        }
        if let Some(h) = &mut self.hist {
            h.add_small(det);
        }
    }

    #[inline]
    fn record_zeros(&mut self, count: u64) {
        self.visited += count;
        self.zeros += count;
        if let Some(h) = &mut self.hist {
            h.add(0, count);
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.visited += other.visited;
        self.zeros += other.zeros;
        self.sum_sq_spill += other.sum_sq_spill;
        match self.sum_sq.checked_add(other.sum_sq) {
            Some(v) => self.sum_sq = v,
            None => self.sum_sq_spill += other.sum_sq,
        }
        self.hist = match (self.hist, other.hist) {
            (Some(mut a), Some(b)) => {
                a.merge(b);
                Some(a)
            }
            (a, _) => a,
        };
        self
    }

    fn finish(self, m: usize) -> MinorStats {
        let total = BigUint::from(self.visited);
        let zero = BigUint::from(self.zeros);
        MinorStats {
            order_m: m,
            nonzero_count: &total - &zero,
            total_count: total,
            zero_count: zero,
            sum_squares: self.sum_sq_spill + self.sum_sq,
            histogram: self.hist.map(Histogram::into_map),
        }
    }
}

/// Determinant histogram; dense over multiples of `2^(m-1)` within Hadamard's
/// bound, sparse for anything else.
struct Histogram {
    shift: u32,
    q_max: i128,
    dense: Vec<u64>,
    sparse: BTreeMap<i128, u64>,
}

const DENSE_HISTOGRAM_LIMIT: i128 = 1 << 19;

impl Histogram {
    fn new(m: usize) -> Self {
        let shift = (m as u32).saturating_sub(1);
        let bound = isqrt((m as u128).pow(m as u32)) as i128;
        let q_max = bound >> shift;
        let dense = if 2 * q_max < DENSE_HISTOGRAM_LIMIT {
            vec![0; (2 * q_max + 1) as usize]
        } else {
            Vec::new()
        };
        Self {
            shift,
            q_max,
            dense,
            sparse: BTreeMap::new(),
        }
    }

    #[inline]
    fn add(&mut self, det: i128, count: u64) {
        if !self.dense.is_empty() && det & ((1i128 << self.shift) - 1) == 0 {
            let q = det >> self.shift;
            if q.abs() <= self.q_max {
                self.dense[(q + self.q_max) as usize] += count;
                return;
            }
        }
        *self.sparse.entry(det).or_insert(0) += count;
    }

    #[inline(always)]
    fn add_small(&mut self, det: i64) {
        let q = det >> self.shift;
        let i = q + self.q_max as i64;
        if (q << self.shift) == det && i >= 0 && (i as usize) < self.dense.len() {
            self.dense[i as usize] += 1;
        } else {
            *self.sparse.entry(det as i128).or_insert(0) += 1;
        }
    }

    fn merge(&mut self, other: Histogram) {
        for (a, b) in self.dense.iter_mut().zip(other.dense) {
            *a += b;
        }
        for (k, v) in other.sparse {
            *self.sparse.entry(k).or_insert(0) += v;
        }
    }

    fn into_map(self) -> BTreeMap<i128, u64> {
        let mut out = self.sparse;
        for (i, &c) in self.dense.iter().enumerate() {
            if c > 0 {
                let det = (i as i128 - self.q_max) << self.shift;
                *out.entry(det).or_insert(0) += c;
            }
        }
        out
    }
}

fn isqrt(v: u128) -> u128 {
    let mut r = (v as f64).sqrt() as u128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// `sum_{k <= m} k C(n, k)`: entries in the drop tables for `n` columns.
fn row_prefix_table_size(n: usize, m: usize) -> u128 {
    (1..=m).map(|k| k as u128 * choose_u128(n, k)).sum()
}

#[derive(Debug, Clone, Copy)]
struct Deletion {
    /// Colex rank of the subset with this element removed.
    rank: u32,
    col: u32,
}

/// For each `k <= m`: the `k` one-element deletions of every `k`-subset of
/// `0..n`, subsets in colex order, deletions in increasing position.
fn drop_tables(n: usize, m: usize) -> Vec<Vec<Deletion>> {
    let mut tables = vec![Vec::new()];
    let mut rest = Vec::with_capacity(m);
    for k in 1..=m {
        let mut t = Vec::with_capacity(k * choose_u128(n, k) as usize);
        for s in Colex::new(n, k) {
            for j in 0..k {
                rest.clear();
                rest.extend_from_slice(&s[..j]);
                rest.extend_from_slice(&s[j + 1..]);
                t.push(Deletion {
                    rank: rank(&rest) as u32,
                    col: s[j] as u32,
                });
            }
        }
        tables.push(t);
    }
    tables
}

/// Cofactor expansion along the newest (last) row of a `k x k` minor.
#[inline(always)]
fn expand(parent: &[i64], row: &[i8], drops: &[Deletion], negate: bool) -> i64 {
    let mut d = 0i64;
    for (j, e) in drops.iter().enumerate() {
        let t = parent[e.rank as usize] * row[e.col as usize] as i64;
        d += if j & 1 == 0 { t } else { -t };
    }
    if negate {
        -d
    } else {
        d
    }
}

struct RowPrefix<'a> {
    a: &'a SignMatrix,
    /// Orders `lowest..=highest` are recorded.
    lowest: usize,
    highest: usize,
    drops: &'a [Vec<Deletion>],
    /// `levels[k]`: all `k x k` minors on the current row prefix.
    levels: Vec<Vec<i64>>,
    accs: Vec<Partial>,
}

impl RowPrefix<'_> {
    /// Adds row `r` as row `k + 1` of the prefix.
    fn push_row(&mut self, k: usize, r: usize) {
        let row = self.a.row(r);
        let order = k + 1;
        let drops = self.drops[order].chunks_exact(order);
        let negate = k % 2 == 1;
        let (lo, hi) = self.levels.split_at_mut(order);
        let parent = &lo[k];
        let record = order >= self.lowest;
        let acc = &mut self.accs[order];
        if order == self.highest {
            for d in drops {
                acc.record_small(expand(parent, row, d, negate));
            }
        } else if record {
            for (out, d) in hi[0].iter_mut().zip(drops) {
                *out = expand(parent, row, d, negate);
                acc.record_small(*out);
            }
        } else {
            for (out, d) in hi[0].iter_mut().zip(drops) {
                *out = expand(parent, row, d, negate);
            }
        }
        if record {
            acc.visited += (self.drops[order].len() / order) as u64;
        }
    }

    fn descend(&mut self, k: usize, first: usize) {
        let rows = self.a.rows();
        // leave room for the rows still needed to reach the lowest order
        let last = (rows + k).saturating_sub(self.lowest).min(rows - 1);
        for r in first..=last {
            self.push_row(k, r);
            if k + 1 < self.highest {
                self.descend(k + 1, r + 1);
            }
        }
    }
}

/// Census of every order in `lowest..=highest` by one walk of the row-prefix tree.
fn row_prefix(a: &SignMatrix, lowest: usize, highest: usize, with_histogram: bool) -> Vec<Partial> {
    // minors of the transpose are the same, and narrow tables are cheaper
    let transposed;
    let a = if a.cols() > a.rows() {
        transposed = a.transpose();
        &transposed
    } else {
        a
    };
    let n = a.cols();
    let drops = drop_tables(n, highest);
    let fresh = || -> Vec<Partial> {
        (0..=highest)
            .map(|k| Partial::new(k, with_histogram && k >= lowest))
            .collect()
    };
    // A task owns the row subsets that start with its prefix. Prefixes
    // shorter than `depth` are recorded on their own and not extended.
    let depth = highest.min(2);
    let rows = a.rows();
    let prefixes = |len: usize| {
        let last = (rows + len).saturating_sub(lowest + 1).min(rows - 1);
        Colex::new(last + 1, len)
    };
    let mut tasks: Vec<(Vec<usize>, bool)> = Vec::new();
    for len in lowest.max(1)..depth {
        tasks.extend(prefixes(len).map(|p| (p, false)));
    }
    tasks.extend(prefixes(depth).map(|p| (p, true)));
    tasks
        .into_par_iter()
        .map(|(prefix, extend)| {
            let mut state = RowPrefix {
                a,
                lowest,
                highest,
                drops: &drops,
                levels: (0..highest)
                    .map(|k| vec![0; choose_u128(n, k) as usize])
                    .collect(),
                accs: fresh(),
            };
            state.levels[0][0] = 1;
            let len = prefix.len();
            for (k, &r) in prefix.iter().enumerate() {
                // shorter prefixes belong to other tasks
                state.lowest = if k + 1 == len { lowest } else { usize::MAX };
                state.push_row(k, r);
            }
            state.lowest = lowest;
            if extend && len < highest {
                state.descend(len, prefix[len - 1] + 1);
            }
            state.accs
        })
        .reduce(fresh, |a, b| {
            a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()
        })
}

/// Reference path: one independent Bareiss determinant per minor.
fn direct_scan(a: &SignMatrix, rows: &[usize], acc: &mut Partial) {
    let m = rows.len();
    let mut buf = vec![0i8; m * m];
    for cols in Colex::new(a.cols(), m) {
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                buf[i * m + j] = a.get(r, c);
            }
        }
        let d = det::det_sign_entries(&buf, m).expect("order checked");
        acc.record(d);
    }
}

/// Incremental fraction-free elimination over the column subsets of one row slice.
///
/// The chosen columns become the rows of a working matrix `X` (one per depth,
/// in selection order). Row `k` of `X` is reduced by the `k` earlier pivot
/// steps and then pivots on one of the still-free coordinates; `pivot[k+1]`
/// is then the leading `(k+1)`-minor of `X` under the pivot-column order.
struct ColumnSearch<'a, T> {
    m: usize,
    /// Column `j` restricted to the selected rows lives at `cols[j*m..(j+1)*m]`.
    cols: Vec<T>,
    binom: &'a BinomialTable,
    /// Reduced pivot rows, row `k` at `rows[k*m..]`.
    rows: Vec<T>,
    /// Coordinate order: `perm[..k]` are pivot coordinates at depth `k`.
    perm: Vec<usize>,
    pivot: Vec<T>,
    /// Parity of `perm[..k]` as a partial permutation, per depth.
    parity: Vec<bool>,
    used: Vec<u32>,
    /// `(-1)^(m(m-1)/2)`: selection order is descending in column index.
    reversal_odd: bool,
    functional: Vec<T>,
    unit: Vec<T>,
}

fn column_search<T: PrimInt + Signed + Into<i128>>(
    a: &SignMatrix,
    rows: &[usize],
    binom: &BinomialTable,
    acc: &mut Partial,
) {
    let m = rows.len();
    let n = a.cols();
    let mut cols = vec![T::zero(); n * m];
    for (i, &r) in rows.iter().enumerate() {
        for (j, &v) in a.row(r).iter().enumerate() {
            cols[j * m + i] = if v > 0 { T::one() } else { -T::one() };
        }
    }
    let mut s = ColumnSearch {
        m,
        cols,
        binom,
        rows: vec![T::zero(); m * m],
        perm: (0..m).collect(),
        pivot: vec![T::one(); m + 1],
        parity: vec![false; m + 1],
        used: vec![0; m + 1],
        reversal_odd: (m * (m.saturating_sub(1)) / 2) % 2 == 1,
        functional: vec![T::zero(); m],
        unit: vec![T::zero(); m],
    };
    s.descend(0, n, acc);
}

impl<T: PrimInt + Signed + Into<i128>> ColumnSearch<'_, T> {
    /// Reduces `v` (length `m`) through the first `depth` pivot steps, in place.
    #[inline]
    fn reduce(rows: &[T], perm: &[usize], pivot: &[T], m: usize, depth: usize, v: &mut [T]) {
        for s in 0..depth {
            let c = perm[s];
            let p = pivot[s + 1];
            let prev = pivot[s];
            let f = v[c];
            let row = &rows[s * m..(s + 1) * m];
            if f.is_zero() {
                for &t in &perm[s + 1..] {
                    v[t] = p * v[t] / prev;
                }
            } else {
                for &t in &perm[s + 1..] {
                    v[t] = (p * v[t] - f * row[t]) / prev;
                }
            }
        }
    }

    #[inline]
    fn leaf_sign(&self, depth: usize, c: usize) -> bool {
        let inv = (self.used[depth] >> (c + 1)).count_ones() % 2 == 1;
        self.parity[depth] ^ inv ^ self.reversal_odd
    }

    fn descend(&mut self, depth: usize, upper: usize, acc: &mut Partial) {
        let m = self.m;
        let lowest = m - depth - 1;
        if upper <= lowest {
            return;
        }
        if depth == m - 1 && upper - lowest >= 2 * m {
            self.leaves_by_functional(upper, acc);
            return;
        }
        for j in lowest..upper {
            let (head, tail) = self.rows.split_at_mut(depth * m);
            let w = &mut tail[..m];
            w.copy_from_slice(&self.cols[j * m..(j + 1) * m]);
            Self::reduce(head, &self.perm, &self.pivot, m, depth, w);

            let Some(pos) = (depth..m).find(|&p| !w[self.perm[p]].is_zero()) else {
                // every completion of this prefix is singular
                acc.record_zeros(self.binom.get(j, m - depth - 1));
                continue;
            };
            let c = self.perm[pos];
            if depth == m - 1 {
                let d: i128 = w[c].into();
                acc.record(if self.leaf_sign(depth, c) { -d } else { d });
                continue;
            }
            self.perm.swap(depth, pos);
            self.pivot[depth + 1] = w[c];
            self.parity[depth + 1] =
                self.parity[depth] ^ ((self.used[depth] >> (c + 1)).count_ones() % 2 == 1);
            self.used[depth + 1] = self.used[depth] | (1 << c);
            self.descend(depth + 1, j, acc);
        }
    }

    /// Last level with many candidates: the final pivot is a linear function
    /// of the new column, so compute its coefficients once.
    fn leaves_by_functional(&mut self, upper: usize, acc: &mut Partial) {
        let m = self.m;
        let depth = m - 1;
        let c = self.perm[depth];
        for i in 0..m {
            self.unit.iter_mut().for_each(|u| *u = T::zero());
            self.unit[i] = T::one();
            Self::reduce(
                &self.rows,
                &self.perm,
                &self.pivot,
                m,
                depth,
                &mut self.unit,
            );
            self.functional[i] = self.unit[c];
        }
        let negate = self.leaf_sign(depth, c);
        for j in 0..upper {
            let col = &self.cols[j * m..(j + 1) * m];
            let mut d = T::zero();
            for (x, f) in col.iter().zip(&self.functional) {
                d = d + *x * *f;
            }
            let d: i128 = d.into();
            acc.record(if negate { -d } else { d });
        }
    }
}

/// `sum over m-row subsets B of det(B B^T)`, equal to the sum of squared
/// order-`m` minors by Cauchy-Binet.
pub fn sum_squares_gram(a: &SignMatrix, m: usize) -> Result<BigUint> {
    sum_squares_gram_with(a, m, &EngineConfig::default())
}

pub fn sum_squares_gram_with(a: &SignMatrix, m: usize, cfg: &EngineConfig) -> Result<BigUint> {
    if m == 0 || m > a.rows() {
        return Err(Error::Domain(format!(
            "row-subset size {m} must lie in 1..={}",
            a.rows()
        )));
    }
    if m > MAX_MINOR_ORDER {
        return Err(Error::UnsupportedOrder {
            order: m,
            max: MAX_MINOR_ORDER,
        });
    }
    if m > a.cols() {
        // every m x m minor needs m distinct columns
        return Ok(BigUint::zero());
    }
    let count = choose_u128(a.rows(), m);
    if count > cfg.work_cap as u128 {
        return Err(Error::Budget {
            required: count,
            cap: cfg.work_cap,
            hint: "raise --work-cap",
        });
    }
    let n = a.rows();
    let gram = a.gram();
    let total = block_ranges(count as u64)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut sub = vec![0i64; m * m];
            let mut small: u128 = 0;
            let mut big = BigUint::zero();
            let mut it = Colex::from_rank(n, m, lo);
            for _ in lo..hi {
                let rows = it.peek().expect("rank within range");
                for (i, &r) in rows.iter().enumerate() {
                    for (j, &c) in rows.iter().enumerate() {
                        sub[i * m + j] = gram[r * n + c];
                    }
                }
                let d = det::det_integer(&sub, m);
                let d = d.to_biguint().expect("gram determinants are nonnegative");
                match d.to_u128().and_then(|v| small.checked_add(v)) {
                    Some(v) => small = v,
                    None => big += d,
                }
                it.advance();
            }
            big + small
        })
        .reduce(BigUint::zero, |x, y| x + y);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::sylvester;
    use crate::det::tests::laplace;
    use crate::matrix::{parse_sign_matrix, Format};

    /// Every minor by cofactor expansion; independent of both engines.
    fn brute(a: &SignMatrix, m: usize) -> BTreeMap<i128, u64> {
        let mut h = BTreeMap::new();
        for rows in Colex::new(a.rows(), m) {
            for cols in Colex::new(a.cols(), m) {
                let e: Vec<i64> = rows
                    .iter()
                    .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
                    .map(|(r, c)| a.get(r, c) as i64)
                    .collect();
                *h.entry(laplace(&e, m)).or_insert(0) += 1;
            }
        }
        h
    }

    fn stats_from(h: &BTreeMap<i128, u64>) -> (u64, u64, u128) {
        let total = h.values().sum();
        let zero = h.get(&0).copied().unwrap_or(0);
        let ss = h.iter().map(|(d, c)| (d * d) as u128 * *c as u128).sum();
        (total, zero, ss)
    }

    #[test]
    fn sylvester4_order2() {
        let h = sylvester(2).unwrap();
        let s = enumerate_minors(&h, 2, true).unwrap();
        assert_eq!(s.total_count, BigUint::from(36u32));
        assert_eq!(s.zero_count, BigUint::from(12u32));
        assert_eq!(s.sum_squares, BigUint::from(96u32));
        assert_eq!(s.histogram.as_ref().unwrap(), &brute(&h, 2));
        assert_eq!(sum_squares_gram(&h, 2).unwrap(), BigUint::from(96u32));
    }

    #[test]
    fn order_one_minors() {
        let a = parse_sign_matrix("+-+\n--+\n", Format::Had).unwrap();
        let s = enumerate_minors(&a, 1, true).unwrap();
        assert_eq!(s.zero_count, BigUint::zero());
        assert_eq!(s.sum_squares, BigUint::from(6u32));
        let h = s.histogram.unwrap();
        assert_eq!(h.get(&1), Some(&3));
        assert_eq!(h.get(&-1), Some(&3));
        assert_eq!(sum_squares_gram(&a, 1).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn sylvester8_order3() {
        let h = sylvester(3).unwrap();
        let s = enumerate_minors(&h, 3, true).unwrap();
        assert_eq!(s.zero_count, BigUint::from(1344u32));
        assert_eq!(s.total_count, BigUint::from(3136u32));
        assert_eq!(s.histogram.unwrap(), brute(&h, 3));
    }

    #[test]
    fn sylvester8_gram_order4() {
        let h = sylvester(3).unwrap();
        let g = sum_squares_gram(&h, 4).unwrap();
        assert_eq!(g, BigUint::from(286720u32));
        assert_eq!(enumerate_minors(&h, 4, false).unwrap().sum_squares, g);
    }

    #[test]
    fn engines_agree_with_cofactor_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..40 {
            let r = rng.gen_range(1..7);
            let c = rng.gen_range(1..8);
            let a = SignMatrix::from_fn(r, c, |_, _| rng.gen());
            for m in 1..=r.min(c) {
                let expect = brute(&a, m);
                let inc = enumerate_minors(&a, m, true).unwrap();
                assert_eq!(inc.histogram.as_ref(), Some(&expect), "trial {trial} m {m}");
                for strategy in [
                    Strategy::RowPrefix,
                    Strategy::ColumnElimination,
                    Strategy::Direct,
                ] {
                    let cfg = EngineConfig {
                        strategy,
                        ..Default::default()
                    };
                    let other = enumerate_minors_with(&a, m, true, &cfg).unwrap();
                    assert_eq!(inc, other, "trial {trial} m {m} {strategy:?}");
                }
                let (total, zero, ss) = stats_from(&expect);
                assert_eq!(inc.total_count, BigUint::from(total));
                assert_eq!(inc.zero_count, BigUint::from(zero));
                assert_eq!(inc.sum_squares, BigUint::from(ss));
            }
        }
    }

    #[test]
    fn functional_leaf_path_is_exercised() {
        // m = 2 over 12 columns: last level has >= 2m candidates
        let a = SignMatrix::from_fn(3, 12, |i, j| (i * 7 + j * j) % 3 != 0);
        let cfg = EngineConfig {
            strategy: Strategy::ColumnElimination,
            ..Default::default()
        };
        let s = enumerate_minors_with(&a, 2, true, &cfg).unwrap();
        assert_eq!(s.histogram.unwrap(), brute(&a, 2));
    }

    #[test]
    fn i128_path_for_large_orders() {
        let h = sylvester(5).unwrap();
        let rows: Vec<usize> = (0..17).collect();
        let cols: Vec<usize> = (0..17).collect();
        let d = crate::det::det_exact(&h, &rows, &cols).unwrap();
        let mut acc = Partial::new(17, true);
        let binom = BinomialTable::new(17, 17);
        let sub = h.submatrix(&rows, &cols).unwrap();
        column_search::<i128>(&sub, &rows, &binom, &mut acc);
        let st = acc.finish(17);
        assert_eq!(
            st.histogram.unwrap().into_iter().collect::<Vec<_>>(),
            vec![(d, 1)]
        );
    }

    #[test]
    fn all_orders_match_single_order_runs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..12 {
            let r = rng.gen_range(1..8);
            let c = rng.gen_range(1..8);
            let a = SignMatrix::from_fn(r, c, |_, _| rng.gen());
            let top = r.min(c);
            let all = enumerate_minors_all(&a, top, true, &EngineConfig::default()).unwrap();
            assert_eq!(all.len(), top);
            for (i, st) in all.iter().enumerate() {
                assert_eq!(st.histogram.as_ref().unwrap(), &brute(&a, i + 1));
                assert_eq!(st.order_m, i + 1);
            }
        }
        let h = sylvester(3).unwrap();
        let cfg = EngineConfig {
            work_cap: 3983,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_minors_all(&h, 3, false, &cfg),
            Err(Error::Budget { required: 3984, .. })
        ));
    }

    #[test]
    fn auto_falls_back_for_wide_tables() {
        assert!(row_prefix_table_size(16, 8) <= ROW_PREFIX_TABLE_LIMIT);
        assert!(row_prefix_table_size(24, 20) > ROW_PREFIX_TABLE_LIMIT);
    }

    #[test]
    fn row_prefix_order_twenty() {
        // 20 x 21 slice of a Sylvester matrix: 21 maximal minors
        let h = sylvester(5).unwrap();
        let rows: Vec<usize> = (0..20).collect();
        let cols: Vec<usize> = (0..21).collect();
        let a = h.submatrix(&rows, &cols).unwrap();
        let cfg = EngineConfig {
            strategy: Strategy::RowPrefix,
            ..Default::default()
        };
        let fast = enumerate_minors_with(&a, 20, true, &cfg).unwrap();
        let mut expect = BTreeMap::new();
        for skip in 0..21 {
            let cols: Vec<usize> = (0..21).filter(|&c| c != skip).collect();
            *expect
                .entry(crate::det::det_exact(&a, &rows, &cols).unwrap())
                .or_insert(0) += 1;
        }
        assert_eq!(fast.histogram.unwrap(), expect);
    }

    #[test]
    fn errors() {
        let h = sylvester(2).unwrap();
        assert!(matches!(
            enumerate_minors(&h, 0, false),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            enumerate_minors(&h, 5, false),
            Err(Error::Domain(_))
        ));
        let cfg = EngineConfig {
            work_cap: 35,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_minors_with(&h, 2, false, &cfg),
            Err(Error::Budget {
                required: 36,
                cap: 35,
                ..
            })
        ));
    }

    #[test]
    fn csv_export() {
        let h = sylvester(1).unwrap();
        let s = enumerate_minors(&h, 1, true).unwrap();
        assert_eq!(s.histogram_csv().unwrap(), "det,count\n-1,1\n1,3\n");
        assert!(enumerate_minors(&h, 1, false)
            .unwrap()
            .histogram_csv()
            .is_none());
    }
}
