//! Expectations over random sign matrices: exhaustive oracles and seeded
//! Monte Carlo estimators.
//!
//! The exhaustive paths loop over bit-encoded matrices and use their own
//! cofactor-expansion determinant, so they share no code with the minor
//! engine. Sums are exact integers; the only division happens at the end.
//!
//! Monte Carlo draws are split into fixed chunks of [`CHUNK`] samples; chunk
//! `c` uses the ChaCha8 stream `c` of the generator seeded with `seed`. The
//! merged sums, hence the estimate, do not depend on how chunks are scheduled.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::construct::{SignStream, GENERATOR};
use crate::det::{det_integer, det_sign_entries, MAX_MINOR_ORDER};
use crate::error::{Error, Result};
use crate::matrix::{is_hadamard, SignMatrix};
use crate::rational::{binomial, ser_u64, ExactRational};
use crate::subsets::{choose_u128, Colex};

pub const CHUNK: u64 = 4096;
/// Largest `m` for the exhaustive Turán oracle (`2^(m^2) <= 65536`).
pub const MAX_EXHAUSTIVE_TURAN: u64 = 4;
/// Largest `m * n` for the exhaustive Gram oracle.
pub const MAX_EXHAUSTIVE_GRAM_ENTRIES: u64 = 20;
pub const MAX_MONTE_CARLO_COLS: u64 = 64;
pub const MAX_EXHAUSTIVE_SUBMATRICES: u128 = 10_000_000;
/// Places used for `mean_decimal`.
pub const MEAN_PLACES: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    MonteCarlo { samples: u64, seed: u64 },
}

/// Result of an expectation computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    /// Exact expectation (exhaustive) or exact sample mean (Monte Carlo).
    pub mean: ExactRational,
    pub mean_decimal: String,
    /// Sample standard deviation over `sqrt(samples)`; zero when exhaustive.
    pub stderr: f64,
    #[serde(serialize_with = "ser_u64")]
    pub samples: u64,
    pub seed: Option<u64>,
    pub generator: Option<&'static str>,
    pub exhaustive: bool,
}

impl Estimate {
    fn exact(mean: ExactRational, samples: u64) -> Self {
        Self {
            mean_decimal: mean.to_decimal(MEAN_PLACES),
            mean,
            stderr: 0.0,
            samples,
            seed: None,
            generator: None,
            exhaustive: true,
        }
    }

    /// Whether `target` lies within `k` standard errors of the mean.
    pub fn within(&self, target: &ExactRational, k: f64) -> bool {
        let gap = (&self.mean - target).abs();
        if self.exhaustive {
            return gap == ExactRational::zero();
        }
        gap.to_f64() <= k * self.stderr
    }
}

/// Integer accumulator that spills into a big integer.
#[derive(Debug, Clone, Default)]
struct Sum {
    small: u128,
    big: BigUint,
}

impl Sum {
    #[inline]
    fn add(&mut self, v: u128) {
        match self.small.checked_add(v) {
            Some(s) => self.small = s,
            None => {
                self.big += self.small;
                self.small = v;
            }
        }
    }

    fn add_big(&mut self, v: &BigUint) {
        match v.to_u128() {
            Some(x) => self.add(x),
            None => self.big += v,
        }
    }

    fn merge(mut self, other: Sum) -> Sum {
        self.big += other.big;
        self.add(other.small);
        self
    }

    fn value(&self) -> BigUint {
        &self.big + self.small
    }
}

#[derive(Debug, Clone, Default)]
struct Moments {
    count: u64,
    sum: Sum,
    sum_sq: Sum,
}

impl Moments {
    fn push(&mut self, v: &BigUint) {
        self.count += 1;
        self.sum.add_big(v);
        self.sum_sq.add_big(&(v * v));
    }

    fn merge(self, other: Moments) -> Moments {
        Moments {
            count: self.count + other.count,
            sum: self.sum.merge(other.sum),
            sum_sq: self.sum_sq.merge(other.sum_sq),
        }
    }

    fn estimate(&self, seed: u64) -> Estimate {
        let n = BigInt::from(self.count);
        let s1 = BigInt::from(self.sum.value());
        let s2 = BigInt::from(self.sum_sq.value());
        let mean = ExactRational::new(s1.clone(), n.clone());
        // (s2 - s1^2 / n) / (n - 1), then / n
        let var = ExactRational::new(&s2 * &n - &s1 * &s1, &n * (&n - 1));
        let stderr = (var.to_f64() / self.count as f64).sqrt();
        Estimate {
            mean_decimal: mean.to_decimal(MEAN_PLACES),
            mean,
            stderr,
            samples: self.count,
            seed: Some(seed),
            generator: Some(GENERATOR),
            exhaustive: false,
        }
    }
}

fn budget(required: u128, cap: u64, hint: &'static str) -> Error {
    Error::Budget {
        required,
        cap,
        hint,
    }
}

/// Cofactor expansion along the first row; the oracle determinant.
pub fn cofactor_det(a: &[i64], m: usize) -> i64 {
    match m {
        0 => 1,
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        _ => {
            let mut minor = vec![0i64; (m - 1) * (m - 1)];
            let mut total = 0;
            for c in 0..m {
                let mut k = 0;
                for i in 1..m {
                    for j in (0..m).filter(|&j| j != c) {
                        minor[k] = a[i * m + j];
                        k += 1;
                    }
                }
                let t = a[c] * cofactor_det(&minor, m - 1);
                total += if c % 2 == 0 { t } else { -t };
            }
            total
        }
    }
}

/// What an exhaustive loop accumulates per matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// `det(A)^2` for square `A`.
    DetSquared,
    /// `det(B B^T)`.
    GramDet,
}

/// Exact totals over every `rows x cols` sign matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveTotals {
    /// Number of matrices represented (always `2^(rows*cols)`).
    pub matrices: u64,
    pub sum: BigUint,
    /// Matrices whose statistic is zero.
    pub zeros: u64,
}

/// Sums `stat` over all `2^(rows*cols)` sign matrices.
///
/// With `first_row_fixed`, only matrices whose first row is all `+1` are
/// visited and totals are scaled by `2^cols`: negating a column preserves both
/// `det^2` and `B B^T`.
pub fn exhaustive_totals(
    stat: Statistic,
    rows: usize,
    cols: usize,
    first_row_fixed: bool,
) -> ExhaustiveTotals {
    assert!(rows >= 1 && rows <= cols && rows * cols <= 24);
    assert!(stat == Statistic::GramDet || rows == cols);
    let free_bits = if first_row_fixed {
        (rows - 1) * cols
    } else {
        rows * cols
    };
    let offset = rows * cols - free_bits;
    let patterns = 1u64 << free_bits;
    let chunks = patterns.div_ceil(1 << 12).max(1);
    let per = patterns / chunks;

    let (sum, zeros) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut a = vec![1i64; rows * cols];
            let mut g = vec![0i64; rows * rows];
            let mut sum: u128 = 0;
            let mut zeros = 0u64;
            for p in c * per..(c + 1) * per {
                for (k, e) in a[offset..].iter_mut().enumerate() {
                    *e = if (p >> k) & 1 == 1 { -1 } else { 1 };
                }
                let v = match stat {
                    Statistic::DetSquared => {
                        let d = cofactor_det(&a, rows);
                        (d * d) as u128
                    }
                    Statistic::GramDet => {
                        for i in 0..rows {
                            for j in 0..rows {
                                g[i * rows + j] =
                                    (0..cols).map(|k| a[i * cols + k] * a[j * cols + k]).sum();
                            }
                        }
                        cofactor_det(&g, rows) as u128
                    }
                };
                if v == 0 {
                    zeros += 1;
                }
                sum += v;
            }
            (sum, zeros)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));

    let scale = if first_row_fixed { 1u64 << cols } else { 1 };
    ExhaustiveTotals {
        matrices: patterns * scale,
        sum: BigUint::from(sum) * scale,
        zeros: zeros * scale,
    }
}

fn monte_carlo<F>(samples: u64, seed: u64, draw: F) -> Result<Estimate>
where
    F: Fn(&mut ChaCha8Rng) -> BigUint + Sync,
{
    if samples < 2 {
        return Err(Error::Domain(format!(
            "monte carlo needs at least 2 samples, got {samples}"
        )));
    }
    let chunks = samples.div_ceil(CHUNK);
    let moments = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut m = Moments::default();
            for _ in 0..n {
                m.push(&draw(&mut rng));
            }
            m
        })
        .reduce(Moments::default, Moments::merge);
    Ok(moments.estimate(seed))
}

fn draw_signs(rng: &mut ChaCha8Rng, buf: &mut [i8]) {
    let mut s = SignStream::new(rng);
    for e in buf.iter_mut() {
        *e = if s.next_plus() { 1 } else { -1 };
    }
}

fn random_det(rng: &mut ChaCha8Rng, m: usize) -> i128 {
    let mut buf = vec![0i8; m * m];
    draw_signs(rng, &mut buf);
    det_sign_entries(&buf, m).expect("order checked")
}

fn random_gram_det(rng: &mut ChaCha8Rng, m: usize, n: usize) -> BigUint {
    let mut buf = vec![0i8; m * n];
    draw_signs(rng, &mut buf);
    let b = SignMatrix::new(m, n, buf).expect("valid signs");
    det_integer(&b.gram(), m).to_biguint().expect("nonnegative")
}

/// Mean of `det(A)^2` over uniform `m x m` sign matrices; exactly `m!`.
pub fn turan_expectation(m: u64, mode: Mode) -> Result<Estimate> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    match mode {
        Mode::Exhaustive => {
            if m > MAX_EXHAUSTIVE_TURAN {
                return Err(budget(
                    1u128 << (m * m).min(127),
                    1 << (MAX_EXHAUSTIVE_TURAN * MAX_EXHAUSTIVE_TURAN),
                    "exhaustive mode supports m <= 4; use monte carlo",
                ));
            }
            let t = exhaustive_totals(Statistic::DetSquared, m as usize, m as usize, true);
            Ok(Estimate::exact(
                ExactRational::new(BigInt::from(t.sum), BigInt::from(t.matrices)),
                t.matrices,
            ))
        }
        Mode::MonteCarlo { samples, seed } => {
            if m as usize > MAX_MINOR_ORDER {
                return Err(Error::UnsupportedOrder {
                    order: m as usize,
                    max: MAX_MINOR_ORDER,
                });
            }
            monte_carlo(samples, seed, |rng| {
                BigUint::from(random_det(rng, m as usize).unsigned_abs().pow(2))
            })
        }
    }
}

/// Mean of `det(B B^T)` over uniform `m x n` sign matrices; exactly `m! C(n, m)`.
pub fn gram_expectation(m: u64, n: u64, mode: Mode) -> Result<Estimate> {
    if m == 0 || m > n {
        return Err(Error::Domain(format!(
            "need 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    match mode {
        Mode::Exhaustive => {
            if m * n > MAX_EXHAUSTIVE_GRAM_ENTRIES {
                return Err(budget(
                    1u128 << (m * n).min(127),
                    1 << MAX_EXHAUSTIVE_GRAM_ENTRIES,
                    "exhaustive mode supports m * n <= 20; use monte carlo",
                ));
            }
            let t = exhaustive_totals(Statistic::GramDet, m as usize, n as usize, true);
            Ok(Estimate::exact(
                ExactRational::new(BigInt::from(t.sum), BigInt::from(t.matrices)),
                t.matrices,
            ))
        }
        Mode::MonteCarlo { samples, seed } => {
            if n > MAX_MONTE_CARLO_COLS || m as usize > MAX_MINOR_ORDER {
                return Err(Error::Domain(format!(
                    "monte carlo gram expectation supports m <= {MAX_MINOR_ORDER}, n <= {MAX_MONTE_CARLO_COLS}"
                )));
            }
            monte_carlo(samples, seed, |rng| {
                random_gram_det(rng, m as usize, n as usize)
            })
        }
    }
}

/// Fraction of `m x m` sign matrices with zero determinant.
pub fn singular_fraction(m: u64, mode: Mode) -> Result<Estimate> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    match mode {
        Mode::Exhaustive => {
            if m > MAX_EXHAUSTIVE_TURAN {
                return Err(budget(
                    1u128 << (m * m).min(127),
                    1 << (MAX_EXHAUSTIVE_TURAN * MAX_EXHAUSTIVE_TURAN),
                    "exhaustive mode supports m <= 4; use monte carlo",
                ));
            }
            let t = exhaustive_totals(Statistic::DetSquared, m as usize, m as usize, true);
            Ok(Estimate::exact(
                ExactRational::new(BigInt::from(t.zeros), BigInt::from(t.matrices)),
                t.matrices,
            ))
        }
        Mode::MonteCarlo { samples, seed } => {
            if m as usize > MAX_MINOR_ORDER {
                return Err(Error::UnsupportedOrder {
                    order: m as usize,
                    max: MAX_MINOR_ORDER,
                });
            }
            monte_carlo(samples, seed, |rng| {
                BigUint::from((random_det(rng, m as usize) == 0) as u8)
            })
        }
    }
}

/// `h^m C(n, m) / C(h, m)`: expected `det(B^T B)` over the `n x m`
/// submatrices `B` of a Hadamard matrix of order `h`.
pub fn submatrix_gram_closed_form(h: u64, n_rows: u64, m: u64) -> ExactRational {
    ExactRational::new(
        num_traits::pow(BigInt::from(h), m as usize) * BigInt::from(binomial(n_rows, m)),
        BigInt::from(binomial(h, m)),
    )
}

/// Mean of `det(B^T B)` over `n_rows x m` submatrices `B` of `h`, rows and
/// columns chosen as uniform subsets.
pub fn submatrix_gram_expectation(
    h: &SignMatrix,
    n_rows: usize,
    m: usize,
    mode: Mode,
) -> Result<Estimate> {
    if !is_hadamard(h) {
        return Err(Error::Validation(
            "submatrix expectation needs a Hadamard matrix".into(),
        ));
    }
    let order = h.rows();
    if m == 0 || m > n_rows || n_rows > order {
        return Err(Error::Domain(format!(
            "need 1 <= m <= n_rows <= {order}, got m = {m}, n_rows = {n_rows}"
        )));
    }
    if m > MAX_MINOR_ORDER {
        return Err(Error::UnsupportedOrder {
            order: m,
            max: MAX_MINOR_ORDER,
        });
    }
    let h_t = h.transpose();
    let gram_of = |rows: &[usize], cols: &[usize], g: &mut Vec<i64>| {
        for (a, &ca) in cols.iter().enumerate() {
            for (b, &cb) in cols.iter().enumerate() {
                let (ra, rb) = (h_t.row(ca), h_t.row(cb));
                g[a * m + b] = rows.iter().map(|&r| (ra[r] * rb[r]) as i64).sum();
            }
        }
        det_integer(g, m).to_biguint().expect("nonnegative")
    };
    match mode {
        Mode::Exhaustive => {
            let choices = choose_u128(order, n_rows).saturating_mul(choose_u128(order, m));
            if choices > MAX_EXHAUSTIVE_SUBMATRICES {
                return Err(budget(
                    choices,
                    MAX_EXHAUSTIVE_SUBMATRICES as u64,
                    "use monte carlo",
                ));
            }
            let row_sets: Vec<Vec<usize>> = Colex::new(order, n_rows).collect();
            let total = row_sets
                .par_iter()
                .map(|rows| {
                    let mut g = vec![0i64; m * m];
                    let mut s = Sum::default();
                    for cols in Colex::new(order, m) {
                        s.add_big(&gram_of(rows, &cols, &mut g));
                    }
                    s
                })
                .reduce(Sum::default, Sum::merge);
            Ok(Estimate::exact(
                ExactRational::new(BigInt::from(total.value()), BigInt::from(choices)),
                choices as u64,
            ))
        }
        Mode::MonteCarlo { samples, seed } => monte_carlo(samples, seed, |rng| {
            let mut rows = sample(rng, order, n_rows).into_vec();
            let mut cols = sample(rng, order, m).into_vec();
            rows.sort_unstable();
            cols.sort_unstable();
            let mut g = vec![0i64; m * m];
            gram_of(&rows, &cols, &mut g)
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::sylvester;

    fn int(v: i64) -> ExactRational {
        ExactRational::from_integer(v)
    }

    #[test]
    fn cofactor_small() {
        assert_eq!(cofactor_det(&[1, 1, 1, -1], 2), -2);
        let h4 = [1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1];
        assert_eq!(cofactor_det(&h4, 4).abs(), 16);
    }

    #[test]
    fn turan_exhaustive() {
        assert_eq!(turan_expectation(1, Mode::Exhaustive).unwrap().mean, int(1));
        assert_eq!(turan_expectation(2, Mode::Exhaustive).unwrap().mean, int(2));
        assert_eq!(turan_expectation(3, Mode::Exhaustive).unwrap().mean, int(6));
        assert!(matches!(
            turan_expectation(5, Mode::Exhaustive),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn turan_m2_by_hand() {
        // 8 of the 16 matrices have det^2 = 4, the other 8 are singular
        let t = exhaustive_totals(Statistic::DetSquared, 2, 2, false);
        assert_eq!(t.matrices, 16);
        assert_eq!(t.zeros, 8);
        assert_eq!(t.sum, BigUint::from(32u32));
    }

    #[test]
    fn first_row_conditioning_is_exact() {
        for m in 1..=3 {
            assert_eq!(
                exhaustive_totals(Statistic::DetSquared, m, m, true),
                exhaustive_totals(Statistic::DetSquared, m, m, false)
            );
            for n in m..=6 {
                if m * n <= 18 {
                    assert_eq!(
                        exhaustive_totals(Statistic::GramDet, m, n, true),
                        exhaustive_totals(Statistic::GramDet, m, n, false),
                        "m {m} n {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn gram_exhaustive_small() {
        assert_eq!(
            gram_expectation(2, 3, Mode::Exhaustive).unwrap().mean,
            int(6)
        );
        assert_eq!(
            gram_expectation(1, 5, Mode::Exhaustive).unwrap().mean,
            int(5)
        );
        assert!(matches!(
            gram_expectation(3, 7, Mode::Exhaustive),
            Err(Error::Budget { .. })
        ));
        assert!(gram_expectation(3, 2, Mode::Exhaustive).is_err());
    }

    #[test]
    fn singular_exhaustive() {
        assert_eq!(singular_fraction(1, Mode::Exhaustive).unwrap().mean, int(0));
        assert_eq!(
            singular_fraction(2, Mode::Exhaustive).unwrap().mean,
            ExactRational::new(1, 2)
        );
        assert_eq!(
            singular_fraction(3, Mode::Exhaustive).unwrap().mean,
            ExactRational::new(5, 8)
        );
    }

    #[test]
    fn monte_carlo_is_reproducible_and_scales() {
        let a = turan_expectation(
            3,
            Mode::MonteCarlo {
                samples: 20_000,
                seed: 9,
            },
        )
        .unwrap();
        let b = turan_expectation(
            3,
            Mode::MonteCarlo {
                samples: 20_000,
                seed: 9,
            },
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(a.within(&int(6), 5.0));
        let c = turan_expectation(
            3,
            Mode::MonteCarlo {
                samples: 80_000,
                seed: 9,
            },
        )
        .unwrap();
        let ratio = a.stderr / c.stderr;
        assert!((1.0..=4.0).contains(&ratio), "ratio {ratio}");
        assert!(turan_expectation(
            3,
            Mode::MonteCarlo {
                samples: 1,
                seed: 0
            }
        )
        .is_err());
    }

    #[test]
    fn monte_carlo_independent_of_threads() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    gram_expectation(
                        2,
                        5,
                        Mode::MonteCarlo {
                            samples: 30_001,
                            seed: 3,
                        },
                    )
                    .unwrap()
                })
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn singular_monte_carlo_matches_half() {
        let e = singular_fraction(
            2,
            Mode::MonteCarlo {
                samples: 50_000,
                seed: 1,
            },
        )
        .unwrap();
        assert!(e.within(&ExactRational::new(1, 2), 5.0));
    }

    #[test]
    fn submatrix_examples() {
        let h4 = sylvester(2).unwrap();
        let e = submatrix_gram_expectation(&h4, 3, 2, Mode::Exhaustive).unwrap();
        assert_eq!(e.mean, int(8));
        assert_eq!(e.samples, 24);
        assert_eq!(e.mean, submatrix_gram_closed_form(4, 3, 2));
        let whole = submatrix_gram_expectation(&h4, 4, 4, Mode::Exhaustive).unwrap();
        assert_eq!(whole.mean, int(256));
        let h8 = sylvester(3).unwrap();
        let e = submatrix_gram_expectation(&h8, 4, 3, Mode::Exhaustive).unwrap();
        assert_eq!(e.mean, ExactRational::new(256, 7));
        assert!(matches!(
            submatrix_gram_expectation(&SignMatrix::ones(4, 4), 3, 2, Mode::Exhaustive),
            Err(Error::Validation(_))
        ));
        let mc = submatrix_gram_expectation(
            &h8,
            4,
            3,
            Mode::MonteCarlo {
                samples: 20_000,
                seed: 5,
            },
        )
        .unwrap();
        assert!(mc.within(&ExactRational::new(256, 7), 5.0));
    }

    #[test]
    fn submatrix_expectation_decreases_with_order() {
        use crate::construct::{paley_construct, PaleyKind};
        let limit = int(12);
        let mut prev: Option<ExactRational> = None;
        for h in [
            sylvester(2).unwrap(),
            sylvester(3).unwrap(),
            paley_construct(PaleyKind::One, 11).unwrap(),
            sylvester(4).unwrap(),
        ] {
            let e = submatrix_gram_expectation(&h, 4, 2, Mode::Exhaustive).unwrap();
            assert_eq!(e.mean, submatrix_gram_closed_form(h.rows() as u64, 4, 2));
            assert!(e.mean > limit);
            if let Some(p) = &prev {
                assert!(&e.mean < p);
            }
            prev = Some(e.mean);
        }
    }
}
