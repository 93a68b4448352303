//! Closed-form bounds on minors of sign matrices, evaluated exactly, and
//! reports comparing them with engine censuses.
//!
//! For an order-`n` sign matrix and `2 <= m <= n`:
//!
//! * mean of `det(M)^2` over all order-`m` minors is at most `n^m / C(n, m)`,
//!   with equality exactly for Hadamard matrices;
//! * the nonzero-minor count `Y` is at most `4 (n/4)^m C(n, m)` and the zero
//!   count `Z` is at least `C(n, m) (C(n, m) - 4 (n/4)^m)`, because nonzero
//!   order-`m` minors are multiples of `2^(m-1)`.
//!
//! Nothing in this module uses floating point to decide anything.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{is_hadamard, is_hadamard_feasible_order, SignMatrix};
use crate::minors::{enumerate_minors_all, enumerate_minors_with, EngineConfig};
use crate::rational::{binomial, factorial, ser_bigint, ExactRational};

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn ubig_to_int(v: BigUint) -> BigInt {
    BigInt::from(v)
}

fn check_range(n: u64, m: u64, min_m: u64) -> Result<()> {
    if m < min_m || m > n {
        return Err(Error::Domain(format!(
            "need {min_m} <= m <= n, got n = {n}, m = {m}"
        )));
    }
    Ok(())
}

/// `n^m / C(n, m)`.
pub fn mean_square_bound(n: u64, m: u64) -> Result<ExactRational> {
    check_range(n, m, 1)?;
    Ok(ExactRational::new(
        num_traits::pow(big(n), m as usize),
        ubig_to_int(binomial(n, m)),
    ))
}

/// The same bound as `m! * prod_{k=1}^{m-1} (1 - k/n)^(-1)`.
pub fn mean_square_bound_product(n: u64, m: u64) -> Result<ExactRational> {
    check_range(n, m, 1)?;
    let mut acc = ExactRational::from_integer(ubig_to_int(factorial(m)));
    for k in 1..m {
        acc = acc * ExactRational::new(big(n), big(n - k));
    }
    Ok(acc)
}

/// `4 (n/4)^m = n^m / 4^(m-1)`.
fn four_quarter_power(n: u64, m: u64) -> ExactRational {
    ExactRational::new(
        num_traits::pow(big(n), m as usize),
        num_traits::pow(big(4), (m - 1) as usize),
    )
}

/// `4 (n/4)^m C(n, m)`.
pub fn y_upper_bound(n: u64, m: u64) -> Result<ExactRational> {
    check_range(n, m, 2)?;
    Ok(four_quarter_power(n, m) * ExactRational::from_integer(ubig_to_int(binomial(n, m))))
}

/// `C(n, m) (C(n, m) - 4 (n/4)^m)`; negative values are vacuous.
pub fn z_lower_bound(n: u64, m: u64) -> Result<ExactRational> {
    check_range(n, m, 2)?;
    let c = ExactRational::from_integer(ubig_to_int(binomial(n, m)));
    Ok(&c * &(&c - &four_quarter_power(n, m)))
}

/// Whether `C(n, m) > 4 (n/4)^m`, which forces a singular order-`m` submatrix.
pub fn singular_criterion(n: u64, m: u64) -> bool {
    // C(n,m) * 4^(m-1) > n^m, all integers
    let lhs = ubig_to_int(binomial(n, m)) * num_traits::pow(big(4), m.saturating_sub(1) as usize);
    lhs > num_traits::pow(big(n), m as usize)
}

/// Least `n >= m` satisfying [`singular_criterion`], for `2 <= m <= 6`.
///
/// From `m = 7` on, `m! >= 4^(m-1)` and the criterion never holds.
pub fn n0_threshold(m: u64) -> Result<u64> {
    if !(2..=6).contains(&m) {
        return Err(Error::Domain(format!(
            "n0 threshold is defined for 2 <= m <= 6, got {m} (m! >= 4^(m-1) from m = 7)"
        )));
    }
    Ok((m..)
        .find(|&n| singular_criterion(n, m))
        .expect("criterion eventually holds"))
}

/// `p_m = 1 - 4^(1-m) m!`.
pub fn density_pm(m: u64) -> Result<ExactRational> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let frac = ExactRational::new(
        ubig_to_int(factorial(m)),
        num_traits::pow(big(4), (m - 1) as usize),
    );
    Ok(ExactRational::one() - frac)
}

/// `p^_m = 1 - prod_{k=1}^{m-1} (1 - 2^(1-m) k)`.
pub fn density_pm_hat(m: u64) -> Result<ExactRational> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let scale = num_traits::pow(big(2), (m - 1) as usize);
    let mut prod = ExactRational::one();
    for k in 1..m {
        prod = prod * ExactRational::new(&scale - big(k), scale.clone());
    }
    Ok(ExactRational::one() - prod)
}

/// Value of a zero-minor formula, flagged when `n` cannot be a Hadamard order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZFormula {
    pub n: u64,
    pub value: ExactRational,
    pub hadamard_feasible: bool,
}

impl ZFormula {
    pub fn integer(&self) -> Option<BigInt> {
        self.value.to_integer()
    }
}

/// `Z(2, H) = n^2 (n-1)(n-2) / 8`.
pub fn z2_exact(n: u64) -> Result<ZFormula> {
    if n < 2 {
        return Err(Error::Domain(format!("z2 needs n >= 2, got {n}")));
    }
    let n_ = big(n);
    let num = &n_ * &n_ * (&n_ - 1) * (&n_ - 2);
    Ok(ZFormula {
        n,
        value: ExactRational::new(num, 8),
        hadamard_feasible: is_hadamard_feasible_order(n as usize),
    })
}

/// `Z(3, H) = n^2 (n-1)(n-2)(n-4)(5n-4) / 288`.
pub fn z3_exact(n: u64) -> Result<ZFormula> {
    if n < 3 {
        return Err(Error::Domain(format!("z3 needs n >= 3, got {n}")));
    }
    let n_ = big(n);
    let num = &n_ * &n_ * (&n_ - 1) * (&n_ - 2) * (&n_ - 4) * (&n_ * 5 - 4);
    Ok(ZFormula {
        n,
        value: ExactRational::new(num, 288),
        hadamard_feasible: is_hadamard_feasible_order(n as usize),
    })
}

/// One row of the zero-minor density table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub m: u64,
    pub p_m: ExactRational,
    pub p_m_hat: ExactRational,
    pub n0: u64,
    /// `2^(m-1) + 1`: beyond this, two columns agree after normalizing a row.
    pub pigeonhole_threshold: u64,
    pub p_m_decimal: String,
    pub p_m_hat_decimal: String,
}

pub const TABLE1_PLACES: u32 = 4;

pub fn table1(m_max: u64) -> Result<Vec<Table1Row>> {
    if !(2..=6).contains(&m_max) {
        return Err(Error::Domain(format!(
            "table rows exist for 2 <= m <= 6, got m_max = {m_max}"
        )));
    }
    (2..=m_max)
        .map(|m| {
            let p_m = density_pm(m)?;
            let p_m_hat = density_pm_hat(m)?;
            Ok(Table1Row {
                m,
                p_m_decimal: p_m.to_decimal(TABLE1_PLACES),
                p_m_hat_decimal: p_m_hat.to_decimal(TABLE1_PLACES),
                p_m,
                p_m_hat,
                n0: n0_threshold(m)?,
                pigeonhole_threshold: (1u64 << (m - 1)) + 1,
            })
        })
        .collect()
}

pub fn table1_text(rows: &[Table1Row]) -> String {
    let mut s = format!(
        "{:<3} {:<7} {:<7} {:<6} {}\n",
        "m", "p_m", "p^_m", "n0(m)", "2^(m-1)+1"
    );
    for r in rows {
        s.push_str(&format!(
            "{:<3} {:<7} {:<7} {:<6} {}\n",
            r.m, r.p_m_decimal, r.p_m_hat_decimal, r.n0, r.pigeonhole_threshold
        ));
    }
    s
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut s = String::from("m,p_m,p_m_hat,n0,pigeonhole_threshold,p_m_exact,p_m_hat_exact\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.m, r.p_m_decimal, r.p_m_hat_decimal, r.n0, r.pigeonhole_threshold, r.p_m, r.p_m_hat
        ));
    }
    s
}

/// Observed minor statistics of one matrix against the closed-form bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: u64,
    pub m: u64,
    pub observed_mean_sq: ExactRational,
    pub bound_mean_sq: ExactRational,
    pub is_hadamard: bool,
    pub equality_attained: bool,
    #[serde(serialize_with = "ser_bigint")]
    pub turan_floor: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub y_observed: BigInt,
    pub y_upper: ExactRational,
    #[serde(serialize_with = "ser_bigint")]
    pub z_observed: BigInt,
    pub z_lower: ExactRational,
}

impl BoundsReport {
    /// Inequalities that must hold for every sign matrix.
    pub fn inequalities_hold(&self) -> bool {
        self.observed_mean_sq <= self.bound_mean_sq
            && ExactRational::from_integer(self.y_observed.clone()) <= self.y_upper
            && ExactRational::from_integer(self.z_observed.clone()) >= self.z_lower
    }
}

pub fn bounds_report(a: &SignMatrix, m: u64) -> Result<BoundsReport> {
    bounds_report_with(a, m, &EngineConfig::default())
}

pub fn bounds_report_with(a: &SignMatrix, m: u64, cfg: &EngineConfig) -> Result<BoundsReport> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "bounds need a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows() as u64;
    check_range(n, m, 2)?;
    let stats = enumerate_minors_with(a, m as usize, false, cfg)?;
    let observed = ExactRational::new(
        ubig_to_int(stats.sum_squares),
        ubig_to_int(stats.total_count),
    );
    let bound = mean_square_bound(n, m)?;
    Ok(BoundsReport {
        n,
        m,
        equality_attained: observed == bound,
        observed_mean_sq: observed,
        bound_mean_sq: bound,
        is_hadamard: is_hadamard(a),
        turan_floor: ubig_to_int(factorial(m)),
        y_observed: ubig_to_int(stats.nonzero_count),
        y_upper: y_upper_bound(n, m)?,
        z_observed: ubig_to_int(stats.zero_count),
        z_lower: z_lower_bound(n, m)?,
    })
}

/// `Z(m, H)` against `Z(n - m, H)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementRow {
    pub m: u64,
    #[serde(serialize_with = "ser_bigint")]
    pub z_m: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub z_complement: BigInt,
    pub equal: bool,
}

pub const DEFAULT_COMPLEMENT_MAX_ORDER: usize = 16;

pub fn complement_check(h: &SignMatrix) -> Result<Vec<ComplementRow>> {
    complement_check_with(h, &EngineConfig::default(), DEFAULT_COMPLEMENT_MAX_ORDER)
}

/// Zero-minor counts for every `1 <= m < n`, paired with their complements.
pub fn complement_check_with(
    h: &SignMatrix,
    cfg: &EngineConfig,
    max_order: usize,
) -> Result<Vec<ComplementRow>> {
    if !is_hadamard(h) {
        return Err(Error::Validation(
            "complement check needs a Hadamard matrix".into(),
        ));
    }
    let n = h.rows();
    if n > max_order {
        return Err(Error::Size(format!(
            "complement check enumerates every order; order {n} exceeds the cap of {max_order}"
        )));
    }
    let zeros: Vec<BigInt> = if n > 1 {
        enumerate_minors_all(h, n - 1, false, cfg)?
            .into_iter()
            .map(|st| ubig_to_int(st.zero_count))
            .collect()
    } else {
        Vec::new()
    };
    Ok((1..n)
        .map(|m| {
            let z_m = zeros[m - 1].clone();
            let z_complement = zeros[n - m - 1].clone();
            ComplementRow {
                m: m as u64,
                equal: z_m == z_complement,
                z_m,
                z_complement,
            }
        })
        .collect())
}

/// `1 - 4 (n/4)^m / C(n, m)`, the finite-`n` density whose limit is `p_m`.
pub fn finite_density(n: u64, m: u64) -> Result<ExactRational> {
    check_range(n, m, 2)?;
    Ok(ExactRational::one()
        - four_quarter_power(n, m) / ExactRational::from_integer(ubig_to_int(binomial(n, m))))
}

/// Zero fraction `Z / C(n, m)^2` implied by a formula value.
pub fn zero_ratio(z: &ZFormula, m: u64) -> ExactRational {
    let c = ubig_to_int(binomial(z.n, m));
    if c.is_zero() {
        return ExactRational::zero();
    }
    z.value.clone() / ExactRational::from_integer(&c * &c)
}
