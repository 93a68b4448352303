//! Hadamard constructions and seeded random sign matrices.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::SignMatrix;

/// Largest order any constructor will build.
pub const MAX_CONSTRUCTED_ORDER: usize = 8192;
pub const MAX_SYLVESTER_EXPONENT: u32 = 13;
/// Cap on `rows * cols` for random matrices.
pub const MAX_RANDOM_ENTRIES: usize = 1 << 24;

/// Name of the deterministic generator behind every seeded draw.
pub const GENERATOR: &str =
    "chacha8 (rand_chacha 0.3, seed_from_u64; 64 entries per word, lsb first, set bit = -1)";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionSpec {
    /// Order `2^k`.
    Sylvester {
        k: u32,
    },
    /// Order `q + 1`, `q` prime and `q = 3 (mod 4)`.
    Paley1 {
        q: u64,
    },
    /// Order `2(q + 1)`, `q` prime and `q = 1 (mod 4)`.
    Paley2 {
        q: u64,
    },
    Random {
        rows: usize,
        cols: usize,
        seed: u64,
    },
}

impl ConstructionSpec {
    pub fn build(&self) -> Result<SignMatrix> {
        match *self {
            ConstructionSpec::Sylvester { k } => sylvester(k),
            ConstructionSpec::Paley1 { q } => paley_construct(PaleyKind::One, q),
            ConstructionSpec::Paley2 { q } => paley_construct(PaleyKind::Two, q),
            ConstructionSpec::Random { rows, cols, seed } => random_sign_matrix(rows, cols, seed),
        }
    }
}

/// Sylvester's doubling `H_2n = [[H, H], [H, -H]]` from `H_1 = [+1]`.
///
/// Entry `(i, j)` is `(-1)^popcount(i & j)`.
pub fn sylvester(k: u32) -> Result<SignMatrix> {
    if k > MAX_SYLVESTER_EXPONENT {
        return Err(Error::Size(format!(
            "sylvester exponent {k} exceeds {MAX_SYLVESTER_EXPONENT} (order cap {MAX_CONSTRUCTED_ORDER})"
        )));
    }
    let n = 1usize << k;
    Ok(SignMatrix::from_fn(n, n, |i, j| {
        (i & j).count_ones() % 2 == 0
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaleyKind {
    One,
    Two,
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q < 4 {
        return true;
    }
    if q.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % modulus as u128) as u64;
        }
        base = (base as u128 * base as u128 % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Quadratic character of `x` modulo an odd prime `q`, by Euler's criterion.
pub fn quadratic_character(x: u64, q: u64) -> i8 {
    let x = x % q;
    if x == 0 {
        return 0;
    }
    if pow_mod(x, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

pub fn paley_construct(kind: PaleyKind, q: u64) -> Result<SignMatrix> {
    if !is_prime(q) {
        return Err(Error::Validation(format!(
            "paley parameter {q} is not prime"
        )));
    }
    let (residue, order) = match kind {
        PaleyKind::One => (3, q + 1),
        PaleyKind::Two => (1, 2 * (q + 1)),
    };
    if q % 4 != residue {
        return Err(Error::Validation(format!(
            "paley{} needs q = {residue} (mod 4), got q = {q} = {} (mod 4)",
            if kind == PaleyKind::One { 1 } else { 2 },
            q % 4
        )));
    }
    if order > MAX_CONSTRUCTED_ORDER as u64 {
        return Err(Error::Size(format!(
            "paley order {order} exceeds {MAX_CONSTRUCTED_ORDER}"
        )));
    }
    let q_us = q as usize;
    let chi: Vec<i8> = (0..q).map(|x| quadratic_character(x, q)).collect();
    // Conference-style core on {inf, 0, 1, ..., q-1}: index 0 is the point at infinity.
    let core = |i: usize, j: usize| -> i8 {
        match (i, j) {
            (0, 0) => 0,
            (0, _) => 1,
            (_, 0) => {
                if kind == PaleyKind::One {
                    -1
                } else {
                    1
                }
            }
            _ => chi[(j + q_us - i) % q_us],
        }
    };
    let n = q_us + 1;
    Ok(match kind {
        // H = I + S with S skew
        PaleyKind::One => {
            SignMatrix::from_fn(n, n, |i, j| if i == j { true } else { core(i, j) > 0 })
        }
        // H = C (x) [[1, 1], [1, -1]] + I (x) [[1, -1], [-1, -1]] with C symmetric
        PaleyKind::Two => SignMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let (bi, bj) = (i / 2, j / 2);
            let (ri, rj) = (i % 2, j % 2);
            let c = core(bi, bj);
            if c == 0 {
                ri == 0 && rj == 0
            } else {
                let block = if ri == 1 && rj == 1 { -1 } else { 1 };
                c * block > 0
            }
        }),
    })
}

/// Each entry independently `+1` or `-1` with probability 1/2; a pure
/// function of `(rows, cols, seed)`.
pub fn random_sign_matrix(rows: usize, cols: usize, seed: u64) -> Result<SignMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix);
    }
    match rows.checked_mul(cols) {
        Some(n) if n <= MAX_RANDOM_ENTRIES => {}
        _ => {
            return Err(Error::Size(format!(
                "{rows}x{cols} random matrix exceeds {MAX_RANDOM_ENTRIES} entries"
            )))
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut signs = SignStream::new(&mut rng);
    Ok(SignMatrix::from_fn(rows, cols, |_, _| signs.next_plus()))
}

/// Bit-at-a-time view of a generator, 64 signs per word, least significant first.
pub(crate) struct SignStream<'a, R: RngCore> {
    rng: &'a mut R,
    word: u64,
    left: u32,
}

impl<'a, R: RngCore> SignStream<'a, R> {
    pub(crate) fn new(rng: &'a mut R) -> Self {
        Self {
            rng,
            word: 0,
            left: 0,
        }
    }

    #[inline]
    pub(crate) fn next_plus(&mut self) -> bool {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        let bit = self.word & 1;
        self.word >>= 1;
        self.left -= 1;
        bit == 0
    }
}
