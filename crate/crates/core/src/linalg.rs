//! Rank and kernel dimension of sparse rational matrices.
//!
//! Two backends share one elimination scheme (sparse pivot rows, one dense
//! accumulator per reduced vector, pivots keyed by leading coordinate):
//!
//! * modular: entries reduced mod a ~62-bit prime, arithmetic in Montgomery
//!   form. The rank mod `p` never exceeds the rational rank.
//! * exact: entries scaled to integers and eliminated fraction-free, with the
//!   content divided out of every stored pivot row.

use std::fmt::Write as _;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::LinalgError;

/// Sparse matrix with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<(usize, usize, BigRational)>,
}

impl SparseMatrix {
    /// Builds a matrix from triplets; repeated positions are summed and zeros
    /// dropped. Entries end up sorted by `(col, row)`.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigRational)>,
    ) -> Result<Self, LinalgError> {
        let mut entries: Vec<(usize, usize, BigRational)> = Vec::new();
        for (row, col, v) in triplets {
            if row >= n_rows || col >= n_cols {
                return Err(LinalgError::OutOfBounds {
                    row,
                    col,
                    n_rows,
                    n_cols,
                });
            }
            entries.push((row, col, v));
        }
        entries.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        let mut merged: Vec<(usize, usize, BigRational)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| !e.2.is_zero());
        Ok(SparseMatrix {
            n_rows,
            n_cols,
            entries: merged,
        })
    }

    /// Integer-valued convenience constructor, mostly for tests.
    pub fn from_dense_i64(rows: &[Vec<i64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let trip = rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(move |(j, &v)| (i, j, BigRational::from_integer(BigInt::from(v))))
        });
        SparseMatrix::from_triplets(n_rows, n_cols, trip).expect("indices in range")
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseMatrix {
            n_rows,
            n_cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, BigRational::one())))
            .expect("indices in range")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, BigRational)] {
        &self.entries
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.n_cols,
            self.n_rows,
            self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())),
        )
        .expect("indices in range")
    }

    /// Plain-text triplet dump: `rows cols nnz`, then `row col num/den` lines.
    pub fn to_triplet_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n_rows, self.n_cols, self.entries.len());
        for (r, c, v) in &self.entries {
            writeln!(s, "{} {} {}/{}", r, c, v.numer(), v.denom()).expect("string write");
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Option<SparseMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head: Vec<usize> = lines
            .next()?
            .split_whitespace()
            .map(|t| t.parse().ok())
            .collect::<Option<_>>()?;
        if head.len() != 3 {
            return None;
        }
        let mut trip = Vec::with_capacity(head[2]);
        for line in lines {
            let mut it = line.split_whitespace();
            let r: usize = it.next()?.parse().ok()?;
            let c: usize = it.next()?.parse().ok()?;
            let v = it.next()?;
            let (n, d) = v.split_once('/').unwrap_or((v, "1"));
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            trip.push((r, c, BigRational::new(n, d)));
        }
        if trip.len() != head[2] {
            return None;
        }
        SparseMatrix::from_triplets(head[0], head[1], trip).ok()
    }

    /// Columns as sparse vectors over the row index.
    fn columns(&self) -> Vec<Vec<(u32, &BigRational)>> {
        let mut cols: Vec<Vec<(u32, &BigRational)>> = vec![Vec::new(); self.n_cols];
        for (r, c, v) in &self.entries {
            cols[*c].push((*r as u32, v));
        }
        cols
    }

    /// Vectors to eliminate and their length: whichever of rows/columns is
    /// more numerous, so each dense accumulator spans the shorter side.
    fn vectors(&self) -> (Vec<Vec<(u32, &BigRational)>>, usize) {
        if self.n_cols >= self.n_rows {
            (self.columns(), self.n_rows)
        } else {
            let mut rows: Vec<Vec<(u32, &BigRational)>> = vec![Vec::new(); self.n_rows];
            for (r, c, v) in &self.entries {
                rows[*r].push((*c as u32, v));
            }
            (rows, self.n_cols)
        }
    }
}

// ---------------------------------------------------------------------------
// Arithmetic modulo a word-sized odd prime, Montgomery form with R = 2^64.

#[derive(Clone, Copy, Debug)]
pub(crate) struct Montgomery {
    p: u64,
    p_neg_inv: u64,
    r2: u64,
}

impl Montgomery {
    pub(crate) fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < (1u64 << 63), "modulus must be odd and below 2^63");
        // Newton iteration for p^{-1} mod 2^64.
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Montgomery {
            p,
            p_neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    pub(crate) fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    #[cfg(test)]
    pub(crate) fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub(crate) fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }

    /// `n/d mod p` in Montgomery form, `None` if `p | d`.
    pub(crate) fn from_rational(&self, v: &BigRational) -> Option<u64> {
        let n = match v.numer().to_i64() {
            Some(small) => small.rem_euclid(self.p as i64) as u64,
            None => self.reduce_bigint(v.numer()),
        };
        let n = self.to_mont(n);
        if v.denom().is_one() {
            return Some(n);
        }
        let d = self.reduce_bigint(v.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(n, self.inv(self.to_mont(d))))
    }
}

/// Incremental row-echelon basis over `F_p`.
pub(crate) struct ModEchelon {
    field: Montgomery,
    len: usize,
    pivot_of: Vec<u32>,
    rows: Vec<Vec<(u32, u64)>>,
    acc: Vec<u64>,
}

const NO_PIVOT: u32 = u32::MAX;

impl ModEchelon {
    pub(crate) fn new(field: Montgomery, len: usize) -> Self {
        ModEchelon {
            field,
            len,
            pivot_of: vec![NO_PIVOT; len],
            rows: Vec::new(),
            acc: vec![0; len],
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` (Montgomery-form entries, any order, no repeats) against
    /// the basis and adds what is left. Returns whether `v` was independent.
    pub(crate) fn insert(&mut self, v: &[(u32, u64)]) -> bool {
        let f = self.field;
        let mut lead = self.len;
        for &(i, x) in v {
            if x != 0 {
                self.acc[i as usize] = x;
                lead = lead.min(i as usize);
            }
        }
        let mut c = lead;
        while c < self.len {
            let a = self.acc[c];
            if a != 0 {
                let piv = self.pivot_of[c];
                if piv == NO_PIVOT {
                    let inv = f.inv(a);
                    let mut row = Vec::new();
                    for j in c..self.len {
                        let x = self.acc[j];
                        if x != 0 {
                            row.push((j as u32, f.mul(x, inv)));
                            self.acc[j] = 0;
                        }
                    }
                    self.pivot_of[c] = self.rows.len() as u32;
                    self.rows.push(row);
                    return true;
                }
                let row = &self.rows[piv as usize];
                for &(j, x) in row {
                    let j = j as usize;
                    self.acc[j] = f.sub(self.acc[j], f.mul(a, x));
                }
            }
            c += 1;
        }
        false
    }
}

/// Rank of `m` reduced modulo the odd prime `p`.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> Result<usize, LinalgError> {
    let field = Montgomery::new(p);
    let (vectors, len) = m.vectors();
    let mut reduced: Vec<Vec<(u32, u64)>> = Vec::with_capacity(vectors.len());
    for v in &vectors {
        let mut out = Vec::with_capacity(v.len());
        for &(i, x) in v {
            let r = field.from_rational(x).ok_or(LinalgError::BadPrime { prime: p })?;
            out.push((i, r));
        }
        reduced.push(out);
    }
    let mut ech = ModEchelon::new(field, len);
    for v in &reduced {
        if ech.rank() == len {
            break;
        }
        ech.insert(v);
    }
    Ok(ech.rank())
}

/// Rank over the rationals by fraction-free elimination on integer vectors.
pub fn rank_exact(m: &SparseMatrix) -> usize {
    let (vectors, len) = m.vectors();
    let mut ech = IntEchelon::new(len);
    for v in &vectors {
        if ech.rank() == len {
            break;
        }
        // Clear denominators of this vector.
        let lcm = v
            .iter()
            .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
        let iv: Vec<(u32, BigInt)> = v
            .iter()
            .map(|(i, x)| (*i, x.numer() * (&lcm / x.denom())))
            .collect();
        ech.insert(&iv);
    }
    ech.rank()
}

struct IntEchelon {
    len: usize,
    pivot_of: Vec<u32>,
    rows: Vec<Vec<(u32, BigInt)>>,
    acc: Vec<BigInt>,
}

impl IntEchelon {
    fn new(len: usize) -> Self {
        IntEchelon {
            len,
            pivot_of: vec![NO_PIVOT; len],
            rows: Vec::new(),
            acc: vec![BigInt::zero(); len],
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, v: &[(u32, BigInt)]) -> bool {
        let mut lead = self.len;
        let mut touched: Vec<usize> = Vec::new();
        for (i, x) in v {
            if !x.is_zero() {
                self.acc[*i as usize] = x.clone();
                lead = lead.min(*i as usize);
                touched.push(*i as usize);
            }
        }
        let mut steps = 0usize;
        let mut c = lead;
        while c < self.len {
            if !self.acc[c].is_zero() {
                let piv = self.pivot_of[c];
                if piv == NO_PIVOT {
                    let mut row: Vec<(u32, BigInt)> = Vec::new();
                    for j in c..self.len {
                        if !self.acc[j].is_zero() {
                            row.push((j as u32, std::mem::take(&mut self.acc[j])));
                        }
                    }
                    let g = row.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
                    if !g.is_one() {
                        for (_, x) in row.iter_mut() {
                            *x /= &g;
                        }
                    }
                    if row[0].1.sign() == Sign::Minus {
                        for (_, x) in row.iter_mut() {
                            *x = -std::mem::take(x);
                        }
                    }
                    self.pivot_of[c] = self.rows.len() as u32;
                    self.rows.push(row);
                    return true;
                }
                // acc <- (lead(P)/g) * acc - (acc[c]/g) * P with g = gcd, columns > c.
                let row = &self.rows[piv as usize];
                let mut a = std::mem::take(&mut self.acc[c]);
                let mut pl = row[0].1.clone();
                if !pl.is_one() {
                    let g = a.gcd(&pl);
                    if !g.is_one() {
                        a /= &g;
                        pl /= &g;
                    }
                }
                if !pl.is_one() {
                    for j in c + 1..self.len {
                        if !self.acc[j].is_zero() {
                            self.acc[j] *= &pl;
                        }
                    }
                }
                for (j, x) in &row[1..] {
                    let j = *j as usize;
                    self.acc[j] -= &a * x;
                    touched.push(j);
                }
                steps += 1;
                if steps % 16 == 0 {
                    self.remove_content(c + 1);
                }
            }
            c += 1;
        }
        for j in touched {
            self.acc[j] = BigInt::zero();
        }
        false
    }

    fn remove_content(&mut self, from: usize) {
        let g = self.acc[from..]
            .iter()
            .fold(BigInt::zero(), |g, x| if x.is_zero() { g } else { g.gcd(x) });
        if g > BigInt::one() {
            for x in self.acc[from..].iter_mut() {
                if !x.is_zero() {
                    *x /= &g;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Primes and certified ranks.

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `count` distinct primes in `[2^61, 2^62)` drawn from a ChaCha stream.
pub fn sample_primes(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let cand = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(cand) && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMethod {
    Modular,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub method: RankMethod,
    pub primes_used: Vec<u64>,
    pub agreement: usize,
}

/// How ranks are computed. The prime pool is fixed at construction so that
/// every matrix sees the same primes regardless of evaluation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankPolicy {
    pub n_primes: usize,
    pub exact: bool,
    pool: Vec<u64>,
}

impl RankPolicy {
    /// Spare primes kept in the pool to replace ones dividing a denominator.
    const SPARES: usize = 8;

    pub fn new(n_primes: usize, exact: bool, seed: u64) -> Self {
        let n_primes = n_primes.max(1);
        RankPolicy {
            n_primes,
            exact,
            pool: sample_primes(seed, n_primes + Self::SPARES),
        }
    }

    pub fn modular(n_primes: usize, seed: u64) -> Self {
        RankPolicy::new(n_primes, false, seed)
    }

    pub fn exact() -> Self {
        RankPolicy::new(1, true, 0)
    }

    pub fn primes(&self) -> &[u64] {
        &self.pool
    }
}

impl Default for RankPolicy {
    fn default() -> Self {
        RankPolicy::modular(2, 0x5eed)
    }
}

pub fn rank_certified(m: &SparseMatrix, policy: &RankPolicy) -> RankCertificate {
    if policy.exact {
        return RankCertificate {
            rank: rank_exact(m),
            method: RankMethod::Exact,
            primes_used: Vec::new(),
            agreement: 0,
        };
    }
    let mut ranks: Vec<(u64, usize)> = Vec::with_capacity(policy.n_primes);
    let mut pool = policy.pool.iter().copied();
    while ranks.len() < policy.n_primes {
        let p = match pool.next() {
            Some(p) => p,
            // Pool exhausted by bad primes: extend deterministically.
            None => {
                let extra = sample_primes(ranks.len() as u64 ^ 0x9e37_79b9, policy.n_primes + 64);
                return rank_certified(
                    m,
                    &RankPolicy {
                        n_primes: policy.n_primes,
                        exact: false,
                        pool: extra,
                    },
                );
            }
        };
        if let Ok(r) = rank_mod_p(m, p) {
            ranks.push((p, r));
        }
    }
    let rank = ranks.iter().map(|x| x.1).max().unwrap_or(0);
    RankCertificate {
        rank,
        method: RankMethod::Modular,
        agreement: ranks.iter().filter(|x| x.1 == rank).count(),
        primes_used: ranks.into_iter().map(|x| x.0).collect(),
    }
}

pub fn kernel_dim(m: &SparseMatrix, policy: &RankPolicy) -> usize {
    m.n_cols() - rank_certified(m, policy).rank
}

/// Signed-integer helper used by callers that track dimensions that must not
/// go negative.
pub fn checked_dim(v: i64) -> Option<usize> {
    if v.is_negative() {
        None
    } else {
        Some(v as usize)
    }
}
