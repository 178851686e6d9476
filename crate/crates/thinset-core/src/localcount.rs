//! Dense tables of local data over `F_p^n`: the root counts `v_p(x)`,
//! point counts of `{F = 0}`, and zero-set / box censuses.
//!
//! Linear index order: `x_1` fastest, index `sum x_i p^{i-1}`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::polyring::Polynomial;
use crate::primefield::{mulmod, UniPoly};

/// Default cap on dense table sizes (entries).
pub const DEFAULT_TABLE_CAP: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableError {
    TableTooLarge { entries: u64, cap: u64 },
    ZeroModP { p: u64 },
    PrimeTooLargeForTable { p: u64 },
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::TableTooLarge { entries, cap } => {
                write!(f, "table of {entries} entries exceeds cap {cap}")
            }
            TableError::ZeroModP { p } => {
                write!(f, "polynomial vanishes identically mod {p}; census undefined")
            }
            TableError::PrimeTooLargeForTable { p } => {
                write!(f, "prime {p} too large for dense table entries")
            }
        }
    }
}

impl core::error::Error for TableError {}

/// Odometer over `[0, p)^n`, `x_1` fastest.
pub struct PointIter {
    p: u64,
    xs: Vec<u64>,
    done: bool,
}

impl PointIter {
    pub fn new(p: u64, n: usize) -> PointIter {
        PointIter {
            p,
            xs: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for PointIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.xs.clone();
        let mut i = 0;
        loop {
            if i == self.xs.len() {
                self.done = true;
                break;
            }
            self.xs[i] += 1;
            if self.xs[i] < self.p {
                break;
            }
            self.xs[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

pub fn checked_table_len(p: u64, n: usize, cap: u64) -> Result<usize, TableError> {
    let mut entries = 1u64;
    for _ in 0..n {
        entries = entries.checked_mul(p).ok_or(TableError::TableTooLarge {
            entries: u64::MAX,
            cap,
        })?;
    }
    if entries > cap {
        return Err(TableError::TableTooLarge { entries, cap });
    }
    Ok(entries as usize)
}

/// Evaluator for a polynomial in the X-variables only, reduced mod p, with
/// per-value power tables.
pub struct ModXEval {
    p: u64,
    terms: Vec<(Vec<u32>, u64)>,
    pow: Vec<Vec<u64>>,
}

impl ModXEval {
    /// `f` must not involve Y.
    pub fn new(f: &Polynomial, p: u64) -> ModXEval {
        assert_eq!(f.deg_y().unwrap_or(0), 0, "polynomial involves Y");
        let (red, _) = f.reduce_mod(p);
        let mut terms = Vec::new();
        let mut maxe = 0u32;
        for (e, c) in red.terms() {
            let xexp: Vec<u32> = e[1..].to_vec();
            for &k in &xexp {
                maxe = maxe.max(k);
            }
            terms.push((xexp, big_to_u64(c, p)));
        }
        ModXEval {
            p,
            terms,
            pow: power_table(p, maxe),
        }
    }

    pub fn eval(&self, xs: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for (xexp, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in xexp.iter().enumerate() {
                if e > 0 {
                    t = mulmod(t, self.pow[xs[i] as usize][e as usize], p);
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

/// Evaluator producing the univariate Y-specialization `F(Y, x)` mod p.
pub struct FModEval {
    p: u64,
    deg_y: u32,
    terms: Vec<(u32, Vec<u32>, u64)>,
    pow: Vec<Vec<u64>>,
}

impl FModEval {
    pub fn new(f: &Polynomial, p: u64) -> FModEval {
        let (red, _) = f.reduce_mod(p);
        let deg_y = red.deg_y().unwrap_or(0);
        let mut terms = Vec::new();
        let mut maxe = 0u32;
        for (e, c) in red.terms() {
            let xexp: Vec<u32> = e[1..].to_vec();
            for &k in &xexp {
                maxe = maxe.max(k);
            }
            terms.push((e[0], xexp, big_to_u64(c, p)));
        }
        FModEval {
            p,
            deg_y,
            terms,
            pow: power_table(p, maxe),
        }
    }

    /// Coefficients of `F(Y, x)` ascending in Y.
    pub fn specialize_y(&self, xs: &[u64]) -> UniPoly {
        let p = self.p;
        let mut coeffs = vec![0u64; self.deg_y as usize + 1];
        for (ydeg, xexp, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in xexp.iter().enumerate() {
                if e > 0 {
                    t = mulmod(t, self.pow[xs[i] as usize][e as usize], p);
                }
            }
            coeffs[*ydeg as usize] = (coeffs[*ydeg as usize] + t) % p;
        }
        UniPoly::new(p, &coeffs)
    }
}

fn power_table(p: u64, maxe: u32) -> Vec<Vec<u64>> {
    (0..p)
        .map(|v| {
            let mut row = vec![1u64; maxe as usize + 1];
            for e in 1..=maxe as usize {
                row[e] = mulmod(row[e - 1], v, p);
            }
            row
        })
        .collect()
}

fn big_to_u64(c: &BigInt, p: u64) -> u64 {
    let m = c.mod_floor(&BigInt::from(p));
    m.to_u64().expect("reduced coefficient fits u64")
}

/// Dense table of `v_p(x) = #{y mod p : F(y, x) = 0 mod p}` over `F_p^n`.
pub struct VTable {
    pub p: u64,
    pub n: usize,
    pub deg_y: u32,
    data: Vec<u16>,
}

impl VTable {
    pub fn build(f: &Polynomial, p: u64, cap: u64) -> Result<VTable, TableError> {
        if p >= (1 << 16) {
            return Err(TableError::PrimeTooLargeForTable { p });
        }
        let n = f.nvars();
        let len = checked_table_len(p, n, cap)?;
        let eval = FModEval::new(f, p);
        let mut data = vec![0u16; len];
        for (idx, xs) in PointIter::new(p, n).enumerate() {
            let g = eval.specialize_y(&xs);
            let v = if g.is_zero() {
                p as usize
            } else {
                g.count_roots().expect("nonzero specialization")
            };
            data[idx] = v as u16;
        }
        Ok(VTable {
            p,
            n,
            deg_y: f.deg_y().unwrap_or(0),
            data,
        })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, idx: usize) -> u64 {
        self.data[idx] as u64
    }

    pub fn at(&self, xs: &[u64]) -> u64 {
        self.data[self.index_of(xs)] as u64
    }

    pub fn index_of(&self, xs: &[u64]) -> usize {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for &x in xs {
            idx += (x % self.p) as usize * stride;
            stride *= self.p as usize;
        }
        idx
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    /// `sum_x v_p(x) = #X(F_p)` for `X = {F = 0}` in `A^{n+1}`.
    pub fn sum(&self) -> u64 {
        self.data.iter().map(|&v| v as u64).sum()
    }
}

/// `point_count`: `(#X(F_p), (count - p^n) / p^{n - 1/2})`.
pub fn point_count(f: &Polynomial, p: u64, cap: u64) -> Result<(u64, f64), TableError> {
    let v = VTable::build(f, p, cap)?;
    let count = v.sum();
    let n = f.nvars() as i32;
    let pn = libm::pow(p as f64, n as f64);
    let dev = (count as f64 - pn) / libm::pow(p as f64, n as f64 - 0.5);
    Ok((count, dev))
}

/// A measured count against a predicted cap.
#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub description: String,
    pub count: u64,
    pub bound: f64,
    pub ratio: f64,
    pub passed: bool,
}

impl CensusReport {
    pub fn new(description: String, count: u64, bound: f64) -> CensusReport {
        let ratio = if bound > 0.0 {
            count as f64 / bound
        } else if count == 0 {
            0.0
        } else {
            f64::INFINITY
        };
        CensusReport {
            description,
            count,
            bound,
            passed: count as f64 <= bound,
            ratio,
        }
    }
}

/// `#{x in S^n : g(x) = 0 mod p}` against the Schwartz-Zippel cap
/// `deg(g) |S|^{n-1}`, where `S` is the interval `[lo, hi]` in `[0, p)`.
pub fn zero_census(
    g: &Polynomial,
    p: u64,
    lo: u64,
    hi: u64,
) -> Result<CensusReport, TableError> {
    assert!(lo <= hi && hi < p);
    let n = g.nvars();
    let (red, _) = g.reduce_mod(p);
    if red.is_zero() {
        return Err(TableError::ZeroModP { p });
    }
    let deg = red
        .terms()
        .map(|(e, _)| e[1..].iter().map(|&k| k as u64).sum::<u64>())
        .max()
        .unwrap_or(0);
    let eval = ModXEval::new(&red, p);
    let side = hi - lo + 1;
    let mut count = 0u64;
    let mut xs = vec![lo; n];
    'outer: loop {
        if eval.eval(&xs) == 0 {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                break 'outer;
            }
            xs[i] += 1;
            if xs[i] <= hi {
                break;
            }
            xs[i] = lo;
            i += 1;
        }
    }
    let bound = deg as f64 * libm::pow(side as f64, n as f64 - 1.0);
    Ok(CensusReport::new(
        alloc::format!("zero census of degree-{deg} polynomial over [{lo},{hi}]^{n} mod {p}"),
        count,
        bound,
    ))
}

/// Common zeros of `polys` with all coordinates in `[0, h)`, against the
/// declared cap `d h^{n-j}`. The operation measures; the caller asserts.
pub fn box_count(
    polys: &[Polynomial],
    p: u64,
    h: u64,
    codim: u32,
    dim_sum: u64,
) -> CensusReport {
    assert!(!polys.is_empty());
    assert!(h <= p);
    let n = polys[0].nvars();
    let evals: Vec<ModXEval> = polys
        .iter()
        .map(|g| ModXEval::new(&g.reduce_mod(p).0, p))
        .collect();
    let mut count = 0u64;
    let mut xs = vec![0u64; n];
    'outer: loop {
        if evals.iter().all(|e| e.eval(&xs) == 0) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                break 'outer;
            }
            xs[i] += 1;
            if xs[i] < h {
                break;
            }
            xs[i] = 0;
            i += 1;
        }
    }
    let bound = dim_sum as f64 * libm::pow(h as f64, n as f64 - codim as f64);
    CensusReport::new(
        alloc::format!(
            "box count of {} polynomial(s) in [0,{h})^{n} mod {p}, declared codim {codim}, dim sum {dim_sum}",
            polys.len()
        ),
        count,
        bound,
    )
}
