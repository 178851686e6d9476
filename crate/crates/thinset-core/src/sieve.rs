//! Exact integral-point counting `N(F,B)`, the smooth sieve weight, the
//! sieving set over a prime window, and the terms of the polynomial-sieve
//! inequality including the bilinear average `T(p,q;B)`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::expsum::{full_dft, GTable, SplitMix64};
use crate::localcount::{TableError, VTable};
use crate::polyring::{resultant, Polynomial, SievedForm};
use crate::primefield::{invmod, is_prime, mulmod, PrimeCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SieveError {
    NotMonicInY,
    /// No primes survive the window and exclusions; raise P.
    EmptySet { lo: u64, hi: u64, m: u64 },
    PairBudgetExceeded { pairs: u64, budget: u64 },
    /// The unconditional sieve requires the structured form with m >= 2.
    NeedsMAtLeastTwo { m: u32 },
    Table(TableError),
}

impl fmt::Display for SieveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SieveError::NotMonicInY => write!(f, "polynomial is not monic in Y"),
            SieveError::EmptySet { lo, hi, m } => {
                write!(f, "no primes survive in [{lo},{hi}] with p = 1 mod {m}")
            }
            SieveError::PairBudgetExceeded { pairs, budget } => {
                write!(f, "{pairs} prime pairs exceed the budget {budget}")
            }
            SieveError::NeedsMAtLeastTwo { m } => {
                write!(f, "unconditional sieve needs m >= 2, got m = {m}")
            }
            SieveError::Table(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SieveError {}

impl From<TableError> for SieveError {
    fn from(e: TableError) -> SieveError {
        SieveError::Table(e)
    }
}

/// The smooth weight `W(x) = prod_i psi(x_i / B)` with
/// `psi(t) = e^{1/3} exp(-1/(4 - t^2))` for `|t| < 2` and 0 otherwise.
/// `psi(+-1) = 1` exactly and `psi >= 1` on `[-1, 1]`.
#[derive(Clone, Debug, Serialize)]
pub struct Weight {
    pub b: f64,
    pub definition: &'static str,
}

impl Weight {
    pub fn new(b: f64) -> Weight {
        assert!(b >= 1.0);
        Weight {
            b,
            definition: "psi(t) = e^(1/3) * exp(-1/(4-t^2)) on |t|<2",
        }
    }

    pub fn psi(t: f64) -> f64 {
        if t.abs() >= 2.0 {
            return 0.0;
        }
        libm::exp(1.0 / 3.0 - 1.0 / (4.0 - t * t))
    }

    pub fn eval(&self, x: &[i64]) -> f64 {
        x.iter()
            .map(|&xi| Self::psi(xi as f64 / self.b))
            .product()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExcludeReason {
    DegreeDrop,
    PilotDiscriminant,
    SmallPrime,
    User,
}

/// Primes in `[lo, hi]` congruent to 1 mod m, minus the excluded ledger.
#[derive(Clone, Debug, Serialize)]
pub struct SievingSet {
    pub lo: u64,
    pub hi: u64,
    pub m: u64,
    pub primes: Vec<u64>,
    pub excluded: Vec<(u64, ExcludeReason)>,
    pub pilot_point: Option<Vec<i64>>,
    pub pilot_value: Option<String>,
}

/// `Res_Y(F, dF/dY)` evaluated at the first small integer point where it is
/// nonzero, scanning 0, 1, -1, 2, -2, ... per coordinate.
pub fn pilot_discriminant(f: &Polynomial) -> Option<BigInt> {
    pilot_discriminant_with_point(f).map(|(v, _)| v)
}

pub fn pilot_discriminant_with_point(f: &Polynomial) -> Option<(BigInt, Vec<i64>)> {
    let n = f.nvars();
    let candidates: [i64; 7] = [0, 1, -1, 2, -2, 3, -3];
    let mut idx = vec![0usize; n];
    loop {
        let point: Vec<i64> = idx.iter().map(|&i| candidates[i]).collect();
        let mut bindings = alloc::collections::BTreeMap::new();
        for (i, &v) in point.iter().enumerate() {
            bindings.insert(i + 1, BigInt::from(v));
        }
        let spec = f.specialize(&bindings);
        if spec.deg_y().unwrap_or(0) >= 1 {
            let dspec = spec.derivative(0);
            if !dspec.is_zero() {
                let res = resultant(&spec, &dspec, 0);
                let value = res.eval(&BigInt::zero(), &vec![BigInt::zero(); n]);
                if !value.is_zero() {
                    return Some((value, point));
                }
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            idx[i] += 1;
            if idx[i] < candidates.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Sieving set over `[p_lo, 2 p_lo]`; see [`sieving_set_window`].
pub fn sieving_set(f: &Polynomial, p_lo: u64, m: u64) -> Result<SievingSet, SieveError> {
    assert!(p_lo >= 3);
    sieving_set_window(f, p_lo, 2 * p_lo, m)
}

/// Primes `p` in `[lo, hi]` with `p = 1 mod m`, excluding small primes
/// (`p <= max(m, deg F)`), primes where the reduction drops total degree,
/// and primes dividing the pilot discriminant value.
pub fn sieving_set_window(
    f: &Polynomial,
    lo: u64,
    hi: u64,
    m: u64,
) -> Result<SievingSet, SieveError> {
    let deg = f.total_degree().unwrap_or(0);
    let small_cut = m.max(deg);
    let pilot = pilot_discriminant_with_point(f);
    let mut primes = Vec::new();
    let mut excluded = Vec::new();
    for p in lo..=hi {
        if !is_prime(p) || p % m != 1 % m {
            continue;
        }
        if p <= small_cut {
            excluded.push((p, ExcludeReason::SmallPrime));
            continue;
        }
        let (_, dropped) = f.reduce_mod(p);
        if dropped {
            excluded.push((p, ExcludeReason::DegreeDrop));
            continue;
        }
        if let Some((value, _)) = &pilot {
            if value.mod_floor(&BigInt::from(p)).is_zero() {
                excluded.push((p, ExcludeReason::PilotDiscriminant));
                continue;
            }
        }
        primes.push(p);
    }
    if primes.is_empty() {
        return Err(SieveError::EmptySet { lo, hi, m });
    }
    Ok(SievingSet {
        lo,
        hi,
        m,
        primes,
        excluded,
        pilot_point: pilot.as_ref().map(|(_, pt)| pt.clone()),
        pilot_value: pilot.as_ref().map(|(v, _)| v.to_string()),
    })
}

fn is_monic_in_y(f: &Polynomial) -> bool {
    match f.deg_y() {
        Some(d) if d >= 1 => f.coeff_of(0, d) == Polynomial::one(f.nvars()),
        _ => false,
    }
}

/// Integer roots of the monic univariate with the given coefficients
/// (ascending). Divisor enumeration of the constant term; Cauchy-bound scan
/// when the constant term exceeds 10^18.
fn integer_roots(coeffs: &[BigInt]) -> Vec<BigInt> {
    let mut roots = Vec::new();
    let c0 = &coeffs[0];
    if c0.is_zero() {
        roots.push(BigInt::zero());
        // strip the factor Y and recurse on the remaining coefficients
        let rest: Vec<BigInt> = coeffs[1..].to_vec();
        if rest.len() > 1 {
            for r in integer_roots(&rest) {
                if !r.is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
        return roots;
    }
    let abs = c0.abs();
    if let Some(limit) = abs.to_u64() {
        if limit <= 1_000_000_000_000_000_000 {
            let mut d = 1u64;
            while d as u128 * d as u128 <= limit as u128 {
                if limit % d == 0 {
                    for cand in [d, limit / d] {
                        for sign in [1i64, -1] {
                            let y = BigInt::from(cand) * sign;
                            if horner(coeffs, &y).is_zero() && !roots.contains(&y) {
                                roots.push(y);
                            }
                        }
                    }
                }
                d += 1;
            }
            return roots;
        }
    }
    // Cauchy bound: |y| <= 1 + max |a_i| for monic polynomials
    let bound: BigInt = coeffs
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
        + 1;
    let bound = bound.to_i64().unwrap_or(i64::MAX);
    for y in -bound..=bound {
        let yb = BigInt::from(y);
        if horner(coeffs, &yb).is_zero() {
            roots.push(yb);
        }
    }
    roots
}

fn horner(coeffs: &[BigInt], y: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * y + c;
    }
    acc
}

/// Per-point solvability helper caching the Y-coefficient polynomials.
pub struct Solver {
    coeff_polys: Vec<Polynomial>,
    n: usize,
}

impl Solver {
    pub fn new(f: &Polynomial) -> Result<Solver, SieveError> {
        if !is_monic_in_y(f) {
            return Err(SieveError::NotMonicInY);
        }
        Ok(Solver {
            coeff_polys: f.coeffs_in(0),
            n: f.nvars(),
        })
    }

    fn y_coeffs(&self, x: &[i64]) -> Vec<BigInt> {
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.coeff_polys
            .iter()
            .map(|c| c.eval(&BigInt::zero(), &xb))
            .collect()
    }

    pub fn integer_roots_at(&self, x: &[i64]) -> Vec<BigInt> {
        integer_roots(&self.y_coeffs(x))
    }

    pub fn is_solvable(&self, x: &[i64]) -> bool {
        !self.integer_roots_at(x).is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.n
    }
}

/// Exact `N(F,B)`: integer points `x` in `[-B, B]^n` for which
/// `F(y, x) = 0` has an integer solution `y`.
pub fn brute_count(f: &Polynomial, b: u64) -> Result<u64, SieveError> {
    let solver = Solver::new(f)?;
    let n = f.nvars();
    let mut count = 0u64;
    for x in box_iter(b as i64, n) {
        if solver.is_solvable(&x) {
            count += 1;
        }
    }
    Ok(count)
}

/// Odometer over `[-b, b]^n`.
pub fn box_iter(b: i64, n: usize) -> BoxIter {
    BoxIter {
        b,
        xs: vec![-b; n],
        done: false,
    }
}

pub struct BoxIter {
    b: i64,
    xs: Vec<i64>,
    done: bool,
}

impl Iterator for BoxIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
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
            if self.xs[i] <= self.b {
                break;
            }
            self.xs[i] = -self.b;
            i += 1;
        }
        Some(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub x: Vec<i64>,
    pub p: u64,
    pub v_p: u64,
    pub m: u32,
}

/// For every solvable `x` in `[-B,B]^n` with `f_d(x) != 0` and nonzero
/// integer root `y_0`: every prime `p` in the set with `p` dividing neither
/// `y_0` nor `f_d(x)` must satisfy `v_p(x) >= m`. Returns violations
/// (expected empty: the m-th-root orbit of `y_0` has m elements at
/// `p = 1 mod m`).
pub fn solvable_detector_check(
    sf: &SievedForm,
    primes: &[u64],
    b: u64,
) -> Result<Vec<Violation>, SieveError> {
    let f = sf.reconstruct();
    let solver = Solver::new(&f)?;
    let n = f.nvars();
    let fd = sf.f_d();
    let evals: Vec<crate::localcount::FModEval> = primes
        .iter()
        .map(|&p| crate::localcount::FModEval::new(&f, p))
        .collect();
    let mut violations = Vec::new();
    for x in box_iter(b as i64, n) {
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let fdx = fd.eval(&BigInt::zero(), &xb);
        if fdx.is_zero() {
            continue;
        }
        let roots = solver.integer_roots_at(&x);
        if roots.is_empty() {
            continue;
        }
        for (pi, &p) in primes.iter().enumerate() {
            let pb = BigInt::from(p);
            if fdx.mod_floor(&pb).is_zero() {
                continue;
            }
            // at least one root exempt from p | y0 must force v_p >= m
            let usable = roots
                .iter()
                .any(|y0| !y0.is_zero() && !y0.mod_floor(&pb).is_zero());
            if !usable {
                continue;
            }
            let xs: Vec<u64> = x
                .iter()
                .map(|&v| v.rem_euclid(p as i64) as u64)
                .collect();
            let spec = evals[pi].specialize_y(&xs);
            let v = if spec.is_zero() {
                p
            } else {
                spec.count_roots().expect("nonzero") as u64
            };
            if v < sf.m as u64 {
                violations.push(Violation {
                    x: x.clone(),
                    p,
                    v_p: v,
                    m: sf.m,
                });
            }
        }
    }
    Ok(violations)
}

/// All terms of the polynomial-sieve right-hand side plus the exact count.
#[derive(Clone, Debug, Serialize)]
pub struct SieveReport {
    pub b: u64,
    pub p_window: (u64, u64),
    pub m: u32,
    pub n_exact: u64,
    /// `sum over solvable x of W(x)`.
    pub s_smoothed: f64,
    /// `sum over f_d(x) = 0 of W(x)`.
    pub term1: f64,
    /// `(1/|P|) sum_x W(x)`.
    pub term2: f64,
    /// `(1/|P|^2) sum over ordered pairs p != q of |sum_x W (v_p-1)(v_q-1)|`.
    pub term3: f64,
    pub measured_constant: f64,
    pub primes: Vec<u64>,
    pub excluded: Vec<(u64, ExcludeReason)>,
    pub pair_budget: u64,
    pub pairs_sampled: u64,
    pub pairs_total: u64,
    pub seed: u64,
    /// `|P| log P / P` and the two logs of the viability condition,
    /// recorded for the reader; nothing is asserted about them.
    pub density_indicator: f64,
    pub log_norm_fd: f64,
    pub log_b: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct SieveConfig {
    pub pair_budget: u64,
    pub seed: u64,
    pub table_cap: u64,
    pub allow_subsample: bool,
}

impl Default for SieveConfig {
    fn default() -> SieveConfig {
        SieveConfig {
            pair_budget: 200,
            seed: 0,
            table_cap: crate::localcount::DEFAULT_TABLE_CAP,
            allow_subsample: true,
        }
    }
}

pub fn sieve_rhs(
    sf: &SievedForm,
    b: u64,
    p_lo: u64,
    cfg: &SieveConfig,
) -> Result<SieveReport, SieveError> {
    if sf.m < 2 {
        return Err(SieveError::NeedsMAtLeastTwo { m: sf.m });
    }
    let f = sf.reconstruct();
    let n = f.nvars();
    let set = sieving_set(&f, p_lo, sf.m as u64)?;
    let np = set.primes.len() as f64;
    let weight = Weight::new(b as f64);
    let solver = Solver::new(&f)?;
    let fd = sf.f_d();

    let n_exact = brute_count(&f, b)?;

    let wide = 2 * b as i64;
    let mut s_smoothed = 0.0f64;
    let mut term1 = 0.0f64;
    let mut w_total = 0.0f64;
    for x in box_iter(wide, n) {
        let w = weight.eval(&x);
        if w == 0.0 {
            continue;
        }
        w_total += w;
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        if fd.eval(&BigInt::zero(), &xb).is_zero() {
            term1 += w;
        }
        if solver.is_solvable(&x) {
            s_smoothed += w;
        }
    }
    let term2 = w_total / np;

    // bilinear term over unordered pairs, optionally subsampled
    let pairs: Vec<(u64, u64)> = {
        let mut out = Vec::new();
        for (i, &p) in set.primes.iter().enumerate() {
            for &q in &set.primes[i + 1..] {
                out.push((p, q));
            }
        }
        out
    };
    let total_pairs = pairs.len() as u64;
    let sampled: Vec<(u64, u64)> = if total_pairs <= cfg.pair_budget {
        pairs
    } else if cfg.allow_subsample {
        let mut rng = SplitMix64::new(cfg.seed);
        let mut pool = pairs;
        let mut out = Vec::new();
        for _ in 0..cfg.pair_budget {
            let k = rng.below(pool.len() as u64) as usize;
            out.push(pool.swap_remove(k));
        }
        out
    } else {
        return Err(SieveError::PairBudgetExceeded {
            pairs: total_pairs,
            budget: cfg.pair_budget,
        });
    };

    let vtables: alloc::collections::BTreeMap<u64, VTable> = set
        .primes
        .iter()
        .map(|&p| Ok((p, VTable::build(&f, p, cfg.table_cap)?)))
        .collect::<Result<_, TableError>>()?;
    let mut pair_sum = 0.0f64;
    for &(p, q) in &sampled {
        pair_sum += bilinear_direct(&weight, &vtables[&p], &vtables[&q], wide, n).abs();
    }
    let scale = if sampled.is_empty() {
        0.0
    } else {
        total_pairs as f64 / sampled.len() as f64
    };
    // ordered pairs are twice the unordered count; the summand is symmetric
    let term3 = 2.0 * scale * pair_sum / (np * np);

    let rhs = term1 + term2 + term3;
    let measured_constant = if rhs > 0.0 { s_smoothed / rhs } else { 0.0 };
    let p_mid = (set.lo + set.hi) as f64 / 2.0;
    Ok(SieveReport {
        b,
        p_window: (set.lo, set.hi),
        m: sf.m,
        n_exact,
        s_smoothed,
        term1,
        term2,
        term3,
        measured_constant,
        primes: set.primes.clone(),
        excluded: set.excluded.clone(),
        pair_budget: cfg.pair_budget,
        pairs_sampled: sampled.len() as u64,
        pairs_total: total_pairs,
        seed: cfg.seed,
        density_indicator: np * libm::log(p_mid) / p_mid,
        log_norm_fd: libm::log(fd.norm().to_f64().unwrap_or(f64::MAX).max(1.0)),
        log_b: libm::log(b as f64),
    })
}

fn bilinear_direct(weight: &Weight, vp: &VTable, vq: &VTable, wide: i64, n: usize) -> f64 {
    let p = vp.p;
    let q = vq.p;
    let mut acc = 0.0f64;
    for x in box_iter(wide, n) {
        let w = weight.eval(&x);
        if w == 0.0 {
            continue;
        }
        let xp: Vec<u64> = x.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect();
        let xq: Vec<u64> = x.iter().map(|&v| v.rem_euclid(q as i64) as u64).collect();
        let gp = vp.at(&xp) as i64 - 1;
        let gq = vq.at(&xq) as i64 - 1;
        if gp != 0 && gq != 0 {
            acc += w * (gp * gq) as f64;
        }
    }
    acc
}

/// The truncated frequency-side bilinear term and its exact spatial-side
/// counterpart.
#[derive(Clone, Debug, Serialize)]
pub struct BilinearReport {
    pub p: u64,
    pub q: u64,
    pub b: u64,
    pub decay_exponent: u32,
    /// Truncation radius per coordinate.
    pub truncation: u64,
    pub t_value: f64,
    pub tail_bound: f64,
    /// `sum_x W(x) (v_p(x)-1)(v_q(x)-1)`, exact up to the weight.
    pub direct_value: f64,
}

pub fn bilinear_term(
    f: &Polynomial,
    b: u64,
    p: u64,
    q: u64,
    decay_exponent: u32,
    cap: u64,
) -> Result<BilinearReport, SieveError> {
    let n = f.nvars();
    assert!(decay_exponent as usize >= n + 2, "need M >= n + 2");
    let vp = VTable::build(f, p, cap)?;
    let vq = VTable::build(f, q, cap)?;
    let gp = GTable::from_vtable(&vp);
    let gq = GTable::from_vtable(&vq);
    let ctxp = PrimeCtx::new(p).expect("prime");
    let ctxq = PrimeCtx::new(q).expect("prime");
    let sp = full_dft(&gp, &ctxp, cap)?;
    let sq = full_dft(&gq, &ctxq, cap)?;
    let qbar = invmod(q % p, p);
    let pbar = invmod(p % q, q);
    let pq = (p * q) as f64;
    let m = decay_exponent as f64;
    let u_rad = libm::ceil(pq / b as f64 * libm::pow(pq, 0.2)) as i64;
    let bn = libm::pow(b as f64, n as f64);
    let pqn = libm::pow(pq, n as f64);

    let mut t_value = 0.0f64;
    let mut s_max_p = 0.0f64;
    let mut s_max_q = 0.0f64;
    for z in sp.data() {
        s_max_p = s_max_p.max(z.norm());
    }
    for z in sq.data() {
        s_max_q = s_max_q.max(z.norm());
    }
    for u in box_iter(u_rad, n) {
        let mut factor = 1.0f64;
        for &ui in &u {
            factor *= libm::pow(1.0 + ui.unsigned_abs() as f64 * b as f64 / pq, -m);
        }
        if factor == 0.0 {
            continue;
        }
        let up: Vec<u64> = u
            .iter()
            .map(|&ui| mulmod(qbar, ui.rem_euclid(p as i64) as u64, p))
            .collect();
        let uq: Vec<u64> = u
            .iter()
            .map(|&ui| mulmod(pbar, ui.rem_euclid(q as i64) as u64, q))
            .collect();
        t_value += factor * sp.at(&up).norm() * sq.at(&uq).norm();
    }
    t_value *= bn / pqn;

    // analytic tail: outside the box at least one coordinate has |u| > U;
    // bound the 1-d tail by the integral of the decay factor.
    let one_d_tail = 2.0 * (pq / b as f64) / (m - 1.0)
        * libm::pow(1.0 + u_rad as f64 * b as f64 / pq, 1.0 - m);
    let one_d_full: f64 = (-u_rad..=u_rad)
        .map(|ui| libm::pow(1.0 + ui.unsigned_abs() as f64 * b as f64 / pq, -m))
        .sum::<f64>()
        + one_d_tail;
    let tail_bound = bn / pqn
        * s_max_p
        * s_max_q
        * n as f64
        * one_d_tail
        * libm::pow(one_d_full, n as f64 - 1.0);

    let weight = Weight::new(b as f64);
    let direct_value = bilinear_direct(&weight, &vp, &vq, 2 * b as i64, n);

    Ok(BilinearReport {
        p,
        q,
        b,
        decay_exponent,
        truncation: u_rad as u64,
        t_value,
        tail_bound,
        direct_value,
    })
}

/// One row per `B`: the exact count and its normalizations by `B^{n-1}` and
/// `B^{n-1+1/(n+1)}`.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub b: u64,
    pub n_exact: u64,
    pub ratio_codim_one: f64,
    pub ratio_predicted: f64,
}

pub fn exponent_scan(
    f: &Polynomial,
    b_list: &[u64],
    rho: f64,
) -> Result<(Vec<ScanRow>, f64), SieveError> {
    assert!(b_list.windows(2).all(|w| w[0] <= w[1]), "B list must ascend");
    let n = f.nvars() as f64;
    let mut rows = Vec::new();
    for &b in b_list {
        let count = brute_count(f, b)?;
        let bf = b as f64;
        rows.push(ScanRow {
            b,
            n_exact: count,
            ratio_codim_one: count as f64 / libm::pow(bf, n - 1.0),
            ratio_predicted: count as f64 / libm::pow(bf, n - 1.0 + 1.0 / (n + 1.0)),
        });
    }
    Ok((rows, rho))
}
