//! Empirical consumption of the stratification and second-moment theory:
//! tier censuses of `|S(u,p)|`, exact hyperplane second moments computed two
//! independent ways, discriminant / d-th-power censuses, and hyperplane
//! transport under integer linear maps.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::Serialize;

use crate::expsum::{GTable, SumTable};
use crate::localcount::{CensusReport, ModXEval, PointIter};
use crate::polyring::{resultant, Polynomial};
use crate::primefield::{Character, PrimeCtx, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrataError {
    ZeroNormal { p: u64 },
    ScanTooLarge { hyperplanes: u64, cap: u64 },
    DegenerateInX1,
    /// The discriminant vanishes identically mod p; the prime is exceptional.
    DiscriminantVanishes { p: u64 },
    SingularModP { p: u64 },
    MissingTransport,
}

impl fmt::Display for StrataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrataError::ZeroNormal { p } => write!(f, "normal vector vanishes mod {p}"),
            StrataError::ScanTooLarge { hyperplanes, cap } => {
                write!(f, "scan over {hyperplanes} hyperplanes exceeds cap {cap}")
            }
            StrataError::DegenerateInX1 => write!(f, "polynomial has X1-degree 0"),
            StrataError::DiscriminantVanishes { p } => {
                write!(f, "discriminant vanishes identically mod {p}; prime is exceptional")
            }
            StrataError::SingularModP { p } => write!(f, "transport matrix is singular mod {p}"),
            StrataError::MissingTransport => write!(f, "hyperplane carries no transport matrix"),
        }
    }
}

impl core::error::Error for StrataError {}

/// Tier counts `N_j = #{u : |S(u,p)| > C p^{(n+j-1)/2}}` for `j = 0..n`.
/// Strict inequality: boundary values fall in the lower tier.
#[derive(Clone, Debug, Serialize)]
pub struct StrataCensus {
    pub p: u64,
    pub n: usize,
    pub c: f64,
    pub counts: Vec<u64>,
    /// `r_j = N_j p^j / p^n`.
    pub ratios: Vec<f64>,
}

pub fn tier_census(s: &SumTable, c: f64) -> StrataCensus {
    assert!(c > 0.0);
    let p = s.p;
    let n = s.n;
    let thresholds: Vec<f64> = (0..=n)
        .map(|j| c * libm::pow(p as f64, (n as f64 + j as f64 - 1.0) / 2.0))
        .collect();
    let mut counts = vec![0u64; n + 1];
    for z in s.data() {
        let m = z.norm();
        for (j, &t) in thresholds.iter().enumerate() {
            if m > t {
                counts[j] += 1;
            }
        }
    }
    let pn = libm::pow(p as f64, n as f64);
    let ratios: Vec<f64> = counts
        .iter()
        .enumerate()
        .map(|(j, &nj)| nj as f64 * libm::pow(p as f64, j as f64) / pn)
        .collect();
    StrataCensus {
        p,
        n,
        c,
        counts,
        ratios,
    }
}

/// A hyperplane `{u : w.u = 0 mod p}`, optionally carrying an integer
/// transport matrix `L` whose first column is `w`.
#[derive(Clone, Debug, Serialize)]
pub struct Hyperplane {
    pub w: Vec<i64>,
    pub transport: Option<Vec<Vec<i64>>>,
    pub verified: bool,
}

impl Hyperplane {
    pub fn new(w: Vec<i64>) -> Hyperplane {
        Hyperplane {
            w,
            transport: None,
            verified: false,
        }
    }

    pub fn with_transport(w: Vec<i64>, l: Vec<Vec<i64>>) -> Hyperplane {
        Hyperplane {
            w,
            transport: Some(l),
            verified: false,
        }
    }

    fn w_mod(&self, p: u64) -> Vec<u64> {
        self.w
            .iter()
            .map(|&x| x.rem_euclid(p as i64) as u64)
            .collect()
    }
}

/// Second moment over a hyperplane, computed spectrally and as an exact
/// autocorrelation integer.
#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub p: u64,
    pub w: Vec<i64>,
    /// `sum over u in the hyperplane of |S(u,p)|^2` from the SumTable.
    pub moment: f64,
    /// `p^{n-1} sum_x sum_t g(x) g(x + t w)`, exact.
    pub exact_integer: i128,
    /// `moment / p^{2n-1}`.
    pub ratio: f64,
    pub exceptional: bool,
}

pub fn hyperplane_moment(
    g: &GTable,
    s: &SumTable,
    h: &Hyperplane,
) -> Result<MomentReport, StrataError> {
    assert_eq!((g.p, g.n), (s.p, s.n));
    let p = g.p;
    let n = g.n;
    let w = h.w_mod(p);
    if w.iter().all(|&x| x == 0) {
        return Err(StrataError::ZeroNormal { p });
    }
    // spectral side
    let mut moment = 0.0f64;
    for (idx, us) in PointIter::new(p, n).enumerate() {
        let dot = w
            .iter()
            .zip(&us)
            .fold(0u64, |acc, (&wi, &ui)| (acc + wi * ui) % p);
        if dot == 0 {
            moment += s.get(idx).norm_sqr();
        }
    }
    // autocorrelation side, exact in integers
    let mut auto_sum = 0i128;
    for (idx, xs) in PointIter::new(p, n).enumerate() {
        let gx = g.get(idx);
        if gx == 0 {
            continue;
        }
        for t in 0..p {
            let shifted: Vec<u64> = xs
                .iter()
                .zip(&w)
                .map(|(&xi, &wi)| (xi + t * wi) % p)
                .collect();
            auto_sum += gx as i128 * g.get(g.index_of(&shifted)) as i128;
        }
    }
    let exact_integer = (p as i128).pow(n as u32 - 1) * auto_sum;
    let ratio = moment / libm::pow(p as f64, 2.0 * n as f64 - 1.0);
    Ok(MomentReport {
        p,
        w: h.w.clone(),
        moment,
        exact_integer,
        ratio,
        exceptional: false,
    })
}

/// One moment report per `w` in `P^{n-1}(F_p)` (first nonzero coordinate
/// normalized to 1), sorted by ratio descending.
pub fn all_hyperplanes_scan(
    g: &GTable,
    s: &SumTable,
    scan_cap: u64,
) -> Result<Vec<MomentReport>, StrataError> {
    let p = g.p;
    let n = g.n;
    let mut total = 0u64;
    for k in 0..n {
        total += (p as u64).pow(k as u32);
    }
    if total > scan_cap {
        return Err(StrataError::ScanTooLarge {
            hyperplanes: total,
            cap: scan_cap,
        });
    }
    let mut reports = Vec::with_capacity(total as usize);
    // representatives: w = (0,...,0,1,free coords)
    for lead in 0..n {
        let free = n - lead - 1;
        for tail in PointIter::new(p, free) {
            let mut w = vec![0i64; n];
            w[lead] = 1;
            for (i, &t) in tail.iter().enumerate() {
                w[lead + 1 + i] = t as i64;
            }
            reports.push(hyperplane_moment(g, s, &Hyperplane::new(w))?);
        }
    }
    reports.sort_by(|a, b| b.ratio.partial_cmp(&a.ratio).unwrap());
    Ok(reports)
}

/// Discriminant of `h` with respect to `X1`: `Res_{X1}(h, dh/dX1)`, without
/// division by the leading coefficient.
pub fn discriminant_x1(h: &Polynomial) -> Result<Polynomial, StrataError> {
    if h.degree_in(1).unwrap_or(0) == 0 {
        return Err(StrataError::DegenerateInX1);
    }
    Ok(resultant(h, &h.derivative(1), 1))
}

/// Censuses of Prop-style dichotomy data: census A counts `t` with
/// `H(X1, t)` a d-th power over `F_p` (bounded by census B), census B
/// counts `t` with `Delta(t) = 0 mod p` (Schwartz-Zippel bound).
#[derive(Clone, Debug, Serialize)]
pub struct DichotomyCensus {
    pub power_census: CensusReport,
    pub discriminant_census: CensusReport,
    pub delta_degree: u64,
}

pub fn cyclic_dichotomy_census(
    h: &Polynomial,
    d: u64,
    ctx: &PrimeCtx,
) -> Result<DichotomyCensus, StrataError> {
    let p = ctx.p();
    let n = h.nvars();
    let delta = discriminant_x1(h)?;
    let (delta_red, _) = delta.reduce_mod(p);
    if delta_red.is_zero() {
        return Err(StrataError::DiscriminantVanishes { p });
    }
    let delta_deg = delta.total_degree().unwrap_or(0);
    let delta_eval = ModXEval::new(&delta, p);

    // coefficient polynomials of h in X1, each evaluated per t
    let coeff_evals: Vec<ModXEval> = h
        .coeffs_in(1)
        .iter()
        .map(|c| ModXEval::new(c, p))
        .collect();

    let mut census_a = 0u64;
    let mut census_b = 0u64;
    for t in PointIter::new(p, n - 1) {
        // assemble the full coordinate vector with X1 = 0 slot unused by
        // delta and by the X1-coefficients
        let mut xs = vec![0u64; n];
        xs[1..].copy_from_slice(&t);
        if delta_eval.eval(&xs) == 0 {
            census_b += 1;
        }
        let coeffs: Vec<u64> = coeff_evals.iter().map(|e| e.eval(&xs)).collect();
        let spec = UniPoly::new(p, &coeffs);
        let is_power = if spec.is_zero() {
            true
        } else {
            spec.is_dth_power(d).expect("d < p since d | p-1")
        };
        if is_power {
            census_a += 1;
        }
    }
    let b_bound = delta_deg as f64 * libm::pow(p as f64, n as f64 - 2.0);
    Ok(DichotomyCensus {
        power_census: CensusReport::new(
            alloc::format!("t with H(X1,t) a {d}-th power over F_{p}"),
            census_a,
            census_b as f64,
        ),
        discriminant_census: CensusReport::new(
            alloc::format!("t with Delta(t) = 0 mod {p}"),
            census_b,
            b_bound,
        ),
        delta_degree: delta_deg,
    })
}

/// Max over `t` with `Delta(t) != 0` of `|sum_x chi(H(x,t))| / sqrt(p)`.
/// The Weil bound caps this by `deg_{X1} H - 1` for squarefree
/// specializations.
pub fn weil_census(
    h: &Polynomial,
    chi: &Character<'_>,
    ctx: &PrimeCtx,
) -> Result<f64, StrataError> {
    let p = ctx.p();
    let n = h.nvars();
    let delta = discriminant_x1(h)?;
    let (delta_red, _) = delta.reduce_mod(p);
    if delta_red.is_zero() {
        return Err(StrataError::DiscriminantVanishes { p });
    }
    let delta_eval = ModXEval::new(&delta, p);
    let coeff_evals: Vec<ModXEval> = h
        .coeffs_in(1)
        .iter()
        .map(|c| ModXEval::new(c, p))
        .collect();
    let sqrt_p = libm::sqrt(p as f64);
    let mut worst = 0.0f64;
    for t in PointIter::new(p, n - 1) {
        let mut xs = vec![0u64; n];
        xs[1..].copy_from_slice(&t);
        if delta_eval.eval(&xs) != 0 {
            let coeffs: Vec<u64> = coeff_evals.iter().map(|e| e.eval(&xs)).collect();
            let spec = UniPoly::new(p, &coeffs);
            let sum: num_complex::Complex64 = (0..p).map(|x| chi.eval(spec.eval(x))).sum();
            worst = worst.max(sum.norm() / sqrt_p);
        }
    }
    Ok(worst)
}

/// Verify the transport identity `{u : (L^T u)_1 = 0} = {u : w.u = 0}` mod p
/// and return the hyperplane annotated as verified. Exhaustive for
/// `p <= 13`, rank argument otherwise.
pub fn transport(h: &Hyperplane, p: u64) -> Result<Hyperplane, StrataError> {
    let l = h.transport.as_ref().ok_or(StrataError::MissingTransport)?;
    let n = h.w.len();
    assert!(l.len() == n && l.iter().all(|row| row.len() == n));
    if det_mod(l, p) == 0 {
        return Err(StrataError::SingularModP { p });
    }
    let w = h.w_mod(p);
    // first column of L must agree with w mod p, which makes
    // (L^T u)_1 = sum_i L[i][0] u_i = w.u identically.
    let first_col_matches = (0..n).all(|i| l[i][0].rem_euclid(p as i64) as u64 == w[i]);
    if p <= 13 {
        for us in PointIter::new(p, n) {
            let lt1 = (0..n).fold(0u64, |acc, i| {
                (acc + l[i][0].rem_euclid(p as i64) as u64 * us[i]) % p
            });
            let wd = w
                .iter()
                .zip(&us)
                .fold(0u64, |acc, (&wi, &ui)| (acc + wi * ui) % p);
            if (lt1 == 0) != (wd == 0) {
                return Err(StrataError::ZeroNormal { p });
            }
        }
    } else if !first_col_matches {
        return Err(StrataError::ZeroNormal { p });
    }
    let mut out = h.clone();
    out.verified = true;
    Ok(out)
}

fn det_mod(l: &[Vec<i64>], p: u64) -> u64 {
    let n = l.len();
    let mut m: Vec<Vec<u64>> = l
        .iter()
        .map(|row| row.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    let mut det = 1u64;
    for k in 0..n {
        let pivot = (k..n).find(|&r| m[r][k] != 0);
        let pr = match pivot {
            Some(pr) => pr,
            None => return 0,
        };
        if pr != k {
            m.swap(k, pr);
            det = (p - det) % p;
        }
        det = crate::primefield::mulmod(det, m[k][k], p);
        let inv = crate::primefield::invmod(m[k][k], p);
        for r in k + 1..n {
            if m[r][k] == 0 {
                continue;
            }
            let factor = crate::primefield::mulmod(m[r][k], inv, p);
            for c in k..n {
                let t = crate::primefield::mulmod(factor, m[k][c], p);
                m[r][c] = (m[r][c] + p - t) % p;
            }
        }
    }
    det
}

/// Exceptional-prime proxy: the reduction's total degree drops, or `p`
/// divides a pilot discriminant value. Mirrors the excluded sets the sieve
/// uses; recorded on reports.
pub fn exceptional_flag(f: &Polynomial, p: u64) -> bool {
    let (_, dropped) = f.reduce_mod(p);
    if dropped {
        return true;
    }
    match crate::sieve::pilot_discriminant(f) {
        Some(value) => {
            use num_integer::Integer;
            use num_traits::Zero;
            value.mod_floor(&num_bigint::BigInt::from(p)).is_zero()
        }
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::full_dft;
    use crate::localcount::{VTable, DEFAULT_TABLE_CAP};

    fn poly(text: &str, nvars: usize) -> Polynomial {
        Polynomial::parse(text, nvars).unwrap()
    }

    fn tables(text: &str, n: usize, p: u64) -> (GTable, SumTable) {
        let f = poly(text, n);
        let v = VTable::build(&f, p, DEFAULT_TABLE_CAP).unwrap();
        let g = GTable::from_vtable(&v);
        let ctx = PrimeCtx::new(p).unwrap();
        let s = full_dft(&g, &ctx, DEFAULT_TABLE_CAP).unwrap();
        (g, s)
    }

    #[test]
    fn tier_census_zero_table() {
        let g = GTable::from_raw(5, 1, vec![0; 5]);
        let ctx = PrimeCtx::new(5).unwrap();
        let s = full_dft(&g, &ctx, DEFAULT_TABLE_CAP).unwrap();
        let c = tier_census(&s, 1.0);
        assert!(c.counts.iter().all(|&x| x == 0));
    }

    #[test]
    fn tier_census_gauss() {
        // F = Y^2 - X1, n=1, p=5, C=1: N_0 = 4 (|S| = sqrt(5) > 1 for u != 0),
        // N_1 = 0 (sqrt(5) is on the boundary; strict inequality)
        let (_, s) = tables("Y^2 - X1", 1, 5);
        let c = tier_census(&s, 1.0);
        assert_eq!(c.counts, vec![4, 0]);
        // monotone
        for j in 1..c.counts.len() {
            assert!(c.counts[j] <= c.counts[j - 1]);
        }
    }

    #[test]
    fn hyperplane_moment_matches_spectral() {
        // zero table
        let g0 = GTable::from_raw(5, 2, vec![0; 25]);
        let ctx = PrimeCtx::new(5).unwrap();
        let s0 = full_dft(&g0, &ctx, DEFAULT_TABLE_CAP).unwrap();
        let r0 = hyperplane_moment(&g0, &s0, &Hyperplane::new(vec![0, 1])).unwrap();
        assert_eq!(r0.exact_integer, 0);
        assert!(r0.moment < 1e-9);

        // F = Y^2 - X1, n=2, w=(0,1): g depends only on x1, spectral mass
        // p^2 sum g1^2 on the u2=0 line gives 500 at p=5
        let (g, s) = tables("Y^2 - X1", 2, 5);
        let r = hyperplane_moment(&g, &s, &Hyperplane::new(vec![0, 1])).unwrap();
        assert_eq!(r.exact_integer, 500);
        assert!((r.moment - 500.0).abs() < 1e-6 * 500.0);

        // all w, several fixtures and primes: the module's central identity
        for (text, n) in [("Y^2 - X1*X2", 2), ("Y^3 + X1*Y + X2", 2)] {
            for p in [3u64, 5, 7, 11, 13] {
                let (g, s) = tables(text, n, p);
                for rep in all_hyperplanes_scan(&g, &s, 10_000).unwrap() {
                    let e = rep.exact_integer as f64;
                    assert!(
                        (rep.moment - e).abs() <= 1e-6 * e.abs().max(1.0),
                        "{text} p={p} w={:?}",
                        rep.w
                    );
                }
            }
        }
    }

    #[test]
    fn zero_normal_rejected() {
        let (g, s) = tables("Y^2 - X1", 2, 5);
        assert!(matches!(
            hyperplane_moment(&g, &s, &Hyperplane::new(vec![5, 10])),
            Err(StrataError::ZeroNormal { .. })
        ));
    }

    #[test]
    fn scan_finds_worst_direction() {
        let (g, s) = tables("Y^2 - X1", 2, 5);
        let reports = all_hyperplanes_scan(&g, &s, 100).unwrap();
        assert_eq!(reports.len(), 6);
        // maximal ratio at w = (0,1)
        let top = &reports[0];
        assert_eq!(top.w, vec![0, 1]);
        // symmetric fixture: w=(1,0) and w=(0,1) tie
        let (g2, s2) = tables("Y^2 - X1 - X2", 2, 5);
        let reps = all_hyperplanes_scan(&g2, &s2, 100).unwrap();
        let find = |w: &[i64]| {
            reps.iter()
                .find(|r| r.w == w)
                .map(|r| r.ratio)
                .unwrap()
        };
        assert!((find(&[1, 0]) - find(&[0, 1])).abs() < 1e-9);
    }

    #[test]
    fn dichotomy_census_examples() {
        // H = X1: Delta is a nonzero constant, both censuses empty
        let ctx5 = PrimeCtx::new(5).unwrap();
        let c = cyclic_dichotomy_census(&poly("X1", 2), 2, &ctx5).unwrap();
        assert_eq!(c.discriminant_census.count, 0);
        assert_eq!(c.power_census.count, 0);

        // H = X1^2*X2 has identically vanishing X1-discriminant (double
        // root at 0), so the census flags the prime as exceptional; the
        // d-th-power sweep itself still sees t in {0, 1, 4}
        assert!(matches!(
            cyclic_dichotomy_census(&poly("X1^2*X2", 2), 2, &ctx5),
            Err(StrataError::DiscriminantVanishes { .. })
        ));
        let squares = (0..5u64)
            .filter(|&t| {
                let spec = UniPoly::new(5, &[0, 0, t]);
                spec.is_zero() || spec.is_dth_power(2).unwrap()
            })
            .count();
        assert_eq!(squares, 3);

        // H = X1^3 + X2, d=3, p=7: B bounded by deg(Delta)
        let ctx7 = PrimeCtx::new(7).unwrap();
        let c3 = cyclic_dichotomy_census(&poly("X1^3 + X2", 2), 3, &ctx7).unwrap();
        assert!(c3.discriminant_census.passed);
        assert!((c3.discriminant_census.count as f64) <= c3.delta_degree as f64);
    }

    #[test]
    fn dichotomy_rejects_degenerate() {
        let ctx5 = PrimeCtx::new(5).unwrap();
        assert!(matches!(
            cyclic_dichotomy_census(&poly("X2", 2), 2, &ctx5),
            Err(StrataError::DegenerateInX1)
        ));
    }

    #[test]
    fn weil_census_examples() {
        // H = X1, d=2: plain orthogonality, the sum vanishes and the
        // bound deg_{X1}H - 1 = 0 is met exactly
        let ctx5 = PrimeCtx::new(5).unwrap();
        let chars = Character::order_group(&ctx5, 2).unwrap();
        let r = weil_census(&poly("X1", 1), &chars[1], &ctx5).unwrap();
        assert!(r.abs() < 1e-9);

        // H = X1^2 + 1, d=2, p=13
        let ctx13 = PrimeCtx::new(13).unwrap();
        let chars13 = Character::order_group(&ctx13, 2).unwrap();
        let r2 = weil_census(&poly("X1^2 + 1", 1), &chars13[1], &ctx13).unwrap();
        assert!(r2 <= 1.0 + 1e-6, "r2 = {r2}");

        // H = X1^3 + X2, d=2, p=11: bound deg-1 = 2
        let ctx11 = PrimeCtx::new(11).unwrap();
        let chars11 = Character::order_group(&ctx11, 2).unwrap();
        let r3 = weil_census(&poly("X1^3 + X2", 2), &chars11[1], &ctx11).unwrap();
        assert!(r3 <= 2.0 + 1e-6, "r3 = {r3}");
    }

    #[test]
    fn transport_examples() {
        // identity transport
        let h = Hyperplane::with_transport(vec![1, 0], vec![vec![1, 0], vec![0, 1]]);
        assert!(transport(&h, 7).unwrap().verified);

        // w = (1,1), L = [[1,0],[1,1]] at p = 5 by the 25-point check
        let h2 = Hyperplane::with_transport(vec![1, 1], vec![vec![1, 0], vec![1, 1]]);
        assert!(transport(&h2, 5).unwrap().verified);

        // det = p is singular mod p
        let h3 = Hyperplane::with_transport(vec![5, 0], vec![vec![5, 0], vec![0, 1]]);
        assert!(matches!(
            transport(&h3, 5),
            Err(StrataError::SingularModP { .. })
        ));
    }
}
