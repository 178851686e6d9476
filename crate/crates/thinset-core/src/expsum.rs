//! The complete exponential sums `S(u,p) = sum_x (v_p(x)-1) e_p(u.x)`.
//!
//! Single frequencies go through an exact integer residue histogram in the
//! cyclotomic lattice `Z[zeta_p]`; the full u-spectrum is an n-dimensional
//! length-p DFT applied axis by axis (direct for small p, chirp-z above the
//! crossover). The two-prime bilinear sum `S(u,pq)` uses the product of the
//! centered counts for `p` and `q`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use serde::Serialize;

use crate::localcount::{checked_table_len, ModXEval, PointIter, TableError, VTable};
use crate::polyring::Polynomial;
use crate::primefield::{invmod, Character, PrimeCtx};

/// Crossover above which axis transforms switch from direct evaluation to
/// the chirp-z (Bluestein) route.
pub const DIRECT_DFT_MAX_P: u64 = 127;

/// Centered local counts `g(x) = v_p(x) - 1`.
pub struct GTable {
    pub p: u64,
    pub n: usize,
    data: Vec<i32>,
}

impl GTable {
    pub fn from_vtable(v: &VTable) -> GTable {
        GTable {
            p: v.p,
            n: v.n,
            data: v.data().iter().map(|&x| x as i32 - 1).collect(),
        }
    }

    pub fn from_raw(p: u64, n: usize, data: Vec<i32>) -> GTable {
        assert_eq!(data.len(), (p as usize).pow(n as u32));
        GTable { p, n, data }
    }

    pub fn data(&self) -> &[i32] {
        &self.data
    }

    pub fn get(&self, idx: usize) -> i64 {
        self.data[idx] as i64
    }

    /// `sum_x g(x) = #X(F_p) - p^n`, the zero-frequency value.
    pub fn sum(&self) -> i64 {
        self.data.iter().map(|&x| x as i64).sum()
    }

    pub fn sum_squares(&self) -> i64 {
        self.data.iter().map(|&x| (x as i64) * (x as i64)).sum()
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
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DftMethod {
    Naive,
    Chirp,
}

/// `S(u,p)` for all `u`, with the method tag and a worst-case rounding
/// estimate.
pub struct SumTable {
    pub p: u64,
    pub n: usize,
    pub method: DftMethod,
    pub max_abs_error_estimate: f64,
    data: Vec<Complex64>,
}

impl SumTable {
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, idx: usize) -> Complex64 {
        self.data[idx]
    }

    pub fn at(&self, us: &[u64]) -> Complex64 {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for &u in us {
            idx += (u % self.p) as usize * stride;
            stride *= self.p as usize;
        }
        self.data[idx]
    }
}

/// Exact representation of `S(u,p)` in the cyclotomic integer lattice:
/// `a_j = sum over x with u.x = j (mod p) of g(x)`.
pub struct ResidueHistogram {
    pub p: u64,
    pub a: Vec<i64>,
}

impl ResidueHistogram {
    pub fn build(g: &GTable, u: &[u64]) -> ResidueHistogram {
        assert_eq!(u.len(), g.n);
        let p = g.p;
        let mut a = vec![0i64; p as usize];
        for (idx, xs) in PointIter::new(p, g.n).enumerate() {
            let gv = g.get(idx);
            if gv == 0 {
                continue;
            }
            let mut j = 0u64;
            for (ui, xi) in u.iter().zip(&xs) {
                j = (j + (ui % p) * xi) % p;
            }
            a[j as usize] += gv;
        }
        ResidueHistogram { p, a }
    }

    /// Evaluate `sum_j a_j e_p(j)` in doubles.
    pub fn evaluate(&self, ctx: &PrimeCtx) -> Complex64 {
        assert_eq!(ctx.p(), self.p);
        self.a
            .iter()
            .enumerate()
            .map(|(j, &aj)| ctx.e(j as u64) * aj as f64)
            .sum()
    }

    pub fn total(&self) -> i64 {
        self.a.iter().sum()
    }
}

/// `S(u,p)` for one frequency, via the exact histogram.
pub fn sum_single(g: &GTable, u: &[u64], ctx: &PrimeCtx) -> Complex64 {
    ResidueHistogram::build(g, u).evaluate(ctx)
}

/// `S(u,p)` for all `u` by axis-by-axis length-p transforms.
pub fn full_dft(g: &GTable, ctx: &PrimeCtx, cap: u64) -> Result<SumTable, TableError> {
    assert_eq!(ctx.p(), g.p);
    let p = g.p;
    let n = g.n;
    checked_table_len(p, n, cap)?;
    let mut data: Vec<Complex64> = g
        .data
        .iter()
        .map(|&x| Complex64::new(x as f64, 0.0))
        .collect();
    let method = if p <= DIRECT_DFT_MAX_P {
        DftMethod::Naive
    } else {
        DftMethod::Chirp
    };
    let mut chirp = if method == DftMethod::Chirp {
        Some(Bluestein::new(p))
    } else {
        None
    };
    let pl = p as usize;
    let mut line = vec![Complex64::default(); pl];
    let mut scratch = vec![Complex64::default(); pl];
    for axis in 0..n {
        let stride = pl.pow(axis as u32);
        let outer = pl.pow((n - 1 - axis) as u32);
        for hi in 0..outer {
            for lo in 0..stride {
                let base = hi * stride * pl + lo;
                for t in 0..pl {
                    line[t] = data[base + t * stride];
                }
                match &mut chirp {
                    None => {
                        scratch.copy_from_slice(&line);
                        naive_dft(&scratch, ctx, &mut line);
                    }
                    Some(b) => b.transform(&mut line),
                }
                for t in 0..pl {
                    data[base + t * stride] = line[t];
                }
            }
        }
    }
    let eps = f64::EPSILON / 2.0;
    let err = eps
        * libm::pow(p as f64, n as f64 / 2.0)
        * (1.0 + libm::log2(p as f64) * n as f64);
    Ok(SumTable {
        p,
        n,
        method,
        max_abs_error_estimate: err,
        data,
    })
}

// Direct O(p^2) length-p forward transform, out[k] = sum_j in[j] e_p(jk).
fn naive_dft(input: &[Complex64], ctx: &PrimeCtx, out: &mut [Complex64]) {
    let p = input.len() as u64;
    for k in 0..p {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = 0u64;
        for j in 0..p {
            acc += input[j as usize] * ctx.e(idx);
            idx = (idx + k) % p;
        }
        out[k as usize] = acc;
    }
}

/// Chirp-z (Bluestein) length-p transform through a power-of-two FFT.
struct Bluestein {
    p: u64,
    fft_len: usize,
    /// e_{2p}(j^2) for j in [0, p)
    chirp: Vec<Complex64>,
    /// FFT of the zero-padded conjugate-chirp kernel.
    kernel_fft: Vec<Complex64>,
}

impl Bluestein {
    fn new(p: u64) -> Bluestein {
        let pl = p as usize;
        let mut fft_len = 1usize;
        while fft_len < 2 * pl - 1 {
            fft_len <<= 1;
        }
        let tau = core::f64::consts::PI / p as f64; // 2*pi / (2p)
        let chirp: Vec<Complex64> = (0..p)
            .map(|j| {
                let sq = ((j as u128 * j as u128) % (2 * p as u128)) as f64;
                Complex64::new(libm::cos(tau * sq), libm::sin(tau * sq))
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); fft_len];
        for j in 0..pl {
            let c = chirp[j].conj();
            kernel[j] = c;
            if j > 0 {
                kernel[fft_len - j] = c;
            }
        }
        fft_pow2(&mut kernel, false);
        Bluestein {
            p,
            fft_len,
            chirp,
            kernel_fft: kernel,
        }
    }

    fn transform(&mut self, line: &mut [Complex64]) {
        let pl = self.p as usize;
        let mut a = vec![Complex64::new(0.0, 0.0); self.fft_len];
        for j in 0..pl {
            a[j] = line[j] * self.chirp[j];
        }
        fft_pow2(&mut a, false);
        for (av, kv) in a.iter_mut().zip(&self.kernel_fft) {
            *av *= kv;
        }
        fft_pow2(&mut a, true);
        for k in 0..pl {
            line[k] = a[k] * self.chirp[k];
        }
    }
}

/// Iterative radix-2 FFT; `invert` includes the 1/len scale.
fn fft_pow2(data: &mut [Complex64], invert: bool) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let mut len = 2usize;
    while len <= n {
        let ang = 2.0 * core::f64::consts::PI / len as f64 * if invert { -1.0 } else { 1.0 };
        let wl = Complex64::new(libm::cos(ang), libm::sin(ang));
        let mut i = 0;
        while i < n {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = data[i + k];
                let v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wl;
            }
            i += len;
        }
        len <<= 1;
    }
    if invert {
        let s = 1.0 / n as f64;
        for d in data.iter_mut() {
            *d *= s;
        }
    }
}

/// Parseval check: `(sum_u |S(u)|^2, p^n sum_x g(x)^2, relative error)`.
pub fn parseval(g: &GTable, s: &SumTable) -> (f64, i128, f64) {
    assert_eq!((g.p, g.n), (s.p, s.n));
    let lhs: f64 = s.data.iter().map(|z| z.norm_sqr()).sum();
    let pn = (g.p as i128).pow(g.n as u32);
    let rhs = pn * g.sum_squares() as i128;
    let rel = if rhs != 0 {
        (lhs - rhs as f64).abs() / rhs as f64
    } else {
        0.0
    };
    (lhs, rhs, rel)
}

/// `sum_x chi(H(x)) e_p(u.x)` with `chi(0) = 0`.
pub fn char_sum(chi: &Character<'_>, h: &Polynomial, u: &[u64], ctx: &PrimeCtx) -> Complex64 {
    let p = ctx.p();
    let n = h.nvars();
    assert_eq!(u.len(), n);
    let eval = ModXEval::new(h, p);
    let mut acc = Complex64::new(0.0, 0.0);
    for xs in PointIter::new(p, n) {
        let hv = eval.eval(&xs);
        if hv == 0 {
            continue;
        }
        let mut j = 0u64;
        for (ui, xi) in u.iter().zip(&xs) {
            j = (j + (ui % p) * xi) % p;
        }
        acc += chi.eval(hv) * ctx.e(j);
    }
    acc
}

/// Max pointwise residual of the power-count decomposition for
/// `F = Y^d - H`: `v_p(x) = sum over chi with chi^d principal of chi(H(x))`
/// when `H(x) != 0`, and `v_p(x) = 1` when `H(x) = 0`.
pub fn cyclic_decomposition_check(
    h: &Polynomial,
    d: u64,
    ctx: &PrimeCtx,
    cap: u64,
) -> Result<f64, crate::primefield::FieldError> {
    let p = ctx.p();
    let chars = Character::order_group(ctx, d)?;
    let n = h.nvars();
    let y = Polynomial::var(n, 0);
    let f = y.pow(d as u32).sub(h);
    let v = VTable::build(&f, p, cap).expect("table within cap");
    let eval = ModXEval::new(h, p);
    let mut worst = 0.0f64;
    for (idx, xs) in PointIter::new(p, n).enumerate() {
        let hv = eval.eval(&xs);
        let predicted = if hv == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            chars.iter().map(|c| c.eval(hv)).sum()
        };
        let res = (Complex64::new(v.get(idx) as f64, 0.0) - predicted).norm();
        worst = worst.max(res);
    }
    Ok(worst)
}

/// Direct `S(u,pq)` as the bilinear centered-count sum over `(Z/pq)^n`,
/// compared with `S(qbar u, p) S(pbar u, q)` on `trials` seeded frequencies
/// (frequency 0 always included). Returns the max absolute deviation.
#[allow(clippy::too_many_arguments)]
pub fn multiplicativity_check(
    f: &Polynomial,
    p: u64,
    q: u64,
    trials: usize,
    seed: u64,
    cap: u64,
) -> Result<f64, TableError> {
    assert_ne!(p, q);
    let n = f.nvars();
    let pq = p * q;
    checked_table_len(pq, n, cap)?;
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
    // e_{pq} table
    let tau = 2.0 * core::f64::consts::PI / pq as f64;
    let roots: Vec<Complex64> = (0..pq)
        .map(|j| Complex64::new(libm::cos(tau * j as f64), libm::sin(tau * j as f64)))
        .collect();
    let mut rng = SplitMix64::new(seed);
    let mut worst = 0.0f64;
    for t in 0..trials.max(1) {
        let u: Vec<u64> = if t == 0 {
            vec![0; n]
        } else {
            (0..n).map(|_| rng.next() % pq).collect()
        };
        // direct (pq)^n-point sum
        let mut lhs = Complex64::new(0.0, 0.0);
        for xs in PointIter::new(pq, n) {
            let xp: Vec<u64> = xs.iter().map(|&x| x % p).collect();
            let xq: Vec<u64> = xs.iter().map(|&x| x % q).collect();
            let gv = gp.get(gp.index_of(&xp)) * gq.get(gq.index_of(&xq));
            if gv == 0 {
                continue;
            }
            let mut j = 0u64;
            for (ui, xi) in u.iter().zip(&xs) {
                j = (j + crate::primefield::mulmod(*ui, *xi, pq)) % pq;
            }
            lhs += roots[j as usize] * gv as f64;
        }
        let up: Vec<u64> = u.iter().map(|&ui| crate::primefield::mulmod(qbar, ui % p, p)).collect();
        let uq: Vec<u64> = u.iter().map(|&ui| crate::primefield::mulmod(pbar, ui % q, q)).collect();
        let rhs = sp.at(&up) * sq.at(&uq);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Small deterministic generator for seeded sampling.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localcount::DEFAULT_TABLE_CAP;

    fn poly(text: &str, nvars: usize) -> Polynomial {
        Polynomial::parse(text, nvars).unwrap()
    }

    fn tables(text: &str, n: usize, p: u64) -> (GTable, SumTable, PrimeCtx) {
        let f = poly(text, n);
        let v = VTable::build(&f, p, DEFAULT_TABLE_CAP).unwrap();
        let g = GTable::from_vtable(&v);
        let ctx = PrimeCtx::new(p).unwrap();
        let s = full_dft(&g, &ctx, DEFAULT_TABLE_CAP).unwrap();
        (g, s, ctx)
    }

    #[test]
    fn g_table_examples() {
        let v = VTable::build(&poly("Y^2 - X1", 1), 5, DEFAULT_TABLE_CAP).unwrap();
        let g = GTable::from_vtable(&v);
        assert_eq!(g.data(), &[0, 1, -1, -1, 1]);
        let v2 = VTable::build(&poly("Y - X1", 1), 7, DEFAULT_TABLE_CAP).unwrap();
        assert!(GTable::from_vtable(&v2).data().iter().all(|&x| x == 0));
        let v3 = VTable::build(&poly("Y^2", 1), 7, DEFAULT_TABLE_CAP).unwrap();
        assert!(GTable::from_vtable(&v3).data().iter().all(|&x| x == 0));
    }

    #[test]
    fn residue_histogram_examples() {
        let v = VTable::build(&poly("Y^2 - X1", 1), 5, DEFAULT_TABLE_CAP).unwrap();
        let g = GTable::from_vtable(&v);
        let h0 = ResidueHistogram::build(&g, &[0]);
        assert_eq!(h0.a[0], g.sum());
        assert!(h0.a[1..].iter().all(|&x| x == 0));
        let h1 = ResidueHistogram::build(&g, &[1]);
        assert_eq!(h1.a, vec![0, 1, -1, -1, 1]);
        // scaling: histogram for 2u is the j -> 2j index permutation
        let h2 = ResidueHistogram::build(&g, &[2]);
        for j in 0..5usize {
            assert_eq!(h2.a[(2 * j) % 5], h1.a[j]);
        }
    }

    #[test]
    fn sum_single_gauss() {
        let (g, _, ctx) = tables("Y^2 - X1", 1, 5);
        assert!(sum_single(&g, &[0], &ctx).norm() < 1e-12);
        for u in 1..5u64 {
            let s = sum_single(&g, &[u], &ctx);
            assert!((s.norm() - libm::sqrt(5.0)).abs() < 1e-9, "u={u}");
        }
        let (g2, _, ctx2) = tables("Y - X1", 1, 7);
        for u in 0..7u64 {
            assert!(sum_single(&g2, &[u], &ctx2).norm() < 1e-12);
        }
    }

    #[test]
    fn full_dft_matches_direct() {
        // zero table
        let g0 = GTable::from_raw(5, 1, vec![0; 5]);
        let ctx5 = PrimeCtx::new(5).unwrap();
        let s0 = full_dft(&g0, &ctx5, DEFAULT_TABLE_CAP).unwrap();
        assert!(s0.data().iter().all(|z| z.norm() < 1e-15));

        // delta at x = 0 transforms to the constant 1
        let mut delta = vec![0i32; 25];
        delta[0] = 1;
        let gd = GTable::from_raw(5, 2, delta);
        let sd = full_dft(&gd, &ctx5, DEFAULT_TABLE_CAP).unwrap();
        assert!(sd
            .data()
            .iter()
            .all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12));

        // F = Y^2 - X1*X2, p = 7: all 49 entries against the direct loop
        let (g, s, ctx) = tables("Y^2 - X1*X2", 2, 7);
        for (idx, us) in PointIter::new(7, 2).enumerate() {
            let direct = sum_single(&g, &us, &ctx);
            assert!((s.get(idx) - direct).norm() < 1e-9, "u={us:?}");
        }
    }

    #[test]
    fn bluestein_matches_naive() {
        // synthetic line data at a prime above the direct crossover path:
        // compare Bluestein against the O(p^2) sum at p = 131 and 149
        for p in [131u64, 149] {
            let ctx = PrimeCtx::new(p).unwrap();
            let mut rng = SplitMix64::new(p);
            let data: Vec<i32> = (0..p).map(|_| (rng.next() % 7) as i32 - 3).collect();
            let g = GTable::from_raw(p, 1, data);
            let s = full_dft(&g, &ctx, DEFAULT_TABLE_CAP).unwrap();
            assert_eq!(s.method, DftMethod::Chirp);
            for u in [0u64, 1, 2, p / 2, p - 1] {
                let direct = sum_single(&g, &[u], &ctx);
                assert!(
                    (s.at(&[u]) - direct).norm() < 1e-6 * libm::sqrt(p as f64),
                    "p={p} u={u}"
                );
            }
        }
    }

    #[test]
    fn parseval_examples() {
        let g0 = GTable::from_raw(5, 1, vec![0; 5]);
        let ctx5 = PrimeCtx::new(5).unwrap();
        let s0 = full_dft(&g0, &ctx5, DEFAULT_TABLE_CAP).unwrap();
        let (lhs, rhs, rel) = parseval(&g0, &s0);
        assert_eq!(rhs, 0);
        assert!(lhs < 1e-12 && rel == 0.0);

        let (g, s, _) = tables("Y^2 - X1", 1, 5);
        let (_, rhs, rel) = parseval(&g, &s);
        assert_eq!(rhs, 20);
        assert!(rel <= 1e-6);

        let (g2, s2, _) = tables("Y^2 - X1", 2, 5);
        let (_, rhs2, rel2) = parseval(&g2, &s2);
        assert_eq!(rhs2, 500);
        assert!(rel2 <= 1e-6);
    }

    #[test]
    fn conjugate_symmetry() {
        let (_, s, _) = tables("Y^3 + X1*Y + X2", 2, 11);
        let p = 11u64;
        for (idx, us) in PointIter::new(p, 2).enumerate() {
            let neg: Vec<u64> = us.iter().map(|&u| (p - u) % p).collect();
            let other = s.at(&neg);
            assert!((s.get(idx).conj() - other).norm() < 1e-9);
        }
    }

    #[test]
    fn char_sum_examples() {
        let ctx = PrimeCtx::new(5).unwrap();
        let chars = Character::order_group(&ctx, 2).unwrap();
        let h = poly("X1", 1);
        // principal chi at u=0 counts nonvanishing points
        let s0 = char_sum(&chars[0], &h, &[0], &ctx);
        assert!((s0 - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        // Legendre, u=0: orthogonality
        assert!(char_sum(&chars[1], &h, &[0], &ctx).norm() < 1e-12);
        // Legendre, u=1: Gauss sum
        let s1 = char_sum(&chars[1], &h, &[1], &ctx);
        assert!((s1.norm() - libm::sqrt(5.0)).abs() < 1e-9);
    }

    #[test]
    fn cyclic_decomposition_examples() {
        let ctx5 = PrimeCtx::new(5).unwrap();
        let r = cyclic_decomposition_check(&poly("X1", 1), 2, &ctx5, DEFAULT_TABLE_CAP).unwrap();
        assert!(r <= 1e-9);
        let ctx7 = PrimeCtx::new(7).unwrap();
        let r2 = cyclic_decomposition_check(&poly("X1", 1), 3, &ctx7, DEFAULT_TABLE_CAP).unwrap();
        assert!(r2 <= 1e-9);
        // H = 1: v = 2 for Y^2 - 1 and 1 + chi(1) = 2
        let one = Polynomial::one(1);
        let r3 = cyclic_decomposition_check(&one, 2, &ctx7, DEFAULT_TABLE_CAP).unwrap();
        assert!(r3 <= 1e-9);
    }

    #[test]
    fn multiplicativity_examples() {
        let f = poly("Y^2 - X1", 1);
        let dev = multiplicativity_check(&f, 3, 5, 20, 42, DEFAULT_TABLE_CAP).unwrap();
        assert!(dev <= 1e-9, "dev = {dev}");
        let f2 = poly("Y^2 - X1*X2", 2);
        let dev2 = multiplicativity_check(&f2, 3, 5, 10, 43, DEFAULT_TABLE_CAP).unwrap();
        assert!(dev2 <= 1e-6 * 15.0, "dev2 = {dev2}");
    }

    #[test]
    fn homogeneity_census_invariance() {
        // multiset of |S(alpha u, p)| equals |S(u, p)| for alpha != 0
        let (_, s, _) = tables("Y^2 - X1*X2", 2, 7);
        let p = 7u64;
        let mut base: Vec<u64> = s
            .data()
            .iter()
            .map(|z| (z.norm() * 1e6) as u64)
            .collect();
        base.sort_unstable();
        for alpha in 2..p {
            let mut scaled: Vec<u64> = PointIter::new(p, 2)
                .map(|us| {
                    let au: Vec<u64> = us.iter().map(|&u| (alpha * u) % p).collect();
                    (s.at(&au).norm() * 1e6) as u64
                })
                .collect();
            scaled.sort_unstable();
            assert_eq!(base, scaled, "alpha={alpha}");
        }
    }
}
