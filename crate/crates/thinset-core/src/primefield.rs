//! Prime-field contexts and univariate polynomial algebra over `F_p`.
//!
//! A [`PrimeCtx`] fixes a primitive root, a discrete-log table, the complex
//! roots of unity `e_p(j)` and modular inverses for one prime `p`.
//! [`UniPoly`] carries gcds, squarefree decomposition, root counting and
//! resultants; [`Character`] the multiplicative characters of order `d`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

pub const MAX_PRIME: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    PrimeTooLarge(u64),
    ZeroPolynomial,
    /// `p | d`: the squarefree method is unsound in characteristic `p`.
    BadCharacteristic { p: u64, d: u64 },
    OrderNotDividing { d: u64, p: u64 },
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::PrimeTooLarge(p) => write!(f, "prime {p} exceeds the supported bound {MAX_PRIME}"),
            FieldError::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            FieldError::BadCharacteristic { p, d } => {
                write!(f, "characteristic {p} divides d={d}")
            }
            FieldError::OrderNotDividing { d, p } => {
                write!(f, "order {d} does not divide p-1 for p={p}")
            }
        }
    }
}

impl core::error::Error for FieldError {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

pub fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Fixed data for one prime: primitive root, discrete logs, roots of unity,
/// modular inverses.
pub struct PrimeCtx {
    p: u64,
    g: u64,
    /// `dlog[g^a mod p] = a`; `dlog[0]` is unused.
    dlog: Vec<u32>,
    /// `e_p(j) = exp(2 pi i j / p)`.
    roots: Vec<Complex64>,
    inv: Vec<u64>,
}

impl PrimeCtx {
    pub fn new(p: u64) -> Result<PrimeCtx, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(FieldError::PrimeTooLarge(p));
        }
        let g = primitive_root(p);
        let mut dlog = vec![0u32; p as usize];
        let mut acc = 1u64;
        for a in 0..p - 1 {
            dlog[acc as usize] = a as u32;
            acc = mulmod(acc, g, p);
        }
        let tau = 2.0 * core::f64::consts::PI / p as f64;
        let roots: Vec<Complex64> = (0..p)
            .map(|j| {
                let t = tau * j as f64;
                Complex64::new(libm::cos(t), libm::sin(t))
            })
            .collect();
        let mut inv = vec![0u64; p as usize];
        for x in 1..p {
            inv[x as usize] = invmod(x, p);
        }
        Ok(PrimeCtx { p, g, dlog, roots, inv })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Discrete log base `g`; panics on 0.
    pub fn dlog(&self, x: u64) -> u64 {
        let r = x % self.p;
        assert!(r != 0, "dlog of zero");
        self.dlog[r as usize] as u64
    }

    /// `e_p(j) = exp(2 pi i j / p)`.
    pub fn e(&self, j: u64) -> Complex64 {
        self.roots[(j % self.p) as usize]
    }

    pub fn e_signed(&self, j: i64) -> Complex64 {
        let p = self.p as i64;
        self.roots[j.rem_euclid(p) as usize]
    }

    pub fn inv(&self, x: u64) -> u64 {
        let r = x % self.p;
        assert!(r != 0, "inverse of zero");
        self.inv[r as usize]
    }
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    'cand: for g in 2..p {
        for &q in &factors {
            if powmod(g, (p - 1) / q, p) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

/// Multiplicative character of `F_p^x` of order dividing `d`, with
/// `chi(0) = 0`.
pub struct Character<'a> {
    ctx: &'a PrimeCtx,
    d: u64,
    k: u64,
    /// d-th roots of unity.
    unit_roots: Vec<Complex64>,
}

impl<'a> Character<'a> {
    pub fn order_group(ctx: &'a PrimeCtx, d: u64) -> Result<Vec<Character<'a>>, FieldError> {
        if d == 0 || (ctx.p() - 1) % d != 0 {
            return Err(FieldError::OrderNotDividing { d, p: ctx.p() });
        }
        let tau = 2.0 * core::f64::consts::PI / d as f64;
        let unit_roots: Vec<Complex64> = (0..d)
            .map(|j| {
                let t = tau * j as f64;
                Complex64::new(libm::cos(t), libm::sin(t))
            })
            .collect();
        Ok((0..d)
            .map(|k| Character {
                ctx,
                d,
                k,
                unit_roots: unit_roots.clone(),
            })
            .collect())
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn index(&self) -> u64 {
        self.k
    }

    pub fn is_principal(&self) -> bool {
        self.k == 0
    }

    pub fn eval(&self, x: u64) -> Complex64 {
        let r = x % self.ctx.p();
        if r == 0 {
            return Complex64::new(0.0, 0.0);
        }
        // chi(g^a) = exp(2 pi i k a / d); the exponent is reduced using
        // d | p - 1 so k * (a mod (p-1)) mod d is well defined via
        // a mod d' with d' = d works since a is defined mod p-1 and d | p-1.
        let a = self.ctx.dlog(r);
        let idx = (self.k % self.d) as u128 * (a % self.d) as u128 % self.d as u128;
        self.unit_roots[idx as usize]
    }
}

/// Univariate polynomial over `F_p`, ascending coefficients, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    p: u64,
    c: Vec<u64>,
}

impl UniPoly {
    pub fn new(p: u64, coeffs: &[u64]) -> UniPoly {
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        UniPoly { p, c }
    }

    pub fn new_signed(p: u64, coeffs: &[i64]) -> UniPoly {
        let cs: Vec<u64> = coeffs
            .iter()
            .map(|&x| x.rem_euclid(p as i64) as u64)
            .collect();
        UniPoly::new(p, &cs)
    }

    pub fn zero(p: u64) -> UniPoly {
        UniPoly { p, c: vec![] }
    }

    pub fn one(p: u64) -> UniPoly {
        UniPoly::new(p, &[1])
    }

    pub fn x(p: u64) -> UniPoly {
        UniPoly::new(p, &[0, 1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn leading(&self) -> u64 {
        *self.c.last().expect("leading coefficient of zero polynomial")
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for &ci in self.c.iter().rev() {
            acc = (mulmod(acc, x % p, p) + ci) % p;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let p = self.p;
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0u64; n];
        for i in 0..n {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            c[i] = (a + b) % p;
        }
        UniPoly::new(p, &c)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let p = self.p;
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0u64; n];
        for i in 0..n {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            c[i] = (a + p - b) % p;
        }
        UniPoly::new(p, &c)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.p);
        }
        let p = self.p;
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(a, b, p)) % p;
            }
        }
        UniPoly::new(p, &c)
    }

    pub fn scale(&self, s: u64) -> UniPoly {
        let p = self.p;
        let c: Vec<u64> = self.c.iter().map(|&x| mulmod(x, s % p, p)).collect();
        UniPoly::new(p, &c)
    }

    /// Quotient and remainder; panics if `d` is zero.
    pub fn divmod(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.c.len() < d.c.len() {
            return (UniPoly::zero(p), self.clone());
        }
        let lead_inv = invmod(d.leading(), p);
        let mut rem = self.c.clone();
        let mut quot = vec![0u64; self.c.len() - d.c.len() + 1];
        for i in (0..quot.len()).rev() {
            let coef = mulmod(rem[i + d.c.len() - 1], lead_inv, p);
            quot[i] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &dc) in d.c.iter().enumerate() {
                let t = mulmod(coef, dc, p);
                rem[i + j] = (rem[i + j] + p - t) % p;
            }
        }
        (UniPoly::new(p, &quot), UniPoly::new(p, &rem))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divmod(d).1
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact(&self, d: &UniPoly) -> UniPoly {
        let (q, r) = self.divmod(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.leading(), self.p))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        if self.c.len() <= 1 {
            return UniPoly::zero(self.p);
        }
        let p = self.p;
        let c: Vec<u64> = (1..self.c.len())
            .map(|i| mulmod(self.c[i], i as u64 % p, p))
            .collect();
        UniPoly::new(p, &c)
    }

    /// `x^e mod self` by square-and-multiply.
    pub fn pow_x_mod(&self, mut e: u64) -> UniPoly {
        let p = self.p;
        assert!(self.degree().map(|d| d >= 1).unwrap_or(false));
        let mut base = UniPoly::x(p).rem(self);
        let mut acc = UniPoly::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(self);
            }
            base = base.mul(&base).rem(self);
            e >>= 1;
        }
        acc
    }

    /// Number of distinct roots in `F_p`, via `deg gcd(g, x^p - x)`.
    pub fn count_roots(&self) -> Result<usize, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(0);
        }
        let xp = self.pow_x_mod(self.p);
        let frob = xp.sub(&UniPoly::x(self.p).rem(self));
        let g = self.gcd(&frob);
        Ok(g.degree().unwrap_or(0))
    }

    /// Squarefree decomposition `self = unit * prod s_i^{e_i}` with the
    /// `s_i` monic, squarefree and pairwise coprime. Handles the `p`-th
    /// power part exactly (F_p is perfect).
    pub fn squarefree_decomposition(&self) -> Result<(u64, Vec<(UniPoly, u64)>), FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroPolynomial);
        }
        let unit = self.leading();
        let f = self.monic();
        let mut parts: Vec<(UniPoly, u64)> = Vec::new();
        sqfree_monic(&f, 1, &mut parts);
        Ok((unit, parts))
    }

    /// `true` iff `self = r^d` for some `r` over `F_p`.
    pub fn is_dth_power(&self, d: u64) -> Result<bool, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroPolynomial);
        }
        assert!(d >= 1);
        if self.p % d == 0 && d > 1 {
            return Err(FieldError::BadCharacteristic { p: self.p, d });
        }
        if d == 1 {
            return Ok(true);
        }
        let (unit, parts) = self.squarefree_decomposition()?;
        if parts.iter().any(|(_, e)| e % d != 0) {
            return Ok(false);
        }
        // unit must be a d-th power in F_p^x
        let e = gcd_u64(d, self.p - 1);
        Ok(powmod(unit, (self.p - 1) / e, self.p) == 1)
    }

    pub fn print(&self) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push_str(" + ");
            }
            match i {
                0 => {
                    let _ = write!(s, "{c}");
                }
                1 => {
                    if c == 1 {
                        s.push('Y');
                    } else {
                        let _ = write!(s, "{c}*Y");
                    }
                }
                _ => {
                    if c == 1 {
                        let _ = write!(s, "Y^{i}");
                    } else {
                        let _ = write!(s, "{c}*Y^{i}");
                    }
                }
            }
        }
        s
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Yun's algorithm with the characteristic-p fallback for vanishing
/// derivatives; `f` monic nonconstant or constant 1.
fn sqfree_monic(f: &UniPoly, mult: u64, out: &mut Vec<(UniPoly, u64)>) {
    let p = f.p();
    if f.is_constant() {
        return;
    }
    let df = f.derivative();
    if df.is_zero() {
        // f = h(x^p); its p-th root has the same coefficients (Frobenius
        // fixes F_p).
        let root = pth_root(f);
        sqfree_monic(&root, mult * p, out);
        return;
    }
    let mut g = f.gcd(&df);
    let mut w = f.div_exact(&g);
    let mut i = 1u64;
    while !w.is_constant() {
        let y = w.gcd(&g);
        let z = w.div_exact(&y);
        if !z.is_constant() {
            out.push((z, mult * i));
        }
        g = g.div_exact(&y);
        w = y;
        i += 1;
    }
    if !g.is_constant() {
        let root = pth_root(&g);
        sqfree_monic(&root, mult * p, out);
    }
}

fn pth_root(f: &UniPoly) -> UniPoly {
    let p = f.p();
    let mut c = Vec::new();
    for (i, &ci) in f.coeffs().iter().enumerate() {
        if i as u64 % p == 0 {
            c.push(ci);
        } else {
            assert!(ci == 0, "not a polynomial in x^p");
        }
    }
    UniPoly::new(p, &c)
}

/// Resultant over `F_p` via the Euclidean algorithm.
pub fn resultant_fp(a: &UniPoly, b: &UniPoly) -> Result<u64, FieldError> {
    if a.is_zero() || b.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let p = a.p();
    let mut a = a.clone();
    let mut b = b.clone();
    let mut res = 1u64;
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        if db == 0 {
            return Ok(mulmod(res, powmod(b.leading(), da as u64, p), p));
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return Ok(0);
        }
        let dr = r.degree().unwrap();
        // res(a, b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
        if (da * db) % 2 == 1 {
            res = (p - res) % p;
        }
        res = mulmod(res, powmod(b.leading(), (da - dr) as u64, p), p);
        a = b;
        b = r;
    }
}
