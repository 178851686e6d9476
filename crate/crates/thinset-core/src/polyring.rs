//! Sparse multivariate integer polynomials in `Y, X1, ..., Xn`.
//!
//! Exponent vectors have length `nvars + 1`; index 0 is `Y` and index `i`
//! is `X_i`. Coefficients are arbitrary-precision integers and stored
//! coefficients are never zero, so equality of term maps is equality of
//! polynomials. The term order is graded lexicographic.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exponent vector in graded-lex order (total degree first, then lex).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expo(pub Vec<u32>);

impl Expo {
    fn total(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }
}

impl Ord for Expo {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Expo {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `Z[Y, X1, ..., Xn]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Expo, BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    /// Syntax error at the given byte offset.
    Syntax { offset: usize, message: String },
    /// `X0` is not a variable; indices are 1-based.
    BadVarIndex { offset: usize },
    /// Exponent larger than 2^31.
    ExponentOverflow { offset: usize },
    /// The polynomial is not of the sieved shape for the requested `m`.
    NotSievedForm { reason: String },
    /// `essential_variables` requires a homogeneous form in the X-variables.
    NotHomogeneous,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::Syntax { offset, message } => {
                write!(f, "syntax error at byte {offset}: {message}")
            }
            PolyError::BadVarIndex { offset } => {
                write!(f, "variable index 0 at byte {offset}; X-indices start at 1")
            }
            PolyError::ExponentOverflow { offset } => {
                write!(f, "exponent exceeds 2^31 at byte {offset}")
            }
            PolyError::NotSievedForm { reason } => write!(f, "not a sieved form: {reason}"),
            PolyError::NotHomogeneous => write!(f, "polynomial is not a homogeneous form in X"),
        }
    }
}

impl core::error::Error for PolyError {}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Expo(vec![0; nvars + 1]), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    /// The variable `Y` (index 0) or `X_i` (index `i >= 1`).
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index <= nvars, "variable index out of range");
        let mut e = vec![0u32; nvars + 1];
        e[index] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(Expo(e), BigInt::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.0.as_slice(), c))
    }

    pub fn add_term(&mut self, expo: Vec<u32>, coeff: BigInt) {
        assert_eq!(expo.len(), self.nvars + 1);
        if coeff.is_zero() {
            return;
        }
        let key = Expo(expo);
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            // re-borrow to remove; key no longer available
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect();
                let entry = out.terms.entry(Expo(e)).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Max |coefficient|; 0 for the zero polynomial.
    pub fn norm(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.total()).max()
    }

    /// Degree in variable `index` (0 = Y); None for the zero polynomial.
    pub fn degree_in(&self, index: usize) -> Option<u32> {
        self.terms.keys().map(|e| e.0[index]).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.degree_in(0)
    }

    /// Coefficient of `var^k` as a polynomial in the remaining variables
    /// (the exponent slot of `var` is zeroed in the result).
    pub fn coeff_of(&self, var: usize, k: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.0[var] == k {
                let mut e2 = e.0.clone();
                e2[var] = 0;
                out.terms.insert(Expo(e2), c.clone());
            }
        }
        out
    }

    /// Ascending coefficient list in `var`: `[c_0, ..., c_deg]`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = match self.degree_in(var) {
            Some(d) => d,
            None => return vec![],
        };
        (0..=deg).map(|k| self.coeff_of(var, k)).collect()
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[index];
            if k == 0 {
                continue;
            }
            let mut e2 = e.0.clone();
            e2[index] = k - 1;
            out.add_term(e2, c * BigInt::from(k));
        }
        out
    }

    /// Substitute integers for a subset of the X-variables (1-based indices).
    pub fn specialize(&self, bindings: &BTreeMap<usize, BigInt>) -> Polynomial {
        for &i in bindings.keys() {
            assert!(i >= 1 && i <= self.nvars, "binding index out of range");
        }
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut e2 = e.0.clone();
            for (&i, val) in bindings {
                let k = e2[i];
                if k > 0 {
                    coeff *= val.pow(k);
                    e2[i] = 0;
                }
            }
            out.add_term(e2, coeff);
        }
        out
    }

    /// Exact evaluation at `Y = y`, `X_i = x[i-1]`.
    pub fn eval(&self, y: &BigInt, x: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.nvars);
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            if e.0[0] > 0 {
                t *= y.pow(e.0[0]);
            }
            for i in 1..=self.nvars {
                if e.0[i] > 0 {
                    t *= x[i - 1].pow(e.0[i]);
                }
            }
            acc += t;
        }
        acc
    }

    /// Reduce coefficients into `[0, p)`, dropping zeros. The flag records
    /// whether the total degree dropped under reduction.
    pub fn reduce_mod(&self, p: u64) -> (Polynomial, bool) {
        let pm = BigInt::from(p);
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let r = c.mod_floor(&pm);
            if !r.is_zero() {
                out.terms.insert(e.clone(), r);
            }
        }
        let dropped = out.total_degree() != self.total_degree();
        (out, dropped)
    }

    /// Apply the linear substitution `X_i -> sum_j L[i-1][j-1] * X_j`
    /// (Y is left alone). `L` is `nvars x nvars`.
    pub fn linear_substitute(&self, l: &[Vec<i64>]) -> Polynomial {
        assert_eq!(l.len(), self.nvars);
        let forms: Vec<Polynomial> = (0..self.nvars)
            .map(|i| {
                let mut f = Polynomial::zero(self.nvars);
                for (j, &c) in l[i].iter().enumerate() {
                    f = f.add(&Polynomial::var(self.nvars, j + 1).scale(&BigInt::from(c)));
                }
                f
            })
            .collect();
        let y = Polynomial::var(self.nvars, 0);
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(self.nvars, c.clone());
            if e.0[0] > 0 {
                t = t.mul(&y.pow(e.0[0]));
            }
            for i in 1..=self.nvars {
                if e.0[i] > 0 {
                    t = t.mul(&forms[i - 1].pow(e.0[i]));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Exact division; `None` if `d` does not divide `self` in `Z[Y, X]`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        assert_eq!(self.nvars, d.nvars);
        let (dlead_e, dlead_c) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((re, rc)) = rem.terms.iter().next_back() {
            let e: Option<Vec<u32>> = re
                .0
                .iter()
                .zip(&dlead_e.0)
                .map(|(a, b)| a.checked_sub(*b))
                .collect();
            let e = e?;
            let (q, r) = rc.div_rem(dlead_c);
            if !r.is_zero() {
                return None;
            }
            let mut t = Polynomial::zero(self.nvars);
            t.terms.insert(Expo(e), q);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// True iff every term is free of `Y` and has the same total X-degree.
    pub fn is_homogeneous_form(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let mut deg = None;
        for (e, _) in self.terms() {
            if e[0] != 0 {
                return false;
            }
            let t: u64 = e[1..].iter().map(|&k| k as u64).sum();
            match deg {
                None => deg = Some(t),
                Some(d) if d != t => return false,
                _ => {}
            }
        }
        deg.map(|d| d >= 1).unwrap_or(false)
    }

    /// Dimension of the rational span of the first partials of a form `H` in
    /// the X-variables. Equals `n` iff no `GL_n(Q)` change of variables makes
    /// `H` independent of some variable.
    pub fn essential_variables(&self) -> Result<usize, PolyError> {
        if !self.is_homogeneous_form() {
            return Err(PolyError::NotHomogeneous);
        }
        let partials: Vec<Polynomial> = (1..=self.nvars).map(|i| self.derivative(i)).collect();
        // Coefficient matrix of the partials over the union of their monomials.
        let mut monomials: Vec<Expo> = Vec::new();
        for p in &partials {
            for e in p.terms.keys() {
                if !monomials.contains(e) {
                    monomials.push(e.clone());
                }
            }
        }
        let mut mat: Vec<Vec<BigInt>> = partials
            .iter()
            .map(|p| {
                monomials
                    .iter()
                    .map(|m| p.terms.get(m).cloned().unwrap_or_else(BigInt::zero))
                    .collect()
            })
            .collect();
        Ok(rank_bigint(&mut mat))
    }

    /// Canonical text form; `parse(print(f)) == f`.
    pub fn print(&self) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else if neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || e.total() == 0 {
                factors.push(a.to_string());
            }
            for (idx, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let name = if idx == 0 {
                    String::from("Y")
                } else {
                    let mut n = String::from("X");
                    let _ = write!(n, "{idx}");
                    n
                };
                if k == 1 {
                    factors.push(name);
                } else {
                    let mut f = name;
                    let _ = write!(f, "^{k}");
                    factors.push(f);
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }

    /// Parse per the expression grammar (whitespace ignored).
    pub fn parse(text: &str, nvars: usize) -> Result<Polynomial, PolyError> {
        let mut p = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            nvars,
        };
        p.skip_ws();
        let poly = p.poly()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(PolyError::Syntax {
                offset: p.pos,
                message: String::from("trailing input"),
            });
        }
        Ok(poly)
    }

    /// Parse with `nvars` inferred as the largest X-index mentioned.
    pub fn parse_auto(text: &str) -> Result<Polynomial, PolyError> {
        let mut max_idx = 0usize;
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] == b'X' {
                let mut j = i + 1;
                let mut v = 0usize;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    v = v * 10 + (bytes[j] - b'0') as usize;
                    j += 1;
                }
                max_idx = max_idx.max(v);
                i = j;
            } else {
                i += 1;
            }
        }
        Self::parse(text, max_idx)
    }
}

/// Rank of an integer matrix over Q, by fraction-free elimination.
pub fn rank_bigint(mat: &mut [Vec<BigInt>]) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        let pivot = (rank..rows).find(|&r| !mat[r][col].is_zero());
        let pr = match pivot {
            Some(pr) => pr,
            None => {
                col += 1;
                continue;
            }
        };
        mat.swap(rank, pr);
        for r in rank + 1..rows {
            if mat[r][col].is_zero() {
                continue;
            }
            let a = mat[rank][col].clone();
            let b = mat[r][col].clone();
            for c in col..cols {
                mat[r][c] = &mat[r][c] * &a - &mat[rank][c] * &b;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Resultant of `a` and `b` with respect to variable `var`, as a polynomial
/// in the remaining variables (Sylvester determinant, fraction-free
/// elimination over the polynomial ring).
pub fn resultant(a: &Polynomial, b: &Polynomial, var: usize) -> Polynomial {
    assert_eq!(a.nvars(), b.nvars());
    let nvars = a.nvars();
    let ac = a.coeffs_in(var);
    let bc = b.coeffs_in(var);
    assert!(!ac.is_empty() && !bc.is_empty(), "resultant of zero polynomial");
    let da = ac.len() - 1;
    let db = bc.len() - 1;
    if da == 0 && db == 0 {
        return Polynomial::one(nvars);
    }
    // Sylvester matrix: db rows of a's coefficients, da rows of b's,
    // descending powers left to right.
    let size = da + db;
    let mut mat: Vec<Vec<Polynomial>> = vec![vec![Polynomial::zero(nvars); size]; size];
    for r in 0..db {
        for (k, c) in ac.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..da {
        for (k, c) in bc.iter().rev().enumerate() {
            mat[db + r][r + k] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Determinant of a square polynomial matrix by the Bareiss fraction-free
/// algorithm; all interior divisions are exact.
fn bareiss_det(mut mat: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = mat.len();
    if n == 0 {
        return Polynomial::one(0);
    }
    let nvars = mat[0][0].nvars();
    let mut sign = false;
    let mut prev = Polynomial::one(nvars);
    for k in 0..n {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = !sign;
                }
                None => return Polynomial::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = mat[i][j]
                    .mul(&mat[k][k])
                    .sub(&mat[i][k].mul(&mat[k][j]));
                mat[i][j] = t
                    .div_exact(&prev)
                    .expect("Bareiss division is exact");
            }
            mat[i][k] = Polynomial::zero(nvars);
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn poly(&mut self) -> Result<Polynomial, PolyError> {
        self.skip_ws();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            negate = true;
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                let f = self.factor()?;
                acc = acc.mul(&f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn uint(&mut self) -> Result<(u64, usize), PolyError> {
        let start = self.pos;
        let mut v: u64 = 0;
        let mut any = false;
        while let Some(b) = self.peek() {
            if !b.is_ascii_digit() {
                break;
            }
            any = true;
            v = v
                .saturating_mul(10)
                .saturating_add((b - b'0') as u64);
            if v > (1u64 << 31) {
                return Err(PolyError::ExponentOverflow { offset: start });
            }
            self.pos += 1;
        }
        if !any {
            return Err(PolyError::Syntax {
                offset: self.pos,
                message: String::from("expected digits"),
            });
        }
        Ok((v, start))
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(PolyError::Syntax {
                        offset: self.pos,
                        message: String::from("expected ')'"),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .peek()
                    .map(|b| b.is_ascii_digit())
                    .unwrap_or(false)
                {
                    self.pos += 1;
                }
                let text = core::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                let value: BigInt = text.parse().map_err(|_| PolyError::Syntax {
                    offset: start,
                    message: String::from("bad integer"),
                })?;
                Ok(Polynomial::constant(self.nvars, value))
            }
            Some(b'Y') => {
                self.pos += 1;
                let e = self.opt_exponent()?;
                let mut ev = vec![0u32; self.nvars + 1];
                ev[0] = e;
                let mut p = Polynomial::zero(self.nvars);
                p.add_term(ev, BigInt::one());
                Ok(p)
            }
            Some(b'X') => {
                self.pos += 1;
                let (idx, idx_off) = self.uint()?;
                if idx == 0 {
                    return Err(PolyError::BadVarIndex { offset: idx_off });
                }
                let idx = idx as usize;
                if idx > self.nvars {
                    return Err(PolyError::Syntax {
                        offset: idx_off,
                        message: String::from("X-index exceeds variable count"),
                    });
                }
                let e = self.opt_exponent()?;
                let mut ev = vec![0u32; self.nvars + 1];
                ev[idx] = e;
                let mut p = Polynomial::zero(self.nvars);
                p.add_term(ev, BigInt::one());
                Ok(p)
            }
            _ => Err(PolyError::Syntax {
                offset: self.pos,
                message: String::from("expected integer, variable, or '('"),
            }),
        }
    }

    fn opt_exponent(&mut self) -> Result<u32, PolyError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let (v, off) = self.uint()?;
            if v > (1u64 << 31) {
                return Err(PolyError::ExponentOverflow { offset: off });
            }
            Ok(v as u32)
        } else {
            Ok(1)
        }
    }
}

/// The structured shape `Y^{md} + sum_j Y^{m(d-j)} f_j(X)`.
#[derive(Clone, Debug)]
pub struct SievedForm {
    pub m: u32,
    pub d: u32,
    /// `f_1, ..., f_d`, polynomials in the X-variables only. Interior `f_j`
    /// may be zero; `f_d` never is.
    pub coeffs: Vec<Polynomial>,
    pub deg_y: u32,
}

impl SievedForm {
    /// Decompose a polynomial monic in `Y` of Y-degree `m*d`, polynomial in
    /// `Y^m`, with nonzero constant-in-Y part `f_d`.
    pub fn decompose(f: &Polynomial, m: u32) -> Result<SievedForm, PolyError> {
        assert!(m >= 1);
        let deg_y = f.deg_y().ok_or_else(|| PolyError::NotSievedForm {
            reason: String::from("zero polynomial"),
        })?;
        if deg_y == 0 || deg_y % m != 0 {
            return Err(PolyError::NotSievedForm {
                reason: alloc::format!("Y-degree {deg_y} is not a positive multiple of m={m}"),
            });
        }
        let lead = f.coeff_of(0, deg_y);
        if lead != Polynomial::one(f.nvars()) {
            return Err(PolyError::NotSievedForm {
                reason: String::from("not monic in Y with constant leading coefficient 1"),
            });
        }
        for (e, _) in f.terms() {
            if e[0] % m != 0 {
                return Err(PolyError::NotSievedForm {
                    reason: alloc::format!("Y-exponent {} is not a multiple of m={m}", e[0]),
                });
            }
        }
        let d = deg_y / m;
        let coeffs: Vec<Polynomial> = (1..=d).map(|j| f.coeff_of(0, m * (d - j))).collect();
        if coeffs[d as usize - 1].is_zero() {
            return Err(PolyError::NotSievedForm {
                reason: String::from("f_d vanishes identically"),
            });
        }
        Ok(SievedForm {
            m,
            d,
            coeffs,
            deg_y,
        })
    }

    /// `f_d`, the constant-in-Y coefficient.
    pub fn f_d(&self) -> &Polynomial {
        &self.coeffs[self.d as usize - 1]
    }

    pub fn reconstruct(&self) -> Polynomial {
        let nvars = self.coeffs[0].nvars();
        let y = Polynomial::var(nvars, 0);
        let mut out = y.pow(self.m * self.d);
        for (j, f) in self.coeffs.iter().enumerate() {
            let k = self.m * (self.d - (j as u32 + 1));
            out = out.add(&y.pow(k).mul(f));
        }
        out
    }
}
