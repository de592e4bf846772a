//! Exact arithmetic and linear algebra over GF(p^ℓ).
//!
//! Elements are encoded as integers in `[0, k)` whose base-p digits are the
//! coefficients of the representing polynomial (digit i ↔ coefficient of
//! x^i). Extension fields use a fixed built-in table of irreducible moduli
//! so element encodings are reproducible across runs; the modulus is
//! re-checked for irreducibility at construction by trial division over all
//! monic GF(p) polynomials of degree up to ℓ/2. This module never touches
//! floating point.

use std::fmt;
use std::io::BufRead;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    BadDegree,
    #[error("no irreducible modulus in the built-in table for p = {p}, ell = {ell}")]
    NoModulusInTable { p: u32, ell: u32 },
    #[error("field order {0} exceeds 2^16")]
    FieldTooLarge(u64),
    #[error("modulus for p = {p}, ell = {ell} is reducible")]
    ReducibleModulus { p: u32, ell: u32 },
    #[error("matrix entry {value} at ({row}, {col}) is outside [0, {k})")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        k: usize,
    },
    #[error("entry vector has length {got}, expected {expected}")]
    BadShape { expected: usize, got: usize },
    #[error("matrices belong to different fields")]
    FieldMismatch,
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Irreducible moduli over GF(p) for the supported extension degrees,
/// listed as ascending coefficient vectors (constant term first, monic).
/// The table is documented in the README.
const MODULUS_TABLE: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),                   // x² + x + 1
    (2, 3, &[1, 1, 0, 1]),                // x³ + x + 1
    (2, 4, &[1, 1, 0, 0, 1]),             // x⁴ + x + 1
    (2, 5, &[1, 0, 1, 0, 0, 1]),          // x⁵ + x² + 1
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),       // x⁶ + x + 1
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),    // x⁷ + x + 1
    (2, 8, &[1, 1, 0, 1, 1, 0, 0, 0, 1]), // x⁸ + x⁴ + x³ + x + 1
    (3, 2, &[1, 0, 1]),                   // x² + 1
    (3, 3, &[1, 2, 0, 1]),                // x³ + 2x + 1
    (3, 4, &[2, 1, 0, 0, 1]),             // x⁴ + x + 2
    (3, 5, &[1, 2, 0, 0, 0, 1]),          // x⁵ + 2x + 1
    (5, 2, &[2, 0, 1]),                   // x² + 2
    (5, 3, &[1, 1, 0, 1]),                // x³ + x + 1
    (7, 2, &[1, 0, 1]),                   // x² + 1
    (7, 3, &[2, 0, 0, 1]),                // x³ + 2
    (11, 2, &[1, 0, 1]),                  // x² + 1
    (13, 2, &[2, 0, 1]),                  // x² + 2
];

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // Fermat: a^(p−2) mod p.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Polynomial remainder `a mod b` over GF(p); coefficients ascending.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let coeff = (r[dr] * lead_inv) % p;
        for (i, &bc) in b.iter().enumerate() {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - (coeff * bc) % p) % p;
        }
        while r.len() > 1 && *r.last().unwrap() == 0 {
            r.pop();
        }
    }
    r
}

fn poly_is_zero(a: &[u32]) -> bool {
    a.iter().all(|c| *c == 0)
}

/// Irreducibility by trial division against every monic polynomial of
/// degree 1..=ℓ/2.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let ell = modulus.len() - 1;
    for deg in 1..=(ell / 2) {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut divisor = vec![0u32; deg + 1];
            let mut c = code;
            for coeff in divisor.iter_mut().take(deg) {
                *coeff = (c % p as u64) as u32;
                c /= p as u64;
            }
            divisor[deg] = 1;
            if poly_is_zero(&poly_rem(modulus, &divisor, p)) {
                return false;
            }
        }
    }
    true
}

struct FieldInner {
    p: u32,
    ell: u32,
    k: usize,
    modulus: Vec<u32>,
    /// Dense multiplication table, built for k ≤ 512.
    mul_table: Option<Vec<u16>>,
}

/// The finite field GF(p^ℓ). Cheap to clone (shared immutable state).
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.ell)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.ell == other.0.ell && self.0.modulus == other.0.modulus
    }
}
impl Eq for Field {}

impl Field {
    pub fn new(p: u32, ell: u32) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if ell == 0 {
            return Err(GfError::BadDegree);
        }
        let k = (p as u64).checked_pow(ell).unwrap_or(u64::MAX);
        if k > 1 << 16 {
            return Err(GfError::FieldTooLarge(k));
        }
        let modulus: Vec<u32> = if ell == 1 {
            vec![0, 1] // x: reduction is plain mod-p arithmetic
        } else {
            MODULUS_TABLE
                .iter()
                .find(|(tp, tl, _)| *tp == p && *tl == ell)
                .map(|(_, _, m)| m.to_vec())
                .ok_or(GfError::NoModulusInTable { p, ell })?
        };
        if ell > 1 && !is_irreducible(&modulus, p) {
            return Err(GfError::ReducibleModulus { p, ell });
        }
        let mut inner = FieldInner {
            p,
            ell,
            k: k as usize,
            modulus,
            mul_table: None,
        };
        if inner.k <= 512 {
            let mut table = vec![0u16; inner.k * inner.k];
            for a in 0..inner.k {
                for b in 0..=a {
                    let prod = mul_slow(&inner, a, b) as u16;
                    table[a * inner.k + b] = prod;
                    table[b * inner.k + a] = prod;
                }
            }
            inner.mul_table = Some(table);
        }
        Ok(Field(Arc::new(inner)))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn ell(&self) -> u32 {
        self.0.ell
    }

    /// Field order k = p^ℓ.
    pub fn order(&self) -> usize {
        self.0.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let p = self.0.p as usize;
        let mut result = 0usize;
        let mut mult = 1usize;
        let (mut a, mut b) = (a, b);
        while a > 0 || b > 0 {
            result += ((a + b) % p) * mult;
            a /= p;
            b /= p;
            mult *= p;
        }
        result
    }

    pub fn neg(&self, a: usize) -> usize {
        let p = self.0.p as usize;
        let mut result = 0usize;
        let mut mult = 1usize;
        let mut a = a;
        while a > 0 {
            result += ((p - a % p) % p) * mult;
            a /= p;
            mult *= p;
        }
        result
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.0.mul_table {
            Some(table) => table[a * self.0.k + b] as usize,
            None => mul_slow(&self.0, a, b),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: usize) -> Option<usize> {
        if a == 0 {
            return None;
        }
        Some(self.pow(a, self.0.k - 2))
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        let mut result = 1usize;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Absolute trace `a + a^p + … + a^{p^{ℓ−1}}` into the prime subfield,
    /// returned as an element of ℤ_p under the canonical identification.
    pub fn trace(&self, a: usize) -> u32 {
        let mut acc = 0usize;
        let mut term = a;
        for _ in 0..self.0.ell {
            acc = self.add(acc, term);
            term = self.pow(term, self.0.p as usize);
        }
        debug_assert!(
            acc < self.0.p as usize,
            "trace must land in the prime subfield"
        );
        acc as u32
    }
}

fn mul_slow(inner: &FieldInner, a: usize, b: usize) -> usize {
    let p = inner.p as usize;
    let ell = inner.ell as usize;
    let digits = |mut v: usize| -> Vec<usize> {
        let mut out = vec![0usize; ell];
        for o in out.iter_mut() {
            *o = v % p;
            v /= p;
        }
        out
    };
    let da = digits(a);
    let db = digits(b);
    let mut prod = vec![0usize; 2 * ell - 1];
    for (i, &ca) in da.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ca * cb) % p;
        }
    }
    // Reduce modulo the monic modulus.
    for d in (ell..prod.len()).rev() {
        let coeff = prod[d];
        if coeff == 0 {
            continue;
        }
        prod[d] = 0;
        for (i, &mc) in inner.modulus.iter().enumerate().take(ell) {
            let idx = d - ell + i;
            prod[idx] = (prod[idx] + p * p - coeff * mc as usize % p) % p;
        }
    }
    let mut result = 0usize;
    let mut mult = 1usize;
    for &c in prod.iter().take(ell) {
        result += (c % p) * mult;
        mult *= p;
    }
    result
}

/// A dense matrix over a [`Field`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<usize>,
}

impl Matrix {
    pub fn new(
        field: Field,
        rows: usize,
        cols: usize,
        entries: Vec<usize>,
    ) -> Result<Self, GfError> {
        if entries.len() != rows * cols {
            return Err(GfError::BadShape {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        let k = field.order();
        for (idx, &value) in entries.iter().enumerate() {
            if value >= k {
                return Err(GfError::EntryOutOfRange {
                    row: idx / cols,
                    col: idx % cols,
                    value,
                    k,
                });
            }
        }
        Ok(Self {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> usize {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: usize) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                entries.push(self.get(r, c));
            }
        }
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: cols.len(),
            entries,
        }
    }

    /// Reduced row echelon form and rank, by exact Gaussian elimination.
    pub fn rref(&self) -> (Matrix, usize) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if src != pivot_row {
                for c in 0..m.cols {
                    let a = m.get(pivot_row, c);
                    let b = m.get(src, c);
                    m.set(pivot_row, c, b);
                    m.set(src, c, a);
                }
            }
            let inv = f.inv(m.get(pivot_row, col)).expect("pivot is nonzero");
            for c in 0..m.cols {
                m.set(pivot_row, c, f.mul(m.get(pivot_row, c), inv));
            }
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(pivot_row, c)));
                    m.set(r, c, v);
                }
            }
            pivot_row += 1;
        }
        (m, pivot_row)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// A basis (as rows) of `{x : M xᵀ = 0}`; the row count is
    /// `cols − rank` by rank–nullity.
    pub fn null_space(&self) -> Matrix {
        let f = self.field.clone();
        let (r, rank) = self.rref();
        let mut pivot_cols = Vec::with_capacity(rank);
        let mut row = 0usize;
        for col in 0..r.cols {
            if row < rank && r.get(row, col) != 0 {
                pivot_cols.push(col);
                row += 1;
            }
        }
        let free_cols: Vec<usize> = (0..r.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = Matrix::zero(f.clone(), free_cols.len(), r.cols);
        for (b, &fc) in free_cols.iter().enumerate() {
            basis.set(b, fc, 1);
            for (prow, &pc) in pivot_cols.iter().enumerate() {
                basis.set(b, pc, f.neg(r.get(prow, fc)));
            }
        }
        basis
    }

    /// Matrix–vector product `M vᵀ`.
    pub fn mul_vec(&self, v: &[usize]) -> Vec<usize> {
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&m, &x)| f.add(acc, f.mul(m, x)))
            })
            .collect()
    }

    /// Reads the text format: a header line `p ell rows cols`, then `rows`
    /// lines of space-separated element codes.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Matrix, GfError> {
        let mut lines = reader.lines().enumerate().filter_map(|(i, l)| {
            let l = l.ok()?;
            let t = l.trim().to_string();
            if t.is_empty() {
                None
            } else {
                Some((i + 1, t))
            }
        });
        let (line_no, header) = lines.next().ok_or(GfError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let parts: Vec<u64> = header
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|e| GfError::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
        if parts.len() != 4 {
            return Err(GfError::Parse {
                line: line_no,
                message: format!("header needs `p ell rows cols`, got {header:?}"),
            });
        }
        let field = Field::new(parts[0] as u32, parts[1] as u32)?;
        let (rows, cols) = (parts[2] as usize, parts[3] as usize);
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (line_no, line) = lines.next().ok_or(GfError::Parse {
                line: 0,
                message: "unexpected end of file".into(),
            })?;
            for tok in line.split_whitespace() {
                let v: usize = tok.parse().map_err(|_| GfError::Parse {
                    line: line_no,
                    message: format!("bad element {tok:?}"),
                })?;
                entries.push(v);
            }
        }
        Matrix::new(field, rows, cols, entries)
    }

    /// Writes the text format read by [`Matrix::from_reader`].
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {}\n",
            self.field.p(),
            self.field.ell(),
            self.rows,
            self.cols
        );
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}
