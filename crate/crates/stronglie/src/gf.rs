//! Exact arithmetic in the prime field F_p, row reduction over F_p, and
//! multiplication tables for the extension fields F_{p^d} used by scalar
//! extension.
//!
//! * [`FpElem`] / [`fp_arith`]: canonical residues mod a prime, checked ops.
//! * [`Echelon`]: incremental reduced row echelon form, the linear-algebra
//!   workhorse for ideal bases, subspaces and specialization ranks.
//! * [`ExtFieldTable`] / [`ext_field_gf`]: structure constants for
//!   `F_p[t]/(f)` with f irreducible, validated against the field axioms.

use thiserror::Error;

/// Largest modulus accepted: products of two residues must fit in u128
/// comfortably and trial-division primality must stay cheap.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds 2^31")]
    ModulusTooLarge(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("inversion of zero mod {0}")]
    ZeroInverse(u64),
    #[error("polynomial is not monic of degree {0}")]
    NotMonic(usize),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("field axiom failed: {0}")]
    AxiomFailure(String),
}

/// Trial-division primality test. Inputs here are tiny, so this is exact
/// and dependency-free.
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

/// Checks that `p` is a usable field modulus: prime and at most 2^31.
pub fn check_prime(p: u64) -> Result<(), GfError> {
    if p > MAX_MODULUS {
        return Err(GfError::ModulusTooLarge(p));
    }
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    Ok(())
}

/// x^e mod p by square-and-multiply. p is assumed < 2^31 so the
/// intermediate product fits in u64 arithmetic widened to u128.
pub fn pow_mod(mut x: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    x %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * x as u128) % p as u128) as u64;
        }
        x = ((x as u128 * x as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue mod a prime, via Fermat.
pub fn inv_mod(x: u64, p: u64) -> Result<u64, GfError> {
    if x % p == 0 {
        return Err(GfError::ZeroInverse(p));
    }
    Ok(pow_mod(x, p - 2, p))
}

/// Canonical residue of a possibly negative integer.
pub fn residue(v: i64, p: u64) -> u64 {
    let m = v.rem_euclid(p as i64);
    m as u64
}

/// An exact residue in [0, p) together with its prime modulus.
///
/// Invariant: `value < modulus` always; the modulus is prime (checked when
/// constructed through [`FpElem::new`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u64,
    modulus: u64,
}

impl FpElem {
    /// Builds a canonical residue, validating the modulus.
    pub fn new(value: i64, modulus: u64) -> Result<Self, GfError> {
        check_prime(modulus)?;
        Ok(FpElem {
            value: residue(value, modulus),
            modulus,
        })
    }

    /// Internal constructor for moduli already known to be prime.
    pub(crate) fn raw(value: u64, modulus: u64) -> Self {
        debug_assert!(value < modulus);
        FpElem { value, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_modulus(&self, other: &FpElem) -> Result<(), GfError> {
        if self.modulus != other.modulus {
            return Err(GfError::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    pub fn add(&self, other: &FpElem) -> Result<FpElem, GfError> {
        self.same_modulus(other)?;
        Ok(FpElem::raw((self.value + other.value) % self.modulus, self.modulus))
    }

    pub fn sub(&self, other: &FpElem) -> Result<FpElem, GfError> {
        self.same_modulus(other)?;
        Ok(FpElem::raw(
            (self.value + self.modulus - other.value) % self.modulus,
            self.modulus,
        ))
    }

    pub fn mul(&self, other: &FpElem) -> Result<FpElem, GfError> {
        self.same_modulus(other)?;
        let v = (self.value as u128 * other.value as u128) % self.modulus as u128;
        Ok(FpElem::raw(v as u64, self.modulus))
    }

    pub fn neg(&self) -> FpElem {
        if self.value == 0 {
            *self
        } else {
            FpElem::raw(self.modulus - self.value, self.modulus)
        }
    }

    pub fn inv(&self) -> Result<FpElem, GfError> {
        Ok(FpElem::raw(inv_mod(self.value, self.modulus)?, self.modulus))
    }
}

/// The operation selector for [`fp_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

/// Single checked arithmetic step in F_p. `Inv` and `Neg` ignore `y`.
pub fn fp_arith(x: FpElem, y: FpElem, op: FpOp) -> Result<FpElem, GfError> {
    match op {
        FpOp::Add => x.add(&y),
        FpOp::Sub => x.sub(&y),
        FpOp::Mul => x.mul(&y),
        FpOp::Inv => x.inv(),
        FpOp::Neg => Ok(x.neg()),
    }
}

// Raw modular helpers used by the dense linear algebra below. Values are
// canonical residues; moduli are validated at the call-site boundary.
pub(crate) fn m_add(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}
pub(crate) fn m_sub(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b) % p
}
pub(crate) fn m_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Incrementally maintained reduced row echelon form over F_p.
///
/// Rows are dense vectors of canonical residues. After every insertion the
/// stored rows keep strictly increasing pivot columns, each pivot is 1, and
/// every pivot column is cleared in all other rows.
#[derive(Debug, Clone)]
pub struct Echelon {
    p: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
    /// pivot column -> index into `rows`
    pivots: std::collections::BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(p: u64, cols: usize) -> Self {
        Echelon {
            p,
            cols,
            rows: Vec::new(),
            pivots: std::collections::BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Row-reduced basis rows, pivot columns strictly increasing.
    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        let mut order: Vec<usize> = self.pivots.values().copied().collect();
        order.sort_by_key(|&r| self.leading(&self.rows[r]));
        order.into_iter().map(|r| self.rows[r].as_slice())
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    fn leading(&self, row: &[u64]) -> usize {
        row.iter().position(|&c| c != 0).unwrap_or(self.cols)
    }

    /// Reduces `vec` in place against the stored rows (pivot columns
    /// eliminated). Returns the residual's leading column, if any.
    pub fn reduce_in_place(&self, vec: &mut [u64]) -> Option<usize> {
        assert_eq!(vec.len(), self.cols, "column count mismatch");
        for (&col, &ri) in &self.pivots {
            let c = vec[col];
            if c != 0 {
                let row = &self.rows[ri];
                for j in col..self.cols {
                    if row[j] != 0 {
                        vec[j] = m_sub(vec[j], m_mul(c, row[j], self.p), self.p);
                    }
                }
            }
        }
        vec.iter().position(|&c| c != 0)
    }

    /// Returns true when `vec` lies in the row space.
    pub fn contains(&self, vec: &[u64]) -> bool {
        let mut v = vec.to_vec();
        self.reduce_in_place(&mut v).is_none()
    }

    /// Inserts a vector; returns its pivot column if it enlarged the span.
    pub fn insert(&mut self, vec: Vec<u64>) -> Option<usize> {
        let mut v = vec;
        let lead = self.reduce_in_place(&mut v)?;
        let inv = inv_mod(v[lead], self.p).expect("pivot is nonzero");
        for c in v.iter_mut() {
            *c = m_mul(*c, inv, self.p);
        }
        // Clear the new pivot column from existing rows to keep RREF.
        for row in self.rows.iter_mut() {
            let c = row[lead];
            if c != 0 {
                for j in 0..self.cols {
                    if v[j] != 0 {
                        row[j] = m_sub(row[j], m_mul(c, v[j], self.p), self.p);
                    }
                }
            }
        }
        self.rows.push(v);
        self.pivots.insert(lead, self.rows.len() - 1);
        Some(lead)
    }
}

/// Multiplication table for `F_{p^d} = F_p[t]/(f)` on the basis
/// 1, t, ..., t^{d-1}: e_i * e_j = sum_k `constants[i][j][k]` e_k.
///
/// Invariant: the table passes commutativity, unitality, basis-triple
/// associativity, and (for p^d <= 10^4) exhaustive invertibility of all
/// nonzero elements.
#[derive(Debug, Clone)]
pub struct ExtFieldTable {
    p: u64,
    d: usize,
    /// flattened [i][j][k]
    constants: Vec<u64>,
}

impl ExtFieldTable {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> u64 {
        self.constants[(i * self.d + j) * self.d + k]
    }

    /// The multiplicative unit in basis coordinates.
    pub fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.d];
        v[0] = 1;
        v
    }

    /// Product of two coordinate vectors.
    pub fn mul_vec(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.d);
        assert_eq!(y.len(), self.d);
        let mut out = vec![0u64; self.d];
        for i in 0..self.d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.d {
                if y[j] == 0 {
                    continue;
                }
                let c = m_mul(x[i], y[j], self.p);
                for k in 0..self.d {
                    let l = self.constant(i, j, k);
                    if l != 0 {
                        out[k] = m_add(out[k], m_mul(c, l, self.p), self.p);
                    }
                }
            }
        }
        out
    }

    /// The trivial degree-1 table (scalars themselves).
    pub fn trivial(p: u64) -> Result<Self, GfError> {
        check_prime(p)?;
        Ok(ExtFieldTable {
            p,
            d: 1,
            constants: vec![1],
        })
    }

    fn validate(&self) -> Result<(), GfError> {
        let d = self.d;
        // unit: e_0 * e_j = e_j
        for j in 0..d {
            for k in 0..d {
                let want = if j == k { 1 } else { 0 };
                if self.constant(0, j, k) != want {
                    return Err(GfError::AxiomFailure(format!(
                        "e1*e{} is not e{}",
                        j + 1,
                        j + 1
                    )));
                }
            }
        }
        // commutativity on the table
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if self.constant(i, j, k) != self.constant(j, i, k) {
                        return Err(GfError::AxiomFailure(format!(
                            "e{}*e{} != e{}*e{}",
                            i + 1,
                            j + 1,
                            j + 1,
                            i + 1
                        )));
                    }
                }
            }
        }
        // associativity on basis triples; bilinearity extends it
        for i in 0..d {
            for j in 0..d {
                let mut ei = vec![0u64; d];
                ei[i] = 1;
                let mut ej = vec![0u64; d];
                ej[j] = 1;
                let ij = self.mul_vec(&ei, &ej);
                for k in 0..d {
                    let mut ek = vec![0u64; d];
                    ek[k] = 1;
                    let jk = self.mul_vec(&ej, &ek);
                    if self.mul_vec(&ij, &ek) != self.mul_vec(&ei, &jk) {
                        return Err(GfError::AxiomFailure(format!(
                            "(e{}e{})e{} != e{}(e{}e{})",
                            i + 1,
                            j + 1,
                            k + 1,
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        // invertibility of every nonzero element, exhaustively for small fields:
        // multiplication by x is an F_p-linear map, invertible iff full rank
        let order = (self.p as u128).checked_pow(d as u32);
        if let Some(n) = order {
            if n <= 10_000 {
                let mut x = vec![0u64; d];
                for idx in 1..n {
                    let mut t = idx;
                    for c in x.iter_mut() {
                        *c = (t % self.p as u128) as u64;
                        t /= self.p as u128;
                    }
                    let mut ech = Echelon::new(self.p, d);
                    for j in 0..d {
                        let mut ej = vec![0u64; d];
                        ej[j] = 1;
                        ech.insert(self.mul_vec(&x, &ej));
                    }
                    if ech.rank() != d {
                        return Err(GfError::AxiomFailure(format!(
                            "non-invertible nonzero element {:?}",
                            x
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Schoolbook remainder of a coefficient vector (low to high) modulo a
/// monic polynomial, over F_p.
fn poly_rem(mut a: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    let d = f.len() - 1;
    while a.len() > d {
        let lead = *a.last().unwrap();
        let deg = a.len() - 1;
        if lead != 0 {
            for i in 0..d {
                let idx = deg - d + i;
                a[idx] = m_sub(a[idx], m_mul(lead, f[i], p), p);
            }
        }
        a.pop();
    }
    a.resize(d, 0);
    a
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Builds the multiplication table of `F_p[t]/(f)` for a monic irreducible f
/// of degree d, given as its d+1 coefficients from constant to leading.
///
/// Irreducibility is established by root search plus trial division by all
/// monic factors of degree up to d/2; the sizes in scope keep this cheap.
pub fn ext_field_gf(p: u64, d: usize, coeffs: &[u64]) -> Result<ExtFieldTable, GfError> {
    check_prime(p)?;
    if d == 0 || coeffs.len() != d + 1 || coeffs[d] % p != 1 {
        return Err(GfError::NotMonic(d));
    }
    let f: Vec<u64> = coeffs.iter().map(|&c| c % p).collect();
    // root search catches all linear factors
    for r in 0..p {
        let mut acc = 0u64;
        for &c in f.iter().rev() {
            acc = m_add(m_mul(acc, r, p), c, p);
        }
        if acc == 0 {
            return Err(GfError::Reducible(format!("root t = {} found", r)));
        }
    }
    // trial division by monic factors of degree 2..=d/2
    for deg in 2..=d / 2 {
        let count = (p as u128).pow(deg as u32);
        let mut g = vec![0u64; deg + 1];
        g[deg] = 1;
        for idx in 0..count {
            let mut t = idx;
            for c in g.iter_mut().take(deg) {
                *c = (t % p as u128) as u64;
                t /= p as u128;
            }
            if poly_is_zero(&poly_rem(f.clone(), &g, p)) {
                return Err(GfError::Reducible(format!(
                    "monic factor of degree {} found",
                    deg
                )));
            }
        }
    }
    // lambda table: t^i * t^j reduced mod f
    let mut constants = vec![0u64; d * d * d];
    for i in 0..d {
        for j in 0..d {
            let mut prod = vec![0u64; i + j + 1];
            prod[i + j] = 1;
            let rem = poly_rem(prod, &f, p);
            for k in 0..d {
                constants[(i * d + j) * d + k] = rem[k];
            }
        }
    }
    let table = ExtFieldTable { p, d, constants };
    table.validate()?;
    Ok(table)
}
