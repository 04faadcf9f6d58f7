//! Finite-dimensional Lie rings over F_p given by structure constants:
//! the brute-force counterpart to the symbolic machinery. Rings are
//! validated at construction (alternation and Jacobi on every basis
//! triple), elements are coordinate vectors, and the predicates quantify
//! over all p^dim elements when that is feasible, falling back to a
//! seeded sample whose size is reported alongside the verdict.
//!
//! Adjoint matrices act on row vectors: ad(a) sends v to [v, a], and the
//! matrix product ad(a)·ad(b) is "bracket with a, then with b". Words in
//! the free algebra therefore map to matrix products in reading order,
//! which keeps every cross-check against the symbolic side sign-stable.

use crate::gf::{check_prime, m_add, m_mul, m_sub, residue, Echelon, ExtFieldTable, GfError};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LieError {
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("constants shape: {0}")]
    Shape(String),
    #[error("basis name '{0}' is invalid")]
    BadName(String),
    #[error("alternation fails at pair ({0}, {1})")]
    Alternation(String, String),
    #[error("Jacobi fails at triple ({0}, {1}, {2})")]
    Jacobi(String, String, String),
    #[error("vector length {0} does not match dimension {1}")]
    VectorLength(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("modulus mismatch: ring has {0}, field table has {1}")]
    ModulusMismatch(u64, u64),
    #[error("dimension must be positive")]
    ZeroDim,
}

/// Quantifier mode used by a predicate run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantification {
    /// Every combination was checked.
    Exhaustive { count: u64 },
    /// A seeded uniform sample was checked.
    Sampled { size: u64, seed: u64 },
}

/// A predicate verdict together with how the quantifier was evaluated.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PredicateReport {
    pub holds: bool,
    pub quantification: Quantification,
}

const EXHAUSTIVE_LIMIT: u128 = 1_000_000;
const SAMPLE_SIZE: u64 = 10_000;
const SAMPLE_SEED: u64 = 0x6c69_6572;

/// A Lie ring over F_p with a fixed basis: [e_i, e_j] = sum_k c_ijk e_k.
/// Alternation and the Jacobi identity are checked on every basis triple
/// at construction; instances are immutable afterwards.
#[derive(Debug, Clone)]
pub struct LieRing {
    p: u64,
    names: Vec<String>,
    /// constants[i][j] is the coordinate vector of [e_i, e_j]
    constants: Vec<Vec<Vec<u64>>>,
}

fn vec_is_zero(v: &[u64]) -> bool {
    v.iter().all(|&c| c == 0)
}

fn vec_add_into(acc: &mut [u64], v: &[u64], scale: u64, p: u64) {
    for (a, &b) in acc.iter_mut().zip(v) {
        *a = m_add(*a, m_mul(scale, b, p), p);
    }
}

impl LieRing {
    pub fn new(
        p: u64,
        names: Vec<String>,
        constants: Vec<Vec<Vec<u64>>>,
    ) -> Result<Self, LieError> {
        check_prime(p)?;
        let d = names.len();
        if d == 0 {
            return Err(LieError::ZeroDim);
        }
        for n in &names {
            let ok = !n.is_empty()
                && n.chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || names.iter().filter(|m| *m == n).count() > 1 {
                return Err(LieError::BadName(n.clone()));
            }
        }
        if constants.len() != d
            || constants.iter().any(|r| r.len() != d)
            || constants
                .iter()
                .any(|r| r.iter().any(|v| v.len() != d || v.iter().any(|&c| c >= p)))
        {
            return Err(LieError::Shape(format!(
                "expected a {d}x{d} table of length-{d} vectors with entries below {p}"
            )));
        }
        let ring = LieRing { p, names, constants };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let lhs = ring.constants[i][j][k];
                    let rhs = ring.constants[j][i][k];
                    if (i == j && lhs != 0) || m_add(lhs, rhs, p) != 0 {
                        return Err(LieError::Alternation(
                            ring.names[i].clone(),
                            ring.names[j].clone(),
                        ));
                    }
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut acc = vec![0u64; d];
                    let ij = &ring.constants[i][j];
                    let jk = &ring.constants[j][k];
                    let ki = &ring.constants[k][i];
                    for t in 0..d {
                        vec_add_into(&mut acc, &ring.constants[t][k], ij[t], p);
                        vec_add_into(&mut acc, &ring.constants[t][i], jk[t], p);
                        vec_add_into(&mut acc, &ring.constants[t][j], ki[t], p);
                    }
                    if !vec_is_zero(&acc) {
                        return Err(LieError::Jacobi(
                            ring.names[i].clone(),
                            ring.names[j].clone(),
                            ring.names[k].clone(),
                        ));
                    }
                }
            }
        }
        Ok(ring)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn constants(&self) -> &[Vec<Vec<u64>>] {
        &self.constants
    }

    fn check_vec(&self, x: &[u64]) -> Result<(), LieError> {
        if x.len() != self.dim() {
            return Err(LieError::VectorLength(x.len(), self.dim()));
        }
        Ok(())
    }

    /// The basis vector e_i.
    pub fn basis_vector(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// Bilinear bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[u64], y: &[u64]) -> Result<Vec<u64>, LieError> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    fn bracket_unchecked(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let d = self.dim();
        let mut out = vec![0u64; d];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                if y[j] == 0 {
                    continue;
                }
                let s = m_mul(x[i], y[j], self.p);
                vec_add_into(&mut out, &self.constants[i][j], s, self.p);
            }
        }
        out
    }

    /// The matrix of ad(a): v maps to [v, a], acting on row vectors, so
    /// row i is the coordinate vector of [e_i, a].
    pub fn ad_matrix(&self, a: &[u64]) -> Result<Vec<Vec<u64>>, LieError> {
        self.check_vec(a)?;
        Ok((0..self.dim())
            .map(|i| self.bracket_unchecked(&self.basis_vector(i), a))
            .collect())
    }

    /// The least subspace containing x and closed under bracketing with
    /// the whole ring. Fixpoint iteration, at most dim rounds.
    pub fn principal_ideal(&self, x: &[u64]) -> Result<Subspace, LieError> {
        self.check_vec(x)?;
        let mut sub = Subspace::new(self.p, self.dim());
        sub.insert(x.to_vec());
        loop {
            let mut grew = false;
            let basis = sub.basis();
            for v in &basis {
                for i in 0..self.dim() {
                    let w = self.bracket_unchecked(v, &self.basis_vector(i));
                    grew |= sub.insert(w);
                }
            }
            if !grew {
                return Ok(sub);
            }
        }
    }

    /// Span of all brackets [u, v] with u in a, v in b.
    fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut out = Subspace::new(self.p, self.dim());
        for u in a.basis() {
            for v in b.basis() {
                out.insert(self.bracket_unchecked(&u, &v));
            }
        }
        out
    }

    /// Whether all brackets inside the subspace vanish.
    pub fn is_abelian_subspace(&self, s: &Subspace) -> bool {
        self.bracket_span(s, s).dim() == 0
    }

    /// Whether x generates an abelian ideal.
    pub fn is_toastie(&self, x: &[u64]) -> Result<bool, LieError> {
        let ideal = self.principal_ideal(x)?;
        Ok(self.is_abelian_subspace(&ideal))
    }

    /// Whether every element generates an abelian ideal.
    pub fn every_element_toastie(&self) -> Result<PredicateReport, LieError> {
        self.quantify_elements(SAMPLE_SEED, |x| {
            self.is_toastie(x).expect("element of the ring itself")
        })
    }

    fn element_count(&self) -> u128 {
        (self.p as u128).pow(self.dim() as u32)
    }

    fn quantify_elements(
        &self,
        seed: u64,
        mut test: impl FnMut(&[u64]) -> bool,
    ) -> Result<PredicateReport, LieError> {
        let count = self.element_count();
        if count <= EXHAUSTIVE_LIMIT {
            let mut v = vec![0u64; self.dim()];
            loop {
                if !test(&v) {
                    return Ok(PredicateReport {
                        holds: false,
                        quantification: Quantification::Exhaustive {
                            count: count as u64,
                        },
                    });
                }
                if !next_vector(&mut v, self.p) {
                    return Ok(PredicateReport {
                        holds: true,
                        quantification: Quantification::Exhaustive {
                            count: count as u64,
                        },
                    });
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut holds = true;
        for _ in 0..SAMPLE_SIZE {
            let v: Vec<u64> = (0..self.dim()).map(|_| rng.gen_range(0..self.p)).collect();
            if !test(&v) {
                holds = false;
                break;
            }
        }
        Ok(PredicateReport {
            holds,
            quantification: Quantification::Sampled {
                size: SAMPLE_SIZE,
                seed,
            },
        })
    }

    fn quantify_pairs(
        &self,
        seed: u64,
        mut test: impl FnMut(&[u64], &[u64]) -> bool,
    ) -> Result<PredicateReport, LieError> {
        let count = self.element_count().saturating_mul(self.element_count());
        if count <= EXHAUSTIVE_LIMIT {
            let mut x = vec![0u64; self.dim()];
            loop {
                let mut y = vec![0u64; self.dim()];
                loop {
                    if !test(&x, &y) {
                        return Ok(PredicateReport {
                            holds: false,
                            quantification: Quantification::Exhaustive {
                                count: count as u64,
                            },
                        });
                    }
                    if !next_vector(&mut y, self.p) {
                        break;
                    }
                }
                if !next_vector(&mut x, self.p) {
                    return Ok(PredicateReport {
                        holds: true,
                        quantification: Quantification::Exhaustive {
                            count: count as u64,
                        },
                    });
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut holds = true;
        for _ in 0..SAMPLE_SIZE {
            let x: Vec<u64> = (0..self.dim()).map(|_| rng.gen_range(0..self.p)).collect();
            let y: Vec<u64> = (0..self.dim()).map(|_| rng.gen_range(0..self.p)).collect();
            if !test(&x, &y) {
                holds = false;
                break;
            }
        }
        Ok(PredicateReport {
            holds,
            quantification: Quantification::Sampled {
                size: SAMPLE_SIZE,
                seed,
            },
        })
    }

    /// Whether the principal ideal of every element is nilpotent of class
    /// below k: the series g_1 = I(x), g_{i+1} = [g_i, I(x)] reaches zero
    /// at step k.
    pub fn is_k_strong(&self, k: u32) -> Result<PredicateReport, LieError> {
        self.is_k_strong_seeded(k, SAMPLE_SEED)
    }

    /// [`Self::is_k_strong`] with a caller-chosen seed for the sampled
    /// fallback.
    pub fn is_k_strong_seeded(&self, k: u32, seed: u64) -> Result<PredicateReport, LieError> {
        self.quantify_elements(seed, |x| {
            let ideal = self
                .principal_ideal(x)
                .expect("element of the ring itself");
            let mut gamma = ideal.clone();
            for _ in 2..=k {
                if gamma.dim() == 0 {
                    break;
                }
                gamma = self.bracket_span(&gamma, &ideal);
            }
            gamma.dim() == 0
        })
    }

    /// Whether ad(y)^n vanishes for every y.
    pub fn is_n_engel(&self, n: u32) -> Result<PredicateReport, LieError> {
        self.is_n_engel_seeded(n, SAMPLE_SEED)
    }

    /// [`Self::is_n_engel`] with a caller-chosen seed for the sampled
    /// fallback.
    pub fn is_n_engel_seeded(&self, n: u32, seed: u64) -> Result<PredicateReport, LieError> {
        self.quantify_elements(seed, |y| {
            let m = self.ad_matrix(y).expect("element of the ring itself");
            mat_is_zero(&mat_pow(&m, n, self.p))
        })
    }

    /// Whether ad(x)^{k-1} ad(y)^{k-1} = (-1)^{k-1} ad(y)^{k-1} ad(x)^{k-1}
    /// for every pair, the matrix shadow of the two-variable identity.
    pub fn check_identity_i_on_ring(&self, k: u32) -> Result<PredicateReport, LieError> {
        self.check_identity_i_on_ring_seeded(k, SAMPLE_SEED)
    }

    /// [`Self::check_identity_i_on_ring`] with a caller-chosen seed for
    /// the sampled fallback.
    pub fn check_identity_i_on_ring_seeded(
        &self,
        k: u32,
        seed: u64,
    ) -> Result<PredicateReport, LieError> {
        let sign = residue(if k % 2 == 0 { -1 } else { 1 }, self.p);
        self.quantify_pairs(seed, |x, y| {
            let a = mat_pow(
                &self.ad_matrix(x).expect("element of the ring itself"),
                k - 1,
                self.p,
            );
            let b = mat_pow(
                &self.ad_matrix(y).expect("element of the ring itself"),
                k - 1,
                self.p,
            );
            let lhs = mat_mul(&a, &b, self.p);
            let rhs = mat_scale(&mat_mul(&b, &a, self.p), sign, self.p);
            lhs == rhs
        })
    }

    /// The ring on coordinate tuples over an extension field: dimension
    /// dim * degree, bracket taken componentwise through the field's
    /// multiplication table. The result passes full validation.
    pub fn extend_scalars(&self, table: &ExtFieldTable) -> Result<LieRing, LieError> {
        if table.modulus() != self.p {
            return Err(LieError::ModulusMismatch(self.p, table.modulus()));
        }
        let d = self.dim();
        let df = table.degree();
        let big = d * df;
        // basis index (u, s) -> s*d + u: block s carries the s-th field
        // coordinate of the tuple
        let mut names = Vec::with_capacity(big);
        for s in 0..df {
            for u in 0..d {
                names.push(format!("{}_{}", self.names[u], s + 1));
            }
        }
        let mut constants = vec![vec![vec![0u64; big]; big]; big];
        for s in 0..df {
            for u in 0..d {
                for t in 0..df {
                    for v in 0..d {
                        let row = &mut constants[s * d + u][t * d + v];
                        for r in 0..df {
                            let lam = table.constant(s, t, r);
                            if lam == 0 {
                                continue;
                            }
                            for w in 0..d {
                                let c = self.constants[u][v][w];
                                if c != 0 {
                                    row[r * d + w] =
                                        m_add(row[r * d + w], m_mul(lam, c, self.p), self.p);
                                }
                            }
                        }
                    }
                }
            }
        }
        LieRing::new(self.p, names, constants)
    }
}

/// Steps a coordinate vector through all of F_p^d; false once wrapped.
fn next_vector(v: &mut [u64], p: u64) -> bool {
    for c in v.iter_mut() {
        *c += 1;
        if *c < p {
            return true;
        }
        *c = 0;
    }
    false
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = m_add(out[i][j], m_mul(a[i][l], b[l][j], p), p);
            }
        }
    }
    out
}

fn mat_identity(n: usize) -> Vec<Vec<u64>> {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

fn mat_pow(a: &[Vec<u64>], n: u32, p: u64) -> Vec<Vec<u64>> {
    let mut out = mat_identity(a.len());
    for _ in 0..n {
        out = mat_mul(&out, a, p);
    }
    out
}

fn mat_scale(a: &[Vec<u64>], c: u64, p: u64) -> Vec<Vec<u64>> {
    a.iter()
        .map(|row| row.iter().map(|&x| m_mul(x, c, p)).collect())
        .collect()
}

fn mat_is_zero(a: &[Vec<u64>]) -> bool {
    a.iter().all(|row| vec_is_zero(row))
}

fn mat_sub(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| m_sub(x, y, p)).collect())
        .collect()
}

/// A subspace of F_p^d kept in reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    ech: Echelon,
}

impl Subspace {
    pub fn new(p: u64, ambient: usize) -> Self {
        Subspace {
            ambient,
            ech: Echelon::new(p, ambient),
        }
    }

    /// Adds a vector to the span; true when the dimension grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        self.ech.insert(v).is_some()
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.ech.contains(v)
    }

    /// Row-reduced basis, pivot columns strictly increasing.
    pub fn basis(&self) -> Vec<Vec<u64>> {
        self.ech.rows().map(|r| r.to_vec()).collect()
    }
}

/// The Heisenberg ring: dim 3, [e1, e2] = e3, everything else zero. This
/// is also the free-nilpotent class-2 quotient on two generators.
pub fn heisenberg(p: u64) -> Result<LieRing, LieError> {
    let names = vec!["e1".to_string(), "e2".to_string(), "e3".to_string()];
    let mut constants = vec![vec![vec![0u64; 3]; 3]; 3];
    constants[0][1][2] = 1;
    constants[1][0][2] = p - 1;
    LieRing::new(p, names, constants)
}

/// The free-nilpotent class-3 quotient on two generators: dim 5 with
/// basis `x, y, [x,y], [[x,y],x], [[x,y],y]`.
pub fn free_nilpotent_class3(p: u64) -> Result<LieRing, LieError> {
    let names: Vec<String> = (1..=5).map(|i| format!("e{}", i)).collect();
    let mut constants = vec![vec![vec![0u64; 5]; 5]; 5];
    let mut set = |i: usize, j: usize, k: usize| {
        constants[i][j][k] = 1;
        constants[j][i][k] = p - 1;
    };
    set(0, 1, 2);
    set(2, 0, 3);
    set(2, 1, 4);
    LieRing::new(p, names, constants)
}

/// The abelian ring of the given dimension.
pub fn abelian(p: u64, dim: usize) -> Result<LieRing, LieError> {
    if dim == 0 {
        return Err(LieError::ZeroDim);
    }
    let names: Vec<String> = (1..=dim).map(|i| format!("e{}", i)).collect();
    let constants = vec![vec![vec![0u64; dim]; dim]; dim];
    LieRing::new(p, names, constants)
}

/// Parses the structure-constant format: a header line
/// `p=3 dim=3 names=e1,e2,e3`, then one line per nonzero bracket,
/// `e1,e2 -> 1*e3 + 2*e1`. Omitted pairs are zero; the antisymmetric
/// counterpart of every listed pair is filled in automatically. Lines
/// starting with `#` and blank lines are skipped.
pub fn parse_lie_ring(text: &str) -> Result<LieRing, LieError> {
    let err = |line: usize, msg: String| LieError::Parse { line, msg };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| err(0, "empty input".to_string()))?;
    let mut p = None;
    let mut dim = None;
    let mut names: Option<Vec<String>> = None;
    for tok in header.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| err(hline, format!("expected key=value, got '{}'", tok)))?;
        match key {
            "p" => {
                p = Some(
                    val.parse::<u64>()
                        .map_err(|_| err(hline, format!("bad modulus '{}'", val)))?,
                )
            }
            "dim" => {
                dim = Some(
                    val.parse::<usize>()
                        .map_err(|_| err(hline, format!("bad dimension '{}'", val)))?,
                )
            }
            "names" => names = Some(val.split(',').map(|s| s.trim().to_string()).collect()),
            other => return Err(err(hline, format!("unknown header key '{}'", other))),
        }
    }
    let p = p.ok_or_else(|| err(hline, "missing p=".to_string()))?;
    let dim = dim.ok_or_else(|| err(hline, "missing dim=".to_string()))?;
    let names = names.ok_or_else(|| err(hline, "missing names=".to_string()))?;
    if names.len() != dim {
        return Err(err(
            hline,
            format!("dim={} but {} names given", dim, names.len()),
        ));
    }
    let index_of = |line: usize, name: &str| -> Result<usize, LieError> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| err(line, format!("unknown basis name '{}'", name)))
    };
    let mut constants = vec![vec![vec![0u64; dim]; dim]; dim];
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for (ln, line) in lines {
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| err(ln, "expected 'ei,ej -> terms'".to_string()))?;
        let (na, nb) = lhs
            .trim()
            .split_once(',')
            .ok_or_else(|| err(ln, "left side must be two names".to_string()))?;
        let i = index_of(ln, na.trim())?;
        let j = index_of(ln, nb.trim())?;
        if seen.contains(&(i, j)) || seen.contains(&(j, i)) {
            return Err(err(ln, format!("pair ({},{}) listed twice", na, nb)));
        }
        seen.push((i, j));
        let rhs = rhs.trim();
        let mut target = vec![0u64; dim];
        if rhs != "0" {
            for term in rhs.split('+') {
                let term = term.trim();
                let (c, name) = match term.split_once('*') {
                    Some((c, name)) => {
                        let c = c
                            .trim()
                            .parse::<i64>()
                            .map_err(|_| err(ln, format!("bad coefficient in '{}'", term)))?;
                        (c, name.trim())
                    }
                    None => (1, term),
                };
                let k = index_of(ln, name)?;
                target[k] = m_add(target[k], residue(c, p), p);
            }
        }
        for (k, &c) in target.iter().enumerate() {
            constants[i][j][k] = c;
            constants[j][i][k] = m_sub(0, c, p);
        }
    }
    LieRing::new(p, names, constants)
}

/// Serializes a ring in the format accepted by [`parse_lie_ring`].
pub fn serialize_lie_ring(ring: &LieRing) -> String {
    let mut out = format!(
        "p={} dim={} names={}\n",
        ring.modulus(),
        ring.dim(),
        ring.names().join(",")
    );
    for i in 0..ring.dim() {
        for j in (i + 1)..ring.dim() {
            let v = &ring.constants()[i][j];
            if vec_is_zero(v) {
                continue;
            }
            let terms: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(k, &c)| format!("{}*{}", c, ring.names()[k]))
                .collect();
            out.push_str(&format!(
                "{},{} -> {}\n",
                ring.names()[i],
                ring.names()[j],
                terms.join(" + ")
            ));
        }
    }
    out
}

/// ad respects the bracket: `ad([a,b])` is the matrix commutator
/// ad(a)ad(b) - ad(b)ad(a), since row-vector products compose left to
/// right. Checked on all basis pairs; a self-test for shipped rings.
pub fn ad_respects_bracket(ring: &LieRing) -> Result<bool, LieError> {
    for i in 0..ring.dim() {
        for j in 0..ring.dim() {
            let a = ring.basis_vector(i);
            let b = ring.basis_vector(j);
            let lhs = ring.ad_matrix(&ring.bracket(&a, &b)?)?;
            let ma = ring.ad_matrix(&a)?;
            let mb = ring.ad_matrix(&b)?;
            let rhs = mat_sub(
                &mat_mul(&ma, &mb, ring.modulus()),
                &mat_mul(&mb, &ma, ring.modulus()),
                ring.modulus(),
            );
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::ext_field_gf;

    #[test]
    fn heisenberg_brackets() {
        let h = heisenberg(3).unwrap();
        let e1 = h.basis_vector(0);
        let e2 = h.basis_vector(1);
        let e3 = h.basis_vector(2);
        assert_eq!(h.bracket(&e1, &e2).unwrap(), e3);
        assert_eq!(h.bracket(&e2, &e1).unwrap(), vec![0, 0, 2]);
        assert_eq!(h.bracket(&e3, &e1).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn jacobi_violation_names_triple() {
        // [e1,e2] = e1 and [e1,e3] = e2 break Jacobi at (e1,e2,e3)
        let p = 3;
        let mut constants = vec![vec![vec![0u64; 3]; 3]; 3];
        constants[0][1][0] = 1;
        constants[1][0][0] = p - 1;
        constants[0][2][1] = 1;
        constants[2][0][1] = p - 1;
        let names = vec!["e1".into(), "e2".into(), "e3".into()];
        match LieRing::new(p, names, constants) {
            Err(LieError::Jacobi(a, b, c)) => {
                assert_eq!((a.as_str(), b.as_str(), c.as_str()), ("e1", "e2", "e3"));
            }
            other => panic!("expected Jacobi error, got {other:?}"),
        }
    }

    #[test]
    fn alternation_violation_detected() {
        let mut constants = vec![vec![vec![0u64; 2]; 2]; 2];
        constants[0][0][1] = 1;
        let names = vec!["e1".into(), "e2".into()];
        assert!(matches!(
            LieRing::new(3, names, constants),
            Err(LieError::Alternation(_, _))
        ));
    }

    #[test]
    fn principal_ideals_in_heisenberg() {
        let h = heisenberg(3).unwrap();
        let center = h.principal_ideal(&h.basis_vector(2)).unwrap();
        assert_eq!(center.dim(), 1);
        let i1 = h.principal_ideal(&h.basis_vector(0)).unwrap();
        assert_eq!(i1.dim(), 2);
        assert!(i1.contains(&h.basis_vector(2)));
        let zero = h.principal_ideal(&[0, 0, 0]).unwrap();
        assert_eq!(zero.dim(), 0);
    }

    #[test]
    fn principal_ideal_is_bracket_closed() {
        let l = free_nilpotent_class3(5).unwrap();
        let x = vec![1, 2, 0, 3, 1];
        let ideal = l.principal_ideal(&x).unwrap();
        for v in ideal.basis() {
            for i in 0..l.dim() {
                let w = l.bracket(&v, &l.basis_vector(i)).unwrap();
                assert!(ideal.contains(&w));
            }
        }
    }

    #[test]
    fn heisenberg_predicates() {
        let h = heisenberg(3).unwrap();
        // every element generates an abelian ideal
        let all_toastie = h.every_element_toastie().unwrap();
        assert!(all_toastie.holds);
        assert_eq!(
            all_toastie.quantification,
            Quantification::Exhaustive { count: 27 }
        );
        assert!(h.is_k_strong(2).unwrap().holds);
        assert!(h.is_n_engel(2).unwrap().holds);
        assert!(!h.is_n_engel(1).unwrap().holds);
        assert!(h.check_identity_i_on_ring(2).unwrap().holds);
    }

    #[test]
    fn class3_predicates() {
        let l = free_nilpotent_class3(3).unwrap();
        let strong3 = l.is_k_strong(3).unwrap();
        assert!(strong3.holds);
        assert_eq!(
            strong3.quantification,
            Quantification::Exhaustive { count: 243 }
        );
        assert!(!l.is_k_strong(2).unwrap().holds);
        assert!(l.check_identity_i_on_ring(3).unwrap().holds);
        // e1 does not generate an abelian ideal here
        assert!(!l.is_toastie(&l.basis_vector(0)).unwrap());
    }

    #[test]
    fn abelian_rings_are_trivially_strong() {
        let l = abelian(5, 4).unwrap();
        assert!(l.is_k_strong(2).unwrap().holds);
        assert!(l.is_n_engel(1).unwrap().holds);
        assert!(l.check_identity_i_on_ring(4).unwrap().holds);
    }

    #[test]
    fn sampling_kicks_in_above_the_limit() {
        // 3^13 exceeds the exhaustive limit
        let l = abelian(3, 13).unwrap();
        let rep = l.is_k_strong(2).unwrap();
        assert!(rep.holds);
        assert!(matches!(
            rep.quantification,
            Quantification::Sampled { size: 10_000, .. }
        ));
    }

    #[test]
    fn ad_convention_matches_bracket() {
        for ring in [heisenberg(3).unwrap(), free_nilpotent_class3(7).unwrap()] {
            assert!(ad_respects_bracket(&ring).unwrap());
        }
    }

    #[test]
    fn strong_implies_engel_on_examples() {
        let h = heisenberg(5).unwrap();
        assert!(h.is_k_strong(2).unwrap().holds && h.is_n_engel(2).unwrap().holds);
        let l = free_nilpotent_class3(3).unwrap();
        assert!(l.is_k_strong(3).unwrap().holds && l.is_n_engel(3).unwrap().holds);
    }

    #[test]
    fn scalar_extension_of_heisenberg() {
        let h = heisenberg(3).unwrap();
        let f9 = ext_field_gf(3, 2, &[1, 0, 1]).unwrap();
        let ext = h.extend_scalars(&f9).unwrap();
        assert_eq!(ext.dim(), 6);
        assert!(ext.is_k_strong(2).unwrap().holds);
        assert!(ad_respects_bracket(&ext).unwrap());
    }

    #[test]
    fn trivial_extension_is_identity() {
        let l = free_nilpotent_class3(3).unwrap();
        let f = ExtFieldTable::trivial(3).unwrap();
        let ext = l.extend_scalars(&f).unwrap();
        assert_eq!(ext.constants(), l.constants());
    }

    #[test]
    fn abelian_extension_stays_abelian() {
        let l = abelian(3, 2).unwrap();
        let f9 = ext_field_gf(3, 2, &[1, 0, 1]).unwrap();
        let ext = l.extend_scalars(&f9).unwrap();
        assert!(ext
            .constants()
            .iter()
            .all(|r| r.iter().all(|v| vec_is_zero(v))));
    }

    #[test]
    fn file_round_trip() {
        let l = free_nilpotent_class3(3).unwrap();
        let text = serialize_lie_ring(&l);
        let back = parse_lie_ring(&text).unwrap();
        assert_eq!(back.constants(), l.constants());
        assert_eq!(back.names(), l.names());
    }

    #[test]
    fn parse_examples_and_errors() {
        let good = "# a comment\np=3 dim=3 names=e1,e2,e3\ne1,e2 -> 1*e3\n";
        let h = parse_lie_ring(good).unwrap();
        assert_eq!(h.constants(), heisenberg(3).unwrap().constants());

        let dup = "p=3 dim=3 names=e1,e2,e3\ne1,e2 -> 1*e3\ne2,e1 -> 2*e3\n";
        match parse_lie_ring(dup) {
            Err(LieError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }

        let unknown = "p=3 dim=2 names=e1,e2\ne1,z9 -> 1*e2\n";
        assert!(matches!(
            parse_lie_ring(unknown),
            Err(LieError::Parse { line: 2, .. })
        ));

        let nonprime = "p=4 dim=1 names=e1\n";
        assert!(matches!(
            parse_lie_ring(nonprime),
            Err(LieError::Gf(GfError::NotPrime(4)))
        ));
    }

    #[test]
    fn vector_length_checked() {
        let h = heisenberg(3).unwrap();
        assert!(matches!(
            h.bracket(&[1, 0], &[0, 1, 0]),
            Err(LieError::VectorLength(2, 3))
        ));
    }
}
