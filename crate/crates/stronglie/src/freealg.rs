//! The free associative algebra F_p<x_1,...,x_r>: words, sparse
//! polynomials, structural maps, and the text grammar shared by relation
//! files and the command line.
//!
//! * [`Word`]: a finite sequence of generator indices, ordered by degree
//!   then lexicographically (deglex). The empty word is the unit.
//! * [`Poly`]: finitely supported map word -> nonzero residue mod p.
//! * structural maps: [`mirror`] (anti-automorphism), [`swap_generators`],
//!   [`substitute`], [`expand_bracket`] (left-normed Lie brackets).
//! * multiweights: per-generator letter counts; [`multiweight_of`],
//!   [`multiweight_component`], [`words_of_multiweight`].
//! * text: [`parse_poly`] / [`poly_to_string`] with the grammar
//!   `poly := term (('+'|'-') term)*`, `term := int | [int '*'] factor
//!   ('*' factor)*`, `factor := name ['^' int]`; a bare integer denotes a
//!   multiple of the unit word.

use crate::gf::{check_prime, m_add, m_mul, m_sub, GfError};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Per-generator letter counts of a word. Index i counts generator i.
pub type Multiweight = Vec<u32>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FreeAlgError {
    #[error("mismatched moduli: {0} vs {1}")]
    MismatchedModuli(u64, u64),
    #[error("mismatched generator counts: {0} vs {1}")]
    MismatchedGenerators(u8, u8),
    #[error("generator index {0} out of range (count {1})")]
    GeneratorOutOfRange(u8, u8),
    #[error("not a permutation of the generators: {0:?}")]
    NotAPermutation(Vec<u8>),
    #[error("mixed multiweights {0:?} and {1:?}")]
    MixedMultiweight(Multiweight, Multiweight),
    #[error("the zero polynomial has no multiweight")]
    ZeroMultiweight,
    #[error("empty bracket expression")]
    EmptyBracket,
    #[error("substitution needs one image per generator: got {0}, need {1}")]
    BadSubstitutionArity(usize, usize),
    #[error("at most 26 named generators are supported, got {0}")]
    TooManyGenerators(u8),
    #[error("col {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// A word in the free monoid on the generators; the unit is the empty word.
///
/// `Ord` is deglex: shorter words first, same-length words lexicographic by
/// generator index. This is the canonical term order everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_indices(letters: &[u8]) -> Self {
        Word(letters.to_vec())
    }

    pub fn single(g: u8) -> Self {
        Word(vec![g])
    }

    /// g repeated n times.
    pub fn power(g: u8, n: usize) -> Self {
        Word(vec![g; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn multiweight(&self, ngens: u8) -> Multiweight {
        let mut mw = vec![0u32; ngens as usize];
        for &g in &self.0 {
            mw[g as usize] += 1;
        }
        mw
    }

    pub fn max_letter(&self) -> Option<u8> {
        self.0.iter().copied().max()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree of a multiweight.
pub fn mw_total(mw: &[u32]) -> u32 {
    mw.iter().sum()
}

/// All words of the given multiweight, in deglex (here: lexicographic)
/// order.
pub fn words_of_multiweight(mw: &[u32]) -> Vec<Word> {
    let mut out = Vec::new();
    let mut counts: Vec<u32> = mw.to_vec();
    let total = mw_total(mw) as usize;
    let mut cur: Vec<u8> = Vec::with_capacity(total);
    fn rec(counts: &mut [u32], cur: &mut Vec<u8>, total: usize, out: &mut Vec<Word>) {
        if cur.len() == total {
            out.push(Word::from_indices(cur));
            return;
        }
        for g in 0..counts.len() {
            if counts[g] > 0 {
                counts[g] -= 1;
                cur.push(g as u8);
                rec(counts, cur, total, out);
                cur.pop();
                counts[g] += 1;
            }
        }
    }
    rec(&mut counts, &mut cur, total, &mut out);
    out
}

/// A sparse element of F_p<x_1,...,x_r>: finitely supported map from words
/// to nonzero canonical residues.
///
/// Invariants: every stored coefficient is in (0, p); all arithmetic
/// partners must share modulus and generator count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    p: u64,
    ngens: u8,
    terms: BTreeMap<Word, u64>,
}

impl Poly {
    pub fn zero(p: u64, ngens: u8) -> Result<Self, FreeAlgError> {
        check_prime(p)?;
        Ok(Poly {
            p,
            ngens,
            terms: BTreeMap::new(),
        })
    }

    /// coeff * word, reduced mod p.
    pub fn monomial(word: Word, coeff: i64, p: u64, ngens: u8) -> Result<Self, FreeAlgError> {
        let mut f = Poly::zero(p, ngens)?;
        if let Some(&g) = word.letters().iter().find(|&&g| g >= ngens) {
            return Err(FreeAlgError::GeneratorOutOfRange(g, ngens));
        }
        f.add_term(&word, crate::gf::residue(coeff, p));
        Ok(f)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn generator_count(&self) -> u8 {
        self.ngens
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in deglex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, u64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &Word) -> u64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub(crate) fn add_term(&mut self, w: &Word, c: u64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert(0);
        *entry = m_add(*entry, c, self.p);
        if *entry == 0 {
            self.terms.remove(w);
        }
    }

    fn compatible(&self, other: &Poly) -> Result<(), FreeAlgError> {
        if self.p != other.p {
            return Err(FreeAlgError::MismatchedModuli(self.p, other.p));
        }
        if self.ngens != other.ngens {
            return Err(FreeAlgError::MismatchedGenerators(self.ngens, other.ngens));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, FreeAlgError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, FreeAlgError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w, m_sub(0, c, self.p));
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> Poly {
        let c = crate::gf::residue(c, self.p);
        let mut out = Poly {
            p: self.p,
            ngens: self.ngens,
            terms: BTreeMap::new(),
        };
        if c == 0 {
            return out;
        }
        for (w, a) in self.terms() {
            out.terms.insert(w.clone(), m_mul(a, c, self.p));
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(-1)
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, FreeAlgError> {
        self.compatible(other)?;
        let mut out = Poly {
            p: self.p,
            ngens: self.ngens,
            terms: BTreeMap::new(),
        };
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                out.add_term(&u.concat(v), m_mul(a, b, self.p));
            }
        }
        Ok(out)
    }

    /// u * self * v for words u, v.
    pub fn mul_words(&self, left: &Word, right: &Word) -> Poly {
        let mut out = Poly {
            p: self.p,
            ngens: self.ngens,
            terms: BTreeMap::new(),
        };
        for (w, c) in self.terms() {
            out.terms.insert(left.concat(w).concat(right), c);
        }
        out
    }

    /// Applies a word map monomial-by-monomial, re-accumulating
    /// coefficients (images may collide).
    fn map_monomials<F: Fn(&Word) -> Word>(&self, f: F) -> Poly {
        let mut out = Poly {
            p: self.p,
            ngens: self.ngens,
            terms: BTreeMap::new(),
        };
        for (w, c) in self.terms() {
            out.add_term(&f(w), c);
        }
        out
    }
}

/// The operation selector for [`poly_ops`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring operation on two polynomials.
pub fn poly_ops(f: &Poly, g: &Poly, op: PolyOp) -> Result<Poly, FreeAlgError> {
    match op {
        PolyOp::Add => f.add(g),
        PolyOp::Sub => f.sub(g),
        PolyOp::Mul => f.mul(g),
    }
}

/// The mirror anti-automorphism: reverses every word, fixes coefficients.
pub fn mirror(f: &Poly) -> Poly {
    f.map_monomials(|w| w.reversed())
}

/// Relabels generators along a permutation: letter g becomes `perm[g]`.
pub fn swap_generators(f: &Poly, perm: &[u8]) -> Result<Poly, FreeAlgError> {
    let n = f.generator_count() as usize;
    if perm.len() != n {
        return Err(FreeAlgError::NotAPermutation(perm.to_vec()));
    }
    let mut seen = vec![false; n];
    for &t in perm {
        if (t as usize) >= n || seen[t as usize] {
            return Err(FreeAlgError::NotAPermutation(perm.to_vec()));
        }
        seen[t as usize] = true;
    }
    Ok(f.map_monomials(|w| {
        Word::from_indices(&w.letters().iter().map(|&g| perm[g as usize]).collect::<Vec<_>>())
    }))
}

/// The a <-> b exchange on a two-generator polynomial.
pub fn swap_ab(f: &Poly) -> Poly {
    swap_generators(f, &[1, 0]).expect("two-generator swap is a permutation")
}

/// The common multiweight of all terms of f; mixed multiweights or the
/// zero polynomial are errors.
pub fn multiweight_of(f: &Poly) -> Result<Multiweight, FreeAlgError> {
    let mut it = f.terms();
    let first = match it.next() {
        None => return Err(FreeAlgError::ZeroMultiweight),
        Some((w, _)) => w.multiweight(f.generator_count()),
    };
    for (w, _) in it {
        let mw = w.multiweight(f.generator_count());
        if mw != first {
            return Err(FreeAlgError::MixedMultiweight(first, mw));
        }
    }
    Ok(first)
}

/// True when every term shares one multiweight (the zero polynomial
/// counts as multihomogeneous).
pub fn is_multihomogeneous(f: &Poly) -> bool {
    f.is_zero() || multiweight_of(f).is_ok()
}

/// The part of f supported on words of the given multiweight.
pub fn multiweight_component(f: &Poly, mw: &[u32]) -> Poly {
    let mut out = Poly {
        p: f.modulus(),
        ngens: f.generator_count(),
        terms: BTreeMap::new(),
    };
    for (w, c) in f.terms() {
        if w.multiweight(f.generator_count()) == mw {
            out.terms.insert(w.clone(), c);
        }
    }
    out
}

/// Splits f into its multiweight components, keyed by multiweight.
pub fn multiweight_split(f: &Poly) -> BTreeMap<Multiweight, Poly> {
    let mut out: BTreeMap<Multiweight, Poly> = BTreeMap::new();
    for (w, c) in f.terms() {
        let mw = w.multiweight(f.generator_count());
        let entry = out.entry(mw).or_insert_with(|| Poly {
            p: f.modulus(),
            ngens: f.generator_count(),
            terms: BTreeMap::new(),
        });
        entry.terms.insert(w.clone(), c);
    }
    out
}

/// Expands a left-normed bracket word into the free associative algebra:
/// `[x] = x` and `[w, y] = [w]y - y[w]`, so e.g. `[a,b,b]` becomes
/// ab^2 - 2bab + b^2a.
pub fn expand_bracket(w: &Word, p: u64, ngens: u8) -> Result<Poly, FreeAlgError> {
    let letters = w.letters();
    if letters.is_empty() {
        return Err(FreeAlgError::EmptyBracket);
    }
    let mut acc = Poly::monomial(Word::single(letters[0]), 1, p, ngens)?;
    for &g in &letters[1..] {
        let y = Poly::monomial(Word::single(g), 1, p, ngens)?;
        acc = acc.mul(&y)?.sub(&y.mul(&acc)?)?;
    }
    Ok(acc)
}

/// Monomial substitution endomorphism: generator i is replaced by
/// `images[i]` (the empty word is allowed) in every term.
pub fn substitute(f: &Poly, images: &[Word]) -> Result<Poly, FreeAlgError> {
    let n = f.generator_count() as usize;
    if images.len() != n {
        return Err(FreeAlgError::BadSubstitutionArity(images.len(), n));
    }
    for im in images {
        if let Some(&g) = im.letters().iter().find(|&&g| g as usize >= n) {
            return Err(FreeAlgError::GeneratorOutOfRange(g, f.generator_count()));
        }
    }
    Ok(f.map_monomials(|w| {
        let mut v = Vec::new();
        for &g in w.letters() {
            v.extend_from_slice(images[g as usize].letters());
        }
        Word(v)
    }))
}

/// Default generator names a, b, c, ... for up to 26 generators.
pub fn default_names(ngens: u8) -> Result<Vec<String>, FreeAlgError> {
    if ngens > 26 {
        return Err(FreeAlgError::TooManyGenerators(ngens));
    }
    Ok((0..ngens)
        .map(|i| ((b'a' + i) as char).to_string())
        .collect())
}

/// Renders a word as '*'-joined factors with '^' powers, e.g. `a^3*b*a`.
pub fn word_to_string(w: &Word, names: &[String]) -> String {
    if w.is_empty() {
        return String::new();
    }
    let mut parts: Vec<String> = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let g = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == g {
            run += 1;
        }
        let name = &names[g as usize];
        if run == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{}^{}", name, run));
        }
        i += run;
    }
    parts.join("*")
}

/// Canonical text form: deglex term order, canonical residues, coefficient
/// 1 omitted, the unit word printed as a bare integer.
pub fn poly_to_string(f: &Poly, names: &[String]) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    for (w, c) in f.terms() {
        let s = if w.is_empty() {
            format!("{}", c)
        } else if c == 1 {
            word_to_string(w, names)
        } else {
            format!("{}*{}", c, word_to_string(w, names))
        };
        parts.push(s);
    }
    parts.join(" + ")
}

impl fmt::Display for Poly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.ngens).map_err(|_| fmt::Error)?;
        write!(fm, "{}", poly_to_string(self, &names))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Name(usize), // generator index
    Star,
    Caret,
    Plus,
    Minus,
}

fn tokenize(text: &str, names: &[String]) -> Result<Vec<(usize, Tok)>, FreeAlgError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let col = i + 1;
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' => {
                i += 1;
            }
            b'*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            b'^' => {
                out.push((col, Tok::Caret));
                i += 1;
            }
            b'+' => {
                out.push((col, Tok::Plus));
                i += 1;
            }
            b'-' => {
                out.push((col, Tok::Minus));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s = &text[start..i];
                let v: u64 = s.parse().map_err(|_| FreeAlgError::Parse {
                    col,
                    msg: format!("integer '{}' out of range", s),
                })?;
                out.push((col, Tok::Int(v)));
            }
            b'a'..=b'z' => {
                let start = i;
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit())
                {
                    i += 1;
                }
                let s = &text[start..i];
                match names.iter().position(|n| n == s) {
                    Some(g) => out.push((col, Tok::Name(g))),
                    None => {
                        return Err(FreeAlgError::Parse {
                            col,
                            msg: format!("unknown generator '{}'", s),
                        })
                    }
                }
            }
            _ => {
                return Err(FreeAlgError::Parse {
                    col,
                    msg: format!("unexpected character '{}'", c as char),
                })
            }
        }
    }
    Ok(out)
}

/// Parses the polynomial grammar over the given generator names.
///
/// Errors carry the 1-based column of the offending token.
pub fn parse_poly(text: &str, names: &[String], p: u64) -> Result<Poly, FreeAlgError> {
    check_prime(p)?;
    let ngens = names.len() as u8;
    let toks = tokenize(text, names)?;
    let mut f = Poly::zero(p, ngens)?;
    let mut i = 0;
    let end_col = text.len() + 1;
    if toks.is_empty() {
        return Err(FreeAlgError::Parse {
            col: end_col,
            msg: "empty polynomial".into(),
        });
    }
    let mut sign_neg = false;
    loop {
        // one term
        let mut coeff: u64 = 1;
        let mut word: Vec<u8> = Vec::new();
        let mut saw_factor = false;
        let mut saw_coeff = false;
        if let Some(&(_, Tok::Int(v))) = toks.get(i) {
            coeff = v % p;
            saw_coeff = true;
            i += 1;
            if let Some(&(_, Tok::Star)) = toks.get(i) {
                i += 1;
            } else {
                // bare integer term: a multiple of the unit word
                saw_factor = true;
            }
        }
        let mut expect_factor = !saw_factor;
        while expect_factor {
            match toks.get(i) {
                Some(&(_, Tok::Name(g))) => {
                    i += 1;
                    let mut exp: usize = 1;
                    if let Some(&(_, Tok::Caret)) = toks.get(i) {
                        i += 1;
                        match toks.get(i) {
                            Some(&(col, Tok::Int(e))) => {
                                if e == 0 {
                                    return Err(FreeAlgError::Parse {
                                        col,
                                        msg: "exponent must be positive".into(),
                                    });
                                }
                                exp = e as usize;
                                i += 1;
                            }
                            other => {
                                return Err(FreeAlgError::Parse {
                                    col: other.map(|t| t.0).unwrap_or(end_col),
                                    msg: "expected exponent after '^'".into(),
                                })
                            }
                        }
                    }
                    word.extend(std::iter::repeat(g as u8).take(exp));
                    if let Some(&(_, Tok::Star)) = toks.get(i) {
                        i += 1;
                    } else {
                        expect_factor = false;
                    }
                }
                other => {
                    return Err(FreeAlgError::Parse {
                        col: other.map(|t| t.0).unwrap_or(end_col),
                        msg: if saw_coeff || !word.is_empty() {
                            "expected factor after '*'".into()
                        } else {
                            "expected term".into()
                        },
                    })
                }
            }
        }
        let c = if sign_neg { m_sub(0, coeff, p) } else { coeff };
        f.add_term(&Word(word), c);
        match toks.get(i) {
            None => break,
            Some(&(_, Tok::Plus)) => {
                sign_neg = false;
                i += 1;
            }
            Some(&(_, Tok::Minus)) => {
                sign_neg = true;
                i += 1;
            }
            Some(&(col, _)) => {
                return Err(FreeAlgError::Parse {
                    col,
                    msg: "expected '+' or '-' between terms".into(),
                })
            }
        }
    }
    Ok(f)
}
