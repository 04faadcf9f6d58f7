//! Ideal membership with certificates: decides whether a polynomial lies
//! in the two-sided ideal generated by a relation set, one multiweight at
//! a time.
//!
//! Because every relation is multihomogeneous the ideal is multigraded,
//! so the component at multiweight mw is spanned exactly by the products
//! u*r*v whose multiweights add up to mw; no completion is needed. Those
//! spanning rows are row-reduced over the deglex-ordered words of mw with
//! the originating (u, label, v) triples carried through elimination, so
//! membership comes with a replayable [`Certificate`].

use crate::freealg::{
    multiweight_split, word_to_string, FreeAlgError, Multiweight, Poly, Word,
};
use crate::gf::{inv_mod, m_add, m_mul, m_sub, GfError};
use crate::relations::{RelError, RelationSet};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NilquotError {
    #[error("multiweight mismatch: basis at {0:?}, polynomial at {1:?}")]
    MultiweightMismatch(Multiweight, Multiweight),
    #[error("polynomial is not multihomogeneous: {0}")]
    NotHomogeneous(FreeAlgError),
    #[error("unknown relation label '{0}'")]
    UnknownLabel(String),
    #[error("relation '{0}' has no swap image in this set")]
    NoSwapImage(String),
    #[error("operation needs a {1}-generator relation set, got {0}")]
    GeneratorCount(u8, u8),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// One spanning generator of an ideal component: left word, relation
/// label, right word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogEntry {
    pub left: Word,
    pub label: String,
    pub right: Word,
}

/// Row-reduced spanning matrix of one multiweight component of the ideal,
/// with the original row provenance retained.
///
/// Columns are the deglex-ordered words of the multiweight; the matrix is
/// in reduced row-echelon form and each reduced row is stored alongside
/// its expression as a combination of original spanning rows.
#[derive(Debug, Clone)]
pub struct IdealBasis {
    p: u64,
    ngens: u8,
    mw: Multiweight,
    words: Vec<Word>,
    word_idx: BTreeMap<Word, usize>,
    rows: Vec<Vec<u64>>,
    combos: Vec<BTreeMap<usize, u64>>,
    pivots: BTreeMap<usize, usize>,
    generator_log: Vec<LogEntry>,
}

fn add_scaled_combo(
    into: &mut BTreeMap<usize, u64>,
    from: &BTreeMap<usize, u64>,
    factor: u64,
    p: u64,
) {
    for (&gi, &c) in from {
        let entry = into.entry(gi).or_insert(0);
        *entry = m_add(*entry, m_mul(factor, c, p), p);
        if *entry == 0 {
            into.remove(&gi);
        }
    }
}

impl IdealBasis {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn multiweight(&self) -> &Multiweight {
        &self.mw
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Columns, i.e. all words of the multiweight in deglex order.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Original spanning rows in enumeration order.
    pub fn generator_log(&self) -> &[LogEntry] {
        &self.generator_log
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    fn insert_row(&mut self, mut vec: Vec<u64>, mut combo: BTreeMap<usize, u64>) {
        for col in 0..vec.len() {
            if vec[col] == 0 {
                continue;
            }
            if let Some(&r) = self.pivots.get(&col) {
                let factor = vec[col];
                for j in col..vec.len() {
                    vec[j] = m_sub(vec[j], m_mul(factor, self.rows[r][j], self.p), self.p);
                }
                let scaled: BTreeMap<usize, u64> = self.combos[r]
                    .iter()
                    .map(|(&gi, &c)| (gi, m_sub(0, c, self.p)))
                    .collect();
                add_scaled_combo(&mut combo, &scaled, factor, self.p);
            }
        }
        let lead = match vec.iter().position(|&c| c != 0) {
            None => return,
            Some(l) => l,
        };
        let inv = inv_mod(vec[lead], self.p).expect("leading coefficient nonzero");
        for c in vec.iter_mut() {
            *c = m_mul(*c, inv, self.p);
        }
        let combo: BTreeMap<usize, u64> = combo
            .iter()
            .map(|(&gi, &c)| (gi, m_mul(c, inv, self.p)))
            .collect();
        // clear the new pivot column from every existing row
        let new_index = self.rows.len();
        for r in 0..self.rows.len() {
            let factor = self.rows[r][lead];
            if factor == 0 {
                continue;
            }
            for j in 0..vec.len() {
                self.rows[r][j] = m_sub(self.rows[r][j], m_mul(factor, vec[j], self.p), self.p);
            }
            let scaled: BTreeMap<usize, u64> = combo
                .iter()
                .map(|(&gi, &c)| (gi, m_sub(0, c, self.p)))
                .collect();
            add_scaled_combo(&mut self.combos[r], &scaled, factor, self.p);
        }
        self.pivots.insert(lead, new_index);
        self.rows.push(vec);
        self.combos.push(combo);
    }

    fn dense(&self, f: &Poly) -> Result<Vec<u64>, NilquotError> {
        let mut vec = vec![0u64; self.words.len()];
        for (w, c) in f.terms() {
            match self.word_idx.get(w) {
                Some(&i) => vec[i] = c,
                None => {
                    return Err(NilquotError::MultiweightMismatch(
                        self.mw.clone(),
                        w.multiweight(self.ngens),
                    ))
                }
            }
        }
        Ok(vec)
    }

    fn poly_from_dense(&self, vec: &[u64]) -> Poly {
        let mut f = Poly::zero(self.p, self.ngens).expect("validated modulus");
        for (i, &c) in vec.iter().enumerate() {
            if c != 0 {
                f = f
                    .add(&Poly::monomial(self.words[i].clone(), c as i64, self.p, self.ngens)
                        .expect("word of this multiweight"))
                    .expect("same modulus");
            }
        }
        f
    }

    /// Reduces f against the row space and reports which combination of
    /// original spanning rows was subtracted: f = combination + remainder.
    pub fn reduce_with_combo(
        &self,
        f: &Poly,
    ) -> Result<(Poly, BTreeMap<usize, u64>), NilquotError> {
        if f.modulus() != self.p {
            return Err(FreeAlgError::MismatchedModuli(f.modulus(), self.p).into());
        }
        if f.generator_count() != self.ngens {
            return Err(FreeAlgError::MismatchedGenerators(f.generator_count(), self.ngens).into());
        }
        let mut vec = self.dense(f)?;
        let mut combo: BTreeMap<usize, u64> = BTreeMap::new();
        for col in 0..vec.len() {
            if vec[col] == 0 {
                continue;
            }
            if let Some(&r) = self.pivots.get(&col) {
                let factor = vec[col];
                for j in col..vec.len() {
                    vec[j] = m_sub(vec[j], m_mul(factor, self.rows[r][j], self.p), self.p);
                }
                add_scaled_combo(&mut combo, &self.combos[r], factor, self.p);
            }
        }
        Ok((self.poly_from_dense(&vec), combo))
    }
}

/// Enumerates all multiweights componentwise between zero and `limit`, in
/// lexicographic order.
pub fn sub_multiweights(limit: &[u32]) -> Vec<Multiweight> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; limit.len()];
    loop {
        out.push(cur.clone());
        let mut pos = limit.len();
        while pos > 0 {
            let i = pos - 1;
            if cur[i] < limit[i] {
                cur[i] += 1;
                for c in cur.iter_mut().skip(pos) {
                    *c = 0;
                }
                break;
            }
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
    }
}

/// The raw spanning generators of the multiweight-mw ideal component:
/// every (u, label, v) with multiweight(u) + multiweight(rel) +
/// multiweight(v) = mw, paired with the expanded product, in the
/// deterministic enumeration order shared with [`ideal_basis`].
pub fn spanning_rows(
    rs: &RelationSet,
    mw: &[u32],
) -> Result<Vec<(LogEntry, Poly)>, NilquotError> {
    let ngens = rs.generator_count();
    if mw.len() != ngens as usize {
        return Err(NilquotError::MultiweightMismatch(
            mw.to_vec(),
            vec![0; ngens as usize],
        ));
    }
    let mut out = Vec::new();
    for rel in rs.relations() {
        let rmw = rel.multiweight();
        if rmw.iter().zip(mw).any(|(&r, &m)| r > m) {
            continue;
        }
        let diff: Multiweight = mw.iter().zip(rmw).map(|(&m, &r)| m - r).collect();
        for mw_u in sub_multiweights(&diff) {
            let mw_v: Multiweight = diff.iter().zip(&mw_u).map(|(&d, &u)| d - u).collect();
            for u in crate::freealg::words_of_multiweight(&mw_u) {
                for v in crate::freealg::words_of_multiweight(&mw_v) {
                    let prod = rel.poly().mul_words(&u, &v);
                    out.push((
                        LogEntry {
                            left: u.clone(),
                            label: rel.label().to_string(),
                            right: v.clone(),
                        },
                        prod,
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Row-reduces the spanning generators of the multiweight-mw ideal
/// component, tracking origins.
pub fn ideal_basis(rs: &RelationSet, mw: &[u32]) -> Result<IdealBasis, NilquotError> {
    let words = crate::freealg::words_of_multiweight(mw);
    let word_idx: BTreeMap<Word, usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let mut basis = IdealBasis {
        p: rs.modulus(),
        ngens: rs.generator_count(),
        mw: mw.to_vec(),
        words,
        word_idx,
        rows: Vec::new(),
        combos: Vec::new(),
        pivots: BTreeMap::new(),
        generator_log: Vec::new(),
    };
    for (entry, prod) in spanning_rows(rs, mw)? {
        let gi = basis.generator_log.len();
        basis.generator_log.push(entry);
        let vec = basis.dense(&prod)?;
        let mut combo = BTreeMap::new();
        combo.insert(gi, 1u64);
        basis.insert_row(vec, combo);
    }
    Ok(basis)
}

/// Normal form of f modulo the basis's row space.
pub fn reduce(f: &Poly, basis: &IdealBasis) -> Result<Poly, NilquotError> {
    Ok(basis.reduce_with_combo(f)?.0)
}

/// One term of a certificate: coeff * left * (relation) * right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertTerm {
    pub coeff: u64,
    pub left: Word,
    pub rel: String,
    pub right: Word,
}

/// An explicit expression of a polynomial as a combination of two-sided
/// multiples of relations. Re-expansion is exact, not modulo anything.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Certificate {
    pub combination: Vec<CertTerm>,
}

#[derive(Serialize)]
struct CertTermJson {
    coeff: u64,
    left: String,
    rel: String,
    right: String,
}

impl Certificate {
    pub fn is_empty(&self) -> bool {
        self.combination.is_empty()
    }

    pub fn len(&self) -> usize {
        self.combination.len()
    }

    /// Canonicalizes: merges duplicate (left, rel, right) triples mod p,
    /// drops zero coefficients, sorts by (rel, left, right).
    pub fn normalized(&self, p: u64) -> Certificate {
        let mut acc: BTreeMap<(String, Word, Word), u64> = BTreeMap::new();
        for t in &self.combination {
            let key = (t.rel.clone(), t.left.clone(), t.right.clone());
            let entry = acc.entry(key).or_insert(0);
            *entry = m_add(*entry, t.coeff % p, p);
        }
        Certificate {
            combination: acc
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|((rel, left, right), coeff)| CertTerm {
                    coeff,
                    left,
                    rel,
                    right,
                })
                .collect(),
        }
    }

    /// Sum of two certificates (no reduction beyond coefficient merging).
    pub fn add(&self, other: &Certificate, p: u64) -> Certificate {
        let mut combination = self.combination.clone();
        combination.extend(other.combination.iter().cloned());
        Certificate { combination }.normalized(p)
    }

    /// The certificate scaled by c.
    pub fn scale(&self, c: i64, p: u64) -> Certificate {
        let c = crate::gf::residue(c, p);
        Certificate {
            combination: self
                .combination
                .iter()
                .map(|t| CertTerm {
                    coeff: m_mul(t.coeff, c, p),
                    left: t.left.clone(),
                    rel: t.rel.clone(),
                    right: t.right.clone(),
                })
                .collect(),
        }
        .normalized(p)
    }

    /// Wraps every term as left * term * right; certifies l*f*r when self
    /// certifies f.
    pub fn mul_words(&self, left: &Word, right: &Word) -> Certificate {
        Certificate {
            combination: self
                .combination
                .iter()
                .map(|t| CertTerm {
                    coeff: t.coeff,
                    left: left.concat(&t.left),
                    rel: t.rel.clone(),
                    right: t.right.concat(right),
                })
                .collect(),
        }
    }

    /// Applies the a<->b swap: words are relabeled and each relation label
    /// is resolved to the label of its swapped polynomial in rs (add or
    /// strip the "s" suffix; keep the label when its polynomial is
    /// swap-invariant). Certifies swap(f) when self certifies f.
    pub fn swapped(&self, rs: &RelationSet) -> Result<Certificate, NilquotError> {
        if rs.generator_count() != 2 {
            return Err(NilquotError::GeneratorCount(rs.generator_count(), 2));
        }
        let swap_word = |w: &Word| {
            Word::from_indices(
                &w.letters()
                    .iter()
                    .map(|&g| if g == 0 { 1 } else { 0 })
                    .collect::<Vec<_>>(),
            )
        };
        let mut combination = Vec::with_capacity(self.combination.len());
        for t in &self.combination {
            let rel = resolve_swap_label(rs, &t.rel)?;
            combination.push(CertTerm {
                coeff: t.coeff,
                left: swap_word(&t.left),
                rel,
                right: swap_word(&t.right),
            });
        }
        Ok(Certificate { combination })
    }

    /// JSON array of {coeff, left, rel, right} with words rendered over
    /// the given generator names.
    pub fn to_json(&self, names: &[String]) -> String {
        let items: Vec<CertTermJson> = self
            .combination
            .iter()
            .map(|t| CertTermJson {
                coeff: t.coeff,
                left: word_to_string(&t.left, names),
                rel: t.rel.clone(),
                right: word_to_string(&t.right, names),
            })
            .collect();
        serde_json::to_string(&items).expect("plain data serializes")
    }
}

/// The label naming `swap(rs[label])` inside rs.
pub fn resolve_swap_label(rs: &RelationSet, label: &str) -> Result<String, NilquotError> {
    let rel = rs
        .relation(label)
        .ok_or_else(|| NilquotError::UnknownLabel(label.to_string()))?;
    let with_s = format!("{}s", label);
    if rs.relation(&with_s).is_some() {
        return Ok(with_s);
    }
    if let Some(base) = label.strip_suffix('s') {
        if rs.relation(base).is_some() {
            return Ok(base.to_string());
        }
    }
    if crate::freealg::swap_ab(rel.poly()) == *rel.poly() {
        return Ok(label.to_string());
    }
    Err(NilquotError::NoSwapImage(label.to_string()))
}

/// Membership outcome; the certificate is present only when requested and
/// the polynomial is a member.
#[derive(Debug, Clone)]
pub struct Membership {
    pub member: bool,
    pub certificate: Option<Certificate>,
}

fn certificate_from_combo(basis: &IdealBasis, combo: &BTreeMap<usize, u64>) -> Certificate {
    Certificate {
        combination: combo
            .iter()
            .map(|(&gi, &c)| {
                let e = &basis.generator_log[gi];
                CertTerm {
                    coeff: c,
                    left: e.left.clone(),
                    rel: e.label.clone(),
                    right: e.right.clone(),
                }
            })
            .collect(),
    }
}

/// Decides membership of f in the two-sided ideal generated by rs.
///
/// Non-homogeneous f is split into multiweight components, all of which
/// must be members; certificates merge across components.
pub fn is_member(
    f: &Poly,
    rs: &RelationSet,
    want_certificate: bool,
) -> Result<Membership, NilquotError> {
    let mut oracle = MembershipOracle::new(rs.clone());
    oracle.is_member(f, want_certificate)
}

/// Checks Σ coeff·left·rel·right = f by exact re-expansion.
pub fn verify_certificate(
    cert: &Certificate,
    f: &Poly,
    rs: &RelationSet,
) -> Result<bool, NilquotError> {
    let mut sum = Poly::zero(rs.modulus(), rs.generator_count())?;
    for t in &cert.combination {
        let rel = rs
            .relation(&t.rel)
            .ok_or_else(|| NilquotError::UnknownLabel(t.rel.clone()))?;
        let prod = rel.poly().mul_words(&t.left, &t.right).scale(t.coeff as i64);
        sum = sum.add(&prod)?;
    }
    Ok(sum == *f)
}

/// Dimensions of the quotient algebra by multiweight, for every
/// multiweight of total degree <= max_degree (the empty multiweight
/// included).
pub fn quotient_dimensions(
    rs: &RelationSet,
    max_degree: u32,
) -> Result<BTreeMap<Multiweight, usize>, NilquotError> {
    let ngens = rs.generator_count() as usize;
    let mut out = BTreeMap::new();
    // enumerate all multiweights with total degree <= max_degree
    fn rec(
        prefix: &mut Multiweight,
        remaining_slots: usize,
        budget: u32,
        acc: &mut Vec<Multiweight>,
    ) {
        if remaining_slots == 0 {
            acc.push(prefix.clone());
            return;
        }
        for c in 0..=budget {
            prefix.push(c);
            rec(prefix, remaining_slots - 1, budget - c, acc);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    rec(&mut Vec::new(), ngens, max_degree, &mut all);
    for mw in all {
        let basis = ideal_basis(rs, &mw)?;
        let dim = basis.words().len() - basis.rank();
        out.insert(mw, dim);
    }
    Ok(out)
}

/// A caching wrapper: one [`IdealBasis`] per multiweight, built on first
/// use and reused across queries.
pub struct MembershipOracle {
    rs: RelationSet,
    cache: BTreeMap<Multiweight, IdealBasis>,
}

impl MembershipOracle {
    pub fn new(rs: RelationSet) -> Self {
        MembershipOracle {
            rs,
            cache: BTreeMap::new(),
        }
    }

    pub fn relation_set(&self) -> &RelationSet {
        &self.rs
    }

    pub fn basis(&mut self, mw: &[u32]) -> Result<&IdealBasis, NilquotError> {
        if !self.cache.contains_key(mw) {
            let basis = ideal_basis(&self.rs, mw)?;
            self.cache.insert(mw.to_vec(), basis);
        }
        Ok(&self.cache[mw])
    }

    /// Componentwise normal form of f (non-homogeneous inputs allowed).
    pub fn reduce(&mut self, f: &Poly) -> Result<Poly, NilquotError> {
        let mut out = Poly::zero(f.modulus(), f.generator_count())?;
        for (mw, part) in multiweight_split(f) {
            let basis = self.basis(&mw)?;
            let (rem, _) = basis.reduce_with_combo(&part)?;
            out = out.add(&rem)?;
        }
        Ok(out)
    }

    pub fn is_member(
        &mut self,
        f: &Poly,
        want_certificate: bool,
    ) -> Result<Membership, NilquotError> {
        if f.modulus() != self.rs.modulus() {
            return Err(FreeAlgError::MismatchedModuli(f.modulus(), self.rs.modulus()).into());
        }
        if f.generator_count() != self.rs.generator_count() {
            return Err(FreeAlgError::MismatchedGenerators(
                f.generator_count(),
                self.rs.generator_count(),
            )
            .into());
        }
        let mut cert = Certificate::default();
        for (mw, part) in multiweight_split(f) {
            let basis = self.basis(&mw)?;
            let (rem, combo) = basis.reduce_with_combo(&part)?;
            if !rem.is_zero() {
                return Ok(Membership {
                    member: false,
                    certificate: None,
                });
            }
            if want_certificate {
                cert = cert.add(&certificate_from_combo(basis, &combo), self.rs.modulus());
            }
        }
        Ok(Membership {
            member: true,
            certificate: want_certificate.then_some(cert),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{default_names, parse_poly, swap_ab};
    use crate::relations::{standard_relation_set, Provenance, RelationChoice};
    use rand::{Rng, SeedableRng};

    fn names2() -> Vec<String> {
        default_names(2).unwrap()
    }

    fn pp(s: &str, p: u64) -> Poly {
        parse_poly(s, &names2(), p).unwrap()
    }

    fn empty_set(p: u64) -> RelationSet {
        RelationSet::new(0, p, 2, "empty", vec![], Provenance::Generated).unwrap()
    }

    #[test]
    fn single_relation_basis() {
        let rs = standard_relation_set(2, 5, RelationChoice::All).unwrap();
        let basis = ideal_basis(&rs, &[1, 1]).unwrap();
        assert_eq!(basis.rank(), 1);
        assert_eq!(basis.pivot_columns(), vec![0]); // ab is the first word
        assert_eq!(basis.words().len(), 2);
        let m = is_member(&pp("a*b + b*a", 5), &rs, true).unwrap();
        assert!(m.member);
        let cert = m.certificate.unwrap();
        assert!(verify_certificate(&cert, &pp("a*b + b*a", 5), &rs).unwrap());
        let m2 = is_member(&pp("a*b - b*a", 5), &rs, true).unwrap();
        assert!(!m2.member);
        assert!(m2.certificate.is_none());
        let red = reduce(&pp("a*b - b*a", 5), &basis).unwrap();
        assert_eq!(red, pp("3*b*a", 5)); // ab - ba - (ab + ba) = -2ba
    }

    #[test]
    fn empty_set_has_rank_zero() {
        let rs = empty_set(5);
        let basis = ideal_basis(&rs, &[2, 2]).unwrap();
        assert_eq!(basis.rank(), 0);
        let f = pp("a^2*b^2", 5);
        assert_eq!(reduce(&f, &basis).unwrap(), f);
        let dims = quotient_dimensions(&rs, 3).unwrap();
        assert_eq!(dims[&vec![3, 0]], 1);
        assert_eq!(dims[&vec![2, 1]], 3);
        assert_eq!(dims[&vec![0, 0]], 1);
    }

    #[test]
    fn k4_all_membership_and_rank() {
        let rs = standard_relation_set(4, 3, RelationChoice::All).unwrap();
        let basis = ideal_basis(&rs, &[3, 3]).unwrap();
        assert_eq!(basis.words().len(), 20);
        assert_eq!(basis.rank(), 15);
        let f = pp("a^3*b^3 + b^3*a^3", 3);
        let m = is_member(&f, &rs, true).unwrap();
        assert!(m.member);
        assert!(verify_certificate(&m.certificate.unwrap(), &f, &rs).unwrap());
    }

    #[test]
    fn k4_short_characteristic_two_gap() {
        let rs = standard_relation_set(4, 2, RelationChoice::Short).unwrap();
        let basis = ideal_basis(&rs, &[3, 3]).unwrap();
        let f = pp("a^3*b^3 + b^3*a^3", 2);
        let red = reduce(&f, &basis).unwrap();
        assert!(!red.is_zero());
        // adding the long relations closes the gap at p=2
        let all = standard_relation_set(4, 2, RelationChoice::All).unwrap();
        assert!(is_member(&f, &all, false).unwrap().member);
    }

    #[test]
    fn k5_top_component_vanishes() {
        let rs = standard_relation_set(5, 3, RelationChoice::All).unwrap();
        let basis = ideal_basis(&rs, &[4, 4]).unwrap();
        assert_eq!(basis.words().len(), 70);
        assert_eq!(basis.rank(), 70);
        assert!(reduce(&pp("a^4*b^4", 3), &basis).unwrap().is_zero());
    }

    #[test]
    fn certificate_ops() {
        let rs = standard_relation_set(4, 5, RelationChoice::All).unwrap();
        let s2 = rs.relation("S2").unwrap().poly().clone();
        let b = Word::single(1);
        // certificate for S2 * b built by hand
        let cert = Certificate {
            combination: vec![CertTerm {
                coeff: 1,
                left: Word::empty(),
                rel: "S2".into(),
                right: b.clone(),
            }],
        };
        let s8 = s2.mul_words(&Word::empty(), &b);
        assert!(verify_certificate(&cert, &s8, &rs).unwrap());
        assert_eq!(cert.to_json(&names2()), r#"[{"coeff":1,"left":"","rel":"S2","right":"b"}]"#);
        // tampering breaks it
        let bad = cert.scale(2, 5);
        assert!(!verify_certificate(&bad, &s8, &rs).unwrap());
        // scaling certifies the scaled polynomial
        assert!(verify_certificate(&bad, &s8.scale(2), &rs).unwrap());
        // swap certifies the swapped polynomial
        let sw = cert.swapped(&rs).unwrap();
        assert_eq!(sw.combination[0].rel, "S2s");
        assert!(verify_certificate(&sw, &swap_ab(&s8), &rs).unwrap());
        // wrapping certifies u * f * v
        let wrapped = cert.mul_words(&Word::single(0), &Word::empty());
        let target = s8.mul_words(&Word::single(0), &Word::empty());
        assert!(verify_certificate(&wrapped, &target, &rs).unwrap());
        // empty certificate certifies zero
        let zero = Poly::zero(5, 2).unwrap();
        assert!(verify_certificate(&Certificate::default(), &zero, &rs).unwrap());
        // unknown label is an error
        let ghost = Certificate {
            combination: vec![CertTerm {
                coeff: 1,
                left: Word::empty(),
                rel: "Z9".into(),
                right: Word::empty(),
            }],
        };
        assert!(matches!(
            verify_certificate(&ghost, &zero, &rs),
            Err(NilquotError::UnknownLabel(_))
        ));
    }

    #[test]
    fn swap_label_resolution() {
        let rs = standard_relation_set(4, 3, RelationChoice::All).unwrap();
        assert_eq!(resolve_swap_label(&rs, "S2").unwrap(), "S2s");
        assert_eq!(resolve_swap_label(&rs, "S2s").unwrap(), "S2");
        // L1 is swap-invariant, so it is its own image
        assert_eq!(resolve_swap_label(&rs, "L1").unwrap(), "L1");
        assert!(matches!(
            resolve_swap_label(&rs, "Q7"),
            Err(NilquotError::UnknownLabel(_))
        ));
    }

    #[test]
    fn non_homogeneous_split_membership() {
        let rs = standard_relation_set(2, 5, RelationChoice::All).unwrap();
        // (ab + ba) + a*(ab + ba): two different multiweights
        let f = pp("a*b + b*a + a^2*b + a*b*a", 5);
        let m = is_member(&f, &rs, true).unwrap();
        assert!(m.member);
        let cert = m.certificate.unwrap();
        assert!(verify_certificate(&cert, &f, &rs).unwrap());
        // perturbing one component breaks membership
        let g = pp("a*b + b*a + a^2*b", 5);
        assert!(!is_member(&g, &rs, false).unwrap().member);
    }

    #[test]
    fn reduce_is_linear_and_idempotent() {
        let rs = standard_relation_set(4, 7, RelationChoice::All).unwrap();
        let basis = ideal_basis(&rs, &[2, 2]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let words = basis.words().to_vec();
        for _ in 0..20 {
            let mut f = Poly::zero(7, 2).unwrap();
            let mut g = Poly::zero(7, 2).unwrap();
            for w in &words {
                f = f
                    .add(&Poly::monomial(w.clone(), rng.gen_range(0..7), 7, 2).unwrap())
                    .unwrap();
                g = g
                    .add(&Poly::monomial(w.clone(), rng.gen_range(0..7), 7, 2).unwrap())
                    .unwrap();
            }
            let alpha = rng.gen_range(1..7);
            let beta = rng.gen_range(1..7);
            let lhs = reduce(&f.scale(alpha).add(&g.scale(beta)).unwrap(), &basis).unwrap();
            let rhs = reduce(&f, &basis)
                .unwrap()
                .scale(alpha)
                .add(&reduce(&g, &basis).unwrap().scale(beta))
                .unwrap();
            assert_eq!(lhs, rhs);
            let once = reduce(&f, &basis).unwrap();
            assert_eq!(reduce(&once, &basis).unwrap(), once);
        }
    }

    #[test]
    fn rank_invariant_under_relation_order() {
        let rs = standard_relation_set(4, 3, RelationChoice::All).unwrap();
        let mut rev: Vec<(String, Poly)> = rs
            .relations()
            .iter()
            .map(|r| (r.label().to_string(), r.poly().clone()))
            .collect();
        rev.reverse();
        let rs_rev =
            RelationSet::new(4, 3, 2, "k4_rev", rev, Provenance::Generated).unwrap();
        for mw in [[3u32, 3], [2, 3], [2, 2]] {
            assert_eq!(
                ideal_basis(&rs, &mw).unwrap().rank(),
                ideal_basis(&rs_rev, &mw).unwrap().rank()
            );
        }
    }

    #[test]
    fn monotonicity_under_enlargement() {
        let p = 3;
        let short = standard_relation_set(4, p, RelationChoice::Short).unwrap();
        let all = standard_relation_set(4, p, RelationChoice::All).unwrap();
        for mw in [[3u32, 3], [2, 2], [1, 3]] {
            assert!(
                ideal_basis(&all, &mw).unwrap().rank()
                    >= ideal_basis(&short, &mw).unwrap().rank()
            );
        }
    }

    #[test]
    fn multiweight_agrees_with_degree_truncation() {
        // membership at one multiweight must agree with reduction inside
        // the whole degree component spanned over all multiweights
        let rs = standard_relation_set(3, 5, RelationChoice::All).unwrap();
        let degree = 4usize;
        let mut all_words: Vec<Word> = Vec::new();
        for mw_a in 0..=degree as u32 {
            let mw = vec![mw_a, degree as u32 - mw_a];
            all_words.extend(crate::freealg::words_of_multiweight(&mw));
        }
        all_words.sort();
        let idx: BTreeMap<Word, usize> = all_words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut ech = crate::gf::Echelon::new(5, all_words.len());
        for mw_a in 0..=degree as u32 {
            let mw = vec![mw_a, degree as u32 - mw_a];
            for (_, prod) in spanning_rows(&rs, &mw).unwrap() {
                let mut row = vec![0u64; all_words.len()];
                for (w, c) in prod.terms() {
                    row[idx[w]] = c;
                }
                ech.insert(row);
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let mut f = Poly::zero(5, 2).unwrap();
            let mw_a = rng.gen_range(0..=degree as u32);
            let mw = vec![mw_a, degree as u32 - mw_a];
            for w in crate::freealg::words_of_multiweight(&mw) {
                f = f
                    .add(&Poly::monomial(w, rng.gen_range(0..5), 5, 2).unwrap())
                    .unwrap();
            }
            if f.is_zero() {
                continue;
            }
            let per_mw = is_member(&f, &rs, false).unwrap().member;
            let mut row = vec![0u64; all_words.len()];
            for (w, c) in f.terms() {
                row[idx[w]] = c;
            }
            assert_eq!(per_mw, ech.contains(&row));
        }
    }

    #[test]
    fn oracle_caches_and_agrees() {
        let rs = standard_relation_set(4, 3, RelationChoice::All).unwrap();
        let mut oracle = MembershipOracle::new(rs.clone());
        let f = pp("a^3*b^3 + b^3*a^3", 3);
        for _ in 0..3 {
            assert!(oracle.is_member(&f, false).unwrap().member);
        }
        assert_eq!(oracle.reduce(&f).unwrap(), Poly::zero(3, 2).unwrap());
    }

    #[test]
    fn quotient_dimension_table_k4() {
        let rs = standard_relation_set(4, 3, RelationChoice::All).unwrap();
        let dims = quotient_dimensions(&rs, 6).unwrap();
        assert_eq!(dims[&vec![1, 1]], 2);
        assert_eq!(dims[&vec![2, 2]], 5);
        assert_eq!(dims[&vec![3, 3]], 5);
        assert_eq!(dims[&vec![2, 3]], 5);
        assert_eq!(dims[&vec![1, 3]], 3);
        assert_eq!(dims[&vec![1, 4]], 3);
        assert_eq!(dims[&vec![2, 4]], 4);
        assert_eq!(dims[&vec![1, 5]], 3);
        assert_eq!(dims[&vec![5, 1]], 3);
        // swap symmetry of the table
        assert_eq!(dims[&vec![3, 2]], dims[&vec![2, 3]]);
        assert_eq!(dims[&vec![4, 1]], dims[&vec![1, 4]]);
    }
}
