//! Orchestrated identity checks over a relation set: the single
//! anti-commutation identity (variant I), the per-monomial family over one
//! balanced multiweight (variant II), and an experimental scalar search
//! relating a pattern to a permuted copy of itself (variant III).
//!
//! Reports serialize to a stable JSON schema; the `proviso` flag records
//! that p < k, i.e. the field-size hypothesis behind the relation families
//! is not met by F_p itself. It never blocks a run.

use crate::freealg::{
    default_names, multiweight_of, poly_to_string, swap_generators, words_of_multiweight,
    FreeAlgError, Poly, Word,
};
use crate::gf::{inv_mod, m_mul, GfError};
use crate::nilquot::{Certificate, MembershipOracle, NilquotError};
use crate::relations::RelationSet;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConjError {
    #[error("variant checks need k >= 2, got k={0}")]
    BadK(u32),
    #[error("variant checks need a 2-generator relation set, got {0}")]
    GeneratorCount(u8),
    #[error("pattern is not multihomogeneous: {0}")]
    PatternNotHomogeneous(FreeAlgError),
    #[error(transparent)]
    Nilquot(#[from] NilquotError),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// Wall-clock accounting, attached by callers that time their runs.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Timings {
    pub total_ms: u64,
}

/// One checked identity inside a report.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityResult {
    /// Canonical text of the checked polynomial.
    pub identity: String,
    pub member: bool,
    /// Whether the orbit's monomial itself lies in the ideal; only
    /// computed for k=5 runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduces_to_zero: Option<bool>,
    /// Certificate as the JSON array form, present when requested and
    /// member is true.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
}

/// Machine-readable outcome of a variant check. Field order is part of
/// the schema; `timings` is appended only when set.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub k: u32,
    pub p: u64,
    pub variant: String,
    pub relations: String,
    pub proviso: bool,
    pub results: Vec<IdentityResult>,
    pub version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl ConjectureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report is plain data")
    }

    pub fn with_timings(mut self, total_ms: u64) -> Self {
        self.timings = Some(Timings { total_ms });
        self
    }

    pub fn all_members(&self) -> bool {
        self.results.iter().all(|r| r.member)
    }
}

fn skeleton(rs: &RelationSet, variant: &str) -> ConjectureReport {
    ConjectureReport {
        k: rs.k(),
        p: rs.modulus(),
        variant: variant.to_string(),
        relations: rs.name().to_string(),
        proviso: rs.modulus() < rs.k() as u64,
        results: Vec::new(),
        version: 1,
        timings: None,
    }
}

fn check_prereqs(rs: &RelationSet) -> Result<(), ConjError> {
    if rs.k() < 2 {
        return Err(ConjError::BadK(rs.k()));
    }
    if rs.generator_count() != 2 {
        return Err(ConjError::GeneratorCount(rs.generator_count()));
    }
    Ok(())
}

fn swap_word(w: &Word) -> Word {
    Word::from_indices(
        &w.letters()
            .iter()
            .map(|&g| if g == 0 { 1 } else { 0 })
            .collect::<Vec<_>>(),
    )
}

/// m + (-1)^k * swap(m), i.e. m - (-1)^(k-1) * swap(m), over F_p.
fn orbit_identity(m: &Word, k: u32, p: u64) -> Result<Poly, ConjError> {
    let sign: i64 = if k % 2 == 0 { 1 } else { -1 };
    let lead = Poly::monomial(m.clone(), 1, p, 2)?;
    let tail = Poly::monomial(swap_word(m), sign, p, 2)?;
    Ok(lead.add(&tail)?)
}

fn cert_value(cert: &Certificate, names: &[String]) -> serde_json::Value {
    serde_json::from_str(&cert.to_json(names)).expect("certificate JSON is valid")
}

/// Checks the single identity x^(k-1) y^(k-1) - (-1)^(k-1) y^(k-1) x^(k-1)
/// against the ideal generated by rs, with the sign taken in F_p.
pub fn check_variant_i(
    rs: &RelationSet,
    want_certificates: bool,
) -> Result<ConjectureReport, ConjError> {
    check_prereqs(rs)?;
    let k = rs.k();
    let names = default_names(2)?;
    let m = Word::power(0, (k - 1) as usize).concat(&Word::power(1, (k - 1) as usize));
    let identity = orbit_identity(&m, k, rs.modulus())?;
    let mut oracle = MembershipOracle::new(rs.clone());
    let outcome = oracle.is_member(&identity, want_certificates)?;
    let mut report = skeleton(rs, "I");
    report.results.push(IdentityResult {
        identity: poly_to_string(&identity, &names),
        member: outcome.member,
        reduces_to_zero: None,
        certificate: outcome.certificate.map(|c| cert_value(&c, &names)),
    });
    Ok(report)
}

/// Checks m - (-1)^(k-1) swap(m) for one representative m of every swap
/// orbit of multiweight-(k-1, k-1) words, in deglex order of the
/// representatives. For k=5 each result also records whether the
/// representative monomial alone lies in the ideal.
pub fn check_variant_ii(
    rs: &RelationSet,
    want_certificates: bool,
) -> Result<ConjectureReport, ConjError> {
    check_prereqs(rs)?;
    let k = rs.k();
    let p = rs.modulus();
    let names = default_names(2)?;
    let mw = vec![k - 1, k - 1];
    let mut oracle = MembershipOracle::new(rs.clone());
    let mut report = skeleton(rs, "II");
    for m in words_of_multiweight(&mw) {
        if swap_word(&m) < m {
            continue;
        }
        let identity = orbit_identity(&m, k, p)?;
        let outcome = oracle.is_member(&identity, want_certificates)?;
        let reduces_to_zero = if k == 5 {
            let mono = Poly::monomial(m.clone(), 1, p, 2)?;
            Some(oracle.is_member(&mono, false)?.member)
        } else {
            None
        };
        report.results.push(IdentityResult {
            identity: poly_to_string(&identity, &names),
            member: outcome.member,
            reduces_to_zero,
            certificate: outcome.certificate.map(|c| cert_value(&c, &names)),
        });
    }
    Ok(report)
}

/// Outcome of the variant III scalar search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VariantIiiOutcome {
    /// Both the pattern and its permuted image reduce to zero; every
    /// scalar works, reported separately from a proper dependency.
    Degenerate,
    /// pattern - alpha * sigma(pattern) lies in the ideal for exactly
    /// this alpha.
    Dependent { alpha: u64 },
    /// No scalar in F_p works.
    Independent,
}

/// Searches for a scalar alpha with pattern - alpha * sigma(pattern) in
/// the ideal of rs, where sigma permutes the generators. Equivalent to
/// trying every scalar in F_p, but runs on the two normal forms directly.
/// Experimental; results are relative to the relation set supplied.
pub fn search_variant_iii(
    pattern: &Poly,
    sigma: &[u8],
    rs: &RelationSet,
) -> Result<VariantIiiOutcome, ConjError> {
    multiweight_of(pattern).map_err(ConjError::PatternNotHomogeneous)?;
    let image = swap_generators(pattern, sigma)?;
    let p = rs.modulus();
    let mut oracle = MembershipOracle::new(rs.clone());
    let r0 = oracle.reduce(pattern)?;
    let r1 = oracle.reduce(&image)?;
    if r0.is_zero() && r1.is_zero() {
        return Ok(VariantIiiOutcome::Degenerate);
    }
    if r0.is_zero() {
        return Ok(VariantIiiOutcome::Dependent { alpha: 0 });
    }
    if r1.is_zero() {
        return Ok(VariantIiiOutcome::Independent);
    }
    let (w, c0) = r0.terms().next().expect("r0 nonzero");
    let c1 = r1.coeff(w);
    if c1 == 0 {
        return Ok(VariantIiiOutcome::Independent);
    }
    let alpha = m_mul(c0, inv_mod(c1, p)?, p);
    if r0 == r1.scale(alpha as i64) {
        Ok(VariantIiiOutcome::Dependent { alpha })
    } else {
        Ok(VariantIiiOutcome::Independent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{parse_poly, swap_ab};
    use crate::nilquot::verify_certificate;
    use crate::relations::{standard_relation_set, Provenance, RelationChoice};

    fn pp(s: &str, p: u64) -> Poly {
        parse_poly(s, &default_names(2).unwrap(), p).unwrap()
    }

    #[test]
    fn variant_i_schema_exact() {
        let rs = standard_relation_set(4, 3, RelationChoice::All).unwrap();
        let report = check_variant_i(&rs, false).unwrap();
        assert_eq!(
            report.to_json(),
            r#"{"k":4,"p":3,"variant":"I","relations":"k4_all","proviso":true,"results":[{"identity":"a^3*b^3 + b^3*a^3","member":true}],"version":1}"#
        );
    }

    #[test]
    fn variant_i_across_k_and_p() {
        for p in [2u64, 3, 5, 7] {
            for k in [2u32, 3] {
                let rs = standard_relation_set(k, p, RelationChoice::All).unwrap();
                assert!(check_variant_i(&rs, false).unwrap().all_members());
            }
        }
        // short relations suffice except in characteristic 2
        for p in [3u64, 5, 7] {
            let rs = standard_relation_set(4, p, RelationChoice::Short).unwrap();
            assert!(check_variant_i(&rs, false).unwrap().all_members());
        }
        let short2 = standard_relation_set(4, 2, RelationChoice::Short).unwrap();
        assert!(!check_variant_i(&short2, false).unwrap().all_members());
        let all2 = standard_relation_set(4, 2, RelationChoice::All).unwrap();
        assert!(check_variant_i(&all2, false).unwrap().all_members());
    }

    #[test]
    fn variant_i_sign_and_proviso() {
        let rs = standard_relation_set(3, 5, RelationChoice::All).unwrap();
        let report = check_variant_i(&rs, false).unwrap();
        // odd k: the swapped term enters negatively
        assert_eq!(report.results[0].identity, "a^2*b^2 + 4*b^2*a^2");
        assert!(!report.proviso); // p=5 >= k=3
        let rs2 = standard_relation_set(5, 3, RelationChoice::All).unwrap();
        assert!(check_variant_i(&rs2, false).unwrap().proviso);
    }

    #[test]
    fn variant_i_certificates_verify() {
        let rs = standard_relation_set(4, 5, RelationChoice::All).unwrap();
        let report = check_variant_i(&rs, true).unwrap();
        assert!(report.results[0].certificate.is_some());
        // round-trip the JSON certificate back into a typed one and verify
        let v = report.results[0].certificate.as_ref().unwrap();
        let arr = v.as_array().unwrap();
        assert!(!arr.is_empty());
        for item in arr {
            assert!(item.get("coeff").is_some());
            assert!(item.get("rel").is_some());
        }
        // independent recomputation through nilquot
        let f = pp("a^3*b^3 + b^3*a^3", 5);
        let m = crate::nilquot::is_member(&f, &rs, true).unwrap();
        assert!(verify_certificate(&m.certificate.unwrap(), &f, &rs).unwrap());
    }

    #[test]
    fn variant_ii_orbit_counts() {
        let counts = [(2u32, 1usize), (3, 3), (4, 10), (5, 35)];
        for (k, n) in counts {
            let rs = standard_relation_set(k, 3, RelationChoice::All).unwrap();
            let report = check_variant_ii(&rs, false).unwrap();
            assert_eq!(report.results.len(), n, "k={}", k);
        }
    }

    #[test]
    fn variant_ii_k4_and_k3() {
        for p in [2u64, 3, 5, 7] {
            let rs = standard_relation_set(4, p, RelationChoice::All).unwrap();
            let report = check_variant_ii(&rs, false).unwrap();
            assert!(report.all_members(), "k=4 p={}", p);
            assert!(report.results.iter().all(|r| r.reduces_to_zero.is_none()));
        }
        let rs3 = standard_relation_set(3, 5, RelationChoice::All).unwrap();
        let report3 = check_variant_ii(&rs3, false).unwrap();
        let ids: Vec<&str> = report3.results.iter().map(|r| r.identity.as_str()).collect();
        assert_eq!(
            ids,
            vec![
                "a^2*b^2 + 4*b^2*a^2",
                "a*b*a*b + 4*b*a*b*a",
                "a*b^2*a + 4*b*a^2*b"
            ]
        );
        assert!(report3.all_members());
    }

    #[test]
    fn variant_ii_k5_reduces_outright() {
        for p in [2u64, 3, 5, 7] {
            let rs = standard_relation_set(5, p, RelationChoice::All).unwrap();
            let report = check_variant_ii(&rs, false).unwrap();
            assert!(report.all_members(), "k=5 p={}", p);
            assert!(
                report
                    .results
                    .iter()
                    .all(|r| r.reduces_to_zero == Some(true)),
                "p={}",
                p
            );
        }
    }

    #[test]
    fn variant_ii_contains_variant_i() {
        for (k, p) in [(3u32, 5u64), (4, 3), (4, 2), (5, 3)] {
            let rs = standard_relation_set(k, p, RelationChoice::All).unwrap();
            let one = check_variant_i(&rs, false).unwrap();
            let many = check_variant_ii(&rs, false).unwrap();
            let hit = many
                .results
                .iter()
                .find(|r| r.identity == one.results[0].identity)
                .expect("variant I identity is one of the orbit identities");
            assert_eq!(hit.member, one.results[0].member);
        }
    }

    #[test]
    fn variant_iii_swap_instance() {
        let rs = standard_relation_set(4, 3, RelationChoice::All).unwrap();
        let pattern = pp("a^3*b^3", 3);
        let out = search_variant_iii(&pattern, &[1, 0], &rs).unwrap();
        // a^3 b^3 = -(b^3 a^3) modulo the ideal, and -1 = 2 in F_3
        assert_eq!(out, VariantIiiOutcome::Dependent { alpha: 2 });
    }

    #[test]
    fn variant_iii_degenerate_and_independent() {
        let rs5 = standard_relation_set(5, 3, RelationChoice::All).unwrap();
        let out = search_variant_iii(&pp("a^4*b^4", 3), &[1, 0], &rs5).unwrap();
        assert_eq!(out, VariantIiiOutcome::Degenerate);

        let empty = RelationSet::new(4, 5, 2, "empty", vec![], Provenance::Generated).unwrap();
        let out2 = search_variant_iii(&pp("a*b", 5), &[1, 0], &empty).unwrap();
        assert_eq!(out2, VariantIiiOutcome::Independent);

        let bad = search_variant_iii(&pp("a*b + a", 5), &[1, 0], &empty);
        assert!(matches!(bad, Err(ConjError::PatternNotHomogeneous(_))));
    }

    #[test]
    fn variant_iii_zero_side() {
        // three generators: ab+ba is a relation, c is untouched, so the
        // pattern reduces to zero while its permuted image does not
        let p = 5;
        let ab = Poly::monomial(Word::from_indices(&[0, 1]), 1, p, 3).unwrap();
        let ba = Poly::monomial(Word::from_indices(&[1, 0]), 1, p, 3).unwrap();
        let rel = ab.add(&ba).unwrap();
        let rs = RelationSet::new(
            2,
            p,
            3,
            "three_gen",
            vec![("R1".to_string(), rel.clone())],
            Provenance::Generated,
        )
        .unwrap();
        // pattern ab + ba is in the ideal; sigma swaps b and c
        let out = search_variant_iii(&rel, &[0, 2, 1], &rs).unwrap();
        assert_eq!(out, VariantIiiOutcome::Dependent { alpha: 0 });
    }

    #[test]
    fn variant_iii_matches_exhaustive_scan() {
        let p = 5u64;
        let rs = standard_relation_set(3, p, RelationChoice::All).unwrap();
        let mut oracle = MembershipOracle::new(rs.clone());
        let patterns = [
            "a^2*b^2",
            "a*b^2*a",
            "a*b*a*b",
            "a^2*b^2 + a*b*a*b",
            "2*a*b^2*a + b*a^2*b",
        ];
        for s in patterns {
            let pattern = pp(s, p);
            let smart = search_variant_iii(&pattern, &[1, 0], &rs).unwrap();
            let image = swap_ab(&pattern);
            let r0 = oracle.reduce(&pattern).unwrap();
            let r1 = oracle.reduce(&image).unwrap();
            let hits: Vec<u64> = (0..p)
                .filter(|&alpha| r0 == r1.scale(alpha as i64))
                .collect();
            match smart {
                VariantIiiOutcome::Degenerate => {
                    assert!(r0.is_zero() && r1.is_zero());
                    assert_eq!(hits.len(), p as usize);
                }
                VariantIiiOutcome::Dependent { alpha } => assert_eq!(hits, vec![alpha]),
                VariantIiiOutcome::Independent => assert!(hits.is_empty()),
            }
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        let rs = RelationSet::new(1, 5, 2, "k1", vec![], Provenance::Generated).unwrap();
        assert!(matches!(check_variant_i(&rs, false), Err(ConjError::BadK(1))));
        let rs3 = RelationSet::new(4, 5, 3, "g3", vec![], Provenance::Generated).unwrap();
        assert!(matches!(
            check_variant_ii(&rs3, false),
            Err(ConjError::GeneratorCount(3))
        ));
    }
}
