//! Multihomogeneous relation families satisfied by k-strong Lie algebras:
//! the canned labeled sets for k in {2,3,4,5}, a parametric generator, the
//! tagged-scalar expansion with its degree splitter, and relation-set text
//! I/O.
//!
//! Every relation arises as a slot sum: n slots each holding a or b, j of
//! them b, with fixed separator words between consecutive slots. The canned
//! sets pair each base relation with its a<->b swap (label suffix "s"),
//! dropping swaps that duplicate an existing polynomial.

use crate::freealg::{
    default_names, multiweight_of, parse_poly, poly_to_string, swap_ab, FreeAlgError, Multiweight,
    Poly, Word,
};
use crate::gf::{check_prime, inv_mod, GfError};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RelError {
    #[error("separator count mismatch: {n} slots need {} separators, got {got}", n.saturating_sub(1))]
    SeparatorCount { n: usize, got: usize },
    #[error("b-count {j} out of range for {n} slots")]
    BCountRange { j: usize, n: usize },
    #[error("bad slot pattern {0:?} for {1} slots")]
    BadPattern(Vec<usize>, usize),
    #[error("unsupported strongness parameter k={0}")]
    UnsupportedK(u32),
    #[error("duplicate relation label '{0}'")]
    DuplicateLabel(String),
    #[error("relation '{label}' rejected: {source}")]
    BadRelation {
        label: String,
        source: FreeAlgError,
    },
    #[error("line {line}: {source}")]
    ParseLine {
        line: usize,
        source: FreeAlgError,
    },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("unexpected tag degree {0} in an expansion of {1} slots")]
    TagDegree(u32, u32),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// Which half of a canned relation set to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationChoice {
    Short,
    Long,
    All,
}

impl fmt::Display for RelationChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationChoice::Short => "short",
            RelationChoice::Long => "long",
            RelationChoice::All => "all",
        })
    }
}

impl std::str::FromStr for RelationChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "short" => Ok(RelationChoice::Short),
            "long" => Ok(RelationChoice::Long),
            "all" => Ok(RelationChoice::All),
            other => Err(format!("expected short|long|all, got '{}'", other)),
        }
    }
}

/// How a relation set came to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// One of the canned labeled families.
    Standard,
    /// Output of [`generate_strong_relations`].
    Generated,
    /// Parsed from relation-set text.
    File,
}

/// A labeled multihomogeneous relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    label: String,
    poly: Poly,
    multiweight: Multiweight,
}

impl Relation {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn multiweight(&self) -> &Multiweight {
        &self.multiweight
    }
}

/// An immutable set of labeled relations sharing a modulus and generator
/// count; every member is multihomogeneous and labels are unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet {
    k: u32,
    generator_count: u8,
    modulus: u64,
    name: String,
    relations: Vec<Relation>,
    by_label: BTreeMap<String, usize>,
    provenance: Provenance,
}

impl RelationSet {
    pub fn new(
        k: u32,
        modulus: u64,
        generator_count: u8,
        name: impl Into<String>,
        relations: Vec<(String, Poly)>,
        provenance: Provenance,
    ) -> Result<Self, RelError> {
        check_prime(modulus)?;
        let mut rels = Vec::with_capacity(relations.len());
        let mut by_label = BTreeMap::new();
        for (label, poly) in relations {
            if poly.modulus() != modulus {
                return Err(RelError::BadRelation {
                    label,
                    source: FreeAlgError::MismatchedModuli(poly.modulus(), modulus),
                });
            }
            if poly.generator_count() != generator_count {
                return Err(RelError::BadRelation {
                    label,
                    source: FreeAlgError::MismatchedGenerators(
                        poly.generator_count(),
                        generator_count,
                    ),
                });
            }
            let multiweight = multiweight_of(&poly).map_err(|source| RelError::BadRelation {
                label: label.clone(),
                source,
            })?;
            if by_label.insert(label.clone(), rels.len()).is_some() {
                return Err(RelError::DuplicateLabel(label));
            }
            rels.push(Relation {
                label,
                poly,
                multiweight,
            });
        }
        Ok(RelationSet {
            k,
            generator_count,
            modulus,
            name: name.into(),
            relations: rels,
            by_label,
            provenance,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator_count(&self) -> u8 {
        self.generator_count
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, label: &str) -> Option<&Relation> {
        self.by_label.get(label).map(|&i| &self.relations[i])
    }
}

fn check_pattern(n: usize, pattern: &[usize]) -> Result<(), RelError> {
    let bad = || RelError::BadPattern(pattern.to_vec(), n);
    for (i, &s) in pattern.iter().enumerate() {
        if s >= n || (i > 0 && pattern[i - 1] >= s) {
            return Err(bad());
        }
    }
    Ok(())
}

/// All strictly increasing j-subsets of 0..n, lexicographic.
pub fn slot_patterns(n: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(j);
    fn rec(start: usize, n: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            cur.push(s);
            rec(s + 1, n, j, cur, out);
            cur.pop();
        }
    }
    rec(0, n, j, &mut cur, &mut out);
    out
}

fn placement_word(n: usize, pattern: &[usize], seps: &[Word], tag: Option<u8>) -> Word {
    let mut letters: Vec<u8> = Vec::new();
    let mut pi = 0;
    for slot in 0..n {
        if pi < pattern.len() && pattern[pi] == slot {
            if let Some(t) = tag {
                letters.push(t);
            }
            letters.push(1);
            pi += 1;
        } else {
            letters.push(0);
        }
        if slot + 1 < n {
            letters.extend_from_slice(seps[slot].letters());
        }
    }
    Word::from_indices(&letters)
}

/// Checks the separator count; an empty list stands for all-empty
/// separators.
fn normalize_seps(n: usize, seps: &[Word]) -> Result<Vec<Word>, RelError> {
    if n == 0 || (!seps.is_empty() && seps.len() != n - 1) {
        return Err(RelError::SeparatorCount {
            n,
            got: seps.len(),
        });
    }
    if seps.is_empty() {
        Ok(vec![Word::empty(); n - 1])
    } else {
        Ok(seps.to_vec())
    }
}

/// Sum of the words obtained by writing b in the listed slot patterns and
/// a elsewhere, with the fixed separators spliced between slots.
pub fn slot_sum_patterns(
    n: usize,
    patterns: &[Vec<usize>],
    seps: &[Word],
    p: u64,
) -> Result<Poly, RelError> {
    let seps = normalize_seps(n, seps)?;
    let mut f = Poly::zero(p, 2)?;
    for pat in patterns {
        check_pattern(n, pat)?;
        f = f.add(&Poly::monomial(placement_word(n, pat, &seps, None), 1, p, 2)?)?;
    }
    Ok(f)
}

/// Sum over all C(n,j) placements of j b's among n slots, a's elsewhere,
/// separators spliced between consecutive slots; all coefficients 1.
pub fn slot_sum(n: usize, j: usize, seps: &[Word], p: u64) -> Result<Poly, RelError> {
    if j > n {
        return Err(RelError::BCountRange { j, n });
    }
    slot_sum_patterns(n, &slot_patterns(n, j), seps, p)
}

/// Tag generator index used by the scalar-tagged expansions.
pub const TAG: u8 = 2;

/// Slot expansion over three generators where each b carries the tag
/// letter immediately in front of it, summed over the given patterns.
pub fn tagged_expansion_patterns(
    n: usize,
    patterns: &[Vec<usize>],
    seps: &[Word],
    p: u64,
) -> Result<Poly, RelError> {
    let seps = normalize_seps(n, seps)?;
    let mut f = Poly::zero(p, 3)?;
    for pat in patterns {
        check_pattern(n, pat)?;
        f = f.add(&Poly::monomial(
            placement_word(n, pat, &seps, Some(TAG)),
            1,
            p,
            3,
        )?)?;
    }
    Ok(f)
}

/// Full tagged expansion: all placements with 1..=n-1 b's.
pub fn tagged_expansion(n: usize, seps: &[Word], p: u64) -> Result<Poly, RelError> {
    let mut pats = Vec::new();
    for j in 1..n {
        pats.extend(slot_patterns(n, j));
    }
    tagged_expansion_patterns(n, &pats, seps, p)
}

/// The tag-degree components of an expansion, with the field-size proviso
/// under which each component separately vanishes.
#[derive(Debug, Clone)]
pub struct TagComponents {
    /// `components[i]` is the tag-degree i+1 part, tags stripped, over two
    /// generators.
    pub components: Vec<Poly>,
    /// Separate vanishing of the components needs at least this many
    /// distinct nonzero scalars available, i.e. field size >= this.
    pub field_size_proviso: u32,
}

/// Splits a tagged expansion by tag degree 1..n-1 and strips the tags.
///
/// Degrees 0 and >= n, which the slot calculus discards before the split,
/// are rejected.
pub fn vandermonde_extract(expansion: &Poly, n: u32) -> Result<TagComponents, RelError> {
    let p = expansion.modulus();
    let mut components: Vec<Poly> = Vec::new();
    for _ in 1..n {
        components.push(Poly::zero(p, 2)?);
    }
    for (w, c) in expansion.terms() {
        let deg = w.letters().iter().filter(|&&g| g == TAG).count() as u32;
        if deg == 0 || deg >= n {
            return Err(RelError::TagDegree(deg, n));
        }
        let stripped: Vec<u8> = w.letters().iter().copied().filter(|&g| g != TAG).collect();
        let term = Poly::monomial(Word::from_indices(&stripped), c as i64, p, 2)?;
        let slot = (deg - 1) as usize;
        components[slot] = components[slot].add(&term)?;
    }
    Ok(TagComponents {
        components,
        field_size_proviso: n,
    })
}

fn sep_words(specs: &[&str]) -> Vec<Word> {
    specs
        .iter()
        .map(|s| {
            Word::from_indices(
                &s.bytes()
                    .map(|c| match c {
                        b'a' => 0u8,
                        b'b' => 1,
                        _ => unreachable!("separator tables use letters a,b only"),
                    })
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}

const K4_S_SEPS: [[&str; 3]; 7] = [
    ["", "", ""],
    ["", "", "b"],
    ["", "b", ""],
    ["b", "", ""],
    ["", "b", "b"],
    ["b", "", "b"],
    ["b", "b", ""],
];

const K4_L_SEPS: [[&str; 3]; 7] = [
    ["", "", ""],
    ["a", "", ""],
    ["", "a", ""],
    ["", "", "a"],
    ["a", "b", ""],
    ["a", "", "b"],
    ["", "a", "b"],
];

const K5_S_SEPS: [[&str; 4]; 14] = [
    ["", "", "", ""],
    ["", "", "", "b"],
    ["", "", "b", ""],
    ["", "b", "", ""],
    ["b", "", "", ""],
    ["", "", "b", "b"],
    ["", "b", "", "b"],
    ["b", "", "", "b"],
    ["b", "", "b", ""],
    ["b", "b", "", ""],
    ["", "b", "b", "b"],
    ["b", "", "b", "b"],
    ["b", "b", "", "b"],
    ["b", "b", "b", ""],
];

const K5_L_SEPS: [[&str; 4]; 13] = [
    ["", "", "", ""],
    ["a", "", "", ""],
    ["", "a", "", ""],
    ["", "", "a", ""],
    ["", "", "", "a"],
    ["b", "", "", ""],
    ["", "b", "", ""],
    ["", "", "b", ""],
    ["", "", "", "b"],
    ["a", "b", "", ""],
    ["b", "a", "", ""],
    ["a", "", "b", ""],
    ["b", "", "a", ""],
];

/// The two-b slot patterns used by the five-slot long family.
pub const K5_B_PATTERNS: [[usize; 2]; 7] =
    [[3, 4], [2, 4], [1, 4], [0, 4], [0, 3], [0, 2], [0, 1]];

fn with_swaps(base: Vec<(String, Poly)>) -> Vec<(String, Poly)> {
    let mut out = base.clone();
    for (label, poly) in &base {
        let sw = swap_ab(poly);
        if out.iter().any(|(_, q)| *q == sw) {
            continue;
        }
        out.push((format!("{}s", label), sw));
    }
    out
}

fn base_family(
    n: usize,
    prefix: &str,
    j: usize,
    seps_table: &[Vec<Word>],
    p: u64,
) -> Result<Vec<(String, Poly)>, RelError> {
    let mut out = Vec::new();
    for (i, seps) in seps_table.iter().enumerate() {
        out.push((format!("{}{}", prefix, i + 1), slot_sum(n, j, seps, p)?));
    }
    Ok(out)
}

/// The canned labeled relation set for strongness k over F_p.
///
/// Short relations have one b per placement, long ones two; each base
/// relation is paired with its a<->b swap under the "s"-suffixed label
/// unless the swap duplicates a polynomial already present. For k=2 the
/// single relation ab+ba is its own family.
pub fn standard_relation_set(
    k: u32,
    p: u64,
    which: RelationChoice,
) -> Result<RelationSet, RelError> {
    let name = format!("k{}_{}", k, which);
    let short: Vec<(String, Poly)>;
    let long: Vec<(String, Poly)>;
    match k {
        2 => {
            let e1 = slot_sum(2, 1, &[], p)?;
            let rels = vec![("E1".to_string(), e1)];
            return RelationSet::new(2, p, 2, name, rels, Provenance::Standard);
        }
        3 => {
            let e = sep_words(&["", ""]);
            let eb = sep_words(&["", "b"]);
            short = with_swaps(vec![("E1".to_string(), slot_sum(3, 1, &e, p)?)]);
            long = with_swaps(vec![("E2".to_string(), slot_sum(3, 1, &eb, p)?)]);
        }
        4 => {
            let s_seps: Vec<Vec<Word>> = K4_S_SEPS.iter().map(|t| sep_words(t)).collect();
            let l_seps: Vec<Vec<Word>> = K4_L_SEPS.iter().map(|t| sep_words(t)).collect();
            short = with_swaps(base_family(4, "S", 1, &s_seps, p)?);
            long = with_swaps(base_family(4, "L", 2, &l_seps, p)?);
        }
        5 => {
            let s_seps: Vec<Vec<Word>> = K5_S_SEPS.iter().map(|t| sep_words(t)).collect();
            let l_seps: Vec<Vec<Word>> = K5_L_SEPS.iter().map(|t| sep_words(t)).collect();
            short = with_swaps(base_family(5, "S", 1, &s_seps, p)?);
            let pats: Vec<Vec<usize>> = K5_B_PATTERNS.iter().map(|x| x.to_vec()).collect();
            let mut l_base = Vec::new();
            for (i, seps) in l_seps.iter().enumerate() {
                l_base.push((
                    format!("L{}", i + 1),
                    slot_sum_patterns(5, &pats, seps, p)?,
                ));
            }
            long = with_swaps(l_base);
        }
        other => return Err(RelError::UnsupportedK(other)),
    }
    let rels = match which {
        RelationChoice::Short => short,
        RelationChoice::Long => long,
        RelationChoice::All => {
            let mut v = short;
            v.extend(long);
            v
        }
    };
    RelationSet::new(k, p, 2, name, rels, Provenance::Standard)
}

/// Scales f so its deglex-leading coefficient is 1.
fn scalar_normalize(f: &Poly) -> Poly {
    match f.terms().next() {
        None => f.clone(),
        Some((_, c)) => {
            let inv = inv_mod(c, f.modulus()).expect("stored coefficients are nonzero");
            f.scale(inv as i64)
        }
    }
}

/// Every slot sum over n slots with separator tuples drawn from the pool,
/// for all b-counts 1..=n-1, filtered to total degree <= max_degree and
/// deduplicated up to scalar. Labels run G1, G2, ... in generation order.
pub fn generate_strong_relations(
    n: usize,
    separator_pool: &[Word],
    max_degree: usize,
    p: u64,
) -> Result<RelationSet, RelError> {
    let slots = n.max(1);
    let sep_len = slots - 1;
    let mut seen: Vec<Poly> = Vec::new();
    let mut rels: Vec<(String, Poly)> = Vec::new();
    for j in 1..slots {
        let mut idx = vec![0usize; sep_len];
        loop {
            let seps: Vec<Word> = idx.iter().map(|&i| separator_pool[i].clone()).collect();
            let degree = slots + seps.iter().map(|s| s.len()).sum::<usize>();
            if degree <= max_degree {
                let f = slot_sum(slots, j, &seps, p)?;
                let norm = scalar_normalize(&f);
                if !f.is_zero() && !seen.contains(&norm) {
                    seen.push(norm);
                    rels.push((format!("G{}", rels.len() + 1), f));
                }
            }
            // odometer over pool^(n-1)
            let mut pos = 0;
            loop {
                if pos == sep_len {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < separator_pool.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == sep_len {
                break;
            }
        }
        if sep_len == 0 {
            break;
        }
    }
    RelationSet::new(
        n as u32,
        p,
        2,
        format!("gen_n{}_d{}", n, max_degree),
        rels,
        Provenance::Generated,
    )
}

/// Renders a relation set in the text format: `#k=` and `#p=` headers,
/// then one `label: polynomial` line per relation.
pub fn serialize_relation_set(rs: &RelationSet) -> String {
    let names = default_names(rs.generator_count()).expect("validated generator count");
    let mut out = format!("#k={}\n#p={}\n", rs.k(), rs.modulus());
    for r in rs.relations() {
        out.push_str(&format!("{}: {}\n", r.label(), poly_to_string(r.poly(), &names)));
    }
    out
}

/// Parses relation-set text. Lines starting with '#' other than the
/// required `#k=`/`#p=` headers are comments; errors carry 1-based line
/// numbers.
pub fn parse_relation_set(text: &str, name: &str) -> Result<RelationSet, RelError> {
    let mut k: Option<u32> = None;
    let mut p: Option<u64> = None;
    let names = default_names(26).expect("26 fits");
    let mut raw: Vec<(String, Poly)> = Vec::new();
    let mut max_letter = 1u8;
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("#k=") {
            k = Some(rest.trim().parse().map_err(|_| RelError::Malformed {
                line: line_no,
                msg: format!("bad k value '{}'", rest.trim()),
            })?);
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("#p=") {
            p = Some(rest.trim().parse().map_err(|_| RelError::Malformed {
                line: line_no,
                msg: format!("bad p value '{}'", rest.trim()),
            })?);
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let modulus = p.ok_or(RelError::Malformed {
            line: line_no,
            msg: "relation before #p= header".into(),
        })?;
        let (label, body) = trimmed.split_once(':').ok_or(RelError::Malformed {
            line: line_no,
            msg: "expected 'label: polynomial'".into(),
        })?;
        let poly = parse_poly(body, &names, modulus)
            .map_err(|source| RelError::ParseLine {
                line: line_no,
                source,
            })?;
        if let Some(m) = poly.support().filter_map(|w| w.max_letter()).max() {
            max_letter = max_letter.max(m);
        }
        raw.push((label.trim().to_string(), poly));
    }
    let k = k.ok_or(RelError::Malformed {
        line: text.lines().count(),
        msg: "missing #k= header".into(),
    })?;
    let p = p.ok_or(RelError::Malformed {
        line: text.lines().count(),
        msg: "missing #p= header".into(),
    })?;
    let ngens = max_letter + 1;
    let mut rels = Vec::with_capacity(raw.len());
    for (label, poly) in raw {
        let mut g = Poly::zero(p, ngens)?;
        for (w, c) in poly.terms() {
            g = g.add(&Poly::monomial(w.clone(), c as i64, p, ngens)?)?;
        }
        rels.push((label, g));
    }
    RelationSet::new(k, p, ngens, name, rels, Provenance::File)
}
