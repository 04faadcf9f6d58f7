//! A certificate-carrying calculus for anti-symmetry facts, a built-in
//! replayable derivation for the k=4 family, and a matrix reduction over
//! F_p\[s\]/(s^2-1) for probing the general pattern.
//!
//! A fact "Asym(f)" asserts f + swap(f) lies in the ambient ideal, and
//! always carries an exact [`Certificate`] for that sum. The two derivation
//! rules are:
//!
//! * rule1: Asym(g + h) implies Asym(g + swap(h)). Replacing a group of
//!   summands by its swap leaves the symmetrization unchanged, so the
//!   parent's certificate is reused verbatim.
//! * rule2: Asym(g) and an ideal equation g + h = 0 imply Asym(h), with
//!   certificate eq + swap(eq) - fact.
//!
//! Every derived fact is re-verified two ways: its certificate is
//! re-expanded exactly, and membership of f + swap(f) is decided again
//! from scratch. The rule engine replays proof structure; it is never the
//! trust root.

use crate::freealg::{
    default_names, mirror, parse_poly, poly_to_string, swap_ab, word_to_string,
    words_of_multiweight, FreeAlgError, Multiweight, Poly, Word,
};
use crate::gf::{m_sub, Echelon, GfError};
use crate::nilquot::{
    ideal_basis, reduce, spanning_rows, verify_certificate, CertTerm, Certificate,
    MembershipOracle, NilquotError,
};
use crate::relations::{standard_relation_set, Provenance, RelError, RelationChoice, RelationSet};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AsymError {
    #[error("the built-in derivation assumes an odd modulus, got 2")]
    EvenModulus,
    #[error("step {step}: {msg}")]
    Step { step: String, msg: String },
    #[error("unknown equation '{0}'")]
    UnknownEquation(String),
    #[error("unknown fact '{0}'")]
    UnknownFact(String),
    #[error("duplicate label '{0}'")]
    DuplicateLabel(String),
    #[error("operator image of row {0} leaves the ideal component")]
    NotClosed(String),
    #[error("multiweight {0:?} is not balanced, the swap operator does not act")]
    NotBalanced(Multiweight),
    #[error("matrix shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Nilquot(#[from] NilquotError),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// A labeled ideal equation: poly = 0 modulo the ambient ideal, witnessed
/// exactly by the certificate.
#[derive(Debug, Clone)]
pub struct Equation {
    pub label: String,
    pub poly: Poly,
    pub certificate: Certificate,
}

/// How a fact was derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    FromEquation { equation: String },
    Rule1 { parent: String, replaced: Vec<Word> },
    Rule2 { fact: String, equation: String },
    Combine { parts: Vec<(i64, String)> },
    Swapped { parent: String },
}

/// An anti-symmetry fact: poly + swap(poly) lies in the ambient ideal.
#[derive(Debug, Clone)]
pub struct AsymFact {
    pub label: String,
    pub poly: Poly,
    pub justification: Justification,
    /// Exact certificate for poly + swap(poly).
    pub sym_certificate: Certificate,
}

/// One replayed derivation step.
#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub step: String,
    pub kind: String,
    pub inputs: Vec<String>,
    pub output_poly: String,
    pub verified: bool,
}

/// A fact surviving to the end of a derivation.
#[derive(Debug, Clone, Serialize)]
pub struct FinalFact {
    pub label: String,
    pub poly: String,
}

/// Full record of a replayed derivation.
#[derive(Debug, Clone, Serialize)]
pub struct DerivationLog {
    pub p: u64,
    pub steps: Vec<StepRecord>,
    pub final_facts: Vec<FinalFact>,
    pub axioms_used: Vec<String>,
    pub derived_equation_count: usize,
    pub failure_count: usize,
}

impl DerivationLog {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("log is plain data")
    }
}

fn swap_word(w: &Word) -> Word {
    Word::from_indices(
        &w.letters()
            .iter()
            .map(|&g| if g == 0 { 1 } else { 0 })
            .collect::<Vec<_>>(),
    )
}

/// Derivation workspace over a fixed ambient relation set: holds labeled
/// equations and facts, verifies every construction, and records steps.
pub struct ReplayContext {
    rs: RelationSet,
    oracle: MembershipOracle,
    names: Vec<String>,
    equations: Vec<Equation>,
    facts: Vec<AsymFact>,
    steps: Vec<StepRecord>,
    axioms: BTreeSet<String>,
}

impl ReplayContext {
    pub fn new(rs: RelationSet) -> Result<Self, AsymError> {
        let names = default_names(rs.generator_count())?;
        let oracle = MembershipOracle::new(rs.clone());
        Ok(ReplayContext {
            rs,
            oracle,
            names,
            equations: Vec::new(),
            facts: Vec::new(),
            steps: Vec::new(),
            axioms: BTreeSet::new(),
        })
    }

    pub fn relation_set(&self) -> &RelationSet {
        &self.rs
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    pub fn equation(&self, label: &str) -> Result<&Equation, AsymError> {
        self.equations
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| AsymError::UnknownEquation(label.to_string()))
    }

    pub fn fact(&self, label: &str) -> Result<&AsymFact, AsymError> {
        self.facts
            .iter()
            .find(|f| f.label == label)
            .ok_or_else(|| AsymError::UnknownFact(label.to_string()))
    }

    /// Labels used through [`Self::axiom`], swap suffixes stripped.
    pub fn axioms_used(&self) -> Vec<String> {
        self.axioms
            .iter()
            .map(|l| l.strip_suffix('s').unwrap_or(l).to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// An ambient relation as an equation with the one-term certificate.
    /// Axioms are not derivation steps and are never logged as such.
    pub fn axiom(&mut self, label: &str) -> Result<Equation, AsymError> {
        let rel = self
            .rs
            .relation(label)
            .ok_or_else(|| AsymError::UnknownEquation(label.to_string()))?;
        let poly = rel.poly().clone();
        self.axioms.insert(label.to_string());
        Ok(Equation {
            label: label.to_string(),
            poly,
            certificate: Certificate {
                combination: vec![CertTerm {
                    coeff: 1,
                    left: Word::empty(),
                    rel: label.to_string(),
                    right: Word::empty(),
                }],
            },
        })
    }

    /// A registered equation, or the ambient relation of that label.
    fn resolve_equation(&mut self, label: &str) -> Result<Equation, AsymError> {
        if self.equations.iter().any(|e| e.label == label) {
            Ok(self.equation(label)?.clone())
        } else {
            self.axiom(label)
        }
    }

    /// left * eq * right, unregistered.
    pub fn equation_mult(&self, label: &str, eq: &Equation, left: &Word, right: &Word) -> Equation {
        Equation {
            label: label.to_string(),
            poly: eq.poly.mul_words(left, right),
            certificate: eq.certificate.mul_words(left, right),
        }
    }

    /// Linear combination of equations, unregistered.
    pub fn equation_combine(
        &self,
        label: &str,
        parts: &[(i64, Equation)],
    ) -> Result<Equation, AsymError> {
        let p = self.rs.modulus();
        let mut poly = Poly::zero(p, self.rs.generator_count())?;
        let mut cert = Certificate::default();
        for (c, eq) in parts {
            poly = poly.add(&eq.poly.scale(*c))?;
            cert = cert.add(&eq.certificate.scale(*c, p), p);
        }
        Ok(Equation {
            label: label.to_string(),
            poly,
            certificate: cert,
        })
    }

    /// The a<->b swap of an equation, unregistered.
    pub fn equation_swap(&self, eq: &Equation) -> Result<Equation, AsymError> {
        Ok(Equation {
            label: format!("swap({})", eq.label),
            poly: swap_ab(&eq.poly),
            certificate: eq.certificate.swapped(&self.rs)?,
        })
    }

    /// The defining equation of a fact: poly + swap(poly) = 0, carried by
    /// the fact's own certificate.
    pub fn sym_equation(&self, fact_label: &str) -> Result<Equation, AsymError> {
        let fact = self.fact(fact_label)?;
        Ok(Equation {
            label: format!("sym({})", fact_label),
            poly: fact.poly.add(&swap_ab(&fact.poly))?,
            certificate: fact.sym_certificate.clone(),
        })
    }

    fn check_fresh(&self, label: &str) -> Result<(), AsymError> {
        if self.equations.iter().any(|e| e.label == label)
            || self.facts.iter().any(|f| f.label == label)
        {
            return Err(AsymError::DuplicateLabel(label.to_string()));
        }
        Ok(())
    }

    /// Verifies the certificate by exact re-expansion and stores the
    /// equation, logging one step.
    pub fn register_equation(
        &mut self,
        eq: Equation,
        kind: &str,
        inputs: Vec<String>,
    ) -> Result<(), AsymError> {
        self.check_fresh(&eq.label)?;
        let ok = verify_certificate(&eq.certificate, &eq.poly, &self.rs)?;
        if !ok {
            return Err(AsymError::Step {
                step: eq.label.clone(),
                msg: "certificate does not re-expand to the equation".into(),
            });
        }
        self.steps.push(StepRecord {
            step: eq.label.clone(),
            kind: kind.to_string(),
            inputs,
            output_poly: poly_to_string(&eq.poly, &self.names),
            verified: true,
        });
        self.equations.push(eq);
        Ok(())
    }

    /// Registers left * base * right under a new label; base may be an
    /// ambient relation or an earlier equation.
    pub fn mult(
        &mut self,
        label: &str,
        base: &str,
        left: &Word,
        right: &Word,
    ) -> Result<(), AsymError> {
        let base_eq = self.resolve_equation(base)?;
        let eq = self.equation_mult(label, &base_eq, left, right);
        self.register_equation(eq, "mult", vec![base.to_string()])
    }

    /// Registers a linear combination of equations.
    pub fn lincomb(&mut self, label: &str, parts: &[(i64, Equation)]) -> Result<(), AsymError> {
        let eq = self.equation_combine(label, parts)?;
        let inputs = parts.iter().map(|(_, e)| e.label.clone()).collect();
        self.register_equation(eq, "lincomb", inputs)
    }

    fn verify_and_store_fact(
        &mut self,
        fact: AsymFact,
        kind: &str,
        inputs: Vec<String>,
    ) -> Result<(), AsymError> {
        self.check_fresh(&fact.label)?;
        let sym = fact.poly.add(&swap_ab(&fact.poly))?;
        let cert_ok = verify_certificate(&fact.sym_certificate, &sym, &self.rs)?;
        let member = self.oracle.is_member(&sym, false)?.member;
        if !cert_ok || !member {
            return Err(AsymError::Step {
                step: fact.label.clone(),
                msg: format!(
                    "anti-symmetry of {} not confirmed (certificate {}, membership {})",
                    poly_to_string(&fact.poly, &self.names),
                    cert_ok,
                    member
                ),
            });
        }
        self.steps.push(StepRecord {
            step: fact.label.clone(),
            kind: kind.to_string(),
            inputs,
            output_poly: poly_to_string(&fact.poly, &self.names),
            verified: true,
        });
        self.facts.push(fact);
        Ok(())
    }

    /// Reads Asym(target) off an equation whose content is exactly
    /// target + swap(target).
    pub fn fact_from_equation(
        &mut self,
        label: &str,
        eq: &Equation,
        target: &Poly,
    ) -> Result<(), AsymError> {
        let sym = target.add(&swap_ab(target))?;
        if sym != eq.poly {
            return Err(AsymError::Step {
                step: label.to_string(),
                msg: format!(
                    "equation {} is not the symmetrization of {}",
                    eq.label,
                    poly_to_string(target, &self.names)
                ),
            });
        }
        let fact = AsymFact {
            label: label.to_string(),
            poly: target.clone(),
            justification: Justification::FromEquation {
                equation: eq.label.clone(),
            },
            sym_certificate: eq.certificate.clone(),
        };
        self.verify_and_store_fact(fact, "fact", vec![eq.label.clone()])
    }

    /// Replaces the listed summands of a fact's polynomial by their swap.
    /// The symmetrization is unchanged, so the certificate carries over.
    pub fn rule1(&mut self, label: &str, parent: &str, replaced: &[Word]) -> Result<(), AsymError> {
        let parent_fact = self.fact(parent)?.clone();
        let p = self.rs.modulus();
        let ngens = self.rs.generator_count();
        let mut moved = Poly::zero(p, ngens)?;
        let mut inputs = vec![parent.to_string()];
        for w in replaced {
            let c = parent_fact.poly.coeff(w);
            if c == 0 {
                return Err(AsymError::Step {
                    step: label.to_string(),
                    msg: format!(
                        "word {} is not a summand of {}",
                        word_to_string(w, &self.names),
                        parent
                    ),
                });
            }
            moved = moved.add(&Poly::monomial(w.clone(), c as i64, p, ngens)?)?;
            inputs.push(word_to_string(w, &self.names));
        }
        let poly = parent_fact.poly.sub(&moved)?.add(&swap_ab(&moved))?;
        let fact = AsymFact {
            label: label.to_string(),
            poly,
            justification: Justification::Rule1 {
                parent: parent.to_string(),
                replaced: replaced.to_vec(),
            },
            sym_certificate: parent_fact.sym_certificate.clone(),
        };
        self.verify_and_store_fact(fact, "rule1", inputs)
    }

    /// From Asym(g) and an equation g + h = 0, derives Asym(h). The
    /// equation's ideal membership is re-decided, not trusted.
    pub fn rule2(&mut self, label: &str, fact: &str, equation: &str) -> Result<(), AsymError> {
        let parent_fact = self.fact(fact)?.clone();
        let eq = self.resolve_equation(equation)?;
        if !self.oracle.is_member(&eq.poly, false)?.member {
            return Err(AsymError::Step {
                step: label.to_string(),
                msg: format!("equation {} is not in the ambient ideal", equation),
            });
        }
        let p = self.rs.modulus();
        let poly = eq.poly.sub(&parent_fact.poly)?;
        let swapped_cert = eq.certificate.swapped(&self.rs)?;
        let sym_certificate = eq
            .certificate
            .add(&swapped_cert, p)
            .add(&parent_fact.sym_certificate.scale(-1, p), p);
        let fact_out = AsymFact {
            label: label.to_string(),
            poly,
            justification: Justification::Rule2 {
                fact: fact.to_string(),
                equation: equation.to_string(),
            },
            sym_certificate,
        };
        self.verify_and_store_fact(
            fact_out,
            "rule2",
            vec![fact.to_string(), equation.to_string()],
        )
    }

    /// Linear combination of facts: Asym is linear.
    pub fn combine(&mut self, label: &str, parts: &[(i64, &str)]) -> Result<(), AsymError> {
        let p = self.rs.modulus();
        let mut poly = Poly::zero(p, self.rs.generator_count())?;
        let mut cert = Certificate::default();
        let mut just = Vec::new();
        for (c, fl) in parts {
            let f = self.fact(fl)?;
            poly = poly.add(&f.poly.scale(*c))?;
            cert = cert.add(&f.sym_certificate.scale(*c, p), p);
            just.push((*c, fl.to_string()));
        }
        let fact = AsymFact {
            label: label.to_string(),
            poly,
            justification: Justification::Combine { parts: just },
            sym_certificate: cert,
        };
        let inputs = parts.iter().map(|(_, l)| l.to_string()).collect();
        self.verify_and_store_fact(fact, "combine", inputs)
    }

    /// Asym(f) gives Asym(swap(f)) with the same certificate; this is
    /// rule1 applied to the full support.
    pub fn swap_fact(&mut self, label: &str, parent: &str) -> Result<(), AsymError> {
        let parent_fact = self.fact(parent)?.clone();
        let fact = AsymFact {
            label: label.to_string(),
            poly: swap_ab(&parent_fact.poly),
            justification: Justification::Swapped {
                parent: parent.to_string(),
            },
            sym_certificate: parent_fact.sym_certificate,
        };
        self.verify_and_store_fact(fact, "rule1", vec![parent.to_string()])
    }
}

/// The ambient relation set used by the built-in k=4 derivation: the
/// one-b family S1..S6 with swaps, plus the swap-invariant L1.
pub fn replay_ambient(p: u64) -> Result<RelationSet, AsymError> {
    let full = standard_relation_set(4, p, RelationChoice::All)?;
    let keep = |label: &str| -> bool {
        matches!(
            label,
            "S1" | "S2" | "S3" | "S4" | "S5" | "S6" | "S1s" | "S2s" | "S3s" | "S4s" | "S5s"
                | "S6s" | "L1"
        )
    };
    let rels: Vec<(String, Poly)> = full
        .relations()
        .iter()
        .filter(|r| keep(r.label()))
        .map(|r| (r.label().to_string(), r.poly().clone()))
        .collect();
    Ok(RelationSet::new(
        4,
        p,
        2,
        "k4_replay_ambient",
        rels,
        Provenance::Standard,
    )?)
}

fn wd(s: &str) -> Word {
    Word::from_indices(
        &s.bytes()
            .map(|c| if c == b'a' { 0u8 } else { 1 })
            .collect::<Vec<_>>(),
    )
}

/// Runs the built-in k=4 derivation over F_p (odd p): ten multiplied
/// equations, six combination equations, and a chain of facts ending in
/// Asym for all ten swap-orbit representatives of multiweight (3,3).
/// The first step that fails verification aborts the replay with its name.
pub fn replay_appendix(p: u64) -> Result<DerivationLog, AsymError> {
    if p == 2 {
        return Err(AsymError::EvenModulus);
    }
    let rs = replay_ambient(p)?;
    let names = default_names(2)?;
    let mut ctx = ReplayContext::new(rs)?;
    let e = Word::empty();
    let b = wd("b");
    let bb = wd("bb");
    let a = wd("a");
    let ab = wd("ab");

    let target = |s: &str| -> Result<Poly, AsymError> { Ok(parse_poly(s, &names, p)?) };
    let expect_fact = |ctx: &ReplayContext, label: &str, s: &str| -> Result<(), AsymError> {
        let want = parse_poly(s, &names, p)?;
        if ctx.fact(label)?.poly != want {
            return Err(AsymError::Step {
                step: label.to_string(),
                msg: format!("expected {}", s),
            });
        }
        Ok(())
    };

    // homogeneous multiples of the base relations
    ctx.mult("S8", "S2", &e, &b)?;
    ctx.mult("S9", "S1", &bb, &e)?;
    ctx.mult("S10", "S4", &b, &e)?;
    ctx.mult("S11", "S2", &b, &e)?;
    ctx.mult("S12", "S1", &b, &b)?;
    ctx.mult("S13", "S3", &e, &b)?;
    ctx.mult("S14", "S1", &e, &bb)?;
    ctx.mult("L8", "L1", &ab, &e)?;
    ctx.mult("L9", "L1", &e, &ab)?;
    ctx.mult("L10", "L1", &a, &b)?;

    // difference equations isolate the first symmetrization
    let s8 = ctx.equation("S8")?.clone();
    let s5s = ctx.axiom("S5s")?;
    ctx.lincomb("D1", &[(1, s8.clone()), (-1, s5s)])?;
    let d1 = ctx.equation("D1")?.clone();
    let s9 = ctx.equation("S9")?.clone();
    ctx.lincomb("D2", &[(1, d1), (1, s9)])?;
    let d2 = ctx.equation("D2")?.clone();
    ctx.fact_from_equation("A1", &d2, &target("a^3*b^3 + a^2*b^2*a*b")?)?;

    ctx.rule2("A2a", "A1", "S8")?;
    expect_fact(&ctx, "A2a", "a*b*a*b*a*b + b*a^2*b*a*b")?;
    ctx.rule1("A2", "A2a", &[wd("baabab")])?;
    expect_fact(&ctx, "A2", "a*b*a*b*a*b + a*b^2*a*b*a")?;

    ctx.rule1("A3a", "A2", &[wd("ababab")])?;
    ctx.rule2("A3", "A3a", "S5")?;
    expect_fact(&ctx, "A3", "a^2*b^3*a + a^2*b*a*b^2")?;

    let s10 = ctx.equation("S10")?.clone();
    let sym_a1 = ctx.sym_equation("A1")?;
    let sym_a2 = ctx.sym_equation("A2")?;
    ctx.lincomb(
        "D3",
        &[(1, s8), (1, s10.clone()), (-1, sym_a1), (-1, sym_a2)],
    )?;
    let s6 = ctx.axiom("S6")?;
    let d3 = ctx.equation("D3")?.clone();
    let s6_plus_d3 = ctx.equation_combine("S6+D3", &[(1, s6.clone()), (1, d3)])?;
    ctx.fact_from_equation("A4", &s6_plus_d3, &target("a*b*a^2*b^2 + a*b*a*b^2*a")?)?;

    ctx.rule2("A5a", "A4", "S6")?;
    expect_fact(&ctx, "A5a", "a*b^2*a*b*a + b^2*a^2*b*a")?;
    ctx.rule1("A5", "A5a", &[wd("bbaaba")])?;
    expect_fact(&ctx, "A5", "a^2*b^2*a*b + a*b^2*a*b*a")?;

    ctx.rule1("A6a", "A5", &[wd("abbaba")])?;
    ctx.rule2("A6", "A6a", "S8")?;
    expect_fact(&ctx, "A6", "a^3*b^3 + a*b*a*b*a*b")?;

    // single-monomial facts
    let l8 = ctx.equation("L8")?.clone();
    ctx.lincomb("D4", &[(1, l8), (-1, s6)])?;
    let s11 = ctx.equation("S11")?.clone();
    let s11_swapped = ctx.equation_swap(&s11)?;
    let d4 = ctx.equation("D4")?.clone();
    let m1_eq = ctx.equation_combine("swap(S11)-D4", &[(1, s11_swapped.clone()), (-1, d4)])?;
    ctx.fact_from_equation("M1", &m1_eq, &target("a^2*b^2*a*b")?)?;

    ctx.combine("M2", &[(1, "A1"), (-1, "M1")])?;
    expect_fact(&ctx, "M2", "a^3*b^3")?;
    ctx.combine("M3", &[(1, "A6"), (-1, "M2")])?;
    expect_fact(&ctx, "M3", "a*b*a*b*a*b")?;
    ctx.combine("M4", &[(1, "A2"), (-1, "M3")])?;
    expect_fact(&ctx, "M4", "a*b^2*a*b*a")?;

    let l9 = ctx.equation("L9")?.clone();
    ctx.lincomb("D5", &[(1, l9), (-1, s11_swapped)])?;
    let s12 = ctx.equation("S12")?.clone();
    let d5 = ctx.equation("D5")?.clone();
    let m5_eq = ctx.equation_combine("S12-D5", &[(1, s12), (-1, d5)])?;
    ctx.fact_from_equation("M5", &m5_eq, &target("a*b^3*a^2")?)?;

    ctx.swap_fact("M1s", "M1")?;
    ctx.swap_fact("M3s", "M3")?;
    ctx.swap_fact("M5s", "M5")?;
    ctx.combine("M6a", &[(1, "M1s"), (1, "M3s"), (1, "M5s")])?;
    ctx.rule2("M6b", "M6a", "S11")?;
    expect_fact(&ctx, "M6b", "b*a^2*b^2*a")?;
    ctx.swap_fact("M6", "M6b")?;
    expect_fact(&ctx, "M6", "a*b^2*a^2*b")?;

    let l10 = ctx.equation("L10")?.clone();
    let s10_swapped = ctx.equation_swap(&s10)?;
    ctx.lincomb("D6", &[(1, l10), (-1, s10_swapped)])?;
    let s13 = ctx.equation("S13")?.clone();
    let d6 = ctx.equation("D6")?.clone();
    let m7_eq = ctx.equation_combine("S13-D6", &[(1, s13), (-1, d6)])?;
    ctx.fact_from_equation("M7", &m7_eq, &target("a*b*a*b^2*a")?)?;

    ctx.combine("M8", &[(1, "A4"), (-1, "M7")])?;
    expect_fact(&ctx, "M8", "a*b*a^2*b^2")?;

    ctx.combine("M9a", &[(1, "M2"), (1, "M8"), (1, "M5s")])?;
    ctx.rule2("M9", "M9a", "S14")?;
    expect_fact(&ctx, "M9", "a^2*b*a*b^2")?;
    ctx.combine("M10", &[(1, "A3"), (-1, "M9")])?;
    expect_fact(&ctx, "M10", "a^2*b^3*a")?;

    let final_labels = ["M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8", "M9", "M10"];
    let final_facts = final_labels
        .iter()
        .map(|l| {
            let f = ctx.fact(l)?;
            Ok(FinalFact {
                label: l.to_string(),
                poly: poly_to_string(&f.poly, &names),
            })
        })
        .collect::<Result<Vec<_>, AsymError>>()?;
    let derived_equation_count = ctx
        .steps
        .iter()
        .filter(|s| s.kind == "mult" || s.kind == "lincomb")
        .count();
    Ok(DerivationLog {
        p,
        steps: ctx.steps.clone(),
        final_facts,
        axioms_used: ctx.axioms_used(),
        derived_equation_count,
        failure_count: 0,
    })
}

/// Which order-two operator indexes the matrix columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaOperator {
    /// s sends a monomial m to -swap(m).
    SwapNegate,
    /// s sends a monomial to its reversal.
    Mirror,
}

impl SigmaOperator {
    fn word_image(&self, w: &Word) -> Word {
        match self {
            SigmaOperator::SwapNegate => swap_word(w),
            SigmaOperator::Mirror => w.reversed(),
        }
    }

    fn poly_image(&self, f: &Poly) -> Poly {
        match self {
            SigmaOperator::SwapNegate => swap_ab(f).neg(),
            SigmaOperator::Mirror => mirror(f),
        }
    }

    /// Sign carried into the s-coefficient of an entry.
    fn epsilon(&self) -> i64 {
        match self {
            SigmaOperator::SwapNegate => -1,
            SigmaOperator::Mirror => 1,
        }
    }
}

impl std::fmt::Display for SigmaOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SigmaOperator::SwapNegate => "swap_negate",
            SigmaOperator::Mirror => "mirror",
        })
    }
}

/// A matrix over F_p\[s\]/(s^2-1): each entry is a pair (c0, c1) standing
/// for c0 + c1*s, columns indexed by operator-orbit representatives.
#[derive(Debug, Clone)]
pub struct SigmaMatrix {
    p: u64,
    operator: SigmaOperator,
    columns: Vec<Word>,
    fixed: Vec<bool>,
    rows: Vec<Vec<(u64, u64)>>,
    row_names: Vec<String>,
}

impl SigmaMatrix {
    /// Raw constructor for hand-built matrices; only the shape is checked,
    /// no orbit bookkeeping.
    pub fn from_parts(
        p: u64,
        operator: SigmaOperator,
        columns: Vec<Word>,
        fixed: Vec<bool>,
        rows: Vec<Vec<(u64, u64)>>,
        row_names: Vec<String>,
    ) -> Result<Self, AsymError> {
        crate::gf::check_prime(p)?;
        if fixed.len() != columns.len() {
            return Err(AsymError::Shape("fixed flags must match columns".into()));
        }
        if rows.iter().any(|r| r.len() != columns.len()) {
            return Err(AsymError::Shape("row width must match columns".into()));
        }
        if row_names.len() != rows.len() {
            return Err(AsymError::Shape("row names must match rows".into()));
        }
        if rows
            .iter()
            .any(|r| r.iter().any(|&(c0, c1)| c0 >= p || c1 >= p))
        {
            return Err(AsymError::Shape("entries must be reduced mod p".into()));
        }
        Ok(SigmaMatrix {
            p,
            operator,
            columns,
            fixed,
            rows,
            row_names,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn operator(&self) -> SigmaOperator {
        self.operator
    }

    pub fn columns(&self) -> &[Word] {
        &self.columns
    }

    pub fn fixed(&self) -> &[bool] {
        &self.fixed
    }

    pub fn rows(&self) -> &[Vec<(u64, u64)>] {
        &self.rows
    }

    pub fn row_names(&self) -> &[String] {
        &self.row_names
    }
}

/// Builds the operator-orbit matrix of the ideal component at mw: columns
/// are orbit representatives of the words, rows are the original spanning
/// products u*r*v written in the F_p\[s\] coordinates.
///
/// The component must be closed under the operator; the offending row is
/// named otherwise.
pub fn build_sigma_matrix(
    rs: &RelationSet,
    mw: &[u32],
    operator: SigmaOperator,
) -> Result<SigmaMatrix, AsymError> {
    if operator == SigmaOperator::SwapNegate && (mw.len() != 2 || mw[0] != mw[1]) {
        return Err(AsymError::NotBalanced(mw.to_vec()));
    }
    let words = words_of_multiweight(mw);
    let mut columns = Vec::new();
    let mut fixed = Vec::new();
    for w in &words {
        let img = operator.word_image(w);
        if img < *w {
            continue;
        }
        columns.push(w.clone());
        fixed.push(img == *w);
    }
    let basis = ideal_basis(rs, mw)?;
    let names = default_names(rs.generator_count())?;
    let eps = operator.epsilon();
    let p = rs.modulus();
    let mut rows = Vec::new();
    let mut row_names = Vec::new();
    for (entry, poly) in spanning_rows(rs, mw)? {
        let name = format!(
            "({},{},{})",
            word_to_string(&entry.left, &names),
            entry.label,
            word_to_string(&entry.right, &names)
        );
        let image = operator.poly_image(&poly);
        if !reduce(&image, &basis)?.is_zero() {
            return Err(AsymError::NotClosed(name));
        }
        let mut row = Vec::with_capacity(columns.len());
        for m in &columns {
            let c0 = poly.coeff(m);
            let c_img = poly.coeff(&operator.word_image(m));
            let c1 = if eps < 0 { m_sub(0, c_img, p) } else { c_img };
            row.push((c0, c1));
        }
        rows.push(row);
        row_names.push(name);
    }
    SigmaMatrix::from_parts(p, operator, columns, fixed, rows, row_names)
}

/// Outcome of [`sigma_reduce`].
#[derive(Debug, Clone)]
pub struct SigmaReduction {
    /// Whether a presentation with a (1 - s) entry leading every non-fixed
    /// column was reached.
    pub triangularized: bool,
    /// The triangularized rows, or the reduced row space when the attempt
    /// fails; entries as (c0, c1) pairs.
    pub transformed: Vec<Vec<(u64, u64)>>,
    /// Human-readable reason when not triangularized.
    pub obstruction: Option<String>,
}

fn lift_minus_row(free_cols: &[usize], width: usize, row: &[u64], p: u64) -> Vec<(u64, u64)> {
    let mut out = vec![(0u64, 0u64); width];
    for (j, &col) in free_cols.iter().enumerate() {
        let x = row[j];
        out[col] = (x, m_sub(0, x, p));
    }
    out
}

/// Attempts to transform the row space into upper-triangular form with
/// (1 - s) in every non-fixed diagonal position.
///
/// For odd p the ring splits along s = ±1: the s = -1 specialization must
/// have full column rank on the non-fixed columns, and at least one spare
/// row must remain to absorb the s = +1 parts. A square full-rank matrix
/// is an obstruction of its own, since scaling the diagonal down to
/// (1 - s) would have to consume a unit determinant, as the identity
/// matrix shows. For p = 2 each non-fixed column is tested directly for a
/// row-space element with zero prefix and entry (1 + s) there.
pub fn sigma_reduce(m: &SigmaMatrix) -> SigmaReduction {
    let p = m.p;
    let free_cols: Vec<usize> = (0..m.columns.len()).filter(|&i| !m.fixed[i]).collect();
    if m.rows.is_empty() {
        return SigmaReduction {
            triangularized: false,
            transformed: Vec::new(),
            obstruction: Some("no rows".into()),
        };
    }
    let names = default_names(2).expect("two generators");
    if p != 2 {
        // s = -1 specialization over the non-fixed columns
        let mut ech = Echelon::new(p, free_cols.len());
        for row in &m.rows {
            let vec: Vec<u64> = free_cols
                .iter()
                .map(|&c| m_sub(row[c].0, row[c].1, p))
                .collect();
            ech.insert(vec);
        }
        let full = ech.rank() == free_cols.len();
        let transformed: Vec<Vec<(u64, u64)>> = ech
            .rows()
            .map(|r| lift_minus_row(&free_cols, m.columns.len(), r, p))
            .collect();
        if full && m.rows.len() > free_cols.len() {
            return SigmaReduction {
                triangularized: true,
                transformed,
                obstruction: None,
            };
        }
        let obstruction = if full {
            Some(
                "row count equals non-fixed column count: no spare row to absorb the \
                 symmetric parts (determinant obstruction)"
                    .into(),
            )
        } else {
            let pivots: BTreeSet<usize> = ech.pivot_columns().into_iter().collect();
            let missing = (0..free_cols.len())
                .find(|i| !pivots.contains(i))
                .expect("rank below column count leaves a gap");
            Some(format!(
                "non-fixed column '{}' not reachable",
                word_to_string(&m.columns[free_cols[missing]], &names)
            ))
        };
        return SigmaReduction {
            triangularized: false,
            transformed,
            obstruction,
        };
    }
    // p = 2: interleaved coordinates (c0, c1) per column; the row space is
    // the F_2-span of the rows and their s-multiples, and s*(c0 + c1*s)
    // swaps the pair
    let width = 2 * m.columns.len();
    let interleave = |row: &[(u64, u64)], twisted: bool| -> Vec<u64> {
        let mut v = Vec::with_capacity(width);
        for &(c0, c1) in row {
            if twisted {
                v.push(c1);
                v.push(c0);
            } else {
                v.push(c0);
                v.push(c1);
            }
        }
        v
    };
    let mut full_ech = Echelon::new(2, width);
    for row in &m.rows {
        full_ech.insert(interleave(row, false));
        full_ech.insert(interleave(row, true));
    }
    let transformed: Vec<Vec<(u64, u64)>> = full_ech
        .rows()
        .map(|r| r.chunks(2).map(|c| (c[0], c[1])).collect())
        .collect();
    for &col in &free_cols {
        let prefix_width = 2 * (col + 1);
        let mut ech = Echelon::new(2, prefix_width);
        for row in &m.rows {
            ech.insert(interleave(row, false)[..prefix_width].to_vec());
            ech.insert(interleave(row, true)[..prefix_width].to_vec());
        }
        let mut want = vec![0u64; prefix_width];
        want[prefix_width - 2] = 1;
        want[prefix_width - 1] = 1;
        if !ech.contains(&want) {
            return SigmaReduction {
                triangularized: false,
                transformed,
                obstruction: Some(format!(
                    "non-fixed column '{}' not reachable",
                    word_to_string(&m.columns[col], &names)
                )),
            };
        }
    }
    SigmaReduction {
        triangularized: true,
        transformed,
        obstruction: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilquot::is_member;

    #[test]
    fn replay_rejects_characteristic_two() {
        assert!(matches!(replay_appendix(2), Err(AsymError::EvenModulus)));
    }

    #[test]
    fn replay_shape_at_p3() {
        let log = replay_appendix(3).unwrap();
        assert_eq!(log.p, 3);
        assert_eq!(log.final_facts.len(), 10);
        assert_eq!(log.derived_equation_count, 16);
        assert_eq!(log.failure_count, 0);
        assert!(log.steps.iter().all(|s| s.verified));
        assert_eq!(
            log.axioms_used,
            vec!["L1", "S1", "S2", "S3", "S4", "S5", "S6"]
        );
    }

    #[test]
    fn replay_final_facts_are_orbit_representatives() {
        let log = replay_appendix(3).unwrap();
        let names = default_names(2).unwrap();
        let mut derived: Vec<String> = log.final_facts.iter().map(|f| f.poly.clone()).collect();
        derived.sort();
        let mut reps: Vec<String> = words_of_multiweight(&[3, 3])
            .into_iter()
            .filter(|w| swap_word(w) >= *w)
            .map(|w| poly_to_string(&Poly::monomial(w, 1, 3, 2).unwrap(), &names))
            .collect();
        reps.sort();
        assert_eq!(derived, reps);
    }

    #[test]
    fn replay_succeeds_at_several_primes() {
        for p in [3u64, 5, 7] {
            let log = replay_appendix(p).unwrap();
            assert_eq!(log.final_facts.len(), 10, "p={}", p);
        }
    }

    #[test]
    fn replay_facts_hold_against_fresh_decision() {
        let p = 5;
        let rs = replay_ambient(p).unwrap();
        let names = default_names(2).unwrap();
        let log = replay_appendix(p).unwrap();
        for f in &log.final_facts {
            let poly = parse_poly(&f.poly, &names, p).unwrap();
            let sym = poly.add(&swap_ab(&poly)).unwrap();
            assert!(is_member(&sym, &rs, false).unwrap().member, "{}", f.label);
        }
    }

    #[test]
    fn rule1_is_involutive() {
        let rs = replay_ambient(3).unwrap();
        let mut ctx = ReplayContext::new(rs).unwrap();
        ctx.mult("S8", "S2", &Word::empty(), &wd("b")).unwrap();
        ctx.mult("S9", "S1", &wd("bb"), &Word::empty()).unwrap();
        let s8 = ctx.equation("S8").unwrap().clone();
        let s5s = ctx.axiom("S5s").unwrap();
        ctx.lincomb("D1", &[(1, s8), (-1, s5s)]).unwrap();
        let d1 = ctx.equation("D1").unwrap().clone();
        let s9 = ctx.equation("S9").unwrap().clone();
        ctx.lincomb("D2", &[(1, d1), (1, s9)]).unwrap();
        let d2 = ctx.equation("D2").unwrap().clone();
        let names = default_names(2).unwrap();
        let t = parse_poly("a^3*b^3 + a^2*b^2*a*b", &names, 3).unwrap();
        ctx.fact_from_equation("A1", &d2, &t).unwrap();
        ctx.rule1("X", "A1", &[wd("aabbab")]).unwrap();
        ctx.rule1("Y", "X", &[wd("bbaaba")]).unwrap();
        assert_eq!(ctx.fact("Y").unwrap().poly, ctx.fact("A1").unwrap().poly);
        // replacing a word that is not a summand fails
        assert!(matches!(
            ctx.rule1("Z", "A1", &[wd("ababab")]),
            Err(AsymError::Step { .. })
        ));
    }

    #[test]
    fn sigma_matrix_k4_shape_and_reduction() {
        for p in [3u64, 5, 7] {
            let rs = standard_relation_set(4, p, RelationChoice::All).unwrap();
            let m = build_sigma_matrix(&rs, &[3, 3], SigmaOperator::SwapNegate).unwrap();
            assert_eq!(m.columns().len(), 10);
            assert!(m.fixed().iter().all(|&f| !f));
            assert!(m.rows().len() > 10);
            let red = sigma_reduce(&m);
            assert!(red.triangularized, "p={}", p);
            assert!(red.obstruction.is_none());
            // the triangle carries (1 - s) in every diagonal position
            assert_eq!(red.transformed.len(), 10);
            for (i, row) in red.transformed.iter().enumerate() {
                assert_eq!(row[i], (1, p - 1));
                for j in 0..i {
                    assert_eq!(row[j], (0, 0));
                }
            }
        }
    }

    #[test]
    fn sigma_matrix_k5_mirror() {
        let rs = standard_relation_set(5, 3, RelationChoice::All).unwrap();
        let m = build_sigma_matrix(&rs, &[4, 4], SigmaOperator::Mirror).unwrap();
        assert_eq!(m.columns().len(), 38);
        assert_eq!(m.fixed().iter().filter(|&&f| f).count(), 6);
        let red = sigma_reduce(&m);
        assert!(red.triangularized);
    }

    #[test]
    fn sigma_reduce_identity_is_not_triangular() {
        let columns: Vec<Word> = words_of_multiweight(&[2, 2])
            .into_iter()
            .filter(|w| swap_word(w) >= *w)
            .collect();
        let n = columns.len();
        let rows: Vec<Vec<(u64, u64)>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { (1u64, 0u64) } else { (0, 0) })
                    .collect()
            })
            .collect();
        let names = (0..n).map(|i| format!("r{}", i)).collect();
        let m = SigmaMatrix::from_parts(
            3,
            SigmaOperator::SwapNegate,
            columns,
            vec![false; n],
            rows,
            names,
        )
        .unwrap();
        let red = sigma_reduce(&m);
        assert!(!red.triangularized);
        assert!(red.obstruction.unwrap().contains("determinant"));
    }

    #[test]
    fn sigma_reduce_empty_matrix() {
        let m = SigmaMatrix::from_parts(
            3,
            SigmaOperator::SwapNegate,
            vec![],
            vec![],
            vec![],
            vec![],
        )
        .unwrap();
        let red = sigma_reduce(&m);
        assert!(!red.triangularized);
        assert_eq!(red.obstruction.as_deref(), Some("no rows"));
    }

    #[test]
    fn sigma_matrix_closure_failure_names_row() {
        // a single relation without its swap is not closed at (3,3)
        let full = standard_relation_set(4, 3, RelationChoice::All).unwrap();
        let s1 = full.relation("S1").unwrap();
        let rs = RelationSet::new(
            4,
            3,
            2,
            "s1_only",
            vec![("S1".to_string(), s1.poly().clone())],
            Provenance::Generated,
        )
        .unwrap();
        let err = build_sigma_matrix(&rs, &[3, 3], SigmaOperator::SwapNegate).unwrap_err();
        match err {
            AsymError::NotClosed(name) => assert!(name.contains("S1")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn sigma_reduce_runs_at_p2() {
        let rs = standard_relation_set(4, 2, RelationChoice::All).unwrap();
        let m = build_sigma_matrix(&rs, &[3, 3], SigmaOperator::SwapNegate).unwrap();
        let red = sigma_reduce(&m);
        // smoke check: a definite outcome with a transformed row space
        assert!(!red.transformed.is_empty());
        let _ = red.triangularized;
    }

    #[test]
    fn unbalanced_multiweight_rejected() {
        let rs = standard_relation_set(4, 3, RelationChoice::All).unwrap();
        assert!(matches!(
            build_sigma_matrix(&rs, &[2, 3], SigmaOperator::SwapNegate),
            Err(AsymError::NotBalanced(_))
        ));
    }
}
