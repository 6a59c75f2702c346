use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::catalog::{instantiate, Direction, RuleId, RuleParams};
use crate::surface::{csb_membership, default_csb_budget};
use crate::tangle::{MoveCounts, SimplifyBudget, TrivialityVerdict};
use crate::word::{parse_closed, ClosedSurfaceWord, Generator, SurfaceBraidWord, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("{rule} has no valid instance for {params} on {strands} strands")]
    InvalidParams { rule: RuleId, params: RuleParams, strands: usize },
    #[error("{rule} {direction} does not match at position {position}")]
    PatternMismatch { rule: RuleId, direction: Direction, position: usize },
    #[error("{0} only applies to closed words")]
    ClosureMoveOnOpenWord(RuleId),
    #[error("word is not destabilizable with the given letter")]
    NotDestabilizable,
    #[error("CSB condition for {rule} not certified on {word}: L+ {plus}, L- {minus}")]
    CsbNotCertified { rule: RuleId, word: String, plus: &'static str, minus: &'static str },
    #[error("recorded word lengths {recorded:?} do not match {actual:?}")]
    LengthMismatch { recorded: (Option<usize>, Option<usize>), actual: (usize, usize) },
    #[error("final word {found} differs from the recorded end {expected}")]
    EndMismatch { expected: String, found: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strictness {
    /// Every `C1`/`C2` step must have a certified CSB condition.
    Strict,
    /// Closure moves are taken on faith.
    Lax,
}

/// Move counts of the unlinking traces of both resolutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsbEvidence {
    pub plus: MoveCounts,
    pub minus: MoveCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub rule: RuleId,
    pub direction: Direction,
    #[serde(default)]
    pub params: RuleParams,
    pub position: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub before_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub after_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<CsbEvidence>,
}

impl RewriteStep {
    pub fn new(rule: RuleId, direction: Direction, params: RuleParams, position: usize) -> Self {
        RewriteStep { rule, direction, params, position, before_len: None, after_len: None, evidence: None }
    }

    /// The step undoing `self`, given the word it produced.
    pub fn inverse(&self, after: &SurfaceBraidWord) -> RewriteStep {
        let position = match (self.rule, self.direction) {
            (RuleId::C1, Direction::Forward) => after.len() - 1,
            (RuleId::C1, Direction::Backward) => 0,
            (RuleId::C2, Direction::Forward) => after.len() - 1,
            (RuleId::C2, Direction::Backward) => after.len(),
            _ => self.position,
        };
        RewriteStep {
            rule: self.rule,
            direction: self.direction.reversed(),
            params: self.params,
            position,
            before_len: self.after_len,
            after_len: self.before_len,
            evidence: None,
        }
    }
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} @{}", self.rule, self.direction, self.position)?;
        let p = self.params.to_string();
        if !p.is_empty() {
            write!(f, " [{p}]")?;
        }
        Ok(())
    }
}

/// Apply one step. `open` forbids the closure moves.
pub fn apply_step(word: &SurfaceBraidWord, open: bool, step: &RewriteStep) -> Result<SurfaceBraidWord, RewriteError> {
    let letters = word.letters();
    let n = word.strands();
    match step.rule {
        RuleId::C1 | RuleId::C2 if open => Err(RewriteError::ClosureMoveOnOpenWord(step.rule)),
        RuleId::C1 => {
            let mismatch = RewriteError::PatternMismatch { rule: step.rule, direction: step.direction, position: step.position };
            if letters.is_empty() {
                return Err(mismatch);
            }
            let mut out = letters.to_vec();
            match step.direction {
                Direction::Forward if step.position == 0 => out.rotate_left(1),
                Direction::Backward if step.position == letters.len() - 1 => out.rotate_right(1),
                _ => return Err(mismatch),
            }
            Ok(SurfaceBraidWord::new(n, out)?)
        }
        RuleId::C2 => {
            let x = step.params.x.ok_or(RewriteError::InvalidParams { rule: step.rule, params: step.params, strands: n })?;
            match step.direction {
                Direction::Forward => {
                    if step.position != letters.len() {
                        return Err(RewriteError::PatternMismatch {
                            rule: step.rule,
                            direction: step.direction,
                            position: step.position,
                        });
                    }
                    let mut out = letters.to_vec();
                    out.push(Generator { kind: x, index: n });
                    Ok(SurfaceBraidWord::new(n + 1, out)?)
                }
                Direction::Backward => {
                    let ok = n >= 2
                        && step.position + 1 == letters.len()
                        && letters[step.position] == (Generator { kind: x, index: n - 1 })
                        && letters[..step.position].iter().all(|g| g.index + 2 <= n);
                    if !ok {
                        return Err(RewriteError::NotDestabilizable);
                    }
                    Ok(SurfaceBraidWord::new(n - 1, letters[..step.position].to_vec())?)
                }
            }
        }
        rule => {
            let inst = instantiate(rule, step.params, n).ok_or(RewriteError::InvalidParams { rule, params: step.params, strands: n })?;
            let (pattern, replacement) = inst.side(step.direction);
            let end = step.position + pattern.len();
            if end > letters.len() || &letters[step.position..end] != pattern {
                return Err(RewriteError::PatternMismatch { rule, direction: step.direction, position: step.position });
            }
            let mut out = Vec::with_capacity(letters.len() - pattern.len() + replacement.len());
            out.extend_from_slice(&letters[..step.position]);
            out.extend_from_slice(replacement);
            out.extend_from_slice(&letters[end..]);
            Ok(SurfaceBraidWord::new(n, out)?)
        }
    }
}

/// The word whose membership in CSB justifies a closure step from `before` to `after`.
pub(crate) fn csb_subject<'a>(step: &RewriteStep, before: &'a SurfaceBraidWord, after: &'a SurfaceBraidWord) -> &'a SurfaceBraidWord {
    match (step.rule, step.direction) {
        (RuleId::C2, Direction::Backward) => after,
        _ => before,
    }
}

/// Lexicographically least rotation; closures of rotations coincide.
fn rotation_key(word: &SurfaceBraidWord) -> (usize, Vec<Generator>) {
    let l = word.letters();
    let best = (0..l.len().max(1))
        .map(|r| {
            let mut v = l.to_vec();
            v.rotate_left(r.min(l.len()));
            v
        })
        .min()
        .unwrap_or_default();
    (word.strands(), best)
}

/// Memoized CSB checks, keyed by closure.
#[derive(Debug, Default)]
pub struct CsbCache {
    results: HashMap<(usize, Vec<Generator>), Result<CsbEvidence, (&'static str, &'static str)>>,
    budget: Option<SimplifyBudget>,
}

impl CsbCache {
    pub fn with_budget(budget: SimplifyBudget) -> Self {
        CsbCache { results: HashMap::new(), budget: Some(budget) }
    }

    pub fn check(&mut self, word: &SurfaceBraidWord) -> Result<CsbEvidence, (&'static str, &'static str)> {
        let key = rotation_key(word);
        if let Some(r) = self.results.get(&key) {
            return *r;
        }
        let budget = self.budget.unwrap_or_else(|| default_csb_budget(word));
        let closed = ClosedSurfaceWord::new(word.clone());
        let r = match csb_membership(&closed, budget) {
            (TrivialityVerdict::Trivial(p), TrivialityVerdict::Trivial(m)) => Ok(CsbEvidence { plus: p.counts, minus: m.counts }),
            (p, m) => Err((p.label(), m.label())),
        };
        self.results.insert(key, r);
        r
    }
}

/// A replayable derivation between two words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteCertificate {
    #[serde(with = "word_text")]
    pub start: SurfaceBraidWord,
    #[serde(with = "word_text")]
    pub end: SurfaceBraidWord,
    /// Open words admit only the relations, never `C1`/`C2`.
    pub open: bool,
    pub strictness: Strictness,
    pub steps: Vec<RewriteStep>,
}

mod word_text {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(w: &SurfaceBraidWord, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&ClosedSurfaceWord::new(w.clone()).to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<SurfaceBraidWord, D::Error> {
        let text = String::deserialize(d)?;
        parse_closed(&text).map(ClosedSurfaceWord::into_word).map_err(serde::de::Error::custom)
    }
}

impl RewriteCertificate {
    pub fn start_closed(&self) -> ClosedSurfaceWord {
        ClosedSurfaceWord::new(self.start.clone())
    }

    pub fn end_closed(&self) -> ClosedSurfaceWord {
        ClosedSurfaceWord::new(self.end.clone())
    }

    pub fn rules_used(&self) -> Vec<RuleId> {
        let mut r: Vec<RuleId> = self.steps.iter().map(|s| s.rule).collect();
        r.sort();
        r.dedup();
        r
    }

    pub fn count(&self, rule: RuleId) -> usize {
        self.steps.iter().filter(|s| s.rule == rule).count()
    }

    /// The certificate read backwards.
    pub fn reversed(&self) -> RewriteCertificate {
        let words = self.intermediate_words().expect("reversing an invalid certificate");
        let steps = self
            .steps
            .iter()
            .zip(words.iter().skip(1))
            .rev()
            .map(|(s, after)| {
                let mut inv = s.inverse(after);
                inv.evidence = s.evidence;
                inv
            })
            .collect();
        RewriteCertificate { start: self.end.clone(), end: self.start.clone(), open: self.open, strictness: self.strictness, steps }
    }

    /// All words along the derivation, without any CSB checks.
    pub fn intermediate_words(&self) -> Result<Vec<SurfaceBraidWord>, ReplayFailure> {
        let mut words = vec![self.start.clone()];
        for (index, step) in self.steps.iter().enumerate() {
            let next = apply_step(words.last().unwrap(), self.open, step).map_err(|error| ReplayFailure { step: Some(index), error })?;
            words.push(next);
        }
        Ok(words)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}: {error}", match .step { Some(i) => format!("step {i}"), None => "certificate".to_string() })]
pub struct ReplayFailure {
    /// Index of the first failing step; `None` when the end word mismatches.
    pub step: Option<usize>,
    pub error: RewriteError,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub steps: usize,
    pub closure_checks: usize,
}

/// Re-run every step; strict certificates also re-verify the CSB condition of
/// each closure move.
pub fn replay_certificate(cert: &RewriteCertificate, cache: &mut CsbCache) -> Result<ReplayReport, ReplayFailure> {
    let mut current = cert.start.clone();
    let mut closure_checks = 0;
    for (index, step) in cert.steps.iter().enumerate() {
        let next = apply_step(&current, cert.open, step).map_err(|error| ReplayFailure { step: Some(index), error })?;
        let recorded = (step.before_len, step.after_len);
        if recorded.0.is_some_and(|l| l != current.len()) || recorded.1.is_some_and(|l| l != next.len()) {
            return Err(ReplayFailure {
                step: Some(index),
                error: RewriteError::LengthMismatch { recorded, actual: (current.len(), next.len()) },
            });
        }
        if cert.strictness == Strictness::Strict && step.rule.is_closure_move() {
            let subject = csb_subject(step, &current, &next);
            if let Err((plus, minus)) = cache.check(subject) {
                return Err(ReplayFailure {
                    step: Some(index),
                    error: RewriteError::CsbNotCertified {
                        rule: step.rule,
                        word: ClosedSurfaceWord::new(subject.clone()).to_string(),
                        plus,
                        minus,
                    },
                });
            }
            closure_checks += 1;
        }
        current = next;
    }
    if current != cert.end {
        return Err(ReplayFailure {
            step: None,
            error: RewriteError::EndMismatch {
                expected: ClosedSurfaceWord::new(cert.end.clone()).to_string(),
                found: ClosedSurfaceWord::new(current).to_string(),
            },
        });
    }
    Ok(ReplayReport { steps: cert.steps.len(), closure_checks })
}
