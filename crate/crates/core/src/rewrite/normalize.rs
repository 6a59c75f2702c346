use thiserror::Error;

use super::catalog::{Direction, RuleId, RuleParams};
use super::certificate::{apply_step, RewriteCertificate, RewriteStep, Strictness};
use crate::surface::{csb_membership, default_csb_budget};
use crate::word::{ClosedSurfaceWord, Generator, Kind, SurfaceBraidWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("expected a closed word on 2 strands, got {0}")]
    NotTwoStrands(usize),
    #[error("{word} is not certified in CSB_2 (L+ {plus}, L- {minus})")]
    NotCsb { word: String, plus: &'static str, minus: &'static str },
}

/// Normal form `[a_1^α b_1^β c_1^γ c_1^{-δ}]_2` of a CSB word on 2 strands.
///
/// On 2 strands all letters commute, so only the letter counts matter:
/// repeated markers collapse, and with both markers present `c_1^2`
/// disappears, leaving the crossing parity. Otherwise the crossings cancel
/// down to their exponent sum, which membership forces into `{-1, 0, 1}`.
pub fn normalize_csb2(word: &ClosedSurfaceWord) -> Result<ClosedSurfaceWord, NormalizeError> {
    if word.closure_strands() != 2 {
        return Err(NormalizeError::NotTwoStrands(word.closure_strands()));
    }
    let (plus, minus) = csb_membership(word, default_csb_budget(word.word()));
    if !plus.is_trivial() || !minus.is_trivial() {
        return Err(NormalizeError::NotCsb { word: word.to_string(), plus: plus.label(), minus: minus.label() });
    }
    Ok(counting_form(word))
}

/// The normal form read off from letter counts, without the membership check.
pub(crate) fn counting_form(word: &ClosedSurfaceWord) -> ClosedSurfaceWord {
    let count = |k: Kind| word.letters().iter().filter(|g| g.kind == k).count() as i64;
    let (a, b) = (count(Kind::A) > 0, count(Kind::B) > 0);
    let t = count(Kind::C) - count(Kind::Cinv);
    let mut letters = Vec::new();
    if a {
        letters.push(Generator::a(1));
    }
    if b {
        letters.push(Generator::b(1));
    }
    let crossing = if a && b {
        (t.rem_euclid(2) == 1).then_some(Generator::c(1))
    } else {
        match t.signum() {
            1 => Some(Generator::c(1)),
            -1 => Some(Generator::cinv(1)),
            _ => None,
        }
    };
    letters.extend(crossing);
    ClosedSurfaceWord::new(SurfaceBraidWord::new(2, letters).expect("2-strand letters"))
}

/// `normalize_csb2` together with a derivation from `word` to its normal
/// form. The derivation uses relations only (A1, A2, A9, A10, A11), so it
/// holds on the open word as well and needs no closure-move checks.
pub fn normalize_csb2_certified(word: &ClosedSurfaceWord) -> Result<(ClosedSurfaceWord, RewriteCertificate), NormalizeError> {
    let form = normalize_csb2(word)?;
    let mut b = Builder { word: word.word().clone(), steps: Vec::new() };
    // Sort into a*, b*, c*, C* by adjacent same-index swaps.
    let rank = |k: Kind| match k {
        Kind::A => 0,
        Kind::B => 1,
        Kind::C => 2,
        Kind::Cinv => 3,
    };
    loop {
        let l = b.word.letters();
        let Some(p) = (0..l.len().saturating_sub(1)).find(|&p| rank(l[p].kind) > rank(l[p + 1].kind)) else {
            break;
        };
        let params = RuleParams { i: Some(1), k: Some(1), x: Some(l[p].kind), y: Some(l[p + 1].kind), ..RuleParams::default() };
        b.apply(RuleId::A2, Direction::Forward, params, p);
    }
    let count = |b: &Builder, k: Kind| b.word.letters().iter().filter(|g| g.kind == k).count();
    let one = RuleParams { i: Some(1), ..RuleParams::default() };
    while count(&b, Kind::A) > 1 {
        b.apply(RuleId::A9, Direction::Forward, one, 0);
    }
    let a = count(&b, Kind::A);
    while count(&b, Kind::B) > 1 {
        b.apply(RuleId::A10, Direction::Forward, one, a);
    }
    let markers = a + count(&b, Kind::B);
    let cancel = RuleParams { i: Some(1), x: Some(Kind::C), ..RuleParams::default() };
    while count(&b, Kind::C) > 0 && count(&b, Kind::Cinv) > 0 {
        let p = markers + count(&b, Kind::C) - 1;
        b.apply(RuleId::A1, Direction::Forward, cancel, p);
    }
    if markers == 2 {
        while count(&b, Kind::C) >= 2 {
            b.apply(RuleId::A11, Direction::Forward, one, 0);
        }
        // a b C = a b c c C = a b c
        while count(&b, Kind::Cinv) > 0 {
            b.apply(RuleId::A11, Direction::Backward, one, 0);
            b.apply(RuleId::A1, Direction::Forward, cancel, 3);
            if count(&b, Kind::Cinv) > 0 {
                b.apply(RuleId::A1, Direction::Forward, cancel, 2);
            }
        }
    }
    debug_assert_eq!(b.word, *form.word());
    let cert = RewriteCertificate {
        start: word.word().clone(),
        end: b.word,
        open: false,
        strictness: Strictness::Strict,
        steps: b.steps,
    };
    Ok((form, cert))
}

struct Builder {
    word: SurfaceBraidWord,
    steps: Vec<RewriteStep>,
}

impl Builder {
    fn apply(&mut self, rule: RuleId, direction: Direction, params: RuleParams, position: usize) {
        let mut step = RewriteStep::new(rule, direction, params, position);
        let next = apply_step(&self.word, false, &step).expect("normalization step matches");
        step.before_len = Some(self.word.len());
        step.after_len = Some(next.len());
        self.word = next;
        self.steps.push(step);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_closed;

    fn nf(t: &str) -> String {
        normalize_csb2(&parse_closed(t).unwrap()).unwrap().to_string()
    }

    #[test]
    fn examples() {
        assert_eq!(nf("[a1 a1 b1]_2"), "[a1 b1]_2");
        assert_eq!(nf("[a1 b1 c1 c1 c1]_2"), "[a1 b1 c1]_2");
        assert_eq!(nf("[c1 C1]_2"), "[]_2");
        assert_eq!(nf("[C1 b1 C1 a1]_2"), "[a1 b1]_2");
        assert_eq!(nf("[C1 b1 c1 C1]_2"), "[b1 C1]_2");
    }

    #[test]
    fn certified_normalization_replays() {
        use crate::rewrite::{replay_certificate, CsbCache};
        for t in ["[C1 b1 C1 a1 C1]_2", "[a1 a1 b1 c1 c1 c1]_2", "[c1 C1]_2", "[b1 C1 C1 c1]_2", "[C1 a1 b1 b1 C1 C1]_2", "[]_2"] {
            let w = parse_closed(t).unwrap();
            let (form, cert) = normalize_csb2_certified(&w).unwrap();
            assert_eq!(cert.end_closed(), form);
            assert!(cert.steps.iter().all(|s| !s.rule.is_closure_move()));
            replay_certificate(&cert, &mut CsbCache::default()).unwrap();
        }
    }

    #[test]
    fn rejects_non_members() {
        let w = parse_closed("[c1 c1 c1]_2").unwrap();
        assert!(matches!(normalize_csb2(&w), Err(NormalizeError::NotCsb { plus: "NonTrivial", .. })));
        let w = parse_closed("[a1 c1 c1]_2").unwrap();
        assert!(normalize_csb2(&w).is_err());
        let w = parse_closed("[c1]_3").unwrap();
        assert_eq!(normalize_csb2(&w), Err(NormalizeError::NotTwoStrands(3)));
    }
}
