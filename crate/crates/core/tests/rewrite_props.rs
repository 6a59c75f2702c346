use proptest::prelude::*;

use ssb_core::rewrite::{
    apply_step, catalog, equiv_search, replay_certificate, CsbCache, Direction, RewriteCertificate, RewriteError,
    RewriteStep, RuleId, RuleParams, SearchConfig, SearchOutcome, Strictness,
};
use ssb_core::surface::euler_characteristic;
use ssb_core::word::{parse_closed, ClosedSurfaceWord, Generator, Kind, SurfaceBraidWord};

fn letters(strands: usize, max_len: usize) -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec((0..4usize, 1..strands), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(k, i)| Generator::new(Kind::ALL[k], i)).collect())
}

/// A catalog instance on `strands` embedded in a random context.
fn embedded() -> impl Strategy<Value = (usize, Vec<Generator>, usize, usize, Direction)> {
    (2..=4usize).prop_flat_map(|m| {
        let n = catalog(m).len();
        (Just(m), letters(m, 4), letters(m, 4), 0..n, any::<bool>()).prop_map(|(m, pre, post, idx, fwd)| {
            let dir = if fwd { Direction::Forward } else { Direction::Backward };
            let inst = &catalog(m)[idx];
            let mut w = pre.clone();
            w.extend_from_slice(inst.side(dir).0);
            w.extend(post);
            (m, w, pre.len(), idx, dir)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn step_then_inverse_is_identity((m, w, pos, idx, dir) in embedded()) {
        let inst = &catalog(m)[idx];
        let word = SurfaceBraidWord::new(m, w).unwrap();
        let step = RewriteStep::new(inst.rule, dir, inst.params, pos);
        let after = apply_step(&word, true, &step).unwrap();
        let back = apply_step(&after, true, &step.inverse(&after)).unwrap();
        prop_assert_eq!(back, word);
    }

    #[test]
    fn relations_preserve_euler_characteristic((m, w, pos, idx, dir) in embedded()) {
        let inst = &catalog(m)[idx];
        let word = SurfaceBraidWord::new(m, w).unwrap();
        let after = apply_step(&word, true, &RewriteStep::new(inst.rule, dir, inst.params, pos)).unwrap();
        prop_assert_eq!(
            euler_characteristic(&ClosedSurfaceWord::new(word)),
            euler_characteristic(&ClosedSurfaceWord::new(after))
        );
    }

    #[test]
    fn rotation_round_trips(w in letters(3, 8).prop_filter("non-empty", |w| !w.is_empty()), fwd in any::<bool>()) {
        let word = SurfaceBraidWord::new(3, w).unwrap();
        let dir = if fwd { Direction::Forward } else { Direction::Backward };
        let pos = if fwd { 0 } else { word.len() - 1 };
        let step = RewriteStep::new(RuleId::C1, dir, RuleParams::default(), pos);
        let after = apply_step(&word, false, &step).unwrap();
        prop_assert_eq!(apply_step(&after, false, &step.inverse(&after)).unwrap(), word);
    }
}

fn found(u: &str, v: &str) -> RewriteCertificate {
    let (u, v) = (parse_closed(u).unwrap(), parse_closed(v).unwrap());
    match equiv_search(&u, &v, &SearchConfig::for_words(u.letters().len(), v.letters().len())) {
        SearchOutcome::Found(c) => c,
        other => panic!("{other:?}"),
    }
}

#[test]
fn certificate_json_round_trip() {
    let cert = found("[a2 C1 b2 c1]_3", "[]_1");
    let json = serde_json::to_string_pretty(&cert).unwrap();
    assert!(json.contains("\"start\": \"[a2 C1 b2 c1]_3\""));
    let back: RewriteCertificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert);
    replay_certificate(&back, &mut CsbCache::default()).unwrap();
}

#[test]
fn reversed_certificate_replays() {
    let cert = found("[a2 C1 b2 c1]_3", "[]_1");
    let rev = cert.reversed();
    assert_eq!(rev.start, cert.end);
    replay_certificate(&rev, &mut CsbCache::default()).unwrap();
}

#[test]
fn empty_certificate() {
    let w = parse_closed("[a1 c1]_2").unwrap().into_word();
    let mut cert = RewriteCertificate { start: w.clone(), end: w, open: false, strictness: Strictness::Strict, steps: vec![] };
    let report = replay_certificate(&cert, &mut CsbCache::default()).unwrap();
    assert_eq!(report.steps, 0);
    cert.end = parse_closed("[a1 C1]_2").unwrap().into_word();
    let err = replay_certificate(&cert, &mut CsbCache::default()).unwrap_err();
    assert_eq!(err.step, None);
}

#[test]
fn shifted_position_fails_at_that_step() {
    let mut cert = found("[a2 C1 b2 c1 delta(3,1)^2]_3", "[]_1");
    let target = cert.steps.iter().position(|s| !s.rule.is_closure_move()).expect("a relation step");
    cert.steps[target].position += 1;
    let err = replay_certificate(&cert, &mut CsbCache::default()).unwrap_err();
    assert_eq!(err.step, Some(target));
    assert!(matches!(err.error, RewriteError::PatternMismatch { .. } | RewriteError::InvalidParams { .. }));
}
