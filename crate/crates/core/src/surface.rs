//! Surface-level operations: marker resolutions, CSB membership, Euler
//! characteristic, twist-spun words and the `D_{n,k}` diagrams.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rewrite::{self, SearchConfig, Strictness};
use crate::tangle::{
    triviality_verdict, Closure, DiagramError, SimplifyBudget, TangleLetter, TangleWord, TrivialityVerdict,
};
use crate::word::{ClosedSurfaceWord, Generator, Kind, SurfaceBraidWord, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("twist spin needs an odd strand count of at least 3, got {0}")]
    StrandParity(usize),
    #[error("twist spin needs a crossing-only tangle word, found {0}")]
    NotCrossingOnly(Generator),
    #[error("D_(n,k) needs n >= 2 and odd k >= 3, got n={n} k={k}")]
    DnkRange { n: usize, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResolutionSign {
    Plus,
    Minus,
}

impl fmt::Display for ResolutionSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResolutionSign::Plus => "+",
            ResolutionSign::Minus => "-",
        })
    }
}

/// Smooth every marker. Crossings map to `σ_i^{±1}` for both signs; under
/// `Plus` an `a_i` becomes `e_i` and `b_i` disappears, under `Minus` the
/// roles are exchanged.
pub fn resolve(word: &SurfaceBraidWord, sign: ResolutionSign) -> TangleWord {
    let letters = word
        .letters()
        .iter()
        .filter_map(|g| match (g.kind, sign) {
            (Kind::C, _) => Some(TangleLetter::sigma(g.index)),
            (Kind::Cinv, _) => Some(TangleLetter::sigma_inv(g.index)),
            (Kind::A, ResolutionSign::Plus) | (Kind::B, ResolutionSign::Minus) => Some(TangleLetter::e(g.index)),
            _ => None,
        })
        .collect();
    TangleWord::new(word.strands(), letters).expect("indices already validated")
}

/// Budget used for the triviality checks behind CSB membership.
pub fn default_csb_budget(word: &SurfaceBraidWord) -> SimplifyBudget {
    let crossings = word.letters().iter().filter(|g| g.kind.is_crossing()).count();
    SimplifyBudget { max_crossings: crossings + 2, max_expansions: 100_000 }
}

/// Triviality verdicts for the trace closures of `L+` and `L-`.
pub fn csb_membership(word: &ClosedSurfaceWord, budget: SimplifyBudget) -> (TrivialityVerdict, TrivialityVerdict) {
    let check = |sign| {
        triviality_verdict(&resolve(word.word(), sign), Closure::Trace, budget).expect("trace closure never fails")
    };
    (check(ResolutionSign::Plus), check(ResolutionSign::Minus))
}

pub fn is_certified_csb(word: &ClosedSurfaceWord, budget: SimplifyBudget) -> bool {
    let (p, m) = csb_membership(word, budget);
    p.is_trivial() && m.is_trivial()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub components_plus: usize,
    pub components_minus: usize,
    pub saddle_count: usize,
    pub euler_characteristic: i64,
}

pub fn resolution_components(word: &ClosedSurfaceWord, sign: ResolutionSign) -> usize {
    let t = resolve(word.word(), sign);
    crate::tangle::PlanarDiagram::from_tangle(&t, Closure::Trace)
        .expect("trace closure never fails")
        .component_count()
}

/// Minima are the components of `L-`, maxima those of `L+`, saddles the markers.
pub fn surface_invariants(word: &ClosedSurfaceWord) -> SurfaceInvariants {
    let components_plus = resolution_components(word, ResolutionSign::Plus);
    let components_minus = resolution_components(word, ResolutionSign::Minus);
    let saddle_count = word.word().saddle_count();
    SurfaceInvariants {
        components_plus,
        components_minus,
        saddle_count,
        euler_characteristic: components_plus as i64 + components_minus as i64 - saddle_count as i64,
    }
}

pub fn euler_characteristic(word: &ClosedSurfaceWord) -> i64 {
    surface_invariants(word).euler_characteristic
}

/// `[(a_2 a_4 ... a_2m) K (b_2 ... b_2m) K^-1 Δ^{2n}]` on `2m+1` strands.
pub fn twist_spin(tangle: &SurfaceBraidWord, twists: i64) -> Result<ClosedSurfaceWord, SurfaceError> {
    let strands = tangle.strands();
    if strands < 3 || strands % 2 == 0 {
        return Err(SurfaceError::StrandParity(strands));
    }
    if let Some(g) = tangle.letters().iter().find(|g| g.kind.is_marker()) {
        return Err(SurfaceError::NotCrossingOnly(*g));
    }
    let half = strands / 2;
    let mut letters: Vec<Generator> = (1..=half).map(|i| Generator::a(2 * i)).collect();
    letters.extend_from_slice(tangle.letters());
    letters.extend((1..=half).map(|i| Generator::b(2 * i)));
    letters.extend_from_slice(tangle.formal_inverse()?.letters());
    let full = SurfaceBraidWord::half_twist(strands, strands, 1)?.pow(2 * twists.unsigned_abs() as usize);
    let full = if twists < 0 { full.formal_inverse()? } else { full };
    letters.extend_from_slice(full.letters());
    Ok(ClosedSurfaceWord::new(SurfaceBraidWord::new(strands, letters)?))
}

pub fn mirror_closure(word: &ClosedSurfaceWord) -> ClosedSurfaceWord {
    word.mirror()
}

/// `σ_1^k Δ_3^{2n} σ_1^{-k}` on 3 strands; its plat closure is `D_{n,k}`.
pub fn dnk_word(n: usize, k: usize) -> Result<TangleWord, SurfaceError> {
    if n < 2 || k < 3 || k % 2 == 0 {
        return Err(SurfaceError::DnkRange { n, k });
    }
    let mut letters = vec![TangleLetter::sigma(1); k];
    for _ in 0..2 * n {
        letters.extend([TangleLetter::sigma(1), TangleLetter::sigma(2), TangleLetter::sigma(1)]);
    }
    letters.extend(std::iter::repeat_n(TangleLetter::sigma_inv(1), k));
    Ok(TangleWord::new(3, letters)?)
}

/// Smallest strand count reached by repeated destabilizing searches within
/// the budget. An upper bound on the singular braid index, never claimed minimal.
pub fn index_upper_bound(word: &ClosedSurfaceWord, config: &SearchConfig) -> usize {
    let mut current = word.clone();
    loop {
        if current.closure_strands() == 1 {
            return 1;
        }
        match rewrite::search_fewer_strands(&current, config) {
            Some(cert) => current = cert.end_closed(),
            None => return current.closure_strands(),
        }
    }
}

/// Search settings suited to index bounds on small words.
pub fn default_index_config(word: &ClosedSurfaceWord) -> SearchConfig {
    let mut cfg = SearchConfig::for_words(word.letters().len(), 0);
    cfg.strictness = Strictness::Lax;
    cfg.max_expansions = 20_000;
    cfg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::PlanarDiagram;
    use crate::word::parse_closed;

    fn cw(text: &str) -> ClosedSurfaceWord {
        parse_closed(text).unwrap()
    }

    #[test]
    fn resolutions() {
        let ab = cw("[a1 b1]_2");
        assert_eq!(resolve(ab.word(), ResolutionSign::Plus).to_string(), "e1");
        assert_eq!(resolve(ab.word(), ResolutionSign::Minus).to_string(), "e1");
        let ca = cw("[c1 a1]_2");
        assert_eq!(resolve(ca.word(), ResolutionSign::Plus).to_string(), "s1 e1");
        assert_eq!(resolve(ca.word(), ResolutionSign::Minus).to_string(), "s1");
        let ck = cw("[c1 c1 C1]_2");
        for s in [ResolutionSign::Plus, ResolutionSign::Minus] {
            assert_eq!(resolve(ck.word(), s).to_string(), "s1 s1 S1");
        }
    }

    #[test]
    fn euler_calibration() {
        assert_eq!(euler_characteristic(&cw("[]_1")), 2);
        assert_eq!(euler_characteristic(&cw("[a1 b1]_2")), 0);
        assert_eq!(euler_characteristic(&cw("[c1 a1]_2")), 1);
        assert_eq!(euler_characteristic(&cw("[]_2")), 4);
        let inv = surface_invariants(&cw("[a1 b1]_2"));
        assert_eq!(inv.euler_characteristic, inv.components_plus as i64 + inv.components_minus as i64 - 2);
    }

    #[test]
    fn csb_examples() {
        let b = SimplifyBudget { max_crossings: 6, max_expansions: 10_000 };
        let (p, m) = csb_membership(&cw("[a1 b1]_2"), b);
        assert!(p.is_trivial() && m.is_trivial());
        let (p, m) = csb_membership(&cw("[c1 c1 c1]_2"), b);
        assert!(matches!(p, TrivialityVerdict::NonTrivial { .. }));
        assert!(matches!(m, TrivialityVerdict::NonTrivial { .. }));
        let (p, m) = csb_membership(&cw("[]_2"), b);
        assert!(p.is_trivial() && m.is_trivial());
    }

    #[test]
    fn twist_spin_words() {
        let k = crate::word::parse_word("C1", 3).unwrap();
        assert_eq!(twist_spin(&k, 1).unwrap(), cw("[a2 C1 b2 c1 delta(3,1)^2]_3"));
        let k3 = crate::word::parse_word("c1^3", 3).unwrap();
        assert_eq!(twist_spin(&k3, 2).unwrap(), cw("[a2 c1^3 b2 c1^-3 delta(3,1)^4]_3"));
        let e = crate::word::parse_word("", 3).unwrap();
        assert_eq!(twist_spin(&e, 0).unwrap(), cw("[a2 b2]_3"));
        assert_eq!(twist_spin(&k, -1).unwrap(), cw("[a2 C1 b2 c1 delta(3,1)^-2]_3"));
        assert!(matches!(
            twist_spin(&crate::word::parse_word("c1", 2).unwrap(), 1),
            Err(SurfaceError::StrandParity(2))
        ));
        assert!(matches!(
            twist_spin(&crate::word::parse_word("a1", 3).unwrap(), 1),
            Err(SurfaceError::NotCrossingOnly(_))
        ));
        let five = crate::word::parse_word("c1 c3", 5).unwrap();
        let w = twist_spin(&five, 1).unwrap();
        assert_eq!(w.word().saddle_count(), 4);
        assert_eq!(w.letters()[..2], [Generator::a(2), Generator::a(4)]);
    }

    #[test]
    fn mirrors() {
        assert_eq!(mirror_closure(&cw("[c1]_2")), cw("[C1]_2"));
        let t = cw("[a2 C1 b2 c1 delta(3,1)^2]_3");
        assert_eq!(mirror_closure(&t), cw("[delta(3,1)^-2 C1 b2 c1 a2]_3"));
        assert_eq!(mirror_closure(&mirror_closure(&t)), t);
    }

    #[test]
    fn dnk_counts() {
        for (n, k) in [(2, 3), (2, 5), (3, 3)] {
            let d = PlanarDiagram::from_tangle(&dnk_word(n, k).unwrap(), Closure::Plat).unwrap();
            assert_eq!(d.crossing_count(), 6 * n + 2 * k);
            assert_eq!(d.component_count(), 2);
        }
        assert!(dnk_word(1, 3).is_err());
        assert!(dnk_word(2, 4).is_err());
    }

    #[test]
    fn twist_spun_resolutions_keep_crossings_in_order() {
        let w = twist_spin(&crate::word::parse_word("c1 c1 c1", 3).unwrap(), 2).unwrap();
        for s in [ResolutionSign::Plus, ResolutionSign::Minus] {
            let crossings: Vec<_> = resolve(w.word(), s).letters().iter().filter(|l| l.is_crossing()).copied().collect();
            let expected: Vec<_> = w
                .letters()
                .iter()
                .filter(|g| g.kind.is_crossing())
                .map(|g| if g.kind == Kind::C { TangleLetter::sigma(g.index) } else { TangleLetter::sigma_inv(g.index) })
                .collect();
            assert_eq!(crossings, expected);
        }
    }
}
