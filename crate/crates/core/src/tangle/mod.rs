//! Classical diagram backend: tangle words over `σ_i`, `σ_i⁻¹`, `e_i`, their
//! closures as PD codes, the Kauffman bracket and a Reidemeister simplifier.

pub mod bracket;
pub mod diagram;
pub mod matching;
pub mod poly;
pub mod reidemeister;

use serde::{Deserialize, Serialize};

pub use bracket::{bracket_bruteforce, bracket_of_diagram, kauffman_bracket, normalized_bracket};
pub use diagram::{Closure, DiagramError, PlanarDiagram, TangleKind, TangleLetter, TangleWord};
pub use matching::{compose_matchings, PlanarMatching};
pub use poly::LaurentPolynomial;
pub use reidemeister::{
    reidemeister_simplify, MoveCounts, MoveKind, MoveRecord, MoveSet, ReductionTrace, SimplifyBudget,
    SimplifyOutcome,
};

/// Outcome of a triviality check for a closed classical diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrivialityVerdict {
    /// The simplifier reached a crossingless diagram.
    Trivial(ReductionTrace),
    /// The writhe-normalized bracket differs from that of the unlink with the
    /// same number of components.
    NonTrivial { components: usize, normalized: LaurentPolynomial, unlink: LaurentPolynomial },
    Unknown { expansions: usize },
}

impl TrivialityVerdict {
    pub fn is_trivial(&self) -> bool {
        matches!(self, TrivialityVerdict::Trivial(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            TrivialityVerdict::Trivial(_) => "Trivial",
            TrivialityVerdict::NonTrivial { .. } => "NonTrivial",
            TrivialityVerdict::Unknown { .. } => "Unknown",
        }
    }
}

/// Bracket of the `c`-component crossingless unlink.
pub fn unlink_bracket(components: usize) -> LaurentPolynomial {
    LaurentPolynomial::delta().pow(components.saturating_sub(1) as u32)
}

/// Decide whether the closure of `word` is a diagram of a trivial link.
/// The bracket can only refute; `Trivial` always comes with a move trace.
pub fn triviality_verdict(word: &TangleWord, closure: Closure, budget: SimplifyBudget) -> Result<TrivialityVerdict, DiagramError> {
    let d = PlanarDiagram::from_tangle(word, closure)?;
    let bracket = kauffman_bracket(word, closure)?;
    Ok(verdict_with_bracket(&d, &bracket, budget))
}

/// Triviality check for a PD code; the bracket refutation is skipped above
/// the brute-force crossing limit.
pub fn diagram_triviality(d: &PlanarDiagram, budget: SimplifyBudget) -> TrivialityVerdict {
    match bracket_of_diagram(d) {
        Ok(b) => verdict_with_bracket(d, &b, budget),
        Err(_) => simplify_verdict(d, budget),
    }
}

fn verdict_with_bracket(d: &PlanarDiagram, bracket: &LaurentPolynomial, budget: SimplifyBudget) -> TrivialityVerdict {
    let components = d.component_count();
    let normalized = bracket::normalize_by_writhe(bracket, d.writhe());
    let unlink = unlink_bracket(components);
    if normalized != unlink {
        return TrivialityVerdict::NonTrivial { components, normalized, unlink };
    }
    simplify_verdict(d, budget)
}

fn simplify_verdict(d: &PlanarDiagram, budget: SimplifyBudget) -> TrivialityVerdict {
    match reidemeister_simplify(d, MoveSet::ALL, budget) {
        SimplifyOutcome::Unlinked(trace) => TrivialityVerdict::Trivial(trace),
        SimplifyOutcome::Unknown { expansions } => TrivialityVerdict::Unknown { expansions },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_power(k: i32) -> TangleWord {
        let l = if k >= 0 { TangleLetter::sigma(1) } else { TangleLetter::sigma_inv(1) };
        TangleWord::new(2, vec![l; k.unsigned_abs() as usize]).unwrap()
    }

    #[test]
    fn torus_link_triviality() {
        for k in -6i32..=6 {
            let w = sigma_power(k);
            let budget = SimplifyBudget { max_crossings: w.crossing_count() + 2, max_expansions: 5000 };
            let v = triviality_verdict(&w, Closure::Trace, budget).unwrap();
            if k.abs() <= 1 {
                assert!(v.is_trivial(), "k={k}: {v:?}");
            } else {
                assert!(matches!(v, TrivialityVerdict::NonTrivial { .. }), "k={k}: {v:?}");
            }
        }
    }

    #[test]
    fn trefoil_witness() {
        let v = triviality_verdict(&sigma_power(3), Closure::Trace, SimplifyBudget { max_crossings: 5, max_expansions: 10 })
            .unwrap();
        match v {
            TrivialityVerdict::NonTrivial { components, normalized, unlink } => {
                assert_eq!(components, 1);
                assert_eq!(unlink, LaurentPolynomial::one());
                assert_eq!(normalized, LaurentPolynomial::from_pairs([(-16, -1), (-12, 1), (-4, 1)]));
            }
            other => panic!("{other:?}"),
        }
    }
}
