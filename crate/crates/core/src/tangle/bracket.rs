//! Kauffman bracket, normalized so that a single crossingless circle has
//! value 1 and every further circle contributes `δ = -A^2 - A^-2`.
//!
//! The main evaluator runs a transfer over the word in the planar-matching
//! (Temperley–Lieb) basis using `σ_i = A·1 + A⁻¹·e_i`. The brute-force state
//! sum over the PD code is kept as an independent check.

use std::collections::BTreeMap;

use super::diagram::{Closure, DiagramError, PlanarDiagram, TangleKind, TangleWord, UnionFind};
use super::matching::PlanarMatching;
use super::poly::LaurentPolynomial;

pub const BRUTE_FORCE_LIMIT: usize = 20;

fn delta_pow(cache: &mut Vec<LaurentPolynomial>, n: usize) -> LaurentPolynomial {
    while cache.len() <= n {
        let next = &cache[cache.len() - 1] * &LaurentPolynomial::delta();
        cache.push(next);
    }
    cache[n].clone()
}

/// Bracket of the closure of `word`, by transfer in the matching basis.
pub fn kauffman_bracket(word: &TangleWord, closure: Closure) -> Result<LaurentPolynomial, DiagramError> {
    let word = match closure {
        Closure::Trace => word.clone(),
        Closure::Plat => word.plat_prefixed()?,
    };
    let m = word.strands();
    let mut deltas = vec![LaurentPolynomial::one()];
    let mut state: BTreeMap<PlanarMatching, LaurentPolynomial> = BTreeMap::new();
    state.insert(PlanarMatching::identity(m), LaurentPolynomial::one());
    let gens: Vec<PlanarMatching> = (1..m).map(|i| PlanarMatching::e(m, i)).collect();
    for letter in word.letters() {
        let e = &gens[letter.index - 1];
        let (keep, cup) = match letter.kind {
            TangleKind::SigmaPos => (Some(1), -1),
            TangleKind::SigmaNeg => (Some(-1), 1),
            TangleKind::Cup => (None, 0),
        };
        let mut next: BTreeMap<PlanarMatching, LaurentPolynomial> = BTreeMap::new();
        for (basis, coeff) in &state {
            if let Some(k) = keep {
                next.entry(basis.clone()).or_default().add_assign_ref(&coeff.shift(k));
            }
            let (composed, loops) = basis.compose(e);
            let term = &coeff.shift(cup) * &delta_pow(&mut deltas, loops);
            next.entry(composed).or_default().add_assign_ref(&term);
        }
        next.retain(|_, c| !c.is_zero());
        state = next;
    }
    let mut total = LaurentPolynomial::zero();
    for (basis, coeff) in &state {
        let loops = basis.trace_loops();
        total.add_assign_ref(&(coeff * &delta_pow(&mut deltas, loops - 1)));
    }
    Ok(total)
}

/// Bracket of a PD code by expanding all `2^c` smoothings.
/// The A-smoothing of `X[a,b,c,d]` joins `a–b` and `c–d`.
pub fn bracket_of_diagram(diagram: &PlanarDiagram) -> Result<LaurentPolynomial, DiagramError> {
    let c = diagram.crossing_count();
    if c > BRUTE_FORCE_LIMIT {
        return Err(DiagramError::TooManyCrossings { crossings: c, limit: BRUTE_FORCE_LIMIT });
    }
    let mut deltas = vec![LaurentPolynomial::one()];
    if c == 0 {
        return Ok(match diagram.free_loops {
            0 => LaurentPolynomial::one(),
            n => delta_pow(&mut deltas, n - 1),
        });
    }
    let mut by_state: BTreeMap<(i32, usize), i64> = BTreeMap::new();
    for mask in 0u32..(1u32 << c) {
        let mut uf = UnionFind::default();
        let mut a_count = 0i32;
        for (i, x) in diagram.crossings.iter().enumerate() {
            if mask & (1 << i) == 0 {
                a_count += 1;
                uf.union(x[0], x[1]);
                uf.union(x[2], x[3]);
            } else {
                uf.union(x[0], x[3]);
                uf.union(x[1], x[2]);
            }
        }
        let loops = uf.classes() + diagram.free_loops;
        let exp = a_count - (c as i32 - a_count);
        *by_state.entry((exp, loops)).or_default() += 1;
    }
    let mut total = LaurentPolynomial::zero();
    for ((exp, loops), count) in by_state {
        let term = delta_pow(&mut deltas, loops - 1).shift(exp).scale(count);
        total.add_assign_ref(&term);
    }
    Ok(total)
}

/// Brute-force bracket of a closed tangle word (PD construction + state sum).
pub fn bracket_bruteforce(word: &TangleWord, closure: Closure) -> Result<LaurentPolynomial, DiagramError> {
    let d = PlanarDiagram::from_tangle(word, closure)?;
    bracket_of_diagram(&d)
}

/// Writhe-normalized bracket `(-A^3)^{-w} <D>`.
pub fn normalized_bracket(diagram: &PlanarDiagram) -> Result<LaurentPolynomial, DiagramError> {
    let b = bracket_of_diagram(diagram)?;
    Ok(normalize_by_writhe(&b, diagram.writhe()))
}

pub(crate) fn normalize_by_writhe(bracket: &LaurentPolynomial, writhe: i64) -> LaurentPolynomial {
    let w = writhe as i32;
    let shifted = bracket.shift(-3 * w);
    if w.rem_euclid(2) == 1 {
        -shifted
    } else {
        shifted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::diagram::TangleLetter;

    fn tw(text: &str, m: usize) -> TangleWord {
        TangleWord::parse(text, m).unwrap()
    }

    /// Hand expansion of the two smoothings of a one-crossing curl:
    /// A·δ + A⁻¹·1 = -A³.
    #[test]
    fn single_crossing_closure() {
        let expected = LaurentPolynomial::monomial(-1, 3);
        assert_eq!(kauffman_bracket(&tw("s1", 2), Closure::Trace).unwrap(), expected);
        assert_eq!(bracket_bruteforce(&tw("s1", 2), Closure::Trace).unwrap(), expected);
    }

    #[test]
    fn normalization_and_cups() {
        let one = LaurentPolynomial::one();
        assert_eq!(kauffman_bracket(&tw("", 1), Closure::Trace).unwrap(), one);
        assert_eq!(bracket_bruteforce(&tw("", 1), Closure::Trace).unwrap(), one);
        assert_eq!(kauffman_bracket(&tw("e1", 2), Closure::Trace).unwrap(), one);
        assert_eq!(bracket_bruteforce(&tw("e1", 2), Closure::Trace).unwrap(), one);
        assert_eq!(kauffman_bracket(&tw("", 2), Closure::Trace).unwrap(), LaurentPolynomial::delta());
    }

    #[test]
    fn trefoil() {
        let t = tw("s1 s1 s1", 2);
        let b = kauffman_bracket(&t, Closure::Trace).unwrap();
        assert_eq!(b, bracket_bruteforce(&t, Closure::Trace).unwrap());
        assert_eq!(b, LaurentPolynomial::from_pairs([(-7, 1), (-3, -1), (5, -1)]));
        let d = PlanarDiagram::from_tangle(&t, Closure::Trace).unwrap();
        assert_eq!(d.writhe(), 3);
        let f = normalized_bracket(&d).unwrap();
        assert_eq!(f, LaurentPolynomial::from_pairs([(-16, -1), (-12, 1), (-4, 1)]));
    }

    #[test]
    fn plat_closure_agrees() {
        let t = tw("s1 s2 S1 s2 s2", 3);
        assert_eq!(
            kauffman_bracket(&t, Closure::Plat).unwrap(),
            bracket_bruteforce(&t, Closure::Plat).unwrap()
        );
    }

    #[test]
    fn brute_force_limit() {
        let t = TangleWord::new(2, vec![TangleLetter::sigma(1); 21]).unwrap();
        assert!(matches!(
            bracket_bruteforce(&t, Closure::Trace),
            Err(DiagramError::TooManyCrossings { .. })
        ));
    }
}
