//! Words in the surface singular braid monoid.
//!
//! A word lives on `m` strands and is a sequence of letters `a_i`, `b_i`
//! (marked vertices) and `c_i`, `c_i^-1` (crossings) with `1 <= i <= m-1`.
//! Parsing never rewrites; it only expands the `^p` and `delta(s,base)`
//! macros.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("strand count must be at least 1")]
    NoStrands,
    #[error("letter {0} is not invertible")]
    NonInvertible(Generator),
    #[error("half-twist on {size} strands at base {base} does not fit in {strands} strands")]
    HalfTwistWindow { size: usize, base: usize, strands: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    C,
    Cinv,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::A, Kind::B, Kind::C, Kind::Cinv];

    pub fn is_crossing(self) -> bool {
        matches!(self, Kind::C | Kind::Cinv)
    }

    pub fn is_marker(self) -> bool {
        !self.is_crossing()
    }

    /// Crossing inversion; markers are fixed.
    pub fn flip(self) -> Kind {
        match self {
            Kind::C => Kind::Cinv,
            Kind::Cinv => Kind::C,
            k => k,
        }
    }
}

/// One letter of the monoid, acting on strands `index` and `index + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub kind: Kind,
    pub index: usize,
}

impl Generator {
    pub const fn new(kind: Kind, index: usize) -> Self {
        Generator { kind, index }
    }
    pub const fn a(index: usize) -> Self {
        Generator::new(Kind::A, index)
    }
    pub const fn b(index: usize) -> Self {
        Generator::new(Kind::B, index)
    }
    pub const fn c(index: usize) -> Self {
        Generator::new(Kind::C, index)
    }
    pub const fn cinv(index: usize) -> Self {
        Generator::new(Kind::Cinv, index)
    }

    pub fn flip(self) -> Self {
        Generator::new(self.kind.flip(), self.index)
    }

    pub fn with_index(self, index: usize) -> Self {
        Generator::new(self.kind, index)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            Kind::A => 'a',
            Kind::B => 'b',
            Kind::C => 'c',
            Kind::Cinv => 'C',
        };
        write!(f, "{}{}", c, self.index)
    }
}

/// A finite word on a fixed number of strands. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SurfaceBraidWord {
    strands: usize,
    letters: Vec<Generator>,
}

impl SurfaceBraidWord {
    pub fn new(strands: usize, letters: Vec<Generator>) -> Result<Self, WordError> {
        if strands == 0 {
            return Err(WordError::NoStrands);
        }
        for g in &letters {
            if g.index == 0 || g.index >= strands {
                return Err(WordError::IndexOutOfRange { index: g.index, strands });
            }
        }
        Ok(SurfaceBraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Result<Self, WordError> {
        Self::new(strands, Vec::new())
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Generator> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_crossing_only(&self) -> bool {
        self.letters.iter().all(|g| g.kind.is_crossing())
    }

    /// Number of `a`/`b` letters.
    pub fn saddle_count(&self) -> usize {
        self.letters.iter().filter(|g| g.kind.is_marker()).count()
    }

    pub fn concat(&self, other: &SurfaceBraidWord) -> SurfaceBraidWord {
        assert_eq!(self.strands, other.strands, "concatenating words on different strand counts");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        SurfaceBraidWord { strands: self.strands, letters }
    }

    pub fn pow(&self, p: usize) -> SurfaceBraidWord {
        let mut letters = Vec::with_capacity(self.letters.len() * p);
        for _ in 0..p {
            letters.extend_from_slice(&self.letters);
        }
        SurfaceBraidWord { strands: self.strands, letters }
    }

    /// Reverse the word and invert every crossing; markers stay as they are.
    pub fn mirror(&self) -> SurfaceBraidWord {
        let letters = self.letters.iter().rev().map(|g| g.flip()).collect();
        SurfaceBraidWord { strands: self.strands, letters }
    }

    /// Group inverse of a crossing-only word.
    pub fn formal_inverse(&self) -> Result<SurfaceBraidWord, WordError> {
        if let Some(g) = self.letters.iter().find(|g| g.kind.is_marker()) {
            return Err(WordError::NonInvertible(*g));
        }
        Ok(self.mirror())
    }

    /// Positive half-twist on `size` consecutive strands starting at strand `base`:
    /// `c_base (c_{base+1} c_base) ... (c_{base+size-2} ... c_base)`.
    pub fn half_twist(strands: usize, size: usize, base: usize) -> Result<SurfaceBraidWord, WordError> {
        if strands == 0 {
            return Err(WordError::NoStrands);
        }
        if size == 0 || base == 0 || base + size - 1 > strands {
            return Err(WordError::HalfTwistWindow { size, base, strands });
        }
        Ok(SurfaceBraidWord { strands, letters: half_twist_letters(size, base) })
    }
}

pub(crate) fn half_twist_letters(size: usize, base: usize) -> Vec<Generator> {
    let mut out = Vec::with_capacity(size * (size.saturating_sub(1)) / 2);
    for r in 1..size {
        for j in (0..r).rev() {
            out.push(Generator::c(base + j));
        }
    }
    out
}

impl fmt::Display for SurfaceBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// A word together with its trace closure on `word.strands()` strands, written `[w]_n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClosedSurfaceWord {
    word: SurfaceBraidWord,
}

impl ClosedSurfaceWord {
    pub fn new(word: SurfaceBraidWord) -> Self {
        ClosedSurfaceWord { word }
    }

    pub fn word(&self) -> &SurfaceBraidWord {
        &self.word
    }

    pub fn into_word(self) -> SurfaceBraidWord {
        self.word
    }

    pub fn closure_strands(&self) -> usize {
        self.word.strands
    }

    pub fn letters(&self) -> &[Generator] {
        &self.word.letters
    }

    pub fn mirror(&self) -> ClosedSurfaceWord {
        ClosedSurfaceWord::new(self.word.mirror())
    }

    pub fn parse(text: &str) -> Result<Self, WordError> {
        parse_closed(text)
    }
}

impl From<SurfaceBraidWord> for ClosedSurfaceWord {
    fn from(word: SurfaceBraidWord) -> Self {
        ClosedSurfaceWord::new(word)
    }
}

impl fmt::Display for ClosedSurfaceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.word, self.word.strands)
    }
}

impl FromStr for ClosedSurfaceWord {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_closed(s)
    }
}

/// Parse a word in the token grammar
/// `token := atom ("^" SIGNED_INT)?`, `atom := [abc]INT | C INT | delta(INT,INT)`.
pub fn parse_word(text: &str, strands: usize) -> Result<SurfaceBraidWord, WordError> {
    if strands == 0 {
        return Err(WordError::NoStrands);
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let mut letters = Vec::new();
    loop {
        p.skip_ws();
        if p.at_end() {
            break;
        }
        let start = p.pos;
        let atom = p.atom()?;
        let power = if p.peek() == Some(b'^') {
            p.pos += 1;
            p.signed_int()?
        } else {
            1
        };
        if let Some(next) = p.peek() {
            if !next.is_ascii_whitespace() {
                return Err(p.error("expected whitespace between tokens"));
            }
        }
        let crossing_only = atom.iter().all(|g| g.kind.is_crossing());
        if power < 0 && !crossing_only {
            return Err(WordError::Syntax {
                pos: start,
                msg: "negative power of a non-invertible letter".into(),
            });
        }
        for g in &atom {
            if g.index >= strands {
                return Err(WordError::IndexOutOfRange { index: g.index, strands });
            }
        }
        let unit: Vec<Generator> = if power < 0 {
            atom.iter().rev().map(|g| g.flip()).collect()
        } else {
            atom
        };
        for _ in 0..power.unsigned_abs() {
            letters.extend_from_slice(&unit);
        }
    }
    SurfaceBraidWord::new(strands, letters)
}

/// Parse `[ word ]_n`.
pub fn parse_closed(text: &str) -> Result<ClosedSurfaceWord, WordError> {
    let trimmed = text.trim();
    let offset = text.len() - text.trim_start().len();
    if !trimmed.starts_with('[') {
        return Err(WordError::Syntax { pos: offset, msg: "closed word must start with '['".into() });
    }
    let close = trimmed
        .rfind(']')
        .ok_or_else(|| WordError::Syntax { pos: offset + trimmed.len(), msg: "missing ']'".into() })?;
    let suffix = &trimmed[close + 1..];
    let n_text = suffix.strip_prefix("_").ok_or_else(|| WordError::Syntax {
        pos: offset + close + 1,
        msg: "missing strand subscript '_n'".into(),
    })?;
    let strands: usize = n_text.trim().parse().map_err(|_| WordError::Syntax {
        pos: offset + close + 2,
        msg: format!("bad strand count {n_text:?}"),
    })?;
    let inner = &trimmed[1..close];
    let word = parse_word(inner, strands).map_err(|e| match e {
        WordError::Syntax { pos, msg } => WordError::Syntax { pos: pos + offset + 1, msg },
        other => other,
    })?;
    Ok(ClosedSurfaceWord::new(word))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: &str) -> WordError {
        WordError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn uint(&mut self) -> Result<usize, WordError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| WordError::Syntax { pos: start, msg: "integer too large".into() })
    }

    fn signed_int(&mut self) -> Result<i64, WordError> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let v = self.uint()? as i64;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Vec<Generator>, WordError> {
        if self.src[self.pos..].starts_with(b"delta(") {
            self.pos += "delta(".len();
            self.skip_ws();
            let size = self.uint()?;
            self.expect(b',')?;
            self.skip_ws();
            let base = self.uint()?;
            self.expect(b')')?;
            if size == 0 || base == 0 {
                return Err(self.error("delta size and base must be positive"));
            }
            return Ok(half_twist_letters(size, base));
        }
        let kind = match self.peek() {
            Some(b'a') => Kind::A,
            Some(b'b') => Kind::B,
            Some(b'c') => Kind::C,
            Some(b'C') => Kind::Cinv,
            _ => return Err(self.error("expected a, b, c, C or delta(")),
        };
        self.pos += 1;
        let index = self.uint()?;
        if index == 0 {
            return Err(WordError::IndexOutOfRange { index, strands: 0 });
        }
        Ok(vec![Generator::new(kind, index)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(text: &str, m: usize) -> SurfaceBraidWord {
        parse_word(text, m).unwrap()
    }

    #[test]
    fn empty_word_is_identity() {
        let e = w("", 1);
        assert!(e.is_empty());
        assert_eq!(e.strands(), 1);
    }

    #[test]
    fn parses_twist_spun_unknot() {
        let got = w("a2 c1^-1 b2 c1 delta(3,1)^2", 3);
        let expected = vec![
            Generator::a(2),
            Generator::cinv(1),
            Generator::b(2),
            Generator::c(1),
            Generator::c(1),
            Generator::c(2),
            Generator::c(1),
            Generator::c(1),
            Generator::c(2),
            Generator::c(1),
        ];
        assert_eq!(got.letters(), expected.as_slice());
    }

    #[test]
    fn parser_does_not_reduce() {
        let got = w("c1 C1", 2);
        assert_eq!(got.letters(), &[Generator::c(1), Generator::cinv(1)]);
    }

    #[test]
    fn negative_delta_power_is_formal_inverse() {
        let got = w("delta(3,1)^-1", 3);
        assert_eq!(got.letters(), &[Generator::cinv(1), Generator::cinv(2), Generator::cinv(1)]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_word("c3", 3), Err(WordError::IndexOutOfRange { index: 3, strands: 3 })));
        assert!(matches!(parse_word("a1^-1", 2), Err(WordError::Syntax { .. })));
        assert!(matches!(parse_word("c1 x2", 3), Err(WordError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_word("c1c2", 3), Err(WordError::Syntax { .. })));
        assert!(matches!(parse_word("c1", 0), Err(WordError::NoStrands)));
        assert!(matches!(parse_word("delta(4,1)", 3), Err(WordError::IndexOutOfRange { .. })));
    }

    #[test]
    fn closed_words() {
        let cw = parse_closed("[c1 C1]_2").unwrap();
        assert_eq!(cw.closure_strands(), 2);
        assert_eq!(cw.to_string(), "[c1 C1]_2");
        let e = parse_closed("[]_2").unwrap();
        assert!(e.word().is_empty());
        assert!(parse_closed("[c2 b2 C2]_2").is_err());
        assert!(parse_closed("[c1]").is_err());
    }

    #[test]
    fn half_twists() {
        assert_eq!(
            SurfaceBraidWord::half_twist(3, 3, 1).unwrap().letters(),
            &[Generator::c(1), Generator::c(2), Generator::c(1)]
        );
        assert!(SurfaceBraidWord::half_twist(3, 1, 1).unwrap().is_empty());
        assert_eq!(SurfaceBraidWord::half_twist(4, 4, 1).unwrap().to_string(), "c1 c2 c1 c3 c2 c1");
        assert!(SurfaceBraidWord::half_twist(3, 3, 2).is_err());
    }

    /// Permutation oracle: tracking each crossing as a transposition, the
    /// half twist must reverse the order of the strands in its window.
    #[test]
    fn half_twist_reverses_window() {
        for strands in 1..=7 {
            for size in 1..=strands {
                for base in 1..=(strands - size + 1) {
                    let d = SurfaceBraidWord::half_twist(strands, size, base).unwrap();
                    assert_eq!(d.len(), size * (size - 1) / 2);
                    let mut perm: Vec<usize> = (0..=strands).collect();
                    for g in d.letters() {
                        assert_eq!(g.kind, Kind::C);
                        assert!(g.index >= base && g.index + 1 < base + size);
                        perm.swap(g.index, g.index + 1);
                    }
                    for j in 0..size {
                        assert_eq!(perm[base + j], base + size - 1 - j);
                    }
                }
            }
        }
    }

    #[test]
    fn mirror_and_inverse() {
        assert_eq!(w("a2 C1 b2 c1", 3).mirror().to_string(), "C1 b2 c1 a2");
        let tau = w("a2 C1 b2 c1 delta(3,1)^2", 3);
        assert_eq!(tau.mirror(), w("delta(3,1)^-2 C1 b2 c1 a2", 3));
        assert!(w("", 2).mirror().is_empty());
        assert_eq!(w("c1 c2", 3).formal_inverse().unwrap().to_string(), "C2 C1");
        assert_eq!(w("c1^5", 2).formal_inverse().unwrap(), w("c1^-5", 2));
        assert!(matches!(w("a1", 2).formal_inverse(), Err(WordError::NonInvertible(_))));
    }

    fn arb_word() -> impl Strategy<Value = SurfaceBraidWord> {
        (2usize..6).prop_flat_map(|m| {
            let letter = (0usize..4, 1..m).prop_map(|(k, i)| Generator::new(Kind::ALL[k], i));
            prop::collection::vec(letter, 0..20).prop_map(move |ls| SurfaceBraidWord::new(m, ls).unwrap())
        })
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(word in arb_word()) {
            let text = word.to_string();
            prop_assert_eq!(parse_word(&text, word.strands()).unwrap(), word.clone());
            let closed = ClosedSurfaceWord::new(word);
            prop_assert_eq!(parse_closed(&closed.to_string()).unwrap(), closed);
        }

        #[test]
        fn mirror_is_involution(word in arb_word()) {
            prop_assert_eq!(word.mirror().mirror(), word);
        }
    }
}
