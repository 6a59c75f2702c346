use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::word::{half_twist_letters, Generator, Kind};

/// Identifier of a defining relation (`A1`..`A14`) or a Markov-type move on
/// closed words (`C1` rotation, `C2` (de)stabilization).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    A10,
    A11,
    A12,
    A13,
    A14,
    C1,
    C2,
}

impl RuleId {
    pub const ALL: [RuleId; 16] = [
        RuleId::A1,
        RuleId::A2,
        RuleId::A3,
        RuleId::A4,
        RuleId::A5,
        RuleId::A6,
        RuleId::A7,
        RuleId::A8,
        RuleId::A9,
        RuleId::A10,
        RuleId::A11,
        RuleId::A12,
        RuleId::A13,
        RuleId::A14,
        RuleId::C1,
        RuleId::C2,
    ];

    pub fn is_closure_move(self) -> bool {
        matches!(self, RuleId::C1 | RuleId::C2)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown rule '{s}'"))
    }
}

/// A set of rule identifiers, e.g. parsed from `"A1-A13,C1"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleFilter(u32);

impl RuleFilter {
    pub const ALL: RuleFilter = RuleFilter((1 << 16) - 1);
    pub const RELATIONS: RuleFilter = RuleFilter((1 << 14) - 1);

    pub fn from_rules(rules: &[RuleId]) -> Self {
        RuleFilter(rules.iter().fold(0, |acc, r| acc | (1 << *r as u32)))
    }

    pub fn contains(self, rule: RuleId) -> bool {
        self.0 & (1 << rule as u32) != 0
    }

    pub fn without(self, rule: RuleId) -> Self {
        RuleFilter(self.0 & !(1 << rule as u32))
    }

    pub fn rules(self) -> Vec<RuleId> {
        RuleId::ALL.into_iter().filter(|r| self.contains(*r)).collect()
    }

    /// Comma-separated ids or inclusive ranges such as `A1-A13`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut bits = 0u32;
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part.eq_ignore_ascii_case("all") {
                bits |= Self::ALL.0;
                continue;
            }
            match part.split_once('-') {
                Some((lo, hi)) => {
                    let (lo, hi): (RuleId, RuleId) = (lo.parse()?, hi.parse()?);
                    if lo > hi {
                        return Err(format!("empty rule range '{part}'"));
                    }
                    for r in RuleId::ALL.into_iter().filter(|r| *r >= lo && *r <= hi) {
                        bits |= 1 << r as u32;
                    }
                }
                None => bits |= 1 << part.parse::<RuleId>()? as u32,
            }
        }
        Ok(RuleFilter(bits))
    }
}

impl fmt::Display for RuleFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.rules().iter().map(|r| r.to_string()).collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Replace the left-hand side by the right-hand side.
    #[serde(rename = "LR")]
    Forward,
    #[serde(rename = "RL")]
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "LR",
            Direction::Backward => "RL",
        })
    }
}

/// Parameters that pin down one instance of a rule.
///
/// `i` and `k` are generator indices, `x`/`y` letter kinds, `window` a
/// half-twist `(size, base)` and `inverse` selects `Δ^{-1}` in `A13`.
/// For `C2`, `x` is the kind of the stabilizing letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
pub struct RuleParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inverse: bool,
}

impl fmt::Display for RuleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(i) = self.i {
            parts.push(format!("i={i}"));
        }
        if let Some(k) = self.k {
            parts.push(format!("k={k}"));
        }
        if let Some(x) = self.x {
            parts.push(format!("x={}", kind_name(x)));
        }
        if let Some(y) = self.y {
            parts.push(format!("y={}", kind_name(y)));
        }
        if let Some((s, b)) = self.window {
            parts.push(format!("window={s}@{b}"));
        }
        if self.inverse {
            parts.push("inverse".into());
        }
        f.write_str(&parts.join(" "))
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::A => "a",
        Kind::B => "b",
        Kind::C => "c",
        Kind::Cinv => "C",
    }
}

/// One concrete relation `lhs = rhs` over generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub params: RuleParams,
    pub lhs: Vec<Generator>,
    pub rhs: Vec<Generator>,
}

impl RuleInstance {
    pub fn side(&self, direction: Direction) -> (&[Generator], &[Generator]) {
        match direction {
            Direction::Forward => (&self.lhs, &self.rhs),
            Direction::Backward => (&self.rhs, &self.lhs),
        }
    }
}

fn g(kind: Kind, index: usize) -> Generator {
    Generator { kind, index }
}

fn adjacent(i: usize, k: usize) -> bool {
    i.abs_diff(k) == 1
}

fn inverse_letters(letters: &[Generator]) -> Vec<Generator> {
    letters.iter().rev().map(|l| l.flip()).collect()
}

/// Rebuild the relation for `rule` with `params` on `strands` strands.
/// Returns `None` when the parameters do not describe a valid instance.
pub fn instantiate(rule: RuleId, params: RuleParams, strands: usize) -> Option<RuleInstance> {
    let in_range = |i: usize| i >= 1 && i < strands;
    let (lhs, rhs) = match rule {
        RuleId::A1 => {
            let (i, x) = (params.i?, params.x?);
            if !in_range(i) || !x.is_crossing() {
                return None;
            }
            (vec![g(x, i), g(x.flip(), i)], vec![])
        }
        RuleId::A2 => {
            let (i, n, x, y) = (params.i?, params.k?, params.x?, params.y?);
            if !in_range(i) || !in_range(n) || adjacent(i, n) {
                return None;
            }
            (vec![g(x, i), g(y, n)], vec![g(y, n), g(x, i)])
        }
        RuleId::A3 | RuleId::A4 | RuleId::A5 => {
            let (i, k, x) = (params.i?, params.k?, params.x?);
            if !in_range(i) || !in_range(k) || !adjacent(i, k) {
                return None;
            }
            let (c, ci) = (Kind::C, Kind::Cinv);
            match rule {
                RuleId::A3 => (vec![g(c, i), g(x, k), g(ci, i)], vec![g(ci, k), g(x, i), g(c, k)]),
                RuleId::A4 => (vec![g(x, i), g(c, k), g(c, i)], vec![g(c, k), g(c, i), g(x, k)]),
                _ => (vec![g(x, i), g(ci, k), g(ci, i)], vec![g(ci, k), g(ci, i), g(x, k)]),
            }
        }
        RuleId::A6 => {
            let (i, k) = (params.i?, params.k?);
            if !in_range(i) || !in_range(k) || !adjacent(i, k) {
                return None;
            }
            (vec![g(Kind::A, i), g(Kind::B, k)], vec![g(Kind::B, k), g(Kind::A, i)])
        }
        RuleId::A7 | RuleId::A8 => {
            let i = params.i?;
            if i <= 2 || !in_range(i) {
                return None;
            }
            let (first, second) = if rule == RuleId::A7 { (Kind::A, Kind::B) } else { (Kind::B, Kind::A) };
            let head = vec![g(first, i), g(second, i - 2)];
            let cycle = [g(Kind::C, i - 1), g(Kind::C, i - 2), g(Kind::C, i), g(Kind::C, i - 1)];
            let mut lhs = head.clone();
            lhs.extend(cycle);
            lhs.extend(cycle);
            (lhs, head)
        }
        RuleId::A9 | RuleId::A10 => {
            let i = params.i?;
            if !in_range(i) {
                return None;
            }
            let x = if rule == RuleId::A9 { Kind::A } else { Kind::B };
            (vec![g(x, i), g(x, i)], vec![g(x, i)])
        }
        RuleId::A11 => {
            let i = params.i?;
            if !in_range(i) {
                return None;
            }
            let head = vec![g(Kind::A, i), g(Kind::B, i)];
            let mut lhs = head.clone();
            lhs.extend([g(Kind::C, i), g(Kind::C, i)]);
            (lhs, head)
        }
        RuleId::A12 => {
            let (i, k) = (params.i?, params.k?);
            if !in_range(i) || !in_range(k) || !adjacent(i, k) {
                return None;
            }
            let delta = half_twist_letters(3, i.min(k));
            let head = vec![g(Kind::A, i), g(Kind::B, k)];
            let mut lhs = head.clone();
            lhs.extend(delta.iter().copied());
            let mut rhs = head;
            rhs.extend(inverse_letters(&delta));
            (lhs, rhs)
        }
        RuleId::A13 => {
            let (i, x, (size, base)) = (params.i?, params.x?, params.window?);
            if size < 3 || base < 1 || base + size - 1 > strands || i < base || i > base + size - 2 {
                return None;
            }
            let mut delta = half_twist_letters(size, base);
            if params.inverse {
                delta = inverse_letters(&delta);
            }
            let mirrored = 2 * base + size - 2 - i;
            let mut lhs = vec![g(x, i)];
            lhs.extend(delta.iter().copied());
            let mut rhs = delta;
            rhs.push(g(x, mirrored));
            (lhs, rhs)
        }
        RuleId::A14 => {
            let (i, k) = (params.i?, params.k?);
            if !in_range(i) || !in_range(k) || !adjacent(i, k) {
                return None;
            }
            let head = vec![g(Kind::A, i), g(Kind::Cinv, k), g(Kind::B, i), g(Kind::C, k)];
            let delta = half_twist_letters(3, i.min(k));
            let mut lhs = head.clone();
            lhs.extend(delta.iter().copied());
            lhs.extend(delta.iter().copied());
            (lhs, head)
        }
        RuleId::C1 | RuleId::C2 => return None,
    };
    if lhs == rhs {
        return None;
    }
    Some(RuleInstance { rule, params, lhs, rhs })
}

/// Every instance of the relations `A1`..`A14` on `strands` strands.
pub fn catalog(strands: usize) -> Vec<RuleInstance> {
    let n = strands;
    let idx: Vec<usize> = (1..n).collect();
    let p = |i: Option<usize>, k: Option<usize>, x: Option<Kind>, y: Option<Kind>| RuleParams {
        i,
        k,
        x,
        y,
        ..RuleParams::default()
    };
    let mut all = Vec::new();
    let mut push = |rule: RuleId, params: RuleParams| {
        if let Some(inst) = instantiate(rule, params, n) {
            all.push(inst);
        }
    };
    for &i in &idx {
        for x in [Kind::C, Kind::Cinv] {
            push(RuleId::A1, p(Some(i), None, Some(x), None));
        }
        for &k in &idx {
            for x in Kind::ALL {
                for y in Kind::ALL {
                    push(RuleId::A2, p(Some(i), Some(k), Some(x), Some(y)));
                }
                for r in [RuleId::A3, RuleId::A4, RuleId::A5] {
                    push(r, p(Some(i), Some(k), Some(x), None));
                }
            }
            for r in [RuleId::A6, RuleId::A12, RuleId::A14] {
                push(r, p(Some(i), Some(k), None, None));
            }
        }
        for r in [RuleId::A7, RuleId::A8, RuleId::A9, RuleId::A10, RuleId::A11] {
            push(r, p(Some(i), None, None, None));
        }
    }
    for size in 3..=n {
        for base in 1..=n + 1 - size {
            for i in base..=base + size - 2 {
                for x in Kind::ALL {
                    for inverse in [false, true] {
                        push(
                            RuleId::A13,
                            RuleParams { i: Some(i), x: Some(x), window: Some((size, base)), inverse, ..RuleParams::default() },
                        );
                    }
                }
            }
        }
    }
    all
}
