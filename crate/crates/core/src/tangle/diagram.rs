use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("plat closure needs an odd number of strands, got {0}")]
    EvenPlat(usize),
    #[error("letter index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("malformed PD code: {0}")]
    Parse(String),
    #[error("arc label {label} appears {count} times (expected 2)")]
    BadLabel { label: u32, count: usize },
    #[error("{crossings} crossings exceed the brute-force limit of {limit}")]
    TooManyCrossings { crossings: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TangleKind {
    SigmaPos,
    SigmaNeg,
    Cup,
}

/// `σ_i`, `σ_i⁻¹` or the cup-cap `e_i` between strands `i` and `i+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TangleLetter {
    pub kind: TangleKind,
    pub index: usize,
}

impl TangleLetter {
    pub fn sigma(index: usize) -> Self {
        TangleLetter { kind: TangleKind::SigmaPos, index }
    }
    pub fn sigma_inv(index: usize) -> Self {
        TangleLetter { kind: TangleKind::SigmaNeg, index }
    }
    pub fn e(index: usize) -> Self {
        TangleLetter { kind: TangleKind::Cup, index }
    }
    pub fn is_crossing(&self) -> bool {
        self.kind != TangleKind::Cup
    }
}

impl fmt::Display for TangleLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TangleKind::SigmaPos => write!(f, "s{}", self.index),
            TangleKind::SigmaNeg => write!(f, "S{}", self.index),
            TangleKind::Cup => write!(f, "e{}", self.index),
        }
    }
}

/// A classical tangle word read top to bottom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TangleWord {
    strands: usize,
    letters: Vec<TangleLetter>,
}

impl TangleWord {
    pub fn new(strands: usize, letters: Vec<TangleLetter>) -> Result<Self, DiagramError> {
        for l in &letters {
            if l.index == 0 || l.index >= strands {
                return Err(DiagramError::IndexOutOfRange { index: l.index, strands });
            }
        }
        Ok(TangleWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[TangleLetter] {
        &self.letters
    }

    pub fn crossing_count(&self) -> usize {
        self.letters.iter().filter(|l| l.is_crossing()).count()
    }

    pub fn concat(&self, other: &TangleWord) -> TangleWord {
        assert_eq!(self.strands, other.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        TangleWord { strands: self.strands, letters }
    }

    /// The same word with `e_2 e_4 ... e_{2k}` in front, so that its trace
    /// closure is the modified plat closure of `self`.
    pub fn plat_prefixed(&self) -> Result<TangleWord, DiagramError> {
        if self.strands % 2 == 0 {
            return Err(DiagramError::EvenPlat(self.strands));
        }
        let mut letters: Vec<TangleLetter> = (1..=self.strands / 2).map(|j| TangleLetter::e(2 * j)).collect();
        letters.extend_from_slice(&self.letters);
        Ok(TangleWord { strands: self.strands, letters })
    }

    /// Parse `s1 S2 e1 ...` (`S` is the inverse crossing).
    pub fn parse(text: &str, strands: usize) -> Result<TangleWord, DiagramError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (head, rest) = tok.split_at(1);
            let index: usize = rest
                .parse()
                .map_err(|_| DiagramError::Parse(format!("bad tangle letter {tok:?}")))?;
            let kind = match head {
                "s" => TangleKind::SigmaPos,
                "S" => TangleKind::SigmaNeg,
                "e" => TangleKind::Cup,
                _ => return Err(DiagramError::Parse(format!("bad tangle letter {tok:?}"))),
            };
            letters.push(TangleLetter { kind, index });
        }
        TangleWord::new(strands, letters)
    }
}

impl fmt::Display for TangleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Closure {
    /// Strand `i` top joined to strand `i` bottom around the braid axis.
    Trace,
    /// Caps on `(2j, 2j+1)` at top and bottom, strand 1 closed around the side.
    Plat,
}

/// A link diagram as a PD code.
///
/// Each crossing lists its four arc labels counterclockwise, starting at an
/// under-strand endpoint; positions 0 and 2 are the under strand. Diagrams
/// produced by [`PlanarDiagram::from_tangle`] and [`PlanarDiagram::oriented`]
/// start every tuple at the incoming under-strand arc.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanarDiagram {
    pub crossings: Vec<[u32; 4]>,
    pub free_loops: usize,
}

// Geometric slots of a braid crossing.
const NW: usize = 0;
const NE: usize = 1;
const SW: usize = 2;
const SE: usize = 3;
// Counterclockwise order of the slots.
const CCW: [usize; 4] = [NE, NW, SW, SE];

fn through(slot: usize) -> usize {
    match slot {
        NW => SE,
        SE => NW,
        NE => SW,
        _ => NE,
    }
}

impl PlanarDiagram {
    pub fn unlink(components: usize) -> Self {
        PlanarDiagram { crossings: Vec::new(), free_loops: components }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Closure of a tangle word as a PD code. Arcs are numbered along a
    /// traversal that starts at the first crossing in reading order.
    pub fn from_tangle(word: &TangleWord, closure: Closure) -> Result<PlanarDiagram, DiagramError> {
        let word = match closure {
            Closure::Trace => word.clone(),
            Closure::Plat => word.plat_prefixed()?,
        };
        Ok(build_trace_closure(&word))
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for x in &self.crossings {
            for &l in x {
                *counts.entry(l).or_default() += 1;
            }
        }
        for (label, count) in counts {
            if count != 2 {
                return Err(DiagramError::BadLabel { label, count });
            }
        }
        Ok(())
    }

    /// label -> the two (crossing, position) occurrences
    pub(crate) fn occurrences(&self) -> HashMap<u32, [(usize, usize); 2]> {
        let mut occ: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
        for (i, x) in self.crossings.iter().enumerate() {
            for (j, &l) in x.iter().enumerate() {
                occ.entry(l).or_default().push((i, j));
            }
        }
        occ.into_iter().map(|(l, v)| (l, [v[0], v[1]])).collect()
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::default();
        for x in &self.crossings {
            uf.union(x[0], x[2]);
            uf.union(x[1], x[3]);
        }
        uf.classes() + self.free_loops
    }

    /// Relabel along an orientation of every component and rotate each tuple
    /// to start at its incoming under arc. Also returns the crossing signs.
    pub fn oriented(&self) -> (PlanarDiagram, Vec<i8>) {
        let occ = self.occurrences();
        let other = |x: usize, j: usize| -> (usize, usize) {
            let o = occ[&self.crossings[x][j]];
            if o[0] == (x, j) {
                o[1]
            } else {
                o[0]
            }
        };
        let n = self.crossings.len();
        let mut label: Vec<[u32; 4]> = vec![[0; 4]; n];
        let mut incoming_under: Vec<Option<usize>> = vec![None; n];
        let mut over_in: Vec<Option<usize>> = vec![None; n];
        let mut next = 1u32;
        for x0 in 0..n {
            for j0 in 0..4 {
                if label[x0][j0] != 0 {
                    continue;
                }
                let start = (x0, j0);
                let mut cur = start;
                loop {
                    let (x, j) = cur;
                    if j % 2 == 0 {
                        incoming_under[x].get_or_insert(j);
                    } else {
                        over_in[x].get_or_insert(j);
                    }
                    let out = (j + 2) % 4;
                    let (y, k) = other(x, out);
                    label[x][out] = next;
                    label[y][k] = next;
                    next += 1;
                    cur = (y, k);
                    if cur == start {
                        break;
                    }
                }
            }
        }
        let mut crossings = Vec::with_capacity(n);
        let mut signs = Vec::with_capacity(n);
        for x in 0..n {
            let r = incoming_under[x].expect("under strand traversed");
            let t = [label[x][r], label[x][(r + 1) % 4], label[x][(r + 2) % 4], label[x][(r + 3) % 4]];
            crossings.push(t);
            // Positive iff the over strand enters at position 3 of the rotated tuple.
            let o = over_in[x].expect("over strand traversed");
            signs.push(if (o + 4 - r) % 4 == 3 { 1 } else { -1 });
        }
        (PlanarDiagram { crossings, free_loops: self.free_loops }, signs)
    }

    pub fn writhe(&self) -> i64 {
        self.oriented().1.iter().map(|&s| s as i64).sum()
    }

    /// Text form `X[a,b,c,d], ...; loops=n`.
    pub fn to_pd_string(&self) -> String {
        let xs: Vec<String> = self
            .crossings
            .iter()
            .map(|x| format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3]))
            .collect();
        format!("PD[{}]; loops={}", xs.join(", "), self.free_loops)
    }

    pub fn parse_pd(text: &str) -> Result<PlanarDiagram, DiagramError> {
        let (body, loops) = match text.split_once(';') {
            Some((b, rest)) => {
                let rest = rest.trim();
                let v = rest
                    .strip_prefix("loops=")
                    .ok_or_else(|| DiagramError::Parse(format!("expected 'loops=' got {rest:?}")))?;
                let n: usize = v.trim().parse().map_err(|_| DiagramError::Parse(format!("bad loop count {v:?}")))?;
                (b, n)
            }
            None => (text, 0),
        };
        let mut body = body.trim();
        if let Some(inner) = body.strip_prefix("PD[") {
            body = inner
                .strip_suffix(']')
                .ok_or_else(|| DiagramError::Parse("unterminated PD[".into()))?
                .trim();
        }
        let mut crossings = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            let r = rest
                .strip_prefix("X[")
                .ok_or_else(|| DiagramError::Parse(format!("expected X[ at {rest:?}")))?;
            let end = r.find(']').ok_or_else(|| DiagramError::Parse("unterminated X[".into()))?;
            let nums: Result<Vec<u32>, _> = r[..end].split(',').map(|s| s.trim().parse::<u32>()).collect();
            let nums = nums.map_err(|_| DiagramError::Parse(format!("bad crossing {:?}", &r[..end])))?;
            if nums.len() != 4 {
                return Err(DiagramError::Parse(format!("crossing needs 4 labels: {:?}", &r[..end])));
            }
            crossings.push([nums[0], nums[1], nums[2], nums[3]]);
            rest = r[end + 1..].trim_start();
            rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
        }
        let d = PlanarDiagram { crossings, free_loops: loops };
        d.validate()?;
        Ok(d)
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

#[derive(Default)]
pub(crate) struct UnionFind {
    parent: HashMap<u32, u32>,
}

impl UnionFind {
    pub(crate) fn find(&mut self, x: u32) -> u32 {
        let p = *self.parent.entry(x).or_insert(x);
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.parent.insert(x, r);
        r
    }

    pub(crate) fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent.insert(ra.max(rb), ra.min(rb));
        }
    }

    pub(crate) fn classes(&mut self) -> usize {
        let keys: Vec<u32> = self.parent.keys().copied().collect();
        let mut roots: Vec<u32> = keys.into_iter().map(|k| self.find(k)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

/// Sweep the word top to bottom, wiring crossing slots, cups/caps and the
/// closure arcs, then read off edges between crossing slots.
fn build_trace_closure(word: &TangleWord) -> PlanarDiagram {
    let m = word.strands();
    let crossings: Vec<(usize, TangleKind)> = word
        .letters()
        .iter()
        .filter(|l| l.is_crossing())
        .map(|l| (l.index, l.kind))
        .collect();
    let nx = crossings.len();
    // Points 0..4*nx are crossing slots; pass-through points follow.
    let mut wires: Vec<(usize, usize)> = Vec::new();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); 4 * nx];
    fn new_point(incident: &mut Vec<Vec<usize>>) -> usize {
        incident.push(Vec::new());
        incident.len() - 1
    }
    fn connect(a: usize, b: usize, incident: &mut [Vec<usize>], wires: &mut Vec<(usize, usize)>) {
        let w = wires.len();
        wires.push((a, b));
        incident[a].push(w);
        incident[b].push(w);
    }
    let tops: Vec<usize> = (0..m).map(|_| new_point(&mut incident)).collect();
    let mut current = tops.clone();
    let mut xi = 0;
    for l in word.letters() {
        let i = l.index - 1;
        match l.kind {
            TangleKind::Cup => {
                connect(current[i], current[i + 1], &mut incident, &mut wires);
                let left = new_point(&mut incident);
                let right = new_point(&mut incident);
                connect(left, right, &mut incident, &mut wires);
                current[i] = left;
                current[i + 1] = right;
            }
            _ => {
                connect(current[i], 4 * xi + NW, &mut incident, &mut wires);
                connect(current[i + 1], 4 * xi + NE, &mut incident, &mut wires);
                current[i] = 4 * xi + SW;
                current[i + 1] = 4 * xi + SE;
                xi += 1;
            }
        }
    }
    for p in 0..m {
        connect(current[p], tops[p], &mut incident, &mut wires);
    }

    // Walk from each slot through pass-through points to the next slot.
    let npoints = incident.len();
    let mut visited = vec![false; npoints];
    let mut slot_mate = vec![usize::MAX; 4 * nx];
    for s in 0..4 * nx {
        if slot_mate[s] != usize::MAX {
            continue;
        }
        let mut wire = incident[s][0];
        let mut at = s;
        loop {
            let (a, b) = wires[wire];
            let nxt = if a == at { b } else { a };
            if nxt < 4 * nx {
                slot_mate[s] = nxt;
                slot_mate[nxt] = s;
                break;
            }
            visited[nxt] = true;
            wire = if incident[nxt][0] == wire { incident[nxt][1] } else { incident[nxt][0] };
            at = nxt;
        }
    }
    let mut free_loops = 0;
    for p in 4 * nx..npoints {
        if visited[p] {
            continue;
        }
        free_loops += 1;
        let mut at = p;
        let mut wire = incident[p][0];
        loop {
            visited[at] = true;
            let (a, b) = wires[wire];
            let nxt = if a == at { b } else { a };
            if nxt == p {
                break;
            }
            wire = if incident[nxt][0] == wire { incident[nxt][1] } else { incident[nxt][0] };
            at = nxt;
        }
    }

    // Orient and label by traversal, starting at the first crossing in reading order.
    let mut label = vec![0u32; 4 * nx];
    let mut incoming_under = vec![usize::MAX; nx];
    let under = |x: usize, slot: usize| match crossings[x].1 {
        TangleKind::SigmaPos => slot == NW || slot == SE,
        _ => slot == NE || slot == SW,
    };
    let mut next = 1u32;
    for x0 in 0..nx {
        for s0 in [NW, NE, SW, SE] {
            if label[4 * x0 + s0] != 0 {
                continue;
            }
            let start = 4 * x0 + s0;
            let mut entry = start;
            loop {
                let (x, s) = (entry / 4, entry % 4);
                if under(x, s) && incoming_under[x] == usize::MAX {
                    incoming_under[x] = s;
                }
                let out = 4 * x + through(s);
                let mate = slot_mate[out];
                label[out] = next;
                label[mate] = next;
                next += 1;
                entry = mate;
                if entry == start {
                    break;
                }
            }
        }
    }
    let pd_crossings = (0..nx)
        .map(|x| {
            let r = CCW.iter().position(|&s| s == incoming_under[x]).unwrap();
            let mut t = [0u32; 4];
            for (k, slot) in t.iter_mut().enumerate() {
                *slot = label[4 * x + CCW[(r + k) % 4]];
            }
            t
        })
        .collect();
    PlanarDiagram { crossings: pd_crossings, free_loops }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tw(text: &str, m: usize) -> TangleWord {
        TangleWord::parse(text, m).unwrap()
    }

    fn trace(text: &str, m: usize) -> PlanarDiagram {
        PlanarDiagram::from_tangle(&tw(text, m), Closure::Trace).unwrap()
    }

    #[test]
    fn empty_trace_closure() {
        let d = trace("", 2);
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.free_loops, 2);
        assert_eq!(d.component_count(), 2);
    }

    #[test]
    fn single_crossing() {
        let d = trace("s1", 2);
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.component_count(), 1);
        d.validate().unwrap();
        assert_eq!(d.writhe(), 1);
        assert_eq!(trace("S1", 2).writhe(), -1);
    }

    #[test]
    fn torus_links() {
        for k in 1..8 {
            let d = trace(&vec!["s1"; k].join(" "), 2);
            assert_eq!(d.crossing_count(), k);
            assert_eq!(d.component_count(), if k % 2 == 0 { 2 } else { 1 });
            d.validate().unwrap();
        }
    }

    #[test]
    fn cup_closure() {
        assert_eq!(trace("e1", 2).component_count(), 1);
        assert_eq!(trace("e1", 2).free_loops, 1);
    }

    #[test]
    fn plat_closures() {
        let empty = PlanarDiagram::from_tangle(&tw("", 3), Closure::Plat).unwrap();
        assert_eq!(empty.crossing_count(), 0);
        assert_eq!(empty.component_count(), 2);
        let one = PlanarDiagram::from_tangle(&tw("S1", 3), Closure::Plat).unwrap();
        assert_eq!(one.crossing_count(), 1);
        assert_eq!(one.component_count(), 1);
        assert!(matches!(
            PlanarDiagram::from_tangle(&tw("", 2), Closure::Plat),
            Err(DiagramError::EvenPlat(2))
        ));
    }

    #[test]
    fn pd_text_round_trip() {
        let d = trace("s1 s1 s1", 2);
        let back = PlanarDiagram::parse_pd(&d.to_pd_string()).unwrap();
        assert_eq!(back, d);
        assert!(PlanarDiagram::parse_pd("X[1,2,3,4]").is_err());
        assert_eq!(PlanarDiagram::parse_pd("X[1,1,2,2]; loops=1").unwrap().component_count(), 2);
    }

    #[test]
    fn oriented_preserves_diagram_invariants() {
        let d = trace("s1 S2 s1 e2 s2 s2", 3);
        let (o, signs) = d.oriented();
        assert_eq!(o.component_count(), d.component_count());
        assert_eq!(signs.len(), d.crossing_count());
        assert_eq!(o.oriented().0, o);
    }

    #[test]
    fn crossing_only_components_match_permutation_cycles() {
        let words = ["s1 s2", "s1 s2 s1", "s1 S3 s2", "s2 s2 s1", "s1 s3"];
        for w in words {
            let t = tw(w, 4);
            let mut perm: Vec<usize> = (0..4).collect();
            for l in t.letters() {
                perm.swap(l.index - 1, l.index);
            }
            let mut seen = [false; 4];
            let mut cycles = 0;
            for s in 0..4 {
                if !seen[s] {
                    cycles += 1;
                    let mut j = s;
                    while !seen[j] {
                        seen[j] = true;
                        j = perm[j];
                    }
                }
            }
            assert_eq!(PlanarDiagram::from_tangle(&t, Closure::Trace).unwrap().component_count(), cycles, "{w}");
        }
    }
}
