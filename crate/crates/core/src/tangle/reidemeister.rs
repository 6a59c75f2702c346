//! Bounded Reidemeister-move search on PD codes.
//!
//! Moves are found on faces of the diagram: a monogon is an R1 site, a bigon
//! whose two edges are over/under at both ends is an R2 site, and a triangle
//! with one edge over at both of its ends is an R3 site. Crossing-increasing
//! R1/R2 moves are generated only while the crossing count stays within the
//! budget. States are explored best-first by (crossings, moves so far), so
//! reducing moves are always tried before anything else.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::diagram::{PlanarDiagram, UnionFind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    R1,
    R2,
    R3,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MoveKind::R1 => "R1",
            MoveKind::R2 => "R2",
            MoveKind::R3 => "R3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSet {
    pub r1: bool,
    pub r2: bool,
    pub r3: bool,
}

impl MoveSet {
    pub const ALL: MoveSet = MoveSet { r1: true, r2: true, r3: true };
    pub const R1_R2: MoveSet = MoveSet { r1: true, r2: true, r3: false };

    pub fn allows(&self, kind: MoveKind) -> bool {
        match kind {
            MoveKind::R1 => self.r1,
            MoveKind::R2 => self.r2,
            MoveKind::R3 => self.r3,
        }
    }

    /// Parse `r1,r2,r3` (case-insensitive, any subset).
    pub fn parse(text: &str) -> Option<MoveSet> {
        let mut set = MoveSet { r1: false, r2: false, r3: false };
        for part in text.split(',').map(|s| s.trim().to_ascii_lowercase()) {
            match part.as_str() {
                "r1" => set.r1 = true,
                "r2" => set.r2 = true,
                "r3" => set.r3 = true,
                "" => {}
                _ => return None,
            }
        }
        Some(set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplifyBudget {
    pub max_crossings: usize,
    pub max_expansions: usize,
}

impl SimplifyBudget {
    /// Defaults: up to 4 extra crossings, 200k expanded states.
    pub fn for_diagram(d: &PlanarDiagram) -> Self {
        SimplifyBudget { max_crossings: d.crossing_count() + 4, max_expansions: 200_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    /// true when the move adds crossings
    pub increasing: bool,
    pub crossings_after: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCounts {
    pub r1: usize,
    pub r2: usize,
    pub r3: usize,
}

impl MoveCounts {
    pub fn total(&self) -> usize {
        self.r1 + self.r2 + self.r3
    }
}

impl fmt::Display for MoveCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R1:{} R2:{} R3:{}", self.r1, self.r2, self.r3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub start_crossings: usize,
    pub moves: Vec<MoveRecord>,
    pub counts: MoveCounts,
    /// Crossingless end diagram (only free loops).
    pub end: PlanarDiagram,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimplifyOutcome {
    /// A 0-crossing diagram was reached.
    Unlinked(ReductionTrace),
    /// Budget exhausted.
    Unknown { expansions: usize },
}

/// Best-first search for a crossingless diagram using the allowed moves.
pub fn reidemeister_simplify(d: &PlanarDiagram, allowed: MoveSet, budget: SimplifyBudget) -> SimplifyOutcome {
    let start = canonical(d);
    let start_crossings = start.crossing_count();
    if start_crossings == 0 {
        return SimplifyOutcome::Unlinked(ReductionTrace {
            start_crossings,
            moves: Vec::new(),
            counts: MoveCounts::default(),
            end: start,
        });
    }
    let mut nodes: Vec<(PlanarDiagram, Option<(usize, MoveRecord)>)> = vec![(start.clone(), None)];
    let mut index: HashMap<PlanarDiagram, usize> = HashMap::new();
    index.insert(start, 0);
    let mut heap = BinaryHeap::new();
    // Each diagram is expanded twice: first with the non-increasing moves,
    // later (ranked one crossing higher) with the crossing-adding ones.
    heap.push(Reverse((start_crossings, false, 0usize, 0usize)));
    let mut expansions = 0;
    while let Some(Reverse((_, up, depth, id))) = heap.pop() {
        if expansions >= budget.max_expansions {
            break;
        }
        expansions += 1;
        let current = nodes[id].0.clone();
        if !up && current.crossing_count() < budget.max_crossings {
            heap.push(Reverse((current.crossing_count() + 1, true, depth, id)));
        }
        for (kind, next) in neighbors(&current, allowed, budget.max_crossings, up) {
            let next = canonical(&next);
            if index.contains_key(&next) {
                continue;
            }
            let crossings = next.crossing_count();
            let rec = MoveRecord { kind, increasing: crossings > current.crossing_count(), crossings_after: crossings };
            let nid = nodes.len();
            nodes.push((next.clone(), Some((id, rec))));
            index.insert(next.clone(), nid);
            if crossings == 0 {
                let mut moves = Vec::new();
                let mut at = nid;
                while let Some((parent, rec)) = nodes[at].1 {
                    moves.push(rec);
                    at = parent;
                }
                moves.reverse();
                let mut counts = MoveCounts::default();
                for m in &moves {
                    match m.kind {
                        MoveKind::R1 => counts.r1 += 1,
                        MoveKind::R2 => counts.r2 += 1,
                        MoveKind::R3 => counts.r3 += 1,
                    }
                }
                return SimplifyOutcome::Unlinked(ReductionTrace { start_crossings, moves, counts, end: next });
            }
            heap.push(Reverse((crossings, false, depth + 1, nid)));
        }
    }
    SimplifyOutcome::Unknown { expansions }
}

type Slot = (usize, usize);

struct Occurrences {
    by_label: HashMap<u32, [Slot; 2]>,
}

impl Occurrences {
    fn new(d: &PlanarDiagram) -> Self {
        Occurrences { by_label: d.occurrences() }
    }

    fn other(&self, d: &PlanarDiagram, at: Slot) -> Slot {
        let o = self.by_label[&d.crossings[at.0][at.1]];
        if o[0] == at {
            o[1]
        } else {
            o[0]
        }
    }
}

/// Faces as cycles of corners; corner `(x, j)` is the region between
/// positions `j` and `j+1` (counterclockwise) at crossing `x`.
pub(crate) fn faces(d: &PlanarDiagram) -> Vec<Vec<Slot>> {
    let occ = Occurrences::new(d);
    let n = d.crossings.len();
    let mut seen = vec![[false; 4]; n];
    let mut out = Vec::new();
    for x in 0..n {
        for j in 0..4 {
            if seen[x][j] {
                continue;
            }
            let mut face = Vec::new();
            let mut c = (x, j);
            while !seen[c.0][c.1] {
                seen[c.0][c.1] = true;
                face.push(c);
                c = occ.other(d, (c.0, (c.1 + 1) % 4));
            }
            out.push(face);
        }
    }
    out
}

/// Remove crossings, letting both strands pass straight through each one.
fn remove_crossings(d: &PlanarDiagram, removed: &[usize]) -> PlanarDiagram {
    let mut uf = UnionFind::default();
    for &x in removed {
        let t = d.crossings[x];
        uf.union(t[0], t[2]);
        uf.union(t[1], t[3]);
    }
    let mut crossings = Vec::with_capacity(d.crossings.len() - removed.len());
    let mut touching = std::collections::HashSet::new();
    for (i, t) in d.crossings.iter().enumerate() {
        if removed.contains(&i) {
            continue;
        }
        let r = [uf.find(t[0]), uf.find(t[1]), uf.find(t[2]), uf.find(t[3])];
        touching.extend(r);
        crossings.push(r);
    }
    let mut roots: Vec<u32> = removed
        .iter()
        .flat_map(|&x| d.crossings[x])
        .map(|l| uf.find(l))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    let new_loops = roots.iter().filter(|r| !touching.contains(r)).count();
    PlanarDiagram { crossings, free_loops: d.free_loops + new_loops }
}

fn max_label(d: &PlanarDiagram) -> u32 {
    d.crossings.iter().flat_map(|t| t.iter().copied()).max().unwrap_or(0)
}

/// Moves that do not add crossings (`up == false`) or the crossing-adding
/// R1/R2 moves (`up == true`).
fn neighbors(d: &PlanarDiagram, allowed: MoveSet, max_crossings: usize, up: bool) -> Vec<(MoveKind, PlanarDiagram)> {
    let fs = faces(d);
    let mut out = Vec::new();
    let n = d.crossing_count();
    if up {
        if allowed.r1 && n < max_crossings {
            out.extend(r1_up_moves(d).into_iter().map(|e| (MoveKind::R1, e)));
        }
        if allowed.r2 && n + 2 <= max_crossings {
            for f in &fs {
                out.extend(r2_up_moves(d, f).into_iter().map(|e| (MoveKind::R2, e)));
            }
        }
        return out;
    }
    // Reducing moves first.
    for f in &fs {
        match f.len() {
            1 if allowed.r1 => out.push((MoveKind::R1, remove_crossings(d, &[f[0].0]))),
            2 if allowed.r2 => {
                let ((x, j), (y, k)) = (f[0], f[1]);
                if x != y && (j + 1) % 2 == k % 2 {
                    out.push((MoveKind::R2, remove_crossings(d, &[x, y])));
                }
            }
            _ => {}
        }
    }
    if allowed.r3 {
        for f in fs.iter().filter(|f| f.len() == 3) {
            if let Some(next) = r3_move(d, f) {
                out.push((MoveKind::R3, next));
            }
        }
    }
    out
}

fn r3_move(d: &PlanarDiagram, face: &[Slot]) -> Option<PlanarDiagram> {
    let occ = Occurrences::new(d);
    let xs: Vec<usize> = face.iter().map(|c| c.0).collect();
    if xs[0] == xs[1] || xs[1] == xs[2] || xs[0] == xs[2] {
        return None;
    }
    // Each triangle edge leaves corner i at position j+1 and arrives at the next corner.
    let edges: Vec<(Slot, Slot)> = face
        .iter()
        .map(|&(x, j)| {
            let from = (x, (j + 1) % 4);
            (from, occ.other(d, from))
        })
        .collect();
    let over_both = edges.iter().any(|&((_, p), (_, q))| p % 2 == 1 && q % 2 == 1);
    if !over_both {
        return None;
    }
    let mut next = d.clone();
    for &((px, p), (qx, q)) in &edges {
        let e = d.crossings[px][p];
        next.crossings[px][p] = d.crossings[qx][(q + 2) % 4];
        next.crossings[px][(p + 2) % 4] = e;
        next.crossings[qx][q] = d.crossings[px][(p + 2) % 4];
        next.crossings[qx][(q + 2) % 4] = e;
    }
    debug_assert!(next.validate().is_ok());
    Some(next)
}

fn r1_up_moves(d: &PlanarDiagram) -> Vec<PlanarDiagram> {
    let occ = Occurrences::new(d);
    let base = max_label(d);
    let mut labels: Vec<u32> = occ.by_label.keys().copied().collect();
    labels.sort_unstable();
    let mut out = Vec::new();
    for l in labels {
        let [_, (qx, qp)] = occ.by_label[&l];
        let (lp, n2) = (base + 1, base + 2);
        for j in 0..4 {
            for swap in [false, true] {
                let mut next = d.clone();
                next.crossings[qx][qp] = n2;
                let mut t = [0u32; 4];
                t[j] = lp;
                t[(j + 1) % 4] = lp;
                let (u, v) = if swap { (n2, l) } else { (l, n2) };
                t[(j + 2) % 4] = u;
                t[(j + 3) % 4] = v;
                next.crossings.push(t);
                out.push(next);
            }
        }
    }
    out
}

fn r2_up_moves(d: &PlanarDiagram, face: &[Slot]) -> Vec<PlanarDiagram> {
    let occ = Occurrences::new(d);
    let base = max_label(d);
    let walked: Vec<(Slot, Slot)> = face
        .iter()
        .map(|&(x, j)| {
            let from = (x, (j + 1) % 4);
            (from, occ.other(d, from))
        })
        .collect();
    let mut out = Vec::new();
    for (i1, &(p1, q1)) in walked.iter().enumerate() {
        for (i2, &(p2, q2)) in walked.iter().enumerate() {
            if i1 == i2 {
                continue;
            }
            let l1 = d.crossings[p1.0][p1.1];
            let l2 = d.crossings[p2.0][p2.1];
            if l1 == l2 {
                continue;
            }
            let (n1, m1) = (l1, l2);
            let (n2, n3, m2, m3) = (base + 1, base + 2, base + 3, base + 4);
            for over in [true, false] {
                let mut next = d.clone();
                next.crossings[q1.0][q1.1] = n3;
                next.crossings[q2.0][q2.1] = m3;
                let (x, y) = if over {
                    ([m2, n1, m3, n2], [m1, n3, m2, n2])
                } else {
                    ([n1, m3, n2, m2], [n3, m2, n2, m1])
                };
                next.crossings.push(x);
                next.crossings.push(y);
                debug_assert!(next.validate().is_ok());
                out.push(next);
            }
        }
    }
    out
}

/// Relabeling-invariant form used as the search key: the lexicographically
/// least relabeling over all traversal starting points.
pub fn canonical(d: &PlanarDiagram) -> PlanarDiagram {
    let n = d.crossings.len();
    if n == 0 {
        return PlanarDiagram { crossings: Vec::new(), free_loops: d.free_loops };
    }
    let occ = Occurrences::new(d);
    let mut best: Option<Vec<[u32; 4]>> = None;
    for x in 0..n {
        for j in 0..4 {
            let cand = relabel_from(d, &occ, (x, j));
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    PlanarDiagram { crossings: best.unwrap(), free_loops: d.free_loops }
}

fn relabel_from(d: &PlanarDiagram, occ: &Occurrences, start: Slot) -> Vec<[u32; 4]> {
    let n = d.crossings.len();
    let mut label = vec![[0u32; 4]; n];
    let mut first_entry: Vec<Option<usize>> = vec![None; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut next = 1u32;
    let mut pending = Some(start);
    loop {
        let Some(s) = pending.take() else { break };
        let mut cur = s;
        loop {
            let (x, j) = cur;
            if first_entry[x].is_none() {
                first_entry[x] = Some(j);
                order.push(x);
            }
            let out = (x, (j + 2) % 4);
            let to = occ.other(d, out);
            label[out.0][out.1] = next;
            label[to.0][to.1] = next;
            next += 1;
            cur = to;
            if cur == s {
                break;
            }
        }
        'scan: for &x in &order {
            let e = first_entry[x].unwrap();
            for k in 0..4 {
                let j = (e + k) % 4;
                if label[x][j] == 0 {
                    pending = Some((x, j));
                    break 'scan;
                }
            }
        }
        if pending.is_none() {
            if let Some(x) = (0..n).find(|&x| first_entry[x].is_none()) {
                pending = Some((x, 0));
            }
        }
    }
    let mut out: Vec<[u32; 4]> = label
        .into_iter()
        .map(|t| {
            let r = [t[2], t[3], t[0], t[1]];
            if r < t {
                r
            } else {
                t
            }
        })
        .collect();
    out.sort_unstable();
    out
}
