use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::catalog::{catalog, Direction, RuleFilter, RuleId, RuleInstance, RuleParams};
use super::certificate::{csb_subject, CsbCache, RewriteCertificate, RewriteStep, Strictness};
use crate::tangle::SimplifyBudget;
use crate::word::{ClosedSurfaceWord, Generator, Kind, SurfaceBraidWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub rules: RuleFilter,
    pub max_word_length: usize,
    pub max_strands: usize,
    pub max_expansions: usize,
    pub strictness: Strictness,
    /// Budget for the CSB checks of strict closure moves; `None` picks one per word.
    pub csb_budget: Option<SimplifyBudget>,
    /// How often a strict search may restart after a closure move failed its check.
    pub max_strict_retries: usize,
}

impl SearchConfig {
    /// Defaults for two words of the given lengths: words may grow by 6
    /// letters, one extra strand, 10^6 node expansions, strict closure moves.
    pub fn for_words(len_u: usize, len_v: usize) -> Self {
        SearchConfig {
            rules: RuleFilter::ALL,
            max_word_length: len_u.max(len_v) + 6,
            max_strands: 0,
            max_expansions: 1_000_000,
            strictness: Strictness::Strict,
            csb_budget: None,
            max_strict_retries: 32,
        }
    }

    fn strand_cap(&self, a: usize, b: usize) -> usize {
        if self.max_strands == 0 {
            a.max(b) + 1
        } else {
            self.max_strands
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(RewriteCertificate),
    /// Nothing found within the bounds. `exhausted` means every word within the
    /// length and strand bounds was visited; this is still not a proof of
    /// inequivalence, since longer intermediate words were never tried.
    Unknown { expansions: usize, exhausted: bool },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&RewriteCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::Unknown { .. } => None,
        }
    }
}

/// Compact word encoding: strand count, then one byte per letter.
type Packed = Box<[u8]>;

fn pack(w: &SurfaceBraidWord) -> Packed {
    let mut v = Vec::with_capacity(w.len() + 1);
    v.push(w.strands() as u8);
    v.extend(w.letters().iter().map(|g| {
        let k = match g.kind {
            Kind::A => 0u8,
            Kind::B => 1,
            Kind::C => 2,
            Kind::Cinv => 3,
        };
        (g.index as u8) << 2 | k
    }));
    v.into_boxed_slice()
}

fn unpack(p: &[u8]) -> SurfaceBraidWord {
    let letters = p[1..]
        .iter()
        .map(|b| {
            let kind = [Kind::A, Kind::B, Kind::C, Kind::Cinv][(b & 3) as usize];
            Generator { kind, index: (b >> 2) as usize }
        })
        .collect();
    SurfaceBraidWord::new(p[0] as usize, letters).expect("packed words are valid")
}

struct RuleIndex {
    instances: Vec<RuleInstance>,
    by_first: HashMap<Generator, Vec<(usize, Direction)>>,
    insertions: Vec<(usize, Direction)>,
}

impl RuleIndex {
    fn new(strands: usize, rules: RuleFilter) -> Self {
        let instances: Vec<RuleInstance> = catalog(strands).into_iter().filter(|r| rules.contains(r.rule)).collect();
        let mut by_first: HashMap<Generator, Vec<(usize, Direction)>> = HashMap::new();
        let mut insertions = Vec::new();
        for (id, inst) in instances.iter().enumerate() {
            for dir in [Direction::Forward, Direction::Backward] {
                match inst.side(dir).0.first() {
                    Some(g) => by_first.entry(*g).or_default().push((id, dir)),
                    None => insertions.push((id, dir)),
                }
            }
        }
        RuleIndex { instances, by_first, insertions }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    Reducing,
    Full,
}

struct Expander<'a> {
    config: &'a SearchConfig,
    open: bool,
    strand_cap: usize,
    indices: HashMap<usize, RuleIndex>,
    /// Words whose CSB condition failed; closure moves relying on them are skipped.
    banned: HashSet<Packed>,
}

impl<'a> Expander<'a> {
    fn new(config: &'a SearchConfig, open: bool, strand_cap: usize) -> Self {
        Expander { config, open, strand_cap, indices: HashMap::new(), banned: HashSet::new() }
    }

    fn neighbors(&mut self, word: &SurfaceBraidWord, phase: Phase) -> Vec<(RewriteStep, SurfaceBraidWord)> {
        let n = word.strands();
        let letters = word.letters();
        let len = letters.len();
        let max_len = if phase == Phase::Reducing { len } else { self.config.max_word_length };
        let mut out = Vec::new();
        let rules = self.config.rules;
        let index = self.indices.entry(n).or_insert_with(|| RuleIndex::new(n, rules));
        let emit = |step: RewriteStep, pattern: &[Generator], replacement: &[Generator], out: &mut Vec<_>| {
            let mut v = Vec::with_capacity(len - pattern.len() + replacement.len());
            v.extend_from_slice(&letters[..step.position]);
            v.extend_from_slice(replacement);
            v.extend_from_slice(&letters[step.position + pattern.len()..]);
            out.push((step, SurfaceBraidWord::new(n, v).expect("same strands")));
        };
        for p in 0..len {
            if let Some(cands) = index.by_first.get(&letters[p]) {
                for &(id, dir) in cands {
                    let inst = &index.instances[id];
                    let (pat, rep) = inst.side(dir);
                    if p + pat.len() <= len && &letters[p..p + pat.len()] == pat && len - pat.len() + rep.len() <= max_len {
                        emit(RewriteStep::new(inst.rule, dir, inst.params, p), pat, rep, &mut out);
                    }
                }
            }
        }
        if phase == Phase::Full {
            for &(id, dir) in &index.insertions {
                let inst = &index.instances[id];
                let (pat, rep) = inst.side(dir);
                if len + rep.len() <= max_len {
                    for p in 0..=len {
                        emit(RewriteStep::new(inst.rule, dir, inst.params, p), pat, rep, &mut out);
                    }
                }
            }
        }
        if self.open {
            return out;
        }
        if rules.contains(RuleId::C1) && len >= 2 && !self.banned.contains(&rotation_packed(word)) {
            let mut l = letters.to_vec();
            l.rotate_left(1);
            if l != letters {
                out.push((RewriteStep::new(RuleId::C1, Direction::Forward, RuleParams::default(), 0), SurfaceBraidWord::new(n, l).unwrap()));
                let mut r = letters.to_vec();
                r.rotate_right(1);
                if r != out.last().unwrap().1.letters() {
                    out.push((
                        RewriteStep::new(RuleId::C1, Direction::Backward, RuleParams::default(), len - 1),
                        SurfaceBraidWord::new(n, r).unwrap(),
                    ));
                }
            }
        }
        if rules.contains(RuleId::C2) {
            if let Some(last) = letters.last() {
                if n >= 2 && last.index == n - 1 && letters[..len - 1].iter().all(|g| g.index + 2 <= n) {
                    let down = SurfaceBraidWord::new(n - 1, letters[..len - 1].to_vec()).unwrap();
                    if !self.banned.contains(&rotation_packed(&down)) {
                        let params = RuleParams { x: Some(last.kind), ..RuleParams::default() };
                        out.push((RewriteStep::new(RuleId::C2, Direction::Backward, params, len - 1), down));
                    }
                }
            }
            if phase == Phase::Full && n < self.strand_cap && len < max_len && !self.banned.contains(&rotation_packed(word)) {
                for x in Kind::ALL {
                    let mut l = letters.to_vec();
                    l.push(Generator { kind: x, index: n });
                    let params = RuleParams { x: Some(x), ..RuleParams::default() };
                    out.push((RewriteStep::new(RuleId::C2, Direction::Forward, params, len), SurfaceBraidWord::new(n + 1, l).unwrap()));
                }
            }
        }
        out
    }
}

fn rotation_packed(w: &SurfaceBraidWord) -> Packed {
    let l = w.letters();
    let best = (0..l.len().max(1))
        .map(|r| {
            let mut v = l.to_vec();
            if !v.is_empty() {
                v.rotate_left(r);
            }
            v
        })
        .min()
        .unwrap_or_default();
    pack(&SurfaceBraidWord::new(w.strands(), best).unwrap())
}

struct Node {
    word: Packed,
    parent: u32,
    step: Option<RewriteStep>,
    depth: u32,
}

type Key = (u32, u32, Packed);

struct Side {
    nodes: Vec<Node>,
    ids: HashMap<Packed, u32>,
    heap: BinaryHeap<Reverse<(Key, u32)>>,
}

impl Side {
    fn new(root: &SurfaceBraidWord, phase: Phase) -> Self {
        let mut s = Side { nodes: Vec::new(), ids: HashMap::new(), heap: BinaryHeap::new() };
        s.insert(pack(root), u32::MAX, None, 0, phase);
        s
    }

    fn insert(&mut self, word: Packed, parent: u32, step: Option<RewriteStep>, depth: u32, phase: Phase) -> u32 {
        let id = self.nodes.len() as u32;
        let len = word.len() as u32;
        let key = match phase {
            Phase::Reducing => (len, depth, word.clone()),
            Phase::Full => (depth, len, word.clone()),
        };
        self.ids.insert(word.clone(), id);
        self.nodes.push(Node { word, parent, step, depth });
        self.heap.push(Reverse((key, id)));
        id
    }

    /// Steps from the root to `id`, paired with the word each step produces.
    fn path_from_root(&self, mut id: u32) -> Vec<(RewriteStep, SurfaceBraidWord)> {
        let mut out = Vec::new();
        while let Some(step) = &self.nodes[id as usize].step {
            out.push((step.clone(), unpack(&self.nodes[id as usize].word)));
            id = self.nodes[id as usize].parent;
        }
        out.reverse();
        out
    }
}

enum Met {
    At(u32, u32),
    Goal(u32),
}

/// Core best-first search. With `target` the search is bidirectional; with
/// `goal` it is one-sided and stops at the first word satisfying the goal.
fn run_phase(
    expander: &mut Expander,
    start: &SurfaceBraidWord,
    target: Option<&SurfaceBraidWord>,
    goal: &dyn Fn(&SurfaceBraidWord) -> bool,
    phase: Phase,
    budget: usize,
    expansions: &mut usize,
) -> Result<Vec<RewriteStep>, bool> {
    let mut sides = vec![Side::new(start, phase)];
    if let Some(t) = target {
        sides.push(Side::new(t, phase));
        if let Some(&j) = sides[1].ids.get(&pack(start)) {
            return Ok(assemble(&sides, Met::At(0, j)));
        }
    } else if goal(start) {
        return Ok(Vec::new());
    }
    let mut turn = 0usize;
    let limit = *expansions + budget;
    loop {
        if *expansions >= limit {
            return Err(false);
        }
        let live: Vec<usize> = (0..sides.len()).filter(|&s| !sides[s].heap.is_empty()).collect();
        if live.is_empty() {
            return Err(true);
        }
        let s = live[turn % live.len()];
        turn += 1;
        let Reverse((_, id)) = sides[s].heap.pop().unwrap();
        *expansions += 1;
        let word = unpack(&sides[s].nodes[id as usize].word);
        let depth = sides[s].nodes[id as usize].depth;
        for (step, next) in expander.neighbors(&word, phase) {
            let packed = pack(&next);
            if sides[s].ids.contains_key(&packed) {
                continue;
            }
            let nid = sides[s].insert(packed.clone(), id, Some(step), depth + 1, phase);
            if sides.len() == 2 {
                if let Some(&other) = sides[1 - s].ids.get(&packed) {
                    let met = if s == 0 { Met::At(nid, other) } else { Met::At(other, nid) };
                    return Ok(assemble(&sides, met));
                }
            } else if goal(&next) {
                return Ok(assemble(&sides, Met::Goal(nid)));
            }
        }
    }
}

fn assemble(sides: &[Side], met: Met) -> Vec<RewriteStep> {
    match met {
        Met::Goal(id) => sides[0].path_from_root(id).into_iter().map(|(s, _)| s).collect(),
        Met::At(f, b) => {
            let mut steps: Vec<RewriteStep> = sides[0].path_from_root(f).into_iter().map(|(s, _)| s).collect();
            let back = sides[1].path_from_root(b);
            for (step, after) in back.into_iter().rev() {
                steps.push(step.inverse(&after));
            }
            steps
        }
    }
}

fn search(
    start: &SurfaceBraidWord,
    target: Option<&SurfaceBraidWord>,
    goal: &dyn Fn(&SurfaceBraidWord) -> bool,
    open: bool,
    config: &SearchConfig,
    cache: &mut CsbCache,
) -> SearchOutcome {
    let cap = config.strand_cap(start.strands(), target.map_or(0, |t| t.strands()));
    let mut expander = Expander::new(config, open, cap);
    let mut expansions = 0usize;
    let reducing_budget = (config.max_expansions / 4).max(1);
    let mut exhausted = false;
    for _attempt in 0..=config.max_strict_retries {
        let mut found = None;
        for phase in [Phase::Reducing, Phase::Full] {
            let budget = match phase {
                Phase::Reducing => reducing_budget.min(config.max_expansions.saturating_sub(expansions)),
                Phase::Full => config.max_expansions.saturating_sub(expansions),
            };
            match run_phase(&mut expander, start, target, goal, phase, budget, &mut expansions) {
                Ok(steps) => {
                    found = Some(steps);
                    break;
                }
                Err(ex) => exhausted = ex,
            }
        }
        let Some(mut steps) = found else {
            return SearchOutcome::Unknown { expansions, exhausted };
        };
        let mut end = start.clone();
        for step in steps.iter_mut() {
            let next = super::certificate::apply_step(&end, open, step).expect("search steps replay");
            step.before_len = Some(end.len());
            step.after_len = Some(next.len());
            end = next;
        }
        if config.strictness == Strictness::Lax || open {
            return SearchOutcome::Found(RewriteCertificate { start: start.clone(), end, open, strictness: config.strictness, steps });
        }
        // Verify the closure moves on the path; ban failing subjects and retry.
        let mut current = start.clone();
        let mut failed = false;
        for step in steps.iter_mut() {
            let next = super::certificate::apply_step(&current, open, step).unwrap();
            if step.rule.is_closure_move() {
                let subject = csb_subject(step, &current, &next);
                match cache.check(subject) {
                    Ok(ev) => step.evidence = Some(ev),
                    Err(_) => {
                        expander.banned.insert(rotation_packed(subject));
                        failed = true;
                    }
                }
            }
            current = next;
        }
        if !failed {
            return SearchOutcome::Found(RewriteCertificate { start: start.clone(), end, open, strictness: config.strictness, steps });
        }
    }
    SearchOutcome::Unknown { expansions, exhausted: false }
}

fn csb_cache(config: &SearchConfig) -> CsbCache {
    match config.csb_budget {
        Some(b) => CsbCache::with_budget(b),
        None => CsbCache::default(),
    }
}

/// Search for a derivation between two closed words.
pub fn equiv_search(u: &ClosedSurfaceWord, v: &ClosedSurfaceWord, config: &SearchConfig) -> SearchOutcome {
    equiv_search_with_cache(u, v, config, &mut csb_cache(config))
}

pub fn equiv_search_with_cache(u: &ClosedSurfaceWord, v: &ClosedSurfaceWord, config: &SearchConfig, cache: &mut CsbCache) -> SearchOutcome {
    search(u.word(), Some(v.word()), &|_| false, false, config, cache)
}

/// Search for a derivation between two open words on the same strands, using
/// only the relations allowed by `config.rules`.
pub fn equiv_search_open(u: &SurfaceBraidWord, v: &SurfaceBraidWord, config: &SearchConfig) -> SearchOutcome {
    if u.strands() != v.strands() {
        return SearchOutcome::Unknown { expansions: 0, exhausted: true };
    }
    search(u, Some(v), &|_| false, true, config, &mut CsbCache::default())
}

/// Derivation from `word` to some closed word on fewer strands.
pub fn search_fewer_strands(word: &ClosedSurfaceWord, config: &SearchConfig) -> Option<RewriteCertificate> {
    let n = word.closure_strands();
    let mut cfg = *config;
    cfg.max_strands = n;
    match search(word.word(), None, &|w| w.strands() < n, false, &cfg, &mut csb_cache(config)) {
        SearchOutcome::Found(c) => Some(c),
        SearchOutcome::Unknown { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::certificate::replay_certificate;
    use crate::word::{parse_closed, parse_word};

    fn cw(t: &str) -> ClosedSurfaceWord {
        parse_closed(t).unwrap()
    }

    fn small(u: &ClosedSurfaceWord, v: &ClosedSurfaceWord) -> SearchConfig {
        let mut c = SearchConfig::for_words(u.letters().len(), v.letters().len());
        c.max_expansions = 50_000;
        c
    }

    #[test]
    fn pack_round_trip() {
        let w = parse_word("a1 C3 b2 c1", 4).unwrap();
        assert_eq!(unpack(&pack(&w)), w);
    }

    #[test]
    fn trivial_and_short_searches() {
        let u = cw("[a1 c1 C1]_2");
        let v = cw("[a1]_2");
        let cert = equiv_search(&u, &v, &small(&u, &v)).certificate().cloned().unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert!(replay_certificate(&cert, &mut CsbCache::default()).is_ok());
        let same = equiv_search(&u, &u, &small(&u, &u));
        assert_eq!(same.certificate().unwrap().steps.len(), 0);
    }

    #[test]
    fn destabilization_to_trivial_closure() {
        let u = cw("[a2 C1 b2 c1]_3");
        let v = cw("[]_1");
        let cert = equiv_search(&u, &v, &small(&u, &v)).certificate().cloned().unwrap();
        assert_eq!(cert.strictness, Strictness::Strict);
        assert!(cert.steps.iter().filter(|s| s.rule.is_closure_move()).all(|s| s.evidence.is_some()));
        let report = replay_certificate(&cert, &mut CsbCache::default()).unwrap();
        assert!(report.closure_checks >= 2);
    }

    #[test]
    fn open_search_respects_filter() {
        let u = parse_word("c1 a2 C1", 3).unwrap();
        let v = parse_word("C2 a1 c2", 3).unwrap();
        let mut cfg = SearchConfig::for_words(3, 3);
        cfg.max_expansions = 10_000;
        let cert = equiv_search_open(&u, &v, &cfg).certificate().cloned().unwrap();
        assert!(cert.open);
        cfg.rules = RuleFilter::from_rules(&[RuleId::A1, RuleId::A2]);
        assert!(matches!(equiv_search_open(&u, &v, &cfg), SearchOutcome::Unknown { .. }));
    }

    #[test]
    fn strict_search_avoids_uncertified_rotations() {
        // c1^3 closes to trefoils, so no closure move may touch it.
        let u = cw("[c1 c1 c1 a1]_2");
        let v = cw("[a1 c1 c1 c1]_2");
        let mut cfg = small(&u, &v);
        cfg.rules = RuleFilter::from_rules(&[RuleId::C1]);
        assert!(matches!(equiv_search(&u, &v, &cfg), SearchOutcome::Unknown { .. }));
        let mut lax = cfg;
        lax.strictness = Strictness::Lax;
        assert!(equiv_search(&u, &v, &lax).certificate().is_some());
    }

    #[test]
    fn fewer_strands() {
        let w = cw("[a1 b2]_3");
        let mut cfg = SearchConfig::for_words(2, 0);
        cfg.max_expansions = 5_000;
        let cert = search_fewer_strands(&w, &cfg).unwrap();
        assert!(cert.end.strands() < 3);
    }
}
