//! Enumeration of closed words on 2 strands and their sorting into the six
//! surface types, plus the 3-strand family used for index bounds.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rewrite::normalize::counting_form;
use crate::rewrite::{
    equiv_search_with_cache, normalize_csb2_certified, replay_certificate, CsbCache, NormalizeError, SearchConfig,
    SearchOutcome, Strictness,
};
use crate::surface::{surface_invariants, SurfaceInvariants};
use crate::word::{parse_closed, ClosedSurfaceWord, Generator, Kind, SurfaceBraidWord, WordError};

/// How a literal normal form reaches its class representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Route {
    /// The normal form is itself one of the six representatives.
    Direct,
    /// Destabilizes to `[1]_1` and is restabilized as `[c_1]_2`.
    Destabilization,
    /// Exchanging `a`/`b` and inverting crossings (an orientation-preserving
    /// symmetry of 4-space) maps it onto a representative.
    Symmetry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub normal_form: String,
    pub members: usize,
    pub invariants: SurfaceInvariants,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteEntry {
    pub form: String,
    pub class: String,
    pub route: Route,
    pub members: usize,
    /// Steps of the strict certificate for destabilization routes.
    pub certificate_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub max_length: usize,
    pub words_enumerated: usize,
    pub csb_members: usize,
    pub non_members: usize,
    /// Words whose membership could not be decided within budget.
    pub undecided: usize,
    pub classes: Vec<ClassEntry>,
    /// Literal normal forms that are not representatives themselves.
    pub routes: Vec<RouteEntry>,
    /// Members with a replayable strict certificate to their literal normal form.
    pub certified_members: usize,
    pub uncertified: Vec<String>,
    /// Class pairs the computed signature cannot separate.
    pub unverified_pairs: Vec<(String, String)>,
}

impl ClassificationReport {
    pub fn normal_forms(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.normal_form.clone()).collect()
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "words up to length {}: {} enumerated, {} in CSB_2, {} rejected, {} undecided",
            self.max_length, self.words_enumerated, self.csb_members, self.non_members, self.undecided
        )?;
        writeln!(f, "{:<14} {:>4} {:>4} {:>4} {:>8}", "normal form", "chi", "c+", "c-", "members")?;
        for c in &self.classes {
            writeln!(
                f,
                "{:<14} {:>4} {:>4} {:>4} {:>8}",
                c.normal_form,
                c.invariants.euler_characteristic,
                c.invariants.components_plus,
                c.invariants.components_minus,
                c.members
            )?;
        }
        for r in &self.routes {
            let how = match r.route {
                Route::Direct => "direct",
                Route::Destabilization => "destabilizable, via C2",
                Route::Symmetry => "via a<->b, c<->c^-1 symmetry",
            };
            writeln!(f, "  {} -> {} ({how}; {} members)", r.form, r.class, r.members)?;
        }
        writeln!(f, "strict certificates to normal form: {}/{}", self.certified_members, self.csb_members)?;
        for (a, b) in &self.unverified_pairs {
            writeln!(f, "  {a} vs {b}: distinct per the literature, not verified here")?;
        }
        Ok(())
    }
}

/// All words on 2 strands of length at most `max_length`, shortest first.
pub fn enumerate_words2(max_length: usize) -> Vec<SurfaceBraidWord> {
    let alphabet: Vec<Generator> = Kind::ALL.iter().map(|&kind| Generator { kind, index: 1 }).collect();
    let mut out = vec![SurfaceBraidWord::identity(2).unwrap()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_length {
        let mut next = Vec::with_capacity(layer.len() * 4);
        for w in &layer {
            for g in &alphabet {
                let mut v: Vec<Generator> = w.clone();
                v.push(*g);
                next.push(v);
            }
        }
        out.extend(next.iter().map(|v| SurfaceBraidWord::new(2, v.clone()).unwrap()));
        layer = next;
    }
    out
}

fn symmetric(word: &ClosedSurfaceWord) -> ClosedSurfaceWord {
    let letters = word
        .letters()
        .iter()
        .map(|g| {
            let kind = match g.kind {
                Kind::A => Kind::B,
                Kind::B => Kind::A,
                k => k.flip(),
            };
            Generator { kind, index: g.index }
        })
        .collect();
    ClosedSurfaceWord::new(SurfaceBraidWord::new(word.closure_strands(), letters).unwrap())
}

/// Representative of the class of a literal 2-strand normal form.
pub fn class_of(normal_form: &ClosedSurfaceWord) -> (ClosedSurfaceWord, Route) {
    let has = |w: &ClosedSurfaceWord, k: Kind| w.letters().iter().any(|g| g.kind == k);
    if normal_form.letters().len() == 1 && normal_form.letters()[0] != Generator::c(1) {
        return (sphere_class(), Route::Destabilization);
    }
    let (form, mirrored) = if has(normal_form, Kind::B) && !has(normal_form, Kind::A) {
        (counting_form(&symmetric(normal_form)), true)
    } else {
        (normal_form.clone(), false)
    };
    if mirrored {
        (form, Route::Symmetry)
    } else {
        (form, Route::Direct)
    }
}

fn sphere_class() -> ClosedSurfaceWord {
    parse_closed("[c1]_2").unwrap()
}

/// The six representatives in the order they are listed in reports.
pub fn six_types() -> Vec<ClosedSurfaceWord> {
    ["[]_2", "[c1]_2", "[a1 c1]_2", "[a1 C1]_2", "[a1 b1]_2", "[a1 b1 c1]_2"]
        .iter()
        .map(|t| parse_closed(t).unwrap())
        .collect()
}

#[derive(Debug, Clone)]
enum Membership {
    Member { form: ClosedSurfaceWord, certified: bool },
    NonMember,
    Undecided,
}

fn classify_word(word: &SurfaceBraidWord, cache: &mut CsbCache) -> Membership {
    match normalize_csb2_certified(&ClosedSurfaceWord::new(word.clone())) {
        Ok((form, cert)) => Membership::Member { form, certified: replay_certificate(&cert, cache).is_ok() },
        Err(NormalizeError::NotCsb { plus, minus, .. }) if plus == "Unknown" || minus == "Unknown" => {
            if plus == "NonTrivial" || minus == "NonTrivial" {
                Membership::NonMember
            } else {
                Membership::Undecided
            }
        }
        Err(_) => Membership::NonMember,
    }
}

fn certify(from: &ClosedSurfaceWord, to: &ClosedSurfaceWord, cache: &mut CsbCache) -> Option<usize> {
    let mut cfg = SearchConfig::for_words(from.letters().len(), to.letters().len());
    cfg.max_expansions = 20_000;
    cfg.strictness = Strictness::Strict;
    match equiv_search_with_cache(from, to, &cfg, cache) {
        SearchOutcome::Found(c) => Some(c.steps.len()),
        SearchOutcome::Unknown { .. } => None,
    }
}

/// Enumerate all 2-strand words up to `max_length`, keep the certified CSB
/// members and sort them into classes.
pub fn enumerate_csb2(max_length: usize) -> ClassificationReport {
    let words = enumerate_words2(max_length);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    let chunk = words.len().div_ceil(threads).max(1);
    let results: Vec<Membership> = std::thread::scope(|s| {
        let handles: Vec<_> = words
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    let mut cache = CsbCache::default();
                    part.iter().map(|w| classify_word(w, &mut cache)).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("classification worker panicked")).collect()
    });

    let mut report = ClassificationReport {
        max_length,
        words_enumerated: words.len(),
        csb_members: 0,
        non_members: 0,
        undecided: 0,
        classes: Vec::new(),
        routes: Vec::new(),
        certified_members: 0,
        uncertified: Vec::new(),
        unverified_pairs: Vec::new(),
    };
    let mut per_form: BTreeMap<ClosedSurfaceWord, usize> = BTreeMap::new();
    for (word, r) in words.iter().zip(results) {
        match r {
            Membership::Member { form, certified } => {
                report.csb_members += 1;
                if certified {
                    report.certified_members += 1;
                } else {
                    report.uncertified.push(ClosedSurfaceWord::new(word.clone()).to_string());
                }
                *per_form.entry(form).or_default() += 1;
            }
            Membership::NonMember => report.non_members += 1,
            Membership::Undecided => report.undecided += 1,
        }
    }

    let mut per_class: BTreeMap<ClosedSurfaceWord, usize> = BTreeMap::new();
    let mut cache = CsbCache::default();
    for (form, count) in &per_form {
        let (class, route) = class_of(form);
        *per_class.entry(class.clone()).or_default() += count;
        if route != Route::Direct {
            let certificate_steps = match route {
                Route::Destabilization => certify(form, &class, &mut cache),
                _ => None,
            };
            report.routes.push(RouteEntry {
                form: form.to_string(),
                class: class.to_string(),
                route,
                members: *count,
                certificate_steps,
            });
        }
    }
    for rep in six_types() {
        if let Some(&members) = per_class.get(&rep) {
            report.classes.push(ClassEntry { normal_form: rep.to_string(), members, invariants: surface_invariants(&rep) });
        }
    }
    // Anything outside the six is reported as its own class.
    for (rep, &members) in &per_class {
        if !six_types().contains(rep) {
            report.classes.push(ClassEntry { normal_form: rep.to_string(), members, invariants: surface_invariants(rep) });
        }
    }
    let signature = |c: &ClassEntry| {
        let i = &c.invariants;
        (i.euler_characteristic, i.components_plus, i.components_minus, i.saddle_count % 2)
    };
    for (x, a) in report.classes.iter().enumerate() {
        for b in &report.classes[x + 1..] {
            if signature(a) == signature(b) {
                report.unverified_pairs.push((a.normal_form.clone(), b.normal_form.clone()));
            }
        }
    }
    report
}

/// `[a_2 c_1^{-k} b_2 c_1^k Δ_3^4]_3`, the 3-strand words of `τ²(T(2,k))`.
pub fn index3_family(k: usize) -> Result<ClosedSurfaceWord, WordError> {
    if k < 3 || k % 2 == 0 {
        return Err(WordError::Syntax { pos: 0, msg: format!("index3_family needs an odd k >= 3, got {k}") });
    }
    parse_closed(&format!("[a2 C1^{k} b2 c1^{k} delta(3,1)^4]_3"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_words2(0).len(), 1);
        assert_eq!(enumerate_words2(2).len(), 1 + 4 + 16);
    }

    #[test]
    fn length_zero_is_one_class() {
        let r = enumerate_csb2(0);
        assert_eq!(r.normal_forms(), vec!["[]_2"]);
        assert_eq!(r.csb_members, 1);
    }

    #[test]
    fn routes() {
        let c = |t: &str| class_of(&parse_closed(t).unwrap());
        assert_eq!(c("[a1]_2"), (sphere_class(), Route::Destabilization));
        assert_eq!(c("[b1]_2"), (sphere_class(), Route::Destabilization));
        assert_eq!(c("[b1 c1]_2"), (parse_closed("[a1 C1]_2").unwrap(), Route::Symmetry));
        assert_eq!(c("[a1 b1 c1]_2"), (parse_closed("[a1 b1 c1]_2").unwrap(), Route::Direct));
        assert_eq!(c("[c1]_2").1, Route::Direct);
    }

    #[test]
    fn symmetry_preserves_invariants() {
        for t in ["[b1 c1]_2", "[b1 C1]_2", "[b1]_2", "[a1 b1 c1]_2"] {
            let w = parse_closed(t).unwrap();
            let s = symmetric(&w);
            let (x, y) = (surface_invariants(&w), surface_invariants(&s));
            assert_eq!(x.euler_characteristic, y.euler_characteristic);
            assert_eq!((x.components_plus, x.components_minus), (y.components_minus, y.components_plus));
        }
    }

    #[test]
    fn index3_words() {
        assert_eq!(index3_family(3).unwrap().letters().len(), 20);
        assert_eq!(index3_family(5).unwrap().letters().len(), 24);
        assert!(index3_family(4).is_err());
    }
}
