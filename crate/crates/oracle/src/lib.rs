//! Independent brute-force implementations used by the test suites to
//! validate the production algorithms. Deliberately slow; never a
//! dependency of release artifacts.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use stallings::monoid::transition_of_word;
use stallings::{
    Alphabet, InverseAutomaton, LabeledGraph, Letter, MultiAutomaton, PartialInjection,
    ReducedWord, TransitionMonoid, Word,
};

pub mod sample;

/// Bounds shared by the randomized test suites. The seed is fixed per test
/// so runs are reproducible.
#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub max_word_length: usize,
    pub max_power: u32,
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_word_length: 8, max_power: 6, sample_count: 200, seed: 0x5747 }
    }
}

/// Folds by rescanning all edges for conflicts and merging one randomly
/// chosen conflicting pair at a time, until deterministic. The result must
/// be isomorphic to the production fold whatever the random order.
pub fn naive_fold(m: &MultiAutomaton, seed: u64) -> InverseAutomaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state_count = m.state_count();
    let mut basepoint = m.basepoint();
    let mut edges: Vec<(usize, usize, usize)> = m.edges().to_vec();
    loop {
        edges.sort_unstable();
        edges.dedup();
        let mut conflicts: Vec<(usize, usize)> = Vec::new();
        for (i, &(s1, g1, t1)) in edges.iter().enumerate() {
            for &(s2, g2, t2) in &edges[i + 1..] {
                if g1 != g2 {
                    continue;
                }
                if s1 == s2 && t1 != t2 {
                    conflicts.push((t1, t2));
                }
                if t1 == t2 && s1 != s2 {
                    conflicts.push((s1, s2));
                }
            }
        }
        if conflicts.is_empty() {
            break;
        }
        let &(a, b) = conflicts.choose(&mut rng).expect("nonempty");
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        let rename = |q: usize| if q == gone { keep } else { q };
        for edge in &mut edges {
            *edge = (rename(edge.0), edge.1, rename(edge.2));
        }
        basepoint = rename(basepoint);
    }
    // compact state ids
    let mut id = vec![usize::MAX; state_count];
    let mut used: Vec<usize> = edges
        .iter()
        .flat_map(|&(s, _, t)| [s, t])
        .chain([basepoint])
        .collect();
    used.sort_unstable();
    used.dedup();
    state_count = used.len();
    for (new, &old) in used.iter().enumerate() {
        id[old] = new;
    }
    let edges: Vec<(usize, usize, usize)> =
        edges.iter().map(|&(s, g, t)| (id[s], g, id[t])).collect();
    InverseAutomaton::from_parts(m.alphabet().clone(), state_count, id[basepoint], &edges)
        .expect("a folded connected automaton is inverse")
}

/// Membership through uniqueness of the construction: adding a member to
/// the generating set leaves the automaton unchanged.
pub fn member_via_regeneration(
    alphabet: &Alphabet,
    generators: &[ReducedWord],
    w: &ReducedWord,
) -> bool {
    let base = InverseAutomaton::stallings(alphabet.clone(), generators)
        .expect("generators over the given alphabet");
    let mut extended = generators.to_vec();
    extended.push(w.clone());
    let enlarged = InverseAutomaton::stallings(alphabet.clone(), &extended)
        .expect("generators over the given alphabet");
    base == enlarged
}

/// All reduced words of length at most `max_len`, in shortlex order
/// (length first, then alphabet order with positive letters before
/// negative).
pub fn enumerate_reduced(alphabet: &Alphabet, max_len: usize) -> Vec<ReducedWord> {
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut out = vec![ReducedWord::empty()];
    let mut layer: Vec<ReducedWord> = vec![ReducedWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &letter in &letters {
                if w.letters().last().is_some_and(|l| l.cancels(&letter)) {
                    continue;
                }
                next.push(w.mul(&ReducedWord::from(letter)));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Scans all nonempty reduced words up to `max_len` for one labeling loops
/// at two distinct states. Sound, and complete up to the length bound.
pub fn malnormal_scan(aut: &InverseAutomaton, max_len: usize) -> bool {
    for w in enumerate_reduced(aut.alphabet(), max_len) {
        if w.is_empty() {
            continue;
        }
        let action = transition_of_word(aut, &Word::from(&w));
        let fixed = (0..aut.state_count())
            .filter(|&q| action.apply(q) == Some(q))
            .count();
        if fixed >= 2 {
            return false;
        }
    }
    true
}

/// Normality by definition: conjugating the basis by every generator letter
/// must reproduce the automaton.
pub fn conjugation_closure_check(aut: &InverseAutomaton) -> bool {
    let alphabet = aut.alphabet().clone();
    (0..alphabet.len()).all(|g| {
        let letter = ReducedWord::from(Letter::positive(g));
        aut.conjugate(&letter) == *aut
    })
}

/// Whether every vertex can be carried to every other by a label-preserving
/// automorphism of the graph.
pub fn vertex_transitive_check(core: &LabeledGraph) -> bool {
    let n = core.state_count();
    (0..n).all(|p| (0..n).all(|q| core.automorphism_taking(p, q).is_some()))
}

/// Whether two transition monoids that are groups of permutations are the
/// same permutation group up to a relabeling of the states.
pub fn perm_groups_equivalent(m1: &TransitionMonoid, m2: &TransitionMonoid) -> bool {
    if m1.len() != m2.len() || m1.state_count() != m2.state_count() {
        return false;
    }
    let n = m1.state_count();
    assert!(
        m1.is_group() && m2.is_group(),
        "permutation-group comparison expects groups"
    );
    if n == 0 {
        return true;
    }
    // cheap invariant first: matching multisets of cycle types
    let mut orders1 = signature(m1);
    let mut orders2 = signature(m2);
    orders1.sort_unstable();
    orders2.sort_unstable();
    if orders1 != orders2 {
        return false;
    }
    // both groups act transitively (the automata are connected), so any
    // conjugating bijection can be normalized to send state 0 to state 0
    let mut image = vec![0usize; n];
    let mut used = vec![false; n];
    image[0] = 0;
    used[0] = true;
    search(m1, m2, 1, &mut image, &mut used)
}

fn signature(m: &TransitionMonoid) -> Vec<Vec<usize>> {
    m.elements()
        .iter()
        .map(|f| {
            let mut lengths = Vec::new();
            let mut seen = vec![false; f.degree()];
            for start in 0..f.degree() {
                if seen[start] {
                    continue;
                }
                let mut len = 0;
                let mut q = start;
                while !seen[q] {
                    seen[q] = true;
                    len += 1;
                    q = f.apply(q).expect("group elements are total");
                }
                lengths.push(len);
            }
            lengths.sort_unstable();
            lengths
        })
        .collect()
}

fn search(
    m1: &TransitionMonoid,
    m2: &TransitionMonoid,
    next: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let n = image.len();
    if next == n {
        return conjugates(m1, m2, image);
    }
    for candidate in 0..n {
        if used[candidate] {
            continue;
        }
        image[next] = candidate;
        used[candidate] = true;
        if search(m1, m2, next + 1, image, used) {
            return true;
        }
        used[candidate] = false;
    }
    false
}

fn conjugates(m1: &TransitionMonoid, m2: &TransitionMonoid, image: &[usize]) -> bool {
    let n = image.len();
    let mut preimage = vec![0usize; n];
    for (q, &v) in image.iter().enumerate() {
        preimage[v] = q;
    }
    let conjugate = |f: &PartialInjection| {
        let map = (0..n)
            .map(|q| f.apply(preimage[q]).map(|t| image[t]))
            .collect();
        PartialInjection::from_map(map).expect("conjugate of a permutation")
    };
    // σ⁻¹·M1·σ = M2 holds iff it holds on generating sets, both ways
    let k = m1.letter_count();
    (0..k).all(|letter_slot| {
        let g1 = m1.element(m1.right_multiply_by_letter(m1.identity_id(), letter_of(letter_slot)));
        let g2 = m2.element(m2.right_multiply_by_letter(m2.identity_id(), letter_of(letter_slot)));
        m2.contains(&conjugate(g1)) && {
            let back = {
                let mut inv = vec![0usize; n];
                for (q, &v) in image.iter().enumerate() {
                    inv[v] = q;
                }
                let map = (0..n).map(|q| g2.apply(image[q]).map(|t| inv[t])).collect();
                PartialInjection::from_map(map).expect("conjugate of a permutation")
            };
            m1.contains(&back)
        }
    })
}

fn letter_of(slot: usize) -> Letter {
    if slot.is_multiple_of(2) {
        Letter::positive(slot / 2)
    } else {
        Letter::negative(slot / 2)
    }
}
