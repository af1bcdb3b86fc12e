//! Inverse automata with basepoint: flower construction, folding, trimming,
//! core/tail split, products, isomorphism, bases, conjugation, intersection,
//! and the edge-substitution pipeline for endomorphisms.

use crate::error::{Error, Result};
use crate::words::{free_reduce, Alphabet, EndomorphismSpec, Letter, ReducedWord, Word};
use std::collections::{HashMap, HashSet, VecDeque};

/// Whether a subgroup has finite index in the ambient free group, and if so
/// which. Finite index equals the state count of a complete automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupIndex {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for SubgroupIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubgroupIndex::Finite(n) => write!(f, "{n}"),
            SubgroupIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// Merges states during folding. The smaller canonical index survives a
/// merge, which keeps basepoints stable until the final renumbering.
#[derive(Clone, Debug)]
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `(winner, loser)`, or `None` if already merged.
    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return None;
        }
        let (winner, loser) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[loser] = winner;
        Some((winner, loser))
    }
}

/// An involutive automaton that may violate determinism: the raw material
/// for folding. Each stored edge is positive and implicitly carries its
/// inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiAutomaton {
    alphabet: Alphabet,
    state_count: usize,
    basepoint: usize,
    edges: Vec<(usize, usize, usize)>,
}

impl MultiAutomaton {
    pub fn new(
        alphabet: Alphabet,
        state_count: usize,
        basepoint: usize,
        edges: Vec<(usize, usize, usize)>,
    ) -> Result<Self> {
        if basepoint >= state_count {
            return Err(Error::InvalidAutomaton("basepoint out of range".into()));
        }
        for &(s, g, t) in &edges {
            if s >= state_count || t >= state_count {
                return Err(Error::InvalidAutomaton("edge endpoint out of range".into()));
            }
            if g >= alphabet.len() {
                return Err(Error::InvalidAutomaton("edge label out of range".into()));
            }
        }
        Ok(MultiAutomaton { alphabet, state_count, basepoint, edges })
    }

    /// The flower automaton: one basepoint and one simple cycle per
    /// generator through fresh states. Generators reducing to the empty word
    /// are dropped.
    pub fn flower(alphabet: Alphabet, generators: &[ReducedWord]) -> Result<Self> {
        let mut edges = Vec::new();
        let mut state_count = 1;
        for gen in generators {
            if gen.is_empty() {
                continue;
            }
            for letter in gen.letters() {
                if letter.generator() >= alphabet.len() {
                    return Err(Error::AlphabetMismatch);
                }
            }
            let len = gen.len();
            let mut current = 0;
            for (i, letter) in gen.letters().iter().enumerate() {
                let next = if i + 1 == len {
                    0
                } else {
                    state_count += 1;
                    state_count - 1
                };
                if letter.is_inverse() {
                    edges.push((next, letter.generator(), current));
                } else {
                    edges.push((current, letter.generator(), next));
                }
                current = next;
            }
        }
        Ok(MultiAutomaton { alphabet, state_count, basepoint: 0, edges })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }
}

/// A connected involutive labeled graph that is deterministic and
/// co-deterministic, without a distinguished basepoint. `fwd[q][g]` is the
/// target of the positive `g`-edge leaving `q`; `bwd[q][g]` is its source
/// counterpart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    fwd: Vec<Vec<Option<usize>>>,
    bwd: Vec<Vec<Option<usize>>>,
}

impl LabeledGraph {
    fn with_states(alphabet: Alphabet, n: usize) -> Self {
        let k = alphabet.len();
        LabeledGraph {
            alphabet,
            fwd: vec![vec![None; k]; n],
            bwd: vec![vec![None; k]; n],
        }
    }

    fn add_edge(&mut self, s: usize, g: usize, t: usize) -> Result<()> {
        if self.fwd[s][g].is_some_and(|old| old != t) {
            return Err(Error::InvalidAutomaton(format!(
                "two distinct `{}`-edges leave state {s}",
                self.alphabet.name(g)
            )));
        }
        if self.bwd[t][g].is_some_and(|old| old != s) {
            return Err(Error::InvalidAutomaton(format!(
                "two distinct `{}`-edges enter state {t}",
                self.alphabet.name(g)
            )));
        }
        self.fwd[s][g] = Some(t);
        self.bwd[t][g] = Some(s);
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.fwd.len()
    }

    /// Follows one letter: positive letters along `fwd`, negative along `bwd`.
    pub fn step(&self, q: usize, letter: Letter) -> Option<usize> {
        if letter.is_inverse() {
            self.bwd[q][letter.generator()]
        } else {
            self.fwd[q][letter.generator()]
        }
    }

    /// Number of incident edge ends at `q`; a loop contributes two.
    pub fn degree(&self, q: usize) -> usize {
        let defined = |slots: &[Option<usize>]| slots.iter().flatten().count();
        defined(&self.fwd[q]) + defined(&self.bwd[q])
    }

    /// Positive edges in `(source, generator, target)` order.
    pub fn positive_edges(&self) -> Vec<(usize, usize, usize)> {
        let mut edges = Vec::new();
        for (s, slots) in self.fwd.iter().enumerate() {
            for (g, t) in slots.iter().enumerate() {
                if let Some(t) = t {
                    edges.push((s, g, *t));
                }
            }
        }
        edges
    }

    pub fn positive_edge_count(&self) -> usize {
        self.fwd.iter().map(|slots| slots.iter().flatten().count()).sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.state_count();
        if n == 0 {
            return true;
        }
        let letters: Vec<Letter> = self.alphabet.letters().collect();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(q) = queue.pop_front() {
            for &letter in &letters {
                if let Some(t) = self.step(q, letter) {
                    if !seen[t] {
                        seen[t] = true;
                        count += 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        count == n
    }

    /// Rank of the free fundamental group of a connected graph:
    /// `(#positive edges) − (#vertices) + 1`.
    pub fn rank(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.positive_edge_count() + 1 - self.state_count())
    }

    /// The label-preserving bijection forced by mapping `anchor` to
    /// `image`, if it extends to one.
    pub fn anchored_isomorphism(
        &self,
        other: &LabeledGraph,
        anchor: usize,
        image: usize,
    ) -> Option<Vec<usize>> {
        if self.alphabet != other.alphabet || self.state_count() != other.state_count() {
            return None;
        }
        let n = self.state_count();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[anchor] = image;
        used[image] = true;
        let mut queue = VecDeque::from([anchor]);
        let letters: Vec<Letter> = self.alphabet.letters().collect();
        while let Some(u) = queue.pop_front() {
            let v = map[u];
            for &letter in &letters {
                match (self.step(u, letter), other.step(v, letter)) {
                    (None, None) => {}
                    (Some(u2), Some(v2)) => {
                        if map[u2] == usize::MAX {
                            if used[v2] {
                                return None;
                            }
                            map[u2] = v2;
                            used[v2] = true;
                            queue.push_back(u2);
                        } else if map[u2] != v2 {
                            return None;
                        }
                    }
                    _ => return None,
                }
            }
        }
        if map.contains(&usize::MAX) {
            // self was not connected; the match is only partial
            return None;
        }
        Some(map)
    }

    /// A label-preserving isomorphism onto `other`, if one exists. The
    /// deterministic labeled structure makes the anchored extension forced,
    /// so the search tries each image of vertex 0 only.
    pub fn isomorphic_to(&self, other: &LabeledGraph) -> Option<Vec<usize>> {
        if self.state_count() != other.state_count()
            || self.positive_edge_count() != other.positive_edge_count()
        {
            return None;
        }
        if self.state_count() == 0 {
            return Some(Vec::new());
        }
        (0..other.state_count())
            .find_map(|image| self.anchored_isomorphism(other, 0, image))
    }

    /// An automorphism taking `p` to `q`, if one exists.
    pub fn automorphism_taking(&self, p: usize, q: usize) -> Option<Vec<usize>> {
        self.anchored_isomorphism(self, p, q)
    }
}

/// The core of a nontrivial automaton together with the tail word that
/// connects the basepoint to it. `entry` is the core vertex the tail
/// attaches to (the basepoint itself when the tail is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreTail {
    pub core: LabeledGraph,
    pub tail: ReducedWord,
    pub entry: usize,
}

/// A deterministic, co-deterministic, connected involutive automaton with a
/// basepoint. Values are always in canonical form: states are renumbered
/// breadth-first from the basepoint with edges explored in alphabet order,
/// positive before negative. Equality therefore coincides with based
/// isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseAutomaton {
    graph: LabeledGraph,
    basepoint: usize,
}

impl InverseAutomaton {
    /// Validates raw automaton data (determinism, co-determinism,
    /// connectivity) and brings it to canonical form.
    pub fn from_parts(
        alphabet: Alphabet,
        state_count: usize,
        basepoint: usize,
        edges: &[(usize, usize, usize)],
    ) -> Result<Self> {
        if state_count == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        if basepoint >= state_count {
            return Err(Error::InvalidAutomaton("basepoint out of range".into()));
        }
        let mut graph = LabeledGraph::with_states(alphabet.clone(), state_count);
        for &(s, g, t) in edges {
            if s >= state_count || t >= state_count {
                return Err(Error::InvalidAutomaton("edge endpoint out of range".into()));
            }
            if g >= alphabet.len() {
                return Err(Error::InvalidAutomaton("edge label out of range".into()));
            }
            graph.add_edge(s, g, t)?;
        }
        if !graph.is_connected() {
            return Err(Error::InvalidAutomaton("automaton is not connected".into()));
        }
        Ok(Self::canonicalize(&graph, basepoint))
    }

    /// Renumbers states breadth-first from the basepoint, edges explored in
    /// alphabet order with positive before negative. The result is the
    /// unique canonical representative of the based isomorphism class.
    fn canonicalize(graph: &LabeledGraph, basepoint: usize) -> Self {
        let n = graph.state_count();
        let letters: Vec<Letter> = graph.alphabet.letters().collect();
        let mut order = vec![usize::MAX; n];
        let mut visited = 0;
        let mut queue = VecDeque::from([basepoint]);
        order[basepoint] = 0;
        let mut discovered = vec![basepoint];
        while let Some(q) = queue.pop_front() {
            visited += 1;
            for &letter in &letters {
                if let Some(t) = graph.step(q, letter) {
                    if order[t] == usize::MAX {
                        order[t] = discovered.len();
                        discovered.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        assert_eq!(visited, n, "canonicalize requires a connected graph");
        let mut out = LabeledGraph::with_states(graph.alphabet.clone(), n);
        for (s, g, t) in graph.positive_edges() {
            out.add_edge(order[s], g, order[t]).expect("relabeling preserves validity");
        }
        InverseAutomaton { graph: out, basepoint: 0 }
    }

    /// Folds an involutive automaton to its deterministic, co-deterministic
    /// quotient. Union-find over states with a worklist of conflicting edge
    /// slots; the result does not depend on the merge order.
    pub fn fold(m: &MultiAutomaton) -> Self {
        let n = m.state_count();
        let mut uf = UnionFind::new(n);
        // slot key: (generator, outgoing?) where `outgoing` marks the
        // positive direction. Each installed edge occupies one slot at each
        // endpoint.
        let mut slots: Vec<HashMap<(usize, bool), usize>> = vec![HashMap::new(); n];
        let mut queue: VecDeque<(usize, usize, usize)> = m.edges().iter().copied().collect();
        while let Some((s, g, t)) = queue.pop_front() {
            let s = uf.find(s);
            let t = uf.find(t);
            let fwd = slots[s].get(&(g, true)).copied().map(|x| uf.find(x));
            if let Some(t2) = fwd {
                if t2 != t {
                    if let Some((_, loser)) = uf.union(t2, t) {
                        let drained = std::mem::take(&mut slots[loser]);
                        for ((g2, out), x) in drained {
                            if out {
                                queue.push_back((loser, g2, x));
                            } else {
                                queue.push_back((x, g2, loser));
                            }
                        }
                    }
                    queue.push_back((s, g, t));
                    continue;
                }
            }
            let bwd = slots[t].get(&(g, false)).copied().map(|x| uf.find(x));
            if let Some(s2) = bwd {
                if s2 != s {
                    if let Some((_, loser)) = uf.union(s2, s) {
                        let drained = std::mem::take(&mut slots[loser]);
                        for ((g2, out), x) in drained {
                            if out {
                                queue.push_back((loser, g2, x));
                            } else {
                                queue.push_back((x, g2, loser));
                            }
                        }
                    }
                    queue.push_back((s, g, t));
                    continue;
                }
            }
            if fwd.is_none() {
                slots[s].insert((g, true), t);
            }
            if bwd.is_none() {
                slots[t].insert((g, false), s);
            }
        }
        let mut id = vec![usize::MAX; n];
        let mut reps = 0;
        for (q, slot) in id.iter_mut().enumerate() {
            if uf.find(q) == q {
                *slot = reps;
                reps += 1;
            }
        }
        let mut graph = LabeledGraph::with_states(m.alphabet().clone(), reps);
        for q in 0..n {
            if uf.find(q) != q {
                continue;
            }
            let outgoing: Vec<(usize, usize)> = slots[q]
                .iter()
                .filter(|((_, out), _)| *out)
                .map(|(&(g, _), &t)| (g, t))
                .collect();
            for (g, t) in outgoing {
                let t = uf.find(t);
                graph
                    .add_edge(id[q], g, id[t])
                    .expect("folding leaves a deterministic automaton");
            }
        }
        Self::canonicalize(&graph, id[uf.find(m.basepoint())])
    }

    /// Removes non-basepoint states of total degree at most one, cascading
    /// to a fixpoint. The reduced loop language at the basepoint is
    /// unchanged.
    pub fn trim(&self) -> Self {
        let n = self.graph.state_count();
        let k = self.graph.alphabet.len();
        let mut fwd = self.graph.fwd.clone();
        let mut bwd = self.graph.bwd.clone();
        let mut alive = vec![true; n];
        let degree = |fwd: &Vec<Vec<Option<usize>>>, bwd: &Vec<Vec<Option<usize>>>, q: usize| {
            fwd[q].iter().flatten().count() + bwd[q].iter().flatten().count()
        };
        let mut queue: VecDeque<usize> = (0..n)
            .filter(|&q| q != self.basepoint && degree(&fwd, &bwd, q) <= 1)
            .collect();
        while let Some(q) = queue.pop_front() {
            if !alive[q] || q == self.basepoint || degree(&fwd, &bwd, q) > 1 {
                continue;
            }
            alive[q] = false;
            for g in 0..k {
                if let Some(t) = fwd[q][g].take() {
                    bwd[t][g] = None;
                    if t != self.basepoint && alive[t] && degree(&fwd, &bwd, t) <= 1 {
                        queue.push_back(t);
                    }
                }
                if let Some(p) = bwd[q][g].take() {
                    fwd[p][g] = None;
                    if p != self.basepoint && alive[p] && degree(&fwd, &bwd, p) <= 1 {
                        queue.push_back(p);
                    }
                }
            }
        }
        let mut id = vec![usize::MAX; n];
        let mut count = 0;
        for q in 0..n {
            if alive[q] {
                id[q] = count;
                count += 1;
            }
        }
        let mut graph = LabeledGraph::with_states(self.graph.alphabet.clone(), count);
        for q in 0..n {
            if !alive[q] {
                continue;
            }
            for (g, target) in fwd[q].iter().enumerate() {
                if let Some(t) = target {
                    graph.add_edge(id[q], g, id[*t]).expect("trim preserves validity");
                }
            }
        }
        Self::canonicalize(&graph, id[self.basepoint])
    }

    /// The Stallings automaton of the subgroup generated by `generators`:
    /// flower, then fold, then trim. The result is canonical and does not
    /// depend on the generating set chosen for the subgroup.
    pub fn stallings(alphabet: Alphabet, generators: &[ReducedWord]) -> Result<Self> {
        let flower = MultiAutomaton::flower(alphabet, generators)?;
        Ok(Self::fold(&flower).trim())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.graph.alphabet
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn state_count(&self) -> usize {
        self.graph.state_count()
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn positive_edges(&self) -> Vec<(usize, usize, usize)> {
        self.graph.positive_edges()
    }

    /// One state and no edges: the subgroup is trivial.
    pub fn is_trivial(&self) -> bool {
        self.state_count() == 1 && self.graph.positive_edge_count() == 0
    }

    /// One state with a loop for every generator: the subgroup is the whole
    /// free group.
    pub fn is_full(&self) -> bool {
        self.state_count() == 1 && self.is_complete()
    }

    /// Every `(state, generator)` transition defined.
    pub fn is_complete(&self) -> bool {
        self.graph.fwd.iter().all(|slots| slots.iter().all(Option::is_some))
    }

    /// No non-basepoint state of total degree at most one. Constructors
    /// other than [`InverseAutomaton::from_parts`] and
    /// [`InverseAutomaton::fold`] always return trim automata.
    pub fn is_trim(&self) -> bool {
        (0..self.state_count())
            .all(|q| q == self.basepoint || self.graph.degree(q) >= 2)
    }

    /// Reads `letters` from `q`, positive letters along edges and negative
    /// letters against them; `None` as soon as a step is missing.
    pub fn run(&self, q: usize, letters: &[Letter]) -> Option<usize> {
        letters
            .iter()
            .try_fold(q, |state, &letter| self.graph.step(state, letter))
    }

    /// Membership test: `w` lies in the subgroup exactly when its reduction
    /// labels a loop at the basepoint.
    pub fn member(&self, w: &Word) -> bool {
        let reduced = free_reduce(w);
        self.run(self.basepoint, reduced.letters()) == Some(self.basepoint)
    }

    pub fn member_reduced(&self, w: &ReducedWord) -> bool {
        self.run(self.basepoint, w.letters()) == Some(self.basepoint)
    }

    /// The index of the subgroup: the state count when the automaton is
    /// complete, infinite otherwise.
    pub fn index(&self) -> SubgroupIndex {
        if self.is_complete() {
            SubgroupIndex::Finite(self.state_count())
        } else {
            SubgroupIndex::Infinite
        }
    }

    /// Rank of the subgroup.
    pub fn rank(&self) -> usize {
        self.graph.positive_edge_count() + 1 - self.state_count()
    }

    /// A free basis of the subgroup: one reduced word per positive edge
    /// outside a breadth-first spanning tree. Rebuilding the automaton from
    /// the basis recovers it exactly.
    pub fn basis(&self) -> Vec<ReducedWord> {
        let n = self.state_count();
        let letters: Vec<Letter> = self.graph.alphabet.letters().collect();
        let mut path: Vec<Option<Word>> = vec![None; n];
        path[self.basepoint] = Some(Word::empty());
        let mut tree: HashSet<(usize, usize, usize)> = HashSet::new();
        let mut queue = VecDeque::from([self.basepoint]);
        while let Some(q) = queue.pop_front() {
            for &letter in &letters {
                if let Some(t) = self.graph.step(q, letter) {
                    if path[t].is_none() {
                        let mut w = path[q].clone().expect("visited state has a path");
                        w = Word::new([w.letters(), &[letter]].concat());
                        path[t] = Some(w);
                        if letter.is_inverse() {
                            tree.insert((t, letter.generator(), q));
                        } else {
                            tree.insert((q, letter.generator(), t));
                        }
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut basis = Vec::new();
        for (s, g, t) in self.graph.positive_edges() {
            if tree.contains(&(s, g, t)) {
                continue;
            }
            let mut w = path[s].clone().expect("connected automaton").letters().to_vec();
            w.push(Letter::positive(g));
            w.extend(path[t].clone().expect("connected automaton").invert().letters());
            basis.push(free_reduce(&Word::new(w)));
        }
        basis
    }

    /// Splits the automaton into its core (the maximal subgraph without
    /// degree-one vertices) and the tail word leading from the basepoint
    /// into it. Fails for the trivial subgroup, which has no core, and for
    /// untrimmed automata, where the split is not defined.
    pub fn core_and_tail(&self) -> Result<CoreTail> {
        if self.graph.positive_edge_count() == 0 {
            return Err(Error::TrivialSubgroup);
        }
        if (0..self.state_count())
            .any(|q| q != self.basepoint && self.graph.degree(q) <= 1)
        {
            return Err(Error::Precondition(
                "non-basepoint vertex of degree one; trim the automaton first".into(),
            ));
        }
        let letters: Vec<Letter> = self.graph.alphabet.letters().collect();
        let mut tail_letters = Vec::new();
        let mut removed = vec![false; self.state_count()];
        let mut current = self.basepoint;
        while self.graph.degree(current) == 1 && !removed[current] {
            // only the basepoint can start a tail; later vertices on the
            // path have degree 2 until the core entry
            let (letter, next) = letters
                .iter()
                .find_map(|&l| self.graph.step(current, l).map(|t| (l, t)))
                .expect("degree-one vertex has an edge");
            removed[current] = true;
            tail_letters.push(letter);
            current = next;
            while !removed[current] && self.graph.degree(current) == 2 {
                let back = tail_letters.last().expect("tail nonempty").inverse();
                let step = letters.iter().find_map(|&l| {
                    if l == back {
                        None
                    } else {
                        self.graph.step(current, l).map(|t| (l, t))
                    }
                });
                match step {
                    Some((l, t)) => {
                        removed[current] = true;
                        tail_letters.push(l);
                        current = t;
                    }
                    None => break,
                }
            }
        }
        let entry_old = current;
        let mut id = vec![usize::MAX; self.state_count()];
        let mut count = 0;
        for q in 0..self.state_count() {
            if !removed[q] {
                id[q] = count;
                count += 1;
            }
        }
        let mut core = LabeledGraph::with_states(self.graph.alphabet.clone(), count);
        for (s, g, t) in self.graph.positive_edges() {
            if !removed[s] && !removed[t] {
                core.add_edge(id[s], g, id[t]).expect("core edges stay valid");
            }
        }
        let tail = free_reduce(&Word::new(tail_letters));
        Ok(CoreTail { core, tail, entry: id[entry_old] })
    }

    /// The automaton of the conjugate subgroup `w·K·w⁻¹`, computed through
    /// a basis of `K`.
    pub fn conjugate(&self, w: &ReducedWord) -> Self {
        let gens: Vec<ReducedWord> = self.basis().iter().map(|g| g.conjugate_by(w)).collect();
        Self::stallings(self.graph.alphabet.clone(), &gens)
            .expect("conjugated basis stays over the same alphabet")
    }

    /// Direct product with `other` over state pairs, with a transition
    /// defined exactly when both factors define it.
    pub fn product(&self, other: &InverseAutomaton) -> Result<ProductAutomaton> {
        if self.graph.alphabet != other.graph.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        ProductAutomaton::build(self, other)
    }

    /// The intersection automaton: the trimmed component of the basepoint
    /// pair in the product.
    pub fn intersect(&self, other: &InverseAutomaton) -> Result<InverseAutomaton> {
        let product = self.product(other)?;
        let component = product.component_of(self.basepoint, other.basepoint);
        let base = component.local_index(self.basepoint, other.basepoint)
            .expect("basepoint pair lies in its component");
        let raw = InverseAutomaton { graph: component.graph.clone(), basepoint: base };
        Ok(Self::canonicalize(&raw.graph, raw.basepoint).trim())
    }

    /// Applies an endomorphism to the subgroup at the automaton level:
    /// every positive edge is replaced by the path spelling the image of
    /// its label, then the result is folded and trimmed. A letter image
    /// reducing to the empty word contracts its edges (the replacement path
    /// is empty), an extension of the construction beyond injective
    /// endomorphisms.
    pub fn apply_endo(&self, e: &EndomorphismSpec) -> Result<InverseAutomaton> {
        if e.alphabet() != &self.graph.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let n = self.state_count();
        let mut uf = UnionFind::new(n);
        for (s, g, t) in self.graph.positive_edges() {
            if e.image(g).is_empty() {
                uf.union(s, t);
            }
        }
        let mut next_state = n;
        let mut edges = Vec::new();
        for (s, g, t) in self.graph.positive_edges() {
            let image = e.image(g);
            if image.is_empty() {
                continue;
            }
            let s = uf.find(s);
            let t = uf.find(t);
            let mut current = s;
            let len = image.len();
            for (i, letter) in image.letters().iter().enumerate() {
                let next = if i + 1 == len {
                    t
                } else {
                    next_state += 1;
                    next_state - 1
                };
                if letter.is_inverse() {
                    edges.push((next, letter.generator(), current));
                } else {
                    edges.push((current, letter.generator(), next));
                }
                current = next;
            }
        }
        let mut id = vec![usize::MAX; next_state];
        let mut count = 0;
        for q in 0..next_state {
            let rep = if q < n { uf.find(q) } else { q };
            if id[rep] == usize::MAX {
                id[rep] = count;
                count += 1;
            }
            id[q] = id[rep];
        }
        let edges = edges.iter().map(|&(s, g, t)| (id[s], g, id[t])).collect();
        let m = MultiAutomaton::new(self.graph.alphabet.clone(), count, id[uf.find(self.basepoint)], edges)?;
        Ok(Self::fold(&m).trim())
    }

    /// Whether `self` and `other` present conjugate subgroups, and a word
    /// `w` with `w·H·w⁻¹ = K` when they do (`self` presents `H`). Trivial
    /// subgroups are conjugate only to each other, with witness `1`.
    pub fn conjugacy_witness(&self, other: &InverseAutomaton) -> Option<ReducedWord> {
        if self.graph.alphabet != other.graph.alphabet {
            return None;
        }
        if !self.is_trim() || !other.is_trim() {
            // trimming leaves the presented subgroup unchanged
            return self.trim().conjugacy_witness(&other.trim());
        }
        match (self.is_trivial(), other.is_trivial()) {
            (true, true) => return Some(ReducedWord::empty()),
            (true, false) | (false, true) => return None,
            _ => {}
        }
        let h = self.core_and_tail().expect("nontrivial and trim");
        let k = other.core_and_tail().expect("nontrivial and trim");
        let iso = h.core.isomorphic_to(&k.core)?;
        // K = w·H·w⁻¹ with w = tail(K) · path(entry(K) → iso(entry(H))) · tail(H)⁻¹
        let target = iso[h.entry];
        let path = path_word_in_graph(&k.core, k.entry, target)?;
        Some(k.tail.mul(&path).mul(&h.tail.invert()))
    }
}

/// Label of some path between two vertices of a connected graph.
fn path_word_in_graph(graph: &LabeledGraph, from: usize, to: usize) -> Option<ReducedWord> {
    let n = graph.state_count();
    let letters: Vec<Letter> = graph.alphabet().letters().collect();
    let mut prev: Vec<Option<(usize, Letter)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(q) = queue.pop_front() {
        if q == to {
            break;
        }
        for &letter in &letters {
            if let Some(t) = graph.step(q, letter) {
                if !seen[t] {
                    seen[t] = true;
                    prev[t] = Some((q, letter));
                    queue.push_back(t);
                }
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut letters_rev = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, l) = prev[cur].expect("path reconstruction");
        letters_rev.push(l);
        cur = p;
    }
    letters_rev.reverse();
    Some(free_reduce(&Word::new(letters_rev)))
}

/// One connected component of a product automaton.
#[derive(Clone, Debug)]
pub struct ProductComponent {
    graph: LabeledGraph,
    pairs: Vec<(usize, usize)>,
}

impl ProductComponent {
    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    /// The state pairs of this component, indexed by local state id.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn local_index(&self, p: usize, q: usize) -> Option<usize> {
        self.pairs.iter().position(|&pair| pair == (p, q))
    }

    /// Whether the component contains a diagonal pair.
    pub fn is_diagonal(&self) -> bool {
        self.pairs.iter().any(|&(p, q)| p == q)
    }

    pub fn rank(&self) -> usize {
        self.graph.rank().expect("components are connected")
    }
}

/// The product of two inverse automata, partitioned into connected
/// components over the full set of state pairs.
#[derive(Clone, Debug)]
pub struct ProductAutomaton {
    components: Vec<ProductComponent>,
    component_index: Vec<Vec<usize>>,
}

impl ProductAutomaton {
    fn build(a: &InverseAutomaton, b: &InverseAutomaton) -> Result<Self> {
        let (n1, n2) = (a.state_count(), b.state_count());
        let letters: Vec<Letter> = a.alphabet().letters().collect();
        let mut component_index = vec![vec![usize::MAX; n2]; n1];
        let mut components = Vec::new();
        let square = a == b;
        for p0 in 0..n1 {
            for q0 in 0..n2 {
                if component_index[p0][q0] != usize::MAX {
                    continue;
                }
                let comp_id = components.len();
                let mut pairs = vec![(p0, q0)];
                component_index[p0][q0] = comp_id;
                let mut local: HashMap<(usize, usize), usize> = HashMap::from([((p0, q0), 0)]);
                let mut queue = VecDeque::from([(p0, q0)]);
                while let Some((p, q)) = queue.pop_front() {
                    for &letter in &letters {
                        if let (Some(p2), Some(q2)) =
                            (a.graph.step(p, letter), b.graph.step(q, letter))
                        {
                            if component_index[p2][q2] == usize::MAX {
                                component_index[p2][q2] = comp_id;
                                local.insert((p2, q2), pairs.len());
                                pairs.push((p2, q2));
                                queue.push_back((p2, q2));
                            }
                        }
                    }
                }
                let mut graph = LabeledGraph::with_states(a.alphabet().clone(), pairs.len());
                for (i, &(p, q)) in pairs.iter().enumerate() {
                    for g in 0..a.alphabet().len() {
                        if let (Some(p2), Some(q2)) = (a.graph.fwd[p][g], b.graph.fwd[q][g]) {
                            let j = local[&(p2, q2)];
                            graph.add_edge(i, g, j).expect("product transitions stay injective");
                        }
                    }
                }
                let component = ProductComponent { graph, pairs };
                if square {
                    // injectivity keeps diagonal and off-diagonal pairs apart
                    let diag = component.pairs.iter().filter(|&&(p, q)| p == q).count();
                    assert!(
                        diag == 0 || diag == component.pairs.len(),
                        "diagonal and off-diagonal pairs share a component"
                    );
                }
                components.push(component);
            }
        }
        Ok(ProductAutomaton { components, component_index })
    }

    pub fn components(&self) -> &[ProductComponent] {
        &self.components
    }

    pub fn component_of(&self, p: usize, q: usize) -> &ProductComponent {
        &self.components[self.component_index[p][q]]
    }

    /// Components containing no diagonal pair.
    pub fn off_diagonal_components(&self) -> impl Iterator<Item = &ProductComponent> {
        self.components.iter().filter(|c| !c.is_diagonal())
    }
}
