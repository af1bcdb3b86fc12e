//! Decision procedures for subgroup properties read off the transition
//! monoid and the product automaton: index, normality, malnormality,
//! cyclonormality, purity, Burnside and π-group conditions, group
//! identities, and automorphism detection.

use crate::automaton::{InverseAutomaton, SubgroupIndex};
use crate::error::{Error, Result};
use crate::monoid::{
    group_h_classes, idempotent_poset, GroupHClass, TransitionMonoid,
};
use crate::words::{EndomorphismSpec, Letter, ReducedWord, Word};

/// Default ceiling on monoid closures; a hard failure beats silent
/// truncation when the monoid explodes.
pub const DEFAULT_MONOID_CAP: usize = 1_000_000;

/// Normality: aside from the trivial subgroup, a subgroup is normal exactly
/// when its transition monoid is a group of size equal to the state count.
pub fn is_normal(aut: &InverseAutomaton, cap: usize) -> Result<bool> {
    if aut.is_trivial() {
        return Ok(true);
    }
    if !aut.is_complete() {
        // an incomplete automaton has a non-group monoid
        return Ok(false);
    }
    let m = TransitionMonoid::generate(aut, cap)?;
    Ok(m.is_group() && m.len() == aut.state_count())
}

/// The poset criterion for malnormality: chain length 2 and exactly
/// `|Q| + 1` reduced-realizable idempotents. Valid for proper nontrivial
/// subgroups only. Untrimmed automata are trimmed first, since the state
/// count in the criterion is that of the subgroup's automaton.
pub fn malnormal_by_poset(aut: &InverseAutomaton, cap: usize) -> Result<bool> {
    if !aut.is_trim() {
        return malnormal_by_poset(&aut.trim(), cap);
    }
    if aut.is_trivial() || aut.is_full() {
        return Err(Error::Precondition(
            "the idempotent criterion requires a proper nontrivial subgroup".into(),
        ));
    }
    let poset = idempotent_poset(aut, cap)?;
    Ok(poset.chain_length == 2 && poset.idempotents.len() == aut.state_count() + 1)
}

/// The loop criterion for malnormality: no nonempty reduced word labels a
/// loop at two distinct states, i.e. every off-diagonal component of the
/// squared automaton is a tree.
pub fn malnormal_by_product(aut: &InverseAutomaton) -> bool {
    let product = aut.product(aut).expect("same alphabet");
    let tree_like = product.off_diagonal_components().all(|c| c.rank() == 0);
    tree_like
}

/// Malnormality, decided by the product criterion and cross-checked against
/// the idempotent-poset criterion whenever the latter applies. The trivial
/// subgroup and the whole group are malnormal by vacuity.
pub fn is_malnormal(aut: &InverseAutomaton, cap: usize) -> Result<bool> {
    if !aut.is_trim() {
        return is_malnormal(&aut.trim(), cap);
    }
    let by_product = malnormal_by_product(aut);
    if !aut.is_trivial() && !aut.is_full() {
        let by_poset = malnormal_by_poset(aut, cap)?;
        if by_poset != by_product {
            return Err(Error::InternalInconsistency(format!(
                "malnormality criteria disagree: poset {by_poset}, product {by_product}"
            )));
        }
    }
    Ok(by_product)
}

/// Cyclonormality: every off-diagonal component of the squared automaton
/// has a cyclic loop group, i.e. rank at most one. One-state automata and
/// one-letter alphabets are always cyclonormal.
pub fn is_cyclonormal(aut: &InverseAutomaton) -> bool {
    if !aut.is_trim() {
        return is_cyclonormal(&aut.trim());
    }
    if aut.state_count() == 1 || aut.alphabet().len() == 1 {
        return true;
    }
    let product = aut.product(aut).expect("same alphabet");
    let cyclic = product.off_diagonal_components().all(|c| c.rank() <= 1);
    cyclic
}

/// The idempotent-poset statistics of a cyclonormal subgroup, with the
/// bound checks they must satisfy: the chain length is 2 or 3, and for
/// `|Q| = n > 2`, `|E| ≤ C(n,2) + 1` when the chain length is 2 and
/// `|E| ≤ n + C(n,2) + 1` when it is 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclonormalBounds {
    pub chain_length: usize,
    pub idempotent_count: usize,
    pub bounds_hold: bool,
}

pub fn cyclonormal_bounds(aut: &InverseAutomaton, cap: usize) -> Result<CyclonormalBounds> {
    if !aut.is_trim() {
        return cyclonormal_bounds(&aut.trim(), cap);
    }
    if aut.is_trivial() || aut.is_full() {
        return Err(Error::Precondition(
            "bounds apply to proper nontrivial subgroups".into(),
        ));
    }
    if aut.alphabet().len() < 2 {
        return Err(Error::Precondition("bounds require at least two generators".into()));
    }
    if !is_cyclonormal(aut) {
        return Err(Error::Precondition("subgroup is not cyclonormal".into()));
    }
    let poset = idempotent_poset(aut, cap)?;
    let k = poset.chain_length;
    let e = poset.idempotents.len();
    let n = aut.state_count();
    let choose2 = n * (n - 1) / 2;
    let mut ok = k == 2 || k == 3;
    if n > 2 {
        if k == 2 {
            ok &= e <= choose2 + 1;
        } else if k == 3 {
            ok &= e <= n + choose2 + 1;
        }
    }
    Ok(CyclonormalBounds { chain_length: k, idempotent_count: e, bounds_hold: ok })
}

fn aperiodic_by_h_classes(classes: &[GroupHClass]) -> bool {
    classes.iter().all(|c| c.members.len() == 1)
}

fn power(f: &crate::monoid::PartialInjection, mut n: usize) -> crate::monoid::PartialInjection {
    let mut base = f.clone();
    let mut acc = crate::monoid::PartialInjection::identity(f.degree());
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.compose(&base);
        }
        base = base.compose(&base);
        n >>= 1;
    }
    acc
}

fn aperiodic_by_powers(m: &TransitionMonoid) -> bool {
    let n = m.len();
    m.elements().iter().all(|f| {
        let stable = power(f, n);
        stable.compose(f) == stable
    })
}

/// Aperiodicity of a monoid of partial injections: every group H-class is
/// trivial, cross-checked against the power identity `f^(n+1) = f^n`.
pub fn monoid_aperiodic(m: &TransitionMonoid) -> Result<bool> {
    let by_classes = aperiodic_by_h_classes(&group_h_classes(m));
    let by_powers = aperiodic_by_powers(m);
    if by_classes != by_powers {
        return Err(Error::InternalInconsistency(format!(
            "aperiodicity criteria disagree: H-classes {by_classes}, powers {by_powers}"
        )));
    }
    Ok(by_classes)
}

/// Purity of the subgroup equals aperiodicity of its transition monoid.
pub fn is_pure(aut: &InverseAutomaton, cap: usize) -> Result<bool> {
    monoid_aperiodic(&TransitionMonoid::generate(aut, cap)?)
}

/// Whether every element order in every group H-class divides `k`.
pub fn monoid_in_bk_bar(m: &TransitionMonoid, k: u32) -> bool {
    group_h_classes(m)
        .iter()
        .all(|class| class.orders.iter().all(|&o| (k as usize).is_multiple_of(o)))
}

/// Membership of the transition monoid in the Burnside family: every
/// element order in every group H-class divides `k`. Equivalent to
/// `xⁿ ∈ K ⇒ x^gcd(k,n) ∈ K` for the subgroup.
pub fn in_bk_bar(aut: &InverseAutomaton, k: u32, cap: usize) -> Result<bool> {
    Ok(monoid_in_bk_bar(&TransitionMonoid::generate(aut, cap)?, k))
}

/// Whether `n` factors entirely over the primes in `pi`.
pub fn is_pi_number(mut n: usize, pi: &[u64]) -> bool {
    for &p in pi {
        while n.is_multiple_of(p as usize) {
            n /= p as usize;
        }
    }
    n == 1
}

/// Whether every element order in every group H-class is a π-number.
pub fn monoid_in_gpi_bar(m: &TransitionMonoid, pi: &[u64]) -> bool {
    group_h_classes(m)
        .iter()
        .all(|class| class.orders.iter().all(|&o| is_pi_number(o, pi)))
}

/// Membership in the π-group family: every element order in every group
/// H-class is a π-number. Equivalent to `xⁿ ∈ K ⇒ x ∈ K` for every
/// π′-number `n`.
pub fn in_gpi_bar(aut: &InverseAutomaton, pi: &[u64], cap: usize) -> Result<bool> {
    Ok(monoid_in_gpi_bar(&TransitionMonoid::generate(aut, cap)?, pi))
}

/// p-purity is the single-prime π-group condition.
pub fn is_p_pure(aut: &InverseAutomaton, p: u64, cap: usize) -> Result<bool> {
    in_gpi_bar(aut, &[p], cap)
}

/// Whether the finite group `M(K)` of a finite-index subgroup satisfies the
/// given identities: each identity word over a variable alphabet must
/// evaluate to the identity under every assignment of variables to monoid
/// elements. For finite-index subgroups this is equivalent to `uψ ∈ K` for
/// every substitution homomorphism `ψ` of the variables.
pub fn satisfies_group_identities(
    aut: &InverseAutomaton,
    identities: &[Word],
    cap: usize,
) -> Result<bool> {
    if aut.index() == SubgroupIndex::Infinite {
        return Err(Error::InfiniteIndex);
    }
    let m = TransitionMonoid::generate(aut, cap)?;
    for identity in identities {
        let variables: Vec<usize> = {
            let mut vs: Vec<usize> =
                identity.letters().iter().map(Letter::generator).collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        };
        let var_slot = |g: usize| variables.iter().position(|&v| v == g).unwrap();
        let mut assignment = vec![0usize; variables.len()];
        loop {
            let mut value = m.identity_id();
            for letter in identity.letters() {
                let elem = assignment[var_slot(letter.generator())];
                let factor = if letter.is_inverse() { m.inverse_id(elem) } else { elem };
                value = m.multiply(value, factor);
            }
            if value != m.identity_id() {
                return Ok(false);
            }
            // next assignment in mixed radix over |M|
            let mut pos = 0;
            loop {
                if pos == assignment.len() {
                    break;
                }
                assignment[pos] += 1;
                if assignment[pos] < m.len() {
                    break;
                }
                assignment[pos] = 0;
                pos += 1;
            }
            if pos == assignment.len() {
                break;
            }
        }
    }
    Ok(true)
}

/// Whether the endomorphism is an automorphism: the images must generate
/// the whole free group, which shows up as the one-state complete bouquet.
/// Surjectivity suffices because finitely generated free groups are
/// hopfian.
pub fn is_automorphism(e: &EndomorphismSpec) -> bool {
    let images: Vec<ReducedWord> = e.images().to_vec();
    let aut = InverseAutomaton::stallings(e.alphabet().clone(), &images)
        .expect("images are over the endomorphism's own alphabet");
    aut.is_full()
}

/// Options for a full property analysis.
#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    /// Exponents for the Burnside checks.
    pub burnside: Vec<u32>,
    /// Prime sets for the π-group checks.
    pub prime_sets: Vec<Vec<u64>>,
    pub monoid_cap: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            burnside: vec![2, 3, 4, 6],
            prime_sets: vec![vec![2], vec![3], vec![2, 3]],
            monoid_cap: DEFAULT_MONOID_CAP,
        }
    }
}

/// Everything the analyzer decides about one subgroup. Criteria that are
/// computed by two methods agree by construction; a disagreement surfaces
/// as an error rather than a report.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub state_count: usize,
    pub rank: usize,
    pub index: SubgroupIndex,
    pub is_normal: bool,
    pub is_malnormal: bool,
    pub is_cyclonormal: bool,
    pub is_pure: bool,
    pub burnside: Vec<(u32, bool)>,
    pub prime_sets: Vec<(Vec<u64>, bool)>,
    pub monoid_size: usize,
    /// Reduced-realizable idempotent count; absent for the trivial subgroup.
    pub idempotent_count: Option<usize>,
    /// Maximal chain length in the idempotent poset; absent for the trivial
    /// subgroup.
    pub chain_length: Option<usize>,
    /// Cross-checks that ran while building the report.
    pub cross_checks: Vec<&'static str>,
}

pub fn analyze(aut: &InverseAutomaton, options: &AnalyzeOptions) -> Result<PropertyReport> {
    if !aut.is_trim() {
        // the report describes the subgroup, so normalize its automaton
        return analyze(&aut.trim(), options);
    }
    let cap = options.monoid_cap;
    let m = TransitionMonoid::generate(aut, cap)?;
    let mut cross_checks = Vec::new();
    let is_malnormal = {
        let value = is_malnormal(aut, cap)?;
        if !aut.is_trivial() && !aut.is_full() {
            cross_checks.push("malnormality: poset and product criteria agree");
        }
        value
    };
    let pure = {
        let value = monoid_aperiodic(&m)?;
        cross_checks.push("purity: H-class and power criteria agree");
        value
    };
    let (idempotent_count, chain_length) = if aut.is_trivial() {
        (None, None)
    } else {
        let poset = idempotent_poset(aut, cap)?;
        (Some(poset.idempotents.len()), Some(poset.chain_length))
    };
    let burnside = options
        .burnside
        .iter()
        .map(|&k| (k, monoid_in_bk_bar(&m, k)))
        .collect();
    let prime_sets = options
        .prime_sets
        .iter()
        .map(|pi| (pi.clone(), monoid_in_gpi_bar(&m, pi)))
        .collect();
    let normal = if aut.is_trivial() {
        true
    } else {
        aut.is_complete() && m.is_group() && m.len() == aut.state_count()
    };
    Ok(PropertyReport {
        state_count: aut.state_count(),
        rank: aut.rank(),
        index: aut.index(),
        is_normal: normal,
        is_malnormal,
        is_cyclonormal: is_cyclonormal(aut),
        is_pure: pure,
        burnside,
        prime_sets,
        monoid_size: m.len(),
        idempotent_count,
        chain_length,
        cross_checks,
    })
}
