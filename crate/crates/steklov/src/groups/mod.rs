//! Finite groups as explicit multiplication tables.
//!
//! Elements are indices into an `n × n` table, so exhaustive searches over
//! groups of order a few hundred (the regime of every shipped example) are
//! trivial loops. Conjugacy classes are computed once per group and cached.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub mod intertwiner;
pub mod io;
pub mod matf2;

pub use intertwiner::{intertwiner, Intertwiner};
pub use matf2::{gl3_f2, gl3f2_standard_generators, MatF2};

/// Default cap on the closure size when generating a group.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// An element of a [`FiniteGroup`], carrying an optional display label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub index: usize,
    pub label: Option<String>,
}

/// A finite group given by its full multiplication table.
///
/// Element `0` is always the identity. `mul` is row-major: `mul[a * n + b]`
/// is the index of the product `a · b`.
#[derive(Debug)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    labels: Option<Vec<String>>,
    classes: OnceLock<ConjugacyClasses>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            order: self.order,
            mul: self.mul.clone(),
            inv: self.inv.clone(),
            labels: self.labels.clone(),
            classes: OnceLock::new(),
        }
    }
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element(&self, index: usize) -> GroupElement {
        GroupElement {
            index,
            label: self.labels.as_ref().map(|l| l[index].clone()),
        }
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[index].as_str())
    }

    /// Order of a single element.
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Builds the group generated by abstract elements under `compose`.
    ///
    /// `identity` becomes element 0; generation is breadth-first closure by
    /// right multiplication. Errors out once the closure exceeds `cap`.
    pub fn generate<T, F, L>(
        identity: T,
        generators: &[T],
        compose: F,
        label: L,
        cap: usize,
    ) -> Result<(Self, Vec<usize>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
        L: Fn(&T) -> String,
    {
        let mut elems: Vec<T> = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0;
        while head < elems.len() {
            for gen in generators {
                let prod = compose(&elems[head], gen);
                if !index.contains_key(&prod) {
                    if elems.len() >= cap {
                        return Err(Error::ClosureCapExceeded { cap });
                    }
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                }
            }
            head += 1;
        }

        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let prod = compose(&elems[a], &elems[b]);
                let &k = index
                    .get(&prod)
                    .ok_or_else(|| Error::InvalidGroup("closure is not multiplicatively closed".into()))?;
                mul[a * n + b] = k as u32;
            }
        }
        let labels: Vec<String> = elems.iter().map(|e| label(e)).collect();
        let group = FiniteGroup::from_table(n, mul, Some(labels))?;
        let gen_indices = generators
            .iter()
            .map(|g| index[g])
            .collect::<Vec<_>>();
        Ok((group, gen_indices))
    }

    /// Builds a group from permutations of a common finite set.
    pub fn from_permutations(generators: &[Vec<usize>], cap: usize) -> Result<(Self, Vec<usize>)> {
        if generators.is_empty() {
            return Err(Error::MalformedGenerator {
                index: 0,
                reason: "empty generator list".into(),
            });
        }
        let deg = generators[0].len();
        for (i, p) in generators.iter().enumerate() {
            if p.len() != deg {
                return Err(Error::MalformedGenerator {
                    index: i,
                    reason: format!("degree {} != {}", p.len(), deg),
                });
            }
            let mut seen = vec![false; deg];
            for &v in p {
                if v >= deg || seen[v] {
                    return Err(Error::MalformedGenerator {
                        index: i,
                        reason: "not a bijection".into(),
                    });
                }
                seen[v] = true;
            }
        }
        let id: Vec<usize> = (0..deg).collect();
        // Right action convention: (p ∘ q)(x) = q(p(x)), i.e. apply p first.
        let compose = |p: &Vec<usize>, q: &Vec<usize>| p.iter().map(|&x| q[x]).collect::<Vec<_>>();
        let label = |p: &Vec<usize>| {
            let strs: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            strs.join(",")
        };
        Self::generate(id, generators, compose, label, cap)
    }

    /// Builds a group from invertible 3×3 matrices over F₂.
    pub fn from_f2_matrices(generators: &[MatF2], cap: usize) -> Result<(Self, Vec<usize>)> {
        for (i, &m) in generators.iter().enumerate() {
            if !matf2::is_invertible(m) {
                return Err(Error::NonInvertibleGenerator { index: i });
            }
        }
        Self::generate(
            matf2::identity(),
            generators,
            |a, b| matf2::mul(*a, *b),
            |m| matf2::label(*m),
            cap,
        )
    }

    /// Assembles a group from a raw multiplication table, checking the group
    /// axioms. Associativity is checked exhaustively up to order 500 and on
    /// random triples above that.
    pub fn from_table(order: usize, mul: Vec<u32>, labels: Option<Vec<String>>) -> Result<Self> {
        if order == 0 || mul.len() != order * order {
            return Err(Error::InvalidGroup("table size mismatch".into()));
        }
        for &v in &mul {
            if v as usize >= order {
                return Err(Error::InvalidGroup("table entry out of range".into()));
            }
        }
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        for g in 0..order {
            if at(0, g) != g || at(g, 0) != g {
                return Err(Error::InvalidGroup("element 0 is not the identity".into()));
            }
        }
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if at(a, b) == 0 {
                    if at(b, a) != 0 {
                        return Err(Error::InvalidGroup("one-sided inverse".into()));
                    }
                    inv[a] = b as u32;
                }
            }
            if inv[a] == u32::MAX {
                return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
            }
        }
        if order <= 500 {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if at(at(a, b), c) != at(a, at(b, c)) {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..20_000 {
                let a = rng.random_range(0..order);
                let b = rng.random_range(0..order);
                let c = rng.random_range(0..order);
                if at(at(a, b), c) != at(a, at(b, c)) {
                    return Err(Error::InvalidGroup(format!(
                        "associativity fails at ({a}, {b}, {c})"
                    )));
                }
            }
        }
        Ok(FiniteGroup {
            order,
            mul,
            inv,
            labels,
            classes: OnceLock::new(),
        })
    }

    /// Conjugacy classes, computed on first use and cached.
    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![usize::MAX; n];
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for x in 0..n {
                if class_of[x] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                let mut members = Vec::new();
                for g in 0..n {
                    let y = self.conjugate(g, x);
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        members.push(y);
                    }
                }
                members.sort_unstable();
                classes.push(members);
            }
            ConjugacyClasses { class_of, classes }
        })
    }
}

/// Conjugacy class partition of a group.
#[derive(Debug, Clone)]
pub struct ConjugacyClasses {
    /// Class id of each element.
    pub class_of: Vec<usize>,
    /// Sorted member lists per class.
    pub classes: Vec<Vec<usize>>,
}

/// A subgroup, stored as a sorted member list; validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn new(group: &FiniteGroup, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.binary_search(&group.identity()).is_err() {
            return Err(Error::InvalidSubgroup("missing identity".into()));
        }
        for &a in &members {
            if a >= group.order() {
                return Err(Error::InvalidSubgroup(format!("element {a} out of range")));
            }
            if members.binary_search(&group.inv(a)).is_err() {
                return Err(Error::InvalidSubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in &members {
                if members.binary_search(&group.mul(a, b)).is_err() {
                    return Err(Error::InvalidSubgroup(format!(
                        "not closed under multiplication at ({a}, {b})"
                    )));
                }
            }
        }
        if group.order() % members.len() != 0 {
            return Err(Error::InvalidSubgroup("order does not divide group order".into()));
        }
        Ok(Subgroup { members })
    }

    /// Subgroup generated by the given elements.
    pub fn generated(group: &FiniteGroup, gens: &[usize]) -> Self {
        let mut members = vec![group.identity()];
        let mut seen = vec![false; group.order()];
        seen[group.identity()] = true;
        let mut head = 0;
        while head < members.len() {
            for &g in gens {
                let prod = group.mul(members[head], g);
                if !seen[prod] {
                    seen[prod] = true;
                    members.push(prod);
                }
            }
            head += 1;
        }
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn trivial() -> Self {
        Subgroup { members: vec![0] }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Subgroup {
            members: (0..group.order()).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn index_in(&self, group: &FiniteGroup) -> usize {
        group.order() / self.order()
    }

    /// The conjugate subgroup `g H g⁻¹`.
    pub fn conjugated(&self, group: &FiniteGroup, g: usize) -> Subgroup {
        let mut members: Vec<usize> = self.members.iter().map(|&h| group.conjugate(g, h)).collect();
        members.sort_unstable();
        Subgroup { members }
    }
}

/// Right action of a group on the coset space `H\G`.
///
/// `perm(g)` maps the coset `Hx` to `Hxg`; under this convention
/// `perm(g₁g₂) = perm(g₂) ∘ perm(g₁)` reads left-to-right: apply `g₁`, then
/// `g₂`.
#[derive(Debug, Clone)]
pub struct CosetAction {
    /// Canonical (minimal) representative of each coset, ascending.
    pub reps: Vec<usize>,
    /// Coset id of each group element.
    pub coset_of: Vec<usize>,
    /// Per group element, the permutation of coset indices.
    perms: Vec<Vec<u32>>,
}

impl CosetAction {
    pub fn cosets(&self) -> usize {
        self.reps.len()
    }

    /// The permutation induced by right multiplication with `g`.
    pub fn perm(&self, g: usize) -> &[u32] {
        &self.perms[g]
    }

    pub fn apply(&self, g: usize, coset: usize) -> usize {
        self.perms[g][coset] as usize
    }

    /// Fixed points of the action of `g`.
    pub fn fixed_points(&self, g: usize) -> usize {
        self.perms[g]
            .iter()
            .enumerate()
            .filter(|(i, &v)| *i == v as usize)
            .count()
    }
}

/// Builds the right action of `group` on `H\G`.
pub fn coset_action(group: &FiniteGroup, h: &Subgroup) -> CosetAction {
    let n = group.order();
    let mut rep_of = vec![usize::MAX; n];
    for x in 0..n {
        if rep_of[x] != usize::MAX {
            continue;
        }
        let coset: Vec<usize> = h.members().iter().map(|&hh| group.mul(hh, x)).collect();
        let rep = *coset.iter().min().expect("nonempty coset");
        for y in coset {
            rep_of[y] = rep;
        }
    }
    let mut reps: Vec<usize> = rep_of.to_vec();
    reps.sort_unstable();
    reps.dedup();
    let rank: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let coset_of: Vec<usize> = rep_of.iter().map(|r| rank[r]).collect();
    let mut perms = Vec::with_capacity(n);
    for g in 0..n {
        let perm: Vec<u32> = reps
            .iter()
            .map(|&r| coset_of[group.mul(r, g)] as u32)
            .collect();
        perms.push(perm);
    }
    CosetAction {
        reps,
        coset_of,
        perms,
    }
}

/// Decides Gassmann equivalence by counting class intersections.
///
/// `H` and `H'` are almost conjugate iff every conjugacy class of `G` meets
/// them in equally many elements.
pub fn almost_conjugate(group: &FiniteGroup, h1: &Subgroup, h2: &Subgroup) -> bool {
    let classes = group.conjugacy_classes();
    let k = classes.classes.len();
    let mut c1 = vec![0usize; k];
    let mut c2 = vec![0usize; k];
    for &x in h1.members() {
        c1[classes.class_of[x]] += 1;
    }
    for &x in h2.members() {
        c2[classes.class_of[x]] += 1;
    }
    c1 == c2
}

/// Decides equality of the permutation characters of `G` on `H\G` and
/// `H'\G` by comparing fixed-point counts of every group element.
///
/// Independent route to the same predicate as [`almost_conjugate`]; the two
/// must agree on every input.
pub fn permutation_character_equal(group: &FiniteGroup, h1: &Subgroup, h2: &Subgroup) -> bool {
    let a1 = coset_action(group, h1);
    let a2 = coset_action(group, h2);
    (0..group.order()).all(|g| a1.fixed_points(g) == a2.fixed_points(g))
}

/// Exhaustive test for subgroup conjugacy: is `g H g⁻¹ = H'` for some `g`?
pub fn are_conjugate_subgroups(group: &FiniteGroup, h1: &Subgroup, h2: &Subgroup) -> bool {
    if h1.order() != h2.order() {
        return false;
    }
    (0..group.order()).any(|g| &h1.conjugated(group, g) == h2)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn s3() -> FiniteGroup {
        let swap = vec![1, 0, 2];
        let cycle = vec![1, 2, 0];
        FiniteGroup::from_permutations(&[swap, cycle], DEFAULT_CLOSURE_CAP)
            .unwrap()
            .0
    }

    #[test]
    fn trivial_group_from_identity_permutation() {
        let (g, _) = FiniteGroup::from_permutations(&[vec![0, 1, 2]], 10).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn s3_has_order_six() {
        assert_eq!(s3().order(), 6);
    }

    #[test]
    fn s3_conjugacy_classes() {
        let g = s3();
        let classes = g.conjugacy_classes();
        let mut sizes: Vec<usize> = classes.classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn closure_cap_is_enforced() {
        let cycle = vec![1, 2, 3, 4, 0];
        let err = FiniteGroup::from_permutations(&[cycle], 3).unwrap_err();
        assert!(matches!(err, Error::ClosureCapExceeded { cap: 3 }));
    }

    #[test]
    fn subgroup_validation_rejects_non_closed_sets() {
        let g = s3();
        // Two distinct transpositions generate all of S₃, so {e, t1, t2} is not closed.
        let transpositions: Vec<usize> = (1..g.order()).filter(|&x| g.mul(x, x) == 0).collect();
        assert_eq!(transpositions.len(), 3);
        let bad = Subgroup::new(&g, vec![0, transpositions[0], transpositions[1]]);
        assert!(bad.is_err());
    }

    #[test]
    fn coset_action_trivial_cases() {
        let g = s3();
        let whole = Subgroup::whole(&g);
        let a = coset_action(&g, &whole);
        assert_eq!(a.cosets(), 1);
        assert!((0..g.order()).all(|x| a.apply(x, 0) == 0));

        let trivial = Subgroup::trivial();
        let a = coset_action(&g, &trivial);
        assert_eq!(a.cosets(), g.order());
    }

    #[test]
    fn coset_action_is_a_right_action() {
        let g = s3();
        let transposition = (1..g.order()).find(|&x| g.mul(x, x) == 0).unwrap();
        let h = Subgroup::generated(&g, &[transposition]);
        let a = coset_action(&g, &h);
        for g1 in 0..g.order() {
            for g2 in 0..g.order() {
                let prod = g.mul(g1, g2);
                for c in 0..a.cosets() {
                    assert_eq!(a.apply(prod, c), a.apply(g2, a.apply(g1, c)));
                }
            }
        }
    }

    #[test]
    fn conjugate_subgroups_are_almost_conjugate() {
        let g = s3();
        let transposition = (1..g.order()).find(|&x| g.mul(x, x) == 0).unwrap();
        let h = Subgroup::generated(&g, &[transposition]);
        for c in 0..g.order() {
            let hc = h.conjugated(&g, c);
            assert!(almost_conjugate(&g, &h, &hc));
            assert!(permutation_character_equal(&g, &h, &hc));
            assert!(are_conjugate_subgroups(&g, &h, &hc));
        }
    }

    #[test]
    fn transposition_subgroup_vs_trivial_is_not_gassmann() {
        let g = s3();
        let transposition = (1..g.order()).find(|&x| g.mul(x, x) == 0).unwrap();
        let h = Subgroup::generated(&g, &[transposition]);
        let t = Subgroup::trivial();
        assert!(!almost_conjugate(&g, &t, &h));
        assert!(!permutation_character_equal(&g, &t, &h));
    }

    #[test]
    fn whole_vs_trivial_characters_differ() {
        let g = s3();
        assert!(!permutation_character_equal(
            &g,
            &Subgroup::whole(&g),
            &Subgroup::trivial()
        ));
    }

    #[test]
    fn two_transposition_subgroups_are_conjugate() {
        let g = s3();
        let ts: Vec<usize> = (1..g.order()).filter(|&x| g.mul(x, x) == 0).collect();
        let h1 = Subgroup::generated(&g, &[ts[0]]);
        let h2 = Subgroup::generated(&g, &[ts[1]]);
        assert!(are_conjugate_subgroups(&g, &h1, &h2));
    }

    #[test]
    fn element_orders_in_s3() {
        let g = s3();
        let mut orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
    }
}
