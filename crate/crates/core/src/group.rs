//! Finite groups on canonical element indices `0..n`.
//!
//! Cyclic groups carry no table: element `i` stands for `generator^i` and the
//! operation is addition mod `n`. Every other group is given by its full
//! multiplication table. Homomorphisms are validated eagerly on construction,
//! so every [`GroupHom`] in circulation satisfies `f(ab) = f(a)f(b)`.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest order for which table groups are validated by a full associativity scan.
pub const ASSOCIATIVITY_SCAN_LIMIT: usize = 64;

#[derive(Clone, Debug)]
enum Op {
    Cyclic,
    Table { mul: Arc<[usize]>, inv: Arc<[usize]> },
}

/// A finite group whose elements are the indices `0..order`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    identity: usize,
    op: Op,
    label: Arc<str>,
}

impl FiniteGroup {
    /// The cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(n));
        }
        Ok(FiniteGroup {
            order: n,
            identity: 0,
            op: Op::Cyclic,
            label: format!("Z{n}").into(),
        })
    }

    /// Builds a group from a multiplication table, `table[a][b] = a * b`.
    ///
    /// The identity and inverses are discovered from the table. Associativity is
    /// checked by a full triple scan for orders up to [`ASSOCIATIVITY_SCAN_LIMIT`].
    pub fn from_table(table: &[Vec<usize>], label: impl Into<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidOrder(0));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroupTable(format!(
                    "row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &c in row {
                if c >= n {
                    return Err(Error::ElementOutOfRange { element: c, order: n });
                }
                mul.push(c);
            }
        }
        let at = |a: usize, b: usize| mul[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidGroupTable("no two-sided identity".into()))?;
        let mut inv = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::InvalidGroupTable(format!("element {x} has no inverse")))?;
            inv.push(y);
        }
        if n <= ASSOCIATIVITY_SCAN_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = at(a, b);
                    for c in 0..n {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(Error::InvalidGroupTable(format!(
                                "({a}*{b})*{c} != {a}*({b}*{c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order: n,
            identity,
            op: Op::Table {
                mul: mul.into(),
                inv: inv.into(),
            },
            label: label.into().into(),
        })
    }

    /// Parses a display label of the form `Z<n>`.
    pub fn from_label(label: &str) -> Result<Self> {
        let digits = label
            .strip_prefix('Z')
            .ok_or_else(|| Error::Parse(format!("unrecognized group label {label:?}")))?;
        let n: usize = digits
            .parse()
            .map_err(|_| Error::Parse(format!("unrecognized group label {label:?}")))?;
        Self::cyclic(n)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// True when the group is stored in cyclic form (`op(i, j) = i + j mod n`).
    pub fn is_cyclic(&self) -> bool {
        matches!(self.op, Op::Cyclic)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        match &self.op {
            Op::Cyclic => {
                let s = a + b;
                if s >= self.order {
                    s - self.order
                } else {
                    s
                }
            }
            Op::Table { mul, .. } => mul[a * self.order + b],
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        match &self.op {
            Op::Cyclic => {
                if a == 0 {
                    0
                } else {
                    self.order - a
                }
            }
            Op::Table { inv, .. } => inv[a],
        }
    }

    /// `g^k` for `k >= 0`.
    pub fn pow(&self, g: usize, k: usize) -> usize {
        match self.op {
            Op::Cyclic => (g * (k % self.order)) % self.order,
            Op::Table { .. } => (0..k).fold(self.identity, |acc, _| self.op(acc, g)),
        }
    }

    pub fn element_order(&self, g: usize) -> usize {
        match self.op {
            Op::Cyclic => self.order / g.gcd(&self.order),
            Op::Table { .. } => {
                let mut x = g;
                let mut k = 1;
                while x != self.identity {
                    x = self.op(x, g);
                    k += 1;
                }
                k
            }
        }
    }

    pub fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                element: g,
                order: self.order,
            })
        }
    }

    /// The subgroup generated by `gens` (closure under the operation).
    pub fn generated_subgroup(&self, gens: &[usize]) -> Result<Subgroup> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut frontier = vec![self.identity];
        for &g in gens {
            self.check_element(g)?;
        }
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.op(x, g);
                if !inside[y] {
                    inside[y] = true;
                    frontier.push(y);
                }
            }
        }
        let members = (0..self.order).filter(|&x| inside[x]).collect();
        Ok(Subgroup {
            parent: self.clone(),
            members,
        })
    }

    /// Every subgroup of a cyclic group, one per divisor of the order, by increasing size.
    pub fn cyclic_subgroups(&self) -> Result<Vec<NormalSubgroup>> {
        if !self.is_cyclic() {
            return Err(Error::UnsupportedGroup(format!(
                "{} is not in cyclic form",
                self.label
            )));
        }
        let n = self.order;
        let mut out = Vec::new();
        for d in (1..=n).filter(|d| n % d == 0) {
            let sub = self.generated_subgroup(&[n / d % n])?;
            out.push(NormalSubgroup(sub));
        }
        Ok(out)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        if self.order != other.order || self.identity != other.identity {
            return false;
        }
        if self.is_cyclic() && other.is_cyclic() {
            return true;
        }
        self.elements()
            .all(|a| self.elements().all(|b| self.op(a, b) == other.op(a, b)))
    }
}

impl Eq for FiniteGroup {}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// `Z_n`.
pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    FiniteGroup::cyclic(n)
}

/// A subgroup, stored as the sorted list of its member indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<usize>,
}

impl Subgroup {
    /// Validates `members` with the one-step subgroup test: nonempty and
    /// `x y^-1` stays inside for all members `x, y`.
    pub fn new(parent: &FiniteGroup, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            parent.check_element(m)?;
        }
        if members.is_empty() {
            return Err(Error::NotASubgroup("empty set".into()));
        }
        let mut inside = vec![false; parent.order()];
        for &m in &members {
            inside[m] = true;
        }
        for &x in &members {
            for &y in &members {
                let z = parent.op(x, parent.inv(y));
                if !inside[z] {
                    return Err(Error::NotASubgroup(format!(
                        "{x} * {y}^-1 = {z} is not a member"
                    )));
                }
            }
        }
        Ok(Subgroup {
            parent: parent.clone(),
            members,
        })
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Left coset `gH`, sorted.
    pub fn left_coset(&self, g: usize) -> Vec<usize> {
        let mut c: Vec<usize> = self.members.iter().map(|&h| self.parent.op(g, h)).collect();
        c.sort_unstable();
        c
    }

    /// Right coset `Hg`, sorted.
    pub fn right_coset(&self, g: usize) -> Vec<usize> {
        let mut c: Vec<usize> = self.members.iter().map(|&h| self.parent.op(h, g)).collect();
        c.sort_unstable();
        c
    }

    /// Checks `gN = Ng` for every `g` in the parent.
    pub fn into_normal(self) -> Result<NormalSubgroup> {
        for g in self.parent.elements() {
            if self.left_coset(g) != self.right_coset(g) {
                return Err(Error::NotNormal { element: g });
            }
        }
        Ok(NormalSubgroup(self))
    }
}

/// A subgroup whose left and right cosets coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalSubgroup(Subgroup);

impl NormalSubgroup {
    pub fn new(parent: &FiniteGroup, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        Subgroup::new(parent, members)?.into_normal()
    }

    /// The trivial subgroup `{e}`.
    pub fn trivial(parent: &FiniteGroup) -> Self {
        NormalSubgroup(Subgroup {
            parent: parent.clone(),
            members: vec![parent.identity()],
        })
    }

    pub fn as_subgroup(&self) -> &Subgroup {
        &self.0
    }

    pub fn parent(&self) -> &FiniteGroup {
        self.0.parent()
    }

    pub fn members(&self) -> &[usize] {
        self.0.members()
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.0.contains(g)
    }
}

/// A homomorphism `domain -> codomain`, given as a total table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    domain: FiniteGroup,
    codomain: FiniteGroup,
    map: Vec<usize>,
}

impl GroupHom {
    /// Validates the table and the homomorphism property on all pairs.
    pub fn new(domain: &FiniteGroup, codomain: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != domain.order() {
            return Err(Error::LengthMismatch {
                expected: domain.order(),
                found: map.len(),
            });
        }
        for &y in &map {
            codomain.check_element(y)?;
        }
        for a in domain.elements() {
            for b in domain.elements() {
                if map[domain.op(a, b)] != codomain.op(map[a], map[b]) {
                    return Err(Error::NotAHomomorphism { a, b });
                }
            }
        }
        Ok(GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            map,
        })
    }

    /// The homomorphism out of a cyclic group sending its generator to `image`.
    pub fn from_generator_image(
        domain: &FiniteGroup,
        codomain: &FiniteGroup,
        image: usize,
    ) -> Result<Self> {
        if !domain.is_cyclic() {
            return Err(Error::UnsupportedGroup(format!(
                "generator image requires a cyclic domain, got {domain}"
            )));
        }
        codomain.check_element(image)?;
        let map = domain.elements().map(|k| codomain.pow(image, k)).collect();
        Self::new(domain, codomain, map)
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        GroupHom {
            domain: group.clone(),
            codomain: group.clone(),
            map: group.elements().collect(),
        }
    }

    /// The map sending everything to the identity.
    pub fn trivial(domain: &FiniteGroup, codomain: &FiniteGroup) -> Self {
        GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            map: vec![codomain.identity(); domain.order()],
        }
    }

    pub fn domain(&self) -> &FiniteGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteGroup {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, h: usize) -> usize {
        self.map[h]
    }

    /// Image of the cyclic generator, when the domain is cyclic and nontrivial.
    pub fn generator_image(&self) -> Option<usize> {
        if self.domain.is_cyclic() {
            Some(self.map[1 % self.domain.order()])
        } else {
            None
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.order()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain.order()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    /// `next ∘ self`: apply `self` first, then `next`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if self.codomain != next.domain {
            return Err(Error::HomChainMismatch(format!(
                "codomain {} does not match domain {}",
                self.codomain, next.domain
            )));
        }
        Ok(GroupHom {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        })
    }

    pub fn kernel(&self) -> NormalSubgroup {
        let members = self
            .domain
            .elements()
            .filter(|&g| self.map[g] == self.codomain.identity())
            .collect();
        NormalSubgroup(Subgroup {
            parent: self.domain.clone(),
            members,
        })
    }

    pub fn image(&self) -> Subgroup {
        let mut members = self.map.clone();
        members.sort_unstable();
        members.dedup();
        Subgroup {
            parent: self.codomain.clone(),
            members,
        }
    }
}

impl fmt::Display for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.domain, self.codomain, self.map)
    }
}

/// All homomorphisms `Z_m -> Z_n`, ordered by the image of the generator.
///
/// A generator image `g` is admissible iff its order divides `m`, i.e.
/// `m * g ≡ 0 (mod n)`; there are exactly `gcd(m, n)` of them.
pub fn enumerate_homs(domain: &FiniteGroup, codomain: &FiniteGroup) -> Result<Vec<GroupHom>> {
    for g in [domain, codomain] {
        if !g.is_cyclic() {
            return Err(Error::UnsupportedGroup(format!(
                "hom enumeration needs cyclic groups, got {g}"
            )));
        }
    }
    let (m, n) = (domain.order(), codomain.order());
    Ok((0..n)
        .filter(|&g| (m * g) % n == 0)
        .map(|g| GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            map: (0..m).map(|k| (k * g) % n).collect(),
        })
        .collect())
}

pub fn kernel(f: &GroupHom) -> NormalSubgroup {
    f.kernel()
}

pub fn image(f: &GroupHom) -> Subgroup {
    f.image()
}

/// `G/N` together with the canonical projection `g ↦ gN`.
///
/// Cosets are numbered by their least element. When the quotient is cyclic it
/// is relabeled to `Z_k` through the powers of the generating coset with the
/// least representative; the relabeling is folded into the projection.
pub fn quotient(group: &FiniteGroup, normal: &NormalSubgroup) -> Result<(FiniteGroup, GroupHom)> {
    if normal.parent() != group {
        return Err(Error::GroupMismatch {
            expected: group.to_string(),
            found: normal.parent().to_string(),
        });
    }
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for g in group.elements() {
        if coset_of[g] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(g);
        for &m in normal.members() {
            coset_of[group.op(g, m)] = idx;
        }
    }
    let k = reps.len();
    let mul = |a: usize, b: usize| coset_of[group.op(reps[a], reps[b])];
    let e = coset_of[group.identity()];

    // cyclic relabeling through the first generating coset
    let generator = (0..k).find(|&c| {
        let mut x = c;
        let mut len = 1;
        while x != e {
            x = mul(x, c);
            len += 1;
        }
        len == k
    });
    if let Some(c) = generator {
        let mut label = vec![0usize; k];
        let mut x = e;
        for i in 0..k {
            label[x] = i;
            x = mul(x, c);
        }
        let target = FiniteGroup::cyclic(k)?;
        let map = coset_of.iter().map(|&q| label[q]).collect();
        let proj = GroupHom::new(group, &target, map)?;
        return Ok((target, proj));
    }

    let table: Vec<Vec<usize>> = (0..k).map(|a| (0..k).map(|b| mul(a, b)).collect()).collect();
    let target = FiniteGroup::from_table(&table, format!("{}/N{}", group, normal.order()))?;
    let proj = GroupHom::new(group, &target, coset_of)?;
    Ok((target, proj))
}

/// First-isomorphism factorization `f = ψ2 ∘ ψ1` with
/// `ψ1: H -> H/Ker(f)` the projection and `ψ2: H/Ker(f) -> G` injective.
pub fn decompose_hom(f: &GroupHom) -> Result<(GroupHom, GroupHom)> {
    let (q, psi1) = quotient(f.domain(), &f.kernel())?;
    let mut map = vec![usize::MAX; q.order()];
    for h in f.domain().elements() {
        map[psi1.apply(h)] = f.apply(h);
    }
    let psi2 = GroupHom::new(&q, f.codomain(), map)?;
    Ok((psi1, psi2))
}
