//! φ-cellular automata `τ: A^G -> A^H` along a homomorphism `φ: H -> G`.
//!
//! An automaton is a memory set `S ⊆ G` together with a local rule
//! `μ: A^S -> A`, and acts by
//!
//! ```text
//! τ(x)(h) = μ(s ↦ x(φ(h)·s))
//! ```
//!
//! which is `μ((φ(h)⁻¹·x)|_S)` unfolded. Verifiers in this module work on
//! [`MapTable`]s, explicit tables of a map `A^G -> A^H` over the lexicographic
//! configuration order, so every check is exhaustive by construction.

use std::collections::HashSet;

use rand::Rng;

use crate::config::{
    check_budget, check_distinct, config_count, encode_index, for_each_config, shift_into,
    Alphabet, Configuration,
};
use crate::error::{Error, Result};
use crate::group::{decompose_hom, FiniteGroup, GroupHom};

/// Largest group order for which the subset-lattice memory-set search is allowed.
pub const SUBSET_SEARCH_LIMIT: usize = 12;

/// A local rule `μ: A^S -> A` over an ordered memory list.
///
/// Patterns are indexed mixed-radix in memory order, first memory element most
/// significant, so the pattern `(p_0, .., p_{k-1})` sits at `Σ p_i q^{k-1-i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalRule {
    alphabet: Alphabet,
    memory: Vec<usize>,
    table: Vec<u8>,
}

impl LocalRule {
    pub fn new(alphabet: Alphabet, memory: Vec<usize>, table: Vec<u8>) -> Result<Self> {
        check_distinct(&memory)?;
        let expected = config_count(memory.len(), alphabet);
        if table.len() as u128 != expected {
            return Err(Error::LengthMismatch {
                expected: expected.min(usize::MAX as u128) as usize,
                found: table.len(),
            });
        }
        for &v in &table {
            alphabet.check_state(v as usize)?;
        }
        Ok(LocalRule {
            alphabet,
            memory,
            table,
        })
    }

    /// Tabulates `f` over every pattern on `memory`.
    pub fn from_fn(
        alphabet: Alphabet,
        memory: Vec<usize>,
        mut f: impl FnMut(&[u8]) -> u8,
    ) -> Result<Self> {
        let q = alphabet.size();
        let count = check_budget(memory.len(), alphabet, u64::MAX)?;
        let mut table = Vec::with_capacity(count);
        for_each_config(memory.len(), q, 0..count, |_, p| table.push(f(p)));
        Self::new(alphabet, memory, table)
    }

    pub fn random<R: Rng + ?Sized>(
        alphabet: Alphabet,
        memory: Vec<usize>,
        rng: &mut R,
    ) -> Result<Self> {
        Self::from_fn(alphabet, memory, |_| rng.gen_range(0..alphabet.size()) as u8)
    }

    /// `μ = id_A` on the memory set `{e}`.
    pub fn identity(alphabet: Alphabet, identity: usize) -> Self {
        LocalRule {
            alphabet,
            memory: vec![identity],
            table: (0..alphabet.size() as u8).collect(),
        }
    }

    /// The constant rule on the empty memory set.
    pub fn constant(alphabet: Alphabet, state: u8) -> Result<Self> {
        Self::new(alphabet, Vec::new(), vec![state])
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn memory(&self) -> &[usize] {
        &self.memory
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn pattern_index(&self, pattern: &[u8]) -> usize {
        encode_index(pattern, self.alphabet.size())
    }

    /// `μ(pattern)`, with the pattern given in memory order.
    pub fn eval(&self, pattern: &[u8]) -> u8 {
        self.table[self.pattern_index(pattern)]
    }
}

/// A φ-cellular automaton `A^G -> A^H` for `φ ∈ Hom(H, G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiCA {
    phi: GroupHom,
    rule: LocalRule,
}

impl PhiCA {
    pub fn new(phi: GroupHom, rule: LocalRule) -> Result<Self> {
        for &s in rule.memory() {
            phi.codomain().check_element(s)?;
        }
        Ok(PhiCA { phi, rule })
    }

    /// The classical automaton on `G` (`φ = id_G`).
    pub fn classical(group: &FiniteGroup, rule: LocalRule) -> Result<Self> {
        Self::new(GroupHom::identity(group), rule)
    }

    pub fn phi(&self) -> &GroupHom {
        &self.phi
    }

    pub fn rule(&self) -> &LocalRule {
        &self.rule
    }

    pub fn alphabet(&self) -> Alphabet {
        self.rule.alphabet
    }

    /// `G`, the group the input configurations live on.
    pub fn source_group(&self) -> &FiniteGroup {
        self.phi.codomain()
    }

    /// `H`, the group the output configurations live on.
    pub fn target_group(&self) -> &FiniteGroup {
        self.phi.domain()
    }

    /// Output value at a single cell `h`.
    #[inline]
    pub(crate) fn eval_cell(&self, x: &[u8], h: usize) -> u8 {
        let g = self.source_group();
        let base = self.phi.apply(h);
        let q = self.rule.alphabet.size();
        let idx = self
            .rule
            .memory
            .iter()
            .fold(0, |acc, &s| acc * q + x[g.op(base, s)] as usize);
        self.rule.table[idx]
    }

    pub(crate) fn apply_into(&self, x: &[u8], out: &mut [u8]) {
        for (h, slot) in out.iter_mut().enumerate() {
            *slot = self.eval_cell(x, h);
        }
    }

    fn check_input(&self, x: &Configuration) -> Result<()> {
        if x.alphabet() != self.alphabet() {
            return Err(Error::AlphabetMismatch(
                x.alphabet().size(),
                self.alphabet().size(),
            ));
        }
        x.check_over(self.source_group())
    }

    pub fn apply(&self, x: &Configuration) -> Result<Configuration> {
        self.check_input(x)?;
        let mut out = vec![0u8; self.target_group().order()];
        self.apply_into(x.values(), &mut out);
        Ok(Configuration::from_raw(out, self.alphabet()))
    }

    /// Explicit table of the global map over all of `A^G`.
    pub fn tabulate(&self, budget: u64) -> Result<MapTable> {
        let n = self.source_group().order();
        let m = self.target_group().order();
        let count = check_budget(n, self.alphabet(), budget)?;
        let mut outputs = vec![0u8; count * m];
        for_each_config(n, self.alphabet().size(), 0..count, |i, x| {
            self.apply_into(x, &mut outputs[i * m..(i + 1) * m]);
        });
        Ok(MapTable {
            source_cells: n,
            target_cells: m,
            alphabet: self.alphabet(),
            outputs,
        })
    }

    /// Same global map, re-expressed over its minimal memory set.
    pub fn minimized(&self, budget: u64) -> Result<PhiCA> {
        let table = self.tabulate(budget)?;
        let memory = find_memory_set(&table, &self.phi)?;
        let rule = reconstruct_rule(&table, &self.phi, &memory)?;
        PhiCA::new(self.phi.clone(), rule)
    }
}

pub fn apply(t: &PhiCA, x: &Configuration) -> Result<Configuration> {
    t.apply(x)
}

/// `φ*(x) = x ∘ φ`, realized with memory `{e_G}` and `μ = id_A`.
pub fn phi_star(phi: &GroupHom, alphabet: Alphabet) -> PhiCA {
    PhiCA {
        rule: LocalRule::identity(alphabet, phi.codomain().identity()),
        phi: phi.clone(),
    }
}

/// Memory set `{φ1(s2)·s1}` of `t2 ∘ t1`, sorted and deduplicated.
pub fn composed_memory(t2: &PhiCA, t1: &PhiCA) -> Vec<usize> {
    let g = t1.source_group();
    let mut memory: Vec<usize> = t2
        .rule
        .memory
        .iter()
        .flat_map(|&s2| {
            let base = t1.phi.apply(s2);
            t1.rule.memory.iter().map(move |&s1| g.op(base, s1))
        })
        .collect();
    memory.sort_unstable();
    memory.dedup();
    memory
}

/// `t2 ∘ t1` for `t1: A^G -> A^H` (via `φ1: H -> G`) and `t2: A^H -> A^K`
/// (via `φ2: K -> H`); the result is a `φ1∘φ2`-automaton.
///
/// The local rule is obtained by evaluating the composite on one
/// representative configuration per pattern over [`composed_memory`].
pub fn compose(t2: &PhiCA, t1: &PhiCA) -> Result<PhiCA> {
    if t1.alphabet() != t2.alphabet() {
        return Err(Error::AlphabetMismatch(
            t1.alphabet().size(),
            t2.alphabet().size(),
        ));
    }
    if t1.target_group() != t2.source_group() {
        return Err(Error::HomChainMismatch(format!(
            "first automaton outputs over {}, second reads over {}",
            t1.target_group(),
            t2.source_group()
        )));
    }
    let phi = t2.phi.then(&t1.phi)?;
    let memory = composed_memory(t2, t1);
    let alphabet = t1.alphabet();
    let mut x = vec![0u8; t1.source_group().order()];
    let mut y = vec![0u8; t1.target_group().order()];
    let e_k = t2.target_group().identity();
    let rule = LocalRule::from_fn(alphabet, memory.clone(), |pattern| {
        for (&s, &v) in memory.iter().zip(pattern) {
            x[s] = v;
        }
        t1.apply_into(&x, &mut y);
        t2.eval_cell(&y, e_k)
    })?;
    PhiCA::new(phi, rule)
}

/// Factors `φ*` through `H/Ker(φ)`: returns `(ψ1*, ψ2*)` with
/// `ψ1*: A^{H/K} -> A^H`, `ψ2*: A^G -> A^{H/K}` and `ψ1* ∘ ψ2* = φ*`.
pub fn decompose_ca(phi: &GroupHom, alphabet: Alphabet) -> Result<(PhiCA, PhiCA)> {
    let (psi1, psi2) = decompose_hom(phi)?;
    Ok((phi_star(&psi1, alphabet), phi_star(&psi2, alphabet)))
}

/// `f_τ(x) = τ(x)(e_H)`.
pub fn f_tau(t: &PhiCA, x: &Configuration) -> Result<u8> {
    t.check_input(x)?;
    Ok(t.eval_cell(x.values(), t.target_group().identity()))
}

/// Trace `[x0, τ(x0), .., τ^steps(x0)]` of an endomorphic automaton.
pub fn run(t: &PhiCA, x0: &Configuration, steps: usize) -> Result<Vec<Configuration>> {
    if !t.phi.is_endomorphism() {
        return Err(Error::NotIterable(t.phi.to_string()));
    }
    t.check_input(x0)?;
    let mut trace = Vec::with_capacity(steps + 1);
    trace.push(x0.clone());
    for _ in 0..steps {
        let next = t.apply(trace.last().expect("trace is nonempty"))?;
        trace.push(next);
    }
    Ok(trace)
}

pub fn is_injective(t: &PhiCA, budget: u64) -> Result<bool> {
    Ok(t.tabulate(budget)?.is_injective())
}

pub fn is_surjective(t: &PhiCA, budget: u64) -> Result<bool> {
    check_budget(t.target_group().order(), t.alphabet(), budget)?;
    Ok(t.tabulate(budget)?.is_surjective())
}

/// An explicit map `A^G -> A^H`: row `i` is the image of the `i`-th
/// configuration in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapTable {
    source_cells: usize,
    target_cells: usize,
    alphabet: Alphabet,
    outputs: Vec<u8>,
}

impl MapTable {
    /// Builds a table from a flat row-major output array.
    pub fn new(
        source_cells: usize,
        target_cells: usize,
        alphabet: Alphabet,
        outputs: Vec<u8>,
    ) -> Result<Self> {
        let rows = check_budget(source_cells, alphabet, u64::MAX)?;
        if outputs.len() != rows * target_cells {
            return Err(Error::LengthMismatch {
                expected: rows * target_cells,
                found: outputs.len(),
            });
        }
        for &v in &outputs {
            alphabet.check_state(v as usize)?;
        }
        Ok(MapTable {
            source_cells,
            target_cells,
            alphabet,
            outputs,
        })
    }

    /// Tabulates an arbitrary function over every configuration of `A^G`.
    pub fn from_fn(
        source_cells: usize,
        target_cells: usize,
        alphabet: Alphabet,
        budget: u64,
        mut f: impl FnMut(&Configuration) -> Configuration,
    ) -> Result<Self> {
        let rows = check_budget(source_cells, alphabet, budget)?;
        let mut outputs = Vec::with_capacity(rows * target_cells);
        for i in 0..rows {
            let y = f(&Configuration::from_index(i, source_cells, alphabet));
            if y.len() != target_cells {
                return Err(Error::LengthMismatch {
                    expected: target_cells,
                    found: y.len(),
                });
            }
            outputs.extend_from_slice(y.values());
        }
        Self::new(source_cells, target_cells, alphabet, outputs)
    }

    /// A uniformly random map, for negative tests.
    pub fn random<R: Rng + ?Sized>(
        source_cells: usize,
        target_cells: usize,
        alphabet: Alphabet,
        budget: u64,
        rng: &mut R,
    ) -> Result<Self> {
        let rows = check_budget(source_cells, alphabet, budget)?;
        let outputs = (0..rows * target_cells)
            .map(|_| rng.gen_range(0..alphabet.size()) as u8)
            .collect();
        Self::new(source_cells, target_cells, alphabet, outputs)
    }

    pub fn source_cells(&self) -> usize {
        self.source_cells
    }

    pub fn target_cells(&self) -> usize {
        self.target_cells
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn rows(&self) -> usize {
        self.outputs.len() / self.target_cells.max(1)
    }

    pub fn len(&self) -> usize {
        config_count(self.source_cells, self.alphabet) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn output(&self, index: usize) -> &[u8] {
        &self.outputs[index * self.target_cells..(index + 1) * self.target_cells]
    }

    pub fn get(&self, x: &Configuration) -> Configuration {
        Configuration::from_raw(self.output(x.index()).to_vec(), self.alphabet)
    }

    /// Row `i` as a pair of configurations.
    pub fn row(&self, index: usize) -> (Configuration, Configuration) {
        (
            Configuration::from_index(index, self.source_cells, self.alphabet),
            Configuration::from_raw(self.output(index).to_vec(), self.alphabet),
        )
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.len());
        (0..self.len()).all(|i| seen.insert(self.output(i)))
    }

    pub fn is_surjective(&self) -> bool {
        let distinct: HashSet<&[u8]> = (0..self.len()).map(|i| self.output(i)).collect();
        distinct.len() as u128 == config_count(self.target_cells, self.alphabet)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MapTable) -> Result<MapTable> {
        if self.target_cells != next.source_cells || self.alphabet != next.alphabet {
            return Err(Error::HomChainMismatch(format!(
                "table outputs {} cells, next table reads {}",
                self.target_cells, next.source_cells
            )));
        }
        let q = self.alphabet.size();
        let mut outputs = Vec::with_capacity(self.len() * next.target_cells);
        for i in 0..self.len() {
            outputs.extend_from_slice(next.output(encode_index(self.output(i), q)));
        }
        Ok(MapTable {
            source_cells: self.source_cells,
            target_cells: next.target_cells,
            alphabet: self.alphabet,
            outputs,
        })
    }

    fn check_against(&self, phi: &GroupHom) -> Result<()> {
        if self.source_cells != phi.codomain().order() {
            return Err(Error::GroupMismatch {
                expected: phi.codomain().to_string(),
                found: format!("table over {} cells", self.source_cells),
            });
        }
        if self.target_cells != phi.domain().order() {
            return Err(Error::GroupMismatch {
                expected: phi.domain().to_string(),
                found: format!("table into {} cells", self.target_cells),
            });
        }
        Ok(())
    }

    /// Value of the identity coordinate of the output, `f(x)(e_H)`.
    #[inline]
    fn at_identity(&self, index: usize, e_h: usize) -> u8 {
        self.outputs[index * self.target_cells + e_h]
    }
}

/// True iff `f(φ(h)·x) = h·f(x)` for every `h ∈ H` and every `x ∈ A^G`.
/// A table whose shape does not match `φ` is reported as not equivariant.
pub fn check_equivariant(f: &MapTable, phi: &GroupHom) -> bool {
    if f.check_against(phi).is_err() {
        return false;
    }
    let (g, h_group) = (phi.codomain(), phi.domain());
    let q = f.alphabet.size();
    let mut shifted_in = vec![0u8; f.source_cells];
    let mut shifted_out = vec![0u8; f.target_cells];
    let mut ok = true;
    for_each_config(f.source_cells, q, 0..f.len(), |i, x| {
        if !ok {
            return;
        }
        let fx = f.output(i);
        for h in h_group.elements() {
            shift_into(g, phi.apply(h), x, &mut shifted_in);
            shift_into(h_group, h, fx, &mut shifted_out);
            if f.output(encode_index(&shifted_in, q)) != shifted_out.as_slice() {
                ok = false;
                return;
            }
        }
    });
    ok
}

/// Index of a configuration whose cylinder `V(x, S)` is not constant under
/// `x ↦ f(x)(e_H)`, or `None` when `support` is a memory set.
fn constancy_violation(f: &MapTable, phi: &GroupHom, support: &[usize]) -> Option<usize> {
    let q = f.alphabet.size();
    let e_h = phi.domain().identity();
    let mut seen = vec![u8::MAX; config_count(support.len(), f.alphabet) as usize];
    let mut violation = None;
    for_each_config(f.source_cells, q, 0..f.len(), |i, x| {
        if violation.is_some() {
            return;
        }
        let p = support.iter().fold(0, |acc, &s| acc * q + x[s] as usize);
        let v = f.at_identity(i, e_h);
        if seen[p] == u8::MAX {
            seen[p] = v;
        } else if seen[p] != v {
            violation = Some(i);
        }
    });
    violation
}

/// Whether `x ↦ f(x)(e_H)` is constant on every cylinder `V(x, support)`.
pub fn is_memory_set(f: &MapTable, phi: &GroupHom, support: &[usize]) -> bool {
    f.check_against(phi).is_ok() && constancy_violation(f, phi, support).is_none()
}

/// True when changing cell `g` alone never changes `f(x)(e_H)`.
fn ignores_cell(f: &MapTable, e_h: usize, g: usize) -> bool {
    let q = f.alphabet.size();
    let weight = q.pow((f.source_cells - 1 - g) as u32);
    (0..f.len())
        .filter(|i| (i / weight) % q == 0)
        .all(|i| {
            let v = f.at_identity(i, e_h);
            (1..q).all(|a| f.at_identity(i + a * weight, e_h) == v)
        })
}

/// The inclusion-minimal memory set of an equivariant table.
///
/// Cells are eliminated one at a time from `G`; the survivors are then
/// re-validated as a memory set and each is checked to be necessary. On a
/// finite group `S = G` always works, so an equivariant table is always
/// realizable: the finite form of the Curtis–Hedlund characterization.
pub fn find_memory_set(f: &MapTable, phi: &GroupHom) -> Result<Vec<usize>> {
    f.check_against(phi)?;
    if !check_equivariant(f, phi) {
        return Err(Error::EquivarianceRequired);
    }
    let e_h = phi.domain().identity();
    let memory: Vec<usize> = (0..f.source_cells)
        .filter(|&g| !ignores_cell(f, e_h, g))
        .collect();
    if !is_memory_set(f, phi, &memory) {
        return Err(Error::Internal(format!(
            "eliminated set {memory:?} is not a memory set"
        )));
    }
    for skip in 0..memory.len() {
        let smaller: Vec<usize> = memory
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &g)| g)
            .collect();
        if is_memory_set(f, phi, &smaller) {
            return Err(Error::Internal(format!(
                "memory set {memory:?} is not minimal: {smaller:?} suffices"
            )));
        }
    }
    Ok(memory)
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        let Some(i) = (0..k).rev().find(|&i| current[i] < n - k + i) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Every inclusion-minimal memory set, found by scanning the subset lattice
/// bottom-up. Restricted to `|G| <= SUBSET_SEARCH_LIMIT`.
pub fn minimal_memory_sets(f: &MapTable, phi: &GroupHom) -> Result<Vec<Vec<usize>>> {
    f.check_against(phi)?;
    let n = f.source_cells;
    if n > SUBSET_SEARCH_LIMIT {
        return Err(Error::UnsupportedGroup(format!(
            "subset search needs |G| <= {SUBSET_SEARCH_LIMIT}, got {n}"
        )));
    }
    let mut found: Vec<Vec<usize>> = Vec::new();
    for k in 0..=n {
        for s in subsets_of_size(n, k) {
            let contains_found = found
                .iter()
                .any(|m| m.iter().all(|g| s.binary_search(g).is_ok()));
            if !contains_found && is_memory_set(f, phi, &s) {
                found.push(s);
            }
        }
    }
    Ok(found)
}

/// Lexicographically least among the smallest memory sets, by brute force.
pub fn find_memory_set_exhaustive(f: &MapTable, phi: &GroupHom) -> Result<Vec<usize>> {
    f.check_against(phi)?;
    let n = f.source_cells;
    if n > SUBSET_SEARCH_LIMIT {
        return Err(Error::UnsupportedGroup(format!(
            "subset search needs |G| <= {SUBSET_SEARCH_LIMIT}, got {n}"
        )));
    }
    (0..=n)
        .flat_map(|k| subsets_of_size(n, k))
        .find(|s| is_memory_set(f, phi, s))
        .ok_or_else(|| Error::Internal("the full group failed as a memory set".into()))
}

/// Reads the local rule off the identity coordinate: `μ(x|_S) = f(x)(e_H)`.
///
/// Fails with a constancy violation when `support` is not a memory set, and
/// with an equivariance error when the rebuilt automaton does not reproduce `f`.
pub fn reconstruct_rule(f: &MapTable, phi: &GroupHom, support: &[usize]) -> Result<LocalRule> {
    f.check_against(phi)?;
    check_distinct(support)?;
    for &s in support {
        phi.codomain().check_element(s)?;
    }
    if let Some(i) = constancy_violation(f, phi, support) {
        return Err(Error::ConstancyViolation {
            support: support.to_vec(),
            config: Configuration::from_index(i, f.source_cells, f.alphabet).to_string(),
        });
    }
    let q = f.alphabet.size();
    let e_h = phi.domain().identity();
    let mut table = vec![0u8; config_count(support.len(), f.alphabet) as usize];
    for_each_config(f.source_cells, q, 0..f.len(), |i, x| {
        let p = support.iter().fold(0, |acc, &s| acc * q + x[s] as usize);
        table[p] = f.at_identity(i, e_h);
    });
    let rule = LocalRule::new(f.alphabet, support.to_vec(), table)?;
    let t = PhiCA::new(phi.clone(), rule)?;
    let mut out = vec![0u8; f.target_cells];
    let mut matches = true;
    for_each_config(f.source_cells, q, 0..f.len(), |i, x| {
        if matches {
            t.apply_into(x, &mut out);
            matches = out.as_slice() == f.output(i);
        }
    });
    if !matches {
        return Err(Error::EquivarianceRequired);
    }
    Ok(t.rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DEFAULT_BUDGET;
    use crate::group::make_cyclic;

    fn a2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn cfg(text: &str) -> Configuration {
        Configuration::parse(text, a2()).unwrap()
    }

    fn xor_z4() -> PhiCA {
        let g = make_cyclic(4).unwrap();
        let rule = LocalRule::from_fn(a2(), vec![1, 3], |p| p[0] ^ p[1]).unwrap();
        PhiCA::classical(&g, rule).unwrap()
    }

    fn hom(m: usize, n: usize, gen: usize) -> GroupHom {
        GroupHom::from_generator_image(&make_cyclic(m).unwrap(), &make_cyclic(n).unwrap(), gen)
            .unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(xor_z4().apply(&cfg("1,0,0,0")).unwrap(), cfg("0,1,0,1"));

        let g = make_cyclic(4).unwrap();
        let id = PhiCA::classical(&g, LocalRule::identity(a2(), 0)).unwrap();
        for x in crate::config::enumerate_configs(&g, a2(), DEFAULT_BUDGET).unwrap() {
            assert_eq!(id.apply(&x).unwrap(), x);
        }

        let t = PhiCA::new(hom(2, 4, 2), LocalRule::identity(a2(), 0)).unwrap();
        assert_eq!(t.apply(&cfg("1,0,1,0")).unwrap(), cfg("1,1"));
    }

    #[test]
    fn apply_rejects_mismatch() {
        let t = xor_z4();
        assert!(t.apply(&cfg("1,0,0")).is_err());
        let x3 = Configuration::parse("1,0,2,0", Alphabet::new(3).unwrap()).unwrap();
        assert!(matches!(t.apply(&x3), Err(Error::AlphabetMismatch(3, 2))));
    }

    #[test]
    fn phi_star_examples() {
        let g = make_cyclic(4).unwrap();
        let id = phi_star(&GroupHom::identity(&g), a2());
        assert_eq!(id.apply(&cfg("1,1,0,1")).unwrap(), cfg("1,1,0,1"));

        let proj = hom(6, 3, 1);
        let s = phi_star(&proj, a2());
        assert_eq!(s.apply(&cfg("1,0,1")).unwrap(), cfg("1,0,1,1,0,1"));

        let triv = GroupHom::trivial(&g, &g);
        let s = phi_star(&triv, a2());
        assert_eq!(s.apply(&cfg("1,0,0,0")).unwrap(), cfg("1,1,1,1"));
    }

    #[test]
    fn compose_two_xors_is_zero_map() {
        let t = xor_z4();
        let tt = compose(&t, &t).unwrap();
        assert_eq!(tt.rule().memory(), &[0, 2]);
        let table = tt.tabulate(DEFAULT_BUDGET).unwrap();
        let direct = t.tabulate(DEFAULT_BUDGET).unwrap().then(&t.tabulate(DEFAULT_BUDGET).unwrap()).unwrap();
        assert_eq!(table, direct);
        // x(g+1)+x(g+3) applied twice cancels on Z_4
        assert!(tt.rule().table().iter().all(|&v| v == 0));
        assert!(tt.minimized(DEFAULT_BUDGET).unwrap().rule().memory().is_empty());
    }

    #[test]
    fn compose_with_identity() {
        let t = xor_z4();
        let id = phi_star(&GroupHom::identity(t.source_group()), a2());
        let c = compose(&id, &t).unwrap().minimized(DEFAULT_BUDGET).unwrap();
        assert_eq!(c, t);
        let c = compose(&t, &id).unwrap().minimized(DEFAULT_BUDGET).unwrap();
        assert_eq!(c, t);
    }

    #[test]
    fn compose_chain_mismatch() {
        let t = xor_z4();
        let s = phi_star(&hom(6, 3, 1), a2());
        assert!(matches!(compose(&t, &s), Err(Error::HomChainMismatch(_))));
    }

    #[test]
    fn decompose_example() {
        let f = hom(6, 4, 2);
        let (p1, p2) = decompose_ca(&f, a2()).unwrap();
        assert_eq!(p1.source_group().order(), 2);
        assert_eq!(p2.target_group().order(), 2);
        let composed = compose(&p1, &p2).unwrap();
        assert_eq!(
            composed.tabulate(DEFAULT_BUDGET).unwrap(),
            phi_star(&f, a2()).tabulate(DEFAULT_BUDGET).unwrap()
        );
    }

    #[test]
    fn equivariance_examples() {
        let t = xor_z4();
        let id = GroupHom::identity(t.source_group());
        assert!(check_equivariant(&t.tabulate(DEFAULT_BUDGET).unwrap(), &id));

        let constant = MapTable::from_fn(4, 4, a2(), DEFAULT_BUDGET, |_| cfg("1,0,0,0")).unwrap();
        assert!(!check_equivariant(&constant, &id));

        let proj = hom(6, 3, 1);
        let s = phi_star(&proj, a2()).tabulate(DEFAULT_BUDGET).unwrap();
        assert!(check_equivariant(&s, &proj));
        assert!(!check_equivariant(&s, &hom(6, 3, 2)));
    }

    #[test]
    fn memory_set_examples() {
        let t = xor_z4();
        let id = GroupHom::identity(t.source_group());
        let table = t.tabulate(DEFAULT_BUDGET).unwrap();
        assert_eq!(find_memory_set(&table, &id).unwrap(), vec![1, 3]);
        assert_eq!(find_memory_set_exhaustive(&table, &id).unwrap(), vec![1, 3]);

        let inj = hom(2, 4, 2);
        let s = phi_star(&inj, a2()).tabulate(DEFAULT_BUDGET).unwrap();
        assert_eq!(find_memory_set(&s, &inj).unwrap(), vec![0]);

        let zero = MapTable::from_fn(4, 4, a2(), DEFAULT_BUDGET, |_| cfg("0,0,0,0")).unwrap();
        assert!(find_memory_set(&zero, &id).unwrap().is_empty());

        let constant = MapTable::from_fn(4, 4, a2(), DEFAULT_BUDGET, |_| cfg("1,0,0,0")).unwrap();
        assert_eq!(
            find_memory_set(&constant, &id),
            Err(Error::EquivarianceRequired)
        );
    }

    #[test]
    fn reconstruct_examples() {
        let proj = hom(6, 3, 1);
        let s = phi_star(&proj, a2()).tabulate(DEFAULT_BUDGET).unwrap();
        let rule = reconstruct_rule(&s, &proj, &[0]).unwrap();
        assert_eq!(rule, LocalRule::identity(a2(), 0));

        let t = xor_z4();
        let id = GroupHom::identity(t.source_group());
        let table = t.tabulate(DEFAULT_BUDGET).unwrap();
        let full = reconstruct_rule(&table, &id, &[0, 1, 2, 3]).unwrap();
        assert_eq!(
            PhiCA::new(id.clone(), full).unwrap().tabulate(DEFAULT_BUDGET).unwrap(),
            table
        );
        match reconstruct_rule(&table, &id, &[1]) {
            Err(Error::ConstancyViolation { support, .. }) => assert_eq!(support, vec![1]),
            other => panic!("expected constancy violation, got {other:?}"),
        }
    }

    #[test]
    fn injectivity_examples() {
        let q = phi_star(&hom(6, 3, 1), a2());
        assert!(is_injective(&q, DEFAULT_BUDGET).unwrap());
        assert!(!is_surjective(&q, DEFAULT_BUDGET).unwrap());

        let i = phi_star(&hom(2, 4, 2), a2());
        assert!(is_surjective(&i, DEFAULT_BUDGET).unwrap());
        assert!(!is_injective(&i, DEFAULT_BUDGET).unwrap());

        let id = phi_star(&GroupHom::identity(&make_cyclic(5).unwrap()), a2());
        assert!(is_injective(&id, DEFAULT_BUDGET).unwrap());
        assert!(is_surjective(&id, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn f_tau_examples() {
        let t = xor_z4();
        assert_eq!(f_tau(&t, &cfg("1,0,0,0")).unwrap(), 0);
        assert_eq!(f_tau(&t, &cfg("0,1,0,0")).unwrap(), 1);
        let s = phi_star(&hom(6, 3, 1), a2());
        assert_eq!(f_tau(&s, &cfg("1,0,0")).unwrap(), 1);
        assert_eq!(f_tau(&s, &cfg("0,1,1")).unwrap(), 0);
    }

    #[test]
    fn run_examples() {
        let t = xor_z4();
        let x0 = cfg("1,0,0,0");
        assert_eq!(run(&t, &x0, 0).unwrap(), vec![x0.clone()]);
        let trace = run(&t, &x0, 3).unwrap();
        assert_eq!(trace.len(), 4);
        assert_eq!(trace[1], cfg("0,1,0,1"));
        assert_eq!(trace[3], cfg("0,0,0,0"));

        let s = phi_star(&hom(2, 4, 2), a2());
        assert!(matches!(run(&s, &x0, 1), Err(Error::NotIterable(_))));
    }

    #[test]
    fn subset_order() {
        assert_eq!(
            subsets_of_size(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(subsets_of_size(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets_of_size(2, 3).is_empty());
    }

    #[test]
    fn rule_validation() {
        assert!(LocalRule::new(a2(), vec![0, 0], vec![0; 4]).is_err());
        assert!(LocalRule::new(a2(), vec![0, 1], vec![0; 3]).is_err());
        assert!(LocalRule::new(a2(), vec![0], vec![0, 2]).is_err());
        let g = make_cyclic(3).unwrap();
        let r = LocalRule::identity(a2(), 3);
        assert!(PhiCA::classical(&g, r).is_err());
    }
}
