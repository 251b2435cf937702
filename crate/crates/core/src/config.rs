//! Configurations `x: G -> A`, the left shift action, patterns and cylinders.
//!
//! A configuration is a dense array of state indices ordered by element
//! index. Enumeration order is lexicographic in that array: the first element
//! is the most significant digit, so index 0 is the all-zero configuration and
//! index 1 differs from it in the last cell.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Default cap on the number of configurations any exhaustive sweep may touch.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// A finite alphabet `{0, .., q-1}` with `q >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet(u8);

impl Alphabet {
    pub fn new(q: usize) -> Result<Self> {
        if (2..=255).contains(&q) {
            Ok(Alphabet(q as u8))
        } else {
            Err(Error::InvalidAlphabet(q))
        }
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn check_state(self, state: usize) -> Result<()> {
        if state < self.size() {
            Ok(())
        } else {
            Err(Error::StateOutOfRange {
                state,
                q: self.size(),
            })
        }
    }
}

/// `q^cells`, saturating at `u128::MAX`.
pub fn config_count(cells: usize, alphabet: Alphabet) -> u128 {
    let q = alphabet.size() as u128;
    let mut acc: u128 = 1;
    for _ in 0..cells {
        acc = acc.saturating_mul(q);
    }
    acc
}

/// Returns `q^cells` as a `usize` if it fits inside `budget`.
pub fn check_budget(cells: usize, alphabet: Alphabet, budget: u64) -> Result<usize> {
    let required = config_count(cells, alphabet);
    if required > budget as u128 || required > usize::MAX as u128 {
        Err(Error::EnumerationTooLarge { required, budget })
    } else {
        Ok(required as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    values: Vec<u8>,
    alphabet: Alphabet,
}

impl Configuration {
    pub fn new(values: Vec<u8>, alphabet: Alphabet) -> Result<Self> {
        for &v in &values {
            alphabet.check_state(v as usize)?;
        }
        Ok(Configuration { values, alphabet })
    }

    pub(crate) fn from_raw(values: Vec<u8>, alphabet: Alphabet) -> Self {
        debug_assert!(values.iter().all(|&v| (v as usize) < alphabet.size()));
        Configuration { values, alphabet }
    }

    pub fn zeros(cells: usize, alphabet: Alphabet) -> Self {
        Configuration {
            values: vec![0; cells],
            alphabet,
        }
    }

    /// The configuration at position `index` of the lexicographic enumeration.
    pub fn from_index(index: usize, cells: usize, alphabet: Alphabet) -> Self {
        let mut values = vec![0u8; cells];
        decode_index(index, alphabet.size(), &mut values);
        Configuration { values, alphabet }
    }

    /// Parses the text form `"1,0,1,0"`.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Configuration::zeros(0, alphabet));
        }
        let values = text
            .split(',')
            .map(|s| {
                let v: usize = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad state {s:?} in configuration")))?;
                alphabet.check_state(v)?;
                Ok(v as u8)
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Configuration { values, alphabet })
    }

    pub fn random<R: Rng + ?Sized>(cells: usize, alphabet: Alphabet, rng: &mut R) -> Self {
        let values = (0..cells)
            .map(|_| rng.gen_range(0..alphabet.size()) as u8)
            .collect();
        Configuration { values, alphabet }
    }

    /// Deterministic random configuration from a ChaCha8 stream seeded with `seed`.
    pub fn seeded(cells: usize, alphabet: Alphabet, seed: u64) -> Self {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Self::random(cells, alphabet, &mut rng)
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u8> {
        self.values
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, g: usize) -> u8 {
        self.values[g]
    }

    /// Position in the lexicographic enumeration.
    pub fn index(&self) -> usize {
        encode_index(&self.values, self.alphabet.size())
    }

    pub fn check_over(&self, group: &FiniteGroup) -> Result<()> {
        if self.len() == group.order() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: group.order(),
                found: self.len(),
            })
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub(crate) fn encode_index(values: &[u8], q: usize) -> usize {
    values.iter().fold(0, |acc, &v| acc * q + v as usize)
}

pub(crate) fn decode_index(mut index: usize, q: usize, out: &mut [u8]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % q) as u8;
        index /= q;
    }
}

/// Advances `values` to the lexicographic successor; returns false on wrap-around.
pub(crate) fn increment(values: &mut [u8], q: usize) -> bool {
    for slot in values.iter_mut().rev() {
        if (*slot as usize) + 1 < q {
            *slot += 1;
            return true;
        }
        *slot = 0;
    }
    false
}

/// Calls `f(index, values)` for every configuration in `range`, in order.
pub(crate) fn for_each_config(
    cells: usize,
    q: usize,
    range: std::ops::Range<usize>,
    mut f: impl FnMut(usize, &[u8]),
) {
    if range.is_empty() {
        return;
    }
    let mut values = vec![0u8; cells];
    decode_index(range.start, q, &mut values);
    for index in range {
        f(index, &values);
        increment(&mut values, q);
    }
}

/// `(g·x)(k) = x(g⁻¹k)`, written into `out`.
pub(crate) fn shift_into(group: &FiniteGroup, g: usize, x: &[u8], out: &mut [u8]) {
    let g_inv = group.inv(g);
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = x[group.op(g_inv, k)];
    }
}

/// The left shift `g·x`.
pub fn shift(group: &FiniteGroup, g: usize, x: &Configuration) -> Result<Configuration> {
    group.check_element(g)?;
    x.check_over(group)?;
    let mut out = vec![0u8; x.len()];
    shift_into(group, g, &x.values, &mut out);
    Ok(Configuration::from_raw(out, x.alphabet))
}

/// A finite pattern `p: Ω -> A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    support: Vec<usize>,
    values: Vec<u8>,
}

impl Pattern {
    pub fn new(support: Vec<usize>, values: Vec<u8>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: support.len(),
                found: values.len(),
            });
        }
        check_distinct(&support)?;
        Ok(Pattern { support, values })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

pub(crate) fn check_distinct(elements: &[usize]) -> Result<()> {
    let mut sorted = elements.to_vec();
    sorted.sort_unstable();
    match sorted.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(Error::DuplicateElement(w[0])),
        None => Ok(()),
    }
}

/// `x|_S`.
pub fn restrict(x: &Configuration, support: &[usize]) -> Result<Pattern> {
    for &s in support {
        if s >= x.len() {
            return Err(Error::ElementOutOfRange {
                element: s,
                order: x.len(),
            });
        }
    }
    let values = support.iter().map(|&s| x.values[s]).collect();
    Pattern::new(support.to_vec(), values)
}

/// True iff `x` and `y` agree on every element of `omega`. Vacuously true on `∅`.
pub fn same_on(x: &Configuration, y: &Configuration, omega: &[usize]) -> bool {
    omega.iter().all(|&w| x.values[w] == y.values[w])
}

/// The cylinder `V(x, S)`: every configuration agreeing with `x` on `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    base: Configuration,
    support: Vec<usize>,
}

impl Cylinder {
    pub fn new(base: Configuration, support: Vec<usize>) -> Result<Self> {
        restrict(&base, &support)?;
        Ok(Cylinder { base, support })
    }

    pub fn base(&self) -> &Configuration {
        &self.base
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn contains(&self, y: &Configuration) -> bool {
        y.len() == self.base.len() && same_on(&self.base, y, &self.support)
    }
}

/// Lexicographic stream over all of `A^G`, or over an index sub-range of it.
#[derive(Clone, Debug)]
pub struct ConfigEnumeration {
    cells: usize,
    alphabet: Alphabet,
    next: usize,
    end: usize,
}

impl ConfigEnumeration {
    /// Total number of configurations in the full space.
    pub fn total(&self) -> usize {
        config_count(self.cells, self.alphabet) as usize
    }

    /// Restricts the stream to positions `start..end` of the full order, for splitting sweeps.
    pub fn range(mut self, start: usize, end: usize) -> Self {
        let end = end.min(self.total());
        self.next = start.min(end);
        self.end = end;
        self
    }
}

impl Iterator for ConfigEnumeration {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        if self.next >= self.end {
            return None;
        }
        let c = Configuration::from_index(self.next, self.cells, self.alphabet);
        self.next += 1;
        Some(c)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.end - self.next;
        (n, Some(n))
    }
}

impl ExactSizeIterator for ConfigEnumeration {}

/// Every configuration of `A^G` in lexicographic order, guarded by `budget`.
pub fn enumerate_configs(
    group: &FiniteGroup,
    alphabet: Alphabet,
    budget: u64,
) -> Result<ConfigEnumeration> {
    let total = check_budget(group.order(), alphabet, budget)?;
    Ok(ConfigEnumeration {
        cells: group.order(),
        alphabet,
        next: 0,
        end: total,
    })
}
