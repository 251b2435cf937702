//! Linear φ-cellular automata over vector alphabets `GF(p)^d`.
//!
//! A state index encodes a vector little-endian in base `p`: component `i` of
//! state `a` is `(a / p^i) mod p`. Configurations flatten element-major,
//! coordinate-minor, so cell `g` coordinate `c` is position `g·d + c` in every
//! matrix produced here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{reconstruct_rule, check_equivariant, LocalRule, MapTable, PhiCA};
use crate::config::{check_distinct, decode_index, encode_index, Alphabet};
use crate::error::{Error, Result};
use crate::group::GroupHom;

/// Tables with at most this many rows are checked on every pair of inputs.
pub const PAIRWISE_LIMIT: usize = 1 << 10;

const TRIPWIRE_PAIRS: usize = 256;

/// `GF(p)^d` as an alphabet of `p^d <= 255` states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VectorAlphabet {
    p: usize,
    d: usize,
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

impl VectorAlphabet {
    pub fn new(p: usize, d: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if d == 0 {
            return Err(Error::InvalidField("dimension must be at least 1".into()));
        }
        let q = (0..d).try_fold(1usize, |acc, _| acc.checked_mul(p));
        match q {
            Some(q) if q <= 255 => Ok(VectorAlphabet { p, d }),
            _ => Err(Error::InvalidField(format!("{p}^{d} states exceed 255"))),
        }
    }

    /// `GF(2)` as a one-dimensional space.
    pub fn binary() -> Self {
        VectorAlphabet { p: 2, d: 1 }
    }

    pub fn prime(self) -> usize {
        self.p
    }

    pub fn dim(self) -> usize {
        self.d
    }

    pub fn size(self) -> usize {
        self.p.pow(self.d as u32)
    }

    pub fn alphabet(self) -> Alphabet {
        Alphabet::new(self.size()).expect("validated on construction")
    }

    pub fn component(self, a: u8, i: usize) -> usize {
        (a as usize / self.p.pow(i as u32)) % self.p
    }

    pub fn from_components(self, comps: impl IntoIterator<Item = usize>) -> u8 {
        let mut acc = 0;
        let mut w = 1;
        for c in comps.into_iter().take(self.d) {
            acc += (c % self.p) * w;
            w *= self.p;
        }
        acc as u8
    }

    /// The `i`-th standard basis vector.
    pub fn basis(self, i: usize) -> u8 {
        self.p.pow(i as u32) as u8
    }

    pub fn add(self, a: u8, b: u8) -> u8 {
        self.from_components((0..self.d).map(|i| self.component(a, i) + self.component(b, i)))
    }

    pub fn scale(self, k: usize, a: u8) -> u8 {
        self.from_components((0..self.d).map(|i| k * self.component(a, i)))
    }

    fn check_alphabet(self, alphabet: Alphabet) -> Result<()> {
        if alphabet.size() == self.size() {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(alphabet.size(), self.size()))
        }
    }
}

/// A dense matrix over `GF(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    p: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, p: usize) -> Self {
        Matrix {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<usize>>, p: usize) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(rows.len(), cols, p);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, (v % p) as u8);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        (0..self.rows)
            .map(|r| {
                let s: usize = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as usize * b as usize)
                    .sum();
                (s % self.p) as u8
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || self.p != other.p {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols, self.p);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let s: usize = (0..self.cols)
                    .map(|k| self.get(r, k) as usize * other.get(k, c) as usize)
                    .sum();
                out.set(r, c, (s % self.p) as u8);
            }
        }
        Ok(out)
    }

    /// Every block-row of height `block` is the previous one cyclically
    /// shifted right by one block. With `block = 1` this is ordinary circulance.
    pub fn is_block_circulant(&self, block: usize) -> bool {
        if block == 0 || self.rows % block != 0 || self.cols % block != 0 {
            return false;
        }
        let cols = self.cols;
        (block..self.rows).all(|r| {
            (0..cols).all(|c| self.get(r, c) == self.get(r - block, (c + cols - block) % cols))
        })
    }

    pub fn is_circulant(&self) -> bool {
        self.rows == self.cols && self.is_block_circulant(1)
    }

    /// One CSV line per row.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(u8::to_string).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

/// `μ(p) = Σ_s M_s · p(s)` with one `d × d` coefficient matrix per memory cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearLocalRule {
    field: VectorAlphabet,
    memory: Vec<usize>,
    coefficients: Vec<Matrix>,
}

impl LinearLocalRule {
    pub fn new(field: VectorAlphabet, memory: Vec<usize>, coefficients: Vec<Matrix>) -> Result<Self> {
        check_distinct(&memory)?;
        if memory.len() != coefficients.len() {
            return Err(Error::LengthMismatch {
                expected: memory.len(),
                found: coefficients.len(),
            });
        }
        for m in &coefficients {
            if m.rows != field.d || m.cols != field.d || m.p != field.p {
                return Err(Error::InvalidField(format!(
                    "coefficient is {}x{} over GF({}), expected {d}x{d} over GF({})",
                    m.rows,
                    m.cols,
                    m.p,
                    field.p,
                    d = field.d
                )));
            }
        }
        Ok(LinearLocalRule {
            field,
            memory,
            coefficients,
        })
    }

    pub fn random<R: Rng + ?Sized>(
        field: VectorAlphabet,
        memory: Vec<usize>,
        rng: &mut R,
    ) -> Result<Self> {
        let coefficients = memory
            .iter()
            .map(|_| {
                let rows = (0..field.d)
                    .map(|_| (0..field.d).map(|_| rng.gen_range(0..field.p)).collect())
                    .collect();
                Matrix::from_rows(rows, field.p)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, memory, coefficients)
    }

    pub fn field(&self) -> VectorAlphabet {
        self.field
    }

    pub fn memory(&self) -> &[usize] {
        &self.memory
    }

    pub fn coefficients(&self) -> &[Matrix] {
        &self.coefficients
    }

    pub fn eval(&self, pattern: &[u8]) -> u8 {
        let f = self.field;
        let mut acc = vec![0usize; f.d];
        for (m, &v) in self.coefficients.iter().zip(pattern) {
            let comps: Vec<u8> = (0..f.d).map(|i| f.component(v, i) as u8).collect();
            for (slot, y) in acc.iter_mut().zip(m.mul_vec(&comps)) {
                *slot += y as usize;
            }
        }
        f.from_components(acc)
    }

    pub fn to_local_rule(&self) -> Result<LocalRule> {
        LocalRule::from_fn(self.field.alphabet(), self.memory.clone(), |p| self.eval(p))
    }
}

fn add_configs(field: VectorAlphabet, a: &[u8], b: &[u8], out: &mut [u8]) {
    for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
        *o = field.add(x, y);
    }
}

/// Whether a tabulated map `V^G -> V^H` is `GF(p)`-linear.
///
/// Small tables are checked on every pair and every scalar. Larger ones are
/// compared against the linear extension of the standard-basis images on every
/// input, which is exact, followed by a seeded batch of random pairs.
pub fn is_linear_map(f: &MapTable, field: VectorAlphabet) -> Result<bool> {
    field.check_alphabet(f.alphabet())?;
    let q = field.size();
    let n = f.source_cells();
    let rows = f.len();
    let mut x = vec![0u8; n];
    let mut y = vec![0u8; n];
    let mut s = vec![0u8; n];
    let mut expect = vec![0u8; f.target_cells()];

    if f.output(0).iter().any(|&v| v != 0) {
        return Ok(false);
    }
    for k in 0..field.p {
        for i in 0..rows {
            decode_index(i, q, &mut x);
            for (o, &v) in s.iter_mut().zip(&x) {
                *o = field.scale(k, v);
            }
            for (o, &v) in expect.iter_mut().zip(f.output(i)) {
                *o = field.scale(k, v);
            }
            if f.output(encode_index(&s, q)) != expect.as_slice() {
                return Ok(false);
            }
        }
    }

    if rows <= PAIRWISE_LIMIT {
        for i in 0..rows {
            decode_index(i, q, &mut x);
            for j in i..rows {
                decode_index(j, q, &mut y);
                add_configs(field, &x, &y, &mut s);
                add_configs(field, f.output(i), f.output(j), &mut expect);
                if f.output(encode_index(&s, q)) != expect.as_slice() {
                    return Ok(false);
                }
            }
        }
        return Ok(true);
    }

    let basis_images: Vec<(usize, usize, Vec<u8>)> = (0..n)
        .flat_map(|g| (0..field.d).map(move |c| (g, c)))
        .map(|(g, c)| {
            let mut e = vec![0u8; n];
            e[g] = field.basis(c);
            (g, c, f.output(encode_index(&e, q)).to_vec())
        })
        .collect();
    for i in 0..rows {
        decode_index(i, q, &mut x);
        expect.iter_mut().for_each(|v| *v = 0);
        for (g, c, img) in &basis_images {
            let k = field.component(x[*g], *c);
            if k != 0 {
                for (o, &v) in expect.iter_mut().zip(img) {
                    *o = field.add(*o, field.scale(k, v));
                }
            }
        }
        if f.output(i) != expect.as_slice() {
            return Ok(false);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rows as u64);
    for _ in 0..TRIPWIRE_PAIRS {
        let (i, j) = (rng.gen_range(0..rows), rng.gen_range(0..rows));
        decode_index(i, q, &mut x);
        decode_index(j, q, &mut y);
        add_configs(field, &x, &y, &mut s);
        add_configs(field, f.output(i), f.output(j), &mut expect);
        if f.output(encode_index(&s, q)) != expect.as_slice() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn rule_as_table(rule: &LocalRule) -> Result<MapTable> {
    MapTable::new(rule.memory().len(), 1, rule.alphabet(), rule.table().to_vec())
}

/// Checks `μ(p + p') = μ(p) + μ(p')` and `μ(kp) = kμ(p)` over all patterns;
/// on success returns the coefficient matrices `M_s[i][j] = μ(e_{s,j})_i`.
pub fn is_linear_rule(rule: &LocalRule, field: VectorAlphabet) -> Result<Option<LinearLocalRule>> {
    let table = rule_as_table(rule)?;
    if !is_linear_map(&table, field)? {
        return Ok(None);
    }
    let q = field.size();
    let k = rule.memory().len();
    let mut coefficients = Vec::with_capacity(k);
    for pos in 0..k {
        let mut m = Matrix::zeros(field.d, field.d, field.p);
        for j in 0..field.d {
            let mut e = vec![0u8; k];
            e[pos] = field.basis(j);
            let img = table.output(encode_index(&e, q))[0];
            for i in 0..field.d {
                m.set(i, j, field.component(img, i) as u8);
            }
        }
        coefficients.push(m);
    }
    LinearLocalRule::new(field, rule.memory().to_vec(), coefficients).map(Some)
}

pub fn is_linear_ca(t: &PhiCA, field: VectorAlphabet, budget: u64) -> Result<bool> {
    field.check_alphabet(t.alphabet())?;
    is_linear_map(&t.tabulate(budget)?, field)
}

/// Matrix of a linear table, shape `(|H|·d) × (|G|·d)`.
pub fn matrix_form_table(f: &MapTable, field: VectorAlphabet) -> Result<Matrix> {
    if !is_linear_map(f, field)? {
        return Err(Error::LinearityRequired);
    }
    let (n, m, d, q) = (f.source_cells(), f.target_cells(), field.d, field.size());
    let mut out = Matrix::zeros(m * d, n * d, field.p);
    for g in 0..n {
        for c in 0..d {
            let mut e = vec![0u8; n];
            e[g] = field.basis(c);
            let img = f.output(encode_index(&e, q));
            for (h, &v) in img.iter().enumerate() {
                for i in 0..d {
                    out.set(h * d + i, g * d + c, field.component(v, i) as u8);
                }
            }
        }
    }
    Ok(out)
}

pub fn matrix_form(t: &PhiCA, field: VectorAlphabet, budget: u64) -> Result<Matrix> {
    field.check_alphabet(t.alphabet())?;
    matrix_form_table(&t.tabulate(budget)?, field)
}

/// Flattens a configuration into its coordinate vector.
pub fn flatten(field: VectorAlphabet, values: &[u8]) -> Vec<u8> {
    values
        .iter()
        .flat_map(|&v| (0..field.d).map(move |i| field.component(v, i) as u8))
        .collect()
}

/// Inverse of [`flatten`].
pub fn unflatten(field: VectorAlphabet, coords: &[u8]) -> Vec<u8> {
    coords
        .chunks(field.d)
        .map(|c| field.from_components(c.iter().map(|&v| v as usize)))
        .collect()
}

/// The smallest `M ⊆ G` such that `f(x)(e_H) = 0` whenever `x` vanishes on `M`.
///
/// For a linear map this is the support of the functional `x ↦ f(x)(e_H)`,
/// read off the basis images. The set is then confirmed to carry a local rule
/// reproducing `f`.
pub fn dependency_set(f: &MapTable, phi: &GroupHom, field: VectorAlphabet) -> Result<Vec<usize>> {
    if !is_linear_map(f, field)? {
        return Err(Error::LinearityRequired);
    }
    if !check_equivariant(f, phi) {
        return Err(Error::EquivarianceRequired);
    }
    let (n, q) = (f.source_cells(), field.size());
    let e_h = phi.domain().identity();
    let support: Vec<usize> = (0..n)
        .filter(|&g| {
            (0..field.d).any(|c| {
                let mut e = vec![0u8; n];
                e[g] = field.basis(c);
                f.output(encode_index(&e, q))[e_h] != 0
            })
        })
        .collect();
    reconstruct_rule(f, phi, &support).map_err(|e| {
        Error::Internal(format!(
            "dependency set {support:?} does not carry a local rule: {e}"
        ))
    })?;
    Ok(support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::phi_star;
    use crate::config::DEFAULT_BUDGET;
    use crate::group::make_cyclic;

    fn z(n: usize) -> crate::group::FiniteGroup {
        make_cyclic(n).unwrap()
    }

    fn gf2() -> VectorAlphabet {
        VectorAlphabet::binary()
    }

    fn classical(n: usize, memory: Vec<usize>, f: impl FnMut(&[u8]) -> u8) -> PhiCA {
        let rule = LocalRule::from_fn(gf2().alphabet(), memory, f).unwrap();
        PhiCA::classical(&z(n), rule).unwrap()
    }

    #[test]
    fn field_arithmetic() {
        let f = VectorAlphabet::new(3, 2).unwrap();
        assert_eq!(f.size(), 9);
        // (1,2) + (2,2) = (0,1)
        let a = f.from_components([1, 2]);
        let b = f.from_components([2, 2]);
        assert_eq!(f.add(a, b), f.from_components([0, 1]));
        assert_eq!(f.scale(2, a), f.from_components([2, 1]));
        assert!(VectorAlphabet::new(4, 1).is_err());
        assert!(VectorAlphabet::new(2, 8).is_err());
        assert!(VectorAlphabet::new(2, 0).is_err());
    }

    #[test]
    fn linear_rule_examples() {
        let a = gf2().alphabet();
        let xor = LocalRule::from_fn(a, vec![1, 3], |p| p[0] ^ p[1]).unwrap();
        let lin = is_linear_rule(&xor, gf2()).unwrap().unwrap();
        let coeffs: Vec<u8> = lin.coefficients().iter().map(|m| m.get(0, 0)).collect();
        assert_eq!(coeffs, vec![1, 1]);
        assert_eq!(lin.to_local_rule().unwrap(), xor);

        let and = LocalRule::from_fn(a, vec![1, 3], |p| p[0] & p[1]).unwrap();
        assert!(is_linear_rule(&and, gf2()).unwrap().is_none());

        let zero = LocalRule::from_fn(a, vec![0, 1], |_| 0).unwrap();
        let lin = is_linear_rule(&zero, gf2()).unwrap().unwrap();
        assert!(lin.coefficients().iter().all(Matrix::is_zero));
    }

    #[test]
    fn linear_ca_examples() {
        let xor = classical(4, vec![1, 3], |p| p[0] ^ p[1]);
        assert!(is_linear_ca(&xor, gf2(), DEFAULT_BUDGET).unwrap());

        let maj = classical(5, vec![4, 0, 1], |p| ((p[0] + p[1] + p[2]) >= 2) as u8);
        assert!(!is_linear_ca(&maj, gf2(), DEFAULT_BUDGET).unwrap());

        let phi = GroupHom::from_generator_image(&z(6), &z(3), 1).unwrap();
        assert!(is_linear_ca(&phi_star(&phi, gf2().alphabet()), gf2(), DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn matrix_examples() {
        let xor = classical(4, vec![1, 3], |p| p[0] ^ p[1]);
        let m = matrix_form(&xor, gf2(), DEFAULT_BUDGET).unwrap();
        assert_eq!(m.row(0), &[0, 1, 0, 1]);
        assert_eq!(m.row(1), &[1, 0, 1, 0]);
        assert!(m.is_circulant());

        let id = classical(3, vec![0], |p| p[0]);
        let m = matrix_form(&id, gf2(), DEFAULT_BUDGET).unwrap();
        assert_eq!(m, Matrix::from_rows(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 2).unwrap());

        let zero = classical(3, vec![0, 1], |_| 0);
        assert!(matrix_form(&zero, gf2(), DEFAULT_BUDGET).unwrap().is_zero());

        let and = classical(3, vec![0, 1], |p| p[0] & p[1]);
        assert_eq!(
            matrix_form(&and, gf2(), DEFAULT_BUDGET),
            Err(Error::LinearityRequired)
        );
    }

    #[test]
    fn dependency_examples() {
        let xor = classical(4, vec![1, 3], |p| p[0] ^ p[1]);
        let id = GroupHom::identity(&z(4));
        let t = xor.tabulate(DEFAULT_BUDGET).unwrap();
        assert_eq!(dependency_set(&t, &id, gf2()).unwrap(), vec![1, 3]);

        let proj = GroupHom::from_generator_image(&z(6), &z(3), 1).unwrap();
        let s = phi_star(&proj, gf2().alphabet()).tabulate(DEFAULT_BUDGET).unwrap();
        assert_eq!(dependency_set(&s, &proj, gf2()).unwrap(), vec![0]);

        let zero = classical(4, vec![0, 2], |_| 0).tabulate(DEFAULT_BUDGET).unwrap();
        assert!(dependency_set(&zero, &id, gf2()).unwrap().is_empty());

        let and = classical(4, vec![0, 1], |p| p[0] & p[1]).tabulate(DEFAULT_BUDGET).unwrap();
        assert_eq!(dependency_set(&and, &id, gf2()), Err(Error::LinearityRequired));
    }

    #[test]
    fn large_table_uses_basis_route() {
        // 2^11 rows exceeds the pairwise limit
        let xor = classical(11, vec![1, 10], |p| p[0] ^ p[1]);
        assert!(is_linear_ca(&xor, gf2(), DEFAULT_BUDGET).unwrap());
        let and = classical(11, vec![1, 10], |p| p[0] & p[1]);
        assert!(!is_linear_ca(&and, gf2(), DEFAULT_BUDGET).unwrap());
        // affine: x + 1 fails at zero
        let affine = classical(11, vec![0], |p| p[0] ^ 1);
        assert!(!is_linear_ca(&affine, gf2(), DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn vector_alphabet_rules() {
        let f = VectorAlphabet::new(3, 2).unwrap();
        let g = z(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let lin = LinearLocalRule::random(f, vec![0, 2], &mut rng).unwrap();
        let t = PhiCA::classical(&g, lin.to_local_rule().unwrap()).unwrap();
        assert!(is_linear_ca(&t, f, DEFAULT_BUDGET).unwrap());
        let back = is_linear_rule(t.rule(), f).unwrap().unwrap();
        assert_eq!(back, lin);
        let m = matrix_form(&t, f, DEFAULT_BUDGET).unwrap();
        assert_eq!((m.rows(), m.cols()), (6, 6));
        assert!(m.is_block_circulant(2));
        for x in crate::config::enumerate_configs(&g, f.alphabet(), DEFAULT_BUDGET).unwrap() {
            let y = t.apply(&x).unwrap();
            assert_eq!(unflatten(f, &m.mul_vec(&flatten(f, x.values()))), y.values());
        }
    }
}
