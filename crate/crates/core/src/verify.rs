//! Exhaustive and seeded verification suites for the structural theorems:
//! the decomposition of `φ*`, the four properties of `φ*`, the finite
//! Curtis–Hedlund characterization, linearity, and quotient covers.
//!
//! Each suite walks its instances in a fixed order and returns a
//! [`VerifyReport`]; identical parameters give identical reports apart from
//! `wall_time_ms`.

use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automaton::{
    check_equivariant, compose, decompose_ca, find_memory_set, find_memory_set_exhaustive,
    is_memory_set, minimal_memory_sets, phi_star, reconstruct_rule, LocalRule, MapTable, PhiCA,
};
use crate::config::{for_each_config, Alphabet, DEFAULT_BUDGET};
use crate::covering::{
    build_circulant, fold_number, induced_injective_ca, is_covering, quotient_cover, GraphMap,
    GraphSpec,
};
use crate::error::{Error, Result};
use crate::group::{enumerate_homs, make_cyclic, quotient, GroupHom};
use crate::io::HomSpec;
use crate::linear::{
    dependency_set, flatten, is_linear_ca, is_linear_map, is_linear_rule, matrix_form,
    LinearLocalRule, VectorAlphabet,
};

/// Random instances drawn by the Curtis–Hedlund suite, per polarity.
pub const CURTIS_HEDLUND_INSTANCES: usize = 100;
/// Random linear tables drawn by the linearity suite.
pub const LINEAR_CH_INSTANCES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Decomposition,
    StarLemma,
    CurtisHedlund,
    Linearity,
    Covering,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [
        Suite::Decomposition,
        Suite::StarLemma,
        Suite::CurtisHedlund,
        Suite::Linearity,
        Suite::Covering,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Decomposition => "decomposition",
            Suite::StarLemma => "star-lemma",
            Suite::CurtisHedlund => "curtis-hedlund",
            Suite::Linearity => "linearity",
            Suite::Covering => "covering",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyParams {
    pub max_order: usize,
    pub alphabet: Alphabet,
    pub seed: u64,
    pub budget: u64,
}

impl VerifyParams {
    pub fn new(max_order: usize, q: usize, seed: u64) -> Result<Self> {
        Ok(VerifyParams {
            max_order,
            alphabet: Alphabet::new(q)?,
            seed,
            budget: DEFAULT_BUDGET,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub first_counterexample: Option<Value>,
    pub wall_time_ms: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<VerifyReport>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} instances, {} passed, {} failed",
            self.suite, self.instances, self.passed, self.failed
        )
    }
}

#[derive(Default)]
struct Tally {
    instances: usize,
    failed: usize,
    first: Option<Value>,
}

impl Tally {
    fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> Value) {
        self.instances += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(counterexample());
            }
        }
    }

    /// Records an instance whose check itself errored as a failure.
    fn record_result(&mut self, outcome: Result<bool>, counterexample: impl FnOnce() -> Value) {
        match outcome {
            Ok(ok) => self.record(ok, counterexample),
            Err(e) => self.record(false, || {
                let mut v = counterexample();
                v["error"] = json!(e.to_string());
                v
            }),
        }
    }

    fn into_report(self, suite: &str, started: Instant) -> VerifyReport {
        VerifyReport {
            suite: suite.to_string(),
            instances: self.instances,
            passed: self.instances - self.failed,
            failed: self.failed,
            first_counterexample: self.first,
            wall_time_ms: started.elapsed().as_millis() as u64,
            parts: Vec::new(),
        }
    }
}

fn hom_json(f: &GroupHom) -> Value {
    serde_json::to_value(HomSpec::from(f)).expect("hom specs always serialize")
}

fn cyclic_homs(m: usize, n: usize) -> Result<Vec<GroupHom>> {
    enumerate_homs(&make_cyclic(m)?, &make_cyclic(n)?)
}

/// First input on which two tables differ.
fn first_difference(a: &MapTable, b: &MapTable) -> Option<usize> {
    (0..a.len()).find(|&i| a.output(i) != b.output(i))
}

pub fn run_suite(suite: Suite, params: &VerifyParams) -> Result<VerifyReport> {
    match suite {
        Suite::Decomposition => decomposition(params),
        Suite::StarLemma => star_lemma(params),
        Suite::CurtisHedlund => curtis_hedlund(params),
        Suite::Linearity => linearity(params),
        Suite::Covering => covering(params),
        Suite::All => {
            let started = Instant::now();
            let parts = Suite::EACH
                .iter()
                .map(|&s| run_suite(s, params))
                .collect::<Result<Vec<_>>>()?;
            let instances = parts.iter().map(|p| p.instances).sum();
            let failed = parts.iter().map(|p| p.failed).sum();
            Ok(VerifyReport {
                suite: "all".into(),
                instances,
                passed: instances - failed,
                failed,
                first_counterexample: parts.iter().find_map(|p| p.first_counterexample.clone()),
                wall_time_ms: started.elapsed().as_millis() as u64,
                parts,
            })
        }
    }
}

/// `ψ1* ∘ ψ2* = φ*` for every `φ ∈ Hom(Z_m, Z_n)`, `m, n <= max_order`.
pub fn decomposition(params: &VerifyParams) -> Result<VerifyReport> {
    let started = Instant::now();
    let mut tally = Tally::default();
    let a = params.alphabet;
    for m in 1..=params.max_order {
        for n in 1..=params.max_order {
            for phi in cyclic_homs(m, n)? {
                let outcome = (|| {
                    let target = phi_star(&phi, a).tabulate(params.budget)?;
                    let (p1, p2) = decompose_ca(&phi, a)?;
                    let chained = p2.tabulate(params.budget)?.then(&p1.tabulate(params.budget)?)?;
                    let composed = compose(&p1, &p2)?.tabulate(params.budget)?;
                    Ok(first_difference(&chained, &target)
                        .or_else(|| first_difference(&composed, &target)))
                })();
                let outcome: Result<Option<usize>> = outcome;
                let diff = outcome.as_ref().ok().copied().flatten();
                tally.record_result(outcome.map(|d| d.is_none()), || {
                    json!({
                        "phi": hom_json(&phi),
                        "input": diff.map(|i| crate::config::Configuration::from_index(i, n, a).to_string()),
                    })
                });
            }
        }
    }
    Ok(tally.into_report("decomposition", started))
}

/// The four properties of `φ*`: faithfulness, contravariance, and the
/// surjective/injective duality.
pub fn star_lemma(params: &VerifyParams) -> Result<VerifyReport> {
    let started = Instant::now();
    let mut tally = Tally::default();
    let a = params.alphabet;
    let max = params.max_order;

    // (1) φ* = ψ* iff φ = ψ
    for m in 1..=max {
        for n in 1..=max {
            let homs = cyclic_homs(m, n)?;
            let tables = homs
                .iter()
                .map(|f| phi_star(f, a).tabulate(params.budget))
                .collect::<Result<Vec<_>>>()?;
            for (i, f) in homs.iter().enumerate() {
                for (j, g) in homs.iter().enumerate() {
                    let ok = (tables[i] == tables[j]) == (f == g);
                    tally.record(ok, || {
                        json!({"part": 1, "phi": hom_json(f), "psi": hom_json(g)})
                    });
                }
            }
        }
    }

    // (2) (ψ∘φ)* = φ* ∘ ψ* for φ: Z_k -> Z_h, ψ: Z_h -> Z_g
    for k in 1..=max {
        for h in 1..=max {
            let firsts = cyclic_homs(k, h)?;
            let first_tables = firsts
                .iter()
                .map(|f| phi_star(f, a).tabulate(params.budget))
                .collect::<Result<Vec<_>>>()?;
            for g in 1..=max {
                for psi in cyclic_homs(h, g)? {
                    let psi_table = phi_star(&psi, a).tabulate(params.budget)?;
                    for (phi, phi_table) in firsts.iter().zip(&first_tables) {
                        let outcome = (|| {
                            let lhs = phi_star(&phi.then(&psi)?, a).tabulate(params.budget)?;
                            let rhs = psi_table.then(phi_table)?;
                            Ok(lhs == rhs)
                        })();
                        tally.record_result(outcome, || {
                            json!({"part": 2, "phi": hom_json(phi), "psi": hom_json(&psi)})
                        });
                    }
                }
            }
        }
    }

    // (3) φ surjective iff φ* injective; (4) φ injective iff φ* surjective
    for m in 1..=max {
        for n in 1..=max {
            for f in cyclic_homs(m, n)? {
                let table = phi_star(&f, a).tabulate(params.budget)?;
                tally.record(f.is_surjective() == table.is_injective(), || {
                    json!({"part": 3, "phi": hom_json(&f)})
                });
                tally.record(f.is_injective() == table.is_surjective(), || {
                    json!({"part": 4, "phi": hom_json(&f)})
                });
            }
        }
    }
    Ok(tally.into_report("star-lemma", started))
}

fn random_hom<R: Rng>(rng: &mut R, m: usize, n: usize) -> Result<GroupHom> {
    let homs = cyclic_homs(m, n)?;
    Ok(homs.choose(rng).expect("the trivial hom always exists").clone())
}

/// A random ordered memory list of at most `cap` distinct cells of `Z_n`.
fn random_memory<R: Rng>(rng: &mut R, n: usize, cap: usize) -> Vec<usize> {
    let size = rng.gen_range(0..=n.min(cap));
    let mut cells: Vec<usize> = (0..n).collect();
    cells.shuffle(rng);
    cells.truncate(size);
    cells
}

fn rule_json(t: &PhiCA) -> Value {
    crate::io::RuleSpec::from_automaton(t, None)
        .ok()
        .and_then(|s| serde_json::to_value(s).ok())
        .unwrap_or(Value::Null)
}

/// Seeded automata pass equivariance, have a verified minimal memory set and
/// reconstruct exactly; perturbed tables are rejected.
pub fn curtis_hedlund(params: &VerifyParams) -> Result<VerifyReport> {
    let started = Instant::now();
    let mut tally = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let a = params.alphabet;
    let max = params.max_order.max(1);

    for _ in 0..CURTIS_HEDLUND_INSTANCES {
        let (m, n) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
        let phi = random_hom(&mut rng, m, n)?;
        let memory = random_memory(&mut rng, n, 4);
        let rule = LocalRule::random(a, memory.clone(), &mut rng)?;
        let t = PhiCA::new(phi.clone(), rule)?;
        let outcome = (|| {
            let f = t.tabulate(params.budget)?;
            if !check_equivariant(&f, &phi) {
                return Ok(false);
            }
            let found = find_memory_set(&f, &phi)?;
            if !found.iter().all(|s| memory.contains(s)) {
                return Ok(false);
            }
            if n <= crate::automaton::SUBSET_SEARCH_LIMIT {
                if find_memory_set_exhaustive(&f, &phi)? != found {
                    return Ok(false);
                }
                if minimal_memory_sets(&f, &phi)? != vec![found.clone()] {
                    return Ok(false);
                }
            }
            let rebuilt = PhiCA::new(phi.clone(), reconstruct_rule(&f, &phi, &found)?)?;
            if rebuilt.tabulate(params.budget)? != f {
                return Ok(false);
            }
            Ok(reconstruct_rule(&f, &phi, &memory)? == *t.rule())
        })();
        tally.record_result(outcome, || json!({"kind": "equivariant", "rule": rule_json(&t)}));
    }

    // A single changed output entry breaks equivariance whenever |H| >= 2.
    for _ in 0..CURTIS_HEDLUND_INSTANCES {
        let (m, n) = (rng.gen_range(2..=max.max(2)), rng.gen_range(1..=max));
        let phi = random_hom(&mut rng, m, n)?;
        let memory = random_memory(&mut rng, n, 4);
        let rule = LocalRule::random(a, memory, &mut rng)?;
        let t = PhiCA::new(phi.clone(), rule)?;
        let f = t.tabulate(params.budget)?;
        let row = rng.gen_range(0..f.len());
        let cell = rng.gen_range(0..m);
        let bump = rng.gen_range(1..a.size());
        let mut outputs = Vec::with_capacity(f.len() * m);
        for i in 0..f.len() {
            outputs.extend_from_slice(f.output(i));
        }
        let slot = row * m + cell;
        outputs[slot] = ((outputs[slot] as usize + bump) % a.size()) as u8;
        let perturbed = MapTable::new(n, m, a, outputs)?;
        let all: Vec<usize> = (0..n).collect();
        let rejected = !check_equivariant(&perturbed, &phi)
            && matches!(find_memory_set(&perturbed, &phi), Err(Error::EquivarianceRequired))
            && reconstruct_rule(&perturbed, &phi, &all).is_err();
        tally.record(rejected, || {
            json!({
                "kind": "perturbed",
                "rule": rule_json(&t),
                "row": row,
                "cell": cell,
            })
        });
    }
    Ok(tally.into_report("curtis-hedlund", started))
}

/// Smallest `M` (by size, then lexicographically) such that every `x`
/// vanishing on `M` has `f(x)(e_H) = 0`, by scanning the subset lattice.
pub fn vanishing_support_brute_force(f: &MapTable, e_h: usize) -> Vec<usize> {
    let n = f.source_cells();
    let q = f.alphabet().size();
    let mut best: Option<Vec<usize>> = None;
    for mask in 0u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|&g| mask & (1 << g) != 0).collect();
        if let Some(b) = &best {
            if subset.len() > b.len() || (subset.len() == b.len() && subset >= *b) {
                continue;
            }
        }
        let mut holds = true;
        for_each_config(n, q, 0..f.len(), |i, x| {
            if holds && subset.iter().all(|&g| x[g] == 0) && f.output(i)[e_h] != 0 {
                holds = false;
            }
        });
        if holds {
            best = Some(subset);
        }
    }
    best.unwrap_or_else(|| (0..n).collect())
}

/// Local/global linearity equivalence, circulant matrix form, and the
/// linear dependency-set reconstruction.
pub fn linearity(params: &VerifyParams) -> Result<VerifyReport> {
    let started = Instant::now();
    let mut tally = Tally::default();
    let p = params.alphabet.size();
    let field = VectorAlphabet::new(p, 1)?;
    let a = field.alphabet();
    let z4 = make_cyclic(4)?;

    // every rule on a two-cell memory over Z_4, or a seeded sample when there are too many
    let pattern_count = p * p;
    let rule_count = (p as u128).checked_pow(pattern_count as u32).unwrap_or(u128::MAX);
    let rules: Vec<Vec<u8>> = if rule_count <= 1 << 16 {
        (0..rule_count as usize)
            .map(|code| {
                let mut table = vec![0u8; pattern_count];
                crate::config::decode_index(code, p, &mut table);
                table
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        (0..1000)
            .map(|_| (0..pattern_count).map(|_| rng.gen_range(0..p) as u8).collect())
            .collect()
    };
    let mut linear_count = 0;
    for table in &rules {
        let rule = LocalRule::new(a, vec![0, 1], table.clone())?;
        let outcome = (|| {
            let local = is_linear_rule(&rule, field)?.is_some();
            let global = is_linear_ca(&PhiCA::classical(&z4, rule.clone())?, field, params.budget)?;
            if local {
                linear_count += 1;
            }
            Ok(local == global)
        })();
        tally.record_result(outcome, || json!({"part": "equivalence", "table": table}));
    }
    if rule_count <= 1 << 16 {
        tally.record(linear_count == pattern_count, || {
            json!({"part": "linear-count", "expected": pattern_count, "found": linear_count})
        });
    }

    // sum of the two neighbors on Z_n is circulant with ones at offsets 1 and n-1
    for n in 4..=params.max_order {
        let g = make_cyclic(n)?;
        let rule = LocalRule::from_fn(a, vec![1, n - 1], |pat| field.add(pat[0], pat[1]))?;
        let t = PhiCA::classical(&g, rule)?;
        let outcome = (|| {
            let m = matrix_form(&t, field, params.budget)?;
            let first_row_ok = (0..n).all(|c| m.get(0, c) == u8::from(c == 1 || c == n - 1));
            if !m.is_circulant() || !first_row_ok {
                return Ok(false);
            }
            let table = t.tabulate(params.budget)?;
            let mut ok = true;
            for_each_config(n, p, 0..table.len(), |i, x| {
                if ok && m.mul_vec(&flatten(field, x)) != table.output(i) {
                    ok = false;
                }
            });
            Ok(ok)
        })();
        tally.record_result(outcome, || json!({"part": "matrix", "n": n}));
    }

    // linear tables: dependency set carries a rule reproducing the table
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(1));
    let max = params.max_order.max(1);
    for _ in 0..LINEAR_CH_INSTANCES {
        let (m, n) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
        let phi = random_hom(&mut rng, m, n)?;
        let memory = random_memory(&mut rng, n, 3);
        let lin = LinearLocalRule::random(field, memory.clone(), &mut rng)?;
        let t = PhiCA::new(phi.clone(), lin.to_local_rule()?)?;
        let outcome = (|| {
            let f = t.tabulate(params.budget)?;
            if !is_linear_map(&f, field)? || !check_equivariant(&f, &phi) {
                return Ok(false);
            }
            let dep = dependency_set(&f, &phi, field)?;
            if dep != vanishing_support_brute_force(&f, phi.domain().identity()) {
                return Ok(false);
            }
            if !dep.iter().all(|s| memory.contains(s)) || !is_memory_set(&f, &phi, &dep) {
                return Ok(false);
            }
            let rebuilt = PhiCA::new(phi.clone(), reconstruct_rule(&f, &phi, &dep)?)?;
            Ok(rebuilt.tabulate(params.budget)? == f)
        })();
        tally.record_result(outcome, || json!({"part": "dependency", "rule": rule_json(&t)}));
    }
    Ok(tally.into_report("linearity", started))
}

/// Every symmetric, identity-free subset of `Z_n` that generates `Z_n`,
/// ordered by the bitmask over inverse-pair representatives `1..=n/2`.
pub fn symmetric_generating_sets(n: usize) -> Vec<Vec<usize>> {
    let reps: Vec<usize> = (1..=n / 2).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << reps.len()) {
        let mut s = Vec::new();
        for (i, &r) in reps.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s.push(r);
                if n - r != r {
                    s.push(n - r);
                }
            }
        }
        s.sort_unstable();
        let gcd = s.iter().fold(n, |acc, &x| num_integer::gcd(acc, x));
        if gcd == 1 {
            out.push(s);
        }
    }
    out
}

/// Quotient covers of every circulant on `Z_n`, `n <= max_order`, by every
/// proper nontrivial subgroup.
pub fn covering(params: &VerifyParams) -> Result<VerifyReport> {
    let started = Instant::now();
    let mut tally = Tally::default();
    for n in 1..=params.max_order {
        let g = make_cyclic(n)?;
        let subgroups: Vec<_> = g
            .cyclic_subgroups()?
            .into_iter()
            .filter(|s| s.order() > 1 && s.order() < n)
            .collect();
        let connections = symmetric_generating_sets(n);
        for normal in &subgroups {
            let k = n / normal.order();
            for s in &connections {
                let graph = build_circulant(&g, s)?;
                // residues mod k must be nonzero and pairwise distinct
                let mut residues: Vec<usize> = s.iter().map(|&x| x % k).collect();
                residues.sort_unstable();
                let admissible = residues[0] != 0 && residues.windows(2).all(|w| w[0] != w[1]);
                let outcome = (|| {
                    if admissible {
                        let (target, cover) = quotient_cover(&graph, normal)?;
                        let ok = is_covering(cover.map())
                            && fold_number(cover.map())? == normal.order()
                            && target.degree() == s.len();
                        if !ok {
                            return Ok(false);
                        }
                        if k <= 10 {
                            let t = induced_injective_ca(&cover, params.alphabet, params.budget)?;
                            return Ok(t.tabulate(params.budget)?.is_injective());
                        }
                        Ok(true)
                    } else {
                        let named = matches!(
                            quotient_cover(&graph, normal),
                            Err(Error::CoverDegenerate(_))
                        );
                        let (q, proj) = quotient(&g, normal)?;
                        let image: Vec<usize> = s.iter().map(|&x| proj.apply(x)).collect();
                        let naive_is_cover = match build_circulant(&q, &image) {
                            Ok(target) => {
                                is_covering(&GraphMap::new(graph.clone(), target, proj.table().to_vec())?)
                            }
                            Err(_) => false,
                        };
                        Ok(named && !naive_is_cover)
                    }
                })();
                tally.record_result(outcome, || {
                    json!({
                        "graph": GraphSpec::from(&graph),
                        "normal": normal.members(),
                        "admissible": admissible,
                    })
                });
            }
        }
    }
    Ok(tally.into_report("covering", started))
}
