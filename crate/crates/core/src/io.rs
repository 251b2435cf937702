//! File formats: group, homomorphism and rule JSON, map-table and trace CSV,
//! binary PGM space-time diagrams.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::automaton::{LocalRule, MapTable, PhiCA};
use crate::config::{Alphabet, Configuration};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom};
use crate::linear::{LinearLocalRule, Matrix, VectorAlphabet};

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// `{"kind":"cyclic","order":6}` or `{"kind":"table","table":[[..],..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic {
        order: usize,
    },
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic { order } => FiniteGroup::cyclic(*order),
            GroupSpec::Table { table, label } => {
                FiniteGroup::from_table(table, label.clone().unwrap_or_else(|| "G".into()))
            }
        }
    }
}

impl From<&FiniteGroup> for GroupSpec {
    fn from(g: &FiniteGroup) -> Self {
        if g.is_cyclic() {
            GroupSpec::Cyclic { order: g.order() }
        } else {
            GroupSpec::Table {
                table: g
                    .elements()
                    .map(|a| g.elements().map(|b| g.op(a, b)).collect())
                    .collect(),
                label: Some(g.label().to_string()),
            }
        }
    }
}

/// A group given either by its label (`"Z6"`) or by a full [`GroupSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Label(String),
    Spec(GroupSpec),
}

impl GroupRef {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupRef::Label(l) => FiniteGroup::from_label(l),
            GroupRef::Spec(s) => s.build(),
        }
    }
}

impl From<&FiniteGroup> for GroupRef {
    fn from(g: &FiniteGroup) -> Self {
        if g.is_cyclic() {
            GroupRef::Label(g.label().to_string())
        } else {
            GroupRef::Spec(g.into())
        }
    }
}

/// `{"domain":"Z6","codomain":"Z4","generator_image":2}` or the same with a
/// full `"map"` table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSpec {
    pub domain: GroupRef,
    pub codomain: GroupRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_image: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<usize>>,
}

impl HomSpec {
    pub fn build(&self) -> Result<GroupHom> {
        let domain = self.domain.build()?;
        let codomain = self.codomain.build()?;
        match (&self.generator_image, &self.map) {
            (Some(g), None) => GroupHom::from_generator_image(&domain, &codomain, *g),
            (None, Some(m)) => GroupHom::new(&domain, &codomain, m.clone()),
            (Some(g), Some(m)) => {
                let f = GroupHom::new(&domain, &codomain, m.clone())?;
                if f.generator_image() != Some(*g) {
                    return Err(Error::Parse(
                        "generator_image disagrees with map".into(),
                    ));
                }
                Ok(f)
            }
            (None, None) => Err(Error::Parse(
                "homomorphism needs generator_image or map".into(),
            )),
        }
    }
}

impl From<&GroupHom> for HomSpec {
    fn from(f: &GroupHom) -> Self {
        let generator_image = f.generator_image();
        HomSpec {
            domain: f.domain().into(),
            codomain: f.codomain().into(),
            map: generator_image.is_none().then(|| f.table().to_vec()),
            generator_image,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: usize,
    pub d: usize,
}

/// Rule file: a φ-automaton with its memory list and local table.
///
/// Table keys are the pattern states juxtaposed in memory order, one base-36
/// digit per state. Linear rules may give `field` and `coefficients` instead
/// of (or alongside) the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub group: GroupRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<HomSpec>,
    pub memory: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<BTreeMap<String, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<BTreeMap<String, Vec<Vec<usize>>>>,
}

pub fn pattern_key(pattern: &[u8]) -> String {
    pattern.iter().map(|&v| DIGITS[v as usize] as char).collect()
}

fn parse_key(key: &str, q: usize) -> Result<Vec<u8>> {
    key.chars()
        .map(|c| {
            c.to_digit(36)
                .filter(|&d| (d as usize) < q)
                .map(|d| d as u8)
                .ok_or_else(|| Error::Parse(format!("bad pattern key {key:?}")))
        })
        .collect()
}

impl RuleSpec {
    /// Serializes an automaton; coefficients are included when `field` is given.
    pub fn from_automaton(t: &PhiCA, field: Option<VectorAlphabet>) -> Result<Self> {
        if t.alphabet().size() > DIGITS.len() {
            return Err(Error::Parse(format!(
                "rule tables support at most {} states",
                DIGITS.len()
            )));
        }
        let rule = t.rule();
        let k = rule.memory().len();
        let mut table = BTreeMap::new();
        let mut pattern = vec![0u8; k];
        for (i, &v) in rule.table().iter().enumerate() {
            crate::config::decode_index(i, rule.alphabet().size(), &mut pattern);
            table.insert(pattern_key(&pattern), v as usize);
        }
        let (field_spec, coefficients) = match field {
            Some(f) => {
                let lin = crate::linear::is_linear_rule(rule, f)?.ok_or(Error::LinearityRequired)?;
                let coeffs = lin
                    .memory()
                    .iter()
                    .zip(lin.coefficients())
                    .map(|(s, m)| {
                        let rows = (0..m.rows())
                            .map(|r| m.row(r).iter().map(|&v| v as usize).collect())
                            .collect();
                        (s.to_string(), rows)
                    })
                    .collect();
                (
                    Some(FieldSpec {
                        p: f.prime(),
                        d: f.dim(),
                    }),
                    Some(coeffs),
                )
            }
            None => (None, None),
        };
        let phi = t.phi();
        let is_identity = *phi == GroupHom::identity(t.source_group());
        Ok(RuleSpec {
            group: t.source_group().into(),
            alphabet: Some(t.alphabet().size()),
            phi: (!is_identity).then(|| phi.into()),
            memory: rule.memory().to_vec(),
            table: Some(table),
            field: field_spec,
            coefficients,
        })
    }

    pub fn build(&self) -> Result<PhiCA> {
        let group = self.group.build()?;
        let phi = match &self.phi {
            Some(h) => h.build()?,
            None => GroupHom::identity(&group),
        };
        if phi.codomain() != &group {
            return Err(Error::GroupMismatch {
                expected: group.to_string(),
                found: phi.codomain().to_string(),
            });
        }
        let field = self
            .field
            .map(|f| VectorAlphabet::new(f.p, f.d))
            .transpose()?;
        let alphabet = match (self.alphabet, field) {
            (Some(q), Some(f)) if q != f.size() => return Err(Error::AlphabetMismatch(q, f.size())),
            (Some(q), _) => Alphabet::new(q)?,
            (None, Some(f)) => f.alphabet(),
            (None, None) => Alphabet::new(2)?,
        };
        let q = alphabet.size();
        let k = self.memory.len();

        let linear = match (&self.coefficients, field) {
            (Some(coeffs), Some(f)) => {
                let mut matrices = Vec::with_capacity(k);
                for s in &self.memory {
                    let rows = coeffs.get(&s.to_string()).cloned().unwrap_or_else(|| {
                        vec![vec![0; f.dim()]; f.dim()]
                    });
                    matrices.push(Matrix::from_rows(rows, f.prime())?);
                }
                if let Some(extra) = coeffs
                    .keys()
                    .find(|key| !self.memory.iter().any(|s| &s.to_string() == *key))
                {
                    return Err(Error::Parse(format!(
                        "coefficient for {extra} is outside the memory set"
                    )));
                }
                Some(LinearLocalRule::new(f, self.memory.clone(), matrices)?.to_local_rule()?)
            }
            (Some(_), None) => return Err(Error::Parse("coefficients need a field".into())),
            _ => None,
        };

        let tabulated = match &self.table {
            Some(entries) => {
                let count = crate::config::check_budget(k, alphabet, u64::MAX)?;
                let mut table = vec![u8::MAX; count];
                for (key, &v) in entries {
                    let p = parse_key(key, q)?;
                    if p.len() != k {
                        return Err(Error::Parse(format!(
                            "pattern key {key:?} has length {}, memory has {k}",
                            p.len()
                        )));
                    }
                    alphabet.check_state(v)?;
                    table[crate::config::encode_index(&p, q)] = v as u8;
                }
                if table.contains(&u8::MAX) {
                    return Err(Error::Parse(format!(
                        "rule table has {} entries, expected {count}",
                        entries.len()
                    )));
                }
                Some(LocalRule::new(alphabet, self.memory.clone(), table)?)
            }
            None => None,
        };

        let rule = match (tabulated, linear) {
            (Some(t), Some(l)) if t != l => {
                return Err(Error::Parse("table disagrees with coefficients".into()))
            }
            (Some(t), _) => t,
            (None, Some(l)) => l,
            (None, None) => return Err(Error::Parse("rule needs a table or coefficients".into())),
        };
        PhiCA::new(phi, rule)
    }
}

pub fn parse_rule_json(text: &str) -> Result<PhiCA> {
    let spec: RuleSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.build()
}

/// Reads the `field` of a rule file, if any.
pub fn rule_field(text: &str) -> Result<Option<VectorAlphabet>> {
    let spec: RuleSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.field.map(|f| VectorAlphabet::new(f.p, f.d)).transpose()
}

pub fn rule_to_json(t: &PhiCA, field: Option<VectorAlphabet>) -> Result<String> {
    let spec = RuleSpec::from_automaton(t, field)?;
    serde_json::to_string_pretty(&spec).map_err(|e| Error::Parse(e.to_string()))
}

/// MapTable CSV: header `input,output`, one row per input in lexicographic order.
pub fn write_map_table_csv<W: Write>(table: &MapTable, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(["input", "output"]).map_err(io)?;
    for i in 0..table.len() {
        let (x, y) = table.row(i);
        w.write_record([x.to_string(), y.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_map_table_csv<R: Read>(reader: R, alphabet: Alphabet) -> Result<MapTable> {
    let mut r = csv::Reader::from_reader(reader);
    let mut outputs = Vec::new();
    let mut shape: Option<(usize, usize)> = None;
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.len() != 2 {
            return Err(Error::Parse(format!("row {i} has {} columns", record.len())));
        }
        let x = Configuration::parse(&record[0], alphabet)?;
        let y = Configuration::parse(&record[1], alphabet)?;
        let (n, m) = *shape.get_or_insert((x.len(), y.len()));
        if x.len() != n || y.len() != m {
            return Err(Error::Parse(format!("row {i} has inconsistent lengths")));
        }
        if x.index() != i {
            return Err(Error::Parse(format!(
                "row {i} input {x} is out of lexicographic order"
            )));
        }
        outputs.extend_from_slice(y.values());
    }
    let (n, m) = shape.ok_or_else(|| Error::Parse("empty map table".into()))?;
    MapTable::new(n, m, alphabet, outputs)
}

/// Trace CSV: one configuration per line in its text form.
pub fn trace_csv(trace: &[Configuration]) -> String {
    let mut s = String::new();
    for x in trace {
        s.push_str(&x.to_string());
        s.push('\n');
    }
    s
}

/// Binary P5 PGM: one row per time step, one byte per cell, states spread
/// evenly over `0..=255`.
pub fn trace_pgm(trace: &[Configuration], alphabet: Alphabet) -> Vec<u8> {
    let width = trace.first().map_or(0, Configuration::len);
    let q = alphabet.size();
    let mut out = format!("P5\n{width} {}\n255\n", trace.len()).into_bytes();
    for x in trace {
        out.extend(x.values().iter().map(|&v| (v as usize * 255 / (q - 1)) as u8));
    }
    out
}
