//! Circulant graphs and the covering maps induced by quotient projections.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::automaton::{phi_star, PhiCA};
use crate::config::Alphabet;
use crate::error::{CoverViolation, Error, Result};
use crate::group::{quotient, FiniteGroup, GroupHom, NormalSubgroup};

/// Cayley graph of a cyclic group: `g ~ g'` iff `g' = g + s` for some `s ∈ S`.
///
/// Always loop-free, undirected and connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirculantGraph {
    group: FiniteGroup,
    connection: Vec<usize>,
}

pub fn build_circulant(group: &FiniteGroup, connection: &[usize]) -> Result<CirculantGraph> {
    if !group.is_cyclic() {
        return Err(Error::UnsupportedGroup(format!(
            "circulant graphs need a cyclic group, got {group}"
        )));
    }
    let mut s = connection.to_vec();
    s.sort_unstable();
    s.dedup();
    for &x in &s {
        group.check_element(x)?;
    }
    if s.contains(&group.identity()) {
        return Err(Error::LoopInConnection);
    }
    if let Some(&x) = s.iter().find(|&&x| s.binary_search(&group.inv(x)).is_err()) {
        return Err(Error::AsymmetricConnection(x));
    }
    let generated = group.generated_subgroup(&s)?.order();
    if generated != group.order() {
        return Err(Error::Disconnected { generated });
    }
    Ok(CirculantGraph {
        group: group.clone(),
        connection: s,
    })
}

impl CirculantGraph {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn connection(&self) -> &[usize] {
        &self.connection
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn degree(&self) -> usize {
        self.connection.len()
    }

    /// Neighbors of `v`, sorted.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.connection.iter().map(|&s| self.group.op(v, s)).collect();
        out.sort_unstable();
        out
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        let diff = self.group.op(self.group.inv(u), v);
        self.connection.binary_search(&diff).is_ok()
    }

    /// Undirected edges `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in self.group.elements() {
            for v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for v in self.group.elements() {
            let _ = writeln!(s, "  {v};");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }
}

/// A vertex map between two circulant graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    source: CirculantGraph,
    target: CirculantGraph,
    vertex_map: Vec<usize>,
}

impl GraphMap {
    pub fn new(source: CirculantGraph, target: CirculantGraph, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.order() {
            return Err(Error::LengthMismatch {
                expected: source.order(),
                found: vertex_map.len(),
            });
        }
        for &v in &vertex_map {
            target.group.check_element(v)?;
        }
        Ok(GraphMap {
            source,
            target,
            vertex_map,
        })
    }

    pub fn source(&self) -> &CirculantGraph {
        &self.source
    }

    pub fn target(&self) -> &CirculantGraph {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    /// Fiber sizes indexed by target vertex.
    pub fn fibers(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.target.order()];
        for &v in &self.vertex_map {
            sizes[v] += 1;
        }
        sizes
    }

    pub fn is_surjective(&self) -> bool {
        self.fibers().iter().all(|&c| c > 0)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GraphMap) -> Result<GraphMap> {
        if self.target != next.source {
            return Err(Error::HomChainMismatch(
                "target graph of the first map is not the source of the second".into(),
            ));
        }
        GraphMap::new(
            self.source.clone(),
            next.target.clone(),
            self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect(),
        )
    }
}

/// Every edge of the source lands on an edge of the target.
pub fn is_graph_hom(m: &GraphMap) -> bool {
    m.source
        .edges()
        .into_iter()
        .all(|(u, v)| m.target.is_adjacent(m.apply(u), m.apply(v)))
}

/// Surjective, and at every vertex `v` the map restricts to a bijection
/// from the neighbors of `v` onto the neighbors of `m(v)`.
pub fn is_covering(m: &GraphMap) -> bool {
    if !is_graph_hom(m) || !m.is_surjective() {
        return false;
    }
    m.source.group.elements().all(|v| {
        let mut image: Vec<usize> = m.source.neighbors(v).into_iter().map(|u| m.apply(u)).collect();
        image.sort_unstable();
        image == m.target.neighbors(m.apply(v))
    })
}

/// Common fiber size of a covering.
pub fn fold_number(m: &GraphMap) -> Result<usize> {
    if !is_covering(m) {
        return Err(Error::NotACovering);
    }
    let fibers = m.fibers();
    if fibers.iter().any(|&c| c != fibers[0]) {
        return Err(Error::UnequalFibers(fibers));
    }
    Ok(fibers[0])
}

/// A graph map verified to be a covering, with its fold and, when it comes
/// from a quotient, the group projection behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringMap {
    map: GraphMap,
    fold: usize,
    projection: Option<GroupHom>,
}

impl CoveringMap {
    pub fn new(map: GraphMap, projection: Option<GroupHom>) -> Result<Self> {
        let fold = fold_number(&map)?;
        if let Some(p) = &projection {
            if p.table() != map.vertex_map() {
                return Err(Error::Internal(
                    "projection disagrees with the vertex map".into(),
                ));
            }
        }
        Ok(CoveringMap {
            map,
            fold,
            projection,
        })
    }

    pub fn map(&self) -> &GraphMap {
        &self.map
    }

    pub fn fold(&self) -> usize {
        self.fold
    }

    pub fn projection(&self) -> Option<&GroupHom> {
        self.projection.as_ref()
    }

    /// `next ∘ self`, re-verified as a covering.
    pub fn then(&self, next: &CoveringMap) -> Result<CoveringMap> {
        let map = self.map.then(&next.map)?;
        let projection = match (&self.projection, &next.projection) {
            (Some(a), Some(b)) => Some(a.then(b)?),
            _ => None,
        };
        CoveringMap::new(map, projection)
    }
}

/// Checks that projecting `S` through `G -> G/N` neither creates a loop nor
/// merges two connection elements.
pub fn check_cover_preconditions(
    graph: &CirculantGraph,
    normal: &NormalSubgroup,
) -> std::result::Result<(), CoverViolation> {
    let g = &graph.group;
    if let Some(&s) = graph.connection.iter().find(|&&s| normal.contains(s)) {
        return Err(CoverViolation::ElementInSubgroup { s });
    }
    for (i, &s1) in graph.connection.iter().enumerate() {
        for &s2 in &graph.connection[i + 1..] {
            if normal.contains(g.op(s1, g.inv(s2))) {
                return Err(CoverViolation::CollapsingPair { s1, s2 });
            }
        }
    }
    Ok(())
}

/// The quotient circulant on `G/N` with connection `ψ(S)`, and the covering
/// `ψ: C_G -> C_{G/N}`, which is `|N|`-fold.
pub fn quotient_cover(
    graph: &CirculantGraph,
    normal: &NormalSubgroup,
) -> Result<(CirculantGraph, CoveringMap)> {
    if normal.parent() != graph.group() {
        return Err(Error::GroupMismatch {
            expected: graph.group.to_string(),
            found: normal.parent().to_string(),
        });
    }
    check_cover_preconditions(graph, normal).map_err(Error::CoverDegenerate)?;
    let (q, proj) = quotient(&graph.group, normal)?;
    let image: Vec<usize> = graph.connection.iter().map(|&s| proj.apply(s)).collect();
    let target = build_circulant(&q, &image)?;
    if target.degree() != graph.degree() {
        return Err(Error::Internal("projected connection set shrank".into()));
    }
    let map = GraphMap::new(graph.clone(), target.clone(), proj.table().to_vec())?;
    let cover = CoveringMap::new(map, Some(proj))?;
    if cover.fold() != normal.order() {
        return Err(Error::Internal(format!(
            "fold {} differs from |N| = {}",
            cover.fold(),
            normal.order()
        )));
    }
    Ok((target, cover))
}

/// `ψ*: A^{G/N} -> A^G` for the projection behind `cover`, checked injective.
pub fn induced_injective_ca(cover: &CoveringMap, alphabet: Alphabet, budget: u64) -> Result<PhiCA> {
    let proj = cover.projection().ok_or_else(|| {
        Error::UnsupportedGroup("cover does not come from a group projection".into())
    })?;
    let t = phi_star(proj, alphabet);
    if !t.tabulate(budget)?.is_injective() {
        return Err(Error::Internal(format!(
            "induced automaton of a surjective projection {proj} is not injective"
        )));
    }
    Ok(t)
}

/// Graph in its JSON form `{"group":"Z6","connection":[1,5]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub group: String,
    pub connection: Vec<usize>,
}

impl From<&CirculantGraph> for GraphSpec {
    fn from(g: &CirculantGraph) -> Self {
        GraphSpec {
            group: g.group.label().to_string(),
            connection: g.connection.clone(),
        }
    }
}

impl GraphSpec {
    pub fn build(&self) -> Result<CirculantGraph> {
        build_circulant(&FiniteGroup::from_label(&self.group)?, &self.connection)
    }
}

/// Outcome of building and re-verifying a quotient cover.
///
/// `graph_hom` and `surjective` together are the weak notion of covering;
/// `locally_bijective` is the neighbor-bijection requirement on top.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub source: GraphSpec,
    pub target: Option<GraphSpec>,
    pub normal: Vec<usize>,
    pub fold: Option<usize>,
    pub verified: bool,
    pub graph_hom: bool,
    pub surjective: bool,
    pub locally_bijective: bool,
    pub induced_ca_injective: Option<bool>,
    pub violations: Vec<String>,
}

/// Builds the quotient cover and records every check, without failing on degeneracy.
pub fn cover_report(
    graph: &CirculantGraph,
    normal: &NormalSubgroup,
    alphabet: Alphabet,
    budget: u64,
) -> CoverReport {
    let mut report = CoverReport {
        source: graph.into(),
        target: None,
        normal: normal.members().to_vec(),
        fold: None,
        verified: false,
        graph_hom: false,
        surjective: false,
        locally_bijective: false,
        induced_ca_injective: None,
        violations: Vec::new(),
    };
    match quotient_cover(graph, normal) {
        Ok((target, cover)) => {
            let m = cover.map();
            report.target = Some((&target).into());
            report.graph_hom = is_graph_hom(m);
            report.surjective = m.is_surjective();
            report.locally_bijective = is_covering(m);
            report.fold = Some(cover.fold());
            report.verified = report.graph_hom && report.surjective && report.locally_bijective;
            match induced_injective_ca(&cover, alphabet, budget) {
                Ok(_) => report.induced_ca_injective = Some(true),
                Err(Error::EnumerationTooLarge { .. }) => {}
                Err(e) => {
                    report.induced_ca_injective = Some(false);
                    report.violations.push(e.to_string());
                }
            }
        }
        Err(e) => report.violations.push(e.to_string()),
    }
    report
}
