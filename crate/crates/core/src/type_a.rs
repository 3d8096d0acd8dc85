//! Quivers of mutation type A: recognition, labelling and companion bases.
//!
//! A connected quiver is in the mutation class of `A_n` exactly when its
//! underlying graph is a tree of edges and oriented triangles with the
//! valency restrictions checked in [`is_type_a`]. Such a quiver is labelled
//! `1..n` by walking strings between end vertices and recursing into the
//! subquivers hanging off each oriented 3-cycle met along the way.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::companion::{verify, CompanionBasis};
use crate::error::{Error, Result};
use crate::quiver::{Quiver, StringWalk};
use crate::root_lattice::{CartanType, Root};
use crate::scalar::Scalar;

/// Whether `q` lies in the mutation class of a type-A Dynkin quiver.
pub fn is_type_a(q: &Quiver) -> bool {
    let n = q.n();
    if n == 0 || q.validate(true).is_err() || !q.is_connected() {
        return false;
    }
    let mut triangles = vec![0usize; n];
    for block in q.blocks() {
        match block[..] {
            [_, _] => {}
            [x, y, z] => {
                if !q.is_oriented_triangle(x, y, z) {
                    return false;
                }
                for v in [x, y, z] {
                    triangles[v] += 1;
                }
            }
            _ => return false,
        }
    }
    (0..n).all(|x| match q.valency(x) {
        0..=2 => true,
        3 => triangles[x] == 1,
        4 => triangles[x] == 2,
        _ => false,
    })
}

/// How to pick the free end vertex of each rooted subquiver met during labelling.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChoicePolicy {
    #[default]
    SmallestId,
    LargestId,
    /// Vertex ids to use, one per rooted subquiver with more than one vertex,
    /// in the order the subquivers are visited. Falls back to the smallest id
    /// once the list runs out.
    Explicit(Vec<usize>),
}

impl FromStr for ChoicePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smallest" => Ok(ChoicePolicy::SmallestId),
            "largest" => Ok(ChoicePolicy::LargestId),
            _ => {
                let list = s.strip_prefix("explicit:").ok_or_else(|| Error::Parse(format!("unknown policy {s:?}")))?;
                let ids = list
                    .split(',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("policy vertex {t:?}: {e}"))))
                    .collect::<Result<_>>()?;
                Ok(ChoicePolicy::Explicit(ids))
            }
        }
    }
}

pub(crate) struct Chooser<'a> {
    policy: &'a ChoicePolicy,
    used: usize,
}

impl<'a> Chooser<'a> {
    pub(crate) fn new(policy: &'a ChoicePolicy) -> Self {
        Chooser { policy, used: 0 }
    }

    /// Picks one of `candidates` (non-empty, sorted).
    pub(crate) fn pick(&mut self, candidates: &[usize]) -> Result<usize> {
        let smallest = candidates[0];
        match self.policy {
            ChoicePolicy::SmallestId => Ok(smallest),
            ChoicePolicy::LargestId => Ok(*candidates.last().expect("non-empty")),
            ChoicePolicy::Explicit(list) => {
                let Some(&v) = list.get(self.used) else { return Ok(smallest) };
                self.used += 1;
                if candidates.contains(&v) {
                    Ok(v)
                } else {
                    Err(Error::InvalidPair(format!(
                        "vertex {v} is not a free end vertex here; candidates {candidates:?}"
                    )))
                }
            }
        }
    }
}

/// An ordered end-vertex pair used for one (sub)quiver, with the label offset
/// of that subquiver. Vertex ids are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Choice {
    pub first: usize,
    pub second: usize,
    pub offset: usize,
    pub size: usize,
}

/// A vertex `primary` on a labelling string whose next string vertex
/// `secondary` closes an oriented 3-cycle with `complementary`, and the
/// subquiver rooted at `complementary`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimaryRecord {
    pub primary: usize,
    pub complementary: usize,
    pub secondary: usize,
    pub subquiver: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabellingString {
    pub walk: StringWalk,
    pub offset: usize,
    pub primaries: Vec<PrimaryRecord>,
}

/// Labels `1..n` per vertex id, with the strings and choices that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Labelling {
    pub labels: Vec<usize>,
    pub choices: Vec<Choice>,
    pub strings: Vec<LabellingString>,
}

impl Labelling {
    pub(crate) fn empty(n: usize) -> Self {
        Labelling { labels: vec![0; n], choices: Vec::new(), strings: Vec::new() }
    }

    /// Labelling with the given labels and no labelling strings.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let l = Labelling { labels, choices: Vec::new(), strings: Vec::new() };
        l.check_bijection().map_err(|v| Error::StructureMismatch(v.to_string()))?;
        Ok(l)
    }

    /// Vertex id `v` gets label `v + 1`.
    pub fn identity(n: usize) -> Self {
        Labelling { labels: (1..=n).collect(), choices: Vec::new(), strings: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    /// Vertex id per label, indexed by `label - 1`.
    pub fn vertices_by_label(&self) -> Vec<usize> {
        let mut out = vec![0; self.labels.len()];
        for (v, &l) in self.labels.iter().enumerate() {
            out[l - 1] = v;
        }
        out
    }

    fn check_bijection(&self) -> std::result::Result<(), LabellingViolation> {
        let n = self.labels.len();
        let mut seen = vec![false; n];
        for (v, &l) in self.labels.iter().enumerate() {
            if l == 0 || l > n || seen[l - 1] {
                return Err(LabellingViolation::new("bijection", format!("vertex {v} has label {l}")));
            }
            seen[l - 1] = true;
        }
        Ok(())
    }
}

/// Labels the part of `q` inside `region` with `offset + 1 ..`, starting at
/// `start` and ending at `finish`.
pub(crate) fn label_region(
    q: &Quiver,
    region: &[bool],
    start: usize,
    finish: usize,
    offset: usize,
    chooser: &mut Chooser<'_>,
    out: &mut Labelling,
) -> Result<()> {
    struct Frame {
        mask: Vec<bool>,
        start: usize,
        finish: usize,
        offset: usize,
    }
    let n = q.n();
    let mut stack = vec![Frame { mask: region.to_vec(), start, finish, offset }];
    while let Some(f) = stack.pop() {
        let size = f.mask.iter().filter(|&&b| b).count();
        out.choices.push(Choice { first: f.start, second: f.finish, offset: f.offset, size });
        out.labels[f.start] = f.offset + 1;
        if f.start == f.finish {
            if size != 1 {
                return Err(Error::InvalidPair(format!(
                    "start and finish coincide at {} in a subquiver of size {size}",
                    f.start
                )));
            }
            out.strings.push(LabellingString {
                walk: StringWalk::trivial(f.start),
                offset: f.offset,
                primaries: vec![],
            });
            continue;
        }
        let walk = q.string_between_in(f.start, f.finish, &f.mask)?;
        let mut current = f.offset + 1;
        let mut primaries = Vec::new();
        let mut subframes = Vec::new();
        for step in &walk.steps {
            let (u, w) = (step.from, step.to);
            let third = (0..n).find(|&z| f.mask[z] && z != u && z != w && q.is_oriented_triangle(u, w, z));
            match third {
                Some(z) => {
                    let mut sub_mask = f.mask.clone();
                    sub_mask[u] = false;
                    sub_mask[w] = false;
                    let sub = q.component(z, &sub_mask);
                    let mut mask = vec![false; n];
                    for &v in &sub {
                        mask[v] = true;
                    }
                    let first = if sub.len() == 1 {
                        z
                    } else {
                        let candidates: Vec<usize> = q.end_vertices_in(&mask).into_iter().filter(|&v| v != z).collect();
                        if candidates.is_empty() {
                            return Err(Error::NotTypeA);
                        }
                        chooser.pick(&candidates)?
                    };
                    subframes.push(Frame { mask, start: first, finish: z, offset: current });
                    current += sub.len() + 1;
                    primaries.push(PrimaryRecord { primary: u, complementary: z, secondary: w, subquiver: sub });
                }
                None => current += 1,
            }
            out.labels[w] = current;
        }
        if current != f.offset + size {
            return Err(Error::NotTypeA);
        }
        out.strings.push(LabellingString { walk, offset: f.offset, primaries });
        stack.extend(subframes.into_iter().rev());
    }
    Ok(())
}

/// Smallest and largest end vertex (equal only for a single vertex).
pub fn default_end_pair(q: &Quiver) -> Result<(usize, usize)> {
    let ends = q.end_vertices();
    match (ends.first(), ends.last()) {
        (Some(&a), Some(&b)) => Ok((a, b)),
        _ => Err(Error::NotTypeA),
    }
}

/// Labels a type-A quiver so that `start` gets 1 and `finish` gets `n`.
pub fn label(q: &Quiver, start: usize, finish: usize, policy: &ChoicePolicy) -> Result<Labelling> {
    if !is_type_a(q) {
        return Err(Error::NotTypeA);
    }
    q.check_vertex(start)?;
    q.check_vertex(finish)?;
    let ends = q.end_vertices();
    for v in [start, finish] {
        if !ends.contains(&v) {
            return Err(Error::NotEndVertex { vertex: v });
        }
    }
    if start == finish && q.n() > 1 {
        return Err(Error::InvalidPair(format!("start and finish must differ, both are {start}")));
    }
    let mut out = Labelling::empty(q.n());
    label_region(q, &vec![true; q.n()], start, finish, 0, &mut Chooser::new(policy), &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum Role {
    /// Partner labels of the complementary and secondary vertices.
    Primary {
        complementary: usize,
        secondary: usize,
    },
    Complementary {
        primary: usize,
    },
    Secondary {
        primary: usize,
    },
}

/// The roles a vertex plays in the labelled oriented 3-cycles through it.
/// Empty for a plain vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRole {
    pub roles: Vec<Role>,
}

impl VertexRole {
    pub fn is_plain(&self) -> bool {
        self.roles.is_empty()
    }

    /// Label of the complementary partner, if the vertex is primary.
    pub fn complementary_partner(&self) -> Option<usize> {
        self.roles.iter().find_map(|r| match r {
            Role::Primary { complementary, .. } => Some(*complementary),
            _ => None,
        })
    }

    pub fn is_complementary(&self) -> bool {
        self.roles.iter().any(|r| matches!(r, Role::Complementary { .. }))
    }

    pub fn is_secondary(&self) -> bool {
        self.roles.iter().any(|r| matches!(r, Role::Secondary { .. }))
    }
}

fn roles_in(q: &Quiver, labels: &[usize], mask: &[bool]) -> Vec<VertexRole> {
    let mut out = vec![VertexRole::default(); q.n()];
    for cycle in q.oriented_3_cycles_in(mask) {
        let mut c = cycle;
        c.sort_by_key(|&v| labels[v]);
        let [i, j, k] = c;
        out[i].roles.push(Role::Primary { complementary: labels[j], secondary: labels[k] });
        out[j].roles.push(Role::Complementary { primary: labels[i] });
        out[k].roles.push(Role::Secondary { primary: labels[i] });
    }
    out
}

/// Role of each vertex id, read off from the label order in each oriented 3-cycle.
pub fn roles(q: &Quiver, l: &Labelling) -> Vec<VertexRole> {
    roles_in(q, &l.labels, &vec![true; q.n()])
}

/// `beta_i = alpha_i + ... + alpha_j` for a primary vertex `i` with
/// complementary partner `j` (3-cycles inside `mask` only), `alpha_i` otherwise.
/// Entries outside `mask` are left as `None`.
pub(crate) fn type_a_rule<T: Scalar>(q: &Quiver, labels: &[usize], mask: &[bool], rank: usize) -> Vec<Option<Root<T>>> {
    let roles = roles_in(q, labels, mask);
    (0..q.n())
        .map(|x| {
            mask[x].then(|| {
                let i = labels[x];
                match roles[x].complementary_partner() {
                    Some(j) => Root::interval(rank, i - 1, j - 1),
                    None => Root::simple(rank, i - 1),
                }
            })
        })
        .collect()
}

/// The companion basis of a labelled type-A quiver, indexed by vertex id.
pub fn companion_basis_type_a<T: Scalar>(q: &Quiver, l: &Labelling) -> Result<CompanionBasis<T>> {
    let n = q.n();
    if l.n() != n {
        return Err(Error::LengthMismatch { expected: n, got: l.n() });
    }
    let t = CartanType::a(n)?;
    let entries = type_a_rule(q, &l.labels, &vec![true; n], n).into_iter().map(|e| e.expect("full mask")).collect();
    let basis = CompanionBasis::new(t, entries)?;
    verify(q, &basis).map_err(Error::UnverifiedBasis)?;
    Ok(basis)
}

/// A property of a labelling record that does not hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabellingViolation {
    pub property: String,
    pub detail: String,
}

impl LabellingViolation {
    fn new(property: &str, detail: String) -> Self {
        LabellingViolation { property: property.to_string(), detail }
    }
}

impl fmt::Display for LabellingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.detail)
    }
}

impl std::error::Error for LabellingViolation {}

/// Checks a labelling record against `q`: labels form a bijection, every
/// vertex lies on exactly one labelling string, every oriented 3-cycle meets
/// exactly one labelling string in exactly two vertices, and labels along each
/// string follow the jump rule (a primary vertex `j` with rooted subquiver of
/// size `b` is followed by `j + b + 1`, and its complementary vertex is `j + b`).
pub fn check_labelling(q: &Quiver, l: &Labelling) -> std::result::Result<(), LabellingViolation> {
    let n = q.n();
    if l.n() != n {
        return Err(LabellingViolation::new("size", format!("{} labels for {n} vertices", l.n())));
    }
    l.check_bijection()?;
    let mut on_strings = vec![0usize; n];
    for s in &l.strings {
        for &v in &s.walk.vertices {
            on_strings[v] += 1;
        }
    }
    if let Some(v) = (0..n).find(|&v| on_strings[v] != 1) {
        return Err(LabellingViolation::new(
            "one string per vertex",
            format!("vertex {v} lies on {} labelling strings", on_strings[v]),
        ));
    }
    for cycle in q.oriented_3_cycles() {
        let meeting =
            l.strings.iter().filter(|s| s.walk.vertices.iter().filter(|v| cycle.contains(v)).count() == 2).count();
        if meeting != 1 {
            return Err(LabellingViolation::new(
                "one string per 3-cycle",
                format!("{meeting} labelling strings pass through two vertices of {cycle:?}"),
            ));
        }
    }
    let lab = &l.labels;
    for s in &l.strings {
        let first = s.walk.start();
        if lab[first] != s.offset + 1 {
            return Err(LabellingViolation::new(
                "string start",
                format!("string from {first} should start at label {}, found {}", s.offset + 1, lab[first]),
            ));
        }
        for step in &s.walk.steps {
            let (u, w) = (step.from, step.to);
            let expected = match s.primaries.iter().find(|p| p.primary == u) {
                Some(p) => {
                    let b = p.subquiver.len();
                    if p.secondary != w || !q.is_oriented_triangle(u, w, p.complementary) {
                        return Err(LabellingViolation::new(
                            "primary record",
                            format!("{p:?} does not match the string"),
                        ));
                    }
                    if lab[p.complementary] != lab[u] + b {
                        return Err(LabellingViolation::new(
                            "complementary label",
                            format!(
                                "vertex {} has label {}, expected {}",
                                p.complementary,
                                lab[p.complementary],
                                lab[u] + b
                            ),
                        ));
                    }
                    let mut sub_labels: Vec<usize> = p.subquiver.iter().map(|&v| lab[v]).collect();
                    sub_labels.sort_unstable();
                    if sub_labels != (lab[u] + 1..=lab[u] + b).collect::<Vec<_>>() {
                        return Err(LabellingViolation::new(
                            "subquiver labels",
                            format!("subquiver at {} is not labelled {}..{}", p.complementary, lab[u] + 1, lab[u] + b),
                        ));
                    }
                    lab[u] + b + 1
                }
                None => lab[u] + 1,
            };
            if lab[w] != expected {
                return Err(LabellingViolation::new(
                    "secondary label",
                    format!("vertex {w} has label {}, expected {expected}", lab[w]),
                ));
            }
        }
    }
    Ok(())
}

/// Labels to mutate at, in order, to get from the linear quiver
/// `1 -> 2 -> ... -> n` to a quiver with the same underlying labelled graph
/// as the labelled `q`. Never mutates at `1` or `n`.
pub fn mutation_sequence(l: &Labelling) -> Vec<usize> {
    let mut seq = Vec::new();
    for s in &l.strings {
        for p in &s.primaries {
            let i = l.labels[p.primary];
            seq.extend(i + 1..=i + p.subquiver.len());
        }
    }
    seq
}
