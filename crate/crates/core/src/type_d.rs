//! Quivers of mutation type D: structural classification into the four
//! families, labelling, and companion bases.
//!
//! Every quiver in the mutation class of `D_n` is one of
//!
//! * **I**: a vertex `c_1` with two pendant neighbours `a`, `b`, and a
//!   type-A quiver `Gamma^(1)` having `c_1` as an end vertex;
//! * **II**: two oriented 3-cycles sharing the arrow between `c_1` and `c_2`,
//!   with pendant fork vertices `d_1`, `d_2`, and type-A quivers attached at
//!   `c_1` and `c_2`;
//! * **III**: an oriented 4-cycle `c_1 -> d_1 -> c_2 -> d_2 -> c_1` with
//!   type-A quivers attached at `c_1` and `c_2`;
//! * **IV**: an oriented central cycle of length `m >= 3` with `r` spikes
//!   `p_i -> s_i -> c_i -> p_i` on central arrows `p_i -> s_i`, and type-A
//!   quivers attached at the spike tips `c_i`.

use serde::{Deserialize, Serialize};

use crate::companion::{verify, CompanionBasis, Direction};
use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::root_lattice::{CartanType, Root};
use crate::scalar::Scalar;
use crate::type_a::{is_type_a, label_region, type_a_rule, ChoicePolicy, Chooser, Labelling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeDKind {
    I,
    II,
    III,
    IV,
}

/// A spike `p -> s -> c -> p` on the central arrow `p -> s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spike {
    pub p: usize,
    pub s: usize,
    pub c: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Skeleton {
    Fork {
        a: usize,
        b: usize,
        c1: usize,
    },
    Square {
        c1: usize,
        c2: usize,
        d1: usize,
        d2: usize,
    },
    /// Central cycle in arrow order starting at `p_1`, and spikes in the same order.
    Cycle {
        central: Vec<usize>,
        spikes: Vec<Spike>,
    },
}

/// A type-A subquiver attached to the skeleton at `root`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attachment {
    pub root: usize,
    pub vertices: Vec<usize>,
}

/// Decomposition of a type-D quiver. Vertex ids are 0-based.
///
/// `m` is the central cycle length for type IV and the size of the first
/// attachment for types II and III. `a` lists attachment sizes and `d` the
/// number of unspiked central arrows after each spike (type IV).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeDStructure {
    pub kind: TypeDKind,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<usize>,
    pub a: Vec<usize>,
    #[serde(default)]
    pub d: Vec<usize>,
    pub skeleton: Skeleton,
    pub attachments: Vec<Attachment>,
}

impl TypeDStructure {
    fn skeleton_edges(&self) -> Vec<(usize, usize)> {
        match (&self.skeleton, self.kind) {
            (Skeleton::Fork { a, b, c1 }, _) => vec![(*a, *c1), (*b, *c1)],
            (Skeleton::Square { c1, c2, d1, d2 }, TypeDKind::II) => {
                vec![(*c1, *c2), (*c1, *d1), (*c2, *d1), (*c1, *d2), (*c2, *d2)]
            }
            (Skeleton::Square { c1, c2, d1, d2 }, _) => vec![(*c1, *d1), (*d1, *c2), (*c2, *d2), (*d2, *c1)],
            (Skeleton::Cycle { central, spikes }, _) => {
                let m = central.len();
                let mut e: Vec<_> = (0..m).map(|i| (central[i], central[(i + 1) % m])).collect();
                for sp in spikes {
                    e.push((sp.s, sp.c));
                    e.push((sp.c, sp.p));
                }
                e
            }
        }
    }

    fn skeleton_vertices(&self) -> Vec<usize> {
        match &self.skeleton {
            Skeleton::Fork { a, b, c1 } => vec![*a, *b, *c1],
            Skeleton::Square { c1, c2, d1, d2 } => vec![*c1, *c2, *d1, *d2],
            Skeleton::Cycle { central, spikes } => central.iter().copied().chain(spikes.iter().map(|s| s.c)).collect(),
        }
    }

    /// Underlying graph (edge multiplicities) rebuilt from the skeleton and
    /// the edges of `q` inside each attachment.
    pub fn underlying_graph(&self, q: &Quiver) -> Vec<Vec<i64>> {
        let n = q.n();
        let mut g = vec![vec![0i64; n]; n];
        for (x, y) in self.skeleton_edges() {
            g[x][y] = 1;
            g[y][x] = 1;
        }
        for att in &self.attachments {
            for &x in &att.vertices {
                for &y in &att.vertices {
                    g[x][y] = q.b(x, y).abs();
                }
            }
        }
        g
    }

    /// Whether the structure describes `q`: vertices are partitioned by the
    /// skeleton and attachments (glued at the roots), attachments are type A
    /// with their root as an end vertex, and the underlying graph matches.
    pub fn describes(&self, q: &Quiver) -> bool {
        let n = q.n();
        if self.n != n {
            return false;
        }
        let mut count = vec![0usize; n];
        for v in self.skeleton_vertices() {
            if v >= n {
                return false;
            }
            count[v] += 1;
        }
        for att in &self.attachments {
            if !att.vertices.contains(&att.root) || att.vertices.iter().any(|&v| v >= n) {
                return false;
            }
            for &v in &att.vertices {
                if v != att.root {
                    count[v] += 1;
                }
            }
            if !attachment_ok(q, &att.vertices, att.root) {
                return false;
            }
        }
        count.iter().all(|&c| c == 1) && self.underlying_graph(q) == q.abs_matrix()
    }
}

fn attachment_ok(q: &Quiver, vertices: &[usize], root: usize) -> bool {
    let sub = q.induced(vertices);
    let idx = vertices.iter().position(|&v| v == root).expect("root is a member");
    is_type_a(&sub) && sub.end_vertices().contains(&idx)
}

/// Vertices reachable from `root` without entering `blocked`.
fn attached_at(q: &Quiver, root: usize, blocked: &[usize]) -> Vec<usize> {
    let mut mask = vec![true; q.n()];
    for &b in blocked {
        mask[b] = false;
    }
    mask[root] = true;
    q.component(root, &mask)
}

fn not_d(msg: impl Into<String>) -> Error {
    Error::NotTypeD(msg.into())
}

/// Decomposes a quiver of mutation type D.
pub fn classify(q: &Quiver) -> Result<TypeDStructure> {
    let n = q.n();
    if let Err(v) = q.validate(true) {
        return Err(not_d(v.to_string()));
    }
    if n < 4 {
        return Err(not_d(format!("{n} vertices")));
    }
    if !q.is_connected() {
        return Err(not_d("quiver is disconnected"));
    }
    if is_type_a(q) {
        return Err(not_d("quiver is of mutation type A"));
    }
    let blocks = q.blocks();
    let big: Vec<&Vec<usize>> = blocks.iter().filter(|b| b.len() > 3).collect();
    let s = match big[..] {
        [] => classify_fork(q)?,
        [block] => classify_block(q, block)?,
        _ => return Err(not_d("more than one cycle block")),
    };
    if !s.describes(q) {
        return Err(not_d("decomposition does not rebuild the quiver"));
    }
    Ok(s)
}

fn classify_fork(q: &Quiver) -> Result<TypeDStructure> {
    let n = q.n();
    for c in 0..n {
        let leaves: Vec<usize> = q.neighbours(c).filter(|&v| q.valency(v) == 1).collect();
        let mut pairs: Vec<(usize, usize)> =
            leaves.iter().enumerate().flat_map(|(i, &a)| leaves[i + 1..].iter().map(move |&b| (a, b))).collect();
        // prefer the pair with the largest ids
        pairs.sort_by_key(|&(a, b)| std::cmp::Reverse((b, a)));
        for (a, b) in pairs {
            let vertices = attached_at(q, c, &[a, b]);
            if vertices.len() == n - 2 && attachment_ok(q, &vertices, c) {
                return Ok(TypeDStructure {
                    kind: TypeDKind::I,
                    n,
                    m: None,
                    r: None,
                    a: vec![n - 2],
                    d: vec![],
                    skeleton: Skeleton::Fork { a, b, c1: c },
                    attachments: vec![Attachment { root: c, vertices }],
                });
            }
        }
    }
    Err(not_d("no cycle block and no fork"))
}

fn classify_block(q: &Quiver, block: &[usize]) -> Result<TypeDStructure> {
    let n = q.n();
    let in_block = |v: usize| block.contains(&v);
    let bnb = |v: usize| -> Vec<usize> { q.neighbours(v).filter(|&w| in_block(w)).collect() };
    let edges: usize = block.iter().map(|&v| bnb(v).len()).sum::<usize>() / 2;

    if edges == block.len() {
        let order = oriented_cycle_order(q, block).ok_or_else(|| not_d("cycle block is not oriented"))?;
        if block.len() == n {
            return build_type_iv(q, order, vec![]);
        }
        if block.len() == 4 {
            return classify_square(q, &order);
        }
        return Err(not_d("cycle of length other than 4 with attachments"));
    }

    if block.len() == 4 && edges == 5 {
        let (shared, tips): (Vec<usize>, Vec<usize>) = block.iter().partition(|&&v| bnb(v).len() == 3);
        let (x, y) = (shared[0], shared[1]);
        if !tips.iter().all(|&t| q.is_oriented_triangle(x, y, t)) {
            return Err(not_d("double triangle is not oriented"));
        }
        let (tail, head) = if q.has_arrow(x, y) { (x, y) } else { (y, x) };
        let outside: Vec<usize> = tips.iter().copied().filter(|&t| q.valency(t) > 2).collect();
        return match outside[..] {
            [] => {
                let (d1, d2) = (tips[0].min(tips[1]), tips[0].max(tips[1]));
                build_square(q, TypeDKind::II, tail, head, d1, d2)
            }
            [tip] => {
                let other = if tips[0] == tip { tips[1] } else { tips[0] };
                build_type_iv(q, vec![tail, head, other], vec![Spike { p: tail, s: head, c: tip }])
            }
            _ => Err(not_d("double triangle with attachments at both forks")),
        };
    }

    // central cycle with spikes
    let tips: Vec<usize> = block
        .iter()
        .copied()
        .filter(|&v| {
            let nb = bnb(v);
            nb.len() == 2 && q.adjacent(nb[0], nb[1])
        })
        .collect();
    let central: Vec<usize> = block.iter().copied().filter(|v| !tips.contains(v)).collect();
    if central.len() < 3 || edges != central.len() + 2 * tips.len() {
        return Err(not_d("cycle block is not a central cycle with spikes"));
    }
    let order = oriented_cycle_order(q, &central).ok_or_else(|| not_d("central cycle is not oriented"))?;
    if central.iter().any(|&v| q.valency(v) != bnb(v).len()) {
        return Err(not_d("central vertex with attachments"));
    }
    let mut spikes = Vec::new();
    for &t in &tips {
        let nb = bnb(t);
        let (p, s) = if q.has_arrow(nb[0], nb[1]) { (nb[0], nb[1]) } else { (nb[1], nb[0]) };
        if !(q.has_arrow(s, t) && q.has_arrow(t, p)) {
            return Err(not_d("spike is not an oriented 3-cycle"));
        }
        if spikes.iter().any(|sp: &Spike| sp.p == p) {
            return Err(not_d("two spikes on one central arrow"));
        }
        spikes.push(Spike { p, s, c: t });
    }
    build_type_iv(q, order, spikes)
}

/// Vertices of `cycle` in arrow order from the smallest id, if the induced
/// subquiver is an oriented cycle.
fn oriented_cycle_order(q: &Quiver, cycle: &[usize]) -> Option<Vec<usize>> {
    let inside = |v: usize| cycle.contains(&v);
    let start = *cycle.iter().min()?;
    let mut order = vec![start];
    let mut cur = start;
    for _ in 1..cycle.len() {
        let outs: Vec<usize> = cycle.iter().copied().filter(|&w| q.has_arrow(cur, w)).collect();
        if outs.len() != 1 || order.contains(&outs[0]) {
            return None;
        }
        cur = outs[0];
        order.push(cur);
    }
    let closes = q.has_arrow(cur, start);
    let degrees_ok = cycle.iter().all(|&v| q.neighbours(v).filter(|&w| inside(w)).count() == 2);
    (closes && degrees_ok).then_some(order)
}

fn classify_square(q: &Quiver, order: &[usize]) -> Result<TypeDStructure> {
    // opposite pairs (order[0], order[2]) and (order[1], order[3])
    let mut options = Vec::new();
    for k in 0..2 {
        let (c1, c2) = (order[k], order[k + 2]);
        let (d1, d2) = (order[k + 1], order[(k + 3) % 4]);
        if q.valency(d1) == 2 && q.valency(d2) == 2 {
            let (c1, c2, d1, d2) = if c1 < c2 { (c1, c2, d1, d2) } else { (c2, c1, d2, d1) };
            options.push((c1, c2, d1, d2));
        }
    }
    options.sort_unstable();
    for (c1, c2, d1, d2) in options {
        if let Ok(s) = build_square(q, TypeDKind::III, c1, c2, d1, d2) {
            return Ok(s);
        }
    }
    Err(not_d("4-cycle with attachments at adjacent vertices"))
}

fn build_square(q: &Quiver, kind: TypeDKind, c1: usize, c2: usize, d1: usize, d2: usize) -> Result<TypeDStructure> {
    let att1 = attached_at(q, c1, &[c2, d1, d2]);
    let att2 = attached_at(q, c2, &[c1, d1, d2]);
    if !attachment_ok(q, &att1, c1) || !attachment_ok(q, &att2, c2) {
        return Err(not_d("attachment is not type A with its root as an end vertex"));
    }
    if att1.len() + att2.len() + 2 != q.n() {
        return Err(not_d("vertices outside the skeleton and attachments"));
    }
    Ok(TypeDStructure {
        kind,
        n: q.n(),
        m: Some(att1.len()),
        r: None,
        a: vec![att1.len(), att2.len()],
        d: vec![],
        skeleton: Skeleton::Square { c1, c2, d1, d2 },
        attachments: vec![Attachment { root: c1, vertices: att1 }, Attachment { root: c2, vertices: att2 }],
    })
}

/// `order` is the central cycle in arrow order (any rotation).
fn build_type_iv(q: &Quiver, order: Vec<usize>, spikes: Vec<Spike>) -> Result<TypeDStructure> {
    let m = order.len();
    let r = spikes.len();
    let spike_at = |p: usize| spikes.iter().find(|s| s.p == p).copied();
    let pos = |v: usize| order.iter().position(|&w| w == v).expect("central vertex");
    let start = if r == 0 {
        *order.iter().min().expect("non-empty")
    } else if r < m {
        spikes
            .iter()
            .map(|s| s.p)
            .filter(|&p| spike_at(order[(pos(p) + m - 1) % m]).is_none())
            .min()
            .expect("some spike follows an unspiked arrow")
    } else {
        spikes.iter().map(|s| s.p).min().expect("r > 0")
    };
    let k = pos(start);
    let central: Vec<usize> = (0..m).map(|i| order[(k + i) % m]).collect();
    let ordered: Vec<Spike> = central.iter().filter_map(|&v| spike_at(v)).collect();
    let mut blocked: Vec<usize> = central.clone();
    blocked.extend(ordered.iter().map(|s| s.c));
    let mut attachments = Vec::with_capacity(r);
    for sp in &ordered {
        let vertices = attached_at(q, sp.c, &blocked);
        if !attachment_ok(q, &vertices, sp.c) {
            return Err(not_d("attachment is not type A with its root as an end vertex"));
        }
        attachments.push(Attachment { root: sp.c, vertices });
    }
    let a: Vec<usize> = attachments.iter().map(|x| x.vertices.len()).collect();
    if m + a.iter().sum::<usize>() != q.n() {
        return Err(not_d("vertices outside the skeleton and attachments"));
    }
    let cpos = |v: usize| central.iter().position(|&w| w == v).expect("central vertex");
    let d: Vec<usize> = (0..r)
        .map(|i| {
            let next_p = if i + 1 < r { cpos(ordered[i + 1].p) } else { m };
            next_p - (cpos(ordered[i].p) + 1)
        })
        .collect();
    if m == 3 && r == 0 {
        return Err(not_d("oriented 3-cycle"));
    }
    Ok(TypeDStructure {
        kind: TypeDKind::IV,
        n: q.n(),
        m: Some(m),
        r: Some(r),
        a,
        d,
        skeleton: Skeleton::Cycle { central, spikes: ordered },
        attachments,
    })
}

fn mask_of(n: usize, vertices: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in vertices {
        mask[v] = true;
    }
    mask
}

/// Labels an attachment `att` with `offset + 1 ..`; the root is labelled last
/// when `root_last`, first otherwise.
fn label_attachment(
    q: &Quiver,
    att: &Attachment,
    offset: usize,
    root_last: bool,
    chooser: &mut Chooser<'_>,
    out: &mut Labelling,
) -> Result<()> {
    let mask = mask_of(q.n(), &att.vertices);
    let other = if att.vertices.len() == 1 {
        att.root
    } else {
        let candidates: Vec<usize> = q.end_vertices_in(&mask).into_iter().filter(|&v| v != att.root).collect();
        if candidates.is_empty() {
            return Err(Error::StructureMismatch(format!("attachment at {} has no free end vertex", att.root)));
        }
        chooser.pick(&candidates)?
    };
    let (start, finish) = if root_last { (other, att.root) } else { (att.root, other) };
    label_region(q, &mask, start, finish, offset, chooser, out)
}

/// Labels a classified type-D quiver.
pub fn label_type_d(q: &Quiver, s: &TypeDStructure, policy: &ChoicePolicy) -> Result<Labelling> {
    if !s.describes(q) {
        return Err(Error::StructureMismatch("structure does not describe this quiver".into()));
    }
    let n = q.n();
    let mut out = Labelling::empty(n);
    let mut chooser = Chooser::new(policy);
    match (&s.skeleton, s.kind) {
        (Skeleton::Fork { a, b, .. }, TypeDKind::I) => {
            label_attachment(q, &s.attachments[0], 0, true, &mut chooser, &mut out)?;
            out.labels[*a] = n - 1;
            out.labels[*b] = n;
        }
        (Skeleton::Square { d1, d2, .. }, TypeDKind::II | TypeDKind::III) => {
            let m = s.attachments[0].vertices.len();
            label_attachment(q, &s.attachments[0], 0, true, &mut chooser, &mut out)?;
            label_attachment(q, &s.attachments[1], m, false, &mut chooser, &mut out)?;
            out.labels[*d1] = n - 1;
            out.labels[*d2] = n;
        }
        (Skeleton::Cycle { central, spikes }, TypeDKind::IV) => {
            let mut current = 1;
            for &v in central {
                out.labels[v] = current;
                match spikes.iter().position(|sp| sp.p == v) {
                    Some(i) => {
                        label_attachment(q, &s.attachments[i], current, true, &mut chooser, &mut out)?;
                        current += s.attachments[i].vertices.len() + 1;
                    }
                    None => current += 1,
                }
            }
        }
        _ => return Err(Error::StructureMismatch("skeleton does not match the kind".into())),
    }
    Labelling::from_labels(out.labels.clone())?;
    Ok(out)
}

fn sum_root<T: Scalar>(n: usize, parts: &[Root<T>]) -> Root<T> {
    parts.iter().fold(Root::zero(n), |acc, r| acc.add(r).expect("small coefficients"))
}

/// `alpha_1 + ... + alpha_{n-2} + alpha_n`.
fn cycle_root<T: Scalar>(n: usize) -> Root<T> {
    sum_root(n, &[Root::interval(n, 0, n - 3), Root::simple(n, n - 1)])
}

/// `alpha_{m+1} + ... + alpha_{n-2} + alpha_{fork}` for the fork label `n-1` or `n`.
fn fork_root<T: Scalar>(n: usize, m: usize, fork: usize) -> Root<T> {
    sum_root(n, &[Root::interval(n, m, n - 3), Root::simple(n, fork - 1)])
}

/// `alpha_1 + ... + alpha_{p-1} + 2 alpha_p + ... + 2 alpha_{n-2} + alpha_{n-1} + alpha_n`.
fn doubled_root<T: Scalar>(n: usize, p: usize) -> Root<T> {
    let mut parts = vec![Root::interval(n, 0, n - 1)];
    if p <= n - 2 {
        parts.push(Root::interval(n, p - 1, n - 3));
    }
    sum_root(n, &parts)
}

/// Companion basis of a labelled type-D quiver, by label-based formulas,
/// indexed by vertex id.
pub fn companion_basis_type_d<T: Scalar>(q: &Quiver, s: &TypeDStructure, l: &Labelling) -> Result<CompanionBasis<T>> {
    let n = q.n();
    if l.n() != n || s.n != n {
        return Err(Error::LengthMismatch { expected: n, got: l.n() });
    }
    let t = CartanType::d(n)?;
    let labels = &l.labels;
    let mut by_label: Vec<Root<T>> = (0..n).map(|i| Root::simple(n, i)).collect();
    for att in &s.attachments {
        let mask = mask_of(n, &att.vertices);
        for (x, e) in type_a_rule::<T>(q, labels, &mask, n).into_iter().enumerate() {
            if let Some(e) = e {
                by_label[labels[x] - 1] = e;
            }
        }
    }
    match s.kind {
        TypeDKind::I => {}
        TypeDKind::II | TypeDKind::III => {
            let m = s.m.ok_or_else(|| Error::StructureMismatch("missing m".into()))?;
            by_label[n - 2] = fork_root(n, m, n - 1);
            by_label[n - 1] = fork_root(n, m, n);
            if s.kind == TypeDKind::III {
                by_label[m - 1] = Root::interval(n, m - 1, n - 2);
            }
        }
        TypeDKind::IV => {
            let Skeleton::Cycle { central, spikes } = &s.skeleton else {
                return Err(Error::StructureMismatch("type IV needs a central cycle".into()));
            };
            by_label[n - 1] = cycle_root(n);
            let all_spiked = spikes.len() == central.len();
            for (i, sp) in spikes.iter().enumerate() {
                let p = labels[sp.p];
                let a = s.attachments[i].vertices.len();
                by_label[p - 1] = if all_spiked && i + 1 == spikes.len() {
                    doubled_root(n, p)
                } else {
                    Root::interval(n, p - 1, p + a - 1)
                };
            }
        }
    }
    let entries = (0..n).map(|x| by_label[labels[x] - 1].clone()).collect();
    let basis = CompanionBasis::new(t, entries)?;
    verify(q, &basis).map_err(Error::UnverifiedBasis)?;
    Ok(basis)
}

/// Quivers reached from the `D_n` Dynkin quiver by fixed mutation sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intermediate {
    /// Mutations at `n-2, ..., m+1` (outward), for `1 <= m <= n-3`.
    Xi { n: usize, m: usize },
    /// Mutations at `n-1, ..., 1` (outward): the oriented `n`-cycle.
    N { n: usize },
    /// From the oriented cycle, mutations at `p_i + 1, ..., p_i + a_i` (inward)
    /// for each spike. `a` and `d` have one entry per spike.
    Theta { a: Vec<usize>, d: Vec<usize> },
}

/// A labelled intermediate quiver (vertex id = label - 1), its companion
/// basis from the closed formulas, and the labelled mutation sequence with
/// basis-mutation directions that produces it from `D_n` with the simple system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntermediateQuiver<T = i64> {
    pub quiver: Quiver,
    pub labelling: Labelling,
    pub basis: CompanionBasis<T>,
    pub sequence: Vec<(usize, Direction)>,
}

impl Intermediate {
    pub fn rank(&self) -> usize {
        match self {
            Intermediate::Xi { n, .. } | Intermediate::N { n } => *n,
            Intermediate::Theta { a, d } => a.len() + d.iter().sum::<usize>() + a.iter().sum::<usize>(),
        }
    }

    /// Labels `p_i` of the spiked central vertices (type IV parameters).
    pub fn spike_labels(a: &[usize], d: &[usize]) -> Vec<usize> {
        let mut p = Vec::with_capacity(a.len());
        let mut next = 1;
        for i in 0..a.len() {
            p.push(next);
            next += a[i] + 1 + d[i];
        }
        p
    }

    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        match self {
            Intermediate::Xi { n, m } => {
                if *n < 4 || *m < 1 || *m + 3 > *n {
                    return bad(format!("Xi needs n >= 4 and 1 <= m <= n-3, got n={n}, m={m}"));
                }
            }
            Intermediate::N { n } => {
                if *n < 4 {
                    return bad(format!("N needs n >= 4, got {n}"));
                }
            }
            Intermediate::Theta { a, d } => {
                let r = a.len();
                if r == 0 || d.len() != r {
                    return bad("Theta needs one a and one d per spike".into());
                }
                if a.contains(&0) {
                    return bad("attachment sizes must be positive".into());
                }
                let m = r + d.iter().sum::<usize>();
                if m < 3 {
                    return bad(format!("central cycle of length {m}"));
                }
                if d.iter().any(|&x| x > 0) && d[r - 1] == 0 {
                    return bad("the last run must be non-empty unless all runs are empty".into());
                }
            }
        }
        Ok(())
    }

    /// Labelled mutation sequence (1-based) with directions.
    pub fn sequence(&self) -> Result<Vec<(usize, Direction)>> {
        self.check()?;
        let n = self.rank();
        let cycle: Vec<_> = (1..n).rev().map(|k| (k, Direction::Outward)).collect();
        Ok(match self {
            Intermediate::Xi { m, .. } => (m + 1..=n - 2).rev().map(|k| (k, Direction::Outward)).collect(),
            Intermediate::N { .. } => cycle,
            Intermediate::Theta { a, d } => {
                let mut seq = cycle;
                for (p, &ai) in Self::spike_labels(a, d).into_iter().zip(a) {
                    seq.extend((p + 1..=p + ai).map(|k| (k, Direction::Inward)));
                }
                seq
            }
        })
    }

    /// The companion basis given by the closed formulas, indexed by label - 1.
    pub fn formula_basis<T: Scalar>(&self) -> Result<CompanionBasis<T>> {
        self.check()?;
        let n = self.rank();
        let t = CartanType::d(n)?;
        let mut b: Vec<Root<T>> = (0..n).map(|i| Root::simple(n, i)).collect();
        match self {
            Intermediate::Xi { m, .. } => {
                b[n - 2] = fork_root(n, *m, n - 1);
                b[n - 1] = fork_root(n, *m, n);
            }
            Intermediate::N { .. } => b[n - 1] = cycle_root(n),
            Intermediate::Theta { a, d } => {
                b[n - 1] = cycle_root(n);
                let ps = Self::spike_labels(a, d);
                let all_spiked = d.iter().all(|&x| x == 0);
                for (i, (&p, &ai)) in ps.iter().zip(a).enumerate() {
                    b[p - 1] = if all_spiked && i + 1 == ps.len() {
                        doubled_root(n, p)
                    } else {
                        Root::interval(n, p - 1, p + ai - 1)
                    };
                }
            }
        }
        CompanionBasis::new(t, b)
    }

    /// Builds the quiver by mutation and attaches the formula basis.
    pub fn build<T: Scalar>(&self) -> Result<IntermediateQuiver<T>> {
        let sequence = self.sequence()?;
        let n = self.rank();
        let ids: Vec<usize> = sequence.iter().map(|&(k, _)| k - 1).collect();
        let quiver = Quiver::dynkin_d(n)?.mutate_sequence(&ids)?;
        Ok(IntermediateQuiver { quiver, labelling: Labelling::identity(n), basis: self.formula_basis()?, sequence })
    }
}

/// Shorthand for [`Intermediate::build`].
pub fn intermediate_quiver<T: Scalar>(kind: &Intermediate) -> Result<IntermediateQuiver<T>> {
    kind.build()
}
