//! Quivers as skew-symmetric exchange matrices.
//!
//! `b(x, y) > 0` means there are `b(x, y)` arrows `x -> y`. Vertices are
//! 0-indexed; labels assigned by the labelling procedures live elsewhere.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// First violated constraint found by [`Quiver::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    NonzeroDiagonal { vertex: usize, value: i64 },
    NotSkewSymmetric { x: usize, y: usize },
    EntryBound { x: usize, y: usize, value: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonzeroDiagonal { vertex, value } => {
                write!(f, "nonzero diagonal at vertex {vertex} (value {value})")
            }
            Violation::NotSkewSymmetric { x, y } => write!(f, "not skew-symmetric at ({x},{y})"),
            Violation::EntryBound { x, y, value } => {
                write!(f, "entry bound exceeded at ({x},{y}): {value}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quiver {
    n: usize,
    b: Vec<i64>,
}

/// One step of a walk: traverses an arrow `from -> to` (direct) or `to -> from` (inverse).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Step {
    pub from: usize,
    pub to: usize,
    pub direct: bool,
}

/// A reduced walk that never uses two consecutive arrows of an oriented 3-cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StringWalk {
    pub vertices: Vec<usize>,
    pub steps: Vec<Step>,
}

impl StringWalk {
    pub fn trivial(v: usize) -> Self {
        StringWalk { vertices: vec![v], steps: Vec::new() }
    }

    fn from_vertices(q: &Quiver, vertices: Vec<usize>) -> Self {
        let steps = vertices.windows(2).map(|w| Step { from: w[0], to: w[1], direct: q.b(w[0], w[1]) > 0 }).collect();
        StringWalk { vertices, steps }
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("strings are non-empty")
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let vertices: Vec<usize> = self.vertices.iter().rev().copied().collect();
        let steps = self.steps.iter().rev().map(|s| Step { from: s.to, to: s.from, direct: !s.direct }).collect();
        StringWalk { vertices, steps }
    }
}

/// Result of [`random_mutation_walk`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationWalk {
    pub quiver: Quiver,
    pub sequence: Vec<usize>,
}

impl Quiver {
    /// `n` vertices, no arrows.
    pub fn new(n: usize) -> Self {
        Quiver { n, b: vec![0; n * n] }
    }

    /// Builds a quiver from an arrow list; repeated arrows add up, opposite arrows cancel.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize)]) -> Result<Self> {
        let mut q = Quiver::new(n);
        for &(x, y) in arrows {
            q.check_vertex(x)?;
            q.check_vertex(y)?;
            if x == y {
                return Err(Error::InvalidQuiver(Violation::NonzeroDiagonal { vertex: x, value: 1 }));
            }
            q.b[x * n + y] += 1;
            q.b[y * n + x] -= 1;
        }
        Ok(q)
    }

    /// Builds a quiver from an exchange matrix, checking skew-symmetry and the diagonal.
    pub fn from_matrix(rows: &[Vec<i64>]) -> Result<Self> {
        let q = Self::from_matrix_unchecked(rows)?;
        q.validate(false).map_err(Error::InvalidQuiver)?;
        Ok(q)
    }

    /// Builds a matrix without validation, for inspecting malformed input.
    pub fn from_matrix_unchecked(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut b = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: row.len() });
            }
            b.extend_from_slice(row);
        }
        Ok(Quiver { n, b })
    }

    /// Linear Dynkin quiver `0 -> 1 -> ... -> n-1`.
    pub fn linear(n: usize) -> Self {
        let arrows: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_arrows(n, &arrows).expect("valid arrows")
    }

    /// D_n Dynkin quiver `0 -> 1 -> ... -> n-3`, with `n-3 -> n-2` and `n-3 -> n-1`.
    pub fn dynkin_d(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidRank { family: 'D', rank: n });
        }
        let mut arrows: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
        arrows.push((n - 3, n - 1));
        Self::from_arrows(n, &arrows)
    }

    /// Oriented cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn oriented_cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!("an oriented cycle needs 3 vertices, got {n}")));
        }
        let arrows: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_arrows(n, &arrows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn b(&self, x: usize, y: usize) -> i64 {
        self.b[x * self.n + y]
    }

    pub fn to_matrix(&self) -> Vec<Vec<i64>> {
        self.b.chunks(self.n.max(1)).take(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Checks skew-symmetry, the zero diagonal and, when `simply_laced`, `|b| <= 1`.
    pub fn validate(&self, simply_laced: bool) -> std::result::Result<(), Violation> {
        for x in 0..self.n {
            let d = self.b(x, x);
            if d != 0 {
                return Err(Violation::NonzeroDiagonal { vertex: x, value: d });
            }
        }
        for x in 0..self.n {
            for y in x + 1..self.n {
                if self.b(x, y) != -self.b(y, x) {
                    return Err(Violation::NotSkewSymmetric { x, y });
                }
                if simply_laced && self.b(x, y).abs() > 1 {
                    return Err(Violation::EntryBound { x, y, value: self.b(x, y) });
                }
            }
        }
        Ok(())
    }

    /// Arrows with multiplicity, sorted lexicographically.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                for _ in 0..self.b(x, y).max(0) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn has_arrow(&self, x: usize, y: usize) -> bool {
        self.b(x, y) > 0
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.b(x, y) != 0
    }

    pub fn neighbours(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&y| self.b(x, y) != 0)
    }

    /// Number of edges at `x`, counted with multiplicity.
    pub fn valency(&self, x: usize) -> usize {
        (0..self.n).map(|y| self.b(x, y).unsigned_abs() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|x| self.valency(x)).sum::<usize>() / 2
    }

    /// Entrywise `|b|`, the underlying unoriented graph with multiplicities.
    pub fn abs_matrix(&self) -> Vec<Vec<i64>> {
        self.to_matrix().into_iter().map(|r| r.into_iter().map(i64::abs).collect()).collect()
    }

    /// Relabels vertices: vertex `v` of `self` becomes vertex `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: perm.len() });
        }
        let mut q = Quiver::new(self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                q.b[perm[x] * self.n + perm[y]] = self.b(x, y);
            }
        }
        Ok(q)
    }

    /// Full subquiver on `vertices` (in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Quiver {
        let m = vertices.len();
        let mut q = Quiver::new(m);
        for (i, &x) in vertices.iter().enumerate() {
            for (j, &y) in vertices.iter().enumerate() {
                q.b[i * m + j] = self.b(x, y);
            }
        }
        q
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        self.component(0, &vec![true; self.n]).len() == self.n
    }

    /// Vertices reachable from `start` inside `mask`.
    pub(crate) fn component(&self, start: usize, mask: &[bool]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            out.push(v);
            for w in self.neighbours(v) {
                if mask[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Fomin-Zelevinsky mutation at `k`.
    pub fn mutate(&self, k: usize) -> Result<Quiver> {
        self.check_vertex(k)?;
        let n = self.n;
        let mut out = self.clone();
        for x in 0..n {
            for y in 0..n {
                if x == k || y == k {
                    out.b[x * n + y] = -self.b(x, y);
                } else {
                    let bxk = self.b(x, k);
                    let bky = self.b(k, y);
                    let delta = bxk
                        .abs()
                        .checked_mul(bky)
                        .and_then(|p| bxk.checked_mul(bky.abs()).and_then(|r| p.checked_add(r)))
                        .ok_or(Error::Overflow)?
                        / 2;
                    out.b[x * n + y] = self.b(x, y).checked_add(delta).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    /// Applies mutations in order.
    pub fn mutate_sequence(&self, seq: &[usize]) -> Result<Quiver> {
        seq.iter().try_fold(self.clone(), |q, &k| q.mutate(k))
    }

    /// Whether `x, y, z` span a cyclically oriented 3-cycle.
    pub fn is_oriented_triangle(&self, x: usize, y: usize, z: usize) -> bool {
        let (a, b, c) = (self.b(x, y), self.b(y, z), self.b(z, x));
        a != 0 && b != 0 && c != 0 && a.signum() == b.signum() && b.signum() == c.signum()
    }

    /// Oriented 3-cycles as `[a, b, c]` with `a -> b -> c -> a` and `a` the least vertex.
    pub fn oriented_3_cycles(&self) -> Vec<[usize; 3]> {
        self.oriented_3_cycles_in(&vec![true; self.n])
    }

    pub(crate) fn oriented_3_cycles_in(&self, mask: &[bool]) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for a in 0..self.n {
            if !mask[a] {
                continue;
            }
            for b in a + 1..self.n {
                if !mask[b] || !self.has_arrow(a, b) {
                    continue;
                }
                for c in (a + 1..self.n).filter(|&c| mask[c]) {
                    if c != b && self.has_arrow(b, c) && self.has_arrow(c, a) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub(crate) fn valency_in(&self, x: usize, mask: &[bool]) -> usize {
        (0..self.n).filter(|&y| mask[y]).map(|y| self.b(x, y).unsigned_abs() as usize).sum()
    }

    /// Vertices of valency 0, valency 1, or 3-cycle vertices of valency 2.
    pub fn end_vertices(&self) -> Vec<usize> {
        self.end_vertices_in(&vec![true; self.n])
    }

    pub(crate) fn end_vertices_in(&self, mask: &[bool]) -> Vec<usize> {
        let in_cycle: BTreeSet<usize> = self.oriented_3_cycles_in(mask).into_iter().flatten().collect();
        (0..self.n)
            .filter(|&x| mask[x])
            .filter(|&x| match self.valency_in(x, mask) {
                0 | 1 => true,
                2 => in_cycle.contains(&x),
                _ => false,
            })
            .collect()
    }

    /// A walk `u - v - w` that uses two arrows of one oriented 3-cycle.
    #[inline]
    pub(crate) fn is_zero_relation(&self, u: usize, v: usize, w: usize) -> bool {
        u != w && self.adjacent(u, w) && self.is_oriented_triangle(u, v, w)
    }

    /// The unique string from `i` to `j`.
    pub fn string_between(&self, i: usize, j: usize) -> Result<StringWalk> {
        self.string_between_in(i, j, &vec![true; self.n])
    }

    pub(crate) fn string_between_in(&self, i: usize, j: usize, mask: &[bool]) -> Result<StringWalk> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Ok(StringWalk::trivial(i));
        }
        let mut found: Vec<Vec<usize>> = Vec::new();
        let mut path = vec![i];
        let mut on_path = vec![false; self.n];
        on_path[i] = true;
        self.string_search(j, mask, &mut path, &mut on_path, &mut found);
        match found.len() {
            0 => Err(Error::NoString { from: i, to: j }),
            1 => Ok(StringWalk::from_vertices(self, found.pop().expect("one string"))),
            _ => Err(Error::AmbiguousString { from: i, to: j }),
        }
    }

    fn string_search(
        &self,
        target: usize,
        mask: &[bool],
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        found: &mut Vec<Vec<usize>>,
    ) {
        if found.len() > 1 {
            return;
        }
        let v = *path.last().expect("non-empty");
        if v == target {
            found.push(path.clone());
            return;
        }
        let prev = path.len().checked_sub(2).map(|k| path[k]);
        for w in 0..self.n {
            if !mask[w] || on_path[w] || !self.adjacent(v, w) {
                continue;
            }
            if prev.is_some_and(|u| self.is_zero_relation(u, v, w)) {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            self.string_search(target, mask, path, on_path, found);
            on_path[w] = false;
            path.pop();
        }
    }

    /// Every string (up to reversal, trivial strings included) inside `mask`.
    pub(crate) fn all_strings_in(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for s in 0..self.n {
            if !mask[s] {
                continue;
            }
            let mut path = vec![s];
            let mut on_path = vec![false; self.n];
            on_path[s] = true;
            self.collect_strings(mask, &mut path, &mut on_path, &mut out);
        }
        out
    }

    fn collect_strings(&self, mask: &[bool], path: &mut Vec<usize>, on_path: &mut [bool], out: &mut Vec<Vec<usize>>) {
        // canonical orientation: smaller endpoint first
        if path[0] <= *path.last().expect("non-empty") {
            out.push(path.clone());
        }
        let v = *path.last().expect("non-empty");
        let prev = path.len().checked_sub(2).map(|k| path[k]);
        for w in 0..self.n {
            if !mask[w] || on_path[w] || !self.adjacent(v, w) {
                continue;
            }
            if prev.is_some_and(|u| self.is_zero_relation(u, v, w)) {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            self.collect_strings(mask, path, on_path, out);
            on_path[w] = false;
            path.pop();
        }
    }

    /// Vertex sets of the biconnected components (blocks) of the underlying
    /// simple graph restricted to `mask`. Isolated vertices are omitted.
    pub(crate) fn blocks_in(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut edge_stack: Vec<(usize, usize)> = Vec::new();
        let mut blocks = Vec::new();
        let mut time = 0;
        for root in 0..n {
            if !mask[root] || disc[root] != usize::MAX {
                continue;
            }
            // iterative DFS: (vertex, parent, next neighbour index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
                let mut advanced = false;
                while *next < n {
                    let w = *next;
                    *next += 1;
                    if !mask[w] || !self.adjacent(v, w) || w == parent {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        edge_stack.push((v, w));
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, v, 0));
                        advanced = true;
                        break;
                    } else if disc[w] < disc[v] {
                        edge_stack.push((v, w));
                        low[v] = low[v].min(disc[w]);
                    }
                }
                if advanced {
                    continue;
                }
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut verts = BTreeSet::new();
                        while let Some((a, b)) = edge_stack.pop() {
                            verts.insert(a);
                            verts.insert(b);
                            if (a, b) == (u, v) {
                                break;
                            }
                        }
                        blocks.push(verts.into_iter().collect());
                    }
                }
            }
        }
        blocks.sort();
        blocks
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.blocks_in(&vec![true; self.n])
    }
}

/// Applies `length` mutations at vertices drawn uniformly from a ChaCha8
/// generator seeded with `rng_seed`.
pub fn random_mutation_walk(seed: &Quiver, length: usize, rng_seed: u64) -> Result<MutationWalk> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut q = seed.clone();
    let mut sequence = Vec::with_capacity(length);
    if seed.n() == 0 {
        return Ok(MutationWalk { quiver: q, sequence });
    }
    for _ in 0..length {
        let k = rng.gen_range(0..seed.n());
        q = q.mutate(k)?;
        sequence.push(k);
    }
    Ok(MutationWalk { quiver: q, sequence })
}

#[cfg(test)]
pub(crate) use tests::sample_a11;
