//! Canonical forms of quivers up to vertex renumbering, and mutation classes.
//!
//! The canonical form is the lexicographically least exchange matrix over
//! all numberings reached by colour refinement plus individualisation, which
//! is an isomorphism invariant and exact for every graph.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// Refines a vertex colouring until stable. Colours are ranks of signatures
/// built only from colours and matrix entries, so the result is invariant.
fn refine(q: &Quiver, colours: &mut [usize]) {
    let n = q.n();
    loop {
        let classes_before = colours.iter().collect::<BTreeSet<_>>().len();
        let sigs: Vec<(usize, Vec<(usize, i64)>)> = (0..n)
            .map(|x| {
                let mut nb: Vec<(usize, i64)> =
                    (0..n).filter(|&y| q.b(x, y) != 0).map(|y| (colours[y], q.b(x, y))).collect();
                nb.sort_unstable();
                (colours[x], nb)
            })
            .collect();
        let distinct: BTreeSet<&(usize, Vec<(usize, i64)>)> = sigs.iter().collect();
        let ranked: Vec<&(usize, Vec<(usize, i64)>)> = distinct.into_iter().collect();
        for x in 0..n {
            colours[x] = ranked.binary_search(&&sigs[x]).expect("present");
        }
        if ranked.len() == classes_before {
            return;
        }
    }
}

fn search(q: &Quiver, colours: Vec<usize>, best: &mut Option<Vec<i64>>) {
    let n = q.n();
    let mut counts = vec![0usize; n];
    for &c in &colours {
        counts[c] += 1;
    }
    match (0..n).find(|&c| counts[c] > 1) {
        None => {
            // colours are a permutation: vertex x goes to position colours[x]
            let mut m = vec![0i64; n * n];
            for x in 0..n {
                for y in 0..n {
                    m[colours[x] * n + colours[y]] = q.b(x, y);
                }
            }
            if best.as_ref().is_none_or(|b| m < *b) {
                *best = Some(m);
            }
        }
        Some(cell) => {
            for v in (0..n).filter(|&x| colours[x] == cell) {
                let mut c: Vec<usize> = colours.iter().map(|&k| 2 * k + 1).collect();
                c[v] = 2 * cell;
                refine(q, &mut c);
                search(q, c, best);
            }
        }
    }
}

/// Canonical representative of the isomorphism class of `q`.
pub fn canonical_form(q: &Quiver) -> Quiver {
    let n = q.n();
    if n == 0 {
        return q.clone();
    }
    let mut colours = vec![0; n];
    refine(q, &mut colours);
    let mut best = None;
    search(q, colours, &mut best);
    let m = best.expect("at least one leaf");
    let rows: Vec<Vec<i64>> = m.chunks(n).map(<[i64]>::to_vec).collect();
    Quiver::from_matrix(&rows).expect("permuted skew-symmetric matrix")
}

/// All quivers mutation-equivalent to `seed`, as sorted canonical forms.
/// Fails if more than `limit` classes are found.
pub fn mutation_class(seed: &Quiver, limit: usize) -> Result<Vec<Quiver>> {
    let start = canonical_form(seed);
    let mut seen: HashSet<Quiver> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        for k in 0..q.n() {
            let c = canonical_form(&q.mutate(k)?);
            if seen.insert(c.clone()) {
                if seen.len() > limit {
                    return Err(Error::InvalidParams(format!("mutation class exceeds {limit} quivers")));
                }
                queue.push_back(c);
            }
        }
    }
    let mut out: Vec<Quiver> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}
