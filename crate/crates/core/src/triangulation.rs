//! Triangulations of polygons and their quivers.
//!
//! Polygon vertices are numbered `0..s` clockwise. Diagonals become quiver
//! vertices in the order given.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::Quiver;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    polygon_size: usize,
    diagonals: Vec<(usize, usize)>,
}

impl Triangulation {
    pub fn new(polygon_size: usize, diagonals: Vec<(usize, usize)>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidTriangulation(msg));
        if polygon_size < 4 {
            return bad(format!("polygon must have at least 4 vertices, got {polygon_size}"));
        }
        if diagonals.len() != polygon_size - 3 {
            return bad(format!("expected {} diagonals, got {}", polygon_size - 3, diagonals.len()));
        }
        let s = polygon_size;
        let mut norm = Vec::with_capacity(diagonals.len());
        for &(a, b) in &diagonals {
            if a >= s || b >= s {
                return bad(format!("diagonal ({a},{b}) has an endpoint outside the polygon"));
            }
            let (lo, hi) = (a.min(b), a.max(b));
            if hi - lo < 2 || (lo == 0 && hi == s - 1) {
                return bad(format!("({a},{b}) is not a diagonal"));
            }
            if norm.contains(&(lo, hi)) {
                return bad(format!("diagonal ({a},{b}) is repeated"));
            }
            norm.push((lo, hi));
        }
        for (i, &(a, b)) in norm.iter().enumerate() {
            for &(c, d) in &norm[i + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return bad(format!("diagonals ({a},{b}) and ({c},{d}) cross"));
                }
            }
        }
        Ok(Triangulation { polygon_size, diagonals })
    }

    /// All diagonals from vertex 0.
    pub fn fan(polygon_size: usize) -> Result<Self> {
        let diagonals = (2..polygon_size.saturating_sub(1)).map(|k| (0, k)).collect();
        Self::new(polygon_size, diagonals)
    }

    pub fn polygon_size(&self) -> usize {
        self.polygon_size
    }

    pub fn diagonals(&self) -> &[(usize, usize)] {
        &self.diagonals
    }

    fn is_side(&self, a: usize, b: usize) -> bool {
        let s = self.polygon_size;
        (a + 1) % s == b || (b + 1) % s == a || self.diagonal_index(a, b).is_some()
    }

    fn diagonal_index(&self, a: usize, b: usize) -> Option<usize> {
        self.diagonals.iter().position(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    /// The triangles of the triangulation as sorted vertex triples.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let s = self.polygon_size;
        let mut out = Vec::new();
        for a in 0..s {
            for b in a + 1..s {
                if !self.is_side(a, b) {
                    continue;
                }
                for c in b + 1..s {
                    if self.is_side(b, c) && self.is_side(a, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// Number of triangles bounded by three diagonals.
    pub fn internal_triangle_count(&self) -> usize {
        self.triangles()
            .iter()
            .filter(|t| {
                [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])].iter().all(|&(x, y)| self.diagonal_index(x, y).is_some())
            })
            .count()
    }
}

/// Quiver with one vertex per diagonal. Two diagonals bounding a common
/// triangle are joined by an arrow `d_i -> d_j` when, seen from their common
/// endpoint, `d_j` comes before `d_i` going clockwise.
pub fn quiver_from_triangulation(t: &Triangulation) -> Quiver {
    let s = t.polygon_size;
    let mut arrows = Vec::new();
    for tri in t.triangles() {
        let sides = [(tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])];
        let diags: Vec<usize> = sides.iter().filter_map(|&(x, y)| t.diagonal_index(x, y)).collect();
        for (k, &i) in diags.iter().enumerate() {
            for &j in &diags[k + 1..] {
                let (di, dj) = (t.diagonals[i], t.diagonals[j]);
                let common =
                    [di.0, di.1].into_iter().find(|&v| v == dj.0 || v == dj.1).expect("sides of a triangle meet");
                let other = |d: (usize, usize)| if d.0 == common { d.1 } else { d.0 };
                let offset = |v: usize| (v + s - common) % s;
                if offset(other(dj)) < offset(other(di)) {
                    arrows.push((i, j));
                } else {
                    arrows.push((j, i));
                }
            }
        }
    }
    Quiver::from_arrows(t.diagonals.len(), &arrows).expect("diagonal indices are in range")
}
