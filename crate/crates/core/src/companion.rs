//! Companion bases: verification, quasi-Cartan matrices, mutation and
//! dimension vectors.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Solution};
use crate::quiver::Quiver;
use crate::root_lattice::{self, CartanType, Root};
use crate::scalar::Scalar;
use crate::type_a::is_type_a;

/// One root per quiver vertex, indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompanionBasis<T = i64> {
    cartan: CartanType,
    entries: Vec<Root<T>>,
}

impl<T: Scalar> CompanionBasis<T> {
    pub fn new(cartan: CartanType, entries: Vec<Root<T>>) -> Result<Self> {
        for e in &entries {
            if e.len() != cartan.rank() {
                return Err(Error::LengthMismatch { expected: cartan.rank(), got: e.len() });
            }
        }
        Ok(CompanionBasis { cartan, entries })
    }

    /// The simple system `alpha_1, ..., alpha_n`, vertex `x` getting `alpha_{x+1}`.
    pub fn simple(cartan: CartanType) -> Self {
        let n = cartan.rank();
        CompanionBasis { cartan, entries: (0..n).map(|i| Root::simple(n, i)).collect() }
    }

    pub fn from_i64_rows(cartan: CartanType, rows: &[Vec<i64>]) -> Result<Self> {
        let entries = rows.iter().map(|r| Root::from_i64s(r)).collect::<Result<_>>()?;
        Self::new(cartan, entries)
    }

    pub fn cartan(&self) -> CartanType {
        self.cartan
    }

    pub fn entries(&self) -> &[Root<T>] {
        &self.entries
    }

    pub fn entry(&self, x: usize) -> &Root<T> {
        &self.entries[x]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rows of coefficients, as machine integers.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        self.entries.iter().map(Root::to_i64s).collect()
    }
}

/// A symmetric matrix with all diagonal entries 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiCartan<T = i64> {
    a: Matrix<T>,
}

impl<T: Scalar> QuasiCartan<T> {
    pub fn new(a: Matrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let two = T::one() + T::one();
        if !a.is_symmetric() || (0..a.rows()).any(|i| *a.get(i, i) != two) {
            return Err(Error::InvalidParams("quasi-Cartan matrices are symmetric with diagonal 2".into()));
        }
        Ok(QuasiCartan { a })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn leading_minors(&self) -> Result<Vec<T>> {
        linalg::leading_principal_minors(&self.a)
    }
}

/// `a_xy = (gamma_x, gamma_y)`.
pub fn quasi_cartan_of<T: Scalar>(basis: &CompanionBasis<T>) -> Result<QuasiCartan<T>> {
    let t = basis.cartan;
    let n = basis.len();
    for e in &basis.entries {
        if !root_lattice::is_root(t, e) {
            return Err(Error::NotARoot { norm: root_lattice::norm(t, e)?.to_string() });
        }
    }
    let mut a = Matrix::zeros(n, n);
    for x in 0..n {
        for y in x..n {
            let v = root_lattice::inner(t, &basis.entries[x], &basis.entries[y])?;
            a.set(x, y, v.clone());
            a.set(y, x, v);
        }
    }
    QuasiCartan::new(a)
}

/// Positive definiteness, by Sylvester's criterion on the leading principal minors.
pub fn is_positive<T: Scalar>(m: &QuasiCartan<T>) -> bool {
    matches!(m.leading_minors(), Ok(minors) if minors.iter().all(Signed::is_positive))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Size,
    Root,
    ZBasis,
    Edges,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Size => "size",
            Check::Root => "root",
            Check::ZBasis => "z_basis",
            Check::Edges => "edges",
        })
    }
}

/// The first check a candidate basis fails. `pair` holds vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyFailure {
    pub check: Check,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    pub expected: Value,
    pub got: Value,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} check failed", self.check)?;
        if let Some([x, y]) = self.pair {
            write!(f, " at ({x},{y})")?;
        }
        write!(f, ": expected {}, got {}", self.expected, self.got)
    }
}

fn json_int<T: Scalar>(v: &T) -> Value {
    v.to_i64().map(Value::from).unwrap_or_else(|| Value::String(v.to_string()))
}

/// Checks that `basis` is a companion basis for `q`: every entry is a root,
/// the entries form a Z-basis, and `|(gamma_x, gamma_y)|` is the number of
/// edges between `x` and `y`. Pairs joined by an edge are checked before
/// the others, each group in lexicographic order.
pub fn verify<T: Scalar>(q: &Quiver, basis: &CompanionBasis<T>) -> std::result::Result<(), VerifyFailure> {
    let n = q.n();
    let t = basis.cartan;
    let fail = |check, pair, expected, got| Err(VerifyFailure { check, pair, expected, got });
    if basis.len() != n || t.rank() != n {
        return fail(Check::Size, None, Value::from(n), Value::from(basis.len().max(t.rank())));
    }
    let two = T::one() + T::one();
    for (x, e) in basis.entries.iter().enumerate() {
        match root_lattice::norm(t, e) {
            Ok(v) if v == two => {}
            Ok(v) => return fail(Check::Root, Some([x, x]), Value::from(2), json_int(&v)),
            Err(e) => return fail(Check::Root, Some([x, x]), Value::from(2), Value::String(e.to_string())),
        }
    }
    match root_lattice::coefficient_matrix(t, &basis.entries).and_then(|m| linalg::determinant(&m)) {
        Ok(det) if det.abs().is_one() => {}
        Ok(det) => return fail(Check::ZBasis, None, Value::from(1), json_int(&det.abs())),
        Err(e) => return fail(Check::ZBasis, None, Value::from(1), Value::String(e.to_string())),
    }
    let pairs = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y)));
    let (edges, others): (Vec<_>, Vec<_>) = pairs.partition(|&(x, y)| q.adjacent(x, y));
    for (x, y) in edges.into_iter().chain(others) {
        let expected = q.b(x, y).unsigned_abs();
        let got = match root_lattice::inner(t, &basis.entries[x], &basis.entries[y]) {
            Ok(v) => v.abs(),
            Err(e) => return fail(Check::Edges, Some([x, y]), Value::from(expected), Value::String(e.to_string())),
        };
        if got.to_u64() != Some(expected) {
            return fail(Check::Edges, Some([x, y]), Value::from(expected), json_int(&got));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Reflect the entries at tails of arrows into `k`.
    Inward,
    /// Reflect the entries at heads of arrows out of `k`.
    Outward,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inward" => Ok(Direction::Inward),
            "outward" => Ok(Direction::Outward),
            _ => Err(Error::Parse(format!("unknown direction {s:?}"))),
        }
    }
}

/// Mutates a companion basis of `q` at `k`; the result is a companion basis
/// of `q.mutate(k)`. Refuses input that does not verify against `q`.
pub fn mutate_basis<T: Scalar>(
    q: &Quiver,
    basis: &CompanionBasis<T>,
    k: usize,
    direction: Direction,
) -> Result<CompanionBasis<T>> {
    q.check_vertex(k)?;
    verify(q, basis).map_err(Error::UnverifiedBasis)?;
    let mirror = &basis.entries[k];
    let entries = (0..q.n())
        .map(|x| {
            let reflect = match direction {
                Direction::Inward => q.has_arrow(x, k),
                Direction::Outward => q.has_arrow(k, x),
            };
            if reflect {
                root_lattice::reflect(basis.cartan, mirror, &basis.entries[x])
            } else {
                Ok(basis.entries[x].clone())
            }
        })
        .collect::<Result<_>>()?;
    Ok(CompanionBasis { cartan: basis.cartan, entries })
}

/// For each positive root, the absolute values of its coordinates with
/// respect to `basis`, sorted.
pub fn dimension_vectors<T: Scalar>(q: &Quiver, basis: &CompanionBasis<T>) -> Result<Vec<Vec<T>>> {
    verify(q, basis).map_err(Error::UnverifiedBasis)?;
    let t = basis.cartan;
    let a = root_lattice::coefficient_matrix(t, &basis.entries)?.transpose();
    let mut out = BTreeSet::new();
    for rho in root_lattice::positive_roots::<T>(t) {
        match linalg::solve_integral(&a, rho.coeffs())? {
            Solution::Unique(c) => {
                out.insert(c.into_iter().map(|v| v.abs()).collect::<Vec<T>>());
            }
            Solution::NonIntegral | Solution::Singular => return Err(Error::SingularBasis),
        }
    }
    Ok(out.into_iter().collect())
}

/// Vertex-indicator vectors of all strings of a type-A quiver (including the
/// trivial ones), sorted.
pub fn strings_oracle(q: &Quiver) -> Result<Vec<Vec<i64>>> {
    if !is_type_a(q) {
        return Err(Error::NotTypeA);
    }
    let mut out = BTreeSet::new();
    for s in q.all_strings_in(&vec![true; q.n()]) {
        let mut v = vec![0i64; q.n()];
        for x in s {
            v[x] = 1;
        }
        out.insert(v);
    }
    Ok(out.into_iter().collect())
}
