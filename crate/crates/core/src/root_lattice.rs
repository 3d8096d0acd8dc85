//! Root systems of types A_n and D_n in simple-root coordinates.
//!
//! A [`Root`] stores the coefficients of a lattice vector with respect to the
//! simple system `alpha_1, ..., alpha_n` (index 0 holds the coefficient of
//! `alpha_1`). For D_n the Dynkin diagram is the chain `1 - 2 - ... - (n-2)`
//! with both `n-1` and `n` attached to `n-2`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::D => 'D',
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A simply-laced Cartan type `A_n` (n >= 1) or `D_n` (n >= 4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCartanType")]
pub struct CartanType {
    family: Family,
    rank: usize,
}

#[derive(Deserialize)]
struct RawCartanType {
    family: Family,
    rank: usize,
}

impl TryFrom<RawCartanType> for CartanType {
    type Error = Error;

    fn try_from(raw: RawCartanType) -> Result<Self> {
        CartanType::new(raw.family, raw.rank)
    }
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let min = match family {
            Family::A => 1,
            Family::D => 4,
        };
        if rank < min {
            return Err(Error::InvalidRank { family: family.letter(), rank });
        }
        Ok(CartanType { family, rank })
    }

    pub fn a(rank: usize) -> Result<Self> {
        Self::new(Family::A, rank)
    }

    pub fn d(rank: usize) -> Result<Self> {
        Self::new(Family::D, rank)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Edges of the Dynkin diagram as 0-based node pairs `(i, j)`, `i < j`.
    pub fn dynkin_edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.family {
            Family::A => (0..n - 1).map(|i| (i, i + 1)).collect(),
            Family::D => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 3, n - 1));
                e
            }
        }
    }

    /// Number of positive roots.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::D => n * (n - 1),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// A vector of the root lattice in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root<T = i64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Root<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Root { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        Root { coeffs: vec![T::zero(); rank] }
    }

    /// The simple root `alpha_{index+1}`.
    pub fn simple(rank: usize, index: usize) -> Self {
        let mut r = Self::zero(rank);
        r.coeffs[index] = T::one();
        r
    }

    /// `alpha_{lo+1} + ... + alpha_{hi+1}` (0-based, inclusive). Empty when `lo > hi`.
    pub fn interval(rank: usize, lo: usize, hi: usize) -> Self {
        let mut r = Self::zero(rank);
        for c in r.coeffs.iter_mut().take(hi + 1).skip(lo) {
            *c = T::one();
        }
        r
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Ok(Root { coeffs: coeffs.iter().map(|&c| scalar::from_i64(c)).collect::<Result<_>>()? })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, k: &T, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: other.len() });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| scalar::add(a, &scalar::mul(k, b)?))
            .collect::<Result<_>>()?;
        Ok(Root { coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(&T::one(), other)
    }

    pub fn neg(&self) -> Self {
        Root { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn to_i64s(&self) -> Result<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64().ok_or(Error::Overflow)).collect()
    }
}

impl<T: Scalar> fmt::Display for Root<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}a{}", i + 1)?;
            } else {
                write!(f, "{sign}{mag}a{}", i + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The symmetric bilinear form on the simple roots (the Cartan matrix).
pub fn gram_matrix<T: Scalar>(t: CartanType) -> Matrix<T> {
    let n = t.rank();
    let two = T::one() + T::one();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        g.set(i, i, two.clone());
    }
    for (i, j) in t.dynkin_edges() {
        g.set(i, j, -T::one());
        g.set(j, i, -T::one());
    }
    g
}

fn check_len<T>(t: CartanType, v: &Root<T>) -> Result<()> {
    if v.coeffs.len() != t.rank() {
        return Err(Error::LengthMismatch { expected: t.rank(), got: v.coeffs.len() });
    }
    Ok(())
}

/// `(u, v)`, computed from the Dynkin edges in O(n).
pub fn inner<T: Scalar>(t: CartanType, u: &Root<T>, v: &Root<T>) -> Result<T> {
    check_len(t, u)?;
    check_len(t, v)?;
    let mut acc = T::zero();
    for (a, b) in u.coeffs.iter().zip(&v.coeffs) {
        let p = scalar::mul(a, b)?;
        acc = scalar::add(&acc, &scalar::add(&p, &p)?)?;
    }
    for (i, j) in t.dynkin_edges() {
        let cross = scalar::mul_add2(&u.coeffs[i], &v.coeffs[j], &u.coeffs[j], &v.coeffs[i])?;
        acc = scalar::sub(&acc, &cross)?;
    }
    Ok(acc)
}

pub fn norm<T: Scalar>(t: CartanType, v: &Root<T>) -> Result<T> {
    inner(t, v, v)
}

/// In a simply-laced root lattice the roots are exactly the vectors of norm 2.
pub fn is_root<T: Scalar>(t: CartanType, v: &Root<T>) -> bool {
    let two = T::one() + T::one();
    matches!(norm(t, v), Ok(n) if n == two)
}

/// The reflection `s_mirror(v) = v - (v, mirror) mirror`.
pub fn reflect<T: Scalar>(t: CartanType, mirror: &Root<T>, v: &Root<T>) -> Result<Root<T>> {
    let nm = norm(t, mirror)?;
    if nm != T::one() + T::one() {
        return Err(Error::NotARoot { norm: nm.to_string() });
    }
    let k = inner(t, v, mirror)?;
    v.add_scaled(&-k, mirror)
}

/// Positive roots, generated by closure from the simple roots. Sorted by
/// height, then lexicographically.
pub fn positive_roots<T: Scalar>(t: CartanType) -> Vec<Root<T>> {
    let n = t.rank();
    let simples: Vec<Root<T>> = (0..n).map(|i| Root::simple(n, i)).collect();
    let mut seen: BTreeSet<Root<T>> = simples.iter().cloned().collect();
    let mut queue: VecDeque<Root<T>> = simples.iter().cloned().collect();
    while let Some(v) = queue.pop_front() {
        for a in &simples {
            // Coefficients of D_n roots are at most 2, so this cannot overflow.
            let w = v.add(a).expect("positive root coefficients are tiny");
            if !seen.contains(&w) && is_root(t, &w) {
                seen.insert(w.clone());
                queue.push_back(w);
            }
        }
    }
    let mut out: Vec<Root<T>> = seen.into_iter().collect();
    out.sort_by(|a, b| {
        let ha = a.coeffs.iter().fold(T::zero(), |s, c| s + c.clone());
        let hb = b.coeffs.iter().fold(T::zero(), |s, c| s + c.clone());
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    out
}

/// Coefficient matrix with one row per vector.
pub fn coefficient_matrix<T: Scalar>(t: CartanType, vs: &[Root<T>]) -> Result<Matrix<T>> {
    for v in vs {
        check_len(t, v)?;
    }
    Matrix::from_rows(vs.iter().map(|v| v.coeffs.clone()).collect())
}

/// Whether `vs` is a Z-basis of the root lattice, i.e. its coefficient
/// matrix has determinant +-1.
pub fn is_z_basis<T: Scalar>(t: CartanType, vs: &[Root<T>]) -> Result<bool> {
    if vs.len() != t.rank() {
        return Err(Error::WrongCardinality { expected: t.rank(), got: vs.len() });
    }
    let det = linalg::determinant(&coefficient_matrix(t, vs)?)?;
    Ok(det.abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn a(n: usize) -> CartanType {
        CartanType::a(n).unwrap()
    }

    fn d(n: usize) -> CartanType {
        CartanType::d(n).unwrap()
    }

    fn r(c: &[i64]) -> Root {
        Root::from_i64s(c).unwrap()
    }

    /// Euclidean realization used as an independent oracle:
    /// A_n in Z^{n+1} with alpha_i = e_i - e_{i+1};
    /// D_n in Z^n with alpha_i = e_i - e_{i+1} (i < n), alpha_n = e_{n-1} + e_n.
    fn euclid_simple(t: CartanType) -> Vec<Vec<i64>> {
        let n = t.rank();
        match t.family() {
            Family::A => (0..n)
                .map(|i| {
                    let mut v = vec![0; n + 1];
                    v[i] = 1;
                    v[i + 1] = -1;
                    v
                })
                .collect(),
            Family::D => (0..n)
                .map(|i| {
                    let mut v = vec![0; n];
                    if i + 1 < n {
                        v[i] = 1;
                        v[i + 1] = -1;
                    } else {
                        v[n - 2] = 1;
                        v[n - 1] = 1;
                    }
                    v
                })
                .collect(),
        }
    }

    fn dot(u: &[i64], v: &[i64]) -> i64 {
        u.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    fn to_euclid(t: CartanType, c: &[i64]) -> Vec<i64> {
        let s = euclid_simple(t);
        let dim = s[0].len();
        (0..dim).map(|k| c.iter().zip(&s).map(|(ci, si)| ci * si[k]).sum()).collect()
    }

    /// All roots via the Euclidean description, converted to simple-root
    /// coordinates by brute-force search over small coefficient vectors.
    fn enumerate_roots(t: CartanType) -> BTreeSet<Vec<i64>> {
        let n = t.rank();
        let mut euclid_roots = BTreeSet::new();
        match t.family() {
            Family::A => {
                for i in 0..=n {
                    for j in 0..=n {
                        if i != j {
                            let mut v = vec![0; n + 1];
                            v[i] = 1;
                            v[j] = -1;
                            euclid_roots.insert(v);
                        }
                    }
                }
            }
            Family::D => {
                for i in 0..n {
                    for j in i + 1..n {
                        for si in [-1, 1] {
                            for sj in [-1, 1] {
                                let mut v = vec![0; n];
                                v[i] = si;
                                v[j] = sj;
                                euclid_roots.insert(v);
                            }
                        }
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        let mut c = vec![-2i64; n];
        loop {
            if euclid_roots.contains(&to_euclid(t, &c)) {
                out.insert(c.clone());
            }
            let mut k = 0;
            while k < n && c[k] == 2 {
                c[k] = -2;
                k += 1;
            }
            if k == n {
                break;
            }
            c[k] += 1;
        }
        out
    }

    #[test]
    fn gram_a3() {
        let g: Matrix<i64> = gram_matrix(a(3));
        assert_eq!(g.to_rows(), vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
    }

    #[test]
    fn gram_matches_euclidean_realization() {
        for t in [a(1), a(2), a(5), d(4), d(5), d(7)] {
            let g: Matrix<i64> = gram_matrix(t);
            let s = euclid_simple(t);
            for i in 0..t.rank() {
                for j in 0..t.rank() {
                    assert_eq!(*g.get(i, j), dot(&s[i], &s[j]), "{t} ({i},{j})");
                }
            }
        }
        let g4: Matrix<i64> = gram_matrix(d(4));
        assert_eq!(*g4.get(1, 3), -1);
        assert_eq!(*g4.get(2, 3), 0);
        let g5: Matrix<i64> = gram_matrix(d(5));
        assert_eq!(*g5.get(3, 4), 0);
    }

    #[test]
    fn invalid_ranks() {
        assert!(CartanType::d(3).is_err());
        assert!(CartanType::a(0).is_err());
        assert!(CartanType::d(4).is_ok());
    }

    #[test]
    fn inner_examples() {
        let t = a(11);
        assert_eq!(inner(t, &Root::<i64>::simple(11, 4), &Root::simple(11, 4)).unwrap(), 2);
        let u = Root::<i64>::interval(11, 1, 8);
        let v = Root::<i64>::interval(11, 4, 6);
        assert_eq!(inner(t, &u, &v).unwrap(), 0);
        for n in 4..9 {
            for m in 1..n - 2 {
                let t = d(n);
                let x = Root::<i64>::interval(n, m, n - 2);
                let mut y = Root::<i64>::interval(n, m, n - 3);
                y = y.add(&Root::simple(n, n - 1)).unwrap();
                assert_eq!(inner(t, &x, &y).unwrap(), 0, "D{n} m={m}");
            }
        }
        assert!(matches!(
            inner(t, &Root::<i64>::simple(3, 0), &Root::simple(11, 0)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn reflect_examples() {
        // s_{alpha_{i+j}}(alpha_i + ... + alpha_{i+j-1}) = alpha_i + ... + alpha_{i+j}
        let t = a(8);
        let v = Root::<i64>::interval(8, 2, 5);
        assert_eq!(reflect(t, &Root::simple(8, 6), &v).unwrap(), Root::interval(8, 2, 6));
        let b = Root::<i64>::interval(8, 1, 3);
        assert_eq!(reflect(t, &b, &b).unwrap(), b.neg());
        // D_n: s_{a1+..+a_{n-2}+a_n}(a_{p}+..+a_{n-1}), orthogonal when p = 1
        let n = 7;
        let t = d(n);
        let mirror = Root::<i64>::interval(n, 0, n - 3).add(&Root::simple(n, n - 1)).unwrap();
        let whole = Root::<i64>::interval(n, 0, n - 2);
        assert_eq!(reflect(t, &mirror, &whole).unwrap(), whole);
        for p in 2..=n - 2 {
            let v = Root::<i64>::interval(n, p - 1, n - 2);
            let mut expect = vec![0i64; n];
            for (k, e) in expect.iter_mut().enumerate() {
                let label = k + 1;
                *e = if label < p {
                    1
                } else if label <= n - 2 {
                    2
                } else {
                    1
                };
            }
            assert_eq!(reflect(t, &mirror, &v).unwrap(), r(&expect), "p={p}");
        }
        assert!(matches!(reflect(t, &r(&[2, 0, 0, 0, 0, 0, 0]), &v_simple(n)), Err(Error::NotARoot { .. })));
    }

    fn v_simple(n: usize) -> Root {
        Root::simple(n, 0)
    }

    #[test]
    fn is_root_examples() {
        assert!(is_root(a(3), &r(&[1, 1, 0])));
        assert!(!is_root(a(3), &r(&[1, 0, 1])));
        for n in 4..9 {
            let v = Root::<i64>::interval(n, 0, n - 3).add(&Root::simple(n, n - 1)).unwrap();
            assert!(is_root(d(n), &v));
        }
    }

    #[test]
    fn positive_root_counts() {
        let a2: Vec<Root> = positive_roots(a(2));
        assert_eq!(a2, vec![r(&[1, 0]), r(&[0, 1]), r(&[1, 1])]);
        assert_eq!(positive_roots::<i64>(a(11)).len(), 66);
        assert_eq!(positive_roots::<i64>(d(4)).len(), 12);
        for n in 1..10 {
            assert_eq!(positive_roots::<i64>(a(n)).len(), n * (n + 1) / 2);
        }
        for n in 4..10 {
            let roots: Vec<Root> = positive_roots(d(n));
            assert_eq!(roots.len(), n * (n - 1));
            assert!(roots.iter().all(|v| is_root(d(n), v) && v.is_nonnegative()));
        }
    }

    #[test]
    fn roots_agree_with_euclidean_enumeration() {
        for t in [a(1), a(2), a(3), a(4), a(5), a(6), d(4), d(5), d(6)] {
            let oracle = enumerate_roots(t);
            assert_eq!(oracle.len(), 2 * t.positive_root_count(), "{t}");
            let pos: BTreeSet<Vec<i64>> = positive_roots::<i64>(t).iter().map(|v| v.coeffs().to_vec()).collect();
            let all: BTreeSet<Vec<i64>> =
                pos.iter().cloned().chain(pos.iter().map(|v| v.iter().map(|c| -c).collect())).collect();
            assert_eq!(all, oracle, "{t}");
            // is_root on every vector with coefficients in -2..=2
            let n = t.rank();
            let mut c = vec![-2i64; n];
            loop {
                assert_eq!(is_root(t, &r(&c)), oracle.contains(&c), "{t} {c:?}");
                let mut k = 0;
                while k < n && c[k] == 2 {
                    c[k] = -2;
                    k += 1;
                }
                if k == n {
                    break;
                }
                c[k] += 1;
            }
        }
    }

    #[test]
    fn z_basis_examples() {
        let t = a(4);
        let pi: Vec<Root> = (0..4).map(|i| Root::simple(4, i)).collect();
        assert!(is_z_basis(t, &pi).unwrap());
        let mut tri = pi.clone();
        tri[0] = r(&[1, 1, 0, 0]);
        assert!(is_z_basis(t, &tri).unwrap());
        let mut doubled = pi.clone();
        doubled[0] = r(&[2, 0, 0, 0]);
        assert!(!is_z_basis(t, &doubled).unwrap());
        assert!(matches!(is_z_basis(t, &pi[..3]), Err(Error::WrongCardinality { .. })));
    }

    #[test]
    fn bigint_roots() {
        let t = d(6);
        let roots: Vec<Root<BigInt>> = positive_roots(t);
        assert_eq!(roots.len(), 30);
        let highest = roots.last().unwrap();
        assert_eq!(norm(t, highest).unwrap(), BigInt::from(2));
    }

    #[test]
    fn display() {
        assert_eq!(r(&[1, 0, 2, -1]).to_string(), "a1+2a3-a4");
        assert_eq!(Root::<i64>::zero(3).to_string(), "0");
    }

    fn any_type() -> impl Strategy<Value = CartanType> {
        prop_oneof![(1usize..9).prop_map(a), (4usize..9).prop_map(d)]
    }

    proptest! {
        #[test]
        fn reflection_is_norm_preserving_involution(
            t in any_type(),
            mirror_idx in 0usize..1000,
            coeffs in prop::collection::vec(-3i64..=3, 8),
        ) {
            let roots: Vec<Root> = positive_roots(t);
            let m = &roots[mirror_idx % roots.len()];
            let v = r(&coeffs[..t.rank()]);
            let once = reflect(t, m, &v).unwrap();
            prop_assert_eq!(reflect(t, m, &once).unwrap(), v.clone());
            prop_assert_eq!(norm(t, &once).unwrap(), norm(t, &v).unwrap());
        }
    }
}
