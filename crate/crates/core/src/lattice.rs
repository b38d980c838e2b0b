//! Even integral lattices spanned by (−2)-curves: Gram matrices from dual
//! graphs, determinants, Smith and Hermite forms, overlattices by glue
//! vectors, and the divisibility conditions on curve classes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclofield::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("invalid curve configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown curve label {0:?}")]
    UnknownLabel(String),
    #[error("glue vector rejected: {0}")]
    RejectedGlue(String),
    #[error("Gram matrix must be square and symmetric")]
    NotSymmetric,
}

/// ADE Dynkin diagram type.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum DynkinType {
    A(u32),
    D(u32),
    E(u32),
}

impl DynkinType {
    pub fn rank(self) -> u32 {
        match self {
            DynkinType::A(n) | DynkinType::D(n) | DynkinType::E(n) => n,
        }
    }

    /// Order of the discriminant group of the root lattice.
    pub fn discriminant(self) -> u32 {
        match self {
            DynkinType::A(n) => n + 1,
            DynkinType::D(_) => 4,
            DynkinType::E(n) => 9 - n,
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

impl std::str::FromStr for DynkinType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad Dynkin type {s:?}");
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?;
        let n: u32 = chars.as_str().parse().map_err(|_| bad())?;
        match (letter, n) {
            ('A', 1..) => Ok(DynkinType::A(n)),
            ('D', 4..) => Ok(DynkinType::D(n)),
            ('E', 6..=8) => Ok(DynkinType::E(n)),
            _ => Err(bad()),
        }
    }
}

/// Dense integer matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| BigInt::from(rows[i][j]))
    }

    fn from_vecs(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        IntMatrix { rows: r, cols, data: rows.into_iter().flatten().collect() }
    }

    fn to_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(BigInt::zero(), |acc, k| acc + self.get(i, k) * rhs.get(k, j))
        })
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Principal submatrix on the given indices.
    pub fn submatrix(&self, idx: &[usize]) -> IntMatrix {
        Self::from_fn(idx.len(), idx.len(), |i, j| self.get(idx[i], idx[j]).clone())
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn exact_determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vecs();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = val / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal with each entry
/// dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries of `D`.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }

    /// Invariants of the torsion part: elementary divisors greater than 1.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.elementary_divisors().into_iter().filter(|x| !x.is_one()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.to_vecs();
    let mut u = IntMatrix::identity(r).to_vecs();
    let mut v = IntMatrix::identity(c).to_vecs();

    fn row_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        let (s, t) = if dst < src {
            let (lo, hi) = a.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = a.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        for (x, y) in s.iter_mut().zip(t.iter()) {
            *x -= q * y;
        }
    }
    fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        for row in a.iter_mut() {
            let y = row[src].clone();
            row[dst] -= q * y;
        }
    }
    fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..r {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..c {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    SmithForm {
        u: IntMatrix::from_vecs(u, r),
        d: IntMatrix::from_vecs(d, c),
        v: IntMatrix::from_vecs(v, c),
    }
}

/// Nonzero rows of the row-style Hermite normal form: a basis of the row lattice.
pub fn hermite_basis(m: &IntMatrix) -> IntMatrix {
    let mut a = m.to_vecs();
    let rows = a.len();
    let mut r = 0;
    for c in 0..m.cols {
        if r == rows {
            break;
        }
        let mut found = false;
        loop {
            let pivot = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = pivot else { break };
            found = true;
            a.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row.iter()) {
                    *x -= &q * y;
                }
                clean &= a[i][c].is_zero();
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = a[r].clone();
        for row in a.iter_mut().take(r) {
            let q = row[c].div_floor(&pivot_row[c]);
            if q.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    a.truncate(r);
    IntMatrix::from_vecs(a, m.cols)
}

/// `(positive, negative)` inertia of a symmetric integer matrix by rational
/// congruence diagonalization.
pub fn inertia(m: &IntMatrix) -> (usize, usize) {
    assert!(m.is_symmetric());
    let n = m.rows;
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| Rational::from_integer(m.get(i, j).clone())).collect())
        .collect();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(p) = (k + 1..n).find(|&p| !a[p][p].is_zero()) {
                a.swap(k, p);
                for row in a.iter_mut() {
                    row.swap(k, p);
                }
            } else if let Some(p) = (k + 1..n).find(|&p| !a[k][p].is_zero()) {
                // e_k ← e_k + e_p gives diagonal 2·a[k][p]
                let row_p = a[p].clone();
                for (x, v) in a[k].iter_mut().zip(row_p) {
                    *x += v;
                }
                for row in a.iter_mut() {
                    let v = row[p].clone();
                    row[k] += v;
                }
            }
        }
        let pivot = a[k][k].clone();
        if pivot.is_zero() {
            continue;
        }
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let f = &row[k] / &pivot;
            for (x, y) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= &f * y;
            }
        }
        for x in a[k][k + 1..].iter_mut() {
            *x = Rational::zero();
        }
        for row in a.iter_mut().skip(k + 1) {
            row[k] = Rational::zero();
        }
    }
    (pos, neg)
}

/// Prime factorization by trial division.
pub fn factorize(x: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = x.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

fn superscript(e: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    e.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

/// `2·3⁶·5` style rendering of `|x|` with a leading `−` for negatives.
pub fn factorization_string(x: &BigInt) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let sign = if x.is_negative() { "−" } else { "" };
    let factors = factorize(x);
    if factors.is_empty() {
        return format!("{sign}1");
    }
    let body: Vec<String> = factors
        .iter()
        .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}{}", superscript(*e)) })
        .collect();
    format!("{sign}{}", body.join("·"))
}

/// Determinant, discriminant group and inertia of a nondegenerate lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantData {
    pub determinant: BigInt,
    pub abs_discriminant: BigInt,
    pub factorization: Vec<(BigInt, u32)>,
    /// Elementary divisors greater than 1.
    pub group_invariants: Vec<BigInt>,
    pub rank: usize,
    pub positive_index: usize,
    pub negative_index: usize,
}

impl DiscriminantData {
    pub fn from_gram(gram: &IntMatrix) -> Self {
        let determinant = exact_determinant(gram);
        let snf = smith_normal_form(gram);
        let (positive_index, negative_index) = inertia(gram);
        let abs_discriminant = determinant.abs();
        DiscriminantData {
            factorization: factorize(&abs_discriminant),
            abs_discriminant,
            group_invariants: snf.torsion(),
            rank: snf.rank(),
            determinant,
            positive_index,
            negative_index,
        }
    }

    /// `|det|` equals the product of the elementary divisors.
    pub fn is_product_consistent(&self) -> bool {
        self.group_invariants.iter().fold(BigInt::one(), |a, b| a * b) == self.abs_discriminant
    }

    /// `sign(det) = (−1)^(negative index)`.
    pub fn is_sign_consistent(&self) -> bool {
        let expected_negative = self.negative_index % 2 == 1;
        !self.determinant.is_zero() && self.determinant.is_negative() == expected_negative
    }

    pub fn factorization_string(&self) -> String {
        factorization_string(&self.abs_discriminant)
    }
}

/// A dual graph of smooth rational curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveConfig {
    labels: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl CurveConfig {
    pub fn new<S: AsRef<str>>(labels: &[S], edges: &[(S, S)]) -> Result<Self, LatticeError> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(LatticeError::InvalidConfig(format!("duplicate curve {l}")));
            }
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let ia = *index.get(a).ok_or_else(|| LatticeError::UnknownLabel(a.to_string()))?;
            let ib = *index.get(b).ok_or_else(|| LatticeError::UnknownLabel(b.to_string()))?;
            if ia == ib {
                return Err(LatticeError::InvalidConfig(format!("loop at {a}")));
            }
            if !set.insert((ia.min(ib), ia.max(ib))) {
                return Err(LatticeError::InvalidConfig(format!("repeated edge {a}–{b}")));
            }
        }
        Ok(CurveConfig { labels, edges: set })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|&(a, b)| (self.labels[a].as_str(), self.labels[b].as_str()))
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    /// Connected components as sorted index lists, ordered by smallest index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut cursor = 0;
            while cursor < comp.len() {
                for w in self.neighbours(comp[cursor]) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                cursor += 1;
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// Component containing the named curve.
    pub fn component_of(&self, label: &str) -> Option<Vec<usize>> {
        let i = self.index_of(label)?;
        self.components().into_iter().find(|c| c.contains(&i))
    }

    /// Dynkin type of a connected set of vertices, if it is one.
    pub fn classify_component(&self, comp: &[usize]) -> Option<DynkinType> {
        let inside: BTreeSet<usize> = comp.iter().copied().collect();
        let nbrs = |v: usize| -> Vec<usize> {
            self.neighbours(v).into_iter().filter(|w| inside.contains(w)).collect()
        };
        let edge_count: usize = comp.iter().map(|&v| nbrs(v).len()).sum::<usize>() / 2;
        if comp.is_empty() || edge_count + 1 != comp.len() {
            return None;
        }
        let branch: Vec<usize> = comp.iter().copied().filter(|&v| nbrs(v).len() >= 3).collect();
        match branch.as_slice() {
            [] => Some(DynkinType::A(comp.len() as u32)),
            [b] if nbrs(*b).len() == 3 => {
                let mut arms: Vec<u32> = nbrs(*b)
                    .into_iter()
                    .map(|start| {
                        let (mut prev, mut cur, mut len) = (*b, start, 1);
                        loop {
                            let next: Vec<usize> = nbrs(cur).into_iter().filter(|&w| w != prev).collect();
                            match next.as_slice() {
                                [w] => {
                                    prev = cur;
                                    cur = *w;
                                    len += 1;
                                }
                                _ => break len,
                            }
                        }
                    })
                    .collect();
                arms.sort();
                let n = comp.len() as u32;
                match arms.as_slice() {
                    [1, 1, _] => Some(DynkinType::D(n)),
                    [1, 2, 2] => Some(DynkinType::E(6)),
                    [1, 2, 3] => Some(DynkinType::E(7)),
                    [1, 2, 4] => Some(DynkinType::E(8)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Sub-configuration on the curves accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(&str) -> bool) -> CurveConfig {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep(&self.labels[i])).collect();
        let labels: Vec<String> = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                let ia = idx.iter().position(|&i| i == a)?;
                let ib = idx.iter().position(|&i| i == b)?;
                Some((ia, ib))
            })
            .collect();
        CurveConfig { labels, edges }
    }
}

/// Gram matrix of a curve configuration: −2 on the diagonal, 1 per edge.
pub fn gram_from_config(c: &CurveConfig) -> IntLattice {
    let gram = IntMatrix::from_fn(c.len(), c.len(), |i, j| {
        BigInt::from(if i == j {
            -2
        } else if c.adjacent(i, j) {
            1
        } else {
            0
        })
    });
    IntLattice { gram, basis_labels: c.labels.clone(), glue: Vec::new() }
}

/// Determinants of the sub-lattices spanned by curves sharing a label letter.
pub fn block_determinants(c: &CurveConfig) -> BTreeMap<char, BigInt> {
    let letters: BTreeSet<char> = c.labels.iter().filter_map(|l| l.chars().next()).collect();
    letters
        .into_iter()
        .map(|ch| {
            let sub = c.restrict(|l| l.starts_with(ch));
            (ch, exact_determinant(gram_from_config(&sub).gram()))
        })
        .collect()
}

/// An even lattice with a basis of curves, optionally extended by rational
/// glue vectors expressed in that basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    gram: IntMatrix,
    basis_labels: Vec<String>,
    glue: Vec<Vec<Rational>>,
}

/// Outcome of [`check_divisible_class`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityCheck {
    pub passes: bool,
    pub support: usize,
    pub self_pairing: Rational,
    pub diagnostics: Vec<String>,
}

impl IntLattice {
    pub fn new(gram: IntMatrix, basis_labels: Vec<String>) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if basis_labels.len() != gram.rows {
            return Err(LatticeError::DimensionMismatch { expected: gram.rows, found: basis_labels.len() });
        }
        Ok(IntLattice { gram, basis_labels, glue: Vec::new() })
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn glue(&self) -> &[Vec<Rational>] {
        &self.glue
    }

    pub fn rank(&self) -> usize {
        self.gram.rows
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis_labels.iter().position(|l| l == label)
    }

    /// `Σ c·e_label / divisor` as a rational vector.
    pub fn vector(&self, terms: &[(&str, i64)], divisor: i64) -> Result<Vec<Rational>, LatticeError> {
        let mut v = vec![Rational::zero(); self.rank()];
        for (label, c) in terms {
            let i = self.index_of(label).ok_or_else(|| LatticeError::UnknownLabel(label.to_string()))?;
            v[i] += Rational::new(BigInt::from(*c), BigInt::from(divisor));
        }
        Ok(v)
    }

    pub fn pairing(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let g = self.gram.get(i, j);
                if !g.is_zero() {
                    acc += xi * yj * Rational::from_integer(g.clone());
                }
            }
        }
        acc
    }

    fn check_dim(&self, x: &[Rational]) -> Result<(), LatticeError> {
        if x.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), found: x.len() });
        }
        Ok(())
    }

    fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut e = vec![Rational::zero(); self.rank()];
        e[i] = Rational::one();
        e
    }

    /// All diagonal entries and all glue self-pairings are even.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).is_even())
            && self.glue.iter().all(|g| {
                let s = self.pairing(g, g);
                s.is_integer() && s.to_integer().is_even()
            })
    }

    /// Common denominator and integer generator matrix `D·(basis ∪ glue)`.
    fn scaled_basis(&self) -> (IntMatrix, BigInt) {
        let denom = self
            .glue
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let r = self.rank();
        let mut rows: Vec<Vec<BigInt>> = (0..r)
            .map(|i| (0..r).map(|j| if i == j { denom.clone() } else { BigInt::zero() }).collect())
            .collect();
        for g in &self.glue {
            rows.push(g.iter().map(|q| (q * Rational::from_integer(denom.clone())).to_integer()).collect());
        }
        let basis = hermite_basis(&IntMatrix::from_vecs(rows, r));
        (basis, denom)
    }

    /// Index of the original curve lattice in the glued lattice.
    pub fn index(&self) -> BigInt {
        let (h, d) = self.scaled_basis();
        let det = exact_determinant(&h).abs();
        num_traits::pow(d, self.rank()) / det
    }

    /// Membership in the glued lattice.
    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.rank() {
            return false;
        }
        let (h, d) = self.scaled_basis();
        let scaled: Vec<Rational> = v.iter().map(|q| q * Rational::from_integer(d.clone())).collect();
        if scaled.iter().any(|q| !q.is_integer()) {
            return false;
        }
        let mut w: Vec<BigInt> = scaled.iter().map(|q| q.to_integer()).collect();
        for i in 0..h.rows {
            let row = h.row(i);
            let Some(p) = row.iter().position(|x| !x.is_zero()) else { continue };
            if !w[p].is_multiple_of(&row[p]) {
                return false;
            }
            let q = &w[p] / &row[p];
            for (x, y) in w.iter_mut().zip(row.iter()) {
                *x -= &q * y;
            }
        }
        w.iter().all(Zero::is_zero)
    }

    /// Gram matrix of a ℤ-basis of the glued lattice.
    pub fn glued_gram(&self) -> IntMatrix {
        if self.glue.is_empty() {
            return self.gram.clone();
        }
        let (h, d) = self.scaled_basis();
        let raw = h.mul(&self.gram).mul(&h.transpose());
        let d2 = &d * &d;
        IntMatrix::from_fn(raw.rows, raw.cols, |i, j| {
            let x = raw.get(i, j);
            assert!(x.is_multiple_of(&d2), "glued lattice is not integral");
            x / &d2
        })
    }

    pub fn discriminant(&self) -> DiscriminantData {
        DiscriminantData::from_gram(&self.glued_gram())
    }
}

/// `⟨x, e⟩ ∈ ℤ` for every basis vector and every glue vector of `l`.
pub fn dual_membership(x: &[Rational], l: &IntLattice) -> Result<bool, LatticeError> {
    l.check_dim(x)?;
    let basis_ok = (0..l.rank()).all(|i| l.pairing(x, &l.basis_vector(i)).is_integer());
    Ok(basis_ok && l.glue.iter().all(|g| l.pairing(x, g).is_integer()))
}

/// Adds glue vectors, each of which must pair integrally with the current
/// lattice and have even square. Vectors already in the lattice are skipped.
pub fn extend_by_glue(l: &IntLattice, vs: &[Vec<Rational>]) -> Result<IntLattice, LatticeError> {
    let mut out = l.clone();
    for v in vs {
        out.check_dim(v)?;
        if out.contains(v) {
            continue;
        }
        if !dual_membership(v, &out)? {
            return Err(LatticeError::RejectedGlue("non-integral pairing".into()));
        }
        let sq = out.pairing(v, v);
        if !sq.is_integer() || sq.to_integer().is_odd() {
            return Err(LatticeError::RejectedGlue(format!("self-pairing {sq} is not even")));
        }
        out.glue.push(v.clone());
    }
    Ok(out)
}

/// Required support size of a `p`-divisible class of disjoint-ish curves.
pub fn required_support(p: u32) -> Option<usize> {
    match p {
        2 => Some(8),
        3 => Some(12),
        _ => None,
    }
}

/// Necessary conditions for `c/p` to lie in the lattice: coefficients in
/// `{0, ±1}`, integral pairings, even square and the support rule.
pub fn check_divisible_class(c: &[i64], p: u32, l: &IntLattice) -> DivisibilityCheck {
    let mut diagnostics = Vec::new();
    let support = c.iter().filter(|x| **x != 0).count();
    let mut passes = true;
    if c.len() != l.rank() {
        return DivisibilityCheck {
            passes: false,
            support,
            self_pairing: Rational::zero(),
            diagnostics: vec![format!("expected {} coefficients, got {}", l.rank(), c.len())],
        };
    }
    if c.iter().any(|x| x.abs() > 1) {
        passes = false;
        diagnostics.push("coefficients outside {0, ±1}".into());
    }
    let v: Vec<Rational> =
        c.iter().map(|x| Rational::new(BigInt::from(*x), BigInt::from(p))).collect();
    if !dual_membership(&v, l).unwrap_or(false) {
        passes = false;
        diagnostics.push("pairing with the lattice is not integral".into());
    }
    let self_pairing = l.pairing(&v, &v);
    if !self_pairing.is_integer() || self_pairing.to_integer().is_odd() {
        passes = false;
        diagnostics.push(format!("self-pairing {self_pairing} is not an even integer"));
    }
    match required_support(p) {
        Some(k) if k == support => {}
        Some(k) => {
            passes = false;
            diagnostics.push(format!("support {support}, required {k}"));
        }
        None => {
            passes = false;
            diagnostics.push(format!("no support rule for p = {p}"));
        }
    }
    DivisibilityCheck { passes, support, self_pairing, diagnostics }
}

/// Kernel of the Gram matrix over `F_p`, as basis vectors with entries in `0..p`.
pub fn kernel_mod_p(gram: &IntMatrix, p: u32) -> Vec<Vec<u32>> {
    let p64 = p as i64;
    let n = gram.cols;
    let mut a: Vec<Vec<i64>> = (0..gram.rows)
        .map(|i| {
            (0..n)
                .map(|j| gram.get(i, j).mod_floor(&BigInt::from(p)).to_i64().expect("small"))
                .collect()
        })
        .collect();
    let inv = |x: i64| -> i64 { (1..p64).find(|y| x * y % p64 == 1).expect("field element") };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let s = inv(a[r][c]);
        for x in a[r].iter_mut() {
            *x = *x * s % p64;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x = (*x - f * y).rem_euclid(p64);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u32; n];
            v[f] = 1;
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = (-a[i][f]).rem_euclid(p64) as u32;
            }
            v
        })
        .collect()
}

/// Every class `c/p` with `c ∈ {0, ±1}^r` passing [`check_divisible_class`],
/// found by enumerating the kernel of the Gram matrix modulo `p`. Each class
/// is listed once up to sign.
pub fn search_divisible_classes(l: &IntLattice, p: u32) -> Vec<Vec<i64>> {
    let basis = kernel_mod_p(l.gram(), p);
    let dim = basis.len();
    assert!(dim <= 16, "kernel of dimension {dim} is too large to enumerate");
    let total = (p as usize).pow(dim as u32);
    let mut found = BTreeSet::new();
    for code in 1..total {
        let mut digits = code;
        let mut v = vec![0u32; l.rank()];
        for b in &basis {
            let k = (digits % p as usize) as u32;
            digits /= p as usize;
            for (x, y) in v.iter_mut().zip(b.iter()) {
                *x = (*x + k * y) % p;
            }
        }
        let c: Vec<i64> = v.iter().map(|&x| if x * 2 > p { x as i64 - p as i64 } else { x as i64 }).collect();
        if c.iter().any(|x| x.abs() > 1) {
            continue;
        }
        let lead_negative = c.iter().find(|x| **x != 0).is_some_and(|x| *x < 0);
        let c = if lead_negative { c.iter().map(|x| -x).collect() } else { c };
        if check_divisible_class(&c, p, l).passes {
            found.insert(c);
        }
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chain(n: usize) -> CurveConfig {
        let labels: Vec<String> = (1..=n).map(|i| format!("C{i}")).collect();
        let edges: Vec<(String, String)> =
            (1..n).map(|i| (format!("C{i}"), format!("C{}", i + 1))).collect();
        CurveConfig::new(&labels, &edges).unwrap()
    }

    fn e8() -> CurveConfig {
        let labels = ["a1", "a2", "a3", "a4", "a5", "a6", "a7", "b"];
        let edges = [
            ("a1", "a2"), ("a2", "a3"), ("a3", "a4"), ("a4", "a5"), ("a5", "a6"), ("a6", "a7"), ("a3", "b"),
        ];
        CurveConfig::new(&labels, &edges).unwrap()
    }

    fn d4() -> CurveConfig {
        CurveConfig::new(&["c", "x", "y", "z"], &[("c", "x"), ("c", "y"), ("c", "z")]).unwrap()
    }

    #[test]
    fn chain_determinants() {
        for n in 1..8 {
            let d = exact_determinant(gram_from_config(&chain(n)).gram());
            let expected = if n % 2 == 0 { n as i64 + 1 } else { -(n as i64 + 1) };
            assert_eq!(d, BigInt::from(expected));
        }
        assert_eq!(exact_determinant(gram_from_config(&e8()).gram()), BigInt::one());
        assert_eq!(exact_determinant(&IntMatrix::identity(19)), BigInt::one());
    }

    #[test]
    fn smith_forms() {
        let a2 = smith_normal_form(gram_from_config(&chain(2)).gram());
        assert_eq!(a2.elementary_divisors(), vec![BigInt::from(1), BigInt::from(3)]);
        let d = smith_normal_form(gram_from_config(&d4()).gram());
        assert_eq!(d.torsion(), vec![BigInt::from(2), BigInt::from(2)]);
        let id = smith_normal_form(&IntMatrix::identity(5));
        assert!(id.elementary_divisors().iter().all(|x| x.is_one()));
    }

    #[test]
    fn dynkin_classification() {
        let g = e8();
        assert_eq!(g.classify_component(&g.components()[0]), Some(DynkinType::E(8)));
        let g = d4();
        assert_eq!(g.classify_component(&g.components()[0]), Some(DynkinType::D(4)));
        let g = chain(5);
        assert_eq!(g.classify_component(&g.components()[0]), Some(DynkinType::A(5)));
        let cycle = CurveConfig::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        assert_eq!(cycle.classify_component(&[0, 1, 2]), None);
        for t in ["A3", "D5", "E7"] {
            assert_eq!(t.parse::<DynkinType>().unwrap().to_string(), t);
        }
    }

    #[test]
    fn invalid_configs() {
        assert!(CurveConfig::new(&["a", "a"], &[]).is_err());
        assert!(CurveConfig::new(&["a", "b"], &[("a", "a")]).is_err());
        assert!(CurveConfig::new(&["a", "b"], &[("a", "b"), ("b", "a")]).is_err());
        assert!(CurveConfig::new(&["a"], &[("a", "z")]).is_err());
    }

    #[test]
    fn glue_on_a1_squared_plus_d4() {
        // A1 ⊕ A1: (e1+e2)/2 has square −1, rejected.
        let l = gram_from_config(&CurveConfig::new(&["a", "b"], &[]).unwrap());
        let v = l.vector(&[("a", 1), ("b", 1)], 2).unwrap();
        assert!(dual_membership(&v, &l).unwrap());
        assert!(matches!(extend_by_glue(&l, &[v]), Err(LatticeError::RejectedGlue(_))));
        // 8·A1 + (sum)/2 is even with square −4.
        let labels: Vec<String> = (0..8).map(|i| format!("m{i}")).collect();
        let none: Vec<(String, String)> = Vec::new();
        let l = gram_from_config(&CurveConfig::new(&labels, &none).unwrap());
        let terms: Vec<(&str, i64)> = labels.iter().map(|s| (s.as_str(), 1)).collect();
        let v = l.vector(&terms, 2).unwrap();
        let ext = extend_by_glue(&l, std::slice::from_ref(&v)).unwrap();
        assert_eq!(ext.index(), BigInt::from(2));
        assert_eq!(ext.discriminant().abs_discriminant, BigInt::from(64));
        assert!(ext.is_even());
        let again = extend_by_glue(&ext, &[v]).unwrap();
        assert_eq!(again, ext);
        let c = vec![1i64; 8];
        let check = check_divisible_class(&c, 2, &l);
        assert!(check.passes, "{:?}", check.diagnostics);
        assert_eq!(check.self_pairing, Rational::from_integer(BigInt::from(-4)));
        let found = search_divisible_classes(&l, 2);
        assert_eq!(found, vec![c]);
    }

    #[test]
    fn integral_vector_does_not_change_discriminant() {
        let l = gram_from_config(&chain(3));
        let v = l.vector(&[("C1", 1), ("C3", -2)], 1).unwrap();
        let ext = extend_by_glue(&l, &[v]).unwrap();
        assert_eq!(ext.discriminant(), l.discriminant());
    }

    #[test]
    fn factorization_rendering() {
        assert_eq!(factorization_string(&BigInt::from(7290)), "2·3⁶·5");
        assert_eq!(factorization_string(&BigInt::from(-45)), "−3²·5");
        assert_eq!(factorization_string(&BigInt::from(1)), "1");
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        let h = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(inertia(&h), (1, 1));
        let a2 = gram_from_config(&chain(2));
        assert_eq!(inertia(a2.gram()), (0, 2));
    }

    fn arb_graph() -> impl Strategy<Value = CurveConfig> {
        (2usize..9).prop_flat_map(|n| {
            prop::collection::btree_set((0..n, 0..n), 0..n + 3).prop_map(move |pairs| {
                let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
                let edges: BTreeSet<(usize, usize)> =
                    pairs.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
                let edges: Vec<(String, String)> =
                    edges.into_iter().map(|(a, b)| (labels[a].clone(), labels[b].clone())).collect();
                CurveConfig::new(&labels, &edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn smith_form_is_consistent(c in arb_graph()) {
            let g = gram_from_config(&c);
            let snf = smith_normal_form(g.gram());
            prop_assert_eq!(snf.u.mul(g.gram()).mul(&snf.v), snf.d.clone());
            prop_assert!(snf.d.is_diagonal());
            let ds = snf.elementary_divisors();
            for w in ds.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            prop_assert_eq!(exact_determinant(&snf.u).abs(), BigInt::one());
            prop_assert_eq!(exact_determinant(&snf.v).abs(), BigInt::one());
            let det = exact_determinant(g.gram());
            if !det.is_zero() {
                let data = g.discriminant();
                prop_assert!(data.is_product_consistent());
                prop_assert!(data.is_sign_consistent());
            }
            prop_assert!(g.is_even());
        }

        #[test]
        fn block_determinants_multiply(c in arb_graph()) {
            let comps = c.components();
            let g = gram_from_config(&c);
            let product = comps.iter().fold(BigInt::one(), |acc, comp| {
                acc * exact_determinant(&g.gram().submatrix(comp))
            });
            prop_assert_eq!(product, exact_determinant(g.gram()));
        }
    }
}
