//! Binary polyhedral groups as SU(2) matrices, the covering
//! `σ: SU(2) × SU(2) → SO(4)` and the projective groups it produces.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::cyclofield::{root_of_unity_exponent, CycMatrix, CycNum, FieldError, CONDUCTOR};

/// Hard limit on closure size; the largest binary group has 120 elements.
pub const CLOSURE_CAP: usize = 240;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("quaternion does not have unit norm: {0}")]
    NotUnit(String),
    #[error("closure exceeded {cap} elements; generators are wrong")]
    ClosureOverflow { cap: usize },
    #[error("{kind} group has order {found}, expected {expected}")]
    OrderMismatch { kind: PolyhedralKind, expected: usize, found: usize },
    #[error("unknown polyhedral kind {0:?}")]
    UnknownKind(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolyhedralKind {
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl PolyhedralKind {
    pub const ALL: [PolyhedralKind; 3] =
        [PolyhedralKind::Tetrahedral, PolyhedralKind::Octahedral, PolyhedralKind::Icosahedral];

    /// Degree `n` of the invariant pencil.
    pub fn degree(self) -> u32 {
        match self {
            PolyhedralKind::Tetrahedral => 6,
            PolyhedralKind::Octahedral => 8,
            PolyhedralKind::Icosahedral => 12,
        }
    }

    pub fn from_degree(n: u32) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.degree() == n)
    }

    /// Order of the rotation group in SO(3).
    pub fn ternary_order(self) -> usize {
        match self {
            PolyhedralKind::Tetrahedral => 12,
            PolyhedralKind::Octahedral => 24,
            PolyhedralKind::Icosahedral => 60,
        }
    }

    pub fn binary_order(self) -> usize {
        2 * self.ternary_order()
    }

    pub fn projective_order(self) -> usize {
        self.ternary_order() * self.ternary_order()
    }

    /// Orders of the nontrivial cyclic point stabilizers of the rotation group.
    pub fn stabilizer_orders(self) -> &'static [u32] {
        match self {
            PolyhedralKind::Tetrahedral => &[2, 3],
            PolyhedralKind::Octahedral => &[2, 3, 4],
            PolyhedralKind::Icosahedral => &[2, 3, 5],
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            PolyhedralKind::Tetrahedral => "T",
            PolyhedralKind::Octahedral => "O",
            PolyhedralKind::Icosahedral => "I",
        }
    }
}

impl fmt::Display for PolyhedralKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for PolyhedralKind {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T" | "t" => Ok(PolyhedralKind::Tetrahedral),
            "O" | "o" => Ok(PolyhedralKind::Octahedral),
            "I" | "i" => Ok(PolyhedralKind::Icosahedral),
            other => Err(GroupError::UnknownKind(other.to_string())),
        }
    }
}

/// A unit quaternion `a + bi + cj + dk` stored as
/// `[[a+bi, c+di], [−c+di, a−bi]]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quat(CycMatrix);

impl Quat {
    pub fn new(a: &CycNum, b: &CycNum, c: &CycNum, d: &CycNum) -> Result<Self, GroupError> {
        let norm = &(&(a * a) + &(b * b)) + &(&(c * c) + &(d * d));
        if !norm.is_one() {
            return Err(GroupError::NotUnit(norm.to_string()));
        }
        Ok(Quat(quaternion_matrix(a, b, c, d)))
    }

    pub fn identity() -> Self {
        Quat(CycMatrix::identity(2))
    }

    pub fn matrix(&self) -> &CycMatrix {
        &self.0
    }

    /// Coordinates `(a, b, c, d)`.
    pub fn coords(&self) -> [CycNum; 4] {
        let m = &self.0;
        coordinates_of_matrix(m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1))
    }

    pub fn mul(&self, rhs: &Quat) -> Quat {
        Quat(self.0.mul(&rhs.0))
    }

    pub fn neg(&self) -> Quat {
        Quat(self.0.neg())
    }

    /// Inverse; for determinant 1 this is the adjugate.
    pub fn inv(&self) -> Quat {
        let m = &self.0;
        Quat(CycMatrix::from_rows(vec![
            vec![m.get(1, 1).clone(), -m.get(0, 1)],
            vec![-m.get(1, 0), m.get(0, 0).clone()],
        ]))
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    /// `true` for `±1`.
    pub fn is_central(&self) -> bool {
        self.0.is_identity() || self.0.neg().is_identity()
    }

    /// The `k ∈ [0, 60]` with eigenvalues `ζ^{±k}`.
    pub fn eigen_exponent(&self) -> Result<u32, FieldError> {
        root_of_unity_exponent(&self.0)
    }

    pub fn order(&self) -> Result<u32, FieldError> {
        Ok(binary_order_of_exponent(self.eigen_exponent()?))
    }

    /// Order modulo `±1`.
    pub fn projective_order(&self) -> Result<u32, FieldError> {
        Ok(projective_order_of_exponent(self.eigen_exponent()?))
    }
}

fn binary_order_of_exponent(k: u32) -> u32 {
    CONDUCTOR as u32 / k.gcd(&(CONDUCTOR as u32))
}

fn projective_order_of_exponent(k: u32) -> u32 {
    CONDUCTOR as u32 / (2 * k).gcd(&(CONDUCTOR as u32))
}

fn quaternion_matrix(a: &CycNum, b: &CycNum, c: &CycNum, d: &CycNum) -> CycMatrix {
    let i = CycNum::imag_unit();
    let bi = b * &i;
    let di = d * &i;
    CycMatrix::from_rows(vec![vec![a + &bi, c + &di], vec![&di - c, a - &bi]])
}

/// Coordinates `(x0, x1, x2, x3)` of a 2x2 matrix: the inverse of the
/// quaternion embedding, extended linearly to all matrices.
pub fn coordinates_of_matrix(y00: &CycNum, y01: &CycNum, y10: &CycNum, y11: &CycNum) -> [CycNum; 4] {
    let half = CycNum::from_fraction(1, 2);
    // 1/(2i) = −i/2
    let inv_2i = &CycNum::imag_unit() * &CycNum::from_fraction(-1, 2);
    [
        &(y00 + y11) * &half,
        &(y00 - y11) * &inv_2i,
        &(y01 - y10) * &half,
        &(y01 + y10) * &inv_2i,
    ]
}

/// Generators as quaternion coordinates.
fn generators(kind: PolyhedralKind) -> Result<Vec<Quat>, GroupError> {
    let zero = CycNum::zero();
    let one = CycNum::one();
    let half = CycNum::from_fraction(1, 2);
    let h = Quat::new(&half, &half, &half, &half)?;
    let i = Quat::new(&zero, &one, &zero, &zero)?;
    Ok(match kind {
        PolyhedralKind::Tetrahedral => vec![h, i],
        PolyhedralKind::Octahedral => {
            let r = &CycNum::sqrt2() * &half;
            vec![h, i, Quat::new(&r, &r, &zero, &zero)?]
        }
        PolyhedralKind::Icosahedral => {
            let phi = CycNum::golden_ratio();
            let phi_inv = &phi - &one;
            let g = Quat::new(&(&phi * &half), &(&phi_inv * &half), &half, &zero)?;
            vec![h, g]
        }
    })
}

/// The binary polyhedral group as the multiplicative closure of fixed generators.
pub fn build_binary_group(kind: PolyhedralKind) -> Result<Vec<Quat>, GroupError> {
    let gens = generators(kind)?;
    let mut elements = vec![Quat::identity()];
    let mut seen: HashSet<Quat> = HashSet::from([Quat::identity()]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        for g in &gens {
            let p = elements[idx].mul(g);
            if seen.contains(&p) {
                continue;
            }
            if elements.len() >= CLOSURE_CAP {
                return Err(GroupError::ClosureOverflow { cap: CLOSURE_CAP });
            }
            seen.insert(p.clone());
            elements.push(p);
            queue.push_back(elements.len() - 1);
        }
    }
    Ok(elements)
}

/// The 4x4 matrix of `X ↦ p1·X·p2⁻¹` in the coordinates `x0..x3` of
/// `X = [[x0+ix1, x2+ix3], [−x2+ix3, x0−ix1]]`.
pub fn sigma(p1: &Quat, p2: &Quat) -> CycMatrix {
    let zero = CycNum::zero();
    let one = CycNum::one();
    let p2inv = p2.inv();
    let mut columns = Vec::with_capacity(4);
    for k in 0..4 {
        let mut e = [zero.clone(), zero.clone(), zero.clone(), zero.clone()];
        e[k] = one.clone();
        let x = quaternion_matrix(&e[0], &e[1], &e[2], &e[3]);
        let y = p1.matrix().mul(&x).mul(p2inv.matrix());
        columns.push(coordinates_of_matrix(y.get(0, 0), y.get(0, 1), y.get(1, 0), y.get(1, 1)));
    }
    CycMatrix::from_fn(4, 4, |i, j| columns[j][i].clone())
}

/// Representative of `{M, −M}`: the first nonzero entry has a positive
/// leading coefficient. Returns the representative and whether `M` was negated.
pub fn projective_key(m: &CycMatrix) -> (CycMatrix, bool) {
    let lead = m.entries().iter().find(|e| !e.is_zero());
    match lead {
        Some(e) if e.leading_sign() == std::cmp::Ordering::Less => (m.neg(), true),
        _ => (m.clone(), false),
    }
}

/// An element of a projective group `PG_n`, remembering one preimage pair.
#[derive(Clone, Debug)]
pub struct GroupElement {
    left: Quat,
    right: Quat,
    matrix: CycMatrix,
    /// `matrix = −σ(left, right)` when set.
    negated: bool,
    left_exponent: u32,
    right_exponent: u32,
}

impl GroupElement {
    pub fn new(left: Quat, right: Quat) -> Result<Self, GroupError> {
        let (matrix, negated) = projective_key(&sigma(&left, &right));
        let left_exponent = left.eigen_exponent()?;
        let right_exponent = right.eigen_exponent()?;
        Ok(GroupElement { left, right, matrix, negated, left_exponent, right_exponent })
    }

    pub fn left(&self) -> &Quat {
        &self.left
    }

    pub fn right(&self) -> &Quat {
        &self.right
    }

    /// Canonical sign representative of the projective class.
    pub fn matrix(&self) -> &CycMatrix {
        &self.matrix
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn is_identity(&self) -> bool {
        self.left.is_central() && self.right.is_central()
    }

    /// Exponents `e` (mod 120) with `ζ^e` the eigenvalues of [`Self::matrix`],
    /// with multiplicity.
    pub fn eigen_exponents(&self) -> [u32; 4] {
        let (a, b) = (self.left_exponent as i64, self.right_exponent as i64);
        let shift = if self.negated { 60 } else { 0 };
        [a + b, a - b, b - a, -a - b].map(|e| (e + shift).rem_euclid(CONDUCTOR as i64) as u32)
    }

    /// Eigen exponents `(a, b)` of the two quaternions.
    pub fn quaternion_exponents(&self) -> (u32, u32) {
        (self.left_exponent, self.right_exponent)
    }
}

/// Projective order: the least `k` with `g^k = ±1`.
pub fn element_order(g: &GroupElement) -> u32 {
    projective_order_of_exponent(g.left_exponent).lcm(&projective_order_of_exponent(g.right_exponent))
}

/// A projective group `PG_n = σ(G̃ × G̃)/±1`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    kind: PolyhedralKind,
    binary: Vec<Quat>,
    elements: Vec<GroupElement>,
    index: HashMap<CycMatrix, usize>,
    generators: Vec<usize>,
}

/// Builds `PG_n` from all pairs of binary elements, merging pairs that give
/// the same matrix up to sign.
pub fn build_projective_group(kind: PolyhedralKind) -> Result<FiniteGroup, GroupError> {
    let binary = build_binary_group(kind)?;
    if binary.len() != kind.binary_order() {
        return Err(GroupError::OrderMismatch {
            kind,
            expected: kind.binary_order(),
            found: binary.len(),
        });
    }
    let mut elements = Vec::new();
    let mut index = HashMap::new();
    for p1 in &binary {
        for p2 in &binary {
            let (key, _) = projective_key(&sigma(p1, p2));
            if index.contains_key(&key) {
                continue;
            }
            let element = GroupElement::new(p1.clone(), p2.clone())?;
            debug_assert_eq!(element.matrix, key);
            index.insert(key, elements.len());
            elements.push(element);
        }
    }
    if elements.len() != kind.projective_order() {
        return Err(GroupError::OrderMismatch {
            kind,
            expected: kind.projective_order(),
            found: elements.len(),
        });
    }
    let one = Quat::identity();
    let mut generator_indices = Vec::new();
    for g in generators(kind)? {
        for (l, r) in [(g.clone(), one.clone()), (one.clone(), g)] {
            let (key, _) = projective_key(&sigma(&l, &r));
            generator_indices.push(index[&key]);
        }
    }
    Ok(FiniteGroup { kind, binary, elements, index, generators: generator_indices })
}

impl FiniteGroup {
    pub fn kind(&self) -> PolyhedralKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn binary(&self) -> &[Quat] {
        &self.binary
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &GroupElement {
        &self.elements[idx]
    }

    /// Elements `σ(g, 1)` and `σ(1, g)` for the binary generators `g`.
    pub fn generators(&self) -> impl Iterator<Item = &GroupElement> {
        self.generators.iter().map(|&i| &self.elements[i])
    }

    /// Index of the element whose matrix is `±m`.
    pub fn index_of(&self, m: &CycMatrix) -> Option<usize> {
        self.index.get(&projective_key(m).0).copied()
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        let m = self.elements[a].matrix.mul(&self.elements[b].matrix);
        self.index_of(&m).expect("group is closed under composition")
    }

    pub fn identity_index(&self) -> usize {
        self.index_of(&CycMatrix::identity(4)).expect("identity present")
    }

    /// Number of elements of each projective order.
    pub fn order_census(&self) -> std::collections::BTreeMap<u32, usize> {
        let mut census = std::collections::BTreeMap::new();
        for g in &self.elements {
            *census.entry(element_order(g)).or_insert(0) += 1;
        }
        census
    }
}

/// `q = x0² + x1² + x2² + x3²` evaluated on a vector.
pub fn quadratic_form(x: &[CycNum]) -> CycNum {
    crate::cyclofield::dot(x, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_orthogonal(m: &CycMatrix) -> bool {
        m.transpose().mul(m).is_identity()
    }

    fn brute_projective_order(m: &CycMatrix) -> u32 {
        let mut p = m.clone();
        let mut k = 1;
        while !p.is_identity() && !p.neg().is_identity() {
            p = p.mul(m);
            k += 1;
        }
        k
    }

    #[test]
    fn binary_orders() {
        assert_eq!(build_binary_group(PolyhedralKind::Tetrahedral).unwrap().len(), 24);
        assert_eq!(build_binary_group(PolyhedralKind::Octahedral).unwrap().len(), 48);
        let ico = build_binary_group(PolyhedralKind::Icosahedral).unwrap();
        assert_eq!(ico.len(), 120);
        assert!(ico.iter().any(|q| q.neg().is_identity()));
        let orders: std::collections::BTreeSet<u32> =
            ico.iter().map(|q| q.order().unwrap()).collect();
        assert_eq!(orders.into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5, 6, 10]);
    }

    #[test]
    fn non_unit_quaternion_is_rejected() {
        let one = CycNum::one();
        assert!(matches!(Quat::new(&one, &one, &one, &one), Err(GroupError::NotUnit(_))));
    }

    #[test]
    fn sigma_identity_and_kernel() {
        let one = Quat::identity();
        assert!(sigma(&one, &one).is_identity());
        assert!(sigma(&one.neg(), &one.neg()).is_identity());
        assert!(sigma(&one.neg(), &one).neg().is_identity());
    }

    #[test]
    fn tetrahedral_projective_group() {
        let g = build_projective_group(PolyhedralKind::Tetrahedral).unwrap();
        assert_eq!(g.order(), 144);
        for e in g.elements() {
            assert!(is_orthogonal(e.matrix()));
            assert_eq!(element_order(e), brute_projective_order(e.matrix()));
            assert_eq!(144 % element_order(e), 0);
        }
        let census = g.order_census();
        assert_eq!(census.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        let id = g.identity_index();
        assert!(g.element(id).is_identity());
        for a in [0, 5, 77] {
            assert_eq!(g.compose(a, id), a);
        }
    }

    #[test]
    fn eigen_exponents_match_matrix() {
        let g = build_projective_group(PolyhedralKind::Tetrahedral).unwrap();
        for e in g.elements().iter().step_by(7) {
            let m = e.matrix();
            let mut trace = CycNum::zero();
            for x in e.eigen_exponents() {
                trace = &trace + &CycNum::zeta_pow(x as i64);
            }
            assert_eq!(trace, m.trace());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn sigma_is_a_homomorphism(a in 0usize..48, b in 0usize..48, c in 0usize..48, d in 0usize..48) {
            let o = build_binary_group(PolyhedralKind::Octahedral).unwrap();
            let lhs = sigma(&o[a], &o[b]).mul(&sigma(&o[c], &o[d]));
            let rhs = sigma(&o[a].mul(&o[c]), &o[b].mul(&o[d]));
            prop_assert_eq!(&lhs, &rhs);
            prop_assert!(is_orthogonal(&lhs));
            // σ(p, q) = 1 only on ±(1, 1)
            let s = sigma(&o[a], &o[b]);
            prop_assert_eq!(s.is_identity(), o[a] == o[b] && o[a].is_central());
        }
    }
}
