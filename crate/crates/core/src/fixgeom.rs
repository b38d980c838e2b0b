//! Fix-lines and fix-points of `PG_n` acting on `P3`: orbits, stabilizers,
//! type labels, and the quotient singularities they produce.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::cyclofield::{dot, CycMatrix, CycNum, FieldError, CONDUCTOR};
use crate::groups::{coordinates_of_matrix, element_order, quadratic_form, FiniteGroup, GroupElement};
use crate::lattice::DynkinType;

/// A point of `P3` with first nonzero coordinate equal to 1.
pub type Point = [CycNum; 4];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixGeomError {
    #[error("element {element} has a {dim}-dimensional eigenspace")]
    EigenspaceTooLarge { element: usize, dim: usize },
    #[error("element {element} has a double eigenvalue with a {dim}-dimensional eigenspace")]
    EigenspaceMismatch { element: usize, dim: usize },
    #[error("vectors do not span a line")]
    DegenerateLine,
    #[error("image of a fix-line under a generator is not a fix-line")]
    OrbitNotClosed,
    #[error("orbit length {length} times stabilizer order {stabilizer} is not the group order {order}")]
    OrbitStabilizer { length: usize, stabilizer: usize, order: usize },
    #[error("base locus: {0}")]
    BaseLocus(String),
    #[error("no base-point stabilizer order t={t} for n={n}, s={s}")]
    UnsupportedBasePoint { n: u32, s: u32, t: u32 },
    #[error("cyclic action with weights ({0}, {1}) is not a rational double point")]
    NotRationalDoublePoint(u32, u32),
    #[error("{points} points do not split into orbits of length {orbit_length}")]
    NonIntegralCensus { points: usize, orbit_length: usize },
    #[error("group of order {0} with this element census is not a supported point group")]
    UnknownGroup(usize),
    #[error("unexpected quadric intersection on an off-quadric line")]
    QuadricPoints,
    #[error(transparent)]
    Field(#[from] FieldError),
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_index(i: usize, j: usize) -> usize {
    PAIRS.iter().position(|&p| p == (i, j)).expect("ordered pair")
}

/// Canonical representative of a projective point, or `None` for the zero vector.
pub fn canonical_point(x: &[CycNum]) -> Option<Point> {
    let lead = x.iter().find(|c| !c.is_zero())?;
    let scale = lead.inv().ok()?;
    let v: Vec<CycNum> = x.iter().map(|c| c * &scale).collect();
    v.try_into().ok()
}

/// A line in `P3` in canonical Plücker form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ProjLine {
    pluecker: [CycNum; 6],
    span: [Point; 2],
    pivots: (usize, usize),
    on_quadric: bool,
}

impl ProjLine {
    /// The line through two points.
    pub fn through(u: &[CycNum], v: &[CycNum]) -> Result<Self, FixGeomError> {
        let p: Vec<CycNum> =
            PAIRS.iter().map(|&(i, j)| &(&u[i] * &v[j]) - &(&u[j] * &v[i])).collect();
        Self::from_pluecker(p.try_into().expect("six coordinates"))
    }

    pub fn from_pluecker(p: [CycNum; 6]) -> Result<Self, FixGeomError> {
        let first = p.iter().position(|c| !c.is_zero()).ok_or(FixGeomError::DegenerateLine)?;
        let scale = p[first].inv()?;
        let pluecker = p.map(|c| &c * &scale);
        let (a, b) = PAIRS[first];
        let coord = |i: usize, j: usize| -> CycNum {
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => CycNum::zero(),
                std::cmp::Ordering::Less => pluecker[pair_index(i, j)].clone(),
                std::cmp::Ordering::Greater => -&pluecker[pair_index(j, i)],
            }
        };
        let r1: Point = std::array::from_fn(|d| coord(d, b));
        let r2: Point = std::array::from_fn(|d| coord(a, d));
        let on_quadric = [(&r1, &r1), (&r1, &r2), (&r2, &r2)]
            .iter()
            .all(|(x, y)| dot(*x, *y).is_zero());
        Ok(ProjLine { pluecker, span: [r1, r2], pivots: (a, b), on_quadric })
    }

    pub fn pluecker(&self) -> &[CycNum; 6] {
        &self.pluecker
    }

    /// Two spanning points in reduced echelon form.
    pub fn span(&self) -> &[Point; 2] {
        &self.span
    }

    pub fn on_quadric(&self) -> bool {
        self.on_quadric
    }

    /// The Plücker relation `p01 p23 − p02 p13 + p03 p12 = 0`.
    pub fn satisfies_pluecker_relation(&self) -> bool {
        pairing(&self.pluecker, &self.pluecker).is_zero()
    }

    pub fn contains(&self, x: &[CycNum]) -> bool {
        let (a, b) = self.pivots;
        let [r1, r2] = &self.span;
        (0..4).filter(|&f| f != a && f != b).all(|f| {
            let val = &(&x[f] - &(&r1[f] * &x[a])) - &(&r2[f] * &x[b]);
            val.is_zero()
        })
    }

    pub fn apply(&self, m: &CycMatrix) -> Result<Self, FixGeomError> {
        Self::through(&m.mul_vec(&self.span[0]), &m.mul_vec(&self.span[1]))
    }

    /// `true` when `m` maps the line to itself.
    pub fn is_stabilized_by(&self, m: &CycMatrix) -> bool {
        self.span.iter().all(|r| self.contains(&m.mul_vec(r)))
    }

    /// `true` when `m` fixes every point of the line.
    pub fn is_fixed_pointwise_by(&self, m: &CycMatrix) -> bool {
        let (a, b) = self.pivots;
        let g1 = m.mul_vec(&self.span[0]);
        let g2 = m.mul_vec(&self.span[1]);
        self.contains(&g1)
            && self.contains(&g2)
            && g1[b].is_zero()
            && g2[a].is_zero()
            && g1[a] == g2[b]
    }

    /// Scalar by which `m` acts on the line, if it fixes it pointwise.
    pub fn eigenvalue_of(&self, m: &CycMatrix) -> Option<CycNum> {
        self.is_fixed_pointwise_by(m).then(|| m.mul_vec(&self.span[0])[self.pivots.0].clone())
    }

    pub fn meets(&self, other: &ProjLine) -> bool {
        pairing(&self.pluecker, &other.pluecker).is_zero()
    }

    /// Intersection point of two distinct coplanar lines.
    pub fn intersection(&self, other: &ProjLine) -> Option<Point> {
        if self == other || !self.meets(other) {
            return None;
        }
        let cols = [&self.span[0], &self.span[1], &other.span[0], &other.span[1]];
        let m = CycMatrix::from_fn(4, 4, |i, j| cols[j][i].clone());
        let kernel = m.kernel();
        let c = kernel.first()?;
        let x: Vec<CycNum> =
            (0..4).map(|i| &(&c[0] * &self.span[0][i]) + &(&c[1] * &self.span[1][i])).collect();
        canonical_point(&x)
    }
}

fn pairing(p: &[CycNum; 6], q: &[CycNum; 6]) -> CycNum {
    // p01q23 − p02q13 + p03q12 + p12q03 − p13q02 + p23q01
    let t = |i: usize, j: usize| &p[i] * &q[j];
    let pos = &(&(&t(0, 5) + &t(2, 3)) + &t(3, 2)) + &t(5, 0);
    &pos - &(&t(1, 4) + &t(4, 1))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum RulingSide {
    /// Lines `P(v ⊗ C²)`, fixed by elements `σ(p, ±1)`.
    Left,
    Right,
}

/// Type of a fix-line orbit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum LineType {
    /// Off the quadric: `M`, `N`, `R`, `S` for fix orders 2, 3, 4, 5,
    /// with primes separating orbits of equal order.
    Off { letter: char, primes: u8 },
    Ruling(RulingSide),
}

impl LineType {
    pub fn letter_for_order(order: u32) -> Option<char> {
        match order {
            2 => Some('M'),
            3 => Some('N'),
            4 => Some('R'),
            5 => Some('S'),
            _ => None,
        }
    }

    pub fn off(letter: char, primes: u8) -> Self {
        LineType::Off { letter, primes }
    }
}

impl fmt::Display for LineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineType::Off { letter, primes } => {
                write!(f, "{letter}")?;
                match primes {
                    0 => Ok(()),
                    1 => f.write_str("′"),
                    2 => f.write_str("″"),
                    k => f.write_str(&"′".repeat(*k as usize)),
                }
            }
            LineType::Ruling(RulingSide::Left) => f.write_str("ruling-left"),
            LineType::Ruling(RulingSide::Right) => f.write_str("ruling-right"),
        }
    }
}

impl FromStr for LineType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ruling-left" => return Ok(LineType::Ruling(RulingSide::Left)),
            "ruling-right" => return Ok(LineType::Ruling(RulingSide::Right)),
            _ => {}
        }
        let mut chars = s.chars();
        let letter = chars.next().filter(|c| "MNRS".contains(*c)).ok_or(format!("bad line type {s:?}"))?;
        let mut primes = 0u8;
        for c in chars {
            primes += match c {
                '\'' | '′' => 1,
                '″' => 2,
                _ => return Err(format!("bad line type {s:?}")),
            };
        }
        Ok(LineType::Off { letter, primes })
    }
}

/// A `PG_n`-orbit of fix-lines.
#[derive(Clone, Debug)]
pub struct FixLineOrbit {
    representative: ProjLine,
    members: Vec<ProjLine>,
    fix_elements: Vec<usize>,
    stabilizer: Vec<usize>,
    producing_elements: usize,
    generator: usize,
    label: LineType,
}

impl FixLineOrbit {
    pub fn representative(&self) -> &ProjLine {
        &self.representative
    }

    pub fn members(&self) -> &[ProjLine] {
        &self.members
    }

    /// `ℓ(L)`.
    pub fn length(&self) -> usize {
        self.members.len()
    }

    /// `o(L) = |F_L|`, the number of elements fixing the line pointwise.
    pub fn fix_group_order(&self) -> u32 {
        self.fix_elements.len() as u32
    }

    /// Indices of the elements of `F_L`.
    pub fn fix_elements(&self) -> &[usize] {
        &self.fix_elements
    }

    /// `|H_L|`.
    pub fn stabilizer_order(&self) -> usize {
        self.stabilizer.len()
    }

    pub fn stabilizer(&self) -> &[usize] {
        &self.stabilizer
    }

    /// Number of nontrivial elements having this line as a 2-dimensional
    /// eigenspace; an independent count of `|F_L| − 1`.
    pub fn producing_elements(&self) -> usize {
        self.producing_elements
    }

    /// Index of an element generating the cyclic group `F_L`.
    pub fn generator(&self) -> usize {
        self.generator
    }

    /// `|H_L|/|F_L|`, the length of a generic `H_L`-orbit on the line.
    pub fn generic_orbit_length(&self) -> usize {
        self.stabilizer.len() / self.fix_elements.len()
    }

    pub fn label(&self) -> LineType {
        self.label
    }

    pub fn on_quadric(&self) -> bool {
        self.representative.on_quadric
    }

    /// Binary order of the quaternions fixing a ruling line.
    pub fn binary_order(&self) -> u32 {
        2 * self.fix_group_order()
    }
}

fn eigenvalue_lines(group: &FiniteGroup, idx: usize) -> Result<Vec<ProjLine>, FixGeomError> {
    let g = group.element(idx);
    let exps = g.eigen_exponents();
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for e in exps {
        *counts.entry(e).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    for (e, mult) in counts {
        if mult > 2 {
            return Err(FixGeomError::EigenspaceTooLarge { element: idx, dim: mult });
        }
        if mult < 2 {
            continue;
        }
        let shifted = g.matrix().sub(&CycMatrix::identity(4).scale(&CycNum::zeta_pow(e as i64)));
        let kernel = shifted.kernel();
        if kernel.len() != 2 {
            return Err(FixGeomError::EigenspaceMismatch { element: idx, dim: kernel.len() });
        }
        out.push(ProjLine::through(&kernel[0], &kernel[1])?);
    }
    Ok(out)
}

/// All fix-lines of nontrivial elements, grouped into orbits with stabilizers
/// and type labels.
pub fn fix_lines(group: &FiniteGroup) -> Result<Vec<FixLineOrbit>, FixGeomError> {
    let mut producers: HashMap<ProjLine, usize> = HashMap::new();
    for (idx, g) in group.elements().iter().enumerate() {
        if g.is_identity() {
            continue;
        }
        for line in eigenvalue_lines(group, idx)? {
            *producers.entry(line).or_insert(0) += 1;
        }
    }
    let mut lines: Vec<ProjLine> = producers.keys().cloned().collect();
    lines.sort();
    let generators: Vec<&GroupElement> = group.generators().collect();

    let mut assigned: HashSet<ProjLine> = HashSet::new();
    let mut raw = Vec::new();
    for start in &lines {
        if assigned.contains(start) {
            continue;
        }
        assigned.insert(start.clone());
        let mut members = vec![start.clone()];
        let mut cursor = 0;
        while cursor < members.len() {
            let current = members[cursor].clone();
            cursor += 1;
            for g in &generators {
                let image = current.apply(g.matrix())?;
                if !producers.contains_key(&image) {
                    return Err(FixGeomError::OrbitNotClosed);
                }
                if assigned.insert(image.clone()) {
                    members.push(image);
                }
            }
        }
        members.sort();
        raw.push(orbit_record(group, members, &producers)?);
    }
    assign_labels(&mut raw);
    raw.sort_by(|a, b| (a.label, &a.representative).cmp(&(b.label, &b.representative)));
    Ok(raw)
}

fn orbit_record(
    group: &FiniteGroup,
    members: Vec<ProjLine>,
    producers: &HashMap<ProjLine, usize>,
) -> Result<FixLineOrbit, FixGeomError> {
    let rep = members[0].clone();
    let mut stabilizer = Vec::new();
    let mut fix_elements = Vec::new();
    for (idx, g) in group.elements().iter().enumerate() {
        if rep.is_stabilized_by(g.matrix()) {
            stabilizer.push(idx);
            if rep.is_fixed_pointwise_by(g.matrix()) {
                fix_elements.push(idx);
            }
        }
    }
    if members.len() * stabilizer.len() != group.order() {
        return Err(FixGeomError::OrbitStabilizer {
            length: members.len(),
            stabilizer: stabilizer.len(),
            order: group.order(),
        });
    }
    let generator = *fix_elements
        .iter()
        .max_by_key(|&&i| (element_order(group.element(i)), std::cmp::Reverse(i)))
        .expect("identity fixes every line");
    let side = if fix_elements
        .iter()
        .any(|&i| !group.element(i).is_identity() && group.element(i).right().is_central())
    {
        RulingSide::Left
    } else {
        RulingSide::Right
    };
    let label = if rep.on_quadric {
        LineType::Ruling(side)
    } else {
        // placeholder; primes are assigned once all orbits are known
        LineType::off(LineType::letter_for_order(fix_elements.len() as u32).unwrap_or('?'), 0)
    };
    Ok(FixLineOrbit {
        producing_elements: producers[&rep],
        representative: rep,
        members,
        fix_elements,
        stabilizer,
        generator,
        label,
    })
}

/// Orbits of equal fix order are told apart by `(ℓ, |H_L|/|F_L|)`; orbits
/// sharing both get primes in the order of their representatives.
fn assign_labels(orbits: &mut [FixLineOrbit]) {
    let mut classes: BTreeMap<(u32, usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, o) in orbits.iter().enumerate().filter(|(_, o)| !o.on_quadric()) {
        classes
            .entry((o.fix_group_order(), o.length(), o.generic_orbit_length()))
            .or_default()
            .push(i);
    }
    for ((order, _, _), mut idxs) in classes {
        let letter = LineType::letter_for_order(order).unwrap_or('?');
        if idxs.len() == 1 {
            orbits[idxs[0]].label = LineType::off(letter, 0);
            continue;
        }
        idxs.sort_by(|&a, &b| orbits[a].representative.cmp(&orbits[b].representative));
        for (k, i) in idxs.into_iter().enumerate() {
            orbits[i].label = LineType::off(letter, k as u8 + 1);
        }
    }
}

/// Checks `α·β = ±1` for every nontrivial element of `F_L` on an
/// off-quadric line, together with the induced eigenvalue `±1` on the line.
pub fn eigen_relation_holds(group: &FiniteGroup, orbit: &FixLineOrbit) -> bool {
    let c = CONDUCTOR as u32;
    orbit.fix_elements.iter().all(|&i| {
        let g = group.element(i);
        if g.is_identity() {
            return true;
        }
        let (a, b) = g.quaternion_exponents();
        let quaternion_relation = (2 * (a + b)) % c == 0 || (2 * (a + c - b)).is_multiple_of(c);
        let on_line = orbit
            .representative
            .eigenvalue_of(g.matrix())
            .map(|l| (&l * &l).is_one())
            .unwrap_or(false);
        quaternion_relation && on_line
    })
}

fn eigenvector_2x2(m: &CycMatrix, exponent: i64) -> Result<Vec<CycNum>, FixGeomError> {
    let shifted = m.sub(&CycMatrix::identity(2).scale(&CycNum::zeta_pow(exponent)));
    let kernel = shifted.kernel();
    kernel.into_iter().next().ok_or(FixGeomError::QuadricPoints)
}

/// The two points where an off-quadric fix-line meets the quadric, built as
/// tensors `v ⊗ w` of quaternion eigenvectors.
pub fn quadric_points(group: &FiniteGroup, orbit: &FixLineOrbit) -> Result<[Point; 2], FixGeomError> {
    let line = &orbit.representative;
    let g = group.element(orbit.generator);
    let lambda = line.eigenvalue_of(g.matrix()).ok_or(FixGeomError::QuadricPoints)?;
    let (a, b) = g.quaternion_exponents();
    let p1 = g.left().matrix();
    let p2inv_t = g.right().inv().matrix().transpose();
    let shift = if g.is_negated() { 60 } else { 0 };
    let mut points = Vec::new();
    for e in [a as i64, -(a as i64)] {
        let v = eigenvector_2x2(p1, e)?;
        for f in [b as i64, -(b as i64)] {
            if CycNum::zeta_pow(e + f + shift) != lambda {
                continue;
            }
            let u = eigenvector_2x2(&p2inv_t, f)?;
            let x = coordinates_of_matrix(&(&v[0] * &u[0]), &(&v[0] * &u[1]), &(&v[1] * &u[0]), &(&v[1] * &u[1]));
            let x = canonical_point(&x).ok_or(FixGeomError::QuadricPoints)?;
            if !line.contains(&x) || !quadratic_form(&x).is_zero() {
                return Err(FixGeomError::QuadricPoints);
            }
            if !points.contains(&x) {
                points.push(x);
            }
        }
    }
    let [p, q]: [Point; 2] = points.try_into().map_err(|_| FixGeomError::QuadricPoints)?;
    Ok([p, q])
}

/// The `2n` base lines: one ruling orbit of length `n` on each side.
#[derive(Clone, Debug)]
pub struct BaseLocus {
    pub s: u32,
    pub left: FixLineOrbit,
    pub right: FixLineOrbit,
}

impl BaseLocus {
    pub fn lines(&self) -> impl Iterator<Item = &ProjLine> {
        self.left.members.iter().chain(self.right.members.iter())
    }

    pub fn line_count(&self) -> usize {
        self.left.length() + self.right.length()
    }
}

pub fn base_locus(group: &FiniteGroup, orbits: &[FixLineOrbit]) -> Result<BaseLocus, FixGeomError> {
    let n = group.kind().degree() as usize;
    let pick = |side: RulingSide| -> Result<FixLineOrbit, FixGeomError> {
        let found: Vec<&FixLineOrbit> = orbits
            .iter()
            .filter(|o| o.label == LineType::Ruling(side) && o.length() == n)
            .collect();
        match found.as_slice() {
            [one] => Ok((*one).clone()),
            _ => Err(FixGeomError::BaseLocus(format!(
                "{} ruling orbits of length {n} on the {side:?} side",
                found.len()
            ))),
        }
    };
    let left = pick(RulingSide::Left)?;
    let right = pick(RulingSide::Right)?;
    let s = left.fix_group_order();
    if right.fix_group_order() != s || s as usize * n != group.kind().ternary_order() {
        return Err(FixGeomError::BaseLocus(format!("fix orders {s} and {}", right.fix_group_order())));
    }
    Ok(BaseLocus { s, left, right })
}

/// Quotient singularity of the local action at a point of `X`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Singularity {
    Smooth,
    Ade(DynkinType),
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Singularity::Smooth => f.write_str("smooth"),
            Singularity::Ade(d) => write!(f, "{d}"),
        }
    }
}

/// `C²/Z` for the cyclic group generated by `diag(ζ^w1, ζ^w2)`.
fn cyclic_quotient(w1: i64, w2: i64) -> Result<Singularity, FixGeomError> {
    let c = CONDUCTOR as i64;
    let (w1, w2) = (w1.rem_euclid(c) as u32, w2.rem_euclid(c) as u32);
    let ord = |w: u32| CONDUCTOR as u32 / w.gcd(&(CONDUCTOR as u32));
    let order = ord(w1).lcm(&ord(w2));
    if order == 1 || w1 == 0 || w2 == 0 {
        return Ok(Singularity::Smooth);
    }
    if (w1 + w2) % CONDUCTOR as u32 == 0 {
        return Ok(Singularity::Ade(DynkinType::A(order - 1)));
    }
    Err(FixGeomError::NotRationalDoublePoint(w1, w2))
}

/// A point on a base line with stabilizer `Z_s × Z_t`.
///
/// The generator of `Z_t` acts on local coordinates by `(β⁻², β⁻²)` with `β`
/// of order `2t`; after the `Z_s`-quotient `z1 ↦ z1^s` the weights are
/// `(β^{−2s}, β⁻²)`. For `t = s` the first weight is trivial and the quotient
/// is smooth.
pub fn classify_base_point(n: u32, s: u32, t: u32) -> Result<Singularity, FixGeomError> {
    let kind = crate::groups::PolyhedralKind::from_degree(n)
        .ok_or(FixGeomError::UnsupportedBasePoint { n, s, t })?;
    if s as usize * n as usize != kind.ternary_order() || !kind.stabilizer_orders().contains(&t) {
        return Err(FixGeomError::UnsupportedBasePoint { n, s, t });
    }
    let b = (CONDUCTOR as u32 / (2 * t)) as i64;
    cyclic_quotient(-2 * b * s as i64, -2 * b)
}

/// An `H_Λ`-orbit of points on a base line `Λ` with nontrivial stabilizer.
#[derive(Clone, Debug)]
pub struct BasePointOrbit {
    pub representative: Point,
    pub t: u32,
    pub length: usize,
    pub singularity: Singularity,
    /// Classification traced from the actual right quaternion fixing the point.
    pub traced: Singularity,
}

pub fn base_point_orbits(
    group: &FiniteGroup,
    orbits: &[FixLineOrbit],
    base: &BaseLocus,
) -> Result<Vec<BasePointOrbit>, FixGeomError> {
    let n = group.kind().degree();
    let lambda = &base.left.representative;
    let mut points: Vec<(Point, &FixLineOrbit)> = Vec::new();
    for orbit in orbits.iter().filter(|o| o.label == LineType::Ruling(RulingSide::Right)) {
        for line in &orbit.members {
            let x = lambda
                .intersection(line)
                .ok_or_else(|| FixGeomError::BaseLocus("opposite rulings do not meet".into()))?;
            points.push((x, orbit));
        }
    }
    let mut seen: HashSet<Point> = HashSet::new();
    let mut out = Vec::new();
    for (x, orbit) in &points {
        if seen.contains(x) {
            continue;
        }
        let mut members = HashSet::new();
        for &h in &base.left.stabilizer {
            let y = canonical_point(&group.element(h).matrix().mul_vec(x)).expect("nonzero image");
            members.insert(y);
        }
        let mut sorted: Vec<Point> = members.into_iter().collect();
        sorted.sort();
        seen.extend(sorted.iter().cloned());
        let t = orbit.fix_group_order();
        let right_generator = group.element(orbit.generator);
        let b = right_generator.quaternion_exponents().1 as i64;
        let traced = cyclic_quotient(-2 * b * base.s as i64, -2 * b)?;
        out.push(BasePointOrbit {
            representative: sorted[0].clone(),
            t,
            length: sorted.len(),
            singularity: classify_base_point(n, base.s, t)?,
            traced,
        });
    }
    out.sort_by(|a, b| (a.t, a.length, &a.representative).cmp(&(b.t, b.length, &b.representative)));
    Ok(out)
}

/// Singularity at a point of `X ∩ L` off the quadric: `F_L` acts on the
/// tangent plane with weights `α⁻²`, `α²`.
pub fn classify_line_point(group: &FiniteGroup, orbit: &FixLineOrbit) -> Result<Singularity, FixGeomError> {
    let a = group.element(orbit.generator).quaternion_exponents().0 as i64;
    cyclic_quotient(-2 * a, 2 * a)
}

/// `H_L`-orbits of the points of `X ∩ L` off the quadric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineOrbitCensus {
    pub points_off_quadric: usize,
    pub orbit_length: usize,
    pub number: usize,
    pub singularity: Singularity,
}

/// A degree-`n` surface meets `L` in `n` points; those on the base locus are
/// removed and the rest split into generic `H_L`-orbits.
pub fn line_orbit_census(
    group: &FiniteGroup,
    orbit: &FixLineOrbit,
    base: &BaseLocus,
) -> Result<LineOrbitCensus, FixGeomError> {
    let n = group.kind().degree() as usize;
    let line = &orbit.representative;
    let on_base: HashSet<Point> = base.lines().filter_map(|l| line.intersection(l)).collect();
    let points = n - on_base.len();
    let orbit_length = orbit.generic_orbit_length();
    if !points.is_multiple_of(orbit_length) {
        return Err(FixGeomError::NonIntegralCensus { points, orbit_length });
    }
    Ok(LineOrbitCensus {
        points_off_quadric: points,
        orbit_length,
        number: points / orbit_length,
        singularity: classify_line_point(group, orbit)?,
    })
}

/// Isomorphism type of a point stabilizer in `SO(3)`-like form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum GroupId {
    Cyclic(u32),
    /// `Z2 × Z2`.
    Klein,
    /// Dihedral of order `2k`.
    Dihedral(u32),
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl GroupId {
    pub fn order(self) -> usize {
        match self {
            GroupId::Cyclic(k) => k as usize,
            GroupId::Klein => 4,
            GroupId::Dihedral(k) => 2 * k as usize,
            GroupId::Tetrahedral => 12,
            GroupId::Octahedral => 24,
            GroupId::Icosahedral => 60,
        }
    }

    /// Identifies a group from its order and the number of elements of each order.
    pub fn classify(order: usize, census: &BTreeMap<u32, usize>) -> Result<Self, FixGeomError> {
        let max = census.keys().copied().max().unwrap_or(1);
        let involutions = census.get(&2).copied().unwrap_or(0);
        if max as usize == order {
            return Ok(GroupId::Cyclic(order as u32));
        }
        if order == 4 && involutions == 3 {
            return Ok(GroupId::Klein);
        }
        let k = order / 2;
        if order.is_multiple_of(2) && max as usize == k && involutions >= k {
            return Ok(GroupId::Dihedral(k as u32));
        }
        match (order, max) {
            (12, 3) => Ok(GroupId::Tetrahedral),
            (24, 4) => Ok(GroupId::Octahedral),
            (60, 5) => Ok(GroupId::Icosahedral),
            _ => Err(FixGeomError::UnknownGroup(order)),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::Cyclic(k) => write!(f, "Z{k}"),
            GroupId::Klein => f.write_str("Z2xZ2"),
            GroupId::Dihedral(k) => write!(f, "D{k}"),
            GroupId::Tetrahedral => f.write_str("T"),
            GroupId::Octahedral => f.write_str("O"),
            GroupId::Icosahedral => f.write_str("I"),
        }
    }
}

impl FromStr for GroupId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |r: &str| r.parse::<u32>().map_err(|_| format!("bad group id {s:?}"));
        match s {
            "T" => Ok(GroupId::Tetrahedral),
            "O" => Ok(GroupId::Octahedral),
            "I" => Ok(GroupId::Icosahedral),
            "Z2xZ2" | "Z2×Z2" => Ok(GroupId::Klein),
            _ if s.starts_with('Z') => Ok(GroupId::Cyclic(num(&s[1..])?)),
            _ if s.starts_with('D') => Ok(GroupId::Dihedral(num(&s[1..])?)),
            _ => Err(format!("bad group id {s:?}")),
        }
    }
}

/// Minimal resolution of `C²/F̃`, `F̃` the binary cover of `F`.
pub fn node_resolution_type(f: GroupId) -> Result<DynkinType, FixGeomError> {
    match f {
        GroupId::Cyclic(k) if k >= 1 => Ok(DynkinType::A(2 * k - 1)),
        GroupId::Dihedral(k) if k >= 2 => Ok(DynkinType::D(k + 2)),
        GroupId::Klein => Ok(DynkinType::D(4)),
        GroupId::Tetrahedral => Ok(DynkinType::E(6)),
        GroupId::Octahedral => Ok(DynkinType::E(7)),
        GroupId::Icosahedral => Ok(DynkinType::E(8)),
        other => Err(FixGeomError::UnknownGroup(other.order())),
    }
}

/// A `PG_n`-orbit of intersection points of off-quadric fix-lines.
#[derive(Clone, Debug)]
pub struct FixPointRecord {
    pub point: Point,
    pub orbit_length: usize,
    pub stabilizer_order: usize,
    pub stabilizer: GroupId,
    pub meeting_lines: BTreeMap<LineType, usize>,
    pub singularity: Singularity,
}

impl FixPointRecord {
    /// Lines through the point as `3M + 4N′`.
    pub fn lines_display(&self) -> String {
        self.meeting_lines
            .iter()
            .map(|(t, c)| format!("{c}{t}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn point_orbit(group: &FiniteGroup, start: &Point) -> Vec<Point> {
    let gens: Vec<&GroupElement> = group.generators().collect();
    let mut seen: HashSet<Point> = HashSet::from([start.clone()]);
    let mut members = vec![start.clone()];
    let mut cursor = 0;
    while cursor < members.len() {
        let x = members[cursor].clone();
        cursor += 1;
        for g in &gens {
            let y = canonical_point(&g.matrix().mul_vec(&x)).expect("nonzero image");
            if seen.insert(y.clone()) {
                members.push(y);
            }
        }
    }
    members.sort();
    members
}

fn fixes_point(m: &CycMatrix, x: &Point) -> bool {
    let y = m.mul_vec(x);
    let lead = x.iter().position(|c| !c.is_zero()).expect("nonzero point");
    let scale = &y[lead];
    y.iter().zip(x.iter()).all(|(yi, xi)| *yi == scale * xi)
}

/// Orbits of pairwise intersections of off-quadric fix-lines lying off the quadric.
pub fn node_orbits(group: &FiniteGroup, orbits: &[FixLineOrbit]) -> Result<Vec<FixPointRecord>, FixGeomError> {
    let off: Vec<&FixLineOrbit> = orbits.iter().filter(|o| !o.on_quadric()).collect();
    let all_lines: Vec<(&ProjLine, LineType)> =
        off.iter().flat_map(|o| o.members.iter().map(move |l| (l, o.label))).collect();
    let mut candidates: Vec<Point> = Vec::new();
    let mut candidate_set: HashSet<Point> = HashSet::new();
    for o in &off {
        for (line, _) in &all_lines {
            if let Some(x) = o.representative.intersection(line) {
                if !quadratic_form(&x).is_zero() && candidate_set.insert(x.clone()) {
                    candidates.push(x);
                }
            }
        }
    }
    candidates.sort();
    let mut covered: HashSet<Point> = HashSet::new();
    let mut records = Vec::new();
    for x in &candidates {
        if covered.contains(x) {
            continue;
        }
        let members = point_orbit(group, x);
        covered.extend(members.iter().cloned());
        let rep = members[0].clone();
        let stab: Vec<&GroupElement> =
            group.elements().iter().filter(|g| fixes_point(g.matrix(), &rep)).collect();
        if members.len() * stab.len() != group.order() {
            return Err(FixGeomError::OrbitStabilizer {
                length: members.len(),
                stabilizer: stab.len(),
                order: group.order(),
            });
        }
        let mut census = BTreeMap::new();
        for g in &stab {
            *census.entry(element_order(g)).or_insert(0) += 1;
        }
        let stabilizer = GroupId::classify(stab.len(), &census)?;
        let mut meeting_lines = BTreeMap::new();
        for (line, label) in &all_lines {
            if line.contains(&rep) {
                *meeting_lines.entry(*label).or_insert(0) += 1;
            }
        }
        records.push(FixPointRecord {
            point: rep,
            orbit_length: members.len(),
            stabilizer_order: stab.len(),
            stabilizer,
            meeting_lines,
            singularity: Singularity::Ade(node_resolution_type(stabilizer)?),
        });
    }
    records.sort_by(|a, b| {
        (a.orbit_length, &a.meeting_lines, &a.point).cmp(&(b.orbit_length, &b.meeting_lines, &b.point))
    });
    Ok(records)
}

/// Everything `fixgeom` derives from one projective group.
#[derive(Clone, Debug)]
pub struct FixGeometry {
    pub orbits: Vec<FixLineOrbit>,
    pub base: BaseLocus,
    pub base_points: Vec<BasePointOrbit>,
    pub nodes: Vec<FixPointRecord>,
}

impl FixGeometry {
    pub fn analyze(group: &FiniteGroup) -> Result<Self, FixGeomError> {
        let orbits = fix_lines(group)?;
        let base = base_locus(group, &orbits)?;
        let base_points = base_point_orbits(group, &orbits, &base)?;
        let nodes = node_orbits(group, &orbits)?;
        Ok(FixGeometry { orbits, base, base_points, nodes })
    }

    pub fn off_quadric(&self) -> impl Iterator<Item = &FixLineOrbit> {
        self.orbits.iter().filter(|o| !o.on_quadric())
    }

    pub fn rulings(&self, side: RulingSide) -> impl Iterator<Item = &FixLineOrbit> {
        self.orbits.iter().filter(move |o| o.label == LineType::Ruling(side))
    }

    pub fn orbit(&self, label: LineType) -> Option<&FixLineOrbit> {
        self.orbits.iter().find(|o| o.label == label)
    }
}
