//! Ramification and swallowing counts along fix-lines, and the projective
//! invariants of the four special parameters of each pencil.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::catalog::{CaseId, Catalog, CatalogError, PencilCase};
use crate::cyclofield::{CycNum, Rational};
use crate::fixgeom::{line_orbit_census, FixGeomError, FixGeometry, FixLineOrbit, LineType};
use crate::groups::FiniteGroup;
use crate::lattice::factorization_string;

/// Number of simple intersection points that meet in one node.
pub const COLLISION_SIZE: u64 = 2;

#[derive(Debug, Error)]
pub enum PencilError {
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("{what}: {num}/{den} is not an integer")]
    NonIntegral { what: String, num: u64, den: u64 },
    #[error("line type {line} of degree {n} carries a single orbit of intersection points")]
    SingleOrbit { n: u32, line: LineType },
    #[error("no line type {0} in this geometry")]
    UnknownLine(LineType),
    #[error("line meets the base locus, so the λ-map has degree {found} < {n}")]
    BaseIntersection { n: u32, found: usize },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Geometry(#[from] FixGeomError),
}

fn exact_div(what: impl Into<String>, num: u64, den: u64) -> Result<u64, PencilError> {
    if den == 0 || !num.is_multiple_of(den) {
        return Err(PencilError::NonIntegral { what: what.into(), num, den });
    }
    Ok(num / den)
}

/// Ramification absorbed when `k` simple points collide in one point.
pub fn collision_contribution(k: u64) -> u64 {
    k.saturating_sub(1)
}

/// Riemann–Hurwitz total `2d − 2` for a degree-`d` map `ℙ₁ → ℙ₁`.
pub fn hurwitz_total(degree: u64) -> u64 {
    2 * degree - 2
}

/// `ns = |PG_n| / |F|`: number of nodes of a special surface.
pub fn node_count(group: &FiniteGroup, case: &PencilCase) -> Result<u64, PencilError> {
    let f = case
        .node_group
        .ok_or_else(|| PencilError::Degenerate(format!("case {} has no node group", case.id)))?;
    exact_div(format!("ns for {}", case.id), group.order() as u64, f.order() as u64)
}

/// Nodes of a special surface on one line of the given orbit:
/// `ns · (lines of this type through a node) / ℓ`.
pub fn nodes_on_line(group: &FiniteGroup, case: &PencilCase, orbit: &FixLineOrbit) -> Result<u64, PencilError> {
    let ns = node_count(group, case)?;
    let through = case.node_lines.get(&orbit.label()).copied().unwrap_or(0) as u64;
    exact_div(format!("nodes of {} on a {} line", case.id, orbit.label()), ns * through, orbit.length() as u64)
}

/// Swallowing on one line for one special surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwallowCount {
    pub case: CaseId,
    pub nodes: u64,
    /// Generic `H_L`-orbits absorbed into the nodes.
    pub orbits: u64,
}

/// Ramification bookkeeping of the λ-map restricted to a fix-line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationSheet {
    pub n: u32,
    pub line_type: LineType,
    pub cover_degree: u64,
    pub total_ramification: u64,
    pub quadric_contribution: u64,
    pub off_quadric: u64,
    pub orbit_length: u64,
    pub per_case: Vec<SwallowCount>,
}

impl RamificationSheet {
    /// Ramification consumed by the nodes of all special surfaces.
    pub fn swallowed_ramification(&self) -> u64 {
        self.per_case.iter().map(|c| c.nodes * collision_contribution(COLLISION_SIZE)).sum()
    }

    pub fn swallowed_orbits(&self) -> u64 {
        self.per_case.iter().map(|c| c.orbits).sum()
    }

    /// Ramification absorbed by one swallowed orbit, `ℓ·(k−1)/k`.
    pub fn orbit_collision_cost(&self) -> Rational {
        ratio(
            (self.orbit_length * collision_contribution(COLLISION_SIZE)) as i64,
            COLLISION_SIZE as i64,
        )
    }

    /// The special surfaces use up exactly the ramification off the quadric.
    pub fn is_balanced(&self) -> bool {
        self.off_quadric == self.total_ramification - self.quadric_contribution
            && self.swallowed_ramification() == self.off_quadric
            && ratio(self.swallowed_orbits() as i64, 1) * self.orbit_collision_cost()
                == ratio(self.off_quadric as i64, 1)
    }
}

/// Line types carrying at least two generic orbits of intersection points.
pub fn ambiguous_line_types(group: &FiniteGroup, geometry: &FixGeometry) -> Result<Vec<LineType>, PencilError> {
    let mut out = Vec::new();
    for orbit in geometry.off_quadric() {
        if line_orbit_census(group, orbit, &geometry.base)?.number >= 2 {
            out.push(orbit.label());
        }
    }
    Ok(out)
}

pub fn ramification_sheet(
    group: &FiniteGroup,
    geometry: &FixGeometry,
    catalog: &Catalog,
    line_type: LineType,
) -> Result<RamificationSheet, PencilError> {
    let n = group.kind().degree();
    let orbit = geometry.orbit(line_type).ok_or(PencilError::UnknownLine(line_type))?;
    let census = line_orbit_census(group, orbit, &geometry.base)?;
    if census.number < 2 {
        return Err(PencilError::SingleOrbit { n, line: line_type });
    }
    if census.points_off_quadric != n as usize {
        return Err(PencilError::BaseIntersection { n, found: census.points_off_quadric });
    }
    let cover_degree = census.points_off_quadric as u64;
    let total_ramification = hurwitz_total(cover_degree);
    // Over λ = ∞ the fibre is L ∩ Q: two points, each of multiplicity d/2.
    let quadric_contribution = 2 * collision_contribution(cover_degree / 2);
    let orbit_length = census.orbit_length as u64;
    let mut per_case = Vec::new();
    for id in CaseId::specials(n) {
        let case = catalog.case(id)?;
        let nodes = nodes_on_line(group, &case, orbit)?;
        if nodes == 0 {
            continue;
        }
        let orbits = exact_div(format!("orbits swallowed by {id}"), nodes * COLLISION_SIZE, orbit_length)?;
        per_case.push(SwallowCount { case: id, nodes, orbits });
    }
    Ok(RamificationSheet {
        n,
        line_type,
        cover_degree,
        total_ramification,
        quadric_contribution,
        off_quadric: total_ramification - quadric_contribution,
        orbit_length,
        per_case,
    })
}

/// `(z₁−z₃)(z₂−z₄) / ((z₁−z₄)(z₂−z₃))`.
pub fn cross_ratio(z: &[Rational; 4]) -> Result<Rational, PencilError> {
    let den = (&z[0] - &z[3]) * (&z[1] - &z[2]);
    if den.is_zero() {
        return Err(PencilError::Degenerate("cross-ratio denominator vanishes".into()));
    }
    Ok((&z[0] - &z[2]) * (&z[1] - &z[3]) / den)
}

/// The same cross-ratio over the cyclotomic field.
pub fn cross_ratio_cyc(z: &[CycNum; 4]) -> Result<CycNum, PencilError> {
    let num = &(&z[0] - &z[2]) * &(&z[1] - &z[3]);
    let den = &(&z[0] - &z[3]) * &(&z[1] - &z[2]);
    num.checked_div(&den)
        .map_err(|_| PencilError::Degenerate("cross-ratio denominator vanishes".into()))
}

/// The four points of an orbit on a fix-line in the affine parameter `u`:
/// `u, 1/u, −u, −1/u` for `n = 6, 12` and `u, −u, 2/u, −2/u` for `n = 8`.
pub fn orbit_points(n: u32, u: &CycNum) -> Result<[CycNum; 4], PencilError> {
    let c = if n == 8 { CycNum::from_i64(2) } else { CycNum::one() };
    let w = c
        .checked_div(u)
        .map_err(|_| PencilError::Degenerate("u = 0".into()))?;
    Ok(match n {
        8 => [u.clone(), -u, w.clone(), -&w],
        _ => [u.clone(), w.clone(), -u, -&w],
    })
}

pub fn orbit_cross_ratio(n: u32, u: &CycNum) -> Result<CycNum, PencilError> {
    cross_ratio_cyc(&orbit_points(n, u)?)
}

/// Cross-ratio of the special parameters `λ₁..λ₄` in index order.
pub fn parameter_cross_ratio(lambdas: &[Rational; 4]) -> Result<Rational, PencilError> {
    cross_ratio(lambdas)
}

/// The six values `λ, 1−λ, 1/λ, 1/(1−λ), (λ−1)/λ, λ/(λ−1)` obtained by
/// reordering the four points.
pub fn cross_ratio_orbit(l: &Rational) -> Result<[Rational; 6], PencilError> {
    if l.is_zero() || l.is_one() {
        return Err(PencilError::Degenerate(format!("cross-ratio {l}")));
    }
    let one = Rational::one();
    let m = &one - l;
    Ok([l.clone(), m.clone(), l.recip(), m.recip(), (l - &one) / l, l / (l - &one)])
}

/// Exact rational with its factored rendering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredRational(pub Rational);

impl fmt::Display for FactoredRational {
    /// `13³·37³/(2⁸·3⁴·5⁴)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.0;
        let num = factorization_string(q.numer());
        if q.denom().is_one() {
            return f.write_str(&num);
        }
        let den = factorization_string(q.denom());
        if den.contains('·') {
            write!(f, "{num}/({den})")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

/// `j(λ) = (λ²−λ+1)³ / (λ²(λ−1)²)`.
pub fn j_invariant(cr: &Rational) -> Result<FactoredRational, PencilError> {
    if cr.is_zero() || cr.is_one() {
        return Err(PencilError::Degenerate(format!("cross-ratio {cr}")));
    }
    let one = Rational::one();
    let a = cr * cr - cr + &one;
    let b = cr - &one;
    Ok(FactoredRational(&a * &a * &a / (cr * cr * &b * &b)))
}

/// The elliptic normalization `256·j(λ)`.
pub fn j_invariant_256(cr: &Rational) -> Result<FactoredRational, PencilError> {
    let j = j_invariant(cr)?;
    Ok(FactoredRational(j.0 * Rational::from_integer(BigInt::from(256))))
}

/// `a/b` as a rational.
pub fn ratio(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// `(az + b)/(cz + d)`, `None` at the pole.
pub fn moebius(m: &[Rational; 4], z: &Rational) -> Option<Rational> {
    let den = &m[2] * z + &m[3];
    if den.is_zero() {
        return None;
    }
    Some((&m[0] * z + &m[1]) / den)
}

/// Sign-aware rendering of a rational as `−a/b`.
pub fn rational_string(q: &Rational) -> String {
    let sign = if q.is_negative() { "-" } else { "" };
    let a = q.numer().abs();
    if q.denom().is_one() {
        format!("{sign}{a}")
    } else {
        format!("{sign}{a}/{}", q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixgeom::FixGeometry;
    use crate::groups::{build_projective_group, PolyhedralKind};
    use proptest::prelude::*;

    fn lambdas(v: [(i64, i64); 4]) -> [Rational; 4] {
        v.map(|(a, b)| ratio(a, b))
    }

    #[test]
    fn parameter_cross_ratios() {
        let table = [
            ([(-1, 1), (-2, 3), (-7, 12), (-1, 4)], ratio(25, 9)),
            ([(-1, 1), (-3, 4), (-9, 16), (-5, 9)], ratio(49, 48)),
            ([(-3, 32), (-22, 243), (-2, 25), (0, 1)], ratio(121, 96)),
        ];
        for (l, cr) in table {
            assert_eq!(parameter_cross_ratio(&lambdas(l)).unwrap(), cr);
        }
    }

    #[test]
    fn j_values() {
        let cube = |x: i64| BigInt::from(x).pow(3);
        let j6 = j_invariant(&ratio(25, 9)).unwrap();
        assert_eq!(j6.to_string(), "13³·37³/(2⁸·3⁴·5⁴)");
        assert_eq!(*j6.0.numer(), cube(13) * cube(37));
        assert_eq!(j_invariant(&ratio(49, 48)).unwrap().to_string(), "13³·181³/(2⁸·3²·7⁴)");
        assert_eq!(j_invariant(&ratio(121, 96)).unwrap().to_string(), "12241³/(2¹⁰·3²·5⁴·11⁴)");
        assert_eq!(j_invariant_256(&ratio(25, 9)).unwrap().to_string(), "13³·37³/(3⁴·5⁴)");
        assert!(j_invariant(&Rational::one()).is_err());
        assert!(j_invariant(&Rational::zero()).is_err());
    }

    #[test]
    fn orbit_cross_ratio_closed_forms() {
        assert!(orbit_cross_ratio(6, &CycNum::one()).unwrap().is_one());
        assert!(orbit_cross_ratio(8, &CycNum::sqrt2()).unwrap().is_zero());
        assert!(orbit_cross_ratio(6, &CycNum::imag_unit()).is_err());
        assert!(orbit_cross_ratio(12, &CycNum::imag_unit()).is_err());
        assert!(orbit_cross_ratio(8, &(CycNum::imag_unit() * CycNum::sqrt2())).is_err());
        let a = orbit_cross_ratio(6, &CycNum::from_i64(2)).unwrap();
        let b = orbit_cross_ratio(6, &CycNum::from_i64(3)).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.to_rational().unwrap(), ratio(16, 25));
        assert_eq!(b.to_rational().unwrap(), ratio(36, 100));
    }

    #[test]
    fn degree_six_sheets() {
        let g = build_projective_group(PolyhedralKind::Tetrahedral).unwrap();
        let geo = FixGeometry::analyze(&g).unwrap();
        let cat = Catalog::bundled().unwrap();
        let types = ambiguous_line_types(&g, &geo).unwrap();
        assert_eq!(types, vec![LineType::off('N', 1), LineType::off('N', 2)]);
        for t in types {
            let s = ramification_sheet(&g, &geo, &cat, t).unwrap();
            assert_eq!((s.cover_degree, s.total_ramification, s.quadric_contribution, s.off_quadric), (6, 10, 4, 6));
            assert_eq!(s.per_case.iter().map(|c| c.nodes).collect::<Vec<_>>(), vec![3, 3]);
            assert_eq!(s.swallowed_orbits(), 4);
            assert!(s.is_balanced());
            for c in &s.per_case {
                let case = cat.case(c.case).unwrap();
                let orbit = geo.orbit(t).unwrap();
                let through = case.node_lines[&t] as u64;
                assert_eq!(c.nodes * orbit.length() as u64 / through, node_count(&g, &case).unwrap());
            }
        }
        assert!(matches!(
            ramification_sheet(&g, &geo, &cat, LineType::off('M', 0)),
            Err(PencilError::SingleOrbit { .. })
        ));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-30i64..30, 1i64..12).prop_map(|(a, b)| ratio(a, b))
    }

    proptest! {
        #[test]
        fn cross_ratio_is_moebius_invariant(
            z in proptest::array::uniform4(small_rational()),
            m in proptest::array::uniform4(small_rational()),
        ) {
            let distinct = (0..4).all(|i| (0..i).all(|j| z[i] != z[j]));
            prop_assume!(distinct);
            prop_assume!(&m[0] * &m[3] - &m[1] * &m[2] != Rational::zero());
            let images: Option<Vec<Rational>> = z.iter().map(|x| moebius(&m, x)).collect();
            prop_assume!(images.is_some());
            let w: [Rational; 4] = images.unwrap().try_into().unwrap();
            prop_assert_eq!(cross_ratio(&z).unwrap(), cross_ratio(&w).unwrap());
        }

        #[test]
        fn j_is_constant_on_reorderings(l in small_rational()) {
            prop_assume!(!l.is_zero() && !l.is_one());
            let j = j_invariant(&l).unwrap();
            for v in cross_ratio_orbit(&l).unwrap() {
                prop_assert_eq!(&j_invariant(&v).unwrap(), &j);
            }
        }

        #[test]
        fn orbit_cross_ratio_matches_closed_form(a in 1i64..40, b in 1i64..40) {
            let u = ratio(a, b);
            let u2 = &u * &u;
            let one = Rational::one();
            let two = ratio(2, 1);
            let cr6 = ratio(4, 1) * &u2 / ((&one + &u2) * (&one + &u2));
            let cr8 = (&u2 - &two) * (&u2 - &two) / ((&u2 + &two) * (&u2 + &two));
            let cu = CycNum::from_rational(&u);
            prop_assert_eq!(orbit_cross_ratio(6, &cu).unwrap().to_rational().unwrap(), cr6.clone());
            prop_assert_eq!(orbit_cross_ratio(12, &cu).unwrap().to_rational().unwrap(), cr6);
            prop_assert_eq!(orbit_cross_ratio(8, &cu).unwrap().to_rational().unwrap(), cr8);
        }
    }
}
