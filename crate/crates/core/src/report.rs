//! Verification reports: every computed quantity is compared as an exact
//! string against the expected-value table.

use std::cell::{OnceCell, RefCell};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{CaseId, Catalog, CatalogError, GlueClass, PencilCase, DEGREES, NEW_CURVE};
use crate::cyclofield::{eigenvalues_finite_order, solve_kernel, CycMatrix, CycNum, FieldError};
use crate::fixgeom::{
    base_locus, base_point_orbits, classify_base_point, classify_line_point, fix_lines, line_orbit_census,
    node_orbits, node_resolution_type, FixGeomError, FixGeometry, GroupId, LineType, RulingSide, Singularity,
};
use crate::groups::{
    build_binary_group, build_projective_group, element_order, quadratic_form, sigma, FiniteGroup, GroupError,
    PolyhedralKind,
};
use crate::lattice::{
    check_divisible_class, dual_membership, exact_determinant, extend_by_glue, factorization_string,
    gram_from_config, search_divisible_classes, smith_normal_form, IntLattice, LatticeError,
};
use crate::pencil::{
    ambiguous_line_types, j_invariant, j_invariant_256, nodes_on_line, orbit_cross_ratio,
    parameter_cross_ratio, ramification_sheet, rational_string, PencilError,
};

/// Every operation that `verify all` must exercise.
pub const CHECKLIST: [&str; 30] = [
    "field_ops",
    "solve_kernel",
    "eigenvalues_finite_order",
    "build_binary_group",
    "sigma",
    "build_projective_group",
    "element_order",
    "fix_lines",
    "base_locus",
    "classify_base_point",
    "classify_line_point",
    "line_orbit_census",
    "node_orbits",
    "node_resolution_type",
    "gram_from_config",
    "exact_determinant",
    "smith_normal_form",
    "dual_membership",
    "extend_by_glue",
    "check_divisible_class",
    "generic_config",
    "special_config",
    "glue_classes",
    "ramification_sheet",
    "nodes_on_line",
    "orbit_cross_ratio",
    "parameter_cross_ratio",
    "j_invariant",
    "cmd_verify",
    "cmd_report",
];

/// Name of the extra report appended by `verify all`.
pub const COVERAGE_CASE: &str = "coverage";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Geometry(#[from] FixGeomError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("unknown scope {0:?}")]
    UnknownScope(String),
}

/// One compared quantity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub name: String,
    pub computed: String,
    pub expected: String,
    #[serde(rename = "paper_ref")]
    pub reference: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub case: String,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_text(&self) -> String {
        let width = self.entries.iter().map(|e| e.name.chars().count()).max().unwrap_or(0);
        let mut out = format!("case {}\n", self.case);
        for e in &self.entries {
            let pad = " ".repeat(width - e.name.chars().count());
            let status = if e.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("  {status}  {}{pad}  {}", e.name, e.computed));
            if !e.pass {
                out.push_str(&format!("  (expected {})", e.expected));
            }
            out.push_str(&format!("  [{}]\n", e.reference));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Group of checks run by `verify`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Scope {
    Groups,
    Fixlines,
    Singularities,
    Lattices,
    Pencil,
    All,
}

impl Scope {
    pub const PARTS: [Scope; 5] = [Scope::Groups, Scope::Fixlines, Scope::Singularities, Scope::Lattices, Scope::Pencil];

    fn parts(self) -> Vec<Scope> {
        match self {
            Scope::All => Scope::PARTS.to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::Groups => "groups",
            Scope::Fixlines => "fixlines",
            Scope::Singularities => "singularities",
            Scope::Lattices => "lattices",
            Scope::Pencil => "pencil",
            Scope::All => "all",
        })
    }
}

impl FromStr for Scope {
    type Err = ReportError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scope::PARTS
            .iter()
            .chain([Scope::All].iter())
            .find(|x| x.to_string() == s)
            .copied()
            .ok_or_else(|| ReportError::UnknownScope(s.to_string()))
    }
}

struct Degree {
    group: FiniteGroup,
    geometry: FixGeometry,
}

/// Runs checks against a catalog, caching the group computations per degree.
pub struct Verifier {
    catalog: Catalog,
    degrees: BTreeMap<u32, OnceCell<Degree>>,
    coverage: RefCell<BTreeSet<&'static str>>,
    consumed: RefCell<BTreeSet<(CaseId, String)>>,
}

struct Sink<'a> {
    verifier: &'a Verifier,
    case: CaseId,
    entries: Vec<Entry>,
}

impl Sink<'_> {
    fn push(&mut self, name: impl Into<String>, computed: impl ToString) {
        let name = name.into();
        let computed = computed.to_string();
        let expected = self.verifier.catalog.expected().get(self.case, &name);
        self.verifier.consumed.borrow_mut().insert((self.case, name.clone()));
        let (expected, reference) = match expected {
            Some(e) => (e.value.clone(), e.reference.clone()),
            None => ("<missing>".to_string(), "no expected value".to_string()),
        };
        let pass = expected == computed;
        self.entries.push(Entry { name, computed, expected, reference, pass });
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn lines_display(lines: &BTreeMap<LineType, usize>) -> String {
    lines.iter().map(|(t, c)| format!("{c}{t}")).collect::<Vec<_>>().join(" + ")
}

/// The node data of a special surface, read off the computed geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeData {
    pub ns: usize,
    pub group: GroupId,
    pub lines: BTreeMap<LineType, usize>,
}

/// Finds the node orbit whose line pattern matches the case. Nodes met by a
/// single fix-line are generic points of that line.
pub fn node_for_case(geometry: &FixGeometry, case: &PencilCase) -> Option<NodeData> {
    if let Some(r) = geometry.nodes.iter().find(|r| r.meeting_lines == case.node_lines) {
        return Some(NodeData { ns: r.orbit_length, group: r.stabilizer, lines: r.meeting_lines.clone() });
    }
    let [(t, 1)] = case.node_lines.iter().map(|(t, c)| (*t, *c)).collect::<Vec<_>>()[..] else {
        return None;
    };
    let orbit = geometry.orbit(t)?;
    Some(NodeData {
        ns: orbit.length() * orbit.generic_orbit_length(),
        group: GroupId::Cyclic(orbit.fix_group_order()),
        lines: BTreeMap::from([(t, 1)]),
    })
}

impl Verifier {
    pub fn new(catalog: Catalog) -> Self {
        Verifier {
            catalog,
            degrees: DEGREES.iter().map(|&n| (n, OnceCell::new())).collect(),
            coverage: RefCell::new(BTreeSet::new()),
            consumed: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    fn mark(&self, op: &'static str) {
        debug_assert!(CHECKLIST.contains(&op), "{op} is not on the checklist");
        self.coverage.borrow_mut().insert(op);
    }

    /// Operations exercised so far.
    pub fn covered(&self) -> BTreeSet<&'static str> {
        self.coverage.borrow().clone()
    }

    fn degree(&self, n: u32) -> Result<&Degree, ReportError> {
        let cell = &self.degrees[&n];
        if cell.get().is_none() {
            let kind = PolyhedralKind::from_degree(n).expect("catalog degrees are supported");
            let group = build_projective_group(kind)?;
            self.mark("build_projective_group");
            let orbits = fix_lines(&group)?;
            self.mark("fix_lines");
            let base = base_locus(&group, &orbits)?;
            self.mark("base_locus");
            let base_points = base_point_orbits(&group, &orbits, &base)?;
            let nodes = node_orbits(&group, &orbits)?;
            self.mark("node_orbits");
            let _ = cell.set(Degree { group, geometry: FixGeometry { orbits, base, base_points, nodes } });
        }
        Ok(cell.get().expect("initialized above"))
    }

    /// All scopes for one case.
    pub fn report(&self, case: CaseId) -> Result<Report, ReportError> {
        self.report_scopes(case, &Scope::PARTS)
    }

    fn report_scopes(&self, case: CaseId, scopes: &[Scope]) -> Result<Report, ReportError> {
        self.mark("cmd_report");
        let mut sink = Sink { verifier: self, case, entries: Vec::new() };
        for scope in scopes {
            match scope {
                Scope::Groups => self.groups(&mut sink)?,
                Scope::Fixlines => self.fixlines(&mut sink)?,
                Scope::Singularities => self.singularities(&mut sink)?,
                Scope::Lattices => self.lattices(&mut sink)?,
                Scope::Pencil => self.pencil(&mut sink)?,
                Scope::All => unreachable!("expanded by the caller"),
            }
        }
        Ok(Report { case: case.to_string(), entries: sink.entries })
    }

    /// One report per case in fixed order; `all` appends a coverage report.
    pub fn verify(&self, scope: Scope) -> Result<Vec<Report>, ReportError> {
        self.mark("cmd_verify");
        let parts = scope.parts();
        let mut out = Vec::new();
        for case in CaseId::all() {
            let r = self.report_scopes(case, &parts)?;
            if !r.entries.is_empty() {
                out.push(r);
            }
        }
        if scope == Scope::All {
            out.push(self.coverage_report());
        }
        Ok(out)
    }

    fn coverage_report(&self) -> Report {
        let covered = self.covered();
        let missing: Vec<&str> = CHECKLIST.iter().copied().filter(|op| !covered.contains(op)).collect();
        let total = CHECKLIST.len();
        let mut entries = vec![Entry {
            name: "operations_exercised".into(),
            computed: format!("{}/{total}", total - missing.len()),
            expected: format!("{total}/{total}"),
            reference: if missing.is_empty() { "checklist".into() } else { format!("missing: {}", missing.join(", ")) },
            pass: missing.is_empty(),
        }];
        let consumed = self.consumed.borrow();
        let rows: Vec<String> = self
            .catalog
            .expected()
            .keys()
            .filter(|k| !consumed.contains(*k))
            .map(|(c, q)| format!("{c} {q}"))
            .collect();
        let n = self.catalog.expected().len();
        entries.push(Entry {
            name: "expected_rows_checked".into(),
            computed: format!("{}/{n}", n - rows.len()),
            expected: format!("{n}/{n}"),
            reference: if rows.is_empty() { "expected-value table".into() } else { format!("unchecked: {}", rows.join("; ")) },
            pass: rows.is_empty(),
        });
        Report { case: COVERAGE_CASE.into(), entries }
    }

    fn groups(&self, sink: &mut Sink) -> Result<(), ReportError> {
        if sink.case.is_special() {
            return Ok(());
        }
        let n = sink.case.n;
        let kind = PolyhedralKind::from_degree(n).expect("supported degree");
        let binary = build_binary_group(kind)?;
        self.mark("build_binary_group");
        sink.push("binary_order", binary.len());
        let d = self.degree(n)?;
        let g = &d.group;
        sink.push("projective_order", g.order());

        let kernel = binary
            .iter()
            .flat_map(|p| binary.iter().map(move |q| (p, q)))
            .filter(|(p, q)| sigma(p, q).is_identity())
            .count();
        self.mark("sigma");
        sink.push("sigma_kernel", kernel);

        let mut hom = true;
        for (k, p) in binary.iter().enumerate() {
            let q = &binary[(7 * k + 3) % binary.len()];
            let s = sigma(p, q);
            for e in g.generators() {
                let lhs = sigma(&p.mul(e.left()), &q.mul(e.right()));
                hom &= lhs == s.mul(&sigma(e.left(), e.right()));
            }
        }
        sink.push("sigma_homomorphism", flag(hom));

        let identity = CycMatrix::identity(4);
        let orthogonal = g.elements().iter().all(|e| e.matrix().mul(&e.matrix().transpose()) == identity);
        sink.push("orthogonal", flag(orthogonal));

        let orders: BTreeSet<u32> = g.elements().iter().map(element_order).collect();
        self.mark("element_order");
        sink.push("element_orders", join(orders));

        let mut eig = true;
        for q in &binary {
            let (a, b) = eigenvalues_finite_order(q.matrix())?;
            let m = q.matrix();
            let singular = m.sub(&CycMatrix::identity(2).scale(&a)).det2().is_zero();
            eig &= (&a * &b).is_one() && &a + &b == m.trace() && singular;
        }
        self.mark("eigenvalues_finite_order");
        sink.push("eigenvalues", flag(eig));

        let mut field = true;
        for e in g.generators() {
            for x in e.matrix().entries().iter().filter(|x| !x.is_zero()) {
                let y = CycNum::zeta_pow(7) + CycNum::from_fraction(2, 3);
                field &= (x * &x.inv()?).is_one()
                    && x.conj().conj() == *x
                    && &(x + &y) - &y == *x
                    && (x * &y) == (&y * x)
                    && (x.conj() * y.conj()) == (x * &y).conj();
            }
        }
        self.mark("field_ops");
        sink.push("field_identities", flag(field));
        Ok(())
    }

    fn fixlines(&self, sink: &mut Sink) -> Result<(), ReportError> {
        if sink.case.is_special() {
            return Ok(());
        }
        let d = self.degree(sink.case.n)?;
        let (g, geo) = (&d.group, &d.geometry);
        for (side, name) in [(RulingSide::Left, "left"), (RulingSide::Right, "right")] {
            let mut by_order: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
            for o in geo.rulings(side) {
                by_order.entry(o.binary_order()).or_default().push(o.length());
            }
            for (p, mut lengths) in by_order {
                lengths.sort_unstable_by(|a, b| b.cmp(a));
                sink.push(format!("ruling_{name}:p={p}"), join(lengths));
            }
        }
        sink.push("base_lines", geo.base.line_count());
        sink.push("base_s", geo.base.s);
        sink.push("orbit_stabilizer", flag(geo.orbits.iter().all(|o| o.length() * o.stabilizer_order() == g.order())));
        let pointwise = geo.orbits.iter().all(|o| {
            o.producing_elements() + 1 == o.fix_group_order() as usize
                && o.fix_elements().iter().all(|&i| o.representative().is_fixed_pointwise_by(g.element(i).matrix()))
        });
        sink.push("pointwise_fix", flag(pointwise));
        sink.push(
            "eigen_relation",
            flag(geo.off_quadric().all(|o| crate::fixgeom::eigen_relation_holds(g, o))),
        );
        let mut quadric = true;
        for o in geo.off_quadric() {
            let pts = crate::fixgeom::quadric_points(g, o)?;
            quadric &= pts.iter().all(|x| o.representative().contains(x) && quadratic_form(x).is_zero());
        }
        sink.push("quadric_points", flag(quadric));
        let mut eigenspaces = true;
        for o in geo.off_quadric() {
            let m = g.element(o.generator()).matrix();
            let Some(lambda) = o.representative().eigenvalue_of(m) else {
                eigenspaces = false;
                continue;
            };
            let kernel = solve_kernel(&m.sub(&CycMatrix::identity(4).scale(&lambda)));
            eigenspaces &= kernel.len() == 2 && kernel.iter().all(|v| o.representative().contains(v));
        }
        self.mark("solve_kernel");
        sink.push("fix_eigenspaces", flag(eigenspaces));
        let types: Vec<LineType> = geo.off_quadric().map(|o| o.label()).collect();
        sink.push("offq_types", join(&types));
        for o in geo.off_quadric() {
            let f = GroupId::Cyclic(o.fix_group_order());
            sink.push(format!("offq:{}", o.label()), format!("{f},{},{}", o.length(), o.generic_orbit_length()));
        }
        Ok(())
    }

    fn singularities(&self, sink: &mut Sink) -> Result<(), ReportError> {
        let n = sink.case.n;
        let d = self.degree(n)?;
        let (g, geo) = (&d.group, &d.geometry);
        if sink.case.is_special() {
            let case = self.catalog.case(sink.case)?;
            match node_for_case(geo, &case) {
                Some(node) => {
                    sink.push("ns", node.ns);
                    sink.push("node_group", node.group);
                    sink.push("node_lines", lines_display(&node.lines));
                    let res = node_resolution_type(node.group)?;
                    self.mark("node_resolution_type");
                    sink.push("node_resolution", res);
                }
                None => {
                    for name in ["ns", "node_group", "node_lines", "node_resolution"] {
                        sink.push(name, "not found");
                    }
                }
            }
            return Ok(());
        }
        let s = geo.base.s;
        let kind = g.kind();
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        let mut lengths: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for bp in &geo.base_points {
            *counts.entry(bp.t).or_default() += 1;
            lengths.entry(bp.t).or_default().push(bp.length);
        }
        for (t, k) in &counts {
            sink.push(format!("base_point_orbits:t={t}"), k);
        }
        for &t in kind.stabilizer_orders() {
            if t == 1 || !counts.contains_key(&t) {
                continue;
            }
            sink.push(format!("base_point:t={t}"), classify_base_point(n, s, t)?);
            if t != s {
                sink.push(format!("base_point_lengths:t={t}"), join(&lengths[&t]));
            }
        }
        self.mark("classify_base_point");
        sink.push("base_point_traced", flag(geo.base_points.iter().all(|b| b.singularity == b.traced)));
        for o in geo.off_quadric() {
            let census = line_orbit_census(g, o, &geo.base)?;
            self.mark("line_orbit_census");
            let sing = classify_line_point(g, o)?;
            self.mark("classify_line_point");
            let sings = match (census.number, sing) {
                (1, s) => s.to_string(),
                (k, Singularity::Ade(t)) => format!("{k}{t}"),
                (_, Singularity::Smooth) => "smooth".to_string(),
            };
            sink.push(format!("line_points:{}", o.label()), census.points_off_quadric);
            sink.push(format!("line_point:{}", o.label()), format!("{},{},{sings}", census.orbit_length, census.number));
        }
        Ok(())
    }

    fn lattices(&self, sink: &mut Sink) -> Result<(), ReportError> {
        let id = sink.case;
        let n = id.n;
        let config = match id.index {
            None => {
                self.mark("generic_config");
                self.catalog.generic_config(n)?
            }
            Some(i) => {
                self.mark("special_config");
                self.catalog.special_config(n, i)?
            }
        };
        let base = gram_from_config(&config);
        self.mark("gram_from_config");
        let det = exact_determinant(base.gram());
        self.mark("exact_determinant");
        let snf = smith_normal_form(base.gram());
        self.mark("smith_normal_form");
        let snf_product: BigInt = snf.elementary_divisors().iter().product();

        if id.is_special() {
            sink.push("rank", snf.rank());
            let comp = config.component_of(NEW_CURVE).expect("special configs contain the new curve");
            match config.classify_component(&comp) {
                Some(t) => sink.push("component", t),
                None => sink.push("component", "not ADE"),
            }
        } else {
            for (letter, d) in crate::lattice::block_determinants(&config) {
                sink.push(format!("block:{letter}"), factorization_string(&d));
            }
            sink.push("determinant", factorization_string(&det));
            sink.push("rank", snf.rank());
            let data = base.discriminant();
            sink.push("signature", format!("({},{})", data.positive_index, data.negative_index));
            sink.push("snf_consistent", flag(snf_product == det.abs() && data.is_sign_consistent()));
        }

        let glue = self.catalog.glue_classes(id)?;
        self.mark("glue_classes");
        let mut vectors = Vec::new();
        for (k, class) in glue.iter().enumerate() {
            let c = class.coefficients(&base)?;
            let check = check_divisible_class(&c, class.divisor, &base);
            self.mark("check_divisible_class");
            sink.push(format!("glue:{}", k + 1), if check.passes { "pass" } else { "fail" });
            if !id.is_special() {
                sink.push(format!("glue_support:{}", k + 1), check.support);
                sink.push(format!("glue_square:{}", k + 1), rational_string(&check.self_pairing));
            }
            vectors.push(class.to_vector(&base)?);
        }
        let lattice = extend_by_glue(&base, &vectors)?;
        self.mark("extend_by_glue");
        let disc = lattice.discriminant();
        if glue.is_empty() && !id.is_special() {
            sink.push("glue_count", 0);
        }
        if !glue.is_empty() || !id.is_special() {
            sink.push("index", lattice.index());
        }
        if id.is_special() {
            sink.push("discriminant", &disc.determinant);
        } else {
            sink.push("discriminant", disc.factorization_string());
            sink.push("discriminant_value", &disc.abs_discriminant);
        }
        sink.push("even", flag(lattice.is_even()));

        if let Some(p) = glue.first().map(|g| g.divisor) {
            let found = search_divisible_classes(&base, p);
            let all_found = glue.iter().all(|g| {
                let c = g.coefficients(&base).expect("checked above");
                let neg: Vec<i64> = c.iter().map(|x| -x).collect();
                found.contains(&c) || found.contains(&neg)
            });
            sink.push("search_contains_glue", flag(all_found));
        } else if !id.is_special() {
            for p in [2, 3] {
                sink.push(format!("search:p={p}"), search_divisible_classes(&base, p).len());
            }
        }

        if !id.is_special() {
            let case = self.catalog.case(id)?;
            for (k, w) in case.witnesses.iter().enumerate() {
                sink.push(format!("witness:{}", k + 1), flag(witness_in_dual(w, &lattice)?));
            }
            self.mark("dual_membership");
        }
        Ok(())
    }

    fn pencil(&self, sink: &mut Sink) -> Result<(), ReportError> {
        let id = sink.case;
        let n = id.n;
        let d = self.degree(n)?;
        let (g, geo) = (&d.group, &d.geometry);
        let types = ambiguous_line_types(g, geo)?;
        if id.is_special() {
            let case = self.catalog.case(id)?;
            sink.push("lambda", case.lambda.as_ref().map(rational_string).unwrap_or_default());
            for t in &types {
                let orbit = geo.orbit(*t).expect("ambiguous types come from the geometry");
                let nodes = nodes_on_line(g, &case, orbit)?;
                self.mark("nodes_on_line");
                if nodes == 0 {
                    continue;
                }
                sink.push(format!("nodes_on_line:{t}"), nodes);
                let sheet = ramification_sheet(g, geo, &self.catalog, *t)?;
                if let Some(c) = sheet.per_case.iter().find(|c| c.case == id) {
                    sink.push(format!("swallowed:{t}"), c.orbits);
                }
            }
            return Ok(());
        }
        sink.push("ambiguous_lines", join(&types));
        for t in &types {
            let sheet = ramification_sheet(g, geo, &self.catalog, *t)?;
            self.mark("ramification_sheet");
            sink.push(format!("cover_degree:{t}"), sheet.cover_degree);
            sink.push(format!("total_ramification:{t}"), sheet.total_ramification);
            sink.push(format!("quadric_contribution:{t}"), sheet.quadric_contribution);
            sink.push(format!("off_quadric:{t}"), sheet.off_quadric);
            sink.push(format!("swallowed_orbits:{t}"), sheet.swallowed_orbits());
            sink.push(format!("balanced:{t}"), flag(sheet.is_balanced()));
        }
        let lambdas = self.catalog.lambdas(n)?;
        let cr = parameter_cross_ratio(&lambdas)?;
        self.mark("parameter_cross_ratio");
        sink.push("cross_ratio", rational_string(&cr));
        sink.push("j", j_invariant(&cr)?);
        self.mark("j_invariant");
        sink.push("j_256", j_invariant_256(&cr)?);
        if n == 8 {
            sink.push("orbit_cross_ratio:u=√2", orbit_cross_ratio(8, &CycNum::sqrt2())?);
        } else {
            sink.push("orbit_cross_ratio:u=1", orbit_cross_ratio(n, &CycNum::one())?);
        }
        let a = orbit_cross_ratio(n, &CycNum::from_i64(2))?;
        let b = orbit_cross_ratio(n, &CycNum::from_i64(3))?;
        self.mark("orbit_cross_ratio");
        sink.push("orbit_cross_ratio_varies", flag(a != b));
        Ok(())
    }
}

fn witness_in_dual(w: &GlueClass, l: &IntLattice) -> Result<bool, LatticeError> {
    dual_membership(&w.to_vector(l)?, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scopes_parse() {
        for s in ["groups", "fixlines", "singularities", "lattices", "pencil", "all"] {
            assert_eq!(s.parse::<Scope>().unwrap().to_string(), s);
        }
        assert!("everything".parse::<Scope>().is_err());
    }

    #[test]
    fn degree_six_report_is_deterministic() {
        let v = Verifier::new(Catalog::bundled().unwrap());
        let a = v.report(CaseId::generic(6)).unwrap();
        let b = v.report(CaseId::generic(6)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.entry("discriminant").unwrap().computed, "2·3²·5");
        assert!(a.passed(), "{}", a.to_text());
    }

    #[test]
    fn missing_expectation_fails() {
        let v = Verifier::new(Catalog::bundled().unwrap());
        let mut sink = Sink { verifier: &v, case: CaseId::generic(6), entries: Vec::new() };
        sink.push("no_such_quantity", 1);
        assert!(!sink.entries[0].pass);
        assert_eq!(sink.entries[0].expected, "<missing>");
    }
}
