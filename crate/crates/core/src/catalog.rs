//! Curve configurations, glue classes and expected values for the fifteen
//! cases (three generic, twelve special), read from line-oriented data files.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::cyclofield::Rational;
use crate::fixgeom::{node_resolution_type, GroupId, LineType};
use crate::lattice::{
    check_divisible_class, extend_by_glue, gram_from_config, CurveConfig, DynkinType, IntLattice,
    LatticeError,
};

pub const DEGREES: [u32; 3] = [6, 8, 12];

/// Number of curves in a generic configuration.
pub const GENERIC_RANK: usize = 19;

/// Label of the curve over the node orbit of a special surface.
pub const NEW_CURVE: &str = "X";

const BUNDLED: [(&str, &str); 3] = [
    ("n6.cat", include_str!("../data/n6.cat")),
    ("n8.cat", include_str!("../data/n8.cat")),
    ("n12.cat", include_str!("../data/n12.cat")),
];
const BUNDLED_EXPECTED: &str = include_str!("../data/expected.tsv");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error("case {0} is missing from the catalog")]
    MissingRecord(CaseId),
    #[error("case {case}: {msg}")]
    Invalid { case: CaseId, msg: String },
    #[error("reading {path}: {msg}")]
    Io { path: String, msg: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `n` together with the special index, `None` for the generic surface.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CaseId {
    pub n: u32,
    pub index: Option<u8>,
}

impl CaseId {
    pub fn generic(n: u32) -> Self {
        CaseId { n, index: None }
    }

    pub fn special(n: u32, i: u8) -> Self {
        CaseId { n, index: Some(i) }
    }

    pub fn is_special(self) -> bool {
        self.index.is_some()
    }

    /// The four special cases of degree `n`.
    pub fn specials(n: u32) -> impl Iterator<Item = CaseId> {
        (1..=4).map(move |i| CaseId::special(n, i))
    }

    /// All fifteen cases, generic first within each degree.
    pub fn all() -> Vec<CaseId> {
        DEGREES
            .iter()
            .flat_map(|&n| std::iter::once(CaseId::generic(n)).chain(CaseId::specials(n)))
            .collect()
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            None => write!(f, "{},generic", self.n),
            Some(i) => write!(f, "{},{i}", self.n),
        }
    }
}

impl FromStr for CaseId {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CatalogError::UnknownCase(s.to_string());
        let (n, idx) = s.trim().split_once(',').ok_or_else(bad)?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        if !DEGREES.contains(&n) {
            return Err(bad());
        }
        match idx.trim() {
            "generic" => Ok(CaseId::generic(n)),
            i => match i.parse::<u8>() {
                Ok(i @ 1..=4) => Ok(CaseId::special(n, i)),
                _ => Err(bad()),
            },
        }
    }
}

/// A class `Σ cᵢ·Cᵢ / divisor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueClass {
    pub divisor: u32,
    pub terms: Vec<(String, i64)>,
}

impl GlueClass {
    /// Integer coefficients over the lattice basis.
    pub fn coefficients(&self, l: &IntLattice) -> Result<Vec<i64>, LatticeError> {
        let mut c = vec![0i64; l.rank()];
        for (label, k) in &self.terms {
            let i = l.index_of(label).ok_or_else(|| LatticeError::UnknownLabel(label.clone()))?;
            c[i] += k;
        }
        Ok(c)
    }

    pub fn to_vector(&self, l: &IntLattice) -> Result<Vec<Rational>, LatticeError> {
        let terms: Vec<(&str, i64)> = self.terms.iter().map(|(s, k)| (s.as_str(), *k)).collect();
        l.vector(&terms, self.divisor as i64)
    }

    /// Builds a class from basis coefficients, dropping zeros.
    pub fn from_coefficients(c: &[i64], divisor: u32, labels: &[String]) -> Self {
        let terms = c
            .iter()
            .zip(labels)
            .filter(|(k, _)| **k != 0)
            .map(|(k, l)| (l.clone(), *k))
            .collect();
        GlueClass { divisor, terms }
    }
}

impl fmt::Display for GlueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (i, (label, k)) in self.terms.iter().enumerate() {
            let sign = if *k < 0 { "−" } else if i > 0 { "+" } else { "" };
            let mag = if k.abs() == 1 { String::new() } else { k.abs().to_string() };
            s.push_str(&format!("{sign}{mag}{label}"));
        }
        write!(f, "({s})/{}", self.divisor)
    }
}

impl FromStr for GlueClass {
    type Err = String;
    /// `3 | L1:1 L2:-1 ...`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (d, rest) = s.split_once('|').ok_or("missing '|' after divisor")?;
        let divisor: u32 = d.trim().parse().map_err(|_| format!("bad divisor {:?}", d.trim()))?;
        if divisor < 2 {
            return Err(format!("divisor {divisor} is not at least 2"));
        }
        let terms = rest
            .split_whitespace()
            .map(|t| {
                let (l, k) = t.split_once(':').ok_or(format!("bad term {t:?}"))?;
                let k: i64 = k.parse().map_err(|_| format!("bad coefficient in {t:?}"))?;
                Ok((l.to_string(), k))
            })
            .collect::<Result<Vec<_>, String>>()?;
        if terms.is_empty() {
            return Err("empty class".into());
        }
        Ok(GlueClass { divisor, terms })
    }
}

#[derive(Clone, Debug)]
struct CaseRecord {
    config: CurveConfig,
    glue: Vec<GlueClass>,
    meta: BTreeMap<String, Vec<String>>,
}

impl CaseRecord {
    fn meta_one(&self, id: CaseId, key: &str) -> Result<&str, CatalogError> {
        match self.meta.get(key).map(Vec::as_slice) {
            Some([v]) => Ok(v),
            Some(_) => Err(invalid(id, format!("META key {key:?} given more than once"))),
            None => Err(invalid(id, format!("META key {key:?} missing"))),
        }
    }
}

fn invalid(case: CaseId, msg: impl Into<String>) -> CatalogError {
    CatalogError::Invalid { case, msg: msg.into() }
}

/// Metadata of one surface of the pencil.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilCase {
    pub id: CaseId,
    pub lambda: Option<Rational>,
    pub node_group: Option<GroupId>,
    /// Lines through one node, by type.
    pub node_lines: BTreeMap<LineType, usize>,
    pub swallowed: Vec<String>,
    pub component: Option<DynkinType>,
    pub expected_discriminant: BigInt,
    pub witnesses: Vec<GlueClass>,
}

impl PencilCase {
    pub fn n(&self) -> u32 {
        self.id.n
    }

    pub fn special_index(&self) -> Option<u8> {
        self.id.index
    }

    /// Lines through a node rendered as `3M + 4N′`.
    pub fn node_lines_display(&self) -> String {
        self.node_lines.iter().map(|(t, c)| format!("{c}{t}")).collect::<Vec<_>>().join(" + ")
    }
}

/// One expected value with a short description of where it is tabulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedEntry {
    pub value: String,
    pub reference: String,
}

/// Read-only map from `(case, quantity)` to the exact expected value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExpectedTable {
    entries: BTreeMap<(CaseId, String), ExpectedEntry>,
}

impl ExpectedTable {
    /// Tab-separated rows `case  quantity  value  reference`; `#` starts a comment.
    pub fn parse(file: &str, text: &str) -> Result<Self, CatalogError> {
        let mut entries = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |msg: String| CatalogError::Parse { file: file.into(), line: k + 1, msg };
            let cols: Vec<&str> = line.split('\t').collect();
            let [case, name, value, reference] = cols.as_slice() else {
                return Err(err(format!("expected 4 tab-separated columns, found {}", cols.len())));
            };
            let case: CaseId = case.parse().map_err(|e: CatalogError| err(e.to_string()))?;
            let entry = ExpectedEntry { value: value.to_string(), reference: reference.to_string() };
            if entries.insert((case, name.to_string()), entry).is_some() {
                return Err(err(format!("duplicate row for {case} {name}")));
            }
        }
        Ok(ExpectedTable { entries })
    }

    pub fn get(&self, case: CaseId, quantity: &str) -> Option<&ExpectedEntry> {
        self.entries.get(&(case, quantity.to_string()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &(CaseId, String)> {
        self.entries.keys()
    }
}

/// All case records and the expected-value table.
#[derive(Clone, Debug)]
pub struct Catalog {
    records: BTreeMap<CaseId, CaseRecord>,
    expected: ExpectedTable,
}

impl Catalog {
    /// The data files compiled into the library.
    pub fn bundled() -> Result<Self, CatalogError> {
        Catalog::parse(&BUNDLED, ("expected.tsv", BUNDLED_EXPECTED))
    }

    /// Reads `n6.cat`, `n8.cat`, `n12.cat` and `expected.tsv` from a directory.
    pub fn from_dir(dir: &Path) -> Result<Self, CatalogError> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path)
                .map_err(|e| CatalogError::Io { path: path.display().to_string(), msg: e.to_string() })
        };
        let texts: Vec<(String, String)> = BUNDLED
            .iter()
            .map(|(name, _)| Ok((name.to_string(), read(name)?)))
            .collect::<Result<_, CatalogError>>()?;
        let files: Vec<(&str, &str)> = texts.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let expected = read("expected.tsv")?;
        Catalog::parse(&files, ("expected.tsv", &expected))
    }

    pub fn parse(files: &[(&str, &str)], expected: (&str, &str)) -> Result<Self, CatalogError> {
        let mut records = BTreeMap::new();
        for (name, text) in files {
            for (id, rec) in parse_records(name, text)? {
                if records.insert(id, rec).is_some() {
                    return Err(invalid(id, "record defined twice"));
                }
            }
        }
        for id in CaseId::all() {
            if !records.contains_key(&id) {
                return Err(CatalogError::MissingRecord(id));
            }
        }
        let expected = ExpectedTable::parse(expected.0, expected.1)?;
        Ok(Catalog { records, expected })
    }

    pub fn expected(&self) -> &ExpectedTable {
        &self.expected
    }

    fn record(&self, id: CaseId) -> Result<&CaseRecord, CatalogError> {
        self.records.get(&id).ok_or(CatalogError::MissingRecord(id))
    }

    pub fn case(&self, id: CaseId) -> Result<PencilCase, CatalogError> {
        let rec = self.record(id)?;
        let n: u32 = rec.meta_one(id, "n")?.parse().map_err(|_| invalid(id, "bad n"))?;
        let index = rec.meta_one(id, "index")?;
        let index_ok = match id.index {
            None => index == "generic",
            Some(i) => index == i.to_string(),
        };
        if n != id.n || !index_ok {
            return Err(invalid(id, format!("META n = {n}, index = {index} disagree with the record header")));
        }
        let expected_discriminant: BigInt = rec
            .meta_one(id, "expected_discriminant")?
            .parse()
            .map_err(|_| invalid(id, "bad expected_discriminant"))?;
        let witnesses = rec
            .meta
            .get("witness")
            .into_iter()
            .flatten()
            .map(|w| w.parse::<GlueClass>().map_err(|e| invalid(id, format!("witness: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut case = PencilCase {
            id,
            lambda: None,
            node_group: None,
            node_lines: BTreeMap::new(),
            swallowed: Vec::new(),
            component: None,
            expected_discriminant,
            witnesses,
        };
        if id.is_special() {
            let lambda = rec.meta_one(id, "lambda")?;
            case.lambda = Some(lambda.parse().map_err(|_| invalid(id, format!("bad lambda {lambda:?}")))?);
            case.node_group = Some(rec.meta_one(id, "node_group")?.parse().map_err(|e: String| invalid(id, e))?);
            case.component =
                Some(rec.meta_one(id, "component")?.parse().map_err(|e: String| invalid(id, e))?);
            case.swallowed = rec.meta_one(id, "swallowed")?.split_whitespace().map(String::from).collect();
            for term in rec.meta_one(id, "node_lines")?.split_whitespace() {
                let split = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
                let count: usize = term[..split].parse().map_err(|_| invalid(id, format!("bad node line {term:?}")))?;
                let t: LineType = term[split..].parse().map_err(|e: String| invalid(id, e))?;
                *case.node_lines.entry(t).or_default() += count;
            }
        }
        Ok(case)
    }

    /// The four special parameters of degree `n` in index order.
    pub fn lambdas(&self, n: u32) -> Result<[Rational; 4], CatalogError> {
        let mut out = Vec::with_capacity(4);
        for id in CaseId::specials(n) {
            out.push(self.case(id)?.lambda.ok_or_else(|| invalid(id, "missing lambda"))?);
        }
        Ok(out.try_into().expect("four special cases"))
    }

    /// The 19-curve configuration of the generic surface.
    pub fn generic_config(&self, n: u32) -> Result<CurveConfig, CatalogError> {
        let id = CaseId::generic(n);
        let config = self.record(id)?.config.clone();
        if config.len() != GENERIC_RANK {
            return Err(invalid(id, format!("{} vertices, expected {GENERIC_RANK}", config.len())));
        }
        Ok(config)
    }

    /// The 20-curve configuration of a special surface, validated against
    /// the generic one and the node resolution type.
    pub fn special_config(&self, n: u32, i: u8) -> Result<CurveConfig, CatalogError> {
        let id = CaseId::special(n, i);
        let generic = self.generic_config(n)?;
        let case = self.case(id)?;
        let config = self.record(id)?.config.clone();
        if config.len() != GENERIC_RANK + 1 {
            return Err(invalid(id, format!("{} vertices, expected {}", config.len(), GENERIC_RANK + 1)));
        }
        let new: Vec<&String> = config.labels().iter().filter(|l| generic.index_of(l).is_none()).collect();
        if new.len() != 1 || new[0] != NEW_CURVE {
            return Err(invalid(id, format!("new vertices {new:?}, expected exactly {NEW_CURVE}")));
        }
        for s in &case.swallowed {
            if generic.index_of(s).is_none() {
                return Err(invalid(id, format!("swallowed curve {s} is not in the generic graph")));
            }
        }
        let swallowed: BTreeSet<&str> = case.swallowed.iter().map(String::as_str).collect();
        let keep = |l: &str| l != NEW_CURVE && !swallowed.contains(l);
        if config.restrict(keep) != generic.restrict(keep) {
            return Err(invalid(id, "graph differs from the generic one away from the swallowed curves"));
        }
        let comp = config.component_of(NEW_CURVE).expect("new curve is present");
        let comp_labels: BTreeSet<&str> = comp.iter().map(|&k| config.labels()[k].as_str()).collect();
        let expected_labels: BTreeSet<&str> = swallowed.iter().copied().chain([NEW_CURVE]).collect();
        if comp_labels != expected_labels {
            return Err(invalid(id, format!("component of {NEW_CURVE} is {comp_labels:?}")));
        }
        let found = config.classify_component(&comp);
        let from_node = case
            .node_group
            .map(node_resolution_type)
            .transpose()
            .map_err(|e| invalid(id, e.to_string()))?;
        if found.is_none() || found != case.component || found != from_node {
            return Err(invalid(
                id,
                format!("component type {found:?}, recorded {:?}, node group gives {from_node:?}", case.component),
            ));
        }
        Ok(config)
    }

    pub fn config(&self, id: CaseId) -> Result<CurveConfig, CatalogError> {
        match id.index {
            None => self.generic_config(id.n),
            Some(i) => self.special_config(id.n, i),
        }
    }

    /// Stored glue classes, each checked against the divisibility conditions.
    pub fn glue_classes(&self, id: CaseId) -> Result<Vec<GlueClass>, CatalogError> {
        let lattice = gram_from_config(&self.config(id)?);
        let glue = self.record(id)?.glue.clone();
        for g in &glue {
            let check = check_divisible_class(&g.coefficients(&lattice)?, g.divisor, &lattice);
            if !check.passes {
                return Err(invalid(id, format!("glue class {g} fails: {}", check.diagnostics.join("; "))));
            }
        }
        Ok(glue)
    }

    /// The curve lattice extended by the stored glue classes.
    pub fn lattice(&self, id: CaseId) -> Result<IntLattice, CatalogError> {
        let base = gram_from_config(&self.config(id)?);
        let vs = self
            .glue_classes(id)?
            .iter()
            .map(|g| g.to_vector(&base))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(extend_by_glue(&base, &vs)?)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Vertices,
    Edges,
    Glue,
    Meta,
}

fn parse_records(file: &str, text: &str) -> Result<Vec<(CaseId, CaseRecord)>, CatalogError> {
    struct Pending {
        id: CaseId,
        header_line: usize,
        vertices: Vec<String>,
        edges: Vec<(String, String)>,
        glue: Vec<GlueClass>,
        meta: BTreeMap<String, Vec<String>>,
    }
    let finish = |p: Pending| -> Result<(CaseId, CaseRecord), CatalogError> {
        let config = CurveConfig::new(&p.vertices, &p.edges).map_err(|e| CatalogError::Parse {
            file: file.into(),
            line: p.header_line,
            msg: format!("record {}: {e}", p.id),
        })?;
        Ok((p.id, CaseRecord { config, glue: p.glue, meta: p.meta }))
    };

    let mut out = Vec::new();
    let mut current: Option<Pending> = None;
    let mut section = Section::None;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CatalogError::Parse { file: file.into(), line: k + 1, msg };
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            if let Some(p) = current.take() {
                out.push(finish(p)?);
            }
            let id: CaseId = name.parse().map_err(|e: CatalogError| err(e.to_string()))?;
            current = Some(Pending {
                id,
                header_line: k + 1,
                vertices: Vec::new(),
                edges: Vec::new(),
                glue: Vec::new(),
                meta: BTreeMap::new(),
            });
            section = Section::None;
            continue;
        }
        let next = match line {
            "VERTICES" => Some(Section::Vertices),
            "EDGES" => Some(Section::Edges),
            "GLUE" => Some(Section::Glue),
            "META" => Some(Section::Meta),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let p = current.as_mut().ok_or_else(|| err("content before the first record header".into()))?;
        match section {
            Section::None => return Err(err(format!("{line:?} outside any section"))),
            Section::Vertices => {
                if line.split_whitespace().count() != 1 {
                    return Err(err(format!("one label per line expected, got {line:?}")));
                }
                p.vertices.push(line.to_string());
            }
            Section::Edges => {
                let ends: Vec<&str> = line.split_whitespace().collect();
                let [a, b] = ends.as_slice() else {
                    return Err(err(format!("edge needs two labels, got {line:?}")));
                };
                p.edges.push((a.to_string(), b.to_string()));
            }
            Section::Glue => p.glue.push(line.parse().map_err(err)?),
            Section::Meta => {
                let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
                p.meta.entry(key.trim().to_string()).or_default().push(value.trim().to_string());
            }
        }
    }
    if let Some(p) = current.take() {
        out.push(finish(p)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{block_determinants, exact_determinant, search_divisible_classes};
    use std::sync::OnceLock;

    fn catalog() -> &'static Catalog {
        static CAT: OnceLock<Catalog> = OnceLock::new();
        CAT.get_or_init(|| Catalog::bundled().expect("bundled catalog parses"))
    }

    #[test]
    fn case_ids_round_trip() {
        for id in CaseId::all() {
            assert_eq!(id.to_string().parse::<CaseId>().unwrap(), id);
        }
        assert_eq!(CaseId::all().len(), 15);
        for bad in ["7,1", "6,5", "6", "8,special", "12,0"] {
            assert!(bad.parse::<CaseId>().is_err(), "{bad}");
        }
    }

    #[test]
    fn generic_blocks() {
        let table = [
            (6, [('L', -45), ('M', -2), ('N', 81)].as_slice(), 7290),
            (8, [('L', -28), ('M', 16), ('N', 3), ('R', -4)].as_slice(), 5376),
            (12, [('L', -11), ('M', -8), ('N', 9), ('S', 5)].as_slice(), 3960),
        ];
        for (n, blocks, det) in table {
            let c = catalog().generic_config(n).unwrap();
            let got = block_determinants(&c);
            let want: BTreeMap<char, BigInt> = blocks.iter().map(|(k, v)| (*k, BigInt::from(*v))).collect();
            assert_eq!(got, want, "n = {n}");
            assert_eq!(exact_determinant(gram_from_config(&c).gram()), BigInt::from(det));
        }
    }

    #[test]
    fn special_configs_validate() {
        for n in DEGREES {
            for i in 1..=4 {
                let c = catalog().special_config(n, i).unwrap();
                assert_eq!(c.len(), 20);
            }
        }
    }

    #[test]
    fn generic_glue() {
        let l6 = catalog().lattice(CaseId::generic(6)).unwrap();
        assert_eq!(l6.index(), BigInt::from(9));
        assert_eq!(l6.discriminant().determinant, BigInt::from(90));
        let l8 = catalog().lattice(CaseId::generic(8)).unwrap();
        assert_eq!(l8.index(), BigInt::from(4));
        assert_eq!(l8.discriminant().determinant, BigInt::from(336));
        assert!(catalog().glue_classes(CaseId::generic(12)).unwrap().is_empty());
    }

    #[test]
    fn stored_special_glue_is_found_by_search() {
        for n in [6, 8] {
            let p = if n == 6 { 3 } else { 2 };
            for id in CaseId::specials(n) {
                let base = gram_from_config(&catalog().config(id).unwrap());
                let found = search_divisible_classes(&base, p);
                for g in catalog().glue_classes(id).unwrap() {
                    let c = g.coefficients(&base).unwrap();
                    let neg: Vec<i64> = c.iter().map(|x| -x).collect();
                    assert!(found.contains(&c) || found.contains(&neg), "{id}: {g}");
                }
            }
        }
    }

    #[test]
    fn lambdas_and_meta() {
        let l = catalog().lambdas(8).unwrap();
        assert_eq!(l[2], Rational::new(BigInt::from(-9), BigInt::from(16)));
        let c = catalog().case(CaseId::special(12, 4)).unwrap();
        assert_eq!(c.node_group, Some(GroupId::Icosahedral));
        assert_eq!(c.node_lines_display(), "15M + 10N + 6S");
        assert_eq!(c.component, Some(DynkinType::E(8)));
    }

    #[test]
    fn corrupted_glue_is_rejected() {
        let text = BUNDLED[0].1.replacen("3 | L1:1 L2:-1", "3 | L1:1 L2:1", 1);
        let cat = Catalog::parse(&[("n6.cat", &text), BUNDLED[1], BUNDLED[2]], ("expected.tsv", BUNDLED_EXPECTED))
            .unwrap();
        assert!(matches!(cat.glue_classes(CaseId::generic(6)), Err(CatalogError::Invalid { .. })));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "[6,generic]\nVERTICES\nL1 L2\n";
        match parse_records("t.cat", text) {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(Catalog::parse(&[("n6.cat", BUNDLED[0].1)], ("e", "")).is_err());
    }
}
