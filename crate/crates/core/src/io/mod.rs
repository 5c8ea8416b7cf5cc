//! Workspace files, job execution and reports.

pub mod jobs;

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::coefficients::{dual_module, linf_module, sigma_module, trivial_module, NormedModule};
use crate::cohomology::family_pair;
use crate::exact::{PolyhedralNorm, RationalMatrix, Q};
use crate::groupoid::{FiniteGroupoid, GroupTable, GroupoidPair};

pub use jobs::{run_job, run_workspace, JobKind, JobReport, Report, Status};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("axiom violation at {location}: {message}")]
    Axiom { location: String, message: String },
}

fn schema(location: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema {
        location: location.into(),
        message: message.into(),
    }
}

fn axiom(location: impl Into<String>, e: impl std::fmt::Display) -> IoError {
    IoError::Axiom {
        location: location.into(),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub group_table: Vec<Vec<usize>>,
    /// `points[g][x] = g·x`
    pub points: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupSpec {
    pub group_table: Vec<Vec<usize>>,
    pub objects: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidSpec {
    pub objects: Option<usize>,
    pub source: Option<Vec<usize>>,
    pub target: Option<Vec<usize>>,
    /// `compose[g][h]` is `g∘h`, `null` when not composable
    pub compose: Option<Vec<Vec<Option<usize>>>>,
    pub identity: Option<Vec<usize>>,
    pub inverse: Option<Vec<Option<usize>>>,
    /// disjoint union of the listed groupoids, in order
    pub union: Option<Vec<Value>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    #[serde(rename = "type")]
    pub kind: String,
    pub dim: usize,
    #[serde(default)]
    pub rows: Vec<Vec<Q>>,
    #[serde(default)]
    pub points: Vec<Vec<Q>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    #[serde(default = "trivial_kind")]
    pub kind: String,
    #[serde(default)]
    pub dual: bool,
    pub norms: Option<Vec<NormSpec>>,
    /// one matrix per morphism, rows of rationals
    pub action: Option<Vec<Vec<Vec<Q>>>>,
}

fn trivial_kind() -> String {
    "trivial".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub name: String,
    #[serde(default)]
    pub full: bool,
    #[serde(default)]
    pub empty: bool,
    pub objects: Option<Vec<usize>>,
    pub morphisms: Option<Vec<usize>>,
    /// subgroups of the workspace group, embedded at the vertices of a blow-up
    pub family: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Deserialize, serde::Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub job: String,
    pub pair: Option<String>,
    pub degree: Option<usize>,
}

/// A subgroupoid inclusion with the coefficients over its ambient groupoid.
#[derive(Debug, Clone)]
pub struct NamedPair {
    pub name: String,
    pub pair: GroupoidPair,
    pub module: Arc<NormedModule>,
}

#[derive(Debug, Clone)]
pub struct Workspace {
    pub name: String,
    pub groupoid: Arc<FiniteGroupoid>,
    pub module: Arc<NormedModule>,
    /// present when the groupoid was given as a group table
    pub group: Option<GroupTable>,
    pub pairs: Vec<NamedPair>,
    pub jobs: Vec<JobSpec>,
}

const SOURCE_KEYS: [&str; 4] = ["groupoid", "group_table", "action", "blowup"];
const TOP_KEYS: [&str; 8] = ["name", "groupoid", "group_table", "action", "blowup", "module", "pairs", "jobs"];

pub fn load_workspace(path: &Path) -> Result<Workspace, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let default_name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_workspace(&text, &default_name)
}

pub fn parse_workspace(text: &str, default_name: &str) -> Result<Workspace, IoError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = doc.as_object().ok_or_else(|| schema("$", "top level must be an object"))?;
    if let Some(k) = obj.keys().find(|k| !TOP_KEYS.contains(&k.as_str())) {
        return Err(schema(format!("$.{k}"), "unknown key"));
    }
    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(schema("$.name", "expected a string")),
        None => default_name.to_string(),
    };
    let (groupoid, group) = build_source(&doc, "$")?;
    let groupoid = Arc::new(groupoid);
    let module_spec: Option<ModuleSpec> = field(obj.get("module"), "$.module")?;
    let module = build_module(&groupoid, module_spec.as_ref(), "$.module")?;
    let pair_specs: Vec<PairSpec> = field(obj.get("pairs"), "$.pairs")?.unwrap_or_default();
    let mut pairs = Vec::new();
    for (i, p) in pair_specs.iter().enumerate() {
        let loc = format!("$.pairs[{i}]");
        if pairs.iter().any(|q: &NamedPair| q.name == p.name) {
            return Err(schema(loc, format!("duplicate pair name {:?}", p.name)));
        }
        pairs.push(build_pair(&groupoid, &module, group.as_ref(), p, &loc)?);
    }
    let jobs: Vec<JobSpec> = field(obj.get("jobs"), "$.jobs")?.unwrap_or_default();
    for (i, j) in jobs.iter().enumerate() {
        let loc = format!("$.jobs[{i}]");
        let kind: JobKind = j.job.parse().map_err(|e: String| schema(format!("{loc}.job"), e))?;
        match &j.pair {
            Some(p) if !pairs.iter().any(|q| &q.name == p) => {
                return Err(schema(format!("{loc}.pair"), format!("no pair named {p:?}")));
            }
            Some(_) if !kind.uses_pair() => {
                return Err(schema(format!("{loc}.pair"), format!("job {} does not take a pair", j.job)));
            }
            _ => {}
        }
    }
    Ok(Workspace {
        name,
        groupoid,
        module,
        group,
        pairs,
        jobs,
    })
}

fn field<T: for<'de> Deserialize<'de>>(v: Option<&Value>, loc: &str) -> Result<Option<T>, IoError> {
    match v {
        None => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| schema(loc, e.to_string())),
    }
}

fn table(rows: Vec<Vec<usize>>, loc: &str) -> Result<GroupTable, IoError> {
    GroupTable::new(rows).map_err(|e| axiom(loc, e))
}

/// Reads exactly one of the groupoid source keys of `v`.
fn build_source(v: &Value, loc: &str) -> Result<(FiniteGroupoid, Option<GroupTable>), IoError> {
    let obj = v.as_object().ok_or_else(|| schema(loc, "expected an object"))?;
    let present: Vec<&str> = SOURCE_KEYS.iter().copied().filter(|k| obj.contains_key(*k)).collect();
    if present.len() != 1 {
        return Err(schema(
            loc,
            format!("exactly one of {} is required, found {}", SOURCE_KEYS.join(", "), present.len()),
        ));
    }
    let key = present[0];
    let here = format!("{loc}.{key}");
    match key {
        "group_table" => {
            let rows: Vec<Vec<usize>> = field(obj.get(key), &here)?.unwrap_or_default();
            let t = table(rows, &here)?;
            Ok((FiniteGroupoid::from_group(&t), Some(t)))
        }
        "action" => {
            let a: ActionSpec = field(obj.get(key), &here)?.unwrap();
            let t = table(a.group_table, &format!("{here}.group_table"))?;
            let g = FiniteGroupoid::action_groupoid(&t, &a.points).map_err(|e| axiom(format!("{here}.points"), e))?;
            Ok((g, None))
        }
        "blowup" => {
            let b: BlowupSpec = field(obj.get(key), &here)?.unwrap();
            let t = table(b.group_table, &format!("{here}.group_table"))?;
            let g = FiniteGroupoid::blow_up(&t, b.objects).map_err(|e| axiom(format!("{here}.objects"), e))?;
            Ok((g, None))
        }
        _ => {
            let s: GroupoidSpec = field(obj.get(key), &here)?.unwrap();
            if let Some(parts) = &s.union {
                let mut built = Vec::new();
                for (i, p) in parts.iter().enumerate() {
                    built.push(build_source(p, &format!("{here}.union[{i}]"))?.0);
                }
                let refs: Vec<&FiniteGroupoid> = built.iter().collect();
                return Ok((FiniteGroupoid::disjoint_union(&refs), None));
            }
            let missing = |k: &str| schema(&here, format!("missing key {k:?}"));
            let objects = s.objects.ok_or_else(|| missing("objects"))?;
            let source = s.source.ok_or_else(|| missing("source"))?;
            let target = s.target.ok_or_else(|| missing("target"))?;
            let compose = s.compose.ok_or_else(|| missing("compose"))?;
            let identity = s.identity.ok_or_else(|| missing("identity"))?;
            let inverse = s
                .inverse
                .ok_or_else(|| missing("inverse"))?
                .into_iter()
                .map(|x| x.unwrap_or(usize::MAX))
                .collect();
            let g = FiniteGroupoid::from_parts(objects, source, target, compose, identity, inverse)
                .map_err(|e| axiom(&here, e))?;
            Ok((g, None))
        }
    }
}

fn build_norm(n: &NormSpec, loc: &str) -> Result<PolyhedralNorm, IoError> {
    let r = match n.kind.as_str() {
        "l1" => Ok(PolyhedralNorm::l1(n.dim)),
        "linf" => Ok(PolyhedralNorm::linf(n.dim)),
        "facets" => PolyhedralNorm::from_h_rep(n.dim, n.rows.clone()),
        "vertices" => PolyhedralNorm::from_v_rep(n.dim, n.points.clone()),
        other => return Err(schema(format!("{loc}.type"), format!("unknown norm type {other:?}"))),
    };
    r.map_err(|e| axiom(loc, e))
}

fn build_module(
    g: &Arc<FiniteGroupoid>,
    spec: Option<&ModuleSpec>,
    loc: &str,
) -> Result<Arc<NormedModule>, IoError> {
    let Some(spec) = spec else {
        return Ok(Arc::new(trivial_module(g)));
    };
    let triv = Arc::new(trivial_module(g));
    let base = match spec.kind.as_str() {
        "trivial" => triv,
        "linf" => linf_module(&triv).map_err(|e| axiom(loc, e))?.0,
        "sigma" => Arc::new(sigma_module(g).map_err(|e| axiom(loc, e))?.module),
        "explicit" => {
            let norms = spec
                .norms
                .as_ref()
                .ok_or_else(|| schema(loc, "explicit module needs \"norms\""))?;
            let action = spec
                .action
                .as_ref()
                .ok_or_else(|| schema(loc, "explicit module needs \"action\""))?;
            let norms = norms
                .iter()
                .enumerate()
                .map(|(i, n)| build_norm(n, &format!("{loc}.norms[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let mut mats = Vec::new();
            for (a, rows) in action.iter().enumerate() {
                let cols = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|r| r.len() != cols) {
                    return Err(schema(format!("{loc}.action[{a}]"), "ragged matrix"));
                }
                let cols = if rows.is_empty() && a < g.num_morphisms() {
                    norms.get(g.source(a)).map_or(0, PolyhedralNorm::dim)
                } else {
                    cols
                };
                mats.push(RationalMatrix::from_rows(rows.clone(), cols));
            }
            Arc::new(NormedModule::new(g.clone(), norms, mats).map_err(|e| axiom(loc, e))?)
        }
        other => return Err(schema(format!("{loc}.kind"), format!("unknown module kind {other:?}"))),
    };
    if spec.dual {
        Ok(Arc::new(dual_module(&base).map_err(|e| axiom(loc, e))?))
    } else {
        Ok(base)
    }
}

fn build_pair(
    g: &Arc<FiniteGroupoid>,
    module: &Arc<NormedModule>,
    group: Option<&GroupTable>,
    p: &PairSpec,
    loc: &str,
) -> Result<NamedPair, IoError> {
    let kinds = [p.full, p.empty, p.objects.is_some() || p.morphisms.is_some(), p.family.is_some()];
    if kinds.iter().filter(|&&b| b).count() != 1 {
        return Err(schema(
            loc,
            "exactly one of \"full\", \"empty\", \"objects\"/\"morphisms\", \"family\" is required",
        ));
    }
    let named = |pair, module| NamedPair {
        name: p.name.clone(),
        pair,
        module,
    };
    if p.full {
        return Ok(named(GroupoidPair::full(g), module.clone()));
    }
    if p.empty {
        return Ok(named(GroupoidPair::empty_sub(g), module.clone()));
    }
    if let Some(family) = &p.family {
        let t = group.ok_or_else(|| schema(loc, "a family pair needs a group_table workspace"))?;
        let f = family_pair(t, family, Some(module)).map_err(|e| axiom(format!("{loc}.family"), e))?;
        return Ok(named(f.pair, f.module));
    }
    let objects = p.objects.clone().unwrap_or_default();
    let morphisms = p.morphisms.clone().unwrap_or_default();
    let pair = GroupoidPair::from_subgroupoid(g, &objects, &morphisms).map_err(|e| axiom(loc, e))?;
    Ok(named(pair, module.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_table() {
        let ws = parse_workspace(r#"{"group_table": [[0,1],[1,0]]}"#, "z2").unwrap();
        assert_eq!(ws.groupoid.num_objects(), 1);
        assert_eq!(ws.groupoid.num_morphisms(), 2);
        assert_eq!(ws.name, "z2");
        assert!(ws.group.is_some());
    }

    #[test]
    fn distinct_errors() {
        assert!(matches!(parse_workspace("{", "x"), Err(IoError::Parse { .. })));
        assert!(matches!(
            parse_workspace(r#"{"group_table": [[0]], "bogus": 1}"#, "x"),
            Err(IoError::Schema { .. })
        ));
        let e = parse_workspace(r#"{"group_table": [[0,1,2],[1,1,0],[2,0,1]]}"#, "x").unwrap_err();
        match e {
            IoError::Axiom { location, message } => {
                assert_eq!(location, "$.group_table");
                assert!(message.contains("associativity"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let missing_inverse = r#"{"groupoid": {"objects": 1, "source": [0,0], "target": [0,0],
            "compose": [[0,1],[1,1]], "identity": [0], "inverse": [0, null]}}"#;
        let e = parse_workspace(missing_inverse, "x").unwrap_err();
        assert!(matches!(&e, IoError::Axiom { message, .. } if message.contains("inverse")), "{e}");
    }

    #[test]
    fn pairs_and_modules() {
        let text = r#"{
            "group_table": [[0,1],[1,0]],
            "module": {"kind": "linf", "dual": true},
            "pairs": [{"name": "two", "family": [[0],[0]]}, {"name": "all", "full": true}],
            "jobs": [{"job": "relative", "pair": "two"}]
        }"#;
        let ws = parse_workspace(text, "x").unwrap();
        assert_eq!(ws.module.dim(0), 2);
        assert_eq!(ws.pairs[0].pair.ambient.num_objects(), 2);
        let bad = r#"{"group_table": [[0,1],[1,0]], "jobs": [{"job": "relative", "pair": "nope"}]}"#;
        assert!(matches!(parse_workspace(bad, "x"), Err(IoError::Schema { .. })));
        let explicit = r#"{"group_table": [[0,1],[1,0]], "module": {"kind": "explicit",
            "norms": [{"type": "l1", "dim": 1}], "action": [[["1"]], [["-1"]]]}}"#;
        let ws = parse_workspace(explicit, "x").unwrap();
        assert_eq!(ws.module.action(1).get(0, 0), &Q::from_int(-1));
        let not_action = r#"{"group_table": [[0,1],[1,0]], "module": {"kind": "explicit",
            "norms": [{"type": "l1", "dim": 1}], "action": [[["1"]], [["2"]]]}}"#;
        assert!(matches!(parse_workspace(not_action, "x"), Err(IoError::Axiom { .. })));
    }
}
