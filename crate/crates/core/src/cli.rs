//! Instance files, suite dispatch and report output for the `aqg` binary.
//!
//! Finite instance files list structure constants as rows of basis indices
//! followed by a coefficient. A coefficient is one rational string (real),
//! two rational strings `[re, im]`, or four integers
//! `[re_num, re_den, im_num, im_den]`.
//!
//! ```json
//! { "kind": "finite", "name": "c_z2", "dim": 2, "basis": ["e", "g"],
//!   "mult": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"], [1, 1, 0, "1"]],
//!   "star": [[0, 0, "1"], [1, 1, "1"]],
//!   "unit": ["1", "0"],
//!   "comult": [[0, 0, 0, "1"], [1, 1, 1, "1"]] }
//! ```
//!
//! `mult` rows `[i, j, k, c]` mean `e_i e_j ∋ c e_k`, `star` rows `[i, k, c]`
//! mean `e_i* ∋ c e_k`, `comult` rows `[i, j, k, c]` mean `Δ(e_i) ∋ c e_j⊗e_k`.
//! An SU_q(2) file is `{ "kind": "suq2", "q": "1/2", "degree_cap": 6 }` with
//! an optional `"faults": { "haar_cc_shift": "1/1000", "f_sign": "positive" }`.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use serde_json::Value;
use thiserror::Error;

use crate::duality::{f_link_check, finite_duality_report, suq2_duality_report};
use crate::finqg::{
    antipode_report, gns_build, gns_report, identity_report, modular_report as finite_modular,
    oneparam_report as finite_oneparam, solve_antipode, solve_counit, strong_invariance_report,
    validate_structure, AlgebraSpec, Element, FiniteQG,
};
use crate::oneparam::default_z_grid;
use crate::report::{Entry, Report};
use crate::scalars::{format_rational, parse_rational, Cx, Rational, ToleranceCfg, QI};
use crate::suq2::{
    haar_invariance_residual, hopf_report, identity_suite, modular_report as suq2_modular,
    oneparam_report as suq2_oneparam, FSign, Suq2, Suq2Faults,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}: line {line}, column {column}: {msg}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{path}: field {field}: {msg}")]
    Field {
        path: String,
        field: String,
        msg: String,
    },
    #[error("{path}: invalid instance: {msg}")]
    Validation { path: String, msg: String },
    #[error("configuration: {0}")]
    Config(String),
}

impl CliError {
    /// Every error the CLI reports is a parse or configuration error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Algebra axioms whose failure makes a file unusable. Coalgebra failures
/// are left to the suites, which report them with exit code 1.
const ALGEBRA_AXIOMS: [&str; 4] = [
    "associativity",
    "unit",
    "star_involutive",
    "star_antimultiplicative",
];

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum InstanceFile {
    Finite(FiniteFile),
    Suq2(Suq2File),
}

#[derive(Deserialize)]
struct FiniteFile {
    name: Option<String>,
    dim: usize,
    basis: Option<Vec<String>>,
    mult: Vec<Vec<Value>>,
    star: Vec<Vec<Value>>,
    unit: Vec<Value>,
    comult: Vec<Vec<Value>>,
}

#[derive(Deserialize)]
struct Suq2File {
    name: Option<String>,
    q: String,
    degree_cap: usize,
    #[serde(default)]
    faults: Option<FaultFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FaultFile {
    haar_cc_shift: Option<String>,
    f_sign: Option<String>,
}

/// A loaded, validated instance.
#[allow(clippy::large_enum_variant)]
pub enum Instance {
    Finite {
        name: String,
        spec: AlgebraSpec,
        /// Output of `validate_structure`, reused by the hopf suite.
        structure: Report,
    },
    Suq2 {
        name: String,
        engine: Suq2,
    },
}

impl Instance {
    pub fn name(&self) -> &str {
        match self {
            Instance::Finite { name, .. } | Instance::Suq2 { name, .. } => name,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Instance::Finite { spec, .. } => Some(spec.dim),
            Instance::Suq2 { .. } => None,
        }
    }
}

struct Ctx<'a> {
    path: &'a str,
}

impl Ctx<'_> {
    fn field(&self, field: impl Into<String>, msg: impl Into<String>) -> CliError {
        CliError::Field {
            path: self.path.into(),
            field: field.into(),
            msg: msg.into(),
        }
    }

    fn rational(&self, field: &str, v: &Value) -> Result<Rational> {
        match v {
            Value::String(s) => {
                parse_rational(s).map_err(|_| self.field(field, format!("{s:?} is not a rational")))
            }
            _ => Err(self.field(field, "rationals are written as strings \"num/den\"")),
        }
    }

    fn index(&self, field: &str, v: &Value, dim: usize) -> Result<usize> {
        let i = v
            .as_u64()
            .ok_or_else(|| self.field(field, format!("{v} is not a basis index")))?;
        if i as usize >= dim {
            return Err(self.field(field, format!("basis index {i} out of range for dim {dim}")));
        }
        Ok(i as usize)
    }

    fn int(&self, field: &str, v: &Value) -> Result<i64> {
        v.as_i64()
            .ok_or_else(|| self.field(field, format!("{v} is not an integer")))
    }

    fn coefficient(&self, field: &str, parts: &[Value]) -> Result<QI> {
        match parts {
            [re] => Ok(QI::real(self.rational(field, re)?)),
            [re, im] => Ok(QI::new(
                self.rational(field, re)?,
                self.rational(field, im)?,
            )),
            [rn, rd, inum, id] => {
                let frac = |n: &Value, d: &Value| -> Result<Rational> {
                    let (n, d) = (self.int(field, n)?, self.int(field, d)?);
                    if d == 0 {
                        return Err(self.field(field, "zero denominator"));
                    }
                    Ok(Rational::new(n.into(), d.into()))
                };
                Ok(QI::new(frac(rn, rd)?, frac(inum, id)?))
            }
            _ => Err(self.field(
                field,
                "coefficient must be \"re\", [\"re\", \"im\"] or re_num, re_den, im_num, im_den",
            )),
        }
    }

    /// Splits a row into `k` basis indices and a coefficient.
    fn row(&self, field: &str, row: &[Value], k: usize, dim: usize) -> Result<(Vec<usize>, QI)> {
        if row.len() <= k {
            return Err(self.field(field, format!("row has {} entries", row.len())));
        }
        let idx = row[..k]
            .iter()
            .map(|v| self.index(field, v, dim))
            .collect::<Result<Vec<_>>>()?;
        Ok((idx, self.coefficient(field, &row[k..])?))
    }
}

fn finite_spec(ctx: &Ctx, f: FiniteFile, fallback: String) -> Result<AlgebraSpec> {
    let n = f.dim;
    if n == 0 {
        return Err(ctx.field("dim", "dimension must be positive"));
    }
    let basis_labels = match f.basis {
        Some(b) if b.len() == n => b,
        Some(b) => {
            return Err(ctx.field("basis", format!("{} labels for dim {n}", b.len())));
        }
        None => (0..n).map(|i| format!("e{i}")).collect(),
    };
    let mut mult = vec![vec![Element::zero(); n]; n];
    for (r, row) in f.mult.iter().enumerate() {
        let (ix, c) = ctx.row(&format!("mult[{r}]"), row, 3, n)?;
        mult[ix[0]][ix[1]].add_term(ix[2], c);
    }
    let mut star = vec![Element::zero(); n];
    for (r, row) in f.star.iter().enumerate() {
        let (ix, c) = ctx.row(&format!("star[{r}]"), row, 2, n)?;
        star[ix[0]].add_term(ix[1], c);
    }
    if f.unit.len() != n {
        return Err(ctx.field("unit", format!("{} coefficients for dim {n}", f.unit.len())));
    }
    let mut unit = Element::zero();
    for (k, v) in f.unit.iter().enumerate() {
        let field = format!("unit[{k}]");
        let c = match v {
            Value::Array(parts) => ctx.coefficient(&field, parts)?,
            other => ctx.coefficient(&field, std::slice::from_ref(other))?,
        };
        unit.add_term(k, c);
    }
    let mut comult = vec![Vec::new(); n];
    for (r, row) in f.comult.iter().enumerate() {
        let (ix, c) = ctx.row(&format!("comult[{r}]"), row, 3, n)?;
        comult[ix[0]].push((ix[1], ix[2], c));
    }
    Ok(AlgebraSpec {
        name: f.name.unwrap_or(fallback),
        dim: n,
        basis_labels,
        mult,
        star,
        unit,
        comult,
    })
}

fn suq2_engine(ctx: &Ctx, f: &Suq2File, q: Option<&Rational>) -> Result<Suq2> {
    let q = match q {
        Some(q) => q.clone(),
        None => parse_rational(&f.q)
            .map_err(|_| ctx.field("q", format!("{:?} is not a rational", f.q)))?,
    };
    let mut faults = Suq2Faults::default();
    if let Some(ff) = &f.faults {
        if let Some(s) = &ff.haar_cc_shift {
            faults.haar_cc_shift = Some(parse_rational(s).map_err(|_| {
                ctx.field("faults.haar_cc_shift", format!("{s:?} is not a rational"))
            })?);
        }
        if let Some(s) = &ff.f_sign {
            faults.f_sign =
                Some(FSign::from_str(s).map_err(|e| ctx.field("faults.f_sign", e.to_string()))?);
        }
    }
    Suq2::with_faults(q, f.degree_cap, faults).map_err(|e| CliError::Validation {
        path: ctx.path.into(),
        msg: e.to_string(),
    })
}

/// Parses an instance document. `q` overrides the file's value for SU_q(2).
pub fn parse_instance(text: &str, path: &str, q: Option<&Rational>) -> Result<Instance> {
    let ctx = Ctx { path };
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| CliError::Syntax {
        path: path.into(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let stem = Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into());
    match file {
        InstanceFile::Finite(f) => {
            if q.is_some() {
                return Err(CliError::Config(
                    "--q applies to SU_q(2) instances only".into(),
                ));
            }
            let spec = finite_spec(&ctx, f, stem)?;
            let structure = validate_structure(&spec).map_err(|e| CliError::Validation {
                path: path.into(),
                msg: e.to_string(),
            })?;
            for id in ALGEBRA_AXIOMS {
                if let Some(e) = structure.get(id).filter(|e| !e.pass) {
                    let at = e
                        .witness
                        .as_deref()
                        .map(|w| format!(" at basis {w}"))
                        .unwrap_or_default();
                    return Err(CliError::Validation {
                        path: path.into(),
                        msg: format!("{id} fails ({}){at}, residual {:e}", e.anchor, e.residual),
                    });
                }
            }
            Ok(Instance::Finite {
                name: spec.name.clone(),
                spec,
                structure,
            })
        }
        InstanceFile::Suq2(f) => {
            let engine = suq2_engine(&ctx, &f, q)?;
            Ok(Instance::Suq2 {
                name: f.name.clone().unwrap_or(stem),
                engine,
            })
        }
    }
}

pub fn load_instance(path: &Path, q: Option<&Rational>) -> Result<Instance> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: p.clone(),
        msg: e.to_string(),
    })?;
    parse_instance(&text, &p, q)
}

/// Serialises a finite spec in the instance file format.
pub fn instance_json(spec: &AlgebraSpec) -> String {
    let c = |x: &QI| -> String {
        if num_traits::Zero::is_zero(&x.im) {
            format!("\"{}\"", format_rational(&x.re))
        } else {
            format!(
                "\"{}\", \"{}\"",
                format_rational(&x.re),
                format_rational(&x.im)
            )
        }
    };
    let rows = |rs: Vec<String>| format!("[\n    {}\n  ]", rs.join(",\n    "));
    let n = spec.dim;
    let mut mult = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for (k, v) in spec.mult[i][j].iter() {
                mult.push(format!("[{i}, {j}, {k}, {}]", c(v)));
            }
        }
    }
    let star = (0..n)
        .flat_map(|i| {
            spec.star[i]
                .iter()
                .map(move |(k, v)| format!("[{i}, {k}, {}]", c(v)))
        })
        .collect();
    let unit: Vec<String> = spec
        .unit
        .to_dense(n)
        .iter()
        .map(|v| {
            if num_traits::Zero::is_zero(&v.im) {
                c(v)
            } else {
                format!("[{}]", c(v))
            }
        })
        .collect();
    let comult = (0..n)
        .flat_map(|i| {
            spec.comult[i]
                .iter()
                .map(move |(j, k, v)| format!("[{i}, {j}, {k}, {}]", c(v)))
        })
        .collect();
    let basis: Vec<String> = spec.basis_labels.iter().map(|b| format!("{b:?}")).collect();
    let mut s = String::new();
    let _ = write!(
        s,
        "{{\n  \"kind\": \"finite\",\n  \"name\": {:?},\n  \"dim\": {n},\n  \"basis\": [{}],\n  \"mult\": {},\n  \"star\": {},\n  \"unit\": [{}],\n  \"comult\": {}\n}}\n",
        spec.name,
        basis.join(", "),
        rows(mult),
        rows(star),
        unit.join(", "),
        rows(comult),
    );
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Hopf,
    Haar,
    Modular,
    Oneparam,
    Identities,
    Duality,
    All,
}

impl Suite {
    const EACH: [Suite; 6] = [
        Suite::Hopf,
        Suite::Haar,
        Suite::Modular,
        Suite::Oneparam,
        Suite::Identities,
        Suite::Duality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hopf => "hopf",
            Suite::Haar => "haar",
            Suite::Modular => "modular",
            Suite::Oneparam => "oneparam",
            Suite::Identities => "identities",
            Suite::Duality => "duality",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| CliError::Config(format!("unknown suite {s:?}")))
    }
}

/// Parses `default` or a comma list such as `0,1,-1,i,-0.5i,0.5+0.25i`.
pub fn parse_z_grid(s: &str) -> Result<Vec<Cx>> {
    if s.trim() == "default" {
        return Ok(default_z_grid());
    }
    let grid = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            Cx::from_str(t)
                .ok()
                .filter(|z| z.re.is_finite() && z.im.is_finite())
                .ok_or_else(|| CliError::Config(format!("{t:?} is not a complex number")))
        })
        .collect::<Result<Vec<_>>>()?;
    if grid.is_empty() {
        return Err(CliError::Config("empty z-grid".into()));
    }
    Ok(grid)
}

/// Flags shared by every suite.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub degree: usize,
    pub z_grid: Vec<Cx>,
    pub tol: ToleranceCfg,
}

impl RunConfig {
    pub fn new(degree: usize, z_grid: Vec<Cx>, tolerance: Option<f64>) -> Result<Self> {
        let tol = match tolerance {
            None => ToleranceCfg::default(),
            Some(t) if t.is_finite() && t > 0.0 => ToleranceCfg::with_abs_tol(t),
            Some(t) => return Err(CliError::Config(format!("tolerance {t} must be positive"))),
        };
        Ok(RunConfig {
            degree,
            z_grid,
            tol,
        })
    }
}

fn failed(suite: &str, err: impl std::fmt::Display) -> Entry {
    Entry::condition(
        format!("{suite}_runs"),
        format!("suite could not run: {err}"),
        false,
    )
}

fn finite_suite(spec: &AlgebraSpec, structure: &Report, suite: Suite, cfg: &RunConfig) -> Report {
    let mut r = Report::new(suite.name());
    let tol = &cfg.tol;
    let grid = &cfg.z_grid;
    if suite == Suite::Hopf {
        r.extend(structure.clone());
        let counit = match solve_counit(spec) {
            Ok(c) => c,
            Err(e) => {
                r.push(Entry::condition("counit_exists", e.to_string(), false));
                return r;
            }
        };
        r.push(Entry::condition(
            "counit_exists",
            "ε solves (ε⊗ι)Δ = (ι⊗ε)Δ = ι",
            true,
        ));
        let s = match solve_antipode(spec, &counit) {
            Ok(s) => s,
            Err(e) => {
                r.push(Entry::condition("antipode_exists", e.to_string(), false));
                return r;
            }
        };
        r.push(Entry::condition(
            "antipode_exists",
            "S solves m(S⊗ι)Δ = m(ι⊗S)Δ = ε1",
            true,
        ));
        r.extend(antipode_report(spec, &counit, &s));
        match FiniteQG::build(spec.clone(), tol) {
            Ok(qg) => {
                let h = strong_invariance_report(spec, &qg.antipode, &qg.haar, tol);
                if let Some(e) = h.get("strong_left_invariance") {
                    r.push(e.clone());
                }
            }
            Err(e) => r.push(failed("haar", e)),
        }
        return r;
    }
    let qg = match FiniteQG::build(spec.clone(), tol) {
        Ok(qg) => qg,
        Err(e) => {
            r.push(failed(suite.name(), e));
            return r;
        }
    };
    let out: std::result::Result<Report, String> = match suite {
        Suite::Haar => gns_build(spec, &qg.haar, &qg.modular, tol)
            .map(|gns| {
                let mut h = strong_invariance_report(spec, &qg.antipode, &qg.haar, tol);
                h.extend_prefixed("gns", gns_report(spec, &qg.haar, &gns, grid, tol));
                h
            })
            .map_err(|e| e.to_string()),
        Suite::Modular => Ok(finite_modular(
            spec,
            &qg.counit,
            &qg.antipode,
            qg.phi(),
            &qg.modular,
        )),
        Suite::Oneparam => finite_oneparam(&qg, grid, tol).map_err(|e| e.to_string()),
        Suite::Identities => identity_report(&qg, grid, tol).map_err(|e| e.to_string()),
        Suite::Duality => finite_duality_report(&qg, grid, tol).map_err(|e| e.to_string()),
        Suite::Hopf | Suite::All => unreachable!("dispatched above"),
    };
    match out {
        Ok(o) => {
            r.notes
                .extend(o.notes.into_iter().filter(|(k, _)| k != "instance"));
            r.entries.extend(o.entries);
        }
        Err(e) => r.push(failed(suite.name(), e)),
    }
    r
}

fn suq2_suite(e: &Suq2, suite: Suite, cfg: &RunConfig) -> Report {
    let (d, grid, tol) = (cfg.degree, &cfg.z_grid, &cfg.tol);
    let out = match suite {
        Suite::Hopf => hopf_report(e, d).map_err(|x| x.to_string()),
        Suite::Haar => haar_invariance_residual(e, d, tol).map_err(|x| x.to_string()),
        Suite::Modular => suq2_modular(e, d).map_err(|x| x.to_string()),
        Suite::Oneparam => suq2_oneparam(e, d, grid, tol).map_err(|x| x.to_string()),
        Suite::Identities => identity_suite(e, grid, d, tol).map_err(|x| x.to_string()),
        Suite::Duality => suq2_duality_report(e, d, grid, tol)
            .and_then(|mut r| {
                r.extend_prefixed("f_link", f_link_check(e, d, grid, tol)?);
                Ok(r)
            })
            .map_err(|x| x.to_string()),
        Suite::All => unreachable!("dispatched by run_suite"),
    };
    let mut r = Report::new(suite.name());
    match out {
        Ok(o) => {
            r.notes = o.notes;
            r.entries = o.entries;
        }
        Err(err) => r.push(failed(suite.name(), err)),
    }
    r
}

/// Runs one suite, or all of them with entries prefixed by suite name.
/// Entries come back in canonical (sorted) order.
pub fn run_suite(inst: &Instance, suite: Suite, cfg: &RunConfig) -> Result<Report> {
    if let Instance::Suq2 { engine, .. } = inst {
        if cfg.degree > engine.degree_cap() {
            return Err(CliError::Config(format!(
                "--degree {} exceeds the instance degree_cap {}",
                cfg.degree,
                engine.degree_cap()
            )));
        }
    }
    let one = |s: Suite| match inst {
        Instance::Finite {
            spec, structure, ..
        } => finite_suite(spec, structure, s, cfg),
        Instance::Suq2 { engine, .. } => suq2_suite(engine, s, cfg),
    };
    let r = if suite == Suite::All {
        let mut all = Report::new("all");
        for s in Suite::EACH {
            let sub = one(s);
            for (k, v) in sub.notes.iter() {
                all.note(format!("{}.{k}", s.name()), v.clone());
            }
            for mut e in sub.entries {
                e.id = format!("{}.{}", s.name(), e.id);
                all.push(e);
            }
        }
        all
    } else {
        one(suite)
    };
    Ok(r.sorted())
}

/// `{:.16e}`: 17 significant digits, round-trippable.
fn float_repr(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("\"{x}\"")
    }
}

fn raw(s: String) -> Box<RawValue> {
    RawValue::from_string(s).expect("formatted floats are valid JSON")
}

#[derive(Serialize)]
struct JsonEntry<'a> {
    id: &'a str,
    anchor: &'a str,
    residual: Box<RawValue>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonConfig {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    z_grid: Vec<[Box<RawValue>; 2]>,
    tolerance: Box<RawValue>,
    psd_floor: Box<RawValue>,
    notes: Vec<[String; 2]>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    suite: &'a str,
    instance: &'a str,
    config: JsonConfig,
    entries: Vec<JsonEntry<'a>>,
    pass: bool,
}

fn json_config(inst: &Instance, cfg: &RunConfig, r: &Report) -> JsonConfig {
    let (kind, q, degree) = match inst {
        Instance::Finite { .. } => ("finite", None, None),
        Instance::Suq2 { engine, .. } => {
            ("suq2", Some(format_rational(engine.q())), Some(cfg.degree))
        }
    };
    JsonConfig {
        kind,
        q,
        degree,
        dim: inst.dim(),
        z_grid: cfg
            .z_grid
            .iter()
            .map(|z| [raw(float_repr(z.re)), raw(float_repr(z.im))])
            .collect(),
        tolerance: raw(float_repr(cfg.tol.abs_tol)),
        psd_floor: raw(float_repr(cfg.tol.psd_floor)),
        notes: r
            .notes
            .iter()
            .map(|(k, v)| [k.clone(), v.clone()])
            .collect(),
    }
}

/// The machine report; byte-identical for identical inputs and flags.
pub fn render_json(inst: &Instance, cfg: &RunConfig, r: &Report) -> String {
    let doc = JsonReport {
        suite: &r.suite,
        instance: inst.name(),
        config: json_config(inst, cfg, r),
        entries: r
            .entries
            .iter()
            .map(|e| JsonEntry {
                id: &e.id,
                anchor: &e.anchor,
                residual: raw(float_repr(e.residual)),
                pass: e.pass,
                witness: e.witness.as_deref(),
            })
            .collect(),
        pass: r.pass(),
    };
    serde_json::to_string_pretty(&doc).expect("report serialises") + "\n"
}

pub fn render_text(inst: &Instance, cfg: &RunConfig, r: &Report) -> String {
    let mut s = format!("instance {}\n", inst.name());
    if let Instance::Suq2 { engine, .. } = inst {
        let _ = writeln!(
            s,
            "  q = {}, degree = {}",
            format_rational(engine.q()),
            cfg.degree
        );
    }
    let grid: Vec<String> = cfg.z_grid.iter().map(|z| format!("{z}")).collect();
    let _ = writeln!(
        s,
        "  z-grid = [{}], tolerance = {:e}",
        grid.join(", "),
        cfg.tol.abs_tol
    );
    s + &r.to_string()
}

/// Exit code for a finished suite: 0 if every entry passes, else 1.
pub fn exit_code(r: &Report) -> i32 {
    if r.pass() {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests;
