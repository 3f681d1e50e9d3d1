use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use gmkit::derivations::{
    commuting_derivations, derivation_space, is_derivation, verify_commuting_derivations_vanish,
    verify_derivation_form,
};
use gmkit::families::{self, InflatedSpec};
use gmkit::maps::{
    check_properness_hypotheses, commuting_space, is_k_commuting, properness_certificate, properness_guards,
    space_maps, HypothesisWitness, ProperFormPipeline, StructureChecker,
};
use gmkit::morita::{check_faithful, validate_context};
use gmkit::oracle::{Oracle, DEFAULT_BUDGET};
use gmkit::report::Report;
use gmkit::sample::random_combinations;
use gmkit::schema::{self, element_value, map_matrix_value};
use gmkit::{build_gma, Element, Error, GMAlgebra, LinMap, MoritaContext, RingSpec};

use crate::{Kind, Mode, SweepMode};

/// Failures listed individually in sweep output; the rest are counted.
const MAX_LISTED_FAILURES: usize = 10;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Core(Error::TheoremViolation(_)) => 2,
            CliError::Core(Error::NotKCommuting { .. }) => 1,
            _ => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "error[{}]: {e}", e.kind()),
            CliError::Io(p, e) => write!(f, "error[Io]: {}: {e}", p.display()),
            CliError::Usage(m) => write!(f, "error[Usage]: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Finding,
    Violation,
    Invalid,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Finding => 1,
            Status::Violation => 2,
            Status::Invalid => 3,
        }
    }

    fn raise(&mut self, other: Status) {
        *self = (*self).max(other);
    }
}

pub struct Outcome {
    pub stdout: String,
    pub markdown: Option<String>,
    pub status: Status,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.into(), e))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn load_context(path: &Path) -> Result<MoritaContext> {
    Ok(schema::context_from_json(&read(path)?)?)
}

fn load_gma(path: &Path) -> Result<GMAlgebra> {
    Ok(build_gma(&load_context(path)?)?)
}

fn describe(e: &Error) -> String {
    format!("error[{}]: {e}", e.kind())
}

fn size_value(size: Option<u128>) -> Value {
    match size {
        Some(s) => u64::try_from(s).map(Value::from).unwrap_or_else(|_| Value::String(s.to_string())),
        None => Value::Null,
    }
}

fn dims_value(dims: [usize; 4]) -> Value {
    json!({"A": dims[0], "M": dims[1], "N": dims[2], "B": dims[3]})
}

fn hypotheses_value(h: &HypothesisWitness) -> Value {
    let v = |x: &Option<Vec<gmkit::Scalar>>| x.as_ref().map(|c| element_value(&Element::new(c.clone())));
    json!({"cond1": h.cond1, "cond2": h.cond2, "cond3": h.cond3, "m0": v(&h.m0), "n0": v(&h.n0)})
}

pub fn validate(context: &Path) -> Result<Outcome> {
    let ctx = load_context(context)?;
    let rep = validate_context(&ctx)?;
    let faithful = check_faithful(&ctx);
    let out = json!({
        "command": "validate",
        "ring": ctx.ring().to_string(),
        "dims": dims_value(ctx.dims()),
        "valid": rep.is_clean(),
        "violations": rep.violations,
        "notes": rep.notes,
        "faithful": faithful,
    });
    let mut md = String::from("### context validation\n\n| axiom | witness |\n|---|---|\n");
    for v in &rep.violations {
        md.push_str(&format!("| {} | {} |\n", v.axiom, v.witness));
    }
    for n in &rep.notes {
        md.push_str(&format!("\nnote: {n}\n"));
    }
    Ok(Outcome {
        stdout: pretty(&out),
        markdown: Some(md),
        status: if rep.is_clean() { Status::Pass } else { Status::Invalid },
    })
}

pub fn build(context: &Path, emit: Option<&Path>) -> Result<Outcome> {
    let g = load_gma(context)?;
    let text = schema::algebra_to_json(g.algebra());
    let stdout = match emit {
        Some(path) => {
            write(path, &text)?;
            pretty(&json!({
                "command": "build",
                "dim": g.dim(),
                "dims": dims_value(g.layout().dims),
                "emitted": path.display().to_string(),
            }))
        }
        None => text,
    };
    Ok(Outcome {
        stdout,
        markdown: None,
        status: Status::Pass,
    })
}

fn push_report(
    out: &mut serde_json::Map<String, Value>,
    key: &str,
    rep: &Report,
    severity: Status,
    status: &mut Status,
    md: &mut String,
) {
    if !rep.all_passed() {
        status.raise(severity);
    }
    md.push_str(&rep.to_markdown());
    md.push('\n');
    out.insert(key.into(), serde_json::to_value(rep).expect("report serializes"));
}

/// Severity of a failing structural line: a genuine violation when the
/// theorem's hypotheses hold, otherwise only a finding.
fn structure_severity(g: &GMAlgebra) -> Status {
    if check_faithful(g.context()).both() {
        Status::Violation
    } else {
        Status::Finding
    }
}

pub fn classify(context: &Path, map: &Path, k: usize, oracle: bool, mode: Mode) -> Result<Outcome> {
    let g = load_gma(context)?;
    let alg = g.algebra();
    let ring = *g.ring();
    let theta = schema::map_from_json(&read(map)?, &ring, g.dim())?;
    let mut status = Status::Pass;
    let mut md = String::new();
    let mut out = serde_json::Map::new();
    out.insert("command".into(), json!("classify"));
    out.insert("mode".into(), json!(format!("{mode:?}").to_lowercase()));
    out.insert("k".into(), json!(k));
    out.insert("ring".into(), json!(ring.to_string()));

    let kc = is_k_commuting(alg, &theta, k)?;
    out.insert(
        "k_commuting".into(),
        json!({"holds": kc.holds, "witness": kc.witness.as_ref().map(|w| alg.format_element(w))}),
    );
    md.push_str(&format!("{k}-commuting: {}\n\n", kc.holds));
    if !kc.holds {
        status.raise(Status::Finding);
    }
    let require_commuting = || -> Result<()> {
        match &kc.witness {
            Some(w) => Err(Error::NotKCommuting {
                k,
                witness: alg.format_element(w),
            }
            .into()),
            None => Ok(()),
        }
    };
    if matches!(mode, Mode::All | Mode::Prop22) {
        if mode == Mode::Prop22 {
            require_commuting()?;
        }
        if kc.holds {
            match StructureChecker::new(&g, k).and_then(|c| c.check(&theta)) {
                Ok(rep) => push_report(&mut out, "block_structure", &rep, structure_severity(&g), &mut status, &mut md),
                Err(e) if mode == Mode::All && e.is_input_error() => {
                    out.insert("block_structure".into(), json!({"skipped": describe(&e)}));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }

    let mut proper = None;
    if matches!(mode, Mode::All | Mode::Thm25) {
        if mode == Mode::Thm25 {
            properness_guards(&g)?;
            require_commuting()?;
        }
        let cert = properness_certificate(alg, &theta)?;
        proper = Some(cert.is_some());
        let v = match &cert {
            Some(c) => json!({
                "proper": true,
                "lambda": element_value(&c.lambda),
                "zeta": map_matrix_value(&c.zeta),
                "free_generators": c.free_generators,
            }),
            None => json!({"proper": false}),
        };
        md.push_str(&format!("proper: {}\n\n", cert.is_some()));
        out.insert("properness".into(), v);
    }

    if matches!(mode, Mode::All | Mode::Thm25 | Mode::Steps) && (kc.holds || mode == Mode::Steps) {
        if mode == Mode::Steps {
            require_commuting()?;
        }
        match ProperFormPipeline::new(&g, k) {
            Ok(p) => {
                out.insert("hypotheses".into(), hypotheses_value(&p.hypotheses));
                if mode != Mode::Steps {
                    let r = p.construct(&theta)?;
                    let back = r.certificate().reassemble(alg)?;
                    let exact = schema::map_to_json(&ring, &back) == schema::map_to_json(&ring, &theta);
                    if !exact {
                        return Err(Error::TheoremViolation("λ, ζ do not reassemble Θ".into()).into());
                    }
                    out.insert(
                        "proper_form".into(),
                        json!({"c": element_value(&r.c), "omega": map_matrix_value(&r.omega), "reassembles": exact}),
                    );
                }
                let rep = p.steps(&theta)?;
                push_report(&mut out, "steps", &rep, Status::Violation, &mut status, &mut md);
            }
            Err(Error::HypothesesNotMet(why)) if mode == Mode::Thm25 || mode == Mode::All => {
                out.insert("proper_form".into(), json!({"skipped": format!("hypotheses not met: {why}")}));
                if proper == Some(false) {
                    status.raise(Status::Finding);
                }
            }
            Err(e) if mode == Mode::All && e.is_input_error() => {
                out.insert("proper_form".into(), json!({"skipped": describe(&e)}));
            }
            Err(e) => return Err(e.into()),
        }
    }
    if mode == Mode::All && proper == Some(false) {
        status.raise(Status::Finding);
    }

    if matches!(mode, Mode::All | Mode::Prop24) {
        if mode == Mode::Prop24 {
            properness_guards(&g)?;
        }
        let lb = is_derivation(alg, &theta)?;
        let mut v = serde_json::Map::new();
        v.insert("derivation".into(), json!(lb.holds));
        if lb.holds {
            let fr = verify_derivation_form(&g, &theta)?;
            v.insert("m0".into(), element_value(&fr.form.m0));
            v.insert("n0".into(), element_value(&fr.form.n0));
            push_report(&mut out, "derivation_form", &fr.report, Status::Violation, &mut status, &mut md);
            let zero = theta.is_zero(&ring);
            v.insert("zero".into(), json!(zero));
            if kc.holds && !zero && properness_guards(&g).is_ok() {
                return Err(Error::TheoremViolation("nonzero k-commuting derivation".into()).into());
            }
        }
        out.insert("derivation".into(), Value::Object(v));
    }

    if oracle {
        let o = Oracle::with_budget(alg, DEFAULT_BUDGET)?;
        let brute_witness = o.k_commuting(&theta, k)?;
        let brute_proper = o.properness(&theta)?.is_some();
        let fast_proper = match proper {
            Some(p) => p,
            None => properness_certificate(alg, &theta)?.is_some(),
        };
        let center_agrees = {
            let mut fast: Vec<Element> = alg.center().elements().map(|e| e.to_vec()).unwrap_or_default();
            fast.sort();
            fast == o.center()
        };
        let agrees = brute_witness == kc.witness && brute_proper == fast_proper && center_agrees;
        if !agrees {
            status.raise(Status::Violation);
        }
        md.push_str(&format!("oracle agrees: {agrees}\n"));
        out.insert(
            "oracle".into(),
            json!({
                "agrees": agrees,
                "center": center_agrees,
                "k_commuting": brute_witness.is_none(),
                "proper": brute_proper,
            }),
        );
    }

    Ok(Outcome {
        stdout: pretty(&Value::Object(out)),
        markdown: Some(md),
        status,
    })
}

struct Checked {
    label: String,
    failure: Option<(Status, String)>,
    report: Option<Report>,
}

impl Checked {
    fn pass(label: String, report: Option<Report>) -> Self {
        Checked {
            label,
            failure: None,
            report,
        }
    }
}

fn from_report(label: String, rep: Report, severity: Status) -> Checked {
    let failure = rep.first_failure().map(|l| {
        (
            severity,
            format!("{} fails at {}", l.anchor, l.witness.as_deref().unwrap_or("?")),
        )
    });
    Checked {
        label,
        failure,
        report: Some(rep),
    }
}

fn labelled(space: &gmkit::Submodule, dim: usize, samples: usize, seed: u64) -> Result<Vec<(String, LinMap)>> {
    let mut items: Vec<(String, LinMap)> = space_maps(space, dim)?
        .into_iter()
        .enumerate()
        .map(|(i, m)| (format!("generator {i}"), m))
        .collect();
    for (i, v) in random_combinations(space, samples, seed).into_iter().enumerate() {
        items.push((format!("sample {i}"), LinMap::from_vector(dim, &v.coords)?));
    }
    Ok(items)
}

fn run_all<F>(items: &[(String, LinMap)], f: F) -> Result<Vec<Checked>>
where
    F: Fn(&str, &LinMap) -> std::result::Result<Checked, Error> + Sync,
{
    items
        .par_iter()
        .map(|(label, m)| f(label, m))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(CliError::from)
}

pub fn sweep(context: &Path, k: usize, mode: SweepMode, seed: u64, budget: u128, samples: usize) -> Result<Outcome> {
    let g = load_gma(context)?;
    let alg = g.algebra();
    let ring = *g.ring();
    let size = alg.cardinality().ok_or(Error::NotEnumerable)?;
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget }.into());
    }
    let mode_name = format!("{mode:?}").to_lowercase();
    let mut out = serde_json::Map::new();
    out.insert("command".into(), json!("sweep"));
    out.insert("mode".into(), json!(mode_name));
    out.insert("k".into(), json!(k));
    out.insert("seed".into(), json!(seed));
    out.insert("samples".into(), json!(samples));
    out.insert("ring".into(), json!(ring.to_string()));
    out.insert("dims".into(), dims_value(g.layout().dims));

    let space = match mode {
        SweepMode::Prop24 => {
            properness_guards(&g)?;
            verify_commuting_derivations_vanish(&g, k)?;
            let inter = commuting_derivations(&g, k)?;
            out.insert("commuting_derivations".into(), json!({"size": size_value(inter.cardinality())}));
            derivation_space(alg)?
        }
        _ => commuting_space(alg, k)?,
    };
    out.insert(
        "space".into(),
        json!({"generators": space.generators().len(), "size": size_value(space.cardinality())}),
    );
    let items = labelled(&space, g.dim(), samples, seed)?;

    let results = match mode {
        SweepMode::Prop22 => {
            let checker = StructureChecker::new(&g, k)?;
            let severity = structure_severity(&g);
            run_all(&items, |label, m| Ok(from_report(label.into(), checker.check(m)?, severity)))?
        }
        SweepMode::Steps => {
            let p = ProperFormPipeline::new(&g, k)?;
            out.insert("hypotheses".into(), hypotheses_value(&p.hypotheses));
            run_all(&items, |label, m| Ok(from_report(label.into(), p.steps(m)?, Status::Violation)))?
        }
        SweepMode::Prop24 => run_all(&items, |label, m| {
            Ok(from_report(label.into(), verify_derivation_form(&g, m)?.report, Status::Violation))
        })?,
        SweepMode::Thm25 => {
            properness_guards(&g)?;
            let h = check_properness_hypotheses(&g, k)?;
            out.insert("hypotheses".into(), hypotheses_value(&h));
            if h.all() {
                let p = ProperFormPipeline::new(&g, k)?;
                run_all(&items, |label, m| {
                    let failure = match p.construct(m) {
                        Ok(r) => {
                            let back = r.certificate().reassemble(alg)?;
                            (schema::map_to_json(&ring, &back) != schema::map_to_json(&ring, m))
                                .then(|| (Status::Violation, "λ, ζ do not reassemble Θ".to_string()))
                        }
                        Err(Error::TheoremViolation(why)) => Some((Status::Violation, why)),
                        Err(e) => return Err(e),
                    };
                    Ok(Checked {
                        label: label.into(),
                        failure,
                        report: None,
                    })
                })?
            } else {
                run_all(&items, |label, m| {
                    Ok(match properness_certificate(alg, m)? {
                        Some(_) => Checked::pass(label.into(), None),
                        None => Checked {
                            label: label.into(),
                            failure: Some((Status::Finding, "no properness certificate".into())),
                            report: None,
                        },
                    })
                })?
            }
        }
    };

    let mut status = Status::Pass;
    let mut failures = Vec::new();
    for c in &results {
        if let Some((sev, why)) = &c.failure {
            status.raise(*sev);
            if failures.len() < MAX_LISTED_FAILURES {
                failures.push(json!({"map": c.label, "detail": why}));
            }
        }
    }
    let passed = results.iter().filter(|c| c.failure.is_none()).count();

    // Per-line tallies, in the order lines first appear.
    let mut tallies: Vec<(String, String, usize, usize)> = Vec::new();
    for rep in results.iter().filter_map(|c| c.report.as_ref()) {
        for l in &rep.lines {
            let pos = match tallies.iter().position(|t| t.0 == l.id) {
                Some(p) => p,
                None => {
                    tallies.push((l.id.clone(), l.anchor.clone(), 0, 0));
                    tallies.len() - 1
                }
            };
            if l.passed {
                tallies[pos].2 += 1;
            } else {
                tallies[pos].3 += 1;
            }
        }
    }
    out.insert("checked".into(), json!(results.len()));
    out.insert("passed".into(), json!(passed));
    out.insert("failures".into(), Value::Array(failures));
    out.insert(
        "lines".into(),
        Value::Array(
            tallies
                .iter()
                .map(|(id, anchor, p, f)| json!({"id": id, "anchor": anchor, "passed": p, "failed": f}))
                .collect(),
        ),
    );

    let mut md = format!(
        "### sweep {mode_name}, k = {k}, seed = {seed}\n\n{passed} of {} maps pass.\n\n",
        results.len()
    );
    if !tallies.is_empty() {
        md.push_str("| condition | formula | passed | failed |\n|---|---|---|---|\n");
        for (id, anchor, p, f) in &tallies {
            md.push_str(&format!("| {id} | {} | {p} | {f} |\n", anchor.replace('|', "\\|")));
        }
    }
    Ok(Outcome {
        stdout: pretty(&Value::Object(out)),
        markdown: Some(md),
        status,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn family(
    kind: Kind,
    ring: &str,
    n: usize,
    split: usize,
    d: &[usize],
    lower: bool,
    gamma: &[String],
    emit: Option<&Path>,
) -> Result<Outcome> {
    let ring: RingSpec = ring.parse()?;
    let text = match kind {
        Kind::Full => schema::context_to_json(&families::full_matrix_context(ring, n, split)?),
        Kind::Triangular if lower => schema::context_to_json(&families::lower_triangular_context(ring, n, split)?),
        Kind::Triangular => schema::context_to_json(&families::triangular_context(ring, n, split)?),
        Kind::Block => schema::context_to_json(&families::block_triangular_context(ring, d, split, lower)?),
        Kind::Inflated => {
            let base = families::scalar_algebra(ring)?;
            let gamma = if gamma.is_empty() {
                (0..n * n)
                    .map(|ij| base.scalar(&if ij / n == ij % n { ring.one() } else { ring.zero() }))
                    .collect::<std::result::Result<Vec<_>, _>>()?
            } else {
                gamma
                    .iter()
                    .map(|s| base.scalar(&ring.parse_scalar(s)?))
                    .collect::<std::result::Result<Vec<_>, _>>()?
            };
            let inf = families::inflated_algebra(&InflatedSpec { base, n, gamma })?;
            schema::algebra_to_json(&inf.algebra)
        }
    };
    // Building also validates the emitted context.
    if kind != Kind::Inflated {
        build_gma(&schema::context_from_json(&text)?)?;
    }
    let stdout = match emit {
        Some(path) => {
            write(path, &text)?;
            pretty(&json!({"command": "family", "kind": format!("{kind:?}").to_lowercase(), "emitted": path.display().to_string()}))
        }
        None => text,
    };
    Ok(Outcome {
        stdout,
        markdown: None,
        status: Status::Pass,
    })
}
