//! The `htl` command line tool: JSON in, one JSON report per line out.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 malformed input,
//! 3 a precondition of the computation does not hold.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{GaussianRational, Rational, Ring};
use crate::filtration::Filtration;
use crate::json::{parse_bundle, parse_tuple, BundleJson, KoszulDump};
use crate::koszul::{graded_vanishing_check, FilteredKoszul, WeightConvention};
use crate::models::{l_forward, l_inverse, mod_sym_gluing, model_nilpotent, LParams, ResidueData};
use crate::nilpotent::{
    is_bottom_compatible, is_hodge_type, is_sequentially_compatible, is_sequentially_compatible_at_level,
    is_strongly_sequentially_compatible, primitive_decomposition, satisfies_weight_axioms, sl2_splitting, weight_filtration,
    CompatFailure, CompatOptions,
};
use crate::twistor::{conjugacy_constancy, morphism_weight_filtration, FilteredTwistorBundle};

#[derive(Parser, Debug)]
#[command(name = "htl", version, about = "Weight filtrations, Koszul purity and twistor bundle checks")]
struct Cli {
    /// Print tables instead of JSON lines.
    #[arg(long, global = true)]
    human: bool,
    /// Seed for the sampled positive-cone checks.
    #[arg(long, global = true, env = "HTL_SEED", default_value_t = 0)]
    seed: u64,
    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weight filtration of a nilpotent matrix (or of each partial sum of a tuple).
    Wfilt {
        /// Matrix or tuple JSON; `-` reads stdin.
        #[arg(long)]
        input: String,
        #[arg(long)]
        primitive: bool,
        #[arg(long)]
        sl2: bool,
    },
    /// Compatibility checks for a commuting tuple.
    Compat {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Only require the image condition for `h_1 ≤ level` (sequential mode).
        #[arg(long, allow_hyphen_values = true)]
        level: Option<i64>,
        /// Skip the sampled positive-cone constancy test.
        #[arg(long)]
        no_cone: bool,
    },
    /// Purity of the filtered partial Koszul complex.
    Purity {
        #[arg(long)]
        input: String,
        #[arg(long)]
        graded: bool,
        #[arg(long, value_enum)]
        reindex: Option<Reindex>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        weight: i64,
        /// Include the whole complex in the report.
        #[arg(long)]
        dump: bool,
    },
    /// Bundles on the projective line given by a gluing matrix.
    Twistor {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum)]
        op: TwistorOp,
        /// `n` for `h0`, and the weight for `mixed` when no morphism is given.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        twist: i64,
    },
    /// Emit a model fixture as JSON.
    Model {
        #[arg(long, value_enum)]
        name: ModelName,
        /// `key=value` pairs, comma separated or repeated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        args: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Seq,
    Strong,
    Hodge,
    Bottom,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Reindex {
    Cks,
    Kk,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TwistorOp {
    Split,
    H0,
    Birkhoff,
    Mixed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelName {
    Mod2,
    Sym,
    Lparams,
}

#[derive(Serialize, Debug)]
struct Verdict {
    check: String,
    pass: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    witness: Value,
}

#[derive(Serialize, Debug)]
struct Report {
    command: Vec<String>,
    verdicts: Vec<Verdict>,
    data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<BTreeMap<String, f64>>,
}

enum Output {
    Report(Vec<Verdict>, Value),
    Raw(Value),
}

fn verdict(check: &str, pass: bool, witness: Value) -> Verdict {
    Verdict { check: check.into(), pass, witness }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_input_error() => 2,
        Error::Internal(_) => 1,
        _ => 3,
    }
}

/// Runs with the process arguments and standard streams.
pub fn run() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let mut stdin = std::io::stdin();
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    run_with(&args, &mut stdin, &mut stdout, &mut stderr)
}

/// `args[0]` is the program name.
pub fn run_with(args: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let start = Instant::now();
    let out = match execute(&cli, stdin) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    match out {
        Output::Raw(v) => {
            let text = if cli.human { serde_json::to_string_pretty(&v) } else { serde_json::to_string(&v) };
            let _ = writeln!(stdout, "{}", text.expect("plain data serializes"));
            0
        }
        Output::Report(mut verdicts, data) => {
            verdicts.sort_by(|a, b| a.check.cmp(&b.check));
            let pass = verdicts.iter().all(|v| v.pass);
            let timings = cli.timings.then(|| BTreeMap::from([("total_ms".to_string(), start.elapsed().as_secs_f64() * 1e3)]));
            let report = Report { command: args[1..].to_vec(), verdicts, data, timings };
            let _ =
                if cli.human { write_human(stdout, &report) } else { writeln!(stdout, "{}", crate::json::to_string(&report)) };
            i32::from(!pass)
        }
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String> {
    let mut text = String::new();
    if path == "-" {
        stdin.read_to_string(&mut text).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Output> {
    match &cli.command {
        Command::Wfilt { input, primitive, sl2 } => wfilt(&read_input(input, stdin)?, *primitive, *sl2),
        Command::Compat { input, mode, level, no_cone } => {
            let opts = CompatOptions { cone: !no_cone, seed: cli.seed, ..CompatOptions::default() };
            compat(&read_input(input, stdin)?, *mode, *level, &opts)
        }
        Command::Purity { input, graded, reindex, weight, dump } => {
            let convention = match reindex {
                None => WeightConvention::Base,
                Some(Reindex::Cks) => WeightConvention::Cks,
                Some(Reindex::Kk) => WeightConvention::Kk { w: *weight },
            };
            purity(&read_input(input, stdin)?, *graded, convention, *dump)
        }
        Command::Twistor { input, op, twist } => twistor(&read_input(input, stdin)?, *op, *twist),
        Command::Model { name, args } => model(*name, args),
    }
}

fn dims(w: &Filtration<Rational>) -> Value {
    json!(w.graded_dims())
}

fn wfilt(text: &str, primitive: bool, sl2: bool) -> Result<Output> {
    let t = parse_tuple(text)?;
    let mut verdicts = Vec::new();
    let mut data = serde_json::Map::new();
    let n = t.partial_sum(t.len());
    let w = weight_filtration(&n)?;
    verdicts.push(verdict("weight_axioms", satisfies_weight_axioms(&n, &w), Value::Null));
    data.insert("weights".into(), dims(&w));
    if t.len() > 1 {
        let partial: Result<Vec<Value>> = (1..=t.len()).map(|j| Ok(dims(&weight_filtration(&t.partial_sum(j))?))).collect();
        data.insert("partialSums".into(), Value::Array(partial?));
    }
    if primitive {
        let p = primitive_decomposition(&n)?;
        verdicts.push(verdict("primitive_direct_sum", p.is_direct(), Value::Null));
        data.insert("primitive".into(), json!(p.primitive_dims()));
    }
    if sl2 {
        let s = sl2_splitting(&n)?;
        let eig: BTreeMap<i64, usize> = s.eigenspaces.iter().map(|(&k, e)| (k, e.dim())).collect();
        verdicts.push(verdict("sl2_filtration_matches", s.filtration() == w, Value::Null));
        data.insert("sl2Eigenspaces".into(), json!(eig));
        data.insert("jordanType".into(), json!(s.chains.iter().map(|c| c.1).collect::<Vec<_>>()));
    }
    Ok(Output::Report(verdicts, Value::Object(data)))
}

fn failure_witness(f: &CompatFailure<Rational>) -> Value {
    json!({ "h": f.h(), "detail": f.describe() })
}

fn compat(text: &str, mode: Mode, level: Option<i64>, opts: &CompatOptions) -> Result<Output> {
    let t = parse_tuple(text)?;
    let (name, failure) = match (mode, level) {
        (Mode::Seq, None) => ("sequential", is_sequentially_compatible(&t, opts)?),
        (Mode::Seq, Some(h)) => ("sequential_at_level", is_sequentially_compatible_at_level(&t, h, opts)?),
        (Mode::Strong, _) => ("strong", is_strongly_sequentially_compatible(&t, opts)?),
        (Mode::Hodge, _) => ("hodge_type", is_hodge_type(&t, opts)?),
        (Mode::Bottom, _) => ("bottom", is_bottom_compatible(&t, opts)?),
    };
    let witness = failure.as_ref().map_or(Value::Null, failure_witness);
    let data = json!({ "maps": t.len(), "dim": t.dim(), "level": level });
    Ok(Output::Report(vec![verdict(name, failure.is_none(), witness)], data))
}

fn purity(text: &str, graded: bool, convention: WeightConvention, dump: bool) -> Result<Output> {
    let t = parse_tuple(text)?;
    let c = FilteredKoszul::new(&t)?.reindexed(convention);
    let h = c.complex.cohomology_dims()?;
    let top = *h.last().expect("n ≥ 1");
    let p = c.purity()?;
    let mut verdicts = vec![
        verdict("purity", p.pure, p.failure.as_ref().map_or(Value::Null, |f| json!(f))),
        verdict("top_cohomology_vanishes", top == 0, json!(top)),
    ];
    let mut data = serde_json::Map::new();
    data.insert("convention".into(), json!(convention));
    data.insert("termDims".into(), json!(c.complex.term_dims()));
    data.insert("cohomology".into(), json!(h));
    if graded {
        let g = graded_vanishing_check(&c, None)?;
        let table: BTreeMap<String, usize> = g.table.iter().map(|((w, k), d)| (format!("{w},{k}"), *d)).collect();
        verdicts.push(verdict("graded_vanishing", g.vanishing, json!(g.witness)));
        data.insert("gradedTable".into(), json!(table));
    }
    if dump {
        data.insert("dump".into(), json!(KoszulDump::new(&c)?));
    }
    Ok(Output::Report(verdicts, Value::Object(data)))
}

fn twistor(text: &str, op: TwistorOp, twist: i64) -> Result<Output> {
    let (b, maps) = parse_bundle(text)?;
    let (_, unit) = b.validate();
    let mut data = serde_json::Map::new();
    data.insert("rank".into(), json!(b.rank()));
    data.insert("degree".into(), json!(b.degree()));
    data.insert("unit".into(), json!(unit));
    let verdicts = match op {
        TwistorOp::Split => {
            let k = b.splitting_type()?;
            data.insert("splitting".into(), json!(k));
            vec![verdict("degree_sum", k.iter().sum::<i64>() == b.degree(), Value::Null)]
        }
        TwistorOp::H0 => {
            let k = b.splitting_type()?;
            let h = b.h0(twist);
            let expected: i64 = k.iter().map(|&k| (k + twist + 1).max(0)).sum();
            data.insert("n".into(), json!(twist));
            data.insert("h0".into(), json!(h));
            vec![verdict("h0_profile", h as i64 == expected, json!(expected))]
        }
        TwistorOp::Birkhoff => {
            let f = b.birkhoff()?;
            let exact = &f.reconstruct() == b.gluing();
            data.insert("exponents".into(), json!(f.exponents));
            data.insert("P".into(), json!(f.p));
            data.insert("Q".into(), json!(f.q));
            vec![verdict("reconstruction", exact, json!(if exact { "exact" } else { "mismatch" }))]
        }
        TwistorOp::Mixed => {
            let filtered = if maps.is_empty() {
                FilteredTwistorBundle::single(b.clone(), twist)
            } else {
                let mut n = maps[0].clone();
                for m in &maps[1..] {
                    n = n.add(m)?;
                }
                let c = conjugacy_constancy(&n)?;
                data.insert("jordanType".into(), json!(c.generic));
                morphism_weight_filtration(&b, &n)?
            };
            let v = filtered.is_mixed_twistor()?;
            let ranks: BTreeMap<i64, usize> = filtered.steps.iter().map(|(&l, s)| (l, s.rank())).collect();
            data.insert("filtrationRanks".into(), json!(ranks));
            data.insert("gradedSplitting".into(), json!(v.graded_types));
            vec![verdict("mixed_twistor", v.mixed, json!(v.failing_weight))]
        }
    };
    Ok(Output::Report(verdicts, Value::Object(data)))
}

fn model_args(args: &[String]) -> Result<BTreeMap<String, String>> {
    args.iter()
        .filter(|a| !a.trim().is_empty())
        .map(|a| {
            let (k, v) = a.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {a:?}")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn take<T: std::str::FromStr>(args: &mut BTreeMap<String, String>, key: &str, default: Option<T>) -> Result<T> {
    match args.remove(key) {
        Some(v) => v.parse().map_err(|_| Error::Parse(format!("invalid value {v:?} for {key}"))),
        None => default.ok_or_else(|| Error::Parse(format!("missing argument {key}"))),
    }
}

fn model(name: ModelName, raw: &[String]) -> Result<Output> {
    let mut args = model_args(raw)?;
    let out = match name {
        ModelName::Mod2 | ModelName::Sym => {
            let l: usize = if matches!(name, ModelName::Mod2) { 1 } else { take(&mut args, "l", Some(1))? };
            let p: Rational = take(&mut args, "p", Some(Rational::zero()))?;
            let n = model_nilpotent(l, &p)?;
            json!(BundleJson::new(&mod_sym_gluing(l, &p), &[n]))
        }
        ModelName::Lparams => {
            let lambda: GaussianRational = take(&mut args, "lambda", Some(GaussianRational::zero()))?;
            if args.contains_key("A") || args.contains_key("B") {
                let r = ResidueData { a: take(&mut args, "A", None)?, b: take(&mut args, "B", None)? };
                json!({ "params": l_inverse(&r, &lambda), "residue": r })
            } else {
                let p = LParams {
                    a: take(&mut args, "a", Some(Rational::zero()))?,
                    alpha: take(&mut args, "alpha", Some(GaussianRational::zero()))?,
                    lambda,
                };
                json!({ "params": p, "residue": l_forward(&p) })
            }
        }
    };
    if let Some(k) = args.keys().next() {
        return Err(Error::Parse(format!("unknown argument {k:?}")));
    }
    Ok(Output::Raw(out))
}

fn human(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(human).collect::<Vec<_>>().join(", ")),
        Value::Object(o) => format!("{{{}}}", o.iter().map(|(k, v)| format!("{k}: {}", human(v))).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn write_human(out: &mut dyn Write, r: &Report) -> std::io::Result<()> {
    writeln!(out, "htl {}", r.command.join(" "))?;
    for v in &r.verdicts {
        let mark = if v.pass { "PASS" } else { "FAIL" };
        if v.witness.is_null() {
            writeln!(out, "  {mark}  {}", v.check)?;
        } else {
            writeln!(out, "  {mark}  {}  ({})", v.check, human(&v.witness))?;
        }
    }
    if let Value::Object(o) = &r.data {
        for (k, v) in o {
            writeln!(out, "  {k}: {}", human(v))?;
        }
    }
    if let Some(t) = &r.timings {
        for (k, v) in t {
            writeln!(out, "  {k}: {v:.1}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let args: Vec<String> = std::iter::once("htl").chain(args.iter().copied()).map(String::from).collect();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(&args, &mut stdin.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    const J2: &str = r#"{"rows":2,"cols":2,"entries":[["0","1"],["0","0"]]}"#;

    #[test]
    fn wfilt_outputs() {
        let (code, out, _) = call(&["wfilt", "--input", "-", "--human"], J2);
        assert_eq!(code, 0);
        assert!(out.contains("weights: {-1: 1, 1: 1}"), "{out}");
        let (code, out, _) =
            call(&["wfilt", "--input", "-"], r#"{"rows":3,"cols":3,"entries":[["0","0","0"],["0","0","0"],["0","0","0"]]}"#);
        assert_eq!(code, 0);
        assert!(out.contains(r#""weights":{"0":3}"#), "{out}");
        let (code, _, err) = call(&["wfilt", "--input", "-"], r#"{"rows":1,"cols":1,"entries":[["2"]]}"#);
        assert_eq!(code, 3);
        assert!(err.contains("not nilpotent"));
        assert_eq!(call(&["wfilt", "--input", "-"], "{").0, 2);
        assert_eq!(call(&["wfilt"], "").0, 2);
    }

    #[test]
    fn model_pipes_into_twistor() {
        let (code, bundle, _) = call(&["model", "--name", "mod2", "--args", "p=0"], "");
        assert_eq!(code, 0);
        let (code, out, _) = call(&["twistor", "--input", "-", "--op", "split"], &bundle);
        assert_eq!(code, 0);
        assert!(out.contains(r#""splitting":[1,-1]"#), "{out}");
        let (_, out, _) = call(&["twistor", "--input", "-", "--op", "mixed", "--human"], &bundle);
        assert!(out.contains("PASS  mixed_twistor"), "{out}");
        assert_eq!(call(&["model", "--name", "mod2", "--args", "q=1"], "").0, 2);
    }

    #[test]
    fn lparams_round_trip() {
        let (_, out, _) = call(&["model", "--name", "lparams", "--args", "a=2,alpha=1,lambda=1"], "");
        assert!(out.contains(r#""residue":{"A":"0","B":{"im":"0","re":"2"}}"#), "{out}");
        let (_, out, _) = call(&["model", "--name", "lparams", "--args", "A=0,B=2,lambda=1"], "");
        assert!(out.contains(r#""a":"2""#), "{out}");
    }

    #[test]
    fn seeds_are_reproducible() {
        let t = r#"{"maps":[{"rows":2,"cols":2,"entries":[["0","1"],["0","0"]]},{"rows":2,"cols":2,"entries":[["0","2"],["0","0"]]}]}"#;
        let a = call(&["compat", "--input", "-", "--mode", "strong", "--seed", "7"], t);
        let b = call(&["compat", "--input", "-", "--mode", "strong", "--seed", "7"], t);
        assert_eq!(a, b);
        assert_eq!(a.0, 0);
    }
}
