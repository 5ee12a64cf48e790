//! Command-line surface: one library pipeline per invocation, a JSON report
//! on standard output and diagnostics on standard error.
//!
//! Exit codes: 0 when every checked property holds (possibly within a
//! bound), 1 when one fails, 2 for usage or input errors, 3 when a limit
//! was too small to decide.

use std::ffi::OsString;
use std::fs;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::lsts::{ActionSet, Lsts, Run, StateId};
use crate::models::{self, GenParams, SuiteConfig};
use crate::oracle::{self, Limits, OracleWitness};
use crate::petri::{build_lsts, NetLsts, PetriNet};
use crate::props::{self, AtomicProp, Classifier, InvisibilityFlags};
use crate::stubborn::{self, check_condition, check_l, default_bound, reduce, Condition, ConditionWitness, PorMode, ReducedLsts, ReductionFunction};
use crate::verdict::Verdict;
use crate::Error;

#[derive(Parser, Debug, Clone)]
#[command(name = "stublab", version, about = "Stubborn-set reduction checks for LSTSs and Petri nets")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Build the reachable LSTS of a net, labelled by its propositions.
    NetToLsts {
        #[command(flatten)]
        net: NetArgs,
    },
    /// Classify transitions as invisible for each proposition.
    Classify {
        #[command(flatten)]
        net: NetArgs,
        /// Only this proposition.
        #[arg(long)]
        prop: Option<String>,
        /// Only this transition.
        #[arg(long)]
        transition: Option<String>,
        /// Classify under all eight invisibility notions instead of one.
        #[arg(long)]
        all_notions: bool,
    },
    /// Check stubborn-set conditions of a reduction function.
    Check {
        #[arg(long)]
        lsts: PathBuf,
        #[arg(long)]
        r: PathBuf,
        /// Comma-separated conditions from D0, D1, D1p, D2, D2w, V, I, C4.
        #[arg(long, default_value = "D1p,D2w,V,I")]
        conds: String,
        /// State id or name; every state of the reduced LSTS by default.
        #[arg(long)]
        state: Option<String>,
        /// Path bound for D1 / D1p; 2·|S| capped at 12 by default.
        #[arg(long, value_parser = positive)]
        bound: Option<usize>,
    },
    /// Check condition L on the reduced LSTS.
    CheckL {
        #[arg(long)]
        lsts: PathBuf,
        #[arg(long)]
        r: PathBuf,
    },
    /// Build the reduced LSTS of a reduction function.
    Reduce {
        #[arg(long)]
        lsts: PathBuf,
        #[arg(long)]
        r: PathBuf,
    },
    /// Reduced exploration of a net with computed stubborn sets.
    Explore {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, value_enum, default_value_t = PorModeArg::LtlWeak)]
        por: PorModeArg,
        /// Path bound for the D1 / D1p checks of the computed sets.
        #[arg(long, value_parser = positive)]
        bound: Option<usize>,
    },
    /// Compare a full LSTS with a reduced one.
    Compare {
        #[arg(long)]
        full: PathBuf,
        /// The reduced LSTS over the same states.
        #[arg(long, required_unless_present = "r", conflicts_with = "r")]
        reduced: Option<PathBuf>,
        /// A reduction function to apply to the full LSTS instead.
        #[arg(long)]
        r: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: CompareMode,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check that weakly equivalent complete paths are stutter equivalent.
    Consistent {
        #[arg(long, required_unless_present = "net", conflicts_with = "net")]
        lsts: Option<PathBuf>,
        #[arg(long)]
        net: Option<PathBuf>,
        #[arg(long, requires = "net")]
        props: Option<PathBuf>,
        #[arg(long, default_value = "plain")]
        invisibility: InvisibilityFlags,
        #[arg(long, default_value_t = 10_000, value_parser = positive)]
        state_cap: usize,
        #[arg(long = "box", default_value_t = 6)]
        box_bound: u32,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Run the expectation tables of the built-in models.
    Suite {
        /// Use the D1 checker wherever D1p is asked for.
        #[arg(long)]
        d1_for_d1p: bool,
        /// Only this model.
        #[arg(long)]
        model: Option<String>,
    },
    /// Emit a random artifact or a built-in model.
    Gen {
        #[arg(long, value_enum, default_value_t = GenKind::Lsts)]
        kind: GenKind,
        /// Export this built-in model instead of a random artifact.
        #[arg(long)]
        model: Option<String>,
        /// Also write the artifact files into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        states: Option<usize>,
        #[arg(long)]
        actions: Option<usize>,
        #[arg(long)]
        props: Option<usize>,
        #[arg(long)]
        places: Option<usize>,
        #[arg(long)]
        transitions: Option<usize>,
        #[arg(long)]
        token_bound: Option<u32>,
        #[arg(long, value_parser = positive)]
        state_cap: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct NetArgs {
    #[arg(long)]
    pub net: PathBuf,
    #[arg(long)]
    pub props: Option<PathBuf>,
    /// Comma-joined flags from reach, strong, value; `plain` for none.
    #[arg(long, default_value = "plain")]
    pub invisibility: InvisibilityFlags,
    #[arg(long, default_value_t = 10_000, value_parser = positive)]
    pub state_cap: usize,
    /// Tokens per place in the classifier's marking box.
    #[arg(long = "box", default_value_t = 6)]
    pub box_bound: u32,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct LimitArgs {
    /// Times each transition may occur on an enumerated path.
    #[arg(long, default_value_t = 2, value_parser = positive)]
    pub repeat: usize,
    /// Maximal number of enumeration nodes.
    #[arg(long, default_value_t = 100_000, value_parser = positive)]
    pub count: usize,
}

impl From<LimitArgs> for Limits {
    fn from(a: LimitArgs) -> Self {
        Limits { repeat: a.repeat, count: a.count }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMode {
    Stutter,
    Weak,
    Deadlock,
    Labels,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PorModeArg {
    Deadlock,
    LtlWeak,
    LtlStrong,
}

impl From<PorModeArg> for PorMode {
    fn from(m: PorModeArg) -> Self {
        match m {
            PorModeArg::Deadlock => PorMode::Deadlock,
            PorModeArg::LtlWeak => PorMode::LtlWeak,
            PorModeArg::LtlStrong => PorMode::LtlStrong,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Lsts,
    Pn,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// What the process should print and return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&config) {
        Ok(report) => {
            let code = if report["status"] == "fails" { 1 } else { 0 };
            let stdout = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
            CliOutput { code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let code = if e.is_limit() { 3 } else { 2 };
            let kind = if code == 3 { "inconclusive" } else { "error" };
            let report = json!({ "status": kind, "error": e.to_string() });
            CliOutput {
                code,
                stdout: serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
                stderr: format!("stublab: {e}\n"),
            }
        }
    }
}

/// Runs the selected pipeline and returns its report; the report's
/// `status` is `holds`, `bounded_holds` or `fails`.
pub fn execute(config: &CliConfig) -> Result<Value, Error> {
    match &config.command {
        Command::NetToLsts { net } => net_to_lsts(net),
        Command::Classify { net, prop, transition, all_notions } => classify(net, prop.as_deref(), transition.as_deref(), *all_notions),
        Command::Check { lsts, r, conds, state, bound } => check(lsts, r, conds, state.as_deref(), *bound),
        Command::CheckL { lsts, r } => {
            let l = load_lsts(lsts)?;
            let red = reduce(&l, &load_r(r, &l)?)?;
            let v = check_l(&red);
            let summary = v.witness().map(|w| describe_condition_witness(&l, w));
            Ok(json!({ "command": "check-l", "status": v.status(), "verdict": v, "summary": summary }))
        }
        Command::Reduce { lsts, r } => {
            let l = load_lsts(lsts)?;
            let red = reduce(&l, &load_r(r, &l)?)?;
            Ok(json!({
                "command": "reduce",
                "status": "holds",
                "full": { "states": l.num_states(), "transitions": l.transitions().len() },
                "reduced_counts": { "states": red.num_states(), "transitions": red.num_transitions() },
                "dropped_states": (0..l.num_states()).filter(|&s| !red.contains(s)).collect::<Vec<_>>(),
                "r": red.reduction_function().to_json_value(),
                "reduced": red.lsts.to_json_value(),
            }))
        }
        Command::Explore { net, por, bound } => explore(net, (*por).into(), *bound),
        Command::Compare { full, reduced, r, mode, limits } => compare(full, reduced.as_deref(), r.as_deref(), *mode, (*limits).into()),
        Command::Consistent { lsts, net, props, invisibility, state_cap, box_bound, limits } => {
            let l = match (lsts, net) {
                (Some(path), _) => load_lsts(path)?,
                (None, Some(net)) => {
                    let args = NetArgs {
                        net: net.clone(),
                        props: props.clone(),
                        invisibility: *invisibility,
                        state_cap: *state_cap,
                        box_bound: *box_bound,
                    };
                    build_net(&args)?.1.lsts
                }
                (None, None) => return Err(Error::Input("one of --lsts or --net is required".into())),
            };
            let limits: Limits = (*limits).into();
            let v = oracle::check_consistent_labelling(&l, l.invisible(), limits)?;
            let summary = v.witness().map(|w| describe_oracle_witness(&l, w));
            Ok(json!({ "command": "consistent", "status": v.status(), "limits": limits, "invisible": names(&l, l.invisible()), "verdict": v, "summary": summary }))
        }
        Command::Suite { d1_for_d1p, model } => {
            let config = SuiteConfig { d1p_as_d1: *d1_for_d1p };
            let report = match model {
                Some(id) => models::run_expectations(&[models::builtin_model(id)?], config),
                None => models::run_builtin_suite(config),
            };
            let mut v = report.to_json_value();
            v["command"] = json!("suite");
            Ok(v)
        }
        Command::Gen { kind, model, out_dir, seed, states, actions, props, places, transitions, token_bound, state_cap } => {
            let defaults = GenParams::with_seed(*seed);
            let params = GenParams {
                states: states.unwrap_or(defaults.states),
                actions: actions.unwrap_or(defaults.actions),
                props: props.unwrap_or(defaults.props),
                places: places.unwrap_or(defaults.places),
                transitions: transitions.unwrap_or(defaults.transitions),
                token_bound: token_bound.unwrap_or(defaults.token_bound),
                state_cap: state_cap.unwrap_or(defaults.state_cap),
                ..defaults
            };
            generate(*kind, model.as_deref(), out_dir.as_deref(), &params)
        }
    }
}

// ---------------------------------------------------------------------------
// Loading

fn read(path: &FsPath) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_lsts(path: &FsPath) -> Result<Lsts, Error> {
    Ok(Lsts::from_json_str(&read(path)?)?)
}

fn load_r(path: &FsPath, l: &Lsts) -> Result<ReductionFunction, Error> {
    Ok(ReductionFunction::from_json_str(&read(path)?, l)?)
}

fn load_net(path: &FsPath) -> Result<PetriNet, Error> {
    Ok(PetriNet::from_json_str(&read(path)?)?)
}

fn load_props(path: Option<&FsPath>, net: &PetriNet) -> Result<Vec<AtomicProp>, Error> {
    match path {
        Some(p) => Ok(props::props_from_json_str(&read(p)?, net)?),
        None => Ok(Vec::new()),
    }
}

fn build_net(args: &NetArgs) -> Result<(PetriNet, NetLsts, Vec<AtomicProp>), Error> {
    let net = load_net(&args.net)?;
    let props = load_props(args.props.as_deref(), &net)?;
    let built = build_lsts(&net, &props, args.invisibility, args.state_cap, args.box_bound)?;
    Ok((net, built, props))
}

fn resolve_state(l: &Lsts, s: &str) -> Result<StateId, Error> {
    if let Some(id) = l.state_by_name(s) {
        return Ok(id);
    }
    match s.parse::<usize>() {
        Ok(id) if id < l.num_states() => Ok(id),
        _ => Err(Error::Input(format!("unknown state `{s}`"))),
    }
}

// ---------------------------------------------------------------------------
// Formatting

fn names(l: &Lsts, set: &ActionSet) -> Vec<String> {
    set.iter().map(|a| l.action_name(a).to_string()).collect()
}

fn aggregate<'a>(statuses: impl IntoIterator<Item = &'a str>) -> &'static str {
    let mut out = "holds";
    for s in statuses {
        match s {
            "fails" => return "fails",
            "bounded_holds" => out = "bounded_holds",
            _ => {}
        }
    }
    out
}

fn describe_path(l: &Lsts, p: &crate::lsts::Path) -> String {
    let word = l.format_actions(&p.actions());
    if word.is_empty() {
        "ε".into()
    } else {
        word
    }
}

fn describe_run(l: &Lsts, run: &Run) -> String {
    match run {
        Run::Finite(p) => describe_path(l, p),
        Run::Lasso(x) => format!("{} ({})^ω", describe_path(l, &x.stem), describe_path(l, &x.cycle)),
    }
}

pub fn describe_condition_witness(l: &Lsts, w: &ConditionWitness) -> String {
    match w {
        ConditionWitness::NoEnabledInSet => "no enabled action in the set".into(),
        ConditionWitness::Commutation { action, path, target } => format!(
            "{} then {} reaches {}; no matching path starts with {}",
            describe_path(l, path),
            l.action_name(*action),
            l.state_name(*target),
            l.action_name(*action)
        ),
        ConditionWitness::NotKey { action, path } => format!("{} disables {}", describe_path(l, path), l.action_name(*action)),
        ConditionWitness::NoKeyAction => "no key action".into(),
        ConditionWitness::MissingVisible { missing, .. } => format!("visible actions missing: {}", names(l, missing).join(" ")),
        ConditionWitness::NoInvisibleKey => "no invisible key action".into(),
        ConditionWitness::MultipleEnabled { enabled } => format!("several enabled actions: {}", names(l, enabled).join(" ")),
        ConditionWitness::Cycle { action, cycle } => {
            format!("cycle {} from {} never has {}", describe_path(l, cycle), l.state_name(cycle.start), l.action_name(*action))
        }
    }
}

pub fn describe_oracle_witness(l: &Lsts, w: &OracleWitness) -> String {
    match w {
        OracleWitness::Unmatched { direction, witness } => format!(
            "{direction:?}: path {} with trace {} and visible word {} has no match",
            describe_run(l, &witness.run),
            l.format_trace(&witness.nostut),
            l.format_vis(&witness.vis)
        ),
        OracleWitness::DeadlockMismatch { state, deadlock_in_full } => {
            format!("state {} is a deadlock only in the {} LSTS", l.state_name(*state), if *deadlock_in_full { "full" } else { "reduced" })
        }
        OracleWitness::LostDeadlock { path } => format!("deadlocking path {} has no permutation in the reduced LSTS", describe_path(l, path)),
        OracleWitness::MissingLabelling { direction, labels } => format!("{direction:?}: labelling {} is not reachable on the other side", l.format_labels(*labels)),
        OracleWitness::Inconsistent { first, second } => format!(
            "{} and {} share visible word {} but have traces {} and {}",
            describe_run(l, &first.run),
            describe_run(l, &second.run),
            l.format_vis(&first.vis),
            l.format_trace(&first.nostut),
            l.format_trace(&second.nostut)
        ),
    }
}

// ---------------------------------------------------------------------------
// Pipelines

fn net_to_lsts(args: &NetArgs) -> Result<Value, Error> {
    let (_, built, _) = build_net(args)?;
    Ok(json!({
        "command": "net-to-lsts",
        "status": "holds",
        "invisibility": args.invisibility.to_string(),
        "markings": built.markings.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "visibility": built.visibility,
        "warnings": built.warnings,
        "lsts": built.lsts.to_json_value(),
    }))
}

fn classify(args: &NetArgs, prop: Option<&str>, transition: Option<&str>, all_notions: bool) -> Result<Value, Error> {
    let net = load_net(&args.net)?;
    let props = load_props(args.props.as_deref(), &net)?;
    let chosen: Vec<&AtomicProp> = match prop {
        Some(id) => vec![props.iter().find(|q| q.id == id).ok_or_else(|| Error::Input(format!("unknown proposition `{id}`")))?],
        None => props.iter().collect(),
    };
    let ts: Vec<usize> = match transition {
        Some(t) => vec![net.transition(t)?],
        None => (0..net.num_transitions()).collect(),
    };
    let notions = if all_notions { InvisibilityFlags::all() } else { vec![args.invisibility] };
    let classifier = Classifier::new(&net, args.box_bound, args.state_cap);
    let mut results = Vec::new();
    let mut statuses = Vec::new();
    for q in &chosen {
        for &t in &ts {
            for &flags in &notions {
                let v = classifier.classify(q, t, flags)?;
                statuses.push(v.status());
                results.push(json!({
                    "prop": q.id,
                    "transition": net.transition_name(t),
                    "invisibility": flags.to_string(),
                    "verdict": v,
                }));
            }
        }
    }
    Ok(json!({ "command": "classify", "status": aggregate(statuses), "results": results }))
}

fn check(lsts: &FsPath, r: &FsPath, conds: &str, state: Option<&str>, bound: Option<usize>) -> Result<Value, Error> {
    let l = load_lsts(lsts)?;
    let rf = load_r(r, &l)?;
    let conds = Condition::parse_list(conds)?;
    let bound = bound.unwrap_or_else(|| default_bound(l.num_states()));
    let states: Vec<StateId> = match state {
        Some(s) => vec![resolve_state(&l, s)?],
        None => reduce(&l, &rf)?.states().collect(),
    };
    let mut results = Vec::new();
    let mut statuses = Vec::new();
    for s in states {
        let rs = rf.get(&l, s)?;
        for &c in &conds {
            let v = check_condition(&l, &s, &rs, c, bound)?;
            statuses.push(v.status());
            results.push(json!({
                "state": s,
                "state_name": l.state_name(s),
                "set": names(&l, &rs),
                "condition": c.to_string(),
                "summary": v.witness().map(|w| describe_condition_witness(&l, w)),
                "verdict": v,
            }));
        }
    }
    Ok(json!({ "command": "check", "status": aggregate(statuses), "bound": bound, "results": results }))
}

fn explore(args: &NetArgs, mode: PorMode, bound: Option<usize>) -> Result<Value, Error> {
    let net = load_net(&args.net)?;
    let props = load_props(args.props.as_deref(), &net)?;
    let run = stubborn::explore_with_por(&net, &props, args.invisibility, mode, args.state_cap, args.box_bound)?;
    let l = &run.full.lsts;
    let bound = bound.unwrap_or_else(|| default_bound(l.num_states()));
    let mut failures = Vec::new();
    let mut statuses = Vec::new();
    for s in run.reduced.states() {
        let rs = &run.reduced.r[&s];
        for c in mode.conditions() {
            let v = check_condition(l, &s, rs, c, bound)?;
            statuses.push(v.status());
            if let Some(w) = v.witness() {
                failures.push(json!({ "state": l.state_name(s), "condition": c.to_string(), "summary": describe_condition_witness(l, w), "verdict": v }));
            }
        }
    }
    let lv = check_l(&run.reduced);
    statuses.push(lv.status());
    let sets: serde_json::Map<String, Value> = run.reduced.r.iter().map(|(&s, rs)| (l.state_name(s).to_string(), json!(names(l, rs)))).collect();
    Ok(json!({
        "command": "explore",
        "status": aggregate(statuses),
        "mode": mode.to_string(),
        "bound": bound,
        "full": { "states": l.num_states(), "transitions": l.transitions().len() },
        "reduced_counts": { "states": run.reduced.num_states(), "transitions": run.reduced.num_transitions() },
        "condition_failures": failures,
        "check_l": lv,
        "sets": sets,
        "reduced": run.reduced.lsts.to_json_value(),
    }))
}

fn compare(full: &FsPath, reduced: Option<&FsPath>, r: Option<&FsPath>, mode: CompareMode, limits: Limits) -> Result<Value, Error> {
    let l = load_lsts(full)?;
    let red: ReducedLsts = match (reduced, r) {
        (Some(path), _) => ReducedLsts::from_subgraph(&l, load_lsts(path)?)?,
        (None, Some(path)) => reduce(&l, &load_r(path, &l)?)?,
        (None, None) => return Err(Error::Input("one of --reduced or --r is required".into())),
    };
    let mut report = json!({
        "command": "compare",
        "mode": format!("{mode:?}").to_lowercase(),
        "limits": limits,
    });
    let verdict: Verdict<OracleWitness> = match mode {
        CompareMode::Stutter => oracle::check_stutter_trace_equivalence(&l, &red, limits)?,
        CompareMode::Weak => oracle::check_weak_trace_equivalence(&l, &red, l.invisible(), limits)?,
        CompareMode::Deadlock => {
            let d = oracle::check_deadlock_preservation(&l, &red, limits)?;
            report["permutations"] = json!(d.permutations);
            d.verdict
        }
        CompareMode::Labels => oracle::check_reachable_labellings(&l, &red),
    };
    report["status"] = json!(verdict.status());
    report["summary"] = json!(verdict.witness().map(|w| describe_oracle_witness(&l, w)));
    if let Some(OracleWitness::Unmatched { witness, .. }) = verdict.witness() {
        report["nostut"] = json!(l.format_trace(&witness.nostut));
    }
    report["verdict"] = json!(verdict);
    Ok(report)
}

fn generate(kind: GenKind, model: Option<&str>, out_dir: Option<&FsPath>, params: &GenParams) -> Result<Value, Error> {
    let (mut report, files) = match model {
        Some(id) => {
            let m = models::builtin_model(id)?;
            (json!({ "model": m.to_json_value()? }), m.export_files()?)
        }
        None => match kind {
            GenKind::Lsts => {
                let l = models::random_lsts(params);
                let doc = l.to_json_value();
                (json!({ "params": params, "lsts": doc.clone() }), vec![(format!("random_lsts_{}.json", params.seed), doc)])
            }
            GenKind::Pn => {
                let (net, ps) = models::random_pn_case(params);
                let (n, p) = (net.to_json_value(), props::props_to_json_value(&ps, &net));
                (
                    json!({ "params": params, "net": n.clone(), "props": p.clone() }),
                    vec![(format!("random_net_{}.json", params.seed), n), (format!("random_props_{}.json", params.seed), p)],
                )
            }
        },
    };
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::Input(format!("cannot create {}: {e}", dir.display())))?;
        let mut written = Vec::new();
        for (name, doc) in files {
            let path = dir.join(&name);
            fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n").map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            written.push(name);
        }
        report["written"] = json!(written);
    }
    report["command"] = json!("gen");
    report["status"] = json!("holds");
    Ok(report)
}
