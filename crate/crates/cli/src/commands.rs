use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use chargeplan::energetic::{mfc_all_pairs, mic_all_pairs, solver_by_name, EnergeticSolver};
use chargeplan::extensions::{add_source, apsp_via_mcp, with_initial_charges, SourceSpec};
use chargeplan::io::{witness_line, write_matrix};
use chargeplan::minplus::CostMatrix;
use chargeplan::numeric::{format_value, parse_value};
use chargeplan::oracle::{integral_graph, oracle_mcp, oracle_mcp_bounded, DEFAULT_STATE_BUDGET};
use chargeplan::plan::parse_plan;
use chargeplan::random::{rng_from_seed, InstanceFamily};
use chargeplan::{
    mcp_all_pairs, mcp_bounded, parse_graph, reconstruct_plan, validate_plan, Error, Graph, Int, NumericMode,
    PlanCostResult, Scalar, VertexId,
};
use rand::Rng;

use crate::config::{Flag, RunConfig};

/// Why a command failed; decides the exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Lib(Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Lib(e) => match e {
                Error::Parse(_)
                | Error::InvalidGraph(_)
                | Error::InvalidArgument(_)
                | Error::NonIntegral(_)
                | Error::StrictModeRequired(_)
                | Error::DimensionMismatch(_) => 1,
                _ => 2,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "UsageError",
            Failure::Io(_) => "IoError",
            Failure::Lib(e) => e.kind(),
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<String, Failure>;

pub trait Command: Sync {
    fn name(&self) -> &'static str;
    fn flags(&self) -> &'static [Flag];
    /// Number of positional input files.
    fn inputs(&self) -> usize {
        1
    }
    fn run(&self, cfg: &RunConfig) -> Outcome;
}

pub fn registry() -> Vec<Box<dyn Command>> {
    vec![
        Box::new(Mfc),
        Box::new(Mic),
        Box::new(Mcp),
        Box::new(McpBounded),
        Box::new(AddSource),
        Box::new(WithInitialCharges),
        Box::new(ApspViaMcp),
        Box::new(Oracle),
        Box::new(Validate),
        Box::new(Selftest),
    ]
}

/// Finds the command and checks that flags and inputs fit it.
pub fn resolve(cfg: &RunConfig) -> Result<Box<dyn Command>, Failure> {
    let cmd = registry()
        .into_iter()
        .find(|c| c.name() == cfg.command)
        .ok_or_else(|| {
            let names: Vec<_> = registry().iter().map(|c| c.name()).collect();
            Failure::Usage(format!("unknown command '{}' (expected one of {})", cfg.command, names.join(", ")))
        })?;
    if let Some(flag) = cfg.given_flags().into_iter().find(|f| !cmd.flags().contains(f)) {
        return Err(Failure::Usage(format!("{flag} is not accepted by {}", cmd.name())));
    }
    if cfg.inputs.len() != cmd.inputs() {
        return Err(Failure::Usage(format!(
            "{} expects {} input file(s), got {}",
            cmd.name(),
            cmd.inputs(),
            cfg.inputs.len()
        )));
    }
    Ok(cmd)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

enum Loaded {
    Int(Graph<Int>),
    Float(Graph<f64>),
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = read(path)?;
    Ok(match NumericMode::detect(&text) {
        NumericMode::Integer => Loaded::Int(parse_graph(&text).map_err(Error::from)?),
        NumericMode::Float => Loaded::Float(parse_graph(&text).map_err(Error::from)?),
    })
}

/// Runs `$body` with `$g` bound to the graph in the first input, in
/// whichever arithmetic the file calls for.
macro_rules! on_graph {
    ($cfg:expr, $g:ident => $body:expr) => {
        match load(&$cfg.inputs[0])? {
            Loaded::Int($g) => $body,
            Loaded::Float($g) => $body,
        }
    };
}

fn solver<T: Scalar>(cfg: &RunConfig) -> Result<Box<dyn EnergeticSolver<T>>, Failure> {
    Ok(solver_by_name(cfg.mode().solver_name())?)
}

fn charge<T: Scalar>(cfg: &RunConfig) -> Result<T, Failure> {
    match &cfg.initial_charge {
        None => Ok(T::ZERO),
        Some(s) => parse_value(s.trim())
            .filter(|v: &T| v.is_finite())
            .ok_or_else(|| Failure::Usage(format!("--initial-charge expects a number, got '{s}'"))),
    }
}

/// `v:a,v:a,...`
fn charge_pairs<T: Scalar>(cfg: &RunConfig, required: bool) -> Result<Vec<(VertexId, T)>, Failure> {
    let Some(text) = &cfg.initial_charge else {
        return if required {
            Err(Failure::Usage("--initial-charge is required".into()))
        } else {
            Ok(Vec::new())
        };
    };
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|pair| {
            let bad = || Failure::Usage(format!("--initial-charge expects vertex:charge pairs, got '{pair}'"));
            let (v, a) = pair.trim().split_once(':').ok_or_else(bad)?;
            let v = v.parse().map_err(|_| bad())?;
            let a = parse_value(a).filter(|a: &T| a.is_finite()).ok_or_else(bad)?;
            Ok((v, a))
        })
        .collect()
}

fn budget(cfg: &RunConfig) -> u128 {
    cfg.budget.unwrap_or(DEFAULT_STATE_BUDGET)
}

fn matrix<T: Scalar>(cfg: &RunConfig, m: &CostMatrix<T>) -> String {
    write_matrix(m, cfg.format())
}

fn rows_matrix<T: Scalar>(rows: Vec<Vec<T>>) -> Result<CostMatrix<T>, Failure> {
    Ok(CostMatrix::from_rows(rows)?)
}

fn write_witnesses<T: Scalar>(path: &Path, g: &Graph<T>, res: &PlanCostResult<T>) -> Result<(), Failure> {
    let mut out = String::new();
    for s in 0..g.n() {
        for t in 0..g.n() {
            if res.rho.get(s, t).is_pos_inf() {
                let _ = writeln!(out, "{s} {t} inf");
            } else {
                let plan = reconstruct_plan(g, res, s, t)?;
                let _ = writeln!(out, "{}", witness_line(s, t, &plan));
            }
        }
    }
    fs::write(path, out).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

struct Mfc;

impl Command for Mfc {
    fn name(&self) -> &'static str {
        "mfc"
    }
    fn flags(&self) -> &'static [Flag] {
        &[Flag::Mode, Flag::InitialCharge, Flag::Format]
    }
    fn run(&self, cfg: &RunConfig) -> Outcome {
        on_graph!(cfg, g => {
            let table = mfc_all_pairs(&g, charge(cfg)?, solver(cfg)?.as_ref(), false)?;
            Ok(matrix(cfg, &rows_matrix(table.matrix.rows())?))
        })
    }
}

struct Mic;

impl Command for Mic {
    fn name(&self) -> &'static str {
        "mic"
    }
    fn flags(&self) -> &'static [Flag] {
        &[Flag::Mode, Flag::InitialCharge, Flag::Format]
    }
    fn run(&self, cfg: &RunConfig) -> Outcome {
        on_graph!(cfg, g => {
            let table = mic_all_pairs(&g, charge(cfg)?, solver(cfg)?.as_ref(), false)?;
            Ok(matrix(cfg, &rows_matrix(table.matrix.rows())?))
        })
    }
}

struct Mcp;

impl Command for Mcp {
    fn name(&self) -> &'static str {
        "mcp"
    }
    fn flags(&self) -> &'static [Flag] {
        &[Flag::Mode, Flag::Format, Flag::Witnesses]
    }
    fn run(&self, cfg: &RunConfig) -> Outcome {
        on_graph!(cfg, g => {
            let res = mcp_all_pairs(&g, solver(cfg)?.as_ref(), cfg.witnesses.is_some())?;
            if let Some(path) = &cfg.witnesses {
                write_witnesses(path, &g, &res)?;
            }
            Ok(matrix(cfg, &res.rho))
        })
    }
}

struct McpBounded;

impl Command for McpBounded {
    fn name(&self) -> &'static str {
        "mcp-bounded"
    }
    fn flags(&self) -> &'static [Flag] {
        &[Flag::Mode, Flag::Delta, Flag::Format, Flag::Witnesses]
    }
    fn run(&self, cfg: &RunConfig) -> Outcome {
        let delta = cfg
            .delta
            .ok_or_else(|| Failure::Usage("mcp-bounded requires --delta".into()))?;
        on_graph!(cfg, g => {
            let res = mcp_bounded(&g, delta, solver(cfg)?.as_ref(), cfg.witnesses.is_some())?;
            if let Some(path) = &cfg.witnesses {
                write_witnesses(path, &g, &res)?;
            }
            Ok(matrix(cfg, &res.rho))
        })
    }
}

struct AddSource;

impl Command for AddSource {
    fn name(&self) -> &'static str {
        "add-source"
    }
    fn flags(&self) -> &'static [Flag] {
        &[Flag::Mode, Flag::InitialCharge, Flag::Format]
    }
    fn run(&self, cfg: &RunConfig) -> Outcome {
        on_graph!(cfg, g => {
            let spec = SourceSpec::new(charge_pairs(cfg, true)?);
            let solver = solver(cfg)?;
            if !solver.is_strict() {
                return Err(Error::StrictModeRequired(
                    "source additions assume a graph without negative cycles".into(),
                )
                .into());
            }
            let pre = mcp_all_pairs(&g, solver.as_ref(), false)?;
            let out = add_source(&g, &pre, &spec, solver.as_ref())?;
            Ok(matrix(cfg, &rows_matrix(vec![out.rho])?))
        })
    }
}

struct WithInitialCharges;

impl Command for WithInitialCharges {
    fn name(&self) -> &'static str {
        "with-initial-charges"
    }
    fn flags(&self) -> &'static [Flag] {
        &[Flag::Mode, Flag::InitialCharge, Flag::Format]
    }
    fn run(&self, cfg: &RunConfig) -> Outcome {
        on_graph!(cfg, g => {
            let n = g.n();
            let mut initial = vec![Scalar::ZERO; n];
            for (v, a) in charge_pairs(cfg, false)? {
                if v >= n {
                    return Err(Failure::Usage(format!("--initial-charge names vertex {v}, graph has {n}")));
                }
                initial[v] = a;
            }
            let lifted = with_initial_charges(&g, &initial)?;
            let res = mcp_all_pairs(&lifted, solver(cfg)?.as_ref(), false)?;
            let rows = (0..n).map(|s| res.rho.row(n + s)[..n].to_vec()).collect();
            Ok(matrix(cfg, &rows_matrix(rows)?))
        })
    }
}

struct ApspViaMcp;

impl Command for ApspViaMcp {
    fn name(&self) -> &'static str {
        "apsp-via-mcp"
    }
    fn flags(&self) -> &'static [Flag] {
        &[Flag::Mode, Flag::Format]
    }
    fn run(&self, cfg: &RunConfig) -> Outcome {
        on_graph!(cfg, g => Ok(matrix(cfg, &apsp_via_mcp(&g, solver(cfg)?.as_ref())?)))
    }
}

struct Oracle;

impl Command for Oracle {
    fn name(&self) -> &'static str {
        "oracle"
    }
    fn flags(&self) -> &'static [Flag] {
        &[Flag::Delta, Flag::Format, Flag::Budget]
    }
    fn run(&self, cfg: &RunConfig) -> Outcome {
        let g = match load(&cfg.inputs[0])? {
            Loaded::Int(g) => g,
            Loaded::Float(g) => integral_graph(&g)?,
        };
        let rows = (0..g.n())
            .map(|s| match cfg.delta {
                Some(d) => oracle_mcp_bounded(&g, s, d, budget(cfg)),
                None => oracle_mcp(&g, s, budget(cfg)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(matrix(cfg, &rows_matrix(rows)?))
    }
}

struct Validate;

impl Command for Validate {
    fn name(&self) -> &'static str {
        "validate"
    }
    fn flags(&self) -> &'static [Flag] {
        &[Flag::InitialCharge]
    }
    fn inputs(&self) -> usize {
        2
    }
    fn run(&self, cfg: &RunConfig) -> Outcome {
        let plan_text = read(&cfg.inputs[1])?;
        on_graph!(cfg, g => {
            let plan = parse_plan(&plan_text).map_err(Error::from)?;
            let cost = validate_plan(&g, charge(cfg)?, &plan)?;
            Ok(format!("valid\t{}\n", format_value(cost)))
        })
    }
}

struct Selftest;

impl Selftest {
    fn check(g: &Graph<Int>, delta: usize, budget: u128) -> Result<(bool, usize), Error> {
        let (res, fixpoint) = match mcp_all_pairs(g, solver_by_name("strict")?.as_ref(), true) {
            Err(Error::NegativeCycleDetected { .. }) => {
                (mcp_all_pairs(g, solver_by_name("fixpoint")?.as_ref(), true)?, true)
            }
            other => (other?, false),
        };
        let bounded = mcp_bounded(g, delta, solver_by_name(if fixpoint { "fixpoint" } else { "strict" })?.as_ref(), false)?;
        let mismatch = |what: &str, s: usize| {
            Error::Internal(format!("{what} row {s} disagrees with the oracle on\n{}", g.to_text()))
        };
        for s in 0..g.n() {
            if oracle_mcp(g, s, budget)? != res.rho.row(s) {
                return Err(mismatch("plan cost", s));
            }
            if oracle_mcp_bounded(g, s, delta, budget)? != bounded.rho.row(s) {
                return Err(mismatch(&format!("{delta}-recharge plan cost"), s));
            }
            for t in 0..g.n() {
                if res.rho.get(s, t).is_finite() {
                    let plan = reconstruct_plan(g, &res, s, t)?;
                    if validate_plan(g, 0, &plan)? != res.rho.get(s, t) {
                        return Err(mismatch("witness", s));
                    }
                }
            }
        }
        Ok((fixpoint, g.n() * g.n()))
    }
}

impl Command for Selftest {
    fn name(&self) -> &'static str {
        "selftest"
    }
    fn flags(&self) -> &'static [Flag] {
        &[Flag::Seed, Flag::Instances, Flag::Budget]
    }
    fn inputs(&self) -> usize {
        0
    }
    fn run(&self, cfg: &RunConfig) -> Outcome {
        let seed = cfg.seed.unwrap_or(0);
        let count = cfg.instances.unwrap_or(100);
        let family = InstanceFamily::small_signed();
        let mut rng = rng_from_seed(seed);
        let (mut fixpoint, mut pairs) = (0, 0);
        for _ in 0..count {
            let g = family.sample(&mut rng);
            let delta = rng.gen_range(0..=g.n());
            let (used_fixpoint, checked) = Self::check(&g, delta, budget(cfg))?;
            fixpoint += used_fixpoint as usize;
            pairs += checked;
        }
        Ok(format!(
            "selftest\tseed {seed}\t{count} instances\t{fixpoint} fixpoint\t{pairs} pairs\tok\n"
        ))
    }
}
