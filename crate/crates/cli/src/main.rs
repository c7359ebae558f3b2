//! `promise-color` command-line front end.

mod args;
mod error;
mod report;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use promise_color::alpha::{alpha_kl_cached, alpha_prime_kl, alpha_table, AlphaEstimate, AlphaTable, KmsConstants};
use promise_color::derand::derand_round;
use promise_color::gadget::{
    bonami_beckner, completeness_value, pcp_reduce, scale_gadget, LabelCoverInstance, MarkovOperator,
};
use promise_color::oracle::{exact_rho, OracleBudget};
use promise_color::round::{best_of, expected_fj_value, expected_kms_value, RoundingMethod, RoundingOutcome};
use promise_color::{solve_relaxation, GramSolution, Graph, SolverOptions, Value};

use crate::args::{Cli, Command, Common, Format, Method, Palettes, Rounding};
use crate::error::{CliError, EXIT_USAGE};
use crate::report::Report;

type Result<T> = std::result::Result<T, CliError>;

/// Label-cover assignments searched by `pcp` before giving up.
const LABEL_SEARCH_BUDGET: u64 = 1_000_000;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn read_graph(path: &Path) -> Result<Graph> {
    Ok(Graph::parse(&read(path)?).map_err(promise_color::Error::from)?)
}

fn read_vectors(path: &Path) -> Result<GramSolution> {
    let text = read(path)?;
    let sol = if text.trim_start().starts_with('{') {
        GramSolution::from_json(&text)?
    } else {
        GramSolution::from_text(&text)?
    };
    Ok(sol)
}

fn exact(v: &Value) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

fn palettes(p: &Palettes) -> Result<(u32, u32)> {
    let l = p.l.unwrap_or(p.k);
    if p.k < 2 || l < p.k {
        return Err(CliError::Usage(format!("need 2 <= k <= l, got k = {}, l = {l}", p.k)));
    }
    Ok((p.k, l))
}

fn check_rounding(r: &Rounding) -> Result<()> {
    if !(r.epsilon > 0.0) {
        return Err(CliError::Usage(format!("epsilon must be positive, got {}", r.epsilon)));
    }
    if r.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    Ok(())
}

fn estimate_json(e: &AlphaEstimate) -> serde_json::Value {
    json!({
        "value": e.value,
        "error_bound": e.abs_error_bound,
        "method": e.method,
        "a_star": e.diagnostics.a_star,
    })
}

/// Rounds `sol` and fills the shared part of the solve/round reports.
fn round_into(
    report: &mut Report,
    g: &Graph,
    sol: &GramSolution,
    ell: u32,
    rounding: &Rounding,
    seed: u64,
) -> Result<RoundingOutcome> {
    let k = sol.k;
    let (constant, expected, outcome) = match rounding.method {
        Method::Derand => (
            Some(alpha_kl_cached(k, ell)?.value),
            expected_fj_value(g, sol, ell)?,
            derand_round(g, sol, ell, rounding.epsilon, None)?,
        ),
        Method::Fj => (
            Some(alpha_kl_cached(k, ell)?.value),
            expected_fj_value(g, sol, ell)?,
            best_of(g, sol, ell, RoundingMethod::Fj, rounding.trials, seed)?,
        ),
        Method::Kms => (
            // the hyperplane constant is only defined for k >= 3
            alpha_prime_kl(k, ell).ok().map(|e| e.value),
            expected_kms_value(g, sol, ell)?,
            best_of(g, sol, ell, RoundingMethod::Kms, rounding.trials, seed)?,
        ),
    };
    report
        .set("graph", json!({ "n": g.n(), "m": g.m() }))
        .set("k", k)
        .set("l", ell)
        .set("epsilon", rounding.epsilon)
        .set("sdp_objective", sol.objective)
        .set("sdp_violation", sol.feas_tol)
        .set("rounding_constant", constant)
        .set("predicted_floor", constant.map(|c| c * sol.objective - rounding.epsilon))
        .set("expected_value", expected)
        .extend(outcome.to_json_value());
    Ok(outcome)
}

enum Output {
    Report(Report),
    /// Tables keep their own CSV and text layouts.
    Table(Report, AlphaTable),
}

impl Output {
    fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Table(_, t), Format::Csv) => t.to_csv(),
            (Output::Table(_, t), Format::Text) => t.to_text(),
            (Output::Report(r) | Output::Table(r, _), _) => r.render(format),
        }
    }
}

fn run(cli: Cli) -> Result<Output> {
    let Common { seed, deterministic, .. } = cli.common;
    match cli.command {
        Command::Solve {
            graph,
            palettes: p,
            rounding,
            feas_tol,
            gap_tol,
            save_vectors,
        } => {
            let (k, ell) = palettes(&p)?;
            check_rounding(&rounding)?;
            let g = read_graph(&graph)?;
            let defaults = SolverOptions::default();
            let opts = SolverOptions {
                seed,
                feas_tol: feas_tol.unwrap_or(defaults.feas_tol),
                target_eps: gap_tol.unwrap_or(defaults.target_eps),
                ..defaults
            };
            let sol = solve_relaxation(&g, k, &opts)?;
            if let Some(path) = save_vectors {
                write(&path, &sol.to_text())?;
            }
            let mut report = Report::new("solve", deterministic);
            report.set("alpha_kl", alpha_kl_cached(k, ell)?.value);
            round_into(&mut report, &g, &sol, ell, &rounding, seed)?;
            Ok(Output::Report(report))
        }
        Command::Round {
            graph,
            vectors,
            l,
            rounding,
        } => {
            check_rounding(&rounding)?;
            let g = read_graph(&graph)?;
            let sol = read_vectors(&vectors)?;
            if l < sol.k {
                return Err(CliError::Usage(format!("need l >= k = {}, got l = {l}", sol.k)));
            }
            let mut report = Report::new("round", deterministic);
            round_into(&mut report, &g, &sol, l, &rounding, seed)?;
            Ok(Output::Report(report))
        }
        Command::Alpha { palettes: p } => {
            let (k, ell) = palettes(&p)?;
            let mut report = Report::new("alpha", deterministic);
            let fj = alpha_kl_cached(k, ell)?;
            report.set("k", k).set("l", ell).set("alpha_kl", estimate_json(&fj));
            let mut best = ("alpha_kl", fj.value);
            if k >= 3 {
                let prime = alpha_prime_kl(k, ell)?;
                let kms = KmsConstants::new(k, ell)?;
                report.set("alpha_prime_kl", estimate_json(&prime)).set(
                    "hyperplane",
                    json!({
                        "t": kms.t,
                        "x_k": kms.x_k,
                        "u_k": kms.u_k,
                        "closed_form": kms.closed_form(),
                    }),
                );
                if prime.value > best.1 {
                    best = ("alpha_prime_kl", prime.value);
                }
            }
            report.set("best", best.1).set("best_method", best.0);
            Ok(Output::Report(report))
        }
        Command::Table {
            k_min,
            k_max,
            l_min,
            l_max,
        } => {
            if k_min < 2 || k_min > k_max || l_min > l_max {
                return Err(CliError::Usage("need 2 <= k-min <= k-max and l-min <= l-max".into()));
            }
            let ks: Vec<u32> = (k_min..=k_max).collect();
            let ells: Vec<u32> = (l_min..=l_max).collect();
            let table = alpha_table(&ks, &ells)?;
            let cells: Vec<serde_json::Value> = table
                .iter()
                .map(|(k, l, e)| {
                    json!({ "k": k, "l": l, "alpha": e.value, "error_bound": e.abs_error_bound, "a_star": e.diagnostics.a_star })
                })
                .collect();
            let mut report = Report::new("table", deterministic);
            report.set("cells", cells);
            Ok(Output::Table(report, table))
        }
        Command::Oracle { graph, k, budget } => {
            let g = read_graph(&graph)?;
            let limits = OracleBudget {
                max_vertices: budget,
                ..OracleBudget::default()
            };
            let (value, colouring) = exact_rho(&g, k, &limits)?;
            let mut report = Report::new("oracle", deterministic);
            report
                .set("graph", json!({ "n": g.n(), "m": g.m() }))
                .set("k", k)
                .set("value", exact(&value))
                .set("value_float", *value.numer() as f64 / *value.denom() as f64)
                .set("colouring", colouring.colours().to_vec());
            Ok(Output::Report(report))
        }
        Command::Gadget {
            graph,
            ratio,
            graph_out,
        } => {
            let (p, q) = ratio
                .split_once('/')
                .and_then(|(p, q)| Some((p.trim().parse::<u64>().ok()?, q.trim().parse::<u64>().ok()?)))
                .ok_or_else(|| CliError::Usage(format!("ratio `{ratio}` is not of the form p/q")))?;
            let g = read_graph(&graph)?;
            let h = scale_gadget(&g, p, q)?;
            let mut report = Report::new("gadget", deterministic);
            report
                .set("p", p)
                .set("q", q)
                .set("input", json!({ "n": g.n(), "m": g.m() }))
                .set("n", h.n())
                .set("m", h.m())
                .set("loops", h.loop_mass());
            match graph_out {
                Some(path) => write(&path, &h.to_dimacs())?,
                None => {
                    report.set("graph_text", h.to_dimacs());
                }
            }
            Ok(Output::Report(report))
        }
        Command::Pcp {
            instance,
            k,
            operator,
            r_blow,
            budget,
            graph_out,
        } => {
            let inst = LabelCoverInstance::parse(&read(&instance)?)?;
            let op = match operator {
                Some(path) => MarkovOperator::parse(&read(&path)?, k as usize)?,
                None => bonami_beckner(k as usize)?,
            };
            let g = pcp_reduce(&inst, k as usize, &op, r_blow.unwrap_or(inst.r()), budget)?;
            if let Some(path) = graph_out {
                write(&path, &g.to_dimacs())?;
            }
            let (label_value, assignment) = inst.optimal_assignment(LABEL_SEARCH_BUDGET)?;
            let completeness = completeness_value(&inst, &assignment, k as usize, &g)?;
            let mut report = Report::new("pcp", deterministic);
            report
                .set("instance", json!({ "left": inst.left(), "right": inst.right(), "p": inst.p(), "r": inst.r(), "edges": inst.edges().len() }))
                .set("operator", json!({ "domain": op.domain(), "grain": op.grain().to_string(), "spectral_radius": op.spectral_radius() }))
                .set("n", g.n())
                .set("m", g.m())
                .set("label_cover_value", exact(&label_value))
                .set("assignment", json!({ "left": assignment.left, "right": assignment.right }))
                .set("completeness_value", exact(&completeness));
            Ok(Output::Report(report))
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let format = cli.common.format;
    let output = cli.common.output.clone();
    match run(cli) {
        Ok(out) => {
            let text = out.render(format);
            let written = match output {
                Some(path) => write(&path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code())
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
