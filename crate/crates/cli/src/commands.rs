use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use multicake::division::{divide, verify_allocation, CheckKind, GuaranteeMode, Report};
use multicake::efm::{envy_free_matching, max_matching, BipartiteGraph};
use multicake::envyfree2::divide_ef2;
use multicake::oracles::{mms_witness_instance, worstcase_instance};
use multicake::rectilinear::{decompose, divide_polygon, reflex_vertices, staircase_instance};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CliError;
use crate::format::{
    AllocationFile, DecompositionFile, GraphFile, InstanceFile, MatchingFile, PlotEntry, PolygonDivisionFile,
    PolygonFile, Rat, RectEntry,
};

/// Exact fair division of multicakes and rectilinear land.
///
/// Results are written as JSON to `--output`, with a short report on stdout.
/// Without `--output` the JSON itself goes to stdout.
#[derive(Debug, Parser)]
#[command(name = "multicake", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Divide an instance, each agent getting at most k intervals.
    Divide {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Recheck an allocation against its instance.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        allocation: PathBuf,
    },
    /// Two-agent envy-free division.
    Ef2 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Envy-free matching of a bipartite graph.
    Efm {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decompose or divide a rectilinear polygon.
    #[command(subcommand)]
    Polygon(PolygonCommand),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Debug, Subcommand)]
pub enum PolygonCommand {
    /// Split a rectilinear polygon into at most T + 1 rectangles.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Give each agent at most k rectangles inside the polygon.
    Divide {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Instance on which no allocation beats the absolute guarantee.
    Worstcase {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Staircase polygon with identical agents.
    Staircase {
        #[arg(long = "T")]
        t: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Random instance with certified maximin-share thresholds.
    Mms {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Writes `value` to `output`, or to `out` when no path is given. Returns
/// whether a report should follow on `out`.
fn emit<T: Serialize>(value: &T, output: Option<&Path>, out: &mut dyn Write) -> Result<bool, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?;
            Ok(true)
        }
        None => {
            write_out(out, &text)?;
            Ok(false)
        }
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn kind_name(kind: CheckKind) -> &'static str {
    match kind {
        CheckKind::WithinBounds => "within-bounds",
        CheckKind::KFeasible => "k-feasible",
        CheckKind::ValueMatches => "value-matches",
        CheckKind::Guarantee => "guarantee",
        CheckKind::GuaranteeMatches => "guarantee-matches",
        CheckKind::Disjoint => "disjoint",
        CheckKind::CutBound => "cut-bound",
        CheckKind::CutCount => "cut-count",
    }
}

fn report_lines(report: &Report, ids: &[String]) -> String {
    let mut text = String::new();
    for check in &report.checks {
        let who = match check.agent {
            Some(agent) => format!("agent {}", ids.get(agent).map_or("?", String::as_str)),
            None => "allocation".to_string(),
        };
        let status = if check.passed { "ok  " } else { "FAIL" };
        text.push_str(&format!("{status} {who} {}", kind_name(check.kind)));
        if !check.detail.is_empty() {
            text.push_str(&format!(": {}", check.detail));
        }
        text.push('\n');
    }
    text
}

fn share_summary(file: &AllocationFile) -> String {
    let mut text = String::new();
    for agent in &file.agents {
        text.push_str(&format!(
            "agent {} ({}): {} interval(s), value {} >= guarantee {}\n",
            agent.id,
            agent.mode,
            agent.intervals.len(),
            agent.value,
            agent.guarantee
        ));
    }
    text.push_str(&format!("cuts: {}\n", file.cuts));
    text
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Divide { input, output } => cmd_divide(input, output.as_deref(), out),
        Command::Verify { input, allocation } => cmd_verify(input, allocation, out),
        Command::Ef2 { input, output } => cmd_ef2(input, output.as_deref(), out),
        Command::Efm { graph, output } => cmd_efm(graph, output.as_deref(), out),
        Command::Polygon(PolygonCommand::Decompose { input, output }) => cmd_decompose(input, output.as_deref(), out),
        Command::Polygon(PolygonCommand::Divide { input, k, output }) => {
            cmd_polygon_divide(input, *k, output.as_deref(), out)
        }
        Command::Gen(gen) => cmd_gen(gen, out),
    }
}

fn cmd_divide(input: &Path, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let file: InstanceFile = read_json(input)?;
    let (inst, modes) = file.to_instance()?;
    let alloc = divide(&inst, &modes)?;
    let report = verify_allocation(&inst, &modes, &alloc)?;
    if !report.passed() {
        return Err(CliError::Internal(format!(
            "division failed its own checks:\n{}",
            report_lines(&report, &file.agent_ids())
        )));
    }
    let result = AllocationFile::from_allocation(&alloc, &file.agent_ids(), &modes);
    if emit(&result, output, out)? {
        write_out(out, &share_summary(&result))?;
    }
    Ok(())
}

fn cmd_verify(input: &Path, allocation: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let file: InstanceFile = read_json(input)?;
    let (inst, _) = file.to_instance()?;
    let claimed: AllocationFile = read_json(allocation)?;
    let ids = file.agent_ids();
    let claimed_ids: Vec<String> = claimed.agents.iter().map(|a| a.id.clone()).collect();
    if claimed_ids != ids {
        return Err(CliError::Input(format!(
            "allocation agents {claimed_ids:?} do not match instance agents {ids:?}"
        )));
    }
    let (alloc, modes) = claimed.to_allocation()?;
    let report = verify_allocation(&inst, &modes, &alloc)?;
    write_out(out, &report_lines(&report, &ids))?;
    let failed = report.failures().count();
    if failed == 0 {
        write_out(out, &format!("all {} checks passed\n", report.checks.len()))?;
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| kind_name(c.kind)).collect();
        Err(CliError::Verify(format!(
            "{failed} check(s) failed: {}",
            names.join(", ")
        )))
    }
}

fn cmd_ef2(input: &Path, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let file: InstanceFile = read_json(input)?;
    let (inst, _) = file.to_instance()?;
    let division = divide_ef2(&inst)?;
    let modes = [GuaranteeMode::Absolute; 2];
    let report = verify_allocation(&inst, &modes, &division.allocation)?;
    if !report.passed() {
        return Err(CliError::Internal(format!(
            "division failed its own checks:\n{}",
            report_lines(&report, &file.agent_ids())
        )));
    }
    let result = AllocationFile::from_allocation(&division.allocation, &file.agent_ids(), &modes);
    if emit(&result, output, out)? {
        let side = if division.second_takes_left { "left" } else { "right" };
        write_out(
            out,
            &format!(
                "cut at {}, agent {} takes the {side} half\n",
                division.cut, file.agents[1].id
            ),
        )?;
        write_out(out, &share_summary(&result))?;
    }
    Ok(())
}

fn cmd_efm(graph: &Path, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let file: GraphFile = read_json(graph)?;
    let g = BipartiteGraph::new(file.n_x, file.n_y, file.edges.iter().map(|&[x, y]| (x, y)))?;
    let matching = envy_free_matching(&g);
    let result = MatchingFile {
        edges: matching.pairs().iter().map(|&(x, y)| [x, y]).collect(),
    };
    if emit(&result, output, out)? {
        write_out(
            out,
            &format!(
                "envy-free matching of size {} (maximum matching {}, |X| = {})\n",
                matching.len(),
                max_matching(&g).len(),
                file.n_x
            ),
        )?;
    }
    Ok(())
}

fn cmd_decompose(input: &Path, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let file: PolygonFile = read_json(input)?;
    let poly = file.to_polygon()?;
    let decomposition = decompose(&poly);
    let result = DecompositionFile {
        reflex: reflex_vertices(&poly).len(),
        rects: decomposition.rects.iter().map(RectEntry::from).collect(),
    };
    if emit(&result, output, out)? {
        write_out(
            out,
            &format!(
                "{} rectangle(s), {} reflex vertices, area {}\n",
                result.rects.len(),
                result.reflex,
                poly.area()
            ),
        )?;
    }
    Ok(())
}

fn cmd_polygon_divide(input: &Path, k: usize, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let file: PolygonFile = read_json(input)?;
    let poly = file.to_polygon()?;
    let densities = file.to_densities()?;
    if densities.is_empty() {
        return Err(CliError::Input(
            "polygon divide needs at least one agent density".into(),
        ));
    }
    let division = divide_polygon(&poly, &densities, k)?;
    let agents: Vec<PlotEntry> = division
        .plots
        .iter()
        .zip(&densities)
        .zip(&division.guarantees)
        .map(|((plots, density), guarantee)| PlotEntry {
            plots: plots.iter().map(RectEntry::from).collect(),
            value: plots.iter().map(|r| density.value(r)).sum::<multicake::Scalar>().into(),
            guarantee: guarantee.into(),
        })
        .collect();
    if let Some(short) = agents.iter().position(|a| a.value < a.guarantee) {
        return Err(CliError::Internal(format!(
            "agent {short} received less than its guarantee"
        )));
    }
    let result = PolygonDivisionFile {
        reflex: division.reflex,
        rects: division.decomposition.rects.iter().map(RectEntry::from).collect(),
        agents,
    };
    if emit(&result, output, out)? {
        for (agent, entry) in result.agents.iter().enumerate() {
            write_out(
                out,
                &format!(
                    "agent {agent}: {} plot(s), value {} >= guarantee {}\n",
                    entry.plots.len(),
                    entry.value,
                    entry.guarantee
                ),
            )?;
        }
    }
    Ok(())
}

fn cmd_gen(gen: &GenCommand, out: &mut dyn Write) -> Result<(), CliError> {
    match gen {
        GenCommand::Worstcase { m, n, k, output } => {
            let inst = worstcase_instance(*m, *n, *k)?;
            let file = InstanceFile::from_instance(&inst, &vec![GuaranteeMode::Absolute; *n]);
            if emit(&file, output.as_deref(), out)? {
                write_out(out, &format!("worst case with m = {m}, n = {n}, k = {k}\n"))?;
            }
        }
        GenCommand::Staircase { t, n, output } => {
            let (poly, density) = staircase_instance(*t, *n)?;
            let file = PolygonFile::from_parts(&poly, &vec![density; *n]);
            if emit(&file, output.as_deref(), out)? {
                write_out(out, &format!("staircase with T = {t} for {n} identical agents\n"))?;
            }
        }
        GenCommand::Mms { n, k, seed, output } => {
            let (inst, witness) = mms_witness_instance(*n, *k, *seed)?;
            let file = InstanceFile::from_instance(&inst, &vec![GuaranteeMode::Absolute; *n]);
            if emit(&file, output.as_deref(), out)? {
                let thresholds: Vec<String> = witness.thresholds.iter().map(|t| Rat::from(t).to_string()).collect();
                write_out(out, &format!("maximin-share thresholds: {}\n", thresholds.join(" ")))?;
            }
        }
    }
    Ok(())
}
