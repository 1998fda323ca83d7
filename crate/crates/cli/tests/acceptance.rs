//! The acceptance criteria driven through the command layer: instances
//! travel as JSON files, commands are parsed from argument lists and their
//! JSON output is checked. One PASS or FAIL line per criterion.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use multicake::division::{divide_mms, GuaranteeMode};
use multicake::model::{best_k_value, Piece};
use multicake::oracles::{mms_counterexample_instance, mms_witness_instance, random_instance};
use multicake::scalar::{self, from_usize, int, ratio};
use multicake::Scalar;
use multicake_cli::format::{
    AllocationFile, DecompositionFile, GraphFile, InstanceFile, MatchingFile, PolygonDivisionFile, PolygonFile, Rat,
};
use multicake_cli::{run, Cli, CliError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn put<T: serde::Serialize>(&self, name: &str, value: &T) -> PathBuf {
        let path = self.path(name);
        fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
        path
    }

    /// Runs one command line, returning its stdout.
    fn run(&self, args: &[&str]) -> Result<String, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("multicake").chain(args.iter().copied()))
            .map_err(|e| CliError::Input(e.to_string()))?;
        let mut out = Vec::new();
        run(&cli, &mut out)?;
        Ok(String::from_utf8(out).unwrap())
    }

    fn json<T: serde::de::DeserializeOwned>(&self, args: &[&str]) -> Result<T, String> {
        let text = self.run(args).map_err(|e| format!("{args:?}: {e}"))?;
        serde_json::from_str(&text).map_err(|e| format!("{args:?}: {e}"))
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn fraction(n: usize, m: usize, k: usize) -> Scalar {
    scalar::min(
        Scalar::new(1.into(), n.into()),
        Scalar::new(k.into(), (n + m - 1).into()),
    )
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_modes(rng: &mut ChaCha8Rng, n: usize) -> Vec<GuaranteeMode> {
    (0..n)
        .map(|_| [GuaranteeMode::Absolute, GuaranteeMode::Relative, GuaranteeMode::Best][rng.gen_range(0..3)])
        .collect()
}

/// Divide through the command layer, then verify the written allocation.
fn divide_and_verify(ws: &Workspace, file: &InstanceFile, label: &str) -> Result<AllocationFile, String> {
    let input = ws.put("instance.json", file);
    let output = ws.path("allocation.json");
    ws.run(&["divide", "--input", p(&input), "--output", p(&output)])
        .map_err(|e| format!("{label}: {e}"))?;
    ws.run(&["verify", "--input", p(&input), "--allocation", p(&output)])
        .map_err(|e| format!("{label}: {e}"))?;
    serde_json::from_str(&fs::read_to_string(&output).unwrap()).map_err(|e| format!("{label}: {e}"))
}

fn guarantee() -> Outcome {
    let ws = Workspace::new();
    let mut count = 0;
    let mut sizes = rng(3);
    let grid = (1..=5).flat_map(|n| (1..=9).flat_map(move |m| (1..=3).map(move |k| (n, m, k))));
    let extra: Vec<_> = (0..80)
        .map(|_| (sizes.gen_range(1..=5), sizes.gen_range(1..=9), sizes.gen_range(1..=3)))
        .collect();
    for (seed, (n, m, k)) in grid.chain(extra).enumerate() {
        let inst = random_instance(n, m, k, 5_000 + seed as u64).unwrap();
        let file = InstanceFile::from_instance(&inst, &vec![GuaranteeMode::Absolute; n]);
        let label = format!("n={n} m={m} k={k} seed={seed}");
        let alloc = divide_and_verify(&ws, &file, &label)?;
        ensure!(alloc.cuts < n, "{label}: {} cuts", alloc.cuts);
        for (agent, measure) in alloc.agents.iter().zip(&inst.measures) {
            ensure!(
                agent.intervals.len() <= k,
                "{label}: agent {} holds too many intervals",
                agent.id
            );
            let bound = fraction(n, m, k) * measure.total();
            ensure!(
                agent.value.0 >= bound,
                "{label}: agent {} got {} < {bound}",
                agent.id,
                agent.value
            );
        }
        count += 1;
    }
    Ok(format!("{count} instances divided and verified through files"))
}

fn tightness() -> Outcome {
    let ws = Workspace::new();
    for n in 1..=5 {
        for m in 1..=9 {
            for k in 1..=3 {
                let file = ws.path("worst.json");
                let args = [
                    "gen",
                    "worstcase",
                    "--m",
                    &m.to_string(),
                    "--n",
                    &n.to_string(),
                    "--k",
                    &k.to_string(),
                ];
                let text = ws.run(&args).map_err(|e| e.to_string())?;
                fs::write(&file, text).unwrap();
                let alloc: AllocationFile = ws.json(&["divide", "--input", p(&file)])?;
                let min = alloc.agents.iter().map(|a| a.value.0.clone()).min().unwrap();
                let expected = fraction(n, m, k) * from_usize(n + m - 1);
                ensure!(min == expected, "m={m} n={n} k={k}: min {min}, expected {expected}");
            }
        }
    }
    Ok("135 generated worst cases hit the bound exactly".into())
}

fn relative() -> Outcome {
    let ws = Workspace::new();
    let mut r = rng(5);
    for seed in 0..60u64 {
        let (n, m, k) = (r.gen_range(1..=5), r.gen_range(1..=9), r.gen_range(1..=3));
        let inst = random_instance(n, m, k, 8_000 + seed).unwrap();
        let modes = random_modes(&mut r, n);
        let file = InstanceFile::from_instance(&inst, &modes);
        let alloc = divide_and_verify(&ws, &file, &format!("seed {seed}"))?;
        let whole = Piece::whole_islands(&inst.cake, &(0..m).collect::<Vec<_>>()).unwrap();
        for ((agent, measure), mode) in alloc.agents.iter().zip(&inst.measures).zip(&modes) {
            let rel = best_k_value(measure, &whole, k).unwrap() / from_usize(n);
            let abs = fraction(n, m, k) * measure.total();
            let need = match mode {
                GuaranteeMode::Absolute => abs,
                GuaranteeMode::Relative => rel,
                GuaranteeMode::Best => scalar::max(abs, rel),
            };
            ensure!(
                agent.value.0 >= need,
                "seed {seed}: agent {} got {} < {need}",
                agent.id,
                agent.value
            );
        }
    }

    let mut text = String::from(r#"{"k": 2, "islands": ["#);
    text += &(0..7)
        .map(|i| format!(r#"{{"id": {i}, "length": "1"}}"#))
        .collect::<Vec<_>>()
        .join(", ");
    text += r#"], "agents": [{"id": "first", "mode": "best", "densities": {"#;
    let first = ["24/5", "24/5", "1/10", "1/10", "1/10", "0", "1/10"];
    text += &first
        .iter()
        .enumerate()
        .map(|(i, v)| format!(r#""{i}": [["0", "1", "{v}"]]"#))
        .collect::<Vec<_>>()
        .join(", ");
    text += "}}";
    for agent in 1..4 {
        text += &format!(r#", {{"id": "a{agent}", "mode": "absolute", "densities": {{"#);
        text += &(0..7)
            .map(|i| format!(r#""{i}": [["0", "1", "10/7"]]"#))
            .collect::<Vec<_>>()
            .join(", ");
        text += "}}";
    }
    text += "]}";
    let input = ws.path("narrated.json");
    fs::write(&input, text).unwrap();
    let alloc: AllocationFile = ws.json(&["divide", "--input", p(&input)])?;
    ensure!(
        alloc.agents[0].guarantee.0 == ratio(12, 5),
        "guarantee {}",
        alloc.agents[0].guarantee
    );
    ensure!(
        alloc.agents[0].value.0 >= ratio(12, 5),
        "value {}",
        alloc.agents[0].value
    );
    ensure!(
        alloc.agents[1..].iter().all(|a| a.guarantee.0 == int(2)),
        "absolute guarantees differ from 2"
    );
    Ok("60 mixed-mode files verified, best-2 value 9.6 gives 2.4".into())
}

fn matchings() -> Outcome {
    let ws = Workspace::new();
    let path = ws.path("graph.json");
    for mask in 0u32..1 << 16 {
        let edges: Vec<[usize; 2]> = (0..16).filter(|b| mask >> b & 1 == 1).map(|b| [b / 4, b % 4]).collect();
        let graph = GraphFile {
            n_x: 4,
            n_y: 4,
            edges: edges.clone(),
        };
        fs::write(&path, serde_json::to_string(&graph).unwrap()).unwrap();
        let matching: MatchingFile = ws.json(&["efm", "--graph", p(&path)])?;
        let matched_y: Vec<usize> = matching.edges.iter().map(|e| e[1]).collect();
        let matched_x: Vec<usize> = matching.edges.iter().map(|e| e[0]).collect();
        for e in &matching.edges {
            ensure!(edges.contains(e), "mask {mask:#06x}: {e:?} is not an edge");
        }
        for &[x, y] in &edges {
            ensure!(
                matched_x.contains(&x) || !matched_y.contains(&y),
                "mask {mask:#06x}: unmatched {x} envies the holder of {y}"
            );
        }
        let neighbourhood: std::collections::BTreeSet<usize> = edges.iter().map(|e| e[1]).collect();
        if neighbourhood.len() >= 4 {
            ensure!(!matching.edges.is_empty(), "mask {mask:#06x}: empty matching");
        }
    }
    Ok("65536 graph files, every output envy-free".into())
}

fn two_agents() -> Outcome {
    let ws = Workspace::new();
    let mut r = rng(9);
    for seed in 0..100u64 {
        let k = r.gen_range(1..=3);
        let m = r.gen_range(2 * k - 1..=9);
        let inst = random_instance(2, m, k, 9_500 + seed).unwrap();
        let file = InstanceFile::from_instance(&inst, &[GuaranteeMode::Absolute; 2]);
        let input = ws.put("two.json", &file);
        let output = ws.path("ef2.json");
        let report = ws
            .run(&["ef2", "--input", p(&input), "--output", p(&output)])
            .map_err(|e| format!("seed {seed}: {e}"))?;
        ws.run(&["verify", "--input", p(&input), "--allocation", p(&output)])
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let cut = report
            .lines()
            .find_map(|line| line.strip_prefix("cut at ").and_then(|rest| rest.split(',').next()))
            .ok_or_else(|| format!("seed {seed}: no cut in report"))?;
        let cut = scalar::parse(cut).map_err(|e| e.to_string())?;
        ensure!(
            cut >= from_usize(k - 1) && cut <= from_usize(m - k + 1),
            "seed {seed}: cut {cut}"
        );
        let alloc: AllocationFile = serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
        let (alloc, _) = alloc.to_allocation().map_err(|e| e.to_string())?;
        for i in 0..2 {
            let v = &inst.measures[i];
            let own = best_k_value(v, &alloc.shares[i].piece, k).unwrap();
            let other = best_k_value(v, &alloc.shares[1 - i].piece, k).unwrap();
            ensure!(own >= other, "seed {seed}: agent {i} envies");
            let bound = scalar::min(ratio(1, 2), Scalar::new(k.into(), (m + 1).into())) * v.total();
            ensure!(alloc.shares[i].value >= bound, "seed {seed}: agent {i} below bound");
        }
    }
    Ok("100 two-agent files envy-free and verified".into())
}

/// Columns of random heights standing on the x axis.
fn skyline(r: &mut ChaCha8Rng) -> (PolygonFile, usize, i64) {
    let width = r.gen_range(1..=7);
    let heights: Vec<i64> = (0..width).map(|_| r.gen_range(1..=5)).collect();
    let mut outline = vec![[0, 0], [width as i64, 0]];
    for x in (0..width).rev() {
        outline.push([x as i64 + 1, heights[x]]);
        outline.push([x as i64, heights[x]]);
    }
    outline.dedup();
    let len = outline.len();
    let corners: Vec<[i64; 2]> = (0..len)
        .filter(|&i| {
            let (a, b, c) = (outline[(i + len - 1) % len], outline[i], outline[(i + 1) % len]);
            (b[0] - a[0]) * (c[1] - b[1]) != (b[1] - a[1]) * (c[0] - b[0])
        })
        .map(|i| outline[i])
        .collect();
    let reflex = heights.windows(2).filter(|w| w[0] != w[1]).count();
    let file = PolygonFile {
        vertices: corners.iter().map(|&[x, y]| [Rat(int(x)), Rat(int(y))]).collect(),
        densities: Vec::new(),
    };
    (file, reflex, heights.iter().sum())
}

fn polygons() -> Outcome {
    let ws = Workspace::new();
    let mut r = rng(13);
    for round in 0..200 {
        let (file, reflex, area) = skyline(&mut r);
        let input = ws.put("poly.json", &file);
        let d: DecompositionFile = ws.json(&["polygon", "decompose", "--input", p(&input)])?;
        ensure!(
            d.reflex == reflex,
            "skyline {round}: {} reflex, expected {reflex}",
            d.reflex
        );
        ensure!(
            d.rects.len() <= reflex + 1,
            "skyline {round}: {} rectangles",
            d.rects.len()
        );
        let total: Scalar = d
            .rects
            .iter()
            .map(|r| (&r.xmax.0 - &r.xmin.0) * (&r.ymax.0 - &r.ymin.0))
            .sum();
        ensure!(total == int(area), "skyline {round}: area {total}, expected {area}");
    }
    for t in 1..=4 {
        for n in 1..=3 {
            let path = ws.path("stairs.json");
            let args = [
                "gen",
                "staircase",
                "--T",
                &t.to_string(),
                "--n",
                &n.to_string(),
                "--output",
                p(&path),
            ];
            ws.run(&args).map_err(|e| e.to_string())?;
            let file: PolygonFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
            let total: Scalar = file.densities[0]
                .iter()
                .map(|c| (&c.xmax.0 - &c.xmin.0) * (&c.ymax.0 - &c.ymin.0) * &c.height.0)
                .sum();
            let division: PolygonDivisionFile = ws.json(&["polygon", "divide", "--input", p(&path), "--k", "1"])?;
            let min = division.agents.iter().map(|a| a.value.0.clone()).min().unwrap();
            ensure!(division.reflex == t, "T={t} n={n}: reflex {}", division.reflex);
            let expected = total / from_usize(n + t);
            ensure!(min == expected, "T={t} n={n}: min {min}, expected {expected}");
        }
    }
    Ok("200 skylines, 12 staircases at V/(n+T)".into())
}

fn maximin() -> Outcome {
    let ws = Workspace::new();
    for seed in 0..50u64 {
        let n = 2 + seed as usize % 3;
        let file: InstanceFile = ws.json(&[
            "gen",
            "mms",
            "--n",
            &n.to_string(),
            "--k",
            "1",
            "--seed",
            &seed.to_string(),
        ])?;
        let (inst, _) = file.to_instance().map_err(|e| e.to_string())?;
        let (expected, witness) = mms_witness_instance(n, 1, seed).unwrap();
        ensure!(
            inst == expected,
            "seed {seed}: generated file differs from the generator"
        );
        let alloc = divide_mms(&inst, &witness.thresholds).map_err(|e| e.to_string())?;
        for (agent, share) in alloc.shares.iter().enumerate() {
            ensure!(
                share.value >= witness.thresholds[agent],
                "seed {seed}: agent {agent} short"
            );
        }
    }
    let (inst, witness) = mms_counterexample_instance().unwrap();
    let file = InstanceFile::from_instance(&inst, &[GuaranteeMode::Absolute; 2]);
    let (parsed, _) = file.to_instance().map_err(|e| e.to_string())?;
    let short = divide_mms(&parsed, &witness.thresholds).map_err(|e| e.to_string())?;
    ensure!(
        short.shares[1].value == ratio(3, 2),
        "second agent got {}",
        short.shares[1].value
    );
    let alloc = divide_and_verify(&ws, &file, "counterexample")?;
    ensure!(
        alloc.agents.iter().all(|a| a.value.0 >= ratio(8, 5)),
        "absolute division fell below 8/5"
    );
    Ok("50 generated witness files at k = 1, shortfall 3/2, absolute >= 8/5".into())
}

fn scaling() -> Outcome {
    let ws = Workspace::new();
    let mut r = rng(17);
    for seed in 0..50u64 {
        let (n, m, k) = (r.gen_range(1..=5), r.gen_range(1..=9), r.gen_range(1..=3));
        let inst = random_instance(n, m, k, 12_000 + seed).unwrap();
        let modes = random_modes(&mut r, n);
        let file = InstanceFile::from_instance(&inst, &modes);
        let agent = r.gen_range(0..n);
        let factor = ratio(r.gen_range(1..=12), r.gen_range(1..=7));
        let mut scaled = file.clone();
        for rows in scaled.agents[agent].densities.values_mut() {
            for row in rows {
                row[2] = Rat(&row[2].0 * &factor);
            }
        }
        let a = divide_and_verify(&ws, &file, &format!("seed {seed}"))?;
        let b = divide_and_verify(&ws, &scaled, &format!("seed {seed} scaled"))?;
        ensure!(a.cuts == b.cuts, "seed {seed}: cut counts differ");
        for (x, y) in a.agents.iter().zip(&b.agents) {
            let xs = serde_json::to_string(&x.intervals).unwrap();
            let ys = serde_json::to_string(&y.intervals).unwrap();
            ensure!(xs == ys, "seed {seed}: agent {} intervals changed", x.id);
        }
    }
    Ok("50 instances, interval JSON byte-identical after scaling".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 guarantee on grid and random instances", guarantee),
        ("2 worst-case tightness", tightness),
        ("3 relative and best modes", relative),
        ("4 envy-free matching, all 4x4 graphs", matchings),
        ("5 two-agent envy-free division", two_agents),
        ("6 rectilinear decomposition and staircases", polygons),
        ("7 maximin shares", maximin),
        ("8 scaling invariance", scaling),
    ];
    let results: Vec<Outcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria.iter().map(|&(_, f)| scope.spawn(f)).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err("panicked".into())))
            .collect()
    });
    let mut failed = 0;
    for ((name, _), outcome) in criteria.iter().zip(results) {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
