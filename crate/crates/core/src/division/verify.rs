//! Independent checking of an allocation against its instance.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{guarantee_for, Allocation, GuaranteeMode, Instance};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    /// Every sub-interval lies inside its island.
    WithinBounds,
    /// At most `k` maximal components.
    KFeasible,
    /// The reported value equals the recomputed one.
    ValueMatches,
    /// The recomputed value reaches the mode's guarantee.
    Guarantee,
    /// The reported guarantee equals the recomputed one.
    GuaranteeMatches,
    Disjoint,
    /// At most `n - 1` distinct cut points.
    CutBound,
    /// The reported cut count equals the number of distinct cut points.
    CutCount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    /// `None` for checks about the allocation as a whole.
    pub agent: Option<usize>,
    pub kind: CheckKind,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
    /// Recomputed value per agent.
    pub values: Vec<Scalar>,
    /// Recomputed guarantee per agent.
    pub guarantees: Vec<Scalar>,
    pub cut_points: usize,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|check| check.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|check| !check.passed)
    }

    fn push(&mut self, agent: Option<usize>, kind: CheckKind, passed: bool, detail: String) {
        self.checks.push(Check {
            agent,
            kind,
            passed,
            detail,
        });
    }
}

/// Recompute everything about `alloc` from `inst` and `modes`. Unknown
/// islands or a wrong number of shares are input errors; everything else is
/// reported as a named check.
pub fn verify_allocation(inst: &Instance, modes: &[GuaranteeMode], alloc: &Allocation) -> Result<Report> {
    let n = inst.n();
    if modes.len() != n {
        return Err(Error::input(format!("{} modes given for {n} agents", modes.len())));
    }
    if alloc.shares.len() != n {
        return Err(Error::input(format!(
            "allocation has {} shares for {n} agents",
            alloc.shares.len()
        )));
    }
    for share in &alloc.shares {
        for part in share.piece.parts() {
            inst.cake.island(part.island)?;
        }
    }

    let mut report = Report::default();
    for (agent, (share, &mode)) in alloc.shares.iter().zip(modes).enumerate() {
        let who = Some(agent);
        let inside = share.piece.check_within(&inst.cake).is_ok();
        report.push(who, CheckKind::WithinBounds, inside, String::new());

        let components = share.piece.component_count();
        report.push(
            who,
            CheckKind::KFeasible,
            components <= inst.k,
            format!("{components} components, k = {}", inst.k),
        );

        let measure = &inst.measures[agent];
        let value = if inside {
            measure.eval_piece(&share.piece)?
        } else {
            scalar::zero()
        };
        report.push(
            who,
            CheckKind::ValueMatches,
            value == share.value,
            format!("reported {}, recomputed {value}", share.value),
        );

        let guarantee = if measure.total().is_zero() {
            scalar::zero()
        } else {
            guarantee_for(inst, agent, mode)?.0
        };
        report.push(
            who,
            CheckKind::Guarantee,
            value >= guarantee,
            format!("value {value}, guarantee {guarantee}"),
        );
        report.push(
            who,
            CheckKind::GuaranteeMatches,
            guarantee == share.guarantee,
            format!("reported {}, recomputed {guarantee}", share.guarantee),
        );
        report.values.push(value);
        report.guarantees.push(guarantee);
    }

    let mut disjoint = true;
    for (i, a) in alloc.shares.iter().enumerate() {
        for (j, b) in alloc.shares.iter().enumerate().skip(i + 1) {
            if !a.piece.is_disjoint(&b.piece) {
                disjoint = false;
                report.push(None, CheckKind::Disjoint, false, format!("agents {i} and {j} overlap"));
            }
        }
    }
    if disjoint {
        report.push(None, CheckKind::Disjoint, true, String::new());
    }

    let mut points = BTreeSet::new();
    for share in &alloc.shares {
        for part in share.piece.parts() {
            let length = inst.cake.length(part.island)?;
            for end in [&part.start, &part.end] {
                if !end.is_zero() && end < length {
                    points.insert((part.island, end.clone()));
                }
            }
        }
    }
    let cut_points = points.len();
    report.push(
        None,
        CheckKind::CutBound,
        cut_points < n.max(1),
        format!("{cut_points} cut points for {n} agents"),
    );
    report.push(
        None,
        CheckKind::CutCount,
        cut_points == alloc.cuts,
        format!("reported {}, found {cut_points}", alloc.cuts),
    );
    report.cut_points = cut_points;
    Ok(report)
}
