//! Multicake division with a per-agent value guarantee.
//!
//! [`divide`] normalizes every agent's measure so the guarantee becomes
//! "value at least `k`", then repeatedly allocates partial pieces (by mark
//! auction or by envy-free matching) until one agent remains, who takes
//! their best `k` islands of what is left.

mod engine;
mod verify;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

pub use engine::{Award, Board, Method, Outcome, PartialAllocation, Prefix, Remnant, RoundRecord, ThresholdPair};
pub use verify::{verify_allocation, Check, CheckKind, Report};

use crate::error::{Error, Result};
use crate::model::{best_k_islands, Multicake, Piece, ValueMeasure};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub cake: Multicake,
    pub measures: Vec<ValueMeasure>,
    pub k: usize,
}

impl Instance {
    pub fn new(cake: Multicake, measures: Vec<ValueMeasure>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::input("k must be at least 1"));
        }
        if measures.is_empty() {
            return Err(Error::input("at least one agent is required"));
        }
        for (agent, measure) in measures.iter().enumerate() {
            if measure.island_count() != cake.len() {
                return Err(Error::input(format!(
                    "measure of agent {agent} does not cover the multicake"
                )));
            }
            for island in cake.islands() {
                if measure.length(island.id)? != &island.length {
                    return Err(Error::input(format!(
                        "measure of agent {agent} disagrees on the length of island {}",
                        island.id
                    )));
                }
            }
        }
        Ok(Instance { cake, measures, k })
    }

    pub fn n(&self) -> usize {
        self.measures.len()
    }

    pub fn m(&self) -> usize {
        self.cake.len()
    }
}

/// Which guarantee an agent asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GuaranteeMode {
    /// `min(1/n, k/(m+n-1))` of the whole multicake.
    Absolute,
    /// `1/n` of the agent's best `k` islands.
    Relative,
    /// Whichever of the two is larger for this agent.
    Best,
}

/// How a participating agent's measure was rescaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Total value `m' + n - 1`.
    Absolute,
    /// Total value `k n`, supported on the agent's best `k` islands.
    Relative,
    /// Scaled so a certified maximin-share threshold becomes `k`.
    Witness,
}

/// `min(1/n, k/(m+n-1)) * total`.
pub fn absolute_guarantee(total: &Scalar, n: usize, m: usize, k: usize) -> Scalar {
    let fraction = scalar::min(
        Scalar::new(1.into(), n.into()),
        Scalar::new(k.into(), (m + n - 1).into()),
    );
    fraction * total
}

/// `best_k / n`.
pub fn relative_guarantee(best_k: &Scalar, n: usize) -> Scalar {
    best_k / scalar::from_usize(n)
}

/// Guarantee of `agent` under `mode`, in the agent's original units, and the
/// normalization that realizes it. Ties between the two go to absolute.
pub fn guarantee_for(inst: &Instance, agent: usize, mode: GuaranteeMode) -> Result<(Scalar, Normalization)> {
    let measure = inst
        .measures
        .get(agent)
        .ok_or_else(|| Error::input(format!("unknown agent {agent}")))?;
    let absolute = || absolute_guarantee(&measure.total(), inst.n(), inst.m(), inst.k);
    let relative = || -> Result<Scalar> {
        let best = best_k_islands(measure, &inst.cake, inst.k, &BTreeSet::new())?;
        let value: Scalar = best
            .iter()
            .map(|&id| measure.island_value(id))
            .sum::<Result<Scalar>>()?;
        Ok(relative_guarantee(&value, inst.n()))
    };
    Ok(match mode {
        GuaranteeMode::Absolute => (absolute(), Normalization::Absolute),
        GuaranteeMode::Relative => (relative()?, Normalization::Relative),
        GuaranteeMode::Best => {
            let (abs, rel) = (absolute(), relative()?);
            if rel > abs {
                (rel, Normalization::Relative)
            } else {
                (abs, Normalization::Absolute)
            }
        }
    })
}

/// An instance rescaled so every participating agent's target is `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedInstance {
    /// Original islands followed by zero-value dummies.
    pub cake: Multicake,
    /// Normalized measures of the participating agents, in participant order.
    pub measures: Vec<ValueMeasure>,
    pub k: usize,
    /// Original indices of agents with positive total value.
    pub participants: Vec<usize>,
    /// Original indices of zero-value agents; they receive empty pieces.
    pub degenerate: Vec<usize>,
    pub schemes: Vec<Normalization>,
    /// Factor applied to each participant's measure.
    pub scales: Vec<Scalar>,
    /// Guarantee per original agent, in original units.
    pub guarantees: Vec<Scalar>,
    pub original_islands: usize,
}

impl NormalizedInstance {
    /// Island count after dummy padding, `max(m, nk - n + 1)` over the
    /// participating agents.
    pub fn padded_len(m: usize, participants: usize, k: usize) -> usize {
        if participants == 0 {
            return m;
        }
        m.max(participants * k - participants + 1)
    }
}

pub fn normalize(inst: &Instance, modes: &[GuaranteeMode]) -> Result<NormalizedInstance> {
    if modes.len() != inst.n() {
        return Err(Error::input(format!(
            "{} modes given for {} agents",
            modes.len(),
            inst.n()
        )));
    }
    let mut guarantees = Vec::with_capacity(inst.n());
    let mut planned = Vec::new();
    let mut degenerate = Vec::new();
    for (agent, &mode) in modes.iter().enumerate() {
        if inst.measures[agent].total().is_zero() {
            degenerate.push(agent);
            guarantees.push(scalar::zero());
            continue;
        }
        let (guarantee, scheme) = guarantee_for(inst, agent, mode)?;
        guarantees.push(guarantee);
        planned.push((agent, scheme));
    }

    let n = planned.len();
    let k = inst.k;
    let padded = NormalizedInstance::padded_len(inst.m(), n, k);
    let cake = inst.cake.with_dummies(padded - inst.m());
    let mut measures = Vec::with_capacity(n);
    let mut scales = Vec::with_capacity(n);
    for &(agent, scheme) in &planned {
        let measure = &inst.measures[agent];
        let (base, scale) = match scheme {
            Normalization::Absolute => {
                let target = scalar::from_usize(padded + n - 1);
                (measure.clone(), target / measure.total())
            }
            Normalization::Relative => {
                let best: BTreeSet<_> = best_k_islands(measure, &inst.cake, k, &BTreeSet::new())?
                    .into_iter()
                    .collect();
                let restricted = measure.restricted(&best);
                let target = scalar::from_usize(k * n);
                let scale = target / restricted.total();
                (restricted, scale)
            }
            Normalization::Witness => unreachable!("witness scaling is set up by divide_mms"),
        };
        measures.push(base.scaled(&scale).padded_to(&cake)?);
        scales.push(scale);
    }
    Ok(NormalizedInstance {
        cake,
        measures,
        k,
        participants: planned.iter().map(|&(agent, _)| agent).collect(),
        degenerate,
        schemes: planned.iter().map(|&(_, scheme)| scheme).collect(),
        scales,
        guarantees,
        original_islands: inst.m(),
    })
}

/// One agent's share of an allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Share {
    pub piece: Piece,
    /// Value of the piece in the agent's original units.
    pub value: Scalar,
    pub guarantee: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub shares: Vec<Share>,
    /// Number of cuts made inside islands.
    pub cuts: usize,
}

impl Allocation {
    pub fn pieces(&self) -> impl Iterator<Item = &Piece> {
        self.shares.iter().map(|share| &share.piece)
    }

    /// Smallest ratio `value / total` over agents with positive total.
    pub fn min_fraction(&self, inst: &Instance) -> Option<Scalar> {
        self.shares
            .iter()
            .zip(&inst.measures)
            .filter_map(|(share, measure)| {
                let total = measure.total();
                (!total.is_zero()).then(|| &share.value / total)
            })
            .min()
    }
}

/// Divide `inst` giving every agent at most `k` intervals and at least the
/// guarantee of its mode.
pub fn divide(inst: &Instance, modes: &[GuaranteeMode]) -> Result<Allocation> {
    divide_with_trace(inst, modes).map(|(allocation, _)| allocation)
}

/// Like [`divide`], also returning one record per partial-allocation round.
pub fn divide_with_trace(inst: &Instance, modes: &[GuaranteeMode]) -> Result<(Allocation, Vec<RoundRecord>)> {
    let norm = normalize(inst, modes)?;
    let outcome = Board::new(&norm.cake, &norm.measures, norm.k, &norm.schemes)?.run()?;
    let allocation = assemble(inst, &norm, &outcome)?;
    Ok((allocation, outcome.rounds))
}

/// Run the division with every agent normalized by a certified maximin-share
/// threshold: agent `i` is scaled so `thresholds[i]` becomes `k`.
///
/// With `k = 1` every agent is guaranteed `thresholds[i]` whenever the
/// thresholds are at most the agents' maximin shares. For `k >= 2` no such
/// guarantee exists; the returned allocation reports what was achieved and
/// may fall short.
pub fn divide_mms(inst: &Instance, thresholds: &[Scalar]) -> Result<Allocation> {
    if thresholds.len() != inst.n() {
        return Err(Error::input("one threshold per agent required"));
    }
    let mut participants = Vec::new();
    let mut degenerate = Vec::new();
    for (agent, threshold) in thresholds.iter().enumerate() {
        if scalar::is_negative(threshold) {
            return Err(Error::input(format!("negative threshold for agent {agent}")));
        }
        if threshold.is_zero() || inst.measures[agent].total().is_zero() {
            degenerate.push(agent);
        } else {
            participants.push(agent);
        }
    }
    let k = inst.k;
    let padded = NormalizedInstance::padded_len(inst.m(), participants.len(), k);
    let cake = inst.cake.with_dummies(padded - inst.m());
    let mut measures = Vec::new();
    let mut scales = Vec::new();
    for &agent in &participants {
        let scale = scalar::from_usize(k) / &thresholds[agent];
        measures.push(inst.measures[agent].scaled(&scale).padded_to(&cake)?);
        scales.push(scale);
    }
    let norm = NormalizedInstance {
        cake,
        measures,
        k,
        schemes: participants.iter().map(|_| Normalization::Witness).collect(),
        participants,
        degenerate,
        scales,
        guarantees: thresholds.to_vec(),
        original_islands: inst.m(),
    };
    let outcome = Board::new(&norm.cake, &norm.measures, norm.k, &norm.schemes)?.run()?;
    assemble(inst, &norm, &outcome)
}

fn assemble(inst: &Instance, norm: &NormalizedInstance, outcome: &Outcome) -> Result<Allocation> {
    let mut pieces: Vec<Piece> = (0..inst.n()).map(|_| Piece::empty()).collect();
    for (position, parts) in outcome.pieces.iter().enumerate() {
        let agent = norm.participants[position];
        let real = parts
            .iter()
            .filter(|part| part.island < norm.original_islands)
            .cloned()
            .collect();
        pieces[agent] = Piece::new(real)?;
    }
    let shares = pieces
        .into_iter()
        .enumerate()
        .map(|(agent, piece)| {
            Ok(Share {
                value: inst.measures[agent].eval_piece(&piece)?,
                guarantee: norm.guarantees[agent].clone(),
                piece,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Allocation {
        shares,
        cuts: outcome.cuts,
    })
}

/// Threshold of the normalized problem: every participant must reach `k`.
pub(crate) fn target(k: usize) -> Scalar {
    scalar::from_usize(k) * Scalar::one()
}
