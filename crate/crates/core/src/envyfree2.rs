//! Envy-free division between two agents, each keeping at most `k`
//! intervals.
//!
//! The first agent lays the islands on a line with the cheapest ones at the
//! two ends, cuts the line where the best-`k` value of both halves is equal,
//! and the second agent picks a half.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::division::{absolute_guarantee, Allocation, Instance, Share};
use crate::error::{Error, Result};
use crate::model::{best_k_intervals, top_k_sum, IslandId, Multicake, Piece, SubInterval, ValueMeasure};
use crate::scalar::{self, Scalar};

/// Islands placed on the line `(0, m)`: slot `s` is `(s, s + 1)`, stretched
/// over the whole island in slot `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    slots: Vec<IslandId>,
}

impl Arrangement {
    pub fn new(slots: Vec<IslandId>) -> Result<Self> {
        let distinct: BTreeSet<_> = slots.iter().copied().collect();
        if distinct.len() != slots.len() || slots.iter().any(|&id| id >= slots.len()) {
            return Err(Error::input("an arrangement must be a permutation of the island ids"));
        }
        Ok(Arrangement { slots })
    }

    pub fn slots(&self) -> &[IslandId] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot_of(&self, island: IslandId) -> Option<usize> {
        self.slots.iter().position(|&id| id == island)
    }

    /// The part of the multicake lying over `[a, b]` of the line.
    pub fn piece(&self, lengths: &[Scalar], a: &Scalar, b: &Scalar) -> Result<Piece> {
        let m = scalar::from_usize(self.slots.len());
        if scalar::is_negative(a) || a > b || b > &m {
            return Err(Error::input(format!("line interval [{a}, {b}] outside (0, {m})")));
        }
        let mut parts = Vec::new();
        for (slot, &island) in self.slots.iter().enumerate() {
            let lo = scalar::from_usize(slot);
            let hi = &lo + scalar::one();
            let start = scalar::max(lo.clone(), a.clone());
            let end = scalar::min(hi, b.clone());
            if start < end {
                let length = &lengths[island];
                parts.push(SubInterval::new(island, (start - &lo) * length, (end - &lo) * length));
            }
        }
        Piece::new(parts)
    }
}

/// Cheapest island in the leftmost slot, the next in the rightmost, the
/// third in the second slot from the left, and so on; ties by id.
pub fn order_islands_alternating(measure: &ValueMeasure, cake: &Multicake) -> Result<Arrangement> {
    let mut ranked = cake
        .islands()
        .iter()
        .map(|island| Ok((measure.island_value(island.id)?, island.id)))
        .collect::<Result<Vec<_>>>()?;
    ranked.sort();
    let m = ranked.len();
    let mut slots = alloc::vec![0; m];
    let (mut left, mut right) = (0, m);
    for (rank, (_, id)) in ranked.into_iter().enumerate() {
        if rank % 2 == 0 {
            slots[left] = id;
            left += 1;
        } else {
            right -= 1;
            slots[right] = id;
        }
    }
    Arrangement::new(slots)
}

/// The smallest `x` in `[k - 1, m - k + 1]` where the best-`k` value of the
/// line left of `x` equals that of the line right of `x`.
pub fn halving_cut(measure: &ValueMeasure, arr: &Arrangement, k: usize) -> Result<Scalar> {
    let m = arr.len();
    if k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    if m + 1 < 2 * k {
        return Err(Error::input(format!(
            "{m} islands is fewer than 2k - 1 = {}",
            2 * k - 1
        )));
    }
    if measure.island_count() != m {
        return Err(Error::input("measure and arrangement disagree on the island count"));
    }
    let values = arr
        .slots
        .iter()
        .map(|&id| measure.island_value(id))
        .collect::<Result<Vec<_>>>()?;

    for slot in (k - 1)..=(m - k) {
        // f is continuous across slot boundaries, so a fresh slot starts
        // where the last one ended, below zero.
        let mut previous: Option<(Scalar, Scalar)> = None;
        let island = arr.slots[slot];
        let length = measure.length(island)?.clone();
        let value = &values[slot];
        let (whole_left, whole_right) = (&values[..slot], &values[slot + 1..]);
        let a1 = top_k_sum(whole_left, k);
        let b1 = top_k_sum(whole_left, k - 1);
        let a2 = top_k_sum(whole_right, k);
        let b2 = top_k_sum(whole_right, k - 1);

        // Between these points both sides are linear in the prefix length.
        let mut points = BTreeSet::new();
        points.insert(scalar::zero());
        points.insert(length.clone());
        for segment in measure.segments(island)? {
            points.insert(segment.start.clone());
        }
        for level in [&a1 - &b1, value - (&a2 - &b2)] {
            if level.is_positive() && &level < value {
                if let Some(p) = measure.mark(island, &level)? {
                    points.insert(p);
                }
            }
        }

        let diff = |p: &Scalar| -> Result<Scalar> {
            let prefix = measure.eval_interval(island, &scalar::zero(), p)?;
            let left = scalar::max(a1.clone(), &b1 + &prefix);
            let right = scalar::max(a2.clone(), &b2 + value - &prefix);
            Ok(left - right)
        };
        for p in points {
            let f = diff(&p)?;
            if !scalar::is_negative(&f) {
                let root = match &previous {
                    None if f.is_zero() => p,
                    None => return Err(Error::internal("best-k difference jumps above zero")),
                    Some((p0, f0)) => p0 + (&p - p0) * (-f0) / (&f - f0),
                };
                return Ok(scalar::from_usize(slot) + root / &length);
            }
            previous = Some((p, f));
        }
    }
    Err(Error::internal("no halving point in [k - 1, m - k + 1]"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyFreeDivision {
    pub allocation: Allocation,
    /// The first agent's arrangement, over the padded multicake.
    pub arrangement: Arrangement,
    /// Cut point on the line.
    pub cut: Scalar,
    pub second_takes_left: bool,
}

/// Two-agent envy-free division: agent 0 arranges and cuts, agent 1
/// chooses (ties go to the left half). Each agent keeps the best `k`
/// intervals of its half, so neither prefers the other's share and each
/// gets at least `min(1/2, k/(m+1))` of its total.
pub fn divide_ef2(inst: &Instance) -> Result<EnvyFreeDivision> {
    if inst.n() != 2 {
        return Err(Error::input(format!("the two-agent protocol got {} agents", inst.n())));
    }
    let k = inst.k;
    let m = inst.m();
    let cake = inst.cake.with_dummies((2 * k - 1).saturating_sub(m));
    let measures = inst
        .measures
        .iter()
        .map(|measure| measure.padded_to(&cake))
        .collect::<Result<Vec<_>>>()?;
    let lengths: Vec<Scalar> = cake.islands().iter().map(|island| island.length.clone()).collect();

    let arrangement = order_islands_alternating(&measures[0], &cake)?;
    let cut = halving_cut(&measures[0], &arrangement, k)?;
    let end = scalar::from_usize(cake.len());
    let left = arrangement.piece(&lengths, &scalar::zero(), &cut)?;
    let right = arrangement.piece(&lengths, &cut, &end)?;

    let best_left = best_k_intervals(&measures[1], &left, k)?;
    let best_right = best_k_intervals(&measures[1], &right, k)?;
    let second_takes_left = measures[1].eval_piece(&best_left)? >= measures[1].eval_piece(&best_right)?;
    let (second, rest) = if second_takes_left {
        (best_left, &right)
    } else {
        (best_right, &left)
    };
    let first = best_k_intervals(&measures[0], rest, k)?;

    let strip = |piece: Piece| -> Result<Piece> {
        Piece::new(piece.parts().iter().filter(|part| part.island < m).cloned().collect())
    };
    let pieces = [strip(first)?, strip(second)?];
    let mut points = BTreeSet::new();
    for piece in &pieces {
        for part in piece.parts() {
            for end in [&part.start, &part.end] {
                if !end.is_zero() && end < &lengths[part.island] {
                    points.insert((part.island, end.clone()));
                }
            }
        }
    }
    let shares = pieces
        .into_iter()
        .zip(&inst.measures)
        .map(|(piece, measure)| {
            Ok(Share {
                value: measure.eval_piece(&piece)?,
                guarantee: two_agent_guarantee(&measure.total(), m, k),
                piece,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnvyFreeDivision {
        allocation: Allocation {
            shares,
            cuts: points.len(),
        },
        arrangement,
        cut,
        second_takes_left,
    })
}

/// `min(1/2, k/(m+1))` of `total`.
pub fn two_agent_guarantee(total: &Scalar, m: usize, k: usize) -> Scalar {
    absolute_guarantee(total, 2, m, k)
}
