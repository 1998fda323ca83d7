//! The repeated partial-allocation loop on a normalized instance.
//!
//! The board holds the remaining pieces of the multicake as a list of
//! remnants. A remnant is an original island, the right-hand rest of an
//! island that was cut, or a dummy added during the run. Indices into that
//! list are what the threshold-pair search and the auction operate on.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Signed;

use super::{target, Normalization};
use crate::efm::{envy_free_matching, BipartiteGraph};
use crate::error::{Error, Result};
use crate::model::{IslandId, Multicake, SubInterval, ValueMeasure};
use crate::scalar::{self, Scalar};

/// What is left of one island, in the island's own coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Remnant {
    /// `None` for a dummy added after a whole island was consumed.
    pub source: Option<IslandId>,
    pub offset: Scalar,
    pub length: Scalar,
}

impl Remnant {
    fn sub_interval(&self, length: &Scalar) -> Option<SubInterval> {
        self.source
            .map(|island| SubInterval::new(island, self.offset.clone(), &self.offset + length))
    }
}

/// A leftmost part `[0, length]` of a remnant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prefix {
    pub remnant: usize,
    pub length: Scalar,
}

/// One agent's share of a partial allocation, in board indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Award {
    pub agent: usize,
    pub whole: Vec<usize>,
    pub prefix: Option<Prefix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdPair {
    /// `k - 1` remnants, barren for every active agent.
    pub a: Vec<usize>,
    pub b: usize,
    /// Agent with `V(a ∪ b) >= k`.
    pub witness: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    Auction {
        pair: ThresholdPair,
        /// Mark of every active agent; `None` when `V(a ∪ b) < k`.
        marks: Vec<(usize, Option<Scalar>)>,
    },
    Matching {
        blocks: Vec<Vec<usize>>,
        /// `(agent, block index)` pairs.
        pairs: Vec<(usize, usize)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAllocation {
    pub awards: Vec<Award>,
    pub method: Method,
}

impl PartialAllocation {
    pub fn agents(&self) -> Vec<usize> {
        self.awards.iter().map(|award| award.agent).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub active: Vec<usize>,
    pub remnants: usize,
    pub allocation: PartialAllocation,
    /// Pieces in island coordinates, one per award.
    pub pieces: Vec<(usize, Vec<SubInterval>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// Per agent, the sub-intervals received (dummies omitted).
    pub pieces: Vec<Vec<SubInterval>>,
    pub cuts: usize,
    pub rounds: Vec<RoundRecord>,
}

#[derive(Debug, Clone)]
pub struct Board<'a> {
    measures: &'a [ValueMeasure],
    schemes: &'a [Normalization],
    k: usize,
    remnants: Vec<Remnant>,
    active: Vec<usize>,
    /// `values[agent][remnant]`.
    values: Vec<Vec<Scalar>>,
    pieces: Vec<Vec<SubInterval>>,
    cuts: usize,
    rounds: Vec<RoundRecord>,
}

impl<'a> Board<'a> {
    pub fn new(cake: &Multicake, measures: &'a [ValueMeasure], k: usize, schemes: &'a [Normalization]) -> Result<Self> {
        if k == 0 {
            return Err(Error::input("k must be at least 1"));
        }
        if schemes.len() != measures.len() {
            return Err(Error::contract("one normalization per agent required"));
        }
        let n = measures.len();
        if n > 0 && cake.len() < n * k - n + 1 {
            return Err(Error::contract(format!(
                "{} islands is fewer than n k - n + 1 = {}",
                cake.len(),
                n * k - n + 1
            )));
        }
        let remnants: Vec<Remnant> = cake
            .islands()
            .iter()
            .map(|island| Remnant {
                source: Some(island.id),
                offset: scalar::zero(),
                length: island.length.clone(),
            })
            .collect();
        let mut board = Board {
            measures,
            schemes,
            k,
            remnants,
            active: (0..n).collect(),
            values: Vec::new(),
            pieces: (0..n).map(|_| Vec::new()).collect(),
            cuts: 0,
            rounds: Vec::new(),
        };
        board.values = (0..n)
            .map(|agent| {
                (0..board.remnants.len())
                    .map(|r| board.prefix_value(agent, r, &board.remnants[r].length))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        board.check_round_invariant()?;
        Ok(board)
    }

    pub fn remnants(&self) -> &[Remnant] {
        &self.remnants
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn value(&self, agent: usize, remnant: usize) -> &Scalar {
        &self.values[agent][remnant]
    }

    pub fn set_value(&self, agent: usize, set: &[usize]) -> Scalar {
        set.iter().map(|&r| &self.values[agent][r]).sum()
    }

    fn prefix_value(&self, agent: usize, remnant: usize, length: &Scalar) -> Result<Scalar> {
        let rem = &self.remnants[remnant];
        match rem.source {
            None => Ok(scalar::zero()),
            Some(island) => self.measures[agent].eval_interval(island, &rem.offset, &(&rem.offset + length)),
        }
    }

    fn award_value(&self, agent: usize, award: &Award) -> Result<Scalar> {
        let mut value = self.set_value(agent, &award.whole);
        if let Some(prefix) = &award.prefix {
            value += self.prefix_value(agent, prefix.remnant, &prefix.length)?;
        }
        Ok(value)
    }

    /// Every active agent values `set` below `k`.
    pub fn is_barren(&self, set: &[usize]) -> bool {
        let k = target(self.k);
        self.active.iter().all(|&agent| self.set_value(agent, set) < k)
    }

    /// Grow a barren set of `k - 1` remnants into a threshold pair, dropping
    /// the lowest-index remnant of `a0` whenever no agent can complete it.
    pub fn find_threshold_pair(&self, a0: &[usize]) -> Result<ThresholdPair> {
        if a0.len() + 1 != self.k {
            return Err(Error::contract(format!(
                "threshold search needs {} islands, got {}",
                self.k - 1,
                a0.len()
            )));
        }
        if !self.is_barren(a0) {
            return Err(Error::contract(
                "threshold search started from a set that is not barren",
            ));
        }
        let k = target(self.k);
        let mut a0: Vec<usize> = a0.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        loop {
            let need = self.k - a0.len();
            for &agent in &self.active {
                let mut ranked: Vec<usize> = (0..self.remnants.len()).filter(|r| !a0.contains(r)).collect();
                ranked.sort_by(|&x, &y| self.values[agent][y].cmp(&self.values[agent][x]).then(x.cmp(&y)));
                ranked.truncate(need);
                if ranked.len() < need {
                    continue;
                }
                if self.set_value(agent, &a0) + self.set_value(agent, &ranked) >= k {
                    ranked.sort_unstable();
                    let b = ranked.remove(0);
                    let mut a = a0.clone();
                    a.extend(ranked);
                    a.sort_unstable();
                    return Ok(ThresholdPair { a, b, witness: agent });
                }
            }
            if a0.is_empty() {
                return Err(Error::NoThresholdPair);
            }
            a0.remove(0);
        }
    }

    /// Every active agent marks the shortest prefix of `b` that together
    /// with `a` is worth `k`; the lowest mark wins (lowest agent on ties).
    pub fn mark_auction(&self, pair: &ThresholdPair) -> Result<PartialAllocation> {
        if pair.a.len() + 1 != self.k || pair.a.contains(&pair.b) || pair.b >= self.remnants.len() {
            return Err(Error::contract("malformed threshold pair"));
        }
        if !self.is_barren(&pair.a) {
            return Err(Error::contract("auction set is not barren"));
        }
        let k = target(self.k);
        let rem = &self.remnants[pair.b];
        let mut marks = Vec::with_capacity(self.active.len());
        let mut best: Option<(usize, Scalar)> = None;
        for &agent in &self.active {
            let base = self.set_value(agent, &pair.a);
            let mark = if &base + &self.values[agent][pair.b] < k {
                None
            } else {
                let island = rem.source.ok_or_else(|| Error::internal("positive value on a dummy"))?;
                let end = self.measures[agent]
                    .mark_from(island, &rem.offset, &(&k - &base))?
                    .ok_or_else(|| Error::internal("mark missing although the value suffices"))?;
                Some(end - &rem.offset)
            };
            if let Some(d) = &mark {
                if best.as_ref().is_none_or(|(_, current)| d < current) {
                    best = Some((agent, d.clone()));
                }
            }
            marks.push((agent, mark));
        }
        let (winner, length) = best.ok_or_else(|| Error::contract("no active agent values the threshold pair at k"))?;
        Ok(PartialAllocation {
            awards: alloc::vec![Award {
                agent: winner,
                whole: pair.a.clone(),
                prefix: Some(Prefix {
                    remnant: pair.b,
                    length
                }),
            }],
            method: Method::Auction {
                pair: pair.clone(),
                marks,
            },
        })
    }

    /// The first `n (k - 1)` remnants in order, in blocks of `k - 1`.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let size = self.k - 1;
        (0..self.active.len())
            .map(|j| (j * size..(j + 1) * size).collect())
            .collect()
    }

    pub fn partial_allocation(&self) -> Result<PartialAllocation> {
        let blocks = self.blocks();
        if let Some(barren) = blocks.iter().find(|block| self.is_barren(block)) {
            let pair = self.find_threshold_pair(barren)?;
            return self.mark_auction(&pair);
        }
        let k = target(self.k);
        let mut edges = Vec::new();
        for (x, &agent) in self.active.iter().enumerate() {
            for (y, block) in blocks.iter().enumerate() {
                if self.set_value(agent, block) >= k {
                    edges.push((x, y));
                }
            }
        }
        let graph = BipartiteGraph::new(self.active.len(), blocks.len(), edges)?;
        let matching = envy_free_matching(&graph);
        if matching.is_empty() {
            return Err(Error::internal("envy-free matching is empty with no barren block"));
        }
        let pairs: Vec<(usize, usize)> = matching.pairs().iter().map(|&(x, y)| (self.active[x], y)).collect();
        let awards = pairs
            .iter()
            .map(|&(agent, y)| Award {
                agent,
                whole: blocks[y].clone(),
                prefix: None,
            })
            .collect();
        Ok(PartialAllocation {
            awards,
            method: Method::Matching { blocks, pairs },
        })
    }

    /// Checks the three output conditions of a partial allocation: shape,
    /// `V_i(Z_i) >= k` for receivers and `V_j(Z_i) <= k` for everyone else.
    pub fn check_partial(&self, pa: &PartialAllocation) -> Result<()> {
        if pa.awards.is_empty() {
            return Err(Error::internal("partial allocation serves nobody"));
        }
        let k = target(self.k);
        let receivers: BTreeSet<usize> = pa.awards.iter().map(|a| a.agent).collect();
        let mut used = BTreeSet::new();
        for award in &pa.awards {
            if !self.active.contains(&award.agent) {
                return Err(Error::internal(format!("agent {} is not active", award.agent)));
            }
            if award.whole.len() + 1 != self.k {
                return Err(Error::internal("piece does not hold exactly k - 1 whole islands"));
            }
            let mut indices: Vec<usize> = award.whole.clone();
            if let Some(prefix) = &award.prefix {
                let rem = self
                    .remnants
                    .get(prefix.remnant)
                    .ok_or_else(|| Error::internal("prefix on an unknown remnant"))?;
                if !prefix.length.is_positive() || prefix.length > rem.length {
                    return Err(Error::internal("prefix length outside its remnant"));
                }
                indices.push(prefix.remnant);
            }
            for r in indices {
                if r >= self.remnants.len() || !used.insert(r) {
                    return Err(Error::internal("partial pieces overlap or leave the board"));
                }
            }
            if self.award_value(award.agent, award)? < k {
                return Err(Error::internal(format!("agent {} receives less than k", award.agent)));
            }
            for &other in &self.active {
                if !receivers.contains(&other) && self.award_value(other, award)? > k {
                    return Err(Error::internal(format!(
                        "agent {other} values the piece of agent {} above k",
                        award.agent
                    )));
                }
            }
        }
        Ok(())
    }

    /// Hand out a partial allocation, remove the receivers and pad with
    /// dummies so exactly `l (k - 1)` islands disappear.
    pub fn apply(&mut self, pa: &PartialAllocation) -> Result<()> {
        self.check_partial(pa)?;
        let before = self.remnants.len();
        let mut removed = BTreeSet::new();
        let mut shrunk = None;
        let mut record_pieces = Vec::new();
        for award in &pa.awards {
            let mut parts = Vec::new();
            for &r in &award.whole {
                removed.insert(r);
                let rem = &self.remnants[r];
                parts.extend(rem.sub_interval(&rem.length));
            }
            if let Some(prefix) = &award.prefix {
                let rem = &self.remnants[prefix.remnant];
                parts.extend(rem.sub_interval(&prefix.length));
                if prefix.length == rem.length {
                    removed.insert(prefix.remnant);
                } else {
                    self.cuts += 1;
                    shrunk = Some(prefix.clone());
                }
            }
            self.pieces[award.agent].extend(parts.iter().cloned());
            record_pieces.push((award.agent, parts));
        }

        let record = RoundRecord {
            active: self.active.clone(),
            remnants: before,
            allocation: pa.clone(),
            pieces: record_pieces,
        };

        if let Some(prefix) = shrunk {
            let rem = &mut self.remnants[prefix.remnant];
            rem.offset += &prefix.length;
            rem.length -= &prefix.length;
            for agent in 0..self.measures.len() {
                self.values[agent][prefix.remnant] =
                    self.prefix_value(agent, prefix.remnant, &self.remnants[prefix.remnant].length)?;
            }
        }
        let keep: Vec<bool> = (0..before).map(|r| !removed.contains(&r)).collect();
        let mut position = 0;
        self.remnants.retain(|_| {
            position += 1;
            keep[position - 1]
        });
        for row in &mut self.values {
            let mut position = 0;
            row.retain(|_| {
                position += 1;
                keep[position - 1]
            });
        }
        let receivers = pa.agents();
        self.active.retain(|agent| !receivers.contains(agent));

        let expected = before - receivers.len() * (self.k - 1);
        if self.remnants.len() > expected {
            return Err(Error::internal("more islands remain than were expected"));
        }
        while self.remnants.len() < expected {
            self.remnants.push(Remnant {
                source: None,
                offset: scalar::zero(),
                length: scalar::one(),
            });
            for row in &mut self.values {
                row.push(scalar::zero());
            }
        }
        self.rounds.push(record);
        self.check_round_invariant()
    }

    /// Between rounds every remaining agent still has enough value left:
    /// `m' + n' - 1` under absolute scaling, `k n'` under relative scaling.
    fn check_round_invariant(&self) -> Result<()> {
        let n = self.active.len();
        if n == 0 {
            return Ok(());
        }
        let m = self.remnants.len();
        if m < n * self.k - n + 1 {
            return Err(Error::internal(format!("only {m} islands left for {n} agents")));
        }
        let all: Vec<usize> = (0..m).collect();
        for &agent in &self.active {
            let bound = match self.schemes[agent] {
                Normalization::Absolute => scalar::from_usize(m + n - 1),
                Normalization::Relative => scalar::from_usize(self.k * n),
                Normalization::Witness => continue,
            };
            if self.set_value(agent, &all) < bound {
                return Err(Error::internal(format!(
                    "agent {agent} keeps less than {bound} with {n} agents and {m} islands left"
                )));
            }
        }
        Ok(())
    }

    /// The last agent's best `k` remnants.
    fn finish_last(&mut self) -> Result<()> {
        let Some(&agent) = self.active.first() else {
            return Ok(());
        };
        let mut ranked: Vec<usize> = (0..self.remnants.len()).collect();
        ranked.sort_by(|&x, &y| self.values[agent][y].cmp(&self.values[agent][x]).then(x.cmp(&y)));
        ranked.truncate(self.k);
        ranked.sort_unstable();
        if self.schemes[agent] != Normalization::Witness && self.set_value(agent, &ranked) < target(self.k) {
            return Err(Error::internal(format!("last agent {agent} gets less than k")));
        }
        for r in ranked {
            let rem = &self.remnants[r];
            self.pieces[agent].extend(rem.sub_interval(&rem.length));
        }
        self.active.clear();
        Ok(())
    }

    pub fn step(&mut self) -> Result<()> {
        let pa = self.partial_allocation()?;
        self.apply(&pa)
    }

    pub fn run(mut self) -> Result<Outcome> {
        while self.active.len() > 1 {
            self.step()?;
        }
        self.finish_last()?;
        Ok(Outcome {
            pieces: self.pieces,
            cuts: self.cuts,
            rounds: self.rounds,
        })
    }
}
