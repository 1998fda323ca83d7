//! Instance generators and exhaustive reference solvers.
//!
//! The brute-force searches here share no code with the algorithms they are
//! used to check: they enumerate matchings, cell assignments or rectangle
//! placements directly.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::division::Instance;
use crate::efm::{BipartiteGraph, Matching};
use crate::error::{Error, Result};
use crate::model::{DensitySegment, Multicake, Piece, SubInterval, ValueMeasure};
use crate::rectilinear::{decompose, Density2D, Rect, RectilinearPolygon};
use crate::scalar::{self, Scalar};

/// `n` identical agents; `m - 1` unit islands worth 1 and a last island
/// worth `n`. Nobody can be guaranteed more than
/// `min(1/n, k/(m+n-1))` of the total here.
pub fn worstcase_instance(m: usize, n: usize, k: usize) -> Result<Instance> {
    if m == 0 || n == 0 {
        return Err(Error::input("m and n must be at least 1"));
    }
    let cake = Multicake::unit(m)?;
    let mut values = vec![scalar::one(); m];
    values[m - 1] = scalar::from_usize(n);
    let measure = ValueMeasure::with_island_values(&cake, &values)?;
    Instance::new(cake, vec![measure; n], k)
}

fn random_ratio(rng: &mut ChaCha8Rng, numer: core::ops::RangeInclusive<i64>, denom: i64) -> Scalar {
    scalar::ratio(rng.gen_range(numer), rng.gen_range(1..=denom))
}

/// Random lengths and up to three density segments per island. Heights may
/// be zero but every agent's total is positive.
pub fn random_instance(n: usize, m: usize, k: usize, seed: u64) -> Result<Instance> {
    if m == 0 || n == 0 {
        return Err(Error::input("m and n must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cake = Multicake::from_lengths((0..m).map(|_| random_ratio(&mut rng, 1..=4, 3)).collect::<Vec<_>>())?;
    let mut measures = Vec::with_capacity(n);
    for _ in 0..n {
        let mut islands = Vec::with_capacity(m);
        for island in cake.islands() {
            let pieces = rng.gen_range(1..=3usize);
            let weights: Vec<i64> = (0..pieces).map(|_| rng.gen_range(1..=4)).collect();
            let total: i64 = weights.iter().sum();
            let mut start = scalar::zero();
            let mut acc = 0;
            let mut segments = Vec::with_capacity(pieces);
            for w in weights {
                acc += w;
                let end = &island.length * scalar::ratio(acc, total);
                segments.push(DensitySegment::new(
                    start.clone(),
                    end.clone(),
                    random_ratio(&mut rng, 0..=6, 3),
                ));
                start = end;
            }
            islands.push(segments);
        }
        let mut measure = ValueMeasure::new(&cake, islands.clone())?;
        if measure.total().is_zero() {
            islands[0][0].height = scalar::one();
            measure = ValueMeasure::new(&cake, islands)?;
        }
        measures.push(measure);
    }
    Instance::new(cake, measures, k)
}

/// Per agent, `n` disjoint pieces of at most `k` intervals, each worth at
/// least that agent's threshold: a certificate that the agent's maximin
/// share is at least the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmsWitness {
    pub pieces: Vec<Vec<Piece>>,
    pub thresholds: Vec<Scalar>,
}

impl MmsWitness {
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        let n = inst.n();
        if self.pieces.len() != n || self.thresholds.len() != n {
            return Err(Error::input("witness must list pieces and a threshold for every agent"));
        }
        for (agent, pieces) in self.pieces.iter().enumerate() {
            if pieces.len() != n {
                return Err(Error::input(format!(
                    "agent {agent} has {} witness pieces, expected {n}",
                    pieces.len()
                )));
            }
            for (i, piece) in pieces.iter().enumerate() {
                piece.check_within(&inst.cake)?;
                if piece.component_count() > inst.k {
                    return Err(Error::input(format!(
                        "witness piece {i} of agent {agent} has too many intervals"
                    )));
                }
                if inst.measures[agent].eval_piece(piece)? < self.thresholds[agent] {
                    return Err(Error::input(format!(
                        "witness piece {i} of agent {agent} is below the threshold"
                    )));
                }
                if pieces[..i].iter().any(|other| !other.is_disjoint(piece)) {
                    return Err(Error::input(format!("witness pieces of agent {agent} overlap")));
                }
            }
        }
        Ok(())
    }
}

/// Random instance built from a random partition into `n` parts of at most
/// `k` intervals each; every agent is scaled so its poorest part is worth
/// exactly `k`. The witness uses that partition for everyone.
pub fn mms_witness_instance(n: usize, k: usize, seed: u64) -> Result<(Instance, MmsWitness)> {
    if n == 0 || k == 0 {
        return Err(Error::input("n and k must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n)
        .flat_map(|part| core::iter::repeat_n(part, rng.gen_range(1..=k)))
        .collect();
    labels.shuffle(&mut rng);

    // Consecutive intervals share an island until a random break.
    let mut islands: Vec<Vec<(usize, Scalar)>> = vec![Vec::new()];
    for (i, &part) in labels.iter().enumerate() {
        if i > 0 && rng.gen_bool(0.5) {
            islands.push(Vec::new());
        }
        let length = random_ratio(&mut rng, 1..=3, 2);
        islands.last_mut().expect("nonempty").push((part, length));
    }
    let cake = Multicake::from_lengths(
        islands
            .iter()
            .map(|intervals| intervals.iter().map(|(_, l)| l.clone()).sum::<Scalar>())
            .collect::<Vec<_>>(),
    )?;
    let mut parts: Vec<Vec<SubInterval>> = vec![Vec::new(); n];
    for (id, intervals) in islands.iter().enumerate() {
        let mut start = scalar::zero();
        for (part, length) in intervals {
            let end = &start + length;
            parts[*part].push(SubInterval::new(id, start.clone(), end.clone()));
            start = end;
        }
    }
    let parts = parts.into_iter().map(Piece::new).collect::<Result<Vec<_>>>()?;

    let target = scalar::from_usize(k);
    let mut measures = Vec::with_capacity(n);
    for _ in 0..n {
        let segments: Vec<Vec<DensitySegment>> = islands
            .iter()
            .map(|intervals| {
                let mut start = scalar::zero();
                intervals
                    .iter()
                    .map(|(_, length)| {
                        let end = &start + length;
                        let segment = DensitySegment::new(start.clone(), end.clone(), random_ratio(&mut rng, 1..=5, 3));
                        start = end;
                        segment
                    })
                    .collect()
            })
            .collect();
        let raw = ValueMeasure::new(&cake, segments)?;
        let poorest = parts
            .iter()
            .map(|part| raw.eval_piece(part))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .ok_or_else(|| Error::internal("no parts"))?;
        measures.push(raw.scaled(&(&target / poorest)));
    }
    let inst = Instance::new(cake, measures, k)?;
    let witness = MmsWitness {
        pieces: vec![parts; n],
        thresholds: vec![target; n],
    };
    witness.validate(&inst)?;
    Ok((inst, witness))
}

/// Two identical agents, `k = 2`, islands worth 1.5, 1.5, 0.5, 0.5. Both
/// have maximin share 2 through the split `{C1, C3}`, `{C2, C4}`, yet the
/// division loop run with thresholds 2 leaves the second agent short.
pub fn mms_counterexample_instance() -> Result<(Instance, MmsWitness)> {
    let cake = Multicake::unit(4)?;
    let values = [
        scalar::ratio(3, 2),
        scalar::ratio(3, 2),
        scalar::ratio(1, 2),
        scalar::ratio(1, 2),
    ];
    let measure = ValueMeasure::with_island_values(&cake, &values)?;
    let parts = vec![
        Piece::whole_islands(&cake, &[0, 2])?,
        Piece::whole_islands(&cake, &[1, 3])?,
    ];
    let inst = Instance::new(cake, vec![measure.clone(), measure], 2)?;
    let witness = MmsWitness {
        pieces: vec![parts.clone(), parts],
        thresholds: vec![scalar::int(2); 2],
    };
    witness.validate(&inst)?;
    Ok((inst, witness))
}

const MAX_BRUTE_SIDE: usize = 8;

type Visit<'a> = dyn FnMut(&[(usize, usize)]) + 'a;

fn for_each_matching(g: &BipartiteGraph, mut visit: impl FnMut(&[(usize, usize)])) -> Result<()> {
    if g.n_x() > MAX_BRUTE_SIDE || g.n_y() > MAX_BRUTE_SIDE {
        return Err(Error::input(format!(
            "exhaustive matching search is limited to {MAX_BRUTE_SIDE} vertices per side"
        )));
    }
    fn walk(g: &BipartiteGraph, x: usize, used: &mut [bool], pairs: &mut Vec<(usize, usize)>, visit: &mut Visit) {
        if x == g.n_x() {
            visit(pairs);
            return;
        }
        walk(g, x + 1, used, pairs, visit);
        for &y in g.neighbors(x) {
            if !used[y] {
                used[y] = true;
                pairs.push((x, y));
                walk(g, x + 1, used, pairs, visit);
                pairs.pop();
                used[y] = false;
            }
        }
    }
    walk(g, 0, &mut vec![false; g.n_y()], &mut Vec::new(), &mut visit);
    Ok(())
}

/// Size of a maximum matching, by enumeration.
pub fn brute_force_max_matching_size(g: &BipartiteGraph) -> Result<usize> {
    let mut best = 0;
    for_each_matching(g, |pairs| best = best.max(pairs.len()))?;
    Ok(best)
}

/// A largest envy-free matching, by enumeration of every matching.
pub fn brute_force_efm_max(g: &BipartiteGraph) -> Result<Matching> {
    let mut best: Vec<(usize, usize)> = Vec::new();
    for_each_matching(g, |pairs| {
        if pairs.len() <= best.len() {
            return;
        }
        let matched_x: Vec<usize> = pairs.iter().map(|&(x, _)| x).collect();
        let matched_y: Vec<usize> = pairs.iter().map(|&(_, y)| y).collect();
        let envious = (0..g.n_x())
            .filter(|x| !matched_x.contains(x))
            .any(|x| g.neighbors(x).iter().any(|y| matched_y.contains(y)));
        if !envious {
            best = pairs.to_vec();
        }
    })?;
    Matching::new(best)
}

/// Per agent, cell values scaled to integers and the agent's total.
struct IntegerCells {
    values: Vec<Vec<i128>>,
    totals: Vec<i128>,
}

fn to_integers(rows: Vec<Vec<Scalar>>) -> Result<IntegerCells> {
    let mut values = Vec::with_capacity(rows.len());
    let mut totals = Vec::with_capacity(rows.len());
    for row in rows {
        let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints = row
            .iter()
            .map(|v| {
                (v.numer() * (&lcm / v.denom()))
                    .to_i128()
                    .ok_or_else(|| Error::input("cell values too large for the exhaustive search"))
            })
            .collect::<Result<Vec<_>>>()?;
        totals.push(ints.iter().sum());
        values.push(ints);
    }
    Ok(IntegerCells { values, totals })
}

/// `a/b < c/d` for positive `b`, `d`.
fn frac_less(a: (i128, i128), c: (i128, i128)) -> bool {
    a.0 * c.1 < c.0 * a.1
}

struct CellSearch<'a> {
    cells: &'a IntegerCells,
    /// First cell of each island.
    island_start: Vec<bool>,
    /// `rest[i][c]`: value to agent `i` of cells `c..`.
    rest: Vec<Vec<i128>>,
    /// Agent that must start a run before this one may (identical agents).
    twin_before: Vec<Option<usize>>,
    k: usize,
    runs: Vec<usize>,
    got: Vec<i128>,
    best: Option<(i128, i128)>,
    states: u64,
    budget: u64,
}

impl CellSearch<'_> {
    fn min_fraction(&self, extra: bool, c: usize) -> Option<(i128, i128)> {
        (0..self.got.len())
            .filter(|&i| self.cells.totals[i] > 0)
            .map(|i| {
                let bonus = if extra { self.rest[i][c] } else { 0 };
                (self.got[i] + bonus, self.cells.totals[i])
            })
            .min_by(|a, b| {
                if frac_less(*a, *b) {
                    core::cmp::Ordering::Less
                } else if frac_less(*b, *a) {
                    core::cmp::Ordering::Greater
                } else {
                    core::cmp::Ordering::Equal
                }
            })
    }

    fn walk(&mut self, c: usize, holder: Option<usize>) -> Result<()> {
        self.states += 1;
        if self.states > self.budget {
            return Err(Error::SearchBudget {
                states: self.states,
                budget: self.budget,
            });
        }
        let Some(bound) = self.min_fraction(true, c) else {
            self.best = Some((0, 1));
            return Ok(());
        };
        if let Some(best) = self.best {
            if !frac_less(best, bound) {
                return Ok(());
            }
        }
        let cell_count = self.rest[0].len() - 1;
        if c == cell_count {
            self.best = self.min_fraction(false, c);
            return Ok(());
        }
        let holder = if self.island_start[c] { None } else { holder };
        let n = self.got.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let fa = (self.got[a], self.cells.totals[a].max(1));
            let fb = (self.got[b], self.cells.totals[b].max(1));
            if frac_less(fa, fb) {
                core::cmp::Ordering::Less
            } else if frac_less(fb, fa) {
                core::cmp::Ordering::Greater
            } else {
                a.cmp(&b)
            }
        });
        for agent in order {
            let continuing = holder == Some(agent);
            if !continuing {
                if self.runs[agent] == self.k {
                    continue;
                }
                if self.runs[agent] == 0 {
                    if let Some(twin) = self.twin_before[agent] {
                        if self.runs[twin] == 0 {
                            continue;
                        }
                    }
                }
                self.runs[agent] += 1;
            }
            self.got[agent] += self.cells.values[agent][c];
            self.walk(c + 1, Some(agent))?;
            self.got[agent] -= self.cells.values[agent][c];
            if !continuing {
                self.runs[agent] -= 1;
            }
        }
        self.walk(c + 1, None)
    }
}

/// Best achievable minimum of `value / total` over agents with positive
/// total, when every island is cut into `atoms` equal cells and each agent
/// receives at most `k` runs of consecutive cells. Exhaustive branch and
/// bound; fails with [`Error::SearchBudget`] after `budget` states.
pub fn brute_force_discrete_maxmin(inst: &Instance, atoms: usize, budget: u64) -> Result<Scalar> {
    if atoms == 0 {
        return Err(Error::input("atoms must be at least 1"));
    }
    let mut rows = vec![Vec::new(); inst.n()];
    let mut island_start = Vec::new();
    for island in inst.cake.islands() {
        let step = &island.length / scalar::from_usize(atoms);
        for a in 0..atoms {
            island_start.push(a == 0);
            let lo = &step * scalar::from_usize(a);
            let hi = &step * scalar::from_usize(a + 1);
            for (agent, measure) in inst.measures.iter().enumerate() {
                rows[agent].push(measure.eval_interval(island.id, &lo, &hi)?);
            }
        }
    }
    let cells = to_integers(rows)?;
    let count = island_start.len();
    let rest = cells
        .values
        .iter()
        .map(|row| {
            let mut suffix = vec![0i128; count + 1];
            for c in (0..count).rev() {
                suffix[c] = suffix[c + 1] + row[c];
            }
            suffix
        })
        .collect();
    let twin_before = (0..inst.n())
        .map(|i| (i > 0 && inst.measures[i] == inst.measures[i - 1]).then(|| i - 1))
        .collect();
    let mut search = CellSearch {
        cells: &cells,
        island_start,
        rest,
        twin_before,
        k: inst.k,
        runs: vec![0; inst.n()],
        got: vec![0; inst.n()],
        best: None,
        states: 0,
        budget,
    };
    search.walk(0, None)?;
    let (num, den) = search.best.unwrap_or((0, 1));
    Ok(Scalar::new(BigInt::from(num), BigInt::from(den)))
}

/// x range, y range and the value fraction per agent.
type Candidate = ((usize, usize), (usize, usize), Vec<Scalar>);

/// Best achievable minimum of `value / total` when every agent receives at
/// most one rectangle inside `poly` with sides on the grid lines `xs` and
/// `ys`. Exhaustive branch and bound over rectangle placements.
pub fn brute_force_rect_maxmin(
    poly: &RectilinearPolygon,
    densities: &[Density2D],
    xs: &[Scalar],
    ys: &[Scalar],
    budget: u64,
) -> Result<Scalar> {
    let decomposition = decompose(poly);
    let totals: Vec<Scalar> = densities
        .iter()
        .map(|d| decomposition.rects.iter().map(|r| d.value(r)).sum())
        .collect();
    let mut candidates: Vec<Candidate> = Vec::new();
    for a in 0..xs.len() {
        for b in a + 1..xs.len() {
            for c in 0..ys.len() {
                for d in c + 1..ys.len() {
                    let rect = Rect::new(xs[a].clone(), xs[b].clone(), ys[c].clone(), ys[d].clone())?;
                    if decomposition.covered_area(&rect) != rect.area() {
                        continue;
                    }
                    let fractions = densities
                        .iter()
                        .zip(&totals)
                        .map(|(density, total)| {
                            if total.is_zero() {
                                scalar::zero()
                            } else {
                                density.value(&rect) / total
                            }
                        })
                        .collect();
                    candidates.push(((a, b), (c, d), fractions));
                }
            }
        }
    }
    let n = densities.len();
    let mut by_agent: Vec<Vec<usize>> = (0..n).map(|_| (0..candidates.len()).collect()).collect();
    for (agent, list) in by_agent.iter_mut().enumerate() {
        list.sort_by(|&p, &q| candidates[q].2[agent].cmp(&candidates[p].2[agent]));
    }
    let positive: Vec<bool> = totals.iter().map(|t| !t.is_zero()).collect();

    struct RectSearch<'a> {
        candidates: &'a [Candidate],
        by_agent: &'a [Vec<usize>],
        positive: &'a [bool],
        chosen: Vec<usize>,
        best: Scalar,
        states: u64,
        budget: u64,
    }
    impl RectSearch<'_> {
        fn overlaps(&self, p: usize, q: usize) -> bool {
            let ((a0, a1), (b0, b1), _) = &self.candidates[p];
            let ((c0, c1), (d0, d1), _) = &self.candidates[q];
            a0 < c1 && c0 < a1 && b0 < d1 && d0 < b1
        }

        fn walk(&mut self, agent: usize, floor: Option<Scalar>) -> Result<()> {
            self.states += 1;
            if self.states > self.budget {
                return Err(Error::SearchBudget {
                    states: self.states,
                    budget: self.budget,
                });
            }
            if agent == self.by_agent.len() {
                if let Some(value) = floor {
                    if value > self.best {
                        self.best = value;
                    }
                }
                return Ok(());
            }
            if !self.positive[agent] {
                return self.walk(agent + 1, floor);
            }
            for index in 0..self.by_agent[agent].len() {
                let p = self.by_agent[agent][index];
                let value = &self.candidates[p].2[agent];
                if value <= &self.best {
                    break;
                }
                if self.chosen.iter().any(|&q| self.overlaps(p, q)) {
                    continue;
                }
                let next = match &floor {
                    Some(f) if f < value => f.clone(),
                    _ => value.clone(),
                };
                self.chosen.push(p);
                self.walk(agent + 1, Some(next))?;
                self.chosen.pop();
            }
            Ok(())
        }
    }
    let mut search = RectSearch {
        candidates: &candidates,
        by_agent: &by_agent,
        positive: &positive,
        chosen: Vec::new(),
        best: scalar::zero(),
        states: 0,
        budget,
    };
    search.walk(0, None)?;
    Ok(search.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::{divide, divide_mms, GuaranteeMode};
    use crate::efm::envy_free_matching;
    use crate::rectilinear::staircase_instance;
    use crate::scalar::{int, ratio};

    #[test]
    fn worstcase_totals() {
        let inst = worstcase_instance(5, 3, 1).unwrap();
        assert!(inst.measures.iter().all(|v| v.total() == int(7)));
        let single = worstcase_instance(1, 4, 2).unwrap();
        assert_eq!(single.measures[0].total(), int(4));
    }

    #[test]
    fn worstcase_division_meets_the_bound_exactly() {
        let inst = worstcase_instance(5, 3, 1).unwrap();
        let alloc = divide(&inst, &[GuaranteeMode::Absolute; 3]).unwrap();
        assert_eq!(alloc.min_fraction(&inst), Some(ratio(1, 7)));
    }

    #[test]
    fn random_instances_are_reproducible() {
        assert_eq!(
            random_instance(3, 4, 2, 9).unwrap(),
            random_instance(3, 4, 2, 9).unwrap()
        );
        assert_ne!(
            random_instance(3, 4, 2, 9).unwrap(),
            random_instance(3, 4, 2, 10).unwrap()
        );
        for seed in 0..20 {
            let inst = random_instance(2, 3, 1, seed).unwrap();
            assert!(inst.measures.iter().all(|v| !v.total().is_zero()));
        }
    }

    #[test]
    fn witness_on_identical_uniform_islands() {
        let (n, k) = (3, 2);
        let cake = Multicake::unit(n).unwrap();
        let measure = ValueMeasure::with_island_values(&cake, &vec![int(2); n]).unwrap();
        let inst = Instance::new(cake.clone(), vec![measure; n], k).unwrap();
        let parts: Vec<Piece> = (0..n).map(|i| Piece::whole_islands(&cake, &[i]).unwrap()).collect();
        let witness = MmsWitness {
            pieces: vec![parts; n],
            thresholds: vec![int(2); n],
        };
        witness.validate(&inst).unwrap();
        let mut greedy = witness.clone();
        greedy.thresholds[0] = int(3);
        assert!(greedy.validate(&inst).is_err());
    }

    #[test]
    fn generated_witnesses_validate() {
        for seed in 0..10 {
            let (inst, witness) = mms_witness_instance(3, 2, seed).unwrap();
            witness.validate(&inst).unwrap();
            assert_eq!(witness.thresholds, vec![int(2); 3]);
        }
    }

    #[test]
    fn counterexample_reproduces_the_shortfall() {
        let (inst, witness) = mms_counterexample_instance().unwrap();
        let alloc = divide_mms(&inst, &witness.thresholds).unwrap();
        assert_eq!(alloc.shares[0].value, int(2));
        assert_eq!(alloc.shares[1].value, ratio(3, 2));
        let absolute = divide(&inst, &[GuaranteeMode::Absolute; 2]).unwrap();
        assert!(absolute.shares.iter().all(|s| s.value >= ratio(8, 5)));
    }

    #[test]
    fn brute_force_matching_cases() {
        let empty = BipartiteGraph::new(3, 3, []).unwrap();
        assert!(brute_force_efm_max(&empty).unwrap().is_empty());
        let perfect = BipartiteGraph::new(2, 3, [(0, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(brute_force_efm_max(&perfect).unwrap().len(), 2);
        let figure = BipartiteGraph::new(4, 4, [(0, 0), (1, 0), (2, 1), (2, 2), (2, 3), (3, 3)]).unwrap();
        assert_eq!(brute_force_efm_max(&figure).unwrap().len(), 2);
        assert_eq!(brute_force_max_matching_size(&figure).unwrap(), 3);
        assert_eq!(envy_free_matching(&figure).len(), 2);
        let big = BipartiteGraph::new(9, 1, []).unwrap();
        assert!(brute_force_efm_max(&big).is_err());
    }

    #[test]
    fn discrete_maxmin_cases() {
        // One agent: best k islands.
        let cake = Multicake::unit(3).unwrap();
        let v = ValueMeasure::with_island_values(&cake, &[int(1), int(2), int(3)]).unwrap();
        let inst = Instance::new(cake, vec![v], 2).unwrap();
        assert_eq!(brute_force_discrete_maxmin(&inst, 3, 1_000_000).unwrap(), ratio(5, 6));

        // Two identical agents, one uniform island.
        let cake = Multicake::unit(1).unwrap();
        let v = ValueMeasure::with_island_values(&cake, &[int(1)]).unwrap();
        let inst = Instance::new(cake, vec![v.clone(), v], 1).unwrap();
        assert_eq!(brute_force_discrete_maxmin(&inst, 4, 1_000_000).unwrap(), ratio(1, 2));

        let inst = worstcase_instance(3, 2, 1).unwrap();
        let oracle = brute_force_discrete_maxmin(&inst, 4, 10_000_000).unwrap();
        assert!(oracle <= ratio(1, 4));
        assert!(matches!(
            brute_force_discrete_maxmin(&inst, 6, 10),
            Err(Error::SearchBudget { .. })
        ));
    }

    #[test]
    fn rect_oracle_on_staircase() {
        let (t, n) = (2, 2);
        let (poly, density) = staircase_instance(t, n).unwrap();
        let grid: Vec<Scalar> = (0..=2 * (t + 1)).map(|i| ratio(i as i64, 2)).collect();
        let best = brute_force_rect_maxmin(&poly, &vec![density; n], &grid, &grid, 10_000_000).unwrap();
        // Total n + T = 4; each agent can get at most one diamond worth 1.
        assert_eq!(best, ratio(1, 4));
    }
}
