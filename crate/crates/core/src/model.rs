//! Multicakes, value measures and the query primitives the division
//! algorithms are built from.
//!
//! A [`Multicake`] is a list of islands, each an interval `[0, length]` in
//! its own coordinates. A [`ValueMeasure`] assigns every island a
//! piecewise-constant density, which makes every evaluation and every
//! inverse ("mark") query exact.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

pub type IslandId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Island {
    pub id: IslandId,
    pub length: Scalar,
    /// Dummy islands carry zero density for every agent.
    pub dummy: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multicake {
    islands: Vec<Island>,
}

impl Multicake {
    pub fn new(islands: Vec<Island>) -> Result<Self> {
        if islands.is_empty() {
            return Err(Error::input("a multicake needs at least one island"));
        }
        for (pos, island) in islands.iter().enumerate() {
            if island.id != pos {
                return Err(Error::input(format!(
                    "island ids must be contiguous from 0, found id {} at position {pos}",
                    island.id
                )));
            }
            if !island.length.is_positive() {
                return Err(Error::input(format!("island {} has non-positive length", island.id)));
            }
        }
        Ok(Multicake { islands })
    }

    pub fn from_lengths(lengths: impl IntoIterator<Item = Scalar>) -> Result<Self> {
        let islands = lengths
            .into_iter()
            .enumerate()
            .map(|(id, length)| Island {
                id,
                length,
                dummy: false,
            })
            .collect();
        Self::new(islands)
    }

    /// `m` islands of unit length.
    pub fn unit(m: usize) -> Result<Self> {
        Self::from_lengths((0..m).map(|_| scalar::one()))
    }

    pub fn islands(&self) -> &[Island] {
        &self.islands
    }

    pub fn len(&self) -> usize {
        self.islands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.islands.is_empty()
    }

    pub fn island(&self, id: IslandId) -> Result<&Island> {
        self.islands
            .get(id)
            .ok_or_else(|| Error::input(format!("unknown island {id}")))
    }

    pub fn length(&self, id: IslandId) -> Result<&Scalar> {
        self.island(id).map(|island| &island.length)
    }

    /// A copy with `count` unit-length dummy islands appended.
    pub fn with_dummies(&self, count: usize) -> Multicake {
        let mut islands = self.islands.clone();
        let base = islands.len();
        islands.extend((0..count).map(|i| Island {
            id: base + i,
            length: scalar::one(),
            dummy: true,
        }));
        Multicake { islands }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensitySegment {
    pub start: Scalar,
    pub end: Scalar,
    pub height: Scalar,
}

impl DensitySegment {
    pub fn new(start: Scalar, end: Scalar, height: Scalar) -> Self {
        DensitySegment { start, end, height }
    }
}

/// One agent's piecewise-constant value density over a multicake.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueMeasure {
    islands: Vec<Vec<DensitySegment>>,
    lengths: Vec<Scalar>,
}

impl ValueMeasure {
    /// Segments of each island must tile `[0, length]` in order, with
    /// non-negative heights. Dummy islands must have zero height throughout.
    pub fn new(cake: &Multicake, islands: Vec<Vec<DensitySegment>>) -> Result<Self> {
        if islands.len() != cake.len() {
            return Err(Error::input(format!(
                "measure covers {} islands, multicake has {}",
                islands.len(),
                cake.len()
            )));
        }
        for (island, segments) in cake.islands().iter().zip(&islands) {
            let mut cursor = scalar::zero();
            for segment in segments {
                if segment.start != cursor {
                    return Err(Error::input(format!(
                        "density on island {} has a gap or overlap at {}",
                        island.id, cursor
                    )));
                }
                if segment.end <= segment.start {
                    return Err(Error::input(format!("empty density segment on island {}", island.id)));
                }
                if segment.height.is_negative() {
                    return Err(Error::input(format!("negative density on island {}", island.id)));
                }
                if island.dummy && !segment.height.is_zero() {
                    return Err(Error::input(format!("dummy island {} has positive density", island.id)));
                }
                cursor = segment.end.clone();
            }
            if cursor != island.length {
                return Err(Error::input(format!(
                    "density on island {} ends at {}, island length is {}",
                    island.id, cursor, island.length
                )));
            }
        }
        let lengths = cake.islands().iter().map(|island| island.length.clone()).collect();
        Ok(ValueMeasure { islands, lengths })
    }

    /// Constant density per island, given as the island's total value.
    pub fn with_island_values(cake: &Multicake, values: &[Scalar]) -> Result<Self> {
        if values.len() != cake.len() {
            return Err(Error::input("one value per island required"));
        }
        let islands = cake
            .islands()
            .iter()
            .zip(values)
            .map(|(island, value)| {
                alloc::vec![DensitySegment::new(
                    scalar::zero(),
                    island.length.clone(),
                    value / &island.length,
                )]
            })
            .collect();
        Self::new(cake, islands)
    }

    pub fn zero(cake: &Multicake) -> Self {
        let islands = cake
            .islands()
            .iter()
            .map(|island| {
                alloc::vec![DensitySegment::new(
                    scalar::zero(),
                    island.length.clone(),
                    scalar::zero()
                )]
            })
            .collect();
        let lengths = cake.islands().iter().map(|island| island.length.clone()).collect();
        ValueMeasure { islands, lengths }
    }

    pub fn island_count(&self) -> usize {
        self.islands.len()
    }

    pub fn segments(&self, island: IslandId) -> Result<&[DensitySegment]> {
        self.islands
            .get(island)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::input(format!("unknown island {island}")))
    }

    pub fn length(&self, island: IslandId) -> Result<&Scalar> {
        self.lengths
            .get(island)
            .ok_or_else(|| Error::input(format!("unknown island {island}")))
    }

    pub fn island_value(&self, island: IslandId) -> Result<Scalar> {
        Ok(self
            .segments(island)?
            .iter()
            .map(|s| &s.height * (&s.end - &s.start))
            .sum())
    }

    pub fn total(&self) -> Scalar {
        (0..self.islands.len())
            .map(|id| self.island_value(id).unwrap_or_default())
            .sum()
    }

    /// Every density multiplied by `factor` (which must be non-negative).
    pub fn scaled(&self, factor: &Scalar) -> Self {
        let islands = self
            .islands
            .iter()
            .map(|segments| {
                segments
                    .iter()
                    .map(|s| DensitySegment::new(s.start.clone(), s.end.clone(), &s.height * factor))
                    .collect()
            })
            .collect();
        ValueMeasure {
            islands,
            lengths: self.lengths.clone(),
        }
    }

    /// Densities outside `keep` set to zero.
    pub fn restricted(&self, keep: &BTreeSet<IslandId>) -> Self {
        let islands = self
            .islands
            .iter()
            .enumerate()
            .map(|(id, segments)| {
                if keep.contains(&id) {
                    segments.clone()
                } else {
                    segments
                        .iter()
                        .map(|s| DensitySegment::new(s.start.clone(), s.end.clone(), scalar::zero()))
                        .collect()
                }
            })
            .collect();
        ValueMeasure {
            islands,
            lengths: self.lengths.clone(),
        }
    }

    /// The same measure over `cake`, which must extend the measure's
    /// multicake with extra (dummy) islands; the new islands get zero density.
    pub fn padded_to(&self, cake: &Multicake) -> Result<Self> {
        if cake.len() < self.islands.len() {
            return Err(Error::input("padding cannot remove islands"));
        }
        let mut islands = self.islands.clone();
        let mut lengths = self.lengths.clone();
        for island in &cake.islands()[self.islands.len()..] {
            islands.push(alloc::vec![DensitySegment::new(
                scalar::zero(),
                island.length.clone(),
                scalar::zero()
            )]);
            lengths.push(island.length.clone());
        }
        Ok(ValueMeasure { islands, lengths })
    }

    /// Value of `[a, b]` on `island`.
    pub fn eval_interval(&self, island: IslandId, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        let length = self.length(island)?;
        if a.is_negative() || a > b || b > length {
            return Err(Error::input(format!(
                "interval [{a}, {b}] is outside island {island} of length {length}"
            )));
        }
        let mut total = scalar::zero();
        for segment in &self.islands[island] {
            if &segment.end <= a {
                continue;
            }
            if &segment.start >= b {
                break;
            }
            let lo = if &segment.start > a { &segment.start } else { a };
            let hi = if &segment.end < b { &segment.end } else { b };
            total += &segment.height * (hi - lo);
        }
        Ok(total)
    }

    pub fn eval_piece(&self, piece: &Piece) -> Result<Scalar> {
        piece
            .parts()
            .iter()
            .map(|part| self.eval_interval(part.island, &part.start, &part.end))
            .sum()
    }

    /// Minimal `d` with `eval_interval(island, 0, d) == target`, or `None`
    /// when the whole island is worth less than `target`.
    pub fn mark(&self, island: IslandId, target: &Scalar) -> Result<Option<Scalar>> {
        self.mark_from(island, &scalar::zero(), target)
    }

    /// Minimal `d >= from` with `eval_interval(island, from, d) == target`.
    pub fn mark_from(&self, island: IslandId, from: &Scalar, target: &Scalar) -> Result<Option<Scalar>> {
        let length = self.length(island)?;
        if target.is_negative() {
            return Err(Error::input(format!("negative mark target {target}")));
        }
        if from.is_negative() || from > length {
            return Err(Error::input(format!("mark origin {from} outside island {island}")));
        }
        if target.is_zero() {
            return Ok(Some(from.clone()));
        }
        let mut acc = scalar::zero();
        for segment in &self.islands[island] {
            if &segment.end <= from || segment.height.is_zero() {
                continue;
            }
            let lo = if &segment.start > from { &segment.start } else { from };
            let worth = &segment.height * (&segment.end - lo);
            if &acc + &worth >= *target {
                return Ok(Some(lo + (target - &acc) / &segment.height));
            }
            acc += worth;
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubInterval {
    pub island: IslandId,
    pub start: Scalar,
    pub end: Scalar,
}

impl SubInterval {
    pub fn new(island: IslandId, start: Scalar, end: Scalar) -> Self {
        SubInterval { island, start, end }
    }

    pub fn length(&self) -> Scalar {
        &self.end - &self.start
    }
}

/// A finite union of sub-intervals, kept sorted by `(island, start)` with
/// touching parts merged, so every part is one maximal connected component.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Piece {
    parts: Vec<SubInterval>,
}

impl Piece {
    pub fn new(mut parts: Vec<SubInterval>) -> Result<Self> {
        for part in &parts {
            if part.start.is_negative() || part.end <= part.start {
                return Err(Error::input(format!(
                    "sub-interval [{}, {}] on island {} is empty or reversed",
                    part.start, part.end, part.island
                )));
            }
        }
        parts.sort();
        let mut merged: Vec<SubInterval> = Vec::with_capacity(parts.len());
        for part in parts {
            match merged.last_mut() {
                Some(last) if last.island == part.island => match part.start.cmp(&last.end) {
                    Ordering::Less => {
                        return Err(Error::input(format!(
                            "overlapping sub-intervals on island {}",
                            part.island
                        )))
                    }
                    Ordering::Equal => last.end = part.end,
                    Ordering::Greater => merged.push(part),
                },
                _ => merged.push(part),
            }
        }
        Ok(Piece { parts: merged })
    }

    pub fn empty() -> Self {
        Piece::default()
    }

    /// Whole islands of `cake`.
    pub fn whole_islands(cake: &Multicake, ids: &[IslandId]) -> Result<Self> {
        let parts = ids
            .iter()
            .map(|&id| Ok(SubInterval::new(id, scalar::zero(), cake.length(id)?.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[SubInterval] {
        &self.parts
    }

    pub fn component_count(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_disjoint(&self, other: &Piece) -> bool {
        self.parts.iter().all(|a| {
            other
                .parts
                .iter()
                .all(|b| a.island != b.island || a.end <= b.start || b.end <= a.start)
        })
    }

    pub fn union(&self, other: &Piece) -> Result<Piece> {
        if !self.is_disjoint(other) {
            return Err(Error::input("pieces overlap"));
        }
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Piece::new(parts)
    }

    /// Checks every part lies inside its island.
    pub fn check_within(&self, cake: &Multicake) -> Result<()> {
        for part in &self.parts {
            let length = cake.length(part.island)?;
            if &part.end > length {
                return Err(Error::input(format!(
                    "sub-interval [{}, {}] exceeds island {} of length {length}",
                    part.start, part.end, part.island
                )));
            }
        }
        Ok(())
    }
}

/// The `k` islands most valuable to `measure`, excluding `exclude`. Sorted by
/// value descending; ties go to the lower id.
pub fn best_k_islands(
    measure: &ValueMeasure,
    cake: &Multicake,
    k: usize,
    exclude: &BTreeSet<IslandId>,
) -> Result<Vec<IslandId>> {
    let mut ranked = Vec::new();
    for island in cake.islands() {
        if !exclude.contains(&island.id) {
            ranked.push((measure.island_value(island.id)?, island.id));
        }
    }
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(ranked.into_iter().take(k).map(|(_, id)| id).collect())
}

/// The sub-piece made of the `k` most valuable components of `piece`; ties go
/// to the component with the lower `(island, start)`.
pub fn best_k_intervals(measure: &ValueMeasure, piece: &Piece, k: usize) -> Result<Piece> {
    let mut ranked = piece
        .parts()
        .iter()
        .enumerate()
        .map(|(pos, part)| Ok((measure.eval_interval(part.island, &part.start, &part.end)?, pos)))
        .collect::<Result<Vec<_>>>()?;
    // Parts are already in (island, start) order, so position breaks ties.
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let parts = ranked
        .into_iter()
        .take(k)
        .map(|(_, pos)| piece.parts()[pos].clone())
        .collect();
    Piece::new(parts)
}

/// Best-k utility: the value of the `k` most valuable components of `piece`.
pub fn best_k_value(measure: &ValueMeasure, piece: &Piece, k: usize) -> Result<Scalar> {
    measure.eval_piece(&best_k_intervals(measure, piece, k)?)
}

/// Sum of the `k` largest entries of `values`.
pub(crate) fn top_k_sum(values: &[Scalar], k: usize) -> Scalar {
    let mut sorted: Vec<&Scalar> = values.iter().collect();
    sorted.sort_by(|a, b| b.cmp(a));
    sorted.into_iter().take(k).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use alloc::vec;

    fn seg(a: Scalar, b: Scalar, h: Scalar) -> DensitySegment {
        DensitySegment::new(a, b, h)
    }

    fn one_island(segments: Vec<DensitySegment>) -> (Multicake, ValueMeasure) {
        let cake = Multicake::unit(1).unwrap();
        let measure = ValueMeasure::new(&cake, vec![segments]).unwrap();
        (cake, measure)
    }

    #[test]
    fn eval_uniform_half() {
        let (_, v) = one_island(vec![seg(int(0), int(1), int(1))]);
        assert_eq!(v.eval_interval(0, &int(0), &ratio(1, 2)).unwrap(), ratio(1, 2));
        assert_eq!(v.eval_interval(0, &ratio(1, 3), &ratio(1, 3)).unwrap(), int(0));
    }

    #[test]
    fn eval_two_segments_against_riemann_sum() {
        let (_, v) = one_island(vec![seg(int(0), ratio(1, 2), int(2)), seg(ratio(1, 2), int(1), int(0))]);
        let exact = v.eval_interval(0, &ratio(1, 4), &ratio(3, 4)).unwrap();
        assert_eq!(exact, ratio(1, 2));
        // Midpoint Riemann sum over 1000 cells.
        let cells = 1000;
        let mut approx = int(0);
        for c in 0..cells {
            let x = ratio(1, 4) + ratio(2 * c + 1, 2 * cells) * ratio(1, 2);
            let h = if x < ratio(1, 2) { int(2) } else { int(0) };
            approx += h * ratio(1, 2 * cells);
        }
        assert_eq!(approx, exact);
    }

    #[test]
    fn eval_rejects_bad_ranges() {
        let (_, v) = one_island(vec![seg(int(0), int(1), int(1))]);
        assert!(v.eval_interval(0, &ratio(1, 2), &ratio(1, 3)).is_err());
        assert!(v.eval_interval(0, &int(0), &int(2)).is_err());
        assert!(v.eval_interval(0, &int(-1), &int(0)).is_err());
        assert!(v.eval_interval(3, &int(0), &int(1)).is_err());
    }

    #[test]
    fn eval_piece_cases() {
        let cake = Multicake::unit(3).unwrap();
        let v = ValueMeasure::with_island_values(&cake, &[int(2), int(4), int(6)]).unwrap();
        assert_eq!(v.eval_piece(&Piece::empty()).unwrap(), int(0));
        let whole = Piece::whole_islands(&cake, &[0, 1, 2]).unwrap();
        assert_eq!(v.eval_piece(&whole).unwrap(), int(12));

        let unit = Multicake::unit(1).unwrap();
        let u = ValueMeasure::with_island_values(&unit, &[int(1)]).unwrap();
        let halves = Piece::new(vec![
            SubInterval::new(0, int(0), ratio(1, 2)),
            SubInterval::new(0, ratio(1, 2), int(1)),
        ])
        .unwrap();
        assert_eq!(halves.component_count(), 1);
        assert_eq!(u.eval_piece(&halves).unwrap(), int(1));
    }

    #[test]
    fn mark_cases() {
        let (_, v) = one_island(vec![seg(int(0), int(1), int(2))]);
        assert_eq!(v.mark(0, &int(1)).unwrap(), Some(ratio(1, 2)));
        assert_eq!(v.mark(0, &int(3)).unwrap(), None);
        assert_eq!(v.mark(0, &int(0)).unwrap(), Some(int(0)));
        assert!(v.mark(0, &int(-1)).is_err());
    }

    #[test]
    fn mark_takes_minimal_point_on_plateau() {
        let (_, v) = one_island(vec![
            seg(int(0), ratio(1, 4), int(4)),
            seg(ratio(1, 4), ratio(3, 4), int(0)),
            seg(ratio(3, 4), int(1), int(4)),
        ]);
        // Every d in [1/4, 3/4] solves V[0, d] = 1; the plateau's left end wins.
        assert_eq!(v.mark(0, &int(1)).unwrap(), Some(ratio(1, 4)));
        // Bisection on the monotone prefix value agrees.
        let (mut lo, mut hi) = (int(0), int(1));
        for _ in 0..40 {
            let mid = (&lo + &hi) / int(2);
            if v.eval_interval(0, &int(0), &mid).unwrap() >= int(1) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!(hi >= ratio(1, 4) && &hi - ratio(1, 4) < ratio(1, 1_000_000));
        assert_eq!(v.mark(0, &int(2)).unwrap(), Some(int(1)));
    }

    #[test]
    fn best_k_islands_cases() {
        let cake = Multicake::unit(4).unwrap();
        let v = ValueMeasure::with_island_values(&cake, &[ratio(3, 2), ratio(3, 2), ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(best_k_islands(&v, &cake, 2, &BTreeSet::new()).unwrap(), vec![0, 1]);
        assert_eq!(
            best_k_islands(&v, &cake, 9, &BTreeSet::new()).unwrap(),
            vec![0, 1, 2, 3]
        );
        let excl: BTreeSet<_> = [0].into_iter().collect();
        assert_eq!(best_k_islands(&v, &cake, 2, &excl).unwrap(), vec![1, 2]);

        let cake3 = Multicake::unit(3).unwrap();
        let w = ValueMeasure::with_island_values(&cake3, &[int(1), int(2), int(3)]).unwrap();
        assert_eq!(best_k_islands(&w, &cake3, 1, &BTreeSet::new()).unwrap(), vec![2]);
    }

    #[test]
    fn best_k_intervals_cases() {
        let cake = Multicake::unit(3).unwrap();
        let v = ValueMeasure::with_island_values(&cake, &[int(1), ratio(1, 2), int(3)]).unwrap();
        let all = Piece::whole_islands(&cake, &[0, 1, 2]).unwrap();
        let best = best_k_intervals(&v, &all, 2).unwrap();
        assert_eq!(best, Piece::whole_islands(&cake, &[0, 2]).unwrap());
        assert_eq!(best_k_intervals(&v, &all, 5).unwrap(), all);
        assert_eq!(best_k_value(&v, &all, 3).unwrap(), v.eval_piece(&all).unwrap());
    }

    #[test]
    fn best_k_intervals_four_equal_components() {
        let cake = Multicake::unit(4).unwrap();
        let v = ValueMeasure::with_island_values(&cake, &[int(1), int(1), int(1), int(1)]).unwrap();
        let all = Piece::whole_islands(&cake, &[0, 1, 2, 3]).unwrap();
        // Exhaustive: every subset of at most two components.
        let mut best = int(0);
        for mask in 0u32..16 {
            if mask.count_ones() <= 2 {
                let ids: Vec<_> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
                let value = v.eval_piece(&Piece::whole_islands(&cake, &ids).unwrap()).unwrap();
                best = scalar::max(best, value);
            }
        }
        assert_eq!(best, int(2));
        assert_eq!(best_k_value(&v, &all, 2).unwrap(), best);
        assert!(best_k_value(&v, &all, 2).unwrap() >= int(2));
    }

    #[test]
    fn measure_validation() {
        let cake = Multicake::unit(1).unwrap();
        assert!(ValueMeasure::new(&cake, vec![vec![seg(int(0), ratio(1, 2), int(1))]]).is_err());
        assert!(ValueMeasure::new(&cake, vec![vec![seg(int(0), int(1), int(-1))]]).is_err());
        assert!(ValueMeasure::new(
            &cake,
            vec![vec![seg(int(0), ratio(1, 2), int(1)), seg(ratio(1, 3), int(1), int(1))]]
        )
        .is_err());
        let dummy = cake.with_dummies(1);
        assert!(ValueMeasure::new(
            &dummy,
            vec![vec![seg(int(0), int(1), int(1))], vec![seg(int(0), int(1), int(1))]]
        )
        .is_err());
    }

    #[test]
    fn piece_rejects_overlap_and_empty() {
        assert!(Piece::new(vec![
            SubInterval::new(0, int(0), ratio(2, 3)),
            SubInterval::new(0, ratio(1, 2), int(1)),
        ])
        .is_err());
        assert!(Piece::new(vec![SubInterval::new(0, ratio(1, 2), ratio(1, 2))]).is_err());
    }

    #[test]
    fn multicake_validation() {
        assert!(Multicake::new(vec![]).is_err());
        assert!(Multicake::from_lengths([int(0)]).is_err());
        assert!(Multicake::new(vec![Island {
            id: 1,
            length: int(1),
            dummy: false
        }])
        .is_err());
    }
}
