//! Shared generators for the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use multicake::division::{GuaranteeMode, Instance};
use multicake::model::{DensitySegment, Multicake, ValueMeasure};
use multicake::rectilinear::{Point, RectilinearPolygon};
use multicake::scalar::{self, int};
use multicake::Scalar;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_modes(rng: &mut ChaCha8Rng, n: usize) -> Vec<GuaranteeMode> {
    (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => GuaranteeMode::Absolute,
            1 => GuaranteeMode::Relative,
            _ => GuaranteeMode::Best,
        })
        .collect()
}

pub fn random_positive_ratio(rng: &mut ChaCha8Rng) -> Scalar {
    scalar::ratio(rng.gen_range(1..=12), rng.gen_range(1..=7))
}

/// Same measures with agent `agent` scaled by `factor`.
pub fn scale_agent(inst: &Instance, agent: usize, factor: &Scalar) -> Instance {
    let mut measures = inst.measures.clone();
    measures[agent] = measures[agent].scaled(factor);
    Instance::new(inst.cake.clone(), measures, inst.k).unwrap()
}

/// Unit islands with uniform density given per agent.
pub fn island_values(values: &[Vec<Scalar>], k: usize) -> Instance {
    let cake = Multicake::unit(values[0].len()).unwrap();
    let measures = values
        .iter()
        .map(|row| ValueMeasure::with_island_values(&cake, row).unwrap())
        .collect();
    Instance::new(cake, measures, k).unwrap()
}

/// A unit island with `heights` on equal-width steps.
pub fn stepped_measure(heights: &[Scalar]) -> (Multicake, ValueMeasure) {
    let cake = Multicake::unit(1).unwrap();
    let w = heights.len() as i64;
    let segments = heights
        .iter()
        .enumerate()
        .map(|(i, h)| DensitySegment::new(scalar::ratio(i as i64, w), scalar::ratio(i as i64 + 1, w), h.clone()))
        .collect();
    let measure = ValueMeasure::new(&cake, vec![segments]).unwrap();
    (cake, measure)
}

/// A simply connected polyomino: a set of unit cells whose boundary is one
/// simple closed curve.
#[derive(Debug, Clone)]
pub struct Polyomino {
    pub cells: BTreeSet<(i64, i64)>,
    pub polygon: RectilinearPolygon,
}

impl Polyomino {
    pub fn contains_rect(&self, xmin: i64, xmax: i64, ymin: i64, ymax: i64) -> bool {
        (xmin..xmax).all(|x| (ymin..ymax).all(|y| self.cells.contains(&(x, y))))
    }
}

/// Grow a random polyomino inside a `side` x `side` box. Shapes with holes
/// or corner-touching cells are rejected and regrown.
pub fn random_polyomino(rng: &mut ChaCha8Rng, side: i64, size: usize) -> Polyomino {
    loop {
        let mut cells = BTreeSet::new();
        cells.insert((rng.gen_range(0..side), rng.gen_range(0..side)));
        let target = rng.gen_range(1..=size);
        while cells.len() < target {
            let list: Vec<_> = cells.iter().copied().collect();
            let (x, y) = list[rng.gen_range(0..list.len())];
            let (dx, dy) = [(1, 0), (-1, 0), (0, 1), (0, -1)][rng.gen_range(0..4)];
            let next = (x + dx, y + dy);
            if (0..side).contains(&next.0) && (0..side).contains(&next.1) {
                cells.insert(next);
            }
        }
        if let Some(polygon) = trace(&cells) {
            return Polyomino { cells, polygon };
        }
    }
}

fn trace(cells: &BTreeSet<(i64, i64)>) -> Option<RectilinearPolygon> {
    let has = |x: i64, y: i64| cells.contains(&(x, y));
    let mut next: BTreeMap<(i64, i64), (i64, i64)> = BTreeMap::new();
    let mut add = |from: (i64, i64), to: (i64, i64)| next.insert(from, to).is_none();
    for &(x, y) in cells {
        let ok = (has(x, y - 1) || add((x, y), (x + 1, y)))
            && (has(x + 1, y) || add((x + 1, y), (x + 1, y + 1)))
            && (has(x, y + 1) || add((x + 1, y + 1), (x, y + 1)))
            && (has(x - 1, y) || add((x, y + 1), (x, y)));
        if !ok {
            return None;
        }
    }
    let start = *next.keys().next()?;
    let mut loop_points = vec![start];
    let mut at = next[&start];
    while at != start {
        loop_points.push(at);
        at = next[&at];
    }
    if loop_points.len() != next.len() {
        return None;
    }
    let len = loop_points.len();
    let corners: Vec<Point> = (0..len)
        .filter(|&i| {
            let (p, c, q) = (
                loop_points[(i + len - 1) % len],
                loop_points[i],
                loop_points[(i + 1) % len],
            );
            (c.0 - p.0, c.1 - p.1) != (q.0 - c.0, q.1 - c.1)
        })
        .map(|i| Point::new(int(loop_points[i].0), int(loop_points[i].1)))
        .collect();
    RectilinearPolygon::new(corners).ok()
}
