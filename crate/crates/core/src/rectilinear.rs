//! Fair division of a rectilinear polygon into rectangles.
//!
//! The polygon is cut into at most `T + 1` rectangles (`T` the number of
//! reflex vertices), each rectangle becomes an island parameterized by `x`,
//! and the multicake division hands every agent at most `k` vertical slabs,
//! which are rectangles again.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::division::{divide, Allocation, GuaranteeMode, Instance};
use crate::error::{Error, Result};
use crate::model::{DensitySegment, Multicake, SubInterval, ValueMeasure};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rect {
    pub xmin: Scalar,
    pub xmax: Scalar,
    pub ymin: Scalar,
    pub ymax: Scalar,
}

impl Rect {
    pub fn new(xmin: Scalar, xmax: Scalar, ymin: Scalar, ymax: Scalar) -> Result<Self> {
        if xmin >= xmax || ymin >= ymax {
            return Err(Error::input(format!(
                "degenerate rectangle [{xmin}, {xmax}] x [{ymin}, {ymax}]"
            )));
        }
        Ok(Rect { xmin, xmax, ymin, ymax })
    }

    pub fn width(&self) -> Scalar {
        &self.xmax - &self.xmin
    }

    pub fn height(&self) -> Scalar {
        &self.ymax - &self.ymin
    }

    pub fn area(&self) -> Scalar {
        self.width() * self.height()
    }

    /// Area of the intersection; zero when the interiors are disjoint.
    pub fn overlap_area(&self, other: &Rect) -> Scalar {
        overlap(&self.xmin, &self.xmax, &other.xmin, &other.xmax)
            * overlap(&self.ymin, &self.ymax, &other.ymin, &other.ymax)
    }
}

fn overlap(a0: &Scalar, a1: &Scalar, b0: &Scalar, b1: &Scalar) -> Scalar {
    let lo = if a0 > b0 { a0 } else { b0 };
    let hi = if a1 < b1 { a1 } else { b1 };
    if hi > lo {
        hi - lo
    } else {
        scalar::zero()
    }
}

/// A simple polygon with axis-parallel edges, stored counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectilinearPolygon {
    vertices: Vec<Point>,
}

impl RectilinearPolygon {
    /// Validates the loop and reorients it counterclockwise. Edges must
    /// alternate between horizontal and vertical and non-adjacent edges may
    /// not touch.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        let count = vertices.len();
        if count < 4 || !count.is_multiple_of(2) {
            return Err(Error::input(format!(
                "a rectilinear polygon needs an even number >= 4 of vertices, got {count}"
            )));
        }
        let edges: Vec<(Point, Point)> = (0..count)
            .map(|i| (vertices[i].clone(), vertices[(i + 1) % count].clone()))
            .collect();
        let horizontal: Vec<bool> = edges
            .iter()
            .enumerate()
            .map(|(i, (a, b))| match (a.x == b.x, a.y == b.y) {
                (false, true) => Ok(true),
                (true, false) => Ok(false),
                _ => Err(Error::input(format!(
                    "edge {i} is not axis-parallel or has zero length"
                ))),
            })
            .collect::<Result<_>>()?;
        for i in 0..count {
            if horizontal[i] == horizontal[(i + 1) % count] {
                return Err(Error::input(format!(
                    "edges {i} and {} are not perpendicular",
                    (i + 1) % count
                )));
            }
        }
        for i in 0..count {
            for j in (i + 2)..count {
                if i == 0 && j == count - 1 {
                    continue;
                }
                if segments_touch(&edges[i], &edges[j]) {
                    return Err(Error::input(format!("edges {i} and {j} intersect")));
                }
            }
        }
        if scalar::is_negative(&signed_area(&vertices)) {
            vertices.reverse();
        }
        Ok(RectilinearPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> Scalar {
        signed_area(&self.vertices)
    }

    pub fn bounding_box(&self) -> Rect {
        let xs = self.vertices.iter().map(|p| &p.x);
        let ys = self.vertices.iter().map(|p| &p.y);
        Rect {
            xmin: xs.clone().min().cloned().unwrap_or_default(),
            xmax: xs.max().cloned().unwrap_or_default(),
            ymin: ys.clone().min().cloned().unwrap_or_default(),
            ymax: ys.max().cloned().unwrap_or_default(),
        }
    }
}

fn signed_area(vertices: &[Point]) -> Scalar {
    let n = vertices.len();
    let twice: Scalar = (0..n)
        .map(|i| {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
            &a.x * &b.y - &b.x * &a.y
        })
        .sum();
    twice / scalar::int(2)
}

/// Closed axis-parallel segments share at least one point.
fn segments_touch(a: &(Point, Point), b: &(Point, Point)) -> bool {
    let span = |p: &Scalar, q: &Scalar| {
        if p <= q {
            (p.clone(), q.clone())
        } else {
            (q.clone(), p.clone())
        }
    };
    let (ax0, ax1) = span(&a.0.x, &a.1.x);
    let (ay0, ay1) = span(&a.0.y, &a.1.y);
    let (bx0, bx1) = span(&b.0.x, &b.1.x);
    let (by0, by1) = span(&b.0.y, &b.1.y);
    ax0 <= bx1 && bx0 <= ax1 && ay0 <= by1 && by0 <= ay1
}

/// Indices of the vertices with a 270 degree interior angle.
pub fn reflex_vertices(p: &RectilinearPolygon) -> Vec<usize> {
    let v = &p.vertices;
    let n = v.len();
    (0..n)
        .filter(|&i| {
            let (prev, here, next) = (&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]);
            let cross = (&here.x - &prev.x) * (&next.y - &here.y) - (&here.y - &prev.y) * (&next.x - &here.x);
            scalar::is_negative(&cross)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectDecomposition {
    pub rects: Vec<Rect>,
}

impl RectDecomposition {
    pub fn area(&self) -> Scalar {
        self.rects.iter().map(Rect::area).sum()
    }

    /// Area of `rect` inside the decomposed polygon.
    pub fn covered_area(&self, rect: &Rect) -> Scalar {
        self.rects.iter().map(|r| r.overlap_area(rect)).sum()
    }
}

/// Cuts along horizontal lines through every vertex, then glues each
/// rectangle to the one directly above it whenever their `x`-extents agree.
/// The surviving cuts are the horizontal chords through the reflex vertices,
/// so at most `T + 1` rectangles remain.
pub fn decompose(p: &RectilinearPolygon) -> RectDecomposition {
    let v = &p.vertices;
    let n = v.len();
    let ys: Vec<Scalar> = v
        .iter()
        .map(|q| q.y.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let verticals: Vec<(Scalar, Scalar, Scalar)> = (0..n)
        .filter_map(|i| {
            let (a, b) = (&v[i], &v[(i + 1) % n]);
            (a.x == b.x).then(|| {
                let (lo, hi) = if a.y < b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
                (a.x.clone(), lo.clone(), hi.clone())
            })
        })
        .collect();

    let mut rects: Vec<Rect> = Vec::new();
    // Rectangles touching the previous slab's top, by x-extent.
    let mut open: Vec<usize> = Vec::new();
    for window in ys.windows(2) {
        let (y0, y1) = (&window[0], &window[1]);
        let mut xs: Vec<&Scalar> = verticals
            .iter()
            .filter(|(_, lo, hi)| lo <= y0 && hi >= y1)
            .map(|(x, _, _)| x)
            .collect();
        xs.sort();
        let mut next_open = Vec::new();
        for pair in xs.chunks(2) {
            let (x0, x1) = (pair[0], pair[1]);
            let continued = open
                .iter()
                .copied()
                .find(|&r| &rects[r].xmin == x0 && &rects[r].xmax == x1 && &rects[r].ymax == y0);
            match continued {
                Some(r) => {
                    rects[r].ymax = y1.clone();
                    next_open.push(r);
                }
                None => {
                    rects.push(Rect {
                        xmin: x0.clone(),
                        xmax: x1.clone(),
                        ymin: y0.clone(),
                        ymax: y1.clone(),
                    });
                    next_open.push(rects.len() - 1);
                }
            }
        }
        open = next_open;
    }
    RectDecomposition { rects }
}

/// One agent's piecewise-constant density in the plane: disjoint cells with
/// constant non-negative height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Density2D {
    cells: Vec<(Rect, Scalar)>,
}

impl Density2D {
    pub fn new(cells: Vec<(Rect, Scalar)>) -> Result<Self> {
        for (i, (cell, height)) in cells.iter().enumerate() {
            if height.is_negative() {
                return Err(Error::input(format!("cell {i} has negative height")));
            }
            for (j, (other, _)) in cells.iter().enumerate().skip(i + 1) {
                if !cell.overlap_area(other).is_zero() {
                    return Err(Error::input(format!("cells {i} and {j} overlap")));
                }
            }
        }
        Ok(Density2D { cells })
    }

    /// Constant `height` over `rect`.
    pub fn uniform(rect: Rect, height: Scalar) -> Result<Self> {
        Self::new(vec![(rect, height)])
    }

    pub fn cells(&self) -> &[(Rect, Scalar)] {
        &self.cells
    }

    /// Integral over `rect`.
    pub fn value(&self, rect: &Rect) -> Scalar {
        self.cells.iter().map(|(cell, h)| h * cell.overlap_area(rect)).sum()
    }

    /// Density of the vertical slab integral over `rect`, as a function of
    /// `x - rect.xmin`.
    fn slab_segments(&self, rect: &Rect) -> Vec<DensitySegment> {
        let mut cuts: BTreeSet<Scalar> = BTreeSet::new();
        cuts.insert(rect.xmin.clone());
        cuts.insert(rect.xmax.clone());
        for (cell, _) in &self.cells {
            for x in [&cell.xmin, &cell.xmax] {
                if x > &rect.xmin && x < &rect.xmax {
                    cuts.insert(x.clone());
                }
            }
        }
        let cuts: Vec<Scalar> = cuts.into_iter().collect();
        let mut segments: Vec<DensitySegment> = Vec::new();
        for w in cuts.windows(2) {
            let (x0, x1) = (&w[0], &w[1]);
            let height: Scalar = self
                .cells
                .iter()
                .filter(|(cell, _)| &cell.xmin <= x0 && &cell.xmax >= x1)
                .map(|(cell, h)| h * overlap(&cell.ymin, &cell.ymax, &rect.ymin, &rect.ymax))
                .sum();
            let (start, end) = (x0 - &rect.xmin, x1 - &rect.xmin);
            match segments.last_mut() {
                Some(last) if last.height == height => last.end = end,
                _ => segments.push(DensitySegment::new(start, end, height)),
            }
        }
        segments
    }
}

/// The multicake with one island per rectangle of `decomposition`.
pub fn polygon_to_instance(
    poly: &RectilinearPolygon,
    decomposition: &RectDecomposition,
    densities: &[Density2D],
    k: usize,
) -> Result<Instance> {
    let area = poly.area();
    let cake = Multicake::from_lengths(decomposition.rects.iter().map(Rect::width))?;
    let measures = densities
        .iter()
        .enumerate()
        .map(|(agent, density)| {
            let covered: Scalar = density
                .cells
                .iter()
                .map(|(cell, _)| decomposition.covered_area(cell))
                .sum();
            if covered != area {
                return Err(Error::input(format!(
                    "density of agent {agent} does not cover the polygon"
                )));
            }
            let segments = decomposition
                .rects
                .iter()
                .map(|rect| density.slab_segments(rect))
                .collect();
            ValueMeasure::new(&cake, segments)
        })
        .collect::<Result<Vec<_>>>()?;
    Instance::new(cake, measures, k)
}

/// The slab of `rect` over the sub-interval `[a, b]` of its island.
pub fn slab(rect: &Rect, part: &SubInterval) -> Rect {
    Rect {
        xmin: &rect.xmin + &part.start,
        xmax: &rect.xmin + &part.end,
        ymin: rect.ymin.clone(),
        ymax: rect.ymax.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonDivision {
    pub decomposition: RectDecomposition,
    pub reflex: usize,
    pub allocation: Allocation,
    /// At most `k` rectangles per agent.
    pub plots: Vec<Vec<Rect>>,
    /// `min(1/n, k/(n+T))` of each agent's total.
    pub guarantees: Vec<Scalar>,
}

/// `min(1/n, k/(n+T))` of `total`.
pub fn polygon_guarantee(total: &Scalar, n: usize, k: usize, reflex: usize) -> Scalar {
    let fraction = scalar::min(
        Scalar::new(1.into(), n.into()),
        Scalar::new(k.into(), (n + reflex).into()),
    );
    fraction * total
}

pub fn divide_polygon(poly: &RectilinearPolygon, densities: &[Density2D], k: usize) -> Result<PolygonDivision> {
    let decomposition = decompose(poly);
    let inst = polygon_to_instance(poly, &decomposition, densities, k)?;
    let allocation = divide(&inst, &vec![GuaranteeMode::Absolute; inst.n()])?;
    let plots = allocation
        .shares
        .iter()
        .map(|share| {
            share
                .piece
                .parts()
                .iter()
                .map(|part| slab(&decomposition.rects[part.island], part))
                .collect()
        })
        .collect();
    let reflex = reflex_vertices(poly).len();
    let guarantees = inst
        .measures
        .iter()
        .map(|measure| polygon_guarantee(&measure.total(), inst.n(), k, reflex))
        .collect();
    Ok(PolygonDivision {
        decomposition,
        reflex,
        allocation,
        plots,
        guarantees,
    })
}

/// A staircase of `T + 1` stairs with one small square of value per stair,
/// tucked into the stair's outer corner so that no rectangle inside the
/// polygon meets two of them. The top stair's square is worth `n`, the
/// others 1. The density is given on a half-unit grid over the polygon.
pub fn staircase_instance(t: usize, n: usize) -> Result<(RectilinearPolygon, Density2D)> {
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    let s = scalar::from_usize;
    let half = scalar::ratio(1, 2);
    let mut vertices = vec![Point::new(s(0), s(0)), Point::new(s(t + 1), s(0))];
    for j in 1..=t + 1 {
        vertices.push(Point::new(s(t + 2 - j), s(j)));
        vertices.push(Point::new(s(t + 1 - j), s(j)));
    }
    let poly = RectilinearPolygon::new(vertices)?;

    let mut cells = Vec::new();
    for row in 0..=t {
        // Row `row` spans x in [0, t + 1 - row]; its stair is number t - row
        // counted from the top.
        let stair = t - row;
        for cx in 0..2 * (t + 1 - row) {
            for cy in 0..2 {
                let x0 = s(cx) * &half;
                let y0 = s(row) + s(cy) * &half;
                let rect = Rect::new(x0.clone(), &x0 + &half, y0.clone(), &y0 + &half)?;
                let corner = cx + 1 == 2 * (t + 1 - row) && cy == 1;
                let height = if corner {
                    let value = if stair == 0 { s(n) } else { s(1) };
                    value * s(4)
                } else {
                    scalar::zero()
                };
                cells.push((rect, height));
            }
        }
    }
    Ok((poly, Density2D { cells }))
}
