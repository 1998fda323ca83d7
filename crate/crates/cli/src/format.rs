//! JSON file formats. Every rational travels as a string, `"p/q"` or an
//! integer literal, so nothing is rounded on the way in or out.

use std::collections::BTreeMap;
use std::fmt;

use multicake::division::{Allocation, GuaranteeMode, Instance, Share};
use multicake::model::{DensitySegment, Island, Multicake, Piece, SubInterval, ValueMeasure};
use multicake::rectilinear::{Density2D, Point, Rect, RectilinearPolygon};
use multicake::{scalar, Scalar};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rat(pub Scalar);

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<Scalar> for Rat {
    fn from(value: Scalar) -> Self {
        Rat(value)
    }
}

impl From<&Scalar> for Rat {
    fn from(value: &Scalar) -> Self {
        Rat(value.clone())
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        scalar::parse(&text).map(Rat).map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Absolute,
    Relative,
    Best,
}

impl From<Mode> for GuaranteeMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Absolute => GuaranteeMode::Absolute,
            Mode::Relative => GuaranteeMode::Relative,
            Mode::Best => GuaranteeMode::Best,
        }
    }
}

impl From<GuaranteeMode> for Mode {
    fn from(mode: GuaranteeMode) -> Self {
        match mode {
            GuaranteeMode::Absolute => Mode::Absolute,
            GuaranteeMode::Relative => Mode::Relative,
            GuaranteeMode::Best => Mode::Best,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Absolute => "absolute",
            Mode::Relative => "relative",
            Mode::Best => "best",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IslandEntry {
    pub id: usize,
    pub length: Rat,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub dummy: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentEntry {
    pub id: String,
    pub mode: Mode,
    /// Island id (as a JSON key) to `[start, end, height]` segments tiling
    /// the island. Islands left out have zero density.
    #[serde(default)]
    pub densities: BTreeMap<String, Vec<[Rat; 3]>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub k: usize,
    pub islands: Vec<IslandEntry>,
    pub agents: Vec<AgentEntry>,
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<(Instance, Vec<GuaranteeMode>), CliError> {
        let islands = self
            .islands
            .iter()
            .map(|entry| Island {
                id: entry.id,
                length: entry.length.0.clone(),
                dummy: entry.dummy,
            })
            .collect();
        let cake = Multicake::new(islands)?;
        let mut measures = Vec::with_capacity(self.agents.len());
        for agent in &self.agents {
            let mut segments: Vec<Option<Vec<DensitySegment>>> = vec![None; cake.len()];
            for (key, rows) in &agent.densities {
                let id: usize = key
                    .parse()
                    .map_err(|_| CliError::Input(format!("agent {}: bad island key {key:?}", agent.id)))?;
                let slot = segments
                    .get_mut(id)
                    .ok_or_else(|| CliError::Input(format!("agent {}: unknown island {id}", agent.id)))?;
                *slot = Some(
                    rows.iter()
                        .map(|[s, e, h]| DensitySegment::new(s.0.clone(), e.0.clone(), h.0.clone()))
                        .collect(),
                );
            }
            let segments = segments
                .into_iter()
                .zip(cake.islands())
                .map(|(given, island)| {
                    given.unwrap_or_else(|| {
                        vec![DensitySegment::new(
                            scalar::zero(),
                            island.length.clone(),
                            scalar::zero(),
                        )]
                    })
                })
                .collect();
            measures.push(
                ValueMeasure::new(&cake, segments).map_err(|e| CliError::Input(format!("agent {}: {e}", agent.id)))?,
            );
        }
        let modes = self.agents.iter().map(|agent| agent.mode.into()).collect();
        Ok((Instance::new(cake, measures, self.k)?, modes))
    }

    /// Agents are named by their index.
    pub fn from_instance(inst: &Instance, modes: &[GuaranteeMode]) -> Self {
        let islands = inst
            .cake
            .islands()
            .iter()
            .map(|island| IslandEntry {
                id: island.id,
                length: Rat::from(&island.length),
                dummy: island.dummy,
            })
            .collect();
        let agents = inst
            .measures
            .iter()
            .zip(modes)
            .enumerate()
            .map(|(agent, (measure, &mode))| {
                let densities = (0..inst.m())
                    .map(|island| {
                        let rows = measure
                            .segments(island)
                            .expect("measure covers every island")
                            .iter()
                            .map(|s| [Rat::from(&s.start), Rat::from(&s.end), Rat::from(&s.height)])
                            .collect();
                        (island.to_string(), rows)
                    })
                    .collect();
                AgentEntry {
                    id: agent.to_string(),
                    mode: mode.into(),
                    densities,
                }
            })
            .collect();
        InstanceFile {
            k: inst.k,
            islands,
            agents,
        }
    }

    pub fn agent_ids(&self) -> Vec<String> {
        self.agents.iter().map(|agent| agent.id.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalEntry {
    pub island: usize,
    pub start: Rat,
    pub end: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShareEntry {
    pub id: String,
    pub mode: Mode,
    pub intervals: Vec<IntervalEntry>,
    pub value: Rat,
    pub guarantee: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocationFile {
    pub agents: Vec<ShareEntry>,
    pub cuts: usize,
}

impl AllocationFile {
    pub fn from_allocation(alloc: &Allocation, ids: &[String], modes: &[GuaranteeMode]) -> Self {
        let agents = alloc
            .shares
            .iter()
            .zip(ids)
            .zip(modes)
            .map(|((share, id), &mode)| ShareEntry {
                id: id.clone(),
                mode: mode.into(),
                intervals: share
                    .piece
                    .parts()
                    .iter()
                    .map(|part| IntervalEntry {
                        island: part.island,
                        start: Rat::from(&part.start),
                        end: Rat::from(&part.end),
                    })
                    .collect(),
                value: Rat::from(&share.value),
                guarantee: Rat::from(&share.guarantee),
            })
            .collect();
        AllocationFile {
            agents,
            cuts: alloc.cuts,
        }
    }

    pub fn to_allocation(&self) -> Result<(Allocation, Vec<GuaranteeMode>), CliError> {
        let mut shares = Vec::with_capacity(self.agents.len());
        for agent in &self.agents {
            let parts = agent
                .intervals
                .iter()
                .map(|i| SubInterval::new(i.island, i.start.0.clone(), i.end.0.clone()))
                .collect();
            let piece = Piece::new(parts).map_err(|e| CliError::Input(format!("agent {}: {e}", agent.id)))?;
            shares.push(Share {
                piece,
                value: agent.value.0.clone(),
                guarantee: agent.guarantee.0.clone(),
            });
        }
        let modes = self.agents.iter().map(|agent| agent.mode.into()).collect();
        Ok((
            Allocation {
                shares,
                cuts: self.cuts,
            },
            modes,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectEntry {
    pub xmin: Rat,
    pub xmax: Rat,
    pub ymin: Rat,
    pub ymax: Rat,
}

impl From<&Rect> for RectEntry {
    fn from(r: &Rect) -> Self {
        RectEntry {
            xmin: (&r.xmin).into(),
            xmax: (&r.xmax).into(),
            ymin: (&r.ymin).into(),
            ymax: (&r.ymax).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellEntry {
    pub xmin: Rat,
    pub xmax: Rat,
    pub ymin: Rat,
    pub ymax: Rat,
    pub height: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonFile {
    pub vertices: Vec<[Rat; 2]>,
    /// One list of cells per agent.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub densities: Vec<Vec<CellEntry>>,
}

impl PolygonFile {
    pub fn to_polygon(&self) -> Result<RectilinearPolygon, CliError> {
        let vertices = self
            .vertices
            .iter()
            .map(|[x, y]| Point::new(x.0.clone(), y.0.clone()))
            .collect();
        Ok(RectilinearPolygon::new(vertices)?)
    }

    pub fn to_densities(&self) -> Result<Vec<Density2D>, CliError> {
        self.densities
            .iter()
            .map(|cells| {
                let cells = cells
                    .iter()
                    .map(|cell| {
                        let rect = Rect::new(
                            cell.xmin.0.clone(),
                            cell.xmax.0.clone(),
                            cell.ymin.0.clone(),
                            cell.ymax.0.clone(),
                        )?;
                        Ok((rect, cell.height.0.clone()))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(Density2D::new(cells)?)
            })
            .collect()
    }

    pub fn from_parts(poly: &RectilinearPolygon, densities: &[Density2D]) -> Self {
        PolygonFile {
            vertices: poly
                .vertices()
                .iter()
                .map(|p| [Rat::from(&p.x), Rat::from(&p.y)])
                .collect(),
            densities: densities
                .iter()
                .map(|d| {
                    d.cells()
                        .iter()
                        .map(|(r, height)| CellEntry {
                            xmin: (&r.xmin).into(),
                            xmax: (&r.xmax).into(),
                            ymin: (&r.ymin).into(),
                            ymax: (&r.ymax).into(),
                            height: height.into(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(rename = "nX")]
    pub n_x: usize,
    #[serde(rename = "nY")]
    pub n_y: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingFile {
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub reflex: usize,
    pub rects: Vec<RectEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotEntry {
    pub plots: Vec<RectEntry>,
    pub value: Rat,
    pub guarantee: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonDivisionFile {
    pub reflex: usize,
    pub rects: Vec<RectEntry>,
    pub agents: Vec<PlotEntry>,
}
