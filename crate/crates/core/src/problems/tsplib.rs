use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: missing DIMENSION before NODE_COORD_SECTION")]
    MissingDimension { line: usize },
    #[error("line {line}: unsupported EDGE_WEIGHT_TYPE {value}")]
    UnsupportedEdgeWeightType { line: usize, value: String },
    #[error("line {line}: missing EDGE_WEIGHT_TYPE")]
    MissingEdgeWeightType { line: usize },
    #[error("line {line}: expected {expected} coordinates, found {found}")]
    CountMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: DIMENSION {dimension} is below 3")]
    TooSmall { line: usize, dimension: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeWeightType {
    #[serde(rename = "EUC_2D")]
    Euc2d,
    #[serde(rename = "GEO")]
    Geo,
}

impl EdgeWeightType {
    fn keyword(self) -> &'static str {
        match self {
            EdgeWeightType::Euc2d => "EUC_2D",
            EdgeWeightType::Geo => "GEO",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TspInstance {
    pub name: String,
    pub comment: Option<String>,
    pub edge_weight_type: EdgeWeightType,
    pub coords: Vec<(f64, f64)>,
}

impl TspInstance {
    pub fn dimension(&self) -> usize {
        self.coords.len()
    }
}

fn split_key(line: &str) -> (String, String) {
    match line.split_once(':') {
        Some((k, v)) => (k.trim().to_ascii_uppercase(), v.trim().to_string()),
        None => (line.trim().to_ascii_uppercase(), String::new()),
    }
}

/// Reads the NAME / TYPE / COMMENT / DIMENSION / EDGE_WEIGHT_TYPE header
/// and a NODE_COORD_SECTION. City ids are 1-based in the file and the
/// section may list them in any order.
pub fn parse_tsplib(text: &str) -> Result<TspInstance, ParseError> {
    let mut name = String::new();
    let mut comment = None;
    let mut dimension: Option<(usize, usize)> = None;
    let mut edge_type = None;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut section_line = None;

    for (line, raw) in lines.by_ref() {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (key, value) = split_key(trimmed);
        match key.as_str() {
            "NAME" => name = value,
            "COMMENT" => comment = Some(value),
            "TYPE" => {
                if value != "TSP" {
                    return Err(ParseError::Malformed {
                        line,
                        message: format!("TYPE {value} is not TSP"),
                    });
                }
            }
            "DIMENSION" => {
                let d = value.parse().map_err(|_| ParseError::Malformed {
                    line,
                    message: format!("bad DIMENSION {value:?}"),
                })?;
                if d < 3 {
                    return Err(ParseError::TooSmall { line, dimension: d });
                }
                dimension = Some((d, line));
            }
            "EDGE_WEIGHT_TYPE" => {
                edge_type = Some(match value.as_str() {
                    "EUC_2D" => EdgeWeightType::Euc2d,
                    "GEO" => EdgeWeightType::Geo,
                    _ => return Err(ParseError::UnsupportedEdgeWeightType { line, value }),
                })
            }
            "NODE_COORD_SECTION" => {
                section_line = Some(line);
                break;
            }
            "EOF" => break,
            // other specification keys are informational here
            _ => {}
        }
    }

    let section_line = section_line.ok_or_else(|| ParseError::Malformed {
        line: text.lines().count(),
        message: "missing NODE_COORD_SECTION".into(),
    })?;
    let (dim, _) = dimension.ok_or(ParseError::MissingDimension { line: section_line })?;
    let edge_weight_type =
        edge_type.ok_or(ParseError::MissingEdgeWeightType { line: section_line })?;

    let mut coords: Vec<Option<(f64, f64)>> = vec![None; dim];
    let mut found = 0;
    let mut last_line = section_line;
    for (line, raw) in lines {
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "EOF" {
            break;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let [id, x, y] = fields[..] else {
            return Err(ParseError::Malformed {
                line,
                message: format!("expected `id x y`, got {trimmed:?}"),
            });
        };
        let num = |s: &str| {
            s.parse::<f64>().map_err(|_| ParseError::Malformed {
                line,
                message: format!("bad number {s:?}"),
            })
        };
        let id: usize = id.parse().map_err(|_| ParseError::Malformed {
            line,
            message: format!("bad city id {id:?}"),
        })?;
        if id == 0 || id > dim {
            return Err(ParseError::CountMismatch {
                line,
                expected: dim,
                found: found + 1,
            });
        }
        if coords[id - 1].replace((num(x)?, num(y)?)).is_some() {
            return Err(ParseError::Malformed {
                line,
                message: format!("city {id} listed twice"),
            });
        }
        found += 1;
    }
    if found != dim {
        return Err(ParseError::CountMismatch {
            line: last_line,
            expected: dim,
            found,
        });
    }
    Ok(TspInstance {
        name,
        comment,
        edge_weight_type,
        coords: coords.into_iter().map(Option::unwrap).collect(),
    })
}

/// Writes the instance back in the subset [`parse_tsplib`] reads.
pub fn to_tsplib(inst: &TspInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME: {}", inst.name);
    let _ = writeln!(out, "TYPE: TSP");
    if let Some(c) = &inst.comment {
        let _ = writeln!(out, "COMMENT: {c}");
    }
    let _ = writeln!(out, "DIMENSION: {}", inst.dimension());
    let _ = writeln!(out, "EDGE_WEIGHT_TYPE: {}", inst.edge_weight_type.keyword());
    let _ = writeln!(out, "NODE_COORD_SECTION");
    for (i, (x, y)) in inst.coords.iter().enumerate() {
        let _ = writeln!(out, "{} {:?} {:?}", i + 1, x, y);
    }
    out.push_str("EOF\n");
    out
}

/// TSPLIB `nint`.
#[inline]
fn nint(v: f64) -> i64 {
    (v + 0.5).floor() as i64
}

/// The truncated value TSPLIB distances are defined with.
#[allow(clippy::approx_constant)]
const GEO_PI: f64 = 3.141592;
const EARTH_RADIUS_KM: f64 = 6378.388;

/// `DDD.MM` (degrees, minutes) to radians, integer part truncated.
fn geo_radians(v: f64) -> f64 {
    let deg = v.trunc();
    let min = v - deg;
    GEO_PI * (deg + 5.0 * min / 3.0) / 180.0
}

/// Integer distance between cities `i` and `j` under the instance's
/// TSPLIB edge-weight convention.
pub fn distance(inst: &TspInstance, i: usize, j: usize) -> i64 {
    if i == j {
        return 0;
    }
    let (xi, yi) = inst.coords[i];
    let (xj, yj) = inst.coords[j];
    match inst.edge_weight_type {
        EdgeWeightType::Euc2d => nint(((xi - xj).powi(2) + (yi - yj).powi(2)).sqrt()),
        EdgeWeightType::Geo => {
            let (lat_i, lon_i) = (geo_radians(xi), geo_radians(yi));
            let (lat_j, lon_j) = (geo_radians(xj), geo_radians(yj));
            let q1 = (lon_i - lon_j).cos();
            let q2 = (lat_i - lat_j).cos();
            let q3 = (lat_i + lat_j).cos();
            (EARTH_RADIUS_KM * (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).acos() + 1.0) as i64
        }
    }
}

/// Dense symmetric distance matrix.
pub fn distance_matrix(inst: &TspInstance) -> Vec<Vec<i64>> {
    let n = inst.dimension();
    (0..n)
        .map(|i| (0..n).map(|j| distance(inst, i, j)).collect())
        .collect()
}
