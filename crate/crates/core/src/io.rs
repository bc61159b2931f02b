//! JSON file formats for instances, plane graphs and gadget outputs.
//!
//! Coordinates are written as strings so no precision is lost: a plain
//! decimal when the value has a terminating decimal expansion, `p/q`
//! otherwise. Readers accept both forms as strings and also bare JSON
//! numbers, which are parsed digit by digit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::gadgets::{GadgetError, GadgetInstance, Mode, PlaneGraph, WLabel};
use crate::geometry::{Point, Scalar};
use crate::path::{Instance, InstanceError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("not a number: {0:?}")]
    Number(String),
    #[error("invalid instance: {0}")]
    Instance(#[from] InstanceError),
    #[error("invalid graph: {0}")]
    Graph(#[from] GadgetError),
    #[error("{0}")]
    Shape(String),
}

/// Exact text form of a rational.
pub fn format_scalar(v: &Scalar) -> String {
    if v.is_integer() {
        return v.numer().to_string();
    }
    let mut den = v.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", v.numer(), v.denom());
    }
    let digits = twos.max(fives);
    let scaled = v * Scalar::from_integer(BigInt::from(10).pow(digits));
    let int = scaled.to_integer();
    let sign = if int.is_negative() { "-" } else { "" };
    let s = int.abs().to_string();
    let width = digits as usize + 1;
    let s = format!("{s:0>width$}");
    let (whole, frac) = s.split_at(s.len() - digits as usize);
    format!("{sign}{whole}.{frac}")
}

/// Parses `p/q`, or a decimal with optional sign, fraction and exponent.
pub fn parse_scalar(text: &str) -> Result<Scalar, IoError> {
    let bad = || IoError::Number(text.to_string());
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Scalar::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        Scalar::from_integer(num * ten.pow(shift as u32))
    } else {
        Scalar::new(num, ten.pow(shift.unsigned_abs()))
    };
    Ok(value)
}

/// Coordinate wrapper with the exact string encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Num(pub Scalar);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(&self.0))
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match Value::deserialize(d)? {
            Value::String(s) => s,
            Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("expected a number, got {other}"))),
        };
        parse_scalar(&text).map(Num).map_err(serde::de::Error::custom)
    }
}

fn to_json_points(points: &[Point]) -> Vec<[Num; 2]> {
    points.iter().map(|p| [Num(p.x.clone()), Num(p.y.clone())]).collect()
}

fn from_json_points(points: Vec<[Num; 2]>) -> Vec<Point> {
    points.into_iter().map(|[x, y]| Point::new(x.0, y.0)).collect()
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    red: Vec<[Num; 2]>,
    blue: Vec<[Num; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Value>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<[Num; 2]>,
    edges: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct GadgetFile {
    mode: Mode,
    epsilon: Option<Num>,
    halvings: u32,
    u: Vec<[Num; 2]>,
    w: Vec<[Num; 2]>,
    labels: Vec<WLabel>,
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Instance JSON; `meta` is stored verbatim under `"meta"`.
pub fn instance_to_json(instance: &Instance, meta: Option<Value>) -> String {
    pretty(&InstanceFile {
        red: to_json_points(instance.red()),
        blue: to_json_points(instance.blue()),
        meta,
    })
}

pub fn instance_from_json(text: &str) -> Result<Instance, IoError> {
    let f: InstanceFile = serde_json::from_str(text)?;
    Ok(Instance::new(from_json_points(f.red), from_json_points(f.blue))?)
}

pub fn graph_to_json(g: &PlaneGraph) -> String {
    pretty(&GraphFile {
        vertices: to_json_points(g.vertices()),
        edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
    })
}

pub fn graph_from_json(text: &str) -> Result<PlaneGraph, IoError> {
    let f: GraphFile = serde_json::from_str(text)?;
    let edges = f.edges.into_iter().map(|[a, b]| (a, b)).collect();
    Ok(PlaneGraph::new(from_json_points(f.vertices), edges)?)
}

pub fn gadget_to_json(gi: &GadgetInstance) -> String {
    pretty(&GadgetFile {
        mode: gi.mode,
        epsilon: gi.epsilon.clone().map(Num),
        halvings: gi.halvings,
        u: to_json_points(&gi.u),
        w: to_json_points(&gi.w),
        labels: gi.labels.clone(),
    })
}

pub fn gadget_from_json(text: &str) -> Result<GadgetInstance, IoError> {
    let f: GadgetFile = serde_json::from_str(text)?;
    if f.labels.len() != f.w.len() {
        return Err(IoError::Shape(format!(
            "{} labels for {} W points",
            f.labels.len(),
            f.w.len()
        )));
    }
    Ok(GadgetInstance {
        mode: f.mode,
        u: from_json_points(f.u),
        w: from_json_points(f.w),
        labels: f.labels,
        epsilon: f.epsilon.map(|n| n.0),
        halvings: f.halvings,
    })
}
