//! Thermographs over exact dyadic coordinates.
//!
//! A [`Trajectory`] is a continuous piecewise-linear function of the tax `t`
//! on `[-1, ∞)`, stored as breakpoints and constant after the last one. The
//! thermograph of `{G^L | G^R}` is built from the scaffolds
//!
//! ```text
//! Λ(t) = max_L RW(G^L)(t) - t        Ρ(t) = min_R LW(G^R)(t) + t
//! ```
//!
//! which meet at the temperature; above it both walls follow the mast.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::game::{GameId, GameKind, GameStore};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThermographError {
    #[error("game has an empty option set but is not an integer; canonicalize it first")]
    NotCanonical,
    #[error("trajectory evaluated below t = -1 (at {0})")]
    BelowDomain(Dyadic),
}

/// Continuous piecewise-linear function of the tax, constant after the last
/// breakpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    /// `(t, value)` pairs with strictly increasing `t`, the first at `t = -1`.
    points: Vec<(Dyadic, Dyadic)>,
}

impl Trajectory {
    pub fn constant(value: Dyadic) -> Self {
        Self {
            points: vec![(Dyadic::from(-1), value)],
        }
    }

    fn from_points(mut points: Vec<(Dyadic, Dyadic)>) -> Self {
        points.dedup_by(|b, a| a.0 == b.0);
        // Drop interior points on straight runs.
        let mut out: Vec<(Dyadic, Dyadic)> = Vec::with_capacity(points.len());
        for p in points {
            if out.len() >= 2 {
                let (t0, v0) = &out[out.len() - 2];
                let (t1, v1) = &out[out.len() - 1];
                if slope(t0, v0, t1, v1) == slope(t1, v1, &p.0, &p.1) {
                    out.pop();
                }
            }
            out.push(p);
        }
        // A final flat segment is the constant tail.
        while out.len() >= 2 && out[out.len() - 1].1 == out[out.len() - 2].1 {
            out.pop();
        }
        Self { points: out }
    }

    pub fn breakpoints(&self) -> &[(Dyadic, Dyadic)] {
        &self.points
    }

    /// Value after the last breakpoint.
    pub fn final_value(&self) -> &Dyadic {
        &self.points.last().expect("trajectory has a breakpoint").1
    }

    pub fn eval(&self, t: &Dyadic) -> Result<Dyadic, ThermographError> {
        if *t < Dyadic::from(-1) {
            return Err(ThermographError::BelowDomain(t.clone()));
        }
        Ok(self.value_at(t))
    }

    fn value_at(&self, t: &Dyadic) -> Dyadic {
        let idx = self.points.partition_point(|(pt, _)| pt <= t);
        if idx >= self.points.len() {
            return self.final_value().clone();
        }
        if idx == 0 {
            return self.points[0].1.clone();
        }
        let (t0, v0) = &self.points[idx - 1];
        let (t1, v1) = &self.points[idx];
        interpolate(t0, v0, t1, v1, t)
    }

    /// Slopes (value per unit tax) of the consecutive segments.
    pub fn slopes(&self) -> Vec<i64> {
        self.points
            .windows(2)
            .map(|w| slope(&w[0].0, &w[0].1, &w[1].0, &w[1].1))
            .collect()
    }

    fn combine(&self, other: &Self, take_max: bool) -> Self {
        let mut ts: Vec<Dyadic> = self
            .points
            .iter()
            .chain(other.points.iter())
            .map(|(t, _)| t.clone())
            .collect();
        ts.sort();
        ts.dedup();
        let pick = |a: Dyadic, b: Dyadic| if take_max { a.max(b) } else { a.min(b) };
        let mut points = Vec::with_capacity(ts.len() * 2);
        for (i, t) in ts.iter().enumerate() {
            let (a, b) = (self.value_at(t), other.value_at(t));
            if i > 0 {
                // Crossing strictly inside the previous interval.
                let prev = &ts[i - 1];
                let (pa, pb) = (self.value_at(prev), other.value_at(prev));
                let before = pa.cmp(&pb);
                let after = a.cmp(&b);
                if before != after
                    && before != std::cmp::Ordering::Equal
                    && after != std::cmp::Ordering::Equal
                {
                    let gap_before = &pa - &pb;
                    let gap_after = &a - &b;
                    // The gap is linear on the interval.
                    let x = crossing(prev, &gap_before, t, &gap_after);
                    let v = self.value_at(&x);
                    points.push((x, v));
                }
            }
            points.push((t.clone(), pick(a, b)));
        }
        // Tails are constant, so no crossing past the last breakpoint.
        Self::from_points(points)
    }

    /// Pointwise maximum.
    pub fn max(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    /// Pointwise minimum.
    pub fn min(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn negate(&self) -> Self {
        Self {
            points: self.points.iter().map(|(t, v)| (t.clone(), -v)).collect(),
        }
    }
}

fn slope(t0: &Dyadic, v0: &Dyadic, t1: &Dyadic, v1: &Dyadic) -> i64 {
    let dv = v1 - v0;
    let dt = t1 - t0;
    // Slopes of thermograph walls are integers; compare exactly.
    for s in [-2i64, -1, 0, 1, 2] {
        if dv == &dt * s {
            return s;
        }
    }
    panic!("non-integral trajectory slope ({dv}) / ({dt})");
}

fn interpolate(t0: &Dyadic, v0: &Dyadic, t1: &Dyadic, v1: &Dyadic, t: &Dyadic) -> Dyadic {
    let s = slope(t0, v0, t1, v1);
    v0 + &(&(t - t0) * s)
}

/// Zero of the linear function through `(t0, g0)` and `(t1, g1)`.
fn crossing(t0: &Dyadic, g0: &Dyadic, t1: &Dyadic, g1: &Dyadic) -> Dyadic {
    // g changes by (g1 - g0) over (t1 - t0) with slope in {-2..2} \ {0}.
    let s = slope(t0, g0, t1, g1);
    let dt = match s {
        1 | -1 => &(-g0) * s,
        2 | -2 => (&(-g0) * s.signum()).half(),
        _ => unreachable!("a crossing needs a non-zero slope"),
    };
    t0 + &dt
}

/// Thermograph of a game: left and right walls, temperature and mast.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thermograph {
    pub left: Trajectory,
    pub right: Trajectory,
    pub temperature: Dyadic,
    pub mast: Dyadic,
}

impl Thermograph {
    fn mast_only(value: Dyadic) -> Self {
        Self {
            left: Trajectory::constant(value.clone()),
            right: Trajectory::constant(value.clone()),
            temperature: Dyadic::from(-1),
            mast: value,
        }
    }

    /// Builds the thermograph from the max of the Left options' right walls
    /// and the min of the Right options' left walls (both before tilting).
    fn from_scaffolds(left_scaffold: &Trajectory, right_scaffold: &Trajectory) -> Self {
        // Walls meet where h(t) = (L(t) - t) - (R(t) + t) first drops to 0.
        // L is non-decreasing and R non-increasing, so h has slope in
        // {-2, -1, 0} and a constant-minus-2t tail.
        let h = |t: &Dyadic| &(&left_scaffold.value_at(t) - &right_scaffold.value_at(t)) - &(t * 2);
        let mut ts: Vec<Dyadic> = left_scaffold
            .points
            .iter()
            .chain(right_scaffold.points.iter())
            .map(|(t, _)| t.clone())
            .collect();
        ts.sort();
        ts.dedup();

        let zero = Dyadic::zero();
        let mut temperature = None;
        for (i, t) in ts.iter().enumerate() {
            let ht = h(t);
            if ht <= zero {
                temperature = Some(if i == 0 {
                    t.clone()
                } else {
                    let prev = &ts[i - 1];
                    crossing(prev, &h(prev), t, &ht)
                });
                break;
            }
        }
        let temperature = temperature.unwrap_or_else(|| {
            // Past every breakpoint: h(t) = c - 2t.
            let last = ts.last().expect("scaffold has breakpoints");
            (&h(last) + &(last * 2)).half()
        });
        let mast = &left_scaffold.value_at(&temperature) - &temperature;

        let wall = |scaffold: &Trajectory, tilt: i64| {
            let mut points: Vec<(Dyadic, Dyadic)> = scaffold
                .points
                .iter()
                .filter(|(t, _)| *t < temperature)
                .map(|(t, v)| (t.clone(), v + &(t * tilt)))
                .collect();
            points.push((temperature.clone(), mast.clone()));
            Trajectory::from_points(points)
        };
        let left = wall(left_scaffold, -1);
        let right = wall(right_scaffold, 1);
        Self {
            left,
            right,
            temperature,
            mast,
        }
    }

    pub fn negate(&self) -> Self {
        Self {
            left: self.right.negate(),
            right: self.left.negate(),
            temperature: self.temperature.clone(),
            mast: -&self.mast,
        }
    }

    /// JSON form: `{"temperature", "mast", "left": [[t, v], ...], "right": ...}`
    /// with every coordinate a reduced fraction string.
    pub fn to_json(&self) -> serde_json::Value {
        let pts = |tr: &Trajectory| {
            tr.points
                .iter()
                .map(|(t, v)| serde_json::json!([t.to_string(), v.to_string()]))
                .collect::<Vec<_>>()
        };
        serde_json::json!({
            "temperature": self.temperature.to_string(),
            "mast": self.mast.to_string(),
            "left": pts(&self.left),
            "right": pts(&self.right),
        })
    }

    /// SVG drawing with tax on the vertical axis and values increasing to
    /// the left. The mast is drawn up to `temperature + 1`.
    pub fn to_svg(&self) -> String {
        let top = &self.temperature + &Dyadic::from(1);
        let as_f = |d: &Dyadic| {
            let n: f64 = d.numerator().to_string().parse().unwrap_or(0.0);
            n / f64::powi(2.0, d.exponent() as i32)
        };
        let walls: Vec<Vec<(f64, f64)>> = [&self.left, &self.right]
            .iter()
            .map(|tr| {
                let mut pts: Vec<(f64, f64)> =
                    tr.points.iter().map(|(t, v)| (as_f(v), as_f(t))).collect();
                pts.push((as_f(tr.final_value()), as_f(&top)));
                pts
            })
            .collect();
        let xs = walls.iter().flatten().map(|p| p.0).chain([0.0]);
        let (xmin, xmax) = xs.fold((f64::MAX, f64::MIN), |(a, b), x| (a.min(x), b.max(x)));
        let (tmin, tmax) = (-1.0, as_f(&top));
        let scale = 40.0;
        let pad = 30.0;
        let width = (xmax - xmin) * scale + 2.0 * pad;
        let height = (tmax - tmin) * scale + 2.0 * pad;
        // Positive values to the left.
        let px = |x: f64| pad + (xmax - x) * scale;
        let py = |t: f64| pad + (tmax - t) * scale;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
        );
        let _ = writeln!(
            svg,
            "<!-- thermograph: temperature {}, mast {}; mast truncated at t = {} -->",
            self.temperature, self.mast, top
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray"/>"#,
            px(xmax),
            py(0.0),
            px(xmin),
            py(0.0)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="3,3"/>"#,
            px(0.0),
            py(tmin),
            px(0.0),
            py(tmax)
        );
        for (wall, name) in walls.iter().zip(["left", "right"]) {
            let path: Vec<String> = wall
                .iter()
                .map(|&(x, t)| format!("{:.2},{:.2}", px(x), py(t)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline class="{name}" points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
                path.join(" ")
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12">t = {}</text>"#,
            px(as_f(&self.mast)) + 4.0,
            py(as_f(&self.temperature)) - 4.0,
            self.temperature
        );
        svg.push_str("</svg>\n");
        svg
    }
}

impl GameStore {
    /// Thermograph of a canonical game. Memoized per game.
    pub fn thermograph(&mut self, g: GameId) -> Result<Arc<Thermograph>, ThermographError> {
        if let Some(t) = self.thermographs.get(&g) {
            return Ok(Arc::clone(t));
        }
        let left = self.left(g).to_vec();
        let right = self.right(g).to_vec();
        let thermograph = if left.is_empty() || right.is_empty() {
            match self.kind(g) {
                GameKind::Integer(n) if self.canonicalize(g) == g => {
                    Thermograph::mast_only(Dyadic::from(n))
                }
                _ => return Err(ThermographError::NotCanonical),
            }
        } else {
            let mut left_scaffold: Option<Trajectory> = None;
            for l in left {
                let wall = self.thermograph(l)?.right.clone();
                left_scaffold = Some(match left_scaffold {
                    None => wall,
                    Some(s) => s.max(&wall),
                });
            }
            let mut right_scaffold: Option<Trajectory> = None;
            for r in right {
                let wall = self.thermograph(r)?.left.clone();
                right_scaffold = Some(match right_scaffold {
                    None => wall,
                    Some(s) => s.min(&wall),
                });
            }
            Thermograph::from_scaffolds(&left_scaffold.unwrap(), &right_scaffold.unwrap())
        };
        let thermograph = Arc::new(thermograph);
        self.thermographs.insert(g, Arc::clone(&thermograph));
        Ok(thermograph)
    }

    /// Temperature of the value of `g` (canonicalized first).
    pub fn temperature(&mut self, g: GameId) -> Dyadic {
        let c = self.canonicalize(g);
        self.thermograph(c)
            .expect("canonical games have thermographs")
            .temperature
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_game;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn thermo(s: &str) -> Thermograph {
        let mut store = GameStore::new();
        let g = parse_game(&mut store, s).unwrap();
        let c = store.canonicalize(g);
        (*store.thermograph(c).unwrap()).clone()
    }

    #[test]
    fn integer_is_a_bare_mast() {
        let t = thermo("3");
        assert_eq!(t.temperature, d("-1"));
        assert_eq!(t.mast, d("3"));
        assert_eq!(t.left.breakpoints().len(), 1);
    }

    #[test]
    fn simple_switch() {
        let t = thermo("{2|-1}");
        assert_eq!(t.temperature, d("3/2"));
        assert_eq!(t.mast, d("1/2"));
        assert_eq!(t.right.eval(&d("0")).unwrap(), d("-1"));
        assert_eq!(t.left.eval(&d("0")).unwrap(), d("2"));
        assert_eq!(t.left.eval(&d("-1")).unwrap(), d("3"));
        assert_eq!(t.left.eval(&d("10")).unwrap(), d("1/2"));
        assert!(t.left.eval(&d("-2")).is_err());
    }

    #[test]
    fn nested_switches() {
        let t = thermo("{{2|-1}|{-4|-10}}");
        assert_eq!(t.temperature, d("15/4"));
        assert_eq!(t.mast, d("-13/4"));
        // The left wall follows the mast 1/2... of the left option, shifted.
        assert_eq!(t.left.eval(&d("0")).unwrap(), d("-1"));
        assert_eq!(t.left.eval(&d("3/2")).unwrap(), d("-1"));
        assert_eq!(t.right.eval(&d("3")).unwrap(), d("-4"));
    }

    #[test]
    fn multiple_left_options() {
        let t = thermo("{-1,{2|-2}|-8}");
        assert_eq!(t.temperature, d("4"));
        assert_eq!(t.mast, d("-4"));
        assert_eq!(t.left.eval(&d("1")).unwrap(), d("-2"));
        assert_eq!(t.left.eval(&d("2")).unwrap(), d("-2"));
        assert_eq!(t.left.eval(&d("0")).unwrap(), d("-1"));
        assert_eq!(t.right.eval(&d("0")).unwrap(), d("-8"));
    }

    #[test]
    fn star_and_numbers() {
        let t = thermo("*");
        assert_eq!(t.temperature, d("0"));
        assert_eq!(t.mast, d("0"));
        let t = thermo("1/2");
        assert_eq!(t.temperature, d("-1/2"));
        assert_eq!(t.mast, d("1/2"));
        let t = thermo("3/4");
        assert_eq!(t.temperature, d("-1/4"));
    }

    #[test]
    fn table_row_temperature() {
        let mut store = GameStore::new();
        let g = parse_game(&mut store, "±{9, {{14|10*}|0}}").unwrap();
        assert_eq!(store.temperature(g), d("9"));
    }

    #[test]
    fn non_canonical_one_sided_is_rejected() {
        let mut store = GameStore::new();
        let half = store.number(&d("1/2"));
        let g = store.make_game(vec![half], vec![]);
        assert_eq!(
            store.thermograph(g).unwrap_err(),
            ThermographError::NotCanonical
        );
    }

    #[test]
    fn max_min_with_crossing() {
        // f rises with slope 1 through 0 at t = 0; g is flat at 1.
        let f = Trajectory::from_points(vec![(d("-1"), d("-1")), (d("3"), d("3"))]);
        let g = Trajectory::constant(d("1"));
        let m = f.max(&g);
        assert_eq!(
            m.breakpoints(),
            &[(d("-1"), d("1")), (d("1"), d("1")), (d("3"), d("3"))]
        );
        let n = f.min(&g);
        assert_eq!(n.eval(&d("0")).unwrap(), d("0"));
        assert_eq!(n.eval(&d("5")).unwrap(), d("1"));
        assert_eq!(n.slopes(), vec![1]);
    }

    #[test]
    fn svg_mentions_truncated_mast() {
        let t = thermo("{2|-1}");
        let svg = t.to_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("mast truncated at t = 5/2"));
        assert!(svg.contains("class=\"left\""));
    }

    #[test]
    fn json_uses_fraction_strings() {
        let t = thermo("{2|-1}");
        let j = t.to_json();
        assert_eq!(j["temperature"], "3/2");
        assert_eq!(j["mast"], "1/2");
        assert_eq!(j["left"][0][0], "-1");
        assert_eq!(j["left"][0][1], "3");
    }
}
