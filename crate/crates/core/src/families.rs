//! Named board families with closed-form values, and a harness that checks
//! the engine against them.
//!
//! | family | value |
//! |---|---|
//! | `n` isolated vertices tinted blue | `n` |
//! | `n` isolated untinted vertices | `0` (even `n`), `*` (odd `n`) |
//! | star `K_{1,n}` | `±n` |
//! | `K_{1,n}`, centre tinted blue | `{n | s(n-1)}`: `{n | *}` (even), `{n | 0}` (odd) |
//! | two `K_{1,n}`, centres joined, tinted blue and red | `±(n + s(n))` |
//! | two `K_{1,n}`, centres joined, both tinted blue | twice the tinted star |
//! | caterpillar `C(n+1, n, n+1)` | `±{2n+1+s(n), {{3n+2 | 2n+2+s(n-1)} | s(n)}}` |
//!
//! where `s(n)` is `0` for even `n` and `*` for odd `n`. The caterpillar has
//! temperature `2n + 1` and degree `n + 2`.

use serde::Serialize;
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::game::GameId;
use crate::notation::parse_game;
use crate::snort::{Engine, Position, SnortError, Tint};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("no closed form for {0}")]
    UnsupportedFamily(String),
    #[error(transparent)]
    Snort(#[from] SnortError),
}

/// Parameter of the caterpillar family `C(n+1, n, n+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaterpillarSpec {
    n: usize,
}

impl CaterpillarSpec {
    pub fn new(n: usize) -> Result<Self, FamilyError> {
        if n == 0 {
            return Err(FamilyError::UnsupportedFamily(
                "caterpillar with n = 0".to_string(),
            ));
        }
        Ok(Self { n })
    }

    pub fn n(self) -> usize {
        self.n
    }
}

/// `K_{1,n}` with the given centre tint and untinted leaves. Centre `c`,
/// leaves `l1..ln`.
pub fn make_star(n: usize, centre: Tint) -> Position {
    let mut p = Position::new();
    p.add_vertex("c", centre).expect("fresh id");
    for i in 1..=n {
        let id = format!("l{i}");
        p.add_vertex(&id, Tint::None).expect("fresh id");
        p.add_edge("c", &id).expect("known ids");
    }
    p
}

/// Two `K_{1,n}` stars with centres `x` and `y` joined by an edge.
pub fn make_joined_stars(n: usize, tint_a: Tint, tint_b: Tint) -> Position {
    let mut p = Position::new();
    for (centre, tint, prefix) in [("x", tint_a, "x"), ("y", tint_b, "y")] {
        p.add_vertex(centre, tint).expect("fresh id");
        for i in 1..=n {
            let id = format!("{prefix}{i}");
            p.add_vertex(&id, Tint::None).expect("fresh id");
            p.add_edge(centre, &id).expect("known ids");
        }
    }
    p.add_edge("x", "y").expect("known ids");
    p
}

/// `n` isolated vertices with one tint.
pub fn make_isolated(n: usize, tint: Tint) -> Position {
    let mut p = Position::new();
    for i in 1..=n {
        p.add_vertex(&format!("v{i}"), tint).expect("fresh id");
    }
    p
}

/// General caterpillar on the path `a - b - c` with the given leaf counts.
pub fn make_caterpillar_abc(leaves_a: usize, leaves_b: usize, leaves_c: usize) -> Position {
    let mut p = Position::new();
    for spine in ["a", "b", "c"] {
        p.add_vertex(spine, Tint::None).expect("fresh id");
    }
    p.add_edge("a", "b").expect("known ids");
    p.add_edge("b", "c").expect("known ids");
    for (spine, count) in [("a", leaves_a), ("b", leaves_b), ("c", leaves_c)] {
        for i in 1..=count {
            let id = format!("{spine}{i}");
            p.add_vertex(&id, Tint::None).expect("fresh id");
            p.add_edge(spine, &id).expect("known ids");
        }
    }
    p
}

/// `C(n+1, n, n+1)`: `3n + 5` vertices.
pub fn make_caterpillar(spec: CaterpillarSpec) -> Position {
    make_caterpillar_abc(spec.n + 1, spec.n, spec.n + 1)
}

/// Supported families with their parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyInstance {
    Isolated { n: usize, tint: Tint },
    Star { n: usize },
    TintedStar { n: usize, centre: Tint },
    JoinedStars { n: usize, a: Tint, b: Tint },
    Caterpillar { n: usize },
}

impl FamilyInstance {
    pub fn position(&self) -> Result<Position, FamilyError> {
        Ok(match *self {
            FamilyInstance::Isolated { n, tint } => make_isolated(n, tint),
            FamilyInstance::Star { n } => make_star(n, Tint::None),
            FamilyInstance::TintedStar { n, centre } => make_star(n, centre),
            FamilyInstance::JoinedStars { n, a, b } => make_joined_stars(n, a, b),
            FamilyInstance::Caterpillar { n } => make_caterpillar(CaterpillarSpec::new(n)?),
        })
    }

    /// The closed-form value written in game notation.
    pub fn oracle_notation(&self) -> Result<String, FamilyError> {
        let unsupported = || FamilyError::UnsupportedFamily(format!("{self:?}"));
        let s = |k: usize| if k.is_multiple_of(2) { "" } else { "*" };
        // s(k) on its own: "0" or "*".
        let s_alone = |k: usize| if k.is_multiple_of(2) { "0" } else { "*" };
        Ok(match *self {
            FamilyInstance::Isolated { n, tint } => match tint {
                Tint::None => s_alone(n).to_string(),
                Tint::Blue => n.to_string(),
                Tint::Red => format!("-{n}"),
            },
            FamilyInstance::Star { n } => format!("±{n}"),
            FamilyInstance::TintedStar { n, centre } => {
                let right = if n == 0 { "0" } else { s_alone(n - 1) };
                match centre {
                    Tint::None => format!("±{n}"),
                    Tint::Blue => format!("{{{n}|{right}}}"),
                    Tint::Red => format!("{{{right}|-{n}}}"),
                }
            }
            FamilyInstance::JoinedStars { n, a, b } => match (a, b) {
                (Tint::Blue, Tint::Red) | (Tint::Red, Tint::Blue) => format!("±{n}{}", s(n)),
                (Tint::Blue, Tint::Blue) | (Tint::Red, Tint::Red) => {
                    let sign = if a == Tint::Blue { "" } else { "-" };
                    let right = if n == 0 { "0" } else { s_alone(n - 1) };
                    // The edge between equal tints is irrelevant: a sum of
                    // two tinted stars.
                    if n == 0 {
                        format!("{sign}2")
                    } else if a == Tint::Blue {
                        format!("{{{sign}{n}|{right}}} + {{{sign}{n}|{right}}}")
                    } else {
                        format!("{{{right}|-{n}}} + {{{right}|-{n}}}")
                    }
                }
                _ => return Err(unsupported()),
            },
            FamilyInstance::Caterpillar { n } => {
                CaterpillarSpec::new(n)?;
                let s_prev = s(n - 1);
                format!(
                    "±{{{}{}, {{{{{}|{}{}}}|{}}}}}",
                    2 * n + 1,
                    s(n),
                    3 * n + 2,
                    2 * n + 2,
                    s_prev,
                    s_alone(n)
                )
            }
        })
    }

    /// The closed-form value as a canonical game.
    pub fn oracle_value(&self, engine: &mut Engine) -> Result<GameId, FamilyError> {
        let text = self.oracle_notation()?;
        let store = engine.store();
        let mut total = crate::game::GameStore::ZERO;
        for term in text.split(" + ") {
            let g = parse_game(store, term).map_err(|e| {
                FamilyError::UnsupportedFamily(format!("bad oracle notation `{term}`: {e}"))
            })?;
            total = store.sum(total, g);
        }
        Ok(store.canonicalize(total))
    }

    /// Parameter of the instance.
    pub fn n(&self) -> usize {
        match *self {
            FamilyInstance::Isolated { n, .. }
            | FamilyInstance::Star { n }
            | FamilyInstance::TintedStar { n, .. }
            | FamilyInstance::JoinedStars { n, .. }
            | FamilyInstance::Caterpillar { n } => n,
        }
    }

    /// Closed-form temperature, where one is stated for the family.
    pub fn expected_temperature(&self) -> Option<Dyadic> {
        match *self {
            FamilyInstance::Star { n } if n >= 1 => Some(Dyadic::from(n as i64)),
            FamilyInstance::JoinedStars { n, a, b } if a != b && n >= 1 => {
                Some(Dyadic::from(n as i64))
            }
            FamilyInstance::Caterpillar { n } => Some(Dyadic::from(2 * n as i64 + 1)),
            _ => None,
        }
    }

    pub fn expected_degree(&self) -> Option<usize> {
        match *self {
            FamilyInstance::Isolated { .. } => Some(0),
            FamilyInstance::Star { n } | FamilyInstance::TintedStar { n, .. } => Some(n),
            FamilyInstance::JoinedStars { n, .. } => Some(n + 1),
            FamilyInstance::Caterpillar { n } => Some(n + 2),
        }
    }
}

/// Families addressable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Star,
    TintedStar,
    JoinedStars,
    Caterpillar,
}

impl Family {
    pub fn instance(self, n: usize) -> FamilyInstance {
        match self {
            Family::Star => FamilyInstance::Star { n },
            Family::TintedStar => FamilyInstance::TintedStar {
                n,
                centre: Tint::Blue,
            },
            Family::JoinedStars => FamilyInstance::JoinedStars {
                n,
                a: Tint::Blue,
                b: Tint::Red,
            },
            Family::Caterpillar => FamilyInstance::Caterpillar { n },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::TintedStar => "tinted-star",
            Family::JoinedStars => "joined-stars",
            Family::Caterpillar => "caterpillar",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "star" => Ok(Family::Star),
            "tinted-star" => Ok(Family::TintedStar),
            "joined-stars" => Ok(Family::JoinedStars),
            "caterpillar" => Ok(Family::Caterpillar),
            other => Err(FamilyError::UnsupportedFamily(other.to_string())),
        }
    }
}

/// One verified instance, mirroring the columns canonical form / t / deg /
/// t - deg.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub n: usize,
    pub canonical_form: String,
    pub oracle_form: String,
    pub values_equal: bool,
    pub text_equal: bool,
    pub temperature: Dyadic,
    pub expected_temperature: Option<Dyadic>,
    pub degree: usize,
    pub expected_degree: Option<usize>,
    pub temp_minus_degree: Dyadic,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// Plain text table.
    pub fn to_table(&self) -> String {
        let mut out = format!("family: {}\n", self.family);
        let width = self
            .rows
            .iter()
            .map(|r| r.canonical_form.chars().count())
            .max()
            .unwrap_or(0)
            .max("canonical form".len());
        out.push_str(&format!(
            "{:>3} | {:<width$} | {:>6} | {:>6} | {:>7} | {}\n",
            "n", "canonical form", "t(G)", "deg(G)", "t-deg", "status"
        ));
        out.push_str(&format!("{}\n", "-".repeat(width + 44)));
        for r in &self.rows {
            let pad = width - r.canonical_form.chars().count();
            out.push_str(&format!(
                "{:>3} | {}{} | {:>6} | {:>6} | {:>7} | {}\n",
                r.n,
                r.canonical_form,
                " ".repeat(pad),
                r.temperature.to_string(),
                r.degree,
                r.temp_minus_degree.to_string(),
                if r.pass { "pass" } else { "FAIL" }
            ));
            if !r.pass {
                out.push_str(&format!("    expected {}\n", r.oracle_form));
            }
        }
        out
    }
}

/// Evaluates one instance with the engine and compares it to its oracle.
pub fn verify_instance(
    engine: &mut Engine,
    inst: FamilyInstance,
) -> Result<VerifyRow, FamilyError> {
    let position = inst.position()?;
    let value = engine.value(&position)?;
    let canonical_form = engine.format(value);
    let oracle = inst.oracle_value(engine)?;
    let oracle_form = engine.format(oracle);
    let values_equal = engine.store().eq(value, oracle);
    let text_equal = canonical_form == oracle_form;
    let temperature = engine.store().temperature(value);
    let degree = position.degree();
    let expected_temperature = inst.expected_temperature();
    let expected_degree = inst.expected_degree();
    let pass = values_equal
        && text_equal
        && expected_temperature
            .as_ref()
            .is_none_or(|t| *t == temperature)
        && expected_degree.is_none_or(|d| d == degree);
    Ok(VerifyRow {
        n: inst.n(),
        temp_minus_degree: &temperature - &Dyadic::from(degree as i64),
        canonical_form,
        oracle_form,
        values_equal,
        text_equal,
        temperature,
        expected_temperature,
        degree,
        expected_degree,
        pass,
    })
}

pub fn verify_family(
    engine: &mut Engine,
    family: Family,
    ns: impl IntoIterator<Item = usize>,
) -> Result<VerifyReport, FamilyError> {
    let rows = ns
        .into_iter()
        .map(|n| verify_instance(engine, family.instance(n)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerifyReport {
        family: family.name().to_string(),
        rows,
    })
}
