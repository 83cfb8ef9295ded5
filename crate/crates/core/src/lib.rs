//! Exact partizan game values, thermographs and temperatures for Snort
//! played on simple graphs.

pub mod dyadic;
pub mod families;
pub mod game;
pub mod notation;
pub mod search;
pub mod thermograph;

pub use dyadic::Dyadic;
pub use game::{GameId, GameKind, GameStore, Outcome};
pub use notation::{format_game, parse_game, ParseGameError};
pub use thermograph::{Thermograph, ThermographError, Trajectory};
pub mod snort;

pub use snort::{canonical_key, components, Engine, Player, Position, SnortError, Tint};
