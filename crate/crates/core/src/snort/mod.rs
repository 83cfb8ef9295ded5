//! Snort on simple graphs: boards, moves, decomposition and evaluation.

mod board;
mod engine;
mod position;

use thiserror::Error;

pub use board::MAX_COMPONENT;
pub use engine::{Engine, MEMO_LIMIT_ENV};
pub use position::{Player, Position, Tint, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnortError {
    #[error("{player} cannot colour vertex `{vertex}`")]
    IllegalMove { vertex: String, player: Player },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("connected component with {0} vertices exceeds the supported {max}", max = MAX_COMPONENT)]
    ComponentTooLarge(usize),
    #[error("invalid position file: {0}")]
    Format(String),
}

/// Canonical key of a position, invariant under tint-preserving isomorphism.
/// Vertex ids are ignored.
pub fn canonical_key(p: &Position) -> Result<Vec<u8>, SnortError> {
    let p = p.normalize();
    let mut keys = Vec::new();
    for comp in p.component_indices() {
        if comp.len() > MAX_COMPONENT {
            return Err(SnortError::ComponentTooLarge(comp.len()));
        }
        keys.push(board::Board::from_position(&p.induced(&comp)).component_key());
    }
    keys.sort();
    let mut out = Vec::new();
    for k in keys {
        out.extend_from_slice(&(k.len() as u32).to_le_bytes());
        out.extend(k);
    }
    Ok(out)
}

/// Components as independent positions, ordered by canonical key.
pub fn components(p: &Position) -> Vec<Position> {
    let mut comps: Vec<(Vec<u8>, Position)> = p
        .component_indices()
        .into_iter()
        .map(|c| {
            let sub = p.induced(&c);
            let key = canonical_key(&sub).unwrap_or_default();
            (key, sub)
        })
        .collect();
    comps.sort_by(|a, b| a.0.cmp(&b.0));
    comps.into_iter().map(|(_, p)| p).collect()
}
