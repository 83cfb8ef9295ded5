use std::num::NonZeroUsize;

use lru::LruCache;

use super::board::{Board, MAX_COMPONENT};
use super::position::{Player, Position};
use super::SnortError;
use crate::dyadic::Dyadic;
use crate::game::{GameId, GameStore};
use crate::notation::format_game;

/// Environment variable capping the number of memoized component values.
pub const MEMO_LIMIT_ENV: &str = "SNORT_MEMO_LIMIT";

// Trailing tag separating the two kinds of memo key.
const LABELLED: u8 = 0;
const CANONICAL: u8 = 1;

/// Evaluates Snort positions. Holds the game arena and a memo of component
/// values keyed by canonical labeling, so isomorphic components are solved
/// once.
pub struct Engine {
    store: GameStore,
    memo: LruCache<Vec<u8>, GameId>,
    evaluated: u64,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Self::with_memo_limit(None)
    }

    /// `None` keeps every component value; `Some(n)` evicts least recently
    /// used entries beyond `n`.
    pub fn with_memo_limit(limit: Option<NonZeroUsize>) -> Self {
        let memo = match limit {
            Some(n) => LruCache::new(n),
            None => LruCache::unbounded(),
        };
        Self {
            store: GameStore::new(),
            memo,
            evaluated: 0,
        }
    }

    /// Reads [`MEMO_LIMIT_ENV`]; unset, empty or `0` means unbounded.
    pub fn from_env() -> Result<Self, SnortError> {
        let limit = match std::env::var(MEMO_LIMIT_ENV) {
            Ok(s) if !s.trim().is_empty() => {
                let n: usize = s.trim().parse().map_err(|_| {
                    SnortError::Format(format!("{MEMO_LIMIT_ENV} must be an integer, got `{s}`"))
                })?;
                NonZeroUsize::new(n)
            }
            _ => None,
        };
        Ok(Self::with_memo_limit(limit))
    }

    pub fn store(&mut self) -> &mut GameStore {
        &mut self.store
    }

    /// Number of component evaluations that missed the memo.
    pub fn evaluated(&self) -> u64 {
        self.evaluated
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Canonical game value of a position: the sum of its components'
    /// values, each the canonical form of `{Left moves | Right moves}`.
    pub fn value(&mut self, p: &Position) -> Result<GameId, SnortError> {
        let p = p.normalize();
        let mut total = GameStore::ZERO;
        for comp in p.component_indices() {
            if comp.len() > MAX_COMPONENT {
                return Err(SnortError::ComponentTooLarge(comp.len()));
            }
            let board = Board::from_position(&p.induced(&comp));
            let v = self.component_value(&board);
            total = self.store.sum(total, v);
        }
        Ok(total)
    }

    pub fn position_temperature(&mut self, p: &Position) -> Result<Dyadic, SnortError> {
        let g = self.value(p)?;
        Ok(self.store.temperature(g))
    }

    /// Canonical form of the position's value in text notation.
    pub fn canonical_form(&mut self, p: &Position) -> Result<String, SnortError> {
        let g = self.value(p)?;
        Ok(format_game(&mut self.store, g))
    }

    pub fn format(&mut self, g: GameId) -> String {
        format_game(&mut self.store, g)
    }

    fn board_value(&mut self, b: &Board) -> GameId {
        let mut total = GameStore::ZERO;
        for comp in b.components() {
            let v = self.component_value(&comp);
            total = self.store.sum(total, v);
        }
        total
    }

    fn component_value(&mut self, b: &Board) -> GameId {
        let mut labelled = b.labelled_key();
        labelled.push(LABELLED);
        if let Some(&g) = self.memo.get(&labelled) {
            return g;
        }
        let mut key = b.component_key();
        key.push(CANONICAL);
        if let Some(&g) = self.memo.get(&key) {
            self.memo.put(labelled, g);
            return g;
        }
        self.evaluated += 1;
        let mut options = [Vec::new(), Vec::new()];
        for (side, who) in [Player::Left, Player::Right].into_iter().enumerate() {
            let moves: Vec<usize> = b.legal_moves(who).collect();
            for v in moves {
                let child = b.play(who, v);
                let g = self.board_value(&child);
                options[side].push(g);
            }
        }
        let [left, right] = options;
        let raw = self.store.make_game(left, right);
        let g = self.store.canonicalize(raw);
        self.memo.put(key, g);
        self.memo.put(labelled, g);
        g
    }
}
