//! Text notation for games.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! game    := "±" game | "±" "{" list "}" | "{" list "|" list "}" | atom
//! atom    := "*" | ["-"] int ["/" int] ["*"]
//! list    := [game ("," game)*]
//! ```
//!
//! `n*` is `n + *`, `±x` is `{x | -x}` and `±{a, b}` is `{a, b | -a, -b}`.
//! `+-` is accepted in place of `±`.

use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::game::{GameId, GameKind, GameStore};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseGameError {
    pub offset: usize,
    pub message: String,
}

/// Renders a game. Option lists are printed in a deterministic order: numbers
/// first, then number-plus-star games, then everything else; ties broken by
/// numeric value and finally by the rendered text.
pub fn format_game(store: &mut GameStore, g: GameId) -> String {
    match store.kind(g) {
        GameKind::Integer(n) => return n.to_string(),
        GameKind::Number(x) => return x.to_string(),
        GameKind::IntegerPlusStar(0) => return "*".to_string(),
        GameKind::IntegerPlusStar(n) => return format!("{n}*"),
        GameKind::NumberPlusStar(x) => return format!("{x}*"),
        GameKind::General => {}
    }
    let left = store.left(g).to_vec();
    let right = store.right(g).to_vec();

    let mut negated_left: Vec<GameId> = left.iter().map(|&x| store.negate(x)).collect();
    negated_left.sort_unstable();
    if !left.is_empty() && negated_left == right {
        let sorted = sorted_options(store, &left);
        return if sorted.len() == 1 {
            format!("±{}", sorted[0])
        } else {
            format!("±{{{}}}", sorted.join(", "))
        };
    }
    let l = sorted_options(store, &left).join(", ");
    let r = sorted_options(store, &right).join(", ");
    format!("{{{l}|{r}}}")
}

fn sorted_options(store: &mut GameStore, options: &[GameId]) -> Vec<String> {
    let mut keyed: Vec<(u8, Option<Dyadic>, String)> = options
        .iter()
        .map(|&o| {
            let kind = store.kind(o);
            let rank = match kind {
                GameKind::Integer(_) | GameKind::Number(_) => 0,
                GameKind::IntegerPlusStar(_) | GameKind::NumberPlusStar(_) => 1,
                GameKind::General => 2,
            };
            (rank, kind.number(), format_game(store, o))
        })
        .collect();
    keyed.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.cmp(&b.1))
            .then_with(|| a.2.cmp(&b.2))
    });
    keyed.into_iter().map(|(_, _, s)| s).collect()
}

/// Parses the notation into a game with exactly the written structure (no
/// canonicalization).
pub fn parse_game(store: &mut GameStore, input: &str) -> Result<GameId, ParseGameError> {
    let mut parser = Parser {
        src: input,
        pos: 0,
        store,
    };
    let g = parser.game()?;
    parser.skip_ws();
    if parser.pos != input.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(g)
}

struct Parser<'a, 's> {
    src: &'a str,
    pos: usize,
    store: &'s mut GameStore,
}

impl Parser<'_, '_> {
    fn error(&self, message: impl Into<String>) -> ParseGameError {
        ParseGameError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseGameError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn game(&mut self) -> Result<GameId, ParseGameError> {
        if self.eat("±") || self.eat("+-") {
            return self.switch();
        }
        match self.peek() {
            Some('{') => {
                self.pos += 1;
                let left = self.list()?;
                self.expect("|")?;
                let right = self.list()?;
                self.expect("}")?;
                Ok(self.store.make_game(left, right))
            }
            Some(_) => self.atom(),
            None => Err(self.error("unexpected end of input")),
        }
    }

    /// After `±`: either a bare option list `{a, b}` or a single game.
    fn switch(&mut self) -> Result<GameId, ParseGameError> {
        if self.peek() == Some('{') {
            let start = self.pos;
            self.pos += 1;
            let options = self.list()?;
            if self.eat("}") {
                return Ok(self.store.switch(options));
            }
            // `±{a | b}`: a single braced game.
            self.pos = start;
        }
        let g = self.game()?;
        Ok(self.store.switch(vec![g]))
    }

    fn list(&mut self) -> Result<Vec<GameId>, ParseGameError> {
        let mut out = Vec::new();
        if matches!(self.peek(), Some('|') | Some('}')) {
            return Ok(out);
        }
        loop {
            out.push(self.game()?);
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn atom(&mut self) -> Result<GameId, ParseGameError> {
        if self.eat("*") {
            return Ok(self.store.star());
        }
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if end < bytes.len() && bytes[end] == b'-' {
            end += 1;
        }
        let digits_start = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits_start {
            return Err(self.error("expected a game"));
        }
        if end < bytes.len() && bytes[end] == b'/' {
            end += 1;
            let den_start = end;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if end == den_start {
                self.pos = end;
                return Err(self.error("expected denominator"));
            }
        }
        let value: Dyadic = self.src[start..end].parse().map_err(|e| ParseGameError {
            offset: start,
            message: format!("{e}"),
        })?;
        self.pos = end;
        if self.rest().starts_with('*') {
            self.pos += 1;
            Ok(self.store.number_plus_star(&value))
        } else {
            Ok(self.store.number(&value))
        }
    }
}
