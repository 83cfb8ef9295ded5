//! Short partizan games stored in a hash-consed arena.
//!
//! Every game lives in a [`GameStore`] and is referred to by a [`GameId`].
//! Interning guarantees that two structurally identical games share one id,
//! so every memo table (negation, sums, order, canonical forms) keys on ids.

use std::cmp::Ordering;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::thermograph::Thermograph;

/// Handle to an interned game inside a [`GameStore`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GameId(u32);

impl GameId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Node {
    left: Box<[GameId]>,
    right: Box<[GameId]>,
}

/// Outcome class under optimal play.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Outcome {
    LeftWins,
    RightWins,
    FirstWins,
    SecondWins,
}

/// Classification of a canonical game, used for notation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum GameKind {
    Integer(i64),
    IntegerPlusStar(i64),
    /// A non-integer dyadic number.
    Number(Dyadic),
    NumberPlusStar(Dyadic),
    General,
}

impl GameKind {
    /// The number part for numbers and number-plus-star games.
    pub fn number(&self) -> Option<Dyadic> {
        match self {
            GameKind::Integer(n) | GameKind::IntegerPlusStar(n) => Some(Dyadic::from(*n)),
            GameKind::Number(x) | GameKind::NumberPlusStar(x) => Some(x.clone()),
            GameKind::General => None,
        }
    }

    pub fn is_number(&self) -> bool {
        matches!(self, GameKind::Integer(_) | GameKind::Number(_))
    }
}

/// Arena of interned games plus the memo tables of every game operation.
///
/// All operations are pure functions of their arguments; the store only
/// caches. A store is confined to one thread at a time.
#[derive(Debug)]
pub struct GameStore {
    nodes: Vec<Node>,
    index: FxHashMap<Node, GameId>,
    negations: FxHashMap<GameId, GameId>,
    sums: FxHashMap<(GameId, GameId), GameId>,
    order: FxHashMap<(GameId, GameId), bool>,
    canonical: FxHashMap<GameId, GameId>,
    kinds: FxHashMap<GameId, GameKind>,
    left_first: FxHashMap<GameId, bool>,
    right_first: FxHashMap<GameId, bool>,
    pub(crate) thermographs: FxHashMap<GameId, Arc<Thermograph>>,
}

impl Default for GameStore {
    fn default() -> Self {
        Self::new()
    }
}

impl GameStore {
    pub const ZERO: GameId = GameId(0);

    pub fn new() -> Self {
        let mut store = Self {
            nodes: Vec::new(),
            index: FxHashMap::default(),
            negations: FxHashMap::default(),
            sums: FxHashMap::default(),
            order: FxHashMap::default(),
            canonical: FxHashMap::default(),
            kinds: FxHashMap::default(),
            left_first: FxHashMap::default(),
            right_first: FxHashMap::default(),
            thermographs: FxHashMap::default(),
        };
        let zero = store.make_game(Vec::new(), Vec::new());
        debug_assert_eq!(zero, Self::ZERO);
        store
    }

    /// Number of interned games.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Interns `{left | right}`. Option lists are deduplicated and order-free.
    pub fn make_game(&mut self, mut left: Vec<GameId>, mut right: Vec<GameId>) -> GameId {
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        let node = Node {
            left: left.into_boxed_slice(),
            right: right.into_boxed_slice(),
        };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = GameId(u32::try_from(self.nodes.len()).expect("game arena overflow"));
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub fn left(&self, g: GameId) -> &[GameId] {
        &self.nodes[g.index()].left
    }

    pub fn right(&self, g: GameId) -> &[GameId] {
        &self.nodes[g.index()].right
    }

    pub fn zero(&self) -> GameId {
        Self::ZERO
    }

    pub fn star(&mut self) -> GameId {
        self.make_game(vec![Self::ZERO], vec![Self::ZERO])
    }

    /// The canonical integer `n`: `{n-1 | }` for positive `n`, `{ | n+1}` for
    /// negative `n`.
    pub fn integer(&mut self, n: i64) -> GameId {
        let mut g = Self::ZERO;
        for _ in 0..n.unsigned_abs() {
            g = if n > 0 {
                self.make_game(vec![g], Vec::new())
            } else {
                self.make_game(Vec::new(), vec![g])
            };
        }
        g
    }

    /// The canonical form of a dyadic number.
    pub fn number(&mut self, x: &Dyadic) -> GameId {
        if let Some(n) = x.to_i64() {
            return self.integer(n);
        }
        let e = x.exponent();
        let lower = Dyadic::new(x.numerator() - 1, e);
        let upper = Dyadic::new(x.numerator() + 1, e);
        let l = self.number(&lower);
        let r = self.number(&upper);
        self.make_game(vec![l], vec![r])
    }

    /// `x + *` for a number `x`, i.e. `{x | x}`.
    pub fn number_plus_star(&mut self, x: &Dyadic) -> GameId {
        let n = self.number(x);
        self.make_game(vec![n], vec![n])
    }

    /// `±{options} = {options | -options}`.
    pub fn switch(&mut self, options: Vec<GameId>) -> GameId {
        let right = options.iter().map(|&g| self.negate(g)).collect();
        self.make_game(options, right)
    }

    pub fn negate(&mut self, g: GameId) -> GameId {
        if let Some(&n) = self.negations.get(&g) {
            return n;
        }
        let left: Vec<GameId> = self.right(g).to_vec();
        let right: Vec<GameId> = self.left(g).to_vec();
        let left = left.into_iter().map(|h| self.negate(h)).collect();
        let right = right.into_iter().map(|h| self.negate(h)).collect();
        let n = self.make_game(left, right);
        self.negations.insert(g, n);
        self.negations.insert(n, g);
        n
    }

    /// Disjunctive sum, returned in canonical form.
    ///
    /// Both summands are canonicalized first; the expansion
    /// `{G^L + H, G + H^L | G^R + H, G + H^R}` is memoized on the unordered
    /// pair of canonical summands.
    pub fn sum(&mut self, g: GameId, h: GameId) -> GameId {
        let g = self.canonicalize(g);
        let h = self.canonicalize(h);
        self.canonical_sum(g, h)
    }

    fn canonical_sum(&mut self, g: GameId, h: GameId) -> GameId {
        if g == Self::ZERO {
            return h;
        }
        if h == Self::ZERO {
            return g;
        }
        let key = if g <= h { (g, h) } else { (h, g) };
        if let Some(&s) = self.sums.get(&key) {
            return s;
        }
        let (gl, gr) = (self.left(g).to_vec(), self.right(g).to_vec());
        let (hl, hr) = (self.left(h).to_vec(), self.right(h).to_vec());
        let mut left = Vec::with_capacity(gl.len() + hl.len());
        let mut right = Vec::with_capacity(gr.len() + hr.len());
        for x in gl {
            left.push(self.canonical_sum(x, h));
        }
        for x in hl {
            left.push(self.canonical_sum(g, x));
        }
        for x in gr {
            right.push(self.canonical_sum(x, h));
        }
        for x in hr {
            right.push(self.canonical_sum(g, x));
        }
        let raw = self.make_game(left, right);
        let s = self.canonicalize(raw);
        self.sums.insert(key, s);
        s
    }

    /// Sum of any number of games (canonical).
    pub fn sum_all<I: IntoIterator<Item = GameId>>(&mut self, games: I) -> GameId {
        games
            .into_iter()
            .fold(Self::ZERO, |acc, g| self.sum(acc, g))
    }

    pub fn difference(&mut self, g: GameId, h: GameId) -> GameId {
        let nh = self.negate(h);
        self.sum(g, nh)
    }

    /// `g <= h`: no `g^L` with `h <= g^L` and no `h^R` with `h^R <= g`.
    pub fn leq(&mut self, g: GameId, h: GameId) -> bool {
        if g == h {
            return true;
        }
        if let Some(&b) = self.order.get(&(g, h)) {
            return b;
        }
        let mut result = true;
        for i in 0..self.left(g).len() {
            let gl = self.left(g)[i];
            if self.leq(h, gl) {
                result = false;
                break;
            }
        }
        if result {
            for i in 0..self.right(h).len() {
                let hr = self.right(h)[i];
                if self.leq(hr, g) {
                    result = false;
                    break;
                }
            }
        }
        self.order.insert((g, h), result);
        result
    }

    pub fn geq(&mut self, g: GameId, h: GameId) -> bool {
        self.leq(h, g)
    }

    pub fn eq(&mut self, g: GameId, h: GameId) -> bool {
        self.leq(g, h) && self.leq(h, g)
    }

    /// Partial order comparison; `None` when the games are confused.
    pub fn compare(&mut self, g: GameId, h: GameId) -> Option<Ordering> {
        match (self.leq(g, h), self.leq(h, g)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    /// `x <= {left | right}` for a game given only by its option lists.
    fn leq_moves(&mut self, x: GameId, left: &[GameId], right: &[GameId]) -> bool {
        for &r in right {
            if self.leq(r, x) {
                return false;
            }
        }
        for i in 0..self.left(x).len() {
            let xl = self.left(x)[i];
            if self.geq_moves(xl, left, right) {
                return false;
            }
        }
        true
    }

    /// `{left | right} <= y`.
    fn geq_moves(&mut self, y: GameId, left: &[GameId], right: &[GameId]) -> bool {
        for &l in left {
            if self.leq(y, l) {
                return false;
            }
        }
        for i in 0..self.right(y).len() {
            let yr = self.right(y)[i];
            if self.leq_moves(yr, left, right) {
                return false;
            }
        }
        true
    }

    /// Whether Left, moving first, wins.
    fn left_wins_first(&mut self, g: GameId) -> bool {
        if let Some(&b) = self.left_first.get(&g) {
            return b;
        }
        let mut result = false;
        for i in 0..self.left(g).len() {
            let gl = self.left(g)[i];
            if !self.right_wins_first(gl) {
                result = true;
                break;
            }
        }
        self.left_first.insert(g, result);
        result
    }

    fn right_wins_first(&mut self, g: GameId) -> bool {
        if let Some(&b) = self.right_first.get(&g) {
            return b;
        }
        let mut result = false;
        for i in 0..self.right(g).len() {
            let gr = self.right(g)[i];
            if !self.left_wins_first(gr) {
                result = true;
                break;
            }
        }
        self.right_first.insert(g, result);
        result
    }

    /// Outcome class by direct play on the game tree.
    pub fn outcome(&mut self, g: GameId) -> Outcome {
        let left_first = self.left_wins_first(g);
        let left_second = !self.right_wins_first(g);
        match (left_first, left_second) {
            (true, true) => Outcome::LeftWins,
            (false, false) => Outcome::RightWins,
            (true, false) => Outcome::FirstWins,
            (false, true) => Outcome::SecondWins,
        }
    }

    pub fn is_canonical(&mut self, g: GameId) -> bool {
        self.canonicalize(g) == g
    }

    /// Canonical form: options canonicalized, dominated options deleted and
    /// reversible options bypassed until neither applies.
    pub fn canonicalize(&mut self, g: GameId) -> GameId {
        if let Some(&c) = self.canonical.get(&g) {
            return c;
        }
        let raw_left = self.left(g).to_vec();
        let raw_right = self.right(g).to_vec();
        let mut left: Vec<GameId> = raw_left.into_iter().map(|x| self.canonicalize(x)).collect();
        let mut right: Vec<GameId> = raw_right
            .into_iter()
            .map(|x| self.canonicalize(x))
            .collect();
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();

        loop {
            self.remove_dominated(&mut left, true);
            self.remove_dominated(&mut right, false);
            if self.bypass_reversible_left(&mut left, &right) {
                continue;
            }
            if self.bypass_reversible_right(&left, &mut right) {
                continue;
            }
            break;
        }

        let c = self.make_game(left, right);
        self.canonical.insert(g, c);
        self.canonical.insert(c, c);
        c
    }

    /// Drops options dominated by a sibling. Options are canonical and
    /// distinct, so no two of them are equal.
    fn remove_dominated(&mut self, options: &mut Vec<GameId>, for_left: bool) {
        let mut keep = vec![true; options.len()];
        for i in 0..options.len() {
            for j in 0..options.len() {
                if i == j || !keep[j] {
                    continue;
                }
                let dominated = if for_left {
                    self.leq(options[i], options[j])
                } else {
                    self.leq(options[j], options[i])
                };
                if dominated {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut k = keep.iter();
        options.retain(|_| *k.next().unwrap());
    }

    /// Replaces one reversible left option, if any. Returns whether it did.
    fn bypass_reversible_left(&mut self, left: &mut Vec<GameId>, right: &[GameId]) -> bool {
        for i in 0..left.len() {
            let candidate = left[i];
            let responses = self.right(candidate).to_vec();
            for lr in responses {
                if self.leq_moves(lr, left, right) {
                    let replacement = self.left(lr).to_vec();
                    left.remove(i);
                    left.extend(replacement);
                    left.sort_unstable();
                    left.dedup();
                    return true;
                }
            }
        }
        false
    }

    fn bypass_reversible_right(&mut self, left: &[GameId], right: &mut Vec<GameId>) -> bool {
        for i in 0..right.len() {
            let candidate = right[i];
            let responses = self.left(candidate).to_vec();
            for rl in responses {
                if self.geq_moves(rl, left, right) {
                    let replacement = self.right(rl).to_vec();
                    right.remove(i);
                    right.extend(replacement);
                    right.sort_unstable();
                    right.dedup();
                    return true;
                }
            }
        }
        false
    }

    /// Classifies a game by its canonical form.
    pub fn kind(&mut self, g: GameId) -> GameKind {
        let g = self.canonicalize(g);
        if let Some(k) = self.kinds.get(&g) {
            return k.clone();
        }
        let k = self.classify(g);
        self.kinds.insert(g, k.clone());
        k
    }

    fn classify(&mut self, g: GameId) -> GameKind {
        let left = self.left(g).to_vec();
        let right = self.right(g).to_vec();
        match (left.as_slice(), right.as_slice()) {
            ([], []) => GameKind::Integer(0),
            ([x], []) => match self.kind(*x) {
                GameKind::Integer(n) if n >= 0 => GameKind::Integer(n + 1),
                _ => GameKind::General,
            },
            ([], [x]) => match self.kind(*x) {
                GameKind::Integer(n) if n <= 0 => GameKind::Integer(n - 1),
                _ => GameKind::General,
            },
            ([a], [b]) if a == b => match self.kind(*a) {
                GameKind::Integer(n) => GameKind::IntegerPlusStar(n),
                GameKind::Number(x) => GameKind::NumberPlusStar(x),
                _ => GameKind::General,
            },
            ([a], [b]) => {
                let (ka, kb) = (self.kind(*a), self.kind(*b));
                if !(ka.is_number() && kb.is_number()) {
                    return GameKind::General;
                }
                let (x, y) = (ka.number().unwrap(), kb.number().unwrap());
                if x >= y {
                    return GameKind::General;
                }
                let simplest = simplest_between(&x, &y);
                // Only the canonical construction of that number is
                // classified as a number.
                if self.number(&simplest) != g {
                    return GameKind::General;
                }
                match simplest.to_i64() {
                    Some(n) => GameKind::Integer(n),
                    None => GameKind::Number(simplest),
                }
            }
            _ => GameKind::General,
        }
    }

    /// Counts of memo table entries, for diagnostics.
    pub fn stats(&self) -> StoreStats {
        StoreStats {
            games: self.nodes.len(),
            sums: self.sums.len(),
            comparisons: self.order.len(),
            thermographs: self.thermographs.len(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StoreStats {
    pub games: usize,
    pub sums: usize,
    pub comparisons: usize,
    pub thermographs: usize,
}

/// The simplest dyadic strictly between `lo` and `hi` (requires `lo < hi`).
fn simplest_between(lo: &Dyadic, hi: &Dyadic) -> Dyadic {
    let zero = Dyadic::zero();
    if lo < &zero && &zero < hi {
        return zero;
    }
    if lo >= &zero {
        let candidate = Dyadic::new(lo.floor() + 1, 0);
        if &candidate < hi {
            return candidate;
        }
    } else {
        let candidate = -Dyadic::new((-hi).floor() + 1, 0);
        if &candidate > lo {
            return candidate;
        }
    }
    let mut exponent = 1;
    loop {
        let scaled = Dyadic::new(lo.numerator() << exponent, lo.exponent());
        let candidate = Dyadic::new(scaled.floor() + 1, exponent);
        if &candidate < hi {
            return candidate;
        }
        exponent += 1;
    }
}
