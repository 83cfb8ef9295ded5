//! Compact board used inside the value recursion, and its canonical key.
//!
//! The key is a canonical labeling of the tint-coloured graph: colour
//! refinement, then individualization of each vertex of the first
//! non-singleton cell, keeping the lexicographically least adjacency
//! encoding. Twins (same tint, same neighbourhood apart from each other) are
//! interchangeable by an automorphism, so only one twin per class is tried.

use super::position::{Player, Position, Tint};

pub const MAX_COMPONENT: usize = 128;

type Mask = u128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Board {
    pub tints: Vec<Tint>,
    pub adj: Vec<Mask>,
}

impl Board {
    /// Requires at most [`MAX_COMPONENT`] vertices.
    pub fn from_position(p: &Position) -> Board {
        assert!(p.vertex_count() <= MAX_COMPONENT);
        let tints = p.vertices().iter().map(|v| v.tint).collect();
        let mut adj = vec![0; p.vertex_count()];
        for (u, v) in p.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Board { tints, adj }
    }

    pub fn len(&self) -> usize {
        self.tints.len()
    }

    pub fn legal_moves(&self, who: Player) -> impl Iterator<Item = usize> + '_ {
        let banned = who.opponent().tint();
        (0..self.len()).filter(move |&v| self.tints[v] != banned)
    }

    /// Colours `v` for `who`, removes it and any vertex now tinted for both
    /// players, and drops edges between equally tinted vertices.
    pub fn play(&self, who: Player, v: usize) -> Board {
        let colour = who.tint();
        let mut tints = self.tints.clone();
        let mut alive: Mask = mask_all(self.len()) & !(1 << v);
        let mut nb = self.adj[v];
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            match tints[u] {
                Tint::None => tints[u] = colour,
                t if t == colour => {}
                _ => alive &= !(1 << u),
            }
        }
        self.restrict(alive, &tints)
    }

    /// Induced board on the `alive` vertices with the given tints, with
    /// same-tint edges removed.
    fn restrict(&self, alive: Mask, tints: &[Tint]) -> Board {
        let count = alive.count_ones() as usize;
        let mut new_tints = Vec::with_capacity(count);
        let mut adj = Vec::with_capacity(count);
        let mut rest = alive;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            new_tints.push(tints[i]);
            let mut row: Mask = 0;
            let mut nb = self.adj[i] & alive;
            while nb != 0 {
                let j = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if tints[i] != Tint::None && tints[i] == tints[j] {
                    continue;
                }
                let below: Mask = (1 << j) - 1;
                row |= 1 << (alive & below).count_ones();
            }
            adj.push(row);
        }
        Board {
            tints: new_tints,
            adj,
        }
    }

    pub fn components(&self) -> Vec<Board> {
        let n = self.len();
        let mut unseen = mask_all(n);
        let mut out = Vec::new();
        while unseen != 0 {
            let start = unseen.trailing_zeros() as usize;
            let mut comp: Mask = 1 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                let mut f = frontier;
                while f != 0 {
                    let u = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= self.adj[u];
                }
                frontier = next & !comp;
                comp |= next;
            }
            unseen &= !comp;
            if comp == mask_all(n) {
                out.push(self.clone());
            } else {
                out.push(self.restrict(comp, &self.tints));
            }
        }
        out
    }

    /// Canonical key of a connected board.
    pub fn component_key(&self) -> Vec<u8> {
        let n = self.len();
        let colours: Vec<u32> = self.tints.iter().map(|&t| tint_code(t) as u32).collect();
        let colours = self.refine(colours);
        let mut best: Option<Vec<u8>> = None;
        self.search(colours, &mut best);
        let mut key = best.unwrap_or_default();
        if n == 0 {
            key.push(0);
        }
        key
    }

    /// Canonical key of an arbitrary board: sorted component keys.
    #[cfg(test)]
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut keys: Vec<Vec<u8>> = self.components().iter().map(Board::component_key).collect();
        keys.sort();
        let mut out = Vec::new();
        for k in keys {
            out.extend_from_slice(&(k.len() as u32).to_le_bytes());
            out.extend(k);
        }
        out
    }

    /// Equitable refinement. Colours are ranks 0..k of the sorted
    /// signatures, so the result depends only on the isomorphism class.
    fn refine(&self, mut colours: Vec<u32>) -> Vec<u32> {
        let n = self.len();
        let mut classes = count_classes(&colours);
        let mut sig: Vec<u32> = Vec::with_capacity(n * 4);
        let mut spans = vec![(0usize, 0usize); n];
        let mut order: Vec<usize> = (0..n).collect();
        loop {
            sig.clear();
            for v in 0..n {
                let start = sig.len();
                sig.push(colours[v]);
                let mut nb = self.adj[v];
                while nb != 0 {
                    let u = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    sig.push(colours[u]);
                }
                sig[start + 1..].sort_unstable();
                spans[v] = (start, sig.len());
            }
            let key = |v: usize| &sig[spans[v].0..spans[v].1];
            order.sort_unstable_by(|&a, &b| key(a).cmp(key(b)));
            let mut next = vec![0u32; n];
            let mut rank = 0u32;
            for i in 0..n {
                if i > 0 && key(order[i]) != key(order[i - 1]) {
                    rank += 1;
                }
                next[order[i]] = rank;
            }
            let new_classes = rank as usize + 1;
            colours = next;
            if new_classes == classes || n == 0 {
                return colours;
            }
            classes = new_classes;
        }
    }

    /// Encoding under the current labeling. Equal boards reached along
    /// different move orders share it, since play keeps vertex order.
    pub fn labelled_key(&self) -> Vec<u8> {
        let identity: Vec<u32> = (0..self.len() as u32).collect();
        self.encode(&identity)
    }

    fn search(&self, colours: Vec<u32>, best: &mut Option<Vec<u8>>) {
        let n = self.len();
        // Cell sizes by colour.
        let mut sizes = vec![0usize; n.max(1)];
        for &c in &colours {
            sizes[c as usize] += 1;
        }
        let target = (0..n).find(|&c| sizes[c] > 1);
        let Some(target) = target else {
            let enc = self.encode(&colours);
            if best.as_ref().is_none_or(|b| enc < *b) {
                *best = Some(enc);
            }
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for v in (0..n).filter(|&v| colours[v] as usize == target) {
            if tried.iter().any(|&w| self.twins(v, w)) {
                continue;
            }
            tried.push(v);
            let individualized: Vec<u32> =
                (0..n).map(|u| colours[u] * 2 + u32::from(u != v)).collect();
            let refined = self.refine(individualized);
            self.search(refined, best);
        }
    }

    fn twins(&self, u: usize, w: usize) -> bool {
        self.tints[u] == self.tints[w] && (self.adj[u] & !(1 << w)) == (self.adj[w] & !(1 << u))
    }

    /// Vertex count, tints and upper-triangle adjacency in colour order.
    fn encode(&self, colours: &[u32]) -> Vec<u8> {
        let n = self.len();
        let mut order = vec![0usize; n];
        for v in 0..n {
            order[colours[v] as usize] = v;
        }
        let mut out = Vec::with_capacity(1 + n + n * n / 16);
        out.push(n as u8);
        out.extend(order.iter().map(|&v| tint_code(self.tints[v])));
        let mut byte = 0u8;
        let mut bits = 0;
        for i in 0..n {
            for j in i + 1..n {
                byte = byte << 1 | (self.adj[order[i]] >> order[j] & 1) as u8;
                bits += 1;
                if bits == 8 {
                    out.push(byte);
                    byte = 0;
                    bits = 0;
                }
            }
        }
        if bits > 0 {
            out.push(byte << (8 - bits));
        }
        out
    }
}

fn tint_code(t: Tint) -> u8 {
    match t {
        Tint::None => 0,
        Tint::Blue => 1,
        Tint::Red => 2,
    }
}

fn mask_all(n: usize) -> Mask {
    if n >= 128 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

fn count_classes(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn board(n: usize, edges: &[(usize, usize)], tints: &[(usize, Tint)]) -> Board {
        let ids: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let e: Vec<(String, String)> = edges
            .iter()
            .map(|&(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let mut p = Position::from_edges(&ids, &e).unwrap();
        for &(v, t) in tints {
            p.set_tint(&v.to_string(), t).unwrap();
        }
        Board::from_position(&p.normalize())
    }

    #[test]
    fn star_labelings_share_a_key() {
        let a = board(4, &[(0, 1), (0, 2), (0, 3)], &[]);
        let b = board(4, &[(3, 0), (3, 1), (3, 2)], &[]);
        assert_eq!(a.canonical_key(), b.canonical_key());
    }

    #[test]
    fn tints_distinguish_keys() {
        let blue = board(4, &[(0, 1), (0, 2), (0, 3)], &[(0, Tint::Blue)]);
        let red = board(4, &[(0, 1), (0, 2), (0, 3)], &[(0, Tint::Red)]);
        assert_ne!(blue.canonical_key(), red.canonical_key());
    }

    #[test]
    fn path_and_star_differ() {
        let p4 = board(4, &[(0, 1), (1, 2), (2, 3)], &[]);
        let k13 = board(4, &[(0, 1), (0, 2), (0, 3)], &[]);
        assert_ne!(p4.canonical_key(), k13.canonical_key());
    }

    #[test]
    fn regular_graphs_are_separated() {
        // C6 versus two triangles: refinement alone cannot tell them apart.
        let c6 = board(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)], &[]);
        let tri = board(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], &[]);
        assert_ne!(c6.canonical_key(), tri.canonical_key());
        // The 3-prism against K_{3,3}.
        let prism = board(
            6,
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 4),
                (4, 5),
                (5, 3),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
            &[],
        );
        let k33 = board(
            6,
            &[
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (2, 5),
            ],
            &[],
        );
        assert_ne!(prism.canonical_key(), k33.canonical_key());
        let relabeled = board(
            6,
            &[
                (5, 4),
                (4, 3),
                (3, 5),
                (2, 1),
                (1, 0),
                (0, 2),
                (5, 2),
                (4, 1),
                (3, 0),
            ],
            &[],
        );
        assert_eq!(prism.canonical_key(), relabeled.canonical_key());
    }

    #[test]
    fn play_and_components() {
        // Path 0-1-2-3-4; Left plays 3.
        let b = board(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], &[]);
        let after = b.play(Player::Left, 3);
        assert_eq!(after.len(), 4);
        let comps = after.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].len(), 3);
        assert_eq!(comps[1].tints, vec![Tint::Blue]);
    }
}
