//! Snort boards: simple graphs whose vertices may be tinted for one player.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SnortError;

#[derive(
    Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Tint {
    #[default]
    None,
    Blue,
    Red,
}

impl Tint {
    pub fn swapped(self) -> Tint {
        match self {
            Tint::None => Tint::None,
            Tint::Blue => Tint::Red,
            Tint::Red => Tint::Blue,
        }
    }
}

/// Left colours blue, Right colours red.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Player {
    Left,
    Right,
}

impl Player {
    pub fn tint(self) -> Tint {
        match self {
            Player::Left => Tint::Blue,
            Player::Right => Tint::Red,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::Left => Player::Right,
            Player::Right => Player::Left,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Left => f.write_str("Left"),
            Player::Right => f.write_str("Right"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    #[serde(default)]
    pub tint: Tint,
}

/// A Snort position. Vertex ids are opaque labels kept through play.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Position {
    vertices: Vec<Vertex>,
    /// Vertex index pairs `(u, v)` with `u < v`.
    edges: BTreeSet<(usize, usize)>,
}

impl Position {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an untinted graph from an edge list over the given vertex ids.
    pub fn from_edges<S: AsRef<str>>(ids: &[S], edges: &[(S, S)]) -> Result<Self, SnortError> {
        let mut p = Position::new();
        for id in ids {
            p.add_vertex(id.as_ref(), Tint::None)?;
        }
        for (u, v) in edges {
            p.add_edge(u.as_ref(), v.as_ref())?;
        }
        Ok(p)
    }

    pub fn add_vertex(&mut self, id: &str, tint: Tint) -> Result<usize, SnortError> {
        if self.index_of(id).is_some() {
            return Err(SnortError::DuplicateVertex(id.to_string()));
        }
        self.vertices.push(Vertex {
            id: id.to_string(),
            tint,
        });
        Ok(self.vertices.len() - 1)
    }

    /// Adds an edge; repeated edges are ignored, loops rejected.
    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<(), SnortError> {
        let a = self
            .index_of(u)
            .ok_or_else(|| SnortError::UnknownVertex(u.to_string()))?;
        let b = self
            .index_of(v)
            .ok_or_else(|| SnortError::UnknownVertex(v.to_string()))?;
        if a == b {
            return Err(SnortError::SelfLoop(u.to_string()));
        }
        self.edges.insert((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn set_tint(&mut self, id: &str, tint: Tint) -> Result<(), SnortError> {
        let i = self
            .index_of(id)
            .ok_or_else(|| SnortError::UnknownVertex(id.to_string()))?;
        self.vertices[i].tint = tint;
        Ok(())
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as index pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn tint(&self, i: usize) -> Tint {
        self.vertices[i].tint
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn is_untinted(&self) -> bool {
        self.vertices.iter().all(|v| v.tint == Tint::None)
    }

    /// Vertices `who` may colour: untinted ones and those tinted in `who`'s
    /// colour. In a normalized position no untinted vertex can neighbour a
    /// coloured one, since coloured vertices are removed.
    pub fn legal_moves(&self, who: Player) -> Vec<&str> {
        let banned = who.opponent().tint();
        self.vertices
            .iter()
            .filter(|v| v.tint != banned)
            .map(|v| v.id.as_str())
            .collect()
    }

    /// `who` colours `id`: the vertex disappears and its neighbours take
    /// `who`'s tint. The result is normalized.
    pub fn play(&self, who: Player, id: &str) -> Result<Position, SnortError> {
        let v = self
            .index_of(id)
            .ok_or_else(|| SnortError::UnknownVertex(id.to_string()))?;
        if self.vertices[v].tint == who.opponent().tint() {
            return Err(SnortError::IllegalMove {
                vertex: id.to_string(),
                player: who,
            });
        }
        let colour = who.tint();
        let mut dead = vec![false; self.vertices.len()];
        dead[v] = true;
        let mut tints: Vec<Tint> = self.vertices.iter().map(|x| x.tint).collect();
        for u in self.adjacency()[v].iter().copied() {
            match tints[u] {
                Tint::None => tints[u] = colour,
                t if t == colour => {}
                // Tinted for both players.
                _ => dead[u] = true,
            }
        }
        let mut keep: Vec<usize> = Vec::new();
        let mut remap = vec![usize::MAX; self.vertices.len()];
        for i in 0..self.vertices.len() {
            if !dead[i] {
                remap[i] = keep.len();
                keep.push(i);
            }
        }
        let vertices = keep
            .iter()
            .map(|&i| Vertex {
                id: self.vertices[i].id.clone(),
                tint: tints[i],
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| !dead[a] && !dead[b])
            .map(|&(a, b)| (remap[a], remap[b]))
            .collect();
        Ok(Position { vertices, edges }.normalize())
    }

    /// Drops edges between equally tinted vertices. Doubly tinted vertices
    /// are never stored, so this is the whole fixpoint.
    pub fn normalize(&self) -> Position {
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| {
                let (ta, tb) = (self.vertices[a].tint, self.vertices[b].tint);
                ta == Tint::None || ta != tb
            })
            .copied()
            .collect();
        Position {
            vertices: self.vertices.clone(),
            edges,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.edges.iter().all(|&(a, b)| {
            let (ta, tb) = (self.vertices[a].tint, self.vertices[b].tint);
            ta == Tint::None || ta != tb
        })
    }

    /// Vertex index sets of the connected components, each sorted, ordered by
    /// smallest index.
    pub fn component_indices(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced sub-position on the given vertex indices (in that order).
    pub fn induced(&self, indices: &[usize]) -> Position {
        let mut remap = BTreeMap::new();
        for (k, &i) in indices.iter().enumerate() {
            remap.insert(i, k);
        }
        let vertices = indices.iter().map(|&i| self.vertices[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (remap.get(&a), remap.get(&b)) {
                (Some(&x), Some(&y)) => Some((x.min(y), x.max(y))),
                _ => None,
            })
            .collect();
        Position { vertices, edges }
    }

    /// Swaps blue and red everywhere; the value of the result is the negative.
    pub fn colour_swap(&self) -> Position {
        Position {
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    id: v.id.clone(),
                    tint: v.tint.swapped(),
                })
                .collect(),
            edges: self.edges.clone(),
        }
    }

    /// Reorders vertices: vertex `i` moves to index `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Position {
        assert_eq!(perm.len(), self.vertices.len());
        let mut vertices = vec![
            Vertex {
                id: String::new(),
                tint: Tint::None
            };
            self.vertices.len()
        ];
        for (i, v) in self.vertices.iter().enumerate() {
            vertices[perm[i]] = v.clone();
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
            .collect();
        Position { vertices, edges }
    }

    /// Disjoint union; ids of `other` are prefixed when they clash.
    pub fn disjoint_union(&self, other: &Position) -> Position {
        let mut out = self.clone();
        let offset = out.vertices.len();
        for v in &other.vertices {
            let mut id = v.id.clone();
            while out.index_of(&id).is_some() {
                id = format!("{id}'");
            }
            out.vertices.push(Vertex { id, tint: v.tint });
        }
        for &(a, b) in &other.edges {
            out.edges.insert((a + offset, b + offset));
        }
        out
    }

    /// Maximum vertex degree, 0 for the empty graph.
    pub fn degree(&self) -> usize {
        self.adjacency().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Maximum over vertices of the number of vertices at distance exactly 2.
    pub fn second_degree(&self) -> usize {
        let adj = self.adjacency();
        (0..self.vertices.len())
            .map(|v| {
                let mut near = vec![false; adj.len()];
                near[v] = true;
                for &u in &adj[v] {
                    near[u] = true;
                }
                let mut at_two = BTreeSet::new();
                for &u in &adj[v] {
                    for &w in &adj[u] {
                        if !near[w] {
                            at_two.insert(w);
                        }
                    }
                }
                at_two.len()
            })
            .max()
            .unwrap_or(0)
    }

    /// JSON file form `{"vertices": [{"id", "tint"}], "edges": [[u, v]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let file = PositionFile {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexEntry {
                    id: VertexId::Str(v.id.clone()),
                    tint: v.tint,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| {
                    [
                        VertexId::Str(self.vertices[a].id.clone()),
                        VertexId::Str(self.vertices[b].id.clone()),
                    ]
                })
                .collect(),
        };
        serde_json::to_value(file).expect("position serializes")
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Position, SnortError> {
        let file: PositionFile =
            serde_json::from_value(value).map_err(|e| SnortError::Format(e.to_string()))?;
        file.into_position()
    }

    pub fn from_json_str(s: &str) -> Result<Position, SnortError> {
        let file: PositionFile =
            serde_json::from_str(s).map_err(|e| SnortError::Format(e.to_string()))?;
        file.into_position()
    }

    /// Plain edge list: `u v` per line, optional `blue: u,v,...` and
    /// `red: ...` lines, a lone id for an isolated vertex, `#` comments.
    pub fn from_edge_list(s: &str) -> Result<Position, SnortError> {
        let mut p = Position::new();
        let mut tints: Vec<(String, Tint)> = Vec::new();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((key, rest)) = line.split_once(':') {
                let tint = match key.trim().to_ascii_lowercase().as_str() {
                    "blue" => Tint::Blue,
                    "red" => Tint::Red,
                    other => {
                        return Err(SnortError::Format(format!(
                            "line {}: unknown tint `{other}`",
                            lineno + 1
                        )))
                    }
                };
                for id in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    tints.push((id.to_string(), tint));
                }
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                [v] => {
                    if p.index_of(v).is_none() {
                        p.add_vertex(v, Tint::None)?;
                    }
                }
                [u, v] => {
                    for id in [u, v] {
                        if p.index_of(id).is_none() {
                            p.add_vertex(id, Tint::None)?;
                        }
                    }
                    p.add_edge(u, v)?;
                }
                _ => {
                    return Err(SnortError::Format(format!(
                        "line {}: expected `u v`",
                        lineno + 1
                    )))
                }
            }
        }
        for (id, tint) in tints {
            if p.index_of(&id).is_none() {
                p.add_vertex(&id, tint)?;
            } else {
                p.set_tint(&id, tint)?;
            }
        }
        Ok(p)
    }

    /// Parses either file format: JSON when the text starts with `{`.
    pub fn parse(s: &str) -> Result<Position, SnortError> {
        if s.trim_start().starts_with('{') {
            Self::from_json_str(s)
        } else {
            Self::from_edge_list(s)
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
enum VertexId {
    Str(String),
    Num(i64),
}

impl VertexId {
    fn into_string(self) -> String {
        match self {
            VertexId::Str(s) => s,
            VertexId::Num(n) => n.to_string(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VertexEntry {
    id: VertexId,
    #[serde(default)]
    tint: Tint,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PositionFile {
    vertices: Vec<VertexEntry>,
    #[serde(default)]
    edges: Vec<[VertexId; 2]>,
}

impl PositionFile {
    fn into_position(self) -> Result<Position, SnortError> {
        let mut p = Position::new();
        for v in self.vertices {
            p.add_vertex(&v.id.into_string(), v.tint)?;
        }
        for [u, v] in self.edges {
            p.add_edge(&u.into_string(), &v.into_string())?;
        }
        Ok(p)
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = PositionFile::deserialize(deserializer)?;
        file.into_position().map_err(serde::de::Error::custom)
    }
}
