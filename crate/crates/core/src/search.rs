//! Genetic search for untinted boards with a large gap between temperature
//! and degree, and a checker for the bound `t <= deg + deg2 / 2`.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::snort::{canonical_key, Engine, Position, SnortError, Tint};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search config: {0}")]
    Config(String),
    #[error(transparent)]
    Snort(#[from] SnortError),
    #[error("invalid hall of fame file: {0}")]
    HallOfFame(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitnessKind {
    /// `t(G) - deg(G)`
    #[default]
    TempMinusDeg,
    /// `t(G) - deg(G) - deg2(G) / 2`
    TempMinusDegMinusHalfDeg2,
}

/// Probability of each mutation operator. One operator is drawn per child.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct MutationRates {
    pub edge_toggle: f64,
    pub add_pendant: f64,
    pub delete_low_degree: f64,
    pub add_joined_vertex: f64,
}

impl Default for MutationRates {
    fn default() -> Self {
        Self {
            edge_toggle: 0.5,
            add_pendant: 0.2,
            delete_low_degree: 0.2,
            add_joined_vertex: 0.1,
        }
    }
}

impl MutationRates {
    fn weights(&self) -> [f64; 4] {
        [
            self.edge_toggle,
            self.add_pendant,
            self.delete_low_degree,
            self.add_joined_vertex,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct SearchConfig {
    pub population_size: usize,
    pub generations: usize,
    pub mutation_rates: MutationRates,
    pub crossover_rate: f64,
    pub tournament_size: usize,
    pub elite_count: usize,
    pub max_vertices: usize,
    pub rng_seed: u64,
    pub fitness: FitnessKind,
    pub hall_of_fame_size: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            population_size: 48,
            generations: 30,
            mutation_rates: MutationRates::default(),
            crossover_rate: 0.3,
            tournament_size: 3,
            elite_count: 4,
            max_vertices: 16,
            rng_seed: 8,
            fitness: FitnessKind::TempMinusDeg,
            hall_of_fame_size: 20,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::Config(m));
        if self.population_size < 2 {
            return bad(format!(
                "populationSize must be at least 2, got {}",
                self.population_size
            ));
        }
        if self.elite_count >= self.population_size {
            return bad(format!(
                "eliteCount ({}) must be less than populationSize ({})",
                self.elite_count, self.population_size
            ));
        }
        if self.tournament_size == 0 {
            return bad("tournamentSize must be positive".into());
        }
        if self.max_vertices == 0 || self.max_vertices > crate::snort::MAX_COMPONENT {
            return bad(format!(
                "maxVertices must be in 1..={}, got {}",
                crate::snort::MAX_COMPONENT,
                self.max_vertices
            ));
        }
        if self.hall_of_fame_size == 0 {
            return bad("hallOfFameSize must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad(format!(
                "crossoverRate must be in [0, 1], got {}",
                self.crossover_rate
            ));
        }
        let w = self.mutation_rates.weights();
        if w.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return bad("mutation rates must be in [0, 1]".into());
        }
        if w.iter().sum::<f64>() <= 0.0 {
            return bad("at least one mutation rate must be positive".into());
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self, SearchError> {
        let cfg: SearchConfig =
            serde_json::from_str(s).map_err(|e| SearchError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Value statistics of one evaluated position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub temperature: Dyadic,
    pub degree: usize,
    pub second_degree: usize,
    pub fitness: Dyadic,
}

/// Engine plus a fitness cache keyed by canonical labeling.
pub struct Evaluator {
    engine: Engine,
    kind: FitnessKind,
    cache: FxHashMap<Vec<u8>, Evaluation>,
}

impl Evaluator {
    pub fn new(engine: Engine, kind: FitnessKind) -> Self {
        Self {
            engine,
            kind,
            cache: FxHashMap::default(),
        }
    }

    pub fn engine(&mut self) -> &mut Engine {
        &mut self.engine
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn evaluate(&mut self, p: &Position) -> Result<Evaluation, SearchError> {
        let key = canonical_key(p)?;
        if let Some(e) = self.cache.get(&key) {
            return Ok(e.clone());
        }
        let temperature = self.engine.position_temperature(p)?;
        let degree = p.degree();
        let second_degree = p.second_degree();
        let mut fitness = &temperature - &Dyadic::from(degree as i64);
        if self.kind == FitnessKind::TempMinusDegMinusHalfDeg2 {
            fitness = &fitness - &Dyadic::from(second_degree as i64).half();
        }
        let e = Evaluation {
            temperature,
            degree,
            second_degree,
            fitness,
        };
        self.cache.insert(key, e.clone());
        Ok(e)
    }

    pub fn fitness(&mut self, p: &Position) -> Result<Dyadic, SearchError> {
        Ok(self.evaluate(p)?.fitness)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HallEntry {
    pub position: Position,
    pub fitness: Dyadic,
    pub temperature: Dyadic,
    pub degree: usize,
    pub generation: usize,
}

/// Best positions found, fitness descending, one per isomorphism class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct HallOfFame {
    pub config: SearchConfig,
    pub generations_completed: usize,
    pub entries: Vec<HallEntry>,
    #[serde(skip)]
    keys: Vec<Vec<u8>>,
}

impl HallOfFame {
    pub fn new(config: SearchConfig) -> Self {
        Self {
            config,
            generations_completed: 0,
            entries: Vec::new(),
            keys: Vec::new(),
        }
    }

    pub fn best(&self) -> Option<&HallEntry> {
        self.entries.first()
    }

    pub fn best_fitness(&self) -> Option<&Dyadic> {
        self.best().map(|e| &e.fitness)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("hall of fame serializes") + "\n"
    }

    pub fn from_json_str(s: &str) -> Result<Self, SearchError> {
        let mut hof: HallOfFame =
            serde_json::from_str(s).map_err(|e| SearchError::HallOfFame(e.to_string()))?;
        hof.config.validate()?;
        hof.keys = hof
            .entries
            .iter()
            .map(|e| canonical_key(&e.position))
            .collect::<Result<_, _>>()?;
        Ok(hof)
    }

    /// Inserts unless an isomorphic position is already present. Ties keep
    /// the earlier entry first.
    fn offer(&mut self, key: Vec<u8>, entry: HallEntry) {
        if self.keys.contains(&key) {
            return;
        }
        let at = self
            .entries
            .iter()
            .position(|e| e.fitness < entry.fitness)
            .unwrap_or(self.entries.len());
        if at >= self.config.hall_of_fame_size {
            return;
        }
        self.entries.insert(at, entry);
        self.keys.insert(at, key);
        self.entries.truncate(self.config.hall_of_fame_size);
        self.keys.truncate(self.config.hall_of_fame_size);
    }
}

/// Untinted simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Genome {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Genome {
    fn from_position(p: &Position) -> Genome {
        Genome {
            n: p.vertex_count(),
            edges: p.edges().collect(),
        }
    }

    fn to_position(&self) -> Position {
        let mut p = Position::new();
        for i in 0..self.n {
            p.add_vertex(&i.to_string(), Tint::None).expect("fresh id");
        }
        for &(u, v) in &self.edges {
            p.add_edge(&u.to_string(), &v.to_string())
                .expect("valid edge");
        }
        p
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.edges.insert((u.min(v), u.max(v)));
        }
    }

    fn degree_of(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    fn remove_vertex(&mut self, v: usize) {
        let shift = |x: usize| if x > v { x - 1 } else { x };
        self.edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != v && b != v)
            .map(|&(a, b)| (shift(a), shift(b)))
            .collect();
        self.n -= 1;
    }

    /// Random tree on `n` vertices plus a few extra edges.
    fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Genome {
        let mut g = Genome {
            n,
            edges: BTreeSet::new(),
        };
        for v in 1..n {
            let u = rng.gen_range(0..v);
            g.add_edge(u, v);
        }
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.1) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Grafts a random induced subgraph of `other` onto a random vertex.
    fn crossover(&self, other: &Genome, rng: &mut ChaCha8Rng, max_vertices: usize) -> Genome {
        let room = max_vertices.saturating_sub(self.n);
        if room == 0 || other.n == 0 {
            return self.clone();
        }
        let mut chosen: Vec<usize> = (0..other.n).filter(|_| rng.gen_bool(0.5)).collect();
        if chosen.is_empty() {
            chosen.push(rng.gen_range(0..other.n));
        }
        chosen.truncate(room);
        let mut child = self.clone();
        let offset = child.n;
        child.n += chosen.len();
        for (i, &a) in chosen.iter().enumerate() {
            for (j, &b) in chosen.iter().enumerate().skip(i + 1) {
                if other.edges.contains(&(a.min(b), a.max(b))) {
                    child.add_edge(offset + i, offset + j);
                }
            }
        }
        if offset > 0 {
            let anchor = rng.gen_range(0..offset);
            let graft = offset + rng.gen_range(0..chosen.len());
            child.add_edge(anchor, graft);
        }
        child
    }

    fn mutate(&mut self, rng: &mut ChaCha8Rng, rates: &MutationRates, max_vertices: usize) {
        let weights = rates.weights();
        let total: f64 = weights.iter().sum();
        let mut x = rng.gen_range(0.0..total);
        let mut op = weights.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            if x < *w {
                op = i;
                break;
            }
            x -= w;
        }
        match op {
            0 if self.n >= 2 => {
                let u = rng.gen_range(0..self.n);
                let mut v = rng.gen_range(0..self.n - 1);
                if v >= u {
                    v += 1;
                }
                let e = (u.min(v), u.max(v));
                if !self.edges.remove(&e) {
                    self.edges.insert(e);
                }
            }
            1 if self.n < max_vertices => {
                self.n += 1;
                if self.n > 1 {
                    let u = rng.gen_range(0..self.n - 1);
                    self.add_edge(u, self.n - 1);
                }
            }
            2 => {
                let low: Vec<usize> = (0..self.n).filter(|&v| self.degree_of(v) <= 1).collect();
                if self.n > 1 {
                    if let Some(&v) = low.choose(rng) {
                        self.remove_vertex(v);
                    }
                }
            }
            3 if self.n < max_vertices => {
                self.n += 1;
                if self.n > 1 {
                    let u = rng.gen_range(0..self.n - 1);
                    self.add_edge(u, self.n - 1);
                    // Join the new vertex to one more random vertex.
                    let w = rng.gen_range(0..self.n - 1);
                    self.add_edge(w, self.n - 1);
                }
            }
            _ => {}
        }
    }
}

/// The default seeds: the 14-vertex witness plus small stars.
pub fn default_seeds() -> Vec<Position> {
    let mut seeds = vec![witness_position()];
    for n in 2..=4 {
        seeds.push(crate::families::make_star(n, Tint::None));
    }
    seeds
}

/// The 14-vertex tree with `t - deg = 3/2`.
pub fn witness_position() -> Position {
    let edges = [
        (1, 2),
        (2, 3),
        (1, 4),
        (1, 5),
        (1, 6),
        (2, 7),
        (2, 8),
        (7, 9),
        (7, 10),
        (7, 11),
        (3, 12),
        (3, 13),
        (3, 14),
    ];
    let mut p = Position::new();
    for i in 1..=14 {
        p.add_vertex(&i.to_string(), Tint::None).expect("fresh id");
    }
    for (u, v) in edges {
        p.add_edge(&u.to_string(), &v.to_string())
            .expect("known ids");
    }
    p
}

/// Runs the genetic search from `seeds`.
pub fn evolve(
    cfg: &SearchConfig,
    seeds: &[Position],
    evaluator: &mut Evaluator,
) -> Result<HallOfFame, SearchError> {
    evolve_from(
        HallOfFame::new(cfg.clone()),
        seeds,
        evaluator,
        cfg.generations,
    )
}

/// Continues a saved search for `generations` more generations, seeded from
/// its entries.
pub fn resume(
    hof: HallOfFame,
    generations: usize,
    evaluator: &mut Evaluator,
) -> Result<HallOfFame, SearchError> {
    let seeds: Vec<Position> = hof.entries.iter().map(|e| e.position.clone()).collect();
    evolve_from(hof, &seeds, evaluator, generations)
}

fn evolve_from(
    mut hof: HallOfFame,
    seeds: &[Position],
    evaluator: &mut Evaluator,
    generations: usize,
) -> Result<HallOfFame, SearchError> {
    let cfg = hof.config.clone();
    cfg.validate()?;
    if seeds.is_empty() {
        return Err(SearchError::Config(
            "at least one seed position is required".into(),
        ));
    }
    for s in seeds {
        if !s.is_untinted() {
            return Err(SearchError::Config(
                "seed positions must be untinted".into(),
            ));
        }
        if s.vertex_count() > cfg.max_vertices {
            return Err(SearchError::Config(format!(
                "seed with {} vertices exceeds maxVertices {}",
                s.vertex_count(),
                cfg.max_vertices
            )));
        }
    }
    evaluator.kind = cfg.fitness;
    let start = hof.generations_completed;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(start as u64);

    let mut population: Vec<Genome> = seeds
        .iter()
        .take(cfg.population_size)
        .map(Genome::from_position)
        .collect();
    while population.len() < cfg.population_size {
        let n = rng
            .gen_range(2..=cfg.max_vertices.clamp(2, 8))
            .min(cfg.max_vertices);
        population.push(Genome::random_connected(&mut rng, n));
    }
    let mut scores = score(&population, evaluator, &mut hof, start)?;

    for gen in start + 1..=start + generations {
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| scores[b].cmp(&scores[a]));
        let mut next: Vec<Genome> = order[..cfg.elite_count]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        while next.len() < cfg.population_size {
            let a = tournament(&scores, cfg.tournament_size, &mut rng);
            let mut child = if rng.gen_bool(cfg.crossover_rate) {
                let b = tournament(&scores, cfg.tournament_size, &mut rng);
                population[a].crossover(&population[b], &mut rng, cfg.max_vertices)
            } else {
                population[a].clone()
            };
            child.mutate(&mut rng, &cfg.mutation_rates, cfg.max_vertices);
            debug_assert!(child.n <= cfg.max_vertices);
            next.push(child);
        }
        population = next;
        scores = score(&population, evaluator, &mut hof, gen)?;
        hof.generations_completed = gen;
    }
    hof.generations_completed = start + generations;
    Ok(hof)
}

fn score(
    population: &[Genome],
    evaluator: &mut Evaluator,
    hof: &mut HallOfFame,
    generation: usize,
) -> Result<Vec<Dyadic>, SearchError> {
    let mut scores = Vec::with_capacity(population.len());
    for g in population {
        let p = g.to_position();
        let e = evaluator.evaluate(&p)?;
        let key = canonical_key(&p)?;
        hof.offer(
            key,
            HallEntry {
                position: p,
                fitness: e.fitness.clone(),
                temperature: e.temperature,
                degree: e.degree,
                generation,
            },
        );
        scores.push(e.fitness);
    }
    Ok(scores)
}

fn tournament(scores: &[Dyadic], size: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut best = rng.gen_range(0..scores.len());
    for _ in 1..size {
        let c = rng.gen_range(0..scores.len());
        if scores[c] > scores[best] {
            best = c;
        }
    }
    best
}

/// One row of the conjecture check.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureRow {
    pub label: String,
    pub temperature: Dyadic,
    pub degree: usize,
    pub second_degree: usize,
    /// `deg + deg2 / 2 - t`; negative means the bound fails.
    pub margin: Dyadic,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub rows: Vec<ConjectureRow>,
}

impl ConjectureReport {
    pub fn violations(&self) -> impl Iterator<Item = &ConjectureRow> {
        self.rows.iter().filter(|r| !r.holds)
    }

    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let width = self
            .rows
            .iter()
            .map(|r| r.label.len())
            .max()
            .unwrap_or(0)
            .max(8);
        out.push_str(&format!(
            "{:<width$} | {:>6} | {:>3} | {:>4} | {:>6} | status\n",
            "position", "t", "deg", "deg2", "margin"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<width$} | {:>6} | {:>3} | {:>4} | {:>6} | {}\n",
                r.label,
                r.temperature.to_string(),
                r.degree,
                r.second_degree,
                r.margin.to_string(),
                if r.holds { "holds" } else { "VIOLATION" }
            ));
        }
        for r in self.violations() {
            out.push_str(&format!(
                "!!! COUNTEREXAMPLE: {} has t = {} > deg + deg2/2 = {}\n",
                r.label,
                r.temperature,
                &r.temperature + &r.margin
            ));
        }
        out
    }
}

pub fn conjecture_row(
    engine: &mut Engine,
    label: &str,
    p: &Position,
) -> Result<ConjectureRow, SnortError> {
    let temperature = engine.position_temperature(p)?;
    let degree = p.degree();
    let second_degree = p.second_degree();
    let bound = &Dyadic::from(degree as i64) + &Dyadic::from(second_degree as i64).half();
    let margin = &bound - &temperature;
    Ok(ConjectureRow {
        label: label.to_string(),
        holds: !margin.is_negative(),
        temperature,
        degree,
        second_degree,
        margin,
    })
}

pub fn check_conjecture<'a>(
    engine: &mut Engine,
    positions: impl IntoIterator<Item = (&'a str, &'a Position)>,
) -> Result<ConjectureReport, SnortError> {
    let rows = positions
        .into_iter()
        .map(|(label, p)| conjecture_row(engine, label, p))
        .collect::<Result<_, _>>()?;
    Ok(ConjectureReport { rows })
}
