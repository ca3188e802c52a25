use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EdgeList;
use crate::{Error, Result, VertexId};

/// Source vertices handled per generation chunk unless overridden.
pub const DEFAULT_CHUNK_SIZE: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Star,
    ErdosRenyi { edge_prob: f64 },
    SmallWorld { ring_degree: u64, rewire_prob: f64 },
}

impl Family {
    pub fn short_name(&self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::ErdosRenyi { .. } => "er",
            Family::SmallWorld { .. } => "ws",
        }
    }
}

/// Everything a generator needs. Output depends on `family`, `n` and
/// `seed` only; `chunk_size` bounds how many source vertices are expanded
/// per batch.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: u64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl GeneratorSpec {
    pub fn star(n: u64) -> Self {
        Self {
            family: Family::Star,
            n,
            seed: 0,
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }

    pub fn erdos_renyi(n: u64, edge_prob: f64, seed: u64) -> Self {
        Self {
            family: Family::ErdosRenyi { edge_prob },
            n,
            seed,
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }

    /// Erdős–Rényi with expected degree 16, the repo's default density.
    pub fn erdos_renyi_default(n: u64, seed: u64) -> Self {
        Self::erdos_renyi(n, default_edge_prob(n), seed)
    }

    pub fn small_world(n: u64, ring_degree: u64, rewire_prob: f64, seed: u64) -> Self {
        Self {
            family: Family::SmallWorld {
                ring_degree,
                rewire_prob,
            },
            n,
            seed,
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> Self {
        self.chunk_size = chunk_size;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter(
                "vertex count must be at least 1".into(),
            ));
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidParameter(
                "chunk_size must be positive".into(),
            ));
        }
        match self.family {
            Family::Star => {}
            Family::ErdosRenyi { edge_prob } => check_prob("edge_prob", edge_prob)?,
            Family::SmallWorld {
                ring_degree,
                rewire_prob,
            } => {
                if ring_degree < 2 || ring_degree % 2 != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "ring degree must be even and >= 2, got {ring_degree}"
                    )));
                }
                if ring_degree >= self.n {
                    return Err(Error::InvalidParameter(format!(
                        "ring degree {ring_degree} must be below n = {}",
                        self.n
                    )));
                }
                check_prob("rewire_prob", rewire_prob)?;
            }
        }
        Ok(())
    }

    fn chunks(&self) -> impl Iterator<Item = std::ops::Range<u64>> + '_ {
        let step = self.chunk_size.min(self.n).max(1);
        (0..self.n)
            .step_by(step as usize)
            .map(move |start| start..(start + step).min(self.n))
    }
}

/// `16 / (n - 1)`, clamped to `[0, 1]`.
pub fn default_edge_prob(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        (16.0 / (n - 1) as f64).min(1.0)
    }
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {p}"
        )))
    }
}

/// Independent ChaCha8 stream per source vertex, so chunk boundaries never
/// shift which random numbers a vertex sees.
fn vertex_rng(seed: u64, vertex: VertexId) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(vertex);
    rng
}

pub fn generate(spec: &GeneratorSpec) -> Result<EdgeList> {
    match spec.family {
        Family::Star => generate_star(spec.n),
        Family::ErdosRenyi { .. } => generate_erdos_renyi(spec),
        Family::SmallWorld { .. } => generate_small_world(spec),
    }
}

/// Hub 0 joined to every other vertex.
pub fn generate_star(n: u64) -> Result<EdgeList> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "star graph needs at least 1 vertex".into(),
        ));
    }
    Ok(EdgeList::from_normalised(
        n,
        (1..n).map(|v| (0, v)).collect(),
    ))
}

/// G(n, p): every unordered pair independently with probability `edge_prob`.
///
/// Pairs `(u, v > u)` are visited with geometric skips, so the cost is
/// proportional to the number of edges emitted rather than to `n²`.
pub fn generate_erdos_renyi(spec: &GeneratorSpec) -> Result<EdgeList> {
    spec.validate()?;
    let Family::ErdosRenyi { edge_prob } = spec.family else {
        return Err(Error::InvalidParameter(
            "expected an erdos_renyi spec".into(),
        ));
    };
    let n = spec.n;
    let mut edges = Vec::new();
    if edge_prob == 0.0 {
        return Ok(EdgeList::from_normalised(n, edges));
    }
    let log_q = (1.0 - edge_prob).ln();

    for chunk in spec.chunks() {
        let mut pending = Vec::new();
        for u in chunk {
            if edge_prob == 1.0 {
                pending.extend((u + 1..n).map(|v| (u, v)));
                continue;
            }
            let mut rng = vertex_rng(spec.seed, u);
            let mut v = u;
            loop {
                let r: f64 = rng.random();
                let skip = ((1.0 - r).ln() / log_q).floor();
                if skip >= (n - v) as f64 {
                    break;
                }
                v += 1 + skip as u64;
                if v >= n {
                    break;
                }
                pending.push((u, v));
            }
        }
        edges.append(&mut pending);
    }
    Ok(EdgeList::from_normalised(n, edges))
}

/// Watts–Strogatz: ring lattice of even degree `k`, then each lattice edge
/// `(u, u + j)` rewired with probability `rewire_prob` to a uniform target
/// that is neither `u` nor an existing neighbour. A target is redrawn up to
/// `n` times; if none is valid the lattice edge is kept. Edge count is
/// always `n * k / 2`.
pub fn generate_small_world(spec: &GeneratorSpec) -> Result<EdgeList> {
    spec.validate()?;
    let Family::SmallWorld {
        ring_degree,
        rewire_prob,
    } = spec.family
    else {
        return Err(Error::InvalidParameter(
            "expected a small_world spec".into(),
        ));
    };
    let n = spec.n;
    let half = ring_degree / 2;

    // Lattice membership is arithmetic; only the deltas are stored.
    let is_lattice = |a: u64, b: u64| {
        let d = a.abs_diff(b);
        d.min(n - d) <= half
    };
    let mut removed: HashSet<(u64, u64)> = HashSet::new();
    let mut added: HashSet<(u64, u64)> = HashSet::new();
    let norm = |a: u64, b: u64| (a.min(b), a.max(b));

    let mut edges = Vec::with_capacity((n * half) as usize);
    for chunk in spec.chunks() {
        let mut pending = Vec::new();
        for u in chunk {
            let mut rng = vertex_rng(spec.seed, u);
            for j in 1..=half {
                let v = (u + j) % n;
                let mut target = v;
                if rewire_prob > 0.0 && rng.random::<f64>() < rewire_prob {
                    for _ in 0..n {
                        let w = rng.random_range(0..n);
                        let e = norm(u, w);
                        let present =
                            (is_lattice(u, w) && !removed.contains(&e)) || added.contains(&e);
                        if w != u && !present {
                            target = w;
                            break;
                        }
                    }
                }
                if target != v {
                    removed.insert(norm(u, v));
                    added.insert(norm(u, target));
                }
                pending.push(norm(u, target));
            }
        }
        edges.append(&mut pending);
    }
    Ok(EdgeList::from_normalised(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn assert_simple(e: &EdgeList) {
        let mut seen = HashSet::new();
        for &(u, v) in e.edges() {
            assert!(u < v && v < e.vertex_count(), "bad pair ({u}, {v})");
            assert!(seen.insert((u, v)), "duplicate ({u}, {v})");
        }
    }

    #[test]
    fn star_edges() {
        assert_eq!(
            generate_star(5).unwrap().edges(),
            &[(0, 1), (0, 2), (0, 3), (0, 4)]
        );
        assert!(generate_star(1).unwrap().is_empty());
        assert!(matches!(generate_star(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn star_four_million() {
        assert_eq!(generate_star(4_000_000).unwrap().len(), 3_999_999);
    }

    #[test]
    fn er_extremes() {
        let none = generate(&GeneratorSpec::erdos_renyi(100, 0.0, 1)).unwrap();
        assert!(none.is_empty());
        let all = generate(&GeneratorSpec::erdos_renyi(100, 1.0, 1)).unwrap();
        assert_eq!(all.len(), 4950);
        assert_simple(&all);
    }

    #[test]
    fn er_rejects_bad_probability() {
        for p in [-0.1, 1.5, f64::NAN] {
            let r = generate(&GeneratorSpec::erdos_renyi(10, p, 1));
            assert!(matches!(r, Err(Error::InvalidParameter(_))), "p = {p}");
        }
    }

    #[test]
    fn er_count_within_four_sigma() {
        // C(2000, 2) = 1_999_000 pairs at p = 0.01: mean 19_990, sigma ~ 140.7
        let e = generate(&GeneratorSpec::erdos_renyi(2000, 0.01, 7)).unwrap();
        assert_simple(&e);
        let dev = (e.len() as f64 - 19_990.0).abs();
        assert!(dev <= 4.0 * 140.7, "edge count {}", e.len());
    }

    #[test]
    fn ws_lattice_without_rewiring() {
        let e = generate(&GeneratorSpec::small_world(10, 4, 0.0, 3)).unwrap();
        assert_eq!(e.len(), 20);
        let g = build_graph(&e).unwrap();
        assert!((0..10).all(|v| g.degree(v) == 4));

        let cycle =
            build_graph(&generate(&GeneratorSpec::small_world(6, 2, 0.0, 3)).unwrap()).unwrap();
        for v in 0..6u64 {
            assert_eq!(cycle.neighbors(v), {
                let mut w = vec![(v + 1) % 6, (v + 5) % 6];
                w.sort();
                w
            });
        }
    }

    #[test]
    fn ws_rewired_keeps_count() {
        let e = generate(&GeneratorSpec::small_world(500, 6, 0.1, 11)).unwrap();
        assert_eq!(e.len(), 1500);
        assert_simple(&e);
        let lattice = generate(&GeneratorSpec::small_world(500, 6, 0.0, 11)).unwrap();
        assert_ne!(e, lattice);
    }

    #[test]
    fn ws_full_rewiring_on_dense_ring() {
        // k = n - 2 leaves almost no free targets; retries must terminate
        let e = generate(&GeneratorSpec::small_world(12, 10, 1.0, 5)).unwrap();
        assert_eq!(e.len(), 60);
        assert_simple(&e);
    }

    #[test]
    fn ws_parameter_errors() {
        for (n, k) in [(10, 3), (10, 0), (10, 10), (4, 6)] {
            let r = generate(&GeneratorSpec::small_world(n, k, 0.1, 1));
            assert!(matches!(r, Err(Error::InvalidParameter(_))), "n={n} k={k}");
        }
        assert!(generate(&GeneratorSpec::small_world(10, 2, 2.0, 1)).is_err());
    }

    #[test]
    fn chunk_size_does_not_change_output() {
        for spec in [
            GeneratorSpec::erdos_renyi(300, 0.05, 21),
            GeneratorSpec::small_world(300, 4, 0.4, 21),
        ] {
            let whole = generate(&spec).unwrap();
            for chunk in [1, 7, 64, 299, 300, 5000] {
                let chunked = generate(&spec.clone().with_chunk_size(chunk)).unwrap();
                assert_eq!(whole, chunked, "chunk {chunk}");
            }
        }
        assert!(generate(&GeneratorSpec::erdos_renyi(10, 0.5, 1).with_chunk_size(0)).is_err());
    }

    #[test]
    fn seed_changes_output() {
        let a = generate(&GeneratorSpec::erdos_renyi(200, 0.05, 1)).unwrap();
        let b = generate(&GeneratorSpec::erdos_renyi(200, 0.05, 2)).unwrap();
        let a2 = generate(&GeneratorSpec::erdos_renyi(200, 0.05, 1)).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, a2);
    }
}
