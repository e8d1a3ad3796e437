#![allow(dead_code)]

use hpmp::instance::{Instance, Point2D};
use hpmp::matching::GeneralGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random graph on `n` vertices with weights in [0, 100]. `density = 1.0`
/// gives the complete graph.
pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> GeneralGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if density >= 1.0 || rng.gen_bool(density) {
                edges.push((u, v, rng.gen_range(0.0..=100.0)));
            }
        }
    }
    GeneralGraph::new(n, edges).unwrap()
}

/// Two regular pentagons of radius 1 centred 100 units apart: the minimum
/// 2-factor is the two 5-cycles.
pub fn two_pentagons() -> Instance {
    let mut pts = Vec::new();
    for centre in [0.0, 100.0] {
        for k in 0..5 {
            let t = k as f64 / 5.0 * std::f64::consts::TAU;
            pts.push(Point2D::new(centre + t.cos(), centre + t.sin()));
        }
    }
    Instance::from_coords("two-pentagons", pts).unwrap()
}
