//! Seeded random grids for benchmarks and property runs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::{Grid, Square};

pub const MAX_AREA: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Rectangle,
    Cross,
    Blob,
    HoledBlob,
    UShape,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 5] = [
        ShapeKind::Rectangle,
        ShapeKind::Cross,
        ShapeKind::Blob,
        ShapeKind::HoledBlob,
        ShapeKind::UShape,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Rectangle => "rect",
            ShapeKind::Cross => "cross",
            ShapeKind::Blob => "blob",
            ShapeKind::HoledBlob => "holed",
            ShapeKind::UShape => "u",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub seed: u64,
    pub kind: ShapeKind,
    pub grid: Grid,
}

/// `count` instances cycling through every shape kind. Instance `i` is
/// generated from its own seed, so prefixes of a suite are stable.
pub fn suite(seed: u64, count: usize) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let kind = ShapeKind::ALL[i % ShapeKind::ALL.len()];
            let s = instance_seed(seed, i as u64);
            let grid = random_grid(kind, s);
            Instance {
                name: format!("{}-{:03}", kind.name(), i),
                seed: s,
                kind,
                grid,
            }
        })
        .collect()
}

/// Tiny instances for oracle comparisons (area at most 3).
pub fn tiny_suite(seed: u64, count: usize) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let s = instance_seed(seed, i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let area = rng.gen_range(1..=3);
            let grid = blob(&mut rng, area);
            Instance {
                name: format!("tiny-{i:03}"),
                seed: s,
                kind: ShapeKind::Blob,
                grid,
            }
        })
        .collect()
}

fn instance_seed(seed: u64, i: u64) -> u64 {
    ChaCha8Rng::seed_from_u64(seed ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15)).gen()
}

pub fn random_grid(kind: ShapeKind, seed: u64) -> Grid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        ShapeKind::Rectangle => {
            let w = rng.gen_range(1..=20);
            let h = rng.gen_range(1..=20);
            Grid::rectangle(w, h).expect("positive sides")
        }
        ShapeKind::Cross => Grid::cross(rng.gen_range(0..=99)).expect("non-negative arm"),
        ShapeKind::Blob => {
            let area = rng.gen_range(1..=MAX_AREA);
            blob(&mut rng, area)
        }
        ShapeKind::HoledBlob => holed(&mut rng),
        ShapeKind::UShape => u_shape(&mut rng),
    }
}

/// Connected polyomino grown one random frontier square at a time.
fn blob(rng: &mut ChaCha8Rng, area: usize) -> Grid {
    let mut cells: BTreeSet<Square> = BTreeSet::from([(0, 0)]);
    let mut order: Vec<Square> = vec![(0, 0)];
    while cells.len() < area {
        let &(i, j) = order.choose(rng).expect("non-empty");
        let (di, dj) = [(1, 0), (-1, 0), (0, 1), (0, -1)][rng.gen_range(0..4)];
        let next = (i + di, j + dj);
        if cells.insert(next) {
            order.push(next);
        }
    }
    Grid::from_squares(cells).expect("non-empty")
}

/// A rectangle with one to three isolated interior squares removed.
fn holed(rng: &mut ChaCha8Rng) -> Grid {
    let w = rng.gen_range(3..=20);
    let h = rng.gen_range(3..=20);
    let mut cells: BTreeSet<Square> = (0..w).flat_map(|i| (0..h).map(move |j| (i, j))).collect();
    let mut removed: Vec<Square> = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let c = (rng.gen_range(1..w - 1), rng.gen_range(1..h - 1));
        if removed
            .iter()
            .all(|r: &Square| (r.0 - c.0).abs() > 1 || (r.1 - c.1).abs() > 1)
        {
            cells.remove(&c);
            removed.push(c);
        }
    }
    Grid::from_squares(cells).expect("non-empty")
}

/// A rectangle with a notch cut from the middle of its top edge.
fn u_shape(rng: &mut ChaCha8Rng) -> Grid {
    let w = rng.gen_range(3..=20);
    let h = rng.gen_range(2..=20);
    let notch_w = rng.gen_range(1..=w - 2);
    let notch_h = rng.gen_range(1..h);
    let left = rng.gen_range(1..=w - 1 - notch_w);
    let cells = (0..w)
        .flat_map(|i| (0..h).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i >= left && i < left + notch_w && j >= h - notch_h));
    Grid::from_squares(cells).expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_are_reproducible() {
        assert_eq!(suite(7, 20), suite(7, 20));
        assert_ne!(suite(7, 20), suite(8, 20));
        assert_eq!(suite(7, 20)[..5], suite(7, 5)[..]);
    }

    #[test]
    fn areas_in_range_and_connected() {
        for inst in suite(3, 100) {
            let a = inst.grid.area() as usize;
            assert!((1..=MAX_AREA).contains(&a), "{} has area {a}", inst.name);
            assert!(inst.grid.is_connected(), "{}", inst.name);
        }
    }

    #[test]
    fn shapes_have_expected_features() {
        for inst in suite(11, 50) {
            match inst.kind {
                ShapeKind::Rectangle | ShapeKind::Cross => assert!(inst.grid.is_convex()),
                ShapeKind::HoledBlob => assert!(inst.grid.has_holes(), "{}", inst.name),
                ShapeKind::UShape => assert!(!inst.grid.is_convex(), "{}", inst.name),
                ShapeKind::Blob => {}
            }
        }
    }

    #[test]
    fn tiny_instances_are_tiny() {
        assert!(tiny_suite(1, 30).iter().all(|i| (1..=3).contains(&i.grid.area())));
    }
}
