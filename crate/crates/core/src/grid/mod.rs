//! Grids: finite unions of closed integral unit squares.
//!
//! Square `(i, j)` denotes `[i, i+1] x [j, j+1]`. A grid may be disconnected
//! and may have holes; its perimeter counts every unit edge adjacent to
//! exactly one square, so hole boundaries contribute.

mod ascii;
mod boundary;
mod point;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Q};

pub use ascii::parse_grid;
pub use boundary::BoundaryLoop;
pub use point::{l1_distance, Point};

pub type Square = (i64, i64);

/// Inclusive square-index bounds: squares span `i in min_i..=max_i`,
/// `j in min_j..=max_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub min_i: i64,
    pub min_j: i64,
    pub max_i: i64,
    pub max_j: i64,
}

impl BoundingBox {
    pub fn width(&self) -> i64 {
        self.max_i - self.min_i + 1
    }

    pub fn height(&self) -> i64 {
        self.max_j - self.min_j + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    squares: BTreeSet<Square>,
    perimeter: u64,
    bbox: BoundingBox,
}

impl Grid {
    pub fn from_squares<I: IntoIterator<Item = Square>>(squares: I) -> Result<Grid> {
        let squares: BTreeSet<Square> = squares.into_iter().collect();
        if squares.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let mut bbox = BoundingBox {
            min_i: i64::MAX,
            min_j: i64::MAX,
            max_i: i64::MIN,
            max_j: i64::MIN,
        };
        let mut perimeter = 0u64;
        for &(i, j) in &squares {
            bbox.min_i = bbox.min_i.min(i);
            bbox.min_j = bbox.min_j.min(j);
            bbox.max_i = bbox.max_i.max(i);
            bbox.max_j = bbox.max_j.max(j);
            for n in neighbours((i, j)) {
                if !squares.contains(&n) {
                    perimeter += 1;
                }
            }
        }
        Ok(Grid {
            squares,
            perimeter,
            bbox,
        })
    }

    /// Solid `width x height` rectangle with lower-left square `(0, 0)`.
    pub fn rectangle(width: i64, height: i64) -> Result<Grid> {
        if width < 1 || height < 1 {
            return Err(Error::Domain(format!("rectangle {width}x{height}")));
        }
        Grid::from_squares((0..width).flat_map(|i| (0..height).map(move |j| (i, j))))
    }

    /// Plus-shaped cross: a centre square with `n` squares on each arm.
    pub fn cross(n: i64) -> Result<Grid> {
        if n < 0 {
            return Err(Error::Domain(format!("cross arm length {n}")));
        }
        let mut squares = vec![(0, 0)];
        for t in 1..=n {
            squares.extend([(t, 0), (-t, 0), (0, t), (0, -t)]);
        }
        Grid::from_squares(squares)
    }

    pub fn squares(&self) -> &BTreeSet<Square> {
        &self.squares
    }

    pub fn has_square(&self, s: Square) -> bool {
        self.squares.contains(&s)
    }

    pub fn area(&self) -> u64 {
        self.squares.len() as u64
    }

    pub fn perimeter(&self) -> u64 {
        self.perimeter
    }

    pub fn bbox(&self) -> BoundingBox {
        self.bbox
    }

    pub fn with_square(&self, s: Square) -> Grid {
        let mut squares = self.squares.clone();
        squares.insert(s);
        Grid::from_squares(squares).expect("non-empty")
    }

    pub fn without_square(&self, s: Square) -> Result<Grid> {
        let mut squares = self.squares.clone();
        squares.remove(&s);
        Grid::from_squares(squares)
    }

    /// Closed containment: points on any square's boundary are inside.
    pub fn contains(&self, p: &Point) -> bool {
        let cols = cells_touching(&p.x);
        let rows = cells_touching(&p.y);
        cols.iter()
            .flatten()
            .any(|&i| rows.iter().flatten().any(|&j| self.squares.contains(&(i, j))))
    }

    /// Edge-connected components, each as a sorted square list.
    pub fn components(&self) -> Vec<Vec<Square>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.squares {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(s) = queue.pop_front() {
                for n in neighbours(s) {
                    if self.squares.contains(&n) && seen.insert(n) {
                        comp.push(n);
                        queue.push_back(n);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Orthogonal convexity: contiguous, and every horizontal and vertical
    /// line through square centres meets the grid in one run.
    pub fn is_convex(&self) -> bool {
        if !self.is_connected() {
            return false;
        }
        let mut rows: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        let mut cols: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for &(i, j) in &self.squares {
            rows.entry(j).or_default().push(i);
            cols.entry(i).or_default().push(j);
        }
        let single_run = |v: &Vec<i64>| {
            // BTreeSet iteration order keeps each list sorted.
            v.windows(2).all(|w| w[1] == w[0] + 1)
        };
        rows.values().all(single_run) && cols.values().all(single_run)
    }

    pub fn has_holes(&self) -> bool {
        self.boundary_loops().iter().any(|l| !l.outer)
    }

    pub fn boundary_loops(&self) -> Vec<BoundaryLoop> {
        boundary::trace(self)
    }

    /// The maximal segment of `G` on the vertical line through `p` that
    /// contains `p`, as `(bottom, top)`. `None` if `p` is outside.
    pub fn vertical_run(&self, p: &Point) -> Option<(Q, Q)> {
        let cols: Vec<i64> = cells_touching(&p.x).into_iter().flatten().collect();
        let row_hit = |j: i64| cols.iter().any(|&i| self.squares.contains(&(i, j)));
        let start = cells_touching(&p.y).into_iter().flatten().find(|&j| row_hit(j))?;
        let mut top = start;
        while row_hit(top + 1) {
            top += 1;
        }
        let mut bottom = start;
        while row_hit(bottom - 1) {
            bottom -= 1;
        }
        Some((rational::q(bottom as i128), rational::q(top as i128 + 1)))
    }

    /// Squares whose closed cell meets the index window
    /// `[i0, i1] x [j0, j1]` (inclusive), in sorted order.
    pub fn squares_in(&self, i0: i64, i1: i64, j0: i64, j1: i64) -> impl Iterator<Item = Square> + '_ {
        let i0 = i0.max(self.bbox.min_i);
        let i1 = i1.min(self.bbox.max_i);
        let j0 = j0.max(self.bbox.min_j);
        let j1 = j1.min(self.bbox.max_j);
        let window = (i1 - i0 + 1).max(0) as u64 * (j1 - j0 + 1).max(0) as u64;
        let scan_window = window < self.squares.len() as u64;
        let direct: Vec<Square> = if scan_window {
            (i0..=i1)
                .flat_map(|i| (j0..=j1).map(move |j| (i, j)))
                .filter(|s| self.squares.contains(s))
                .collect()
        } else {
            self.squares
                .range((i0, i64::MIN)..=(i1, i64::MAX))
                .filter(|&&(_, j)| j >= j0 && j <= j1)
                .copied()
                .collect()
        };
        direct.into_iter()
    }

    pub fn to_json(&self) -> GridJson {
        GridJson {
            squares: self.squares.iter().map(|&(i, j)| [i, j]).collect(),
            area: self.area(),
            perimeter: self.perimeter(),
            convex: self.is_convex(),
        }
    }

    /// ASCII mask, top row = highest `j`, columns from `min_i`.
    pub fn to_ascii(&self) -> String {
        let b = self.bbox;
        let mut out = String::new();
        for j in (b.min_j..=b.max_j).rev() {
            for i in b.min_i..=b.max_i {
                out.push(if self.has_square((i, j)) { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }
}

/// Byte-stable JSON export of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub squares: Vec<[i64; 2]>,
    pub area: u64,
    pub perimeter: u64,
    pub convex: bool,
}

impl GridJson {
    pub fn to_grid(&self) -> Result<Grid> {
        Grid::from_squares(self.squares.iter().map(|s| (s[0], s[1])))
    }
}

fn neighbours((i, j): Square) -> [Square; 4] {
    [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)]
}

/// Unit-cell indices whose closed interval `[c, c+1]` contains `v`.
fn cells_touching(v: &Q) -> [Option<i64>; 2] {
    let f = rational::floor_i64(v);
    if rational::is_integer(v) {
        [Some(f), Some(f - 1)]
    } else {
        [Some(f), None]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    fn u_shape() -> Grid {
        Grid::from_squares([(0, 0), (1, 0), (2, 0), (0, 1), (2, 1)]).unwrap()
    }

    #[test]
    fn area_and_perimeter_examples() {
        let one = Grid::from_squares([(0, 0)]).unwrap();
        assert_eq!((one.area(), one.perimeter()), (1, 4));
        let r = Grid::rectangle(10, 10).unwrap();
        assert_eq!((r.area(), r.perimeter()), (100, 40));
        let c = Grid::cross(5).unwrap();
        assert_eq!((c.area(), c.perimeter()), (21, 44));
        let ring = parse_grid("###\n#.#\n###").unwrap();
        assert_eq!((ring.area(), ring.perimeter()), (8, 16));
    }

    #[test]
    fn empty_grid_rejected() {
        assert_eq!(Grid::from_squares(Vec::<Square>::new()), Err(Error::EmptyGrid));
        assert!(Grid::from_squares([(0, 0)]).unwrap().without_square((0, 0)).is_err());
    }

    #[test]
    fn convexity_examples() {
        assert!(Grid::rectangle(3, 7).unwrap().is_convex());
        assert!(Grid::cross(4).unwrap().is_convex());
        assert!(!u_shape().is_convex());
        // Two squares touching only at a corner are not contiguous.
        assert!(!Grid::from_squares([(0, 0), (1, 1)]).unwrap().is_convex());
        assert!(!parse_grid("###\n#.#\n###").unwrap().is_convex());
    }

    #[test]
    fn contains_closed_convention() {
        let g = Grid::from_squares([(0, 0)]).unwrap();
        assert!(g.contains(&Point::new(qr(1, 2), qr(1, 2))));
        assert!(g.contains(&Point::new(q(1), q(1))));
        assert!(g.contains(&Point::new(q(0), qr(1, 3))));
        assert!(!g.contains(&Point::new(qr(5, 4), qr(1, 2))));
        assert!(!g.contains(&Point::new(qr(1, 2), qr(-1, 100))));
    }

    #[test]
    fn vertical_run_spans_column() {
        let g = u_shape();
        let p = Point::new(qr(1, 2), qr(1, 4));
        assert_eq!(g.vertical_run(&p), Some((q(0), q(2))));
        let mid = Point::new(qr(3, 2), qr(1, 4));
        assert_eq!(g.vertical_run(&mid), Some((q(0), q(1))));
        // x = 1 is shared by columns 0 and 1; column 0 reaches y = 2.
        let edge = Point::new(q(1), qr(1, 2));
        assert_eq!(g.vertical_run(&edge), Some((q(0), q(2))));
        assert_eq!(g.vertical_run(&Point::new(qr(3, 2), qr(3, 2))), None);
    }

    #[test]
    fn json_is_sorted() {
        let g = Grid::from_squares([(2, 0), (0, 0), (1, 0)]).unwrap();
        let s = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"squares":[[0,0],[1,0],[2,0]],"area":3,"perimeter":8,"convex":true}"#
        );
        let back: GridJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_grid().unwrap(), g);
    }

    #[test]
    fn ascii_round_trip() {
        let text = "#..\n##.\n.##\n";
        let g = parse_grid(text).unwrap();
        assert_eq!(g.to_ascii(), text);
    }

    #[test]
    fn squares_in_window() {
        let g = Grid::rectangle(5, 5).unwrap();
        let got: Vec<_> = g.squares_in(1, 2, 3, 10).collect();
        assert_eq!(got, vec![(1, 3), (1, 4), (2, 3), (2, 4)]);
        let got: Vec<_> = g.squares_in(-10, 10, 0, 0).collect();
        assert_eq!(got.len(), 5);
    }
}
