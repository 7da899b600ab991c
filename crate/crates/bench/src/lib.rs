//! Fixed inputs shared by the benchmarks.

use gridcover::bounds::CostParams;
use gridcover::generate::{random_grid, ShapeKind};
use gridcover::rational::q;
use gridcover::Grid;

pub fn unit_params() -> CostParams {
    CostParams::new(q(1), 1.0, 1.0).expect("valid parameters")
}

/// Named grids of increasing size and shape complexity.
pub fn fixtures() -> Vec<(&'static str, Grid)> {
    vec![
        ("square-10", Grid::rectangle(10, 10).expect("rectangle")),
        ("square-20", Grid::rectangle(20, 20).expect("rectangle")),
        ("cross-50", Grid::cross(50).expect("cross")),
        ("blob", random_grid(ShapeKind::Blob, 7)),
        ("holed", random_grid(ShapeKind::HoledBlob, 7)),
        ("u-shape", random_grid(ShapeKind::UShape, 7)),
    ]
}

pub fn tiny_fixtures() -> Vec<(&'static str, Grid)> {
    vec![
        ("1x1", Grid::rectangle(1, 1).expect("rectangle")),
        ("2x1", Grid::rectangle(2, 1).expect("rectangle")),
        ("3x1", Grid::rectangle(3, 1).expect("rectangle")),
    ]
}
