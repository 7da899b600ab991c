use crate::error::{Error, Result};

use super::Grid;

/// Parses a `#`/`.` mask. The top row maps to the highest `j`; column `c`
/// maps to `i = c`. A trailing newline is accepted.
pub fn parse_grid(text: &str) -> Result<Grid> {
    let lines: Vec<&str> = text
        .trim_end_matches(['\n', '\r'])
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    if lines.iter().all(|l| l.is_empty()) {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty mask".into(),
        });
    }
    let width = lines[0].chars().count();
    let rows = lines.len() as i64;
    let mut squares = Vec::new();
    for (r, line) in lines.iter().enumerate() {
        let mut count = 0;
        for (c, ch) in line.chars().enumerate() {
            count += 1;
            match ch {
                '#' => squares.push((c as i64, rows - 1 - r as i64)),
                '.' => {}
                other => {
                    return Err(Error::Parse {
                        line: r + 1,
                        column: c + 1,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        if count != width {
            return Err(Error::Parse {
                line: r + 1,
                column: count.min(width) + 1,
                message: format!("ragged row: expected {width} columns, found {count}"),
            });
        }
    }
    if squares.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "mask has no '#' cells".into(),
        });
    }
    Grid::from_squares(squares)
}
