use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Q};

/// A point in the plane with exact rational coordinates. Ordered
/// lexicographically by `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(rational::q(x as i128), rational::q(y as i128))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rational::to_f64(&self.x), rational::to_f64(&self.y))
    }

    pub fn offset(&self, dx: &Q, dy: &Q) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `|p.x - q.x| + |p.y - q.y|`, exactly.
pub fn l1_distance(p: &Point, q: &Point) -> Q {
    rational::abs(&(p.x - q.x)) + rational::abs(&(p.y - q.y))
}

/// Points serialize as `["p/q", "p/q"]`.
impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let x = rational::parse(&x).map_err(serde::de::Error::custom)?;
        let y = rational::parse(&y).map_err(serde::de::Error::custom)?;
        Ok(Point::new(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    #[test]
    fn l1_examples() {
        let o = Point::from_ints(0, 0);
        assert_eq!(l1_distance(&o, &o), q(0));
        assert_eq!(l1_distance(&o, &Point::from_ints(1, 2)), q(3));
        let a = Point::new(qr(1, 2), q(0));
        let b = Point::new(q(0), qr(1, 2));
        assert_eq!(l1_distance(&a, &b), q(1));
    }

    #[test]
    fn json_shape() {
        let p = Point::new(qr(1, 2), q(-3));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["1/2","-3"]"#);
        let back: Point = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
