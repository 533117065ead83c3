#![allow(dead_code)]

use deconflict_core::{Mission, Vec2};
use proptest::prelude::*;

pub fn point() -> impl Strategy<Value = Vec2> {
    (-20.0f64..20.0, -20.0f64..20.0).prop_map(|(x, y)| Vec2::new(x, y))
}

pub fn mission(id: &'static str) -> impl Strategy<Value = Mission> {
    (point(), point(), 0.5f64..3.0)
        .prop_filter("route too short", |(o, d, _)| (*o - *d).norm() > 1.0)
        .prop_map(move |(o, d, v)| Mission::new(id, o, d, v).unwrap())
}

pub fn missions(n: usize) -> impl Strategy<Value = Vec<Mission>> {
    const IDS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];
    IDS[..n].iter().map(|id| mission(id)).collect::<Vec<_>>()
}
