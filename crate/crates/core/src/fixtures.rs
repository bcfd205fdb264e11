//! Metric files bundled with the crate.

use crate::metric::DiagonalMetric;

const FILES: &[(&str, &str)] = &[
    ("milne", include_str!("../fixtures/milne.metric")),
    ("polar4d", include_str!("../fixtures/polar4d.metric")),
    ("sphere2", include_str!("../fixtures/sphere2.metric")),
    ("hyperbolic2", include_str!("../fixtures/hyperbolic2.metric")),
    ("schwarzschild", include_str!("../fixtures/schwarzschild.metric")),
    ("anisotropic4", include_str!("../fixtures/anisotropic4.metric")),
    ("euclid_2", include_str!("../fixtures/euclid_2.metric")),
    ("euclid_3", include_str!("../fixtures/euclid_3.metric")),
    ("euclid_4", include_str!("../fixtures/euclid_4.metric")),
    ("euclid_5", include_str!("../fixtures/euclid_5.metric")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|f| f.0)
}

pub fn source(name: &str) -> Option<&'static str> {
    FILES.iter().find(|f| f.0 == name).map(|f| f.1)
}

/// Load a bundled fixture. Panics on an unknown name.
pub fn load(name: &str) -> DiagonalMetric {
    let text = source(name).unwrap_or_else(|| panic!("no bundled fixture '{name}'"));
    DiagonalMetric::load(text).unwrap_or_else(|e| panic!("fixture '{name}': {e}"))
}
