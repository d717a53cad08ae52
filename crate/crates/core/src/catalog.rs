//! Shipped dimer files.

use crate::dimer::DimerModel;
use crate::format::{self, ParseError};

const DIMERS: &[(&str, &str)] = &[
    ("c3", include_str!("../catalog/c3.dimer")),
    ("conifold", include_str!("../catalog/conifold.dimer")),
    ("p2", include_str!("../catalog/p2.dimer")),
    ("p1xp1", include_str!("../catalog/p1xp1.dimer")),
    ("dp1", include_str!("../catalog/dp1.dimer")),
    ("dp2", include_str!("../catalog/dp2.dimer")),
    ("dp3", include_str!("../catalog/dp3.dimer")),
    ("example-inconsistent", include_str!("../catalog/example-inconsistent.dimer")),
    ("example-genus2", include_str!("../catalog/example-genus2.dimer")),
    ("census-8a-1", include_str!("../catalog/census-8a-1.dimer")),
    ("census-8a-2", include_str!("../catalog/census-8a-2.dimer")),
    ("census-8a-3", include_str!("../catalog/census-8a-3.dimer")),
    ("census-8a-4", include_str!("../catalog/census-8a-4.dimer")),
    ("census-8b-1", include_str!("../catalog/census-8b-1.dimer")),
    ("census-8b-2", include_str!("../catalog/census-8b-2.dimer")),
    ("census-8c-1", include_str!("../catalog/census-8c-1.dimer")),
];

pub fn dimer_names() -> impl Iterator<Item = &'static str> {
    DIMERS.iter().map(|(n, _)| *n)
}

pub fn dimer_text(name: &str) -> Option<&'static str> {
    DIMERS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn dimer(name: &str) -> Result<DimerModel, ParseError> {
    let text = dimer_text(name).ok_or_else(|| ParseError::Syntax {
        line: 0,
        message: format!("no catalog entry `{name}`"),
    })?;
    format::parse(text)
}
