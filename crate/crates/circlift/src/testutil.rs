//! Shared fixtures for unit tests.

use std::f64::consts::PI;

use crate::lifting::{Harmonic, Lifting};
use crate::probe::Probe;

/// F(x) = x + 0.1 + sin(2πx)/(2.1π).
pub fn paper_map() -> Lifting {
    Lifting::new(
        0.1,
        2,
        vec![Harmonic {
            k: 1,
            sin: 1.0 / (2.1 * PI),
            cos: 0.0,
        }],
    )
    .unwrap()
}

/// Type I probe over the paper map with k = 1.
pub fn paper_type_i() -> Probe {
    Probe::type_i(paper_map(), 1.0).unwrap()
}

/// Type II probe F(x) = x + 0.1 + sin(2πx)/(2.1π), G(x) = x + 0.2π.
pub fn paper_type_ii() -> Probe {
    Probe::type_ii(paper_map(), Lifting::rotation(0.2 * PI, 2)).unwrap()
}

/// The path-foliation pair: F(x) = x + 0.2π, G(x) = x + 0.2 + sin(2πx)/(2.1π).
pub fn foliation_pair() -> Probe {
    let f = Lifting::rotation(0.2 * PI, 2);
    let g = Lifting::new(
        0.2,
        2,
        vec![Harmonic {
            k: 1,
            sin: 1.0 / (2.1 * PI),
            cos: 0.0,
        }],
    )
    .unwrap();
    Probe::type_ii(f, g).unwrap()
}
