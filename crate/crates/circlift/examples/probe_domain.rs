//! Certify the maximal λ-interval and gap σ of the Type II probe
//! F(x) = x + 0.1 + sin(2πx)/(2.1π), G(x) = x + 0.2π.
//!
//!     cargo run -p circlift --example probe_domain

use std::f64::consts::PI;

use circlift::{sigma_of, Harmonic, Lifting, Probe};

fn main() {
    let f = Lifting::new(
        0.1,
        2,
        vec![Harmonic {
            k: 1,
            sin: 1.0 / (2.1 * PI),
            cos: 0.0,
        }],
    )
    .expect("valid lifting");
    let g = Lifting::rotation(0.2 * PI, 2);
    let probe = Probe::type_ii(f.clone(), g.clone()).expect("certified probe");

    // alpha_lambda'(x) = 1 + (1 - lambda)(2/2.1) cos(2 pi x), so positivity
    // pins |1 - lambda| < 1.05, i.e. the open interval (-0.05, 2.05)
    for grid in [256usize, 4096, 1 << 14] {
        let domain = probe.domain_interval(grid).expect("bounded domain");
        println!("grid {grid:>6}: domain = {domain:?}");
    }

    // sigma = min |G - F| = 0.2 pi - 0.1 - 1/(2.1 pi), certified from below
    let exact = 0.2 * PI - 0.1 - 1.0 / (2.1 * PI);
    for grid in [4096usize, 1 << 14, 1 << 20] {
        let s = sigma_of(&f, &g, grid);
        println!(
            "grid {grid:>8}: sigma = {s:.10} (exact {exact:.10}, defect {:.2e})",
            exact - s
        );
    }

    println!(
        "\nstored at construction: sigma = {:.7}, domain = {:?}",
        probe.sigma(),
        probe.domain()
    );
}
