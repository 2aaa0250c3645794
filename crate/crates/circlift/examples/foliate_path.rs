//! Sample the λ-foliation of the path between a rigid rotation and a wobbling
//! lifting, and watch the path leave the diffeomorphism set as λ grows.
//!
//!     cargo run -p circlift --example foliate_path

use std::f64::consts::PI;

use circlift::{Harmonic, Lifting, Probe};

fn main() {
    // F(x) = x + 0.2π (rigid), G(x) = x + 0.2 + sin(2πx)/(2.1π)
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
    .expect("valid lifting");
    let probe = Probe::type_ii(f, g).expect("certified Type II probe");

    let lambdas = [0.0, 0.5, 1.0, 2.0, 3.0];
    let samples = probe.foliation_samples(&lambdas, 8);

    println!("alpha_lambda = (1 - lambda) F + lambda G");
    println!("closed form: x + 0.2(pi + lambda(1 - pi)) + (lambda / 2.1 pi) sin(2 pi x)\n");
    for fs in &samples {
        let status = if fs.in_h0 {
            "in H0 (diffeo)"
        } else {
            "left H0"
        };
        println!("lambda = {:>4}: {status}", fs.lambda);
        let row: Vec<String> = fs
            .samples
            .iter()
            .map(|(x, y)| format!("({x:.3}, {y:.4})"))
            .collect();
        println!("    graph: {}", row.join(" "));
    }

    // the derivative 1 + (2 lambda / 2.1) cos(2 pi x) dips below zero past
    // lambda = 1.05, which is exactly where the certification flips
    let domain = probe.domain_interval(1 << 12).expect("domain");
    println!("\ncertified lambda-domain: {domain:?}");
}
