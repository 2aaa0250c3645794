//! Solve the n-evaluation map Δₙ along a Type I probe, check its derivative
//! against the closed form, and locate the two saddle-node parameters.
//!
//!     cargo run -p circlift --example evaluation_map

use std::f64::consts::PI;

use circlift::{critical_points, eval_map_solve, Harmonic, Lifting, Probe};

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
    let probe = Probe::type_i(f.clone(), 1.0).expect("Type I probe");
    let window = (-10.0, 10.0);

    // For n = 1 the evaluation map is explicit: lambda(x) = x - F(x)
    println!("x        solver λ       closed form    Δ₁'(x)");
    for j in 0..8 {
        let x = j as f64 / 8.0;
        let pt = eval_map_solve(&probe, x, 1, 0, window)
            .unwrap()
            .expect("solvable");
        println!(
            "{x:.3}   {:>12.9}   {:>12.9}   {:>12.9}",
            pt.lambda,
            x - f.eval(x),
            pt.delta_prime
        );
    }

    // Degenerate parameters: Δ₁' = 0 exactly where the saddle-nodes happen
    let pts = critical_points(&probe, 1, 0, 1024).unwrap();
    println!("\ndegenerate (saddle-node) parameters on branch 0:");
    for pt in &pts {
        println!(
            "  x = {:.6}, λ = {:+.9}, orbit derivative = {:.9}",
            pt.x, pt.lambda, pt.d_x
        );
    }
    println!(
        "closed form: λ = -(0.1 ± 1/(2.1π)) = {:+.9} and {:+.9}",
        -(0.1 + 1.0 / (2.1 * PI)),
        -(0.1 - 1.0 / (2.1 * PI))
    );

    // Longer periods still satisfy the implicit-function identity
    for n in 2..=3u32 {
        let pt = eval_map_solve(&probe, 0.4, n, 0, window)
            .unwrap()
            .expect("solvable");
        let residual = pt.delta_prime * pt.d_lambda + pt.d_x - 1.0;
        println!(
            "n = {n}: λ = {:+.9}, identity residual = {residual:.2e}",
            pt.lambda
        );
    }
}
