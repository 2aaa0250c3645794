//! The quantitative Kupka-Smale experiment: estimate the measure of the
//! near-degenerate parameter set Z_γⁿ and compare it against cₙ·γ/σ.
//!
//!     cargo run -p circlift --example qks_bound

use std::f64::consts::PI;

use circlift::{qks_report, Harmonic, Lifting, Probe};

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
    let probe = Probe::type_ii(f, Lifting::rotation(0.2 * PI, 2)).expect("certified probe");
    println!(
        "probe: sigma = {:.7}, domain = {:?}\n",
        probe.sigma(),
        probe.domain()
    );

    let report =
        qks_report(&probe, 3, &[0.01, 0.05, 0.1], 1 << 13, None, 0.05).expect("scan succeeds");

    println!("  n   gamma   entries   measured      u        b_n     bound       ratio   holds");
    for row in &report.rows {
        println!(
            "  {}   {:<5}   {:>7}   {:.4e}   {:.4}   {:.4}   {:.4e}   {:.4}   {}",
            row.n,
            row.gamma,
            row.entry_count,
            row.measured,
            row.u,
            row.b_n,
            row.bound,
            row.ratio,
            row.holds
        );
    }

    println!("\nintervals at n = 1, gamma = 0.1:");
    for d in &report.details {
        if d.n == 1 && d.gamma == 0.1 {
            for (lo, hi) in &d.intervals {
                println!("  [{lo:.6}, {hi:.6}] (width {:.2e})", hi - lo);
            }
        }
    }
}
