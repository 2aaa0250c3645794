//! Rotation numbers, continued-fraction convergents, and the (*)_β test:
//! badly approximable versus rational rotation numbers.
//!
//!     cargo run -p circlift --example rotation_diophantine

use std::f64::consts::PI;

use circlift::{
    certify_rational, check_star_beta, convergents, rotation_number, Harmonic, Lifting,
    RotationEstimate,
};

fn main() {
    // rigid rotation: the estimate recovers the offset with error bound 1/N
    let est = rotation_number(&Lifting::rotation(0.3, 2), 10_000, 0.0).unwrap();
    println!(
        "rigid rotation 0.3: rho = {:.12} ± {}",
        est.value, est.error_bound
    );

    // a lifting with fixed points has rotation number zero
    let f = Lifting::new(
        0.1,
        2,
        vec![Harmonic {
            k: 1,
            sin: 1.0 / (2.1 * PI),
            cos: 0.0,
        }],
    )
    .unwrap();
    let est = rotation_number(&f, 10_000, 0.0).unwrap();
    println!(
        "fixed-point map:    rho = {:+.2e} (zero within 1/N = {})",
        est.value, est.error_bound
    );

    // golden mean: convergents are the Fibonacci ratios, and only tiny q beat
    // the (*)_beta threshold
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let convs = convergents(golden, 100);
    let pretty: Vec<String> = convs.iter().map(|c| format!("{}/{}", c.p, c.q)).collect();
    println!(
        "\ngolden mean convergents up to q = 100: {}",
        pretty.join(", ")
    );
    let report = check_star_beta(&RotationEstimate::exact(golden), 0.5, 10_000).unwrap();
    println!(
        "(*)_0.5 violations: {:?} -> satisfied up to q_max: {}",
        report
            .violations
            .iter()
            .map(|v| (v.p, v.q))
            .collect::<Vec<_>>(),
        report.satisfied_up_to_qmax
    );

    // rational rotation numbers short-circuit and get a periodic-orbit certificate
    let report = check_star_beta(&RotationEstimate::exact(0.5), 0.5, 1000).unwrap();
    println!(
        "\nrho = 1/2: possibly rational = {:?}",
        report.possibly_rational
    );
    let cert = certify_rational(&Lifting::rotation(0.5, 2), 1, 2, 64).unwrap();
    match cert {
        Some(c) => println!(
            "certified periodic orbit: F^{}({:.4}) = x + {} (residual {:.2e})",
            c.q, c.x, c.p, c.residual
        ),
        None => println!("no orbit certificate found"),
    }
}
