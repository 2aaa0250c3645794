//! The countable convex convolution: coefficient weights converge to a convex
//! combination led by sin(1), by Euler's sine product.
//!
//!     cargo run -p circlift --example ccc_convergence

use circlift::{ccc_apply, ccc_coefficients, compose_many, cr_metric, Lifting, Reflection};

fn main() {
    let coeffs = ccc_coefficients(10_000);
    println!("lambda_n = 1/(pi^2 n^2), p_n = prod (1 - lambda_i)");
    println!("first coefficients: {:?}", &coeffs.coefficients[..4]);
    println!(
        "p_10000 = {:.10}, sin(1) = {:.10}, gap = {:.3e}",
        coeffs.partial_products.last().unwrap(),
        1f64.sin(),
        coeffs.euler_gap()
    );
    println!(
        "coefficient sum = {:.10} (gap to 1: {:.3e})",
        coeffs.coefficient_sum(),
        coeffs.coefficient_sum() - 1.0
    );

    // the renormalized truncation reproduces the literal reflection composition
    let ws: Vec<Lifting> = (0..5)
        .map(|i| Lifting::rotation(0.2 * i as f64, 2))
        .collect();
    let c = ccc_coefficients(5);
    let combined = ccc_apply(&c, &ws).unwrap();
    let reflections: Vec<Reflection> = (1..5)
        .rev()
        .map(|j| Reflection::new(c.lambdas[j - 1], ws[j].clone()).unwrap())
        .collect();
    let literal = compose_many(&reflections).unwrap().apply(&ws[0]).unwrap();
    println!(
        "\n5-term truncation vs literal composition: metric gap = {:.3e}",
        cr_metric(&combined, &literal, 256).unwrap()
    );
    println!(
        "combined c0 = {:.10}, literal c0 = {:.10}",
        combined.c0(),
        literal.c0()
    );
}
