//! Tour of the reflection algebra: composition, inverses, the center-of-mass
//! fixed point, and the transitivity solver.
//!
//!     cargo run -p circlift --example reflection_algebra

use circlift::{
    compose, compose_many, cr_metric, solve_transitivity, Harmonic, Lifting, Reflection,
};

fn main() {
    let w = Lifting::new(
        0.2,
        2,
        vec![Harmonic {
            k: 1,
            sin: 0.03,
            cos: -0.01,
        }],
    )
    .unwrap();
    let u = Lifting::rotation(0.7, 2);
    let v = Lifting::identity(2);

    let r = Reflection::new(0.5, w.clone()).unwrap();
    let s = Reflection::new(-0.8, u.clone()).unwrap();

    // psi_{lambda,w}(v) = (1 - lambda) v + lambda w
    let rv = r.apply(&v).unwrap();
    println!("r(v) has c0 = {:.4} (halfway toward w)", rv.c0());

    // composition lands in the group normal form (1 - delta) v + sum a_i w_i
    let rs = compose(&r, &s).unwrap();
    println!(
        "r ∘ s: delta = {:.4}, {} terms",
        rs.delta(),
        rs.terms().len()
    );
    let nested = r.apply(&s.apply(&v).unwrap()).unwrap();
    let gap = cr_metric(&rs.apply(&v).unwrap(), &nested, 256).unwrap();
    println!("  against nested application: metric gap {gap:.2e}");

    // inverse parameter lambda/(lambda - 1)
    let r_inv = r.inverse();
    println!(
        "r⁻¹ has lambda = {} (involution check: {})",
        r_inv.lambda(),
        {
            let round = compose(&r, &r_inv).unwrap().apply(&v).unwrap();
            cr_metric(&round, &v, 256).unwrap() < 1e-12
        }
    );

    // unique fixed point = center of mass of the witnesses
    let fp = rs.fixed_point().unwrap();
    let moved = rs.apply(&fp).unwrap();
    println!(
        "fixed point of r ∘ s: c0 = {:.4}, invariance gap {:.2e}",
        fp.c0(),
        cr_metric(&moved, &fp, 256).unwrap()
    );

    // transitivity: a reflection carrying any lifting to any other
    let target = Lifting::rotation(2.5, 2);
    let carrier = solve_transitivity(&v, &target, 0.25).unwrap();
    let reached = carrier.apply(&v).unwrap();
    println!(
        "transitivity: witness c0 = {:.4}, reached target within {:.2e}",
        carrier.witness().c0(),
        cr_metric(&reached, &target, 256).unwrap()
    );

    // equal-witness chains contract by the product of (1 - lambda_i)
    let chain: Vec<Reflection> = (1..=4)
        .map(|i| Reflection::new(1.0 / (i as f64 * 4.0), w.clone()).unwrap())
        .collect();
    let g = compose_many(&chain).unwrap();
    let expected: f64 = 1.0
        - (1..=4)
            .map(|i| 1.0 - 1.0 / (i as f64 * 4.0))
            .product::<f64>();
    println!(
        "four equal-witness reflections: delta = {:.6} (product formula {expected:.6})",
        g.delta()
    );
}
