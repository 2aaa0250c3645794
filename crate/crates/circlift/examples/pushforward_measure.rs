//! The grid push-forward measure on box unions and its reflection scaling
//! law: a reflection with parameter λ scales the product-projection measure by
//! |1−λ|^dim, so null sets stay null.
//!
//!     cargo run -p circlift --example pushforward_measure

use circlift::{invariance_check, product_projection_measure, reflect_box_union, BoxUnion, Side};

fn main() {
    // two disjoint boxes in the plane
    let bu = BoxUnion::new(
        2,
        vec![
            vec![Side { lo: 0.0, hi: 1.0 }, Side { lo: 0.0, hi: 0.5 }],
            vec![Side { lo: 2.0, hi: 2.5 }, Side { lo: 0.0, hi: 1.0 }],
        ],
    )
    .unwrap();
    println!(
        "union of 2 boxes, measure = {}",
        product_projection_measure(&bu)
    );

    let h = [0.25, -0.5];
    for lambda in [0.0, 0.5, 2.0, -1.0] {
        let check = invariance_check(&bu, lambda, &h).unwrap();
        println!(
            "lambda = {lambda:>4}: before = {:.4}, after = {:.4}, ratio = {:.4} (|1-λ|^2 = {:.4})",
            check.before,
            check.after,
            check.ratio,
            (1.0 - lambda).abs().powi(2)
        );
    }

    // a null union stays null under every reflection
    let flat = BoxUnion::new(
        2,
        vec![vec![Side { lo: 0.3, hi: 0.3 }, Side { lo: 0.0, hi: 4.0 }]],
    )
    .unwrap();
    let reflected = reflect_box_union(&flat, 1.7, &h).unwrap();
    println!(
        "\nnull set: measure before = {}, after reflection = {}",
        product_projection_measure(&flat),
        product_projection_measure(&reflected)
    );
}
