//! Track the scale-invariant functional Lambda1 = lambda1 * vol^(2/3)
//! along the deformation and watch it grow without bound.
//!
//! On the unit 3-sphere deformed by t in the Hopf direction the first
//! eigenvalue is 3 - t/(1+t) for t >= -5/6 and the volume is
//! sqrt(1+t) * 2 pi^2, so Lambda1 grows like t^(1/3). A sequence of
//! metrics on a fixed closed manifold therefore makes the normalized
//! first eigenvalue arbitrarily large.
//!
//! Run with: cargo run --example lambda1_growth

use berger_spectra::config::Tolerances;
use berger_spectra::spectrum::lambda1_functional;

fn main() {
    let tols = Tolerances::default();
    let grid = [0.0, 0.5, 1.0, 3.0, 10.0, 100.0, 1000.0];

    println!("{:>8} {:>12} {:>14} {:>12}", "t", "lambda1", "volume", "Lambda1");
    let mut first = None;
    let mut last = 0.0;
    for &t in &grid {
        let p = lambda1_functional(t, 4, &tols).unwrap();
        println!(
            "{:>8} {:>12.6} {:>14.4} {:>12.4}",
            t, p.lambda1, p.volume, p.normalized
        );
        first.get_or_insert(p.normalized);
        last = p.normalized;
    }
    println!();
    println!(
        "Lambda1 grew by a factor {:.1} across the grid; the closed form \
         (3 - t/(1+t)) (1+t)^(1/3) (2 pi^2)^(2/3) is unbounded in t.",
        last / first.unwrap()
    );
}
