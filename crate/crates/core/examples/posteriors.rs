//! Posterior table of majority on three variables: `d(y) = (T_ρ f)(y)` and
//! `Pr(f(X) = -1 | Y = y)` for every received word `y`.

use boolinfo::channel::{posterior_table, NoiseParameter};
use boolinfo::hypercube::{named_family, noise_operator, Family};

fn main() {
    let f = named_family(&Family::Majority, 3).unwrap();
    let alpha = NoiseParameter::new(0.25).unwrap();
    let table = posterior_table(&f, alpha);
    println!("y    f(y)  d(y)     P(f=-1|y)");
    for y in 0..f.len() {
        println!("{y:03b}  {:+}    {:+.4}  {:.4}", f.value(y), table.deviation(y), table.posterior(y));
    }
    for k in 1..=4 {
        println!("M_{} = {}", 2 * k, table.even_moment(k));
    }

    // The same deviations straight from the noise operator.
    let smoothed = noise_operator(&f, alpha.rho()).unwrap();
    assert!(smoothed.max_abs_diff(table.deviations()) < 1e-15);
}
