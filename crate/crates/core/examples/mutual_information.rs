//! How much each function tells about `X` through BSC(α), against `1 - h(α)`.

use boolinfo::bounds::conjectured_bound;
use boolinfo::channel::{mutual_information, NoiseParameter};
use boolinfo::hypercube::{named_family, Family};

fn main() {
    let n = 5;
    let functions = [
        ("dictator", named_family(&Family::Dictator(1), n).unwrap()),
        ("majority", named_family(&Family::Majority, n).unwrap()),
        ("parity(1,2)", named_family(&Family::Parity(vec![1, 2]), n).unwrap()),
        ("parity(all)", named_family(&Family::Parity((1..=n).collect()), n).unwrap()),
        ("and-like", named_family(&Family::Threshold { weights: vec![1; n], theta: 5 }, n).unwrap()),
    ];
    print!("{:>6} {:>10}", "alpha", "1-h(a)");
    for (name, _) in &functions {
        print!(" {name:>12}");
    }
    println!();
    for i in 0..=10 {
        let a = f64::from(i) * 0.05;
        let alpha = NoiseParameter::new(a).unwrap();
        print!("{a:>6.2} {:>10.6}", conjectured_bound(a).unwrap());
        for (_, f) in &functions {
            print!(" {:>12.6}", mutual_information(f, alpha));
        }
        println!();
    }
}
