//! Fourier-Walsh spectra and weight profiles of a few named functions.
//!
//! ```text
//! cargo run --example spectrum
//! ```

use boolinfo::hypercube::{fourier_transform, named_family, Family};

fn main() {
    let n = 5;
    let families = [
        ("dictator x1", Family::Dictator(1)),
        ("parity x1x2x3", Family::Parity(vec![1, 2, 3])),
        ("majority", Family::Majority),
        ("threshold 2x1+x2+x3+x4+x5 >= 1", Family::Threshold { weights: vec![2, 1, 1, 1, 1], theta: 1 }),
    ];
    for (name, family) in families {
        let f = named_family(&family, n).expect("valid family");
        let spectrum = fourier_transform(&f);
        let weights: Vec<String> = spectrum.weight_profile().iter().map(|w| format!("{w:.4}")).collect();
        println!("{name:<32} {f}");
        println!("  balanced {}  parseval {:.12}", f.is_balanced(), spectrum.parseval_total());
        println!("  W_0..W_{n}: [{}]", weights.join(", "));
        let top: Vec<String> = spectrum
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > 1e-12)
            .take(6)
            .map(|(s, c)| format!("f^({s:#07b}) = {c:+.4}"))
            .collect();
        println!("  {}", top.join("  "));
    }
}
