use boolinfo::bounds;
use boolinfo::channel::{self, NoiseParameter};
use boolinfo::hypercube::{
    fourier_transform, inverse_transform, noise_operator, BooleanFunction, RealHypercubeFunction,
};
use boolinfo::search::FunctionClass;
use proptest::prelude::*;

fn direct_transform(values: &[f64]) -> Vec<f64> {
    let len = values.len();
    (0..len)
        .map(|s| {
            values
                .iter()
                .enumerate()
                .map(|(m, v)| if (s & m).count_ones() % 2 == 0 { *v } else { -*v })
                .sum::<f64>()
                / len as f64
        })
        .collect()
}

fn boolean(max_n: usize) -> impl Strategy<Value = BooleanFunction> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), 1 << n)
            .prop_map(move |bits| BooleanFunction::from_predicate(n, |m| bits[m]).unwrap())
    })
}

fn real(max_n: usize) -> impl Strategy<Value = RealHypercubeFunction> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-4.0f64..4.0, 1 << n)
            .prop_map(move |v| RealHypercubeFunction::new(n, v).unwrap())
    })
}

fn alpha() -> impl Strategy<Value = NoiseParameter> {
    (0.0f64..=0.5).prop_map(|a| NoiseParameter::new(a).unwrap())
}

proptest! {
    #[test]
    fn parseval(f in boolean(12)) {
        prop_assert!((fourier_transform(&f).parseval_total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coefficients_are_multiples_of_the_grain(f in boolean(10)) {
        let grain = 2f64.powi(1 - f.n() as i32);
        for &c in fourier_transform(&f).coeffs() {
            let steps = c / grain;
            prop_assert!((steps - steps.round()).abs() * grain < 1e-9);
            if c.abs() > 1e-12 {
                prop_assert!(c.abs() >= 2f64.powi(-(f.n() as i32)) - 1e-12);
            }
        }
    }

    #[test]
    fn balance_iff_empty_coefficient_vanishes(f in boolean(10)) {
        let empty = fourier_transform(&f).coeff(0);
        prop_assert_eq!(f.is_balanced(), empty.abs() < 1e-12);
    }

    #[test]
    fn fwht_matches_definition(g in real(6)) {
        let fast = fourier_transform(&g);
        let slow = direct_transform(g.values());
        for (a, b) in fast.coeffs().iter().zip(&slow) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn transform_round_trip(g in real(10)) {
        let back = inverse_transform(&fourier_transform(&g));
        prop_assert!(back.max_abs_diff(&g) < 1e-9);
    }

    #[test]
    fn noise_semigroup(g in real(8), r1 in 0.0f64..1.5, r2 in 0.0f64..1.5) {
        let twice = noise_operator(&noise_operator(&g, r1).unwrap(), r2).unwrap();
        let once = noise_operator(&g, r1 * r2).unwrap();
        prop_assert!(twice.max_abs_diff(&once) < 1e-9);
    }

    #[test]
    fn hex_round_trip(f in boolean(9)) {
        let text = f.to_string();
        prop_assert_eq!(text.parse::<BooleanFunction>().unwrap(), f);
    }

    #[test]
    fn spec_round_trip(f in boolean(8)) {
        let spec = boolinfo::cli::function_spec(&f);
        prop_assert_eq!(boolinfo::cli::parse_function_spec(&spec).unwrap(), f);
    }

    #[test]
    fn moment_consistency(f in boolean(10), a in alpha()) {
        let direct = channel::even_moment(&f, a, 1).unwrap();
        let spectral = channel::second_moment_spectral(&fourier_transform(&f), a.rho()).unwrap();
        prop_assert!((direct - spectral).abs() < 1e-10);
    }

    #[test]
    fn mi_between_zero_and_output_entropy(f in boolean(8), a in alpha()) {
        let mi = channel::mutual_information(&f, a);
        let h = channel::binary_entropy(f.minus_fraction()).unwrap();
        prop_assert!(mi >= 0.0);
        prop_assert!(mi <= h + 1e-12);
    }

    #[test]
    fn moments_decrease(f in boolean(8), a in alpha()) {
        let r = channel::moment_report(&f, a, 8);
        prop_assert!(r.moments.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(r.moments.iter().all(|&m| m >= 0.0));
    }

    #[test]
    fn posterior_mean_is_bias(f in boolean(10), a in alpha()) {
        let table = channel::posterior_table(&f, a);
        let bias = 1.0 - 2.0 * f.minus_fraction();
        prop_assert!((table.deviations().mean() - bias).abs() < 1e-9);
    }

    #[test]
    fn bounds_vanish_at_half_and_decrease(a in 0.0f64..0.5, b in 0.0f64..0.5) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(bounds::conjectured_bound(hi).unwrap() <= bounds::conjectured_bound(lo).unwrap() + 1e-15);
        prop_assert!(bounds::quadratic_bound(hi).unwrap() <= bounds::quadratic_bound(lo).unwrap());
        if let (Ok(x), Ok(y)) = (bounds::theorem1_bound(lo), bounds::theorem1_bound(hi)) {
            prop_assert!(y <= x);
        }
    }
}

#[test]
fn bounds_at_half_are_zero() {
    assert_eq!(bounds::conjectured_bound(0.5).unwrap(), 0.0);
    assert_eq!(bounds::quadratic_bound(0.5).unwrap(), 0.0);
    assert_eq!(bounds::theorem1_bound(0.5).unwrap(), 0.0);
    for t in 1..=5 {
        assert_eq!(bounds::general_t_bound(0.5, t).unwrap(), 0.0);
    }
    for k in 1..=4 {
        assert_eq!(bounds::moment_bound(0.5, k).unwrap(), 0.0);
    }
    for n in 1..=6 {
        assert_eq!(bounds::nondictator_mi_bound(0.5, n).unwrap(), 0.0);
    }
}

#[test]
fn general_t_two_is_theorem1_exactly() {
    for i in 0..=100 {
        let a = bounds::theorem1_threshold() + (0.5 - bounds::theorem1_threshold()) * f64::from(i) / 100.0;
        assert_eq!(
            bounds::general_t_bound(a, 2).unwrap().to_bits(),
            bounds::theorem1_bound(a).unwrap().to_bits()
        );
    }
}

#[test]
fn dominance_ordering_above_one_third() {
    for i in 1..=101 {
        let a = 1.0 / 3.0 + (0.5 - 1.0 / 3.0) * f64::from(i) / 102.0;
        let conj = bounds::conjectured_bound(a).unwrap();
        let t1 = bounds::theorem1_bound(a).unwrap();
        let quad = bounds::quadratic_bound(a).unwrap();
        assert!(conj <= t1 + 1e-12 && t1 <= quad + 1e-12, "alpha {a}");
    }
}

#[test]
fn theorem1_looser_than_quadratic_below_one_third() {
    for i in 1..100 {
        let a = 0.2114 + (1.0 / 3.0 - 0.2114) * f64::from(i) / 100.0;
        assert!(bounds::theorem1_bound(a).unwrap() > bounds::quadratic_bound(a).unwrap());
    }
}

#[test]
fn ratio_limits_converge() {
    let target = 2.0 / channel::log2_e();
    let mut last_quad = f64::INFINITY;
    let mut last_t1 = f64::INFINITY;
    for m in 2..=5 {
        let a = 0.5 - 10f64.powi(-m);
        let conj = bounds::conjectured_bound(a).unwrap();
        let quad_err = (bounds::quadratic_bound(a).unwrap() / conj - target).abs();
        let t1_err = (bounds::theorem1_bound(a).unwrap() / conj - 1.0).abs();
        assert!(quad_err < last_quad && t1_err < last_t1, "m = {m}");
        last_quad = quad_err;
        last_t1 = t1_err;
    }
}

#[test]
fn dictatorship_characterized_by_weight_profile() {
    for n in 1..=4 {
        for f in FunctionClass::balanced(n).unwrap().iter() {
            let weights = fourier_transform(&f).weight_profile();
            let high: f64 = weights.iter().skip(2).sum();
            let flat = high < 1e-12;
            assert_eq!(flat, f.as_dictator().is_some(), "{f}");
        }
    }
}

#[test]
fn fwht_matches_definition_on_every_small_function() {
    for n in 1..=3 {
        for f in FunctionClass::all(n).unwrap().iter() {
            let fast = fourier_transform(&f);
            let slow = direct_transform(f.to_real().values());
            for (a, b) in fast.coeffs().iter().zip(&slow) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn moment_bound_dominates_mi_for_balanced_functions() {
    let grid = boolinfo::search::default_alpha_grid();
    for n in 1..=4 {
        for f in FunctionClass::balanced(n).unwrap().iter() {
            for &a in &grid {
                let r = channel::moment_report(&f, a, 3);
                for t in 1..=3 {
                    let upper = channel::mi_upper_from_moments(&r, t, true).unwrap();
                    assert!(upper >= r.mi_bits - 1e-12, "{f} alpha {} t {t}", a.alpha());
                }
            }
        }
    }
}
