use gohkit::abnormal::{abnormal_generators, goh_matrix};
use gohkit::dynamics::{abnormal_trajectory, integrate_field, sample_box, volume_distortion};
use gohkit::exactpoly::{parse_expression, Ambient};
use gohkit::fixtures;
use gohkit::pfaffian::skew_rank;
use gohkit::vectorfield::VectorField;
use proptest::prelude::*;

fn field(n: usize, comps: &[&str]) -> VectorField {
    let amb = Ambient::base(n);
    VectorField::base(n, comps.iter().map(|s| parse_expression(s, amb).unwrap()).collect()).unwrap()
}

/// Max error against the rotation `x(t) = (cos t, sin t)`.
fn rotation_error(h: f64) -> f64 {
    let v = field(2, &["0 - x2", "x1"]);
    let t = integrate_field(&v, &[1.0, 0.0], 1.0, h).unwrap();
    t.times
        .iter()
        .zip(&t.states)
        .map(|(s, x)| (x[0] - s.cos()).abs().max((x[1] - s.sin()).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn rk4_is_fourth_order_on_linear_fields() {
    let hs = [0.1, 0.05, 0.025];
    let errs: Vec<f64> = hs.iter().map(|&h| rotation_error(h)).collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((12.0..20.0).contains(&ratio), "{errs:?}");
    }
    // Pinned constant: err <= C h^4 with C measured at 6.6e-3.
    for (&h, &e) in hs.iter().zip(&errs) {
        assert!(e <= 7e-3 * h.powi(4), "h = {h}: {e}");
    }
}

#[test]
fn grid_is_increasing_and_aligned() {
    let v = field(3, &["1", "x1", "x2"]);
    let t = integrate_field(&v, &[0.0; 3], 1.0, 0.3).unwrap();
    assert!(t.times.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(*t.times.last().unwrap(), 1.0);
    assert_eq!(t.states.len(), t.times.len());
    assert_eq!(t.residual_b.len(), t.times.len());
    assert_eq!(t.residual_c.len(), t.times.len());
    // Polynomial solution (t, t^2/2, t^3/6) is reproduced exactly by RK4 up to rounding.
    let x = t.last();
    assert!((x[2] - 1.0 / 6.0).abs() < 1e-14);
}

#[test]
fn certified_generators_on_fixtures() {
    for fx in fixtures::FIXTURES {
        let frame = fx.frame();
        let goh = goh_matrix(&frame).unwrap();
        let r = skew_rank(goh.reduced.as_ref().unwrap(), None).unwrap();
        if r >= frame.rank() {
            continue;
        }
        for g in abnormal_generators(&frame, r).unwrap() {
            let Some(z) = g.z.as_ref() else { continue };
            if z.is_zero() {
                continue;
            }
            for x0 in sample_box(frame.n(), -0.5, 0.5, 3, 1) {
                let run = match abnormal_trajectory(&frame, &g, &x0, 0.5, 1e-2) {
                    Ok(run) => run,
                    Err(gohkit::dynamics::DynamicsError::BlowUp { .. }) => continue,
                    Err(e) => panic!("{}: {e}", fx.name),
                };
                let c = &run.certification;
                assert!(c.horizontal_by_construction);
                assert!(c.certified, "{} {}: {c:?}", fx.name, g.id());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn divergence_free_weights_are_one(seed in 0u64..1000) {
        // Hamiltonian-type planar field: div = 0.
        let v = field(3, &["x2^2 + x3", "x1*x3 - 1", "x1 + x2"]);
        let cloud = sample_box(3, -0.3, 0.3, 4, seed);
        let h = 1e-2;
        let rep = volume_distortion(&v, &cloud, 0.5, h, 0.0, 1e-6).unwrap();
        for w in rep.final_weights {
            prop_assert!((w - 1.0).abs() <= h * h);
        }
    }
}
