use proptest::prelude::*;
use satlab_core::hgeom::{affine_between_tori, bezout_pair, convergents, dist_hr, parallelogram_modulus, MobiusA};
use satlab_core::params::membership;
use satlab_core::render::{decode_ppm, encode_ppm, render_locus, Plane, RasterImage, Viewport};
use satlab_core::{Complex64, IrreducibleRational};

fn half_plane() -> impl Strategy<Value = Complex64> {
    (0.1f64..5.0, -10.0f64..10.0).prop_map(|(x, y)| Complex64::new(x, y))
}

proptest! {
    #[test]
    fn distance_is_symmetric(z in half_plane(), w in half_plane()) {
        prop_assert_eq!(dist_hr(z, w).unwrap(), dist_hr(w, z).unwrap());
    }

    #[test]
    fn triangle_inequality(a in half_plane(), b in half_plane(), c in half_plane()) {
        let (ab, bc, ac) = (dist_hr(a, b).unwrap(), dist_hr(b, c).unwrap(), dist_hr(a, c).unwrap());
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn dilatation_equals_distance(a in half_plane(), b in half_plane()) {
        let stretch = affine_between_tori(a, b).unwrap();
        prop_assert!((stretch.log_k - dist_hr(a, b).unwrap()).abs() < 1e-10);
        prop_assert!((stretch.apply(a) - b).norm() < 1e-9 * (1.0 + b.norm()));
        let two_pi_i = Complex64::new(0.0, std::f64::consts::TAU);
        prop_assert!((stretch.apply(two_pi_i) - two_pi_i).norm() < 1e-9);
    }

    #[test]
    fn mobius_is_an_isometry(u in -12i64..12, v in 1i64..12, z in half_plane(), w in half_plane()) {
        prop_assume!(bezout_pair(u, v).is_some());
        let (m, n) = bezout_pair(u, v).unwrap();
        let a = MobiusA::new(m, n, u, v).unwrap();
        let (az, aw) = (a.apply(z).unwrap(), a.apply(w).unwrap());
        prop_assert!(az.re > 0.0 && aw.re > 0.0);
        let d = dist_hr(z, w).unwrap();
        prop_assert!((dist_hr(az, aw).unwrap() - d).abs() < 1e-10 * (1.0 + d));
    }

    #[test]
    fn convergent_structure(y in -5.0f64..5.0) {
        let c = convergents(y, 12);
        for pair in c.windows(2) {
            let ((u0, v0), (u1, v1)) = (pair[0], pair[1]);
            prop_assert_eq!((v0 * u1 - u0 * v1).abs(), 1);
            let e0 = (y - u0 as f64 / v0 as f64).abs();
            let e1 = (y - u1 as f64 / v1 as f64).abs();
            prop_assert!(e1 < e0 || e1 < 1e-15);
        }
    }

    #[test]
    fn escape_is_kept_under_a_larger_budget(x in -3.0f64..5.0, y in -3.0f64..3.0, n in 1usize..200) {
        let lambda = Complex64::new(x, y);
        let (small, step) = membership(lambda, n);
        let (large, step2) = membership(lambda, 2 * n);
        if !small {
            prop_assert!(!large);
            prop_assert_eq!(step, step2);
        }
        if large {
            prop_assert!(small);
        }
    }

    #[test]
    fn ppm_round_trip(pixels in proptest::collection::vec(any::<u8>(), 8 * 8 * 3)) {
        let img = RasterImage { width: 8, height: 8, pixels };
        prop_assert_eq!(decode_ppm(&encode_ppm(&img)).unwrap(), img);
    }

    #[test]
    fn rational_text_round_trip((p, q) in (1i64..50).prop_flat_map(|q| (0..q, Just(q)))) {
        let (r, _) = IrreducibleRational::reduced(p, q).unwrap();
        prop_assert_eq!(r.to_string().parse::<IrreducibleRational>().unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reciprocal_quadrilateral(len in 0.5f64..2.0, angle in 0.6f64..2.5, scale in 0.5f64..3.0) {
        let va = Complex64::new(scale, 0.0);
        let vb = Complex64::from_polar(len * scale, angle);
        let m1 = parallelogram_modulus(va, vb, 32).unwrap();
        let m2 = parallelogram_modulus(vb, va, 32).unwrap();
        prop_assert!((m1 * m2 - 1.0).abs() < 0.02);
    }
}

#[test]
fn rendering_does_not_depend_on_thread_count() {
    let view = Viewport::new(Complex64::new(-1.0, 0.0), 1.5, 1.0, 48, 32, Plane::LambdaSmall).unwrap();
    let render_with = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| encode_ppm(&render_locus(&view, 300)))
    };
    assert_eq!(render_with(1), render_with(4));
}
