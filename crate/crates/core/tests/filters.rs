mod common;

use common::{max_abs_diff, random_image};
use noisebench::filters::{gaussian_taps, kernel_radius};
use noisebench::{
    apply_noise, bilateral_filter, gaussian_filter, highpass_filter, laplacian_filter,
    lowpass_filter, mean_filter, median_filter, psnr, synthetic_image, wiener_filter, FilterKind,
    FilterSpec, ImageGrid, NoiseKind, NoiseSpec,
};
use proptest::prelude::*;

/// Direct 2D convolution with the sampled, renormalized Gaussian kernel.
fn gaussian_2d_oracle(img: &ImageGrid, sigma: f64) -> ImageGrid {
    let r = (3.0 * sigma).ceil() as isize;
    let mut kernel = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            let d2 = (dx * dx + dy * dy) as f64;
            kernel.push((
                (dx, dy),
                (-d2 / (2.0 * sigma * sigma)).exp() / (2.0 * std::f64::consts::PI * sigma * sigma),
            ));
        }
    }
    let total: f64 = kernel.iter().map(|(_, k)| k).sum();
    ImageGrid::from_fn(img.width(), img.height(), |x, y| {
        kernel
            .iter()
            .map(|((dx, dy), k)| k / total * img.get_clamped(x as isize + dx, y as isize + dy))
            .sum()
    })
    .unwrap()
}

#[test]
fn separable_gaussian_matches_2d_kernel() {
    let img = random_image(23, 17, 5);
    for sigma in [0.5, 1.0, 1.7, 3.0] {
        let got = gaussian_filter(&img, sigma).unwrap();
        let want = gaussian_2d_oracle(&img, sigma);
        assert!(max_abs_diff(&got, &want) < 1e-12, "sigma {sigma}");
    }
}

#[test]
fn gaussian_impulse_response_is_kernel() {
    let n = 15;
    let mut d = vec![0.0; n * n];
    d[7 * n + 7] = 1.0;
    let img = ImageGrid::new(n, n, d).unwrap();
    let out = gaussian_filter(&img, 1.0).unwrap();
    let taps = gaussian_taps(1.0);
    let r = kernel_radius(1.0);
    for y in 0..n {
        for x in 0..n {
            let (dx, dy) = (x as isize - 7, y as isize - 7);
            let want = if dx.unsigned_abs() <= r && dy.unsigned_abs() <= r {
                taps[(dx + r as isize) as usize] * taps[(dy + r as isize) as usize]
            } else {
                0.0
            };
            assert!((out.get(x, y) - want).abs() < 1e-15);
        }
    }
    // centre / (1, 0) neighbour ratio is exp(1/2)
    assert!((out.get(7, 7) / out.get(8, 7) - 0.5f64.exp()).abs() < 1e-12);
}

#[test]
fn bilateral_with_flat_range_kernel_is_gaussian_blur() {
    // The deviation grows with the squared intensity spread over sigma_r^2,
    // so use a realistic 8-bit image rather than white noise.
    let img = synthetic_image(96, 80);
    let bil = bilateral_filter(&img, 3.0, 1e6).unwrap();
    let gauss = gaussian_filter(&img, 3.0).unwrap();
    assert!(max_abs_diff(&bil, &gauss) < 1e-6);
}

#[test]
fn constant_images_are_fixed_points() {
    let img = ImageGrid::filled(19, 13, 93.7).unwrap();
    assert_eq!(median_filter(&img, 5).unwrap(), img);
    let close = |out: ImageGrid| assert!(max_abs_diff(&out, &img) < 1e-12);
    close(mean_filter(&img, 3).unwrap());
    close(gaussian_filter(&img, 1.3).unwrap());
    close(bilateral_filter(&img, 3.0, 30.0).unwrap());
    close(wiener_filter(&img, 5, None).unwrap());
    assert!(max_abs_diff(&lowpass_filter(&img, 40.0).unwrap(), &img) < 1e-9);
    assert!(highpass_filter(&img, 40.0)
        .unwrap()
        .data()
        .iter()
        .all(|v| v.abs() < 1e-9));
    assert!(laplacian_filter(&img).data().iter().all(|&v| v == 0.0));
}

#[test]
fn laplacian_annihilates_ramps_in_interior() {
    let img = ImageGrid::from_fn(12, 9, |x, _| x as f64).unwrap();
    let out = laplacian_filter(&img);
    for y in 1..8 {
        for x in 1..11 {
            assert_eq!(out.get(x, y), 0.0);
        }
    }
    let affine = ImageGrid::from_fn(12, 9, |x, y| 3.0 * x as f64 - 2.0 * y as f64 + 7.0).unwrap();
    let out = laplacian_filter(&affine);
    for y in 1..8 {
        for x in 1..11 {
            assert_eq!(out.get(x, y), 0.0);
        }
    }
}

#[test]
fn lowpass_limits() {
    // Unit-range random image: with D0 = 10 * 64 the corner bins are still
    // attenuated by ~0.25%, so the error scales with intensity range.
    let img = random_image(64, 64, 9).map(|v| v / 255.0);
    let wide = lowpass_filter(&img, 640.0).unwrap();
    assert!(max_abs_diff(&img, &wide) < 1e-3);
    let narrow = lowpass_filter(&img, 5.0).unwrap();
    assert!((narrow.mean() - img.mean()).abs() < 1e-9);
}

#[test]
fn highpass_removes_mean() {
    let img = random_image(48, 40, 10);
    let out = highpass_filter(&img, 40.0).unwrap();
    assert!(out.mean().abs() < 1e-6 * img.mean());
}

#[test]
fn lowpass_plus_highpass_is_identity() {
    for (w, h) in [(64, 64), (33, 20)] {
        let img = random_image(w, h, 12);
        let lp = lowpass_filter(&img, 40.0).unwrap();
        let hp = highpass_filter(&img, 40.0).unwrap();
        let sum = ImageGrid::new(
            w,
            h,
            lp.data()
                .iter()
                .zip(hp.data())
                .map(|(a, b)| a + b)
                .collect(),
        )
        .unwrap();
        assert!(max_abs_diff(&sum, &img) < 1e-9);
    }
}

#[test]
fn median_rejects_sparse_impulses() {
    let clean = ImageGrid::filled(256, 256, 128.0).unwrap();
    let noisy = apply_noise(&clean, &NoiseSpec::default_for(NoiseKind::SaltPepper), 42);
    let out = median_filter(&noisy, 3).unwrap();
    assert!(psnr(&clean, &out).unwrap().db >= 40.0);
}

#[test]
fn wiener_improves_noisy_ramp() {
    let clean = ImageGrid::from_fn(64, 64, |x, y| 2.0 * x as f64 + y as f64).unwrap();
    let noisy = apply_noise(&clean, &NoiseSpec::default_for(NoiseKind::Gaussian), 7);
    let out = wiener_filter(&noisy, 3, None).unwrap();
    assert!(psnr(&clean, &out).unwrap().db > psnr(&clean, &noisy).unwrap().db);
}

fn arb_byte_image() -> impl Strategy<Value = ImageGrid> {
    (1usize..14, 1usize..14).prop_flat_map(|(w, h)| {
        prop::collection::vec(0.0f64..=255.0, w * h)
            .prop_map(move |d| ImageGrid::new(w, h, d).unwrap())
    })
}

const SMOOTHERS: [FilterKind; 5] = [
    FilterKind::Median,
    FilterKind::Mean,
    FilterKind::Gaussian,
    FilterKind::Bilateral,
    FilterKind::Wiener,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_filter_preserves_shape(img in arb_byte_image()) {
        for k in FilterKind::ALL {
            let out = FilterSpec::default_for(k).apply(&img).unwrap();
            prop_assert_eq!((out.width(), out.height()), (img.width(), img.height()));
        }
    }

    #[test]
    fn smoothers_stay_in_byte_range(img in arb_byte_image()) {
        for k in SMOOTHERS {
            let out = FilterSpec::default_for(k).apply(&img).unwrap();
            prop_assert!(out.data().iter().all(|v| (-1e-9..=255.0 + 1e-9).contains(v)), "{}", k);
        }
    }

    #[test]
    fn linear_smoothers_commute_with_shift(img in arb_byte_image(), c in -100.0f64..100.0) {
        let shifted = img.map(|v| v + c);
        for spec in [FilterSpec::Mean { window: 3 }, FilterSpec::Mean { window: 5 }, FilterSpec::Gaussian { sigma: 1.4 }] {
            let a = spec.apply(&shifted).unwrap();
            let b = spec.apply(&img).unwrap().map(|v| v + c);
            prop_assert!(max_abs_diff(&a, &b) < 1e-12);
        }
    }
}
