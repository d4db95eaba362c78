use afdm_core::ambiguity::DelayDopplerGrid;
use afdm_core::stats::{expected_on_cut, monte_carlo_expected_aaf_sq, psd, Cut, McConfig};
use afdm_core::{AfdmParams, Constellation};
use proptest::prelude::*;

fn p16() -> AfdmParams {
    AfdmParams::with_spacing(16, 3, 0.5, 15e3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn identical_seeds_identical_curves(seed in any::<u64>(), trials in 2usize..40) {
        let p = p16();
        let cut = Cut::zero_delay_units(&p, -3.0, 3.0, 7);
        let cfg = McConfig { trials, seed, constellation: "qpsk".into() };
        let a = monte_carlo_expected_aaf_sq(&p, &cfg, &cut).unwrap();
        let b = monte_carlo_expected_aaf_sq(&p, &cfg, &cut).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn psd_peak_is_zero_db(m_pick in 0.0f64..1.0, c in 1usize..6) {
        let p = AfdmParams::with_spacing(16, c, 0.0, 15e3).unwrap();
        let m = ((16.0 * m_pick) as usize).min(15);
        let s = psd(&p, m, 8).unwrap();
        let mx = s.power_db.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(mx, 0.0);
    }
}

/// Standard errors shrink as `1/√trials`: quadrupling the trials halves them.
#[test]
fn standard_error_scaling() {
    let p = p16();
    let cut = Cut::zero_doppler_units(&p, -4.0, 4.0, 9);
    let se = |trials| {
        let cfg = McConfig { trials, seed: 99, constellation: "qam16".into() };
        monte_carlo_expected_aaf_sq(&p, &cfg, &cut).unwrap().stderr
    };
    let (a, b) = (se(1000), se(4000));
    let ratio: f64 = a.iter().zip(&b).map(|(x, y)| x / y).sum::<f64>() / a.len() as f64;
    assert!((ratio / 2.0 - 1.0).abs() <= 0.15, "mean SE ratio {ratio}");
}

/// The estimated surface peaks at the origin, and its dominance over the
/// strongest off-origin point matches the closed form.
#[test]
fn origin_concentration() {
    let p = p16();
    let grid = DelayDopplerGrid::with_density(&p, (-4.0, 4.0), (-4.0, 4.0), 1).unwrap();
    let cut = Cut::Full { grid };
    let cfg = McConfig { trials: 3000, seed: 5, constellation: "qam16".into() };
    let est = monte_carlo_expected_aaf_sq(&p, &cfg, &cut).unwrap();
    let cf = expected_on_cut(&p, &Constellation::qam16(), &cut).unwrap();
    let origin = cut.points().iter().position(|&(t, v)| t == 0.0 && v == 0.0).unwrap();
    let argmax = (0..est.mean.len()).max_by(|&a, &b| est.mean[a].total_cmp(&est.mean[b])).unwrap();
    assert_eq!(argmax, origin);
    let off = (0..cf.len()).filter(|&k| k != origin).max_by(|&a, &b| cf[a].total_cmp(&cf[b])).unwrap();
    let mc_ratio = est.mean[origin] / est.mean[off];
    let cf_ratio = cf[origin] / cf[off];
    let rel_se = (est.stderr[origin] / est.mean[origin]).hypot(est.stderr[off] / est.mean[off]);
    assert!((mc_ratio / cf_ratio - 1.0).abs() <= 3.0 * rel_se, "mc {mc_ratio} cf {cf_ratio} rel se {rel_se}");
}

#[test]
fn converges_to_closed_form_at_origin() {
    let p = AfdmParams::with_spacing(64, 7, 2f64.sqrt(), 15e3).unwrap();
    let cut = Cut::ZeroDoppler { taus: vec![0.0] };
    let cfg = McConfig { trials: 2000, seed: 1, constellation: "qam256".into() };
    let est = monte_carlo_expected_aaf_sq(&p, &cfg, &cut).unwrap();
    let cf = expected_on_cut(&p, &Constellation::qam256(), &cut).unwrap();
    assert!((est.mean[0] - cf[0]).abs() <= 3.0 * est.stderr[0]);
}

#[test]
fn single_full_band_chirp_spectrum() {
    let p = AfdmParams::with_spacing(64, 1, 0.0, 15e3).unwrap();
    let s = psd(&p, 0, 8).unwrap();
    assert!(s.power_fraction(-0.05 * p.bandwidth(), 1.05 * p.bandwidth()) > 0.95);
}
