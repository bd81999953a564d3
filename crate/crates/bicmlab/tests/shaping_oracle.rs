//! The two-stage shaping search must reproduce the exhaustive single-stage
//! grid search exactly at spot-checked SNRs.

use bicmlab::alphabets::{FadingModel, InputAlphabet};
use bicmlab::capacity::QuadratureSpec;
use bicmlab::labelings::{Labeling, LabelingKind};
use bicmlab::shaping::{full_grid_search, optimize_bit_pmfs};

#[test]
fn two_stage_matches_full_grid_on_4pam() {
    let alphabet = InputAlphabet::pam(4).unwrap();
    let labeling = Labeling::generate(LabelingKind::Brgc, 2).unwrap();
    let q = QuadratureSpec {
        gh_order: 40,
        ..QuadratureSpec::default()
    };
    for snr in [0.05, 0.6, 2.5] {
        let fast =
            optimize_bit_pmfs(&alphabet, &labeling, snr, &FadingModel::Awgn, &q, 0.01).unwrap();
        let slow =
            full_grid_search(&alphabet, &labeling, snr, &FadingModel::Awgn, &q, 0.01).unwrap();
        assert_eq!(fast.best_p0, slow.best_p0, "argmax at snr {snr}");
        assert!(
            (fast.best_rate - slow.best_rate).abs() <= 1e-9,
            "rate at snr {snr}: {} vs {}",
            fast.best_rate,
            slow.best_rate
        );
        assert!(fast.best_rate >= fast.baseline_rate - 1e-9);
        println!(
            "snr {snr}: p0 {:?}, shaped {:.6}, uniform {:.6}",
            fast.best_p0, fast.best_rate, fast.baseline_rate
        );
    }
}
