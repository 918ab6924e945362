use integral_srg::gf::Field;
use integral_srg::lemmas::{
    self, assemble_mu, calibrate, conic_count, formulas, LemmaError, DEFAULT_LEMMA_BOUND,
};
use integral_srg::params::transcribed_mu;

const BATTERY: [(u64, usize); 8] = [
    (3, 4),
    (5, 4),
    (7, 4),
    (9, 4),
    (11, 4),
    (3, 6),
    (5, 6),
    (3, 8),
];

#[test]
fn every_lemma_matches_on_battery() {
    for (q, m) in BATTERY {
        let f = Field::of_order(q).unwrap();
        let r = assemble_mu(&f, m, DEFAULT_LEMMA_BOUND).unwrap();
        for p in r.count_pairs() {
            assert!(p.matches, "q={q} m={m}: {p:?}");
        }
        assert_eq!(r.brackets.len(), f.squares().len());
        assert!(r.sum_brackets.split_holds, "q={q} m={m}");
        assert!(r.multiplicity.support_ok());
        assert_eq!(r.multiplicity.strays, 0);
        assert!(r.multiplicity.singles_characterized);
        assert_eq!(
            r.multiplicity.singles(),
            (r.r.oracle + r.ell.oracle + r.sigma0.oracle)
        );
        assert!(r.double_count_holds());
        assert_eq!(r.boundary, 0);
        assert_eq!(r.mu_direct as i128, transcribed_mu(q, m));
        assert!(r.all_match(), "q={q} m={m}");
    }
}

#[test]
fn anchor_values() {
    let f = Field::of_order(3).unwrap();
    let r = assemble_mu(&f, 4, DEFAULT_LEMMA_BOUND).unwrap();
    assert_eq!(r.bracket0.oracle, 18);
    assert_eq!(r.sigma0.oracle, 12);
    assert_eq!(r.brackets[0].count.oracle, 30);
    assert_eq!(r.sum_brackets.total.oracle, 30);
    let conic: Vec<u64> = r.conic.iter().map(|c| c.count.oracle).collect();
    assert_eq!(conic, vec![0, 1]);
    assert_eq!(r.r.oracle, 12);
    assert_eq!(r.ell.oracle, 12);
    assert_eq!(r.mu_direct, 42);

    let f5 = Field::of_order(5).unwrap();
    let r = assemble_mu(&f5, 4, DEFAULT_LEMMA_BOUND).unwrap();
    let by_gamma: Vec<(u32, u64)> = r
        .brackets
        .iter()
        .map(|b| (b.gamma_sq, b.count.oracle))
        .collect();
    assert_eq!(by_gamma, vec![(1, 120), (4, 130)]);
}

#[test]
fn conic_counts_for_every_s() {
    for q in [3u64, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 49] {
        let f = Field::of_order(q).unwrap();
        for s in f.elements().skip(1) {
            let c = conic_count(&f, s).unwrap();
            assert!(c.count.matches, "q={q} s={s}");
        }
    }
}

#[test]
fn calibration_is_stable() {
    let cal = calibrate(DEFAULT_LEMMA_BOUND).unwrap();
    assert_eq!(cal.gamma, formulas::GAMMA_BRANCHES.to_vec());
    assert_eq!(cal.conic, formulas::CONIC_BRANCHES.to_vec());
}

#[test]
fn preconditions() {
    let f = Field::of_order(3).unwrap();
    assert!(matches!(
        assemble_mu(&f, 6, 100),
        Err(LemmaError::SizeBoundExceeded { .. })
    ));
    assert!(matches!(
        lemmas::mu_direct(&f, 5, DEFAULT_LEMMA_BOUND),
        Err(LemmaError::UnsupportedDimension(5))
    ));
}

#[test]
fn report_round_trips_through_json() {
    let f = Field::of_order(5).unwrap();
    let r = assemble_mu(&f, 4, DEFAULT_LEMMA_BOUND).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    let back: lemmas::LemmaReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
    assert_eq!(serde_json::to_string(&back).unwrap(), s);
}
