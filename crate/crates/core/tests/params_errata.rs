use integral_srg::gf::Field;
use integral_srg::graph::IntegralGraph;
use integral_srg::params::{
    errata_report, feasibility_check, lambda_closed_form, transcribed_params, validated_params,
    ParamSource, SrgParams, Verdict,
};
use proptest::prelude::*;

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

fn entry<'a>(
    entries: &'a [integral_srg::params::ErrataEntry],
    name: &str,
) -> &'a integral_srg::params::ErrataEntry {
    entries.iter().find(|e| e.quantity == name).unwrap()
}

#[test]
fn errata_on_battery() {
    for (q, m) in BATTERY {
        let f = Field::of_order(q).unwrap();
        let cert = IntegralGraph::build(&f, m).unwrap().certify_srg();
        let errata = errata_report(&cert).unwrap();
        for e in &errata {
            assert_eq!(e.validated, e.oracle, "q={q} m={m}: {e:?}");
            let agree = e.transcribed == e.validated && e.validated == e.oracle;
            assert_eq!(e.verdict == Verdict::Consistent, agree);
        }
        assert_eq!(
            entry(&errata, "mu").verdict,
            Verdict::Consistent,
            "q={q} m={m}"
        );
        assert_eq!(entry(&errata, "v").verdict, Verdict::Consistent);
        assert_eq!(lambda_closed_form(q, m), cert.lambda as i128);
    }
}

#[test]
fn anchor_errata() {
    let f3 = Field::of_order(3).unwrap();
    let errata = errata_report(&IntegralGraph::build(&f3, 4).unwrap().certify_srg()).unwrap();
    let l = entry(&errata, "lambda");
    assert_eq!((l.transcribed, l.validated, l.oracle), (46, 37, 37));
    assert_eq!(l.verdict, Verdict::TranscriptionSuspect);
    let k = entry(&errata, "k");
    assert_eq!((k.transcribed, k.validated, k.oracle), (56, 56, 56));
    assert_eq!(k.verdict, Verdict::Consistent);

    let f5 = Field::of_order(5).unwrap();
    let errata = errata_report(&IntegralGraph::build(&f5, 4).unwrap().certify_srg()).unwrap();
    let k = entry(&errata, "k");
    assert_eq!((k.transcribed, k.validated, k.oracle), (389, 384, 384));
    assert_eq!(k.verdict, Verdict::TranscriptionSuspect);
}

#[test]
fn transcribed_fails_the_identity() {
    let p = transcribed_params(3, 4).unwrap();
    assert!(!p.identity_holds());
    assert!(!feasibility_check(&p).feasible);
    assert!(!transcribed_params(5, 4).unwrap().identity_holds());
}

proptest! {
    #[test]
    fn validated_is_feasible(qi in 0usize..12, h in 2usize..6) {
        let q = [3u64, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29][qi];
        let m = 2 * h;
        prop_assume!((q as f64).powi(m as i32) < 1e15);
        let p = validated_params(q, m).unwrap();
        prop_assert_eq!(p.source, ParamSource::Validated);
        prop_assert!(p.identity_holds());
        prop_assert_eq!(p.mu, transcribed_params(q, m).unwrap().mu);
        prop_assert_eq!(p.lambda, lambda_closed_form(q, m));
        let r = feasibility_check(&p);
        prop_assert!(r.feasible);
        let (f, g) = r.multiplicities.unwrap();
        prop_assert_eq!(f + g, p.v - 1);
        let (ev_r, ev_s) = r.eigenvalues.unwrap();
        prop_assert_eq!(p.k + f * ev_r + g * ev_s, 0);
    }

    #[test]
    fn feasibility_rejects_broken_identity(v in 5i128..500, k in 1i128..100, l in 0i128..100, mu in 1i128..100) {
        let p = SrgParams { v, k, lambda: l, mu, source: ParamSource::Certified };
        if !p.identity_holds() {
            prop_assert!(!feasibility_check(&p).feasible);
        }
    }
}
