use integral_srg::gf::{Fe, Field};
use integral_srg::quadrics::{
    count_projective_points, determinant, mat_mul, theoretical_point_count, NamedForm,
    QuadraticForm, QuadricKind, DEFAULT_POINT_BOUND,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

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

fn random_matrix(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<Fe> {
    (0..n * n)
        .map(|_| f.element(rng.gen_range(0..f.order() as u64)).unwrap())
        .collect()
}

fn random_symmetric<'f>(f: &'f Field, n: usize, rng: &mut ChaCha8Rng) -> QuadraticForm<'f> {
    let mut entries = vec![Fe::ZERO; n * n];
    for i in 0..n {
        for j in i..n {
            let x = f.element(rng.gen_range(0..f.order() as u64)).unwrap();
            entries[i * n + j] = x;
            entries[j * n + i] = x;
        }
    }
    QuadraticForm::from_matrix(f, n, entries).unwrap()
}

#[test]
fn named_forms_match_closed_counts_on_battery() {
    for (q, m) in BATTERY {
        let f = Field::of_order(q).unwrap();
        for form in NamedForm::ALL {
            let gammas: Vec<Fe> = if form.uses_gamma() {
                f.squares().to_vec()
            } else {
                vec![Fe::ONE]
            };
            for g in gammas {
                let quadric = form.build(&f, m, g);
                let census = count_projective_points(&quadric, DEFAULT_POINT_BOUND).unwrap();
                assert_ne!(
                    census.class.kind,
                    QuadricKind::Singular,
                    "{} q={q} m={m}",
                    form.label()
                );
                assert!(
                    census.matches,
                    "{} q={q} m={m} g={g}: {:?}",
                    form.label(),
                    census
                );
            }
        }
    }
}

#[test]
fn random_nonsingular_forms() {
    for q in [3u64, 5, 7, 9] {
        let f = Field::of_order(q).unwrap();
        for r in 1..=5usize {
            let mut rng = ChaCha8Rng::seed_from_u64(q * 100 + r as u64);
            let mut tested = 0;
            while tested < 100 {
                let form = random_symmetric(&f, r + 1, &mut rng);
                if form.determinant().is_zero() {
                    continue;
                }
                let census = count_projective_points(&form, DEFAULT_POINT_BOUND).unwrap();
                assert!(census.matches, "q={q} r={r}: {census:?}");
                tested += 1;
            }
        }
    }
}

#[test]
fn singular_forms_have_no_closed_count() {
    let f = Field::of_order(5).unwrap();
    let form = QuadraticForm::diagonal(&f, &[Fe::ONE, Fe::ONE, Fe::ZERO]);
    let class = form.classify();
    assert_eq!(class.kind, QuadricKind::Singular);
    assert!(theoretical_point_count(&class, 5).is_err());
    let census = count_projective_points(&form, DEFAULT_POINT_BOUND).unwrap();
    assert_eq!(census.theoretical, None);
    assert!(!census.matches);
}

#[test]
fn determinant_is_multiplicative() {
    for q in [3u64, 7, 9, 25] {
        let f = Field::of_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        for n in 1..=5 {
            for _ in 0..50 {
                let a = random_matrix(&f, n, &mut rng);
                let b = random_matrix(&f, n, &mut rng);
                let ab = mat_mul(&f, n, &a, &b);
                assert_eq!(
                    determinant(&f, n, &ab),
                    f.mul(determinant(&f, n, &a), determinant(&f, n, &b))
                );
            }
        }
    }
}

#[test]
fn congruence_preserves_class_and_count() {
    for q in [3u64, 5, 9] {
        let f = Field::of_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7 * q);
        for n in 2..=5 {
            let mut done = 0;
            while done < 20 {
                let form = random_symmetric(&f, n, &mut rng);
                let a = random_matrix(&f, n, &mut rng);
                if form.determinant().is_zero() || determinant(&f, n, &a).is_zero() {
                    continue;
                }
                let image = form.congruent(&a).unwrap();
                let (c0, c1) = (form.classify(), image.classify());
                assert_eq!(c0.kind, c1.kind);
                assert!(f.chi(f.mul(c0.det, c1.det)) == 1);
                let n0 = count_projective_points(&form, DEFAULT_POINT_BOUND)
                    .unwrap()
                    .exhaustive;
                let n1 = count_projective_points(&image, DEFAULT_POINT_BOUND)
                    .unwrap()
                    .exhaustive;
                assert_eq!(n0, n1);
                done += 1;
            }
        }
    }
}
