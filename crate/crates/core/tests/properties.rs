use bayes_aggregate::bench::rmse;
use bayes_aggregate::csvio::{dataset_to_csv, read_dataset};
use bayes_aggregate::dirichlet::{log_sum_exp, sample_symmetric_dirichlet, softmax, DirichletHyper};
use bayes_aggregate::pipeline::{split_indices, Dataset};
use bayes_aggregate::rng::seeded;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dirichlet_draws_lie_on_the_simplex(
        alpha in 0.05f64..5.0,
        gamma in 0.0f64..4.0,
        m in 1usize..60,
        seed in any::<u64>(),
    ) {
        let hyper = DirichletHyper::new(alpha, gamma, m).unwrap();
        let w = sample_symmetric_dirichlet(&hyper, &mut seeded(seed));
        let v = w.values();
        prop_assert_eq!(v.len(), m);
        prop_assert!(v.iter().all(|x| (0.0..=1.0).contains(x)));
        prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn softmax_is_shift_invariant(
        logs in prop::collection::vec(-700.0f64..700.0, 1..20),
        shift in -100.0f64..100.0,
    ) {
        let a = softmax(&logs).unwrap();
        let shifted: Vec<f64> = logs.iter().map(|l| l + shift).collect();
        let b = softmax(&shifted).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let lse = log_sum_exp(&logs);
        prop_assert!((log_sum_exp(&shifted) - lse - shift).abs() < 1e-9 * lse.abs().max(1.0));
    }

    #[test]
    fn split_is_a_partition(n in 4usize..500, frac in 0.05f64..0.95, seed in any::<u64>()) {
        let n_train = (frac * n as f64).ceil() as usize;
        match split_indices(n, frac, seed) {
            Ok(s) => {
                prop_assert_eq!(s.train.len(), n_train);
                let mut all: Vec<usize> = s.train.iter().chain(&s.aggregate).copied().collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
                prop_assert_eq!(s, split_indices(n, frac, seed).unwrap());
            }
            Err(_) => prop_assert!(n_train < 2 || n - n_train < 2),
        }
    }

    #[test]
    fn rmse_is_translation_invariant(
        pairs in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..50),
        shift in -1e3f64..1e3,
    ) {
        let (p, t): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let r = rmse(&p, &t).unwrap();
        prop_assert!(r >= 0.0);
        prop_assert_eq!(rmse(&t, &t).unwrap(), 0.0);
        let ps: Vec<f64> = p.iter().map(|v| v + shift).collect();
        let ts: Vec<f64> = t.iter().map(|v| v + shift).collect();
        prop_assert!((rmse(&ps, &ts).unwrap() - r).abs() < 1e-6);
    }

    #[test]
    fn dataset_csv_round_trips(
        d in 1usize..5,
        rows in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 5), 1..30),
    ) {
        let x: Vec<f64> = rows.iter().flat_map(|r| r[..d].to_vec()).collect();
        let y: Vec<f64> = rows.iter().map(|r| r[4]).collect();
        let data = Dataset::new(x, d, y).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        std::fs::write(&path, dataset_to_csv(&data).unwrap()).unwrap();
        prop_assert_eq!(read_dataset(&path).unwrap(), data);
    }
}
