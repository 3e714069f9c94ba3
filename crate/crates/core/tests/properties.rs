//! Property tests for the structural invariants.

use mwl_core::symbolic::{metric_rho, neighbors, Word};
use mwl_core::synthesis::SampledSeries;
use proptest::prelude::*;

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    (0..=max_len).prop_flat_map(|len| {
        (0u64..(1u64 << len)).prop_map(move |v| Word::from_value(v, len).unwrap())
    })
}

proptest! {
    #[test]
    fn metric_is_an_ultrametric(
        a in word_strategy(12),
        b in word_strategy(12),
        c in word_strategy(12),
    ) {
        let ab = metric_rho(&a, &b);
        let ba = metric_rho(&b, &a);
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(ab == 0.0, a == b);
        // Ultrametric inequality on cylinder distances.
        let ac = metric_rho(&a, &c);
        let cb = metric_rho(&c, &b);
        prop_assert!(ab <= ac.max(cb) + 1e-15);
    }

    #[test]
    fn neighbor_symmetry_and_size(w in word_strategy(12)) {
        prop_assume!(w.len() >= 1);
        let ns = neighbors(&w).unwrap();
        prop_assert!(ns.len() <= 3 && ns.contains(&w));
        for u in &ns {
            prop_assert!((u.lambda() - w.lambda()).abs() <= w.interval_len() + 1e-15);
            prop_assert!(neighbors(u).unwrap().contains(&w));
        }
    }

    #[test]
    fn dump_round_trip(
        grid_depth in 1u32..6,
        seed in any::<u64>(),
        raw in proptest::collection::vec(-1e6f64..1e6, 0..64),
    ) {
        let n = (1usize << grid_depth) + 1;
        let samples: Vec<f64> = (0..n).map(|i| raw.get(i % raw.len().max(1)).copied().unwrap_or(0.0)).collect();
        let s = SampledSeries {
            grid_depth,
            truncation_depth: grid_depth,
            seed,
            samples,
            tail_bound: 0.0,
            wavelet: "prop".into(),
            fixture: "prop".into(),
        };
        let mut buf = Vec::new();
        s.write_dump(&mut buf).unwrap();
        let back = SampledSeries::read_dump(&buf[..]).unwrap();
        prop_assert_eq!(back.grid_depth, s.grid_depth);
        prop_assert_eq!(back.seed, s.seed);
        prop_assert_eq!(back.samples, s.samples);
    }

    #[test]
    fn prefix_and_shift_compose(w in word_strategy(16), cut in 0usize..16) {
        prop_assume!(cut <= w.len());
        let p = w.prefix(cut);
        let s = w.shift(cut);
        prop_assert_eq!(p.concat(&s).unwrap(), w);
        // lambda decomposes accordingly.
        let recomposed = p.lambda() + s.lambda() * p.interval_len();
        prop_assert!((recomposed - w.lambda()).abs() < 1e-15);
    }
}
