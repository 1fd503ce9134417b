use perfect_codes::linalg::hamming_code;
use perfect_codes::mixed::*;

#[test]
fn hamming15_compressions() {
    let h = hamming_code(4).unwrap();
    assert!(disjoint_kernel_triples(&h, 6).unwrap().is_empty());
    for t in 1..=5 {
        let sets = disjoint_kernel_triples(&h, t).unwrap();
        assert!(!sets.is_empty(), "t={t}");
        // a spread sample keeps the test short; every set is checked at t = 5
        let step = if t == 5 { 1 } else { sets.len() / 8 + 1 };
        let mut forms = Vec::new();
        for set in sets.iter().step_by(step) {
            let m = quaternary_compress(&h, set).unwrap();
            assert_eq!(m.len(), 2048 >> t);
            assert!(mixed_is_perfect(&m));
            assert_eq!(quaternary_decompress(&m, set, 15).unwrap(), h);
            if t == 5 {
                forms.push(mixed_canonical_form(&m).unwrap());
            }
        }
        if t == 5 {
            assert_eq!(sets.len(), 56);
            forms.dedup();
            assert_eq!(forms.len(), 1);
        }
    }
    let set = &disjoint_kernel_triples(&h, 1).unwrap()[0];
    let m = quaternary_compress(&h, set).unwrap();
    assert_eq!(m.alphabet().notation(), "F4^1F2^12");
    let fewer = MixedCode::new(m.alphabet().clone(), m.words()[1..].to_vec()).unwrap();
    assert!(!mixed_is_perfect(&fewer));
}

#[test]
fn f8_classification() {
    let t = std::time::Instant::now();
    let codes = f8_codes_from_partitions().unwrap();
    eprintln!("{} partitions in {:?}", codes.len(), t.elapsed());
    for m in &codes {
        assert_eq!(m.len(), 128);
        assert!(mixed_is_perfect(m));
        let tail = m.binary_tail().unwrap();
        assert_eq!(tail.len(), 128);
        assert!(tail.words().iter().all(|w| w.count_ones() % 2 == 0));
        for d in 0..8 {
            let part = m.shorten(1, d).unwrap();
            assert_eq!(part.len(), 16);
            assert_eq!(part.min_distance(), Some(4));
        }
    }
    let classes = mixed_classes(&codes).unwrap();
    eprintln!("classes in {:?}", t.elapsed());
    let mut orders: Vec<u128> = classes
        .iter()
        .map(|c| c.aut_order.to_u128().unwrap())
        .collect();
    orders.sort_unstable();
    assert_eq!(
        orders,
        vec![768, 1024, 1024, 1024, 2688, 3072, 6144, 8192, 12288, 172032]
    );
}

#[test]
fn f8_all_first_parts() {
    let all = f8_codes_from_all_partitions().unwrap();
    let fixed = f8_codes_from_partitions().unwrap();
    assert_eq!(all.len(), 30 * fixed.len());
}
