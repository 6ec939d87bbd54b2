use assort_core::assortment::Combinations;
use assort_core::dataset::write_dataset_to;
use assort_core::{
    expected_revenue, generate_dataset, generate_instance, read_dataset, write_dataset, Assortment,
    AssortmentMode, FMode, GenSpec,
};

fn bytes(ds: &assort_core::LabeledDataset) -> Vec<u8> {
    let mut buf = Vec::new();
    write_dataset_to(ds, &mut buf).unwrap();
    buf
}

#[test]
fn same_inputs_same_bytes() {
    let spec = GenSpec {
        n: 3,
        m: 2,
        mode: AssortmentMode::PerSegment,
        ..GenSpec::default()
    };
    let a = generate_dataset(&spec, 80, 2024).unwrap();
    let b = generate_dataset(&spec, 80, 2024).unwrap();
    assert_eq!(bytes(&a), bytes(&b));
    let c = generate_dataset(&spec, 80, 2025).unwrap();
    assert_ne!(bytes(&a), bytes(&c));
}

#[test]
fn thread_count_does_not_matter() {
    let spec = GenSpec {
        n: 5,
        k: 2,
        ..GenSpec::default()
    };
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| generate_dataset(&spec, 120, 7).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| generate_dataset(&spec, 120, 7).unwrap());
    assert_eq!(bytes(&single), bytes(&many));
}

#[test]
fn labels_are_optimal_by_brute_force() {
    for (n, m, k, mode) in [
        (2, 1, 1, AssortmentMode::Shared),
        (5, 1, 3, AssortmentMode::Shared),
        (3, 2, 2, AssortmentMode::Shared),
        (2, 2, 1, AssortmentMode::PerSegment),
    ] {
        let spec = GenSpec {
            n,
            m,
            k,
            mode,
            ..GenSpec::default()
        };
        let ds = generate_dataset(&spec, 60, 31).unwrap();
        for r in &ds.records {
            let stored = expected_revenue(&r.instance, &r.label, &r.q).unwrap();
            assert!((stored - r.r_a).abs() <= 1e-12);
            let candidates: Vec<Assortment> = match mode {
                AssortmentMode::Shared => Combinations::new(n, k)
                    .map(|s| Assortment::shared(s, m).unwrap())
                    .collect(),
                AssortmentMode::PerSegment => {
                    let subsets: Vec<_> = Combinations::new(n, k).collect();
                    subsets
                        .iter()
                        .flat_map(|a| {
                            subsets
                                .iter()
                                .map(move |b| Assortment::new(vec![a.clone(), b.clone()]).unwrap())
                        })
                        .collect()
                }
            };
            let best = candidates
                .iter()
                .map(|g| expected_revenue(&r.instance, g, &r.q).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((best - r.r_a).abs() <= 1e-12, "record {} not optimal", r.idx);
        }
    }
}

#[test]
fn parameter_ranges_and_means() {
    let spec = GenSpec {
        n: 3,
        m: 2,
        ..GenSpec::default()
    };
    let ds = generate_dataset(&spec, 500, 11).unwrap();
    let mut y_sum = 0.0;
    let mut y_count = 0usize;
    for r in &ds.records {
        let inst = &r.instance;
        for &v in inst.y().as_slice().iter().chain(inst.alpha().as_slice()) {
            assert!((0.0..=50.0).contains(&v));
        }
        for &f in inst.funding_gap() {
            assert!((0.0..=50.0).contains(&f));
        }
        let total: f64 = inst.lambda().iter().sum();
        assert!((total - 1.0).abs() <= 1e-12);
        assert!(inst.lambda().iter().all(|&l| l >= 0.0));
        y_sum += inst.y().as_slice().iter().sum::<f64>();
        y_count += inst.y().as_slice().len();
    }
    let mean = y_sum / y_count as f64;
    assert!((mean - 25.0).abs() <= 2.5, "mean y = {mean}");
}

#[test]
fn dollar_scale_instances() {
    let spec = GenSpec {
        f_mode: FMode::DollarScale,
        ..GenSpec::default()
    };
    let inst = generate_instance(&spec, 3).unwrap();
    assert!(inst.funding_gap().iter().all(|f| f.fract() == 0.0 && *f >= 1.0));
    // with gaps in the thousands nearly nobody backs anything
    let ds = generate_dataset(&spec, 50, 3).unwrap();
    assert!(ds.records.iter().filter(|r| r.r_a < 1e-6).count() > 40);
}

#[test]
fn case_one_shaped_file() {
    let ds = generate_dataset(&GenSpec::default(), 500, 1).unwrap();
    assert_eq!(ds.records.len() + ds.excluded.len(), 500);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("case1.jsonl");
    write_dataset(&ds, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + ds.records.len());
    let header: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(header["format_version"], 1);
    assert_eq!(header["count"], 500);
    assert_eq!(header["spec"]["M"], 50.0);
    assert_eq!(read_dataset(&path).unwrap(), ds);
    let max = ds.records.iter().map(|r| r.r_a).fold(0.0, f64::max);
    assert!(max <= 0.44 + 1e-12);
}
