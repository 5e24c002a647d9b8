use cyclo_core::arith::{primes_up_to, CycloParams};
use cyclo_core::scan::{
    parse_records_csv, records_to_csv, reference_table, scan_prime, scan_prime_exhaustive, scan_range, RecordJson,
};
use cyclo_core::{relative_gcd, ModPoly, StructureRecord};

#[test]
fn csv_round_trip_of_reference() {
    let table = reference_table();
    assert_eq!(parse_records_csv(&records_to_csv(&table)).unwrap(), table);
}

#[test]
fn jsonl_round_trip_of_reference() {
    for r in reference_table() {
        let line = serde_json::to_string(&r.to_json()).unwrap();
        let back: RecordJson = serde_json::from_str(&line).unwrap();
        assert_eq!(StructureRecord::from_json(&back).unwrap(), r);
    }
}

#[test]
fn factor_order_is_irrelevant() {
    let a = parse_records_csv("139,277,2,2,(X+218)^1;(X+191)^1\n").unwrap();
    let b: Vec<_> = reference_table().into_iter().filter(|r| (r.p, r.h) == (139, 277)).collect();
    assert_eq!(a, b);
}

#[test]
fn record_invariants() {
    for r in reference_table() {
        assert_eq!(r.rho, r.factors.total_degree());
        let target = ModPoly::binomial(r.h, ((r.p - 1) / 2) as usize, 1);
        for f in r.factors.factors() {
            let mut g = target.clone();
            for _ in 0..f.mult {
                let (q, rem) = g.div_rem(&f.poly);
                assert!(rem.is_zero(), "p={} h={}", r.p, r.h);
                g = q;
            }
        }
    }
}

#[test]
fn scan_independent_of_seed_and_jobs() {
    let a = scan_range(100, 250, 0, 1).unwrap();
    let b = scan_range(100, 250, 12345, 3).unwrap();
    assert_eq!(a.records, b.records);
    assert!(a.records.windows(2).all(|w| w[0].key() < w[1].key()));
}

#[test]
fn prefilter_matches_exhaustive_scan() {
    for p in [113u64, 131, 149, 157, 191] {
        let params = CycloParams::new(p).unwrap();
        assert_eq!(scan_prime(&params, 3).unwrap(), scan_prime_exhaustive(&params, 3).unwrap(), "p={p}");
    }
}

#[test]
fn gcd_degree_bound_and_divisibility() {
    for p in [23u64, 29, 31, 37] {
        let params = CycloParams::new(p).unwrap();
        let n = ((p - 1) / 2) as usize;
        for h in primes_up_to(p * p).into_iter().skip(1).take(40) {
            let g = relative_gcd(&params, h).unwrap();
            assert!(g.deg() <= n);
            assert!(ModPoly::binomial(h, n, 1).rem(&g).is_zero());
        }
    }
}

#[test]
fn spec_rows() {
    let recs = scan_prime(&CycloParams::new(491).unwrap(), 0).unwrap();
    let r = recs.iter().find(|r| r.h == 491).unwrap();
    assert_eq!(r.to_csv_line(), "491,491,3,2,(X+203)^1;(X+418)^1;(X+419)^1");
}
