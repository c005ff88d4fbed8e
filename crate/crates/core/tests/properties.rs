use calmine::ingest::{generate_synthetic, import_ics, parse_canonical, serialize_canonical, IcsMappingPolicy, SyntheticConfig};
use calmine::metrics::{evaluate, Params};
use calmine::oracle::oracle_evaluate;
use calmine::{load_dataset, Interval, MeetingId, Timestamp};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = SyntheticConfig> {
    (2usize..10, 1u32..8, 0.0f64..4.0, 0.0f64..1.0, any::<u64>()).prop_map(|(employees, days, rate, ratio, seed)| {
        SyntheticConfig {
            employee_count: employees,
            day_span: days,
            meetings_per_day_mean: rate,
            optional_ratio: ratio,
            recurrence_ratio: ratio / 2.0,
            delegation_ratio: ratio / 3.0,
            seed,
            ..SyntheticConfig::default()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_round_trip(cfg in config()) {
        let d = generate_synthetic(&cfg).unwrap();
        let text = serialize_canonical(&d);
        prop_assert_eq!(parse_canonical(&text).unwrap(), d);
    }

    #[test]
    fn generated_data_always_loads(cfg in config()) {
        let d = generate_synthetic(&cfg).unwrap();
        let snap = load_dataset(d);
        prop_assert!(snap.is_ok());
    }

    #[test]
    fn ics_import_never_panics(body in "[A-Z:;=\\-\r\n 0-9T]{0,200}") {
        let text = format!("BEGIN:VCALENDAR\r\n{body}\r\nEND:VCALENDAR\r\n");
        let _ = import_ics(&text, &IcsMappingPolicy::default());
    }

    #[test]
    fn overlap_matches_oracle(cfg in config(), a in 1u32..20, b in 1u32..20) {
        let snap = load_dataset(generate_synthetic(&cfg).unwrap()).unwrap();
        let p = Params::new().variant("overlap_minutes").meeting(MeetingId(a)).other_meeting(MeetingId(b));
        prop_assert_eq!(evaluate(&snap, "5.5", &p), oracle_evaluate(&snap, "5.5", &p));
    }

    #[test]
    fn interval_text_round_trips(start in 0i64..100_000, len in 0i64..100_000) {
        let base: Timestamp = "2015-01-01T00:00".parse().unwrap();
        let iv = Interval::new(base.plus_minutes(start), base.plus_minutes(start + len));
        prop_assert_eq!(iv.to_string().parse::<Interval>().unwrap(), iv);
    }
}
