//! Property tests for corpus ingestion: stats identities, serialization
//! round-trips, and permutation stability of the grouping.

use std::collections::BTreeMap;

use botscope_core::corpus::{
    collection_window, format_record, group_by_account, parse_lines, parse_record,
    AccountProfile, Label, OriginalRef, ParserOptions, TweetRecord,
};
use proptest::prelude::*;

fn arb_text() -> impl Strategy<Value = String> {
    // Includes whitespace, accents, and URL-ish fragments.
    proptest::string::string_regex("[ a-zA-Záéíóúñ¿¡#@:/.0-9]{0,60}").unwrap()
}

prop_compose! {
    fn arb_record(index: usize)(
        author_id in 1u64..50,
        created_at in 1_400_000_000i64..1_500_000_000,
        text in arb_text(),
        retweet in proptest::option::of((1u64..1000, 1u64..50, 0i64..1_400_000_000)),
    ) -> TweetRecord {
        TweetRecord {
            tweet_id: index as u64 + 1,
            author_id,
            created_at,
            text,
            retweet_of: retweet.map(|(id, author, at)| OriginalRef {
                original_tweet_id: id,
                original_author_id: author,
                original_created_at: at,
            }),
        }
    }
}

fn arb_records(max: usize) -> impl Strategy<Value = Vec<TweetRecord>> {
    (0..max).prop_flat_map(|n| {
        (0..n)
            .map(arb_record)
            .collect::<Vec<_>>()
    })
}

fn profile_for(record: &TweetRecord) -> AccountProfile {
    AccountProfile {
        account_id: record.author_id,
        followers_count: record.author_id * 3,
        friends_count: record.author_id + 7,
        statuses_count: 1000,
        account_created_at: 1_300_000_000,
        label: Label::Unknown,
        sub_scores: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn roundtrip_is_bit_exact(records in arb_records(20)) {
        for record in &records {
            let profile = profile_for(record);
            let line = format_record(record, &profile);
            let (back, back_profile) = parse_record(&line).unwrap();
            prop_assert_eq!(&back, record);
            prop_assert_eq!(&back_profile, &profile);
        }
    }

    #[test]
    fn stats_identities_hold(records in arb_records(30)) {
        let lines: Vec<String> = records
            .iter()
            .map(|r| format_record(r, &profile_for(r)))
            .collect();
        let corpus = parse_lines(lines.iter(), &ParserOptions::default());
        prop_assert_eq!(corpus.stats.tweets as usize, corpus.records.len());
        let retweets = corpus.records.iter().filter(|r| r.is_retweet()).count();
        prop_assert_eq!(corpus.stats.retweets as usize, retweets);
        let grouped = group_by_account(&corpus.records);
        let total: usize = grouped.values().map(|g| g.len()).sum();
        prop_assert_eq!(total as u64, corpus.stats.tweets);
        prop_assert_eq!(grouped.len() as u64, corpus.stats.accounts);
    }

    #[test]
    fn grouping_is_permutation_stable(
        records in arb_records(25).prop_filter("nonempty", |r| !r.is_empty()),
        seed in any::<u64>(),
    ) {
        let mut shuffled = records.clone();
        // Deterministic Fisher-Yates from the seed.
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            shuffled.swap(i, j);
        }
        let original: BTreeMap<_, Vec<u64>> = group_by_account(&records)
            .into_iter()
            .map(|(k, v)| (k, v.iter().map(|r| r.tweet_id).collect()))
            .collect();
        let permuted: BTreeMap<_, Vec<u64>> = group_by_account(&shuffled)
            .into_iter()
            .map(|(k, v)| (k, v.iter().map(|r| r.tweet_id).collect()))
            .collect();
        prop_assert_eq!(original, permuted);
    }

    #[test]
    fn window_bounds_every_record(
        records in arb_records(25).prop_filter("nonempty", |r| !r.is_empty()),
    ) {
        let window = collection_window(&records).unwrap();
        prop_assert!(window.start < window.end);
        for r in &records {
            prop_assert!(r.created_at >= window.start);
            prop_assert!(r.created_at <= window.end);
        }
    }
}
