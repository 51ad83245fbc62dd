mod common;

use std::collections::BTreeMap;
use std::time::Duration;

use common::{dead_url, isomorphic, synthetic_graph, Format, MockConfig, MockEndpoint};
use proptest::prelude::*;
use rdfval_core::packs::{load_pack, Vocabulary};
use rdfval_core::rdf::{parse_ntriples_str, Graph};
use rdfval_harvest::{default_classes, harvest_with, profile, HarvestOptions, HarvestStatus, Method, Source};

fn fast() -> HarvestOptions {
    HarvestOptions { backoff_base: Duration::from_millis(5), backoff_factor: 2 }
}

fn source(url: &str, page_size: usize) -> Source {
    Source::new("MOCK", url).unwrap().with_page_size(page_size).with_timeout(Duration::from_secs(5))
}

#[test]
fn paged_harvest_equals_the_served_graph() {
    let g = synthetic_graph(60);
    assert_eq!(g.len(), 60);
    for page_size in [1, 7, 10_000] {
        let mock = MockEndpoint::start(&g, MockConfig::default());
        let r = harvest_with(&source(&mock.url, page_size), &fast());
        assert_eq!(r.status, HarvestStatus::Complete, "page size {page_size}");
        assert_eq!(r.triple_count, 60);
        assert!(isomorphic(&r.graph, &g), "page size {page_size}");
        assert_eq!(mock.requests(), 60 / page_size + 1);
        assert!(r.pages.last().unwrap().rows.unwrap() < page_size);
    }
}

#[test]
fn twenty_five_thousand_triples_in_three_pages() {
    let g = synthetic_graph(25_000);
    let mock = MockEndpoint::start(&g, MockConfig::default());
    let r = harvest_with(&source(&mock.url, 10_000), &fast());
    assert_eq!(r.status, HarvestStatus::Complete);
    assert_eq!((r.requests(), r.triple_count), (3, 25_000));
    let offsets: Vec<usize> = r.pages.iter().map(|p| p.offset).collect();
    assert_eq!(offsets, [0, 10_000, 20_000]);
}

#[test]
fn xml_results_are_understood() {
    let g = synthetic_graph(30);
    let mock = MockEndpoint::start(&g, MockConfig { format: Format::Xml, ..Default::default() });
    let r = harvest_with(&source(&mock.url, 7), &fast());
    assert_eq!(r.status, HarvestStatus::Complete);
    assert!(isomorphic(&r.graph, &g));
}

#[test]
fn persistent_page_two_failure_is_partial_after_one_page() {
    let g = synthetic_graph(30);
    let cfg = MockConfig { failures: BTreeMap::from([(1, u32::MAX)]), ..Default::default() };
    let mock = MockEndpoint::start(&g, cfg);
    let r = harvest_with(&source(&mock.url, 10), &fast());
    assert_eq!(r.status, HarvestStatus::Partial { pages: 1, reason: "http-500".into() });
    assert_eq!(r.status.to_string(), "partial(1, http-500)");
    assert_eq!(r.triple_count, 10);
    let page2 = &r.pages[1];
    assert_eq!(page2.requests, 4);
    assert_eq!(page2.delays, [5, 10, 20].map(Duration::from_millis));
    assert_eq!(mock.requests(), 5);
}

#[test]
fn unreachable_host_is_unavailable() {
    let r = harvest_with(&source(&dead_url(), 10).with_max_retries(2), &fast());
    assert_eq!(r.status, HarvestStatus::Unavailable { reason: "connection-error".into() });
    assert_eq!(r.status.to_string(), "unavailable(connection-error)");
    assert_eq!((r.triple_count, r.requests()), (0, 3));
}

#[test]
fn first_page_failure_is_unavailable_even_when_the_host_answers() {
    let g = synthetic_graph(5);
    let mock = MockEndpoint::start(&g, MockConfig { failures: BTreeMap::from([(0, u32::MAX)]), fail_status: 503, ..Default::default() });
    let r = harvest_with(&source(&mock.url, 10).with_max_retries(1), &fast());
    assert_eq!(r.status, HarvestStatus::Unavailable { reason: "http-503".into() });
}

#[test]
fn transient_failures_are_retried() {
    let g = synthetic_graph(30);
    let cfg = MockConfig { failures: BTreeMap::from([(0, 1), (2, 3)]), ..Default::default() };
    let mock = MockEndpoint::start(&g, cfg);
    let r = harvest_with(&source(&mock.url, 10), &fast());
    assert_eq!(r.status, HarvestStatus::Complete);
    assert!(isomorphic(&r.graph, &g));
    let retries: Vec<usize> = r.pages.iter().map(|p| p.retries()).collect();
    assert_eq!(retries, [1, 0, 3, 0]);
}

#[test]
fn get_rejected_falls_back_to_post() {
    let g = synthetic_graph(20);
    let mock = MockEndpoint::start(&g, MockConfig { reject_get: true, ..Default::default() });
    let r = harvest_with(&source(&mock.url, 7), &fast());
    assert_eq!(r.status, HarvestStatus::Complete);
    assert!(isomorphic(&r.graph, &g));
    let methods: Vec<String> = mock.log.lock().unwrap().iter().map(|l| l.method.clone()).collect();
    assert_eq!(methods, ["GET", "POST", "POST", "POST"]);
    assert!(r.pages.iter().all(|p| p.method == Method::Post));
}

#[test]
fn long_queries_go_by_post() {
    let g = synthetic_graph(3);
    let mock = MockEndpoint::start(&g, MockConfig::default());
    let long = format!("{}?pad={}", mock.url, "x".repeat(2100));
    let r = harvest_with(&source(&long, 10), &fast());
    assert_eq!(r.status, HarvestStatus::Complete);
    assert_eq!(mock.log.lock().unwrap()[0].method, "POST");
}

#[test]
fn endpoint_ignoring_offset_stops() {
    let g = synthetic_graph(30);
    let mock = MockEndpoint::start(&g, MockConfig { ignore_offset: true, ..Default::default() });
    let r = harvest_with(&source(&mock.url, 10), &fast());
    assert_eq!(r.status, HarvestStatus::Partial { pages: 2, reason: "endpoint ignores OFFSET".into() });
    assert_eq!(r.triple_count, 10);
}

#[test]
fn slow_endpoint_times_out() {
    let g = synthetic_graph(3);
    let mock = MockEndpoint::start(&g, MockConfig { delay: Duration::from_millis(600), ..Default::default() });
    let s = source(&mock.url, 10).with_timeout(Duration::from_millis(150)).with_max_retries(0);
    let r = harvest_with(&s, &fast());
    assert_eq!(r.status, HarvestStatus::Unavailable { reason: "timeout".into() });
}

fn missy() -> Graph {
    let pack = load_pack(Vocabulary::DdiRdf);
    pack.fixture("missy").unwrap().graph()
}

#[test]
fn missy_profile() {
    let row = profile(&missy(), &default_classes(Vocabulary::DdiRdf)[..4]);
    let counts: Vec<usize> = row.classes.iter().map(|c| c.instances).collect();
    assert_eq!(counts, [6, 45, 159, 1_125]);
    assert_eq!(row.count("http://rdf-vocabulary.ddialliance.org/discovery#Study"), Some(45));
}

#[test]
fn harvested_missy_profiles_the_same() {
    let g = missy();
    let mock = MockEndpoint::start(&g, MockConfig::default());
    let r = harvest_with(&source(&mock.url, 1_000), &fast());
    assert_eq!(r.status, HarvestStatus::Complete);
    let classes = default_classes(Vocabulary::DdiRdf);
    assert_eq!(profile(&r.graph, &classes), profile(&g, &classes));
}

#[test]
fn profile_edge_cases() {
    let classes = ["http://ex/A", "http://ex/B"];
    let empty = profile(&Graph::empty(), &classes);
    assert_eq!(empty.triples, 0);
    assert!(empty.classes.iter().all(|c| c.instances == 0));

    let g = parse_ntriples_str(
        "<http://ex/x> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex/A> .\n\
         <http://ex/x> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex/B> .\n\
         <http://ex/y> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex/A> .\n\
         <http://ex/y> <http://ex/p> <http://ex/A> .\n",
    )
    .unwrap();
    let row = profile(&g, &classes);
    assert_eq!((row.triples, row.count("http://ex/A"), row.count("http://ex/B")), (4, Some(2), Some(1)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn paging_never_changes_the_graph(n in 0usize..45, page_seed in any::<usize>(), xml in any::<bool>()) {
        let g = synthetic_graph(n);
        let page_size = 1 + page_seed % (n + 1);
        let format = if xml { Format::Xml } else { Format::Json };
        let mock = MockEndpoint::start(&g, MockConfig { format, ..Default::default() });
        let r = harvest_with(&source(&mock.url, page_size), &fast());
        prop_assert_eq!(&r.status, &HarvestStatus::Complete);
        prop_assert!(isomorphic(&r.graph, &g));
        prop_assert_eq!(r.requests() as usize, n / page_size + 1);
    }

    #[test]
    fn retries_are_bounded_and_backoff_grows(
        max_retries in 0u32..4,
        failures in prop::collection::vec(0u32..6, 4),
    ) {
        let g = synthetic_graph(30);
        let plan: BTreeMap<usize, u32> = failures.iter().copied().enumerate().collect();
        let mock = MockEndpoint::start(&g, MockConfig { failures: plan, ..Default::default() });
        let opts = HarvestOptions { backoff_base: Duration::from_millis(1), backoff_factor: 2 };
        let r = harvest_with(&source(&mock.url, 10).with_max_retries(max_retries), &opts);
        for p in &r.pages {
            prop_assert!(p.retries() <= max_retries as usize);
            prop_assert!(p.delays.windows(2).all(|w| w[0] <= w[1]));
        }
        let first_bad = failures.iter().position(|&f| f > max_retries);
        match first_bad {
            None => prop_assert_eq!(r.status, HarvestStatus::Complete),
            Some(0) => prop_assert!(r.status.is_unavailable()),
            Some(k) => prop_assert_eq!(r.status, HarvestStatus::Partial { pages: k, reason: "http-500".into() }),
        }
    }
}

#[test]
fn backoff_sequences_are_non_decreasing() {
    for base_ms in [0, 1, 250, 1000] {
        for factor in [1, 2, 3] {
            let opts = HarvestOptions { backoff_base: Duration::from_millis(base_ms), backoff_factor: factor };
            let d = opts.backoff_delays(6);
            assert_eq!(d.len(), 6);
            assert!(d.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
