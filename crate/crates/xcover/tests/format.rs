//! Round trips through the text formats.

use proptest::prelude::*;
use xcover::format::{parse_instance, serialize, serialize_with_comments, Instance};
use xcover_core::generate::{random_digraph, random_tree, TreeOrientation};
use xcover_core::{SetCoverInstance, Variant};

fn sets_strategy() -> impl Strategy<Value = SetCoverInstance> {
    (1usize..12).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::btree_set(0..n, 0..=n), 0..10),
            0..=n,
            0u8..3,
        )
            .prop_map(move |(sets, p, v)| {
                let variant = match v {
                    0 => Variant::Plain,
                    1 => Variant::Exact,
                    _ => Variant::Partial(p),
                };
                SetCoverInstance::new(n, sets.into_iter().map(|s| s.into_iter().collect()).collect(), variant).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sets_round_trip(inst in sets_strategy()) {
        let i = Instance::Sets(inst);
        let text = serialize(&i);
        prop_assert_eq!(parse_instance(&text).unwrap(), i.clone());
        // comments are dropped and the output is canonical
        let commented = serialize_with_comments(&i, &["origin x".to_string()]);
        prop_assert_eq!(serialize(&parse_instance(&commented).unwrap()), text);
    }

    #[test]
    fn graphs_round_trip(n in 1usize..15, p in 0.0f64..1.0, undirected: bool, seed: u64) {
        let i = Instance::Graph(random_digraph(n, p, undirected, seed).unwrap());
        prop_assert_eq!(parse_instance(&serialize(&i)).unwrap(), i);
    }

    #[test]
    fn trees_round_trip(k in 1usize..40, o in 0u8..3, seed: u64) {
        let orientation = [TreeOrientation::Undirected, TreeOrientation::Down, TreeOrientation::Random][o as usize];
        let i = Instance::Tree(random_tree(k, orientation, seed).unwrap());
        prop_assert_eq!(parse_instance(&serialize(&i)).unwrap(), i);
    }
}

#[test]
fn shuffled_input_is_canonicalised() {
    let a = parse_instance("p graph 3 2\n2 1\n0 1\n").unwrap();
    assert_eq!(serialize(&a), "p graph 3 2\n0 1\n1 2\n");
    let b = parse_instance("p setcover 4 2\n3   1\nc mid\n0\n").unwrap();
    assert_eq!(serialize(&b), "p setcover 4 2\n0\n1 3\n");
}

#[test]
fn malformed_inputs() {
    for (text, line) in [
        ("p setcover 3\n", 1),
        ("p partialcover 3 1\n0\n", 1),
        ("p digraph 2 1\n0 0\n", 0),
        ("p digraph 2 1\n0 1 1\n", 2),
        ("p tree 2\n0 1 sideways\n", 2),
        ("p tree 3\n0 1\n", 1),
        ("x setcover 1 1\n0\n", 1),
    ] {
        let err = parse_instance(text).unwrap_err().to_string();
        if line > 0 {
            assert!(err.starts_with(&format!("line {line}:")), "{text:?}: {err}");
        }
    }
}
