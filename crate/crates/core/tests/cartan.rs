use klrtrace_core::cartan::{box_window, cyclicity_check, default_scalars, solve_pivotal, CartanDatum};
use klrtrace_core::{Error, Q};
use proptest::prelude::*;

#[test]
fn type_a_matrices() {
    let d = CartanDatum::type_a(3);
    let expect = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]];
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(d.a(i, j), expect[i][j]);
        }
    }
    for j in 0..3 {
        let a = d.simple_root(j);
        assert_eq!(a.pairings(), &expect[j][..]);
    }
}

#[test]
fn weights() {
    let d = CartanDatum::type_a(2);
    let l = d.dominant(&[1, 1]);
    assert!(l.is_dominant());
    let w = l.shift_root(&d, 0, -1);
    assert_eq!(w.pairings(), &[-1, 2]);
    assert!(!w.is_dominant());
    assert_eq!(w.plus(&d.simple_root(0)), l);
    assert_eq!(l.minus(&l), d.zero_weight());
    assert_eq!(d.root_coords(&l.minus(&w)), Some(vec![1, 0]));
    assert_eq!(d.root_coords(&d.fundamental(0)), None);
}

#[test]
fn default_scalars_are_signed_and_cyclic() {
    for n in 1..=4 {
        let base = CartanDatum::type_a(n);
        for d in [base.clone(), base.reversed()] {
            let q = default_scalars(&d);
            assert!(q.is_signed(&d));
            q.validate(&d).unwrap();
            assert!(cyclicity_check(&d, &q).values().all(|&b| b));
        }
    }
}

#[test]
fn config_files() {
    let (d, q) = CartanDatum::parse_config(r#"{"nodes": ["a", "b"], "edges": [["a", "b"]], "orientation": [["b", "a"]], "t_overrides": [{"i": "a", "j": "b", "t": "3/2"}]}"#).unwrap();
    assert_eq!(d.orientation(), &[(1, 0)]);
    assert_eq!(q.t(0, 1), Q::new(3, 2));
    let (_, q) = CartanDatum::parse_config(r#"{"nodes": ["1", "2"]}"#).unwrap();
    assert_eq!(q.t(0, 1), Q::one());

    let bad = [
        "[1, 2]",
        r#"{"nodes": []}"#,
        r#"{"nodes": ["1", "1"]}"#,
        r#"{"nodes": ["1"], "edges": [["1", "2"]]}"#,
        r#"{"nodes": ["1", "2"], "edges": [["1", "2"], ["2", "1"]]}"#,
        r#"{"nodes": ["1", "2", "3"], "edges": [["1", "2"], ["2", "3"], ["3", "1"]]}"#,
        r#"{"nodes": ["1", "2"], "orientation": [["1", "2"]]}"#,
        r#"{"nodes": ["1", "2"], "t_overrides": [{"i": "1", "j": "2", "t": "2"}]}"#,
        r#"{"nodes": ["1", "2"], "edges": [["1", "2"]], "t_overrides": [{"i": "1", "j": "2", "t": "0"}]}"#,
    ];
    for s in bad {
        let e = CartanDatum::parse_config(s).unwrap_err();
        assert!(matches!(e, Error::Parse(_) | Error::InvalidDatum(_)), "{}: {:?}", s, e);
    }
}

#[test]
fn affine_graphs_are_rejected() {
    let names: Vec<String> = (0..4).map(|k| k.to_string()).collect();
    let cycle = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
    assert!(matches!(CartanDatum::new(names.clone(), cycle), Err(Error::InvalidDatum(_))));
    // D4 is fine, affine D4 is not
    let d4 = vec![(0, 1), (0, 2), (0, 3)];
    assert!(CartanDatum::new(names, d4).is_ok());
    let names: Vec<String> = (0..5).map(|k| k.to_string()).collect();
    assert!(CartanDatum::new(names, vec![(0, 1), (0, 2), (0, 3), (0, 4)]).is_err());
}

#[test]
fn disconnected_window() {
    let d = CartanDatum::type_a(2);
    let q = default_scalars(&d);
    let c = d.zero_weight();
    let window = vec![c.clone(), c.shift_root(&d, 0, 2)];
    assert!(matches!(solve_pivotal(&d, &q, &window), Err(Error::InconsistentWindow(_))));
    // different cosets are solved independently
    let window = vec![c.clone(), d.fundamental(0)];
    let p = solve_pivotal(&d, &q, &window).unwrap();
    assert_eq!(p.cplus(0, &c), Some(&Q::one()));
}

#[test]
fn pivotal_values_along_a_chain() {
    let d = CartanDatum::type_a(2);
    let q = default_scalars(&d);
    let c = d.zero_weight();
    let p = solve_pivotal(&d, &q, &box_window(&d, &c, 2)).unwrap();
    // c^+_{i, c + n α_j} = t_ij^n c^+_{i, c}
    for i in 0..2 {
        for j in 0..2 {
            let at_c = p.cplus(i, &c).unwrap().clone();
            for n in -2i64..=2 {
                let w = c.shift_root(&d, j, n);
                let mut want = at_c.clone();
                for _ in 0..n.abs() {
                    want = if n > 0 { &want * &q.t(i, j) } else { &want / &q.t(i, j) };
                }
                assert_eq!(p.cplus(i, &w), Some(&want));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn any_nonzero_scalars_solve(ts in prop::collection::vec((1i64..6, 1i64..6, any::<bool>()), 4), radius in 1i64..3) {
        let d = CartanDatum::type_a(3);
        let mut q = default_scalars(&d);
        let edges = [(0, 1), (1, 0), (1, 2), (2, 1)];
        for (&(i, j), &(n, m, neg)) in edges.iter().zip(&ts) {
            q.set(i, j, Q::new(if neg { -n } else { n }, m)).unwrap();
        }
        let p = solve_pivotal(&d, &q, &box_window(&d, &d.fundamental(1), radius)).unwrap();
        prop_assert!(p.ratios_hold(&d, &q));
    }

    #[test]
    fn box_window_size(n in 1usize..4, radius in 0i64..3) {
        let d = CartanDatum::type_a(n);
        let w = box_window(&d, &d.zero_weight(), radius);
        prop_assert_eq!(w.len(), ((2 * radius + 1) as usize).pow(n as u32));
        let distinct: std::collections::BTreeSet<_> = w.iter().collect();
        prop_assert_eq!(distinct.len(), w.len());
    }
}
