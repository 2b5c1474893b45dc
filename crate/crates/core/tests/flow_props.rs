use briberon_core::flow::{check_feasible, solve_min_cost_flow, verify_optimality, FlowError, FlowNetwork};
use proptest::prelude::*;

fn network() -> impl Strategy<Value = FlowNetwork> {
    (3usize..=50).prop_flat_map(|nodes| {
        prop::collection::vec((0..nodes, 0..nodes, 0u64..=20, 0u64..=50), 0..=4 * nodes).prop_map(
            move |arcs| {
                let mut net = FlowNetwork::new(nodes, 0, nodes - 1).unwrap();
                for (from, to, cap, cost) in arcs {
                    if from != to {
                        net.add_arc(from, to, cap, cost).unwrap();
                    }
                }
                net
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn solutions_carry_certificates(net in network(), want in 0u64..=60) {
        match solve_min_cost_flow(&net, want) {
            Ok(flow) => {
                prop_assert_eq!(flow.value, want);
                check_feasible(&net, &flow).unwrap();
                prop_assert!(verify_optimality(&net, &flow).unwrap());
            }
            Err(FlowError::Infeasible { max_flow, .. }) => {
                prop_assert!(max_flow < want);
                let flow = solve_min_cost_flow(&net, max_flow).unwrap();
                prop_assert!(verify_optimality(&net, &flow).unwrap());
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }
}
