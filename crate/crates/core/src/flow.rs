//! Integral min-cost flow of a prescribed value.
//!
//! Arcs carry nonnegative integer capacities and costs, and flows are kept
//! as nonnegative per-arc amounts (two-way flow on an arc pair is never
//! needed). The solver is successive shortest paths with node potentials:
//! each phase runs Dijkstra on reduced costs, lifts the potentials, and then
//! saturates the zero-reduced-cost subgraph with a blocking flow, so all
//! shortest augmenting paths of one length are handled in a single phase.
//!
//! [`verify_optimality`] is an independent certificate: a feasible flow is
//! optimal for its value iff its residual graph has no negative cycle.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{narrow, Overflow, MAX_EXACT};

pub type NodeId = usize;
pub type ArcId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub from: NodeId,
    pub to: NodeId,
    pub capacity: u64,
    pub cost: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    node_count: usize,
    source: NodeId,
    sink: NodeId,
    arcs: Vec<Arc>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("no flow of value {requested} exists (maximum flow is {max_flow})")]
    Infeasible { requested: u64, max_flow: u64 },
    #[error("invalid flow: {0}")]
    InvalidFlow(String),
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

impl FlowNetwork {
    pub fn new(node_count: usize, source: NodeId, sink: NodeId) -> Result<Self, FlowError> {
        if source == sink {
            return Err(FlowError::InvalidNetwork("source equals sink".into()));
        }
        if source >= node_count || sink >= node_count {
            return Err(FlowError::InvalidNetwork(format!(
                "terminal out of range for {node_count} nodes"
            )));
        }
        Ok(Self {
            node_count,
            source,
            sink,
            arcs: Vec::new(),
        })
    }

    pub fn add_arc(
        &mut self,
        from: NodeId,
        to: NodeId,
        capacity: u64,
        cost: u64,
    ) -> Result<ArcId, FlowError> {
        if from >= self.node_count || to >= self.node_count {
            return Err(FlowError::InvalidNetwork(format!(
                "arc {from}->{to} references a node outside 0..{}",
                self.node_count
            )));
        }
        if capacity > MAX_EXACT || cost > MAX_EXACT {
            return Err(Overflow.into());
        }
        self.arcs.push(Arc {
            from,
            to,
            capacity,
            cost,
        });
        Ok(self.arcs.len() - 1)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    /// Units on each arc, indexed like [`FlowNetwork::arcs`].
    pub arc_flow: Vec<u64>,
    pub value: u64,
    pub cost: u64,
}

impl Flow {
    /// Net flow entering `node`.
    pub fn inflow(&self, network: &FlowNetwork, node: NodeId) -> u64 {
        network
            .arcs
            .iter()
            .zip(&self.arc_flow)
            .filter(|(a, _)| a.to == node)
            .map(|(_, &f)| f)
            .sum()
    }
}

/// Residual graph: arc `a` becomes edges `2a` (forward) and `2a + 1`
/// (backward).
struct Residual {
    head: Vec<NodeId>,
    cap: Vec<u64>,
    cost: Vec<i128>,
    adjacency: Vec<Vec<usize>>,
}

impl Residual {
    fn new(network: &FlowNetwork) -> Self {
        let edges = network.arcs.len() * 2;
        let mut r = Residual {
            head: Vec::with_capacity(edges),
            cap: Vec::with_capacity(edges),
            cost: Vec::with_capacity(edges),
            adjacency: vec![Vec::new(); network.node_count],
        };
        for (a, arc) in network.arcs.iter().enumerate() {
            r.head.extend([arc.to, arc.from]);
            r.cap.extend([arc.capacity, 0]);
            r.cost.extend([i128::from(arc.cost), -i128::from(arc.cost)]);
            r.adjacency[arc.from].push(2 * a);
            r.adjacency[arc.to].push(2 * a + 1);
        }
        r
    }
}

const UNREACHED: i128 = i128::MAX;

struct Solver<'n> {
    network: &'n FlowNetwork,
    res: Residual,
    potential: Vec<i128>,
    dist: Vec<i128>,
    level: Vec<u32>,
    cursor: Vec<usize>,
}

impl<'n> Solver<'n> {
    fn new(network: &'n FlowNetwork) -> Self {
        let n = network.node_count;
        Solver {
            network,
            res: Residual::new(network),
            potential: vec![0; n],
            dist: vec![UNREACHED; n],
            level: vec![0; n],
            cursor: vec![0; n],
        }
    }

    fn reduced_cost(&self, from: NodeId, edge: usize) -> i128 {
        self.res.cost[edge] + self.potential[from] - self.potential[self.res.head[edge]]
    }

    /// Shortest reduced-cost distances from the source. Ties in the heap
    /// resolve by node index, so the search is deterministic.
    fn dijkstra(&mut self) {
        self.dist.fill(UNREACHED);
        let s = self.network.source;
        self.dist[s] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0i128, s)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > self.dist[u] {
                continue;
            }
            for &e in &self.res.adjacency[u] {
                if self.res.cap[e] == 0 {
                    continue;
                }
                let v = self.res.head[e];
                let nd = d + self.reduced_cost(u, e);
                if nd < self.dist[v] {
                    self.dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
    }

    fn admissible(&self, u: NodeId, e: usize) -> bool {
        self.res.cap[e] > 0 && self.reduced_cost(u, e) == 0
    }

    fn bfs_levels(&mut self) -> bool {
        self.level.fill(u32::MAX);
        let s = self.network.source;
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.res.adjacency[u] {
                let v = self.res.head[e];
                if self.level[v] == u32::MAX && self.admissible(u, e) {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[self.network.sink] != u32::MAX
    }

    fn push(&mut self, u: NodeId, limit: u64) -> u64 {
        if u == self.network.sink {
            return limit;
        }
        while self.cursor[u] < self.res.adjacency[u].len() {
            let e = self.res.adjacency[u][self.cursor[u]];
            let v = self.res.head[e];
            if self.level[v] == self.level[u] + 1 && self.admissible(u, e) {
                let pushed = self.push(v, limit.min(self.res.cap[e]));
                if pushed > 0 {
                    self.res.cap[e] -= pushed;
                    self.res.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            self.cursor[u] += 1;
        }
        0
    }

    /// Max flow (capped at `limit`) through arcs of zero reduced cost.
    fn blocking_flow(&mut self, limit: u64) -> u64 {
        let mut total = 0;
        while total < limit && self.bfs_levels() {
            self.cursor.fill(0);
            loop {
                let pushed = self.push(self.network.source, limit - total);
                if pushed == 0 {
                    break;
                }
                total += pushed;
                if total == limit {
                    break;
                }
            }
        }
        total
    }

    fn run(mut self, target: u64) -> Result<Flow, FlowError> {
        let sink = self.network.sink;
        let mut value = 0u64;
        while value < target {
            self.dijkstra();
            let reach = self.dist[sink];
            if reach == UNREACHED {
                return Err(FlowError::Infeasible {
                    requested: target,
                    max_flow: value,
                });
            }
            for (p, &d) in self.potential.iter_mut().zip(&self.dist) {
                *p += d.min(reach);
            }
            let pushed = self.blocking_flow(target - value);
            debug_assert!(pushed > 0, "shortest path must be admissible");
            value += pushed;
        }
        let arc_flow: Vec<u64> = (0..self.network.arcs.len())
            .map(|a| self.res.cap[2 * a + 1])
            .collect();
        let cost = flow_cost(self.network, &arc_flow)?;
        Ok(Flow {
            arc_flow,
            value,
            cost,
        })
    }
}

fn flow_cost(network: &FlowNetwork, arc_flow: &[u64]) -> Result<u64, Overflow> {
    let total: u128 = network
        .arcs
        .iter()
        .zip(arc_flow)
        .map(|(a, &f)| u128::from(a.cost) * u128::from(f))
        .sum();
    narrow(total)
}

/// Minimum-cost integral flow of exactly `target_value` units from source to
/// sink, or [`FlowError::Infeasible`] when the maximum flow is smaller.
pub fn solve_min_cost_flow(network: &FlowNetwork, target_value: u64) -> Result<Flow, FlowError> {
    Solver::new(network).run(target_value)
}

/// Checks capacity bounds, conservation, and the recorded value and cost.
pub fn check_feasible(network: &FlowNetwork, flow: &Flow) -> Result<(), FlowError> {
    let bad = |msg: String| Err(FlowError::InvalidFlow(msg));
    if flow.arc_flow.len() != network.arcs.len() {
        return bad(format!(
            "{} arc values for {} arcs",
            flow.arc_flow.len(),
            network.arcs.len()
        ));
    }
    let mut balance = vec![0i128; network.node_count];
    for (a, (arc, &f)) in network.arcs.iter().zip(&flow.arc_flow).enumerate() {
        if f > arc.capacity {
            return bad(format!("arc {a} carries {f} > capacity {}", arc.capacity));
        }
        balance[arc.from] -= i128::from(f);
        balance[arc.to] += i128::from(f);
    }
    for (node, &b) in balance.iter().enumerate() {
        if node != network.source && node != network.sink && b != 0 {
            return bad(format!("conservation violated at node {node} (net {b})"));
        }
    }
    if -balance[network.source] != i128::from(flow.value) {
        return bad(format!(
            "recorded value {} but source emits {}",
            flow.value, -balance[network.source]
        ));
    }
    if flow_cost(network, &flow.arc_flow)? != flow.cost {
        return bad("recorded cost does not match arc flows".into());
    }
    Ok(())
}

/// True iff the residual graph of `flow` has no negative-cost cycle, i.e. no
/// cheaper flow of the same value exists. Infeasible flows are rejected.
pub fn verify_optimality(network: &FlowNetwork, flow: &Flow) -> Result<bool, FlowError> {
    check_feasible(network, flow)?;
    let mut edges: Vec<(NodeId, NodeId, i128)> = Vec::new();
    for (arc, &f) in network.arcs.iter().zip(&flow.arc_flow) {
        if f < arc.capacity {
            edges.push((arc.from, arc.to, i128::from(arc.cost)));
        }
        if f > 0 {
            edges.push((arc.to, arc.from, -i128::from(arc.cost)));
        }
    }
    // Bellman-Ford from a virtual root joined to every node at cost 0.
    let mut dist = vec![0i128; network.node_count];
    for _ in 0..network.node_count {
        let mut changed = false;
        for &(u, v, c) in &edges {
            if dist[u] + c < dist[v] {
                dist[v] = dist[u] + c;
                changed = true;
            }
        }
        if !changed {
            return Ok(true);
        }
    }
    Ok(false)
}
