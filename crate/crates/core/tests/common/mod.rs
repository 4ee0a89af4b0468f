#![allow(dead_code)]

use std::sync::OnceLock;

use walksym_core::graph::{enumerate_connected, Graph};

static CACHE: [OnceLock<Vec<Graph>>; 7] = [const { OnceLock::new() }; 7];

/// All connected isomorphism classes on `n` vertices, computed once per
/// test binary.
pub fn corpus(n: usize) -> &'static [Graph] {
    assert!((1..=7).contains(&n), "corpus covers n = 1..=7");
    CACHE[n - 1].get_or_init(|| enumerate_connected(n).expect("corpus enumeration"))
}

/// All permutations of `0..n` in a deterministic order (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(&mut items, n, &mut out);
    out
}

fn heap(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Builds the graph whose edge set is given by `mask` over the pairs
/// `(0,1),(0,2),(1,2),(0,3),...` in graph6 column order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::new(n).expect("vertex count in range");
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            if mask >> bit & 1 == 1 {
                g.add_edge(i, j).expect("valid pair");
            }
            bit += 1;
        }
    }
    g
}

/// A tiny deterministic generator for test permutations (xorshift64*).
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (self.next() % (i as u64 + 1)) as usize;
            perm.swap(i, j);
        }
        perm
    }
}
