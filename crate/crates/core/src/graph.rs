//! Small graph routines over adjacency lists with labelled edges.
//!
//! Nodes are dense indices `0..adj.len()`; an edge is `(label, target)`.

use std::collections::VecDeque;

/// Strongly connected component id of every node (Tarjan, iterative).
///
/// Component ids are assigned in reverse topological order of the
/// condensation, as Tarjan's algorithm produces them.
pub fn scc_ids<E>(adj: &[Vec<(E, usize)>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut next_comp = 0usize;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut calls: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(frame) = calls.last_mut() {
            let v = frame.0;
            if frame.1 < adj[v].len() {
                let w = adj[v][frame.1].1;
                frame.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                calls.pop();
                if let Some(parent) = calls.last() {
                    low[parent.0] = low[parent.0].min(low[v]);
                }
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Finds some directed cycle, returned as its first node and the edges
/// walked until the walk is back at that node.
pub fn find_cycle<E: Copy>(adj: &[Vec<(E, usize)>]) -> Option<(usize, Vec<(E, usize)>)> {
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        White,
        Grey,
        Black,
    }
    let n = adj.len();
    let mut colour = vec![Colour::White; n];
    for root in 0..n {
        if colour[root] != Colour::White {
            continue;
        }
        // Each frame: node, next edge position, edge used to enter the node.
        let mut calls: Vec<(usize, usize, Option<E>)> = vec![(root, 0, None)];
        colour[root] = Colour::Grey;
        while let Some(frame) = calls.last_mut() {
            let v = frame.0;
            if frame.1 < adj[v].len() {
                let (label, w) = adj[v][frame.1];
                frame.1 += 1;
                match colour[w] {
                    Colour::White => {
                        colour[w] = Colour::Grey;
                        calls.push((w, 0, Some(label)));
                    }
                    Colour::Grey => {
                        let from = calls.iter().position(|f| f.0 == w).expect("grey node is on the stack");
                        let mut steps: Vec<(E, usize)> = calls[from + 1..]
                            .iter()
                            .map(|f| (f.2.expect("non-root frame has an entry edge"), f.0))
                            .collect();
                        steps.push((label, w));
                        return Some((w, steps));
                    }
                    Colour::Black => {}
                }
            } else {
                colour[v] = Colour::Black;
                calls.pop();
            }
        }
    }
    None
}

/// Breadth-first search from `from` to the first node satisfying `goal`,
/// returning the edges of a shortest path. The start node itself counts.
pub fn shortest_path<E: Copy>(
    adj: &[Vec<(E, usize)>],
    from: usize,
    goal: impl Fn(usize) -> bool,
) -> Option<Vec<(E, usize)>> {
    let mut parent: Vec<Option<(usize, E)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            let mut steps = Vec::new();
            let mut cur = v;
            while let Some((p, label)) = parent[cur] {
                steps.push((label, cur));
                cur = p;
            }
            steps.reverse();
            return Some(steps);
        }
        for &(label, w) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, label));
                queue.push_back(w);
            }
        }
    }
    None
}
