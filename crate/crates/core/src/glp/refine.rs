//! Automorphisms of the Gram matrix by individualization and refinement.
//!
//! The first path of the search tree fixes a base `b_0, b_1, ...`. Levels are
//! then processed deepest first: at level `i`, every `y` in the target cell that
//! is not already in the orbit of `b_i` (under the generators found so far, all
//! of which fix `b_0..b_{i-1}`) gets a subtree search for an automorphism mapping
//! the first leaf onto a leaf below `y`. Refinement is isomorphism-invariant, so
//! such a leaf exists whenever `y` lies in the true orbit. The basic orbits come
//! out complete, and the group order is their product.

use std::collections::HashSet;

use num_bigint::BigUint;

use super::{AutSearchResult, SearchMethod};
use crate::error::{Error, Result};
use crate::group::{point_orbit, PermGroup};
use crate::model::{gram_projection, GramProjection};
use crate::perm::Permutation;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

type Cells = Vec<Vec<usize>>;

/// Per cell: size and the (shared) count vector of its members.
type Trace = Vec<(usize, Vec<u32>)>;

struct Refiner {
    n: usize,
    n_colors: usize,
    color: Vec<u8>,
}

impl Refiner {
    fn new(gram: &GramProjection) -> Self {
        let values = gram.distinct_values();
        let n = gram.degree();
        let mut color = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                color[i * n + j] = values.binary_search(&gram.entry(i, j)).unwrap() as u8;
            }
        }
        Refiner {
            n,
            n_colors: values.len(),
            color,
        }
    }

    /// Splits cells by how many neighbours of each color a vertex has in each
    /// cell, until the partition is equitable.
    fn refine(&self, mut cells: Cells) -> (Cells, Trace) {
        let n = self.n;
        let mut cell_of = vec![0usize; n];
        loop {
            for (ci, c) in cells.iter().enumerate() {
                for &v in c {
                    cell_of[v] = ci;
                }
            }
            let width = cells.len() * self.n_colors;
            let mut keys = vec![0u32; n * width];
            for v in 0..n {
                let row = &self.color[v * n..(v + 1) * n];
                let key = &mut keys[v * width..(v + 1) * width];
                for (w, &c) in row.iter().enumerate() {
                    key[cell_of[w] * self.n_colors + c as usize] += 1;
                }
            }
            let key = |v: usize| &keys[v * width..(v + 1) * width];

            let mut next: Cells = Vec::with_capacity(cells.len());
            for c in &cells {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut sorted = c.clone();
                sorted.sort_by(|&a, &b| key(a).cmp(key(b)).then(a.cmp(&b)));
                let mut start = 0;
                for i in 1..=sorted.len() {
                    if i == sorted.len() || key(sorted[i]) != key(sorted[start]) {
                        next.push(sorted[start..i].to_vec());
                        start = i;
                    }
                }
            }
            if next.len() == cells.len() {
                let trace = cells.iter().map(|c| (c.len(), key(c[0]).to_vec())).collect();
                return (cells, trace);
            }
            cells = next;
        }
    }
}

fn individualize(cells: &Cells, target: usize, v: usize) -> Cells {
    let mut out = Vec::with_capacity(cells.len() + 1);
    out.extend_from_slice(&cells[..target]);
    out.push(vec![v]);
    out.push(cells[target].iter().copied().filter(|&w| w != v).collect());
    out.extend_from_slice(&cells[target + 1..]);
    out
}

/// First smallest non-singleton cell.
fn target_cell(cells: &Cells) -> Option<usize> {
    cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i)
}

struct PathNode {
    cells: Cells,
    trace: Trace,
    target: usize,
}

struct Search<'a> {
    gram: &'a GramProjection,
    refiner: Refiner,
    path: Vec<PathNode>,
    leaf: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn tick(&mut self, found: &[Permutation]) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            let partial = PermGroup::new(self.gram.degree(), found.to_vec())?.order();
            return Err(Error::resource(format!(
                "node budget {} exhausted after finding {} generators (subgroup order >= {partial})",
                self.budget,
                found.len()
            )));
        }
        Ok(())
    }

    /// Looks for an automorphism onto a leaf below `cells` (unrefined, at `depth`).
    fn descend(&mut self, cells: Cells, depth: usize, found: &[Permutation]) -> Result<Option<Permutation>> {
        self.tick(found)?;
        let (cells, trace) = self.refiner.refine(cells);
        if trace != self.path[depth].trace {
            return Ok(None);
        }
        if depth + 1 == self.path.len() {
            let mut image = vec![0u32; self.leaf.len()];
            for (pos, &v) in self.leaf.iter().enumerate() {
                image[v] = cells[pos][0] as u32;
            }
            let g = Permutation::from_images(image)?;
            return Ok(self.gram.preserved_by(&g)?.then_some(g));
        }
        let target = self.path[depth].target;
        let mut branch = cells[target].clone();
        branch.sort_unstable();
        for z in branch {
            if let Some(g) = self.descend(individualize(&cells, target, z), depth + 1, found)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

pub fn refine_automorphisms(k: usize, t: usize) -> Result<AutSearchResult> {
    refine_automorphisms_with_budget(k, t, DEFAULT_NODE_BUDGET)
}

pub fn refine_automorphisms_with_budget(k: usize, t: usize, budget: u64) -> Result<AutSearchResult> {
    let gram = gram_projection(k, t)?;
    let n = gram.degree();
    let refiner = Refiner::new(&gram);

    let mut path = Vec::new();
    let (mut cells, mut trace) = refiner.refine(vec![(0..n).collect()]);
    let mut base = Vec::new();
    while let Some(target) = target_cell(&cells) {
        let b = *cells[target].iter().min().unwrap();
        base.push(b);
        let next = individualize(&cells, target, b);
        path.push(PathNode { cells, trace, target });
        (cells, trace) = refiner.refine(next);
    }
    let leaf = cells.iter().map(|c| c[0]).collect();
    path.push(PathNode {
        cells,
        trace,
        target: usize::MAX,
    });

    let mut search = Search {
        gram: &gram,
        refiner,
        path,
        leaf,
        nodes: 1,
        budget,
    };
    let mut generators: Vec<Permutation> = Vec::new();
    let mut orbit_product = BigUint::from(1u32);
    for level in (0..base.len()).rev() {
        let b = base[level];
        let node = &search.path[level];
        let target = node.target;
        let parent = node.cells.clone();
        let mut candidates = parent[target].clone();
        candidates.sort_unstable();
        let mut orbit: HashSet<usize> = point_orbit(&generators, b).into_iter().collect();
        for y in candidates {
            if orbit.contains(&y) {
                continue;
            }
            let child = individualize(&parent, target, y);
            if let Some(g) = search.descend(child, level + 1, &generators)? {
                debug_assert_eq!(g.apply(b), y);
                generators.push(g);
                orbit = point_orbit(&generators, b).into_iter().collect();
            }
        }
        orbit_product *= BigUint::from(orbit.len());
    }

    let order = PermGroup::new(n, generators.clone())?.order();
    if order != orbit_product {
        return Err(Error::Internal(format!(
            "chain order {order} differs from basic-orbit product {orbit_product}"
        )));
    }
    Ok(AutSearchResult {
        k,
        t,
        order,
        generators,
        method: SearchMethod::Refine,
        node_count: search.nodes,
    })
}
