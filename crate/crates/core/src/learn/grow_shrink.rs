use std::collections::BTreeSet;

use super::citest::{dependent, CiTestKind};
use super::dataset::CategoricalDataset;
use crate::error::Result;
use crate::graph::Dag;

/// Grow-Shrink settings. `max_cond` caps the size of the conditioning
/// subsets searched when separating neighbours and detecting colliders; the
/// grow and shrink phases always condition on the whole current blanket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowShrinkConfig {
    pub test: CiTestKind,
    pub max_cond: usize,
}

impl Default for GrowShrinkConfig {
    fn default() -> Self {
        GrowShrinkConfig { test: CiTestKind::default(), max_cond: 4 }
    }
}

struct Tester<'a> {
    data: &'a CategoricalDataset,
    test: CiTestKind,
}

impl Tester<'_> {
    fn dep(&self, x: usize, y: usize, z: &[usize]) -> Result<bool> {
        dependent(self.data, x, y, z, self.test)
    }
}

fn markov_blanket(t: &Tester<'_>, x: usize) -> Result<Vec<usize>> {
    let n = t.data.n_vars();
    let mut mb: Vec<usize> = Vec::new();
    let mut grown = true;
    while grown {
        grown = false;
        for y in 0..n {
            if y != x && !mb.contains(&y) && t.dep(x, y, &mb)? {
                mb.push(y);
                grown = true;
            }
        }
    }
    let mut i = 0;
    while i < mb.len() {
        let y = mb[i];
        let rest: Vec<usize> = mb.iter().copied().filter(|&w| w != y).collect();
        if t.dep(x, y, &rest)? {
            i += 1;
        } else {
            mb.remove(i);
        }
    }
    mb.sort_unstable();
    Ok(mb)
}

/// All subsets of `items` with at most `cap` elements, smallest first.
fn subsets(items: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for size in 1..=cap.min(items.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| items[i]).collect());
            let mut pos = size;
            while pos > 0 && idx[pos - 1] == items.len() - size + pos - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            idx[pos - 1] += 1;
            for j in pos..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

fn smaller(a: Vec<usize>, b: Vec<usize>) -> Vec<usize> {
    if b.len() < a.len() {
        b
    } else {
        a
    }
}

pub fn grow_shrink(data: &CategoricalDataset, cfg: GrowShrinkConfig) -> Result<Dag> {
    let t = Tester { data, test: cfg.test };
    let n = data.n_vars();
    let blankets: Vec<Vec<usize>> = (0..n).map(|x| markov_blanket(&t, x)).collect::<Result<_>>()?;
    let mb: Vec<BTreeSet<usize>> = (0..n)
        .map(|x| blankets[x].iter().copied().filter(|&y| blankets[y].contains(&x)).collect())
        .collect();

    // neighbours: members of each other's blanket that no small subset separates
    let mut adj = vec![BTreeSet::new(); n];
    for x in 0..n {
        for &y in mb[x].iter().filter(|&&y| y > x) {
            let bx: Vec<usize> = mb[x].iter().copied().filter(|&w| w != y).collect();
            let by: Vec<usize> = mb[y].iter().copied().filter(|&w| w != x).collect();
            let base = smaller(bx, by);
            let mut separated = false;
            for s in subsets(&base, cfg.max_cond) {
                if !t.dep(x, y, &s)? {
                    separated = true;
                    break;
                }
            }
            if !separated {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
    }

    // colliders x -> z <- y for non-adjacent x, y with a common neighbour z
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for z in 0..n {
        let nb: Vec<usize> = adj[z].iter().copied().collect();
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                if adj[x].contains(&y) {
                    continue;
                }
                let bx: Vec<usize> = mb[x].iter().copied().filter(|&w| w != y && w != z).collect();
                let by: Vec<usize> = mb[y].iter().copied().filter(|&w| w != x && w != z).collect();
                let base = smaller(bx, by);
                let mut collider = true;
                for mut s in subsets(&base, cfg.max_cond.saturating_sub(1)) {
                    s.push(z);
                    if !t.dep(x, y, &s)? {
                        collider = false;
                        break;
                    }
                }
                if collider {
                    arcs.push((x, z));
                    arcs.push((y, z));
                }
            }
        }
    }

    let mut dag = Dag::empty(data.names().to_vec())?;
    for &(a, b) in &arcs {
        if !dag.has_arc(a, b) && !dag.has_arc(b, a) && !dag.has_path(b, a) {
            dag.add_arc(a, b)?;
        }
    }
    for a in 0..n {
        for &b in adj[a].iter().filter(|&&b| b > a) {
            if dag.has_arc(a, b) || dag.has_arc(b, a) {
                continue;
            }
            if dag.has_path(b, a) {
                dag.add_arc(b, a)?;
            } else {
                dag.add_arc(a, b)?;
            }
        }
    }
    Ok(dag)
}
