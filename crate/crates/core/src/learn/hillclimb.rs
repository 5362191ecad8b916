use std::collections::VecDeque;

use super::dataset::CategoricalDataset;
use super::score::BicScorer;
use crate::error::Result;
use crate::graph::Dag;

/// Greedy search over single-arc moves scored by BIC. A positive
/// `tabu_length` turns it into TABU search: the last `tabu_length`
/// structures may not be revisited, non-improving moves are allowed, and
/// the search ends after `tabu_length` consecutive steps without beating the
/// best structure seen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HillClimbConfig {
    pub tabu_length: usize,
    pub max_iter: usize,
}

impl Default for HillClimbConfig {
    fn default() -> Self {
        HillClimbConfig { tabu_length: 0, max_iter: usize::MAX }
    }
}

impl HillClimbConfig {
    pub fn tabu(tabu_length: usize) -> Self {
        HillClimbConfig { tabu_length, ..Default::default() }
    }
}

// Variant order is the tie-break order: add, then delete, then reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Move {
    Add(usize, usize),
    Delete(usize, usize),
    Reverse(usize, usize),
}

const IMPROVEMENT_EPS: f64 = 1e-9;

fn parents_of(dag: &Dag, v: usize) -> Vec<usize> {
    dag.parents(v).iter().copied().collect()
}

fn with(mut ps: Vec<usize>, x: usize) -> Vec<usize> {
    ps.push(x);
    ps
}

fn without(ps: &[usize], x: usize) -> Vec<usize> {
    ps.iter().copied().filter(|&p| p != x).collect()
}

fn delta(sc: &mut BicScorer<'_>, dag: &Dag, mv: Move) -> f64 {
    match mv {
        Move::Add(t, h) => {
            let ph = parents_of(dag, h);
            sc.local(h, &with(ph.clone(), t)) - sc.local(h, &ph)
        }
        Move::Delete(t, h) => {
            let ph = parents_of(dag, h);
            sc.local(h, &without(&ph, t)) - sc.local(h, &ph)
        }
        Move::Reverse(t, h) => {
            let ph = parents_of(dag, h);
            let pt = parents_of(dag, t);
            sc.local(h, &without(&ph, t)) - sc.local(h, &ph) + sc.local(t, &with(pt.clone(), h)) - sc.local(t, &pt)
        }
    }
}

fn legal_moves(dag: &Dag) -> Vec<Move> {
    let v = dag.node_count();
    let mut moves = Vec::new();
    for t in 0..v {
        for h in 0..v {
            if t != h && !dag.has_arc(t, h) && !dag.has_arc(h, t) && !dag.has_path(h, t) {
                moves.push(Move::Add(t, h));
            }
        }
    }
    for (t, h) in dag.arcs() {
        moves.push(Move::Delete(t, h));
        let mut probe = dag.clone();
        probe.remove_arc(t, h);
        if !probe.has_path(t, h) {
            moves.push(Move::Reverse(t, h));
        }
    }
    moves.sort();
    moves
}

fn apply(dag: &mut Dag, mv: Move) -> Result<()> {
    match mv {
        Move::Add(t, h) => dag.add_arc(t, h),
        Move::Delete(t, h) => {
            dag.remove_arc(t, h);
            Ok(())
        }
        Move::Reverse(t, h) => {
            dag.remove_arc(t, h);
            dag.add_arc(h, t)
        }
    }
}

pub fn hill_climb(data: &CategoricalDataset, cfg: HillClimbConfig) -> Result<Dag> {
    let mut sc = BicScorer::new(data);
    let mut current = Dag::empty(data.names().to_vec())?;
    let mut current_score = sc.score(&current);
    let mut best = current.clone();
    let mut best_score = current_score;
    let mut tabu: VecDeque<Vec<(usize, usize)>> = VecDeque::new();
    let mut stale = 0;

    for _ in 0..cfg.max_iter {
        let mut choice: Option<(Move, f64)> = None;
        for mv in legal_moves(&current) {
            let d = delta(&mut sc, &current, mv);
            if choice.is_some_and(|(_, best_d)| d <= best_d) {
                continue;
            }
            if cfg.tabu_length > 0 {
                let mut next = current.clone();
                apply(&mut next, mv)?;
                if tabu.contains(&next.arcs()) {
                    continue;
                }
            }
            choice = Some((mv, d));
        }
        let Some((mv, d)) = choice else { break };
        if cfg.tabu_length == 0 && d <= IMPROVEMENT_EPS {
            break;
        }
        if cfg.tabu_length > 0 {
            tabu.push_back(current.arcs());
            if tabu.len() > cfg.tabu_length {
                tabu.pop_front();
            }
        }
        apply(&mut current, mv)?;
        current_score += d;
        if current_score > best_score + IMPROVEMENT_EPS {
            best = current.clone();
            best_score = current_score;
            stale = 0;
        } else {
            stale += 1;
            if stale >= cfg.tabu_length {
                break;
            }
        }
    }
    Ok(best)
}
