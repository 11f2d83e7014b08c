//! Pareto dominance, non-dominated sorting and the solution archive.

use crate::objectives::ObjectiveVector;
use crate::search::Solution;

/// Archive size above which members are pruned by crowding distance.
pub const ARCHIVE_CAPACITY: usize = 1000;

/// `a` dominates `b` when it is no worse in every objective and strictly
/// better in at least one (all objectives minimized).
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let (a, b) = (a.as_array(), b.as_array());
    a.iter().zip(&b).all(|(x, y)| x <= y) && a.iter().zip(&b).any(|(x, y)| x < y)
}

/// Front index of every point (0 = non-dominated).
pub fn non_dominated_ranks(points: &[ObjectiveVector]) -> Vec<usize> {
    let n = points.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in 0..n {
        for q in (p + 1)..n {
            if dominates(&points[p], &points[q]) {
                dominates_list[p].push(q);
                dominated_by[q] += 1;
            } else if dominates(&points[q], &points[p]) {
                dominates_list[q].push(p);
                dominated_by[p] += 1;
            }
        }
    }
    let mut ranks = vec![0; n];
    let mut current: Vec<usize> = (0..n).filter(|&p| dominated_by[p] == 0).collect();
    let mut rank = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            ranks[p] = rank;
            for &q in &dominates_list[p] {
                dominated_by[q] -= 1;
                if dominated_by[q] == 0 {
                    next.push(q);
                }
            }
        }
        rank += 1;
        current = next;
    }
    ranks
}

/// Crowding distance of each member of `front` (indices into `points`),
/// returned in the order of `front`. Boundary points get infinity.
pub fn crowding_distances(points: &[ObjectiveVector], front: &[usize]) -> Vec<f64> {
    let len = front.len();
    let mut dist = vec![0.0; len];
    if len <= 2 {
        return vec![f64::INFINITY; len];
    }
    for obj in 0..3 {
        let value = |k: usize| points[front[k]].as_array()[obj];
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(a.cmp(&b)));
        let (lo, hi) = (value(order[0]), value(order[len - 1]));
        dist[order[0]] = f64::INFINITY;
        dist[order[len - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        for w in 1..len - 1 {
            dist[order[w]] += (value(order[w + 1]) - value(order[w - 1])) / span;
        }
    }
    dist
}

/// Population indices from worst to best: higher front first, then smaller
/// crowding distance, then higher energy, then higher index.
pub fn worst_first(points: &[ObjectiveVector]) -> Vec<usize> {
    let ranks = non_dominated_ranks(points);
    let mut crowding = vec![0.0; points.len()];
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    for r in 0..=max_rank {
        let front: Vec<usize> = (0..points.len()).filter(|&p| ranks[p] == r).collect();
        for (&p, d) in front.iter().zip(crowding_distances(points, &front)) {
            crowding[p] = d;
        }
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        ranks[b]
            .cmp(&ranks[a])
            .then(crowding[a].total_cmp(&crowding[b]))
            .then(points[b].energy.total_cmp(&points[a].energy))
            .then(b.cmp(&a))
    });
    order
}

/// Feasible, mutually non-dominated solutions seen so far.
#[derive(Debug, Clone, Default)]
pub struct ParetoArchive {
    members: Vec<Solution>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn members(&self) -> &[Solution] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn into_members(self) -> Vec<Solution> {
        self.members
    }

    /// Offers a solution. Infeasible, dominated and objective-duplicate
    /// offers are rejected; members the newcomer dominates are evicted.
    pub fn insert(&mut self, candidate: &Solution) -> bool {
        if !candidate.feasible {
            return false;
        }
        let c = &candidate.objectives;
        if self
            .members
            .iter()
            .any(|m| m.objectives == *c || dominates(&m.objectives, c))
        {
            return false;
        }
        self.members.retain(|m| !dominates(c, &m.objectives));
        self.members.push(candidate.clone());
        if self.members.len() > ARCHIVE_CAPACITY {
            self.prune();
        }
        true
    }

    pub fn min_energy(&self) -> Option<&Solution> {
        self.members.iter().min_by(|a, b| {
            let (a, b) = (a.objectives, b.objectives);
            a.energy
                .total_cmp(&b.energy)
                .then(a.waste.total_cmp(&b.waste))
                .then(a.neg_utilization.total_cmp(&b.neg_utilization))
        })
    }

    // Drops the most crowded member (never an extreme point).
    fn prune(&mut self) {
        let points: Vec<ObjectiveVector> = self.members.iter().map(|m| m.objectives).collect();
        let all: Vec<usize> = (0..points.len()).collect();
        let dist = crowding_distances(&points, &all);
        if let Some((idx, _)) = dist
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        {
            self.members.remove(idx);
        }
    }
}

/// True when no member of `set` dominates another.
pub fn is_antichain(set: &[ObjectiveVector]) -> bool {
    set.iter().enumerate().all(|(i, a)| {
        set.iter()
            .enumerate()
            .all(|(j, b)| i == j || !dominates(a, b))
    })
}
