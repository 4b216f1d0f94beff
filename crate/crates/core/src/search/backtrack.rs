//! The backtrack engine behind every search operation.
//!
//! A partial map assigns target elements to a prefix of the source elements
//! in a fixed search order. Every extension is checked against all products
//! that involve the new element:
//!
//! * a product whose source value is already assigned must map to the
//!   assigned image;
//! * a product whose source value is still unassigned is *pending*: its
//!   target value must not be an image already in use, and all pending
//!   products with the same source value must agree on their target value.
//!
//! When an element with pending products comes up for assignment its image
//! is forced, so only that one candidate is tried.

use std::collections::VecDeque;

use crate::invariants::ClassPartition;
use crate::table::CayleyTable;

const NONE: u32 = u32::MAX;

/// Static search plan: element order and candidate classes.
#[derive(Clone, Debug)]
pub(crate) struct Plan {
    /// Source elements in the order they are assigned.
    pub order: Vec<u32>,
    /// Candidate target list for each source element.
    pub candidates: Vec<Vec<u32>>,
    /// Class id of each source element and each target element; a forced
    /// image is only accepted when the class ids agree.
    source_class: Vec<u32>,
    target_class: Vec<u32>,
}

impl Plan {
    /// Builds a plan whose candidates come from `candidates` and whose order
    /// comes from `ordering` (usually the same partition).
    ///
    /// Order: an element that is a product of already-ordered elements goes
    /// next (its image will be forced); otherwise the element with the
    /// smallest candidate class, ties broken by source index.
    pub fn new(
        source: &CayleyTable,
        target_order: usize,
        candidates: &ClassPartition,
        ordering: &ClassPartition,
    ) -> Self {
        let m = source.order();
        let class_of = candidates.source_class_of(m);
        let mut target_class = vec![NONE; target_order];
        for (k, class) in candidates.classes.iter().enumerate() {
            for &t in &class.target {
                target_class[t as usize] = k as u32;
            }
        }

        let order_class = ordering.source_class_of(m);
        let class_size = |s: usize| ordering.classes[order_class[s]].target.len();
        let mut by_size: Vec<usize> = (0..m).collect();
        by_size.sort_by_key(|&s| (class_size(s), s));

        let mut placed = vec![false; m];
        let mut queued = vec![false; m];
        let mut forced: VecDeque<usize> = VecDeque::new();
        let mut order: Vec<u32> = Vec::with_capacity(m);
        let mut scan = 0;
        while order.len() < m {
            let next = loop {
                if let Some(s) = forced.pop_front() {
                    if !placed[s] {
                        break s;
                    }
                    continue;
                }
                while placed[by_size[scan]] {
                    scan += 1;
                }
                break by_size[scan];
            };
            placed[next] = true;
            order.push(next as u32);
            let mut mark = |k: u32| {
                let k = k as usize;
                if !placed[k] && !queued[k] {
                    queued[k] = true;
                    forced.push_back(k);
                }
            };
            for &a in &order {
                let a = a as usize;
                mark(source.get(next, a));
                mark(source.get(a, next));
            }
        }

        Self {
            order,
            candidates: (0..m).map(|s| candidates.classes[class_of[s]].target.clone()).collect(),
            source_class: class_of.iter().map(|&c| c as u32).collect(),
            target_class,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Counters {
    /// Accepted extensions (search-tree nodes below the root).
    pub nodes: u64,
    /// Attempted extensions.
    pub candidates: u64,
    /// Attempted extensions at the last position.
    pub leaf_candidates: u64,
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, rhs: Self) {
        self.nodes += rhs.nodes;
        self.candidates += rhs.candidates;
        self.leaf_candidates += rhs.leaf_candidates;
    }
}

/// Mutable search state over one plan.
pub(crate) struct Backtrack<'a> {
    source: &'a CayleyTable,
    target: &'a CayleyTable,
    plan: &'a Plan,
    phi: Vec<u32>,
    used: Vec<bool>,
    /// Agreed target value of the pending products of each unassigned source.
    pending_target: Vec<u32>,
    /// Number of unassigned sources whose pending target is this target.
    pending_sources: Vec<u32>,
    /// Sources whose pending target was set, in assignment order.
    trail: Vec<u32>,
    pub counters: Counters,
}

struct Frame {
    candidate: usize,
    forced: u32,
    trail_mark: usize,
    released_pending: bool,
}

impl<'a> Backtrack<'a> {
    pub fn new(source: &'a CayleyTable, target: &'a CayleyTable, plan: &'a Plan) -> Self {
        Self {
            source,
            target,
            plan,
            phi: vec![NONE; source.order()],
            used: vec![false; target.order()],
            pending_target: vec![NONE; source.order()],
            pending_sources: vec![0; target.order()],
            trail: Vec::new(),
            counters: Counters::default(),
        }
    }

    /// Runs the search, passing each complete map (indexed by source
    /// element) to `on_solution`; stop early by returning `false`.
    /// `root` restricts the candidates of the first position.
    pub fn run(&mut self, root: Option<&[u32]>, mut on_solution: impl FnMut(&[u32]) -> bool) {
        let m = self.plan.order.len();
        let mut frames: Vec<Frame> = Vec::with_capacity(m);
        frames.push(self.enter(0));
        loop {
            let depth = frames.len() - 1;
            let x = self.plan.order[depth] as usize;
            let next = {
                let frame = &mut frames[depth];
                if frame.forced != NONE {
                    let y = frame.forced;
                    frame.forced = NONE;
                    frame.candidate = usize::MAX;
                    (self.plan.target_class.get(y as usize) == Some(&self.plan.source_class[x]))
                        .then_some(y)
                } else if frame.candidate == usize::MAX {
                    None
                } else {
                    let list: &[u32] = match (depth, root) {
                        (0, Some(r)) => r,
                        _ => &self.plan.candidates[x],
                    };
                    let y = list.get(frame.candidate).copied();
                    frame.candidate += 1;
                    y
                }
            };

            match next {
                Some(y) => {
                    self.counters.candidates += 1;
                    if depth + 1 == m {
                        self.counters.leaf_candidates += 1;
                    }
                    let frame = &mut frames[depth];
                    if self.assign(depth, y, frame) {
                        self.counters.nodes += 1;
                        if depth + 1 == m {
                            let keep_going = on_solution(&self.phi);
                            self.unassign(x, &frames[depth]);
                            if !keep_going {
                                return;
                            }
                        } else {
                            frames.push(self.enter(depth + 1));
                        }
                    }
                }
                None => {
                    frames.pop();
                    if frames.is_empty() {
                        return;
                    }
                    let parent = frames.len() - 1;
                    let px = self.plan.order[parent] as usize;
                    self.unassign(px, &frames[parent]);
                }
            }
        }
    }

    fn enter(&self, depth: usize) -> Frame {
        let x = self.plan.order[depth] as usize;
        let forced = self.pending_target[x];
        Frame {
            candidate: if forced == NONE { 0 } else { usize::MAX },
            forced,
            trail_mark: self.trail.len(),
            released_pending: false,
        }
    }

    /// Tries `x ↦ y`; on failure the state is left unchanged.
    fn assign(&mut self, depth: usize, y: u32, frame: &mut Frame) -> bool {
        let x = self.plan.order[depth] as usize;
        let yi = y as usize;
        if self.used[yi] {
            return false;
        }
        let own = self.pending_target[x];
        if own != NONE && own != y {
            return false;
        }
        let expected_pending = (own == y) as u32;
        if self.pending_sources[yi] != expected_pending {
            return false;
        }

        frame.trail_mark = self.trail.len();
        frame.released_pending = own == y;
        self.phi[x] = y;
        self.used[yi] = true;
        if frame.released_pending {
            self.pending_sources[yi] -= 1;
        }

        let ok = self.check_products(depth);
        if !ok {
            self.unassign(x, frame);
        }
        ok
    }

    fn check_products(&mut self, depth: usize) -> bool {
        let x = self.plan.order[depth] as usize;
        for k in 0..=depth {
            let a = self.plan.order[k] as usize;
            if !self.check_pair(x, a) {
                return false;
            }
            if a != x && !self.check_pair(a, x) {
                return false;
            }
        }
        true
    }

    #[inline]
    fn check_pair(&mut self, u: usize, v: usize) -> bool {
        let product = self.source.get(u, v) as usize;
        let image = self.target.get(self.phi[u] as usize, self.phi[v] as usize);
        let assigned = self.phi[product];
        if assigned != NONE {
            return assigned == image;
        }
        let pending = self.pending_target[product];
        if pending != NONE {
            return pending == image;
        }
        let ii = image as usize;
        if self.used[ii] || self.pending_sources[ii] != 0 {
            return false;
        }
        self.pending_target[product] = image;
        self.pending_sources[ii] += 1;
        self.trail.push(product as u32);
        true
    }

    fn unassign(&mut self, x: usize, frame: &Frame) {
        while self.trail.len() > frame.trail_mark {
            let k = self.trail.pop().expect("trail above mark") as usize;
            let t = self.pending_target[k] as usize;
            self.pending_sources[t] -= 1;
            self.pending_target[k] = NONE;
        }
        let y = self.phi[x] as usize;
        if frame.released_pending {
            self.pending_sources[y] += 1;
        }
        self.used[y] = false;
        self.phi[x] = NONE;
    }
}
