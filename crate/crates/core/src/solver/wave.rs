use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;

use crate::model::{ClassSet, Direction};
use crate::patterns::Compat;

/// A cell whose candidate set emptied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contradiction {
    pub cell: usize,
    pub x: usize,
    pub y: usize,
    /// The ban that emptied the cell.
    pub pattern: usize,
    /// Length of the propagation chain leading to that ban (0 = direct ban).
    pub depth: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observation {
    Collapsed { cell: usize, pattern: usize },
    AllDecided,
}

#[derive(Clone, Copy, Debug)]
struct Ban {
    cell: u32,
    pattern: u32,
    depth: u32,
}

#[derive(Clone, Copy, Debug)]
struct HeapEntry {
    entropy: f64,
    cell: u32,
    version: u32,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    // Reversed so the max-heap pops the lowest entropy, then the lowest cell.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .entropy
            .total_cmp(&self.entropy)
            .then_with(|| other.cell.cmp(&self.cell))
            .then_with(|| other.version.cmp(&self.version))
    }
}

/// Candidate sets over a `width x height` grid of wave cells, with AC-4
/// support counters over the four cardinal directions.
///
/// `support[c][p][d]` counts the patterns still possible at the neighbor of
/// `c` in direction `d` that accept `p` at `c`. Counters for missing
/// neighbors are never decremented.
#[derive(Clone)]
pub struct Wave<'a> {
    compat: &'a Compat,
    width: usize,
    height: usize,
    patterns: usize,
    weights: Vec<f64>,
    weight_log_weights: Vec<f64>,
    possible: Vec<bool>,
    counts: Vec<u32>,
    support: Vec<u16>,
    sum_weights: Vec<f64>,
    sum_weight_log_weights: Vec<f64>,
    noise: Vec<f64>,
    stack: Vec<Ban>,
    dirty: Vec<u32>,
    is_dirty: Vec<bool>,
    versions: Vec<u32>,
    heap: BinaryHeap<HeapEntry>,
    heap_ready: bool,
    layer: Option<ClassLayer>,
}

/// Per canvas cell, the tile classes still available there, kept arc
/// consistent with every wave cell whose pattern covers it.
///
/// Cardinal compat alone is enough when every pattern cell is concrete,
/// since agreement is transitive. Mask cells break that: two diagonal
/// patterns can each agree with a wildcard between them yet disagree with
/// each other. This layer closes the gap.
#[derive(Clone, Debug)]
struct ClassLayer {
    n: usize,
    canvas_width: usize,
    canvas_height: usize,
    /// `allowed[p * n * n + o]`: classes pattern `p` accepts at offset `o`.
    allowed: Vec<u8>,
    domain: Vec<u8>,
    /// `counts[(c * n * n + o) * 4 + k]`: patterns still possible at the wave
    /// cell covering canvas cell `c` from offset `o` that accept class `k`.
    counts: Vec<u16>,
    pending: Vec<(u32, u8, u32)>,
}

impl ClassLayer {
    fn coverer(&self, cx: usize, cy: usize, o: usize, wave_w: usize, wave_h: usize) -> Option<usize> {
        let (ox, oy) = (o % self.n, o / self.n);
        let (wx, wy) = (cx.checked_sub(ox)?, cy.checked_sub(oy)?);
        (wx < wave_w && wy < wave_h).then_some(wy * wave_w + wx)
    }

    fn remove_class(&mut self, c: usize, k: usize, depth: u32) {
        if self.domain[c] & (1 << k) != 0 {
            self.domain[c] &= !(1 << k);
            self.pending.push((c as u32, k as u8, depth));
        }
    }
}

impl<'a> Wave<'a> {
    /// A fresh wave with every pattern possible everywhere.
    pub fn new(width: usize, height: usize, compat: &'a Compat, weights: &[f64]) -> Self {
        let patterns = compat.pattern_count();
        assert_eq!(weights.len(), patterns, "one weight per pattern");
        assert!(patterns <= u16::MAX as usize);
        let cells = width * height;
        let weight_log_weights: Vec<f64> = weights
            .iter()
            .map(|&w| if w > 0.0 { w * w.ln() } else { 0.0 })
            .collect();
        let sum_w: f64 = weights.iter().sum();
        let sum_wlw: f64 = weight_log_weights.iter().sum();

        let mut template = Vec::with_capacity(patterns * 4);
        for p in 0..patterns {
            for d in Direction::ALL {
                template.push(compat.allowed(p, d).len() as u16);
            }
        }
        let mut support = Vec::with_capacity(cells * patterns * 4);
        for _ in 0..cells {
            support.extend_from_slice(&template);
        }

        Self {
            compat,
            width,
            height,
            patterns,
            weights: weights.to_vec(),
            weight_log_weights,
            possible: vec![true; cells * patterns],
            counts: vec![patterns as u32; cells],
            support,
            sum_weights: vec![sum_w; cells],
            sum_weight_log_weights: vec![sum_wlw; cells],
            noise: vec![0.0; cells],
            stack: Vec::new(),
            dirty: Vec::new(),
            is_dirty: vec![false; cells],
            versions: vec![0; cells],
            heap: BinaryHeap::new(),
            heap_ready: false,
            layer: None,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_count(&self) -> usize {
        self.width * self.height
    }

    pub fn pattern_count(&self) -> usize {
        self.patterns
    }

    pub fn compat(&self) -> &'a Compat {
        self.compat
    }

    #[inline]
    pub fn cell_index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn cell_coords(&self, cell: usize) -> (usize, usize) {
        (cell % self.width, cell / self.width)
    }

    #[inline]
    pub fn neighbor(&self, cell: usize, d: Direction) -> Option<usize> {
        let (x, y) = self.cell_coords(cell);
        match d {
            Direction::Right => (x + 1 < self.width).then(|| cell + 1),
            Direction::Left => (x > 0).then(|| cell - 1),
            Direction::Down => (y + 1 < self.height).then(|| cell + self.width),
            Direction::Up => (y > 0).then(|| cell - self.width),
        }
    }

    #[inline]
    pub fn is_possible(&self, cell: usize, pattern: usize) -> bool {
        self.possible[cell * self.patterns + pattern]
    }

    #[inline]
    pub fn count(&self, cell: usize) -> usize {
        self.counts[cell] as usize
    }

    pub fn possible_patterns(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.possible[cell * self.patterns..(cell + 1) * self.patterns];
        row.iter()
            .enumerate()
            .filter_map(|(p, &ok)| ok.then_some(p))
    }

    pub fn decided(&self, cell: usize) -> Option<usize> {
        if self.counts[cell] == 1 {
            self.possible_patterns(cell).next()
        } else {
            None
        }
    }

    pub fn is_fully_decided(&self) -> bool {
        self.counts.iter().all(|&c| c == 1)
    }

    #[inline]
    pub fn support(&self, cell: usize, pattern: usize, d: Direction) -> u16 {
        self.support[(cell * self.patterns + pattern) * 4 + d.index()]
    }

    pub fn weight_sums(&self, cell: usize) -> (f64, f64) {
        (self.sum_weights[cell], self.sum_weight_log_weights[cell])
    }

    /// Shannon entropy of the cell's remaining weights, without noise.
    pub fn entropy(&self, cell: usize) -> f64 {
        let s = self.sum_weights[cell];
        s.ln() - self.sum_weight_log_weights[cell] / s
    }

    /// Removes `pattern` from `cell` and queues it for propagation.
    pub fn ban(&mut self, cell: usize, pattern: usize) -> Result<(), Contradiction> {
        self.ban_at_depth(cell, pattern, 0)
    }

    fn ban_at_depth(&mut self, cell: usize, pattern: usize, depth: u32) -> Result<(), Contradiction> {
        let i = cell * self.patterns + pattern;
        if !self.possible[i] {
            return Ok(());
        }
        self.possible[i] = false;
        self.counts[cell] -= 1;
        self.sum_weights[cell] -= self.weights[pattern];
        self.sum_weight_log_weights[cell] -= self.weight_log_weights[pattern];
        if self.counts[cell] == 1 {
            // Snap the cache to the survivor so entropy stays exactly 0.
            let last = self.possible_patterns(cell).next().expect("one survivor");
            self.sum_weights[cell] = self.weights[last];
            self.sum_weight_log_weights[cell] = self.weight_log_weights[last];
        }
        if !self.is_dirty[cell] {
            self.is_dirty[cell] = true;
            self.dirty.push(cell as u32);
        }
        self.stack.push(Ban {
            cell: cell as u32,
            pattern: pattern as u32,
            depth,
        });
        if self.counts[cell] == 0 {
            let (x, y) = self.cell_coords(cell);
            self.stack.clear();
            return Err(Contradiction {
                cell,
                x,
                y,
                pattern,
                depth,
            });
        }
        Ok(())
    }

    /// Processes queued bans to the arc-consistency fixpoint.
    pub fn propagate(&mut self) -> Result<(), Contradiction> {
        let mut layer = self.layer.take();
        let result = self.propagate_with(&mut layer);
        if let (Err(_), Some(l)) = (&result, &mut layer) {
            l.pending.clear();
        }
        self.layer = layer;
        result
    }

    fn propagate_with(&mut self, layer: &mut Option<ClassLayer>) -> Result<(), Contradiction> {
        let compat = self.compat;
        loop {
            if let Some(Ban {
                cell,
                pattern,
                depth,
            }) = self.stack.pop()
            {
                let (cell, pattern) = (cell as usize, pattern as usize);
                for d in Direction::ALL {
                    let Some(nb) = self.neighbor(cell, d) else {
                        continue;
                    };
                    let back = d.opposite().index();
                    for &q in compat.allowed(pattern, d) {
                        let q = q as usize;
                        let idx = (nb * self.patterns + q) * 4 + back;
                        self.support[idx] -= 1;
                        if self.support[idx] == 0 && self.possible[nb * self.patterns + q] {
                            self.ban_at_depth(nb, q, depth + 1)?;
                        }
                    }
                }
                if let Some(layer) = layer {
                    self.layer_after_ban(layer, cell, pattern, depth);
                }
            } else if let Some(layer) = layer {
                let Some((c, _k, depth)) = layer.pending.pop() else {
                    break;
                };
                self.layer_after_class_loss(layer, c as usize, depth)?;
            } else {
                break;
            }
        }
        Ok(())
    }

    fn layer_after_ban(&self, layer: &mut ClassLayer, cell: usize, pattern: usize, depth: u32) {
        let nn = layer.n * layer.n;
        let (wx, wy) = self.cell_coords(cell);
        for o in 0..nn {
            let c = (wy + o / layer.n) * layer.canvas_width + wx + o % layer.n;
            let a = layer.allowed[pattern * nn + o];
            for k in 0..4 {
                if a & (1 << k) != 0 {
                    let idx = (c * nn + o) * 4 + k;
                    layer.counts[idx] -= 1;
                    if layer.counts[idx] == 0 {
                        layer.remove_class(c, k, depth + 1);
                    }
                }
            }
        }
    }

    /// Bans covering patterns that no longer accept any class left at `c`.
    fn layer_after_class_loss(&mut self, layer: &ClassLayer, c: usize, depth: u32) -> Result<(), Contradiction> {
        let nn = layer.n * layer.n;
        let (cx, cy) = (c % layer.canvas_width, c / layer.canvas_width);
        let domain = layer.domain[c];
        for o in 0..nn {
            let Some(w) = layer.coverer(cx, cy, o, self.width, self.height) else {
                continue;
            };
            for q in 0..self.patterns {
                if self.possible[w * self.patterns + q] && layer.allowed[q * nn + o] & domain == 0 {
                    self.ban_at_depth(w, q, depth + 1)?;
                }
            }
        }
        Ok(())
    }

    /// Adds the canvas class layer. `cells[p]` lists the classes pattern `p`
    /// accepts at each of its `n * n` offsets, row-major. Classes with no
    /// support are queued for removal; call [`Wave::propagate`] afterwards.
    pub fn enable_class_layer(&mut self, n: usize, cells: &[Vec<ClassSet>]) {
        assert_eq!(cells.len(), self.patterns);
        let nn = n * n;
        let (cw, ch) = (self.width + n - 1, self.height + n - 1);
        let allowed: Vec<u8> = cells
            .iter()
            .flat_map(|p| {
                assert_eq!(p.len(), nn);
                p.iter().map(|s| s.0)
            })
            .collect();
        let mut layer = ClassLayer {
            n,
            canvas_width: cw,
            canvas_height: ch,
            allowed,
            domain: vec![ClassSet::ALL.0; cw * ch],
            counts: vec![0; cw * ch * nn * 4],
            pending: Vec::new(),
        };
        for c in 0..cw * ch {
            let (cx, cy) = (c % cw, c / cw);
            for o in 0..nn {
                let Some(w) = layer.coverer(cx, cy, o, self.width, self.height) else {
                    continue;
                };
                for p in self.possible_patterns(w) {
                    let a = layer.allowed[p * nn + o];
                    for k in 0..4 {
                        if a & (1 << k) != 0 {
                            layer.counts[(c * nn + o) * 4 + k] += 1;
                        }
                    }
                }
                for k in 0..4 {
                    if layer.counts[(c * nn + o) * 4 + k] == 0 {
                        layer.remove_class(c, k, 0);
                    }
                }
            }
        }
        self.layer = Some(layer);
    }

    pub fn has_class_layer(&self) -> bool {
        self.layer.is_some()
    }

    /// Classes still available at canvas cell `(x, y)`, if the layer is on.
    pub fn canvas_domain(&self, x: usize, y: usize) -> Option<ClassSet> {
        self.layer
            .as_ref()
            .map(|l| ClassSet(l.domain[y * l.canvas_width + x]))
    }

    /// Restricts canvas cell `(x, y)` to `keep`. No-op without the layer.
    /// Call [`Wave::propagate`] afterwards.
    pub fn restrict_canvas(&mut self, x: usize, y: usize, keep: ClassSet) {
        if let Some(layer) = &mut self.layer {
            let c = y * layer.canvas_width + x;
            for k in 0..4 {
                if keep.0 & (1 << k) == 0 {
                    layer.remove_class(c, k, 0);
                }
            }
        }
    }

    /// Bans every pattern that has no support from an existing neighbor.
    /// A fresh wave can hold such patterns when a compat list is empty.
    pub fn ban_unsupported(&mut self) -> Result<(), Contradiction> {
        for cell in 0..self.cell_count() {
            for p in 0..self.patterns {
                if !self.is_possible(cell, p) {
                    continue;
                }
                let unsupported = Direction::ALL.into_iter().any(|d| {
                    self.neighbor(cell, d).is_some() && self.support(cell, p, d) == 0
                });
                if unsupported {
                    self.ban(cell, p)?;
                }
            }
        }
        Ok(())
    }

    /// Draws the per-cell tie-breaking noise for a new attempt and resets
    /// the observation queue.
    pub fn reseed_noise<R: Rng + ?Sized>(&mut self, rng: &mut R, amplitude: f64) {
        for v in &mut self.noise {
            *v = rng.random::<f64>() * amplitude;
        }
        self.heap.clear();
        self.heap_ready = false;
    }

    fn push_entry(&mut self, cell: usize) {
        self.versions[cell] = self.versions[cell].wrapping_add(1);
        self.heap.push(HeapEntry {
            entropy: self.entropy(cell) + self.noise[cell],
            cell: cell as u32,
            version: self.versions[cell],
        });
    }

    /// Lowest-entropy undecided cell, ties broken by noise then index.
    pub fn min_entropy_cell(&mut self) -> Option<usize> {
        if !self.heap_ready {
            self.heap.clear();
            for c in 0..self.cell_count() {
                if self.counts[c] > 1 {
                    self.push_entry(c);
                }
            }
            for &c in &self.dirty {
                self.is_dirty[c as usize] = false;
            }
            self.dirty.clear();
            self.heap_ready = true;
        } else {
            let dirty = std::mem::take(&mut self.dirty);
            for &c in &dirty {
                let c = c as usize;
                self.is_dirty[c] = false;
                if self.counts[c] > 1 {
                    self.push_entry(c);
                }
            }
            self.dirty = dirty;
            self.dirty.clear();
        }
        while let Some(top) = self.heap.peek() {
            let c = top.cell as usize;
            if self.counts[c] > 1 && self.versions[c] == top.version {
                return Some(c);
            }
            self.heap.pop();
        }
        None
    }

    /// Picks the minimum-entropy cell and collapses it to one pattern drawn
    /// with probability proportional to its weight. Bans are queued; call
    /// [`Wave::propagate`] afterwards.
    pub fn observe<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Observation {
        let Some(cell) = self.min_entropy_cell() else {
            return Observation::AllDecided;
        };
        let pattern = self.sample(cell, rng);
        let others: Vec<usize> = self.possible_patterns(cell).filter(|&p| p != pattern).collect();
        for p in others {
            self.ban(cell, p).expect("chosen pattern remains");
        }
        Observation::Collapsed { cell, pattern }
    }

    /// Samples a possible pattern at `cell` proportionally to its weight.
    pub fn sample<R: Rng + ?Sized>(&self, cell: usize, rng: &mut R) -> usize {
        let total: f64 = self.possible_patterns(cell).map(|p| self.weights[p]).sum();
        let mut r = rng.random::<f64>() * total;
        let mut last = None;
        for p in self.possible_patterns(cell) {
            r -= self.weights[p];
            if r < 0.0 {
                return p;
            }
            last = Some(p);
        }
        last.expect("cell has a possible pattern")
    }

    /// Recomputes every support counter from scratch and compares.
    pub fn supports_are_coherent(&self) -> bool {
        for cell in 0..self.cell_count() {
            for p in 0..self.patterns {
                for d in Direction::ALL {
                    let Some(nb) = self.neighbor(cell, d) else {
                        continue;
                    };
                    let fresh = self
                        .compat
                        .allowed(p, d)
                        .iter()
                        .filter(|&&q| self.is_possible(nb, q as usize))
                        .count();
                    if fresh != self.support(cell, p, d) as usize {
                        return false;
                    }
                }
            }
        }
        self.layer.as_ref().is_none_or(|l| self.layer_is_coherent(l))
    }

    fn layer_is_coherent(&self, layer: &ClassLayer) -> bool {
        let nn = layer.n * layer.n;
        for c in 0..layer.canvas_width * layer.canvas_height {
            let (cx, cy) = (c % layer.canvas_width, c / layer.canvas_width);
            for o in 0..nn {
                let Some(w) = layer.coverer(cx, cy, o, self.width, self.height) else {
                    continue;
                };
                for k in 0..4 {
                    let fresh = self
                        .possible_patterns(w)
                        .filter(|&p| layer.allowed[p * nn + o] & (1 << k) != 0)
                        .count();
                    if fresh != layer.counts[(c * nn + o) * 4 + k] as usize {
                        return false;
                    }
                    if fresh == 0 && layer.domain[c] & (1 << k) != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks the cached weight sums against the candidate sets.
    pub fn weight_sums_are_coherent(&self, tolerance: f64) -> bool {
        (0..self.cell_count()).all(|c| {
            let s: f64 = self.possible_patterns(c).map(|p| self.weights[p]).sum();
            let l: f64 = self
                .possible_patterns(c)
                .map(|p| self.weight_log_weights[p])
                .sum();
            (s - self.sum_weights[c]).abs() <= tolerance * s.max(1.0)
                && (l - self.sum_weight_log_weights[c]).abs() <= tolerance * l.abs().max(1.0)
        })
    }
}
