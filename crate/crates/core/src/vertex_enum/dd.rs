//! Incremental double-description engine on a homogenized cone.
//!
//! A polyhedron `{x : a_i·x <= b_i}` in `R^d` is lifted to the cone
//! `{(x, t) : a_i·x - b_i t <= 0, t >= 0}` in `R^{d+1}`. Extreme rays with
//! `t = 1` are vertices; rays with `t = 0` are recession directions.
//!
//! Besides the rays and their zero sets, the engine keeps the edge graph
//! (pairs of rays spanning a 2-face). When a row is added, rays on its
//! negative side keep their edges, each edge crossing the hyperplane yields
//! one new ray, and adjacency on the new facet is decided by the
//! combinatorial test restricted to the facet: two facet rays are adjacent
//! iff no third ray's zero set contains the intersection of theirs.

/// Zero-set word type.
type Word = u64;
const WORD_BITS: usize = Word::BITS as usize;

/// Outcome of inserting one row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Step {
    Continue,
    /// Only the zero ray is left.
    Empty,
    /// The ray count passed the cap; the cone is left in its current state.
    Truncated,
}

#[derive(Clone, Debug)]
pub(crate) struct Cone {
    width: usize,
    words: usize,
    coords: Vec<f64>,
    zero: Vec<Word>,
    edges: Vec<(u32, u32)>,
}

pub(crate) fn words_for(rows: usize) -> usize {
    rows.div_ceil(WORD_BITS).max(1)
}

impl Cone {
    /// Empty engine for rays of `width` coordinates and zero sets over `total_rows` rows.
    pub(crate) fn new(width: usize, total_rows: usize) -> Self {
        Self {
            width,
            words: words_for(total_rows),
            coords: Vec::new(),
            zero: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.coords.len() / self.width
    }

    pub(crate) fn ray(&self, i: usize) -> &[f64] {
        &self.coords[i * self.width..(i + 1) * self.width]
    }

    pub(crate) fn zero_set(&self, i: usize) -> &[Word] {
        &self.zero[i * self.words..(i + 1) * self.words]
    }

    #[cfg(test)]
    pub(crate) fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Appends a ray with its active rows; the ray is normalized first.
    pub(crate) fn push_ray(
        &mut self,
        coords: &[f64],
        active_rows: impl IntoIterator<Item = usize>,
    ) -> usize {
        debug_assert_eq!(coords.len(), self.width);
        let idx = self.len();
        self.coords.extend_from_slice(coords);
        normalize_ray(&mut self.coords[idx * self.width..]);
        let base = self.zero.len();
        self.zero.resize(base + self.words, 0);
        for r in active_rows {
            self.zero[base + r / WORD_BITS] |= 1 << (r % WORD_BITS);
        }
        idx
    }

    pub(crate) fn push_edge(&mut self, a: usize, b: usize) {
        debug_assert!(a != b);
        self.edges.push((a as u32, b as u32));
    }

    /// Intersects the cone with `h·r <= 0`, recording the row as `row_index`.
    pub(crate) fn add_row(&mut self, row_index: usize, h: &[f64], tol: f64, cap: usize) -> Step {
        debug_assert_eq!(h.len(), self.width);
        let n = self.len();
        let values: Vec<f64> = (0..n).map(|i| dot(h, self.ray(i))).collect();
        let class: Vec<i8> = values
            .iter()
            .map(|&s| {
                if s > tol {
                    1
                } else if s < -tol {
                    -1
                } else {
                    0
                }
            })
            .collect();

        let (word, bit) = (row_index / WORD_BITS, 1 << (row_index % WORD_BITS));
        if !class.contains(&1) {
            for (i, &c) in class.iter().enumerate() {
                if c == 0 {
                    self.zero[i * self.words + word] |= bit;
                }
            }
            return Step::Continue;
        }
        if class.iter().all(|&c| c == 1) {
            self.coords.clear();
            self.zero.clear();
            self.edges.clear();
            return Step::Empty;
        }

        let mut next = Cone {
            width: self.width,
            words: self.words,
            coords: Vec::with_capacity(self.coords.len()),
            zero: Vec::with_capacity(self.zero.len()),
            edges: Vec::with_capacity(self.edges.len()),
        };
        let mut remap = vec![u32::MAX; n];
        let mut facet: Vec<u32> = Vec::new();
        for i in 0..n {
            if class[i] <= 0 {
                let k = next.len();
                remap[i] = k as u32;
                next.coords.extend_from_slice(self.ray(i));
                next.zero.extend_from_slice(self.zero_set(i));
                if class[i] == 0 {
                    next.zero[k * self.words + word] |= bit;
                    facet.push(k as u32);
                }
            }
        }

        let mut scratch = vec![0.0; self.width];
        for &(u, v) in &self.edges {
            let (u, v) = (u as usize, v as usize);
            match (class[u], class[v]) {
                (0, 0) => {}
                (cu, cv) if cu <= 0 && cv <= 0 => next.edges.push((remap[u], remap[v])),
                (1, -1) | (-1, 1) => {
                    let (p, q) = if class[u] == 1 { (u, v) } else { (v, u) };
                    let (sp, sq) = (values[p], values[q]);
                    for (k, out) in scratch.iter_mut().enumerate() {
                        *out = sp * self.ray(q)[k] - sq * self.ray(p)[k];
                    }
                    let k = next.len();
                    next.coords.extend_from_slice(&scratch);
                    normalize_ray(&mut next.coords[k * self.width..]);
                    let zp = self.zero_set(p);
                    let zq = self.zero_set(q);
                    next.zero.extend(zp.iter().zip(zq).map(|(a, b)| a & b));
                    next.zero[k * self.words + word] |= bit;
                    next.edges.push((remap[q], k as u32));
                    facet.push(k as u32);
                }
                _ => {}
            }
        }

        let truncated = next.len() > cap;
        let facet_edges = next.facet_adjacency(&facet);
        next.edges.extend(facet_edges);
        *self = next;
        if truncated {
            Step::Truncated
        } else {
            Step::Continue
        }
    }

    /// Edges among rays lying on the newest facet.
    fn facet_adjacency(&self, facet: &[u32]) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        if facet.len() < 2 {
            return out;
        }
        let words = self.words;
        let min_common = self.width.saturating_sub(2) as u32;

        // incidence lists of facet rays per row
        let total_bits = words * WORD_BITS;
        let mut incidence: Vec<Vec<u32>> = vec![Vec::new(); total_bits];
        for &r in facet {
            for (w, &bits) in self.zero_set(r as usize).iter().enumerate() {
                let mut b = bits;
                while b != 0 {
                    let t = b.trailing_zeros() as usize;
                    incidence[w * WORD_BITS + t].push(r);
                    b &= b - 1;
                }
            }
        }

        let mut common = vec![0 as Word; words];
        for (a_pos, &a) in facet.iter().enumerate() {
            let za = self.zero_set(a as usize);
            for &b in &facet[a_pos + 1..] {
                let zb = self.zero_set(b as usize);
                let mut count = 0;
                for k in 0..words {
                    common[k] = za[k] & zb[k];
                    count += common[k].count_ones();
                }
                if count < min_common {
                    continue;
                }
                // scan the shortest incidence list among the common rows
                let mut best: Option<&Vec<u32>> = None;
                for (w, &bits) in common.iter().enumerate() {
                    let mut bb = bits;
                    while bb != 0 {
                        let t = bb.trailing_zeros() as usize;
                        let list = &incidence[w * WORD_BITS + t];
                        if best.is_none_or(|cur| list.len() < cur.len()) {
                            best = Some(list);
                        }
                        bb &= bb - 1;
                    }
                }
                let blocked = best.is_some_and(|list| {
                    list.iter().any(|&c| {
                        c != a && c != b && {
                            let zc = self.zero_set(c as usize);
                            common.iter().zip(zc).all(|(m, z)| m & !z == 0)
                        }
                    })
                });
                if !blocked {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Rays with `t > 0` (scaled to `t = 1`) and whether any ray at infinity survives.
    pub(crate) fn split_rays(&self) -> (Vec<usize>, bool) {
        let last = self.width - 1;
        let mut finite = Vec::new();
        let mut infinite = false;
        for i in 0..self.len() {
            if self.ray(i)[last] > 0.0 {
                finite.push(i);
            } else {
                infinite = true;
            }
        }
        (finite, infinite)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scales a ray to `t = 1` when its homogenizing coordinate is meaningfully
/// positive, otherwise pins `t = 0` and scales to unit length.
pub(crate) fn normalize_ray(r: &mut [f64]) {
    let last = r.len() - 1;
    let t = r[last];
    let spread = r[..last].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if t > 1e-14 * spread.max(1.0) {
        for v in r[..last].iter_mut() {
            *v /= t;
        }
        r[last] = 1.0;
    } else {
        r[last] = 0.0;
        let norm = r[..last].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for v in r[..last].iter_mut() {
                *v /= norm;
            }
        }
    }
}
