//! Planar diagrams of knots and links in PD notation.
//!
//! A crossing `X(a,b,c,d)` lists its four incident segments counterclockwise;
//! slots 0 and 2 carry the understrand, slots 1 and 3 the overstrand.  Each
//! segment label names one edge of the underlying 4-valent graph and must
//! occur exactly twice.  Zero-crossing circles are written as bare `O` tokens.
//!
//! Fox arcs — the units that carry colors — are unions of segments glued
//! wherever a strand passes *over* a crossing (slot 1 joins slot 3).  At an
//! underpass the strand is interrupted, so the two under-segments stay in
//! their own arcs.
//!
//! Embeddings are validated with the dart formalism: a dart is one end of a
//! segment, `sigma` rotates darts counterclockwise within a crossing, `alpha`
//! jumps to the far end of the segment, and faces are the orbits of
//! `phi = sigma . alpha`.  A diagram is accepted only if every connected
//! component satisfies V - E + F = 2 on its own sphere.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// One edge of the 4-valent diagram graph (0-based; text labels are 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SegId(pub u32);

/// One Fox arc: a class of segments joined across overpasses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArcId(pub u32);

/// One end of a segment sitting in a crossing slot, encoded crossing*4+slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dart(pub u32);

impl Dart {
    pub fn new(crossing: usize, slot: u32) -> Self {
        Dart(crossing as u32 * 4 + slot)
    }
    pub fn crossing(self) -> usize {
        (self.0 / 4) as usize
    }
    pub fn slot(self) -> u32 {
        self.0 % 4
    }
    /// True if this dart sits on the understrand of its crossing.
    pub fn is_under(self) -> bool {
        self.slot() % 2 == 0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("empty diagram: no crossings and no loops")]
    EmptyDiagram,
    #[error("malformed token #{pos}: {text:?}")]
    MalformedToken { pos: usize, text: String },
    #[error("segment {label} occurs {count} times, expected exactly 2")]
    SegmentDegree { label: u32, count: u32 },
    #[error("not a planar diagram: {faces} faces where a sphere embedding needs {expected}")]
    NonPlanar { faces: usize, expected: usize },
}

/// The arcs meeting at one crossing: one overstrand arc, two understrand ends.
///
/// `under` is in slot order `[0, 2]`; the two entries coincide when the
/// understrand loops straight back into the same crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingView {
    pub over: ArcId,
    pub under: [ArcId; 2],
}

/// A knot or link diagram with a fixed sphere embedding.
#[derive(Debug, Clone)]
pub struct Diagram {
    crossings: Vec<[SegId; 4]>,
    free_loops: u32,
    // derived at construction
    seg_darts: Vec<[Dart; 2]>,
    seg_arc: Vec<ArcId>,
    arc_members: Vec<Vec<SegId>>,
    face_orbits: Vec<Vec<Dart>>,
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }
    pub fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = x;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }
    pub fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller root so class numbering is stable
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

impl Diagram {
    /// Parses PD text: whitespace-separated `X(a,b,c,d)` tokens with dense
    /// 1-based segment labels, plus bare `O` tokens for zero-crossing circles.
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let mut crossings: Vec<[u32; 4]> = Vec::new();
        let mut free_loops = 0u32;
        for (i, tok) in text.split_whitespace().enumerate() {
            let pos = i + 1;
            if tok == "O" {
                free_loops += 1;
                continue;
            }
            let body = tok
                .strip_prefix("X(")
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| DiagramError::MalformedToken {
                    pos,
                    text: tok.to_string(),
                })?;
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() != 4 {
                return Err(DiagramError::MalformedToken {
                    pos,
                    text: tok.to_string(),
                });
            }
            let mut labels = [0u32; 4];
            for (k, p) in parts.iter().enumerate() {
                labels[k] = match p.trim().parse::<u32>() {
                    Ok(v) if v >= 1 => v,
                    _ => {
                        return Err(DiagramError::MalformedToken {
                            pos,
                            text: tok.to_string(),
                        })
                    }
                };
            }
            crossings.push(labels);
        }
        // the text format requires labels to be exactly 1..=n
        let max = crossings.iter().flatten().copied().max().unwrap_or(0);
        let mut count = vec![0u32; max as usize + 1];
        for &l in crossings.iter().flatten() {
            count[l as usize] += 1;
        }
        for l in 1..=max {
            if count[l as usize] != 2 {
                return Err(DiagramError::SegmentDegree {
                    label: l,
                    count: count[l as usize],
                });
            }
        }
        let (diagram, _) = Diagram::from_raw(&crossings, free_loops)?;
        Ok(diagram)
    }

    /// Builds a diagram from crossings with arbitrary distinct u32 labels.
    ///
    /// Labels are densified in sorted order; the returned map gives each raw
    /// label's segment id so callers can track segments across a rebuild.
    pub fn from_raw(
        crossings: &[[u32; 4]],
        free_loops: u32,
    ) -> Result<(Self, BTreeMap<u32, SegId>), DiagramError> {
        if crossings.is_empty() && free_loops == 0 {
            return Err(DiagramError::EmptyDiagram);
        }
        let mut occur: BTreeMap<u32, u32> = BTreeMap::new();
        for &l in crossings.iter().flatten() {
            *occur.entry(l).or_insert(0) += 1;
        }
        for (&l, &c) in &occur {
            if c != 2 {
                return Err(DiagramError::SegmentDegree { label: l, count: c });
            }
        }
        let seg_of: BTreeMap<u32, SegId> = occur
            .keys()
            .enumerate()
            .map(|(i, &l)| (l, SegId(i as u32)))
            .collect();
        let n_seg = seg_of.len();
        let crossings: Vec<[SegId; 4]> = crossings
            .iter()
            .map(|c| [seg_of[&c[0]], seg_of[&c[1]], seg_of[&c[2]], seg_of[&c[3]]])
            .collect();

        let mut ends: Vec<Vec<Dart>> = vec![Vec::new(); n_seg];
        for (ci, c) in crossings.iter().enumerate() {
            for (slot, s) in c.iter().enumerate() {
                ends[s.0 as usize].push(Dart::new(ci, slot as u32));
            }
        }
        let seg_darts: Vec<[Dart; 2]> = ends.iter().map(|e| [e[0], e[1]]).collect();

        // Fox arcs: overstrand continues through the crossing (slot 1 ~ slot 3)
        let mut uf = UnionFind::new(n_seg);
        for c in &crossings {
            uf.union(c[1].0, c[3].0);
        }
        let mut arc_of_root: BTreeMap<u32, ArcId> = BTreeMap::new();
        let mut seg_arc = Vec::with_capacity(n_seg);
        let mut arc_members: Vec<Vec<SegId>> = Vec::new();
        for s in 0..n_seg as u32 {
            let root = uf.find(s);
            let next = ArcId(arc_of_root.len() as u32);
            let arc = *arc_of_root.entry(root).or_insert(next);
            if arc.0 as usize == arc_members.len() {
                arc_members.push(Vec::new());
            }
            arc_members[arc.0 as usize].push(SegId(s));
            seg_arc.push(arc);
        }

        let mut d = Diagram {
            crossings,
            free_loops,
            seg_darts,
            seg_arc,
            arc_members,
            face_orbits: Vec::new(),
        };
        d.face_orbits = d.compute_faces();

        // Euler check: each crossing-connected component must close into a sphere
        let v = d.crossings.len();
        if v > 0 {
            let mut comp = UnionFind::new(v);
            for s in &d.seg_darts {
                comp.union(s[0].crossing() as u32, s[1].crossing() as u32);
            }
            let mut roots: Vec<u32> = (0..v as u32).map(|c| comp.find(c)).collect();
            roots.sort_unstable();
            roots.dedup();
            let expected = v + 2 * roots.len();
            if d.face_orbits.len() != expected {
                return Err(DiagramError::NonPlanar {
                    faces: d.face_orbits.len(),
                    expected,
                });
            }
        }
        Ok((d, seg_of))
    }

    fn compute_faces(&self) -> Vec<Vec<Dart>> {
        let n_darts = self.crossings.len() * 4;
        let mut seen = vec![false; n_darts];
        let mut orbits = Vec::new();
        for d0 in 0..n_darts as u32 {
            if seen[d0 as usize] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = Dart(d0);
            loop {
                seen[d.0 as usize] = true;
                orbit.push(d);
                d = self.phi(d);
                if d.0 == d0 {
                    break;
                }
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }
    pub fn segment_count(&self) -> usize {
        self.seg_darts.len()
    }
    /// Number of coloring variables: Fox arc classes plus free loops.
    pub fn arc_count(&self) -> usize {
        self.arc_members.len() + self.free_loops as usize
    }
    /// Fox arc classes among segments only (free loops excluded).
    pub fn arc_class_count(&self) -> usize {
        self.arc_members.len()
    }
    pub fn free_loops(&self) -> u32 {
        self.free_loops
    }
    /// Total face count; each zero-crossing circle bounds two disks on its sphere.
    pub fn face_count(&self) -> usize {
        self.face_orbits.len() + 2 * self.free_loops as usize
    }
    /// Faces of the crossing graph as phi-orbits of darts.
    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.face_orbits
    }
    pub fn crossing(&self, i: usize) -> [SegId; 4] {
        self.crossings[i]
    }
    pub fn crossings(&self) -> &[[SegId; 4]] {
        &self.crossings
    }
    pub fn seg_at(&self, d: Dart) -> SegId {
        self.crossings[d.crossing()][d.slot() as usize]
    }
    pub fn seg_darts(&self, s: SegId) -> [Dart; 2] {
        self.seg_darts[s.0 as usize]
    }
    pub fn arc_of(&self, s: SegId) -> ArcId {
        self.seg_arc[s.0 as usize]
    }
    pub fn arc_members(&self, a: ArcId) -> &[SegId] {
        &self.arc_members[a.0 as usize]
    }

    pub fn crossing_view(&self, i: usize) -> CrossingView {
        let c = self.crossings[i];
        CrossingView {
            over: self.arc_of(c[1]),
            under: [self.arc_of(c[0]), self.arc_of(c[2])],
        }
    }

    /// The far end of dart `d`'s segment.
    pub fn alpha(&self, d: Dart) -> Dart {
        let [a, b] = self.seg_darts[self.seg_at(d).0 as usize];
        if a == d {
            b
        } else {
            a
        }
    }
    /// The next dart counterclockwise within the same crossing.
    pub fn sigma(&self, d: Dart) -> Dart {
        Dart::new(d.crossing(), (d.slot() + 1) % 4)
    }
    /// Face successor: cross the segment, then turn counterclockwise.
    pub fn phi(&self, d: Dart) -> Dart {
        self.sigma(self.alpha(d))
    }

    /// PD text with 1-based labels; inverse of `parse` up to isomorphism.
    pub fn serialize(&self) -> String {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|c| {
                format!(
                    "X({},{},{},{})",
                    c[0].0 + 1,
                    c[1].0 + 1,
                    c[2].0 + 1,
                    c[3].0 + 1
                )
            })
            .collect();
        for _ in 0..self.free_loops {
            parts.push("O".to_string());
        }
        parts.join(" ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "crossings": self.crossings.iter()
                .map(|c| [c[0].0 + 1, c[1].0 + 1, c[2].0 + 1, c[3].0 + 1])
                .collect::<Vec<_>>(),
            "free_loops": self.free_loops,
            "segments": self.segment_count(),
            "arcs": self.arc_count(),
            "faces": self.face_count(),
        })
    }

    /// Isomorphism-invariant encoding of the embedded diagram.
    ///
    /// Each connected component is traversed breadth-first from every possible
    /// starting dart in both rotation directions (so reflections are
    /// identified), emitting per crossing the entry-slot parity and the four
    /// incident segments in rotation order under discovery labels; the least
    /// emission wins.  Component codes are sorted, concatenated, and suffixed
    /// with the free-loop count.  Two diagrams get equal codes iff they differ
    /// only by relabeling and/or mirror reflection.
    pub fn canonical(&self) -> Vec<u32> {
        self.canonical_inner(None)
    }

    /// Canonical code of the diagram together with a coloring (one entry per
    /// arc, free-loop entries after arc classes).  Color values participate in
    /// the minimization, so equal codes mean isomorphic *colored* diagrams.
    pub fn canonical_with_colors(&self, colors: &[u16]) -> Vec<u32> {
        assert_eq!(colors.len(), self.arc_count());
        self.canonical_inner(Some(colors))
    }

    fn canonical_inner(&self, colors: Option<&[u16]>) -> Vec<u32> {
        let v = self.crossings.len();
        let mut comp = UnionFind::new(v.max(1));
        for s in &self.seg_darts {
            comp.union(s[0].crossing() as u32, s[1].crossing() as u32);
        }
        let mut by_comp: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for c in 0..v {
            by_comp.entry(comp.find(c as u32)).or_default().push(c);
        }
        let mut scratch = EmitScratch::new(self.segment_count(), v);
        let mut prefix = Vec::new();
        let mut best_prefix: Vec<u32> = Vec::new();
        let mut candidates: Vec<(usize, u32, bool)> = Vec::new();
        let mut full = Vec::new();
        let mut codes: Vec<Vec<u32>> = by_comp
            .values()
            .map(|members| {
                // starts that lose on a two-crossing prefix can never yield
                // the minimal emission, so only the survivors emit fully
                best_prefix.clear();
                candidates.clear();
                for &c in members {
                    for slot in 0..4 {
                        for refl in [false, true] {
                            self.emit_into(
                                &mut prefix,
                                &mut scratch,
                                Dart::new(c, slot),
                                refl,
                                colors,
                                2,
                            );
                            if candidates.is_empty() || prefix < best_prefix {
                                std::mem::swap(&mut best_prefix, &mut prefix);
                                candidates.clear();
                                candidates.push((c, slot, refl));
                            } else if prefix == best_prefix {
                                candidates.push((c, slot, refl));
                            }
                        }
                    }
                }
                let mut best: Option<Vec<u32>> = None;
                for &(c, slot, refl) in &candidates {
                    self.emit_into(
                        &mut full,
                        &mut scratch,
                        Dart::new(c, slot),
                        refl,
                        colors,
                        usize::MAX,
                    );
                    if best.as_ref().map_or(true, |b| full < *b) {
                        best = Some(full.clone());
                    }
                }
                best.unwrap()
            })
            .collect();
        codes.sort();
        let mut out: Vec<u32> = Vec::new();
        for c in codes {
            out.push(u32::MAX); // component separator
            out.extend(c);
        }
        out.push(self.free_loops);
        if let Some(colors) = colors {
            let mut loop_colors: Vec<u32> = (0..self.free_loops as usize)
                .map(|i| colors[self.arc_class_count() + i] as u32)
                .collect();
            loop_colors.sort_unstable();
            out.extend(loop_colors);
        }
        out
    }

    /// Emission for the canonical code: breadth-first from `start`, per
    /// visited crossing the entry-slot parity then per rotation slot the
    /// discovery label of its segment (followed by its arc's color when
    /// colors participate).  `limit` bounds how many crossings emit tokens,
    /// letting prefix comparisons skip hopeless starts cheaply.
    fn emit_into(
        &self,
        out: &mut Vec<u32>,
        scratch: &mut EmitScratch,
        start: Dart,
        refl: bool,
        colors: Option<&[u16]>,
        limit: usize,
    ) {
        out.clear();
        scratch.begin();
        scratch.enter(start.crossing(), start.slot() as u8);
        let mut labels = 0u32;
        let mut qi = 0;
        while qi < scratch.order.len().min(limit) {
            let c = scratch.order[qi];
            qi += 1;
            let e = scratch.entry[c] as u32;
            out.push(e % 2); // 0 iff entered on the understrand
            for k in 0..4 {
                let slot = if refl { (e + 4 - k) % 4 } else { (e + k) % 4 };
                let d = Dart::new(c, slot);
                let s = self.seg_at(d);
                if scratch.seg_epoch[s.0 as usize] != scratch.epoch {
                    scratch.seg_epoch[s.0 as usize] = scratch.epoch;
                    labels += 1;
                    scratch.seg_label[s.0 as usize] = labels;
                }
                out.push(scratch.seg_label[s.0 as usize]);
                if let Some(colors) = colors {
                    out.push(colors[self.arc_of(s).0 as usize] as u32);
                }
                let far = self.alpha(d);
                if scratch.entry_epoch[far.crossing()] != scratch.epoch {
                    scratch.enter(far.crossing(), far.slot() as u8);
                }
            }
        }
    }
}

/// Reusable buffers for `emit_into`, epoch-stamped so successive emissions
/// skip the O(segments) clears.
struct EmitScratch {
    seg_epoch: Vec<u32>,
    seg_label: Vec<u32>,
    entry_epoch: Vec<u32>,
    entry: Vec<u8>,
    order: Vec<usize>,
    epoch: u32,
}

impl EmitScratch {
    fn new(segments: usize, crossings: usize) -> Self {
        EmitScratch {
            seg_epoch: vec![0; segments],
            seg_label: vec![0; segments],
            entry_epoch: vec![0; crossings],
            entry: vec![0; crossings],
            order: Vec::with_capacity(crossings),
            epoch: 0,
        }
    }

    fn begin(&mut self) {
        self.epoch += 1;
        self.order.clear();
    }

    fn enter(&mut self, crossing: usize, slot: u8) {
        self.entry_epoch[crossing] = self.epoch;
        self.entry[crossing] = slot;
        self.order.push(crossing);
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    #[test]
    fn trefoil_counts() {
        let d = Diagram::parse(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.segment_count(), 6);
        assert_eq!(d.arc_count(), 3);
        assert_eq!(d.face_count(), 5);
    }

    #[test]
    fn trefoil_arcs_are_overstrand_runs() {
        let d = Diagram::parse(TREFOIL).unwrap();
        // crossing 0 carries segments 4 and 5 (0-based 3,4) on its overstrand
        assert_eq!(d.arc_of(SegId(3)), d.arc_of(SegId(4)));
        assert_eq!(d.arc_of(SegId(5)), d.arc_of(SegId(0)));
        assert_eq!(d.arc_of(SegId(1)), d.arc_of(SegId(2)));
        assert_ne!(d.arc_of(SegId(0)), d.arc_of(SegId(1)));
    }

    #[test]
    fn kink_counts() {
        let d = Diagram::parse("X(1,1,2,2)").unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.segment_count(), 2);
        assert_eq!(d.arc_count(), 1);
        assert_eq!(d.face_count(), 3);
    }

    #[test]
    fn all_four_kink_forms_are_planar() {
        for pd in ["X(1,1,2,2)", "X(1,2,2,1)", "X(2,1,1,2)", "X(2,2,1,1)"] {
            let d = Diagram::parse(pd).unwrap();
            assert_eq!(d.face_count(), 3, "{pd}");
            assert_eq!(d.arc_count(), 1, "{pd}");
        }
    }

    #[test]
    fn circle_counts() {
        let d = Diagram::parse("O").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.segment_count(), 0);
        assert_eq!(d.arc_count(), 1);
        assert_eq!(d.face_count(), 2);
    }

    #[test]
    fn hopf_link_counts() {
        let d = Diagram::parse("X(1,4,2,3) X(3,2,4,1)").unwrap();
        assert_eq!(d.arc_count(), 2);
        assert_eq!(d.face_count(), 4);
    }

    #[test]
    fn split_union_gets_own_spheres() {
        let two = Diagram::parse("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3) X(7,10,8,11) X(9,12,10,7) X(11,8,12,9)")
            .unwrap();
        assert_eq!(d_faces(&two), 10);
        let with_loop = Diagram::parse("X(1,1,2,2) O O").unwrap();
        assert_eq!(with_loop.face_count(), 7);
        assert_eq!(with_loop.arc_count(), 3);
    }

    fn d_faces(d: &Diagram) -> usize {
        d.face_count()
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(Diagram::parse("").unwrap_err(), DiagramError::EmptyDiagram);
        assert_eq!(
            Diagram::parse("  \n ").unwrap_err(),
            DiagramError::EmptyDiagram
        );
    }

    #[test]
    fn torus_onefoil_rejected_nonplanar() {
        // X(1,2,1,2) closes into the torus: one face instead of three
        let err = Diagram::parse("X(1,2,1,2)").unwrap_err();
        assert_eq!(
            err,
            DiagramError::NonPlanar {
                faces: 1,
                expected: 3
            }
        );
    }

    #[test]
    fn degree_errors() {
        assert_eq!(
            Diagram::parse("X(1,1,2,3)").unwrap_err(),
            DiagramError::SegmentDegree { label: 2, count: 1 }
        );
        assert_eq!(
            Diagram::parse("X(1,4,2,5) X(3,6,4,1) X(5,2,6,4)").unwrap_err(),
            DiagramError::SegmentDegree { label: 3, count: 1 }
        );
        // dense labeling required: 1,2,4 present, 3 missing
        assert_eq!(
            Diagram::parse("X(1,2,1,2) X(4,4,2,2)").unwrap_err(),
            DiagramError::SegmentDegree { label: 2, count: 4 }
        );
    }

    #[test]
    fn malformed_tokens() {
        for bad in ["X(1,2,3)", "Y(1,2,3,4)", "X(0,1,0,1)", "X(1,2,3,4", "X(a,b,c,d)"] {
            match Diagram::parse(bad) {
                Err(DiagramError::MalformedToken { pos: 1, .. }) => {}
                other => panic!("{bad}: expected MalformedToken, got {other:?}"),
            }
        }
    }

    #[test]
    fn serialize_round_trip() {
        for pd in [TREFOIL, "X(1,1,2,2)", "O", "X(1,4,2,3) X(3,2,4,1) O"] {
            let d = Diagram::parse(pd).unwrap();
            let d2 = Diagram::parse(&d.serialize()).unwrap();
            assert_eq!(d.canonical(), d2.canonical(), "{pd}");
        }
    }

    #[test]
    fn canonical_ignores_labeling_and_mirror() {
        let t = Diagram::parse(TREFOIL).unwrap();
        // cyclic relabel of every segment (i -> i+1 mod 6)
        let relabeled = Diagram::parse("X(2,5,3,6) X(4,1,5,2) X(6,3,1,4)").unwrap();
        assert_eq!(t.canonical(), relabeled.canonical());
        // mirror: reverse each crossing's rotation
        let mirror = Diagram::parse("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        assert_eq!(t.canonical(), mirror.canonical());
    }

    #[test]
    fn canonical_separates_kink_chiralities_from_counts_not_structure() {
        // the two kink chiralities are mirror images, so they share a code
        let a = Diagram::parse("X(1,1,2,2)").unwrap();
        let b = Diagram::parse("X(2,2,1,1)").unwrap();
        assert_eq!(a.canonical(), b.canonical());
        // but a kink is not a bare circle
        let c = Diagram::parse("O").unwrap();
        assert_ne!(a.canonical(), c.canonical());
    }

    #[test]
    fn canonical_with_colors_distinguishes() {
        let t = Diagram::parse(TREFOIL).unwrap();
        let c0 = t.canonical_with_colors(&[0, 0, 0]);
        let c1 = t.canonical_with_colors(&[1, 1, 1]);
        let mixed = t.canonical_with_colors(&[0, 1, 2]);
        assert_ne!(c0, c1);
        assert_ne!(c0, mixed);
        // rotating the three arc colors along the symmetry gives the same class
        let r1 = t.canonical_with_colors(&[1, 2, 0]);
        assert_eq!(mixed, r1);
    }

    #[test]
    fn from_raw_densifies_sparse_labels() {
        let (d, map) = Diagram::from_raw(&[[10, 40, 20, 50], [30, 60, 40, 10], [50, 20, 60, 30]], 0)
            .unwrap();
        let t = Diagram::parse(TREFOIL).unwrap();
        assert_eq!(d.canonical(), t.canonical());
        assert_eq!(map[&10], SegId(0));
        assert_eq!(map[&60], SegId(5));
    }

    #[test]
    fn json_shape() {
        let d = Diagram::parse("X(1,1,2,2) O").unwrap();
        let j = d.to_json();
        assert_eq!(j["crossings"][0][0], 1);
        assert_eq!(j["free_loops"], 1);
        assert_eq!(j["segments"], 2);
        assert_eq!(j["arcs"], 2);
        assert_eq!(j["faces"], 5);
    }
}
