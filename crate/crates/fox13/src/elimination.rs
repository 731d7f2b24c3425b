//! Color elimination for 13-colorings.
//!
//! Occurrences of a target color c in a colored diagram come in four shapes:
//! a monochromatic crossing (alpha), the over-arc of a polychromatic crossing
//! (beta), or an under-arc whose two end over-arcs bear distinct (gamma) or
//! equal (delta) colors. Each stage of the elimination order
//! 12, 11, 6, 3, 4, 8, 9, 2 has a table mapping an occurrence's local colors
//! to the transformation that settles it; the low-index transformations also
//! carry the linear forms of the colors they produce, which double as guards.
//!
//! The engine removes one color at a time with a best-first search over
//! primitive moves, scoped to one occurrence's neighbourhood at a time,
//! scoring states by occurrence count, then crossing count, then path length.
//! The tables steer it: easy occurrences (index-1 cells) are attacked first,
//! goal states are ranked by the table difficulty of what remains, and when a
//! color dead-ends the engine backtracks to an alternative reduction of an
//! earlier stage or restarts on another affine representative of the same
//! coloring class.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{determinant, Coloring};
use crate::diagram::{ArcId, Dart, Diagram};
use crate::rewrite::{apply, enumerate_sites, orbit, MoveSite};
use crate::tables::{elimination_tables, Cell, P};

/// The colors removed, in order; what survives is `TARGET_PALETTE`.
pub const ELIMINATION_ORDER: [u16; 8] = [12, 11, 6, 3, 4, 8, 9, 2];

pub const TARGET_PALETTE: [u16; 5] = [0, 1, 5, 7, 10];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InstanceKind {
    /// Monochromatic crossing.
    Alpha,
    /// Over-arc of a polychromatic crossing.
    Beta,
    /// Under-arc whose end over-arcs bear distinct colors.
    Gamma,
    /// Under-arc whose end over-arcs bear the same color.
    Delta,
}

/// Where an occurrence lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Site {
    Crossing(usize),
    Arc(u32),
}

/// One occurrence of the target color, with its local color parameters read
/// off the diagram: `a`/`b` are neighbor colors (end over-colors for
/// gamma/delta, the under pair for beta, the nearest strand color for alpha).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub kind: InstanceKind,
    pub site: Site,
    pub a: Option<u16>,
    pub b: Option<u16>,
    pub c: u16,
}

/// A linear form ka*a + kb*b + kc*c over Z13.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinForm {
    pub ka: i32,
    pub kb: i32,
    pub kc: i32,
}

impl LinForm {
    pub fn eval(&self, a: u16, b: u16, c: u16) -> u16 {
        (self.ka * a as i32 + self.kb * b as i32 + self.kc * c as i32).rem_euclid(P as i32) as u16
    }
}

const fn lf(ka: i32, kb: i32, kc: i32) -> LinForm {
    LinForm { ka, kb, kc }
}

/// One named transformation. For the text-specified ones `produced` is the
/// exact set of colors the composite mints (doubling as its guards); the
/// figure-only ones are `flagged` and carry no produced forms — the search
/// realizes their effect instead of replaying a fixed macro.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransformationSpec {
    pub name: &'static str,
    pub kind: InstanceKind,
    pub index: u8,
    /// Endgame transformations (D1..D4) close out a whole region instead of
    /// rewriting one occurrence.
    pub endgame: bool,
    pub produced: &'static [LinForm],
    pub flagged: bool,
}

impl TransformationSpec {
    pub fn guards(&self) -> &'static [LinForm] {
        self.produced
    }
}

macro_rules! spec {
    ($name:literal, $kind:ident, $index:literal, $produced:expr, $flagged:literal) => {
        TransformationSpec {
            name: $name,
            kind: InstanceKind::$kind,
            index: $index,
            endgame: false,
            produced: $produced,
            flagged: $flagged,
        }
    };
}

macro_rules! figure_spec {
    ($name:literal, $kind:ident, $index:literal) => {
        spec!($name, $kind, $index, &[], true)
    };
}

pub const TRANSFORMATIONS: &[TransformationSpec] = &[
    spec!("alpha1", Alpha, 1, &[lf(2, 0, -1)], false),
    spec!("alpha2", Alpha, 2, &[lf(-2, 0, 3)], false),
    spec!("beta1", Beta, 1, &[lf(2, 0, -1), lf(3, 0, -2)], false),
    spec!("beta2", Beta, 2, &[lf(-1, 0, 2)], false),
    figure_spec!("beta3", Beta, 3),
    spec!("gamma1", Gamma, 1, &[lf(2, -1, 0), lf(2, -2, 1)], false),
    spec!("gamma2", Gamma, 2, &[lf(-1, 2, 0), lf(-2, 2, 1)], false),
    figure_spec!("gamma3", Gamma, 3),
    figure_spec!("gamma4", Gamma, 4),
    figure_spec!("gamma5", Gamma, 5),
    figure_spec!("gamma6", Gamma, 6),
    figure_spec!("gamma7", Gamma, 7),
    figure_spec!("gamma8", Gamma, 8),
    figure_spec!("gamma9", Gamma, 9),
    figure_spec!("gamma10", Gamma, 10),
    figure_spec!("gamma11", Gamma, 11),
    figure_spec!("gamma12", Gamma, 12),
    figure_spec!("gamma13", Gamma, 13),
    figure_spec!("gamma14", Gamma, 14),
    spec!("delta1", Delta, 1, &[lf(3, 0, -2), lf(4, 0, -3)], false),
    figure_spec!("delta2", Delta, 2),
    figure_spec!("delta3", Delta, 3),
    figure_spec!("delta4", Delta, 4),
    figure_spec!("delta5", Delta, 5),
    figure_spec!("delta6", Delta, 6),
    figure_spec!("delta7", Delta, 7),
    // the three colors this one touches are stated even though its moves are
    // figure-only, so it keeps produced forms but stays flagged
    TransformationSpec {
        name: "delta8",
        kind: InstanceKind::Delta,
        index: 8,
        endgame: false,
        produced: &[lf(-1, 0, 2), lf(12, 0, -11), lf(-2, 0, 3)],
        flagged: true,
    },
    figure_spec!("delta9", Delta, 9),
    figure_spec!("delta10", Delta, 10),
    figure_spec!("delta11", Delta, 11),
    TransformationSpec {
        name: "D1",
        kind: InstanceKind::Delta,
        index: 1,
        endgame: true,
        produced: &[],
        flagged: true,
    },
    TransformationSpec {
        name: "D2",
        kind: InstanceKind::Delta,
        index: 2,
        endgame: true,
        produced: &[],
        flagged: true,
    },
    TransformationSpec {
        name: "D3",
        kind: InstanceKind::Delta,
        index: 3,
        endgame: true,
        produced: &[],
        flagged: true,
    },
    TransformationSpec {
        name: "D4",
        kind: InstanceKind::Delta,
        index: 4,
        endgame: true,
        produced: &[],
        flagged: true,
    },
];

pub fn find_spec(kind: InstanceKind, index: u8, endgame: bool) -> Option<&'static TransformationSpec> {
    TRANSFORMATIONS
        .iter()
        .find(|s| s.kind == kind && s.index == index && s.endgame == endgame)
}

/// True iff none of the spec's produced forms evaluates into `forbidden`.
pub fn guard_check(
    spec: &TransformationSpec,
    a: u16,
    b: u16,
    c: u16,
    forbidden: &BTreeSet<u16>,
) -> bool {
    spec.produced
        .iter()
        .all(|f| !forbidden.contains(&f.eval(a, b, c)))
}

pub fn produced_colors(spec: &TransformationSpec, a: u16, b: u16, c: u16) -> Vec<u16> {
    spec.produced.iter().map(|f| f.eval(a, b, c)).collect()
}

/// What the tables say about one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lookup {
    Covered {
        spec: &'static TransformationSpec,
        /// The cell was "!": the a/b parameter roles are interchanged.
        swapped: bool,
    },
    /// X cell: this configuration cannot occur at this stage.
    Impossible,
    /// No table for this (kind, target, eliminated-set) stage, or parameters
    /// outside it.
    NotCovered,
}

/// Consult the stage table for this instance. Only applies when the
/// eliminated set matches the table's stage exactly; the first two colors of
/// the order have no tables (their case analyses live in the produced-form
/// guards instead).
pub fn catalog_lookup(inst: &Instance, eliminated: &BTreeSet<u16>) -> Lookup {
    let Some(t) = elimination_tables()
        .iter()
        .find(|t| t.kind == inst.kind && t.c == inst.c)
    else {
        return Lookup::NotCovered;
    };
    let stage: BTreeSet<u16> = t.eliminated.iter().copied().collect();
    if stage != *eliminated {
        return Lookup::NotCovered;
    }
    let Some(a) = inst.a else {
        return Lookup::NotCovered;
    };
    let b = if inst.kind == InstanceKind::Gamma {
        match inst.b {
            Some(b) => Some(b),
            None => return Lookup::NotCovered,
        }
    } else {
        None
    };
    match t.cell(a, b) {
        None => Lookup::NotCovered,
        Some(Cell::X) => Lookup::Impossible,
        Some(Cell::T { index, swapped }) => match find_spec(inst.kind, index, false) {
            Some(spec) => Lookup::Covered { spec, swapped },
            None => Lookup::NotCovered,
        },
        Some(Cell::D(n)) => match find_spec(InstanceKind::Delta, n, true) {
            Some(spec) => Lookup::Covered {
                spec,
                swapped: false,
            },
            None => Lookup::NotCovered,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElimError {
    #[error("color {0} does not occur in the coloring")]
    ColorAbsent(u16),
    #[error("coloring is constant; there is nothing to eliminate")]
    TrivialColoring,
    #[error("coloring does not satisfy the crossing relations")]
    InvalidColoring,
    #[error("diagram has determinant zero; elimination is undefined")]
    ZeroDeterminant,
    #[error("search budget exhausted while eliminating color {target}")]
    BudgetExhausted {
        target: u16,
        trace: Box<EliminationTrace>,
    },
}

/// The record of one color's removal: the moves applied and the palette
/// after each (palettes[0] is the starting palette).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliminationTrace {
    pub target: u16,
    pub steps: Vec<MoveSite>,
    pub palettes: Vec<Vec<u16>>,
    pub success: bool,
}

impl EliminationTrace {
    fn empty(target: u16, palette: &BTreeSet<u16>) -> Self {
        EliminationTrace {
            target,
            steps: Vec::new(),
            palettes: vec![palette.iter().copied().collect()],
            success: true,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ElimConfig {
    /// Node-expansion bound for a single scoped search (per color, per
    /// occurrence attempt); the profile rounds scale from it.
    pub budget: usize,
    /// Also offer kink insertions to the search (rarely useful, widens
    /// branching).
    pub allow_r1_add: bool,
    /// On a dead end, retry the whole sequence on other affine
    /// representatives lambda*x + mu of the coloring.
    pub affine_retry: bool,
    /// How many affine representatives to try per escalation level.
    pub max_variants: usize,
}

impl Default for ElimConfig {
    fn default() -> Self {
        ElimConfig {
            budget: 100_000,
            allow_r1_add: false,
            affine_retry: true,
            max_variants: 156,
        }
    }
}

/// Result of a full elimination run.
#[derive(Debug, Clone)]
pub struct ElimOutcome {
    pub diagram: Diagram,
    pub coloring: Coloring,
    /// One trace per color of the order, in order (empty where the color
    /// never occurred).
    pub traces: Vec<EliminationTrace>,
    /// The affine representative (lambda, mu) the run succeeded on.
    pub variant: (u16, u16),
    /// Total search nodes expanded.
    pub nodes: usize,
}

fn m(x: i32) -> u16 {
    x.rem_euclid(P as i32) as u16
}

/// Arcs colored c plus crossings whose over-arc is colored c.
pub fn occurrences(d: &Diagram, col: &Coloring, c: u16) -> usize {
    let arcs = col
        .colors
        .iter()
        .take(d.arc_class_count())
        .filter(|&&x| x == c)
        .count();
    let overs = (0..d.crossing_count())
        .filter(|&i| col.colors[d.crossing_view(i).over.0 as usize] == c)
        .count();
    arcs + overs
}

fn over_color_at(d: &Diagram, col: &Coloring, end: Dart) -> u16 {
    col.colors[d.crossing_view(end.crossing()).over.0 as usize]
}

/// The two darts where this arc dives under a crossing (in index order);
/// empty for a component that never goes under.
fn arc_end_darts(d: &Diagram, arc: ArcId) -> Vec<Dart> {
    let mut ends = Vec::new();
    for &seg in d.arc_members(arc) {
        for e in d.seg_darts(seg) {
            if e.is_under() {
                ends.push(e);
            }
        }
    }
    ends.sort_unstable_by_key(|e| (e.crossing(), e.slot()));
    ends
}

/// Walk the strand away from a monochromatic crossing until the color
/// changes; None if the whole component carries c.
fn alpha_neighbor(d: &Diagram, col: &Coloring, i: usize, c: u16) -> Option<u16> {
    let mut dart = Dart::new(i, 3);
    for _ in 0..4 * d.crossing_count() + 4 {
        let seg = d.seg_at(dart);
        let color = col.colors[d.arc_of(seg).0 as usize];
        if color != c {
            return Some(color);
        }
        let [e0, e1] = d.seg_darts(seg);
        let far = if e0 == dart { e1 } else { e0 };
        dart = Dart::new(far.crossing(), (far.slot() + 2) % 4);
    }
    None
}

/// Classify every occurrence of c: each crossing with over-color c is an
/// alpha (monochromatic) or beta instance, and each arc colored c whose ends
/// pass under non-c over-arcs is a gamma or delta instance. Arcs ending
/// under an over-arc colored c belong to that crossing's alpha instance.
pub fn classify(d: &Diagram, col: &Coloring, c: u16) -> Result<Vec<Instance>, ElimError> {
    if !col.colors[..d.arc_class_count().min(col.colors.len())].contains(&c) {
        return Err(ElimError::ColorAbsent(c));
    }
    let mut out = Vec::new();
    for i in 0..d.crossing_count() {
        let v = d.crossing_view(i);
        if col.colors[v.over.0 as usize] != c {
            continue;
        }
        let u0 = col.colors[v.under[0].0 as usize];
        let u1 = col.colors[v.under[1].0 as usize];
        if u0 == c {
            out.push(Instance {
                kind: InstanceKind::Alpha,
                site: Site::Crossing(i),
                a: alpha_neighbor(d, col, i, c),
                b: None,
                c,
            });
        } else {
            out.push(Instance {
                kind: InstanceKind::Beta,
                site: Site::Crossing(i),
                a: Some(u0.min(u1)),
                b: Some(u0.max(u1)),
                c,
            });
        }
    }
    for arc in 0..d.arc_class_count() {
        if col.colors[arc] != c {
            continue;
        }
        let ends = arc_end_darts(d, ArcId(arc as u32));
        if ends.is_empty() {
            continue;
        }
        let x = over_color_at(d, col, ends[0]);
        let y = over_color_at(d, col, ends[1]);
        if x == c || y == c {
            continue;
        }
        if x != y {
            out.push(Instance {
                kind: InstanceKind::Gamma,
                site: Site::Arc(arc as u32),
                a: Some(x),
                b: Some(y),
                c,
            });
        } else {
            out.push(Instance {
                kind: InstanceKind::Delta,
                site: Site::Arc(arc as u32),
                a: Some(x),
                b: None,
                c,
            });
        }
    }
    Ok(out)
}

/// Difficulty prior for one instance, from its table cell when the stage
/// matches (index-1 cells are free, index-2 cheap, figure-only expensive,
/// endgame worst), else from the text-specified guards.
fn instance_weight(inst: &Instance, eliminated: &BTreeSet<u16>) -> u32 {
    match catalog_lookup(inst, eliminated) {
        Lookup::Covered { spec, .. } => {
            if spec.endgame {
                6
            } else if spec.flagged {
                4
            } else if spec.index == 1 {
                0
            } else {
                1
            }
        }
        // an X cell here means the configuration cannot survive to its
        // stage; as a difficulty prior for an earlier diagram that just says
        // "will be reshaped first", so it gets a modest weight
        Lookup::Impossible => 1,
        Lookup::NotCovered => {
            let mut forb = eliminated.clone();
            forb.insert(inst.c);
            let a = match inst.a {
                Some(a) => a,
                None => return 1,
            };
            let b = inst.b.unwrap_or(a);
            let first = find_spec(inst.kind, 1, false).unwrap();
            if guard_check(first, a, b, inst.c, &forb) {
                return 0;
            }
            if let Some(second) = find_spec(inst.kind, 2, false) {
                if !second.flagged && guard_check(second, a, b, inst.c, &forb) {
                    return 1;
                }
            }
            3
        }
    }
}

/// Summed difficulty prior of all remaining stages from `pos` on.
fn state_difficulty(d: &Diagram, col: &Coloring, order: &[u16], pos: usize) -> u64 {
    let mut total = 0u64;
    for (k, &c) in order.iter().enumerate().skip(pos) {
        if occurrences(d, col, c) == 0 {
            continue;
        }
        let eliminated: BTreeSet<u16> = order[..k].iter().copied().collect();
        if let Ok(insts) = classify(d, col, c) {
            total += insts
                .iter()
                .map(|i| instance_weight(i, &eliminated) as u64)
                .sum::<u64>();
        }
    }
    total
}

fn palette_of(col: &Coloring) -> BTreeSet<u16> {
    col.colors.iter().copied().collect()
}

/// Total occurrences of the target and every later color: a footprint the
/// current stage should keep small.
fn future_occ(d: &Diagram, col: &Coloring, order: &[u16], pos: usize) -> usize {
    order[pos..].iter().map(|&x| occurrences(d, col, x)).sum()
}

struct Stats {
    nodes: usize,
}

/// Crossings touching this instance's arcs (the search grows the region
/// itself as it moves strands around).
fn instance_zone(d: &Diagram, inst: &Instance) -> Vec<bool> {
    let n = d.crossing_count();
    let mut zn = vec![false; n];
    match inst.site {
        Site::Crossing(i) => zn[i] = true,
        Site::Arc(a) => {
            for (i, z) in zn.iter_mut().enumerate() {
                let v = d.crossing_view(i);
                if v.over.0 == a || v.under.iter().any(|u| u.0 == a) {
                    *z = true;
                }
            }
        }
    }
    zn
}

/// Carry a frozen crossing zone across a move: growing moves append their
/// new crossings at the end (kept in-zone), shrinking moves compact indices.
fn evolve_zone(zn: &mut Vec<bool>, before: &Diagram, site: &MoveSite) {
    match *site {
        MoveSite::R2Push { .. } => zn.extend([true, true]),
        MoveSite::R1Add { .. } => zn.push(true),
        MoveSite::R3 { .. } => {}
        MoveSite::R1Remove { crossing } => {
            zn.remove(crossing as usize);
        }
        MoveSite::R2Pull { dart } => {
            let orb = orbit(before, dart);
            let mut cs: Vec<usize> = orb.iter().map(|dd| dd.crossing()).collect();
            cs.sort_unstable();
            cs.dedup();
            for &i in cs.iter().rev() {
                zn.remove(i);
            }
        }
    }
}

fn replay_steps(d: &Diagram, col: &Coloring, path: &[MoveSite]) -> (Diagram, Coloring) {
    let mut cur = (d.clone(), col.clone());
    for &s in path {
        cur = apply(&cur.0, &cur.1, s).expect("replaying a recorded move");
    }
    cur
}

fn replay_with_zone(
    d: &Diagram,
    col: &Coloring,
    zn: &[bool],
    path: &[MoveSite],
) -> (Diagram, Coloring, Vec<bool>) {
    let mut cur = (d.clone(), col.clone());
    let mut z = zn.to_vec();
    for &s in path {
        evolve_zone(&mut z, &cur.0, &s);
        cur = apply(&cur.0, &cur.1, s).expect("replaying a recorded move");
    }
    (cur.0, cur.1, z)
}

/// Candidate moves anchored to a zone: pushes need one operand at a zone
/// crossing and must mint a color that is neither the target nor forbidden,
/// slides need a triangle corner there, and shrinking moves are always in.
fn sites_in_zone(
    d: &Diagram,
    col: &Coloring,
    c: u16,
    zn: Option<&[bool]>,
    forbidden: &BTreeSet<u16>,
    allow_r1_add: bool,
) -> Vec<MoveSite> {
    enumerate_sites(d, allow_r1_add)
        .into_iter()
        .filter(|s| match *s {
            MoveSite::R2Push {
                mover,
                target,
                mover_over,
            } => {
                if let Some(zn) = zn {
                    if !(zn[mover.crossing()] || zn[target.crossing()]) {
                        return false;
                    }
                }
                let a = col.colors[d.arc_of(d.seg_at(mover)).0 as usize] as i32;
                let b = col.colors[d.arc_of(d.seg_at(target)).0 as usize] as i32;
                let produced = m(if mover_over { 2 * a - b } else { 2 * b - a });
                produced != c && !forbidden.contains(&produced)
            }
            MoveSite::R3 { dart } => match zn {
                Some(zn) => orbit(d, dart).iter().any(|dd| zn[dd.crossing()]),
                None => true,
            },
            MoveSite::R1Add { seg, .. } => match zn {
                Some(zn) => {
                    let [e0, e1] = d.seg_darts(seg);
                    zn[e0.crossing()] || zn[e1.crossing()]
                }
                None => true,
            },
            _ => true,
        })
        .collect()
}

/// Shrinking moves never introduce colors (their transport is pure
/// provenance), so they are always safe to apply greedily.
fn cleanup(mut d: Diagram, mut col: Coloring, path: &mut Vec<MoveSite>) -> (Diagram, Coloring) {
    loop {
        let site = enumerate_sites(&d, false)
            .into_iter()
            .find(|s| matches!(s, MoveSite::R1Remove { .. } | MoveSite::R2Pull { .. }));
        match site {
            Some(s) => {
                let (nd, ncol) = apply(&d, &col, s).expect("shrinking move");
                path.push(s);
                d = nd;
                col = ncol;
            }
            None => return (d, col),
        }
    }
}

type Goal = (Diagram, Coloring, Vec<MoveSite>);

/// One bounded best-first search for a single occurrence-count decrease.
/// Returns up to four goal states ranked by remaining difficulty, footprint,
/// size, and path length; None when the budget runs out first.
#[allow(clippy::too_many_arguments)]
fn search(
    d: &Diagram,
    col: &Coloring,
    order: &[u16],
    pos: usize,
    forbidden: &BTreeSet<u16>,
    zone: Option<&Vec<bool>>,
    budget: usize,
    occ_cap: usize,
    max_len: usize,
    allow_r1_add: bool,
    stats: &mut Stats,
) -> Option<Vec<Goal>> {
    let c = order[pos];
    let start_occ = occurrences(d, col, c);
    let max_cx = d.crossing_count() + 8;
    // the frontier holds paths only; states are replayed on pop
    type Key = (usize, usize, usize, usize);
    let mut heap: BinaryHeap<Reverse<Key>> = BinaryHeap::new();
    let mut paths: Vec<Vec<MoveSite>> = vec![Vec::new()];
    let mut seen: HashSet<u64> = HashSet::new();
    let key = |code: &Vec<u32>| -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        code.hash(&mut h);
        h.finish()
    };
    seen.insert(key(&d.canonical_with_colors(&col.colors)));
    heap.push(Reverse((start_occ, d.crossing_count(), 0, 0)));
    let mut nodes = 0;
    // once a goal is found, linger briefly to find a better-ranked one
    let mut goals: Vec<(u64, usize, Vec<u32>, Vec<MoveSite>)> = Vec::new();
    let mut deadline = budget;
    while let Some(Reverse((_o, _cx, _len, idx))) = heap.pop() {
        let spath = std::mem::take(&mut paths[idx]);
        let (sd, scol, szn) = match zone {
            Some(z) => replay_with_zone(d, col, z, &spath),
            None => {
                let (a, b) = replay_steps(d, col, &spath);
                (a, b, Vec::new())
            }
        };
        nodes += 1;
        if nodes > deadline {
            break;
        }
        let zn_ref: Option<&[bool]> = zone.map(|_| szn.as_slice());
        for site in sites_in_zone(&sd, &scol, c, zn_ref, forbidden, allow_r1_add) {
            let Ok((nd, ncol)) = apply(&sd, &scol, site) else {
                continue;
            };
            if palette_of(&ncol).intersection(forbidden).next().is_some() {
                continue;
            }
            let no = occurrences(&nd, &ncol, c);
            if no > start_occ + occ_cap {
                continue;
            }
            if !seen.insert(key(&nd.canonical_with_colors(&ncol.colors))) {
                continue;
            }
            let mut npath = spath.clone();
            npath.push(site);
            if no < start_occ {
                if goals.is_empty() {
                    deadline = nodes.saturating_add(150).min(budget);
                }
                let diff = state_difficulty(&nd, &ncol, order, pos);
                let fut = future_occ(&nd, &ncol, order, pos);
                let canon = nd.canonical_with_colors(&ncol.colors);
                goals.push((diff + fut as u64, nd.crossing_count(), canon, npath));
                continue;
            }
            if npath.len() >= max_len || nd.crossing_count() > max_cx {
                continue;
            }
            let nidx = paths.len();
            let prio = (no, nd.crossing_count(), npath.len(), nidx);
            paths.push(npath);
            heap.push(Reverse(prio));
        }
        if !goals.is_empty() && nodes >= deadline {
            break;
        }
    }
    stats.nodes += nodes;
    // rank by remaining difficulty + footprint, then size, then the state's
    // canonical code (the deterministic tie-break)
    goals.sort_by(|x, y| (x.0, x.1, &x.2).cmp(&(y.0, y.1, &y.2)));
    if goals.is_empty() {
        return None;
    }
    let out: Vec<Goal> = goals
        .into_iter()
        .take(4)
        .map(|(_, _, _, path)| {
            let (nd, ncol) = replay_steps(d, col, &path);
            (nd, ncol, path)
        })
        .collect();
    Some(out)
}

/// Diagnostic logging for engine runs, enabled by setting FOX13_TRACE.
fn trace_on() -> bool {
    std::env::var_os("FOX13_TRACE").is_some()
}

#[derive(Clone, Copy)]
struct Rounds {
    zone_rounds: [Option<(usize, usize, usize)>; 2],
    global_round: (usize, usize, usize),
    attempt_cap: usize,
}

fn cheap_rounds(b: usize) -> Rounds {
    Rounds {
        zone_rounds: [Some((b * 3 / 100, 4, 6)), None],
        global_round: (b * 2 / 25, 4, 7),
        attempt_cap: b * 6 / 5,
    }
}

fn deep_rounds(b: usize) -> Rounds {
    Rounds {
        zone_rounds: [Some((b * 3 / 100, 4, 5)), Some((b * 3 / 10, 4, 7))],
        global_round: (b * 3 / 5, 4, 8),
        attempt_cap: b * 4,
    }
}

/// Try each occurrence's own neighbourhood first — easiest table cells first,
/// smallest zones first, hard cells with a doubled budget — and fall back to
/// an everything-at-once search only when all scoped attempts fail.
#[allow(clippy::too_many_arguments)]
fn reduce_once(
    d: &Diagram,
    col: &Coloring,
    order: &[u16],
    pos: usize,
    eliminated: &BTreeSet<u16>,
    rounds: &Rounds,
    node_cap: usize,
    allow_r1_add: bool,
    stats: &mut Stats,
) -> Option<Vec<Goal>> {
    let c = order[pos];
    let insts = classify(d, col, c).unwrap_or_default();
    // at a live stage the eliminated colors are really gone, so no
    // beta/gamma/delta occurrence can sit on an X cell (their X-conditions
    // name colors of real arcs); alpha neighbors are walked, not adjacent,
    // so those stay exempt
    debug_assert!(insts.iter().all(|inst| inst.kind == InstanceKind::Alpha
        || !matches!(catalog_lookup(inst, eliminated), Lookup::Impossible)));
    let mut zones: Vec<(u32, usize, Vec<bool>)> = insts
        .iter()
        .map(|inst| {
            let zn = instance_zone(d, inst);
            let size = zn.iter().filter(|&&b| b).count();
            (instance_weight(inst, eliminated), size, zn)
        })
        .collect();
    zones.sort_by(|x, y| (x.0, x.1, &x.2).cmp(&(y.0, y.1, &y.2)));
    // staged: a cheap pass over every zone catches the common shallow
    // reductions before any deep attempt starts burning budget on the wrong
    // occurrence
    for (round_idx, round) in rounds.zone_rounds.iter().flatten().enumerate() {
        let &(b, cap, len) = round;
        for (w, _, zn) in &zones {
            if stats.nodes >= node_cap {
                return None;
            }
            let b = if *w >= 4 && round_idx > 0 { b * 2 } else { b };
            if let Some(r) = search(
                d,
                col,
                order,
                pos,
                eliminated,
                Some(zn),
                b,
                cap,
                len,
                allow_r1_add,
                stats,
            ) {
                return Some(r);
            }
        }
    }
    if stats.nodes >= node_cap {
        return None;
    }
    let (b, cap, len) = rounds.global_round;
    search(
        d, col, order, pos, eliminated, None, b, cap, len, allow_r1_add, stats,
    )
}

/// One stage's record inside a run: the state it started from and the moves
/// that cleared it.
struct PhaseRecord {
    target: u16,
    start_d: Diagram,
    start_col: Coloring,
    steps: Vec<MoveSite>,
}

struct Frame {
    phase: usize,
    steps: Vec<MoveSite>,
    alts: Vec<Goal>,
}

/// Walk the whole order with backtracking over alternative reduction goals.
/// Returns per-phase records on success, or the deepest state reached.
fn engine_run(
    d0: &Diagram,
    col0: &Coloring,
    order: &[u16],
    pre_eliminated: &BTreeSet<u16>,
    rounds: &Rounds,
    node_cap: usize,
    allow_r1_add: bool,
    stats: &mut Stats,
) -> Result<(Diagram, Coloring, Vec<PhaseRecord>), (usize, Vec<PhaseRecord>)> {
    let mut cur_d = d0.clone();
    let mut cur_col = col0.clone();
    let mut phase = 0usize;
    let mut stack: Vec<Frame> = Vec::new();
    let mut best: Option<(usize, Vec<PhaseRecord>)> = None;
    let mut backtracks = 0usize;
    let tracing = trace_on();
    loop {
        if phase == order.len() {
            let records = assemble_records(d0, col0, order, &stack);
            return Ok((cur_d, cur_col, records));
        }
        let c = order[phase];
        if occurrences(&cur_d, &cur_col, c) == 0 {
            phase += 1;
            if best.as_ref().map_or(true, |(p, _)| phase > *p) {
                best = Some((phase, assemble_records(d0, col0, order, &stack)));
            }
            continue;
        }
        if tracing {
            eprintln!(
                "    phase c={c} occ={} cx={} nodes={} bt={backtracks}",
                occurrences(&cur_d, &cur_col, c),
                cur_d.crossing_count(),
                stats.nodes
            );
        }
        let eliminated: BTreeSet<u16> = pre_eliminated
            .iter()
            .copied()
            .chain(order[..phase].iter().copied())
            .collect();
        let got = if stats.nodes < node_cap {
            reduce_once(
                &cur_d,
                &cur_col,
                order,
                phase,
                &eliminated,
                rounds,
                node_cap,
                allow_r1_add,
                stats,
            )
        } else {
            None
        };
        match got {
            Some(mut goals) => {
                let (nd, ncol, mut path) = goals.remove(0);
                let (nd, ncol) = cleanup(nd, ncol, &mut path);
                stack.push(Frame {
                    phase,
                    steps: path,
                    alts: goals,
                });
                cur_d = nd;
                cur_col = ncol;
            }
            None => {
                if stats.nodes >= node_cap {
                    let fallback = best
                        .take()
                        .unwrap_or_else(|| (phase, assemble_records(d0, col0, order, &stack)));
                    return Err(fallback);
                }
                // walk back up to the nearest frame with an untried goal
                loop {
                    match stack.pop() {
                        Some(mut fr) => {
                            if fr.alts.is_empty() {
                                continue;
                            }
                            let (nd, ncol, mut path) = fr.alts.remove(0);
                            backtracks += 1;
                            phase = fr.phase;
                            let (nd, ncol) = cleanup(nd, ncol, &mut path);
                            stack.push(Frame {
                                phase: fr.phase,
                                steps: path,
                                alts: fr.alts,
                            });
                            cur_d = nd;
                            cur_col = ncol;
                            break;
                        }
                        None => {
                            let fallback = best.take().unwrap_or_else(|| {
                                (phase, assemble_records(d0, col0, order, &[]))
                            });
                            return Err(fallback);
                        }
                    }
                }
            }
        }
    }
}

/// Group the frame stack into one record per phase of the order.
fn assemble_records(
    d0: &Diagram,
    col0: &Coloring,
    order: &[u16],
    stack: &[Frame],
) -> Vec<PhaseRecord> {
    let mut records = Vec::new();
    let mut cur_d = d0.clone();
    let mut cur_col = col0.clone();
    let mut fi = 0usize;
    for (pos, &c) in order.iter().enumerate() {
        let start_d = cur_d.clone();
        let start_col = cur_col.clone();
        let mut steps = Vec::new();
        while fi < stack.len() && stack[fi].phase == pos {
            steps.extend(stack[fi].steps.iter().copied());
            fi += 1;
        }
        if !steps.is_empty() {
            let (nd, ncol) = replay_steps(&start_d, &start_col, &steps);
            cur_d = nd;
            cur_col = ncol;
        }
        records.push(PhaseRecord {
            target: c,
            start_d,
            start_col,
            steps,
        });
    }
    records
}

fn trace_from_record(rec: &PhaseRecord) -> EliminationTrace {
    let mut palettes = vec![palette_of(&rec.start_col).into_iter().collect::<Vec<u16>>()];
    let mut cur = (rec.start_d.clone(), rec.start_col.clone());
    for &s in &rec.steps {
        cur = apply(&cur.0, &cur.1, s).expect("replaying a recorded move");
        palettes.push(palette_of(&cur.1).into_iter().collect());
    }
    EliminationTrace {
        target: rec.target,
        steps: rec.steps.clone(),
        palettes,
        success: occurrences(&cur.0, &cur.1, rec.target) == 0,
    }
}

fn check_preconditions(d: &Diagram, col: &Coloring) -> Result<(), ElimError> {
    if col.p != P || col.colors.len() != d.arc_class_count() || !col.is_valid(d) {
        return Err(ElimError::InvalidColoring);
    }
    if col.is_constant() {
        return Err(ElimError::TrivialColoring);
    }
    if determinant(d).is_zero() {
        return Err(ElimError::ZeroDeterminant);
    }
    Ok(())
}

/// Remove every occurrence of one color, keeping `eliminated` colors out of
/// play throughout. Returns the trace; on a dead end the error carries the
/// best partial trace found.
pub fn eliminate_color(
    d: &Diagram,
    col: &Coloring,
    c: u16,
    eliminated: &BTreeSet<u16>,
    config: &ElimConfig,
) -> Result<EliminationTrace, ElimError> {
    check_preconditions(d, col)?;
    if occurrences(d, col, c) == 0 {
        return Ok(EliminationTrace::empty(c, &palette_of(col)));
    }
    let order = [c];
    let mut stats = Stats { nodes: 0 };
    let mut last_records: Vec<PhaseRecord> = Vec::new();
    for rounds in [cheap_rounds(config.budget), deep_rounds(config.budget)] {
        let node_cap = stats.nodes + rounds.attempt_cap;
        match engine_run(
            d,
            col,
            &order,
            eliminated,
            &rounds,
            node_cap,
            config.allow_r1_add,
            &mut stats,
        ) {
            Ok((_, _, records)) => return Ok(trace_from_record(&records[0])),
            Err((_, records)) => last_records = records,
        }
    }
    let trace = last_records
        .first()
        .map(trace_from_record)
        .unwrap_or_else(|| EliminationTrace {
            target: c,
            steps: Vec::new(),
            palettes: vec![palette_of(col).into_iter().collect()],
            success: false,
        });
    Err(ElimError::BudgetExhausted {
        target: c,
        trace: Box::new(trace),
    })
}

/// Deterministic order of affine representatives for a coloring: the
/// identity first (the caller's own representative), then the rest by
/// predicted table difficulty of their start states.
fn ranked_variants(d: &Diagram, col: &Coloring) -> Vec<(u16, u16)> {
    let mut scored: Vec<(u64, u16, u16)> = Vec::new();
    for lam in 1..P {
        for mu in 0..P {
            if (lam, mu) == (1, 0) {
                continue;
            }
            let colors: Vec<u16> = col
                .colors
                .iter()
                .map(|&x| m(lam as i32 * x as i32 + mu as i32))
                .collect();
            let vcol = Coloring::new(P, colors);
            let score = state_difficulty(d, &vcol, &ELIMINATION_ORDER, 0);
            scored.push((score, lam, mu));
        }
    }
    scored.sort_unstable();
    let mut out = vec![(1, 0)];
    out.extend(scored.into_iter().map(|(_, lam, mu)| (lam, mu)));
    out
}

/// Run the whole elimination order on the coloring, racing affine
/// representatives when permitted. On success the final palette is inside
/// {0, 1, 5, 7, 10}.
pub fn run_sequence(
    d: &Diagram,
    col: &Coloring,
    config: &ElimConfig,
) -> Result<ElimOutcome, ElimError> {
    check_preconditions(d, col)?;
    let variants: Vec<(u16, u16)> = if config.affine_retry {
        ranked_variants(d, col)
            .into_iter()
            .take(config.max_variants.max(1))
            .collect()
    } else {
        vec![(1, 0)]
    };
    let mut stats = Stats { nodes: 0 };
    let empty = BTreeSet::new();
    let mut best_err: Option<(usize, u16, Vec<PhaseRecord>)> = None;
    let tracing = trace_on();
    for (pi, rounds) in [cheap_rounds(config.budget), deep_rounds(config.budget)]
        .into_iter()
        .enumerate()
    {
        for &(lam, mu) in &variants {
            let colors: Vec<u16> = col
                .colors
                .iter()
                .map(|&x| m(lam as i32 * x as i32 + mu as i32))
                .collect();
            let vcol = Coloring::new(P, colors);
            let node_cap = stats.nodes + rounds.attempt_cap;
            let t0 = std::time::Instant::now();
            let nodes_before = stats.nodes;
            if tracing {
                eprintln!(
                    "  [{}] variant λ={lam} μ={mu} (nodes so far {})",
                    if pi == 0 { "cheap" } else { "deep" },
                    stats.nodes
                );
            }
            match engine_run(
                d,
                &vcol,
                &ELIMINATION_ORDER,
                &empty,
                &rounds,
                node_cap,
                config.allow_r1_add,
                &mut stats,
            ) {
                Ok((fd, fcol, records)) => {
                    let traces: Vec<EliminationTrace> =
                        records.iter().map(trace_from_record).collect();
                    debug_assert!(traces.iter().all(|t| t.success));
                    debug_assert!(palette_of(&fcol)
                        .iter()
                        .all(|x| TARGET_PALETTE.contains(x)));
                    return Ok(ElimOutcome {
                        diagram: fd,
                        coloring: fcol,
                        traces,
                        variant: (lam, mu),
                        nodes: stats.nodes,
                    });
                }
                Err((reached, records)) => {
                    if tracing {
                        eprintln!(
                            "    stuck at c={} after {} nodes in {:?}",
                            ELIMINATION_ORDER[reached.min(7)],
                            stats.nodes - nodes_before,
                            t0.elapsed()
                        );
                    }
                    if best_err.as_ref().map_or(true, |(p, _, _)| reached > *p) {
                        let stuck = ELIMINATION_ORDER[reached.min(7)];
                        best_err = Some((reached, stuck, records));
                    }
                }
            }
            if !config.affine_retry {
                break;
            }
        }
    }
    let (reached, stuck, records) = best_err.expect("at least one attempt ran");
    let trace = records
        .get(reached)
        .map(trace_from_record)
        .unwrap_or_else(|| EliminationTrace {
            target: stuck,
            steps: Vec::new(),
            palettes: vec![palette_of(col).into_iter().collect()],
            success: false,
        });
    Err(ElimError::BudgetExhausted {
        target: stuck,
        trace: Box::new(trace),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coloring_basis;
    use crate::corpus;

    fn corpus_coloring(name: &str) -> (Diagram, Coloring) {
        let e = corpus::catalog()
            .iter()
            .find(|e| e.name == name)
            .unwrap()
            .clone();
        let basis = coloring_basis(&e.diagram, 13);
        (e.diagram, Coloring::new(13, basis.vectors[1].clone()))
    }

    #[test]
    fn classify_kink_constant_is_alpha() {
        // a lone kink colored constantly: one monochromatic crossing, one
        // arc absorbed into it
        let d = Diagram::parse("X(1,1,2,2)").unwrap();
        let col = Coloring::new(13, vec![12]);
        let insts = classify(&d, &col, 12).unwrap();
        assert_eq!(insts.len(), 1);
        assert_eq!(insts[0].kind, InstanceKind::Alpha);
        assert_eq!(insts[0].site, Site::Crossing(0));
        assert_eq!(insts[0].a, None); // the whole component carries 12
        assert!(matches!(
            classify(&d, &col, 5),
            Err(ElimError::ColorAbsent(5))
        ));
    }

    #[test]
    fn classify_partitions_occurrences() {
        for name in ["6_3", "7_3", "8_1"] {
            let (d, col) = corpus_coloring(name);
            for c in 0..13u16 {
                let Ok(insts) = classify(&d, &col, c) else {
                    continue;
                };
                // crossing instances = crossings with over-color c
                let overs = (0..d.crossing_count())
                    .filter(|&i| col.colors[d.crossing_view(i).over.0 as usize] == c)
                    .count();
                let crossing_insts = insts
                    .iter()
                    .filter(|i| matches!(i.site, Site::Crossing(_)))
                    .count();
                assert_eq!(crossing_insts, overs);
                // every arc colored c is a gamma/delta site or ends under a
                // monochromatic crossing
                for arc in 0..d.arc_class_count() {
                    if col.colors[arc] != c {
                        continue;
                    }
                    let as_site = insts
                        .iter()
                        .filter(|i| i.site == Site::Arc(arc as u32))
                        .count();
                    let ends = arc_end_darts(&d, ArcId(arc as u32));
                    let absorbed = ends
                        .iter()
                        .any(|&e| over_color_at(&d, &col, e) == c);
                    assert_eq!(as_site, usize::from(!absorbed), "{name} arc {arc}");
                    if let Some(inst) =
                        insts.iter().find(|i| i.site == Site::Arc(arc as u32))
                    {
                        let x = over_color_at(&d, &col, ends[0]);
                        let y = over_color_at(&d, &col, ends[1]);
                        match inst.kind {
                            InstanceKind::Gamma => {
                                assert_ne!(x, y);
                                assert_eq!((inst.a, inst.b), (Some(x), Some(y)));
                            }
                            InstanceKind::Delta => {
                                assert_eq!(x, y);
                                assert_eq!(inst.a, Some(x));
                            }
                            _ => panic!("arc site classified as {:?}", inst.kind),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn guard_check_frozen_cases() {
        let beta1 = find_spec(InstanceKind::Beta, 1, false).unwrap();
        let forb: BTreeSet<u16> = [12].into_iter().collect();
        assert_eq!(produced_colors(beta1, 5, 5, 12), vec![11, 4]);
        assert!(guard_check(beta1, 5, 5, 12, &forb));
        let beta2 = find_spec(InstanceKind::Beta, 2, false).unwrap();
        assert_eq!(produced_colors(beta2, 5, 5, 11), vec![4]);
        let delta1 = find_spec(InstanceKind::Delta, 1, false).unwrap();
        assert_eq!(produced_colors(delta1, 7, 7, 11), vec![12, 8]);
        assert!(!guard_check(delta1, 7, 7, 11, &forb));
        let delta8 = find_spec(InstanceKind::Delta, 8, false).unwrap();
        assert_eq!(produced_colors(delta8, 1, 1, 8), vec![2, 2, 9]);
    }

    #[test]
    fn catalog_lookup_frozen_cases() {
        let elim_12_11: BTreeSet<u16> = [12, 11].into_iter().collect();
        let beta = |a: u16| Instance {
            kind: InstanceKind::Beta,
            site: Site::Crossing(0),
            a: Some(a),
            b: Some(m(2 * 6 - a as i32)),
            c: 6,
        };
        match catalog_lookup(&beta(3), &elim_12_11) {
            Lookup::Covered { spec, swapped } => {
                assert_eq!(spec.name, "beta1");
                assert!(!swapped);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(catalog_lookup(&beta(0), &elim_12_11), Lookup::Impossible);
        // wrong stage: same instance, mismatched eliminated set
        assert_eq!(
            catalog_lookup(&beta(3), &BTreeSet::new()),
            Lookup::NotCovered
        );
        let gamma = Instance {
            kind: InstanceKind::Gamma,
            site: Site::Arc(0),
            a: Some(4),
            b: Some(2),
            c: 3,
        };
        let elim3: BTreeSet<u16> = [12, 11, 6].into_iter().collect();
        match catalog_lookup(&gamma, &elim3) {
            Lookup::Covered { spec, swapped } => {
                assert_eq!(spec.name, "gamma10");
                assert!(swapped);
            }
            other => panic!("{other:?}"),
        }
        // no tables exist for the first two colors of the order
        let early = Instance {
            kind: InstanceKind::Beta,
            site: Site::Crossing(0),
            a: Some(5),
            b: Some(6),
            c: 12,
        };
        assert_eq!(catalog_lookup(&early, &BTreeSet::new()), Lookup::NotCovered);
    }

    #[test]
    fn eliminate_absent_color_is_empty_trace() {
        let (d, col) = corpus_coloring("6_3");
        let missing = (0..13u16).find(|c| !col.colors.contains(c)).unwrap();
        let trace =
            eliminate_color(&d, &col, missing, &BTreeSet::new(), &ElimConfig::default())
                .unwrap();
        assert!(trace.success);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.palettes.len(), 1);
    }

    #[test]
    fn eliminate_color_12_clears_every_occurrence() {
        let (d, col) = corpus_coloring("6_3");
        let c = 12;
        assert!(occurrences(&d, &col, c) > 0);
        let trace = eliminate_color(&d, &col, c, &BTreeSet::new(), &ElimConfig::default())
            .unwrap();
        assert!(trace.success);
        assert!(!trace.steps.is_empty());
        assert_eq!(trace.palettes.len(), trace.steps.len() + 1);
        let (fd, fcol) = replay_steps(&d, &col, &trace.steps);
        assert_eq!(occurrences(&fd, &fcol, c), 0);
        assert!(fcol.is_valid(&fd));
        // the trace's recorded palettes match a fresh replay
        assert_eq!(
            trace.palettes.last().unwrap(),
            &palette_of(&fcol).into_iter().collect::<Vec<u16>>()
        );
    }

    #[test]
    fn eliminate_with_kinked_monochromatic_crossing() {
        let (d, col) = corpus_coloring("6_3");
        // kink an arc colored 12 so a monochromatic crossing exists
        let arc = col.colors.iter().position(|&x| x == 12).unwrap();
        let seg = d.arc_members(ArcId(arc as u32))[0];
        let (kd, kcol) = apply(
            &d,
            &col,
            MoveSite::R1Add {
                seg,
                side: false,
                parity: false,
            },
        )
        .unwrap();
        let insts = classify(&kd, &kcol, 12).unwrap();
        assert!(insts
            .iter()
            .any(|i| i.kind == InstanceKind::Alpha && i.a.is_some()));
        let trace =
            eliminate_color(&kd, &kcol, 12, &BTreeSet::new(), &ElimConfig::default())
                .unwrap();
        assert!(trace.success);
    }

    #[test]
    fn run_sequence_6_3_reaches_five_colors_and_repeats() {
        let (d, col) = corpus_coloring("6_3");
        let out = run_sequence(&d, &col, &ElimConfig::default()).unwrap();
        assert_eq!(out.traces.len(), 8);
        let final_palette = palette_of(&out.coloring);
        assert!(final_palette.iter().all(|x| TARGET_PALETTE.contains(x)));
        assert_eq!(final_palette.len(), 5);
        assert!(out.coloring.is_valid(&out.diagram));
        // monotone progress: once a color is gone it never reappears
        for (k, t) in out.traces.iter().enumerate() {
            assert!(t.success);
            let banned = &ELIMINATION_ORDER[..k];
            for pal in &t.palettes {
                assert!(banned.iter().all(|b| !pal.contains(b)));
            }
            assert!(!t.palettes.last().unwrap().contains(&t.target));
        }
        // deterministic: a second run picks the same variant and traces
        let out2 = run_sequence(&d, &col, &ElimConfig::default()).unwrap();
        assert_eq!(out.variant, out2.variant);
        assert_eq!(out.traces, out2.traces);
        // and a run on the finished coloring has nothing to do
        let out3 = run_sequence(&out.diagram, &out.coloring, &ElimConfig::default()).unwrap();
        assert!(out3.traces.iter().all(|t| t.steps.is_empty()));
        assert_eq!(out3.variant, (1, 0));
    }

    #[test]
    fn run_sequence_rejects_bad_inputs() {
        let (d, col) = corpus_coloring("6_3");
        let constant = Coloring::new(13, vec![3; col.colors.len()]);
        assert!(matches!(
            run_sequence(&d, &constant, &ElimConfig::default()),
            Err(ElimError::TrivialColoring)
        ));
        let wrong = Coloring::new(13, {
            let mut v = col.colors.clone();
            v[0] = (v[0] + 1) % 13;
            v
        });
        assert!(matches!(
            run_sequence(&d, &wrong, &ElimConfig::default()),
            Err(ElimError::InvalidColoring)
        ));
        // a split union of two trefoil-shaped components has determinant 0
        let split = Diagram::parse(
            "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3) X(7,10,8,11) X(9,12,10,7) X(11,8,12,9)",
        )
        .unwrap();
        let zeros = Coloring::new(13, vec![0, 0, 0, 1, 1, 1]);
        assert!(matches!(
            run_sequence(&split, &zeros, &ElimConfig::default()),
            Err(ElimError::ZeroDeterminant) | Err(ElimError::InvalidColoring)
        ));
    }
}
