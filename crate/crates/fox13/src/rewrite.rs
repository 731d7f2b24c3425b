//! Reidemeister rewrites with color transport.
//!
//! Every move is expressed as a rebuild: a new raw crossing list plus a
//! provenance note for each segment saying which old arc's color it keeps
//! (or none, for pieces whose color the move must re-derive).  The rebuilt
//! diagram goes back through full validation, colors are transported by a
//! fixpoint pass over the crossing relations, and the resulting coloring is
//! checked against every relation.  A wiring or transport bug therefore
//! surfaces as a hard error instead of silently corrupting a search.
//!
//! Face orbits traverse each face clockwise (interior on the walker's
//! right): the `phi` successor of a dart crosses its segment away from the
//! dart's crossing and then turns counterclockwise.  All wiring below is
//! derived in that convention.

use crate::algebra::{self, Coloring};
use crate::diagram::{ArcId, Dart, Diagram, DiagramError, SegId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("site refers to parts the diagram does not have")]
    BadSite,
    #[error("the two darts do not bound a common face")]
    NotCofacial,
    #[error("the face exists but does not match the move's pattern")]
    PatternMismatch,
    #[error("no consistent transported coloring (illegal move for this coloring)")]
    NoValidColoring,
    #[error("rebuilt diagram failed validation: {0}")]
    Geometry(DiagramError),
}

/// Address of one Reidemeister move application.
///
/// Bigon and triangle sites are addressed by any dart of the face orbit;
/// enumeration emits the orbit's minimal dart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveSite {
    /// Kink the strand of `seg`: 4 variants from the curl side and whether
    /// the strand exits over or under itself.
    R1Add { seg: SegId, side: bool, parity: bool },
    /// Remove the kink whose curl is at this crossing.
    R1Remove { crossing: u32 },
    /// Slide a finger of `mover`'s segment across `target`'s segment through
    /// their common face; `mover_over` picks which strand ends up on top.
    R2Push {
        mover: Dart,
        target: Dart,
        mover_over: bool,
    },
    /// Retract the bigon containing this dart.
    R2Pull { dart: Dart },
    /// Slide the triangle containing this dart.
    R3 { dart: Dart },
}

/// A planned rebuild: new crossings, appended free loops (with the old arc
/// each inherits its color from), and provenance for fresh or re-derived
/// segment labels.  Old labels absent from `fresh` keep their own arc color.
#[derive(Debug)]
struct Rebuild {
    crossings: Vec<[u32; 4]>,
    add_loops: Vec<ArcId>,
    fresh: BTreeMap<u32, Option<ArcId>>,
}

/// The phi-orbit (face boundary) through `start`.
pub fn orbit(d: &Diagram, start: Dart) -> Vec<Dart> {
    let mut out = vec![start];
    let mut cur = d.phi(start);
    while cur != start {
        out.push(cur);
        cur = d.phi(cur);
    }
    out
}

fn raw_crossings(d: &Diagram) -> Vec<[u32; 4]> {
    d.crossings()
        .iter()
        .map(|c| [c[0].0, c[1].0, c[2].0, c[3].0])
        .collect()
}

/// Applies one move, transporting the coloring across it.
pub fn apply(
    d: &Diagram,
    colors: &Coloring,
    site: MoveSite,
) -> Result<(Diagram, Coloring), MoveError> {
    let rb = match site {
        MoveSite::R1Add { seg, side, parity } => r1_add(d, seg, side, parity)?,
        MoveSite::R1Remove { crossing } => r1_remove(d, crossing as usize)?,
        MoveSite::R2Push {
            mover,
            target,
            mover_over,
        } => r2_push(d, mover, target, mover_over)?,
        MoveSite::R2Pull { dart } => r2_pull(d, dart)?,
        MoveSite::R3 { dart } => r3(d, dart)?,
    };
    finish(d, colors, rb)
}

fn finish(d: &Diagram, colors: &Coloring, rb: Rebuild) -> Result<(Diagram, Coloring), MoveError> {
    let total_loops = d.free_loops() + rb.add_loops.len() as u32;
    let (nd, seg_map) =
        Diagram::from_raw(&rb.crossings, total_loops).map_err(MoveError::Geometry)?;
    let p = colors.p;
    let mut slots: Vec<Option<u16>> = vec![None; nd.arc_count()];
    let put = |idx: usize, c: u16, slots: &mut Vec<Option<u16>>| match slots[idx] {
        None => {
            slots[idx] = Some(c);
            Ok(())
        }
        Some(x) if x == c => Ok(()),
        _ => Err(MoveError::NoValidColoring),
    };
    for (&raw, &nseg) in &seg_map {
        let prov = match rb.fresh.get(&raw) {
            Some(&p) => p,
            None => {
                debug_assert!((raw as usize) < d.segment_count());
                Some(d.arc_of(SegId(raw)))
            }
        };
        if let Some(oa) = prov {
            let c = colors.colors[oa.0 as usize];
            put(nd.arc_of(nseg).0 as usize, c, &mut slots)?;
        }
    }
    for k in 0..d.free_loops() as usize {
        let c = colors.colors[d.arc_class_count() + k];
        put(nd.arc_class_count() + k, c, &mut slots)?;
    }
    for (k, oa) in rb.add_loops.iter().enumerate() {
        let c = colors.colors[oa.0 as usize];
        put(
            nd.arc_class_count() + d.free_loops() as usize + k,
            c,
            &mut slots,
        )?;
    }
    solve_unknowns(&nd, p, &mut slots)?;
    let out: Vec<u16> = slots.into_iter().map(|s| s.unwrap()).collect();
    if !algebra::is_valid_coloring(&nd, p, &out) {
        return Err(MoveError::NoValidColoring);
    }
    Ok((nd, Coloring::new(p, out)))
}

/// Fills color slots the provenance left open by propagating crossing
/// relations until a fixpoint; fails if any stay undetermined.
fn solve_unknowns(nd: &Diagram, p: u16, slots: &mut [Option<u16>]) -> Result<(), MoveError> {
    let pq = p as i64;
    let rels: Vec<Vec<(usize, i64)>> = (0..nd.crossing_count())
        .map(|i| {
            let v = nd.crossing_view(i);
            let mut terms: BTreeMap<usize, i64> = BTreeMap::new();
            *terms.entry(v.over.0 as usize).or_insert(0) += 2;
            for u in v.under {
                *terms.entry(u.0 as usize).or_insert(0) -= 1;
            }
            terms.into_iter().filter(|&(_, k)| k % pq != 0).collect()
        })
        .collect();
    loop {
        let mut progress = false;
        for rel in &rels {
            let mut known = 0i64;
            let mut unknown: Option<(usize, i64)> = None;
            let mut solvable = true;
            for &(arc, k) in rel {
                match slots[arc] {
                    Some(c) => known += k * c as i64,
                    None => {
                        if unknown.replace((arc, k)).is_some() {
                            solvable = false;
                        }
                    }
                }
            }
            if let (true, Some((arc, k))) = (solvable, unknown) {
                let kk = k.rem_euclid(pq) as u64;
                let inv = algebra::inv_mod(kk, pq as u64);
                let rhs = (-known).rem_euclid(pq) as u64;
                slots[arc] = Some((rhs * inv % pq as u64) as u16);
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    if slots.iter().any(|s| s.is_none()) {
        return Err(MoveError::NoValidColoring);
    }
    Ok(())
}

fn r1_add(d: &Diagram, seg: SegId, side: bool, parity: bool) -> Result<Rebuild, MoveError> {
    if seg.0 as usize >= d.segment_count() {
        return Err(MoveError::BadSite);
    }
    let mut crossings = raw_crossings(d);
    let base = d.segment_count() as u32;
    let (lam, pa, pb) = (base, base + 1, base + 2);
    let [d0, d1] = d.seg_darts(seg);
    crossings[d0.crossing()][d0.slot() as usize] = pa;
    crossings[d1.crossing()][d1.slot() as usize] = pb;
    // the curl occupies two adjacent slots; the strand pieces take the rest
    let k = match (side, parity) {
        (false, false) => [lam, lam, pa, pb],
        (false, true) => [pb, lam, lam, pa],
        (true, false) => [lam, lam, pb, pa],
        (true, true) => [pa, lam, lam, pb],
    };
    crossings.push(k);
    let arc = d.arc_of(seg);
    let fresh = [(lam, Some(arc)), (pa, Some(arc)), (pb, Some(arc))]
        .into_iter()
        .collect();
    Ok(Rebuild {
        crossings,
        add_loops: Vec::new(),
        fresh,
    })
}

fn r1_remove(d: &Diagram, k: usize) -> Result<Rebuild, MoveError> {
    if k >= d.crossing_count() {
        return Err(MoveError::BadSite);
    }
    // a curl at this crossing shows up as a one-dart face: alpha of the
    // monogon dart is its own counterclockwise predecessor
    let j = (0..4)
        .find(|&j| d.alpha(Dart::new(k, j)) == Dart::new(k, (j + 3) % 4))
        .ok_or(MoveError::PatternMismatch)?;
    let rec = d.crossing(k);
    let x = rec[(j as usize + 1) % 4].0;
    let y = rec[(j as usize + 2) % 4].0;
    let mut crossings = raw_crossings(d);
    crossings.remove(k);
    let mut add_loops = Vec::new();
    if x == y {
        // the strand closed on itself: the kink was its last crossing
        add_loops.push(d.arc_of(SegId(x)));
    } else {
        for c in crossings.iter_mut() {
            for s in c.iter_mut() {
                if *s == y {
                    *s = x;
                }
            }
        }
    }
    Ok(Rebuild {
        crossings,
        add_loops,
        fresh: BTreeMap::new(),
    })
}

fn r2_push(d: &Diagram, d_s: Dart, d_t: Dart, mover_over: bool) -> Result<Rebuild, MoveError> {
    let n_darts = d.crossing_count() * 4;
    if d_s.0 as usize >= n_darts || d_t.0 as usize >= n_darts {
        return Err(MoveError::BadSite);
    }
    let s = d.seg_at(d_s);
    let t = d.seg_at(d_t);
    if s == t {
        return Err(MoveError::PatternMismatch);
    }
    if !orbit(d, d_s).contains(&d_t) {
        return Err(MoveError::NotCofacial);
    }
    let mut crossings = raw_crossings(d);
    let base = d.segment_count() as u32;
    let (s1, s_mid, s2, t1, t_mid, t2) = (base, base + 1, base + 2, base + 3, base + 4, base + 5);
    let write = |crossings: &mut Vec<[u32; 4]>, at: Dart, label: u32| {
        crossings[at.crossing()][at.slot() as usize] = label;
    };
    write(&mut crossings, d_s, s1);
    write(&mut crossings, d.alpha(d_s), s2);
    write(&mut crossings, d_t, t1);
    write(&mut crossings, d.alpha(d_t), t2);
    // The face orbit runs clockwise, so it leaves s's d_s end and t's d_t
    // end in opposite boundary directions: the finger's first crossing N1
    // joins the s1 side to the t2 side, and N2 joins s2 to t1.
    if mover_over {
        crossings.push([t2, s_mid, t_mid, s1]);
        crossings.push([t_mid, s_mid, t1, s2]);
    } else {
        crossings.push([s1, t2, s_mid, t_mid]);
        crossings.push([s2, t_mid, s_mid, t1]);
    }
    let (sa, ta) = (d.arc_of(s), d.arc_of(t));
    // the strand that dives under is cut: its middle piece gets re-derived
    let fresh: BTreeMap<u32, Option<ArcId>> = [
        (s1, Some(sa)),
        (s2, Some(sa)),
        (s_mid, if mover_over { Some(sa) } else { None }),
        (t1, Some(ta)),
        (t2, Some(ta)),
        (t_mid, if mover_over { None } else { Some(ta) }),
    ]
    .into_iter()
    .collect();
    Ok(Rebuild {
        crossings,
        add_loops: Vec::new(),
        fresh,
    })
}

fn r2_pull(d: &Diagram, dart: Dart) -> Result<Rebuild, MoveError> {
    if dart.0 as usize >= d.crossing_count() * 4 {
        return Err(MoveError::BadSite);
    }
    let orb = orbit(d, dart);
    if orb.len() != 2 {
        return Err(MoveError::PatternMismatch);
    }
    let (da, db) = (orb[0], orb[1]);
    let (p, q) = (da.crossing(), db.crossing());
    if p == q {
        return Err(MoveError::PatternMismatch);
    }
    // one bigon edge must run under at both crossings and the other over at
    // both; a mixed pair is a clasp, which no R2 removes
    let parities = |x: Dart| (x.slot() % 2, d.alpha(x).slot() % 2);
    let (under_dart, over_dart) = match (parities(da), parities(db)) {
        ((0, 0), (1, 1)) => (da, db),
        ((1, 1), (0, 0)) => (db, da),
        _ => return Err(MoveError::PatternMismatch),
    };
    let out_of = |x: Dart| {
        let far = Dart::new(x.crossing(), (x.slot() + 2) % 4);
        d.seg_at(far).0
    };
    let pairs = [
        (out_of(under_dart), out_of(d.alpha(under_dart))),
        (out_of(over_dart), out_of(d.alpha(over_dart))),
    ];
    let mut crossings = raw_crossings(d);
    let (hi, lo) = (p.max(q), p.min(q));
    crossings.remove(hi);
    crossings.remove(lo);
    let mut add_loops = Vec::new();
    let mut rename: BTreeMap<u32, u32> = BTreeMap::new();
    for (x0, y0) in pairs {
        let x = *rename.get(&x0).unwrap_or(&x0);
        let y = *rename.get(&y0).unwrap_or(&y0);
        if x == y {
            add_loops.push(d.arc_of(SegId(x0)));
            continue;
        }
        for c in crossings.iter_mut() {
            for s in c.iter_mut() {
                if *s == y {
                    *s = x;
                }
            }
        }
        rename.insert(y, x);
    }
    Ok(Rebuild {
        crossings,
        add_loops,
        fresh: BTreeMap::new(),
    })
}

fn r3(d: &Diagram, dart: Dart) -> Result<Rebuild, MoveError> {
    if dart.0 as usize >= d.crossing_count() * 4 {
        return Err(MoveError::BadSite);
    }
    let orb = orbit(d, dart);
    if orb.len() != 3 {
        return Err(MoveError::PatternMismatch);
    }
    let corners = [orb[0].crossing(), orb[1].crossing(), orb[2].crossing()];
    if corners[0] == corners[1] || corners[1] == corners[2] || corners[0] == corners[2] {
        return Err(MoveError::PatternMismatch);
    }
    let edges = [d.seg_at(orb[0]), d.seg_at(orb[1]), d.seg_at(orb[2])];
    if edges[0] == edges[1] || edges[1] == edges[2] || edges[0] == edges[2] {
        return Err(MoveError::PatternMismatch);
    }
    // the slidable triangle has one side under at both corners (bottom), one
    // over at both (top), and one mixed (middle); anything else is the
    // impossible cyclic weave
    let profile = |x: Dart| (x.slot() % 2) + (d.alpha(x).slot() % 2);
    let mut seen = [0usize; 3];
    for &x in &orb {
        seen[profile(x) as usize] += 1;
    }
    if seen != [1, 1, 1] {
        return Err(MoveError::PatternMismatch);
    }
    let mut crossings = raw_crossings(d);
    // every side keeps its label but slides to its strand's far slot, while
    // the far piece from the strand's other corner takes the side's old slot
    for &x in &orb {
        let e = d.seg_at(x).0;
        let far = d.alpha(x);
        let (k, q) = (x.crossing(), x.slot() as usize);
        let (k2, q2) = (far.crossing(), far.slot() as usize);
        let old = raw_crossings(d);
        crossings[k][q] = old[k2][(q2 + 2) % 4];
        crossings[k][(q + 2) % 4] = e;
        crossings[k2][q2] = old[k][(q + 2) % 4];
        crossings[k2][(q2 + 2) % 4] = e;
    }
    // bottom and middle sides change arcs; their colors are re-derived
    let mut fresh = BTreeMap::new();
    for &x in &orb {
        if profile(x) != 2 {
            fresh.insert(d.seg_at(x).0, None);
        }
    }
    Ok(Rebuild {
        crossings,
        add_loops: Vec::new(),
        fresh,
    })
}

/// All applicable sites on a diagram.  `R1Add` sites are only emitted when
/// `include_r1_add` is set, since they never simplify anything on their own.
pub fn enumerate_sites(d: &Diagram, include_r1_add: bool) -> Vec<MoveSite> {
    let mut out = Vec::new();
    for k in 0..d.crossing_count() {
        if (0..4).any(|j| d.alpha(Dart::new(k, j)) == Dart::new(k, (j + 3) % 4)) {
            out.push(MoveSite::R1Remove { crossing: k as u32 });
        }
    }
    for face in d.faces() {
        let key = *face.iter().min().unwrap();
        match face.len() {
            2 => {
                if r2_pull(d, key).is_ok() {
                    out.push(MoveSite::R2Pull { dart: key });
                }
            }
            3 => {
                if r3(d, key).is_ok() {
                    out.push(MoveSite::R3 { dart: key });
                }
            }
            _ => {}
        }
        for &a in face {
            for &b in face {
                if d.seg_at(a) != d.seg_at(b) {
                    for mover_over in [true, false] {
                        out.push(MoveSite::R2Push {
                            mover: a,
                            target: b,
                            mover_over,
                        });
                    }
                }
            }
        }
    }
    if include_r1_add {
        for s in 0..d.segment_count() as u32 {
            for side in [false, true] {
                for parity in [false, true] {
                    out.push(MoveSite::R1Add {
                        seg: SegId(s),
                        side,
                        parity,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{coloring_basis, snf_signature};
    use crate::corpus;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    fn trefoil_rainbow() -> (Diagram, Coloring) {
        let d = Diagram::parse(TREFOIL).unwrap();
        let c = Coloring::new(3, vec![0, 1, 2]);
        assert!(c.is_valid(&d));
        (d, c)
    }

    #[test]
    fn r1_add_then_remove_round_trips() {
        let (d, c) = trefoil_rainbow();
        for seg in 0..6 {
            for side in [false, true] {
                for parity in [false, true] {
                    let site = MoveSite::R1Add {
                        seg: SegId(seg),
                        side,
                        parity,
                    };
                    let (d2, c2) = apply(&d, &c, site).unwrap();
                    assert_eq!(d2.crossing_count(), 4);
                    assert_eq!(d2.face_count(), 6);
                    assert_eq!(snf_signature(&d2), snf_signature(&d));
                    let removable: Vec<MoveSite> = enumerate_sites(&d2, false)
                        .into_iter()
                        .filter(|s| matches!(s, MoveSite::R1Remove { .. }))
                        .collect();
                    assert_eq!(removable.len(), 1, "seg {seg} {side} {parity}");
                    let (d3, c3) = apply(&d2, &c2, removable[0]).unwrap();
                    assert_eq!(
                        d3.canonical_with_colors(&c3.colors),
                        d.canonical_with_colors(&c.colors)
                    );
                }
            }
        }
    }

    #[test]
    fn kink_unknot_unwinds_to_circle() {
        let d = Diagram::parse("X(1,1,2,2)").unwrap();
        let c = Coloring::new(13, vec![7]);
        let (d2, c2) = apply(&d, &c, MoveSite::R1Remove { crossing: 0 }).unwrap();
        assert_eq!(d2.serialize(), "O");
        assert_eq!(c2.colors, vec![7]);
    }

    #[test]
    fn trefoil_is_reduced_no_shrinking_sites() {
        let d = Diagram::parse(TREFOIL).unwrap();
        let sites = enumerate_sites(&d, false);
        assert!(sites.iter().all(|s| matches!(s, MoveSite::R2Push { .. })));
        assert!(!sites.is_empty());
    }

    #[test]
    fn every_push_is_planar_invariant_and_pullable() {
        let (d, c) = trefoil_rainbow();
        let sig = snf_signature(&d);
        let dims: Vec<usize> = [3u16, 5, 13]
            .iter()
            .map(|&p| coloring_basis(&d, p).dim)
            .collect();
        let mut pushes = 0;
        for site in enumerate_sites(&d, false) {
            let MoveSite::R2Push { .. } = site else {
                continue;
            };
            pushes += 1;
            let (d2, c2) = apply(&d, &c, site).unwrap();
            assert_eq!(d2.crossing_count(), 5);
            assert_eq!(d2.face_count(), 7);
            assert_eq!(snf_signature(&d2), sig);
            let dims2: Vec<usize> = [3u16, 5, 13]
                .iter()
                .map(|&p| coloring_basis(&d2, p).dim)
                .collect();
            assert_eq!(dims2, dims);
            // some pull takes us straight back
            let back = enumerate_sites(&d2, false).into_iter().any(|s| {
                matches!(s, MoveSite::R2Pull { .. })
                    && apply(&d2, &c2, s).is_ok_and(|(d3, c3)| {
                        d3.canonical_with_colors(&c3.colors)
                            == d.canonical_with_colors(&c.colors)
                    })
            });
            assert!(back, "push {site:?} has no inverse pull");
        }
        assert!(pushes > 0);
    }

    #[test]
    fn hopf_bigons_are_clasps() {
        let d = Diagram::parse("X(1,4,2,3) X(3,2,4,1)").unwrap();
        for face in d.faces() {
            assert_eq!(face.len(), 2);
            assert_eq!(r2_pull(&d, face[0]).unwrap_err(), MoveError::PatternMismatch);
        }
    }

    #[test]
    fn trefoil_triangles_are_cyclic_not_slidable() {
        let d = Diagram::parse(TREFOIL).unwrap();
        let mut triangles = 0;
        for face in d.faces() {
            if face.len() == 3 {
                triangles += 1;
                assert_eq!(r3(&d, face[0]).unwrap_err(), MoveError::PatternMismatch);
            }
        }
        assert_eq!(triangles, 2);
    }

    /// Pushing one trefoil strand over another creates genuine R3 triangles;
    /// sliding one must preserve everything and be undone by sliding again.
    #[test]
    fn r3_preserves_and_is_an_involution() {
        let (d, c) = trefoil_rainbow();
        let mut tested = 0;
        for site in enumerate_sites(&d, false) {
            let MoveSite::R2Push { .. } = site else {
                continue;
            };
            let (d2, c2) = apply(&d, &c, site).unwrap();
            for s3 in enumerate_sites(&d2, false) {
                let MoveSite::R3 { .. } = s3 else { continue };
                tested += 1;
                let (d3, c3) = apply(&d2, &c2, s3).unwrap();
                assert_eq!(d3.crossing_count(), d2.crossing_count());
                assert_eq!(d3.face_count(), d2.face_count());
                assert_eq!(snf_signature(&d3), snf_signature(&d2));
                assert!(c3.is_valid(&d3));
                let back = enumerate_sites(&d3, false).into_iter().any(|s| {
                    matches!(s, MoveSite::R3 { .. })
                        && apply(&d3, &c3, s).is_ok_and(|(d4, c4)| {
                            d4.canonical_with_colors(&c4.colors)
                                == d2.canonical_with_colors(&c2.colors)
                        })
                });
                assert!(back, "slide {s3:?} has no inverse slide");
            }
        }
        assert!(tested > 0, "no R3 triangle arose from any trefoil push");
    }

    /// A long random walk: every enumerated move must apply cleanly and
    /// preserve validity, the torsion signature, and coloring-space
    /// dimensions, and the result must survive a serialize round trip.
    #[test]
    fn random_walk_preserves_invariants() {
        let entries = corpus::catalog();
        let six3 = entries.iter().find(|e| e.name == "6_3").unwrap();
        let basis = coloring_basis(&six3.diagram, 13);
        assert_eq!(basis.dim, 2);
        let mut d = six3.diagram.clone();
        let mut c = Coloring::new(13, basis.vectors[1].clone());
        assert!(c.is_valid(&d));
        let sig = snf_signature(&d);
        let dim = basis.dim;
        let mut rng = ChaCha8Rng::seed_from_u64(20260815);
        for step in 0..500 {
            let sites = enumerate_sites(&d, d.crossing_count() < 14);
            // steer the walk back down when it grows
            let shrinkers: Vec<MoveSite> = sites
                .iter()
                .copied()
                .filter(|s| matches!(s, MoveSite::R1Remove { .. } | MoveSite::R2Pull { .. }))
                .collect();
            let pool = if d.crossing_count() > 16 && !shrinkers.is_empty() {
                shrinkers
            } else {
                sites
            };
            let site = pool[rng.gen_range(0..pool.len())];
            let (d2, c2) = apply(&d, &c, site).unwrap_or_else(|e| {
                panic!("step {step}: site {site:?} failed with {e:?} on {}", d.serialize())
            });
            assert!(c2.is_valid(&d2), "step {step}");
            assert_eq!(snf_signature(&d2), sig, "step {step} {site:?}");
            assert_eq!(coloring_basis(&d2, 13).dim, dim, "step {step}");
            let reparsed = Diagram::parse(&d2.serialize()).unwrap();
            assert_eq!(reparsed.canonical(), d2.canonical(), "step {step}");
            d = d2;
            c = c2;
        }
    }
}
