//! A corpus of rational (2-bridge) knot diagrams.
//!
//! Diagrams are grown as rational tangles from a twist vector: the entries
//! alternate runs of horizontal twists on the tangle's right side with runs
//! of vertical twists on its bottom, and the numerator closure ties NW to NE
//! and SW to SE.  The determinant of the closure is the continuant of the
//! vector, which gives every corpus entry a determinant computed by pure
//! integer recursion, independent of any linear algebra on the diagram.

use crate::diagram::Diagram;
use num_bigint::BigInt;

/// `K(a1..an) = an*K(a1..a_{n-1}) + K(a1..a_{n-2})`, the continued-fraction
/// numerator of the twist vector.
pub fn continuant(vector: &[u32]) -> BigInt {
    let mut prev = BigInt::from(1u32); // K()
    let mut cur = BigInt::from(vector[0]);
    for &a in &vector[1..] {
        let next = BigInt::from(a) * &cur + &prev;
        prev = cur;
        cur = next;
    }
    cur
}

struct TangleBuilder {
    crossings: Vec<[u32; 4]>,
    next: u32,
    nw: u32,
    ne: u32,
    sw: u32,
    se: u32,
}

impl TangleBuilder {
    /// The two-strand tangle with no crossings: horizontal strands when
    /// `vertical` is false (NW-NE, SW-SE), vertical strands otherwise.
    fn new(vertical: bool) -> Self {
        let (ne, sw) = if vertical { (2, 1) } else { (1, 2) };
        TangleBuilder {
            crossings: Vec::new(),
            next: 3,
            nw: 1,
            ne,
            sw,
            se: 2,
        }
    }

    fn fresh(&mut self) -> u32 {
        let l = self.next;
        self.next += 1;
        l
    }

    /// One horizontal twist: crosses the NE and SE strands.
    fn twist_right(&mut self) {
        let (a, b) = (self.fresh(), self.fresh());
        // counterclockwise from the crossing's NW end: [ne, se, b, a]
        self.crossings.push([self.ne, self.se, b, a]);
        self.ne = a;
        self.se = b;
    }

    /// One vertical twist: crosses the SW and SE strands.  Its handedness is
    /// opposite to `twist_right` so that mixed runs stay alternating instead
    /// of cancelling.
    fn twist_bottom(&mut self) {
        let (a, b) = (self.fresh(), self.fresh());
        // counterclockwise from the crossing's NW end: [sw, a, b, se]
        self.crossings.push([self.sw, a, b, self.se]);
        self.sw = a;
        self.se = b;
    }

    fn numerator_closure(mut self) -> Diagram {
        let mut free_loops = 0;
        for (x, y) in [(self.nw, self.ne), (self.sw, self.se)] {
            if x == y {
                free_loops += 1;
                continue;
            }
            for c in self.crossings.iter_mut() {
                for s in c.iter_mut() {
                    if *s == y {
                        *s = x;
                    }
                }
            }
            // later pairs may point at the label that was just merged away
            if self.sw == y {
                self.sw = x;
            }
            if self.se == y {
                self.se = x;
            }
        }
        let (d, _) = Diagram::from_raw(&self.crossings, free_loops)
            .expect("tangle closures are planar by construction");
        d
    }
}

/// The numerator closure of the rational tangle with the given twist vector.
///
/// Entries must be positive.  Twist runs alternate so that the *last* run is
/// horizontal — the closure of a tangle ending in bottom twists would just
/// wrap them into kinks and realize a different fraction.  Odd-length
/// vectors therefore start from the horizontal-strands tangle, even-length
/// ones from the vertical-strands tangle.
pub fn rational_knot(vector: &[u32]) -> Diagram {
    assert!(!vector.is_empty() && vector.iter().all(|&a| a > 0));
    let k = vector.len();
    let mut t = TangleBuilder::new(k % 2 == 0);
    for (i, &a) in vector.iter().enumerate() {
        let horizontal = (i + k) % 2 == 1;
        for _ in 0..a {
            if horizontal {
                t.twist_right();
            } else {
                t.twist_bottom();
            }
        }
    }
    t.numerator_closure()
}

/// Rational knots through eight crossings, named by their position in the
/// standard knot tables, with their twist vectors.
pub const CATALOG: &[(&str, &[u32])] = &[
    ("3_1", &[3]),
    ("4_1", &[2, 2]),
    ("5_1", &[5]),
    ("5_2", &[3, 2]),
    ("6_1", &[4, 2]),
    ("6_2", &[3, 1, 2]),
    ("6_3", &[2, 1, 1, 2]),
    ("7_1", &[7]),
    ("7_2", &[5, 2]),
    ("7_3", &[4, 3]),
    ("7_4", &[3, 1, 3]),
    ("7_5", &[3, 2, 2]),
    ("7_6", &[2, 2, 1, 2]),
    ("7_7", &[2, 1, 1, 1, 2]),
    ("8_1", &[6, 2]),
    ("8_2", &[5, 1, 2]),
    ("8_3", &[4, 4]),
    ("8_4", &[4, 1, 3]),
    ("8_6", &[3, 3, 2]),
    ("8_7", &[4, 1, 1, 2]),
    ("8_8", &[2, 3, 1, 2]),
    ("8_9", &[3, 1, 1, 3]),
    ("8_11", &[3, 2, 1, 2]),
    ("8_12", &[2, 2, 2, 2]),
    ("8_13", &[3, 1, 1, 1, 2]),
    ("8_14", &[2, 2, 1, 1, 2]),
];

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub vector: Vec<u32>,
    pub diagram: Diagram,
    pub determinant: BigInt,
}

/// Builds every catalog knot with its continuant determinant.
pub fn catalog() -> Vec<CorpusEntry> {
    CATALOG
        .iter()
        .map(|(name, vector)| CorpusEntry {
            name: name.to_string(),
            vector: vector.to_vec(),
            diagram: rational_knot(vector),
            determinant: continuant(vector),
        })
        .collect()
}

/// The corpus members whose determinant is divisible by 13 — exactly the
/// ones that admit nontrivial 13-colorings.
pub fn thirteen_divisible() -> Vec<CorpusEntry> {
    catalog()
        .into_iter()
        .filter(|e| (&e.determinant % BigInt::from(13u32)) == BigInt::from(0u32))
        .collect()
}

/// Renders the corpus in the `data/corpus.txt` line format:
/// `name [a1,a2,...] det=N pd=X(...) X(...) ...`
pub fn render_corpus() -> String {
    let mut out = String::new();
    for e in catalog() {
        let v: Vec<String> = e.vector.iter().map(|a| a.to_string()).collect();
        out.push_str(&format!(
            "{} [{}] det={} pd={}\n",
            e.name,
            v.join(","),
            e.determinant,
            e.diagram.serialize()
        ));
    }
    out
}

/// Parses the `data/corpus.txt` format back into entries.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, String> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: &str| format!("corpus line {}: {}", ln + 1, m);
        let (name, rest) = line.split_once(' ').ok_or_else(|| err("missing vector"))?;
        let (vec_s, rest) = rest.split_once(' ').ok_or_else(|| err("missing det"))?;
        let (det_s, pd_s) = rest.split_once(" pd=").ok_or_else(|| err("missing pd"))?;
        let vector: Vec<u32> = vec_s
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(|x| x.parse().map_err(|_| err("bad vector entry")))
            .collect::<Result<_, _>>()?;
        let determinant: BigInt = det_s
            .strip_prefix("det=")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| err("bad det"))?;
        let diagram = Diagram::parse(pd_s).map_err(|e| err(&e.to_string()))?;
        out.push(CorpusEntry {
            name: name.to_string(),
            vector,
            diagram,
            determinant,
        });
    }
    Ok(out)
}

/// The shipped corpus file.
pub const CORPUS_TEXT: &str = include_str!("../data/corpus.txt");

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra;

    #[test]
    fn continuants_of_known_vectors() {
        let expect: &[(&[u32], i64)] = &[
            (&[3], 3),
            (&[2, 2], 5),
            (&[5], 5),
            (&[3, 2], 7),
            (&[2, 1, 1, 2], 13),
            (&[4, 3], 13),
            (&[6, 2], 13),
            (&[2, 2, 1, 1, 2], 31),
        ];
        for (v, k) in expect {
            assert_eq!(continuant(v), BigInt::from(*k), "{v:?}");
        }
    }

    #[test]
    fn tangle_closures_match_their_continuants() {
        for (name, vector) in CATALOG {
            let d = rational_knot(vector);
            let total: u32 = vector.iter().sum();
            assert_eq!(d.crossing_count(), total as usize, "{name}");
            let det = algebra::determinant(&d);
            assert_eq!(det, continuant(vector), "{name}");
            // a determinant is only reported when the corank is 1, so this
            // also certifies each closure is a knot, not a split link
            assert_ne!(det, BigInt::from(0u32), "{name}");
        }
    }

    #[test]
    fn trefoil_closure_is_the_trefoil() {
        let d = rational_knot(&[3]);
        let t = Diagram::parse("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(
            crate::algebra::snf_signature(&d),
            crate::algebra::snf_signature(&t)
        );
        assert_eq!(d.arc_count(), 3);
    }

    #[test]
    fn thirteen_divisible_members() {
        let names: Vec<String> = thirteen_divisible().into_iter().map(|e| e.name).collect();
        assert_eq!(names, vec!["6_3", "7_3", "8_1"]);
    }

    #[test]
    fn corpus_file_matches_generator() {
        assert_eq!(CORPUS_TEXT, render_corpus());
        let entries = parse_corpus(CORPUS_TEXT).unwrap();
        assert_eq!(entries.len(), CATALOG.len());
        for (e, (name, vector)) in entries.iter().zip(CATALOG) {
            assert_eq!(e.name, *name);
            assert_eq!(e.vector, *vector);
            assert_eq!(e.determinant, continuant(vector));
            assert_eq!(
                e.diagram.canonical(),
                rational_knot(vector).canonical(),
                "{name}"
            );
        }
    }

    /// Rewrites `data/corpus.txt` from the generator.  Run explicitly with
    /// `cargo test -p fox13 regenerate_corpus_file -- --ignored`.
    #[test]
    #[ignore]
    fn regenerate_corpus_file() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/corpus.txt");
        std::fs::write(path, render_corpus()).unwrap();
    }

    #[test]
    fn corpus_determinants_all_odd_knots() {
        for e in catalog() {
            assert_eq!(&e.determinant % BigInt::from(2u32), BigInt::from(1u32));
        }
    }
}
