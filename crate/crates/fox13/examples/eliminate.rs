//! Run the palette-reduction engine over the 13-divisible corpus members
//! and report timing, variant choice, and the final palette for each.
//!
//!     cargo run --release --example eliminate [name ...]

use std::time::Instant;

use fox13::algebra::{coloring_basis, determinant, Coloring};
use fox13::corpus;
use fox13::elimination::{run_sequence, ElimConfig};

use num_traits::Zero;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let config = ElimConfig::default();
    for entry in corpus::catalog() {
        if !args.is_empty() && !args.iter().any(|a| a == &entry.name) {
            continue;
        }
        let det = determinant(&entry.diagram);
        if det.is_zero() || (&det % 13u32).is_zero() == false {
            continue;
        }
        let basis = coloring_basis(&entry.diagram, 13);
        let col = Coloring::new(13, basis.vectors[1].clone());
        let t0 = Instant::now();
        let res = run_sequence(&entry.diagram, &col, &config);
        let dt = t0.elapsed();
        match res {
            Ok(out) => {
                let palette: Vec<u16> = out.coloring.palette().into_iter().collect();
                println!(
                    "{:6} ok    {:8.2?}  variant=({},{})  nodes={}  crossings {} -> {}  palette {:?}",
                    entry.name,
                    dt,
                    out.variant.0,
                    out.variant.1,
                    out.nodes,
                    entry.diagram.crossing_count(),
                    out.diagram.crossing_count(),
                    palette,
                );
            }
            Err(e) => {
                println!("{:6} FAIL  {:8.2?}  {}", entry.name, dt, e);
            }
        }
    }
}
