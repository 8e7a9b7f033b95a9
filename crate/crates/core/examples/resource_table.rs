//! Distance extrapolation and hybrid-qubit counts for the two reference
//! schemes, in both counting modes.

use raussim::resources::{table_row, write_table_csv, CountingMode, PRESETS};
use raussim::threshold::{extrapolate_distance, extrapolated_rate};

fn main() -> raussim::Result<()> {
    for target in [1e-6, 1e-9, 1e-12, 1e-15] {
        let d = extrapolate_distance(1.2e-3, 2e-4, 9, target)?;
        println!("target {target:e}: d = {d}, predicted p_L = {:.2e}", extrapolated_rate(1.2e-3, 2e-4, 9, d));
    }
    for mode in [CountingMode::AsPrinted, CountingMode::Explicit6l3] {
        println!("\n{}:", mode.name());
        let rows = PRESETS.iter().map(|p| table_row(p, mode)).collect::<raussim::Result<Vec<_>>>()?;
        write_table_csv(std::io::stdout().lock(), &rows).expect("stdout");
    }
    Ok(())
}
