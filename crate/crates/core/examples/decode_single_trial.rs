//! Samples one noisy trial, decodes it, and prints every intermediate step.

use raussim::decoder::{decode_detailed, TrialDump};
use raussim::sampler::{sample_keyed, LossModel, SampleParams};
use raussim::Lattice;

fn main() -> raussim::Result<()> {
    let lat = Lattice::new(5)?;
    let params = SampleParams::new(0.004, 1.14, LossModel::Direct { p_loss: 0.03 })?;
    let sample = sample_keyed(&lat, &params, 2024, 0);
    println!("{} lost, {} flipped of {} qubits", sample.lost.len(), sample.flips.len(), lat.num_qubits());

    match decode_detailed(&lat, &sample) {
        Ok(trace) => {
            println!(
                "{} supercells, {} defects, {} matched pairs, correction weight {}",
                trace.syndrome.num_supercells(),
                trace.syndrome.nodes.len(),
                trace.result.matching.len(),
                trace.result.correction.len()
            );
            println!("logical failure along x,y,z: {:?}", trace.result.logical_failure);
        }
        Err(abort) => println!("aborted: {abort:?}"),
    }

    let dump = TrialDump::new(&lat, 0, &sample);
    println!("{}", serde_json::to_string(&dump).expect("serializable"));
    Ok(())
}
