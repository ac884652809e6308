//! Sweep the phase difference and the noise weight, writing the same CSV the
//! `sweep` subcommand produces, and print a coarse text rendering of
//! `c_l1 = p |sin(delta_phi)|`.
//!
//! Run with `cargo run --example coherence_sweep`.

use gravicoh::experiments::run_probe_mass_at_phase;
use std::f64::consts::PI;
use std::io::Write;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::temp_dir().join("coherence_sweep.csv");
    let mut file = std::fs::File::create(&path)?;
    writeln!(
        file,
        "var,value,delta_phi_raw,delta_phi_mod,c_l1,c_rel_ent,c_l1_closed,c_rel_closed"
    )?;

    let steps = 41;
    for i in 0..steps {
        let delta = 2.0 * PI * i as f64 / (steps - 1) as f64;
        let report = run_probe_mass_at_phase(delta, 1.0)?;
        let closed = report.closed_form.unwrap();
        writeln!(
            file,
            "delta_phi,{},{},{},{},{},{},{}",
            delta,
            report.delta_phi.raw,
            report.delta_phi.reduced,
            report.simulated.c_l1,
            report.simulated.c_rel_ent,
            closed.c_l1,
            closed.c_rel_ent,
        )?;
    }
    println!("wrote {}", path.display());

    // coarse curve of c_l1 against the phase for three noise levels
    println!();
    println!("c_l1 over delta_phi in [0, 2pi]   (rows: p = 1.0, 0.6, 0.2)");
    for &p in &[1.0, 0.6, 0.2] {
        let mut line = String::with_capacity(64);
        for i in 0..64 {
            let delta = 2.0 * PI * i as f64 / 63.0;
            let c = run_probe_mass_at_phase(delta, p)?.simulated.c_l1;
            let glyph = match (c * 4.0).round() as usize {
                0 => ' ',
                1 => '.',
                2 => ':',
                3 => '+',
                _ => '#',
            };
            line.push(glyph);
        }
        println!("p={p:>3.1} |{line}|");
    }
    Ok(())
}
