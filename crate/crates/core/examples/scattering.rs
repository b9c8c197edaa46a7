//! Reference head-on scattering: interparticle entanglement rises while the
//! packets overlap, and the internal/external entropy stays put.

use tpslab::scattering::{run, ScatteringConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ScatteringConfig::reference();
    if let Some(n) = std::env::args().nth(1) {
        cfg.sites = n.parse()?;
    }
    cfg.validate()?;
    let traj = run(&cfg)?;
    println!("{:>6} {:>12} {:>14} {:>12}", "t", "S_AB", "S_IE", "norm-1");
    for s in traj.samples.iter().step_by(10) {
        println!(
            "{:>6.2} {:>12.6} {:>14.3e} {:>12.2e}",
            s.t,
            s.interparticle_entropy,
            s.ie_entropy.unwrap_or(f64::NAN),
            s.norm - 1.0
        );
    }
    println!("{:#?}", traj.summary);
    Ok(())
}
