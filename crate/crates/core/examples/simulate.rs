//! One particle ensemble with the diffusion scheme, observed at a few times.

use kac::engine::{run_single, InitialDatum};
use kac::limit_laws::m4_trajectory;
use kac::{compute_coefficients, CrossSection, Scheme};

fn main() -> kac::Result<()> {
    let cs = CrossSection::power_law(0.5)?;
    let eps = 0.1;
    let f0 = InitialDatum::Rademacher;
    let times = [0.0, 0.25, 0.5, 1.0];
    let snaps = run_single(&f0, 20_000, Scheme::Diffusion, cs, eps, 11, &times, false, false)?;
    let c = compute_coefficients(&cs, eps)?.m4_decay_c;
    println!("{:>5} {:>9} {:>9} {:>9} {:>8}", "t", "m2", "m4", "m4 exact", "events");
    for s in snaps {
        println!(
            "{:>5} {:>9.5} {:>9.5} {:>9.5} {:>8}",
            s.t,
            s.m2,
            s.m4,
            m4_trajectory(&f0, c, s.t),
            s.events
        );
    }
    Ok(())
}
