//! Collision coefficients for a few kernels, checked against quadrature.

use kac::cross_section::integrate_kernel;
use kac::{compute_coefficients, sample_theta, CrossSection};

fn main() -> kac::Result<()> {
    println!("{:>5} {:>6} {:>12} {:>12} {:>12} {:>12} {:>12}", "nu", "eps", "lambda", "b", "d", "c", "gamma");
    for nu in [0.5, 1.0, 1.5] {
        let cs = CrossSection::power_law(nu)?;
        for eps in [0.01, 0.1, 0.5] {
            let k = compute_coefficients(&cs, eps)?;
            println!(
                "{nu:>5} {eps:>6} {:>12.6} {:>12.6e} {:>12.6} {:>12.6} {:>12.6e}",
                k.lambda_eps, k.b_eps, k.d_eps, k.c_eps, k.gamma_eps
            );
        }
    }

    let cs = CrossSection::power_law(1.0)?;
    let quad = 2.0 * integrate_kernel(&cs, 0.1, |_| 1.0, 0.1, std::f64::consts::PI, 1e-12)?;
    println!("\njump rate nu=1 eps=0.1: closed {:.12} quadrature {quad:.12}", cs.jump_rate(0.1)?);

    let grazing = compute_coefficients(&CrossSection::UniformGrazing, 0.2)?;
    println!("uniform grazing eps=0.2: lambda {} (3/eps^2)", grazing.lambda_eps);

    let median = sample_theta(&CrossSection::power_law(1.0)?, 0.1, 0.5, false)?;
    println!("median |theta| for nu=1 eps=0.1: {median:.7}");
    Ok(())
}
