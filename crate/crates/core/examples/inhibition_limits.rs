//! Sample variance of W_t / t^beta and M_t / t^beta against the closed forms.

use logergo::ergodicity::{inhibition_limit_check, InhibitedProcess};

fn main() -> logergo::Result<()> {
    for process in [InhibitedProcess::Wiener, InhibitedProcess::IntegratedWiener] {
        for beta in [2.0, 2.5] {
            for row in inhibition_limit_check(process, beta, &[1.0, 10.0, 100.0], 20_000, 5)? {
                println!(
                    "{process:?} beta {beta} t {:>5}: sample {:.4e} theory {:.4e} ratio {:.3}",
                    row.t,
                    row.sample_var,
                    row.theory_var,
                    row.ratio()
                );
            }
        }
    }
    Ok(())
}
