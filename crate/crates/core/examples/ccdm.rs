//! Constant-composition matcher at n=216 for a sweep of rates.
use nlidm::ccdm::{build_ccdm, lambda_search};
use nlidm::combinatorics::{composition_kurtosis, input_bits};
use nlidm::AmplitudeAlphabet;

fn main() -> nlidm::Result<()> {
    let a = AmplitudeAlphabet::qam64();
    for k in [300, 349, 400, 420] {
        let set = build_ccdm(216, k, &a)?;
        let c = &set.leaves[0].composition;
        let b = lambda_search(216, &a, |c| input_bits(c) >= k).unwrap();
        println!(
            "k={k}: lambda {:.5}, {c}, rate loss {:.4}, kurtosis {:.4}",
            b.feasible,
            set.rate_loss,
            composition_kurtosis(c, &a)?
        );
    }
    match build_ccdm(216, 421, &a) {
        Err(e) => println!("k=421: {e}"),
        Ok(_) => unreachable!("the uniform type carries at most 420 bits"),
    }
    Ok(())
}
