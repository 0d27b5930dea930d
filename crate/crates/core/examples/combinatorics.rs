//! Multinomial counts, input bits and block moments for a few compositions.
use nlidm::combinatorics::{
    block_moments, count_compositions, entropy, input_bits, multinomial_coefficient, pmf_of,
};
use nlidm::{AmplitudeAlphabet, Composition};

fn main() -> nlidm::Result<()> {
    let a = AmplitudeAlphabet::qam64();
    println!("compositions of 216 into 4 parts: {}", count_compositions(216, 4));
    for counts in [vec![54, 54, 54, 54], vec![102, 70, 33, 11], vec![105, 71, 30, 10]] {
        let c = Composition::for_alphabet(counts, &a)?;
        let p = pmf_of(&c);
        let m = block_moments(&p, &a)?;
        println!(
            "{c}: MC has {} bits, input bits {}, H = {:.4}, kurtosis {:.4}, psi {:.4}",
            multinomial_coefficient(&c).bits(),
            input_bits(&c),
            entropy(&p),
            m.kurtosis_2d,
            m.psi_2d
        );
    }
    Ok(())
}
