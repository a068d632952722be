//! `SL(2,ℤ)` bookkeeping: words in `S` and `T`, reduction to the fundamental
//! domain, and the coset representatives that index Poincaré sums.

use jacobi_cohomology::group::{coset_reps, reduce_to_fundamental, word_decompose, GroupElement};
use jacobi_cohomology::numeric::scalar::c;

fn main() -> jacobi_cohomology::Result<()> {
    let g = GroupElement::new(17, 5, 10, 3)?;
    let w = word_decompose(&g);
    println!("{:?} = {w:?} ({} letters)", g.as_array(), w.len());
    assert_eq!(w.product(), g);

    let tau = c(0.4321, 0.0123);
    let (h, reduced) = reduce_to_fundamental(tau);
    println!("{tau} ↦ {reduced:.6} by {:?}", h.as_array());

    for cmax in [1, 2, 5, 10, 50] {
        println!("c ≤ {cmax:<3} {} cosets", coset_reps(cmax).len());
    }
    Ok(())
}
