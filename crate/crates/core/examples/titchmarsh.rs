//! Support of a convolution: the endpoints add.

use kgosc::spectral::{convolve, support_bounds, titchmarsh_check};
use kgosc::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    let f = c(&[0.0, 0.0, 1.0, -2.0, 0.5, 0.0]);
    let g = c(&[0.0, 3.0, 0.0, 1.0]);
    let h = convolve(&f, &g);
    println!("supp f = {:?}, supp g = {:?}, supp f*g = {:?}", support_bounds(&f), support_bounds(&g), support_bounds(&h));
    println!("endpoints add: {}", titchmarsh_check(&f, &g)?);
    Ok(())
}
