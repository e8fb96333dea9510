use biplot::biplot::{column_cosines, fit_biplot, reconstruct, BiplotKind};
use biplot::data::{load_case, preprocess, Scale};

// JK, SQRT and GH factor the same rank-2 approximation differently.
fn main() -> biplot::Result<()> {
    let t = load_case(2)?;
    let (x, record) = preprocess(&t, Scale::Zscore)?;
    let mut products = Vec::new();
    for kind in [BiplotKind::Jk, BiplotKind::Sqrt, BiplotKind::Gh] {
        let gamma = kind.gamma().unwrap();
        let m = fit_biplot(&x, gamma, 2, t.labels(), record.clone())?;
        let first = m.row_markers().row(0);
        let cos = column_cosines(&m)[0][2].unwrap_or(f64::NAN);
        println!(
            "{kind:>4} (gamma {gamma}): {} at ({:.3}, {:.3}); cos(Teaching, Research) = {cos:.3}",
            t.row_labels()[0],
            first[0],
            first[1]
        );
        products.push(reconstruct(&m));
    }
    let spread = products[0].sub(&products[2]).max_abs();
    println!("max |AB'(JK) - AB'(GH)| = {spread:.2e}");
    Ok(())
}
