use biplot::linalg::{low_rank_approx, svd};
use biplot::Matrix;

// Run with `cargo run --example svd_basics`
fn main() -> biplot::Result<()> {
    let x = Matrix::from_rows(&[
        vec![3.0, 1.0, 1.0],
        vec![-1.0, 3.0, 1.0],
        vec![2.0, 2.0, 4.0],
        vec![0.0, 1.0, -2.0],
    ])?;
    let s = svd(&x)?;
    println!("singular values: {:?}", s.sigma);
    println!("numerical rank: {}", s.rank);

    let err = x.sub(&s.reconstruct()).frobenius_norm() / x.frobenius_norm();
    println!("relative reconstruction error: {err:.2e}");

    for k in 1..s.rank {
        let approx = low_rank_approx(&s, k)?;
        let tail: f64 = s.sigma[k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        println!(
            "rank {k}: ||X - X_k|| = {:.6}, tail norm = {tail:.6}",
            x.sub(&approx).frobenius_norm()
        );
    }
    Ok(())
}
