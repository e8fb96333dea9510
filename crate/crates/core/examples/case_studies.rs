use biplot::data::{load_case, Scale};
use biplot::report::analyze;

// Default analysis (JK, z-scored, two axes) of the three embedded tables.
fn main() -> biplot::Result<()> {
    for id in 1..=3 {
        let t = load_case(id)?;
        let a = analyze(&t, 1.0, 2, Scale::Zscore)?;
        println!("{} ({}x{})", t.name(), t.n_rows(), t.n_cols());
        println!("  goodness of fit: {:.1}%", 100.0 * a.quality.qr_overall);
        let worst = t
            .row_labels()
            .iter()
            .zip(&a.quality.qr_rows)
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        println!("  worst represented row: {} ({:.3})", worst.0, worst.1);
        for w in &a.report.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
