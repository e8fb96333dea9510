use biplot::data::{load_case, Scale};
use biplot::report::{analyze, AnalysisReport};

// Per-row and per-column quality of representation, then the JSON report.
fn main() -> biplot::Result<()> {
    let t = load_case(3)?;
    let a = analyze(&t, 1.0, 2, Scale::Zscore)?;
    println!("qr_overall = {:.4}", a.quality.qr_overall);
    for (name, q) in t.col_labels().iter().zip(&a.quality.qr_cols) {
        println!("  column {name:<8} {q:.3}");
    }
    for (name, q) in t.row_labels().iter().zip(&a.quality.qr_rows) {
        println!("  row    {name:<22} {q:.3}");
    }

    let json = a.report.to_json()?;
    assert_eq!(AnalysisReport::from_json(&json)?, a.report);
    println!("report: {} bytes of key-sorted JSON", json.len());
    Ok(())
}
