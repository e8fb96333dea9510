use biplot::biplot::BiplotKind;
use biplot::data::{parse_table, Scale};
use biplot::report::analyze;

const CSV: &str = "\
,Sales,Staff,Stores,Online
North,120,45,12,0.30
South,95,38,10,0.22
East,160,52,15,0.41
West,80,30,8,0.18
Central,140,50,14,0.35
";

fn main() -> biplot::Result<()> {
    let t = parse_table(CSV, "regions")?;
    let a = analyze(&t, BiplotKind::Gh.gamma().unwrap(), 2, Scale::Zscore)?;
    println!("{}: fit {:.3}", t.name(), a.quality.qr_overall);
    for (name, m) in t.col_labels().iter().zip(a.model.col_markers().to_rows()) {
        println!("  {name:<7} ({:+.3}, {:+.3})", m[0], m[1]);
    }

    match parse_table(",a,b\nx,1,2\ny,3\nz,4,5\n", "broken") {
        Ok(_) => unreachable!(),
        Err(e) => println!("ragged input rejected: {e}"),
    }
    Ok(())
}
