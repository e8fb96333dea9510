use biplot::data::{load_case, Scale};
use biplot::report::analyze;
use biplot::svg::{render_svg, PlotSpec};

// Writes case1.svg into the current directory.
fn main() -> biplot::Result<()> {
    let t = load_case(1)?;
    let a = analyze(&t, 1.0, 2, Scale::Zscore)?;
    let spec = PlotSpec {
        width: 900,
        height: 900,
        ..PlotSpec::default()
    };
    let svg = render_svg(&a.model, &a.quality, &spec)?;
    std::fs::write("case1.svg", &svg)?;
    println!("wrote case1.svg ({} bytes)", svg.len());
    Ok(())
}
