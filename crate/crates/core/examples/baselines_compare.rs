use biplot::baselines::{classical_mds, correspondence_analysis, pca_map};
use biplot::biplot::pairwise_distances;
use biplot::data::{load_case, preprocess, Scale};

fn main() -> biplot::Result<()> {
    let t = load_case(1)?;
    let germany = t.row_index("Germany").unwrap();

    let pca = pca_map(&t, 2)?;
    println!("PCA  Germany: {:?}", pca.row(germany));

    let (z, _) = preprocess(&t, Scale::Zscore)?;
    let mds = classical_mds(&pairwise_distances(&z), 2)?;
    println!(
        "MDS  Germany: {:?} (strain {:.3})",
        mds.coords.row(germany),
        mds.strain
    );

    let ca = correspondence_analysis(&t, 2)?;
    println!(
        "CA   Germany: {:?} ({:.1}% of inertia)",
        ca.row_coords.row(germany),
        100.0 * ca.inertias.iter().sum::<f64>() / ca.total_inertia
    );
    for w in &ca.warnings {
        println!("     warning: {w}");
    }
    Ok(())
}
