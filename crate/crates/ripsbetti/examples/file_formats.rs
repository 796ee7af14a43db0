//! The on-disk formats: point clouds as CSV or JSON, complexes as JSON with
//! maximal faces only, matching families as JSON.

use ripsbetti::complexes::{build_rips, read_complex_json, write_complex_json};
use ripsbetti::constructions::{rs_matching_family, write_matching_family_json};
use ripsbetti::geometry::{read_cloud_csv, write_cloud_csv, write_cloud_json, PointCloud};

fn main() -> ripsbetti::Result<()> {
    let cloud = PointCloud::new(
        2,
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
    )?;

    let mut csv = Vec::new();
    write_cloud_csv(&cloud, &mut csv)?;
    println!("--- cloud as CSV ---\n{}", String::from_utf8_lossy(&csv));
    let round_tripped = read_cloud_csv(csv.as_slice())?;
    assert_eq!(cloud, round_tripped);

    let mut json = Vec::new();
    write_cloud_json(&cloud, &mut json)?;
    println!("--- cloud as JSON ---\n{}\n", String::from_utf8_lossy(&json));

    // Complexes serialize by maximal faces; import rebuilds the closure and
    // re-verifies the flag property when claimed.
    let complex = build_rips(&cloud, &Default::default(), 2)?;
    let mut buf = Vec::new();
    write_complex_json(&complex, true, &mut buf)?;
    println!("--- complex as JSON (maximal faces) ---\n{}\n", String::from_utf8_lossy(&buf));
    let restored = read_complex_json(buf.as_slice())?;
    assert_eq!(complex, restored);

    let family = rs_matching_family(&[0, 1], 2)?;
    let mut buf = Vec::new();
    write_matching_family_json(&family, &mut buf)?;
    println!("--- matching family as JSON ---\n{}", String::from_utf8_lossy(&buf));
    Ok(())
}
