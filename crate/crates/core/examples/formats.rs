//! Text and binary square files, array families and family bundles, each
//! written to a temporary directory and read back.

use std::sync::Arc;

use multimagic::io::{load_cms_bundle, load_ms, save_cms_bundle, save_ms, write_ms, write_oa_family};
use multimagic::{build_cms_for, build_ms_qt, build_sdloa_grid, ternary_pair, FieldTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("multimagic-formats");
    std::fs::create_dir_all(&dir)?;
    let gf3 = Arc::new(FieldTable::for_order(3)?);

    let sq = build_ms_qt(&gf3, 2)?;
    write_ms(&mut std::io::stdout().lock(), &sq)?;
    for (name, binary) in [("square.ms", false), ("square.msb", true)] {
        let path = dir.join(name);
        save_ms(&path, &sq, binary)?;
        println!("{name}: {} bytes, round trip {}", std::fs::metadata(&path)?.len(), load_ms(&path)? == sq);
    }

    let grid = build_sdloa_grid(&ternary_pair(&gf3)?)?;
    let mut arrays = Vec::new();
    write_oa_family(&mut arrays, &grid.to_family()?)?;
    println!("\n{}", String::from_utf8(arrays)?.lines().take(5).collect::<Vec<_>>().join("\n"));

    let fam = build_cms_for(&gf3, 2)?;
    let path = dir.join("family.cms");
    save_cms_bundle(&path, &fam)?;
    println!("\nfamily.cms round trip {}", load_cms_bundle(&path)? == fam);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
