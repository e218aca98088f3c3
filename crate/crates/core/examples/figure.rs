//! Write the rho-versus-eps comparison as CSV and SVG into the target directory.
use tight_zcdp::accountant::{FigureSpec, FigureTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fig = FigureTable::new(FigureSpec::default())?;
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../target");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("figure.csv"), fig.to_csv())?;
    std::fs::write(dir.join("figure.svg"), fig.to_svg())?;
    println!("wrote {}/figure.{{csv,svg}}", dir.display());
    Ok(())
}
