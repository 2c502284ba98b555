//! File exporters: legacy ASCII VTK, CSV residual histories and Matrix
//! Market dumps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use helmddm_core::ddm::DdmProblem;
use helmddm_core::mesh::{ElementOrder, SubdomainMesh};
use helmddm_core::sparse::CsrMatrix;
use helmddm_core::C64;

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// Writes a mesh as a legacy ASCII VTK unstructured grid. With a field,
/// the point data holds its real part, imaginary part and magnitude.
pub fn write_vtk<W: Write>(
    out: &mut W,
    title: &str,
    mesh: &SubdomainMesh,
    field: Option<&[C64]>,
) -> Result<()> {
    if let Some(f) = field {
        ensure!(
            f.len() == mesh.n_nodes(),
            "field has {} values for {} nodes",
            f.len(),
            mesh.n_nodes()
        );
    }
    let (per, kind) = match mesh.order() {
        ElementOrder::P1 => (3, 5),
        // Vertices then edge midpoints, as VTK_QUADRATIC_TRIANGLE expects.
        ElementOrder::P2 => (6, 22),
    };
    let ne = mesh.n_elements();
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "{}", title.replace('\n', " "))?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(out, "POINTS {} double", mesh.n_nodes())?;
    for p in mesh.nodes() {
        writeln!(out, "{:.17e} {:.17e} 0", p[0], p[1])?;
    }
    writeln!(out, "CELLS {ne} {}", ne * (per + 1))?;
    for e in 0..ne {
        write!(out, "{per}")?;
        for n in mesh.element(e) {
            write!(out, " {n}")?;
        }
        writeln!(out)?;
    }
    writeln!(out, "CELL_TYPES {ne}")?;
    for _ in 0..ne {
        writeln!(out, "{kind}")?;
    }
    if let Some(f) = field {
        writeln!(out, "POINT_DATA {}", f.len())?;
        let parts: [(&str, fn(&C64) -> f64); 3] =
            [("re", |z| z.re), ("im", |z| z.im), ("abs", |z| z.norm())];
        for (name, part) in parts {
            writeln!(out, "SCALARS {name} double 1")?;
            writeln!(out, "LOOKUP_TABLE default")?;
            for z in f {
                writeln!(out, "{:.17e}", part(z))?;
            }
        }
    }
    Ok(())
}

/// One VTK file per active subdomain, named `<prefix>_r<row>_c<col>.vtk`.
/// Returns the written paths.
pub fn write_fields_vtk(
    dir: &Path,
    prefix: &str,
    problem: &DdmProblem,
    fields: &[Option<Vec<C64>>],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut paths = Vec::new();
    for (c, field) in fields.iter().enumerate() {
        let (Some(field), Some(mesh)) = (field, problem.mesh(c)) else {
            continue;
        };
        let (r, col) = problem.partition().row_col(c);
        let path = dir.join(format!("{prefix}_r{r}_c{col}.vtk"));
        let mut out = create(&path)?;
        write_vtk(&mut out, &format!("{prefix} subdomain ({r}, {col})"), mesh, Some(field))?;
        out.flush()?;
        paths.push(path);
    }
    Ok(paths)
}

/// Residual history as CSV with the header `iter,relres`.
pub fn write_history<W: Write>(out: W, history: &[(usize, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iter", "relres"])?;
    for &(it, res) in history {
        w.write_record([it.to_string(), format!("{res:e}")])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_history_file(path: &Path, history: &[(usize, f64)]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    write_history(create(path)?, history)
}

/// Reads a history written by [`write_history`].
pub fn read_history<R: std::io::Read>(input: R) -> Result<Vec<(usize, f64)>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    ensure!(header.iter().eq(["iter", "relres"]), "unexpected header {header:?}");
    r.records()
        .map(|rec| {
            let rec = rec?;
            Ok((rec[0].parse()?, rec[1].parse()?))
        })
        .collect()
}

/// Sparse matrix in Matrix Market coordinate format, complex general.
pub fn write_matrix_market<W: Write>(out: &mut W, a: &CsrMatrix) -> Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate complex general")?;
    writeln!(out, "{} {} {}", a.n(), a.n(), a.nnz())?;
    for (i, j, v) in a.entries() {
        writeln!(out, "{} {} {:.17e} {:.17e}", i + 1, j + 1, v.re, v.im)?;
    }
    Ok(())
}

/// Dense row-major `n x n` matrix in the same format, zeros omitted.
pub fn write_dense_matrix_market<W: Write>(out: &mut W, n: usize, a: &[C64]) -> Result<()> {
    ensure!(a.len() == n * n, "dense matrix needs {} entries, got {}", n * n, a.len());
    write_matrix_market(out, &CsrMatrix::from_dense(n, a))
}

/// Dumps every active subdomain matrix to `<dir>/<prefix>_r<row>_c<col>.mtx`.
pub fn write_subdomain_matrices(dir: &Path, prefix: &str, problem: &DdmProblem) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut paths = Vec::new();
    for c in 0..problem.partition().n_dom() {
        let Some(sys) = problem.system(c) else {
            continue;
        };
        let (r, col) = problem.partition().row_col(c);
        let path = dir.join(format!("{prefix}_r{r}_c{col}.mtx"));
        let mut out = create(&path)?;
        write_matrix_market(&mut out, sys.matrix())?;
        out.flush()?;
        paths.push(path);
    }
    Ok(paths)
}

/// Parses a complex Matrix Market file back into 0-based triplets.
pub fn read_matrix_market(text: &str) -> Result<(usize, Vec<(usize, usize, C64)>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let banner = lines.next().context("empty file")?;
    ensure!(
        banner.eq_ignore_ascii_case("%%MatrixMarket matrix coordinate complex general"),
        "unsupported banner `{banner}`"
    );
    let mut lines = lines.filter(|l| !l.starts_with('%'));
    let size: Vec<usize> = lines
        .next()
        .context("missing size line")?
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    ensure!(size.len() == 3 && size[0] == size[1], "expected a square size line");
    let mut entries = Vec::with_capacity(size[2]);
    for line in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        ensure!(f.len() == 4, "malformed entry `{line}`");
        let (i, j): (usize, usize) = (f[0].parse()?, f[1].parse()?);
        ensure!(i >= 1 && j >= 1, "indices are 1-based");
        entries.push((i - 1, j - 1, C64::new(f[2].parse()?, f[3].parse()?)));
    }
    ensure!(entries.len() == size[2], "expected {} entries, found {}", size[2], entries.len());
    Ok((size[0], entries))
}
