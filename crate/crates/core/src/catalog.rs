//! Known perfect forms used as fixtures: the root lattices `A_d` (every `d`),
//! `D_4`, `D_5`, `E_6`, `E_7`, `E_8`, and the labeled binary cells of the
//! trace-plane partition.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::form::QuadForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    /// Integral Gram matrix.
    pub form: QuadForm,
    pub expected_lambda1: u64,
    /// Minimal vectors up to sign.
    pub expected_min_count: usize,
}

/// Names of the fixed entries; `A<d>` is also accepted for any `d ≥ 1`.
pub const NAMES: [&str; 12] = ["A2", "A3", "A4", "A5", "A6", "A7", "A8", "D4", "D5", "E6", "E7", "E8"];

/// Gram matrix with 2 on the diagonal and 1 elsewhere.
pub fn a_d(d: usize) -> QuadForm {
    let rows: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| if i == j { 2 } else { 1 }).collect()).collect();
    QuadForm::from_integers(&rows).expect("symmetric")
}

/// Cartan matrix of a simply laced Dynkin diagram given by its edges.
fn cartan(d: usize, edges: &[(usize, usize)]) -> QuadForm {
    let mut rows = vec![vec![0i64; d]; d];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j) in edges {
        rows[i][j] = -1;
        rows[j][i] = -1;
    }
    QuadForm::from_integers(&rows).expect("symmetric")
}

/// `D_d` for `d ≥ 4`: a path of length `d − 2` with two leaves on its end.
pub fn d_d(d: usize) -> QuadForm {
    let mut edges: Vec<(usize, usize)> = (0..d - 3).map(|i| (i, i + 1)).collect();
    edges.push((d - 3, d - 2));
    edges.push((d - 3, d - 1));
    cartan(d, &edges)
}

/// `E_d` for `d ∈ {6, 7, 8}` in the Bourbaki numbering: the path
/// `1-3-4-…-d` with node 2 attached to node 4.
pub fn e_d(d: usize) -> QuadForm {
    let mut edges = vec![(0, 2), (1, 3)];
    edges.extend((2..d - 1).map(|i| (i, i + 1)));
    cartan(d, &edges)
}

pub fn get(name: &str) -> Result<CatalogEntry> {
    let unknown = || Error::UnknownEntry(name.to_string());
    let (family, rest) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
    let d: usize = rest.parse().map_err(|_| unknown())?;
    let (form, count) = match (family, d) {
        ("A", d) if d >= 1 => (a_d(d), d * (d + 1) / 2),
        ("D", 4 | 5) => (d_d(d), d * (d - 1)),
        ("E", 6) => (e_d(6), 36),
        ("E", 7) => (e_d(7), 63),
        ("E", 8) => (e_d(8), 120),
        _ => return Err(unknown()),
    };
    Ok(CatalogEntry { name: format!("{family}{d}"), form, expected_lambda1: 2, expected_min_count: count })
}

pub fn entries() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| get(n).expect("listed names resolve")).collect()
}

/// The labeled cells of the binary trace-plane partition.
pub fn labeled_plane_cells() -> Vec<QuadForm> {
    [[[2, 1], [1, 2]], [[2, -1], [-1, 2]], [[6, -3], [-3, 2]], [[2, -3], [-3, 6]], [[2, 3], [3, 6]], [[6, 3], [3, 2]]]
        .iter()
        .map(|m| QuadForm::from_integers(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("symmetric"))
        .collect()
}
