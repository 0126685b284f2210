//! Built-in code families and the plain-text code file format.
//!
//! ```text
//! # comment
//! n 3 k 1
//! S  ZZI
//! S  IZZ
//! LX XXX
//! LZ IIZ
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::frame::StabilizerCode;
use crate::pauli::PauliString;

fn check_odd_distance(family: &'static str, d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::InvalidDistance {
            family,
            distance: d,
            reason: "must be at least 3",
        });
    }
    if d.is_multiple_of(2) {
        return Err(Error::InvalidDistance {
            family,
            distance: d,
            reason: "must be odd",
        });
    }
    Ok(())
}

/// `[[d², 1, d]]` rotated surface code. Qubit `(row, col)` has index
/// `row·d + col`. X checks sit on the top and bottom boundaries, Z checks
/// on the left and right; Z̄ runs along the top row and X̄ down the left
/// column.
pub fn rotated_surface_code(d: usize) -> Result<StabilizerCode> {
    check_odd_distance("surface", d)?;
    let n = d * d;
    let q = |r: usize, c: usize| r * d + c;
    let mut x_checks: Vec<Vec<usize>> = Vec::new();
    let mut z_checks: Vec<Vec<usize>> = Vec::new();

    for i in 0..d - 1 {
        for j in 0..d - 1 {
            let cell = vec![q(i, j), q(i, j + 1), q(i + 1, j), q(i + 1, j + 1)];
            if (i + j) % 2 == 0 {
                x_checks.push(cell);
            } else {
                z_checks.push(cell);
            }
        }
    }
    for j in 0..d - 1 {
        if j % 2 == 1 {
            x_checks.push(vec![q(0, j), q(0, j + 1)]);
        } else {
            x_checks.push(vec![q(d - 1, j), q(d - 1, j + 1)]);
        }
    }
    for i in 0..d - 1 {
        if i % 2 == 0 {
            z_checks.push(vec![q(i, 0), q(i + 1, 0)]);
        } else {
            z_checks.push(vec![q(i, d - 1), q(i + 1, d - 1)]);
        }
    }

    let mut stabilizers = Vec::with_capacity(n - 1);
    for c in &x_checks {
        stabilizers.push(PauliString::x_type(n, c.iter().copied())?);
    }
    for c in &z_checks {
        stabilizers.push(PauliString::z_type(n, c.iter().copied())?);
    }
    let logical_z = PauliString::z_type(n, (0..d).map(|c| q(0, c)))?;
    let logical_x = PauliString::x_type(n, (0..d).map(|r| q(r, 0)))?;
    StabilizerCode::new(
        format!("surface-d{d}"),
        n,
        stabilizers,
        vec![logical_x],
        vec![logical_z],
        Some(d),
    )
}

/// 4.8.8 (square-octagon) color code with `n = (d² − 1)/2 + d`.
///
/// Plaquettes live on an integer grid of width `4d − 4` and height `2d − 2`
/// folded into a triangle; data qubits sit on even coordinates and each
/// plaquette center gathers its square or (possibly truncated) octagon of
/// neighbours. Data qubits are numbered in scan order, bottom row first.
/// Both logicals run along the bottom boundary.
pub fn color_code_488(d: usize) -> Result<StabilizerCode> {
    check_odd_distance("color488", d)?;
    let (width, height) = (4 * d as i64 - 4, 2 * d as i64 - 2);
    let mut data: Vec<(i64, i64)> = Vec::new();
    let mut centers: Vec<(i64, i64)> = Vec::new();
    for y in 0..=height {
        for x in 0..=width {
            let keep = (y == x + 2 && x % 2 == 1 && y % 8 == 3)
                || (x == 4 * d as i64 - y && x % 2 == 1 && y % 8 == 7)
                || !(y > x || x > 4 * d as i64 - y - 2);
            if !keep {
                continue;
            }
            if x % 2 == 0 && y % 2 == 0 {
                let on_lattice = if matches!((y / 2) % 4, 1 | 2) {
                    matches!((x / 2) % 4, 2 | 3)
                } else {
                    matches!((x / 2) % 4, 0 | 1)
                };
                if on_lattice {
                    data.push((x, y));
                }
            }
            if (x % 4 == 1 && y % 4 == 3) || (y == 0 && x % 8 == 5) {
                centers.push((x, y));
            }
        }
    }
    let index: HashMap<(i64, i64), usize> =
        data.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let gather = |offsets: &[(i64, i64)], (x, y): (i64, i64)| -> Vec<usize> {
        let mut qs: Vec<usize> = offsets
            .iter()
            .filter_map(|(dx, dy)| index.get(&(x + dx, y + dy)).copied())
            .collect();
        qs.sort_unstable();
        qs
    };
    const SQUARE: [(i64, i64); 4] = [(-1, 1), (1, 1), (-1, -1), (1, -1)];
    const OCTAGON: [(i64, i64); 8] = [
        (-1, 3),
        (1, 3),
        (-3, 1),
        (3, 1),
        (-3, -1),
        (3, -1),
        (-1, -3),
        (1, -3),
    ];
    const HALF_OCTAGON: [(i64, i64); 4] = [(-1, 2), (1, 2), (-3, 0), (3, 0)];

    let plaquettes: Vec<Vec<usize>> = centers
        .iter()
        .map(|&c| {
            let square = gather(&SQUARE, c);
            if !square.is_empty() {
                square
            } else if c.1 == 0 {
                gather(&HALF_OCTAGON, c)
            } else {
                gather(&OCTAGON, c)
            }
        })
        .collect();

    let n = data.len();
    let mut stabilizers = Vec::with_capacity(2 * plaquettes.len());
    for p in &plaquettes {
        stabilizers.push(PauliString::x_type(n, p.iter().copied())?);
    }
    for p in &plaquettes {
        stabilizers.push(PauliString::z_type(n, p.iter().copied())?);
    }
    let bottom: Vec<usize> = (0..n).filter(|&i| data[i].1 == 0).collect();
    StabilizerCode::new(
        format!("color488-d{d}"),
        n,
        stabilizers,
        vec![PauliString::x_type(n, bottom.iter().copied())?],
        vec![PauliString::z_type(n, bottom.iter().copied())?],
        Some(d),
    )
}

/// Bit-flip repetition code: `S_i = Z_i Z_{i+1}`, `Z̄ = Z_d`, `X̄ = X^{⊗d}`.
pub fn repetition_code(d: usize) -> Result<StabilizerCode> {
    if d < 2 {
        return Err(Error::InvalidDistance {
            family: "repetition",
            distance: d,
            reason: "must be at least 2",
        });
    }
    let stabilizers = (0..d - 1)
        .map(|i| PauliString::z_type(d, [i, i + 1]))
        .collect::<Result<Vec<_>>>()?;
    StabilizerCode::new(
        format!("repetition-d{d}"),
        d,
        stabilizers,
        vec![PauliString::x_type(d, 0..d)?],
        vec![PauliString::single(d, d - 1, 'Z')?],
        Some(d),
    )
}

/// A bare physical qubit: `n = k = 1`, no stabilizers.
pub fn single_qubit_code() -> StabilizerCode {
    StabilizerCode::new(
        "single-qubit",
        1,
        vec![],
        vec![PauliString::single(1, 0, 'X').expect("valid")],
        vec![PauliString::single(1, 0, 'Z').expect("valid")],
        Some(1),
    )
    .expect("single-qubit code is valid")
}

pub fn parse_code_file(text: &str) -> Result<StabilizerCode> {
    let mut header: Option<(usize, usize)> = None;
    let mut stabilizers = Vec::new();
    let mut logical_x = Vec::new();
    let mut logical_z = Vec::new();
    let parse_err = |line: usize, message: String| Error::Parse { line, message };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["n", n, "k", k] => {
                if header.is_some() {
                    return Err(parse_err(line_no, "duplicate header".into()));
                }
                let n: usize = n
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad qubit count {n:?}")))?;
                let k: usize = k
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad logical count {k:?}")))?;
                header = Some((n, k));
            }
            [kind @ ("S" | "LX" | "LZ"), pauli] => {
                let Some((n, _)) = header else {
                    return Err(parse_err(line_no, "operator before the `n .. k ..` header".into()));
                };
                let op: PauliString = pauli.parse()?;
                if op.n_qubits() != n {
                    return Err(parse_err(
                        line_no,
                        format!("operator has {} qubits, header says {n}", op.n_qubits()),
                    ));
                }
                match *kind {
                    "S" => stabilizers.push(op),
                    "LX" => logical_x.push(op),
                    _ => logical_z.push(op),
                }
            }
            _ => return Err(parse_err(line_no, format!("unrecognised line {line:?}"))),
        }
    }

    let Some((n, k)) = header else {
        return Err(parse_err(0, "missing `n .. k ..` header".into()));
    };
    if stabilizers.len() + k != n {
        return Err(Error::InvalidCode(format!(
            "header says n = {n}, k = {k} but {} stabilizers were given",
            stabilizers.len()
        )));
    }
    if logical_x.len() != k || logical_z.len() != k {
        return Err(Error::InvalidCode(format!(
            "expected {k} LX and {k} LZ rows, found {} and {}",
            logical_x.len(),
            logical_z.len()
        )));
    }
    StabilizerCode::new("file", n, stabilizers, logical_x, logical_z, None)
}

/// Inverse of [`parse_code_file`].
pub fn to_code_file(code: &StabilizerCode) -> String {
    let mut out = format!("# {}\nn {} k {}\n", code.name(), code.n(), code.k());
    for s in code.stabilizers() {
        writeln!(out, "S {s}").unwrap();
    }
    for l in code.logical_x() {
        writeln!(out, "LX {l}").unwrap();
    }
    for l in code.logical_z() {
        writeln!(out, "LZ {l}").unwrap();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeFamily {
    Surface,
    Color488,
    Repetition,
}

impl CodeFamily {
    pub fn build(self, d: usize) -> Result<StabilizerCode> {
        match self {
            CodeFamily::Surface => rotated_surface_code(d),
            CodeFamily::Color488 => color_code_488(d),
            CodeFamily::Repetition => repetition_code(d),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CodeFamily::Surface => "surface",
            CodeFamily::Color488 => "color488",
            CodeFamily::Repetition => "repetition",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{gf2_rank, Bits};

    #[test]
    fn surface_sizes() {
        for (d, n) in [(3, 9), (5, 25), (7, 49), (9, 81)] {
            let code = rotated_surface_code(d).unwrap();
            assert_eq!((code.n(), code.k()), (n, 1));
            let x = code.stabilizers().iter().filter(|s| s.is_x_type()).count();
            assert_eq!(x, (n - 1) / 2);
            assert_eq!(code.z_stabilizer_indices().len(), (n - 1) / 2);
            assert!(code.is_css());
        }
        assert!(rotated_surface_code(4).is_err());
        assert!(rotated_surface_code(1).is_err());
    }

    #[test]
    fn color_sizes() {
        for d in [3, 5, 7, 9] {
            let code = color_code_488(d).unwrap();
            assert_eq!(code.n(), (d * d - 1) / 2 + d);
            assert!(code.is_css());
            assert_eq!(code.logical_z()[0].weight(), d);
            let half = code.stabilizers().len() / 2;
            for i in 0..half {
                let (x, z) = (&code.stabilizers()[i], &code.stabilizers()[half + i]);
                assert_eq!(x.x_bits(), z.z_bits());
            }
        }
        assert_eq!(color_code_488(7).unwrap().n(), 31);
        assert_eq!(color_code_488(9).unwrap().n(), 49);
        assert!(color_code_488(6).is_err());
    }

    #[test]
    fn color_d3_is_the_steane_code() {
        let code = color_code_488(3).unwrap();
        assert_eq!(code.n(), 7);
        let mut weights: Vec<usize> = code.stabilizers().iter().map(|s| s.weight()).collect();
        weights.sort_unstable();
        assert_eq!(weights, vec![4; 6]);
    }

    /// Smallest weight of an X-type operator that commutes with every Z
    /// check but anticommutes with Z̄, found by exhaustive search.
    fn min_x_logical_weight(code: &StabilizerCode, max_weight: usize) -> Option<usize> {
        let n = code.n();
        let z_rows: Vec<Bits> = code
            .stabilizers()
            .iter()
            .filter(|s| s.is_z_type())
            .map(|s| s.z_bits().clone())
            .collect();
        let lz = code.logical_z()[0].z_bits();
        (1..=max_weight).find(|&w| {
            let mut e = Bits::zeros(n);
            search(&mut e, 0, w, &|e| z_rows.iter().all(|r| !r.dot(e)) && lz.dot(e))
        })
    }

    /// Depth-first over supports of size `left` drawn from `start..`.
    fn search(e: &mut Bits, start: usize, left: usize, hit: &dyn Fn(&Bits) -> bool) -> bool {
        if left == 0 {
            return hit(e);
        }
        for q in start..=e.len() - left {
            e.set(q, true);
            let found = search(e, q + 1, left - 1, hit);
            e.set(q, false);
            if found {
                return true;
            }
        }
        false
    }

    #[test]
    fn distances_by_exhaustive_search() {
        for d in [2, 3, 4, 5] {
            assert_eq!(min_x_logical_weight(&repetition_code(d).unwrap(), d), Some(d));
        }
        assert_eq!(min_x_logical_weight(&rotated_surface_code(3).unwrap(), 3), Some(3));
        assert_eq!(min_x_logical_weight(&rotated_surface_code(5).unwrap(), 5), Some(5));
        assert_eq!(min_x_logical_weight(&color_code_488(3).unwrap(), 3), Some(3));
        assert_eq!(min_x_logical_weight(&color_code_488(5).unwrap(), 5), Some(5));
    }

    #[test]
    fn repetition_code_shape() {
        assert_eq!(repetition_code(3).unwrap().stabilizers().len(), 2);
        assert_eq!(repetition_code(2).unwrap().stabilizers().len(), 1);
        assert_eq!(repetition_code(5).unwrap().stabilizers().len(), 4);
        assert!(repetition_code(1).is_err());
        let rows: Vec<Bits> = repetition_code(5)
            .unwrap()
            .stabilizers()
            .iter()
            .map(|s| s.z_bits().clone())
            .collect();
        assert_eq!(gf2_rank(&rows), 4);
    }

    #[test]
    fn code_file_round_trip() {
        let text = "# three-qubit repetition\nn 3 k 1\nS ZZI\nS IZZ\nLX XXX\nLZ IIZ\n";
        let code = parse_code_file(text).unwrap();
        let rep = repetition_code(3).unwrap();
        assert_eq!(code.stabilizers(), rep.stabilizers());
        assert_eq!(code.logical_x(), rep.logical_x());
        assert_eq!(code.logical_z(), rep.logical_z());

        let surface = rotated_surface_code(3).unwrap();
        let back = parse_code_file(&to_code_file(&surface)).unwrap();
        assert_eq!(back.stabilizers(), surface.stabilizers());
    }

    #[test]
    fn code_file_errors() {
        let err = parse_code_file("n 2 k 1\nS XI\nS ZI\nLX IX\nLZ IZ\n").unwrap_err();
        assert!(matches!(err, Error::InvalidCode(_)), "{err}");
        let err = parse_code_file("n 2 k 0\nS XI\nS ZI\n").unwrap_err();
        assert!(matches!(err, Error::InvalidCode(_) | Error::AnticommutingPair { .. }));
        let err = parse_code_file("n 3 k 1\nS XI\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_code_file("n 3 k 1\nS ZQZ\nS IZZ\nLX XXX\nLZ IIZ").unwrap_err();
        assert!(matches!(err, Error::MalformedPauli(_)));
        let err = parse_code_file("S ZZ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_code_file("n 3 k 1\nS ZZI\nS IZZ\nLX XXX\n").unwrap_err();
        assert!(matches!(err, Error::InvalidCode(_)));
    }

    #[test]
    fn anticommuting_stabilizers_in_file() {
        let err = parse_code_file("n 3 k 1\nS XII\nS ZII\nLX IXI\nLZ IZI\n").unwrap_err();
        assert!(matches!(err, Error::AnticommutingPair { .. }), "{err}");
    }
}
