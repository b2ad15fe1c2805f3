//! Dense complex square matrices with structural flags.

use std::io::{BufRead, Read, Write};

use faer::{c64, Mat};

use crate::error::{Error, Result};

/// Relative hermiticity tolerance backing the `hermitian` flag.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Absolute unitarity tolerance backing the `unitary` flag.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatrixFlags {
    pub hermitian: bool,
    pub unitary: bool,
    pub selfdual: bool,
}

impl MatrixFlags {
    pub const NONE: MatrixFlags = MatrixFlags {
        hermitian: false,
        unitary: false,
        selfdual: false,
    };
    pub const HERMITIAN: MatrixFlags = MatrixFlags {
        hermitian: true,
        unitary: false,
        selfdual: false,
    };
    pub const UNITARY: MatrixFlags = MatrixFlags {
        hermitian: false,
        unitary: true,
        selfdual: false,
    };

    fn bits(self) -> u8 {
        (self.hermitian as u8) | (self.unitary as u8) << 1 | (self.selfdual as u8) << 2
    }

    fn from_bits(bits: u8) -> Self {
        MatrixFlags {
            hermitian: bits & 1 != 0,
            unitary: bits & 2 != 0,
            selfdual: bits & 4 != 0,
        }
    }
}

/// An N×N complex matrix. Storage is column-major (faer); the logical entry
/// order used by every file format is row-major.
#[derive(Debug, Clone)]
pub struct SquareMatrix {
    data: Mat<c64>,
    flags: MatrixFlags,
}

impl PartialEq for SquareMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self.flags == other.flags
            && (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.get(i, j) == other.get(i, j)))
    }
}

impl SquareMatrix {
    pub fn from_mat(data: Mat<c64>, flags: MatrixFlags) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::DimensionMismatch {
                expected: data.nrows(),
                actual: data.ncols(),
            });
        }
        if data.nrows() == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { data, flags })
    }

    pub(crate) fn from_mat_unchecked(data: Mat<c64>, flags: MatrixFlags) -> Self {
        debug_assert_eq!(data.nrows(), data.ncols());
        Self { data, flags }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> c64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            data: Mat::from_fn(n, n, f),
            flags: MatrixFlags::NONE,
        })
    }

    /// Build from row-major entries.
    pub fn from_row_major(n: usize, entries: &[c64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: entries.len(),
            });
        }
        Self::from_fn(n, |i, j| entries[i * n + j])
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: Mat::identity(n, n),
            flags: MatrixFlags {
                hermitian: true,
                unitary: true,
                selfdual: n % 2 == 0,
            },
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            data: Mat::zeros(n, n),
            flags: MatrixFlags {
                hermitian: true,
                unitary: false,
                selfdual: false,
            },
        }
    }

    /// Diagonal matrix; flags follow from the entries.
    pub fn from_diagonal(diag: &[c64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let n = diag.len();
        let mut data = Mat::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            data[(i, i)] = *d;
        }
        let flags = MatrixFlags {
            hermitian: diag.iter().all(|d| d.im == 0.0),
            unitary: diag.iter().all(|d| (d.norm() - 1.0).abs() <= UNITARY_TOL),
            selfdual: false,
        };
        Ok(Self { data, flags })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let d: Vec<c64> = diag.iter().map(|&x| c64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> c64 {
        self.data[(i, j)]
    }

    pub fn flags(&self) -> MatrixFlags {
        self.flags
    }

    pub fn is_hermitian(&self) -> bool {
        self.flags.hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.flags.unitary
    }

    pub fn is_selfdual(&self) -> bool {
        self.flags.selfdual
    }

    pub fn as_mat(&self) -> &Mat<c64> {
        &self.data
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.data
    }

    /// Replace the flags without checking them.
    pub fn with_flags(mut self, flags: MatrixFlags) -> Self {
        self.flags = flags;
        self
    }

    /// Set every flag whose residual is within tolerance.
    pub fn detect_flags(mut self) -> Self {
        let n = self.dim();
        self.flags = MatrixFlags {
            hermitian: self.hermiticity_residual() <= HERMITIAN_TOL * self.max_abs().max(f64::MIN_POSITIVE),
            unitary: self.unitarity_residual() <= UNITARY_TOL,
            selfdual: n % 2 == 0 && self.selfduality_residual() <= HERMITIAN_TOL * self.max_abs().max(f64::MIN_POSITIVE),
        };
        self
    }

    pub fn row_major(&self) -> Vec<c64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.data[(i, j)]);
            }
        }
        out
    }

    pub fn diagonal(&self) -> Vec<c64> {
        (0..self.dim()).map(|i| self.data[(i, i)]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.data[(i, j)].norm());
            }
        }
        m
    }

    /// max |A - A*|.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut r = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                r = r.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// max |A A* - I|.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = &self.data * self.data.adjoint();
        max_abs_minus_identity(&gram)
    }

    /// max |J Aᵀ J⁻¹ - A| for the standard skew form J = [[0, I], [-I, 0]].
    pub fn selfduality_residual(&self) -> f64 {
        let n2 = self.dim();
        if n2 % 2 != 0 {
            return f64::INFINITY;
        }
        let n = n2 / 2;
        let a = |i: usize, j: usize| self.data[(i, j)];
        let mut r = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                // J Aᵀ J⁻¹ = [[Dᵀ, -Bᵀ], [-Cᵀ, Aᵀ]] for A = [[A, B], [C, D]].
                r = r.max((a(n + j, n + i) - a(i, j)).norm());
                r = r.max((-a(j, n + i) - a(i, n + j)).norm());
                r = r.max((-a(n + j, i) - a(n + i, j)).norm());
                r = r.max((a(j, i) - a(n + i, n + j)).norm());
            }
        }
        r
    }

    pub fn adjoint(&self) -> SquareMatrix {
        SquareMatrix {
            data: self.data.adjoint().to_owned(),
            flags: MatrixFlags {
                hermitian: self.flags.hermitian,
                unitary: self.flags.unitary,
                selfdual: false,
            },
        }
    }

    pub fn matmul(&self, rhs: &SquareMatrix) -> Result<SquareMatrix> {
        self.check_same_dim(rhs)?;
        Ok(SquareMatrix {
            data: &self.data * &rhs.data,
            flags: MatrixFlags {
                hermitian: false,
                unitary: self.flags.unitary && rhs.flags.unitary,
                selfdual: false,
            },
        })
    }

    pub fn add(&self, rhs: &SquareMatrix) -> Result<SquareMatrix> {
        self.check_same_dim(rhs)?;
        Ok(SquareMatrix {
            data: &self.data + &rhs.data,
            flags: MatrixFlags {
                hermitian: self.flags.hermitian && rhs.flags.hermitian,
                unitary: false,
                selfdual: self.flags.selfdual && rhs.flags.selfdual,
            },
        })
    }

    pub fn scale(&self, c: c64) -> SquareMatrix {
        let data = Mat::from_fn(self.dim(), self.dim(), |i, j| self.data[(i, j)] * c);
        SquareMatrix {
            data,
            flags: MatrixFlags {
                hermitian: self.flags.hermitian && c.im == 0.0,
                unitary: self.flags.unitary && (c.norm() - 1.0).abs() <= UNITARY_TOL,
                selfdual: self.flags.selfdual && c.im == 0.0,
            },
        }
    }

    /// Symmetrize to exact hermiticity: (A + A*)/2.
    pub fn hermitian_part(&self) -> SquareMatrix {
        let n = self.dim();
        let data = Mat::from_fn(n, n, |i, j| (self.data[(i, j)] + self.data[(j, i)].conj()) * 0.5);
        SquareMatrix {
            data,
            flags: MatrixFlags {
                hermitian: true,
                unitary: false,
                selfdual: self.flags.selfdual,
            },
        }
    }

    pub fn trace(&self) -> c64 {
        (0..self.dim()).map(|i| self.data[(i, i)]).sum()
    }

    /// (1/N) Tr A.
    pub fn normalized_trace(&self) -> c64 {
        self.trace() / self.dim() as f64
    }

    /// Leading `m`×`m` block.
    pub fn leading_block(&self, m: usize) -> Result<SquareMatrix> {
        if m == 0 {
            return Err(Error::ZeroDimension);
        }
        if m > self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: m,
            });
        }
        Ok(SquareMatrix {
            data: self.data.as_ref().submatrix(0, 0, m, m).to_owned(),
            flags: MatrixFlags {
                hermitian: self.flags.hermitian,
                unitary: false,
                selfdual: false,
            },
        })
    }

    /// Kronecker product `coeff ⊗ self` for a k×k row-major coefficient.
    /// Block (r, c) of the result is `coeff[r][c] · self`.
    pub fn kron_left(&self, k: usize, coeff: &[c64]) -> SquareMatrix {
        let n = self.dim();
        let data = Mat::from_fn(k * n, k * n, |i, j| coeff[(i / n) * k + j / n] * self.data[(i % n, j % n)]);
        SquareMatrix {
            data,
            flags: MatrixFlags::NONE,
        }
    }

    /// Max entrywise distance.
    pub fn max_abs_diff(&self, other: &SquareMatrix) -> Result<f64> {
        self.check_same_dim(other)?;
        let n = self.dim();
        let mut r = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                r = r.max((self.data[(i, j)] - other.data[(i, j)]).norm());
            }
        }
        Ok(r)
    }

    fn check_same_dim(&self, other: &SquareMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(())
    }

    // ---------------------------------------------------------------- I/O

    /// Binary container, little endian:
    ///
    /// ```text
    /// magic  b"SQMX"
    /// u32    format version (1)
    /// u64    dimension N
    /// u8     flags (bit 0 hermitian, bit 1 unitary, bit 2 self-dual)
    /// N*N    (f64 re, f64 im) pairs, row-major
    /// ```
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(BINARY_MAGIC)?;
        w.write_all(&BINARY_VERSION.to_le_bytes())?;
        w.write_all(&(self.dim() as u64).to_le_bytes())?;
        w.write_all(&[self.flags.bits()])?;
        for z in self.row_major() {
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<SquareMatrix> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != BINARY_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let mut buf4 = [0u8; 4];
        r.read_exact(&mut buf4)?;
        let version = u32::from_le_bytes(buf4);
        if version != BINARY_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let mut buf8 = [0u8; 8];
        r.read_exact(&mut buf8)?;
        let n = u64::from_le_bytes(buf8) as usize;
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut flag = [0u8; 1];
        r.read_exact(&mut flag)?;
        let mut entries = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            r.read_exact(&mut buf8)?;
            let re = f64::from_le_bytes(buf8);
            r.read_exact(&mut buf8)?;
            let im = f64::from_le_bytes(buf8);
            entries.push(c64::new(re, im));
        }
        Ok(Self::from_row_major(n, &entries)?.with_flags(MatrixFlags::from_bits(flag[0])))
    }

    /// CSV: one matrix row per line, each cell a quoted `"re,im"` pair.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            let mut line = String::new();
            for j in 0..n {
                if j > 0 {
                    line.push(',');
                }
                let z = self.data[(i, j)];
                line.push_str(&format!("\"{:?},{:?}\"", z.re, z.im));
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    /// Parse the CSV layout of [`write_csv`](Self::write_csv); flags are
    /// detected from the entries.
    pub fn read_csv<R: BufRead>(r: R) -> Result<SquareMatrix> {
        let mut rows: Vec<Vec<c64>> = Vec::new();
        for line in r.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            rows.push(parse_csv_row(&line)?);
        }
        let n = rows.len();
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
        }
        let entries: Vec<c64> = rows.into_iter().flatten().collect();
        Ok(Self::from_row_major(n, &entries)?.detect_flags())
    }
}

const BINARY_MAGIC: &[u8; 4] = b"SQMX";
const BINARY_VERSION: u32 = 1;

pub(crate) fn max_abs_minus_identity(m: &Mat<c64>) -> f64 {
    let n = m.nrows();
    let mut r = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let target = if i == j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) };
            r = r.max((m[(i, j)] - target).norm());
        }
    }
    r
}

/// Parse one `"re,im"` cell.
pub fn parse_complex_cell(cell: &str) -> Result<c64> {
    let cell = cell.trim().trim_matches('"');
    let (re, im) = cell
        .split_once(',')
        .ok_or_else(|| Error::Format(format!("cell {cell:?} is not \"re,im\"")))?;
    let re: f64 = re.trim().parse().map_err(|_| Error::Format(format!("bad real part {re:?}")))?;
    let im: f64 = im.trim().parse().map_err(|_| Error::Format(format!("bad imaginary part {im:?}")))?;
    Ok(c64::new(re, im))
}

fn parse_csv_row(line: &str) -> Result<Vec<c64>> {
    let mut cells = Vec::new();
    let mut current = String::new();
    let mut quoted = false;
    for ch in line.chars() {
        match ch {
            '"' => quoted = !quoted,
            ',' if !quoted => {
                cells.push(parse_complex_cell(&current)?);
                current.clear();
            }
            _ => current.push(ch),
        }
    }
    if quoted {
        return Err(Error::Format("unterminated quote".into()));
    }
    if !current.trim().is_empty() {
        cells.push(parse_complex_cell(&current)?);
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SquareMatrix {
        SquareMatrix::from_row_major(
            2,
            &[
                c64::new(1.0, 0.0),
                c64::new(0.1, -2.5e-300),
                c64::new(-3.25, 1.0 / 3.0),
                c64::new(f64::MAX, -0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let m = sample();
        let mut buf = Vec::new();
        m.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 4 + 4 + 8 + 1 + 4 * 16);
        let back = SquareMatrix::read_binary(buf.as_slice()).unwrap();
        for (a, b) in m.row_major().iter().zip(back.row_major()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let m = sample();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let back = SquareMatrix::read_csv(buf.as_slice()).unwrap();
        for (a, b) in m.row_major().iter().zip(back.row_major()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(SquareMatrix::read_binary(&b"XXXX"[..]).is_err());
        assert!(SquareMatrix::read_csv(&b"\"1,0\",\"2,0\"\n"[..]).is_err());
        assert_eq!(SquareMatrix::from_fn(0, |_, _| c64::new(0.0, 0.0)).unwrap_err(), Error::ZeroDimension);
    }

    #[test]
    fn flag_detection() {
        let id = SquareMatrix::identity(4).with_flags(MatrixFlags::NONE).detect_flags();
        assert!(id.is_hermitian() && id.is_unitary() && id.is_selfdual());
        let m = SquareMatrix::from_row_major(2, &[c64::new(1.0, 0.0), c64::new(2.0, 0.0), c64::new(0.0, 1.0), c64::new(1.0, 0.0)])
            .unwrap()
            .detect_flags();
        assert!(!m.is_hermitian() && !m.is_unitary());
    }

    #[test]
    fn kron_layout() {
        let a = SquareMatrix::from_real_diagonal(&[1.0, 2.0]).unwrap();
        let coeff = [c64::new(0.0, 0.0), c64::new(1.0, 0.0), c64::new(3.0, 0.0), c64::new(0.0, 0.0)];
        let k = a.kron_left(2, &coeff);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.get(0, 2), c64::new(1.0, 0.0));
        assert_eq!(k.get(3, 1), c64::new(6.0, 0.0));
        assert_eq!(k.get(0, 0), c64::new(0.0, 0.0));
    }
}
