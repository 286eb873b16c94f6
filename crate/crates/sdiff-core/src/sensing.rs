//! Sensing matrices, sparse ground-truth signals and spectral-norm
//! estimation for the compressed-sensing experiments.
//!
//! Generators are pure functions of (dims, seed); see `rng` for the PRNG
//! and derivation scheme. Matrices are dense row-major f64 at desk scale.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::vector::DenseVector;

const DUMP_MAGIC: &[u8; 8] = b"SDIFFMAT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    /// i.i.d. standard normal entries, columns rescaled to unit l2 norm.
    GaussianUnitColumns,
    /// M distinct rows of the orthonormal DCT-II matrix of size N.
    PartialDct,
    /// Loaded or hand-built coefficients; no structural invariant.
    Custom,
}

impl MatrixKind {
    fn tag(self) -> u64 {
        match self {
            MatrixKind::GaussianUnitColumns => 0,
            MatrixKind::PartialDct => 1,
            MatrixKind::Custom => 2,
        }
    }

    fn from_tag(tag: u64) -> Option<Self> {
        match tag {
            0 => Some(MatrixKind::GaussianUnitColumns),
            1 => Some(MatrixKind::PartialDct),
            2 => Some(MatrixKind::Custom),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MatrixKind::GaussianUnitColumns => "gaussian",
            MatrixKind::PartialDct => "dct",
            MatrixKind::Custom => "custom",
        }
    }
}

/// Dense M x N sensing matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingMatrix {
    m: usize,
    n: usize,
    data: Vec<f64>,
    kind: MatrixKind,
    seed: u64,
}

impl SensingMatrix {
    pub fn from_dense(
        m: usize,
        n: usize,
        data: Vec<f64>,
        kind: MatrixKind,
        seed: u64,
    ) -> Result<Self> {
        if m < 1 || n < 1 {
            return Err(Error::param("matrix dimensions must be >= 1"));
        }
        if data.len() != m * n {
            return Err(Error::DimensionMismatch {
                context: "matrix storage",
                expected: m * n,
                got: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("matrix entries must be finite"));
        }
        Ok(Self {
            m,
            n,
            data,
            kind,
            seed,
        })
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// A x.
    pub fn matvec(&self, x: &DenseVector) -> DenseVector {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        let mut out = Vec::with_capacity(self.m);
        for i in 0..self.m {
            out.push(dot(self.row(i), x.as_slice()));
        }
        DenseVector::from_raw(out)
    }

    /// A^T r.
    pub fn matvec_t(&self, r: &DenseVector) -> DenseVector {
        assert_eq!(r.len(), self.m, "matvec_t dimension mismatch");
        let mut out = vec![0.0; self.n];
        for i in 0..self.m {
            let ri = r[i];
            if ri == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += ri * a;
            }
        }
        DenseVector::from_raw(out)
    }

    /// Binary dump: magic, M, N, kind, seed as little-endian u64s followed by
    /// M*N little-endian f64 coefficients in row-major order.
    pub fn write_binary(&self, path: &Path) -> Result<()> {
        let io_err = |source| Error::Io {
            path: path.display().to_string(),
            source,
        };
        let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
        let mut emit = |bytes: &[u8]| w.write_all(bytes).map_err(io_err);
        emit(DUMP_MAGIC)?;
        for header in [self.m as u64, self.n as u64, self.kind.tag(), self.seed] {
            emit(&header.to_le_bytes())?;
        }
        for v in &self.data {
            emit(&v.to_le_bytes())?;
        }
        w.flush().map_err(io_err)
    }

    pub fn read_binary(path: &Path) -> Result<Self> {
        let io_err = |source| Error::Io {
            path: path.display().to_string(),
            source,
        };
        let format_err = |reason: &str| Error::Format {
            path: path.display().to_string(),
            reason: reason.to_string(),
        };
        let mut r = BufReader::new(File::open(path).map_err(io_err)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).map_err(io_err)?;
        if &magic != DUMP_MAGIC {
            return Err(format_err("bad magic"));
        }
        let mut word = [0u8; 8];
        let mut read_u64 = |r: &mut BufReader<File>| -> Result<u64> {
            r.read_exact(&mut word).map_err(io_err)?;
            Ok(u64::from_le_bytes(word))
        };
        let m = read_u64(&mut r)? as usize;
        let n = read_u64(&mut r)? as usize;
        let kind = MatrixKind::from_tag(read_u64(&mut r)?)
            .ok_or_else(|| format_err("unknown kind tag"))?;
        let seed = read_u64(&mut r)?;
        if m == 0 || n == 0 || m.checked_mul(n).is_none() {
            return Err(format_err("bad dimensions"));
        }
        let mut data = Vec::with_capacity(m * n);
        let mut buf = [0u8; 8];
        for _ in 0..m * n {
            r.read_exact(&mut buf).map_err(io_err)?;
            data.push(f64::from_le_bytes(buf));
        }
        Self::from_dense(m, n, data, kind, seed)
    }

    /// Plain CSV of coefficients, one matrix row per line.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let io_err = |source| Error::Io {
            path: path.display().to_string(),
            source,
        };
        let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
        writeln!(
            w,
            "# kind={} m={} n={} seed={}",
            self.kind.label(),
            self.m,
            self.n,
            self.seed
        )
        .map_err(io_err)?;
        for i in 0..self.m {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(w, "{}", line.join(",")).map_err(io_err)?;
        }
        w.flush().map_err(io_err)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Column-normalized Gaussian matrix; deterministic in (m, n, seed).
pub fn gen_gaussian(m: usize, n: usize, seed: u64) -> Result<SensingMatrix> {
    if m < 1 || n < 1 {
        return Err(Error::param("matrix dimensions must be >= 1"));
    }
    let mut rng = stream_rng(seed, &[]);
    let mut data = vec![0.0; m * n];
    for v in data.iter_mut() {
        *v = rng.sample(StandardNormal);
    }
    for j in 0..n {
        loop {
            let norm_sq: f64 = (0..m).map(|i| data[i * n + j] * data[i * n + j]).sum();
            if norm_sq > 0.0 {
                let inv = 1.0 / norm_sq.sqrt();
                for i in 0..m {
                    data[i * n + j] *= inv;
                }
                break;
            }
            // Probability-zero guard: redraw an all-zero column.
            for i in 0..m {
                data[i * n + j] = rng.sample(StandardNormal);
            }
        }
    }
    SensingMatrix::from_dense(m, n, data, MatrixKind::GaussianUnitColumns, seed)
}

/// M rows drawn without replacement from the orthonormal DCT-II matrix of
/// size N, so that A A^T = I and ||A||_2^2 = 1.
pub fn gen_partial_dct(m: usize, n: usize, seed: u64) -> Result<SensingMatrix> {
    if m < 1 || n < 1 {
        return Err(Error::param("matrix dimensions must be >= 1"));
    }
    if m > n {
        return Err(Error::param(format!(
            "partial DCT requires M <= N, got {m} > {n}"
        )));
    }
    let mut rng = stream_rng(seed, &[]);
    let mut rows: Vec<usize> = (0..n).collect();
    let (selected, _) = rows.partial_shuffle(&mut rng, m);
    let mut selected = selected.to_vec();
    selected.sort_unstable();

    let mut data = vec![0.0; m * n];
    let scale0 = (1.0 / n as f64).sqrt();
    let scale = (2.0 / n as f64).sqrt();
    for (r, &k) in selected.iter().enumerate() {
        let c = if k == 0 { scale0 } else { scale };
        for j in 0..n {
            data[r * n + j] = c
                * (std::f64::consts::PI * (2.0 * j as f64 + 1.0) * k as f64 / (2.0 * n as f64))
                    .cos();
        }
    }
    SensingMatrix::from_dense(m, n, data, MatrixKind::PartialDct, seed)
}

/// Exactly s_truth nonzeros at uniformly random distinct indices, values
/// i.i.d. standard normal (exact zeros are redrawn).
pub fn gen_sparse_signal(n: usize, s_truth: usize, seed: u64) -> Result<DenseVector> {
    if s_truth < 1 || s_truth > n {
        return Err(Error::param(format!(
            "s_truth={s_truth} out of range 1..={n}"
        )));
    }
    let mut rng = stream_rng(seed, &[]);
    let mut idx: Vec<usize> = (0..n).collect();
    let (support, _) = idx.partial_shuffle(&mut rng, s_truth);
    let support = support.to_vec();
    let mut x = vec![0.0; n];
    for i in support {
        let mut val: f64 = rng.sample(StandardNormal);
        while val == 0.0 {
            val = rng.sample(StandardNormal);
        }
        x[i] = val;
    }
    DenseVector::new(x)
}

/// b + scale * randn(len(b)); deterministic given the seed.
pub fn add_gaussian_noise(b: &DenseVector, scale: f64, seed: u64) -> DenseVector {
    if scale == 0.0 {
        return b.clone();
    }
    let mut rng = stream_rng(seed, &[]);
    DenseVector::from_raw(
        b.iter()
            .map(|&v| v + scale * rng.sample::<f64, _>(StandardNormal))
            .collect(),
    )
}

/// Largest eigenvalue of A^T A by power iteration (relative change < 1e-10
/// or 1000 iterations). Deterministic: the start vector is seeded from the
/// matrix dimensions and stored seed.
pub fn spectral_norm_sq(a: &SensingMatrix) -> f64 {
    let n = a.cols();
    let mut rng = stream_rng(0x9e37_79b9, &[a.rows() as u64, n as u64, a.seed()]);
    let mut v: Vec<f64> = (0..n)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
    let mut v = DenseVector::from_raw(v);
    let mut lambda = 0.0f64;
    for _ in 0..1000 {
        let w = a.matvec_t(&a.matvec(&v));
        let new_lambda = v.dot(&w);
        let w_norm = w.norm_l2();
        if w_norm == 0.0 {
            return 0.0;
        }
        v = w.scale(1.0 / w_norm);
        if (new_lambda - lambda).abs() <= 1e-10 * new_lambda.abs().max(1e-300) {
            return new_lambda;
        }
        lambda = new_lambda;
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_columns_have_unit_norm() {
        let a = gen_gaussian(2, 2, 7).unwrap();
        for j in 0..2 {
            let norm_sq: f64 = (0..2).map(|i| a.row(i)[j] * a.row(i)[j]).sum();
            assert!((norm_sq.sqrt() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(
            gen_gaussian(8, 16, 3).unwrap(),
            gen_gaussian(8, 16, 3).unwrap()
        );
        assert_eq!(
            gen_partial_dct(8, 16, 3).unwrap(),
            gen_partial_dct(8, 16, 3).unwrap()
        );
        assert_eq!(
            gen_sparse_signal(16, 4, 3).unwrap(),
            gen_sparse_signal(16, 4, 3).unwrap()
        );
        assert_ne!(
            gen_gaussian(8, 16, 3).unwrap(),
            gen_gaussian(8, 16, 4).unwrap()
        );
    }

    #[test]
    fn gaussian_spectral_norm_sanity_band() {
        for seed in 0..3 {
            let a = gen_gaussian(64, 256, seed).unwrap();
            let l = spectral_norm_sq(&a);
            assert!(l > 1.0 && l < 20.0, "L = {l}");
        }
    }

    #[test]
    fn full_dct_is_orthonormal() {
        let a = gen_partial_dct(8, 8, 1).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let d: f64 = dot(a.row(i), a.row(j));
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((d - expected).abs() < 1e-12, "row {i} . row {j} = {d}");
            }
        }
    }

    #[test]
    fn partial_dct_rows_unit_norm_and_spectrum_one() {
        let a = gen_partial_dct(5, 12, 9).unwrap();
        for i in 0..5 {
            let norm: f64 = dot(a.row(i), a.row(i));
            assert!((norm - 1.0).abs() < 1e-12);
        }
        assert!((spectral_norm_sq(&a) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn sparse_signal_has_exact_support() {
        for seed in 0..20 {
            let x = gen_sparse_signal(32, 5, seed).unwrap();
            assert_eq!(x.norm_l0(), 5);
        }
    }

    #[test]
    fn sparse_signal_nonzero_mean_near_zero() {
        let mut sum = 0.0;
        let mut count = 0usize;
        for seed in 0..1000 {
            let x = gen_sparse_signal(16, 4, seed).unwrap();
            for &v in x.iter().filter(|v| **v != 0.0) {
                sum += v;
                count += 1;
            }
        }
        assert!((sum / count as f64).abs() < 0.1);
    }

    #[test]
    fn spectral_norm_on_known_matrices() {
        let eye = SensingMatrix::from_dense(2, 2, vec![1.0, 0.0, 0.0, 1.0], MatrixKind::Custom, 0)
            .unwrap();
        assert!((spectral_norm_sq(&eye) - 1.0).abs() < 1e-9);
        let diag = SensingMatrix::from_dense(2, 2, vec![2.0, 0.0, 0.0, 1.0], MatrixKind::Custom, 0)
            .unwrap();
        assert!((spectral_norm_sq(&diag) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn spectral_norm_dominates_rayleigh_quotients() {
        let a = gen_gaussian(12, 24, 5).unwrap();
        let l = spectral_norm_sq(&a);
        let mut rng = stream_rng(11, &[]);
        for _ in 0..100 {
            let v: Vec<f64> = (0..24)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let v = DenseVector::from_raw(v);
            let q = a.matvec(&v).norm_l2_sq() / v.norm_l2_sq();
            assert!(l >= q - 1e-8, "L={l} quotient={q}");
        }
    }

    #[test]
    fn binary_dump_round_trips() {
        let dir = std::env::temp_dir().join("sdiff-test-dump");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("a.bin");
        let a = gen_gaussian(4, 6, 13).unwrap();
        a.write_binary(&path).unwrap();
        let b = SensingMatrix::read_binary(&path).unwrap();
        assert_eq!(a, b);
        std::fs::remove_file(&path).ok();
    }
}
