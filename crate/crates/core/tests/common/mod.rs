//! Test-only reference arithmetic, kept independent of the library's
//! linear-algebra path: plain nested loops over `Vec`s of complex numbers.
//! Oracle results computed here are compared against the library, never
//! derived from it.

use num_complex::Complex64;
use qontrol::{Model, RandomSource, StateVector, UnitaryMatrix};
use qontrol::{Command, C64};

pub type Mat = Vec<Vec<Complex64>>;
pub type Vect = Vec<Complex64>;

pub fn vec_of(s: &StateVector) -> Vect {
    s.amplitudes().iter().copied().collect()
}

pub fn mat_of(u: &UnitaryMatrix) -> Mat {
    let m = u.matrix();
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn mat_vec(m: &Mat, v: &Vect) -> Vect {
    let n = m.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..v.len() {
            acc += m[i][j] * v[j];
        }
        out[i] = acc;
    }
    out
}

pub fn adjoint(m: &Mat) -> Mat {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i].conj()).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn inner(a: &Vect, b: &Vect) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `⟨v| U† P U |v⟩` by explicit multiply-accumulate.
pub fn expectation(v: &Vect, u: &Mat, p: &Mat) -> f64 {
    let uv = mat_vec(u, v);
    let puv = mat_vec(p, &uv);
    inner(&uv, &puv).re
}

/// Outcome distribution of `model` at `b` computed entirely with the
/// reference arithmetic above.
pub fn oracle_probabilities(model: &Model, b: &Command) -> Vec<f64> {
    let v = vec_of(model.state_for(b).unwrap());
    let u = mat_of(&model.resolve_unitary(b).unwrap());
    model
        .observable_for(b)
        .unwrap()
        .projectors()
        .iter()
        .map(|p| {
            let pm: Mat = (0..p.nrows())
                .map(|i| (0..p.ncols()).map(|j| p[(i, j)]).collect())
                .collect();
            expectation(&v, &u, &pm)
        })
        .collect()
}

pub fn max_abs_diff_vec(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
}

pub fn max_abs_diff_cvec(a: &Vect, b: &Vect) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Convenience: seeded commands `"0", "1", "00", ...` for fixtures.
pub fn command_fixture(k: usize) -> Vec<Command> {
    ["0", "1", "00", "01", "10", "11", "000"][..k]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

/// A deterministic rng for a test, namespaced by stream.
pub fn rng(seed: u64, stream: u64) -> rand_chacha::ChaCha8Rng {
    RandomSource::new(seed, stream).rng()
}

#[allow(dead_code)]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
