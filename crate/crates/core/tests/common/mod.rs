//! Shared fixtures for the integration tests: the three example networks,
//! seeded random system generators, and an independent determinant oracle.

#![allow(dead_code)]

use ffsync::cli::{parse_system, SystemFile};
use ffsync::{Matrix, NetworkSystem, Polynomial, PrimeField};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const FAMILIES: [(u64, usize, usize); 6] = [
    (2, 2, 1),
    (2, 2, 2),
    (2, 3, 1),
    (3, 2, 2),
    (3, 3, 1),
    (5, 2, 2),
];

pub fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn system_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("systems")
        .join(name)
}

pub fn load(name: &str) -> SystemFile {
    parse_system(&std::fs::read_to_string(system_path(name)).unwrap()).unwrap()
}

pub fn example1() -> SystemFile {
    load("example1.txt")
}

pub fn example2() -> SystemFile {
    load("example2.txt")
}

pub fn example3() -> SystemFile {
    load("example3.txt")
}

pub fn mat(p: u64, rows: &[&[u64]]) -> Matrix {
    Matrix::from_rows(field(p), rows).unwrap()
}

pub fn poly(p: u64, coeffs: &[u64]) -> Polynomial {
    Polynomial::from_coeffs(field(p), coeffs)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, f: PrimeField, rows: usize, cols: usize) -> Matrix {
    let p = f.modulus();
    Matrix::from_fn(f, rows, cols, |_, _| rng.gen_range(0..p))
}

/// Entries are zero with probability `zero_prob`, otherwise uniform.
pub fn sparse_matrix(
    rng: &mut ChaCha8Rng,
    f: PrimeField,
    rows: usize,
    cols: usize,
    zero_prob: f64,
) -> Matrix {
    let p = f.modulus();
    Matrix::from_fn(f, rows, cols, |_, _| {
        if rng.gen_bool(zero_prob) {
            0
        } else {
            rng.gen_range(0..p)
        }
    })
}

pub fn random_invertible(rng: &mut ChaCha8Rng, f: PrimeField, r: usize) -> Matrix {
    loop {
        let t = random_matrix(rng, f, r, r);
        if t.rank() == r {
            return t;
        }
    }
}

/// `P U P^-1` with `U` strictly upper triangular.
pub fn random_nilpotent(rng: &mut ChaCha8Rng, f: PrimeField, r: usize) -> Matrix {
    let p = f.modulus();
    let u = Matrix::from_fn(f, r, r, |i, j| if j > i { rng.gen_range(0..p) } else { 0 });
    let pm = random_invertible(rng, f, r);
    pm.mul(&u).unwrap().mul(&pm.inverse().unwrap()).unwrap()
}

fn block_diag_upper(f: PrimeField, tl: &Matrix, tr: &Matrix, br: &Matrix) -> Matrix {
    let d = tl.rows();
    let r = d + br.rows();
    Matrix::from_fn(f, r, r, |i, j| match (i < d, j < d) {
        (true, true) => tl[(i, j)] as u64,
        (true, false) => tr[(i, j - d)] as u64,
        (false, true) => 0,
        (false, false) => br[(i - d, j - d)] as u64,
    })
}

/// A network built around a chosen `W1`: `A = T [[Q, X], [0, N]] T^-1`
/// where the first `d` columns of `T` are `1_n (x) a_k`. With `N`
/// nilpotent the network synchronizes; otherwise it usually does not.
pub fn structured_system(
    rng: &mut ChaCha8Rng,
    f: PrimeField,
    n: usize,
    m: usize,
    nilpotent_tail: bool,
) -> NetworkSystem {
    let nm = n * m;
    let d = rng.gen_range(0..=m);
    let alpha = random_invertible(rng, f, m).submatrix(0, 0, m, d);
    let t = loop {
        let mut t = random_matrix(rng, f, nm, nm);
        for r in 0..nm {
            for c in 0..d {
                t.set(r, c, f.elem(alpha[(r % m, c)] as u64)).unwrap();
            }
        }
        if t.rank() == nm {
            break t;
        }
    };
    let q = random_matrix(rng, f, d, d);
    let x = random_matrix(rng, f, d, nm - d);
    let tail = if nilpotent_tail {
        random_nilpotent(rng, f, nm - d)
    } else {
        random_matrix(rng, f, nm - d, nm - d)
    };
    let core = block_diag_upper(f, &q, &x, &tail);
    let a = t.mul(&core).unwrap().mul(&t.inverse().unwrap()).unwrap();
    NetworkSystem::new(n, m, a).unwrap()
}

/// Random `A` whose last block column is adjusted so every block row sums
/// to the same `A_1`.
pub fn equal_row_sum_system(
    rng: &mut ChaCha8Rng,
    f: PrimeField,
    n: usize,
    m: usize,
) -> NetworkSystem {
    let nm = n * m;
    let p = f.modulus();
    let target = random_matrix(rng, f, m, m);
    let mut a = random_matrix(rng, f, nm, nm);
    for i in 0..n {
        for r in 0..m {
            for c in 0..m {
                let partial: u64 = (0..n - 1).map(|j| a[(i * m + r, j * m + c)] as u64).sum();
                let v = (target[(r, c)] as u64 + p * n as u64 - partial % p) % p;
                a.set(i * m + r, (n - 1) * m + c, f.elem(v)).unwrap();
            }
        }
    }
    NetworkSystem::new(n, m, a).unwrap()
}

/// Equal block row sums with the difference dynamics chosen directly:
/// `A = T^-1 [[A_1, X], [0, N]] T` for `z_1 = x_1`, `z_i = x_i - x_1`.
pub fn difference_system(
    rng: &mut ChaCha8Rng,
    f: PrimeField,
    n: usize,
    m: usize,
    nilpotent_tail: bool,
) -> NetworkSystem {
    let nm = n * m;
    let minus_one = f.modulus() - 1;
    let t = Matrix::from_fn(f, nm, nm, |r, c| {
        if r == c {
            1
        } else if r >= m && c == r % m {
            minus_one
        } else {
            0
        }
    });
    let a1 = random_matrix(rng, f, m, m);
    let x = random_matrix(rng, f, m, nm - m);
    let tail = if nilpotent_tail {
        random_nilpotent(rng, f, nm - m)
    } else {
        random_matrix(rng, f, nm - m, nm - m)
    };
    let core = block_diag_upper(f, &a1, &x, &tail);
    let a = t.inverse().unwrap().mul(&core).unwrap().mul(&t).unwrap();
    NetworkSystem::new(n, m, a).unwrap()
}

/// The mix used by the randomized suites. Cycles through uniform, sparse,
/// constructed-synchronizing, constructed-perturbed and equal-row-sum
/// generators so both verdicts are well represented.
pub fn random_system(rng: &mut ChaCha8Rng, p: u64, n: usize, m: usize, i: usize) -> NetworkSystem {
    let f = field(p);
    let nm = n * m;
    match i % 6 {
        0 => NetworkSystem::new(n, m, random_matrix(rng, f, nm, nm)).unwrap(),
        1 => NetworkSystem::new(n, m, sparse_matrix(rng, f, nm, nm, 0.65)).unwrap(),
        2 => structured_system(rng, f, n, m, true),
        3 => structured_system(rng, f, n, m, false),
        4 => difference_system(rng, f, n, m, true),
        _ => equal_row_sum_system(rng, f, n, m),
    }
}

/// `det(xI - A)` by cofactor expansion along the first row.
pub fn cofactor_char_poly(a: &Matrix) -> Polynomial {
    let f = a.field();
    let r = a.rows();
    let x = Polynomial::monomial(f, 1);
    let entries: Vec<Vec<Polynomial>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let c = Polynomial::from_coeffs(f, &[a[(i, j)] as u64]);
                    if i == j {
                        &x - &c
                    } else {
                        &Polynomial::zero(f) - &c
                    }
                })
                .collect()
        })
        .collect();
    let cols: Vec<usize> = (0..r).collect();
    det(f, &entries, 0, &cols)
}

fn det(f: PrimeField, m: &[Vec<Polynomial>], row: usize, cols: &[usize]) -> Polynomial {
    if cols.is_empty() {
        return Polynomial::one(f);
    }
    let mut acc = Polynomial::zero(f);
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[row][c] * &det(f, m, row + 1, &rest);
        acc = if k % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

/// `T^-1 A T` computed directly.
pub fn conjugate(a: &Matrix, t: &Matrix) -> Matrix {
    t.inverse().unwrap().mul(a).unwrap().mul(t).unwrap()
}
