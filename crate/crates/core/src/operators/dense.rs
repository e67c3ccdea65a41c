//! Dense matrices of the walk operators, assembled from their operator-sum
//! expressions rather than from the in-place `apply_*` routines, so the two
//! can cross-check each other on small lattices.

use ndarray::Array2;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hilbert::{flat, Boundary, Direction, Labeling, LatticeConfig};
use crate::operators::{grover_coin, OracleSpec};
use crate::scalar::Real;

/// Largest state dimension for which dense matrices are built.
pub const DENSE_DIM_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseKind {
    Coin,
    Shift,
    Oracle,
    Step,
}

pub fn dense_operator<T: Real>(spec: &OracleSpec, which: DenseKind) -> Result<Array2<Complex<T>>> {
    let cfg = spec.config();
    let dim = cfg.dim();
    if dim > DENSE_DIM_LIMIT {
        return Err(Error::Size {
            dim,
            limit: DENSE_DIM_LIMIT,
        });
    }
    Ok(match which {
        DenseKind::Coin => coin_matrix(cfg),
        DenseKind::Shift => shift_matrix(cfg),
        DenseKind::Oracle => oracle_matrix(spec),
        DenseKind::Step => shift_matrix(cfg).dot(&coin_matrix(cfg)).dot(&oracle_matrix(spec)),
    })
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn one<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `G ⊗ I_{N·m}`; the coin is the most significant factor of the layout.
fn coin_matrix<T: Real>(cfg: &LatticeConfig) -> Array2<Complex<T>> {
    let d = cfg.coin_dim();
    let g = grover_coin::<T>(d).expect("coin dimension is 4 or 8");
    let block = cfg.sites() * cfg.layers();
    let mut out = Array2::from_elem((cfg.dim(), cfg.dim()), zero());
    for r in 0..d {
        for c in 0..d {
            for s in 0..block {
                out[[r * block + s, c * block + s]] = Complex::new(g.entry(r, c), T::zero());
            }
        }
    }
    out
}

/// `I − (2/d)·J_d ⊗ Σ_marks |x,y,η_z⟩⟨x,y,η_z|` where `J_d` is the all-ones
/// coin matrix.
fn oracle_matrix<T: Real>(spec: &OracleSpec) -> Array2<Complex<T>> {
    let cfg = spec.config();
    let (l, m, d) = (cfg.side(), cfg.layers(), cfg.coin_dim());
    let mut out = Array2::from_elem((cfg.dim(), cfg.dim()), zero());
    for i in 0..cfg.dim() {
        out[[i, i]] = one();
    }
    let w = Complex::new(T::lit(2.0) / T::from_count(d), T::zero());
    for mark in spec.marks().iter() {
        for r in 0..d {
            for c in 0..d {
                let row = flat(r, mark.x, mark.y, mark.layer, l, m);
                let col = flat(c, mark.x, mark.y, mark.layer, l, m);
                out[[row, col]] = out[[row, col]] - w;
            }
        }
    }
    out
}

fn shift_matrix<T: Real>(cfg: &LatticeConfig) -> Array2<Complex<T>> {
    match cfg.labeling() {
        Labeling::None | Labeling::Static => planar_shift_matrix(cfg),
        Labeling::Dynamic => dynamic_shift_matrix(cfg),
    }
}

/// Sum of `|to⟩⟨from| ⊗ Σ_{x,y ∈ range} |x+dx, y+dy⟩⟨x,y| ⊗ I_label` terms.
/// Periodic: the four cyclic terms over all sites. Open: the same four terms
/// restricted to the interior, plus the four `|c⟩⟨c|` self-loop terms on the
/// boundary rows and columns.
fn planar_shift_matrix<T: Real>(cfg: &LatticeConfig) -> Array2<Complex<T>> {
    use Direction::*;
    let (l, m) = (cfg.side(), cfg.layers());
    let last = l - 1;
    let mut out = Array2::from_elem((cfg.dim(), cfg.dim()), zero::<T>());
    let mut term = |to: Direction, from: Direction, x: usize, y: usize, nx: usize, ny: usize| {
        for z in 0..m {
            let row = flat(to.index(), nx, ny, z, l, m);
            let col = flat(from.index(), x, y, z, l, m);
            out[[row, col]] = out[[row, col]] + one();
        }
    };
    let wrap = |v: usize, delta: isize| ((v as isize + delta).rem_euclid(l as isize)) as usize;
    for x in 0..l {
        for y in 0..l {
            match cfg.boundary() {
                Boundary::Periodic => {
                    term(Down, Up, x, y, x, wrap(y, 1));
                    term(Up, Down, x, y, x, wrap(y, -1));
                    term(Left, Right, x, y, wrap(x, 1), y);
                    term(Right, Left, x, y, wrap(x, -1), y);
                }
                Boundary::Open => {
                    // interior
                    if y < last {
                        term(Down, Up, x, y, x, y + 1);
                    }
                    if y > 0 {
                        term(Up, Down, x, y, x, y - 1);
                    }
                    if x < last {
                        term(Left, Right, x, y, x + 1, y);
                    }
                    if x > 0 {
                        term(Right, Left, x, y, x - 1, y);
                    }
                    // exterior
                    if y == last {
                        term(Up, Up, x, y, x, y);
                    }
                    if y == 0 {
                        term(Down, Down, x, y, x, y);
                    }
                    if x == last {
                        term(Right, Right, x, y, x, y);
                    }
                    if x == 0 {
                        term(Left, Left, x, y, x, y);
                    }
                }
            }
        }
    }
    out
}

/// `|1−i,1−j,1−k⟩⟨i,j,k| ⊗ |x+(−1)^i(1−δ_ij), y+(−1)^i δ_ij, η_{z+(−1)^k}⟩⟨x,y,η_z|`,
/// with each escaping factor (planar or label) replaced by a self-loop that
/// keeps its own coin bits.
fn dynamic_shift_matrix<T: Real>(cfg: &LatticeConfig) -> Array2<Complex<T>> {
    let (l, m) = (cfg.side() as isize, cfg.layers() as isize);
    let mut out = Array2::from_elem((cfg.dim(), cfg.dim()), zero::<T>());
    let sign = |bit: isize| 1 - 2 * bit;
    for i in 0..2isize {
        for j in 0..2isize {
            for k in 0..2isize {
                let delta = isize::from(i == j);
                let (dx, dy, dz) = (sign(i) * (1 - delta), sign(i) * delta, sign(k));
                for x in 0..l {
                    for y in 0..l {
                        for z in 0..m {
                            let (mut nx, mut ny) = (x + dx, y + dy);
                            let (mut ni, mut nj) = (1 - i, 1 - j);
                            let inside = (0..l).contains(&nx) && (0..l).contains(&ny);
                            match (cfg.boundary(), inside) {
                                (_, true) => {}
                                (Boundary::Periodic, false) => {
                                    nx = nx.rem_euclid(l);
                                    ny = ny.rem_euclid(l);
                                }
                                (Boundary::Open, false) => {
                                    (nx, ny, ni, nj) = (x, y, i, j);
                                }
                            }
                            let (nz, nk) = if (0..m).contains(&(z + dz)) { (z + dz, 1 - k) } else { (z, k) };
                            let to = (4 * ni + 2 * nj + nk) as usize;
                            let from = (4 * i + 2 * j + k) as usize;
                            let (lu, mu) = (l as usize, m as usize);
                            let row = flat(to, nx as usize, ny as usize, nz as usize, lu, mu);
                            let col = flat(from, x as usize, y as usize, z as usize, lu, mu);
                            out[[row, col]] = out[[row, col]] + one();
                        }
                    }
                }
            }
        }
    }
    out
}

/// `max |(O†O − I)_{ij}|`.
pub fn max_unitarity_defect<T: Real>(op: &Array2<Complex<T>>) -> T {
    let adj = op.t().mapv(|v| v.conj());
    let prod = adj.dot(op);
    prod.indexed_iter()
        .map(|((r, c), v)| {
            let id = if r == c { one() } else { zero() };
            (v - id).norm()
        })
        .fold(T::zero(), T::max)
}
