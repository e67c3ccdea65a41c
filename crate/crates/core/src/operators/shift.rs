//! Flip-flop shift operators.
//!
//! Planar moves follow the explicit operator-sum convention: `↑` moves to
//! `y + 1`, `↓` to `y − 1`, `→` to `x + 1`, `←` to `x − 1`, and the coin is
//! inverted. With a dynamic label the offsets are read from the three-qubit
//! shift, `x + (−1)^i (1 − δ_ij)`, `y + (−1)^i δ_ij`, `z + (−1)^k`, so there
//! `→ = |10⟩` moves to `x − 1`.
//!
//! Moves that would leave an open lattice self-loop with the coin unchanged.
//! The label direction of the dynamic shift is always open.

use crate::error::{Error, Result};
use crate::hilbert::{flat, Boundary, Direction, Labeling, LatticeConfig, State};
use crate::scalar::Real;

/// Image of the basis state `(coin, x, y, z)` under the shift of `config`.
/// The shift is a permutation of basis states.
pub fn shift_destination(
    config: &LatticeConfig,
    coin: usize,
    x: usize,
    y: usize,
    z: usize,
) -> (usize, usize, usize, usize) {
    match config.labeling() {
        Labeling::None | Labeling::Static => {
            let dir = Direction::from_index(coin).expect("coin index < 4");
            let (dx, dy) = match dir {
                Direction::Up => (0, 1),
                Direction::Down => (0, -1),
                Direction::Right => (1, 0),
                Direction::Left => (-1, 0),
            };
            match planar_move(config, x, y, dx, dy) {
                Some((nx, ny)) => (dir.flipped().index(), nx, ny, z),
                None => (coin, x, y, z),
            }
        }
        Labeling::Dynamic => {
            let planar = coin >> 1;
            let k = coin & 1;
            let (i, j) = (planar >> 1, planar & 1);
            let sign = if i == 0 { 1 } else { -1 };
            let (dx, dy) = if i == j { (0, sign) } else { (sign, 0) };
            let (planar, nx, ny) = match planar_move(config, x, y, dx, dy) {
                Some((nx, ny)) => (3 - planar, nx, ny),
                None => (planar, x, y),
            };
            let (k, nz) = match (k, z) {
                (0, z) if z + 1 < config.layers() => (1, z + 1),
                (1, z) if z > 0 => (0, z - 1),
                _ => (k, z),
            };
            ((planar << 1) | k, nx, ny, nz)
        }
    }
}

fn planar_move(config: &LatticeConfig, x: usize, y: usize, dx: isize, dy: isize) -> Option<(usize, usize)> {
    let l = config.side() as isize;
    let (nx, ny) = (x as isize + dx, y as isize + dy);
    match config.boundary() {
        Boundary::Periodic => Some((nx.rem_euclid(l) as usize, ny.rem_euclid(l) as usize)),
        Boundary::Open => {
            if (0..l).contains(&nx) && (0..l).contains(&ny) {
                Some((nx as usize, ny as usize))
            } else {
                None
            }
        }
    }
}

fn permute<T: Real>(state: &State<T>) -> State<T> {
    let cfg = *state.config();
    let (l, m) = (cfg.side(), cfg.layers());
    let src = state.amplitudes();
    let mut out = vec![src[0] * T::zero(); src.len()];
    for coin in 0..cfg.coin_dim() {
        for x in 0..l {
            for y in 0..l {
                for z in 0..m {
                    let (c2, x2, y2, z2) = shift_destination(&cfg, coin, x, y, z);
                    out[flat(c2, x2, y2, z2, l, m)] = src[flat(coin, x, y, z, l, m)];
                }
            }
        }
    }
    State::from_amplitudes(cfg, out).expect("length preserved")
}

fn require(state: &State<impl Real>, boundary: Boundary, dynamic: bool) -> Result<()> {
    let cfg = state.config();
    let is_dynamic = cfg.labeling() == Labeling::Dynamic;
    if is_dynamic != dynamic {
        return Err(Error::Mode(format!("shift does not apply to labeling = {}", cfg.labeling())));
    }
    if !dynamic && cfg.boundary() != boundary {
        return Err(Error::Mode(format!("shift does not apply to boundary = {}", cfg.boundary())));
    }
    Ok(())
}

/// Flip-flop shift on the torus.
pub fn apply_shift_periodic<T: Real>(state: &State<T>) -> Result<State<T>> {
    require(state, Boundary::Periodic, false)?;
    Ok(permute(state))
}

/// Flip-flop shift on the open grid, interior moves plus boundary self-loops.
pub fn apply_shift_open<T: Real>(state: &State<T>) -> Result<State<T>> {
    require(state, Boundary::Open, false)?;
    Ok(permute(state))
}

/// Three-qubit-coin shift moving position and label together. Position
/// boundary follows the configuration; the label direction is open.
pub fn apply_shift_dynamic<T: Real>(state: &State<T>) -> Result<State<T>> {
    require(state, Boundary::Periodic, true)?;
    Ok(permute(state))
}

/// Shift selected by the state's boundary and labeling.
pub fn apply_shift<T: Real>(state: &State<T>) -> State<T> {
    permute(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{dynamic_coin_index, index_of};

    fn cfg(l: usize, b: Boundary, m: usize, lab: Labeling) -> LatticeConfig {
        LatticeConfig::new(l, b, m, lab).unwrap()
    }

    fn moved(c: &LatticeConfig, coin: usize, x: usize, y: usize, z: usize) -> (usize, usize, usize, usize) {
        let s = State::<f64>::basis(*c, coin, x, y, z).unwrap();
        let out = apply_shift(&s);
        let idx = out.amplitudes().iter().position(|a| a.re == 1.0).unwrap();
        crate::hilbert::decode(idx, c).unwrap()
    }

    #[test]
    fn periodic_examples() {
        let c = cfg(4, Boundary::Periodic, 2, Labeling::Static);
        let up = Direction::Up.index();
        let down = Direction::Down.index();
        assert_eq!(moved(&c, up, 0, 3, 1), (down, 0, 0, 1));
        let c = cfg(4, Boundary::Periodic, 1, Labeling::None);
        assert_eq!(
            moved(&c, Direction::Right.index(), 1, 1, 0),
            (Direction::Left.index(), 2, 1, 0)
        );
        assert_eq!(moved(&c, Direction::Left.index(), 0, 2, 0), (Direction::Right.index(), 3, 2, 0));
        assert_eq!(moved(&c, down, 2, 0, 0), (up, 2, 3, 0));
    }

    #[test]
    fn open_boundary_self_loops() {
        let c = cfg(4, Boundary::Open, 1, Labeling::None);
        let up = Direction::Up.index();
        let down = Direction::Down.index();
        assert_eq!(moved(&c, up, 2, 3, 0), (up, 2, 3, 0));
        assert_eq!(moved(&c, down, 1, 0, 0), (down, 1, 0, 0));
        assert_eq!(moved(&c, Direction::Right.index(), 3, 1, 0), (Direction::Right.index(), 3, 1, 0));
        assert_eq!(moved(&c, Direction::Left.index(), 0, 1, 0), (Direction::Left.index(), 0, 1, 0));
        // interior moves as on the torus
        assert_eq!(moved(&c, up, 2, 1, 0), (down, 2, 2, 0));
    }

    #[test]
    fn dynamic_examples() {
        let c = cfg(4, Boundary::Periodic, 2, Labeling::Dynamic);
        let c000 = dynamic_coin_index(Direction::Up, 0);
        let c111 = dynamic_coin_index(Direction::Down, 1);
        assert_eq!(moved(&c, c000, 1, 1, 0), (c111, 1, 2, 1));
        // label boundary: z = m-1 with k = 0 keeps z and k, planar part still moves
        assert_eq!(moved(&c, c000, 1, 1, 1), (dynamic_coin_index(Direction::Down, 0), 1, 2, 1));
        // k = 1 at z = 0 also self-loops in the label direction
        assert_eq!(moved(&c, c111, 1, 1, 0), (dynamic_coin_index(Direction::Up, 1), 1, 0, 0));
        // |10⟩ moves to x - 1 under the three-qubit shift
        let c100 = dynamic_coin_index(Direction::Right, 1);
        assert_eq!(moved(&c, c100, 1, 1, 1), (dynamic_coin_index(Direction::Left, 0), 0, 1, 0));
    }

    #[test]
    fn mode_errors() {
        let s = State::<f64>::zeros(cfg(4, Boundary::Open, 1, Labeling::None));
        assert!(apply_shift_periodic(&s).is_err());
        assert!(apply_shift_open(&s).is_ok());
        assert!(apply_shift_dynamic(&s).is_err());
        let s = State::<f64>::zeros(cfg(4, Boundary::Periodic, 2, Labeling::Dynamic));
        assert!(apply_shift_periodic(&s).is_err());
        assert!(apply_shift_dynamic(&s).is_ok());
    }

    #[test]
    fn involution_on_all_basis_states() {
        for l in 2..=8 {
            for b in [Boundary::Periodic, Boundary::Open] {
                for (m, lab) in [(1, Labeling::None), (3, Labeling::Static), (1, Labeling::Dynamic), (3, Labeling::Dynamic)] {
                    let c = cfg(l, b, m, lab);
                    for idx in 0..c.dim() {
                        let (coin, x, y, z) = crate::hilbert::decode(idx, &c).unwrap();
                        let (c1, x1, y1, z1) = shift_destination(&c, coin, x, y, z);
                        let back = shift_destination(&c, c1, x1, y1, z1);
                        assert_eq!(back, (coin, x, y, z), "L={l} {b:?} m={m} {lab:?}");
                        let _ = index_of(c1, x1, y1, z1, &c).unwrap();
                    }
                }
            }
        }
    }
}
