//! Exact `SU(2)` Euler decompositions.

use num_complex::Complex64;

pub(crate) type Mat2 = [[Complex64; 2]; 2];

const LOCK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Axis {
    Z,
    X,
}

impl Axis {
    fn other(self) -> Axis {
        match self {
            Axis::Z => Axis::X,
            Axis::X => Axis::Z,
        }
    }
}

pub(crate) fn rotation(axis: Axis, theta: f64) -> Mat2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let zero = Complex64::new(0.0, 0.0);
    match axis {
        Axis::Z => [
            [Complex64::new(c, -s), zero],
            [zero, Complex64::new(c, s)],
        ],
        Axis::X => [
            [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
            [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
        ],
    }
}

pub(crate) fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, o) in row.iter_mut().enumerate() {
            *o = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Product of rotations applied in the given (time) order.
pub(crate) fn product(rotations: &[(Axis, f64)]) -> Mat2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    rotations
        .iter()
        .fold([[one, zero], [zero, one]], |acc, &(axis, t)| mul(&rotation(axis, t), &acc))
}

/// Rotations in time order whose product is exactly `u`, an `SU(2)`
/// matrix, using `first` as the outer axis: `first(a)`, `other(b)`,
/// `first(c)` with `b ∈ [0, π]`. Degenerate middle angles shorten the
/// sequence.
pub(crate) fn decompose(u: &Mat2, first: Axis) -> Vec<(Axis, f64)> {
    // The X-outer form is the Z-outer form of H·U·H with the axes swapped.
    let m = match first {
        Axis::Z => *u,
        Axis::X => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let had = [
                [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
                [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            ];
            mul(&had, &mul(u, &had))
        }
    };
    let alpha = m[0][0];
    let beta = m[1][0];
    let outer = first;
    let middle = first.other();
    if beta.norm() < LOCK_TOL {
        return vec![(outer, -2.0 * alpha.arg())];
    }
    let b = 2.0 * beta.norm().atan2(alpha.norm());
    let diff = 2.0 * (Complex64::i() * beta).arg();
    if alpha.norm() < LOCK_TOL {
        return vec![(middle, b), (outer, diff)];
    }
    let sum = -2.0 * alpha.arg();
    vec![
        (outer, (sum - diff) / 2.0),
        (middle, b),
        (outer, (sum + diff) / 2.0),
    ]
}
