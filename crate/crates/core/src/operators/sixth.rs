//! Coefficient tables of the sixth-order narrow-stencil closure.

/// Rational entries `(numerator, denominator)` of the α-independent part of
/// the 6×6 boundary corner of `A`, in units of `1/(180h)`.
pub const CORNER_M0: [[(i64, i64); 6]; 6] = [
    [(-19697, 72), (2098907, 960), (-3475609, 720), (6987397, 1440), (-193649, 80), (278033, 576)],
    [(2098907, 960), (-839647, 72), (6921397, 288), (-387859, 16), (6969449, 576), (-1739359, 720)],
    [(-3475609, 720), (6921397, 288), (-577009, 12), (6943085, 144), (-3481031, 144), (2321591, 480)],
    [(6987397, 1440), (-387859, 16), (6943085, 144), (-1726033, 36), (2298631, 96), (-3473101, 720)],
    [(-193649, 80), (6969449, 576), (-3481031, 144), (2298631, 96), (-104756, 9), (6235729, 2880)],
    [(278033, 576), (-1739359, 720), (2321591, 480), (-3473101, 720), (6235729, 2880), (0, 1)],
];

/// The free direction of the corner is `α · k kᵀ` with this `k`.
pub const FREE_DIRECTION: [i64; 6] = [1, -5, 10, -10, 5, -1];

/// Scale of the corner and interior stencil of `A`: entries are `c / (SCALE·h)`.
pub const A_SCALE: f64 = 180.0;

/// Half stencil of the interior rows of `A` in units of `1/(180h)`:
/// diagonal, then first, second and third off-diagonals.
pub const A_INTERIOR_HALF: [f64; 4] = [490.0, -270.0, 27.0, -2.0];

/// Boundary weights of `H` in units of `h/43200`.
pub const NORM_BOUNDARY: [i64; 6] = [13649, 60065, 27110, 53590, 39385, 43801];
pub const NORM_DENOMINATOR: i64 = 43200;

/// Interior first-derivative stencil `Q[i][i+k]`, k = 0..3, in units of 1/60.
pub const Q_INTERIOR_HALF: [f64; 4] = [0.0, 45.0, -9.0, 1.0];
pub const Q_SCALE: f64 = 60.0;

/// The α value of the classical operator.
pub const CLASSICAL_ALPHA: f64 = 490.0;

/// Corner entry `(i, j)` of `180h·A` for the given α, evaluated as
/// `(num + α·kᵢkⱼ·den) / den` so integer α values lose no precision before
/// the single division.
pub fn corner_entry(i: usize, j: usize, alpha: f64) -> f64 {
    let (num, den) = CORNER_M0[i][j];
    let kk = (FREE_DIRECTION[i] * FREE_DIRECTION[j]) as f64;
    (num as f64 + alpha * kk * den as f64) / den as f64
}

/// Corner entry of `A` itself: `corner_entry / (180h)` with `1/h = n`.
pub fn a_corner_entry(i: usize, j: usize, alpha: f64, n: usize) -> f64 {
    let (num, den) = CORNER_M0[i][j];
    let kk = (FREE_DIRECTION[i] * FREE_DIRECTION[j]) as f64;
    (num as f64 + alpha * kk * den as f64) / (den as f64 * A_SCALE) * n as f64
}
