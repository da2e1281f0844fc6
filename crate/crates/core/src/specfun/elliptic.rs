//! Complete elliptic integral of the first kind.

use crate::error::{domain, Error, Result};

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 || (x + y).min(x + z).min(y + z) == 0.0 {
        return Err(domain("carlson_rf", format!("invalid arguments ({x}, {y}, {z})")));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..200 {
        let mean = (x + y + z) / 3.0;
        let dx = 1.0 - x / mean;
        let dy = 1.0 - y / mean;
        let dz = 1.0 - z / mean;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return Ok((1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / mean.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    Err(Error::NoConvergence {
        function: "carlson_rf",
        iterations: 200,
    })
}

/// `K(m) = ∫_0^{π/2} dθ / √(1 − m sin²θ)` in the parameter convention
/// (`m = k²`), for `m < 1`. Diverges logarithmically as `m → 1`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !(m < 1.0) {
        return Err(domain("elliptic_k", format!("parameter must be < 1, got {m}")));
    }
    carlson_rf(0.0, 1.0 - m, 1.0)
}
