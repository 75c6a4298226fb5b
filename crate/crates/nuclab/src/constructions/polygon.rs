//! Convex polygon clipping and exact moment integration in 2D.
//!
//! The piecewise-exact energy integrator works on convex polygons only:
//! regions are built by successive half-plane clipping, circles are replaced
//! by inscribed 256-gons, and integrands that are quadratic polynomials are
//! integrated exactly from the boundary moments.

pub type Point = [f64; 2];
pub type Polygon = Vec<Point>;

/// Clip a convex polygon against the half-plane `{x·n ≤ c}`.
pub fn clip_halfplane(poly: &Polygon, n: Point, c: f64) -> Polygon {
    let mut out = Polygon::new();
    let len = poly.len();
    if len == 0 {
        return out;
    }
    for i in 0..len {
        let p = poly[i];
        let q = poly[(i + 1) % len];
        let dp = p[0] * n[0] + p[1] * n[1] - c;
        let dq = q[0] * n[0] + q[1] * n[1] - c;
        if dp <= 0.0 {
            out.push(p);
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq <= 0.0) {
            let t = dp / (dp - dq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Clip a convex polygon against a convex region given as half-planes.
pub fn clip_convex(poly: &Polygon, halfplanes: &[(Point, f64)]) -> Polygon {
    let mut cur = poly.clone();
    for &(n, c) in halfplanes {
        cur = clip_halfplane(&cur, n, c);
        if cur.is_empty() {
            break;
        }
    }
    cur
}

/// Inscribed regular polygon of a circle around the origin, counterclockwise.
pub fn regular_gon(radius: f64, sides: usize) -> Polygon {
    (0..sides)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / sides as f64;
            [radius * t.cos(), radius * t.sin()]
        })
        .collect()
}

/// Signed area (positive for counterclockwise orientation).
pub fn signed_area(poly: &Polygon) -> f64 {
    let len = poly.len();
    let mut a = 0.0;
    for i in 0..len {
        let p = poly[i];
        let q = poly[(i + 1) % len];
        a += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * a
}

pub fn area(poly: &Polygon) -> f64 {
    signed_area(poly).abs()
}

/// Reorder to counterclockwise if needed.
pub fn ensure_ccw(poly: &mut Polygon) {
    if signed_area(poly) < 0.0 {
        poly.reverse();
    }
}

/// Area and first/second moments `∫1, ∫x, ∫y, ∫x², ∫xy, ∫y²`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Moments {
    pub a: f64,
    pub x: f64,
    pub y: f64,
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

/// Exact moments of a counterclockwise polygon (Green's theorem).
pub fn moments(poly: &Polygon) -> Moments {
    let len = poly.len();
    let mut m = Moments::default();
    for i in 0..len {
        let [x0, y0] = poly[i];
        let [x1, y1] = poly[(i + 1) % len];
        let cross = x0 * y1 - x1 * y0;
        m.a += cross;
        m.x += (x0 + x1) * cross;
        m.y += (y0 + y1) * cross;
        m.xx += (x0 * x0 + x0 * x1 + x1 * x1) * cross;
        m.xy += (x0 * y1 + 2.0 * x0 * y0 + 2.0 * x1 * y1 + x1 * y0) * cross;
        m.yy += (y0 * y0 + y0 * y1 + y1 * y1) * cross;
    }
    m.a /= 2.0;
    m.x /= 6.0;
    m.y /= 6.0;
    m.xx /= 12.0;
    m.xy /= 24.0;
    m.yy /= 12.0;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_square() -> Polygon {
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    }

    #[test]
    fn square_moments() {
        let m = moments(&unit_square());
        assert_relative_eq!(m.a, 1.0);
        assert_relative_eq!(m.x, 0.5);
        assert_relative_eq!(m.y, 0.5);
        assert_relative_eq!(m.xx, 1.0 / 3.0);
        assert_relative_eq!(m.xy, 0.25);
        assert_relative_eq!(m.yy, 1.0 / 3.0);
    }

    #[test]
    fn clipping_halves_the_square() {
        let clipped = clip_halfplane(&unit_square(), [1.0, 0.0], 0.5);
        assert_relative_eq!(area(&clipped), 0.5);
        let gone = clip_halfplane(&unit_square(), [1.0, 0.0], -0.5);
        assert!(gone.is_empty());
    }

    #[test]
    fn gon_area_approaches_circle() {
        let gon = regular_gon(2.0, 256);
        let exact = std::f64::consts::PI * 4.0;
        assert!((area(&gon) - exact).abs() / exact < 4e-4);
    }

    #[test]
    fn ccw_normalization() {
        let mut poly = unit_square();
        poly.reverse();
        assert!(signed_area(&poly) < 0.0);
        ensure_ccw(&mut poly);
        assert!(signed_area(&poly) > 0.0);
    }
}
