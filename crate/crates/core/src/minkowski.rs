//! Four-vector helpers for signature (+,−,−,−).

use num_complex::Complex64;

pub type C64 = Complex64;
/// Real four-vector: wavevector `(k0, k1, k2, k3)` or a spacetime translation.
pub type Vec4 = [f64; 4];
/// Complex four-vector of contravariant components.
pub type CVec4 = [C64; 4];

pub const ZERO4: CVec4 = [C64::new(0.0, 0.0); 4];

/// Bilinear Minkowski contraction `a⁰b⁰ − a·b` (no conjugation).
#[inline]
pub fn dot(a: &CVec4, b: &CVec4) -> C64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

#[inline]
pub fn dot_real(k: &Vec4, v: &CVec4) -> C64 {
    v[0] * k[0] - v[1] * k[1] - v[2] * k[2] - v[3] * k[3]
}

#[inline]
pub fn dot_rr(a: &Vec4, b: &Vec4) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// Sesquilinear contraction `conj(a)^μ b_μ`.
#[inline]
pub fn dot_conj(a: &CVec4, b: &CVec4) -> C64 {
    a[0].conj() * b[0] - a[1].conj() * b[1] - a[2].conj() * b[2] - a[3].conj() * b[3]
}

#[inline]
pub fn to_complex(k: &Vec4) -> CVec4 {
    [
        C64::from(k[0]),
        C64::from(k[1]),
        C64::from(k[2]),
        C64::from(k[3]),
    ]
}

#[inline]
pub fn neg(k: &Vec4) -> Vec4 {
    [-k[0], -k[1], -k[2], -k[3]]
}

/// Euclidean norm of a real four-vector.
#[inline]
pub fn euclid(k: &Vec4) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + k[3] * k[3]).sqrt()
}

#[inline]
pub fn euclid_c(v: &CVec4) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[inline]
pub fn spatial_norm(k: &[f64; 3]) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
}

#[inline]
pub fn scale(v: &CVec4, s: C64) -> CVec4 {
    [v[0] * s, v[1] * s, v[2] * s, v[3] * s]
}

#[inline]
pub fn add(a: &CVec4, b: &CVec4) -> CVec4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

#[inline]
pub fn sub(a: &CVec4, b: &CVec4) -> CVec4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

#[inline]
pub fn conj(v: &CVec4) -> CVec4 {
    [v[0].conj(), v[1].conj(), v[2].conj(), v[3].conj()]
}

/// The on-shell wavevector `(|k|, k)` for a spatial `k`.
#[inline]
pub fn on_shell(k: &[f64; 3]) -> Vec4 {
    [spatial_norm(k), k[0], k[1], k[2]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn light_like_vectors_have_zero_square() {
        let k = on_shell(&[0.3, -1.2, 0.7]);
        assert!(dot_rr(&k, &k).abs() < 1e-14);
    }

    #[test]
    fn contraction_is_symmetric() {
        let a = [
            C64::new(1.0, 2.0),
            C64::new(0.5, 0.0),
            C64::new(-1.0, 1.0),
            C64::new(0.0, 3.0),
        ];
        let b = [
            C64::new(-2.0, 1.0),
            C64::new(1.5, 0.5),
            C64::new(0.0, -1.0),
            C64::new(2.0, 0.0),
        ];
        assert_eq!(dot(&a, &b), dot(&b, &a));
        assert!((dot_conj(&a, &a).im).abs() < 1e-15);
    }
}
