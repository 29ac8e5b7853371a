//! Scalar quaternion arithmetic: Hamilton product, conjugation, norm,
//! inversion, similarity classes, and the non-commuting quadratic solver.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_complex::Complex64 as Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// One element of the quaternion algebra, `q = a + ib + jc + kd` with the
/// units satisfying `i^2 = j^2 = k^2 = ijk = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

impl Quaternion {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// Embeds a real number.
    pub const fn real(x: f64) -> Self {
        Self::new(x, 0.0, 0.0, 0.0)
    }

    /// Embeds a complex number as `re + i * im`. The embedding is a ring
    /// homomorphism onto the `{1, i}` plane.
    pub fn from_complex(z: Complex) -> Self {
        Self::new(z.re, z.im, 0.0, 0.0)
    }

    /// Real part `Re[q]`.
    pub fn re(&self) -> f64 {
        self.a
    }

    /// Imaginary part `Im[q] = q - Re[q]`, kept as a quaternion.
    pub fn im(&self) -> Quaternion {
        Self::new(0.0, self.b, self.c, self.d)
    }

    /// Norm of the imaginary part.
    pub fn im_norm(&self) -> f64 {
        vec3_norm([self.b, self.c, self.d])
    }

    /// Quaternionic conjugate `Re[q] - Im[q]`.
    ///
    /// `q` and `conj(q)` are always similar, but the conjugating element
    /// depends on `q`: a specific `s` works exactly when `Im[q] = 0` or
    /// `Re[qs] = Re[s] = 0`, and no single `s` serves every quaternion at
    /// once. Conjugation is therefore not an inner automorphism.
    pub fn conj(&self) -> Quaternion {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    /// `|q|^2 = q * conj(q) = a^2 + b^2 + c^2 + d^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(&self) -> f64 {
        // hypot-style evaluation would be slower and the entries never get
        // anywhere near the overflow range at desk scale.
        self.norm_sqr().sqrt()
    }

    /// `q^{-1} = conj(q) / |q|^2`.
    pub fn inverse(&self) -> Result<Quaternion> {
        let n2 = self.norm_sqr();
        if n2 <= tol::ABS_ZERO {
            return Err(Error::ZeroDivision);
        }
        Ok(self.conj() / n2)
    }

    /// True when the two quaternions lie in the same similarity class,
    /// i.e. equal real parts and equal imaginary-part norms within `tol`.
    pub fn similar(&self, other: &Quaternion, tol: f64) -> bool {
        (self.re() - other.re()).abs() <= tol && (self.im_norm() - other.im_norm()).abs() <= tol
    }

    /// Canonical complex element of the similarity class of `q`:
    /// `Re[q] + i |Im[q]|`, fixing the nonnegative-imaginary branch.
    pub fn complex_representative(&self) -> Complex {
        Complex::new(self.re(), self.im_norm())
    }

    /// True when the `j` and `k` components vanish, i.e. the value lies in
    /// the embedded complex plane.
    pub fn is_complex(&self, tol: f64) -> bool {
        self.c.abs() <= tol && self.d.abs() <= tol
    }

    /// The `(z1, z2)` complex pair with `q = z1 + j z2`; `z1 = a + ib`,
    /// `z2 = c - id` (so that `j z2 = jc + kd`).
    pub fn complex_parts(&self) -> (Complex, Complex) {
        (Complex::new(self.a, self.b), Complex::new(self.c, -self.d))
    }

    /// Rebuilds a quaternion from its `q = z1 + j z2` split.
    pub fn from_complex_parts(z1: Complex, z2: Complex) -> Self {
        Self::new(z1.re, z1.im, z2.re, -z2.im)
    }
}

impl From<f64> for Quaternion {
    fn from(x: f64) -> Self {
        Quaternion::real(x)
    }
}

impl From<Complex> for Quaternion {
    fn from(z: Complex) -> Self {
        Quaternion::from_complex(z)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}

/// Hamilton product; non-commutative.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a * o.a - self.b * o.b - self.c * o.c - self.d * o.d,
            self.a * o.b + self.b * o.a + self.c * o.d - self.d * o.c,
            self.a * o.c - self.b * o.d + self.c * o.a + self.d * o.b,
            self.a * o.d + self.b * o.c - self.c * o.b + self.d * o.a,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.a / s, self.b / s, self.c / s, self.d / s)
    }
}

// ---------------------------------------------------------------------------
// Text form `a+bi+cj+dk`
// ---------------------------------------------------------------------------

/// Prints all four components with 17 significant digits, e.g.
/// `1.5e0+0e0i-2e0j+1e0k` becomes
/// `1.5000000000000000e0+0.0000000000000000e0i-2.0000000000000000e0j+1.0000000000000000e0k`.
impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}i{}{}j{}{}k",
            fmt_17(self.a),
            sign_prefix(self.b),
            fmt_17(self.b.abs()),
            sign_prefix(self.c),
            fmt_17(self.c.abs()),
            sign_prefix(self.d),
            fmt_17(self.d.abs()),
        )
    }
}

/// 17 significant digits, scientific notation.
pub fn fmt_17(x: f64) -> String {
    format!("{:.16e}", x)
}

fn sign_prefix(x: f64) -> &'static str {
    if x.is_sign_negative() {
        "-"
    } else {
        "+"
    }
}

/// Accepts sums of terms `x`, `xi`, `xj`, `xk` (coefficient optional for the
/// unit terms), in any order, with omitted zero terms: `1+i`, `-2.5k`,
/// `3.0e-1j+1i`, `0`.
impl FromStr for Quaternion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Quaternion> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty quaternion literal".into()));
        }
        let bytes = compact.as_bytes();
        let mut q = ZERO;
        let mut pos = 0;
        while pos < bytes.len() {
            let start = pos;
            // Sign.
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                pos += 1;
            }
            // Mantissa digits and decimal point.
            let digits_start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'.') {
                pos += 1;
            }
            // Exponent: `e`/`E` must be followed by an (optionally signed)
            // integer; a trailing `e` would otherwise swallow nothing.
            if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                let mut probe = pos + 1;
                if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                    probe += 1;
                }
                let exp_digits = probe;
                while probe < bytes.len() && bytes[probe].is_ascii_digit() {
                    probe += 1;
                }
                if probe > exp_digits {
                    pos = probe;
                }
            }
            // Unit suffix.
            let unit = if pos < bytes.len() && matches!(bytes[pos], b'i' | b'j' | b'k') {
                let u = bytes[pos] as char;
                pos += 1;
                Some(u)
            } else {
                None
            };
            let num_str = &compact[start..pos - unit.map_or(0, |_| 1)];
            let coeff = if digits_start == pos - unit.map_or(0, |_| 1) {
                // Bare `i`, `+j`, `-k` style term.
                match num_str {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    _ => {
                        return Err(Error::Parse(format!(
                            "bad quaternion term in {s:?} at byte {start}"
                        )))
                    }
                }
            } else {
                num_str.parse::<f64>().map_err(|_| {
                    Error::Parse(format!("bad number {num_str:?} in quaternion {s:?}"))
                })?
            };
            match unit {
                None => q.a += coeff,
                Some('i') => q.b += coeff,
                Some('j') => q.c += coeff,
                Some('k') => q.d += coeff,
                _ => unreachable!(),
            }
            if pos == start {
                return Err(Error::Parse(format!(
                    "could not parse quaternion {s:?} at byte {start}"
                )));
            }
        }
        Ok(q)
    }
}

// ---------------------------------------------------------------------------
// The non-commuting quadratic
// ---------------------------------------------------------------------------

/// Solves `alpha^2 b + alpha e - c = 0` for `alpha`.
///
/// Requires `b != 0` (the caller permutes the enclosing problem otherwise).
/// When several roots exist, the returned one has the smallest nonnegative
/// imaginary part of its complex representative, ties broken by larger real
/// part, and a full sphere of roots collapses to its canonical complex
/// member.
pub fn solve_quadratic(b: Quaternion, e: Quaternion, c: Quaternion) -> Result<Quaternion> {
    if b.norm_sqr() <= tol::ABS_ZERO {
        return Err(Error::DegenerateQuadratic);
    }
    let b_inv = b.inverse()?;
    let p = e * b_inv;
    let r = c * b_inv;

    // alpha^2 + alpha p = r. Conjugating moves the coefficient to the left:
    // with y = conj(alpha), y^2 + conj(p) y - conj(r) = 0.
    let bcoef = p.conj();
    let ccoef = -r.conj();

    // Complete the square: z = y + Re(bcoef)/2 gives z^2 + B z + cp = 0
    // with B purely imaginary.
    let h = bcoef.re() / 2.0;
    let big_b = bcoef.im();
    let cp = ccoef + Quaternion::real(h * h) - bcoef * h;

    let mut candidates = reduced_quadratic_roots(big_b, cp);
    // Map back z -> y -> alpha.
    for z in &mut candidates {
        *z = (*z - Quaternion::real(h)).conj();
    }

    let scale = b.norm().max(e.norm()).max(c.norm());
    let residual = |alpha: &Quaternion| (*alpha * *alpha * b + *alpha * e - c).norm();
    let bound = |alpha: &Quaternion| {
        tol::QUADRATIC_RESIDUAL_REL * (1.0 + alpha.norm_sqr()) * scale
    };

    let mut best: Option<(Quaternion, bool)> = None;
    for alpha in candidates {
        if !alpha.norm_sqr().is_finite() {
            continue;
        }
        let ok = residual(&alpha) <= bound(&alpha);
        let better = match &best {
            None => true,
            Some((cur, cur_ok)) => {
                if ok != *cur_ok {
                    ok
                } else {
                    prefer_root(&alpha, cur)
                }
            }
        };
        if better {
            best = Some((alpha, ok));
        }
    }
    best.map(|(alpha, _)| alpha).ok_or(Error::DegenerateQuadratic)
}

/// Deterministic root preference: smaller canonical imaginary part, then
/// larger real part, then closer to the canonical complex embedding.
fn prefer_root(new: &Quaternion, cur: &Quaternion) -> bool {
    let rn = new.complex_representative();
    let rc = cur.complex_representative();
    let tie = 1e-12 * (1.0 + rn.norm() + rc.norm());
    if (rn.im - rc.im).abs() > tie {
        return rn.im < rc.im;
    }
    if (rn.re - rc.re).abs() > tie {
        return rn.re > rc.re;
    }
    let dn = (*new - Quaternion::from_complex(rn)).norm();
    let dc = (*cur - Quaternion::from_complex(rc)).norm();
    dn < dc
}

/// All roots of `z^2 + B z + cp = 0` with `B` purely imaginary. A root
/// sphere (which occurs only when both coefficients are real and the
/// discriminant is negative) is represented by its two complex members.
fn reduced_quadratic_roots(big_b: Quaternion, cp: Quaternion) -> Vec<Quaternion> {
    let bv = [big_b.b, big_b.c, big_b.d];
    let n = vec3_dot(bv, bv);
    if n == 0.0 {
        return square_roots(-cp);
    }

    let c0 = cp.re();
    let cv = [cp.b, cp.c, cp.d];
    let c_norm2 = vec3_dot(cv, cv);
    let b_norm = n.sqrt();
    let b_hat = [bv[0] / b_norm, bv[1] / b_norm, bv[2] / b_norm];
    let c_par = vec3_dot(cv, b_hat);
    let c_perp_v = [
        cv[0] - c_par * b_hat[0],
        cv[1] - c_par * b_hat[1],
        cv[2] - c_par * b_hat[2],
    ];
    let c_perp = vec3_norm(c_perp_v);

    // Writing z = t + A with A = beta*Bhat + gamma*Chat + delta*Nhat and
    // eliminating A from the imaginary equation leaves one real condition
    // on u = t^2, a cubic:
    //   16 u^3 + 8 (N + 2 c0) u^2 + (N^2 + 4 N c0 - 4 |C|^2) u - N cpar^2 = 0.
    let a2 = 8.0 * (n + 2.0 * c0);
    let a1 = n * n + 4.0 * n * c0 - 4.0 * c_norm2;
    let a0 = -n * c_par * c_par;
    let u_roots = real_cubic_roots(16.0, a2, a1, a0);

    let mut out = Vec::new();
    for &u in &u_roots {
        if u > 0.0 {
            for sign in [1.0, -1.0] {
                let t = sign * u.sqrt();
                let dd = 4.0 * u + n;
                let beta = -(t * b_norm + c_par) / (2.0 * t);
                let gamma = -2.0 * t * c_perp / dd;
                let delta = b_norm * c_perp / dd;
                let mut av = [
                    beta * b_hat[0],
                    beta * b_hat[1],
                    beta * b_hat[2],
                ];
                if c_perp > 0.0 {
                    let c_hat = [
                        c_perp_v[0] / c_perp,
                        c_perp_v[1] / c_perp,
                        c_perp_v[2] / c_perp,
                    ];
                    let n_hat = vec3_cross(b_hat, c_hat);
                    for ax in 0..3 {
                        av[ax] += gamma * c_hat[ax] + delta * n_hat[ax];
                    }
                }
                out.push(Quaternion::new(t, av[0], av[1], av[2]));
            }
        }
    }

    // Pure-imaginary roots (t = 0). They exist only when C is orthogonal
    // to B; solving the remaining real quadratic in the B-component. The
    // gate is generous: spurious candidates fail the residual filter.
    if c_par.abs() <= 1e-6 * (c_norm2.sqrt() + b_norm).max(1e-300) {
        let a0v = vec3_cross(b_hat, [cv[0] / b_norm, cv[1] / b_norm, cv[2] / b_norm]);
        let a0n2 = vec3_dot(a0v, a0v);
        let disc = n - 4.0 * (a0n2 - c0);
        if disc >= 0.0 {
            let sq = disc.sqrt();
            for mu in [(-b_norm + sq) / 2.0, (-b_norm - sq) / 2.0] {
                out.push(Quaternion::new(
                    0.0,
                    a0v[0] + mu * b_hat[0],
                    a0v[1] + mu * b_hat[1],
                    a0v[2] + mu * b_hat[2],
                ));
            }
        }
    }
    out
}

/// Square roots of a quaternion: `z^2 = g`. Returns two isolated roots, or
/// the two complex members of the root sphere when `g` is real negative.
fn square_roots(g: Quaternion) -> Vec<Quaternion> {
    let g0 = g.re();
    let gv = [g.b, g.c, g.d];
    let m = vec3_norm(gv);
    if m > 0.0 {
        let w = Complex::new(g0, m).sqrt();
        let g_hat = [gv[0] / m, gv[1] / m, gv[2] / m];
        let root = Quaternion::new(
            w.re,
            w.im * g_hat[0],
            w.im * g_hat[1],
            w.im * g_hat[2],
        );
        vec![root, -root]
    } else if g0 >= 0.0 {
        let r = g0.sqrt();
        vec![Quaternion::real(r), Quaternion::real(-r)]
    } else {
        // Root sphere u * sqrt(-g0) over all unit imaginaries u; keep the
        // canonical plane members.
        let r = (-g0).sqrt();
        vec![Quaternion::new(0.0, r, 0.0, 0.0), Quaternion::new(0.0, -r, 0.0, 0.0)]
    }
}

/// Real roots of `c3 x^3 + c2 x^2 + c1 x + c0`, polished by Newton steps.
fn real_cubic_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    debug_assert!(c3 != 0.0);
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    // Depressed form t^3 + p t + q with x = t - a/3.
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let mut roots = Vec::with_capacity(3);
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    if disc > 0.0 {
        let sq = disc.sqrt();
        let u = cbrt(-q / 2.0 + sq);
        let v = cbrt(-q / 2.0 - sq);
        roots.push(u + v - shift);
    } else if p == 0.0 && q == 0.0 {
        roots.push(-shift);
    } else {
        // Three real roots; trigonometric form.
        let rho = (-p / 3.0).max(0.0).sqrt();
        let arg = (3.0 * q / (2.0 * p * rho)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        for k in 0..3 {
            let t = 2.0 * rho * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            roots.push(t - shift);
        }
    }
    // Newton polish on the original cubic.
    for x in &mut roots {
        for _ in 0..3 {
            let f = ((c3 * *x + c2) * *x + c1) * *x + c0;
            let df = (3.0 * c3 * *x + 2.0 * c2) * *x + c1;
            if df != 0.0 {
                let step = f / df;
                if step.is_finite() {
                    *x -= step;
                }
            }
        }
    }
    roots
}

fn cbrt(x: f64) -> f64 {
    x.signum() * x.abs().powf(1.0 / 3.0)
}

pub(crate) fn vec3_dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn vec3_norm(a: [f64; 3]) -> f64 {
    vec3_dot(a, a).sqrt()
}

pub(crate) fn vec3_cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
