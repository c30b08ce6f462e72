//! Triangle rules, Wigner 6j symbols and the two primitive tensors of the
//! permutational model: the recoupling tensor and the twist phase.
//!
//! All spins are handled as [`TwiceSpin`] so that every factorial argument in
//! the Racah sum is an honest integer.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numerics::{factorial, PrimePowers, Rational, SurdSum, TwiceSpin};

/// Three spins meeting at a trivalent vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinTriple {
    pub a: TwiceSpin,
    pub b: TwiceSpin,
    pub c: TwiceSpin,
}

impl SpinTriple {
    pub fn new(a: impl Into<TwiceSpin>, b: impl Into<TwiceSpin>, c: impl Into<TwiceSpin>) -> Self {
        SpinTriple { a: a.into(), b: b.into(), c: c.into() }
    }

    fn inadmissible(&self) -> Error {
        Error::Inadmissible(self.a.to_string(), self.b.to_string(), self.c.to_string())
    }
}

/// The six arguments of `{a b f; c e d}`. Columns `(a,c)`, `(b,e)`, `(f,d)`
/// are opposite edges of the tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SixSpins {
    pub a: TwiceSpin,
    pub b: TwiceSpin,
    pub f: TwiceSpin,
    pub c: TwiceSpin,
    pub e: TwiceSpin,
    pub d: TwiceSpin,
}

impl SixSpins {
    /// Builds the symbol from its upper row `[a, b, f]` and lower row `[c, e, d]`.
    pub fn new(upper: [u32; 3], lower: [u32; 3]) -> Self {
        SixSpins {
            a: TwiceSpin(upper[0]),
            b: TwiceSpin(upper[1]),
            f: TwiceSpin(upper[2]),
            c: TwiceSpin(lower[0]),
            e: TwiceSpin(lower[1]),
            d: TwiceSpin(lower[2]),
        }
    }

    pub fn upper(&self) -> [u32; 3] {
        [self.a.0, self.b.0, self.f.0]
    }

    pub fn lower(&self) -> [u32; 3] {
        [self.c.0, self.e.0, self.d.0]
    }

    /// The four triads whose Δ factors enter the Racah formula.
    pub fn triads(&self) -> [SpinTriple; 4] {
        [
            SpinTriple { a: self.a, b: self.b, c: self.f },
            SpinTriple { a: self.a, b: self.e, c: self.d },
            SpinTriple { a: self.c, b: self.b, c: self.d },
            SpinTriple { a: self.c, b: self.e, c: self.f },
        ]
    }

    pub fn is_admissible(&self) -> bool {
        self.triads().iter().all(|t| triangle_admissible(*t))
    }

    /// All 24 images under the tetrahedral symmetry group: column
    /// permutations combined with upper/lower exchanges in pairs of columns.
    pub fn tetrahedral_images(&self) -> Vec<SixSpins> {
        let cols = [(self.a, self.c), (self.b, self.e), (self.f, self.d)];
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let flips = [[false, false, false], [true, true, false], [true, false, true], [false, true, true]];
        let mut out = Vec::with_capacity(24);
        for p in perms {
            for fl in flips {
                let col = |k: usize| {
                    let (u, l) = cols[p[k]];
                    if fl[k] {
                        (l, u)
                    } else {
                        (u, l)
                    }
                };
                let (a, c) = col(0);
                let (b, e) = col(1);
                let (f, d) = col(2);
                out.push(SixSpins { a, b, f, c, e, d });
            }
        }
        out
    }
}

/// Parity and triangle constraints of angular momentum addition.
pub fn triangle_admissible(t: SpinTriple) -> bool {
    let (a, b, c) = (t.a.0, t.b.0, t.c.0);
    (a + b + c) % 2 == 0 && a.abs_diff(b) <= c && c <= a + b
}

/// Admissible values of `c` for given `a`, `b`, ascending.
pub fn coupled_range(a: TwiceSpin, b: TwiceSpin) -> impl Iterator<Item = TwiceSpin> {
    (a.0.abs_diff(b.0)..=a.0 + b.0).step_by(2).map(TwiceSpin)
}

fn delta_powers(t: SpinTriple) -> PrimePowers {
    let (a, b, c) = (t.a.0 as i64, t.b.0 as i64, t.c.0 as i64);
    let mut p = PrimePowers::default();
    p.add_assign_scaled(&PrimePowers::factorial(((a + b - c) / 2) as u64), 1);
    p.add_assign_scaled(&PrimePowers::factorial(((a - b + c) / 2) as u64), 1);
    p.add_assign_scaled(&PrimePowers::factorial(((-a + b + c) / 2) as u64), 1);
    p.add_assign_scaled(&PrimePowers::factorial(((a + b + c) / 2 + 1) as u64), -1);
    p
}

/// `√Δ(a,b,c)` with `Δ = (a+b−c)!(a−b+c)!(−a+b+c)!/(a+b+c+1)!`.
pub fn delta_coeff(t: SpinTriple) -> Result<SurdSum> {
    if !triangle_admissible(t) {
        return Err(t.inadmissible());
    }
    Ok(delta_powers(t).sqrt())
}

/// Wigner 6j symbol `{a b f; c e d}` by the Racah sum. Zero when any triad
/// is inadmissible.
pub fn sixj(s: SixSpins) -> SurdSum {
    let triads = s.triads();
    if !triads.iter().all(|t| triangle_admissible(*t)) {
        return SurdSum::zero();
    }
    let mut prefactor = PrimePowers::default();
    for t in &triads {
        prefactor.add_assign_scaled(&delta_powers(*t), 1);
    }

    // Work in units of whole spins; every sum below is even for admissible input.
    let half = |x: u32| (x / 2) as i64;
    let (a, b, f, c, e, d) = (s.a.0, s.b.0, s.f.0, s.c.0, s.e.0, s.d.0);
    let lower = [
        half(a + b + f),
        half(a + e + d),
        half(c + b + d),
        half(c + e + f),
    ];
    let upper = [half(a + b + c + e), half(b + f + e + d), half(f + a + d + c)];
    let t_min = *lower.iter().max().unwrap();
    let t_max = *upper.iter().min().unwrap();

    let mut sum = Rational::zero();
    for t in t_min..=t_max {
        let mut den = BigInt::from(1);
        for l in lower {
            den *= BigInt::from(factorial((t - l) as usize));
        }
        for u in upper {
            den *= BigInt::from(factorial((u - t) as usize));
        }
        let mut num = BigInt::from(factorial((t + 1) as usize));
        if t % 2 == 1 {
            num = -num;
        }
        sum += Rational::new(num, den);
    }
    prefactor.sqrt().scale(&sum)
}

/// Recoupling tensor `[a b f; c e d] = (−1)^{a+b+c+e} √((2d+1)(2f+1)) {a b f; c e d}`.
///
/// For legs `a`, `b`, `c` coupled to total `e` this is the overlap between
/// `((a b)f, c; e)` and `(a, (b c)d; e)`.
pub fn recoupling_tensor(s: SixSpins) -> SurdSum {
    let symbol = sixj(s);
    if symbol.is_zero() {
        return symbol;
    }
    let exponent = (s.a.0 + s.b.0 + s.c.0 + s.e.0) / 2;
    let dims = SurdSum::sqrt_u64(s.d.dim() as u64 * s.f.dim() as u64);
    (symbol * dims).signed(exponent % 2 == 1)
}

/// Exchange phase `(−1)^{j1+j2−j}` for swapping the two subsystems coupled
/// to `j`.
pub fn twist_phase(j1: TwiceSpin, j2: TwiceSpin, j: TwiceSpin) -> Result<SurdSum> {
    let t = SpinTriple { a: j1, b: j2, c: j };
    if !triangle_admissible(t) {
        return Err(t.inadmissible());
    }
    Ok(SurdSum::from_integer(twist_sign(j1, j2, j)))
}

#[inline]
pub(crate) fn twist_sign(j1: TwiceSpin, j2: TwiceSpin, j: TwiceSpin) -> i64 {
    if ((j1.0 + j2.0 - j.0) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// LHS − RHS of the Biedenharn-Elliott identity
///
/// `Σ_x (−1)^φ (2x+1) {a b x; c d g}{c d x; e f h}{e f x; b a j} = {g h j; e a d}{g h j; f b c}`
///
/// with `φ = a+b+c+d+e+f+g+h+j+x`. Identically zero.
#[allow(clippy::too_many_arguments)]
pub fn biedenharn_elliott_residual(
    a: TwiceSpin,
    b: TwiceSpin,
    c: TwiceSpin,
    d: TwiceSpin,
    e: TwiceSpin,
    f: TwiceSpin,
    g: TwiceSpin,
    h: TwiceSpin,
    j: TwiceSpin,
) -> SurdSum {
    let six = |u: [TwiceSpin; 3], l: [TwiceSpin; 3]| {
        sixj(SixSpins { a: u[0], b: u[1], f: u[2], c: l[0], e: l[1], d: l[2] })
    };
    let fixed = a.0 + b.0 + c.0 + d.0 + e.0 + f.0 + g.0 + h.0 + j.0;
    let lo = a.0.abs_diff(b.0).max(c.0.abs_diff(d.0)).max(e.0.abs_diff(f.0));
    let hi = (a.0 + b.0).min(c.0 + d.0).min(e.0 + f.0);
    let mut lhs = SurdSum::zero();
    if lo <= hi && (a.0 + b.0 + lo).is_multiple_of(2) {
        for x in (lo..=hi).step_by(2).map(TwiceSpin) {
            let term = six([a, b, x], [c, d, g]);
            if term.is_zero() {
                continue;
            }
            let term = term * six([c, d, x], [e, f, h]);
            if term.is_zero() {
                continue;
            }
            let term = term * six([e, f, x], [b, a, j]);
            if term.is_zero() {
                continue;
            }
            // Twice φ is even whenever the product is non-zero.
            let negative = ((fixed + x.0) / 2) % 2 == 1;
            lhs += term.scale(&Rational::from_integer(BigInt::from(x.dim()))).signed(negative);
        }
    }
    let rhs = six([g, h, j], [e, a, d]) * six([g, h, j], [f, b, c]);
    lhs - rhs
}
