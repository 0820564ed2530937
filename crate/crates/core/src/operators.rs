//! The multilinear Hausdorff operator family and its matrix machinery.
//!
//! An operator is a kernel density (one of three conventions) plus one
//! matrix family per argument. Three evaluation paths exist, tried in
//! order:
//!
//! 1. an exact dilation path, when the matrix families act on the inputs by
//!    pure dilations (scalar-diagonal families on pure powers, rotations on
//!    any radial function) -- the output is again a symbolic test function;
//! 2. an exact piecewise path for a single scalar-diagonal family applied
//!    to a symbolic function with cutoffs, which produces a piecewise power
//!    sum;
//! 3. numeric quadrature of the reduced 1-D integral (or a low-discrepancy
//!    cube fallback for non-separable kernels).

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::quad::{self, QuadratureSpec};
use crate::radial::{power_integral, IntegralOutcome, PowerSum};
use crate::rng;
use crate::spaces::TestFunction;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n || n == 0 {
            return Err(Error::InvalidParameter(
                "matrix data length must be n*n".to_string(),
            ));
        }
        Ok(Self { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = alloc::vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n, data }
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut data = alloc::vec![0.0; n * n];
        for (i, e) in entries.iter().enumerate() {
            data[i * n + i] = *e;
        }
        Self { n, data }
    }

    /// 2-D rotation by `theta`.
    pub fn rotation2(theta: f64) -> Self {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        Self {
            n: 2,
            data: alloc::vec![c, -s, s, c],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// Entrywise 2-norm; satisfies `|Ax| <= ||A|| |x|`.
    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot = col;
            for row in col + 1..n {
                if math::fabs(a[row * n + col]) > math::fabs(a[pivot * n + col]) {
                    pivot = row;
                }
            }
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            det *= a[col * n + col];
            for row in col + 1..n {
                let factor = a[row * n + col] / a[col * n + col];
                for j in col..n {
                    a[row * n + j] -= factor * a[col * n + j];
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(n).data;
        let scale = self.frobenius_norm().max(1e-300);
        for col in 0..n {
            let mut pivot = col;
            for row in col + 1..n {
                if math::fabs(a[row * n + col]) > math::fabs(a[pivot * n + col]) {
                    pivot = row;
                }
            }
            if math::fabs(a[pivot * n + col]) < 1e-14 * scale {
                return Err(Error::SingularMatrix);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                    inv.swap(col * n + j, pivot * n + j);
                }
            }
            let d = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= d;
                inv[col * n + j] /= d;
            }
            for row in 0..n {
                if row != col {
                    let factor = a[row * n + col];
                    if factor != 0.0 {
                        for j in 0..n {
                            a[row * n + j] -= factor * a[col * n + j];
                            inv[row * n + j] -= factor * inv[col * n + j];
                        }
                    }
                }
            }
        }
        Ok(Matrix { n, data: inv })
    }
}

/// Entrywise 2-norm of a square matrix (`|Ax| <= ||A|| |x|`).
pub fn frobenius_norm(m: &Matrix) -> f64 {
    m.frobenius_norm()
}

/// Scalar maps from the grammar: `c |y|^e`, `c y_1^e`, or a table.
///
/// The coordinate-power map is defined by odd extension for `y_1 < 0`
/// (`c sign(y_1) |y_1|^e`) so `s(t) = t` makes sense on either half-line;
/// only its magnitude enters radial evaluations.
#[derive(Debug, Clone)]
pub enum ScalarMap {
    RadialPower { c: f64, e: f64 },
    CoordPower { c: f64, e: f64 },
    Table(Vec<(Vec<f64>, f64)>),
}

impl ScalarMap {
    pub fn eval(&self, y: &[f64]) -> f64 {
        match self {
            ScalarMap::RadialPower { c, e } => c * math::abs_pow(math::euclid_norm(y), *e),
            ScalarMap::CoordPower { c, e } => {
                let t = y[0];
                let sign = if t < 0.0 { -1.0 } else { 1.0 };
                c * sign * math::abs_pow(math::fabs(t), *e)
            }
            ScalarMap::Table(entries) => nearest_entry(entries, y).map(|(_, v)| *v).unwrap_or(0.0),
        }
    }

    /// Magnitude as a power of the reduced variable, `|s(t)| = S t^E`,
    /// if the map is compatible with that variable.
    fn magnitude_power(&self, var: ReducedVar, n: usize) -> Option<(f64, f64)> {
        match (self, var) {
            (ScalarMap::RadialPower { c, e }, ReducedVar::Radius) => Some((math::fabs(*c), *e)),
            (ScalarMap::RadialPower { c, e }, ReducedVar::Coord1) if n == 1 => {
                Some((math::fabs(*c), *e))
            }
            (ScalarMap::CoordPower { c, e }, ReducedVar::Coord1) => Some((math::fabs(*c), *e)),
            (ScalarMap::CoordPower { c, e }, ReducedVar::Radius) if n == 1 => {
                Some((math::fabs(*c), *e))
            }
            _ => None,
        }
    }
}

fn nearest_entry<'a, T>(entries: &'a [(Vec<f64>, T)], y: &[f64]) -> Option<&'a (Vec<f64>, T)> {
    entries.iter().min_by(|a, b| {
        let da: f64 = a.0.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum();
        let db: f64 = b.0.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum();
        da.partial_cmp(&db).unwrap()
    })
}

/// One matrix family `y -> A(y)`.
#[derive(Debug, Clone)]
pub enum MatrixFamily {
    /// `A(y) = s(y) I_n`
    DiagonalScalar {
        dim: usize,
        map: ScalarMap,
    },
    Rotation(RotationFamily),
    /// Sampled invertible matrices, looked up by nearest sample point.
    GeneralTable {
        entries: Vec<(Vec<f64>, Matrix)>,
    },
}

#[derive(Debug, Clone)]
pub enum RotationFamily {
    /// A fixed orthogonal matrix.
    Fixed(Matrix),
    /// 2-D rotation by the angle `angle(y)`.
    Angle2D { angle: ScalarMap },
}

impl MatrixFamily {
    pub fn dim(&self) -> usize {
        match self {
            MatrixFamily::DiagonalScalar { dim, .. } => *dim,
            MatrixFamily::Rotation(RotationFamily::Fixed(m)) => m.dim(),
            MatrixFamily::Rotation(RotationFamily::Angle2D { .. }) => 2,
            MatrixFamily::GeneralTable { entries } => {
                entries.first().map(|(_, m)| m.dim()).unwrap_or(0)
            }
        }
    }

    pub fn matrix_at(&self, y: &[f64]) -> Result<Matrix> {
        match self {
            MatrixFamily::DiagonalScalar { dim, map } => {
                let s = map.eval(y);
                if s == 0.0 {
                    return Err(Error::SingularMatrix);
                }
                Ok(Matrix::diagonal(&alloc::vec![s; *dim]))
            }
            MatrixFamily::Rotation(RotationFamily::Fixed(m)) => Ok(m.clone()),
            MatrixFamily::Rotation(RotationFamily::Angle2D { angle }) => {
                Ok(Matrix::rotation2(angle.eval(y)))
            }
            MatrixFamily::GeneralTable { entries } => nearest_entry(entries, y)
                .map(|(_, m)| m.clone())
                .ok_or(Error::SingularMatrix),
        }
    }

    /// `||A(y)|| * ||A^{-1}(y)||` when it is constant in `y`:
    /// `n` for scalar-diagonal and rotation families.
    pub fn conditioning_exact(&self) -> Option<f64> {
        match self {
            MatrixFamily::DiagonalScalar { dim, .. } => Some(*dim as f64),
            MatrixFamily::Rotation(_) => Some(self.dim() as f64),
            MatrixFamily::GeneralTable { .. } => None,
        }
    }

    fn is_rotation(&self) -> bool {
        matches!(self, MatrixFamily::Rotation(_))
    }
}

/// Which density the kernel function defines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelConvention {
    /// `Phi(y) / |y|^n` over `R^n`.
    HausdorffPhi,
    /// `phi(y)` over `R^n`.
    HybridPhi,
    /// `psi(y)` over `[0, 1]^n`.
    HardyCesaroPsi,
}

/// Support of one kernel term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportRegion {
    /// `lo < |y| <= hi`
    Annulus { lo: f64, hi: f64 },
    /// `[lo, hi]^n` with `lo >= 0`
    Cube { lo: f64, hi: f64 },
}

/// One grammar term `coeff * |y|^power` on a support region.
#[derive(Debug, Clone, Copy)]
pub struct KernelTerm {
    pub coeff: f64,
    pub power: f64,
    pub support: SupportRegion,
}

/// Kernel function with its density convention.
#[derive(Clone)]
pub enum KernelSpec {
    ClosedForm {
        terms: Vec<KernelTerm>,
        convention: KernelConvention,
    },
    Sampled {
        eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
        support: SupportRegion,
        convention: KernelConvention,
    },
}

impl core::fmt::Debug for KernelSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            KernelSpec::ClosedForm { terms, convention } => {
                write!(f, "KernelSpec::ClosedForm{{{terms:?}, {convention:?}}}")
            }
            KernelSpec::Sampled {
                support,
                convention,
                ..
            } => write!(f, "KernelSpec::Sampled{{{support:?}, {convention:?}}}"),
        }
    }
}

impl KernelSpec {
    /// `psi = const` on `[0,1]^n` (the Hardy-Cesaro normalization).
    pub fn hardy_cesaro_const(c: f64) -> Self {
        KernelSpec::ClosedForm {
            terms: alloc::vec![KernelTerm {
                coeff: c,
                power: 0.0,
                support: SupportRegion::Cube { lo: 0.0, hi: 1.0 },
            }],
            convention: KernelConvention::HardyCesaroPsi,
        }
    }

    pub fn convention(&self) -> KernelConvention {
        match self {
            KernelSpec::ClosedForm { convention, .. } => *convention,
            KernelSpec::Sampled { convention, .. } => *convention,
        }
    }

    /// Whether the kernel provably has a constant sign (needed by the
    /// sharpness hypotheses). Sampled kernels make no claim.
    pub fn constant_sign(&self) -> bool {
        match self {
            KernelSpec::ClosedForm { terms, .. } => {
                terms.iter().all(|t| t.coeff >= 0.0) || terms.iter().all(|t| t.coeff <= 0.0)
            }
            KernelSpec::Sampled { .. } => false,
        }
    }

    /// Density (kernel with the convention's normalization) at a point.
    pub fn density_at(&self, y: &[f64], n: usize) -> f64 {
        let hausdorff = self.convention() == KernelConvention::HausdorffPhi;
        let r = math::euclid_norm(y);
        let base = match self {
            KernelSpec::ClosedForm { terms, .. } => terms
                .iter()
                .filter(|t| support_contains(&t.support, y, r))
                .map(|t| t.coeff * math::abs_pow(r, t.power))
                .sum(),
            KernelSpec::Sampled { eval, support, .. } => {
                if support_contains(support, y, r) {
                    eval(y)
                } else {
                    0.0
                }
            }
        };
        if hausdorff {
            base * math::abs_pow(r, -(n as f64))
        } else {
            base
        }
    }
}

fn support_contains(s: &SupportRegion, y: &[f64], r: f64) -> bool {
    match s {
        SupportRegion::Annulus { lo, hi } => r > *lo && r <= *hi,
        SupportRegion::Cube { lo, hi } => y.iter().all(|v| *v >= *lo && *v <= *hi),
    }
}

/// The full operator: kernel plus one matrix family per argument.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    pub m: usize,
    pub n: usize,
    pub kernel: KernelSpec,
    pub families: Vec<MatrixFamily>,
}

impl OperatorSpec {
    pub fn new(
        m: usize,
        n: usize,
        kernel: KernelSpec,
        families: Vec<MatrixFamily>,
    ) -> Result<Self> {
        let spec = Self {
            m,
            n,
            kernel,
            families,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::InvalidParameter(
                "m and n must be positive".to_string(),
            ));
        }
        if self.families.len() != self.m {
            return Err(Error::InvalidParameter(
                "need exactly one matrix family per argument".to_string(),
            ));
        }
        for fam in &self.families {
            if fam.dim() != self.n {
                return Err(Error::InvalidParameter(
                    "family dimension must match the operator dimension".to_string(),
                ));
            }
        }
        if self.kernel.convention() == KernelConvention::HardyCesaroPsi {
            let cube_ok = match &self.kernel {
                KernelSpec::ClosedForm { terms, .. } => terms.iter().all(
                    |t| matches!(t.support, SupportRegion::Cube { lo, hi } if lo == 0.0 && hi == 1.0),
                ),
                KernelSpec::Sampled { support, .. } => {
                    matches!(support, SupportRegion::Cube { lo, hi } if *lo == 0.0 && *hi == 1.0)
                }
            };
            if !cube_ok {
                return Err(Error::InvalidParameter(
                    "Hardy-Cesaro kernels live on the unit cube".to_string(),
                ));
            }
            if !self
                .families
                .iter()
                .all(|f| matches!(f, MatrixFamily::DiagonalScalar { .. }))
            {
                return Err(Error::InvalidParameter(
                    "Hardy-Cesaro operators use scalar-diagonal families".to_string(),
                ));
            }
        }
        Ok(())
    }

    /// The classical 1-D Hardy setting: `m = 1`, `n = 1`, `psi = 1` on
    /// `[0,1]`, `s(t) = t`.
    pub fn hardy_1d() -> Self {
        OperatorSpec::new(
            1,
            1,
            KernelSpec::hardy_cesaro_const(1.0),
            alloc::vec![MatrixFamily::DiagonalScalar {
                dim: 1,
                map: ScalarMap::CoordPower { c: 1.0, e: 1.0 },
            }],
        )
        .unwrap()
    }
}

/// Conditioning bound `rho = ess sup ||A_i(y)|| ||A_i^{-1}(y)||` over the
/// sample; exact (`= n`) for scalar-diagonal and rotation families.
pub fn rho_bound(spec: &OperatorSpec, sample: &[Vec<f64>]) -> Result<f64> {
    let mut rho = 0.0f64;
    for fam in &spec.families {
        if let Some(exact) = fam.conditioning_exact() {
            rho = rho.max(exact);
            continue;
        }
        if sample.is_empty() {
            return Err(Error::InvalidParameter(
                "general families need a nonempty sample".to_string(),
            ));
        }
        for y in sample {
            let a = fam.matrix_at(y)?;
            let inv = a.inverse()?;
            rho = rho.max(a.frobenius_norm() * inv.frobenius_norm());
        }
    }
    Ok(rho)
}

/// Reduced integration variable for separable kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ReducedVar {
    /// `t = |y|` (annulus supports; the angular factor is folded in).
    Radius,
    /// `t = y_1` (cube supports; the other coordinates are folded in).
    Coord1,
}

/// One kernel term reduced to `coeff * t^power` on `[lo, hi]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ReducedTerm {
    pub var: ReducedVar,
    pub coeff: f64,
    pub power: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Reduce the kernel density to 1-D terms, when separable.
pub(crate) fn reduce_kernel_terms(kernel: &KernelSpec, n: usize) -> Option<Vec<ReducedTerm>> {
    let KernelSpec::ClosedForm { terms, convention } = kernel else {
        return None;
    };
    let hausdorff_shift = if *convention == KernelConvention::HausdorffPhi {
        -(n as f64)
    } else {
        0.0
    };
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        match t.support {
            SupportRegion::Annulus { lo, hi } => {
                out.push(ReducedTerm {
                    var: ReducedVar::Radius,
                    coeff: t.coeff * math::unit_sphere_area(n),
                    power: t.power + hausdorff_shift + n as f64 - 1.0,
                    lo,
                    hi,
                });
            }
            SupportRegion::Cube { lo, hi } => {
                if lo < 0.0 {
                    return None;
                }
                if n == 1 {
                    out.push(ReducedTerm {
                        var: ReducedVar::Coord1,
                        coeff: t.coeff,
                        power: t.power + hausdorff_shift,
                        lo,
                        hi,
                    });
                } else if t.power == 0.0 && hausdorff_shift == 0.0 {
                    // constant kernel on a cube: the y_2..y_n coordinates
                    // marginalize to (hi-lo)^{n-1}
                    out.push(ReducedTerm {
                        var: ReducedVar::Coord1,
                        coeff: t.coeff * math::pow(hi - lo, n as f64 - 1.0),
                        power: 0.0,
                        lo,
                        hi,
                    });
                } else {
                    // |y|^w is not separable over a cube in n >= 2
                    return None;
                }
            }
        }
    }
    Some(out)
}

/// `sum_terms coeff * scale * int t^{power + shift} dt` over each term's
/// support: the workhorse behind every closed-form constant.
pub(crate) fn reduced_power_integral(
    terms: &[ReducedTerm],
    shift: f64,
    scale: f64,
) -> IntegralOutcome {
    let mut total = 0.0;
    for t in terms {
        match power_integral(t.power + shift, t.lo, t.hi) {
            IntegralOutcome::Finite(v) => total += scale * t.coeff * v,
            IntegralOutcome::Divergent => return IntegralOutcome::Divergent,
        }
    }
    IntegralOutcome::Finite(total)
}

/// `H(f)(x) = (1/x) int_0^x f(t) dt`, the 1-D Hardy average.
/// Exact on symbolic inputs, quadrature otherwise.
pub fn apply_hardy_1d(f: &TestFunction, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidParameter("x must be positive".to_string()));
    }
    if let Some(pieces) = f.radial_pieces() {
        let mut total = 0.0;
        for p in &pieces {
            let lo = p.lo.max(0.0);
            let hi = p.hi.min(x);
            if lo >= hi {
                continue;
            }
            for term in &p.sum.terms {
                match power_integral(term.exponent, lo, hi) {
                    IntegralOutcome::Finite(v) => total += term.coeff * v,
                    IntegralOutcome::Divergent => return Err(Error::DivergentIntegral),
                }
            }
        }
        Ok(total / x)
    } else {
        let est = quad::integrate_radial(|t| f.eval(&[t]), 0.0, x, None, None, spec)?;
        Ok(est.value / x)
    }
}

/// The magnitude power form `|s_i(t)| = S t^E` of one scalar-diagonal
/// family over the reduced variable.
fn diag_magnitude(fam: &MatrixFamily, var: ReducedVar, n: usize) -> Option<(f64, f64)> {
    match fam {
        MatrixFamily::DiagonalScalar { map, .. } => map.magnitude_power(var, n),
        _ => None,
    }
}

/// Exact dilation path: rotations fix radial functions pointwise,
/// scalar-diagonal families act on pure powers as eigenfunctions. The
/// result is `K * prod_i f_i` with `K` a closed-form kernel integral.
fn apply_dilation_path(
    spec: &OperatorSpec,
    fs: &[TestFunction],
    reduced: &[ReducedTerm],
) -> Result<Option<TestFunction>> {
    if reduced.is_empty() {
        return Ok(Some(TestFunction::zero()));
    }
    let var = reduced[0].var;
    if reduced.iter().any(|t| t.var != var) {
        return Ok(None);
    }
    let mut shift = 0.0;
    let mut scale = 1.0;
    for (fam, f) in spec.families.iter().zip(fs) {
        if fam.is_rotation() {
            if !f.is_symbolic() {
                return Ok(None);
            }
            continue;
        }
        let Some((s_c, s_e)) = diag_magnitude(fam, var, spec.n) else {
            return Ok(None);
        };
        // scalar families need a pure power (single full-support term) to
        // factor exactly
        let Some(pieces) = f.radial_pieces() else {
            return Ok(None);
        };
        if pieces.len() != 1 {
            return Ok(None);
        }
        let p = &pieces[0];
        if p.lo != 0.0 || p.hi.is_finite() || p.sum.terms.len() != 1 {
            return Ok(None);
        }
        let a = p.sum.terms[0].exponent;
        scale *= math::pow(s_c, a);
        shift += s_e * a;
    }
    let k = match reduced_power_integral(reduced, shift, scale) {
        IntegralOutcome::Finite(v) => v,
        IntegralOutcome::Divergent => return Err(Error::DivergentIntegral),
    };
    let product = TestFunction::pointwise_product(fs).expect("symbolic factors");
    Ok(Some(TestFunction::scaled(k, product)))
}

/// Exact piecewise path for `m = 1` scalar-diagonal families acting on a
/// symbolic function with cutoffs. Integrating the kernel terms between
/// cutoff preimages produces, on each interval of `X = |x|`, a finite power
/// sum.
fn apply_m1_piecewise(
    spec: &OperatorSpec,
    f: &TestFunction,
    reduced: &[ReducedTerm],
) -> Result<Option<TestFunction>> {
    let Some(pieces) = f.radial_pieces() else {
        return Ok(None);
    };
    if reduced.is_empty() {
        return Ok(Some(TestFunction::zero()));
    }
    let var = reduced[0].var;
    if reduced.iter().any(|t| t.var != var) {
        return Ok(None);
    }
    let Some((s_c, s_e)) = diag_magnitude(&spec.families[0], var, spec.n) else {
        return Ok(None);
    };
    if s_e == 0.0 {
        return Ok(None);
    }

    // t-preimage of the radius rho under |s(t)| X = rho
    let tau = |rho: f64, x: f64| -> f64 {
        if rho == 0.0 {
            if s_e > 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else if rho.is_infinite() {
            if s_e > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            math::pow(rho / (s_c * x), 1.0 / s_e)
        }
    };

    // X values where a cutoff preimage crosses a kernel-term endpoint
    let mut cuts: Vec<f64> = Vec::new();
    for term in reduced {
        for piece in &pieces {
            for rho in [piece.lo, piece.hi] {
                if rho <= 0.0 || rho.is_infinite() {
                    continue;
                }
                for tb in [term.lo, term.hi] {
                    if tb <= 0.0 || tb.is_infinite() {
                        continue;
                    }
                    let x = rho / (s_c * math::pow(tb, s_e));
                    if x.is_finite() && x > 0.0 {
                        cuts.push(x);
                    }
                }
            }
        }
    }
    cuts.push(0.0);
    cuts.push(f64::INFINITY);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let mut out_terms: Vec<TestFunction> = Vec::new();
    for w in cuts.windows(2) {
        let (xl, xr) = (w[0], w[1]);
        let probe = if xr.is_finite() {
            if xl > 0.0 {
                math::sqrt(xl * xr)
            } else {
                0.5 * xr
            }
        } else {
            2.0 * xl.max(0.5)
        };
        let mut sum = PowerSum::zero();
        for term in reduced {
            for piece in &pieces {
                // t-range where |s(t)| * probe lands in (piece.lo, piece.hi]
                let (p_lo, p_hi) = if s_e > 0.0 {
                    (tau(piece.lo, probe), tau(piece.hi, probe))
                } else {
                    (tau(piece.hi, probe), tau(piece.lo, probe))
                };
                let lo_is_kernel = term.lo >= p_lo;
                let hi_is_kernel = term.hi <= p_hi;
                let t_lo = term.lo.max(p_lo);
                let t_hi = term.hi.min(p_hi);
                if !(t_lo < t_hi) {
                    continue;
                }
                let (rho_for_lo, rho_for_hi) = if s_e > 0.0 {
                    (piece.lo, piece.hi)
                } else {
                    (piece.hi, piece.lo)
                };
                for ft in &piece.sum.terms {
                    let a = ft.exponent;
                    let p_exp = term.power + s_e * a;
                    let p1 = p_exp + 1.0;
                    if math::fabs(p1) < 1e-12 {
                        // logarithmic antiderivative: not representable here
                        return Ok(None);
                    }
                    let coeff = term.coeff * ft.coeff * math::pow(s_c, a);
                    // antiderivative t^{p1}/p1 at both ends; kernel endpoints
                    // are constants in X, cutoff preimages contribute X powers
                    let mut push_end =
                        |is_kernel: bool, t_end: f64, rho_end: f64, sign: f64| -> Result<()> {
                            if is_kernel {
                                let val = if t_end == 0.0 {
                                    if p1 > 0.0 {
                                        0.0
                                    } else {
                                        return Err(Error::DivergentIntegral);
                                    }
                                } else if t_end.is_infinite() {
                                    if p1 < 0.0 {
                                        0.0
                                    } else {
                                        return Err(Error::DivergentIntegral);
                                    }
                                } else {
                                    math::pow(t_end, p1) / p1
                                };
                                sum.push(sign * coeff * val, a);
                            } else {
                                // t_end = (rho/(S X))^{1/E}
                                let base = math::pow(rho_end / s_c, p1 / s_e) / p1;
                                sum.push(sign * coeff * base, a - p1 / s_e);
                            }
                            Ok(())
                        };
                    push_end(hi_is_kernel, term.hi, rho_for_hi, 1.0)?;
                    push_end(lo_is_kernel, term.lo, rho_for_lo, -1.0)?;
                }
            }
        }
        sum.normalize();
        for t in &sum.terms {
            out_terms.push(TestFunction::scaled(
                t.coeff,
                TestFunction::PowerLaw {
                    a: t.exponent,
                    r0: xl,
                    r1: xr,
                },
            ));
        }
    }
    Ok(Some(TestFunction::sum(out_terms)))
}

/// Exact symbolic application of the operator, when available.
///
/// Returns `Ok(None)` when no symbolic path applies (callers then use
/// numeric quadrature), `Err(DivergentIntegral)` when the defining integral
/// diverges.
pub fn apply_symbolic(spec: &OperatorSpec, fs: &[&TestFunction]) -> Result<Option<TestFunction>> {
    let owned: Vec<TestFunction> = fs.iter().map(|f| (*f).clone()).collect();
    let Some(reduced) = reduce_kernel_terms(&spec.kernel, spec.n) else {
        return Ok(None);
    };
    if let Some(out) = apply_dilation_path(spec, &owned, &reduced)? {
        return Ok(Some(out));
    }
    if spec.m == 1 {
        return apply_m1_piecewise(spec, &owned[0], &reduced);
    }
    Ok(None)
}

/// Pointwise evaluation `H(f_1, ..., f_m)(x)` by the best available path.
pub fn apply_operator(
    spec: &OperatorSpec,
    fs: &[&TestFunction],
    x: &[f64],
    quad: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    if fs.len() != spec.m {
        return Err(Error::InvalidParameter(
            "need exactly m test functions".to_string(),
        ));
    }
    if x.len() != spec.n {
        return Err(Error::InvalidParameter(
            "point dimension must match the operator".to_string(),
        ));
    }
    if let Some(sym) = apply_symbolic(spec, fs)? {
        return Ok(sym.eval(x));
    }
    apply_numeric(spec, fs, x, quad)
}

fn apply_numeric(
    spec: &OperatorSpec,
    fs: &[&TestFunction],
    x: &[f64],
    quad: &QuadratureSpec,
) -> Result<f64> {
    if let Some(reduced) = reduce_kernel_terms(&spec.kernel, spec.n) {
        let mut total = 0.0;
        for term in &reduced {
            // the y-domain is truncated to 2^{-60} <= t <= 2^{60}
            let clip_lo = term.lo.max(math::exp2(-60.0));
            let clip_hi = term.hi.min(math::exp2(60.0));
            if clip_lo >= clip_hi {
                continue;
            }
            // split at preimages of the input cutoffs, where the integrand
            // jumps; this keeps the panels piecewise smooth
            let mut splits = alloc::vec![clip_lo, clip_hi];
            let x_norm = math::euclid_norm(x);
            if x_norm > 0.0 {
                for (fam, f) in spec.families.iter().zip(fs) {
                    let Some((s_c, s_e)) = diag_magnitude(fam, term.var, spec.n) else {
                        continue;
                    };
                    if s_e == 0.0 {
                        continue;
                    }
                    let Some(pieces) = f.radial_pieces() else {
                        continue;
                    };
                    for piece in &pieces {
                        for rho in [piece.lo, piece.hi] {
                            if rho <= 0.0 || rho.is_infinite() {
                                continue;
                            }
                            let t = math::pow(rho / (s_c * x_norm), 1.0 / s_e);
                            if t > clip_lo && t < clip_hi {
                                splits.push(t);
                            }
                        }
                    }
                }
            }
            splits.sort_by(|a, b| a.partial_cmp(b).unwrap());
            splits.dedup();
            for pair in splits.windows(2) {
                let est = quad::integrate_radial(
                    |t| {
                        term.coeff
                            * math::abs_pow(t, term.power)
                            * product_at_reduced(spec, fs, term.var, t, x)
                    },
                    pair[0],
                    pair[1],
                    None,
                    None,
                    quad,
                )?;
                total += est.value;
            }
        }
        return Ok(total);
    }
    cube_mc(spec, fs, x, quad)
}

/// `prod_i f_i(A_i(y) x)` where `y` is reconstructed from the reduced
/// variable. For radius terms in `n = 1` the two half-lines are averaged
/// (the sphere factor in the reduced coefficient counts both).
fn product_at_reduced(
    spec: &OperatorSpec,
    fs: &[&TestFunction],
    var: ReducedVar,
    t: f64,
    x: &[f64],
) -> f64 {
    let eval_at_y = |y: &[f64]| -> f64 {
        let mut prod = 1.0;
        for (fam, f) in spec.families.iter().zip(fs) {
            let value = match fam {
                MatrixFamily::DiagonalScalar { map, .. } => {
                    let s = map.eval(y);
                    let sx: Vec<f64> = x.iter().map(|v| s * v).collect();
                    f.eval(&sx)
                }
                _ => match fam.matrix_at(y) {
                    Ok(a) => f.eval(&a.mul_vec(x)),
                    Err(_) => return 0.0,
                },
            };
            prod *= value;
        }
        prod
    };
    match var {
        ReducedVar::Coord1 => {
            let mut y = alloc::vec![t; spec.n.max(1)];
            y[0] = t;
            eval_at_y(&y)
        }
        ReducedVar::Radius => {
            if spec.n == 1 {
                0.5 * (eval_at_y(&[t]) + eval_at_y(&[-t]))
            } else {
                // radial kernels with direction-independent families
                let mut y = alloc::vec![0.0; spec.n];
                y[0] = t;
                eval_at_y(&y)
            }
        }
    }
}

/// Low-discrepancy cube integration for non-separable kernels.
fn cube_mc(
    spec: &OperatorSpec,
    fs: &[&TestFunction],
    x: &[f64],
    quad: &QuadratureSpec,
) -> Result<f64> {
    let (lo, hi) = match &spec.kernel {
        KernelSpec::ClosedForm { terms, .. } => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for t in terms {
                match t.support {
                    SupportRegion::Cube { lo: a, hi: b } => {
                        lo = lo.min(a);
                        hi = hi.max(b);
                    }
                    SupportRegion::Annulus { hi: b, .. } => {
                        lo = lo.min(-b);
                        hi = hi.max(b);
                    }
                }
            }
            (lo, hi)
        }
        KernelSpec::Sampled { support, .. } => match support {
            SupportRegion::Cube { lo, hi } => (*lo, *hi),
            SupportRegion::Annulus { hi, .. } => (-*hi, *hi),
        },
    };
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidParameter(
            "non-separable kernels need bounded support".to_string(),
        ));
    }
    let n = spec.n;
    let samples = 1usize << 16;
    let mut u = alloc::vec![0.0f64; n.min(8)];
    let mut acc = 0.0;
    let vol = math::pow(hi - lo, n as f64);
    for i in 0..samples {
        rng::halton_point(i.wrapping_add(quad.seed as usize), n.min(8), &mut u);
        let y: Vec<f64> = (0..n).map(|d| lo + (hi - lo) * u[d % u.len()]).collect();
        let dens = spec.kernel.density_at(&y, n);
        if dens != 0.0 {
            let mut prod = dens;
            for (fam, f) in spec.families.iter().zip(fs) {
                let a = fam.matrix_at(&y)?;
                prod *= f.eval(&a.mul_vec(x));
            }
            acc += prod;
        }
    }
    Ok(vol * acc / samples as f64)
}
