//! The parameter space of the family: classification of points, strata,
//! distinguished points, grid sweeps, and connections on lower-dimensional
//! Cahen-Wallach spaces built the same way.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cahen_wallach::{
    b_form, killing_field, decomposability, killing_basis, killing_brackets_match_algebra, killing_verify, lie_algebra, BForm,
    CWParams, Label, Sample,
};
use crate::clifford_core::{
    build_clifford_r5, charge_intertwining_sign, euclidean_relations_hold, lorentz_relations_hold, V9, W11, iota, octonion_left_mults, product_of, to_s};
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, SMatrix};
use crate::scalar::{GRat, Rational, Scalar};
use crate::series::{Coord, FloatPoint, JetPoint};
use crate::spinor_connection::{covariant_derivative, ConnectionData, ConnectionPair};
use crate::superalgebra::{dirac_current_deviation, lie_derivative_pair, susy_check_with, Route, Superalgebra, GLOBAL_SIGN};

/// A point in the moduli ordering (α₋, α₊′, α₊, α₋′).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuliPoint {
    pub alpha_minus: Rational,
    pub alpha_plus_prime: Rational,
    pub alpha_plus: Rational,
    pub alpha_minus_prime: Rational,
}

impl ModuliPoint {
    pub fn new(am: Rational, app: Rational, ap: Rational, amp: Rational) -> Self {
        ModuliPoint { alpha_minus: am, alpha_plus_prime: app, alpha_plus: ap, alpha_minus_prime: amp }
    }

    pub fn from_ints(am: i64, app: i64, ap: i64, amp: i64) -> Self {
        Self::new(am.into(), app.into(), ap.into(), amp.into())
    }

    pub fn params(&self) -> CWParams {
        CWParams::from_moduli(
            self.alpha_minus.clone(),
            self.alpha_plus_prime.clone(),
            self.alpha_plus.clone(),
            self.alpha_minus_prime.clone(),
        )
    }

    pub fn from_params(p: &CWParams) -> Self {
        Self::new(
            p.alpha_minus.clone(),
            p.alpha_plus_prime.clone(),
            p.alpha_plus.clone(),
            p.alpha_minus_prime.clone(),
        )
    }

    pub fn is_origin(&self) -> bool {
        self.alpha_minus.is_zero()
            && self.alpha_plus_prime.is_zero()
            && self.alpha_plus.is_zero()
            && self.alpha_minus_prime.is_zero()
    }

    /// Coordinates scaled to unit sum of squares, as floats (the point on S³).
    pub fn normalized(&self) -> Option<[f64; 4]> {
        let v = [&self.alpha_minus, &self.alpha_plus_prime, &self.alpha_plus, &self.alpha_minus_prime]
            .map(|r| r.to_f64());
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (n > 0.0).then(|| v.map(|x| x / n))
    }
}

impl fmt::Display for ModuliPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.alpha_minus, self.alpha_plus_prime, self.alpha_plus, self.alpha_minus_prime)
    }
}

/// Named loci of the parameter space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    /// α₊ = ±α₊′.
    DiagDisc,
    /// α₋ = ±α₊′.
    Ellipsoid,
    /// Every q(eᵢ) + B(eᵢ) vanishes.
    Flat,
    /// (α₊, α₋′) = ±(α₋, α₊′).
    Q,
    /// Q together with α₊ = −3α₊′ ≠ 0.
    P0,
    /// α₊ = −3α₊′ ≠ 0, α₋ = ±α₊′, α₋′ = 0.
    P1,
    /// α₊′ = α₊ = α₋′ = 0 ≠ α₋.
    P2,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::DiagDisc => "diag-disc",
            Tag::Ellipsoid => "ellipsoid",
            Tag::Flat => "flat",
            Tag::Q => "Q",
            Tag::P0 => "P0",
            Tag::P1 => "P1",
            Tag::P2 => "P2",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn plus_minus(a: &Rational, b: &Rational) -> bool {
    a == b || a == &-b
}

/// Tags decided by the coordinates alone (everything except [`Tag::Flat`]).
pub fn coordinate_tags(p: &ModuliPoint) -> Vec<Tag> {
    let (am, app, ap, amp) = (&p.alpha_minus, &p.alpha_plus_prime, &p.alpha_plus, &p.alpha_minus_prime);
    let mut tags = Vec::new();
    if plus_minus(ap, app) {
        tags.push(Tag::DiagDisc);
    }
    if plus_minus(am, app) {
        tags.push(Tag::Ellipsoid);
    }
    let q = (ap == am && amp == app) || (ap == &-am && amp == &-app);
    if q {
        tags.push(Tag::Q);
    }
    let locus = p.params().on_susy_locus() && !app.is_zero();
    if q && locus {
        tags.push(Tag::P0);
    }
    if locus && plus_minus(am, app) && amp.is_zero() {
        tags.push(Tag::P1);
    }
    if app.is_zero() && ap.is_zero() && amp.is_zero() && !am.is_zero() {
        tags.push(Tag::P2);
    }
    tags
}

/// Everything computed about one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub point: ModuliPoint,
    /// Diagonal of B in the fixed basis e₁, …, e₉.
    pub b_eigenvalues: Vec<Rational>,
    pub zero_count: usize,
    pub indecomposable: bool,
    /// The (possibly reduced) superalgebra was built.
    pub superalgebra: bool,
    pub susy: bool,
    /// Dimension of the odd part over 32.
    pub nu: Rational,
    pub parallel_dim: usize,
    pub odd_dim: usize,
    pub tags: Vec<Tag>,
    pub route: Route,
}

/// Classifies a point; the origin is rejected since B vanishes there.
pub fn classify(p: &ModuliPoint) -> Result<ClassificationRecord> {
    if p.is_origin() {
        return Err(Error::Precondition("the origin is not a point of the moduli space".into()));
    }
    let params = p.params();
    let b = b_form(&params);
    let dec = decomposability(&b);
    let data = ConnectionPair::family(&params).data(&b)?;
    let mut tags = coordinate_tags(p);
    if data.flat() {
        tags.push(Tag::Flat);
    }
    tags.sort();
    let parallel_dim = data.parallel_dim();
    let outcome = susy_check_with(&params, &data)?;
    Ok(ClassificationRecord {
        point: p.clone(),
        b_eigenvalues: b.diag.clone(),
        zero_count: b.zero_count(),
        indecomposable: dec.indecomposable,
        superalgebra: true,
        susy: outcome.susy,
        nu: Rational::new(outcome.odd_dim as i64, 32),
        parallel_dim,
        odd_dim: outcome.odd_dim,
        tags,
        route: outcome.route,
    })
}

/// One axis of a grid: `min:max:denominator`, i.e. all k/denominator in
/// [min, max].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    pub min: Rational,
    pub max: Rational,
    pub denominator: i64,
}

impl Axis {
    pub fn fixed(v: Rational) -> Self {
        Axis { min: v.clone(), max: v, denominator: 1 }
    }

    pub fn values(&self) -> Vec<Rational> {
        let d = Rational::from_int(self.denominator);
        let lo = ceil(&(&self.min * &d));
        let hi = floor(&(&self.max * &d));
        if lo > hi {
            // a degenerate axis keeps its single endpoint
            return if self.min == self.max { vec![self.min.clone()] } else { vec![] };
        }
        (lo..=hi).map(|k| Rational::new(k, self.denominator)).collect()
    }
}

fn floor(r: &Rational) -> i64 {
    let f = r.to_big().floor();
    num_traits::ToPrimitive::to_i64(f.numer()).unwrap_or(i64::MAX)
}

fn ceil(r: &Rational) -> i64 {
    let f = r.to_big().ceil();
    num_traits::ToPrimitive::to_i64(f.numer()).unwrap_or(i64::MIN)
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("grid axis '{s}' is not min:max:denominator")));
        }
        let min: Rational = parts[0].trim().parse()?;
        let max: Rational = parts[1].trim().parse()?;
        let denominator: i64 = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in '{s}'")))?;
        if denominator <= 0 {
            return Err(Error::Parse(format!("denominator must be positive in '{s}'")));
        }
        Ok(Axis { min, max, denominator })
    }
}

/// A product grid in the moduli ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub alpha_minus: Axis,
    pub alpha_plus_prime: Axis,
    pub alpha_plus: Axis,
    pub alpha_minus_prime: Axis,
}

impl Grid {
    /// Points in lexicographic order of (α₋, α₊′, α₊, α₋′).
    pub fn points(&self) -> Vec<ModuliPoint> {
        let (a, b, c, d) = (
            self.alpha_minus.values(),
            self.alpha_plus_prime.values(),
            self.alpha_plus.values(),
            self.alpha_minus_prime.values(),
        );
        let mut out = Vec::with_capacity(a.len() * b.len() * c.len() * d.len());
        for am in &a {
            for app in &b {
                for ap in &c {
                    for amp in &d {
                        out.push(ModuliPoint::new(am.clone(), app.clone(), ap.clone(), amp.clone()));
                    }
                }
            }
        }
        out
    }
}

/// Random points with coordinates k/den, |k| ≤ den, drawn from a seeded
/// ChaCha stream; α₋ is held at `alpha_minus`.
pub fn random_points(seed: u64, count: usize, alpha_minus: &Rational, den: i64) -> Vec<ModuliPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || Rational::new(rng.gen_range(-den..=den), den);
    (0..count)
        .map(|_| {
            let (app, ap, amp) = (draw(), draw(), draw());
            ModuliPoint::new(alpha_minus.clone(), app, ap, amp)
        })
        .collect()
}

/// Classifies every point, in input order; the origin is skipped.
pub fn sweep(points: &[ModuliPoint]) -> Result<Vec<ClassificationRecord>> {
    points.par_iter().filter(|p| !p.is_origin()).map(classify).collect()
}

/// Representatives of the distinguished points.
pub fn special_points() -> Vec<(Tag, ModuliPoint)> {
    vec![
        (Tag::P0, ModuliPoint::from_ints(3, -1, 3, -1)),
        (Tag::P1, ModuliPoint::from_ints(1, 1, -3, 0)),
        (Tag::P2, ModuliPoint::from_ints(1, 0, 0, 0)),
        (Tag::Q, ModuliPoint::from_ints(2, 1, 2, 1)),
    ]
}

/// A connection on a lower-dimensional space, with its counts.
#[derive(Clone, Debug)]
pub struct ExtendedConnection {
    pub data: ConnectionData,
    pub parallel_dim: usize,
    pub generated_dim: usize,
}

impl ExtendedConnection {
    fn new(data: ConnectionData) -> Self {
        let parallel_dim = data.parallel_dim();
        let generated_dim = data.generated_dim();
        ExtendedConnection { data, parallel_dim, generated_dim }
    }

    /// Generated dimension over the spinor dimension.
    pub fn fraction(&self) -> Rational {
        Rational::new(self.generated_dim as i64, self.data.dim() as i64)
    }

    /// Parallel dimension over the spinor dimension.
    pub fn parallel_fraction(&self) -> Rational {
        Rational::new(self.parallel_dim as i64, self.data.dim() as i64)
    }
}

fn real(r: &Rational) -> GRat {
    GRat::real(r.clone())
}

fn lambda_sq(scale: &Rational, k: i64) -> Rational {
    -(scale * scale) * Rational::from_int(k)
}

/// Six dimensions: V = ℝ⁴ with spinors ℂ⁴ ⊗ ℂ⁴, c̄ = βX⁻₁₂₃₄γ₁₂ ⊗ T with
/// T = iσ₁ ⊗ 𝟙 and d = 0; B = −β²𝟙.
pub fn extended_connection_d6(beta: &Rational) -> Result<ExtendedConnection> {
    let r5 = build_clifford_r5();
    let id4 = CMatrix::identity(4);
    let gammas: Vec<CMatrix> = r5[..4].iter().map(|g| g.kron(&id4)).collect();
    let t = r5[0].clone();
    let g1234 = product_of(&r5[..4].iter().collect::<Vec<_>>(), 4);
    let x_minus = CMatrix::identity(4).sub(&g1234.scale(&iota(4))).scale(&GRat::frac(1, 2));
    let g12 = r5[0].mul(&r5[1]);
    let cbar = x_minus.mul(&g12).scale(&real(beta)).kron(&t);
    let d = CMatrix::zeros(16, 16);
    let b = BForm::from_diag(vec![lambda_sq(beta, 1); 4]);
    Ok(ExtendedConnection::new(ConnectionData::from_matrices(gammas, cbar, d, b)?))
}

fn d9_gammas() -> (Vec<CMatrix>, CMatrix) {
    let id2 = CMatrix::identity(2);
    let l = octonion_left_mults();
    let gammas: Vec<CMatrix> = l.iter().map(|g| g.kron(&id2)).collect();
    let g123 = product_of(&[&l[0], &l[1], &l[2]], 8).kron(&id2);
    (gammas, g123)
}

fn j() -> CMatrix {
    crate::clifford_core::sigma3().map(|x| x.mul_i())
}

/// B = −4α²diag(4, 𝟙₆) on ℝ⁷.
fn d9_b(alpha: &Rational) -> BForm {
    let mut diag = vec![lambda_sq(alpha, 4); 7];
    diag[0] = lambda_sq(alpha, 16);
    BForm::from_diag(diag)
}

/// Nine dimensions: V = ℝ⁷ with spinors ℂ⁸ ⊗ ℂ², J = iσ₃,
/// c̄ = −αγ₁ ⊗ J + 2αγ₁₂₃ ⊗ 𝟙, d = (α/2)γ₁ ⊗ J − (α/2)γ₁₂₃ ⊗ 𝟙,
/// B = −4α²diag(4, 𝟙₆).
pub fn extended_connection_d9(alpha: &Rational) -> Result<ExtendedConnection> {
    let l = octonion_left_mults();
    let (gammas, g123) = d9_gammas();
    let g1j = l[0].kron(&j());
    let a = real(alpha);
    let half = real(&(alpha * &Rational::new(1, 2)));
    let cbar = g1j.scale(&-&a).add(&g123.scale(&(&a * &GRat::from_int(2))));
    let d = g1j.scale(&half).sub(&g123.scale(&half));
    Ok(ExtendedConnection::new(ConnectionData::from_matrices(gammas, cbar, d, d9_b(alpha))?))
}

/// The nine-dimensional pair in its other transcription:
/// c̄ = −αγ₁ ⊗ 𝟙 + 2αγ₁₂₃ ⊗ iσ₃, d = (α/2)(γ₁ ⊗ 𝟙 + γ₁₂₃ ⊗ iσ₃).
pub fn pair_ii_as_printed(alpha: &Rational) -> Result<ExtendedConnection> {
    let l = octonion_left_mults();
    let (gammas, _) = d9_gammas();
    let id2 = CMatrix::identity(2);
    let g1 = l[0].kron(&id2);
    let g123j = product_of(&[&l[0], &l[1], &l[2]], 8).kron(&j());
    let a = real(alpha);
    let half = real(&(alpha * &Rational::new(1, 2)));
    let cbar = g1.scale(&-&a).add(&g123j.scale(&(&a * &GRat::from_int(2))));
    let d = g1.add(&g123j).scale(&half);
    Ok(ExtendedConnection::new(ConnectionData::from_matrices(gammas, cbar, d, d9_b(alpha))?))
}

/// The pair (α₊γ₁₂₅, α₊′γ₁₂₅) of the family with α₋ = α₊, α₋′ = α₊′.
pub fn uniform_pair(alpha_plus: &Rational, alpha_plus_prime: &Rational) -> CWParams {
    CWParams::new(alpha_plus.clone(), alpha_plus.clone(), alpha_plus_prime.clone(), alpha_plus_prime.clone())
}

/// True iff the family pair at `p` is flat for its own B.
pub fn flat_check(p: &CWParams) -> Result<bool> {
    let b = b_form(p);
    Ok(ConnectionPair::family(p).data(&b)?.flat())
}

/// How a verification row was decided.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Provenance {
    Exact,
    Float(f64),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Exact => f.write_str("exact"),
            Provenance::Float(t) => write!(f, "float({t:e})"),
        }
    }
}

/// One line of a point verification.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub name: &'static str,
    pub pass: bool,
    pub provenance: Provenance,
    pub detail: String,
}

fn row(name: &'static str, pass: bool, provenance: Provenance, detail: String) -> CheckRow {
    CheckRow { name, pass, provenance, detail }
}

/// Kernel dimension of the family predicted from the block coefficients:
/// X⁺ always lies in the kernel and X⁻ does exactly when every block
/// coefficient of X⁻ matches |aᵢ|.
pub fn predicted_kernel_dim(p: &CWParams) -> usize {
    let (ap, am, amp) = (&p.alpha_plus, &p.alpha_minus, &p.alpha_minus_prime);
    let a = p.root_coefficients();
    let minus = [ap - amp, ap - amp, ap + amp, ap + amp, am - amp, am + amp, am + amp, am + amp, am + amp];
    if minus.iter().zip(&a).all(|(b, ai)| plus_minus(b, ai)) {
        16
    } else {
        8
    }
}

/// Jet samples (the origin and one rational point) and `count` float samples.
pub fn sample_points(seed: u64, count: usize) -> (Vec<JetPoint>, Vec<FloatPoint>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jet = JetPoint {
        x_plus: Rational::new(rng.gen_range(-9..=9), 7),
        x_trans: (0..9).map(|_| Rational::new(rng.gen_range(-9..=9), 7)).collect(),
        order: 6,
    };
    let floats = (0..count)
        .map(|_| FloatPoint { x: (0..11).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect() })
        .collect();
    (vec![JetPoint::origin(9, 6), jet], floats)
}

/// Runs the exact and float checks at one point.
pub fn verify_point(p: &ModuliPoint, tol: f64, seed: u64) -> Result<Vec<CheckRow>> {
    if p.is_origin() {
        return Err(Error::Precondition("the origin is not a point of the moduli space".into()));
    }
    let params = p.params();
    let b = b_form(&params);
    let alg = lie_algebra(&params);
    let fields = killing_basis(&params);
    let (jets, floats) = sample_points(seed, 10);
    let jet_samples: Vec<Sample> = jets.iter().cloned().map(Sample::Jet).collect();
    let float_samples: Vec<Sample> = floats.iter().cloned().map(Sample::Float).collect();
    let mut rows = Vec::new();

    let tau = charge_intertwining_sign(&W11);
    let ok = euclidean_relations_hold(&V9.gammas) && lorentz_relations_hold(&W11) && tau.is_some();
    let tau = tau.map_or("none".to_string(), |t| t.to_string());
    rows.push(row("clifford", ok, Provenance::Exact, format!("charge sign {tau}")));
    rows.push(row("jacobi", alg.verify_jacobi()?, Provenance::Exact, format!("dim {}", alg.dim())));
    let ok = fields.iter().all(|k| killing_verify(&b, k, &jet_samples, 0.0));
    rows.push(row("killing", ok, Provenance::Exact, format!("{} fields", fields.len())));
    let ok = fields.iter().all(|k| killing_verify(&b, k, &float_samples, tol));
    rows.push(row("killing", ok, Provenance::Float(tol), format!("{} points", floats.len())));
    let m = killing_brackets_match_algebra(&alg, &jet_samples, tol)?;
    let ok = m.pass && m.sign == Some(*GLOBAL_SIGN);
    let sign = m.sign.map_or("none".to_string(), |s| s.to_string());
    rows.push(row("killing-brackets", ok, Provenance::Exact, format!("sign {sign}")));

    let data = ConnectionPair::family(&params).data(&b)?;
    let kernel = data.joint_kernel().len();
    let predicted = predicted_kernel_dim(&params);
    rows.push(row(
        "parallel-dim",
        kernel == predicted,
        Provenance::Exact,
        format!("{} (predicted {})", data.m() + kernel, data.m() + predicted),
    ));
    let mut ok = true;
    for xi0 in data.parallel_basis().iter().step_by(3) {
        for dir in (0..11).map(Coord::from_slot) {
            ok &= covariant_derivative(&data, xi0, &jets[1], dir)?.iter().all(|s| s.is_zero());
        }
    }
    rows.push(row("parallel-spinors", ok, Provenance::Exact, "covariant derivative on a jet".into()));
    let mut ok = true;
    for i in 1..=9 {
        let r = data.curvature(&alg, Label::Minus, Label::Trans(i))?;
        ok &= r == curvature_closed_form(&data, i);
        ok &= data.curvature(&alg, Label::Trans(i), Label::Trans(1 + i % 9))?.is_zero();
    }
    rows.push(row("curvature", ok, Provenance::Exact, format!("flat {}", data.flat())));

    let sa = Superalgebra::new(&params)?;
    rows.push(row("representation", sa.check_even_odd_rep()?, Provenance::Exact, format!("odd dim {}", sa.odd_dim())));
    let mut ok = true;
    for a in 0..sa.labels().len() {
        for k in 0..sa.odd_dim() {
            let mut xi = vec![Scalar::default(); sa.odd_dim()];
            xi[k] = Scalar::from_int(1);
            ok &= sa.check_evo(a, &xi)?.iter().all(|s| s.is_zero());
        }
    }
    rows.push(row("even-odd-odd", ok, Provenance::Exact, format!("{} labels", sa.labels().len())));
    // the reduced algebra drops the flat-direction fields the current needs
    if !sa.reduced {
        let mut worst: f64 = 0.0;
        let d = sa.odd_dim();
        for (k, x) in floats.iter().take(3).enumerate() {
            for j in (k..d).step_by(5) {
                let mut xi = vec![Scalar::default(); d];
                xi[j] = Scalar::from_int(1);
                xi[(j + 7) % d] = &xi[(j + 7) % d] + &Scalar::from_int(1);
                worst = worst.max(dirac_current_deviation(&sa, &xi, x)?);
            }
        }
        rows.push(row("dirac-current", worst < tol, Provenance::Float(tol), format!("max deviation {worst:.1e}")));
    }
    // the coordinate Lie derivative is +ρ on e₋ and eᵢ*, matching the twist θ
    let mut worst: f64 = 0.0;
    let x = &floats[0];
    for l in sa.labels().iter().copied() {
        let k = killing_field(&data.b, l)?;
        let s = if matches!(l, Label::Minus | Label::Dual(_)) { -1.0 } else { 1.0 };
        for xi in data.parallel_basis().iter().step_by(7) {
            let (c, a) = lie_derivative_pair(&data, &k, xi, x)?;
            worst = c.iter().zip(&a).map(|(u, v)| (u - v * s).norm()).fold(worst, f64::max);
        }
    }
    rows.push(row("lie-derivative", worst < tol, Provenance::Float(tol), format!("max deviation {worst:.1e}")));
    let direct = sa.ooo_vanishes();
    let outcome = susy_check_with(&params, &data)?;
    let mut detail = format!("susy {direct}");
    let mut ok = outcome.susy == direct;
    if outcome.route == Route::Linear {
        ok &= direct == params.on_susy_locus();
        detail.push_str(&format!(", locus {}", params.on_susy_locus()));
        if !direct && !params.on_susy_locus() {
            detail.push_str(" (expected-negative)");
        }
    }
    rows.push(row("odd-odd-odd", ok, Provenance::Exact, detail));
    Ok(rows)
}

/// R(e₋, eᵢ) = −E₁₂ ⊗ (q(eᵢ) + B(eᵢ))/√2.
pub fn curvature_closed_form(data: &ConnectionData, i: usize) -> SMatrix {
    let m = data.m();
    let mut out = SMatrix::zeros(2 * m, 2 * m);
    out.set_block(0, m, &to_s(&data.defect(i)));
    out.scale(&Scalar::inv_sqrt2()).neg()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_of_special_points() {
        for (tag, p) in special_points() {
            let rec = classify(&p).unwrap();
            assert!(rec.tags.contains(&tag), "{tag} missing at {p}: {:?}", rec.tags);
        }
    }

    #[test]
    fn q_points_are_flat() {
        for p in [ModuliPoint::from_ints(2, 1, 2, 1), ModuliPoint::from_ints(2, 1, -2, -1)] {
            let rec = classify(&p).unwrap();
            assert!(rec.tags.contains(&Tag::Flat));
            assert_eq!(rec.parallel_dim, 32);
        }
    }

    #[test]
    fn generic_point() {
        let rec = classify(&ModuliPoint::from_ints(7, 2, 5, 1)).unwrap();
        assert!(rec.indecomposable);
        assert_eq!(rec.parallel_dim, 24);
        assert_eq!(rec.odd_dim, 24);
        assert_eq!(rec.nu, Rational::new(3, 4));
        assert!(!rec.susy);
        let rec = classify(&ModuliPoint::from_ints(7, 2, -6, 1)).unwrap();
        assert!(rec.susy);
    }

    #[test]
    fn verify_generic_and_flat() {
        for p in [ModuliPoint::from_ints(7, 2, 5, 1), ModuliPoint::from_ints(2, 1, 2, 1), ModuliPoint::from_ints(1, 1, -3, 0)] {
            let rows = verify_point(&p, 1e-9, 3).unwrap();
            for r in &rows {
                assert!(r.pass, "{p}: {} {} {}", r.name, r.provenance, r.detail);
            }
        }
    }

    #[test]
    fn predicted_kernel() {
        assert_eq!(predicted_kernel_dim(&ModuliPoint::from_ints(7, 2, 5, 1).params()), 8);
        assert_eq!(predicted_kernel_dim(&ModuliPoint::from_ints(2, 1, 2, 1).params()), 16);
    }

    #[test]
    fn axis_parsing() {
        let a: Axis = "-1:1:10".parse().unwrap();
        assert_eq!(a.values().len(), 21);
        let b: Axis = "1/3:1/3:1".parse().unwrap();
        assert_eq!(b.values(), vec![Rational::new(1, 3)]);
        assert!("1:0:2".parse::<Axis>().unwrap().values().is_empty());
        assert!("1:2".parse::<Axis>().is_err());
    }

    #[test]
    fn random_points_are_reproducible() {
        let a = random_points(7, 5, &Rational::new(7, 10), 10);
        let b = random_points(7, 5, &Rational::new(7, 10), 10);
        assert_eq!(a, b);
    }

    #[test]
    fn extended_connections() {
        for k in [1, 3] {
            let a = Rational::new(k, 2);
            let d6 = extended_connection_d6(&a).unwrap();
            assert_eq!((d6.parallel_dim, d6.generated_dim), (24, 16));
            assert_eq!(d6.fraction(), Rational::new(1, 2));
            let d9 = extended_connection_d9(&a).unwrap();
            assert_eq!((d9.parallel_dim, d9.generated_dim), (24, 24));
            assert_eq!(d9.fraction(), Rational::new(3, 4));
            let printed = pair_ii_as_printed(&a).unwrap();
            assert!(printed.data.joint_kernel().is_empty());
            assert_eq!(printed.parallel_fraction(), Rational::new(1, 2));
        }
    }
}
