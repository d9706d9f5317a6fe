//! Cahen-Wallach data: parameters, the B-form, metric, Christoffel symbols,
//! Killing vector fields and the isometry Lie algebra.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{GRat, Rational};
use crate::series::{Coord, Evaluator, FloatPoint, JetPoint, Ring};

/// The four rational parameters of the connection family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CWParams {
    pub alpha_plus: Rational,
    pub alpha_minus: Rational,
    pub alpha_plus_prime: Rational,
    pub alpha_minus_prime: Rational,
}

impl CWParams {
    pub fn new(
        alpha_plus: Rational,
        alpha_minus: Rational,
        alpha_plus_prime: Rational,
        alpha_minus_prime: Rational,
    ) -> Self {
        CWParams { alpha_plus, alpha_minus, alpha_plus_prime, alpha_minus_prime }
    }

    /// Constructor taking the moduli ordering (α₋, α₊′, α₊, α₋′).
    pub fn from_moduli(am: Rational, app: Rational, ap: Rational, amp: Rational) -> Self {
        CWParams::new(ap, am, app, amp)
    }

    pub fn from_ints(ap: i64, am: i64, app: i64, amp: i64) -> Self {
        CWParams::new(ap.into(), am.into(), app.into(), amp.into())
    }

    /// The real numbers aᵢ with λᵢ = −i·aᵢ.
    pub fn root_coefficients(&self) -> [Rational; 9] {
        let d12 = &self.alpha_minus - &self.alpha_plus_prime;
        let d34 = &self.alpha_minus + &self.alpha_plus_prime;
        let d5 = &self.alpha_plus - &self.alpha_plus_prime;
        let d6 = &self.alpha_plus + &self.alpha_plus_prime;
        [d12.clone(), d12, d34.clone(), d34, d5, d6.clone(), d6.clone(), d6.clone(), d6]
    }

    /// λ₁ = λ₂ = −i(α₋ − α₊′), λ₃ = λ₄ = −i(α₋ + α₊′), λ₅ = −i(α₊ − α₊′),
    /// λ₆ = … = λ₉ = −i(α₊ + α₊′).
    pub fn lambdas(&self) -> Vec<GRat> {
        self.root_coefficients()
            .iter()
            .map(|a| GRat::new(Rational::from_int(0), -a))
            .collect()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        CWParams::new(
            &self.alpha_plus * c,
            &self.alpha_minus * c,
            &self.alpha_plus_prime * c,
            &self.alpha_minus_prime * c,
        )
    }

    /// True on the locus α₊ = −3α₊′.
    pub fn on_susy_locus(&self) -> bool {
        (&self.alpha_plus + &(&self.alpha_plus_prime * &Rational::from_int(3))).is_zero()
    }
}

impl fmt::Display for CWParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(α₋, α₊′, α₊, α₋′) = ({}, {}, {}, {})",
            self.alpha_minus, self.alpha_plus_prime, self.alpha_plus, self.alpha_minus_prime
        )
    }
}

/// A diagonal symmetric map B on V, with optional exact square roots λᵢ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BForm {
    pub diag: Vec<Rational>,
    roots: Option<Vec<GRat>>,
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &sn * &sn == n && &sd * &sd == d {
        Some(Rational::from_big(num_rational::BigRational::new(sn, sd)))
    } else {
        None
    }
}

impl BForm {
    /// B with eigenvalues λᵢ².
    pub fn from_roots(roots: Vec<GRat>) -> Self {
        let diag = roots
            .iter()
            .map(|l| {
                let sq = l * l;
                assert!(sq.is_real(), "λ² must be real");
                sq.re
            })
            .collect();
        BForm { diag, roots: Some(roots) }
    }

    /// B from its diagonal; roots λᵢ = −i√(−bᵢ) are attached when every −bᵢ
    /// is the square of a rational.
    pub fn from_diag(diag: Vec<Rational>) -> Self {
        let roots: Option<Vec<GRat>> = diag
            .iter()
            .map(|b| rational_sqrt(&-b).map(|s| GRat::new(Rational::from_int(0), -s)))
            .collect();
        BForm { diag, roots }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn roots(&self) -> Result<&[GRat]> {
        self.roots
            .as_deref()
            .ok_or_else(|| Error::Unsupported("B has eigenvalues without rational roots".into()))
    }

    pub fn lambda(&self, i: usize) -> Result<GRat> {
        Ok(self.roots()?[i - 1].clone())
    }

    pub fn entry(&self, i: usize) -> &Rational {
        &self.diag[i - 1]
    }

    pub fn is_degenerate(&self) -> bool {
        self.diag.iter().any(|b| b.is_zero())
    }

    pub fn zero_count(&self) -> usize {
        self.diag.iter().filter(|b| b.is_zero()).count()
    }

    /// Groups of 1-based indices with equal eigenvalue, ordered by first index.
    pub fn eigen_blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks: Vec<(Rational, Vec<usize>)> = Vec::new();
        for (k, b) in self.diag.iter().enumerate() {
            match blocks.iter_mut().find(|(v, _)| v == b) {
                Some((_, idx)) => idx.push(k + 1),
                None => blocks.push((b.clone(), vec![k + 1])),
            }
        }
        blocks.into_iter().map(|(_, i)| i).collect()
    }

    /// Rotation generators (i, j), i < j, of so_B(V).
    pub fn so_b_pairs(&self) -> Vec<(usize, usize)> {
        pairs_within(&self.eigen_blocks())
    }

    /// Eigenvalues sorted ascending.
    pub fn sorted(&self) -> Vec<Rational> {
        let mut v = self.diag.clone();
        v.sort();
        v
    }
}

/// All pairs (i, j), i < j, inside each block, in block order.
pub fn pairs_within(blocks: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for b in blocks {
        for (k, &i) in b.iter().enumerate() {
            for &j in &b[k + 1..] {
                out.push((i, j));
            }
        }
    }
    out
}

/// Blocks on which the connection family acts by a common Clifford pattern.
pub fn connection_blocks() -> Vec<Vec<usize>> {
    vec![vec![1, 2], vec![3, 4], vec![5], vec![6, 7, 8, 9]]
}

/// B = −diag((α₋−α₊′)²·𝟙₂, (α₋+α₊′)²·𝟙₂, (α₊−α₊′)², (α₊+α₊′)²·𝟙₄).
pub fn b_form(params: &CWParams) -> BForm {
    BForm::from_roots(params.lambdas())
}

/// Zero-eigenvalue count and blocks of B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposability {
    pub zero_count: usize,
    pub indecomposable: bool,
    pub blocks: Vec<Vec<usize>>,
    pub zero_directions: Vec<usize>,
}

pub fn decomposability(b: &BForm) -> Decomposability {
    let zero_directions: Vec<usize> =
        (1..=b.n()).filter(|&i| b.entry(i).is_zero()).collect();
    Decomposability {
        zero_count: zero_directions.len(),
        indecomposable: zero_directions.is_empty(),
        blocks: b.eigen_blocks(),
        zero_directions,
    }
}

/// True iff the sorted spectra agree up to one positive rational factor.
pub fn isometry_equivalent(b1: &BForm, b2: &BForm) -> bool {
    if b1.n() != b2.n() {
        return false;
    }
    let (s1, s2) = (b1.sorted(), b2.sorted());
    let Some(k) = s1.iter().position(|x| !x.is_zero()) else {
        return s2.iter().all(|x| x.is_zero());
    };
    if s2[k].is_zero() {
        return false;
    }
    let c = &s2[k] / &s1[k];
    if !c.is_positive() {
        return false;
    }
    s1.iter().zip(&s2).all(|(a, b)| &(a * &c) == b)
}

/// Coordinate metric g_B at a point, in slot order (x⁺, x⁻, x¹…xⁿ):
/// g₊₋ = 1, g₋₋ = −Σ Bᵢᵢ(xⁱ)², gᵢᵢ = 1.
pub fn metric_at<E: Evaluator>(b: &BForm, x: &E) -> Vec<Vec<E::R>> {
    let n = b.n();
    let dim = n + 2;
    let z = x.zero();
    let one = x.constant(&GRat::from_int(1));
    let mut g = vec![vec![z.clone(); dim]; dim];
    g[0][1] = one.clone();
    g[1][0] = one.clone();
    let mut gmm = z.clone();
    for i in 1..=n {
        let xi = x.coord(Coord::T(i));
        gmm = gmm.sub(&xi.mul(&xi).scale(&GRat::real(b.entry(i).clone())));
        g[1 + i][1 + i] = one.clone();
    }
    g[1][1] = gmm;
    g
}

/// Exact metric at a rational point (x⁺, x⁻, x¹…xⁿ).
pub fn metric_exact(b: &BForm, x: &[Rational]) -> crate::matrix::Matrix<Rational> {
    let n = b.n();
    let mut g = crate::matrix::Matrix::zeros(n + 2, n + 2);
    g.set(0, 1, Rational::from_int(1));
    g.set(1, 0, Rational::from_int(1));
    let mut gmm = Rational::from_int(0);
    for i in 1..=n {
        gmm = &gmm - &(b.entry(i) * &(&x[1 + i] * &x[1 + i]));
        g.set(1 + i, 1 + i, Rational::from_int(1));
    }
    g.set(1, 1, gmm);
    g
}

/// Nonzero Christoffel symbols of the first kind Γ_{μν;ρ} (last index lowered),
/// as (μ, ν, ρ, value) with slot indices: Γ_{i−;−} = Γ_{−i;−} = −Bᵢᵢxⁱ and
/// Γ_{−−;i} = Bᵢᵢxⁱ.
pub fn christoffel<E: Evaluator>(b: &BForm, x: &E) -> Vec<(usize, usize, usize, E::R)> {
    let mut out = Vec::new();
    for i in 1..=b.n() {
        if b.entry(i).is_zero() {
            continue;
        }
        let bx = x.coord(Coord::T(i)).scale(&GRat::real(b.entry(i).clone()));
        let s = 1 + i;
        if bx.magnitude() == 0.0 {
            continue;
        }
        out.push((s, 1, 1, bx.neg()));
        out.push((1, s, 1, bx.neg()));
        out.push((1, 1, s, bx));
    }
    out
}

/// Christoffel symbols as a dense table `[μ][ν][ρ]`.
pub fn christoffel_table<E: Evaluator>(b: &BForm, x: &E) -> Vec<Vec<Vec<E::R>>> {
    let dim = b.n() + 2;
    let z = x.zero();
    let mut t = vec![vec![vec![z; dim]; dim]; dim];
    for (m, n, r, v) in christoffel(b, x) {
        t[m][n][r] = v;
    }
    t
}

/// Time dependence of a Killing-field coefficient.
#[derive(Clone, Debug, PartialEq)]
pub enum Wave {
    One,
    Cos(GRat),
    Sin(GRat),
}

/// A term coeff · wave(x⁻) · (optional coordinate factor).
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: GRat,
    pub wave: Wave,
    pub factor: Option<Coord>,
}

impl Term {
    fn new(coeff: GRat, wave: Wave, factor: Option<Coord>) -> Self {
        Term { coeff, wave, factor }
    }

    pub fn eval<E: Evaluator>(&self, x: &E) -> E::R {
        let w = match &self.wave {
            Wave::One => x.constant(&GRat::from_int(1)),
            Wave::Cos(l) => x.trig(l, false),
            Wave::Sin(l) => x.trig(l, true),
        };
        let w = w.scale(&self.coeff);
        match self.factor {
            Some(c) => w.mul(&x.coord(c)),
            None => w,
        }
    }

    /// ∂/∂(coordinate) by the product rule with cos′ = −λ sin, sin′ = λ cos.
    pub fn derivative(&self, c: Coord) -> Vec<Term> {
        let mut out = Vec::new();
        if c == Coord::Minus {
            match &self.wave {
                Wave::One => {}
                Wave::Cos(l) => out.push(Term::new(-&(&self.coeff * l), Wave::Sin(l.clone()), self.factor)),
                Wave::Sin(l) => out.push(Term::new(&self.coeff * l, Wave::Cos(l.clone()), self.factor)),
            }
        }
        if self.factor == Some(c) {
            out.push(Term::new(self.coeff.clone(), self.wave.clone(), None));
        }
        out.retain(|t| !t.coeff.is_zero());
        out
    }
}

/// Basis labels of the isometry algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Plus,
    Minus,
    Trans(usize),
    Dual(usize),
    /// Rotation (i, j) with i < j.
    Rot(usize, usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Plus => write!(f, "+"),
            Label::Minus => write!(f, "-"),
            Label::Trans(i) => write!(f, "{i}"),
            Label::Dual(i) => write!(f, "{i}*"),
            Label::Rot(i, j) => write!(f, "({i}{j})"),
        }
    }
}

impl std::str::FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Label> {
        let bad = || Error::UnknownLabel(s.to_string());
        match s {
            "+" => return Ok(Label::Plus),
            "-" => return Ok(Label::Minus),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let digits: Vec<usize> =
                inner.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(bad)?;
            if digits.len() != 2 || digits[0] >= digits[1] || digits[0] == 0 {
                return Err(bad());
            }
            return Ok(Label::Rot(digits[0], digits[1]));
        }
        if let Some(d) = s.strip_suffix('*') {
            let i: usize = d.parse().map_err(|_| bad())?;
            if i == 0 {
                return Err(bad());
            }
            return Ok(Label::Dual(i));
        }
        let i: usize = s.parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        Ok(Label::Trans(i))
    }
}

/// Standard label list: +, −, 1…n, 1*…n*, then the given rotations.
pub fn standard_labels(n: usize, rotations: &[(usize, usize)]) -> Vec<Label> {
    let mut v = vec![Label::Plus, Label::Minus];
    v.extend((1..=n).map(Label::Trans));
    v.extend((1..=n).map(Label::Dual));
    v.extend(rotations.iter().map(|&(i, j)| Label::Rot(i, j)));
    v
}

/// A Killing vector field in closed form: components indexed by coordinate slot.
#[derive(Clone, Debug, PartialEq)]
pub struct KillingField {
    pub label: Label,
    pub comps: Vec<Vec<Term>>,
}

impl KillingField {
    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn eval<E: Evaluator>(&self, x: &E) -> Vec<E::R> {
        self.comps
            .iter()
            .map(|ts| ts.iter().fold(x.zero(), |acc, t| acc.add(&t.eval(x))))
            .collect()
    }

    /// Matrix `[μ][ν] = ∂_ν K^μ`.
    pub fn jacobian<E: Evaluator>(&self, x: &E) -> Vec<Vec<E::R>> {
        let dim = self.dim();
        self.comps
            .iter()
            .map(|ts| {
                (0..dim)
                    .map(|nu| {
                        ts.iter()
                            .flat_map(|t| t.derivative(Coord::from_slot(nu)))
                            .fold(x.zero(), |acc, t| acc.add(&t.eval(x)))
                    })
                    .collect()
            })
            .collect()
    }
}

fn unit_term(c: i64) -> Term {
    Term::new(GRat::from_int(c), Wave::One, None)
}

/// The Killing field attached to a basis label; λ = 0 gives K₍ᵢ₎ = ∂ᵢ, K₍ᵢ*₎ = 0.
pub fn killing_field(b: &BForm, label: Label) -> Result<KillingField> {
    let n = b.n();
    let mut comps = vec![Vec::new(); n + 2];
    let check = |i: usize| {
        if i == 0 || i > n {
            Err(Error::UnknownLabel(label.to_string()))
        } else {
            Ok(())
        }
    };
    match label {
        Label::Plus => comps[0].push(unit_term(-1)),
        Label::Minus => comps[1].push(unit_term(-1)),
        Label::Trans(i) => {
            check(i)?;
            let l = b.lambda(i)?;
            comps[1 + i].push(Term::new(GRat::from_int(1), Wave::Cos(l.clone()), None));
            comps[0].push(Term::new(l.clone(), Wave::Sin(l), Some(Coord::T(i))));
        }
        Label::Dual(i) => {
            check(i)?;
            let l = b.lambda(i)?;
            comps[1 + i].push(Term::new(-&l, Wave::Sin(l.clone()), None));
            comps[0].push(Term::new(&l * &l, Wave::Cos(l), Some(Coord::T(i))));
        }
        Label::Rot(i, j) => {
            check(i)?;
            check(j)?;
            if i >= j {
                return Err(Error::UnknownLabel(label.to_string()));
            }
            comps[1 + i].push(Term::new(GRat::from_int(1), Wave::One, Some(Coord::T(j))));
            comps[1 + j].push(Term::new(GRat::from_int(-1), Wave::One, Some(Coord::T(i))));
        }
    }
    for c in comps.iter_mut() {
        c.retain(|t| !t.coeff.is_zero());
    }
    Ok(KillingField { label, comps })
}

/// Killing fields for every label of a list.
pub fn killing_fields_for(b: &BForm, labels: &[Label]) -> Result<Vec<KillingField>> {
    labels.iter().map(|&l| killing_field(b, l)).collect()
}

/// The 28 fields K₍₊₎, K₍₋₎, K₍ᵢ₎, K₍ᵢ*₎ and K₍ᵢⱼ₎ for (ij) within
/// {1,2}, {3,4}, {6,…,9}.
pub fn killing_basis(params: &CWParams) -> Vec<KillingField> {
    let b = b_form(params);
    let labels = standard_labels(9, &pairs_within(&connection_blocks()));
    killing_fields_for(&b, &labels).expect("family roots are rational")
}

/// Components of the Lie derivative of the metric, (L_K g)_{μν} = ∇_μK_ν + ∇_νK_μ.
pub fn killing_residual<E: Evaluator>(b: &BForm, k: &KillingField, x: &E) -> Vec<Vec<E::R>> {
    let nab = nabla_lower(b, k, x);
    let dim = k.dim();
    (0..dim).map(|m| (0..dim).map(|n| nab[m][n].add(&nab[n][m])).collect()).collect()
}

/// ∂_μ g_{νρ} evaluated at x: only ∂ᵢ g₋₋ = −2Bᵢᵢxⁱ is nonzero.
fn metric_derivative<E: Evaluator>(b: &BForm, x: &E, mu: usize, nu: usize, rho: usize) -> E::R {
    if nu == 1 && rho == 1 && mu >= 2 {
        let i = mu - 1;
        return x.coord(Coord::T(i)).scale(&GRat::real(b.entry(i) * &Rational::from_int(-2)));
    }
    x.zero()
}

/// Table `[μ][ν] = ∇_μ K_ν = ∂_μ(g_{νσ}K^σ) − Γ_{μν;ρ}K^ρ`.
pub fn nabla_lower<E: Evaluator>(b: &BForm, k: &KillingField, x: &E) -> Vec<Vec<E::R>> {
    let dim = k.dim();
    let kv = k.eval(x);
    let jac = k.jacobian(x);
    let g = metric_at(b, x);
    let chr = christoffel_table(b, x);
    let mut out = vec![vec![x.zero(); dim]; dim];
    for mu in 0..dim {
        for nu in 0..dim {
            let mut acc = x.zero();
            for s in 0..dim {
                if g[nu][s].magnitude() != 0.0 {
                    acc = acc.add(&g[nu][s].mul(&jac[s][mu]));
                }
                let dg = metric_derivative(b, x, mu, nu, s);
                if dg.magnitude() != 0.0 {
                    acc = acc.add(&dg.mul(&kv[s]));
                }
                if chr[mu][nu][s].magnitude() != 0.0 {
                    acc = acc.sub(&chr[mu][nu][s].mul(&kv[s]));
                }
            }
            out[mu][nu] = acc;
        }
    }
    out
}

/// Samples used by Killing verification.
#[derive(Clone, Debug)]
pub enum Sample {
    Jet(JetPoint),
    Float(FloatPoint),
}

/// Passes iff L_K g = 0 exactly on jet samples and below `tol` (relative to the
/// size of ∇K) on float samples.
pub fn killing_verify(b: &BForm, k: &KillingField, samples: &[Sample], tol: f64) -> bool {
    samples.iter().all(|s| match s {
        Sample::Jet(p) => killing_residual(b, k, p).iter().flatten().all(|r| r.magnitude() == 0.0),
        Sample::Float(p) => {
            let res = killing_residual(b, k, p);
            let scale = nabla_lower(b, k, p)
                .iter()
                .flatten()
                .map(|v| v.norm())
                .fold(1.0, f64::max);
            res.iter().flatten().all(|r| r.norm() <= tol * scale)
        }
    })
}

/// Lie bracket of vector fields, [X, Y]^μ = X^ν∂_νY^μ − Y^ν∂_νX^μ.
pub fn vector_bracket<E: Evaluator>(x: &KillingField, y: &KillingField, p: &E) -> Vec<E::R> {
    let (xv, yv) = (x.eval(p), y.eval(p));
    let (jx, jy) = (x.jacobian(p), y.jacobian(p));
    let dim = x.dim();
    (0..dim)
        .map(|mu| {
            let mut acc = p.zero();
            for nu in 0..dim {
                acc = acc.add(&xv[nu].mul(&jy[mu][nu])).sub(&yv[nu].mul(&jx[mu][nu]));
            }
            acc
        })
        .collect()
}

/// The abstract Lie algebra on {e₊, e₋, eᵢ, eᵢ*, e_{ij}} with exact structure constants.
#[derive(Clone, Debug)]
pub struct CWLieAlgebra {
    pub labels: Vec<Label>,
    pub b: BForm,
    index: BTreeMap<Label, usize>,
}

/// A sparse combination of basis labels.
pub type Combination = Vec<(Label, GRat)>;

impl CWLieAlgebra {
    pub fn new(b: BForm, rotations: &[(usize, usize)]) -> Self {
        let labels = standard_labels(b.n(), rotations);
        Self::with_labels(b, labels)
    }

    /// The subalgebra spanned by an explicit, bracket-closed list of labels.
    pub fn with_labels(b: BForm, labels: Vec<Label>) -> Self {
        let index = labels.iter().enumerate().map(|(k, l)| (*l, k)).collect();
        CWLieAlgebra { labels, b, index }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, l: Label) -> Option<usize> {
        self.index.get(&l).copied()
    }

    fn lam2(&self, i: usize) -> GRat {
        GRat::real(self.b.entry(i).clone())
    }

    /// Rotation generator E_{ij} with sign for unordered indices.
    fn rot(i: usize, j: usize) -> Option<(Label, i64)> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some((Label::Rot(i, j), 1)),
            std::cmp::Ordering::Greater => Some((Label::Rot(j, i), -1)),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// [x, y] on basis labels, before any global sign.
    pub fn bracket_labels(&self, x: Label, y: Label) -> Combination {
        use Label::*;
        let one = GRat::from_int(1);
        let d = |a: usize, b: usize| a == b;
        let mut out: Combination = Vec::new();
        match (x, y) {
            (Plus, _) | (_, Plus) => {}
            (Minus, Trans(i)) => out.push((Dual(i), one)),
            (Trans(i), Minus) => out.push((Dual(i), -one)),
            (Minus, Dual(i)) => out.push((Trans(i), -self.lam2(i))),
            (Dual(i), Minus) => out.push((Trans(i), self.lam2(i))),
            (Dual(i), Trans(j)) if d(i, j) => out.push((Plus, -self.lam2(i))),
            (Trans(i), Dual(j)) if d(i, j) => out.push((Plus, self.lam2(i))),
            (Rot(i, j), Trans(k)) => {
                if d(j, k) {
                    out.push((Trans(i), one.clone()));
                }
                if d(i, k) {
                    out.push((Trans(j), -one));
                }
            }
            (Trans(k), Rot(i, j)) => {
                if d(j, k) {
                    out.push((Trans(i), -one.clone()));
                }
                if d(i, k) {
                    out.push((Trans(j), one));
                }
            }
            (Rot(i, j), Dual(k)) => {
                if d(j, k) {
                    out.push((Dual(i), one.clone()));
                }
                if d(i, k) {
                    out.push((Dual(j), -one));
                }
            }
            (Dual(k), Rot(i, j)) => {
                if d(j, k) {
                    out.push((Dual(i), -one.clone()));
                }
                if d(i, k) {
                    out.push((Dual(j), one));
                }
            }
            (Rot(i, j), Rot(k, l)) => {
                // [E_ij, E_kl] = δ_jk E_il − δ_jl E_ik − δ_ik E_jl + δ_il E_jk
                let mut acc: BTreeMap<Label, i64> = BTreeMap::new();
                let mut push = |cond: bool, a: usize, b: usize, s: i64| {
                    if cond {
                        if let Some((lab, t)) = Self::rot(a, b) {
                            *acc.entry(lab).or_default() += s * t;
                        }
                    }
                };
                push(d(j, k), i, l, 1);
                push(d(j, l), i, k, -1);
                push(d(i, k), j, l, -1);
                push(d(i, l), j, k, 1);
                out.extend(acc.into_iter().filter(|(_, c)| *c != 0).map(|(lab, c)| (lab, GRat::from_int(c))));
            }
            _ => {}
        }
        out.retain(|(_, c)| !c.is_zero());
        out
    }

    /// Bracket as a coefficient vector in this algebra's basis; rotations
    /// outside the basis are an error.
    pub fn bracket_vec(&self, a: usize, b: usize) -> Result<Vec<GRat>> {
        let mut v = vec![GRat::default(); self.dim()];
        for (l, c) in self.bracket_labels(self.labels[a], self.labels[b]) {
            let k = self
                .index_of(l)
                .ok_or_else(|| Error::UndefinedBracket(format!("{l} not in the basis")))?;
            v[k] = &v[k] + &c;
        }
        Ok(v)
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket(&self, x: &[GRat], y: &[GRat]) -> Result<Vec<GRat>> {
        let mut out = vec![GRat::default(); self.dim()];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa * yb;
                for (k, v) in self.bracket_vec(a, b)?.iter().enumerate() {
                    if !v.is_zero() {
                        out[k] = &out[k] + &(&c * v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sparse structure constants (a, b, c, f_ab^c) for a < b.
    pub fn structure_constants(&self) -> Result<Vec<(usize, usize, usize, GRat)>> {
        let mut out = Vec::new();
        for a in 0..self.dim() {
            for b in a + 1..self.dim() {
                for (c, v) in self.bracket_vec(a, b)?.into_iter().enumerate() {
                    if !v.is_zero() {
                        out.push((a, b, c, v));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Antisymmetry and Jacobi on all basis pairs and triples.
    pub fn verify_jacobi(&self) -> Result<bool> {
        let n = self.dim();
        let table: Vec<Vec<Vec<GRat>>> =
            (0..n).map(|a| (0..n).map(|b| self.bracket_vec(a, b)).collect::<Result<_>>()).collect::<Result<_>>()?;
        for a in 0..n {
            for b in 0..n {
                let neg: Vec<GRat> = table[b][a].iter().map(|x| -x).collect();
                if table[a][b] != neg {
                    return Ok(false);
                }
            }
        }
        let br = |v: &[GRat], c: usize| -> Vec<GRat> {
            let mut out = vec![GRat::default(); n];
            for (k, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (m, y) in table[k][c].iter().enumerate() {
                    if !y.is_zero() {
                        out[m] = &out[m] + &(x * y);
                    }
                }
            }
            out
        };
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    // [[a,b],c] + [[b,c],a] + [[c,a],b] = 0
                    let t1 = br(&table[a][b], c);
                    let t2 = br(&table[b][c], a);
                    let t3 = br(&table[c][a], b);
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(&(x + y) + z).is_zero()) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Isometry algebra with so_B(V) from the eigenvalue blocks of B.
pub fn lie_algebra(params: &CWParams) -> CWLieAlgebra {
    let b = b_form(params);
    let rot = b.so_b_pairs();
    CWLieAlgebra::new(b, &rot)
}

/// Outcome of comparing vector-field commutators with the structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketMatch {
    pub sign: Option<i64>,
    pub pass: bool,
    pub pairs_checked: usize,
}

/// Compares [K_a, K_b] with ε·K_{[e_a, e_b]} on all basis pairs at the given
/// samples; ε must be uniform.
pub fn killing_brackets_match_algebra(alg: &CWLieAlgebra, samples: &[Sample], tol: f64) -> Result<BracketMatch> {
    let fields = killing_fields_for(&alg.b, &alg.labels)?;
    let n = alg.dim();
    let mut sign: Option<i64> = None;
    let mut ok = true;
    let mut pairs = 0;
    for a in 0..n {
        for b in a + 1..n {
            let combo = alg.bracket_vec(a, b)?;
            pairs += 1;
            for s in samples {
                let (lhs, rhs) = match s {
                    Sample::Jet(p) => {
                        let l = vector_bracket(&fields[a], &fields[b], p);
                        let r = combine(&fields, &combo, p);
                        (to_c(&l), to_c(&r))
                    }
                    Sample::Float(p) => {
                        let l = vector_bracket(&fields[a], &fields[b], p);
                        let r = combine(&fields, &combo, p);
                        (l, r)
                    }
                };
                let exact = matches!(s, Sample::Jet(_));
                let scale = lhs.iter().chain(&rhs).map(|z| z.norm()).fold(1.0, f64::max);
                let thr = if exact { 0.0 } else { tol * scale };
                let close = |s: f64| lhs.iter().zip(&rhs).all(|(l, r)| (l - r * s).norm() <= thr);
                let lhs_zero = lhs.iter().all(|z| z.norm() <= thr);
                let rhs_zero = rhs.iter().all(|z| z.norm() <= thr);
                if lhs_zero && rhs_zero {
                    continue;
                }
                let s_here = if close(1.0) {
                    1
                } else if close(-1.0) {
                    -1
                } else {
                    ok = false;
                    continue;
                };
                match sign {
                    None => sign = Some(s_here),
                    Some(t) if t != s_here => ok = false,
                    _ => {}
                }
            }
        }
    }
    Ok(BracketMatch { sign, pass: ok && sign.is_some(), pairs_checked: pairs })
}

/// Jet samples are compared exactly: exact zero ↔ 0.0 and equality is tested
/// coefficient-wise by mapping series coefficients to a complex vector.
fn to_c(v: &[crate::series::Series]) -> Vec<Complex64> {
    v.iter().flat_map(|s| s.coeffs.iter().map(|c| c.to_c64())).collect()
}

fn combine<E: Evaluator>(fields: &[KillingField], combo: &[GRat], p: &E) -> Vec<E::R> {
    let dim = fields[0].dim();
    let mut out = vec![p.zero(); dim];
    for (k, c) in combo.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let v = fields[k].eval(p);
        for (o, x) in out.iter_mut().zip(&v) {
            *o = o.add(&x.scale(c));
        }
    }
    out
}

/// [`killing_brackets_match_algebra`] for the isometry algebra of the family.
pub fn killing_brackets_match(params: &CWParams, samples: &[Sample], tol: f64) -> Result<BracketMatch> {
    killing_brackets_match_algebra(&lie_algebra(params), samples, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic() -> CWParams {
        CWParams::from_ints(5, 2, 1, -3)
    }

    #[test]
    fn b_form_entries() {
        let b = b_form(&CWParams::from_moduli(1.into(), 0.into(), 1.into(), 0.into()));
        assert!(b.diag.iter().all(|x| *x == Rational::from_int(-1)));
        let p = CWParams::from_ints(-3, 2, 1, 7);
        let b = b_form(&p);
        assert_eq!(b.diag[4], Rational::from_int(-16));
        assert_eq!(b.diag[5], Rational::from_int(-4));
    }

    #[test]
    fn label_parse_roundtrip() {
        for l in standard_labels(9, &[(1, 2), (6, 9)]) {
            assert_eq!(l.to_string().parse::<Label>().unwrap(), l);
        }
        assert!("(21)".parse::<Label>().is_err());
        assert!("0".parse::<Label>().is_err());
    }

    #[test]
    fn structure_constant_examples() {
        let alg = lie_algebra(&generic());
        let r = alg.bracket_labels(Label::Minus, Label::Trans(3));
        assert_eq!(r, vec![(Label::Dual(3), GRat::from_int(1))]);
        let r = alg.bracket_labels(Label::Dual(5), Label::Minus);
        assert_eq!(r, vec![(Label::Trans(5), GRat::real(alg.b.entry(5).clone()))]);
        assert!(alg.verify_jacobi().unwrap());
    }

    #[test]
    fn isometry_examples() {
        let b = BForm::from_diag(vec![(-1).into(), (-2).into()]);
        let b4 = BForm::from_diag(vec![(-4).into(), (-8).into()]);
        let bs = BForm::from_diag(vec![(-2).into(), (-1).into()]);
        let b3 = BForm::from_diag(vec![(-1).into(), (-3).into()]);
        assert!(isometry_equivalent(&b, &b4));
        assert!(isometry_equivalent(&b, &bs));
        assert!(!isometry_equivalent(&b, &b3));
    }

    #[test]
    fn killing_basis_count_and_origin() {
        let ks = killing_basis(&generic());
        assert_eq!(ks.len(), 28);
        let b = b_form(&generic());
        let k = killing_field(&b, Label::Trans(2)).unwrap();
        let v = k.eval(&JetPoint::origin(9, 1));
        assert_eq!(v[3].value_at_zero(), crate::scalar::Scalar::from_int(1));
        assert!(v[0].is_zero());
    }
}

#[cfg(test)]
mod killing_tests {
    use super::*;

    fn samples() -> Vec<Sample> {
        vec![
            Sample::Jet(JetPoint {
                x_plus: Rational::new(1, 3),
                x_trans: (1..=9).map(|k| Rational::new(k as i64 - 4, 7)).collect(),
                order: 6,
            }),
            Sample::Float(FloatPoint {
                x: (0..11).map(|k| Complex64::new(0.1 * k as f64 - 0.3, 0.0)).collect(),
            }),
        ]
    }

    #[test]
    fn all_fields_are_killing() {
        let p = CWParams::from_ints(5, 2, 1, -3);
        let b = b_form(&p);
        for k in killing_basis(&p) {
            assert!(killing_verify(&b, &k, &samples(), 1e-10), "{}", k.label);
        }
    }

    #[test]
    fn non_killing_field_detected() {
        let p = CWParams::from_ints(5, 2, 1, -3);
        let b = b_form(&p);
        let mut k = killing_field(&b, Label::Trans(1)).unwrap();
        k.comps[0].clear();
        assert!(!killing_verify(&b, &k, &samples(), 1e-10));
    }

    #[test]
    fn brackets_match_with_uniform_sign() {
        let m = killing_brackets_match(&CWParams::from_ints(5, 2, 1, -3), &samples(), 1e-9).unwrap();
        assert!(m.pass);
        assert_eq!(m.sign, Some(-1));
    }
}
