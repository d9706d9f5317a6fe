//! Clifford algebras of ℝ⁹ and ℝ^{1,10}: gamma matrices, charge conjugations,
//! projectors, bilinear pairings and the formal monomial algebra of Cl(ℝ⁹).
//!
//! Convention: `vw + wv = −2 g(v, w)`, so every euclidean generator squares to −1.

use std::collections::BTreeMap;
use std::fmt;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::matrix::{dot, CMatrix, Matrix, SMatrix};
use crate::scalar::{Field, GRat, Rational, Scalar};

/// Dimension of the euclidean factor V = ℝ⁹.
pub const DIM_V: usize = 9;
/// Complex dimension of the spinor module of Cl(ℝ⁹).
pub const SPIN_V: usize = 16;
/// Complex dimension of the spinor module of Cl(ℝ^{1,10}).
pub const SPIN_W: usize = 32;

fn g(n: i64) -> GRat {
    GRat::from_int(n)
}

fn cm(rows: &[&[GRat]]) -> CMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("rectangular")
}

pub fn sigma1() -> CMatrix {
    cm(&[&[g(0), g(1)], &[g(1), g(0)]])
}

pub fn sigma2() -> CMatrix {
    let i = GRat::i();
    cm(&[&[g(0), -&i], &[i, g(0)]])
}

pub fn sigma3() -> CMatrix {
    cm(&[&[g(1), g(0)], &[g(0), g(-1)]])
}

/// `i` times an identity-shaped matrix product helper.
fn times_i(m: &CMatrix) -> CMatrix {
    m.map(|x| x.mul_i())
}

/// Left multiplication by the seven imaginary octonion units, as signed
/// permutation matrices `(row, column, sign)` with 1-based indices.
const OCTONION_ENTRIES: [[(usize, usize, i64); 8]; 7] = [
    [(1, 2, -1), (2, 1, 1), (3, 4, -1), (4, 3, 1), (5, 6, -1), (6, 5, 1), (7, 8, 1), (8, 7, -1)],
    [(1, 3, -1), (2, 4, 1), (3, 1, 1), (4, 2, -1), (5, 7, -1), (6, 8, -1), (7, 5, 1), (8, 6, 1)],
    [(1, 4, -1), (2, 3, -1), (3, 2, 1), (4, 1, 1), (5, 8, -1), (6, 7, 1), (7, 6, -1), (8, 5, 1)],
    [(1, 5, -1), (2, 6, 1), (3, 7, 1), (4, 8, 1), (5, 1, 1), (6, 2, -1), (7, 3, -1), (8, 4, -1)],
    [(1, 6, -1), (2, 5, -1), (3, 8, 1), (4, 7, -1), (5, 2, 1), (6, 1, 1), (7, 4, 1), (8, 3, -1)],
    [(1, 7, -1), (2, 8, -1), (3, 5, -1), (4, 6, 1), (5, 3, 1), (6, 4, -1), (7, 1, 1), (8, 2, 1)],
    [(1, 8, -1), (2, 7, 1), (3, 6, -1), (4, 5, -1), (5, 4, 1), (6, 3, 1), (7, 2, -1), (8, 1, 1)],
];

/// The matrices L₁…L₇ of left multiplication by imaginary octonions.
pub fn octonion_left_mults() -> Vec<CMatrix> {
    OCTONION_ENTRIES
        .iter()
        .map(|entries| {
            let mut m = CMatrix::zeros(8, 8);
            for &(r, c, s) in entries {
                m.set(r - 1, c - 1, g(s));
            }
            m
        })
        .collect()
}

/// Gamma matrices and charge conjugation of Cl(ℝ⁹) on ℂ¹⁶.
#[derive(Clone, Debug)]
pub struct CliffordV9 {
    pub gammas: Vec<CMatrix>,
    pub charge: CMatrix,
}

/// γₐ = σ₁⊗Lₐ (a = 1..7), γ₈ = −iσ₂⊗𝟙, γ₉ = −iσ₃⊗𝟙 and C_V = σ₃⊗𝟙.
pub fn build_clifford_v9() -> CliffordV9 {
    let id8 = CMatrix::identity(8);
    let mut gammas: Vec<CMatrix> =
        octonion_left_mults().iter().map(|l| sigma1().kron(l)).collect();
    gammas.push(times_i(&sigma2()).neg().kron(&id8));
    gammas.push(times_i(&sigma3()).neg().kron(&id8));
    CliffordV9 { gammas, charge: sigma3().kron(&id8) }
}

/// Index of a generator of Cl(ℝ^{1,10}) in the null basis {e₊, e₋, e₁…e₉}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Plus,
    Minus,
    /// Euclidean direction, 1-based.
    V(usize),
}

impl Gen {
    pub fn slot(self) -> usize {
        match self {
            Gen::Plus => 0,
            Gen::Minus => 1,
            Gen::V(i) => 1 + i,
        }
    }

    pub fn all(n: usize) -> Vec<Gen> {
        let mut v = vec![Gen::Plus, Gen::Minus];
        v.extend((1..=n).map(Gen::V));
        v
    }

    /// Lorentzian metric in the null basis: g(e₊, e₋) = 1, g(eᵢ, eⱼ) = δᵢⱼ.
    pub fn metric(a: Gen, b: Gen) -> i64 {
        match (a, b) {
            (Gen::Plus, Gen::Minus) | (Gen::Minus, Gen::Plus) => 1,
            (Gen::V(i), Gen::V(j)) if i == j => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Plus => write!(f, "+"),
            Gen::Minus => write!(f, "-"),
            Gen::V(i) => write!(f, "{i}"),
        }
    }
}

/// Gamma matrices of a Lorentzian space ℝ^{1,1} ⊕ V in the null basis, with
/// the chirality-type operator σ and (for V = ℝ⁹) the charge conjugation C_W.
#[derive(Clone, Debug)]
pub struct CliffordRepW {
    /// Indexed by [`Gen::slot`].
    pub generators: Vec<SMatrix>,
    pub sigma: SMatrix,
    pub charge_w: SMatrix,
    pub n: usize,
}

impl CliffordRepW {
    pub fn gen(&self, g: Gen) -> &SMatrix {
        &self.generators[g.slot()]
    }

    pub fn dim(&self) -> usize {
        self.sigma.rows()
    }

    pub fn half(&self) -> usize {
        self.dim() / 2
    }
}

/// γ₊ = √2·E₁₂ and γ₋ = −√2·E₂₁, i.e. (iσ₂ ± σ₁)/√2.
pub fn gamma_plus_2x2() -> SMatrix {
    let mut m = SMatrix::zeros(2, 2);
    m.set(0, 1, Scalar::sqrt2());
    m
}

pub fn gamma_minus_2x2() -> SMatrix {
    let mut m = SMatrix::zeros(2, 2);
    m.set(1, 0, -Scalar::sqrt2());
    m
}

/// σ = ½[γ₊, γ₋] = −σ₃.
pub fn sigma_2x2() -> SMatrix {
    sigma3().neg().map(|x| Scalar::from_gauss(x.clone()))
}

pub fn to_s(m: &CMatrix) -> SMatrix {
    m.map(|x| Scalar::from_gauss(x.clone()))
}

/// Γ₊ = γ₊⊗𝟙, Γ₋ = γ₋⊗𝟙, Γᵢ = σ⊗γᵢ for arbitrary euclidean gammas.
pub fn build_clifford_lorentz(gammas: &[CMatrix], charge_v: Option<&CMatrix>) -> CliffordRepW {
    let m = gammas[0].rows();
    let id = SMatrix::identity(m);
    let mut generators = vec![gamma_plus_2x2().kron(&id), gamma_minus_2x2().kron(&id)];
    let sigma = sigma_2x2();
    generators.extend(gammas.iter().map(|gm| sigma.kron(&to_s(gm))));
    let charge_w = match charge_v {
        Some(c) => to_s(&sigma2().kron(c)),
        None => SMatrix::zeros(2 * m, 2 * m),
    };
    CliffordRepW { generators, sigma: sigma.kron(&id), charge_w, n: gammas.len() }
}

/// The eleven-dimensional representation built from Cl(ℝ⁹), with C_W = σ₂⊗C_V.
pub fn build_clifford_w11(v9: &CliffordV9) -> CliffordRepW {
    build_clifford_lorentz(&v9.gammas, Some(&v9.charge))
}

/// Shared, lazily built copies of the two standard representations.
pub static V9: Lazy<CliffordV9> = Lazy::new(build_clifford_v9);
pub static W11: Lazy<CliffordRepW> = Lazy::new(|| build_clifford_w11(&V9));

/// Ordered product of generators; duplicate indices are rejected.
pub fn monomial_matrix(rep: &CliffordRepW, indices: &[Gen]) -> Result<SMatrix> {
    for (k, a) in indices.iter().enumerate() {
        if indices[..k].contains(a) {
            return Err(Error::DuplicateIndex(a.to_string()));
        }
        if let Gen::V(i) = a {
            if *i == 0 || *i > rep.n {
                return Err(Error::UnknownLabel(format!("generator {i}")));
            }
        }
    }
    let mut m = SMatrix::identity(rep.dim());
    for a in indices {
        m = m.mul(rep.gen(*a));
    }
    Ok(m)
}

/// Ordered product Γ_I of euclidean generators given by 1-based indices.
pub fn gamma_w(indices: &[usize]) -> SMatrix {
    let gens: Vec<Gen> = indices.iter().map(|&i| Gen::V(i)).collect();
    monomial_matrix(&W11, &gens).expect("valid euclidean monomial")
}

/// Δ_ℓ = −(−1)^{ℓ(ℓ+1)/2}: C_W(ξ, Aη) = Δ_ℓ C_W(η, Aξ) for grade-ℓ monomials A.
pub fn symmetry_sign(grade: usize) -> i64 {
    if (grade * (grade + 1) / 2) % 2 == 0 {
        -1
    } else {
        1
    }
}

/// ξᵗ·C·A·η.
pub fn bilinear<F: Field>(c: &Matrix<F>, xi: &[F], a: &Matrix<F>, eta: &[F]) -> Result<F> {
    let n = c.rows();
    if !c.is_square() || a.rows() != n || !a.is_square() || xi.len() != n || eta.len() != n {
        return Err(Error::Dimension(format!(
            "bilinear: C {}x{}, A {}x{}, |ξ| = {}, |η| = {}",
            c.rows(),
            c.cols(),
            a.rows(),
            a.cols(),
            xi.len(),
            eta.len()
        )));
    }
    let aeta = a.mul_vec(eta);
    let caeta = c.mul_vec(&aeta);
    Ok(dot(xi, &caeta))
}

/// C_W(ξ, η) on 32-component spinors.
pub fn charge_pairing(xi: &[Scalar], eta: &[Scalar]) -> Scalar {
    dot(xi, &W11.charge_w.mul_vec(eta))
}

/// A monomial γ_I of Cl(ℝ⁹) encoded as a bitmask over {1..9} (bit i−1 for γᵢ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliffordMonomial(pub u16);

impl CliffordMonomial {
    pub const ONE: CliffordMonomial = CliffordMonomial(0);

    /// Monomial from strictly ascending 1-based indices.
    pub fn new(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u16;
        let mut last = 0;
        for &i in indices {
            if i == 0 || i > DIM_V {
                return Err(Error::UnknownLabel(format!("Clifford index {i}")));
            }
            if i <= last {
                return Err(Error::DuplicateIndex(format!(
                    "indices must be strictly ascending: {indices:?}"
                )));
            }
            mask |= 1 << (i - 1);
            last = i;
        }
        Ok(CliffordMonomial(mask))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (1..=DIM_V).filter(|i| self.0 & (1 << (i - 1)) != 0).collect()
    }

    /// γ_a γ_b = sign · γ_{a△b}.
    pub fn product(self, other: CliffordMonomial) -> (i64, CliffordMonomial) {
        let (a, b) = (self.0, other.0);
        let mut swaps = 0u32;
        for j in 0..DIM_V as u32 {
            if b & (1 << j) != 0 {
                let above = a & !((1u16 << (j + 1)) - 1);
                swaps += above.count_ones();
            }
        }
        swaps += (a & b).count_ones();
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        (sign, CliffordMonomial(a ^ b))
    }
}

impl fmt::Display for CliffordMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let s: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "γ{}", s.join(""))
    }
}

/// A monomial matrix with one nonzero entry per row, equal to a power of i.
#[derive(Clone, Debug)]
struct PhasePerm {
    col: Vec<usize>,
    phase: Vec<u8>,
}

impl PhasePerm {
    fn from_matrix(m: &CMatrix) -> Self {
        let mut col = Vec::with_capacity(m.rows());
        let mut phase = Vec::with_capacity(m.rows());
        for r in 0..m.rows() {
            let (c, v) = (0..m.cols())
                .map(|c| (c, m.get(r, c)))
                .find(|(_, v)| !v.is_zero())
                .expect("monomial row");
            col.push(c);
            phase.push(match (v.re.to_f64() as i64, v.im.to_f64() as i64) {
                (1, 0) => 0,
                (0, 1) => 1,
                (-1, 0) => 2,
                (0, -1) => 3,
                _ => panic!("entry is not a unit"),
            });
        }
        PhasePerm { col, phase }
    }

    fn identity(n: usize) -> Self {
        PhasePerm { col: (0..n).collect(), phase: vec![0; n] }
    }

    fn mul(&self, o: &PhasePerm) -> PhasePerm {
        let col = self.col.iter().map(|&c| o.col[c]).collect();
        let phase = self.col.iter().zip(&self.phase).map(|(&c, &p)| (p + o.phase[c]) % 4).collect();
        PhasePerm { col, phase }
    }
}

fn unit_power(p: u8) -> GRat {
    match p % 4 {
        0 => g(1),
        1 => GRat::i(),
        2 => g(-1),
        _ => -GRat::i(),
    }
}

/// All 512 monomial matrices γ_I of Cl(ℝ⁹), indexed by bitmask.
static MONOMIAL_PERMS: Lazy<Vec<PhasePerm>> = Lazy::new(|| {
    let gens: Vec<PhasePerm> = V9.gammas.iter().map(PhasePerm::from_matrix).collect();
    (0u16..512)
        .map(|mask| {
            let mut p = PhasePerm::identity(SPIN_V);
            for (j, gm) in gens.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    p = p.mul(gm);
                }
            }
            p
        })
        .collect()
});

/// Formal element of Cl(ℝ⁹): Gaussian-rational combination of monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CliffordElement {
    terms: BTreeMap<CliffordMonomial, GRat>,
}

impl CliffordElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: GRat) -> Self {
        Self::monomial(CliffordMonomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::scalar(g(1))
    }

    pub fn monomial(m: CliffordMonomial, c: GRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CliffordElement { terms }
    }

    /// γ_I for strictly ascending 1-based indices.
    pub fn gamma(indices: &[usize]) -> Self {
        Self::monomial(CliffordMonomial::new(indices).expect("ascending indices"), g(1))
    }

    /// The vector eᵢ ∈ V ⊂ Cl(V).
    pub fn vector(i: usize) -> Self {
        Self::gamma(&[i])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CliffordMonomial, &GRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: CliffordMonomial) -> GRat {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: CliffordMonomial, c: &GRat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&g(-1))
    }

    pub fn scale(&self, s: &GRat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        CliffordElement { terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let (s, m) = ma.product(*mb);
                let c = ca * cb;
                r.add_term(m, &if s < 0 { -c } else { c });
            }
        }
        r
    }

    /// The bar involution: negates odd-grade terms.
    pub fn bar(&self) -> Self {
        CliffordElement {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if m.grade() % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Projection onto the terms of the given grade.
    pub fn grade_part(&self, k: usize) -> Self {
        CliffordElement {
            terms: self.terms.iter().filter(|(m, _)| m.grade() == k).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    pub fn max_grade(&self) -> usize {
        self.terms.keys().map(|m| m.grade()).max().unwrap_or(0)
    }

    /// Matrix realization on ℂ¹⁶ via the gammas of [`build_clifford_v9`].
    pub fn matrix_of(&self) -> CMatrix {
        let mut out = CMatrix::zeros(SPIN_V, SPIN_V);
        for (m, c) in &self.terms {
            let p = &MONOMIAL_PERMS[m.0 as usize];
            for r in 0..SPIN_V {
                let v = c * &unit_power(p.phase[r]);
                let cur = out.get(r, p.col[r]).clone();
                out.set(r, p.col[r], &cur + &v);
            }
        }
        out
    }

    /// Embedding of Cl(V) into Cl(W) on ℂ³²: block diag(bar(a), a).
    pub fn embed_w(&self) -> SMatrix {
        let z = SMatrix::zeros(SPIN_V, SPIN_V);
        SMatrix::from_blocks(&to_s(&self.bar().matrix_of()), &z, &z, &to_s(&self.matrix_of()))
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}){m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Which subspace a projector cuts out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectorKind {
    SigmaPlus,
    SigmaMinus,
    XPlus(Vec<usize>),
    XMinus(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct Projector {
    pub kind: ProjectorKind,
    pub matrix: SMatrix,
}

/// The phase ι with (ι·γ_I)² = 𝟙: 1 when γ_I² = 𝟙, i when γ_I² = −𝟙.
pub fn iota(grade: usize) -> GRat {
    // γ_I² = (−1)^{k(k+1)/2} for euclidean generators squaring to −1.
    if (grade * (grade + 1) / 2) % 2 == 0 {
        g(1)
    } else {
        GRat::i()
    }
}

/// X^±_I = ½(1 ± ι γ_I) as a formal element of Cl(ℝ⁹).
pub fn x_projector_element(indices: &[usize], plus: bool) -> CliffordElement {
    let half = GRat::frac(1, 2);
    let s = if plus { half.clone() } else { -&half };
    let k = indices.len();
    CliffordElement::scalar(half).add(&CliffordElement::gamma(indices).scale(&(&s * &iota(k))))
}

/// X^±_I on ℂ³², acting on both σ-sectors through the embedding of Cl(V).
pub fn x_projector(indices: &[usize], plus: bool) -> Projector {
    let e = x_projector_element(indices, plus);
    let kind = if plus {
        ProjectorKind::XPlus(indices.to_vec())
    } else {
        ProjectorKind::XMinus(indices.to_vec())
    };
    Projector { kind, matrix: e.embed_w() }
}

/// σ± = ½(𝟙 ± σ).
pub fn sigma_projector(plus: bool) -> Projector {
    let id = SMatrix::identity(SPIN_W);
    let half = Scalar::frac(1, 2);
    let s = if plus { W11.sigma.clone() } else { W11.sigma.neg() };
    Projector {
        kind: if plus { ProjectorKind::SigmaPlus } else { ProjectorKind::SigmaMinus },
        matrix: id.add(&s).scale(&half),
    }
}

/// Euclidean gammas of Cl(ℝ⁵) on ℂ⁴ built from Pauli tensor products:
/// iσ₁⊗𝟙, iσ₂⊗𝟙, iσ₃⊗σ₁, iσ₃⊗σ₂, iσ₃⊗σ₃. The first four generate Cl(ℝ⁴).
pub fn build_clifford_r5() -> Vec<CMatrix> {
    let id2 = CMatrix::identity(2);
    let is1 = times_i(&sigma1());
    let is2 = times_i(&sigma2());
    let is3 = times_i(&sigma3());
    vec![
        is1.kron(&id2),
        is2.kron(&id2),
        is3.kron(&sigma1()),
        is3.kron(&sigma2()),
        is3.kron(&sigma3()),
    ]
}

/// Euclidean gammas of Cl(ℝ⁷) on ℂ⁸: the octonion matrices L₁…L₇.
pub fn build_clifford_r7() -> Vec<CMatrix> {
    octonion_left_mults()
}

/// Ordered product of a list of matrices (identity for an empty list).
pub fn product_of(ms: &[&CMatrix], n: usize) -> CMatrix {
    let mut p = CMatrix::identity(n);
    for m in ms {
        p = p.mul(m);
    }
    p
}

/// Checks γᵢγⱼ + γⱼγᵢ = −2δᵢⱼ𝟙 for a list of euclidean gammas.
pub fn euclidean_relations_hold(gammas: &[CMatrix]) -> bool {
    let n = gammas[0].rows();
    let minus_two = CMatrix::identity(n).scale(&g(-2));
    let zero = CMatrix::zeros(n, n);
    for i in 0..gammas.len() {
        for j in i..gammas.len() {
            let ac = gammas[i].anticommutator(&gammas[j]);
            if ac != if i == j { minus_two.clone() } else { zero.clone() } {
                return false;
            }
        }
    }
    true
}

/// Checks Γ_μΓ_ν + Γ_νΓ_μ = −2 g_{μν} 𝟙 over the null basis.
pub fn lorentz_relations_hold(rep: &CliffordRepW) -> bool {
    let gens = Gen::all(rep.n);
    let id = SMatrix::identity(rep.dim());
    for (k, &a) in gens.iter().enumerate() {
        for &b in &gens[k..] {
            let expect = id.scale(&Scalar::from_int(-2 * Gen::metric(a, b)));
            if rep.gen(a).anticommutator(rep.gen(b)) != expect {
                return false;
            }
        }
    }
    true
}

/// The sign τ with Γ_μᵗ C = τ C Γ_μ for every generator, if uniform.
pub fn charge_intertwining_sign(rep: &CliffordRepW) -> Option<i64> {
    let c = &rep.charge_w;
    let mut sign = None;
    for g in Gen::all(rep.n) {
        let lhs = rep.gen(g).transpose().mul(c);
        let rhs = c.mul(rep.gen(g));
        let s = if lhs == rhs {
            1
        } else if lhs == rhs.neg() {
            -1
        } else {
            return None;
        };
        match sign {
            None => sign = Some(s),
            Some(t) if t != s => return None,
            _ => {}
        }
    }
    sign
}

/// Real rational helper used across modules.
pub fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octonion_units_generate_cl7() {
        let ls = octonion_left_mults();
        assert_eq!(*ls[0].get(1, 0), g(1));
        assert_eq!(*ls[0].get(0, 1), g(-1));
        for l in &ls {
            assert_eq!(l.transpose(), l.neg());
        }
        assert!(euclidean_relations_hold(&ls));
    }

    #[test]
    fn v9_relations_and_charge() {
        let v = build_clifford_v9();
        assert!(euclidean_relations_hold(&v.gammas));
        assert_eq!(v.charge.transpose(), v.charge);
        for gm in &v.gammas {
            assert_eq!(gm.transpose().mul(&v.charge), v.charge.mul(gm));
        }
        let diag9: Vec<GRat> = (0..16).map(|k| v.gammas[8].get(k, k).clone()).collect();
        assert_eq!(diag9[0], -GRat::i());
        assert_eq!(diag9[15], GRat::i());
    }

    #[test]
    fn w11_relations() {
        assert!(lorentz_relations_hold(&W11));
        let s = &W11.sigma;
        assert_eq!(s.mul(s), SMatrix::identity(32));
        let half = Scalar::frac(1, 2);
        assert_eq!(W11.gen(Gen::Plus).commutator(W11.gen(Gen::Minus)).scale(&half), *s);
    }

    #[test]
    fn charge_w_is_antisymmetric_and_anti_intertwines() {
        let c = &W11.charge_w;
        assert_eq!(c.transpose(), c.neg());
        assert_eq!(charge_intertwining_sign(&W11), Some(-1));
    }

    #[test]
    fn monomial_sign_rules() {
        let m123 = CliffordMonomial::new(&[1, 2, 3]).unwrap();
        assert_eq!(m123.product(m123), (1, CliffordMonomial::ONE));
        let m1 = CliffordMonomial::new(&[1]).unwrap();
        assert_eq!(m1.product(m1), (-1, CliffordMonomial::ONE));
        let m2 = CliffordMonomial::new(&[2]).unwrap();
        let m12 = CliffordMonomial::new(&[1, 2]).unwrap();
        assert_eq!(m2.product(m1), (-1, m12));
        assert!(CliffordMonomial::new(&[2, 1]).is_err());
    }

    #[test]
    fn projectors_are_complementary() {
        let p = x_projector(&[1, 2, 3, 4], true).matrix;
        let m = x_projector(&[1, 2, 3, 4], false).matrix;
        assert_eq!(p.mul(&p), p);
        assert_eq!(p.add(&m), SMatrix::identity(32));
        assert!(p.mul(&m).is_zero());
        let x23 = x_projector(&[2, 3], true).matrix;
        assert_eq!(x23.mul(&x23), x23);
        let sp = sigma_projector(true).matrix;
        assert_eq!(sp.mul(&sp), sp);
    }

    #[test]
    fn embedding_matches_w_generators() {
        for i in 1..=9 {
            assert_eq!(CliffordElement::vector(i).embed_w(), *W11.gen(Gen::V(i)));
        }
    }

    #[test]
    fn symmetry_signs() {
        assert_eq!(
            (0..6).map(symmetry_sign).collect::<Vec<_>>(),
            vec![-1, 1, 1, -1, -1, 1]
        );
    }

    #[test]
    fn bilinear_reads_entries() {
        let v = build_clifford_v9();
        let mut e1 = vec![g(0); 16];
        e1[0] = g(1);
        assert_eq!(bilinear(&v.charge, &e1, &v.gammas[8], &e1).unwrap(), -GRat::i());
        assert!(bilinear(&v.charge, &e1[..3], &v.gammas[8], &e1).is_err());
    }

    #[test]
    fn small_cliffords() {
        assert!(euclidean_relations_hold(&build_clifford_r5()));
        assert!(euclidean_relations_hold(&build_clifford_r7()));
        let rep = build_clifford_lorentz(&build_clifford_r5()[..4], None);
        assert!(lorentz_relations_hold(&rep));
    }
}
