//! The geometric superalgebra of the connection family: even action on the
//! odd part, odd-odd brackets and the graded Jacobi checks.

use std::collections::HashMap;

use nalgebra::DVector;
use num_complex::Complex64;
use once_cell::sync::Lazy;

use crate::cahen_wallach::{
    b_form, connection_blocks, decomposability, killing_brackets_match, killing_fields_for, nabla_lower, pairs_within, standard_labels, BForm,
    CWLieAlgebra, CWParams, KillingField, Label, Sample,
};
use crate::clifford_core::{gamma_w, Gen, W11};
use crate::error::{Error, Result};
use crate::matrix::{span_basis, vec_is_zero, CMatrix, SMatrix};
use crate::scalar::{GRat, Rational, Scalar};
use crate::series::{Coord, FloatPoint, JetPoint, Ring};
use crate::spinor_connection::{
    frame_gamma_apply, levi_civita, parallel_spinor_eval, parallel_spinor_jet, to_dm_s, vadd, vscale, vsub, x1234,
    ConnectionData, ConnectionPair, SpinorPoint,
};

/// The 28 labels of the Killing basis used by the superalgebra.
pub fn superalgebra_labels() -> Vec<Label> {
    standard_labels(9, &pairs_within(&connection_blocks()))
}

/// Global sign ε with [K_a, K_b] = ε·K_{[e_a, e_b]}, fixed by comparing vector
/// field commutators with the structure constants at a generic point.
pub static GLOBAL_SIGN: Lazy<i64> = Lazy::new(|| {
    let p = CWParams::from_ints(5, 2, 1, -3);
    let sample = Sample::Jet(JetPoint {
        x_plus: Rational::new(1, 3),
        x_trans: (1..=9).map(|k| Rational::new(2 * k as i64 - 9, 7)).collect(),
        order: 4,
    });
    let m = killing_brackets_match(&p, &[sample], 0.0).expect("family roots are rational");
    match (m.pass, m.sign) {
        (true, Some(s)) => s,
        _ => panic!("Killing commutators do not match the structure constants with a uniform sign"),
    }
});

/// A combination of Killing fields over a label list.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenElement {
    pub labels: Vec<Label>,
    pub coeffs: Vec<Scalar>,
}

impl EvenElement {
    pub fn zero(labels: &[Label]) -> Self {
        EvenElement { labels: labels.to_vec(), coeffs: vec![Scalar::default(); labels.len()] }
    }

    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.coeffs)
    }

    pub fn coeff(&self, l: Label) -> Scalar {
        self.labels.iter().position(|&x| x == l).map(|k| self.coeffs[k].clone()).unwrap_or_default()
    }
}

/// Constant data (ξ₁⁰, ξ₂⁰) of a parallel spinor: σ₋ and σ₊ sectors.
#[derive(Clone, Debug, PartialEq)]
pub struct OddElement {
    pub xi1: Vec<Scalar>,
    pub xi2: Vec<Scalar>,
}

impl OddElement {
    pub fn from_spinor(v: &[Scalar]) -> Self {
        let m = v.len() / 2;
        OddElement { xi1: v[..m].to_vec(), xi2: v[m..].to_vec() }
    }

    pub fn to_spinor(&self) -> Vec<Scalar> {
        self.xi1.iter().chain(&self.xi2).cloned().collect()
    }

    /// X⁻₁₂₃₄ ξ₂ = 0.
    pub fn satisfies_invariants(&self) -> bool {
        let xm = x1234(false).matrix_of();
        let xs = crate::clifford_core::to_s(&xm);
        self.xi1.len() == 16 && self.xi2.len() == 16 && vec_is_zero(&xs.mul_vec(&self.xi2))
    }
}

/// Which route produced a residual decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Exact linear constraint on the parameters (generic odd basis).
    Linear,
    /// Exact trilinear coefficient check on the computed odd basis.
    Direct,
}

/// Bilinear forms (32×32) of the odd-odd bracket, before parameter factors.
struct RawForms {
    plus: SMatrix,
    minus: SMatrix,
    /// C(ξ₁, Γᵢη₂) + C(η₁, Γᵢξ₂) for i = 1..9.
    trans: Vec<SMatrix>,
    /// Same with Γ₁₂₅Γᵢ.
    dual: Vec<SMatrix>,
    /// C(ξ₂, Γ₊Γ₅η₂), C(ξ₂, Γ₊Γ₁₂₃₄₅η₂) and C(ξ₂, Γ₊Γ₁₂₅ᵢⱼη₂) by rotation label.
    rot: HashMap<Label, SMatrix>,
}

fn projector_sector(upper: bool) -> SMatrix {
    let mut p = SMatrix::zeros(32, 32);
    let off = if upper { 0 } else { 16 };
    for k in 0..16 {
        p.set(off + k, off + k, Scalar::from_int(1));
    }
    p
}

/// Matrix F with ξᵗFη = C(P_aξ, A P_bη).
fn pairing(a_upper: bool, m: &SMatrix, b_upper: bool) -> SMatrix {
    projector_sector(a_upper).transpose().mul(&W11.charge_w).mul(m).mul(&projector_sector(b_upper))
}

fn symmetrized_cross(m: &SMatrix) -> SMatrix {
    let f = pairing(true, m, false);
    f.add(&f.transpose())
}

static RAW: Lazy<RawForms> = Lazy::new(|| {
    let gp = W11.gen(Gen::Plus).clone();
    let gm = W11.gen(Gen::Minus).clone();
    let g125 = gamma_w(&[1, 2, 5]);
    let trans = (1..=9).map(|i| symmetrized_cross(&gamma_w(&[i]))).collect();
    let dual = (1..=9).map(|i| symmetrized_cross(&g125.mul(&gamma_w(&[i])))).collect();
    let mut rot = HashMap::new();
    rot.insert(Label::Rot(1, 2), pairing(false, &gp.mul(&gamma_w(&[5])), false));
    rot.insert(Label::Rot(3, 4), pairing(false, &gp.mul(&gamma_w(&[1, 2, 3, 4, 5])), false));
    for (i, j) in pairs_within(&[vec![6, 7, 8, 9]]) {
        rot.insert(Label::Rot(i, j), pairing(false, &gp.mul(&g125).mul(&gamma_w(&[i, j])), false));
    }
    RawForms { plus: pairing(true, &gm, true), minus: pairing(false, &gp, false), trans, dual, rot }
});

/// iλ for the rotation coefficient: λ₁ for (12), λ₃ for (34), λ₆ for (ij) ⊂ {6..9}.
fn rot_root_index(l: Label) -> Option<usize> {
    match l {
        Label::Rot(1, 2) => Some(1),
        Label::Rot(3, 4) => Some(3),
        Label::Rot(i, j) if i >= 6 && j >= 6 => Some(6),
        _ => None,
    }
}

/// The 32×32 form of the odd-odd bracket component along a label.
pub fn oddodd_form(b: &BForm, label: Label) -> Result<SMatrix> {
    let raw = &*RAW;
    let i_s = Scalar::i();
    Ok(match label {
        Label::Plus => raw.plus.clone(),
        Label::Minus => raw.minus.clone(),
        Label::Trans(i) => raw.trans[i - 1].clone(),
        Label::Dual(i) => {
            let l = b.lambda(i)?;
            if l.is_zero() {
                return Err(Error::UndefinedBracket(format!("{{,}}^{i}* with λ{i} = 0")));
            }
            let c = &GRat::i() / &l;
            raw.dual[i - 1].scale(&Scalar::from_gauss(c))
        }
        Label::Rot(..) => {
            let k = rot_root_index(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            let c = &i_s * &Scalar::from_gauss(b.lambda(k)?);
            raw.rot[&label].scale(&c)
        }
    })
}

/// The B⁻¹ form of the V* component: (1/λᵢ²)[C(ξ₁, s(eᵢ)η₂) + C(η₁, s(eᵢ)ξ₂)].
pub fn dual_form_via_inverse(data: &ConnectionData, i: usize) -> Result<SMatrix> {
    let l2 = data.b.entry(i);
    if l2.is_zero() {
        return Err(Error::UndefinedBracket(format!("B⁻¹ with λ{i} = 0")));
    }
    let mut s = SMatrix::zeros(32, 32);
    s.set_block(16, 16, &crate::clifford_core::to_s(&data.s_matrix(i)));
    let f = symmetrized_cross(&s);
    Ok(f.scale(&Scalar::from_rational(l2.recip().expect("nonzero"))))
}

/// Where the odd-odd brackets of a [`Superalgebra`] come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketSource {
    /// The closed forms of [`oddodd_form`]; used when the σ₊ kernel lies in X⁺₁₂₃₄.
    ClosedForm,
    /// Read off the Dirac current by [`current_forms`].
    DiracCurrent,
}

/// Sign relating the basis labels to the coordinate Killing fields: e₊, e₋
/// and eᵢ* enter with a minus sign.
pub fn theta(l: Label) -> i64 {
    match l {
        Label::Plus | Label::Minus | Label::Dual(_) => -1,
        _ => 1,
    }
}

fn symmetric_part(m: &SMatrix) -> SMatrix {
    m.add(&m.transpose()).scale(&Scalar::frac(1, 2))
}

/// Γ^μ at the origin, indexed by coordinate slot: Γ^+ = Γ₋, Γ^− = Γ₊, Γ^i = Γᵢ.
fn raised_gamma_at_origin(data: &ConnectionData, slot: usize) -> SMatrix {
    match slot {
        0 => data.rep.gen(Gen::Minus).clone(),
        1 => data.rep.gen(Gen::Plus).clone(),
        s => data.rep.gen(Gen::V(s - 1)).clone(),
    }
}

/// Odd-odd forms determined by the Dirac current V^μ = C(ψ, Γ^μψ) of the
/// parallel spinor ψ with ψ(0) = ξ: {ξ, ξ} is the Killing field with the same
/// value and first derivatives as V at the origin. Since ∂_νψ(0) = −ρ(e_ν)ξ
/// and Γ^μ is constant to first order there, both sides are bilinear in ξ.
/// Components of V along the coordinate slots in `dropped` (and derivatives
/// in those directions) are ignored. Errors if the remaining components fail
/// to match a combination of the given Killing fields.
pub fn current_forms(
    data: &ConnectionData,
    labels: &[Label],
    odd: &OddBasis,
    dropped: &[usize],
) -> Result<Vec<SMatrix>> {
    let n = data.n() + 2;
    let origin = JetPoint::origin(data.n(), 2);
    let fields = killing_fields_for(&data.b, labels)?;
    let columns: Vec<Vec<Scalar>> = fields
        .iter()
        .map(|k| {
            let mut col: Vec<Scalar> = k.eval(&origin).iter().map(|s| s.value_at_zero()).collect();
            col.extend(k.jacobian(&origin).iter().flatten().map(|s| s.value_at_zero()));
            col
        })
        .collect();
    // row r: μ for values, n + μ·n + ν for ∂_ν V^μ
    let slots = |r: usize| if r < n { (r, r) } else { ((r - n) / n, (r - n) % n) };
    let kept: Vec<usize> =
        (0..n + n * n).filter(|&r| !dropped.contains(&slots(r).0) && !dropped.contains(&slots(r).1)).collect();
    let m = SMatrix::from_fn(kept.len(), labels.len(), |r, c| columns[c][kept[r]].clone());
    let (_, pivots) = m.transpose().rref();
    if pivots.len() != labels.len() {
        return Err(Error::Precondition("Killing fields are dependent at the origin".into()));
    }
    let sub = SMatrix::from_fn(pivots.len(), labels.len(), |r, c| m.get(pivots[r], c).clone());
    let p = sub.inverse().expect("pivot rows are independent");

    let b = odd.matrix();
    let bt = b.transpose();
    let c = &data.rep.charge_w;
    let slot_label = |s: usize| match s {
        0 => Label::Plus,
        1 => Label::Minus,
        k => Label::Trans(k - 1),
    };
    let a: Vec<SMatrix> = (0..n).map(|s| data.rho(slot_label(s)).map(|r| r.neg())).collect::<Result<_>>()?;
    let cg: Vec<SMatrix> = (0..n).map(|mu| c.mul(&raised_gamma_at_origin(data, mu))).collect();
    let row_form = |r: usize| -> SMatrix {
        let g = if r < n {
            cg[r].clone()
        } else {
            let (mu, nu) = slots(r);
            a[nu].transpose().mul(&cg[mu]).add(&cg[mu].mul(&a[nu]))
        };
        bt.mul(&symmetric_part(&g).mul(&b))
    };
    let rows: Vec<SMatrix> = kept.iter().map(|&r| row_form(r)).collect();
    let d = odd.dim();
    let mut forms = Vec::with_capacity(labels.len());
    for k in 0..labels.len() {
        let mut f = SMatrix::zeros(d, d);
        for (j, &piv) in pivots.iter().enumerate() {
            f.add_scaled(&rows[piv], p.get(k, j));
        }
        forms.push(f);
    }
    for (r, g) in rows.iter().enumerate() {
        let mut recon = SMatrix::zeros(d, d);
        for (k, f) in forms.iter().enumerate() {
            recon.add_scaled(f, m.get(r, k));
        }
        if &recon != g {
            return Err(Error::Precondition("the Dirac current is not a combination of the Killing fields".into()));
        }
    }
    Ok(forms
        .into_iter()
        .zip(labels)
        .map(|(f, &l)| f.scale(&Scalar::from_int(theta(l))))
        .collect())
}

/// Largest deviation, relative to |V|, between the Dirac current V of the
/// parallel spinor through ξ (odd coordinates) and Σ θ_a {ξ, ξ}ᵃ K_a at a
/// float point.
pub fn dirac_current_deviation(sa: &Superalgebra, xi: &[Scalar], x: &FloatPoint) -> Result<f64> {
    let data = &sa.data;
    let fields = killing_fields_for(&data.b, sa.labels())?;
    let psi = parallel_spinor_eval(data, &sa.table.odd.combine(xi), x);
    let c = to_dm_s(&data.rep.charge_w);
    let psi_v = DVector::from_vec(psi.clone());
    let current: Vec<Complex64> = (0..data.n() + 2)
        .map(|mu| {
            let g = DVector::from_vec(frame_gamma_apply(data, x, mu, &psi, true));
            (psi_v.transpose() * &c * g)[(0, 0)]
        })
        .collect();
    let mut field = vec![Complex64::new(0.0, 0.0); data.n() + 2];
    for ((cf, k), &l) in sa.bracket(xi, xi).coeffs.iter().zip(&fields).zip(sa.labels()) {
        let w = cf.to_c64() * theta(l) as f64;
        for (f, v) in field.iter_mut().zip(k.eval(x)) {
            *f += w * v;
        }
    }
    let norm = current.iter().map(|z| z.norm()).fold(1.0, f64::max);
    Ok(current.iter().zip(&field).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / norm)
}

/// Coordinates with respect to a basis of a subspace of ℂ³².
#[derive(Clone, Debug)]
pub struct OddBasis {
    pub vectors: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    inv: SMatrix,
}

impl OddBasis {
    pub fn new(vectors: Vec<Vec<Scalar>>) -> Self {
        let dim = vectors.first().map_or(0, |v| v.len());
        let b = SMatrix::from_columns(dim, &vectors);
        let (_, pivots) = b.transpose().rref();
        let sub = SMatrix::from_fn(pivots.len(), vectors.len(), |r, c| vectors[c][pivots[r]].clone());
        let inv = sub.inverse().expect("basis vectors are independent");
        OddBasis { vectors, pivots, inv }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn matrix(&self) -> SMatrix {
        SMatrix::from_columns(self.vectors[0].len(), &self.vectors)
    }

    /// Coordinates of v; error if v is outside the span.
    pub fn coords(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let sub: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let c = self.inv.mul_vec(&sub);
        if self.combine(&c) != v {
            return Err(Error::Precondition("vector leaves the odd space".into()));
        }
        Ok(c)
    }

    pub fn combine(&self, c: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::default(); self.vectors[0].len()];
        for (x, v) in c.iter().zip(&self.vectors) {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(v) {
                if !y.is_zero() {
                    *o = &*o + &(x * y);
                }
            }
        }
        out
    }

    /// Matrix of a 32×32 operator preserving the span.
    pub fn restrict(&self, op: &SMatrix) -> Result<SMatrix> {
        let cols: Vec<Vec<Scalar>> =
            self.vectors.iter().map(|v| self.coords(&op.mul_vec(v))).collect::<Result<_>>()?;
        Ok(SMatrix::from_columns(self.dim(), &cols))
    }

    /// Gram matrix Bᵗ F B of a bilinear form.
    pub fn pull_back(&self, f: &SMatrix) -> SMatrix {
        let b = self.matrix();
        b.transpose().mul(&f.mul(&b))
    }
}

/// Bracket data of the superalgebra: even structure constants, the even
/// action on the odd part and the odd-odd forms, all in a fixed odd basis.
#[derive(Clone, Debug)]
pub struct BracketTable {
    pub alg: CWLieAlgebra,
    pub sign: i64,
    pub odd: OddBasis,
    /// L_a = −ρ(e_a) restricted to the odd part, one per label.
    pub actions: Vec<SMatrix>,
    /// Symmetric Gram matrix of {·,·}^a, one per label.
    pub forms: Vec<SMatrix>,
}

/// A geometric superalgebra at one parameter point.
#[derive(Clone, Debug)]
pub struct Superalgebra {
    pub params: CWParams,
    pub data: ConnectionData,
    pub table: BracketTable,
    /// True when directions with λᵢ = 0 were removed.
    pub reduced: bool,
    pub source: BracketSource,
}

/// Labels of the reduced algebra: drop i, i* and rotations touching λᵢ = 0.
pub fn reduced_labels(b: &BForm) -> Vec<Label> {
    restrict_labels(b, superalgebra_labels())
}

fn restrict_labels(b: &BForm, labels: Vec<Label>) -> Vec<Label> {
    let zero = |i: usize| b.entry(i).is_zero();
    labels
        .into_iter()
        .filter(|l| match *l {
            Label::Trans(i) | Label::Dual(i) => !zero(i),
            Label::Rot(i, j) => !zero(i) && !zero(j),
            _ => true,
        })
        .collect()
}

/// The generic odd basis: the σ₋ sector and X⁺₁₂₃₄ of the σ₊ sector.
pub fn generic_odd_vectors() -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = (0..16)
        .map(|k| {
            let mut v = vec![Scalar::default(); 32];
            v[k] = Scalar::from_int(1);
            v
        })
        .collect();
    let xp = x1234(true).matrix_of();
    let cols: Vec<Vec<GRat>> = (0..16).map(|c| xp.column(c)).collect();
    for k in span_basis(&cols, 16) {
        let mut v = vec![Scalar::default(); 32];
        for (j, x) in k.into_iter().enumerate() {
            v[16 + j] = Scalar::from_gauss(x);
        }
        out.push(v);
    }
    out
}

impl Superalgebra {
    /// Builds the superalgebra; decomposable points use the reduced algebra and
    /// the odd space generated from the σ₊ kernel.
    pub fn new(params: &CWParams) -> Result<Self> {
        let b = b_form(params);
        let data = ConnectionPair::family(params).data(&b)?;
        let xm = x1234(false).matrix_of();
        let source = if data.joint_kernel().iter().all(|v| vec_is_zero(&xm.mul_vec(v))) {
            BracketSource::ClosedForm
        } else {
            BracketSource::DiracCurrent
        };
        let labels = match source {
            BracketSource::ClosedForm => reduced_labels(&b),
            BracketSource::DiracCurrent => restrict_labels(&b, standard_labels(9, &b.so_b_pairs())),
        };
        let reduced = b.is_degenerate();
        let odd = if !reduced && source == BracketSource::ClosedForm && is_generic_kernel(&data) {
            OddBasis::new(generic_odd_vectors())
        } else {
            let gen: Vec<Label> = labels.iter().copied().filter(|l| !matches!(l, Label::Rot(..))).collect();
            OddBasis::new(data.generated_space(&gen)?)
        };
        let alg = CWLieAlgebra::with_labels(b.clone(), labels.clone());
        let actions = labels
            .iter()
            .map(|&l| odd.restrict(&data.rho(l)?.neg()))
            .collect::<Result<Vec<_>>>()?;
        let forms = match source {
            BracketSource::ClosedForm => {
                labels.iter().map(|&l| Ok(odd.pull_back(&oddodd_form(&b, l)?))).collect::<Result<Vec<_>>>()?
            }
            BracketSource::DiracCurrent => {
                let dropped: Vec<usize> = decomposability(&b).zero_directions.iter().map(|i| i + 1).collect();
                current_forms(&data, &labels, &odd, &dropped)?
            }
        };
        Ok(Superalgebra {
            params: params.clone(),
            data,
            table: BracketTable { alg, sign: *GLOBAL_SIGN, odd, actions, forms },
            reduced,
            source,
        })
    }

    pub fn labels(&self) -> &[Label] {
        &self.table.alg.labels
    }

    pub fn odd_dim(&self) -> usize {
        self.table.odd.dim()
    }

    fn label_index(&self, l: Label) -> Result<usize> {
        self.table.alg.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string()))
    }

    /// L_a ξ in odd coordinates.
    pub fn act(&self, a: usize, xi: &[Scalar]) -> Vec<Scalar> {
        self.table.actions[a].mul_vec(xi)
    }

    /// {ξ, η} as an even element.
    pub fn bracket(&self, xi: &[Scalar], eta: &[Scalar]) -> EvenElement {
        let coeffs = self
            .table
            .forms
            .iter()
            .map(|f| crate::matrix::dot(xi, &f.mul_vec(eta)))
            .collect();
        EvenElement { labels: self.labels().to_vec(), coeffs }
    }

    /// [x, y] = ε·Σ f_ab^c x^a y^b K_c.
    pub fn even_bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        let n = self.labels().len();
        let mut out = vec![Scalar::default(); n];
        let eps = Scalar::from_int(self.table.sign);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = &(xa * yb) * &eps;
                for (k, v) in self.table.alg.bracket_vec(a, b)?.iter().enumerate() {
                    if !v.is_zero() {
                        out[k] = &out[k] + &(&c * &Scalar::from_gauss(v.clone()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// L_X for an even element.
    pub fn action_of(&self, x: &[Scalar]) -> SMatrix {
        let k = self.odd_dim();
        let mut m = SMatrix::zeros(k, k);
        for (a, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled(&self.table.actions[a], c);
            }
        }
        m
    }

    /// Constant data of L_a applied to an odd element given as a 32-spinor.
    pub fn lie_derivative_alg(&self, label: Label, xi0: &[Scalar]) -> Result<Vec<Scalar>> {
        self.label_index(label)?;
        lie_derivative_alg(&self.data, label, xi0)
    }

    /// Checks [L_a, L_b] = L_{[K_a, K_b]} for all label pairs.
    pub fn check_even_odd_rep(&self) -> Result<bool> {
        let n = self.labels().len();
        for a in 0..n {
            for b in a + 1..n {
                let la = &self.table.actions[a];
                let lb = &self.table.actions[b];
                let lhs = la.commutator(lb);
                let mut ea = vec![Scalar::default(); n];
                ea[a] = Scalar::from_int(1);
                let mut eb = vec![Scalar::default(); n];
                eb[b] = Scalar::from_int(1);
                let rhs = self.action_of(&self.even_bracket(&ea, &eb)?);
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// [K_a, {ξ, ξ}] − 2{L_aξ, ξ}.
    pub fn check_evo(&self, a: usize, xi: &[Scalar]) -> Result<Vec<Scalar>> {
        let n = self.labels().len();
        let mut ea = vec![Scalar::default(); n];
        ea[a] = Scalar::from_int(1);
        let bxx = self.bracket(xi, xi).coeffs;
        let lhs = self.even_bracket(&ea, &bxx)?;
        let lx = self.act(a, xi);
        let rhs = self.bracket(&lx, xi).coeffs;
        Ok(lhs.iter().zip(&rhs).map(|(x, y)| x - &(y * &Scalar::from_int(2))).collect())
    }

    /// L_{{ξ,ξ}} ξ in odd coordinates.
    pub fn ooo_residual(&self, xi: &[Scalar]) -> Vec<Scalar> {
        let bxx = self.bracket(xi, xi).coeffs;
        self.action_of(&bxx).mul_vec(xi)
    }

    /// The residual as a spinor, split into σ₋ and σ₊ sectors.
    pub fn ooo_split(&self, xi: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let v = self.table.odd.combine(&self.ooo_residual(xi));
        (v[..16].to_vec(), v[16..].to_vec())
    }

    /// Coefficients of the cubic map ξ ↦ L_{{ξ,ξ}}ξ, keyed by sorted index triples.
    pub fn ooo_trilinear(&self) -> HashMap<[usize; 3], Vec<Scalar>> {
        trilinear(&self.table.forms, &self.table.actions, self.odd_dim())
    }

    /// True iff the cubic residual vanishes identically (exact).
    pub fn ooo_vanishes(&self) -> bool {
        self.ooo_trilinear().values().all(|v| vec_is_zero(v))
    }

    /// Residual evaluated on every basis vector and every pairwise sum.
    pub fn polarization_check(&self) -> bool {
        let k = self.odd_dim();
        let unit = |i: usize| {
            let mut v = vec![Scalar::default(); k];
            v[i] = Scalar::from_int(1);
            v
        };
        for i in 0..k {
            if !vec_is_zero(&self.ooo_residual(&unit(i))) {
                return false;
            }
            for j in i + 1..k {
                let mut v = unit(i);
                v[j] = Scalar::from_int(1);
                if !vec_is_zero(&self.ooo_residual(&v)) {
                    return false;
                }
            }
        }
        true
    }
}

fn is_generic_kernel(data: &ConnectionData) -> bool {
    let k = data.joint_kernel();
    if k.len() != 8 {
        return false;
    }
    let xm = x1234(false).matrix_of();
    k.iter().all(|v| vec_is_zero(&xm.mul_vec(v)))
}

/// Σ_c F_c(ξ, ξ)·A_c ξ as coefficients of monomials ξ_pξ_qξ_s.
fn trilinear(forms: &[SMatrix], actions: &[SMatrix], k: usize) -> HashMap<[usize; 3], Vec<Scalar>> {
    let mut acc: HashMap<[usize; 3], Vec<Scalar>> = HashMap::new();
    for (f, a) in forms.iter().zip(actions) {
        let cols: Vec<(usize, Vec<(usize, Scalar)>)> = (0..k)
            .map(|s| (s, (0..k).filter_map(|r| nz(a.get(r, s)).map(|x| (r, x))).collect::<Vec<_>>()))
            .filter(|(_, c)| !c.is_empty())
            .collect();
        if cols.is_empty() {
            continue;
        }
        for p in 0..k {
            for q in 0..k {
                let fpq = f.get(p, q);
                if fpq.is_zero() {
                    continue;
                }
                for (s, col) in &cols {
                    let mut key = [p, q, *s];
                    key.sort_unstable();
                    let e = acc.entry(key).or_insert_with(|| vec![Scalar::default(); k]);
                    for (r, x) in col {
                        e[*r] = &e[*r] + &(fpq * x);
                    }
                }
            }
        }
    }
    acc
}

fn nz(x: &Scalar) -> Option<Scalar> {
    if x.is_zero() {
        None
    } else {
        Some(x.clone())
    }
}

/// Constant data of the algebraic Lie derivative: −ρ(e_μ)ξ⁰.
pub fn lie_derivative_alg(data: &ConnectionData, label: Label, xi0: &[Scalar]) -> Result<Vec<Scalar>> {
    Ok(data.rho(label)?.neg().mul_vec(xi0))
}

/// L_Kξ = K^μ∇_μξ − ¼Σ ∇_μK_ν Γ^μΓ^ν ξ for the closed-form parallel spinor with
/// constant data ξ⁰.
pub fn lie_derivative_coord<P: SpinorPoint>(
    data: &ConnectionData,
    k: &KillingField,
    xi0: &[Scalar],
    x: &P,
) -> Vec<P::R> {
    let z = x.zero();
    let jet = parallel_spinor_jet(data, xi0, x);
    let kv = k.eval(x);
    let nab = nabla_lower(&data.b, k, x);
    let dim = data.n() + 2;
    let mut out = vec![z.clone(); jet.value.len()];
    for (mu, kmu) in kv.iter().enumerate() {
        if kmu.magnitude() == 0.0 {
            continue;
        }
        let d = levi_civita(data, &jet, x, Coord::from_slot(mu));
        out = vadd(&out, &vscale(&d, kmu));
    }
    let quarter = z.from_scalar_like(&Scalar::frac(1, 4));
    for nu in 0..dim {
        let w = crate::spinor_connection::frame_gamma_apply(data, x, nu, &jet.value, true);
        for (mu, row) in nab.iter().enumerate() {
            let c = &row[nu];
            if c.magnitude() == 0.0 {
                continue;
            }
            let t = crate::spinor_connection::frame_gamma_apply(data, x, mu, &w, true);
            out = vsub(&out, &vscale(&t, &c.mul(&quarter)));
        }
    }
    out
}

/// Both sides of the equivariance check for one label: the coordinate Lie
/// derivative and the closed-form field of the algebraic image.
pub fn lie_derivative_pair<P: SpinorPoint>(
    data: &ConnectionData,
    k: &KillingField,
    xi0: &[Scalar],
    x: &P,
) -> Result<(Vec<P::R>, Vec<P::R>)> {
    let coord = lie_derivative_coord(data, k, xi0, x);
    let alg = parallel_spinor_eval(data, &lie_derivative_alg(data, k.label, xi0)?, x);
    Ok((coord, alg))
}

/// The linear constraint on (α₊, α₋, α₊′, α₋′) equivalent to vanishing of the
/// cubic residual in the generic odd basis.
pub struct LinearResidual {
    /// Row-reduced constraint rows; R(p) = 0 iff every row annihilates p.
    pub rows: Vec<[Scalar; 4]>,
}

/// Unit parameter directions in the order (α₊, α₋, α₊′, α₋′).
fn unit_params(k: usize) -> CWParams {
    let mut v = [0i64; 4];
    v[k] = 1;
    CWParams::from_ints(v[0], v[1], v[2], v[3])
}

/// Builds the residual as Σ_k p_k T_k. Every term of L_{{ξ,ξ}}ξ is the
/// product of one parameter-independent factor and one factor linear in the
/// parameters once i/λᵢ·λᵢ² and iλᵢ are combined, so each T_k is computed at
/// the unit parameter direction with those combinations taken exactly.
pub static LINEAR_RESIDUAL: Lazy<LinearResidual> = Lazy::new(|| {
    let odd = OddBasis::new(generic_odd_vectors());
    let labels = superalgebra_labels();
    let raw = &*RAW;
    let k = odd.dim();
    let mut tensors: Vec<HashMap<[usize; 3], Vec<Scalar>>> = Vec::new();
    for dir in 0..4 {
        let p = unit_params(dir);
        let coeffs = p.root_coefficients();
        let data = ConnectionPair::family(&p).data(&b_form(&p)).expect("data");
        let mut forms = Vec::new();
        let mut actions = Vec::new();
        for &l in &labels {
            let (form, action) = match l {
                Label::Dual(i) => {
                    // (i/λᵢ)·(−λᵢ²) = −iλᵢ = −aᵢ with λᵢ = −i aᵢ
                    let mut ur = SMatrix::zeros(32, 32);
                    let g = crate::clifford_core::to_s(&crate::clifford_core::V9.gammas[i - 1]);
                    ur.set_block(0, 16, &g.scale(&Scalar::inv_sqrt2()));
                    (raw.dual[i - 1].clone(), ur.scale(&Scalar::from_rational(-&coeffs[i - 1])))
                }
                Label::Rot(..) => {
                    let r = rot_root_index(l).expect("rotation");
                    let f = raw.rot[&l].scale(&Scalar::from_rational(coeffs[r - 1].clone()));
                    (f, data.rho(l).expect("rho").neg())
                }
                _ => (oddodd_form(&b_form(&p), l).expect("form"), data.rho(l).expect("rho").neg()),
            };
            forms.push(odd.pull_back(&form));
            actions.push(odd.restrict(&action).expect("closure"));
        }
        let t = trilinear(&forms, &actions, k);
        tensors.push(t);
    }
    let mut keys: Vec<[usize; 3]> = tensors.iter().flat_map(|t| t.keys().copied()).collect();
    keys.sort_unstable();
    keys.dedup();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for key in keys {
        for r in 0..k {
            let row: Vec<Scalar> =
                tensors.iter().map(|t| t.get(&key).map(|v| v[r].clone()).unwrap_or_default()).collect();
            if !vec_is_zero(&row) {
                rows.push(row);
            }
        }
    }
    let basis = if rows.is_empty() { Vec::new() } else { span_basis(&rows, 4) };
    LinearResidual { rows: basis.into_iter().map(|r| [r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone()]).collect() }
});

impl LinearResidual {
    pub fn vanishes_at(&self, p: &CWParams) -> bool {
        let v = [&p.alpha_plus, &p.alpha_minus, &p.alpha_plus_prime, &p.alpha_minus_prime];
        self.rows.iter().all(|row| {
            let mut s = Scalar::default();
            for (c, x) in row.iter().zip(v) {
                s = &s + &(c * &Scalar::from_rational(x.clone()));
            }
            s.is_zero()
        })
    }
}

/// Outcome of the odd-odd-odd check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SusyOutcome {
    pub susy: bool,
    pub route: Route,
    pub reduced: bool,
    pub odd_dim: usize,
}

/// Geometric supersymmetry at an indecomposable point; decomposable points
/// are rejected (see [`susy_check_any`]).
pub fn susy_check(params: &CWParams) -> Result<bool> {
    if b_form(params).is_degenerate() {
        return Err(Error::Precondition("decomposable point: use the reduced algebra".into()));
    }
    Ok(susy_check_any(params)?.susy)
}

/// Geometric supersymmetry at any point, through the linear constraint when
/// the odd part is the generic one and by the direct trilinear check otherwise.
pub fn susy_check_any(params: &CWParams) -> Result<SusyOutcome> {
    let data = ConnectionPair::family(params).data(&b_form(params))?;
    susy_check_with(params, &data)
}

/// [`susy_check_any`] reusing connection data already built for `params`.
pub fn susy_check_with(params: &CWParams, data: &ConnectionData) -> Result<SusyOutcome> {
    if !data.b.is_degenerate() && is_generic_kernel(data) {
        return Ok(SusyOutcome {
            susy: LINEAR_RESIDUAL.vanishes_at(params),
            route: Route::Linear,
            reduced: false,
            odd_dim: 24,
        });
    }
    let sa = Superalgebra::new(params)?;
    Ok(SusyOutcome { susy: sa.ooo_vanishes(), route: Route::Direct, reduced: sa.reduced, odd_dim: sa.odd_dim() })
}

/// The full coefficient list of the V* components computed both ways, used to
/// confirm that the two expressions agree.
pub fn dual_forms_agree(data: &ConnectionData, odd: &OddBasis) -> Result<bool> {
    for i in 1..=9 {
        let a = odd.pull_back(&oddodd_form(&data.b, Label::Dual(i))?);
        let b = odd.pull_back(&dual_form_via_inverse(data, i)?);
        if a != b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Helper for matrices over ℚ(i) viewed in ℚ(i, √2).
pub fn lift(m: &CMatrix) -> SMatrix {
    crate::clifford_core::to_s(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic() -> CWParams {
        CWParams::from_ints(5, 2, 1, -3)
    }

    #[test]
    fn sign_is_minus_one() {
        assert_eq!(*GLOBAL_SIGN, -1);
    }

    #[test]
    fn forms_are_symmetric() {
        let sa = Superalgebra::new(&generic()).unwrap();
        for (l, f) in sa.labels().iter().zip(&sa.table.forms) {
            assert_eq!(f.transpose(), *f, "{l}");
        }
    }

    #[test]
    fn representation_property() {
        let sa = Superalgebra::new(&generic()).unwrap();
        assert_eq!(sa.odd_dim(), 24);
        assert!(sa.check_even_odd_rep().unwrap());
    }

    #[test]
    fn evo_vanishes_on_basis() {
        let sa = Superalgebra::new(&generic()).unwrap();
        for a in 0..28 {
            for j in (0..24).step_by(5) {
                let mut xi = vec![Scalar::default(); 24];
                xi[j] = Scalar::from_int(1);
                assert!(vec_is_zero(&sa.check_evo(a, &xi).unwrap()), "{} {j}", sa.labels()[a]);
            }
        }
    }

    #[test]
    fn ooo_locus() {
        let on = CWParams::from_ints(-3, 2, 1, 5);
        let off = CWParams::from_ints(-2, 2, 1, 5);
        let s_on = Superalgebra::new(&on).unwrap();
        let s_off = Superalgebra::new(&off).unwrap();
        assert!(s_on.ooo_vanishes());
        assert!(!s_off.ooo_vanishes());
        assert!(LINEAR_RESIDUAL.vanishes_at(&on));
        assert!(!LINEAR_RESIDUAL.vanishes_at(&off));
    }

    #[test]
    fn linear_route_matches_direct() {
        for p in [
            CWParams::from_ints(-3, 2, 1, 5),
            CWParams::from_ints(6, 7, -2, 1),
            CWParams::from_ints(4, 3, 2, -1),
            CWParams::new(Rational::new(-3, 7), Rational::new(5, 3), Rational::new(1, 7), Rational::new(2, 9)),
        ] {
            let direct = Superalgebra::new(&p).unwrap().ooo_vanishes();
            assert_eq!(direct, LINEAR_RESIDUAL.vanishes_at(&p), "{p}");
        }
    }

    #[test]
    fn current_forms_match_closed_forms() {
        for p in [generic(), CWParams::from_ints(-3, 2, 1, 5), CWParams::from_ints(6, 7, -2, 1)] {
            let sa = Superalgebra::new(&p).unwrap();
            assert_eq!(sa.source, BracketSource::ClosedForm);
            let cur = current_forms(&sa.data, sa.labels(), &sa.table.odd, &[]).unwrap();
            for ((l, a), b) in sa.labels().iter().zip(&sa.table.forms).zip(&cur) {
                assert_eq!(a, b, "{p} {l}");
            }
        }
    }

    #[test]
    fn reduced_algebra_drops_flat_direction_currents() {
        // λ₅ = 0: the current picks up x⁻∂₅ − x⁵∂₊, which is not among the labels
        let sa = Superalgebra::new(&CWParams::from_ints(2, 1, 2, 0)).unwrap();
        assert!(sa.reduced);
        assert!(current_forms(&sa.data, sa.labels(), &sa.table.odd, &[]).is_err());
        assert!(current_forms(&sa.data, sa.labels(), &sa.table.odd, &[6]).is_ok());
    }

    #[test]
    fn flat_decomposable_points_drop_zero_directions() {
        // (α₊, α₋′) = (α₋, α₊′) with α₋ = α₊′: flat with λ₁ = λ₂ = 0
        let sa = Superalgebra::new(&CWParams::from_ints(7, 7, 7, 7)).unwrap();
        assert!(sa.reduced);
        assert_eq!(sa.source, BracketSource::DiracCurrent);
        assert!(sa.check_even_odd_rep().unwrap());
    }

    #[test]
    fn flat_points_use_the_current() {
        let p0 = CWParams::from_ints(3, 3, -1, -1);
        let sa = Superalgebra::new(&p0).unwrap();
        assert_eq!((sa.odd_dim(), sa.source), (32, BracketSource::DiracCurrent));
        assert!(sa.check_even_odd_rep().unwrap());
        assert!(sa.ooo_vanishes());
        let off = Superalgebra::new(&CWParams::from_ints(2, 2, 1, 1)).unwrap();
        assert_eq!(off.odd_dim(), 32);
        assert!(!off.ooo_vanishes());
    }

    #[test]
    fn dual_forms_two_ways() {
        let sa = Superalgebra::new(&generic()).unwrap();
        assert!(dual_forms_agree(&sa.data, &sa.table.odd).unwrap());
    }
}

#[cfg(test)]
mod lie_derivative_tests {
    use super::*;
    use crate::cahen_wallach::killing_field;
    use crate::series::FloatPoint;
    use num_complex::Complex64;

    /// Labels on which the coordinate Lie derivative equals +ρ instead of −ρ.
    fn twisted(l: Label) -> bool {
        matches!(l, Label::Minus | Label::Dual(_))
    }

    #[test]
    fn coordinate_and_algebraic_lie_derivatives() {
        let p = CWParams::from_ints(5, 2, 1, -3);
        let sa = Superalgebra::new(&p).unwrap();
        let x = FloatPoint { x: (0..11).map(|k| Complex64::new(0.13 * k as f64 - 0.4, 0.0)).collect() };
        for l in superalgebra_labels() {
            let k = killing_field(&sa.data.b, l).unwrap();
            for xi in sa.table.odd.vectors.iter().step_by(5) {
                let (c, a) = lie_derivative_pair(&sa.data, &k, xi, &x).unwrap();
                let s = if twisted(l) { -1.0 } else { 1.0 };
                let d: f64 = c.iter().zip(&a).map(|(u, v)| (u - v * s).norm()).fold(0.0, f64::max);
                assert!(d < 1e-9, "{l}: {d}");
            }
        }
    }

    #[test]
    fn minus_label_exact_at_origin() {
        let p = CWParams::from_ints(5, 2, 1, -3);
        let sa = Superalgebra::new(&p).unwrap();
        let x = JetPoint::origin(9, 3);
        let k = killing_field(&sa.data.b, Label::Minus).unwrap();
        let xi = &sa.table.odd.vectors[20];
        let (c, a) = lie_derivative_pair(&sa.data, &k, xi, &x).unwrap();
        let sum: Vec<_> = c.iter().zip(&a).map(|(u, v)| u.add(v)).collect();
        assert!(sum.iter().all(|s| s.is_zero()));
    }
}
