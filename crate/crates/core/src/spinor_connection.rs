//! Homogeneous spinor connections given by a quadratic Clifford pair (c̄, d):
//! the equivariant map ρ, the maps s and q, curvature, flatness and the
//! closed-form parallel spinors.

use nalgebra::DMatrix;
use num_complex::Complex64;
use once_cell::sync::OnceCell;

use crate::cahen_wallach::{b_form, BForm, CWLieAlgebra, CWParams, Label};
use crate::clifford_core::{
    build_clifford_lorentz, to_s, x_projector_element, CliffordElement, CliffordRepW, Gen, V9, W11,
};
use crate::error::{Error, Result};
use crate::matrix::{span_basis, CMatrix, SMatrix};
use crate::scalar::{GRat, Rational, Scalar};
use crate::series::{Coord, Evaluator, FloatPoint, JetPoint, Ring, Series};

/// Connection data on Cl(ℝ⁹): c̄, d, and the parameters ε, α of the general
/// equivariant map (only ε = α = 0 is supported downstream).
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionPair {
    pub cbar: CliffordElement,
    pub d: CliffordElement,
    pub epsilon: CliffordElement,
    pub alpha: GRat,
    /// Set by [`ConnectionPair::family`].
    pub family: Option<CWParams>,
}

/// X^±₁₂₃₄ as Clifford elements.
pub fn x1234(plus: bool) -> CliffordElement {
    x_projector_element(&[1, 2, 3, 4], plus)
}

impl ConnectionPair {
    pub fn new(cbar: CliffordElement, d: CliffordElement) -> Self {
        ConnectionPair { cbar, d, epsilon: CliffordElement::zero(), alpha: GRat::default(), family: None }
    }

    /// c̄ = (α₊X⁺₁₂₃₄ + α₋X⁻₁₂₃₄)γ₁₂₅, d = (α₊′X⁺₁₂₃₄ + α₋′X⁻₁₂₃₄)γ₁₂₅.
    pub fn family(p: &CWParams) -> Self {
        let g125 = CliffordElement::gamma(&[1, 2, 5]);
        let comb = |a: &Rational, b: &Rational| {
            x1234(true)
                .scale(&GRat::real(a.clone()))
                .add(&x1234(false).scale(&GRat::real(b.clone())))
                .mul(&g125)
        };
        let mut pair = ConnectionPair::new(
            comb(&p.alpha_plus, &p.alpha_minus),
            comb(&p.alpha_plus_prime, &p.alpha_minus_prime),
        );
        pair.family = Some(p.clone());
        pair
    }

    /// The flat pair (−3βγ₁₂₃, βγ₁₂₃) with B = −4β²diag(4·𝟙₃, 𝟙₆).
    pub fn flat_example(beta: &Rational) -> (Self, BForm) {
        let g123 = CliffordElement::gamma(&[1, 2, 3]);
        let pair = ConnectionPair::new(
            g123.scale(&GRat::real(beta * &Rational::from_int(-3))),
            g123.scale(&GRat::real(beta.clone())),
        );
        let lam = |k: i64| GRat::new(Rational::from_int(0), beta * &Rational::from_int(-k));
        let roots = (1..=9).map(|i| if i <= 3 { lam(4) } else { lam(2) }).collect();
        (pair, BForm::from_roots(roots))
    }

    pub fn require_main(&self) -> Result<()> {
        if !self.epsilon.is_zero() || !self.alpha.is_zero() {
            return Err(Error::Unsupported("only ε = 0 and α = 0 are supported".into()));
        }
        Ok(())
    }

    /// Matrix data on ℂ³² for a given B.
    pub fn data(&self, b: &BForm) -> Result<ConnectionData> {
        self.require_main()?;
        if b.n() != 9 {
            return Err(Error::Dimension(format!("B has size {}, expected 9", b.n())));
        }
        let sectors = self.family.as_ref().map(FamilySectors::new);
        Ok(ConnectionData {
            rep: W11.clone(),
            gammas: V9.gammas.clone(),
            cbar: self.cbar.matrix_of(),
            d: self.d.matrix_of(),
            b: b.clone(),
            sectors,
            kernel: OnceCell::new(),
        })
    }
}

/// s(x) = c̄x − xd.
pub fn s_map(pair: &ConnectionPair, x: &CliffordElement) -> CliffordElement {
    pair.cbar.mul(x).sub(&x.mul(&pair.d))
}

/// q(x) = s(s(x)).
pub fn q_map(pair: &ConnectionPair, x: &CliffordElement) -> CliffordElement {
    s_map(pair, &s_map(pair, x))
}

/// c̄²x + xd² − 2c̄xd.
pub fn q_map_expanded(pair: &ConnectionPair, x: &CliffordElement) -> CliffordElement {
    let c2 = pair.cbar.mul(&pair.cbar);
    let d2 = pair.d.mul(&pair.d);
    c2.mul(x)
        .add(&x.mul(&d2))
        .sub(&pair.cbar.mul(x).mul(&pair.d).scale(&GRat::from_int(2)))
}

/// The four-case closed form of q(eᵢ) on the family:
/// γᵢ(a²X⁺₁₂₃₄ + b²X⁻₁₂₃₄) with (a, b) depending on the block of i.
pub fn q_family_closed_form(p: &CWParams, i: usize) -> CliffordElement {
    let (ap, am, app, amp) = (&p.alpha_plus, &p.alpha_minus, &p.alpha_plus_prime, &p.alpha_minus_prime);
    let (a, b) = match i {
        1 | 2 => (am - app, ap - amp),
        3 | 4 => (am + app, ap + amp),
        5 => (ap - app, am - amp),
        _ => (ap + app, am + amp),
    };
    let gi = CliffordElement::vector(i);
    gi.mul(&x1234(true).scale(&GRat::real(&a * &a)).add(&x1234(false).scale(&GRat::real(&b * &b))))
}

/// Sector data of a family pair: on X^±₁₂₃₄, c̄ and d are multiples of γ₁₂₅.
#[derive(Clone, Debug)]
pub struct FamilySectors {
    pub x_plus: CMatrix,
    pub x_minus: CMatrix,
    pub g125: CMatrix,
    /// (α₊, α₋) and (α₊′, α₋′).
    pub cbar: [Rational; 2],
    pub d: [Rational; 2],
}

impl FamilySectors {
    pub fn new(p: &CWParams) -> Self {
        FamilySectors {
            x_plus: x1234(true).matrix_of(),
            x_minus: x1234(false).matrix_of(),
            g125: CliffordElement::gamma(&[1, 2, 5]).matrix_of(),
            cbar: [p.alpha_plus.clone(), p.alpha_minus.clone()],
            d: [p.alpha_plus_prime.clone(), p.alpha_minus_prime.clone()],
        }
    }

    /// exp(−t(aX⁺ + bX⁻)γ₁₂₅) = Σ± X±(cosh(a±t) − sinh(a±t)γ₁₂₅), using γ₁₂₅² = 𝟙.
    pub fn exp_float(&self, coeffs: &[Rational; 2], t: Complex64) -> DMatrix<Complex64> {
        let xp = to_dm(&self.x_plus);
        let xm = to_dm(&self.x_minus);
        let g = to_dm(&self.g125);
        let id = DMatrix::<Complex64>::identity(g.nrows(), g.ncols());
        let part = |x: &DMatrix<Complex64>, a: &Rational| {
            let at = t * a.to_f64();
            x * (&id * at.cosh() - &g * at.sinh())
        };
        part(&xp, &coeffs[0]) + part(&xm, &coeffs[1])
    }
}

pub fn to_dm(m: &CMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).to_c64())
}

pub fn to_dm_s(m: &SMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).to_c64())
}

/// Matrix form of a homogeneous spinor connection on a Cahen-Wallach space
/// ℝ^{1,1} ⊕ V: euclidean gammas on S(V) = ℂᵐ, the pair (c̄, d) as m×m
/// matrices and B. Spinors of W live in ℂ²ᵐ with the σ₋ sector (ξ₁) first.
#[derive(Clone, Debug)]
pub struct ConnectionData {
    pub rep: CliffordRepW,
    pub gammas: Vec<CMatrix>,
    pub cbar: CMatrix,
    pub d: CMatrix,
    pub b: BForm,
    pub sectors: Option<FamilySectors>,
    kernel: OnceCell<Vec<Vec<GRat>>>,
}

fn half_sqrt2() -> Scalar {
    Scalar::inv_sqrt2()
}

impl ConnectionData {
    /// Data from explicit matrices; Lorentzian gammas are built by the graded
    /// tensor scheme.
    pub fn from_matrices(gammas: Vec<CMatrix>, cbar: CMatrix, d: CMatrix, b: BForm) -> Result<Self> {
        let m = gammas.first().map(|g| g.rows()).unwrap_or(0);
        if gammas.len() != b.n() || cbar.rows() != m || d.rows() != m {
            return Err(Error::Dimension("inconsistent connection data".into()));
        }
        let rep = build_clifford_lorentz(&gammas, None);
        Ok(ConnectionData { rep, gammas, cbar, d, b, sectors: None, kernel: OnceCell::new() })
    }

    /// Size of S(V).
    pub fn m(&self) -> usize {
        self.cbar.rows()
    }

    pub fn n(&self) -> usize {
        self.gammas.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.m()
    }

    fn gamma(&self, i: usize) -> &CMatrix {
        &self.gammas[i - 1]
    }

    /// s(eᵢ) = c̄γᵢ − γᵢd.
    pub fn s_matrix(&self, i: usize) -> CMatrix {
        self.cbar.mul(self.gamma(i)).sub(&self.gamma(i).mul(&self.d))
    }

    /// q(eᵢ) = c̄ s(eᵢ) − s(eᵢ) d.
    pub fn q_matrix(&self, i: usize) -> CMatrix {
        let s = self.s_matrix(i);
        self.cbar.mul(&s).sub(&s.mul(&self.d))
    }

    /// B(eᵢ) = λᵢ²γᵢ.
    pub fn b_matrix(&self, i: usize) -> CMatrix {
        self.gamma(i).scale(&GRat::real(self.b.entry(i).clone()))
    }

    /// q(eᵢ) + B(eᵢ).
    pub fn defect(&self, i: usize) -> CMatrix {
        self.q_matrix(i).add(&self.b_matrix(i))
    }

    fn block(&self, a: &CMatrix, r: usize, c: usize) -> SMatrix {
        let m = self.m();
        let mut out = SMatrix::zeros(2 * m, 2 * m);
        out.set_block(r * m, c * m, &to_s(a));
        out
    }

    /// E₁₂ ⊗ a / √2.
    fn upper_right(&self, a: &CMatrix) -> SMatrix {
        self.block(a, 0, 1).scale(&half_sqrt2())
    }

    /// The equivariant map on a basis label.
    pub fn rho(&self, label: Label) -> Result<SMatrix> {
        let n = self.n();
        let dim = self.dim();
        let check = |i: usize| {
            if i == 0 || i > n {
                Err(Error::UnknownLabel(label.to_string()))
            } else {
                Ok(())
            }
        };
        Ok(match label {
            Label::Plus => SMatrix::zeros(dim, dim),
            Label::Minus => self.block(&self.cbar, 0, 0).add(&self.block(&self.d, 1, 1)),
            Label::Trans(i) => {
                check(i)?;
                self.upper_right(&self.s_matrix(i)).neg()
            }
            Label::Dual(i) => {
                check(i)?;
                self.upper_right(&self.b_matrix(i))
            }
            Label::Rot(i, j) => {
                check(i)?;
                check(j)?;
                let g = self.rep.gen(Gen::V(i)).mul(self.rep.gen(Gen::V(j)));
                g.scale(&Scalar::frac(-1, 2))
            }
        })
    }

    /// ½Γ₊B(eᵢ) on ℂ²ᵐ, the spin-connection coefficient of ∇₋ along xⁱ.
    pub fn spin_connection_coeff(&self, i: usize) -> SMatrix {
        self.rep
            .gen(Gen::Plus)
            .mul(self.rep.gen(Gen::V(i)))
            .scale(&Scalar::from_rational(self.b.entry(i) * &Rational::new(1, 2)))
    }

    /// R(X, Y) = [ρ(X), ρ(Y)] − ρ([X, Y]).
    pub fn curvature(&self, alg: &CWLieAlgebra, x: Label, y: Label) -> Result<SMatrix> {
        let (rx, ry) = (self.rho(x)?, self.rho(y)?);
        let mut r = rx.commutator(&ry);
        for (l, c) in alg.bracket_labels(x, y) {
            r = r.sub(&self.rho(l)?.scale(&Scalar::from_gauss(c)));
        }
        Ok(r)
    }

    /// True iff q(eᵢ) + B(eᵢ) = 0 for every i.
    pub fn flat(&self) -> bool {
        (1..=self.n()).all(|i| self.defect(i).is_zero())
    }

    /// Joint kernel of q(eᵢ) + B(eᵢ) on the σ₊ sector, intersected in
    /// ascending i.
    pub fn joint_kernel(&self) -> Vec<Vec<GRat>> {
        self.kernel.get_or_init(|| self.joint_kernel_in_order(&(1..=self.n()).collect::<Vec<_>>())).clone()
    }

    pub fn joint_kernel_in_order(&self, order: &[usize]) -> Vec<Vec<GRat>> {
        let m = self.m();
        let mut basis: Vec<Vec<GRat>> = (0..m)
            .map(|k| {
                let mut v = vec![GRat::default(); m];
                v[k] = GRat::from_int(1);
                v
            })
            .collect();
        for &i in order {
            if basis.is_empty() {
                break;
            }
            let q = self.defect(i);
            let images: Vec<Vec<GRat>> = basis.iter().map(|v| q.mul_vec(v)).collect();
            // coefficient vectors c with Σ c_k images_k = 0
            let a = CMatrix::from_columns(m, &images);
            let coeffs = a.kernel();
            basis = coeffs
                .iter()
                .map(|c| {
                    let mut v = vec![GRat::default(); m];
                    for (ck, bk) in c.iter().zip(&basis) {
                        if ck.is_zero() {
                            continue;
                        }
                        for (x, y) in v.iter_mut().zip(bk) {
                            *x = &*x + &(ck * y);
                        }
                    }
                    v
                })
                .collect();
        }
        span_basis(&basis, m)
    }

    /// Dimension of the space of parallel spinors: m + dim of the joint kernel.
    pub fn parallel_dim(&self) -> usize {
        self.m() + self.joint_kernel().len()
    }

    /// Constant data of the parallel spinors: all of the σ₋ sector together
    /// with the joint kernel in the σ₊ sector.
    pub fn parallel_basis(&self) -> Vec<Vec<Scalar>> {
        let m = self.m();
        let mut out: Vec<Vec<Scalar>> = (0..m)
            .map(|k| {
                let mut v = vec![Scalar::default(); 2 * m];
                v[k] = Scalar::from_int(1);
                v
            })
            .collect();
        for k in self.joint_kernel() {
            let mut v = vec![Scalar::default(); 2 * m];
            for (j, x) in k.into_iter().enumerate() {
                v[m + j] = Scalar::from_gauss(x);
            }
            out.push(v);
        }
        out
    }

    /// Labels whose images generate the odd part from the σ₊ kernel:
    /// e₋, eᵢ and eᵢ* for every direction with λᵢ ≠ 0.
    pub fn generating_labels(&self) -> Vec<Label> {
        let mut v = vec![Label::Minus];
        for i in 1..=self.n() {
            if !self.b.entry(i).is_zero() {
                v.push(Label::Trans(i));
                v.push(Label::Dual(i));
            }
        }
        v
    }

    /// Smallest subspaces (σ₊ part, σ₋ part) containing the σ₊ kernel and
    /// stable under the given labels' images of ρ. ρ(e₋) and ρ(e_{ij})
    /// preserve both sectors; ρ(eᵢ) and ρ(eᵢ*) map the σ₊ sector to the σ₋
    /// sector and kill the σ₋ sector, so the space splits.
    pub fn generated_sectors(&self, labels: &[Label]) -> Result<(Vec<Vec<GRat>>, Vec<Vec<GRat>>)> {
        let m = self.m();
        let (mut lower_maps, mut upper_maps, mut cross) = (Vec::new(), Vec::new(), Vec::new());
        for &l in labels {
            if let Label::Trans(i) | Label::Dual(i) | Label::Rot(i, _) = l {
                if i == 0 || i > self.n() {
                    return Err(Error::UnknownLabel(l.to_string()));
                }
            }
            match l {
                Label::Plus => {}
                Label::Minus => {
                    lower_maps.push(self.d.clone());
                    upper_maps.push(self.cbar.clone());
                }
                Label::Trans(i) => cross.push(self.s_matrix(i)),
                Label::Dual(i) => cross.push(self.b_matrix(i)),
                Label::Rot(i, j) => {
                    if j == 0 || j > self.n() {
                        return Err(Error::UnknownLabel(l.to_string()));
                    }
                    let g = self.gamma(i).mul(self.gamma(j));
                    lower_maps.push(g.clone());
                    upper_maps.push(g);
                }
            }
        }
        let lower = close_under(span_basis(&self.joint_kernel(), m), &lower_maps, m);
        let images: Vec<Vec<GRat>> = cross.iter().flat_map(|a| lower.iter().map(move |v| a.mul_vec(v))).collect();
        let upper = close_under(span_basis(&images, m), &upper_maps, m);
        Ok((lower, upper))
    }

    /// The generated space as vectors of ℂ²ᵐ, σ₋ part first.
    pub fn generated_space(&self, labels: &[Label]) -> Result<Vec<Vec<Scalar>>> {
        let m = self.m();
        let (lower, upper) = self.generated_sectors(labels)?;
        let embed = |v: Vec<GRat>, off: usize| {
            let mut out = vec![Scalar::default(); 2 * m];
            for (k, x) in v.into_iter().enumerate() {
                out[off + k] = Scalar::from_gauss(x);
            }
            out
        };
        Ok(upper.into_iter().map(|v| embed(v, 0)).chain(lower.into_iter().map(|v| embed(v, m))).collect())
    }

    /// Dimension of the space generated by [`ConnectionData::generating_labels`].
    pub fn generated_dim(&self) -> usize {
        let (lower, upper) = self.generated_sectors(&self.generating_labels()).expect("labels are valid");
        lower.len() + upper.len()
    }

    /// Nᵢ = ½Γ₊s(eᵢ) = −ρ(eᵢ).
    fn n_matrix(&self, i: usize) -> SMatrix {
        self.upper_right(&self.s_matrix(i))
    }

    /// ρ(e₋) as a complex float matrix.
    fn rho_minus_float(&self) -> DMatrix<Complex64> {
        to_dm_s(&self.rho(Label::Minus).expect("e₋"))
    }
}

/// Smallest subspace containing `basis` and stable under the given maps.
fn close_under(mut basis: Vec<Vec<GRat>>, maps: &[CMatrix], m: usize) -> Vec<Vec<GRat>> {
    loop {
        if basis.len() == m {
            return basis;
        }
        let mut all = basis.clone();
        for a in maps {
            all.extend(basis.iter().map(|v| a.mul_vec(v)));
        }
        let next = span_basis(&all, m);
        if next.len() == basis.len() {
            return basis;
        }
        basis = next;
    }
}

/// Applies an exact matrix to a ring-valued vector.
pub fn apply<R: Ring>(m: &SMatrix, v: &[R], zero: &R) -> Vec<R> {
    (0..m.rows())
        .map(|r| {
            let mut acc = zero.clone();
            for (c, x) in m.row(r).iter().enumerate() {
                if !x.is_zero() {
                    acc = acc.add(&v[c].scale_s(x));
                }
            }
            acc
        })
        .collect()
}

pub fn vadd<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vsub<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vscale<R: Ring>(a: &[R], s: &R) -> Vec<R> {
    a.iter().map(|x| x.mul(s)).collect()
}

/// Points at which spinor fields can be evaluated.
pub trait SpinorPoint: Evaluator {
    /// exp(−x⁻ρ(e₋)) v.
    fn exp_apply(&self, data: &ConnectionData, v: &[Scalar]) -> Vec<Self::R>;
    /// Constant vector as ring elements.
    fn lift(&self, v: &[Scalar]) -> Vec<Self::R> {
        let z = self.zero();
        v.iter().map(|x| z.from_scalar_like(x)).collect()
    }
}

impl SpinorPoint for JetPoint {
    fn exp_apply(&self, data: &ConnectionData, v: &[Scalar]) -> Vec<Series> {
        let m = data.rho(Label::Minus).expect("e₋");
        let dim = v.len();
        let mut out: Vec<Series> = (0..dim).map(|_| Series::constant(Scalar::default(), self.order)).collect();
        let mut term = v.to_vec();
        let mut fact = Rational::from_int(1);
        for k in 0..self.order {
            if k > 0 {
                term = m.mul_vec(&term).iter().map(|x| -x).collect();
                fact = &fact * &Rational::from_int(k as i64);
            }
            let inv = Scalar::from_rational(fact.recip().expect("factorial"));
            for (o, t) in out.iter_mut().zip(&term) {
                if !t.is_zero() {
                    o.coeffs[k] = t * &inv;
                }
            }
        }
        out
    }
}

impl SpinorPoint for FloatPoint {
    fn exp_apply(&self, data: &ConnectionData, v: &[Scalar]) -> Vec<Complex64> {
        let t = self.x[1];
        let e = match &data.sectors {
            Some(s) => {
                let m = data.m();
                let mut e = DMatrix::<Complex64>::zeros(2 * m, 2 * m);
                e.view_mut((0, 0), (m, m)).copy_from(&s.exp_float(&s.cbar, t));
                e.view_mut((m, m), (m, m)).copy_from(&s.exp_float(&s.d, t));
                e
            }
            None => (data.rho_minus_float() * (-t)).exp(),
        };
        let vv = nalgebra::DVector::from_iterator(v.len(), v.iter().map(|x| x.to_c64()));
        (e * vv).iter().copied().collect()
    }
}

/// A spinor field with all first partial derivatives at one point, indexed
/// by coordinate slot.
#[derive(Clone, Debug)]
pub struct SpinorJet<R> {
    pub value: Vec<R>,
    pub partials: Vec<Vec<R>>,
}

/// The closed-form parallel spinor (1 + Σ xⁱ ½Γ₊s(eᵢ)) exp(−x⁻ρ(e₋)) ξ⁰
/// and its partial derivatives.
pub fn parallel_spinor_jet<P: SpinorPoint>(data: &ConnectionData, xi0: &[Scalar], x: &P) -> SpinorJet<P::R> {
    let z = x.zero();
    let u = x.exp_apply(data, xi0);
    let rho_m = data.rho(Label::Minus).expect("e₋");
    let du = apply(&rho_m, &u, &z).iter().map(|r| r.neg()).collect::<Vec<_>>();
    let ns: Vec<SMatrix> = (1..=data.n()).map(|i| data.n_matrix(i)).collect();
    let mut value = u.clone();
    let mut dminus = du.clone();
    let mut partials = vec![vec![z.clone(); u.len()]; data.n() + 2];
    for (k, n) in ns.iter().enumerate() {
        let xi = x.coord(Coord::T(k + 1));
        let nu = apply(n, &u, &z);
        value = vadd(&value, &vscale(&nu, &xi));
        dminus = vadd(&dminus, &vscale(&apply(n, &du, &z), &xi));
        partials[2 + k] = nu;
    }
    partials[1] = dminus;
    SpinorJet { value, partials }
}

pub fn parallel_spinor_eval<P: SpinorPoint>(data: &ConnectionData, xi0: &[Scalar], x: &P) -> Vec<P::R> {
    parallel_spinor_jet(data, xi0, x).value
}

/// ∇_μ of a spinor field in coordinates: ∇₋ = ∂₋ + Σ xⁱ ½Γ₊B(eᵢ), others ∂_μ.
pub fn levi_civita<P: SpinorPoint>(data: &ConnectionData, jet: &SpinorJet<P::R>, x: &P, dir: Coord) -> Vec<P::R> {
    let s = dir.slot();
    let mut out = jet.partials[s].clone();
    if dir == Coord::Minus {
        let z = x.zero();
        for i in 1..=data.n() {
            if data.b.entry(i).is_zero() {
                continue;
            }
            let t = apply(&data.spin_connection_coeff(i), &jet.value, &z);
            out = vadd(&out, &vscale(&t, &x.coord(Coord::T(i))));
        }
    }
    out
}

/// D_μ = ∇_μ + ρ(e_μ) applied to the closed-form field with constant data ξ⁰.
pub fn covariant_derivative<P: SpinorPoint>(
    data: &ConnectionData,
    xi0: &[Scalar],
    x: &P,
    dir: Coord,
) -> Result<Vec<P::R>> {
    if let Coord::T(i) = dir {
        if i == 0 || i > data.n() {
            return Err(Error::UnknownLabel(format!("direction {i}")));
        }
    }
    let jet = parallel_spinor_jet(data, xi0, x);
    covariant_derivative_of(data, &jet, x, dir)
}

/// D_μ of an arbitrary field given by its jet.
pub fn covariant_derivative_of<P: SpinorPoint>(
    data: &ConnectionData,
    jet: &SpinorJet<P::R>,
    x: &P,
    dir: Coord,
) -> Result<Vec<P::R>> {
    let label = match dir {
        Coord::Plus => Label::Plus,
        Coord::Minus => Label::Minus,
        Coord::T(i) => Label::Trans(i),
    };
    let z = x.zero();
    let rho = apply(&data.rho(label)?, &jet.value, &z);
    Ok(vadd(&levi_civita(data, jet, x, dir), &rho))
}

/// Γ(∂_μ) at a point: Γ₊, Γ₋ − fΓ₊ with f = ½ΣBᵢᵢ(xⁱ)², and Γᵢ.
pub fn frame_gamma_apply<P: SpinorPoint>(data: &ConnectionData, x: &P, slot: usize, v: &[P::R], upper: bool) -> Vec<P::R> {
    let z = x.zero();
    let gp = data.rep.gen(Gen::Plus);
    let gm = data.rep.gen(Gen::Minus);
    let f = half_b_norm(data, x);
    match (slot, upper) {
        // Γ(∂₊) = Γ₊, raised: Γ^− = Γ₊
        (0, false) | (1, true) => apply(gp, v, &z),
        // Γ(∂₋) = Γ₋ − fΓ₊
        (1, false) => vsub(&apply(gm, v, &z), &vscale(&apply(gp, v, &z), &f)),
        // Γ^+ = g^{++}Γ(∂₊) + g^{+−}Γ(∂₋) = Γ₋ + fΓ₊
        (0, true) => vadd(&apply(gm, v, &z), &vscale(&apply(gp, v, &z), &f)),
        (s, _) => apply(data.rep.gen(Gen::V(s - 1)), v, &z),
    }
}

/// f = ½Σ Bᵢᵢ(xⁱ)².
pub fn half_b_norm<P: Evaluator>(data: &ConnectionData, x: &P) -> P::R {
    let mut f = x.zero();
    for i in 1..=data.n() {
        let xi = x.coord(Coord::T(i));
        f = f.add(&xi.mul(&xi).scale(&GRat::real(data.b.entry(i) * &Rational::new(1, 2))));
    }
    f
}

/// Family data for parameters: pair, B and matrices.
pub fn family_data(p: &CWParams) -> ConnectionData {
    ConnectionPair::family(p).data(&b_form(p)).expect("family data")
}

/// Float version of exp(−x⁻ρ(e₋)) by the generic matrix exponential.
pub fn exp_minus_generic(data: &ConnectionData, t: Complex64) -> DMatrix<Complex64> {
    (data.rho_minus_float() * (-t)).exp()
}

/// Float version of exp(−x⁻ρ(e₋)) by the sector formula (family data only).
pub fn exp_minus_sectors(data: &ConnectionData, t: Complex64) -> Option<DMatrix<Complex64>> {
    let s = data.sectors.as_ref()?;
    let m = data.m();
    let mut e = DMatrix::<Complex64>::zeros(2 * m, 2 * m);
    e.view_mut((0, 0), (m, m)).copy_from(&s.exp_float(&s.cbar, t));
    e.view_mut((m, m), (m, m)).copy_from(&s.exp_float(&s.d, t));
    Some(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cahen_wallach::lie_algebra;

    fn generic() -> CWParams {
        CWParams::from_ints(5, 2, 1, -3)
    }

    #[test]
    fn q_expansion_and_closed_form() {
        let p = generic();
        let pair = ConnectionPair::family(&p);
        for i in 1..=9 {
            let v = CliffordElement::vector(i);
            let q = q_map(&pair, &v);
            assert_eq!(q, q_map_expanded(&pair, &v));
            assert_eq!(q, q_family_closed_form(&p, i), "i = {i}");
        }
    }

    #[test]
    fn family_parallel_dimension() {
        let data = family_data(&generic());
        assert!(!data.flat());
        assert_eq!(data.parallel_dim(), 24);
        let xp = x1234(true).matrix_of();
        for k in data.joint_kernel() {
            assert_eq!(xp.mul_vec(&k), k);
        }
        assert_eq!(data.generated_dim(), 24);
        assert_eq!(data.generated_space(&data.generating_labels()).unwrap().len(), 24);
    }

    #[test]
    fn flat_example_is_flat() {
        let (pair, b) = ConnectionPair::flat_example(&Rational::new(2, 3));
        let data = pair.data(&b).unwrap();
        assert!(data.flat());
        assert_eq!(data.parallel_dim(), 32);
    }

    #[test]
    fn curvature_mixed_block() {
        let data = family_data(&generic());
        let alg = lie_algebra(&generic());
        for i in 1..=9 {
            let r = data.curvature(&alg, Label::Minus, Label::Trans(i)).unwrap();
            let expect = data.upper_right(&data.defect(i)).neg();
            assert_eq!(r, expect);
        }
        assert!(data.curvature(&alg, Label::Minus, Label::Plus).unwrap().is_zero());
        assert!(data.curvature(&alg, Label::Trans(2), Label::Trans(7)).unwrap().is_zero());
    }

    #[test]
    fn parallel_spinors_are_parallel_exactly() {
        let data = family_data(&generic());
        let x = JetPoint {
            x_plus: Rational::new(1, 2),
            x_trans: (1..=9).map(|k| Rational::new(k as i64, 5)).collect(),
            order: 5,
        };
        for xi0 in data.parallel_basis().iter().step_by(5) {
            for dir in [Coord::Plus, Coord::Minus, Coord::T(1), Coord::T(5), Coord::T(8)] {
                let r = covariant_derivative(&data, xi0, &x, dir).unwrap();
                assert!(r.iter().all(|s| s.is_zero()), "{dir:?}");
            }
        }
    }

    #[test]
    fn sector_exponential_matches_generic() {
        let data = family_data(&generic());
        let t = Complex64::new(0.37, 0.0);
        let a = exp_minus_sectors(&data, t).unwrap();
        let b = exp_minus_generic(&data, t);
        assert!((a - b).norm() < 1e-10);
    }

    /// Closure under the full 32×32 images of ρ.
    fn naive_generated_dim(data: &ConnectionData, labels: &[Label]) -> usize {
        let m = data.m();
        let mats: Vec<SMatrix> = labels.iter().map(|&l| data.rho(l).unwrap()).collect();
        let start: Vec<Vec<Scalar>> = data.parallel_basis().into_iter().skip(m).collect();
        let mut basis = span_basis(&start, 2 * m);
        loop {
            let mut all = basis.clone();
            for a in &mats {
                all.extend(basis.iter().map(|v| a.mul_vec(v)));
            }
            let next = span_basis(&all, 2 * m);
            if next.len() == basis.len() {
                return basis.len();
            }
            basis = next;
        }
    }

    #[test]
    fn sector_closure_matches_full_closure() {
        let points = [generic(), CWParams::from_ints(3, 1, 1, 2), CWParams::from_ints(2, 2, 1, 1), CWParams::from_ints(0, 1, 0, 0)];
        for p in points {
            let data = family_data(&p);
            let mut labels = data.generating_labels();
            labels.push(Label::Rot(6, 7));
            for ls in [data.generating_labels(), labels] {
                let (lower, upper) = data.generated_sectors(&ls).unwrap();
                assert_eq!(lower.len() + upper.len(), naive_generated_dim(&data, &ls), "{p}");
            }
        }
    }
}
