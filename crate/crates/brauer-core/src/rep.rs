//! Gelfand-Tzetlin modules: explicit symmetric matrices for the generators
//! `g_i` and `e_i` of `B_f(x)` on the canonical lattice basis of `[f, λ]`.
//!
//! The action is block diagonal over `i`-coupling classes. A class containing
//! a sign-flipped lattice (`w_i = -w_{i+1}`, the contraction pattern) consists
//! entirely of such lattices; there `e_i` restricts to `ψ ψ^T / P_μ(x)` with
//! `ψ_u = sqrt(P_{ν_u}(x))`, where `μ` is the diagram before the flip and
//! `ν_u` the intermediate diagram, and the `g_i` entries are
//! `(δ_uv - ψ_u ψ_v / P_μ(x))` divided by the content-weight gap of the pair.
//! Every other class has at most two members and carries the Young orthogonal
//! form `1/d` and `sqrt(1 - 1/d^2)` with `d` the weight gap of the member;
//! `e_i` vanishes there.
//!
//! The content weight of step `k` is `(x-1)/2 + content` for a box addition
//! and the negative of that for a removal (the Jucys-Murphy eigenvalues). On
//! fully positive lattices the gaps reduce to classical axial distances and
//! the action is Young's orthogonal form for the symmetric group. Raw diamond
//! differences miss the add/remove half-integer shifts and fail the defining
//! relations already on the one-dimensional module `[2, ∅]`; the weight gaps
//! are the convention under which `check_relations` is clean.
//!
//! All radicands and denominators are computed as exact rationals. The
//! removable `0/0` in the flip-class diagonal at special integer `x` is
//! resolved by exact polynomial division, never by numeric limits.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::lattice::PermutationLattice;
use crate::scalar::Float;
use crate::shape::Shape;
use crate::young::{p_poly, RationalParam, RationalPolynomial};
use crate::Rational;

fn check_pair(u: &PermutationLattice, v: &PermutationLattice) -> Result<()> {
    if u.order() != v.order() || u.shape() != v.shape() {
        return Err(Error::LatticeMismatch);
    }
    Ok(())
}

fn check_index(w: &PermutationLattice, i: usize) -> Result<()> {
    if i == 0 || i + 1 > w.order() {
        return Err(Error::IndexOutOfRange {
            index: i,
            order: w.order(),
        });
    }
    Ok(())
}

/// `u` and `v` agree at every position outside `{i, i+1}`.
pub fn i_coupled(u: &PermutationLattice, v: &PermutationLattice, i: usize) -> Result<bool> {
    check_pair(u, v)?;
    check_index(u, i)?;
    Ok(u
        .elements()
        .iter()
        .zip(v.elements())
        .enumerate()
        .all(|(h, (a, b))| h == i - 1 || h == i || a == b))
}

/// `i`-coupled with both lattices sign-flipped at `(i, i+1)`:
/// `u_i = -u_{i+1}` and `v_i = -v_{i+1}`.
pub fn ibar_coupled(u: &PermutationLattice, v: &PermutationLattice, i: usize) -> Result<bool> {
    Ok(i_coupled(u, v, i)? && ibar_self(u, i) && ibar_self(v, i))
}

/// Whether `w_i = -w_{i+1}` (the path revisits the same diagram at `i+1`).
pub fn ibar_self(w: &PermutationLattice, i: usize) -> bool {
    w.elements()[i - 1] == -w.elements()[i]
}

/// All lattices of the same order and diagram that are `i`-coupled to `w`,
/// in canonical order. Always contains `w`.
pub fn theta_set(w: &PermutationLattice, i: usize) -> Result<Vec<PermutationLattice>> {
    check_index(w, i)?;
    let before = w.prefix(i - 1)?.shape().clone();
    let after = w.prefix(i + 1)?.shape().clone();
    let mut out = Vec::new();
    let mut first_moves: Vec<(i32, Shape)> = Vec::new();
    for r in before.removable_rows() {
        first_moves.push((-(r as i32), before.with_box_removed(r).expect("removable")));
    }
    for r in before.addable_rows() {
        first_moves.push((r as i32, before.with_box_added(r).expect("addable")));
    }
    for (e1, mid) in &first_moves {
        let mut second_moves: Vec<i32> = Vec::new();
        for r in mid.removable_rows() {
            if mid.with_box_removed(r).as_ref() == Some(&after) {
                second_moves.push(-(r as i32));
            }
        }
        for r in mid.addable_rows() {
            if mid.with_box_added(r).as_ref() == Some(&after) {
                second_moves.push(r as i32);
            }
        }
        for e2 in second_moves {
            let mut elements = w.elements().to_vec();
            elements[i - 1] = *e1;
            elements[i] = e2;
            out.push(
                PermutationLattice::from_elements(elements)
                    .expect("same prefix and suffix diagrams keep the word valid"),
            );
        }
    }
    out.sort();
    Ok(out)
}

/// All lattices `ibar`-coupled to `w`, in canonical order; empty unless `w`
/// itself is sign-flipped at `(i, i+1)`.
pub fn theta_bar_set(w: &PermutationLattice, i: usize) -> Result<Vec<PermutationLattice>> {
    if !ibar_self(w, i) {
        check_index(w, i)?;
        return Ok(Vec::new());
    }
    let mut out = theta_set(w, i)?;
    out.retain(|u| ibar_self(u, i));
    Ok(out)
}

/// Content weight of step `k` of `w` (a Jucys-Murphy eigenvalue):
/// `(x-1)/2 + content` for a box addition, the negative for a removal.
pub fn step_weight(w: &PermutationLattice, k: usize, x: &RationalParam) -> Result<Rational> {
    let step = w.step(k)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let base = (x.value() - Rational::one()) * half
        + Rational::from_integer(BigInt::from(step.content()));
    Ok(if step.add { base } else { -base })
}

/// Weight gap `step_weight(u, i+1) - step_weight(v, i)`. For `u = v` this is
/// the generalized axial distance of the Young orthogonal form; on
/// sign-flipped pairs it is symmetric in `u` and `v`.
pub fn weight_gap(
    u: &PermutationLattice,
    v: &PermutationLattice,
    i: usize,
    x: &RationalParam,
) -> Result<Rational> {
    check_pair(u, v)?;
    Ok(step_weight(u, i + 1, x)? - step_weight(v, i, x)?)
}

/// An irreducible `B_f(x)` module `[f, λ]`: canonical lattice basis plus the
/// `f - 1` symmetric generator matrices for `g_i` and `e_i`.
#[derive(Debug, Clone)]
pub struct GtModule<T: Float> {
    f: usize,
    shape: Shape,
    x: RationalParam,
    basis: Vec<PermutationLattice>,
    index: HashMap<PermutationLattice, usize>,
    g_mats: Vec<DMatrix<T>>,
    e_mats: Vec<DMatrix<T>>,
}

impl<T: Float> GtModule<T> {
    /// Builds the module for `[f, shape]` at parameter `x`.
    ///
    /// Semisimplicity of `x` is the caller's concern (see
    /// [`RationalParam::guard`]); construction aborts only on genuine
    /// degeneracies: a vanishing denominator that is not a removable zero,
    /// or a negative radicand.
    pub fn build(f: usize, shape: &Shape, x: &RationalParam) -> Result<Self> {
        let basis = PermutationLattice::enumerate(f, shape);
        let n = basis.len();
        let index: HashMap<_, _> = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, w)| (w, k))
            .collect();
        let prefix_shapes: Vec<Vec<Shape>> = basis.iter().map(|w| w.prefix_shapes()).collect();
        let mut poly_cache: HashMap<Shape, (RationalPolynomial, Rational)> = HashMap::new();

        let mut g_mats = Vec::new();
        let mut e_mats = Vec::new();
        for i in 1..f.max(1) {
            let mut g = DMatrix::<T>::zeros(n, n);
            let mut e = DMatrix::<T>::zeros(n, n);
            let mut seen = vec![false; n];
            for a in 0..n {
                if seen[a] {
                    continue;
                }
                let class: Vec<usize> = theta_set(&basis[a], i)?
                    .iter()
                    .map(|u| index[u])
                    .collect();
                for &b in &class {
                    seen[b] = true;
                }
                if ibar_self(&basis[a], i) {
                    build_flip_block(
                        f,
                        shape,
                        x,
                        i,
                        &basis,
                        &prefix_shapes,
                        &class,
                        &mut poly_cache,
                        &mut g,
                        &mut e,
                    )?;
                } else {
                    build_orthogonal_block(f, shape, x, i, &basis, &class, &mut g)?;
                }
            }
            if f >= 2 {
                g_mats.push(g);
                e_mats.push(e);
            }
        }

        Ok(Self {
            f,
            shape: shape.clone(),
            x: x.clone(),
            basis,
            index,
            g_mats,
            e_mats,
        })
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn x(&self) -> &RationalParam {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PermutationLattice] {
        &self.basis
    }

    pub fn index_of(&self, w: &PermutationLattice) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Matrix of `g_i`, `1 <= i <= f-1`.
    pub fn g(&self, i: usize) -> &DMatrix<T> {
        &self.g_mats[i - 1]
    }

    /// Matrix of `e_i`, `1 <= i <= f-1`.
    pub fn e(&self, i: usize) -> &DMatrix<T> {
        &self.e_mats[i - 1]
    }

    pub fn num_generators(&self) -> usize {
        self.g_mats.len()
    }

    /// Max-norm residuals of the defining relations, hermiticity, and the
    /// spectral properties of the `e_i`.
    pub fn check_relations(&self) -> RelationReport {
        let n = self.dim();
        let id = DMatrix::<T>::identity(n, n);
        let x = T::from_rational(self.x.value()).to_double();
        let mut r = RelationReport::default();
        let m = self.num_generators();
        for i in 0..m {
            let g = &self.g_mats[i];
            let e = &self.e_mats[i];
            r.hermiticity = r
                .hermiticity
                .max(amax(&(g - g.transpose())))
                .max(amax(&(e - e.transpose())));
            r.g_square = r.g_square.max(amax(&(g * g - &id)));
            r.e_square = r
                .e_square
                .max(amax(&(e * e - e * T::from_double(x))));
            r.e_g_identity = r.e_g_identity.max(amax(&(e * g - e)));
            if i >= 1 {
                let gp = &self.g_mats[i - 1];
                let ep = &self.e_mats[i - 1];
                r.e_g_e_identity = r.e_g_e_identity.max(amax(&(e * gp * e - e)));
                r.extra_e_g_e_up = r.extra_e_g_e_up.max(amax(&(ep * g * ep - ep)));
                r.extra_e_e_e = r
                    .extra_e_e_e
                    .max(amax(&(e * ep * e - e)))
                    .max(amax(&(ep * e * ep - ep)));
            }
            if i + 1 < m {
                let gn = &self.g_mats[i + 1];
                r.braid = r.braid.max(amax(&(g * gn * g - gn * g * gn)));
            }
            for j in (i + 2)..m {
                let gj = &self.g_mats[j];
                let ej = &self.e_mats[j];
                r.distant_commutation = r.distant_commutation.max(amax(&(g * gj - gj * g)));
                r.extra_distant_ee = r.extra_distant_ee.max(amax(&(e * ej - ej * e)));
                r.extra_distant_ge = r
                    .extra_distant_ge
                    .max(amax(&(g * ej - ej * g)))
                    .max(amax(&(e * gj - gj * e)));
            }
            let eig = e.clone().symmetric_eigenvalues();
            let mut rank = 0usize;
            let mut spectral = 0f64;
            for k in 0..eig.len() {
                let lam = eig[k].to_double();
                spectral = spectral.max(lam.abs().min((lam - x).abs()));
                if lam > x / 2.0 {
                    rank += 1;
                }
            }
            r.e_eigenvalue = r.e_eigenvalue.max(spectral);
            let trace: f64 = (0..n).map(|k| e[(k, k)].to_double()).sum();
            r.e_trace_rank = r.e_trace_rank.max((trace - x * rank as f64).abs());
        }
        r
    }
}

#[allow(clippy::too_many_arguments)]
fn build_flip_block<T: Float>(
    f: usize,
    shape: &Shape,
    x: &RationalParam,
    i: usize,
    basis: &[PermutationLattice],
    prefix_shapes: &[Vec<Shape>],
    class: &[usize],
    poly_cache: &mut HashMap<Shape, (RationalPolynomial, Rational)>,
    g: &mut DMatrix<T>,
    e: &mut DMatrix<T>,
) -> Result<()> {
    let mut cached = |shape: &Shape| -> (RationalPolynomial, Rational) {
        poly_cache
            .entry(shape.clone())
            .or_insert_with(|| {
                let p = p_poly(shape);
                let v = p.eval(x.value());
                (p, v)
            })
            .clone()
    };
    let degenerate = |detail: String| Error::DegenerateDenominator {
        f,
        shape: shape.to_string(),
        index: i,
        detail,
    };
    let negative = |detail: String| Error::NegativeRadicand {
        f,
        shape: shape.to_string(),
        index: i,
        detail,
    };

    let mu = &prefix_shapes[class[0]][i - 1];
    let (mu_poly, mu_val) = cached(mu);
    if mu_val <= Rational::zero() {
        return Err(negative(format!("P_{mu}({x}) = {mu_val} is not positive")));
    }
    struct Member {
        idx: usize,
        nu: Shape,
        nu_poly: RationalPolynomial,
        nu_val: Rational,
        weight: Rational,
    }
    let mut members = Vec::with_capacity(class.len());
    for &b in class {
        let u = &basis[b];
        debug_assert!(ibar_self(u, i));
        let nu = prefix_shapes[b][i].clone();
        let (nu_poly, nu_val) = cached(&nu);
        if nu_val < Rational::zero() {
            return Err(negative(format!("P_{nu}({x}) = {nu_val} is negative")));
        }
        members.push(Member {
            idx: b,
            nu,
            nu_poly,
            nu_val,
            weight: step_weight(u, i + 1, x)?,
        });
    }
    let mu_f = T::from_rational(&mu_val);
    for (pa, ma) in members.iter().enumerate() {
        for mb in members.iter().skip(pa) {
            let radicand = &ma.nu_val * &mb.nu_val;
            let psi = T::sqrt_rational(&radicand);
            let e_entry = psi / mu_f;
            e[(ma.idx, mb.idx)] = e_entry;
            e[(mb.idx, ma.idx)] = e_entry;
            if ma.idx == mb.idx {
                let gap = &ma.weight + &ma.weight;
                let entry = if !gap.is_zero() {
                    T::from_rational(&((&mu_val - &ma.nu_val) / (gap * &mu_val)))
                } else {
                    // the gap is linear in x, so the vanishing diagonal is a
                    // removable zero of (P_mu - P_nu) / (gap P_mu)
                    let step = basis[ma.idx].step(i)?;
                    let root = Rational::from_integer(BigInt::from(1 - 2 * step.content()));
                    let sign = BigInt::from(if step.add { -1 } else { 1 });
                    let quotient = mu_poly
                        .sub(&ma.nu_poly)
                        .div_exact_by_linear(&root)
                        .ok_or_else(|| {
                            degenerate(format!(
                                "gap vanishes at {} but P_{mu} - P_{} has no matching root",
                                basis[ma.idx], ma.nu
                            ))
                        })?;
                    T::from_rational(
                        &(quotient.eval(x.value()) / (Rational::from_integer(sign) * &mu_val)),
                    )
                };
                g[(ma.idx, ma.idx)] = entry;
            } else {
                let gap = &ma.weight + &mb.weight;
                if gap.is_zero() {
                    return Err(degenerate(format!(
                        "weight gap vanishes between {} and {}",
                        basis[ma.idx], basis[mb.idx]
                    )));
                }
                let entry = -psi / T::from_rational(&(gap * &mu_val));
                g[(ma.idx, mb.idx)] = entry;
                g[(mb.idx, ma.idx)] = entry;
            }
        }
    }
    Ok(())
}

fn build_orthogonal_block<T: Float>(
    f: usize,
    shape: &Shape,
    x: &RationalParam,
    i: usize,
    basis: &[PermutationLattice],
    class: &[usize],
    g: &mut DMatrix<T>,
) -> Result<()> {
    let degenerate = |detail: String| Error::DegenerateDenominator {
        f,
        shape: shape.to_string(),
        index: i,
        detail,
    };
    if class.len() > 2 {
        return Err(degenerate(format!(
            "unexpected coupling class of size {}",
            class.len()
        )));
    }
    for &b in class {
        let d = weight_gap(&basis[b], &basis[b], i, x)?;
        if d.is_zero() {
            return Err(degenerate(format!("axial gap vanishes at {}", basis[b])));
        }
        g[(b, b)] = T::from_rational(&d.recip());
    }
    if class.len() == 2 {
        let d = weight_gap(&basis[class[0]], &basis[class[0]], i, x)?;
        let radicand = Rational::one() - (&d * &d).recip();
        if radicand < Rational::zero() {
            return Err(Error::NegativeRadicand {
                f,
                shape: shape.to_string(),
                index: i,
                detail: format!("1 - 1/d^2 = {radicand} at {}", basis[class[0]]),
            });
        }
        let off = T::sqrt_rational(&radicand);
        g[(class[0], class[1])] = off;
        g[(class[1], class[0])] = off;
    }
    Ok(())
}

fn amax<T: Float>(m: &DMatrix<T>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.to_double().abs()))
}

/// Max-norm residuals from [`GtModule::check_relations`]. The `extra_*`
/// fields are not in the defining presentation; they are reported but do not
/// gate [`RelationReport::passes`].
#[derive(Debug, Clone, Default)]
pub struct RelationReport {
    pub braid: f64,
    pub distant_commutation: f64,
    pub e_g_identity: f64,
    pub e_g_e_identity: f64,
    pub e_square: f64,
    pub g_square: f64,
    pub hermiticity: f64,
    pub e_eigenvalue: f64,
    pub e_trace_rank: f64,
    pub extra_e_g_e_up: f64,
    pub extra_e_e_e: f64,
    pub extra_distant_ee: f64,
    pub extra_distant_ge: f64,
}

impl RelationReport {
    /// Largest residual among the defining relations, hermiticity, and the
    /// spectral checks.
    pub fn max_gated(&self) -> f64 {
        [
            self.braid,
            self.distant_commutation,
            self.e_g_identity,
            self.e_g_e_identity,
            self.e_square,
            self.g_square,
            self.hermiticity,
            self.e_eigenvalue,
            self.e_trace_rank,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_gated() <= tol
    }
}

impl std::fmt::Display for RelationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "braid                 {:.3e}", self.braid)?;
        writeln!(f, "distant commutation   {:.3e}", self.distant_commutation)?;
        writeln!(f, "e g = e               {:.3e}", self.e_g_identity)?;
        writeln!(f, "e g' e = e            {:.3e}", self.e_g_e_identity)?;
        writeln!(f, "e^2 = x e             {:.3e}", self.e_square)?;
        writeln!(f, "g^2 = 1               {:.3e}", self.g_square)?;
        writeln!(f, "hermiticity           {:.3e}", self.hermiticity)?;
        writeln!(f, "e spectrum in {{0,x}}   {:.3e}", self.e_eigenvalue)?;
        writeln!(f, "trace e = x rank e    {:.3e}", self.e_trace_rank)?;
        writeln!(f, "extra: e g'' e = e    {:.3e}", self.extra_e_g_e_up)?;
        writeln!(f, "extra: e e' e = e     {:.3e}", self.extra_e_e_e)?;
        writeln!(f, "extra: distant e e    {:.3e}", self.extra_distant_ee)?;
        write!(f, "extra: distant g e    {:.3e}", self.extra_distant_ge)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Real;

    fn lat(elements: &[i32]) -> PermutationLattice {
        PermutationLattice::from_elements(elements.to_vec()).unwrap()
    }

    fn shape(rows: &[u32]) -> Shape {
        Shape::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn coupling_predicates() {
        let a = lat(&[1, -1, 1]);
        let b = lat(&[1, 1, -1]);
        let c = lat(&[1, 2, -2]);
        assert!(i_coupled(&a, &a, 1).unwrap());
        assert!(i_coupled(&a, &b, 2).unwrap());
        assert!(!i_coupled(&a, &c, 1).unwrap());
        assert!(ibar_coupled(&a, &a, 1).unwrap());
        assert!(!ibar_coupled(&b, &b, 1).unwrap());
        assert!(ibar_coupled(&b, &b, 2).unwrap());
        assert!(i_coupled(&a, &lat(&[1, 1]), 1).is_err());
        assert!(i_coupled(&a, &b, 3).is_err());
    }

    #[test]
    fn theta_sets() {
        assert_eq!(theta_set(&lat(&[1, 1]), 1).unwrap(), vec![lat(&[1, 1])]);
        assert_eq!(theta_bar_set(&lat(&[1, -1]), 1).unwrap(), vec![lat(&[1, -1])]);
        let t = theta_set(&lat(&[1, -1, 1]), 2).unwrap();
        assert_eq!(t, vec![lat(&[1, -1, 1]), lat(&[1, 1, -1]), lat(&[1, 2, -2])]);
        assert_eq!(theta_bar_set(&lat(&[1, 1, -1]), 1).unwrap(), Vec::new());
        // a flip-class theta set is entirely flipped
        assert_eq!(theta_bar_set(&lat(&[1, -1, 1]), 2).unwrap(), t);
    }

    #[test]
    fn rank_one_anchors() {
        // forced by the relations on one-dimensional modules
        let x = RationalParam::ratio(7, 2);
        let m = GtModule::<Real>::build(2, &shape(&[2]), &x).unwrap();
        assert_eq!(m.g(1)[(0, 0)], 1.0);
        assert_eq!(m.e(1)[(0, 0)], 0.0);
        let m = GtModule::<Real>::build(2, &shape(&[1, 1]), &x).unwrap();
        assert_eq!(m.g(1)[(0, 0)], -1.0);
        assert_eq!(m.e(1)[(0, 0)], 0.0);
        let m = GtModule::<Real>::build(2, &Shape::empty(), &x).unwrap();
        assert_eq!(m.g(1)[(0, 0)], 1.0);
        assert_eq!(m.e(1)[(0, 0)], 3.5);
        let m = GtModule::<Real>::build(2, &Shape::empty(), &RationalParam::from_integer(5)).unwrap();
        assert_eq!(m.e(1)[(0, 0)], 5.0);
        assert_eq!(m.g(1)[(0, 0)], 1.0);
    }

    #[test]
    fn young_orthogonal_form_on_tableaux() {
        // [3, [2,1]] restricted to the symmetric-group generators
        let x = RationalParam::ratio(7, 2);
        let m = GtModule::<Real>::build(3, &shape(&[2, 1]), &x).unwrap();
        assert_eq!(m.basis(), &[lat(&[1, 1, 2]), lat(&[1, 2, 1])]);
        assert_eq!(m.g(1)[(0, 0)], 1.0);
        assert_eq!(m.g(1)[(1, 1)], -1.0);
        assert_eq!(m.g(2)[(0, 0)], -0.5);
        assert_eq!(m.g(2)[(1, 1)], 0.5);
        assert_eq!(m.g(2)[(0, 1)], 0.75f64.sqrt());
        assert_eq!(amax(m.e(1)), 0.0);
        assert_eq!(amax(m.e(2)), 0.0);
    }

    #[test]
    fn sparsity_pattern_follows_coupling() {
        let x = RationalParam::ratio(7, 2);
        for f in 2..=4 {
            for lam in Shape::upsilon(f) {
                let m = GtModule::<Real>::build(f, &lam, &x).unwrap();
                for i in 1..f {
                    for a in 0..m.dim() {
                        for b in 0..m.dim() {
                            let coupled =
                                i_coupled(&m.basis()[a], &m.basis()[b], i).unwrap();
                            let flipped =
                                ibar_coupled(&m.basis()[a], &m.basis()[b], i).unwrap();
                            if !coupled {
                                assert_eq!(m.g(i)[(a, b)], 0.0);
                                assert_eq!(m.e(i)[(a, b)], 0.0);
                            }
                            if !flipped {
                                assert_eq!(m.e(i)[(a, b)], 0.0);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn relations_hold_on_small_modules() {
        for x in [RationalParam::ratio(7, 2), RationalParam::from_integer(6)] {
            for f in 2..=4 {
                for lam in Shape::upsilon(f) {
                    let m = GtModule::<Real>::build(f, &lam, &x).unwrap();
                    let report = m.check_relations();
                    assert!(
                        report.passes(1e-12),
                        "[{f}, {lam}] at x = {x}:\n{report}"
                    );
                }
            }
        }
    }

    #[test]
    fn removable_zero_in_flip_diagonal() {
        // at x = 5 the diagonal gap for (1,2,3,-3) vanishes; the entry is the
        // exact polynomial quotient and all relations still hold
        let x = RationalParam::from_integer(5);
        let m = GtModule::<Real>::build(4, &shape(&[1, 1]), &x).unwrap();
        let report = m.check_relations();
        assert!(report.passes(1e-12), "{report}");
        let idx = m.index_of(&lat(&[1, 2, 3, -3])).unwrap();
        assert_eq!(m.g(3)[(idx, idx)], 1.0 / 3.0);
    }

    #[test]
    fn f32_instantiation() {
        let x = RationalParam::ratio(7, 2);
        let m = GtModule::<f32>::build(3, &shape(&[1]), &x).unwrap();
        assert!(m.check_relations().passes(1e-5));
    }
}
