use super::{d_acc, wedge_acc};
use crate::error::{Error, Result};
use crate::grid_fields::{so3_slot, FormField, Grid, TensorField, ValueKind};

const MIN_COFRAME_DET: f64 = 1e-10;


/// Frame-vector valued 1-form `e^i = e^i_a dx^a`, invertible at every point.
#[derive(Debug, Clone, PartialEq)]
pub struct Coframe(FormField);

impl Coframe {
    pub fn new(field: FormField) -> Result<Self> {
        if field.kind() != ValueKind::Frame || field.degree() != 1 {
            return Err(Error::InvalidArgument(
                "a coframe is a frame-vector valued 1-form".into(),
            ));
        }
        for p in 0..field.grid().len() {
            let det = crate::mat3::det(&matrix_at(&field, p));
            if !(det >= MIN_COFRAME_DET) {
                return Err(Error::SingularCoframe { point: p, det });
            }
        }
        Ok(Self(field))
    }

    /// `e^i = dX^i`.
    pub fn identity(grid: Grid) -> Self {
        Self(
            FormField::from_fn(grid, 1, ValueKind::Frame, |_, i, a| if i == a { 1.0 } else { 0.0 })
                .expect("degree 1"),
        )
    }

    /// Coframe from the per-point matrix `m[i][a] = e^i_a`.
    pub fn from_matrix_fn(grid: Grid, f: impl Fn([f64; 3]) -> [[f64; 3]; 3]) -> Result<Self> {
        Self::from_tensor(&TensorField::from_fn(grid, f))
    }

    /// Coframe whose components `e^i_a` are the entries `(i, a)` of `t`.
    pub fn from_tensor(t: &TensorField) -> Result<Self> {
        let mut field = FormField::zeros(*t.grid(), 1, ValueKind::Frame)?;
        for i in 0..3 {
            for a in 0..3 {
                field.component_mut(i, a).copy_from_slice(t.component(i, a));
            }
        }
        Self::new(field)
    }

    pub fn field(&self) -> &FormField {
        &self.0
    }

    pub fn into_field(self) -> FormField {
        self.0
    }

    pub fn grid(&self) -> &Grid {
        self.0.grid()
    }

    /// `m[i][a] = e^i_a` at point `p`.
    pub fn matrix_at(&self, p: usize) -> [[f64; 3]; 3] {
        matrix_at(&self.0, p)
    }

    pub fn to_tensor(&self) -> TensorField {
        let mut t = TensorField::zeros(*self.grid());
        for i in 0..3 {
            for a in 0..3 {
                t.component_mut(i, a).copy_from_slice(self.0.component(i, a));
            }
        }
        t
    }
}

fn matrix_at(field: &FormField, p: usize) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (a, v) in row.iter_mut().enumerate() {
            *v = field.component(i, a)[p];
        }
    }
    m
}

/// so(3) valued 1-form `ω^i_j = ω^i_{j,a} dx^a`; skew in `ij` by storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection(FormField);

impl Connection {
    pub fn new(field: FormField) -> Result<Self> {
        if field.kind() != ValueKind::So3 || field.degree() != 1 {
            return Err(Error::InvalidArgument(
                "a connection is an so(3) valued 1-form".into(),
            ));
        }
        Ok(Self(field))
    }

    pub fn zero(grid: Grid) -> Self {
        Self(FormField::zeros(grid, 1, ValueKind::So3).expect("degree 1"))
    }

    /// Connection from `f(x)[a]`, the skew matrix `ω^i_{j,a}` for each axis `a`.
    /// Only the upper triangle is read.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [[[f64; 3]; 3]; 3]) -> Self {
        let mut field = FormField::zeros(grid, 1, ValueKind::So3).expect("degree 1");
        for p in 0..grid.len() {
            let w = f(grid.position(p));
            for (v, &(i, j)) in crate::grid_fields::SO3_PAIRS.iter().enumerate() {
                for (a, wa) in w.iter().enumerate() {
                    field.component_mut(v, a)[p] = wa[i][j];
                }
            }
        }
        Self(field)
    }

    pub fn field(&self) -> &FormField {
        &self.0
    }

    pub fn grid(&self) -> &Grid {
        self.0.grid()
    }

    /// Interior product with a vector field: the so(3) valued 0-form `i_u ω`.
    pub fn contract(&self, u: &crate::grid_fields::VectorField) -> Result<FormField> {
        super::interior_product(u, &self.0)
    }
}

/// `out^i += factor * Σ_j A^i_j ∧ α^j` for so(3) valued `A` and frame-vector valued `α`.
fn add_so3_frame_product(a: &FormField, alpha: &FormField, factor: f64, out: &mut FormField) {
    let (p, k) = (a.degree(), alpha.degree());
    for i in 0..3 {
        for j in 0..3 {
            if let Some((s, slot)) = so3_slot(i, j) {
                wedge_acc(
                    p,
                    &a.value_components(slot),
                    k,
                    &alpha.value_components(j),
                    factor * s,
                    &mut out.value_components_mut(i),
                );
            }
        }
    }
}

/// `out^{ij} += factor * Σ_m A^i_m ∧ B^m_j` for so(3) valued forms.
fn add_so3_product(a: &FormField, b: &FormField, factor: f64, out: &mut FormField) {
    let (p, q) = (a.degree(), b.degree());
    for (v, &(i, j)) in crate::grid_fields::SO3_PAIRS.iter().enumerate() {
        for m in 0..3 {
            if let (Some((sa, va)), Some((sb, vb))) = (so3_slot(i, m), so3_slot(m, j)) {
                wedge_acc(
                    p,
                    &a.value_components(va),
                    q,
                    &b.value_components(vb),
                    factor * sa * sb,
                    &mut out.value_components_mut(v),
                );
            }
        }
    }
}

/// Covariant exterior derivative `D` of `ω`.
///
/// * scalar forms: plain `d`;
/// * frame-vector forms: `Dα^i = dα^i + ω^i_j ∧ α^j`;
/// * so(3) forms: `Dβ^i_j = dβ^i_j + ω^i_k ∧ β^k_j - (-1)^k β^i_k ∧ ω^k_j`
///   (the adjoint action; for even degree this is the plain commutator).
pub fn covariant_exterior_derivative(alpha: &FormField, omega: &Connection) -> Result<FormField> {
    if alpha.grid() != omega.grid() {
        return Err(Error::GridMismatch);
    }
    let k = alpha.degree();
    if k >= 3 {
        return Err(Error::DegreeOverflow(k + 1));
    }
    let mut out = super::exterior_derivative(alpha)?;
    match alpha.kind() {
        ValueKind::Scalar => {}
        ValueKind::Frame => add_so3_frame_product(omega.field(), alpha, 1.0, &mut out),
        ValueKind::So3 => {
            let sign = if k.is_multiple_of(2) { -1.0 } else { 1.0 };
            add_so3_product(omega.field(), alpha, 1.0, &mut out);
            add_so3_product(alpha, omega.field(), sign, &mut out);
        }
    }
    Ok(out)
}

/// Torsion `T^i = de^i + ω^i_j ∧ e^j`.
pub fn torsion(e: &Coframe, omega: &Connection) -> Result<FormField> {
    covariant_exterior_derivative(e.field(), omega)
}

/// Curvature `Ω^i_j = dω^i_j + ω^i_k ∧ ω^k_j`.
pub fn curvature(omega: &Connection) -> FormField {
    let w = omega.field();
    let mut out = FormField::zeros(*w.grid(), 2, ValueKind::So3).expect("degree 2");
    for v in 0..3 {
        d_acc(w.grid(), 1, &w.value_components(v), 1.0, &mut out.value_components_mut(v));
    }
    add_so3_product(w, w, 1.0, &mut out);
    out
}

/// First Bianchi defect `DT^i - Ω^i_j ∧ e^j`, a frame-vector valued 3-form
/// that vanishes identically in the continuum.
pub fn bianchi_first(e: &Coframe, omega: &Connection) -> Result<FormField> {
    let t = torsion(e, omega)?;
    let mut out = covariant_exterior_derivative(&t, omega)?;
    add_so3_frame_product(&curvature(omega), e.field(), -1.0, &mut out);
    Ok(out)
}

/// Second Bianchi defect `DΩ^i_j`, an so(3) valued 3-form.
pub fn bianchi_second(omega: &Connection) -> FormField {
    covariant_exterior_derivative(&curvature(omega), omega).expect("degree 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{exterior_derivative, wedge};
    use crate::grid_fields::partial_derivative;

    fn grid() -> Grid {
        Grid::new(8, 1.0).unwrap()
    }

    fn smooth_connection(g: Grid) -> Connection {
        Connection::from_fn(g, |x| {
            let mut w = [[[0.0; 3]; 3]; 3];
            for (a, wa) in w.iter_mut().enumerate() {
                let t = std::f64::consts::TAU;
                let s = [
                    0.3 * (t * x[0] + a as f64).sin(),
                    0.2 * (t * x[1] - a as f64).cos(),
                    0.25 * (t * (x[2] + x[0])).sin(),
                ];
                wa[0][1] = s[0];
                wa[1][0] = -s[0];
                wa[0][2] = s[1];
                wa[2][0] = -s[1];
                wa[1][2] = s[2];
                wa[2][1] = -s[2];
            }
            w
        })
    }

    fn smooth_coframe(g: Grid) -> Coframe {
        Coframe::from_matrix_fn(g, |x| {
            let t = std::f64::consts::TAU;
            let mut m = [[0.0; 3]; 3];
            for (i, row) in m.iter_mut().enumerate() {
                for (a, v) in row.iter_mut().enumerate() {
                    *v = if i == a { 1.0 } else { 0.0 }
                        + 0.1 * (t * x[(i + a) % 3] + 0.5 * i as f64 - 0.3 * a as f64).sin();
                }
            }
            m
        })
        .unwrap()
    }

    #[test]
    fn coframe_rejects_singular_matrices() {
        let g = grid();
        let err = Coframe::from_matrix_fn(g, |_| [[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(err, Err(Error::SingularCoframe { .. })));
        let flipped = Coframe::from_matrix_fn(g, |_| [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(flipped.is_err());
    }

    #[test]
    fn flat_reduction_is_bitwise() {
        let g = grid();
        let e = smooth_coframe(g);
        let t = torsion(&e, &Connection::zero(g)).unwrap();
        assert_eq!(t, exterior_derivative(e.field()).unwrap());
        assert_eq!(torsion(&Coframe::identity(g), &Connection::zero(g)).unwrap().max_abs(), 0.0);
        assert_eq!(curvature(&Connection::zero(g)).max_abs(), 0.0);
    }

    #[test]
    fn torsion_matches_reassembly_from_raw_stencils() {
        let g = grid();
        let e = smooth_coframe(g);
        let w = smooth_connection(g);
        let t = torsion(&e, &w).unwrap();
        for p in [0, 77, 300, g.len() - 1] {
            for i in 0..3 {
                for a in 0..3 {
                    for b in 0..3 {
                        let de = partial_derivative(&g, e.field().component(i, b), a)[p]
                            - partial_derivative(&g, e.field().component(i, a), b)[p];
                        let mut we = 0.0;
                        for j in 0..3 {
                            let wa = w.field().so3_value_at(i, j, &[a], p);
                            let wb = w.field().so3_value_at(i, j, &[b], p);
                            we += wa * e.field().component(j, b)[p] - wb * e.field().component(j, a)[p];
                        }
                        let got = t.value_at(i, &[a, b], p);
                        assert!((got - (de + we)).abs() < 1e-12, "{got} vs {}", de + we);
                    }
                }
            }
        }
    }

    #[test]
    fn constant_connection_curvature_is_commutator() {
        let g = grid();
        let (a, b) = (0.7, -1.3);
        // ω^1_2 = a dx, ω^2_3 = b dy (frame indices 1-based)
        let w = Connection::from_fn(g, |_| {
            let mut w = [[[0.0; 3]; 3]; 3];
            w[0][0][1] = a;
            w[0][1][0] = -a;
            w[1][1][2] = b;
            w[1][2][1] = -b;
            w
        });
        let omega = curvature(&w);
        // brute-force shuffle sum of ω^i_k ∧ ω^k_j at one point
        for i in 0..3 {
            for j in 0..3 {
                for x in 0..3 {
                    for y in 0..3 {
                        let mut oracle = 0.0;
                        for k in 0..3 {
                            oracle += w.field().so3_value_at(i, k, &[x], 0) * w.field().so3_value_at(k, j, &[y], 0)
                                - w.field().so3_value_at(i, k, &[y], 0) * w.field().so3_value_at(k, j, &[x], 0);
                        }
                        assert!((omega.so3_value_at(i, j, &[x, y], 0) - oracle).abs() < 1e-15);
                    }
                }
            }
        }
        // hand expansion: Ω^1_3 = ω^1_2 ∧ ω^2_3 = ab dx∧dy
        assert!((omega.so3_value_at(0, 2, &[0, 1], 3) - a * b).abs() < 1e-15);
        assert_eq!(omega.component(0, 0)[3], 0.0);
        assert_eq!(omega.component(2, 0)[3], 0.0);
    }

    #[test]
    fn so3_zero_form_covariant_derivative_is_commutator() {
        let g = grid();
        let w = Connection::from_fn(g, |_| {
            let mut w = [[[0.0; 3]; 3]; 3];
            for (a, wa) in w.iter_mut().enumerate() {
                let s = [0.4 + a as f64, -0.9 * a as f64, 0.3];
                wa[0][1] = s[0];
                wa[0][2] = s[1];
                wa[1][2] = s[2];
            }
            w
        });
        let beta_vals = [1.1, -0.4, 2.5];
        let beta = FormField::from_fn(g, 0, ValueKind::So3, |_, v, _| beta_vals[v]).unwrap();
        let db = covariant_exterior_derivative(&beta, &w).unwrap();
        let full = |f: &FormField, i: usize, j: usize, idx: &[usize]| f.so3_value_at(i, j, idx, 0);
        for a in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut comm = 0.0;
                    for k in 0..3 {
                        comm += full(w.field(), i, k, &[a]) * full(&beta, k, j, &[])
                            - full(&beta, i, k, &[]) * full(w.field(), k, j, &[a]);
                    }
                    assert!((full(&db, i, j, &[a]) - comm).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn scalar_wedge_agrees_with_frame_product() {
        let g = grid();
        let e = smooth_coframe(g);
        let f = FormField::from_fn(g, 1, ValueKind::Scalar, |x, _, c| (x[c] * 3.0).cos()).unwrap();
        let fe = wedge(&f, e.field()).unwrap();
        let ef = wedge(e.field(), &f).unwrap();
        assert_eq!(fe, -&ef);
    }
}
