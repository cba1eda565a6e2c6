//! Levi-Civita dualizations with `ε_{123} = +1` and frame indices raised and
//! lowered by the identity.

use crate::error::{Error, Result};
use crate::grid_fields::{FormField, TensorField, ValueKind, VectorField};

/// `ε_{ijk}` for indices in `0..3`.
#[inline]
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

// (stored 2-form slot, dual index c, sign ε_{abc}) for (a, b) = (0,1), (0,2), (1,2)
const TWO_FORM_DUAL: [(usize, usize, f64); 3] = [(0, 2, 1.0), (1, 1, -1.0), (2, 0, 1.0)];

/// `σ^c_i = ½ ε^{cab} (Σ_i)_{ab}`; the tensor stores `σ^c_i` at `(i, c)`.
pub fn dualize_stress(sigma: &FormField) -> Result<TensorField> {
    if sigma.degree() != 2 || sigma.kind() != ValueKind::Frame {
        return Err(Error::InvalidArgument(
            "stress dualization expects a frame-vector valued 2-form".into(),
        ));
    }
    let mut out = TensorField::zeros(*sigma.grid());
    for i in 0..3 {
        for &(slot, c, sign) in &TWO_FORM_DUAL {
            let src = sigma.component(i, slot);
            for (o, s) in out.component_mut(i, c).iter_mut().zip(src) {
                *o = sign * s;
            }
        }
    }
    Ok(out)
}

/// Inverse of [`dualize_stress`]: `(Σ_i)_{ab} = ε_{abc} σ^c_i`.
pub fn undualize_stress(stress: &TensorField) -> FormField {
    let mut out = FormField::zeros(*stress.grid(), 2, ValueKind::Frame).expect("degree 2");
    for i in 0..3 {
        for &(slot, c, sign) in &TWO_FORM_DUAL {
            let src = stress.component(i, c);
            for (o, s) in out.component_mut(i, slot).iter_mut().zip(src) {
                *o = sign * s;
            }
        }
    }
    out
}

fn check_skew(x: &TensorField) -> Result<()> {
    let scale = x.max_abs();
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in i..3 {
            for (a, b) in x.component(i, j).iter().zip(x.component(j, i)) {
                worst = worst.max((a + b).abs());
            }
        }
    }
    if worst > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSkew(worst));
    }
    Ok(())
}

/// Axial vector of a skew pair field, `X_r = ½ ε_r^{ij} X_{ij}`.
pub fn axial_dual(x: &TensorField) -> Result<VectorField> {
    check_skew(x)?;
    let mut out = VectorField::zeros(*x.grid());
    for (r, (i, j)) in [(0, (1, 2)), (1, (2, 0)), (2, (0, 1))] {
        let (a, b) = (x.component(i, j), x.component(j, i));
        for ((o, xij), xji) in out.component_mut(r).iter_mut().zip(a).zip(b) {
            *o = 0.5 * (xij - xji);
        }
    }
    Ok(out)
}

/// Skew pair field of an axial vector, `X_{ij} = ε_{ijr} X_r`.
pub fn axial_inverse(v: &VectorField) -> TensorField {
    let mut out = TensorField::zeros(*v.grid());
    for (r, (i, j)) in [(0, (1, 2)), (1, (2, 0)), (2, (0, 1))] {
        out.component_mut(i, j).copy_from_slice(v.component(r));
        for (o, s) in out.component_mut(j, i).iter_mut().zip(v.component(r)) {
            *o = -s;
        }
    }
    out
}

// axial index r -> (so3 slot, sign) with X_r = sign * X_slot
const SO3_AXIAL: [(usize, f64); 3] = [(2, 1.0), (1, -1.0), (0, 1.0)];

/// Axial reading of an so(3) valued form, slot by slot: `X_r = ½ ε_r^{ij} X_{ij}`.
pub fn so3_to_frame(f: &FormField) -> Result<FormField> {
    if f.kind() != ValueKind::So3 {
        return Err(Error::InvalidValueKind {
            op: "so3_to_frame",
            kind: f.kind().name(),
        });
    }
    let mut out = FormField::zeros(*f.grid(), f.degree(), ValueKind::Frame)?;
    for (r, &(slot, sign)) in SO3_AXIAL.iter().enumerate() {
        for c in 0..f.coordinate_slot_count() {
            for (o, s) in out.component_mut(r, c).iter_mut().zip(f.component(slot, c)) {
                *o = sign * s;
            }
        }
    }
    Ok(out)
}

/// Inverse of [`so3_to_frame`]: `X_{ij} = ε_{ijr} X_r`.
pub fn frame_to_so3(f: &FormField) -> Result<FormField> {
    if f.kind() != ValueKind::Frame {
        return Err(Error::InvalidValueKind {
            op: "frame_to_so3",
            kind: f.kind().name(),
        });
    }
    let mut out = FormField::zeros(*f.grid(), f.degree(), ValueKind::So3)?;
    for (r, &(slot, sign)) in SO3_AXIAL.iter().enumerate() {
        for c in 0..f.coordinate_slot_count() {
            for (o, s) in out.component_mut(slot, c).iter_mut().zip(f.component(r, c)) {
                *o = sign * s;
            }
        }
    }
    Ok(out)
}
