use std::ops::{Add, Mul, Neg, Sub};

use super::Grid;
use crate::error::{Error, Result};

/// What a form carries at each point besides its coordinate slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Scalar,
    /// One frame index `i`.
    Frame,
    /// A skew frame pair `[ij]`, stored for `i < j` only.
    So3,
}

impl ValueKind {
    pub fn slots(self) -> usize {
        match self {
            ValueKind::Scalar => 1,
            ValueKind::Frame | ValueKind::So3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ValueKind::Scalar => "scalar",
            ValueKind::Frame => "frame-vector",
            ValueKind::So3 => "so(3)",
        }
    }
}

/// Skew frame pairs in storage order.
pub const SO3_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

const SLOTS_0: [&[usize]; 1] = [&[]];
const SLOTS_1: [&[usize]; 3] = [&[0], &[1], &[2]];
const SLOTS_2: [&[usize]; 3] = [&[0, 1], &[0, 2], &[1, 2]];
const SLOTS_3: [&[usize]; 1] = [&[0, 1, 2]];

/// Strictly increasing coordinate multi-indices of a `degree`-form, in storage order.
pub fn coordinate_slots(degree: usize) -> &'static [&'static [usize]] {
    match degree {
        0 => &SLOTS_0,
        1 => &SLOTS_1,
        2 => &SLOTS_2,
        3 => &SLOTS_3,
        _ => &[],
    }
}

/// Sign and storage slot of an arbitrary coordinate multi-index, or `None`
/// when an index repeats (the component vanishes by antisymmetry).
pub fn coordinate_slot(indices: &[usize]) -> Option<(f64, usize)> {
    let mut sorted = [0usize; 3];
    let k = indices.len();
    if k > 3 {
        return None;
    }
    sorted[..k].copy_from_slice(indices);
    let mut sign = 1.0;
    // insertion sort, counting transpositions
    for i in 1..k {
        let mut j = i;
        while j > 0 && sorted[j - 1] > sorted[j] {
            sorted.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if (1..k).any(|i| sorted[i - 1] == sorted[i]) {
        return None;
    }
    coordinate_slots(k)
        .iter()
        .position(|s| *s == &sorted[..k])
        .map(|slot| (sign, slot))
}

/// Sign and storage slot of the frame pair `(i, j)`; `None` on the diagonal.
#[inline]
pub fn so3_slot(i: usize, j: usize) -> Option<(f64, usize)> {
    match (i, j) {
        (0, 1) => Some((1.0, 0)),
        (1, 0) => Some((-1.0, 0)),
        (0, 2) => Some((1.0, 1)),
        (2, 0) => Some((-1.0, 1)),
        (1, 2) => Some((1.0, 2)),
        (2, 1) => Some((-1.0, 2)),
        _ => None,
    }
}

/// A k-form on the grid, optionally frame-vector or so(3) valued.
///
/// Layout is value slot outermost, coordinate slot next, grid point innermost,
/// so each `(value, coordinate)` component is one contiguous slice of length
/// `n^3`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormField {
    grid: Grid,
    degree: usize,
    kind: ValueKind,
    data: Vec<f64>,
}

impl FormField {
    pub fn zeros(grid: Grid, degree: usize, kind: ValueKind) -> Result<Self> {
        if degree > 3 {
            return Err(Error::DegreeOverflow(degree));
        }
        let len = kind.slots() * coordinate_slots(degree).len() * grid.len();
        Ok(Self {
            grid,
            degree,
            kind,
            data: vec![0.0; len],
        })
    }

    /// Builds a field from its raw component vector (layout as documented on the type).
    pub fn from_data(grid: Grid, degree: usize, kind: ValueKind, data: Vec<f64>) -> Result<Self> {
        let mut f = Self::zeros(grid, degree, kind)?;
        if data.len() != f.data.len() {
            return Err(Error::ShapeMismatch {
                expected: f.data.len(),
                got: data.len(),
            });
        }
        f.data = data;
        Ok(f)
    }

    /// Samples `f(position, value_slot, coordinate_slot)` at every point.
    pub fn from_fn(
        grid: Grid,
        degree: usize,
        kind: ValueKind,
        f: impl Fn([f64; 3], usize, usize) -> f64,
    ) -> Result<Self> {
        let mut out = Self::zeros(grid, degree, kind)?;
        for v in 0..kind.slots() {
            for c in 0..out.coordinate_slot_count() {
                let comp = out.component_mut(v, c);
                for (p, slot) in comp.iter_mut().enumerate() {
                    *slot = f(grid.position(p), v, c);
                }
            }
        }
        Ok(out)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn coordinate_slot_count(&self) -> usize {
        coordinate_slots(self.degree).len()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    fn offset(&self, value: usize, coord: usize) -> usize {
        (value * self.coordinate_slot_count() + coord) * self.grid.len()
    }

    pub fn component(&self, value: usize, coord: usize) -> &[f64] {
        let o = self.offset(value, coord);
        &self.data[o..o + self.grid.len()]
    }

    pub fn component_mut(&mut self, value: usize, coord: usize) -> &mut [f64] {
        let o = self.offset(value, coord);
        let len = self.grid.len();
        &mut self.data[o..o + len]
    }

    /// All coordinate components of one value slot.
    pub fn value_components(&self, value: usize) -> Vec<&[f64]> {
        (0..self.coordinate_slot_count())
            .map(|c| self.component(value, c))
            .collect()
    }

    /// Mutable coordinate components of one value slot.
    pub fn value_components_mut(&mut self, value: usize) -> Vec<&mut [f64]> {
        let len = self.grid.len();
        let per_value = self.coordinate_slot_count() * len;
        self.data[value * per_value..(value + 1) * per_value]
            .chunks_exact_mut(len)
            .collect()
    }

    /// Value of the component with arbitrary (possibly unsorted) coordinate
    /// indices at point `p`, applying the antisymmetry sign.
    pub fn value_at(&self, value: usize, coords: &[usize], p: usize) -> f64 {
        debug_assert_eq!(coords.len(), self.degree);
        match coordinate_slot(coords) {
            Some((s, c)) => s * self.component(value, c)[p],
            None => 0.0,
        }
    }

    /// Full skew matrix entry `(i, j)` of an so(3)-valued field.
    pub fn so3_value_at(&self, i: usize, j: usize, coords: &[usize], p: usize) -> f64 {
        debug_assert_eq!(self.kind, ValueKind::So3);
        match so3_slot(i, j) {
            Some((s, v)) => s * self.value_at(v, coords, p),
            None => 0.0,
        }
    }

    pub fn max_abs(&self) -> f64 {
        super::max_abs(&self.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.grid == other.grid && self.degree == other.degree && self.kind == other.kind
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &Self) -> Result<()> {
        if !self.same_shape(other) {
            return Err(Error::GridMismatch);
        }
        for (s, o) in self.data.iter_mut().zip(&other.data) {
            *s += a * o;
        }
        Ok(())
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= a);
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert!(
            self.same_shape(other),
            "form fields differ in grid, degree or value kind"
        );
        let mut out = self.clone();
        for (s, o) in out.data.iter_mut().zip(&other.data) {
            *s = f(*s, *o);
        }
        out
    }
}

impl Add for &FormField {
    type Output = FormField;
    fn add(self, rhs: &FormField) -> FormField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &FormField {
    type Output = FormField;
    fn sub(self, rhs: &FormField) -> FormField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &FormField {
    type Output = FormField;
    fn neg(self) -> FormField {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &FormField {
    type Output = FormField;
    fn mul(self, rhs: f64) -> FormField {
        self.scaled(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_tables() {
        assert_eq!(coordinate_slot(&[1, 0]), Some((-1.0, 0)));
        assert_eq!(coordinate_slot(&[2, 0, 1]), Some((1.0, 0)));
        assert_eq!(coordinate_slot(&[1, 0, 2]), Some((-1.0, 0)));
        assert_eq!(coordinate_slot(&[1, 1]), None);
        assert_eq!(coordinate_slot(&[]), Some((1.0, 0)));
        for (slot, pair) in SO3_PAIRS.iter().enumerate() {
            assert_eq!(so3_slot(pair.0, pair.1), Some((1.0, slot)));
            assert_eq!(so3_slot(pair.1, pair.0), Some((-1.0, slot)));
        }
        assert_eq!(so3_slot(2, 2), None);
    }

    #[test]
    fn storage_sizes() {
        let g = Grid::new(4, 1.0).unwrap();
        assert_eq!(FormField::zeros(g, 0, ValueKind::Scalar).unwrap().data().len(), 64);
        assert_eq!(FormField::zeros(g, 2, ValueKind::So3).unwrap().data().len(), 9 * 64);
        assert_eq!(FormField::zeros(g, 3, ValueKind::Frame).unwrap().data().len(), 3 * 64);
        assert_eq!(
            FormField::zeros(g, 4, ValueKind::Scalar),
            Err(Error::DegreeOverflow(4))
        );
    }

    #[test]
    fn so3_entries_are_skew_by_construction() {
        let g = Grid::new(4, 1.0).unwrap();
        let f = FormField::from_fn(g, 1, ValueKind::So3, |x, v, c| x[0] + v as f64 + 10.0 * c as f64)
            .unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for a in 0..3 {
                    let ij = f.so3_value_at(i, j, &[a], 5);
                    let ji = f.so3_value_at(j, i, &[a], 5);
                    assert_eq!(ij, -ji);
                }
            }
        }
    }
}
