use super::{add_partial, Grid};
use crate::error::{Error, Result};

/// Three components per grid point, component-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    data: Vec<f64>,
}

impl VectorField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            data: vec![0.0; 3 * grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut out = Self::zeros(grid);
        for p in 0..grid.len() {
            out.set(p, f(grid.position(p)));
        }
        out
    }

    /// Same vector at every point.
    pub fn uniform(grid: Grid, v: [f64; 3]) -> Self {
        let mut out = Self::zeros(grid);
        for (a, &va) in v.iter().enumerate() {
            out.component_mut(a).fill(va);
        }
        out
    }

    pub fn from_data(grid: Grid, data: Vec<f64>) -> Result<Self> {
        if data.len() != 3 * grid.len() {
            return Err(Error::ShapeMismatch {
                expected: 3 * grid.len(),
                got: data.len(),
            });
        }
        Ok(Self { grid, data })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn component(&self, a: usize) -> &[f64] {
        let len = self.grid.len();
        &self.data[a * len..(a + 1) * len]
    }

    pub fn component_mut(&mut self, a: usize) -> &mut [f64] {
        let len = self.grid.len();
        &mut self.data[a * len..(a + 1) * len]
    }

    #[inline]
    pub fn get(&self, p: usize) -> [f64; 3] {
        let len = self.grid.len();
        [self.data[p], self.data[len + p], self.data[2 * len + p]]
    }

    #[inline]
    pub fn set(&mut self, p: usize, v: [f64; 3]) {
        let len = self.grid.len();
        self.data[p] = v[0];
        self.data[len + p] = v[1];
        self.data[2 * len + p] = v[2];
    }

    pub fn max_abs(&self) -> f64 {
        super::max_abs(&self.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &Self) {
        assert_eq!(self.grid, other.grid, "vector fields on different grids");
        for (s, o) in self.data.iter_mut().zip(&other.data) {
            *s += a * o;
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= a);
        out
    }

    /// Sum of every component over the grid, weighted by `h^3`.
    pub fn integral(&self) -> [f64; 3] {
        let w = self.grid.cell_volume();
        let mut out = [0.0; 3];
        for (a, o) in out.iter_mut().enumerate() {
            *o = w * self.component(a).iter().sum::<f64>();
        }
        out
    }

    /// Gradient `G_ij = ∂_j v_i` with central differences.
    pub fn gradient(&self) -> TensorField {
        let mut out = TensorField::zeros(self.grid);
        for i in 0..3 {
            for j in 0..3 {
                add_partial(&self.grid, self.component(i), j, 1.0, out.component_mut(i, j));
            }
        }
        out
    }
}

/// Rank-2 field, nine components per point stored `[row][column][point]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    grid: Grid,
    data: Vec<f64>,
}

impl TensorField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            data: vec![0.0; 9 * grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [[f64; 3]; 3]) -> Self {
        let mut out = Self::zeros(grid);
        for p in 0..grid.len() {
            out.set(p, f(grid.position(p)));
        }
        out
    }

    pub fn uniform(grid: Grid, m: [[f64; 3]; 3]) -> Self {
        let mut out = Self::zeros(grid);
        for i in 0..3 {
            for j in 0..3 {
                out.component_mut(i, j).fill(m[i][j]);
            }
        }
        out
    }

    pub fn identity(grid: Grid) -> Self {
        Self::uniform(grid, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn component(&self, i: usize, j: usize) -> &[f64] {
        let len = self.grid.len();
        let o = (3 * i + j) * len;
        &self.data[o..o + len]
    }

    pub fn component_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        let len = self.grid.len();
        let o = (3 * i + j) * len;
        &mut self.data[o..o + len]
    }

    #[inline]
    pub fn get(&self, p: usize) -> [[f64; 3]; 3] {
        let len = self.grid.len();
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.data[(3 * i + j) * len + p];
            }
        }
        m
    }

    #[inline]
    pub fn set(&mut self, p: usize, m: [[f64; 3]; 3]) {
        let len = self.grid.len();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                self.data[(3 * i + j) * len + p] = *v;
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.grid);
        for i in 0..3 {
            for j in 0..3 {
                out.component_mut(j, i).copy_from_slice(self.component(i, j));
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        super::max_abs(&self.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Divergence over the column index, `v_i = ∂_j T_ij`.
    pub fn divergence(&self) -> VectorField {
        let mut out = VectorField::zeros(self.grid);
        for i in 0..3 {
            for j in 0..3 {
                add_partial(&self.grid, self.component(i, j), j, 1.0, out.component_mut(i));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_velocity_integral() {
        let g = Grid::new(4, 2.0).unwrap();
        let v = VectorField::uniform(g, [1.0, -2.0, 0.5]);
        let total = v.integral();
        assert!((total[0] - 8.0).abs() < 1e-14);
        assert!((total[1] + 16.0).abs() < 1e-14);
        assert!((total[2] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn tensor_get_set_and_transpose() {
        let g = Grid::new(4, 1.0).unwrap();
        let m = [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]];
        let t = TensorField::uniform(g, m);
        assert_eq!(t.get(11), m);
        assert_eq!(t.transpose().get(3)[0][2], 7.0);
        assert!(t.divergence().max_abs() == 0.0);
    }
}
