use crate::error::{Result, WenoError};

/// Smallest mesh the fifth-order stencil is meaningful on.
pub const MIN_CELLS: usize = 10;

/// Uniform cell-centred mesh on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1 {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid1 {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(WenoError::InvalidInput(format!("bad interval [{lo}, {hi}]")));
        }
        if n < MIN_CELLS {
            return Err(WenoError::InvalidInput(format!("need at least {MIN_CELLS} cells, got {n}")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn dx(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.dx()
    }

    /// Left face of cell `i` (`i = n` gives the right end).
    pub fn face(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.center(i)).collect()
    }
}

/// Tensor-product mesh; fields are stored row-major, `index = j * nx + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2 {
    pub x: Grid1,
    pub y: Grid1,
}

impl Grid2 {
    pub fn new(x: Grid1, y: Grid1) -> Self {
        Self { x, y }
    }

    pub fn nx(&self) -> usize {
        self.x.n
    }

    pub fn ny(&self) -> usize {
        self.y.n
    }

    pub fn len(&self) -> usize {
        self.x.n * self.y.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline(always)]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.x.n + i
    }

    pub fn cell_area(&self) -> f64 {
        self.x.dx() * self.y.dx()
    }
}

/// Solid cells of a two-dimensional domain (`true` = solid).
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    solid: Vec<bool>,
    nx: usize,
    ny: usize,
}

impl Mask {
    pub fn from_fn(grid: &Grid2, mut solid: impl FnMut(usize, usize) -> bool) -> Self {
        let mut cells = vec![false; grid.len()];
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                cells[grid.index(i, j)] = solid(i, j);
            }
        }
        Self { solid: cells, nx: grid.nx(), ny: grid.ny() }
    }

    /// Solid block `i >= i_step, j < j_step`: a forward-facing step.
    pub fn step(grid: &Grid2, i_step: usize, j_step: usize) -> Self {
        Self::from_fn(grid, |i, j| i >= i_step && j < j_step)
    }

    #[inline(always)]
    pub fn is_solid(&self, i: usize, j: usize) -> bool {
        self.solid[j * self.nx + i]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn fluid_count(&self) -> usize {
        self.solid.iter().filter(|s| !**s).count()
    }
}
