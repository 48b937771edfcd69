use crate::error::{Error, Result};

/// Uniform, fully periodic hexahedral mesh.
///
/// Elements are numbered `ex + nx (ey + ny ez)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub elements: [usize; 3],
    pub lower: [f64; 3],
    pub extent: [f64; 3],
    pub h: [f64; 3],
}

impl Mesh {
    pub fn new(elements: [usize; 3], lower: [f64; 3], extent: [f64; 3]) -> Result<Self> {
        for a in 0..3 {
            if elements[a] == 0 {
                return Err(Error::InvalidParameter {
                    name: "elements",
                    reason: format!("axis {a} has zero elements"),
                });
            }
            if !(extent[a] > 0.0 && extent[a].is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "extent",
                    reason: format!("axis {a} extent {} must be positive", extent[a]),
                });
            }
        }
        let h = [0, 1, 2].map(|a| extent[a] / elements[a] as f64);
        Ok(Mesh { elements, lower, extent, h })
    }

    /// Cube `[lo, hi]³` with `n` elements per axis.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new([n; 3], [lo; 3], [hi - lo; 3])
    }

    pub fn n_elements(&self) -> usize {
        self.elements.iter().product()
    }

    pub fn volume(&self) -> f64 {
        self.extent.iter().product()
    }

    /// `h / 2` per axis: the reference-to-physical Jacobian.
    pub fn jacobian(&self) -> [f64; 3] {
        self.h.map(|h| 0.5 * h)
    }

    #[inline]
    pub fn element_index(&self, idx: [usize; 3]) -> usize {
        idx[0] + self.elements[0] * (idx[1] + self.elements[1] * idx[2])
    }

    #[inline]
    pub fn element_coords(&self, e: usize) -> [usize; 3] {
        let nx = self.elements[0];
        let ny = self.elements[1];
        [e % nx, (e / nx) % ny, e / (nx * ny)]
    }

    /// Periodic neighbour across face `side` (0 = lower, 1 = upper) of `axis`.
    #[inline]
    pub fn neighbour(&self, e: usize, axis: usize, side: usize) -> usize {
        let mut c = self.element_coords(e);
        let n = self.elements[axis];
        c[axis] = if side == 0 { (c[axis] + n - 1) % n } else { (c[axis] + 1) % n };
        self.element_index(c)
    }

    /// Physical coordinate of reference point `xi` along `axis` in element
    /// coordinate `ei`.
    #[inline]
    pub fn map(&self, axis: usize, ei: usize, xi: f64) -> f64 {
        self.lower[axis] + self.h[axis] * (ei as f64 + 0.5 * (xi + 1.0))
    }

    pub fn min_h(&self) -> f64 {
        self.h.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbours_wrap() {
        let m = Mesh::new([3, 2, 4], [0.0; 3], [3.0, 2.0, 4.0]).unwrap();
        assert_eq!(m.n_elements(), 24);
        let e = m.element_index([0, 1, 3]);
        assert_eq!(m.element_coords(e), [0, 1, 3]);
        assert_eq!(m.element_coords(m.neighbour(e, 0, 0)), [2, 1, 3]);
        assert_eq!(m.element_coords(m.neighbour(e, 1, 1)), [0, 0, 3]);
        assert_eq!(m.element_coords(m.neighbour(e, 2, 1)), [0, 1, 0]);
        for e in 0..m.n_elements() {
            for a in 0..3 {
                assert_eq!(m.neighbour(m.neighbour(e, a, 0), a, 1), e);
            }
        }
    }

    #[test]
    fn mapping_and_validation() {
        let m = Mesh::cube(4, -1.0, 1.0).unwrap();
        assert_eq!(m.h, [0.5; 3]);
        assert_eq!(m.map(0, 0, -1.0), -1.0);
        assert_eq!(m.map(0, 3, 1.0), 1.0);
        assert_eq!(m.jacobian(), [0.25; 3]);
        assert!(Mesh::new([0, 1, 1], [0.0; 3], [1.0; 3]).is_err());
        assert!(Mesh::new([1, 1, 1], [0.0; 3], [1.0, -1.0, 1.0]).is_err());
    }
}
