//! Boolean pixel masks and 8-connected flood fill, shared by the limb scan
//! and the renderer.

use std::collections::VecDeque;

/// Row-major boolean mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Self {
        Self { width, height, bits: vec![false; width * height] }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let bits = (0..width * height).map(|k| f(k % width, k / width)).collect();
        Self { width, height, bits }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(k, _)| (k % self.width, k / self.width))
    }

    fn neighbours(&self, x: usize, y: usize) -> impl Iterator<Item = (usize, usize)> {
        let (w, h) = (self.width as i64, self.height as i64);
        let (x, y) = (x as i64, y as i64);
        (-1..=1)
            .flat_map(move |dy| (-1..=1).map(move |dx| (x + dx, y + dy)))
            .filter(move |&(nx, ny)| (nx, ny) != (x, y) && nx >= 0 && ny >= 0 && nx < w && ny < h)
            .map(|(nx, ny)| (nx as usize, ny as usize))
    }

    /// Union of the 8-connected components of `self` that contain a seed.
    pub fn components_from(&self, seeds: &[(usize, usize)]) -> Mask {
        let mut out = Mask::new(self.width, self.height);
        let mut queue = VecDeque::new();
        for &(x, y) in seeds {
            if self.get(x, y) && !out.get(x, y) {
                out.set(x, y, true);
                queue.push_back((x, y));
            }
        }
        while let Some((x, y)) = queue.pop_front() {
            for (nx, ny) in self.neighbours(x, y) {
                if self.get(nx, ny) && !out.get(nx, ny) {
                    out.set(nx, ny, true);
                    queue.push_back((nx, ny));
                }
            }
        }
        out
    }

    /// Set pixels with at least one unset 4-neighbour or on the image edge.
    pub fn boundary(&self) -> Mask {
        Mask::from_fn(self.width, self.height, |x, y| {
            self.get(x, y)
                && (x == 0
                    || y == 0
                    || x + 1 == self.width
                    || y + 1 == self.height
                    || !self.get(x - 1, y)
                    || !self.get(x + 1, y)
                    || !self.get(x, y - 1)
                    || !self.get(x, y + 1))
        })
    }

    pub fn touches_edge(&self) -> bool {
        self.iter_set()
            .any(|(x, y)| x == 0 || y == 0 || x + 1 == self.width || y + 1 == self.height)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pixels_are_connected() {
        let m = Mask::from_fn(4, 4, |x, y| x == y || (x == 3 && y == 0));
        let c = m.components_from(&[(0, 0)]);
        assert_eq!(c.count(), 4);
        assert!(!c.get(3, 0));
    }

    #[test]
    fn unset_seed_yields_empty() {
        let m = Mask::from_fn(3, 3, |x, _| x == 2);
        assert_eq!(m.components_from(&[(0, 0)]).count(), 0);
    }

    #[test]
    fn boundary_of_filled_square() {
        let m = Mask::from_fn(5, 5, |x, y| (1..4).contains(&x) && (1..4).contains(&y));
        let b = m.boundary();
        assert_eq!(b.count(), 8);
        assert!(!b.get(2, 2));
        assert!(!m.touches_edge());
    }
}
