use super::Mask;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &[(-1, 0), (0, -1), (0, 1), (1, 0)],
            Connectivity::Eight => &[(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)],
        }
    }
}

/// Labelled connected components of a mask.
///
/// Label `0` is background; components are numbered `1..=count` in the
/// row-major order of their first cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSet {
    rows: usize,
    cols: usize,
    labels: Vec<u32>,
    sizes: Vec<usize>,
    areas: Vec<f64>,
}

impl ComponentSet {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.cols + col]
    }

    /// Cell count of component `id` (1-based).
    pub fn size(&self, id: u32) -> usize {
        self.sizes[id as usize - 1]
    }

    /// Areas in length² units, indexed by `id - 1`.
    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    /// Mask of the cells belonging to component `id`.
    pub fn component_mask(&self, id: u32) -> Mask {
        let cells = self.labels.iter().map(|&l| l == id).collect();
        Mask::new(self.rows, self.cols, cells).expect("dimensions match")
    }
}

/// Label the connected components of the `true` cells of `mask`.
///
/// Returns the per-cell labels and the per-component cell counts.
pub fn label_components(mask: &Mask, connectivity: Connectivity) -> (Vec<u32>, Vec<usize>) {
    label_by_key(mask.rows(), mask.cols(), connectivity, |i| mask.cells()[i].then_some(0u8))
}

/// Flood-fill labelling where two neighbouring cells are joined iff both have
/// a key and the keys agree. Cells without a key get label 0.
pub(crate) fn label_by_key<K, F>(rows: usize, cols: usize, connectivity: Connectivity, key: F) -> (Vec<u32>, Vec<usize>)
where
    K: PartialEq + Copy,
    F: Fn(usize) -> Option<K>,
{
    let mut labels = vec![0u32; rows * cols];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    let offsets = connectivity.offsets();
    for start in 0..rows * cols {
        if labels[start] != 0 {
            continue;
        }
        let Some(k) = key(start) else { continue };
        let id = sizes.len() as u32 + 1;
        labels[start] = id;
        stack.push(start);
        let mut size = 0usize;
        while let Some(cell) = stack.pop() {
            size += 1;
            let (r, c) = ((cell / cols) as isize, (cell % cols) as isize);
            for &(dr, dc) in offsets {
                let (nr, nc) = (r + dr, c + dc);
                if nr < 0 || nc < 0 || nr >= rows as isize || nc >= cols as isize {
                    continue;
                }
                let n = nr as usize * cols + nc as usize;
                if labels[n] == 0 && key(n) == Some(k) {
                    labels[n] = id;
                    stack.push(n);
                }
            }
        }
        sizes.push(size);
    }
    (labels, sizes)
}

/// 4-connected components of `mask`, with areas for a cell side of `h`.
pub fn connected_components(mask: &Mask, h: f64) -> ComponentSet {
    let (labels, sizes) = label_components(mask, Connectivity::Four);
    let areas = sizes.iter().map(|&s| s as f64 * h * h).collect();
    ComponentSet { rows: mask.rows(), cols: mask.cols(), labels, sizes, areas }
}
