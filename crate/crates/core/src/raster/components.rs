use crate::geom::Rect;

use super::InkImage;

/// Neighbourhood used when growing a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    /// N, S, E and W neighbours.
    Four,
    /// All eight neighbours, so diagonal strokes stay whole.
    #[default]
    Eight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentStats {
    /// Component id, contiguous from 1 in reporting order.
    pub label: u32,
    pub bbox: Rect,
    /// Number of ink pixels.
    pub area: usize,
}

/// Per-pixel labels (0 = background) plus per-component statistics.
#[derive(Debug, Clone)]
pub struct Labeling {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    pub components: Vec<ComponentStats>,
}

impl Labeling {
    pub fn label_at(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    pub fn component(&self, label: u32) -> Option<&ComponentStats> {
        label.checked_sub(1).and_then(|i| self.components.get(i as usize))
    }
}

/// Label every ink pixel. Components are sorted by the top-left corner of
/// their bounding box, `(y0, x0)`, and numbered from 1 in that order.
pub fn label_components(img: &InkImage, connectivity: Connectivity) -> Labeling {
    let (w, h) = (img.width(), img.height());
    let mask = img.mask();
    let mut raw = vec![0u32; w * h];
    let mut found: Vec<ComponentStats> = Vec::new();
    let mut stack = Vec::new();

    for start in 0..w * h {
        if !mask[start] || raw[start] != 0 {
            continue;
        }
        let id = found.len() as u32 + 1;
        let (sx, sy) = (start % w, start / w);
        let mut stats = ComponentStats {
            label: id,
            bbox: Rect::new(sx, sy, sx, sy),
            area: 0,
        };
        raw[start] = id;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (x, y) = (idx % w, idx / w);
            stats.area += 1;
            stats.bbox.include(x, y);
            for (nx, ny) in neighbours(x, y, w, h, connectivity) {
                let n = ny * w + nx;
                if mask[n] && raw[n] == 0 {
                    raw[n] = id;
                    stack.push(n);
                }
            }
        }
        found.push(stats);
    }

    // Discovery order is raster order of each component's first pixel;
    // the stable sort keeps it as the tie-break.
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by_key(|&i| (found[i].bbox.y0, found[i].bbox.x0));
    let mut remap = vec![0u32; found.len() + 1];
    let mut components = Vec::with_capacity(found.len());
    for (new_idx, &old_idx) in order.iter().enumerate() {
        let label = new_idx as u32 + 1;
        remap[old_idx + 1] = label;
        components.push(ComponentStats {
            label,
            ..found[old_idx]
        });
    }
    let labels = raw.into_iter().map(|l| remap[l as usize]).collect();

    Labeling {
        width: w,
        height: h,
        labels,
        components,
    }
}

/// Statistics for each connected group of ink pixels.
pub fn connected_components(img: &InkImage, connectivity: Connectivity) -> Vec<ComponentStats> {
    label_components(img, connectivity).components
}

fn neighbours(
    x: usize,
    y: usize,
    w: usize,
    h: usize,
    connectivity: Connectivity,
) -> impl Iterator<Item = (usize, usize)> {
    const FOUR: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
    const EIGHT: [(isize, isize); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];
    let offsets: &'static [(isize, isize)] = match connectivity {
        Connectivity::Four => &FOUR,
        Connectivity::Eight => &EIGHT,
    };
    offsets.iter().filter_map(move |&(dx, dy)| {
        let nx = x.checked_add_signed(dx)?;
        let ny = y.checked_add_signed(dy)?;
        (nx < w && ny < h).then_some((nx, ny))
    })
}
