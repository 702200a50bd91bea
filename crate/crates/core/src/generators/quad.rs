use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::planar::PlanarMap;

/// Output of [`quad_subdivision`]: the plane map plus its quadrilateral faces,
/// each listed counterclockwise starting at its marked corner.
#[derive(Debug, Clone)]
pub struct QuadMap {
    pub map: PlanarMap,
    pub quads: Vec<[usize; 4]>,
}

/// `n`-fold subdivision of a quadrilateral with a marked corner.
///
/// A quad `(m, a, c, b)` marked at `m` receives an interior vertex `x` and
/// midpoints `p` on `a-c` and `q` on `c-b`, and is replaced by `(x, m, a, p)`,
/// `(x, p, c, q)` and `(x, q, b, m)`, all marked at `x`. Midpoints are shared
/// with the neighboring quad across the same side.
pub fn quad_subdivision(n: usize) -> QuadMap {
    let mut quads: Vec<[usize; 4]> = alloc::vec![[0, 1, 2, 3]];
    let mut vertex_count = 4;
    for _ in 0..n {
        let mut midpoint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut mid = |u: usize, v: usize, count: &mut usize| -> usize {
            *midpoint.entry((u.min(v), u.max(v))).or_insert_with(|| {
                *count += 1;
                *count - 1
            })
        };
        let mut next = Vec::with_capacity(3 * quads.len());
        for &[m, a, c, b] in &quads {
            let x = vertex_count;
            vertex_count += 1;
            let p = mid(a, c, &mut vertex_count);
            let q = mid(c, b, &mut vertex_count);
            next.push([x, m, a, p]);
            next.push([x, p, c, q]);
            next.push([x, q, b, m]);
        }
        quads = next;
    }
    let faces: Vec<Vec<usize>> = quads.iter().map(|q| q.to_vec()).collect();
    let map = PlanarMap::from_faces(vertex_count, &faces).expect("subdivision faces are consistent");
    QuadMap { map, quads }
}
