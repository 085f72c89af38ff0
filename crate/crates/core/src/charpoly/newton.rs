use serde::Serialize;

/// Support of a polynomial in `lambda, q` with its lower convex hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonDiagram {
    pub pairs: Vec<(i64, i64)>,
    /// Vertices of the lower boundary, increasing in `x`, slopes strictly increasing.
    pub hull: Vec<(i64, i64)>,
    /// Set when pairs above this `q`-degree could not be decided.
    pub unknown_above: Option<i64>,
    /// The hull lies entirely in the decided region.
    pub hull_certified: bool,
}

impl NewtonDiagram {
    pub fn from_pairs(pairs: Vec<(i64, i64)>) -> Self {
        let hull = lower_hull(&pairs);
        NewtonDiagram { pairs, hull, unknown_above: None, hull_certified: true }
    }

    /// Slopes of consecutive hull edges as `(dy, dx)`.
    pub fn slopes(&self) -> Vec<(i64, i64)> {
        self.hull.windows(2).map(|w| (w[1].1 - w[0].1, w[1].0 - w[0].0)).collect()
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    let (ax, ay) = ((a.0 - o.0) as i128, (a.1 - o.1) as i128);
    let (bx, by) = ((b.0 - o.0) as i128, (b.1 - o.1) as i128);
    ax * by - ay * bx
}

/// Lower convex hull by Andrew's monotone chain; collinear points dropped.
pub fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup_by_key(|p| p.0);
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Outcome of comparing a blown-up diagram with the translated minimal one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupPolygonReport {
    pub expected: Vec<(i64, i64)>,
    pub actual: Vec<(i64, i64)>,
    pub pass: bool,
}

/// Translates the minimal hull by `(0, -r)`, appends a slope-1 segment of
/// horizontal length `r`, and compares with the blown-up hull.
pub fn verify_blowup_polygon(min: &NewtonDiagram, blown: &NewtonDiagram, r: i64) -> BlowupPolygonReport {
    let mut pts: Vec<(i64, i64)> = min.hull.iter().map(|&(x, y)| (x, y - r)).collect();
    if r > 0 {
        if let Some(&(x, y)) = pts.last() {
            pts.push((x + r, y + r));
        }
    }
    let expected = lower_hull(&pts);
    let pass = expected == blown.hull && blown.hull_certified && min.hull_certified;
    BlowupPolygonReport { expected, actual: blown.hull.clone(), pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_vertices() {
        assert_eq!(lower_hull(&[(0, 2), (2, 0), (4, 1)]), vec![(0, 2), (2, 0), (4, 1)]);
    }

    #[test]
    fn collinear_and_interior_removed() {
        assert_eq!(lower_hull(&[(0, 2), (2, 1), (4, 0), (1, 5), (3, 3)]), vec![(0, 2), (4, 0)]);
        assert_eq!(lower_hull(&[(0, 1), (0, 4), (3, 0)]), vec![(0, 1), (3, 0)]);
    }

    #[test]
    fn blowup_law_examples() {
        let min = NewtonDiagram::from_pairs(vec![(0, 1), (3, 0)]);
        let blown = NewtonDiagram::from_pairs(vec![(0, -1), (3, -2), (5, 0), (4, 3)]);
        assert!(verify_blowup_polygon(&min, &blown, 2).pass);
        let ruled = NewtonDiagram::from_pairs(vec![(0, 2), (2, 1), (4, 0)]);
        let ruled1 = NewtonDiagram::from_pairs(vec![(0, 1), (2, 0), (4, -1), (5, 0)]);
        let rep = verify_blowup_polygon(&ruled, &ruled1, 1);
        assert_eq!(rep.expected, vec![(0, 1), (4, -1), (5, 0)]);
        assert!(rep.pass);
        assert!(verify_blowup_polygon(&min, &min, 0).pass);
    }
}
