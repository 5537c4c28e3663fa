//! Evaluation grids shared by the estimators.

/// `n + 1` equally spaced points from `lo` to `hi` inclusive.
pub fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![lo];
    }
    let step = (hi - lo) / n as f64;
    let mut v: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    v.push(hi);
    v
}

/// Points `lo, lo + step, …` up to and including `hi`.
pub fn stepped(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).floor() as usize;
    let mut v: Vec<f64> = (0..=n).map(|i| lo + step * i as f64).collect();
    if v.last().is_some_and(|&last| last < hi) {
        v.push(hi);
    }
    v
}

/// `n + 1` logarithmically spaced points from `lo` to `hi` (both positive).
pub fn logarithmic(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    uniform(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect()
}

/// The three dyadic windows `[T/8, T/4]`, `[T/4, T/2]`, `[T/2, T]`, earliest first.
pub fn dyadic_windows(horizon: f64) -> [(f64, f64); 3] {
    let t = horizon;
    [(t / 8.0, t / 4.0), (t / 4.0, t / 2.0), (t / 2.0, t)]
}

/// Adds the points of `extra` lying in `[lo, hi]` to `grid`, sorted and deduplicated.
pub fn merged(mut grid: Vec<f64>, extra: impl IntoIterator<Item = f64>, lo: f64, hi: f64) -> Vec<f64> {
    grid.extend(extra.into_iter().filter(|&t| t >= lo && t <= hi));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_hits_both_ends() {
        let g = uniform(1.0, 2.0, 4);
        assert_eq!(g, vec![1.0, 1.25, 1.5, 1.75, 2.0]);
    }

    #[test]
    fn stepped_closes_the_interval() {
        let g = stepped(0.0, 1.05, 0.5);
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.05]);
        assert_eq!(stepped(0.0, 1.0, 0.5), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn logarithmic_endpoints() {
        let g = logarithmic(1.0, 1e6, 200);
        assert_eq!(g.len(), 201);
        assert!((g[200] - 1e6).abs() < 1e-6);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn merge_filters_range() {
        let g = merged(vec![0.0, 1.0], [0.5, 1.0, 7.0], 0.0, 2.0);
        assert_eq!(g, vec![0.0, 0.5, 1.0]);
    }
}
