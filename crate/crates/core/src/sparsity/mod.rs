//! Sparsity measurements: girth, tree-depth, shallow topological minors and
//! their grades, low tree-depth colorings, and the minimum-degree threshold
//! that forces a 1-subdivided high-chromatic subgraph.

mod coloring;
mod girth;
mod minors;
mod treedepth;

pub use coloring::{chi_t_exact, low_td_coloring, optimal_td_coloring, TdColoring, CHI_T_EXACT_CAP, CHI_T_MAX_T};
pub use girth::{girth, odd_girth, Girth};
pub use minors::{grade, shallow_top_minors, DepthParam, Measure, SHALLOW_MINOR_CAP};
pub use treedepth::{tree_depth, tree_depth_with_cap, TreeDepthMemo, TREE_DEPTH_CAP};
pub(crate) use coloring::for_each_subset;

use crate::error::{Error, Result};

/// Minimum degree above which a graph contains the 1-subdivision of a graph
/// with chromatic number `c`:
/// `56 (c-1)^2 log(c-1) / (log c - log(c-1))`.
pub fn dvorak_threshold(c: u64) -> Result<f64> {
    if c < 4 {
        return Err(Error::Argument(format!("threshold needs c >= 4, got {c}")));
    }
    let c = c as f64;
    let m = c - 1.0;
    Ok(56.0 * m * m * m.ln() / (c.ln() - m.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_at_four() {
        let v = dvorak_threshold(4).unwrap();
        assert!((v - 1924.7).abs() < 0.1, "{v}");
        assert!(dvorak_threshold(3).is_err());
    }

    #[test]
    fn threshold_is_increasing_and_grows_like_c_cubed_log_c() {
        let vals: Vec<f64> = (4..=64).map(|c| dvorak_threshold(c).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
        // log(c-1) / (log c - log(c-1)) ~ c log c, so the c^3 ratio alone diverges
        let c = 1000.0f64;
        let ratio = dvorak_threshold(1000).unwrap() / (c * c * c * c.ln());
        assert!((ratio - 56.0).abs() / 56.0 < 0.10, "{ratio}");
        assert!(dvorak_threshold(1000).unwrap() / (c * c * c) > 300.0);
    }
}
