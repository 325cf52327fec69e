//! Parallel design construction.

use std::env;

use polarforge_core::construct::approx_bit_channel;
use polarforge_core::oracle::exact_design_rate;
use polarforge_core::{
    assemble_design, design_code_shared, ApproxMode, BitIndexPath, BmsChannel, ChannelFunctionals, CodeDesign,
    DesignParams,
};
use rayon::prelude::*;

use crate::Error;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "POLARFORGE_THREADS";

/// Largest `m` at which the exact rate is computed on request.
pub const EXACT_MAX_STAGES: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DesignOptions {
    /// Compute every stage once for all indices instead of per index.
    pub shared_tree: bool,
    /// Also compute the rate from exact bit-channels (small `m` only).
    pub exact: bool,
}

/// Worker count: `POLARFORGE_THREADS` if set to a positive integer, else
/// rayon's default.
pub fn thread_count() -> Option<usize> {
    env::var(THREADS_VAR).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs `f` on a thread pool sized by [`thread_count`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, Error> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count() {
        b = b.num_threads(n);
    }
    Ok(b.build()?.install(f))
}

fn functionals(w: &BmsChannel, params: &DesignParams, mode: ApproxMode) -> Result<Vec<ChannelFunctionals>, Error> {
    let up = params.upgrade_params();
    (0..params.block_length())
        .into_par_iter()
        .map(|i| {
            let path = BitIndexPath::new(params.m, i)?;
            Ok(approx_bit_channel(w, &path, mode, &up)?.functionals())
        })
        .collect()
}

/// Designs a code, constructing bit-channels in parallel on the current
/// rayon pool.
pub fn design(w: &BmsChannel, params: &DesignParams, opts: DesignOptions) -> Result<CodeDesign, Error> {
    params.validate()?;
    if opts.exact && params.m > EXACT_MAX_STAGES {
        return Err(Error::Invalid(format!("exact rates need m <= {EXACT_MAX_STAGES}")));
    }
    let mut d = if opts.shared_tree {
        design_code_shared(w, params)?
    } else {
        let (deg, up) = rayon::join(
            || functionals(w, params, ApproxMode::Degrade),
            || functionals(w, params, ApproxMode::Upgrade),
        );
        assemble_design(params, &deg?, &up?)?
    };
    if opts.exact {
        d.rate_exact = Some(exact_design_rate(w, params.m, params.target_bler)?);
    }
    d.check_invariants()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use polarforge_core::design_code;

    #[test]
    fn parallel_matches_sequential() {
        let w = BmsChannel::bsc(0.11).unwrap();
        let params = DesignParams::new(5, 16, 4, 1e-2);
        let seq = design_code(&w, &params).unwrap();
        assert_eq!(design(&w, &params, DesignOptions::default()).unwrap(), seq);
        let shared = design(&w, &params, DesignOptions { shared_tree: true, exact: false }).unwrap();
        assert_eq!(shared.info_set, seq.info_set);
    }

    #[test]
    fn exact_rate_is_sandwiched() {
        let w = BmsChannel::bsc(0.11).unwrap();
        for mu in [4, 8, 16] {
            let d = design(&w, &DesignParams::new(3, mu, 4, 0.05), DesignOptions { shared_tree: false, exact: true }).unwrap();
            let r = d.rate_exact.unwrap();
            assert!(d.rate_degraded <= r && r <= d.rate_upgraded);
        }
        let too_big = DesignOptions { shared_tree: false, exact: true };
        assert!(design(&w, &DesignParams::new(4, 16, 4, 0.05), too_big).is_err());
    }
}
