//! Generators for instances with no independent transversal, and their
//! certificates.

pub mod gf;
pub mod host;
pub mod incidence;
pub mod norm;
pub mod primes;
pub mod projective;
pub mod random;

pub use host::{BipartiteHost, HostCertificate};
pub use incidence::{neighbourhood_incidence_graph, pad_to_nkrs, verify_no_transversal_by_pigeonhole};
pub use norm::{norm_graph, norm_graph_host};
pub use primes::{find_prime_in_ap, is_prime, next_prime};
pub use projective::{projective_plane_host, projective_plane_incidence};
pub use random::{random_bipartite_host, random_nkrs};

use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{BuildError, PartitionedHypergraph};
use crate::rng::derive_seed;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("too few parts: host has {parts} A-vertices, need at least r = {r}")]
    TooFewParts { parts: usize, r: usize },
    #[error("matching of size {s} not completable within parts of size {k}")]
    MatchingNotCompletable { s: usize, k: usize },
    #[error("part {part} has {size} vertices, needs at least {needed}")]
    PartTooSmall {
        part: usize,
        size: usize,
        needed: usize,
    },
    #[error("parts {parts:?} induce {count} edges or a non-matching, exceeding s={s}")]
    MatchingViolation {
        parts: Vec<usize>,
        count: usize,
        s: usize,
    },
    #[error("retry budget exhausted for {what}: {condition}")]
    RetryExhausted { what: String, condition: String },
    #[error(
        "construction not implemented for (r={r}, s={s}); supported: r=2 s=1 (projective plane), \
         r=3 s=2 (norm graph), r in {{2,3}} with 1 <= s <= k (random host, may fail outside the \
         asymptotic regime)"
    )]
    UnsupportedConstruction { r: usize, s: usize },
    #[error("accepted host has min A-degree {got}, cannot pad parts to k={k}")]
    HostDegreeTooSmall { got: usize, k: usize },
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Which host family an upper-bound instance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HostKind {
    Projective,
    Norm,
    Random,
}

/// Everything needed to audit an assembled no-IT instance.
#[derive(Debug, Clone, Serialize)]
pub struct AssembleProvenance {
    pub host: HostKind,
    pub k: usize,
    pub r: usize,
    pub s: usize,
    pub seed: u64,
    /// field/plane order for the geometric hosts
    pub q: Option<u64>,
    pub host_n: usize,
    pub host_m: usize,
    pub certificate: HostCertificate,
    pub pigeonhole_certified: bool,
    pub eps: Option<f64>,
    pub host_retries: Option<u32>,
}

const ASSEMBLE_RANDOM_EPS: f64 = 0.25;

/// Assemble an (n,k,r,s)-graph with no independent transversal, following
/// the host family that fits (k, r, s): projective plane for (2, 1), norm
/// graph for (3, 2), random host otherwise for r in {2, 3}.
pub fn assemble_upper_bound_instance(
    k: usize,
    r: usize,
    s: usize,
    seed: u64,
) -> Result<(PartitionedHypergraph, AssembleProvenance), ConstructError> {
    if k == 0 {
        return Err(ConstructError::BadParameter("k must be positive".into()));
    }
    if s == 0 || s > k {
        return Err(ConstructError::UnsupportedConstruction { r, s });
    }
    match (r, s) {
        (2, 1) => {
            let q = next_prime(k as u64)?;
            let (host, cert) = projective_plane_host(q)?;
            debug_assert!(cert.min_degree_a >= k);
            let g0 = neighbourhood_incidence_graph(&host, 2)?;
            let g = pad_to_nkrs(&g0, k, 1, derive_seed(seed, 1))?;
            let prov = AssembleProvenance {
                host: HostKind::Projective,
                k,
                r,
                s,
                seed,
                q: Some(q),
                host_n: host.n(),
                host_m: host.m(),
                certificate: cert,
                pigeonhole_certified: verify_no_transversal_by_pigeonhole(&host, 2),
                eps: None,
                host_retries: None,
            };
            Ok((g, prov))
        }
        (3, 2) => {
            // the accepted bipartition floor is (q^2-1)/10, so pick q with
            // that floor at least k; this also covers the paper's q^2 >= 6k
            let mut q = 3u64;
            while ((q * q - 1) / 10) < k as u64 {
                q = next_prime(q + 1)?;
            }
            let (host, cert, prov_host) = norm_graph_host(q, derive_seed(seed, 2))?;
            if cert.min_degree_a < k {
                return Err(ConstructError::HostDegreeTooSmall {
                    got: cert.min_degree_a,
                    k,
                });
            }
            let g0 = neighbourhood_incidence_graph(&host, 3)?;
            let g = pad_to_nkrs(&g0, k, 2, derive_seed(seed, 3))?;
            let prov = AssembleProvenance {
                host: HostKind::Norm,
                k,
                r,
                s,
                seed,
                q: Some(q),
                host_n: host.n(),
                host_m: host.m(),
                certificate: cert,
                pigeonhole_certified: verify_no_transversal_by_pigeonhole(&host, 3),
                eps: None,
                host_retries: Some(prov_host.retries_used),
            };
            Ok((g, prov))
        }
        (2, _) | (3, _) => {
            let eps = ASSEMBLE_RANDOM_EPS;
            let exponent = 1.0 / (r as f64 - 1.0);
            let n = ((r as f64 - 1.0 + eps)
                * ((k as f64).powi(r as i32) / s as f64).powf(exponent))
            .floor() as usize;
            let m = n / (r - 1);
            let m = m.saturating_sub(1);
            if m < s || n < r {
                return Err(ConstructError::BadParameter(format!(
                    "derived host dimensions n={n}, m={m} cannot carry s={s}"
                )));
            }
            let (host, cert, prov_host) =
                random_bipartite_host(n, m, r, s, eps, derive_seed(seed, 4))?;
            if cert.min_degree_a < k {
                return Err(ConstructError::HostDegreeTooSmall {
                    got: cert.min_degree_a,
                    k,
                });
            }
            let g0 = neighbourhood_incidence_graph(&host, r)?;
            let g = pad_to_nkrs(&g0, k, s, derive_seed(seed, 5))?;
            let prov = AssembleProvenance {
                host: HostKind::Random,
                k,
                r,
                s,
                seed,
                q: None,
                host_n: host.n(),
                host_m: host.m(),
                certificate: cert,
                pigeonhole_certified: verify_no_transversal_by_pigeonhole(&host, r),
                eps: Some(eps),
                host_retries: Some(prov_host.retries_used),
            };
            Ok((g, prov))
        }
        _ => Err(ConstructError::UnsupportedConstruction { r, s }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::census::matching_census;
    use crate::solvers::exact::{exact_find, ExactOutcome};

    #[test]
    fn k2_assembly_is_certified() {
        let (g, prov) = assemble_upper_bound_instance(2, 2, 1, 7).unwrap();
        assert_eq!(g.num_parts(), 7);
        assert!(g.parts().iter().all(|p| p.len() == 2));
        assert_eq!(prov.host, HostKind::Projective);
        assert!(prov.pigeonhole_certified);
        let census = matching_census(&g, 1000);
        assert_eq!(census.uniform_s, Some(1));
        assert!(matches!(
            exact_find(&g, 1_000),
            ExactOutcome::NoTransversal { .. }
        ));
    }

    #[test]
    fn unsupported_regimes_error() {
        assert!(matches!(
            assemble_upper_bound_instance(2, 4, 1, 0),
            Err(ConstructError::UnsupportedConstruction { r: 4, s: 1 })
        ));
        assert!(matches!(
            assemble_upper_bound_instance(2, 2, 3, 0),
            Err(ConstructError::UnsupportedConstruction { .. })
        ));
    }

    #[test]
    fn norm_assembly_small_k() {
        let (g, prov) = assemble_upper_bound_instance(2, 3, 2, 1).unwrap();
        assert_eq!(prov.host, HostKind::Norm);
        assert!(prov.pigeonhole_certified);
        assert!(g.parts().iter().all(|p| p.len() == 2));
        let census = matching_census(&g, 200_000);
        assert_eq!(census.uniform_s, Some(2));
        assert!(census.all_matchings);
    }
}
