//! Point–line incidence hosts from the projective plane PG(2, q).
//!
//! Two distinct points lie on exactly one common line, so the incidence
//! bipartite graph (points on the A side) certifies s = 1. Deleting one line
//! from B leaves every point with degree >= q while making |B| < |A|, which
//! is exactly what the pigeonhole certificate needs.

use super::host::{BipartiteHost, HostCertificate};
use super::primes::is_prime;
use super::ConstructError;

/// Canonical representatives of the points of PG(2, q): (1, y, z), then
/// (0, 1, z), then (0, 0, 1). Lines use the same coordinates by duality.
fn homogeneous_triples(q: u64) -> Vec<[u64; 3]> {
    let mut pts = Vec::with_capacity((q * q + q + 1) as usize);
    for y in 0..q {
        for z in 0..q {
            pts.push([1, y, z]);
        }
    }
    for z in 0..q {
        pts.push([0, 1, z]);
    }
    pts.push([0, 0, 1]);
    pts
}

/// Full point–line incidence graph of PG(2, q): n = m = q^2 + q + 1, every
/// point on exactly q + 1 lines, every two points on exactly one common line.
pub fn projective_plane_incidence(q: u64) -> Result<BipartiteHost, ConstructError> {
    if !is_prime(q) {
        return Err(ConstructError::NotPrime(q));
    }
    let pts = homogeneous_triples(q);
    let lines = homogeneous_triples(q);
    let n = pts.len();
    let mut adj = vec![Vec::with_capacity((q + 1) as usize); n];
    for (pi, p) in pts.iter().enumerate() {
        for (li, l) in lines.iter().enumerate() {
            let dot = (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q;
            if dot == 0 {
                adj[pi].push(li as u32);
            }
        }
    }
    BipartiteHost::new(n, n, adj)
}

/// The s = 1 host: PG(2, q) incidences with the last line deleted.
///
/// A = q^2+q+1 points, B = q^2+q lines; min point degree q; any two points
/// share at most one line. Certificate fields are recomputed, not assumed.
pub fn projective_plane_host(q: u64) -> Result<(BipartiteHost, HostCertificate), ConstructError> {
    let full = projective_plane_incidence(q)?;
    let n = full.n();
    let deleted = (n - 1) as u32; // deterministic choice of the deleted line
    let adj: Vec<Vec<u32>> = (0..n)
        .map(|a| {
            full.neighbours(a)
                .iter()
                .copied()
                .filter(|&b| b != deleted)
                .collect()
        })
        .collect();
    let host = BipartiteHost::new(n, n - 1, adj)?;
    let cert = HostCertificate::recompute(&host, 2, 2_000_000)?;
    debug_assert!(cert.max_common_neighbours <= 1);
    debug_assert!(cert.min_degree_a >= q as usize);
    Ok((host, cert))
}
