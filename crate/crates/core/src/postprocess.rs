//! Optional pruning of the kept cluster most visible from the unassigned
//! nodes.

use serde::{Deserialize, Serialize};

use crate::dominant_sets::{Cluster, Decomposition};
use crate::visibility::VisibilityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinityScore {
    pub cluster_id: usize,
    pub q: usize,
}

fn edges_within(a: &VisibilityMatrix, nodes: &[usize]) -> usize {
    let mut count = 0;
    for (x, &i) in nodes.iter().enumerate() {
        for &j in &nodes[x + 1..] {
            count += a.visible(i, j) as usize;
        }
    }
    count
}

/// Visible pairs between the cluster and the unassigned set, by
/// inclusion-exclusion over the three induced subgraphs.
pub fn cross_visibility(a: &VisibilityMatrix, cluster: &Cluster, unassigned: &[usize]) -> usize {
    let members: Vec<usize> = cluster.members(a.dim()).collect();
    let mut union = members.clone();
    union.extend_from_slice(unassigned);
    edges_within(a, &union) - edges_within(a, &members) - edges_within(a, unassigned)
}

pub fn affinity_scores(decomp: &Decomposition, a: &VisibilityMatrix) -> Vec<AffinityScore> {
    decomp
        .clusters
        .iter()
        .enumerate()
        .map(|(cluster_id, c)| AffinityScore {
            cluster_id,
            q: cross_visibility(a, c, &decomp.unassigned),
        })
        .collect()
}

/// Dissolves the cluster with the largest cross visibility `q` into the
/// unassigned set. Ties go to the larger `q` per member, then to the later
/// extracted cluster. Returns the removed cluster's index, or `None` when
/// every `q` is zero.
pub fn prune_weakest(decomp: &mut Decomposition, a: &VisibilityMatrix) -> Option<usize> {
    let scores = affinity_scores(decomp, a);
    let best = scores
        .iter()
        .filter(|s| s.q > 0)
        .max_by(|x, y| {
            let nx = decomp.clusters[x.cluster_id].len();
            let ny = decomp.clusters[y.cluster_id].len();
            x.q.cmp(&y.q)
                // q/N_c compared exactly: qx * ny vs qy * nx.
                .then((x.q * ny).cmp(&(y.q * nx)))
                .then(x.cluster_id.cmp(&y.cluster_id))
        })?
        .cluster_id;
    decomp.dissolve(best);
    Some(best)
}
