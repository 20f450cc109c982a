/// Maximum bipartite matching by augmenting paths (Kuhn). Left vertices are
/// tried in index order and neighbors in the order given, so the result is
/// deterministic. Returns, for each left vertex, its matched right vertex.
pub fn max_bipartite_matching(n_right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let mut match_right: Vec<Option<usize>> = vec![None; n_right];
    for u in 0..adj.len() {
        let mut visited = vec![false; n_right];
        augment(u, adj, &mut visited, &mut match_right);
    }
    let mut match_left = vec![None; adj.len()];
    for (v, u) in match_right.iter().enumerate() {
        if let Some(u) = *u {
            match_left[u] = Some(v);
        }
    }
    match_left
}

fn augment(u: usize, adj: &[Vec<usize>], visited: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
    for &v in &adj[u] {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        if match_right[v].is_none_or(|w| augment(w, adj, visited, match_right)) {
            match_right[v] = Some(u);
            return true;
        }
    }
    false
}
