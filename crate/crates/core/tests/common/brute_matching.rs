//! Exhaustive minimum-weight perfect matching for small graphs.

pub fn brute_force_min_cost(cost: &[Vec<i64>]) -> i64 {
    fn go(cost: &[Vec<i64>], used: &mut Vec<bool>) -> i64 {
        let Some(i) = used.iter().position(|u| !u) else {
            return 0;
        };
        used[i] = true;
        let mut best = i64::MAX;
        for j in i + 1..cost.len() {
            if !used[j] {
                used[j] = true;
                let rest = go(cost, used);
                best = best.min(cost[i][j] + rest);
                used[j] = false;
            }
        }
        used[i] = false;
        best
    }
    go(cost, &mut vec![false; cost.len()])
}
