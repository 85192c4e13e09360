use serde::Serialize;

/// Exhaustive evaluation of `Q1 Q2 + Q2 Q3 - Q1 Q3` over definite outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MacrorealistBound {
    pub max_k3: i32,
    pub min_k3: i32,
    /// Each sign triple `(Q1, Q2, Q3)` with its value.
    pub per_assignment: Vec<([i32; 3], i32)>,
}

pub fn macrorealist_bound() -> MacrorealistBound {
    let per_assignment: Vec<([i32; 3], i32)> = (0..8)
        .map(|bits| {
            let s = |k: u32| if bits >> k & 1 == 0 { 1 } else { -1 };
            let q = [s(2), s(1), s(0)];
            (q, q[0] * q[1] + q[1] * q[2] - q[0] * q[2])
        })
        .collect();
    let max_k3 = per_assignment.iter().map(|p| p.1).max().unwrap_or(0);
    let min_k3 = per_assignment.iter().map(|p| p.1).min().unwrap_or(0);
    MacrorealistBound {
        max_k3,
        min_k3,
        per_assignment,
    }
}
