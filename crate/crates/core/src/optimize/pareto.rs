/// `a` dominates `b` when it is no worse in every objective and better in
/// one (all objectives minimized).
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Indices of the non-dominated points. Exact duplicates keep their first
/// occurrence only.
pub fn pareto_front(points: &[Vec<f64>]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points
                .iter()
                .enumerate()
                .any(|(j, q)| dominates(q, &points[i]) || (j < i && *q == points[i]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn front_of_a_small_set() {
        let pts = vec![
            vec![1.0, 5.0, 0.0],
            vec![2.0, 2.0, 0.0],
            vec![3.0, 3.0, 0.0], // dominated by the second
            vec![5.0, 1.0, 0.0],
            vec![2.0, 2.0, 0.0], // duplicate
        ];
        assert_eq!(pareto_front(&pts), vec![0, 1, 3]);
    }

    #[test]
    fn no_point_dominates_itself() {
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]));
    }
}
