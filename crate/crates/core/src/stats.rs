/// `[min, max, mean, median, std]` of a nonempty multiset. Population std;
/// even-sized median is the midpoint of the two middle values.
pub fn five_number_summary(values: &[f64]) -> Option<[f64; 5]> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let var = sorted.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
    Some([sorted[0], sorted[n - 1], mean, median, var.sqrt()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn population_std_and_midpoint_median() {
        let s = five_number_summary(&[-4.0, -5.0, -6.0, -6.0]).unwrap();
        assert_eq!(&s[..4], &[-6.0, -4.0, -5.25, -5.5]);
        assert!((s[4] - (2.75f64 / 4.0).sqrt()).abs() < 1e-15);
        assert!(five_number_summary(&[]).is_none());
        assert_eq!(five_number_summary(&[3.0]).unwrap(), [3.0, 3.0, 3.0, 3.0, 0.0]);
    }
}
