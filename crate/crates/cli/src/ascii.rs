//! Text heatmaps. Glyphs come from a 10-step ramp scaled to the largest
//! entry; exact zeros are always `.` so dark ports stand out.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

const RAMP: [char; 10] = ['-', ':', ';', '=', '+', '*', 'x', '%', '#', '@'];

fn glyph(value: &BigRational, max: &BigRational) -> char {
    if value.is_zero() || max.is_zero() {
        return '.';
    }
    // Bucket ceil(10·v/max) − 1, clamped into the ramp.
    let scaled = (value.abs() * BigRational::from_integer(BigInt::from(10)) / max).ceil();
    let idx = scaled.to_integer();
    let idx: usize = idx.try_into().unwrap_or(10);
    RAMP[idx.clamp(1, 10) - 1]
}

fn max_of<'a>(values: impl Iterator<Item = &'a BigRational>) -> BigRational {
    values
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// One row of glyphs under a row of 1-based labels.
pub fn render_distribution(values: &[BigRational]) -> String {
    let max = max_of(values.iter());
    let mut labels = String::from("    ");
    let mut row = String::from("    ");
    for (i, v) in values.iter().enumerate() {
        labels.push_str(&format!("{:>3}", i + 1));
        row.push_str(&format!("{:>3}", glyph(v, &max)));
    }
    format!("{labels}\n{row}\n")
}

/// A square or rectangular grid; row and column labels start at
/// `first_label`.
pub fn render_matrix(rows: &[Vec<BigRational>], first_label: usize) -> String {
    let max = max_of(rows.iter().flatten());
    let cols = rows.first().map_or(0, Vec::len);
    let mut out = String::from("    ");
    for c in 0..cols {
        out.push_str(&format!("{:>3}", c + first_label));
    }
    out.push('\n');
    for (r, row) in rows.iter().enumerate() {
        out.push_str(&format!("{:>4}", r + first_label));
        for v in row {
            out.push_str(&format!("{:>3}", glyph(v, &max)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zeros_are_dots() {
        let grid = vec![vec![q(0, 1); 3]; 3];
        let text = render_matrix(&grid, 1);
        let body: String = text
            .lines()
            .skip(1)
            .flat_map(|l| l.chars().skip(4))
            .filter(|c| !c.is_whitespace())
            .collect();
        assert_eq!(body, ".".repeat(9));
    }

    #[test]
    fn ramp_scales_to_max() {
        let text = render_distribution(&[q(1, 8), q(1, 8), q(0, 1), q(1, 2), q(1, 8), q(1, 8)]);
        let glyphs: Vec<char> = text
            .lines()
            .nth(1)
            .unwrap()
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        assert_eq!(glyphs, vec![';', ';', '.', '@', ';', ';']);
    }

    #[test]
    fn tiny_nonzero_is_not_a_dot() {
        let text = render_distribution(&[q(1, 1_000_000), q(1, 1)]);
        assert!(text.lines().nth(1).unwrap().contains('-'));
    }
}
