//! SVG drawing of unit balls, their integer dilates and the lattice.

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::ball::UnitBall;

const SIZE: i64 = 480;
const COLORS: [&str; 4] = ["#2e8b57", "#e07b00", "#1f5fbf", "#b0306a"];

fn polygon(ball: &UnitBall) -> Vec<(BigRational, BigRational)> {
    ball.extremal_rational().unwrap_or_else(|| {
        // symbolic weights: fall back to decimal approximations
        ball.extremal_points()
            .iter()
            .map(|(c, w)| {
                let v = BigRational::from_float(w.approx(ball.scale())).expect("finite weight");
                (BigRational::from_integer(BigInt::from(c.x)) / &v, BigRational::from_integer(BigInt::from(c.y)) / &v)
            })
            .collect()
    })
}

fn fmt(x: &BigRational) -> String {
    format!("{:.3}", x.to_f64().unwrap_or(0.0))
}

/// Draws the extremal polygons of `balls` and their first `dilates` integer
/// dilates over the lattice points they cover. Coordinates are the first
/// ball's homology coordinates.
pub fn render_svg(balls: &[&UnitBall], dilates: usize) -> String {
    let dilates = dilates.max(1);
    let polys: Vec<_> = balls.iter().map(|b| polygon(b)).collect();
    let mut extent = BigRational::from_integer(BigInt::from(1));
    for p in &polys {
        for (x, y) in p {
            let m = BigRational::from_integer(BigInt::from(dilates as i64));
            for v in [x.abs() * &m, y.abs() * &m] {
                if v > extent {
                    extent = v;
                }
            }
        }
    }
    let half = BigRational::from_integer(BigInt::from(SIZE / 2));
    let margin = BigRational::new(BigInt::from(11), BigInt::from(10));
    let scale = &half / (&extent * &margin);
    let sx = |x: &BigRational| fmt(&(&half + x * &scale));
    let sy = |y: &BigRational| fmt(&(&half - y * &scale));

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    let r = extent.floor().to_integer().to_i64().unwrap_or(1);
    for x in -r..=r {
        for y in -r..=r {
            let (px, py) = (BigRational::from_integer(x.into()), BigRational::from_integer(y.into()));
            writeln!(out, r#"<circle cx="{}" cy="{}" r="2" fill="black"/>"#, sx(&px), sy(&py)).unwrap();
        }
    }
    for (k, p) in polys.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        for m in 1..=dilates {
            let f = BigRational::from_integer(BigInt::from(m as i64));
            let pts: Vec<String> = p.iter().map(|(x, y)| format!("{},{}", sx(&(x * &f)), sy(&(y * &f)))).collect();
            writeln!(out, r#"<polygon points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, pts.join(" ")).unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn square_plot() {
        let ball = UnitBall::new(&fixtures::bouquet((1, 1), (1, 1))).unwrap();
        let svg = render_svg(&[&ball], 4);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polygon").count(), 4);
        assert_eq!(svg.matches("<circle").count(), 81);
        assert_eq!(svg, render_svg(&[&ball], 4));
    }
}
