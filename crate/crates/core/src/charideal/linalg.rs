use crate::arith::intpoly::IntPoly;

fn bareiss_step(a: &mut [Vec<IntPoly>], k: usize, col: usize, prev: &IntPoly) {
    let pivot = a[k][col].clone();
    for i in k + 1..a.len() {
        let factor = a[i][col].clone();
        for j in col + 1..a[i].len() {
            let num = &(&a[i][j] * &pivot) - &(&factor * &a[k][j]);
            a[i][j] = num.exact_div(prev).expect("Bareiss division is exact");
        }
        a[i][col] = IntPoly::zero(pivot.nvars());
    }
}

/// Determinant of a square matrix by fraction-free elimination.
pub fn determinant(mut a: Vec<Vec<IntPoly>>) -> IntPoly {
    let n = a.len();
    if n == 0 {
        return IntPoly::one(0);
    }
    let nvars = a[0][0].nvars();
    let mut negate = false;
    let mut prev = IntPoly::one(nvars);
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return IntPoly::zero(nvars);
        };
        if r != k {
            a.swap(r, k);
            negate = !negate;
        }
        if k + 1 < n {
            bareiss_step(&mut a, k, k, &prev);
            prev = a[k][k].clone();
        }
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// Rank over the fraction field of `Z[x1..xn]`.
pub fn rank(mut a: Vec<Vec<IntPoly>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let nvars = a[0][0].nvars();
    let mut prev = IntPoly::one(nvars);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(piv, r);
        bareiss_step(&mut a, r, c, &prev);
        prev = a[r][c].clone();
        r += 1;
    }
    r
}
