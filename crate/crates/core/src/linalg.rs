//! Small dense helpers for 4×4 matrices (row-major).

pub type Mat4 = [[f64; 4]; 4];

pub const IDENTITY4: Mat4 = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

pub fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn transpose4(a: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

/// LU with partial pivoting; returns `(lu, perm_sign)` or `None` when singular.
fn lu4(a: &Mat4) -> Option<(Mat4, f64, [usize; 4])> {
    let mut m = *a;
    let mut sign = 1.0;
    let mut perm = [0, 1, 2, 3];
    for col in 0..4 {
        let piv = (col..4).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[piv][col] == 0.0 {
            return None;
        }
        if piv != col {
            m.swap(piv, col);
            perm.swap(piv, col);
            sign = -sign;
        }
        for r in col + 1..4 {
            let f = m[r][col] / m[col][col];
            m[r][col] = f;
            for c in col + 1..4 {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    Some((m, sign, perm))
}

pub fn det4(a: &Mat4) -> f64 {
    match lu4(a) {
        Some((lu, sign, _)) => sign * (0..4).map(|i| lu[i][i]).product::<f64>(),
        None => 0.0,
    }
}

pub fn inverse4(a: &Mat4) -> Option<Mat4> {
    let (lu, _, perm) = lu4(a)?;
    let mut inv = [[0.0; 4]; 4];
    for col in 0..4 {
        // solve A x = e_col
        let mut y = [0.0; 4];
        for i in 0..4 {
            let b = if perm[i] == col { 1.0 } else { 0.0 };
            y[i] = b - (0..i).map(|k| lu[i][k] * y[k]).sum::<f64>();
        }
        let mut x = [0.0; 4];
        for i in (0..4).rev() {
            x[i] = (y[i] - (i + 1..4).map(|k| lu[i][k] * x[k]).sum::<f64>()) / lu[i][i];
        }
        for i in 0..4 {
            inv[i][col] = x[i];
        }
    }
    Some(inv)
}

pub fn max_abs_diff4(a: &Mat4, b: &Mat4) -> f64 {
    (0..16)
        .map(|k| (a[k / 4][k % 4] - b[k / 4][k % 4]).abs())
        .fold(0.0, f64::max)
}
