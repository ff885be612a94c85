use super::Mask;

/// Exact squared Euclidean distance (in cell units) from every cell to the
/// nearest `false` cell centre, via the separable lower-envelope transform.
///
/// `false` cells get 0. If the mask has no `false` cell every entry is
/// `f64::INFINITY`.
pub fn squared_distance_to_background(mask: &Mask) -> Vec<f64> {
    let (rows, cols) = (mask.rows(), mask.cols());
    let mut dist: Vec<f64> = mask.cells().iter().map(|&c| if c { f64::INFINITY } else { 0.0 }).collect();

    let len = rows.max(cols);
    let mut f = vec![0.0; len];
    let mut out = vec![0.0; len];
    let mut v = vec![0usize; len];
    let mut z = vec![0.0; len + 1];

    for c in 0..cols {
        for r in 0..rows {
            f[r] = dist[r * cols + c];
        }
        lower_envelope(&f[..rows], &mut out[..rows], &mut v, &mut z);
        for r in 0..rows {
            dist[r * cols + c] = out[r];
        }
    }
    for r in 0..rows {
        f[..cols].copy_from_slice(&dist[r * cols..(r + 1) * cols]);
        lower_envelope(&f[..cols], &mut out[..cols], &mut v, &mut z);
        dist[r * cols..(r + 1) * cols].copy_from_slice(&out[..cols]);
    }
    dist
}

/// One-dimensional transform `out[q] = min_p (q - p)^2 + f[p]`.
fn lower_envelope(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    // parabolas rooted at infinite samples never appear in the envelope
    let mut k: isize = -1;
    for q in 0..n {
        if !f[q].is_finite() {
            continue;
        }
        loop {
            if k < 0 {
                k = 0;
                v[0] = q;
                z[0] = f64::NEG_INFINITY;
                z[1] = f64::INFINITY;
                break;
            }
            let p = v[k as usize];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k as usize] {
                k -= 1;
                continue;
            }
            k += 1;
            v[k as usize] = q;
            z[k as usize] = s;
            z[k as usize + 1] = f64::INFINITY;
            break;
        }
    }
    if k < 0 {
        out.fill(f64::INFINITY);
        return;
    }
    let mut j = 0usize;
    for (q, o) in out.iter_mut().enumerate() {
        while z[j + 1] < q as f64 {
            j += 1;
        }
        let p = v[j];
        let d = q as f64 - p as f64;
        *o = d * d + f[p];
    }
}
