//! Small dense helpers for real symmetric 3x3 matrices.

pub type Mat3 = [[f64; 3]; 3];
pub type Vec3 = [f64; 3];

/// Convergence threshold for off-diagonal elements, relative to the Frobenius norm.
const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;

pub fn frobenius_norm(a: &Mat3) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_asymmetry(a: &Mat3) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in (i + 1)..3 {
            worst = worst.max((a[i][j] - a[j][i]).abs());
        }
    }
    worst
}

pub fn mat_vec(a: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for (i, row) in a.iter().enumerate() {
        out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    out
}

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Cyclic Jacobi eigen-decomposition of a symmetric 3x3 matrix.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors, with
/// `vectors[k]` paired to `values[k]`. Each eigenvector is normalized and its
/// largest-magnitude component is made positive so overlaps are reproducible
/// across parameter scans. Rotations sweep the pairs (0,1), (0,2), (1,2) in a
/// fixed order until every off-diagonal element is below `1e-14 * ||A||_F`.
pub fn jacobi_eigen(a: &Mat3) -> (Vec3, [Vec3; 3]) {
    let mut m = *a;
    // v[i][k]: component i of eigenvector k
    let mut v: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let threshold = JACOBI_TOL * frobenius_norm(a);

    for _ in 0..MAX_SWEEPS {
        let off = m[0][1].abs().max(m[0][2].abs()).max(m[1][2].abs());
        if off <= threshold {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if m[p][q] == 0.0 {
                continue;
            }
            let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
            let t = if theta.abs() > 1e150 {
                0.5 / theta
            } else {
                theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
            };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            rotate(&mut m, &mut v, p, q, c, s);
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]));

    let mut values = [0.0; 3];
    let mut vectors = [[0.0; 3]; 3];
    for (k, &src) in order.iter().enumerate() {
        values[k] = m[src][src];
        let mut vec = [v[0][src], v[1][src], v[2][src]];
        let norm = dot(&vec, &vec).sqrt();
        vec.iter_mut().for_each(|x| *x /= norm);
        fix_sign(&mut vec);
        vectors[k] = vec;
    }
    (values, vectors)
}

/// Apply the rotation annihilating `m[p][q]` to both `m` and the accumulated basis.
fn rotate(m: &mut Mat3, v: &mut Mat3, p: usize, q: usize, c: f64, s: f64) {
    let r = 3 - p - q;
    let app = m[p][p];
    let aqq = m[q][q];
    let apq = m[p][q];
    m[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
    m[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
    m[p][q] = 0.0;
    m[q][p] = 0.0;
    let arp = m[r][p];
    let arq = m[r][q];
    m[r][p] = c * arp - s * arq;
    m[p][r] = m[r][p];
    m[r][q] = s * arp + c * arq;
    m[q][r] = m[r][q];
    for row in v.iter_mut() {
        let vp = row[p];
        let vq = row[q];
        row[p] = c * vp - s * vq;
        row[q] = s * vp + c * vq;
    }
}

/// Largest-magnitude component positive; the first index wins ties.
pub fn fix_sign(v: &mut Vec3) {
    let mut lead = 0;
    for i in 1..3 {
        if v[i].abs() > v[lead].abs() {
            lead = i;
        }
    }
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
