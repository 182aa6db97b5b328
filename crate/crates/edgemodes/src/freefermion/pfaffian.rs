use num_complex::Complex64;

/// Pfaffian of a complex antisymmetric n x n matrix (row-major), by
/// Parlett-Reid tridiagonalization with partial pivoting.  O(n^3).
pub fn pfaffian(a: &[Complex64], n: usize) -> Complex64 {
    assert_eq!(a.len(), n * n, "pfaffian: expected {n}x{n} matrix");
    if n % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let mut a = a.to_vec();
    let idx = |r: usize, c: usize| r * n + c;
    let mut pf = Complex64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        let kp = (k + 1..n)
            .max_by(|&x, &y| a[idx(x, k)].norm().partial_cmp(&a[idx(y, k)].norm()).unwrap())
            .unwrap();
        if kp != k + 1 {
            for c in 0..n {
                a.swap(idx(k + 1, c), idx(kp, c));
            }
            for r in 0..n {
                a.swap(idx(r, k + 1), idx(r, kp));
            }
            pf = -pf;
        }
        let piv = a[idx(k, k + 1)];
        if piv.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        pf *= piv;
        if k + 2 < n {
            let tau: Vec<Complex64> = (k + 2..n).map(|c| a[idx(k, c)] / piv).collect();
            let col: Vec<Complex64> = (k + 2..n).map(|r| a[idx(r, k + 1)]).collect();
            for (ri, r) in (k + 2..n).enumerate() {
                for (ci, c) in (k + 2..n).enumerate() {
                    a[idx(r, c)] += tau[ri] * col[ci] - col[ri] * tau[ci];
                }
            }
        }
        k += 2;
    }
    pf
}
