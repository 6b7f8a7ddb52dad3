//! Minimal dense complex linear algebra: a column-major matrix type, a
//! Householder QR, and eigenvalues via LAPACK `zgeev`.

use num_complex::Complex64;
use std::os::raw::c_char;
use std::sync::Once;

extern "C" {
    fn zgeev_(
        jobvl: *const c_char,
        jobvr: *const c_char,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut Complex64,
        vl: *mut Complex64,
        ldvl: *const i32,
        vr: *mut Complex64,
        ldvr: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );

    fn openblas_set_num_threads(num_threads: i32);
}

/// BLAS-level threading fights with trial-level parallelism on small
/// matrices; pin it to one thread per call.
fn ensure_serial_blas() {
    static ONCE: Once = Once::new();
    ONCE.call_once(|| unsafe { openblas_set_num_threads(1) });
}

/// Square complex matrix in column-major order (LAPACK layout).
#[derive(Debug, Clone)]
pub(crate) struct CMatrix {
    pub n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn as_mut_ptr(&mut self) -> *mut Complex64 {
        self.data.as_mut_ptr()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i + j * self.n]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i + j * self.n]
    }
}

/// Eigenvalues of a general complex matrix (the matrix is consumed as
/// LAPACK workspace). Returns `None` when the QR iteration fails.
pub(crate) fn eigenvalues(mut m: CMatrix) -> Option<Vec<Complex64>> {
    ensure_serial_blas();
    let n = m.n;
    if n == 0 {
        return Some(Vec::new());
    }
    let n_i = n as i32;
    let jobv = b'N' as c_char;
    let mut w = vec![Complex64::ZERO; n];
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info = 0i32;

    // Workspace query, then the real call.
    let mut wkopt = [Complex64::ZERO];
    let query = -1i32;
    unsafe {
        zgeev_(
            &jobv,
            &jobv,
            &n_i,
            m.as_mut_ptr(),
            &n_i,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            std::ptr::null_mut(),
            &1,
            wkopt.as_mut_ptr(),
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return None;
    }
    let lwork = (wkopt[0].re as i32).max(2 * n_i);
    let mut work = vec![Complex64::ZERO; lwork as usize];
    unsafe {
        zgeev_(
            &jobv,
            &jobv,
            &n_i,
            m.as_mut_ptr(),
            &n_i,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            std::ptr::null_mut(),
            &1,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    (info == 0).then_some(w)
}

/// In-place Householder QR. On return `a` holds R in its upper triangle;
/// the returned matrix is the unitary factor Q.
pub(crate) fn householder_qr(a: &mut CMatrix) -> CMatrix {
    let n = a.n;
    let mut reflectors: Vec<(usize, Vec<Complex64>, f64)> = Vec::with_capacity(n);

    for j in 0..n.saturating_sub(1) {
        let mut norm2 = 0.0;
        for i in j..n {
            norm2 += a[(i, j)].norm_sqr();
        }
        let norm = norm2.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(j, j)];
        let alpha = if x0.norm() == 0.0 {
            Complex64::new(-norm, 0.0)
        } else {
            -(x0 / x0.norm()) * norm
        };
        let mut v: Vec<Complex64> = (j..n).map(|i| a[(i, j)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // Apply H = I − τ v v* to the trailing columns.
        for c in j..n {
            let mut dot = Complex64::ZERO;
            for (off, vi) in v.iter().enumerate() {
                dot += vi.conj() * a[(j + off, c)];
            }
            let scale = tau * dot;
            for (off, vi) in v.iter().enumerate() {
                let entry = a[(j + off, c)];
                a[(j + off, c)] = entry - scale * vi;
            }
        }
        a[(j, j)] = alpha;
        for i in j + 1..n {
            a[(i, j)] = Complex64::ZERO;
        }
        reflectors.push((j, v, tau));
    }

    // Q = H_0 H_1 ⋯ applied to the identity, last reflector first.
    let mut q = CMatrix::identity(n);
    for (j, v, tau) in reflectors.iter().rev() {
        for c in 0..n {
            let mut dot = Complex64::ZERO;
            for (off, vi) in v.iter().enumerate() {
                dot += vi.conj() * q[(j + off, c)];
            }
            let scale = *tau * dot;
            for (off, vi) in v.iter().enumerate() {
                let entry = q[(j + off, c)];
                q[(j + off, c)] = entry - scale * vi;
            }
        }
    }
    q
}
