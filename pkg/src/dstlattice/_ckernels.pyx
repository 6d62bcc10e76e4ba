# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops (see _kernels_py for the reference)."""
import numpy as np
cimport numpy as cnp

BACKEND = "cython"

ctypedef double complex cplx


cdef inline double cabs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


def march_beta(b_prev, bh, cplx seed, double eps=1e-8):
    cdef const cplx[:] bp = np.ascontiguousarray(b_prev, dtype=complex)
    cdef const cplx[:] h = np.ascontiguousarray(bh, dtype=complex)
    cdef Py_ssize_t N = bp.shape[0], n
    out_arr = np.empty(N + 1, dtype=complex)
    cdef cplx[:] out = out_arr
    cdef cplx cur = seed, den
    cdef double e2 = eps * eps
    out[0] = seed
    for n in range(N):
        den = 1.0 - h[n] * bp[n]
        if cabs2(den) < e2:
            raise ZeroDivisionError(n)
        cur = (cur - bp[n]) / den
        out[n + 1] = cur
    return out_arr


cdef inline Py_ssize_t md(Py_ssize_t i, Py_ssize_t m) nogil:
    i = i % m
    return i + m if i < 0 else i


cdef struct Site:
    cplx NL, B, C, D, A, N2


cdef int site_fields(const cplx[:, :] X, const cplx[:, :] Y, cplx th, Py_ssize_t n, Py_ssize_t a,
                     Py_ssize_t N, Py_ssize_t M, double e2, Site* s) nogil:
    cdef cplx x = X[md(n, N), md(a, M)]
    cdef cplx y = Y[md(n - 1, N), md(a, M)]
    cdef cplx NL = th + x * Y[md(n, N), md(a - 1, M)]
    cdef cplx NLm = th + X[md(n - 1, N), md(a + 1, M)] * y
    cdef cplx p = X[md(n + 1, N), md(a, M)] - NL * x
    cdef cplx q = Y[md(n - 2, N), md(a, M)] - NLm * y
    cdef cplx den = 1.0 - x * y
    cdef cplx D = 1.0 + x * y
    if cabs2(den) < e2 or cabs2(D) < e2:
        return 1
    s.NL = NL
    s.B = (p + x * x * q) / den
    s.C = (q + y * y * p) / den
    s.D = D
    s.N2 = (y * s.B + x * s.C) / D
    s.A = (1.0 + s.B * s.C) / D
    return 0


cdef inline double amax(double m, cplx z) nogil:
    cdef double v = cabs2(z)
    return v if v > m else m


def dnls_sweep(X_in, Y_in, cplx theta, Py_ssize_t a_lo, Py_ssize_t a_hi, double eps=1e-8):
    cdef const cplx[:, :] X = np.ascontiguousarray(X_in, dtype=complex)
    cdef const cplx[:, :] Y = np.ascontiguousarray(Y_in, dtype=complex)
    cdef Py_ssize_t N = X.shape[0], M = X.shape[1], n, a, i, j, k, a2, b2
    eq_arr = np.zeros((N, M))
    zc_arr = np.zeros((N, M))
    cdef double[:, :] eq = eq_arr
    cdef double[:, :] zc = zc_arr
    cdef Site f0, f1
    cdef cplx NLa1, Xna, Xn1, Xa1, Yna, Yt, Ys, Yt1
    cdef double m, e2 = eps * eps
    # polynomial 2x2 matrices, degree axis last
    cdef cplx L0[2][2][2]
    cdef cplx L1[2][2][2]
    cdef cplx V0[2][2][3]
    cdef cplx V1[2][2][3]
    cdef cplx R[2][2][4]
    for n in range(N):
        for a in range(a_lo, a_hi):
            if site_fields(X, Y, theta, n, a, N, M, e2, &f0):
                raise ZeroDivisionError((n, a))
            if site_fields(X, Y, theta, n + 1, a, N, M, e2, &f1):
                raise ZeroDivisionError((n + 1, a))
            Xna = X[n, a]
            Xn1 = X[md(n + 1, N), a]
            Xa1 = X[n, md(a + 1, M)]
            Yna = Y[n, a]
            Yt = Y[n, md(a - 1, M)]
            Ys = Y[md(n - 1, N), a]
            NLa1 = theta + Xa1 * Yna
            m = 0.0
            m = amax(m, f0.B - (Xn1 + (f1.N2 - NLa1) * Xna))
            m = amax(m, f1.B - (NLa1 * f0.B + Xa1 * f0.D - f1.A * Xna))
            m = amax(m, f1.C - (Ys - Yna * (f0.NL - f0.N2)))
            m = amax(m, f0.C - (f1.C * f0.NL + f1.D * Yt - Yna * f0.A))
            m = amax(m, (f1.N2 - NLa1) - (f0.N2 - f0.NL))
            m = amax(m, f1.D - f0.D - (Yna * f0.B - f1.C * Xna))
            m = amax(m, f1.A - f0.A - (NLa1 * f0.N2 - f1.N2 * f0.NL + Xa1 * Ys - Xn1 * Yt))
            m = amax(m, f1.A * f0.NL - f0.A * NLa1 - (Xa1 * f0.C - f1.B * Yt))
            eq[n, a] = m ** 0.5
            # zero curvature V(n+1,a) L(n,a) - L(n,a+1) V(n,a)
            for i in range(2):
                for j in range(2):
                    for k in range(2):
                        L0[i][j][k] = 0
                        L1[i][j][k] = 0
                    for k in range(3):
                        V0[i][j][k] = 0
                        V1[i][j][k] = 0
                    for k in range(4):
                        R[i][j][k] = 0
            L0[0][0][0] = f0.NL
            L0[0][0][1] = 1
            L0[0][1][0] = Xna
            L0[1][0][0] = Yt
            L0[1][1][0] = 1
            L1[0][0][0] = NLa1
            L1[0][0][1] = 1
            L1[0][1][0] = Xa1
            L1[1][0][0] = Yna
            L1[1][1][0] = 1
            V0[0][0][0] = f0.A
            V0[0][0][1] = f0.N2
            V0[0][0][2] = 1
            V0[0][1][0] = f0.B
            V0[0][1][1] = Xna
            V0[1][0][0] = f0.C
            V0[1][0][1] = Ys
            V0[1][1][0] = f0.D
            V1[0][0][0] = f1.A
            V1[0][0][1] = f1.N2
            V1[0][0][2] = 1
            V1[0][1][0] = f1.B
            V1[0][1][1] = Xn1
            V1[1][0][0] = f1.C
            V1[1][0][1] = Yna
            V1[1][1][0] = f1.D
            for i in range(2):
                for j in range(2):
                    for k in range(2):
                        for a2 in range(3):
                            for b2 in range(2):
                                R[i][j][a2 + b2] += V1[i][k][a2] * L0[k][j][b2]
                                R[i][j][a2 + b2] -= L1[i][k][b2] * V0[k][j][a2]
            m = 0.0
            for i in range(2):
                for j in range(2):
                    for k in range(4):
                        m = amax(m, R[i][j][k])
            zc[n, a] = m ** 0.5
    return eq_arr, zc_arr
