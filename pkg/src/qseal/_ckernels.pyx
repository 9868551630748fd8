# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels.

Same contract as :mod:`qseal._pykernels`: in-place updates of a contiguous
complex128 vector, qubit ``q`` = bit ``q`` of the basis index.
"""
import numpy as np

from libc.math cimport sqrt

ctypedef double complex cplx

BACKEND = "cython"

cdef cplx[4] _IPOW
_IPOW[0] = 1.0
_IPOW[1] = 1j
_IPOW[2] = -1.0
_IPOW[3] = -1j


cdef extern from *:
    int __builtin_parityll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef inline double _abs2(cplx a) nogil:
    return a.real * a.real + a.imag * a.imag


def apply_1q(cplx[::1] psi, int q, cplx u00, cplx u01, cplx u10, cplx u11):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << q
    cdef Py_ssize_t base = 0
    cdef Py_ssize_t j
    # real arithmetic on interleaved (re, im) pairs sidesteps the
    # NaN-checking complex multiply
    cdef double* p = <double*>&psi[0]
    cdef double* x
    cdef double* y
    cdef double ar = u00.real, ai = u00.imag, br = u01.real, bi = u01.imag
    cdef double cr = u10.real, ci = u10.imag, dr = u11.real, di = u11.imag
    cdef double xr, xi, yr, yi
    with nogil:
        while base < dim:
            for j in range(base, base + stride):
                x = p + 2 * j
                y = p + 2 * (j + stride)
                xr = x[0]
                xi = x[1]
                yr = y[0]
                yi = y[1]
                x[0] = ar * xr - ai * xi + br * yr - bi * yi
                x[1] = ar * xi + ai * xr + br * yi + bi * yr
                y[0] = cr * xr - ci * xi + dr * yr - di * yi
                y[1] = cr * xi + ci * xr + dr * yi + di * yr
            base += 2 * stride


cdef inline void _swap_pairs(cplx[::1] psi, Py_ssize_t need, Py_ssize_t free_bit, Py_ssize_t flip) noexcept nogil:
    # swap psi[i] with psi[i ^ flip] for every i holding all bits of
    # ``need`` and none of ``free_bit``; walks only those i
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t fixed = need | free_bit
    cdef Py_ssize_t rest = (dim - 1) & ~fixed
    cdef Py_ssize_t sub = 0
    cdef Py_ssize_t i, j
    cdef cplx tmp
    while True:
        i = sub | need
        j = i ^ flip
        tmp = psi[i]
        psi[i] = psi[j]
        psi[j] = tmp
        if sub == rest:
            break
        sub = (sub - rest) & rest


def apply_cnot(cplx[::1] psi, int c, int t):
    cdef Py_ssize_t cbit = (<Py_ssize_t>1) << c
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << t
    with nogil:
        _swap_pairs(psi, cbit, tbit, tbit)


def apply_cswap(cplx[::1] psi, int c, int a, int b):
    cdef Py_ssize_t cbit = (<Py_ssize_t>1) << c
    cdef Py_ssize_t abit = (<Py_ssize_t>1) << a
    cdef Py_ssize_t bbit = (<Py_ssize_t>1) << b
    with nogil:
        _swap_pairs(psi, cbit | abit, bbit, abit | bbit)


def apply_pauli(const cplx[::1] psi, cplx[::1] out, long long xmask, long long zmask, int ny):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t i
    cdef cplx phase = _IPOW[ny & 3]
    with nogil:
        for i in range(dim):
            if __builtin_parityll(i & zmask):
                out[i ^ xmask] = -phase * psi[i]
            else:
                out[i ^ xmask] = phase * psi[i]


def pauli_expectation(const cplx[::1] psi, long long xmask, long long zmask, int ny):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t i
    cdef cplx acc = 0
    cdef cplx term
    with nogil:
        for i in range(dim):
            term = psi[i ^ xmask].conjugate() * psi[i]
            if __builtin_parityll(i & zmask):
                acc -= term
            else:
                acc += term
    return (_IPOW[ny & 3] * acc).real


def prob_one(const cplx[::1] psi, int q):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << q
    cdef Py_ssize_t base = stride
    cdef Py_ssize_t i
    cdef double acc = 0.0
    with nogil:
        while base < dim:
            for i in range(base, base + stride):
                acc += _abs2(psi[i])
            base += 2 * stride
    return acc


def marginal(const cplx[::1] psi, qubits):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef long long[::1] qs = np.ascontiguousarray(qubits, dtype=np.int64)
    cdef Py_ssize_t k = qs.shape[0]
    out_arr = np.zeros((<Py_ssize_t>1) << k, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, o
    with nogil:
        for i in range(dim):
            o = 0
            for j in range(k):
                o |= ((i >> qs[j]) & 1) << j
            out[o] += _abs2(psi[i])
    return out_arr


def collapse(cplx[::1] psi, long long mask, long long value):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t i
    cdef double norm2 = 0.0
    cdef double scale
    with nogil:
        for i in range(dim):
            if (i & mask) != value:
                psi[i] = 0
            else:
                norm2 += _abs2(psi[i])
        if norm2 > 0.0:
            scale = 1.0 / sqrt(norm2)
            for i in range(dim):
                psi[i] = psi[i] * scale
    return norm2


def masked_weight(const cplx[::1] psi, long long mask, int threshold):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t i
    cdef double acc = 0.0
    with nogil:
        for i in range(dim):
            if __builtin_popcountll(i & mask) > threshold:
                acc += _abs2(psi[i])
    return acc


def majority_project(cplx[::1] psi, long long mask, int threshold, bint upper):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t i
    cdef double norm2 = 0.0
    cdef double scale
    cdef bint above
    with nogil:
        for i in range(dim):
            above = __builtin_popcountll(i & mask) > threshold
            if above != upper:
                psi[i] = 0
            else:
                norm2 += _abs2(psi[i])
        if norm2 > 0.0:
            scale = 1.0 / sqrt(norm2)
            for i in range(dim):
                psi[i] = psi[i] * scale
    return norm2
