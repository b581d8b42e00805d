# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled simulation kernels.

Statement-for-statement mirror of pyfallback.py: same draw order, same
floating-point expressions, same libm calls. Keep the two in lockstep; the
test suite asserts bit-identical outputs.
"""

from libc.math cimport exp, log, log1p

import numpy as np

ctypedef unsigned long long u64

cdef u64 _GAMMA = 0x9E3779B97F4A7C15ULL
cdef double _INV_2_53 = 1.0 / 9007199254740992.0


cdef inline u64 _finalize(u64 z) noexcept:
    z ^= z >> 30
    z *= 0xBF58476D1CE4E5B9ULL
    z ^= z >> 27
    z *= 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _uniform(u64 base, u64 counter) noexcept:
    cdef u64 z = base + (counter + 1ULL) * _GAMMA
    return <double>(_finalize(z) >> 11) * _INV_2_53


def backend_name():
    return "cython"


def run_cycle_policy(double q, double rho, double lam, long long k, long long n_steps,
                     object base, object counter):
    cdef u64 b = <u64?>int(base)
    cdef u64 ctr = <u64?>int(counter)
    cdef u64 c0 = ctr
    rewards_arr = np.empty(n_steps, dtype=np.float64)
    cdef double[::1] rewards = rewards_arr
    cdef long long t = 0, j
    cdef int state = 0
    cdef double u
    while t < n_steps:
        j = 0
        while j < k and t < n_steps:
            rewards[t] = lam
            if state == 0:
                u = _uniform(b, ctr)
                ctr += 1
                if u < q:
                    state = 1
            t += 1
            j += 1
        if t >= n_steps:
            break
        if state == 1:
            rewards[t] = 1.0
        else:
            u = _uniform(b, ctr)
            ctr += 1
            rewards[t] = 1.0 if u < rho else 0.0
        state = 0
        t += 1
    return rewards_arr, int(ctr - c0)


def hold_k_counts(double q, double rho, long long k, long long n_trials,
                  object base, object counter):
    cdef u64 b = <u64?>int(base)
    cdef u64 ctr = <u64?>int(counter)
    cdef u64 c0 = ctr
    cdef long long n_success = 0, n_high = 0, trial, j
    cdef int state
    cdef double u
    for trial in range(n_trials):
        state = 0
        for j in range(k):
            if state == 0:
                u = _uniform(b, ctr)
                ctr += 1
                if u < q:
                    state = 1
        if state == 1:
            n_high += 1
            n_success += 1
        else:
            u = _uniform(b, ctr)
            ctr += 1
            if u < rho:
                n_success += 1
    return int(n_success), int(n_high), int(ctr - c0)


def run_thompson(double q_star, double rho_star, double lam, long long n_steps,
                 object log_w0, object f_tab, object k_opt_tab, long long true_index,
                 object base, object counter):
    cdef u64 b = <u64?>int(base)
    cdef u64 ctr = <u64?>int(counter)
    cdef u64 c0 = ctr
    logw_arr = np.array(log_w0, dtype=np.float64, copy=True)
    cdef double[::1] logw = logw_arr
    f_arr = np.ascontiguousarray(f_tab, dtype=np.float64)
    cdef double[:, ::1] f = f_arr
    kopt_arr = np.ascontiguousarray(k_opt_tab, dtype=np.int64)
    cdef long long[::1] kopt = kopt_arr
    cdef Py_ssize_t m_count = logw.shape[0]
    rewards_arr = np.empty(n_steps, dtype=np.float64)
    cdef double[::1] rewards = rewards_arr
    cdef long long cap = n_steps // 2 + 1
    t_rec_arr = np.empty(cap, dtype=np.int64)
    ks_arr = np.empty(cap, dtype=np.int64)
    rs_arr = np.empty(cap, dtype=np.int64)
    midx_arr = np.empty(cap, dtype=np.int64)
    post_arr = np.empty(cap, dtype=np.float64)
    cdef long long[::1] t_rec = t_rec_arr
    cdef long long[::1] ks = ks_arr
    cdef long long[::1] rs = rs_arr
    cdef long long[::1] midx = midx_arr
    cdef double[::1] post = post_arr
    cdef long long t = 0, n_epochs = 0, j, kk
    cdef Py_ssize_t i, idx
    cdef int state, r
    cdef double u, acc, m, s, lse, fv
    while t < n_steps:
        u = _uniform(b, ctr)
        ctr += 1
        idx = m_count - 1
        acc = 0.0
        for i in range(m_count):
            acc += exp(logw[i])
            if u < acc:
                idx = i
                break
        kk = kopt[idx]
        state = 0
        j = 0
        while j < kk and t < n_steps:
            rewards[t] = lam
            if state == 0:
                u = _uniform(b, ctr)
                ctr += 1
                if u < q_star:
                    state = 1
            t += 1
            j += 1
        if t >= n_steps:
            break
        if state == 1:
            r = 1
        else:
            u = _uniform(b, ctr)
            ctr += 1
            r = 1 if u < rho_star else 0
        rewards[t] = <double>r
        for i in range(m_count):
            fv = f[i, kk - 1]
            if r == 1:
                logw[i] += log(fv)
            else:
                logw[i] += log1p(-fv)
        m = logw[0]
        for i in range(1, m_count):
            if logw[i] > m:
                m = logw[i]
        s = 0.0
        for i in range(m_count):
            s += exp(logw[i] - m)
        lse = m + log(s)
        for i in range(m_count):
            logw[i] -= lse
        t_rec[n_epochs] = t
        ks[n_epochs] = kk
        rs[n_epochs] = r
        midx[n_epochs] = idx
        post[n_epochs] = exp(logw[true_index])
        n_epochs += 1
        t += 1
    return (
        rewards_arr,
        t_rec_arr[:n_epochs].copy(),
        ks_arr[:n_epochs].copy(),
        rs_arr[:n_epochs].copy(),
        midx_arr[:n_epochs].copy(),
        post_arr[:n_epochs].copy(),
        logw_arr,
        int(ctr - c0),
    )
