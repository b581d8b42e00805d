"""Pure-Python simulation kernels.

Reference implementations of the hot loops. The compiled extension in
_core.pyx mirrors these loops statement for statement: same draw order, same
floating-point expressions, same libm calls, so both backends produce
bit-identical outputs. Any change here must be replicated there.
"""

from __future__ import annotations

import math

import numpy as np

from ..rng import uniform_at


def backend_name() -> str:
    return "python"


def run_cycle_policy(q, rho, lam, k, n_steps, base, counter):
    """Simulate the k-cyclic policy for n_steps from a fresh LOW state.

    Returns (per-step rewards, draws consumed).
    """
    n = int(n_steps)
    k = int(k)
    rewards = np.empty(n, dtype=np.float64)
    ctr = int(counter)
    c0 = ctr
    t = 0
    state = 0
    while t < n:
        j = 0
        while j < k and t < n:
            rewards[t] = lam
            if state == 0:
                u = uniform_at(base, ctr)
                ctr += 1
                if u < q:
                    state = 1
            t += 1
            j += 1
        if t >= n:
            break
        if state == 1:
            rewards[t] = 1.0
        else:
            u = uniform_at(base, ctr)
            ctr += 1
            rewards[t] = 1.0 if u < rho else 0.0
        state = 0
        t += 1
    return rewards, ctr - c0


def hold_k_counts(q, rho, k, n_trials, base, counter):
    """Monte Carlo trials of "hold k steps from LOW, then recommend once".

    Returns (successful recommendations, trials that ended HIGH before the
    recommendation, draws consumed).
    """
    k = int(k)
    ctr = int(counter)
    c0 = ctr
    n_success = 0
    n_high = 0
    for _ in range(int(n_trials)):
        state = 0
        for _ in range(k):
            if state == 0:
                u = uniform_at(base, ctr)
                ctr += 1
                if u < q:
                    state = 1
        if state == 1:
            n_high += 1
            n_success += 1
        else:
            u = uniform_at(base, ctr)
            ctr += 1
            if u < rho:
                n_success += 1
    return n_success, n_high, ctr - c0


def run_thompson(q_star, rho_star, lam, n_steps, log_w0, f_tab, k_opt_tab, true_index, base, counter):
    """One Thompson-sampling run against the true arm (q_star, rho_star).

    Epoch loop: sample a model index from the posterior, play its waiting
    time, observe the recommendation reward, update the posterior in log
    space. The final partial epoch (horizon hit before its recommendation) is
    truncated: its held steps earn the subsidy but produce no record and no
    update.

    Returns (step_rewards, epoch arrays (t_rec, k, reward, model, posterior
    mass on the true model after the update), final log weights, draws used).
    """
    logw = [float(x) for x in log_w0]
    f = np.asarray(f_tab, dtype=np.float64).tolist()
    kopt = [int(x) for x in k_opt_tab]
    m_count = len(logw)
    true_index = int(true_index)
    n = int(n_steps)
    rewards = np.empty(n, dtype=np.float64)
    t_rec, ks, rs, midx, post = [], [], [], [], []
    ctr = int(counter)
    c0 = ctr
    t = 0
    exp, log, log1p = math.exp, math.log, math.log1p
    while t < n:
        u = uniform_at(base, ctr)
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
        while j < kk and t < n:
            rewards[t] = lam
            if state == 0:
                u = uniform_at(base, ctr)
                ctr += 1
                if u < q_star:
                    state = 1
            t += 1
            j += 1
        if t >= n:
            break
        if state == 1:
            r = 1
        else:
            u = uniform_at(base, ctr)
            ctr += 1
            r = 1 if u < rho_star else 0
        rewards[t] = float(r)
        for i in range(m_count):
            fv = f[i][kk - 1]
            logw[i] += log(fv) if r == 1 else log1p(-fv)
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
        t_rec.append(t)
        ks.append(kk)
        rs.append(r)
        midx.append(idx)
        post.append(exp(logw[true_index]))
        t += 1
    return (
        rewards,
        np.asarray(t_rec, dtype=np.int64),
        np.asarray(ks, dtype=np.int64),
        np.asarray(rs, dtype=np.int64),
        np.asarray(midx, dtype=np.int64),
        np.asarray(post, dtype=np.float64),
        np.asarray(logw, dtype=np.float64),
        ctr - c0,
    )
