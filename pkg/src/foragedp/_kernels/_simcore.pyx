# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel.

Mirrors ``_python`` operation for operation (same draw layout, same libm
calls, same branch structure) so both kernels return bit-identical arrays.
Any change here must be made there as well.
"""

from libc.math cimport INFINITY, NAN, exp, log

import numpy as np

KERNEL_NAME = "cython"

cdef double L_MAX = 36.0

DEF ACT_CP = 0
DEF ACT_CM = 1
DEF ACT_S = 2


cdef inline double _clamp(double y):
    if y > L_MAX:
        return L_MAX
    if y < -L_MAX:
        return -L_MAX
    return y


cdef inline double _feedback_llr(double y, double epsilon, double likelihood_plus):
    # condition on feedback with P(feedback | s_plus) = likelihood_plus,
    # then marginalize over the possible state change
    cdef double ey = exp(y)
    cdef double num = (1.0 - epsilon) * likelihood_plus * ey + epsilon * (1.0 - likelihood_plus)
    cdef double den = epsilon * likelihood_plus * ey + (1.0 - epsilon) * (1.0 - likelihood_plus)
    if num == 0.0:
        return -INFINITY
    if den == 0.0:
        return INFINITY
    return log(num) - log(den)


cdef inline Py_ssize_t _bisect(const double[::1] mids, double y):
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = mids.shape[0]
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) // 2
        if mids[mid] < y:
            lo = mid + 1
        else:
            hi = mid
    return lo


def run_summaries(const signed char[:, ::1] actions, const double[::1] y_mids,
                  const double[:, ::1] block, double epsilon, double q, double h,
                  double r_plus, double r_minus, int tau_d, int tau_s,
                  int budget_n, double delta):
    cdef Py_ssize_t n_real = block.shape[0]
    out_arr = np.empty((n_real, 6))
    cdef double[:, ::1] out = out_arr
    cdef double omq = 1.0 - q
    cdef Py_ssize_t i, base, node
    cdef int state, k, c, obs, sign, a
    cdef int n_commits, n_samples, n_commit_bursts, n_sample_bursts, prev_kind
    cdef bint fits_c, fits_s, correct, rewarded
    cdef double y, reward, v, p_reward, likelihood_plus, dr

    for i in range(n_real):
        state = 1 if block[i, 0] < 0.5 else -1
        y = 0.0
        reward = 0.0
        n_commits = 0
        n_samples = 0
        n_commit_bursts = 0
        n_sample_bursts = 0
        prev_kind = 0
        c = 0
        while True:
            k = c + 1
            if k > budget_n:
                break
            fits_c = k + tau_d - 1 <= budget_n
            fits_s = k + tau_s - 1 <= budget_n
            if not (fits_c or fits_s):
                break
            base = 1 + 3 * (k - 1)
            node = _bisect(y_mids, y)
            a = actions[k, node]
            if a == ACT_S:
                v = block[i, base + 1]
                obs = 1 if v < h else -1
                if state < 0:
                    obs = -obs
                y = _clamp(y + obs * delta)
                n_samples += 1
                if prev_kind != 2:
                    n_sample_bursts += 1
                    prev_kind = 2
                c += tau_s
            else:
                sign = 1 if a == ACT_CP else -1
                correct = sign == state
                p_reward = q if correct else omq
                rewarded = block[i, base + 1] < p_reward
                dr = r_plus if rewarded else r_minus
                reward += dr
                # feedback agreeing with the decision is evidence for its sign
                likelihood_plus = q if rewarded == (sign > 0) else omq
                y = _clamp(_feedback_llr(y, epsilon, likelihood_plus))
                if block[i, base + 2] < epsilon:
                    state = -state
                n_commits += 1
                if prev_kind != 1:
                    n_commit_bursts += 1
                    prev_kind = 1
                c += tau_d
        out[i, 0] = reward
        out[i, 1] = n_commits
        out[i, 2] = n_samples
        out[i, 3] = n_commit_bursts
        out[i, 4] = n_sample_bursts
        out[i, 5] = c
    return out_arr


def run_alignment(const signed char[:, ::1] rm_actions, const signed char[:, ::1] im_actions,
                  int driver, const double[::1] y_mids, const double[:, ::1] block,
                  double epsilon, double q, double h, int tau_d, int tau_s,
                  int budget_n, double delta):
    cdef Py_ssize_t n_real = block.shape[0]
    out_arr = np.empty(n_real)
    cdef double[::1] out = out_arr
    cdef double omq = 1.0 - q
    cdef Py_ssize_t i, base, node
    cdef int state, k, c, obs, sign, a, rm_a, im_a, matches, steps
    cdef bint fits_c, fits_s, correct, rewarded
    cdef double y, v, p_reward, likelihood_plus

    for i in range(n_real):
        state = 1 if block[i, 0] < 0.5 else -1
        y = 0.0
        matches = 0
        steps = 0
        c = 0
        while True:
            k = c + 1
            if k > budget_n:
                break
            fits_c = k + tau_d - 1 <= budget_n
            fits_s = k + tau_s - 1 <= budget_n
            if not (fits_c or fits_s):
                break
            base = 1 + 3 * (k - 1)
            node = _bisect(y_mids, y)
            rm_a = rm_actions[k, node]
            im_a = im_actions[k, node]
            if rm_a == im_a:
                matches += 1
            steps += 1
            if driver == 0:
                a = rm_a
            elif driver == 1:
                a = im_a
            else:
                v = block[i, base]
                if fits_c and fits_s:
                    a = ACT_CP if v < 1.0 / 3.0 else (ACT_CM if v < 2.0 / 3.0 else ACT_S)
                elif fits_c:
                    a = ACT_CP if v < 0.5 else ACT_CM
                else:
                    a = ACT_S
            if a == ACT_S:
                v = block[i, base + 1]
                obs = 1 if v < h else -1
                if state < 0:
                    obs = -obs
                y = _clamp(y + obs * delta)
                c += tau_s
            else:
                sign = 1 if a == ACT_CP else -1
                correct = sign == state
                p_reward = q if correct else omq
                rewarded = block[i, base + 1] < p_reward
                likelihood_plus = q if rewarded == (sign > 0) else omq
                y = _clamp(_feedback_llr(y, epsilon, likelihood_plus))
                if block[i, base + 2] < epsilon:
                    state = -state
                c += tau_d
        if steps:
            out[i] = (<double> matches) / (<double> steps)
        else:
            out[i] = NAN
    return out_arr
