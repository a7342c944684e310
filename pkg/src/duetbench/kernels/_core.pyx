# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled clue-scoring kernel.

Single fused pass per clue row: stable log-softmax, avoid/neutral cost, and
goal-column scores, without materializing the intermediate probability
matrix. Semantics mirror kernels._python.pair_scores exactly.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log, INFINITY

cnp.import_array()

ROLE_GOAL = 0
ROLE_AVOID = 1
ROLE_NEUTRAL = 2


def pair_scores(object sims_in, object roles_in, double delta):
    """See kernels._python.pair_scores; this is the compiled twin."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] sims = \
        np.ascontiguousarray(sims_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.int8_t, ndim=1, mode="c"] roles = \
        np.ascontiguousarray(roles_in, dtype=np.int8)
    cdef Py_ssize_t n_clues = sims.shape[0]
    cdef Py_ssize_t n_words = sims.shape[1]
    if roles.shape[0] != n_words:
        raise ValueError("sims must be (n_clues, n_words) with one role per word")

    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] scores = \
        np.empty((n_clues, n_words), dtype=np.float64)

    cdef Py_ssize_t i, j
    cdef double m, z, best_avoid, best_neutral, cost, log_z
    cdef signed char role
    with nogil:
        for i in range(n_clues):
            m = -INFINITY
            for j in range(n_words):
                if sims[i, j] > m:
                    m = sims[i, j]
            z = 0.0
            best_avoid = -INFINITY
            best_neutral = -INFINITY
            for j in range(n_words):
                z += exp(sims[i, j] - m)
                role = roles[j]
                if role == 1:
                    if sims[i, j] > best_avoid:
                        best_avoid = sims[i, j]
                elif role == 2:
                    if sims[i, j] > best_neutral:
                        best_neutral = sims[i, j]
            log_z = log(z)
            cost = 0.0
            if best_avoid != -INFINITY:
                cost += exp(best_avoid - m) / z
            if best_neutral != -INFINITY:
                cost += delta * (exp(best_neutral - m) / z)
            for j in range(n_words):
                if roles[j] == 0:
                    scores[i, j] = sims[i, j] - m - log_z - cost
                else:
                    scores[i, j] = -INFINITY
    return scores
