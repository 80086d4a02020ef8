"""Hot inner loops, each with a numba path and a pure-numpy path.

The public wrappers take ``backend=None`` (use the module default chosen by
:mod:`hypball._accel`), ``"numba"`` or ``"numpy"``. Both paths return the
same arrays up to rounding.
"""
import numpy as np

from ._accel import backend_name, njit

# --------------------------------------------------------------------------
# hypergeometric partial sums
# --------------------------------------------------------------------------


@njit
def _pfq_batch_nb(num, den, t, tol, max_terms, nconsec):
    n = t.size
    val = np.empty(n)
    bound = np.empty(n)
    nterms = np.zeros(n, dtype=np.int64)
    ok = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        ti = t[i]
        term = 1.0
        s = 1.0
        consec = 0
        ratio = 0.0
        k = 0
        exact = False
        conv = False
        while k < max_terms:
            r = ti / (k + 1.0)
            for a in num:
                r *= a + k
            for b in den:
                r /= b + k
            new = term * r
            k += 1
            if new == 0.0:
                exact = True
                conv = True
                break
            s += new
            ratio = abs(r)
            term = new
            if abs(term) <= tol * abs(s):
                consec += 1
                if consec >= nconsec:
                    conv = True
                    break
            else:
                consec = 0
        val[i] = s
        nterms[i] = k
        ok[i] = conv
        if exact:
            bound[i] = 0.0
        else:
            rho = max(ratio, abs(ti))
            if rho < 1.0:
                bound[i] = abs(term) * rho / (1.0 - rho)
            else:
                bound[i] = np.inf
    return val, bound, nterms, ok


def _pfq_batch_np(num, den, t, tol, max_terms, nconsec):
    n = t.size
    val = np.ones(n)
    term = np.ones(n)
    ratio = np.zeros(n)
    consec = np.zeros(n, dtype=np.int64)
    nterms = np.zeros(n, dtype=np.int64)
    ok = np.zeros(n, dtype=bool)
    exact = np.zeros(n, dtype=bool)
    active = np.arange(n)
    k = 0
    while active.size and k < max_terms:
        r = t[active] / (k + 1.0)
        for a in num:
            r = r * (a + k)
        for b in den:
            r = r / (b + k)
        new = term[active] * r
        k += 1
        nterms[active] = k
        zero = new == 0.0
        if zero.any():
            idx = active[zero]
            exact[idx] = True
            ok[idx] = True
        live = ~zero
        idx = active[live]
        new = new[live]
        val[idx] += new
        term[idx] = new
        ratio[idx] = np.abs(r[live])
        small = np.abs(new) <= tol * np.abs(val[idx])
        consec[idx] = np.where(small, consec[idx] + 1, 0)
        fin = consec[idx] >= nconsec
        ok[idx[fin]] = True
        active = idx[~fin]
    rho = np.maximum(ratio, np.abs(t))
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = np.where(rho < 1.0, np.abs(term) * rho / (1.0 - rho), np.inf)
    bound[exact] = 0.0
    return val, bound, nterms, ok


def pfq_batch(num, den, t, tol=1e-12, max_terms=100_000, nconsec=3, backend=None):
    """Partial sums of sum_k prod(num)_k / (k! prod(den)_k) t^k for an array t.

    Returns ``(value, tail_bound, n_terms, converged)`` arrays.
    """
    num = np.ascontiguousarray(num, dtype=np.float64)
    den = np.ascontiguousarray(den, dtype=np.float64)
    t = np.ascontiguousarray(np.atleast_1d(t), dtype=np.float64).ravel()
    if backend_name(backend) == "numba":
        return _pfq_batch_nb(num, den, t, float(tol), int(max_terms), int(nconsec))
    return _pfq_batch_np(num, den, t, float(tol), int(max_terms), int(nconsec))


@njit
def _partial_sums_at_nb(num, den, t, checkpoints):
    out = np.empty(checkpoints.size)
    term = 1.0
    s = 0.0
    k = 0
    j = 0
    last = checkpoints[checkpoints.size - 1]
    while k < last:
        s += term
        k += 1
        if k == checkpoints[j]:
            out[j] = s
            j += 1
        r = t / k
        for a in num:
            r *= a + k - 1
        for b in den:
            r /= b + k - 1
        term *= r
    return out


def _partial_sums_at_np(num, den, t, checkpoints):
    # scalar recurrence; chunked through numpy cumulative products
    last = int(checkpoints[-1])
    k = np.arange(last - 1, dtype=np.float64)
    r = np.full(last - 1, float(t)) / (k + 1.0)
    for a in num:
        r = r * (a + k)
    for b in den:
        r = r / (b + k)
    terms = np.concatenate(([1.0], np.cumprod(r)))
    sums = np.cumsum(terms)
    return sums[np.asarray(checkpoints, dtype=np.int64) - 1]


def partial_sums_at(num, den, t, checkpoints, backend=None):
    """Partial sums S_K = sum_{k<K} term_k at increasing integer checkpoints K."""
    num = np.ascontiguousarray(num, dtype=np.float64)
    den = np.ascontiguousarray(den, dtype=np.float64)
    checkpoints = np.ascontiguousarray(checkpoints, dtype=np.int64)
    if backend_name(backend) == "numba":
        return _partial_sums_at_nb(num, den, float(t), checkpoints)
    return _partial_sums_at_np(num, den, float(t), checkpoints)


# --------------------------------------------------------------------------
# level crossings along rays
# --------------------------------------------------------------------------


@njit
def _level_index_nb(U, levels):
    # searchsorted(levels, U) per node; neighbours along a ray are close, so
    # walk from the previous index instead of bisecting
    R, S = U.shape
    T = levels.size
    K = np.empty((R, S), dtype=np.int64)
    for j in range(R):
        k = np.searchsorted(levels, U[j, 0])
        for i in range(S):
            x = U[j, i]
            if x != x:  # NaN: segments touching it are skipped
                K[j, i] = k
                continue
            if k > T:
                k = T
            while k < T and levels[k] < x:
                k += 1
            while k > 0 and levels[k - 1] >= x:
                k -= 1
            K[j, i] = k
    return K


@njit
def _crossings_nb(U, levels):
    R, S = U.shape
    K = _level_index_nb(U, levels)
    count = 0
    for j in range(R):
        for i in range(S - 1):
            if U[j, i] == U[j, i] and U[j, i + 1] == U[j, i + 1]:
                count += abs(K[j, i + 1] - K[j, i])
    ray = np.empty(count, dtype=np.int64)
    seg = np.empty(count, dtype=np.int64)
    lev = np.empty(count, dtype=np.int64)
    down = np.empty(count, dtype=np.bool_)
    c = 0
    for j in range(R):
        for i in range(S - 1):
            ka = K[j, i]
            kb = K[j, i + 1]
            if ka == kb or U[j, i] != U[j, i] or U[j, i + 1] != U[j, i + 1]:
                continue
            for k in range(min(ka, kb), max(ka, kb)):
                ray[c] = j
                seg[c] = i
                lev[c] = k
                down[c] = ka > kb
                c += 1
    return ray, seg, lev, down


def _crossings_np(U, levels):
    R, S = U.shape
    a = U[:, :-1].ravel()
    b = U[:, 1:].ravel()
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    kl = np.searchsorted(levels, lo, side="left")
    kh = np.searchsorted(levels, hi, side="left")
    counts = np.where(lo == hi, 0, kh - kl)
    flat = np.repeat(np.arange(a.size), counts)
    starts = np.repeat(kl, counts)
    offsets = np.arange(flat.size) - np.repeat(np.cumsum(counts) - counts, counts)
    lev = starts + offsets
    ray, seg = np.divmod(flat, S - 1)
    down = a[flat] > b[flat]
    return ray, seg, lev, down


def crossings(U, levels, backend=None):
    """Locate every grid segment where a ray profile crosses a level.

    ``U`` is an (R, S) array of log-values along R rays at S nodes (``-inf``
    allowed); ``levels`` is an ascending array. A level L is crossed in
    segment i when exactly one of ``U[i] > L`` and ``U[i+1] > L`` holds.
    Returns ``(ray, segment, level_index, is_down)`` where ``is_down`` marks
    a crossing that leaves the superlevel set moving outward.
    """
    U = np.ascontiguousarray(U, dtype=np.float64)
    levels = np.ascontiguousarray(levels, dtype=np.float64)
    if U.shape[1] < 2 or levels.size == 0:
        e = np.empty(0, dtype=np.int64)
        return e, e, e, np.empty(0, dtype=bool)
    if backend_name(backend) == "numba":
        return _crossings_nb(U, levels)
    return _crossings_np(U, levels)
