"""Prime and smallest-prime-factor sieves with a grow-on-demand cache."""

import threading

import numpy as np

# spf table above this size is not cached; larger inputs use trial division
SPF_CACHE_LIMIT = 1 << 25

_lock = threading.Lock()
_spf = np.zeros(2, dtype=np.int32)


def primes_up_to(n):
    """Return the primes ``<= n`` as an int64 array (Eratosthenes)."""
    if n < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False
    return np.nonzero(is_prime)[0].astype(np.int64)


def _build_spf(n):
    spf = np.zeros(n + 1, dtype=np.int32)
    spf[1] = 1
    for p in range(2, int(n**0.5) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.nonzero(spf[2:] == 0)[0] + 2
    spf[rest] = rest
    return spf


def spf_table(n):
    """Smallest-prime-factor table covering ``0..n`` (cached, grows by doubling).

    Entries beyond ``n`` may be present; callers index only what they need.
    """
    global _spf
    if n > SPF_CACHE_LIMIT:
        raise ValueError(f"spf table limited to {SPF_CACHE_LIMIT}, asked for {n}")
    spf = _spf
    if len(spf) > n:
        return spf
    with _lock:
        if len(_spf) <= n:
            size = max(n, 2 * (len(_spf) - 1), 1 << 12)
            _spf = _build_spf(min(size, SPF_CACHE_LIMIT))
        return _spf


def _trial_division(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def factor_int(n):
    """Prime factorization of a positive integer as ``[(p, k), ...]``."""
    n = int(n)
    if n > SPF_CACHE_LIMIT:
        return _trial_division(n)
    spf = spf_table(n)
    out = []
    while n > 1:
        p = int(spf[n])
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        out.append((p, k))
    return out


def exponent_matrix(indices):
    """Exponent vectors of ``indices`` over the primes dividing any of them.

    Returns:
        (primes, E) with ``E[i, j]`` the exponent of ``primes[j]`` in
        ``indices[i]``.
    """
    indices = np.asarray(indices, dtype=np.int64)
    if len(indices) == 0:
        return np.array([], dtype=np.int64), np.zeros((0, 0), dtype=np.int64)
    top = int(indices.max())
    if top <= SPF_CACHE_LIMIT:
        spf = spf_table(top)
        rows, ps = [], []
        rem = indices.copy()
        live = np.nonzero(rem > 1)[0]
        while len(live):
            p = spf[rem[live]].astype(np.int64)
            rows.append(live)
            ps.append(p)
            rem[live] //= p
            live = live[rem[live] > 1]
        if not rows:
            return np.array([], dtype=np.int64), np.zeros((len(indices), 0), dtype=np.int64)
        rows = np.concatenate(rows)
        ps = np.concatenate(ps)
    else:
        rows, ps = [], []
        for i, n in enumerate(indices.tolist()):
            for p, k in factor_int(n):
                rows.extend([i] * k)
                ps.extend([p] * k)
        rows = np.asarray(rows, dtype=np.int64)
        ps = np.asarray(ps, dtype=np.int64)
    primes, col = np.unique(ps, return_inverse=True)
    E = np.zeros((len(indices), len(primes)), dtype=np.int64)
    np.add.at(E, (rows, col), 1)
    return primes, E
