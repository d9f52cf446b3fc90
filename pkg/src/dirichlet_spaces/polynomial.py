"""Dirichlet polynomials: storage, evaluation, translation and convolution.

A Dirichlet polynomial ``f(s) = sum a_n n^{-s}`` is stored as two parallel
read-only numpy arrays (strictly increasing ``int64`` indices, ``complex128``
coefficients). Exact zero coefficients are dropped after every operation and
nothing else is ever pruned, so supports are reproducible.
"""

import json
from math import isqrt

import numpy as np

from .errors import PreconditionError

_INT64_MAX = np.iinfo(np.int64).max
# dense accumulator size (entries) that is always acceptable
_DENSE_MIN = 1 << 22
# never allocate a dense accumulator beyond this
_DENSE_MAX = 1 << 24


def _frozen(arr):
    arr.setflags(write=False)
    return arr


class DirichletPolynomial:
    """Finite Dirichlet series with complex coefficients.

    Values are immutable; every operation returns a new polynomial.

    Args:
        indices: integers ``n >= 1`` (any order, no duplicates).
        coeffs: matching complex coefficients ``a_n``.
    """

    __slots__ = ("_n", "_a", "_log")

    def __init__(self, indices=(), coeffs=()):
        try:
            n = np.array(indices, dtype=np.int64).ravel()
        except OverflowError as exc:
            raise PreconditionError("index exceeds the int64 range") from exc
        a = np.array(coeffs, dtype=np.complex128).ravel()
        if n.shape != a.shape:
            raise PreconditionError(
                f"{len(n)} indices but {len(a)} coefficients")
        if len(n) and n.min() < 1:
            raise PreconditionError("Dirichlet indices must satisfy n >= 1")
        if len(n) > 1 and not np.all(n[1:] > n[:-1]):
            order = np.argsort(n, kind="stable")
            n, a = n[order], a[order]
            if np.any(n[1:] == n[:-1]):
                dup = int(n[1:][n[1:] == n[:-1]][0])
                raise PreconditionError(f"duplicate index {dup}")
        if not np.all(np.isfinite(a)):
            raise PreconditionError("coefficients must be finite")
        keep = a != 0
        if not keep.all():
            n, a = n[keep], a[keep]
        self._n = _frozen(n)
        self._a = _frozen(a)
        self._log = None

    @classmethod
    def _canonical(cls, n, a):
        # trusted constructor: n strictly increasing, no zero coefficient
        obj = cls.__new__(cls)
        obj._n = _frozen(n)
        obj._a = _frozen(a)
        obj._log = None
        return obj

    @classmethod
    def from_dense(cls, arr):
        """Build from a dense array indexed by ``n`` (entry 0 must be zero)."""
        arr = np.asarray(arr)
        if len(arr) and arr[0] != 0:
            raise PreconditionError("dense coefficient array has a value at n = 0")
        n = np.nonzero(arr)[0].astype(np.int64)
        return cls._canonical(n, arr[n].astype(np.complex128))

    @classmethod
    def from_mapping(cls, mapping):
        items = sorted(mapping.items())
        return cls([k for k, _ in items], [v for _, v in items])

    @classmethod
    def monomial(cls, n, coeff=1.0):
        return cls([n], [coeff])

    @classmethod
    def constant(cls, c=1.0):
        return cls([1], [c])

    @classmethod
    def zero(cls):
        return cls()

    @property
    def indices(self):
        return self._n

    @property
    def coeffs(self):
        return self._a

    @property
    def logs(self):
        """``log n`` for every support index, computed once."""
        if self._log is None:
            self._log = _frozen(np.log(self._n.astype(np.float64)))
        return self._log

    @property
    def max_index(self):
        return int(self._n[-1]) if len(self._n) else 0

    @property
    def first_coefficient(self):
        """The coefficient ``a_1`` (the value at ``+infinity``)."""
        if len(self._n) and self._n[0] == 1:
            return complex(self._a[0])
        return 0j

    def is_zero(self):
        return len(self._n) == 0

    def __len__(self):
        return len(self._n)

    def __bool__(self):
        return len(self._n) > 0

    def __iter__(self):
        return zip(self._n.tolist(), self._a.tolist())

    def __getitem__(self, n):
        i = np.searchsorted(self._n, n)
        if i < len(self._n) and self._n[i] == n:
            return complex(self._a[i])
        return 0j

    def __eq__(self, other):
        if not isinstance(other, DirichletPolynomial):
            return NotImplemented
        return np.array_equal(self._n, other._n) and np.array_equal(self._a, other._a)

    __hash__ = None

    def __repr__(self):
        terms = [f"{n}: {complex(a):.6g}" for n, a in list(self)[:6]]
        more = ", ..." if len(self) > 6 else ""
        return f"DirichletPolynomial({{{', '.join(terms)}{more}}})"

    def __call__(self, s):
        return evaluate(self, s)

    def __add__(self, other):
        if not isinstance(other, DirichletPolynomial):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, DirichletPolynomial):
            return NotImplemented
        return add(self, scale(other, -1.0))

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, DirichletPolynomial):
            return convolve(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)

    def __pow__(self, k):
        return power(self, k)


Poly = DirichletPolynomial


def evaluate(f, s):
    """Evaluate ``sum a_n n^{-s}`` with ``n^{-s} = exp(-s log n)``.

    ``s`` may be a scalar or an array; the result has the same shape.
    """
    s_arr = np.asarray(s, dtype=np.complex128)
    if not f:
        return 0j if s_arr.ndim == 0 else np.zeros(s_arr.shape, dtype=np.complex128)
    logs, a = f.logs, f.coeffs
    if s_arr.ndim == 0:
        return complex(np.exp(-complex(s_arr) * logs) @ a)
    flat = s_arr.ravel()
    out = np.empty(flat.shape, dtype=np.complex128)
    step = max(1, (1 << 22) // len(a))
    for i in range(0, len(flat), step):
        out[i:i + step] = np.exp(-flat[i:i + step, None] * logs[None, :]) @ a
    return out.reshape(s_arr.shape)


def translate(f, sigma):
    """Horizontal translation ``f_sigma(s) = f(s + sigma)`` for ``sigma >= 0``."""
    sigma = float(sigma)
    if not sigma >= 0:
        raise PreconditionError(f"translation must be to the right (sigma >= 0), got {sigma}")
    if sigma == 0 or not f:
        return f
    a = f.coeffs * np.exp(-sigma * f.logs)
    keep = a != 0
    return DirichletPolynomial._canonical(f.indices[keep], a[keep])


def scale(f, c):
    c = complex(c)
    if c == 0 or not f:
        return DirichletPolynomial.zero()
    a = f.coeffs * c
    keep = a != 0
    return DirichletPolynomial._canonical(f.indices[keep], a[keep])


def add(f, g):
    """Coefficientwise sum."""
    if not f:
        return g
    if not g:
        return f
    n = np.concatenate([f.indices, g.indices])
    a = np.concatenate([f.coeffs, g.coeffs])
    return _combine(n, a)


def _combine(n, a):
    # sum coefficients sharing an index; positions in n need not be distinct
    uniq, inv = np.unique(n, return_inverse=True)
    acc = np.zeros(len(uniq), dtype=np.complex128)
    np.add.at(acc, inv, a)
    keep = acc != 0
    return DirichletPolynomial._canonical(uniq[keep], acc[keep])


def dense_convolve(f, g, limit):
    """Truncated Dirichlet convolution of dense arrays indexed by ``n``.

    ``out[n] = sum_{dk = n} f[d] g[k]`` for ``1 <= n <= limit``. Uses the
    hyperbola split, so only ``2 sqrt(limit)`` vector operations are issued.
    Entry 0 of the inputs is ignored.
    """
    L = int(limit)
    dtype = np.result_type(f.dtype, g.dtype)
    out = np.zeros(L + 1, dtype=dtype)
    r = isqrt(L)
    nf, ng = len(f) - 1, len(g) - 1
    for d in range(1, min(r, nf) + 1):
        if f[d] == 0:
            continue
        m = min(L // d, ng)
        out[d:d * m + 1:d] += f[d] * g[1:m + 1]
    for k in range(1, min(r, ng) + 1):
        if g[k] == 0:
            continue
        hi = min(L // k, nf)
        if hi > r:
            out[k * (r + 1):k * hi + 1:k] += f[r + 1:hi + 1] * g[k]
    return out


def convolve(f, g, limit=None):
    """Dirichlet product ``(f g)_n = sum_{d | n} f_d g_{n/d}``.

    Args:
        f, g: polynomials.
        limit: if given, products with index above ``limit`` are discarded
            (index-bounded convolution).

    Raises:
        OverflowError: an index product exceeds the int64 range.
    """
    if not f or not g:
        return DirichletPolynomial.zero()
    top = f.max_index * g.max_index
    if limit is None:
        if top > _INT64_MAX:
            raise OverflowError(
                f"index product {f.max_index}*{g.max_index} exceeds the int64 range")
        L = top
    else:
        L = min(int(limit), top)
        if L < 1:
            return DirichletPolynomial.zero()
    if L <= _DENSE_MAX and len(f) + len(g) > L // 8:
        fd = np.zeros(min(f.max_index, L) + 1, dtype=np.complex128)
        m = f.indices <= L
        fd[f.indices[m]] = f.coeffs[m]
        gd = np.zeros(min(g.max_index, L) + 1, dtype=np.complex128)
        m = g.indices <= L
        gd[g.indices[m]] = g.coeffs[m]
        return DirichletPolynomial.from_dense(dense_convolve(fd, gd, L))
    if limit is None and len(f) > len(g):
        f, g = g, f
    fn, fa, gn, ga = f.indices, f.coeffs, g.indices, g.coeffs
    r = isqrt(L)
    idx, val = [], []
    for d, c in zip(fn[fn <= r].tolist(), fa[fn <= r]):
        m = np.searchsorted(gn, L // d, side="right")
        if m:
            idx.append(d * gn[:m])
            val.append(c * ga[:m])
    lo = np.searchsorted(fn, r, side="right")
    for k, c in zip(gn[gn <= r].tolist(), ga[gn <= r]):
        hi = np.searchsorted(fn, L // k, side="right")
        if hi > lo:
            idx.append(fn[lo:hi] * k)
            val.append(fa[lo:hi] * c)
    if not idx:
        return DirichletPolynomial.zero()
    total = sum(len(i) for i in idx)
    if L + 1 <= max(_DENSE_MIN, 4 * total) and L <= _DENSE_MAX:
        out = np.zeros(L + 1, dtype=np.complex128)
        for i, v in zip(idx, val):
            out[i] += v  # indices within one piece are distinct
        return DirichletPolynomial.from_dense(out)
    return _combine(np.concatenate(idx), np.concatenate(val))


def power(f, k, limit=None):
    """``f^k`` by repeated convolution (``f^0`` is the constant 1)."""
    k = int(k)
    if k < 0:
        raise PreconditionError("negative powers are not Dirichlet polynomials")
    out = DirichletPolynomial.constant(1.0)
    base = f
    while k:
        if k & 1:
            out = convolve(out, base, limit)
        k >>= 1
        if k:
            base = convolve(base, base, limit)
    return out


def divisor_counts(m, N):
    """Dense ``int64`` array of ``d_m(n)`` for ``0 <= n <= N`` (entry 0 is 0).

    ``d_m(n)`` counts ordered ``m``-tuples with product ``n``; computed by
    ``m - 1`` truncated convolutions with the all-ones sequence.
    """
    m, N = int(m), int(N)
    if m < 1 or N < 1:
        raise PreconditionError("divisor_counts needs m >= 1 and N >= 1")
    ones = np.ones(N + 1, dtype=np.int64)
    ones[0] = 0
    out = ones
    for _ in range(m - 1):
        out = dense_convolve(out, ones, N)
    return out


def zeta_power(m, N):
    """Truncated ``zeta^m``: ``sum_{n <= N} d_m(n) n^{-s}``."""
    return DirichletPolynomial.from_dense(divisor_counts(m, N).astype(np.complex128))


def derivative(f, m=1):
    """``m``-th derivative in ``s``; coefficient ``a_n`` becomes ``a_n (-log n)^m``."""
    if int(m) != m or m < 1:
        raise PreconditionError(f"derivative order must be a positive integer, got {m}")
    a = f.coeffs * (-f.logs) ** int(m)
    keep = a != 0
    return DirichletPolynomial._canonical(f.indices[keep], a[keep])


def drop_constant(f):
    """``f - a_1``: the projection onto series vanishing at infinity."""
    if f.first_coefficient == 0:
        return f
    return DirichletPolynomial._canonical(f.indices[1:].copy(), f.coeffs[1:].copy())


# --- JSON ------------------------------------------------------------------

def to_json_dict(f):
    return {"coeffs": [{"n": n, "re": c.real, "im": c.imag} for n, c in f]}


def from_json_dict(doc):
    """Parse ``{"coeffs": [{"n", "re", "im"}, ...]}``; duplicates and ``n < 1`` are rejected."""
    if not isinstance(doc, dict) or "coeffs" not in doc:
        raise PreconditionError('polynomial JSON must be an object with a "coeffs" list')
    ns, cs = [], []
    for item in doc["coeffs"]:
        try:
            n = item["n"]
            re = float(item.get("re", 0.0))
            im = float(item.get("im", 0.0))
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise PreconditionError(f"malformed coefficient entry {item!r}") from exc
        if isinstance(n, bool) or not isinstance(n, int):
            if isinstance(n, float) and n.is_integer():
                n = int(n)
            else:
                raise PreconditionError(f"index must be an integer, got {n!r}")
        ns.append(n)
        cs.append(complex(re, im))
    if len(set(ns)) != len(ns):
        raise PreconditionError("duplicate index in polynomial JSON")
    return DirichletPolynomial(ns, cs)


def loads(text):
    return from_json_dict(json.loads(text))
