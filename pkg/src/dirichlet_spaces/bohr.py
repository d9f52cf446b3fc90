"""Bohr lift of Dirichlet polynomials and characters of the infinite polytorus.

A character is stored only on the finitely many primes a computation needs.
Random characters come from counter-based Philox streams: chunk ``i`` of a
stream seeded with ``seed`` is always drawn from
``SeedSequence(seed, spawn_key=(i,))``, so results do not depend on how the
chunks are split between workers.
"""

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ._sieve import exponent_matrix, factor_int
from .errors import PreconditionError
from .polynomial import DirichletPolynomial

CHUNK = 8192
_UNIMODULAR_TOL = 1e-12


def factorize(n):
    """Prime factorization ``[(p, k), ...]`` of ``n >= 1`` (empty for 1)."""
    if isinstance(n, bool) or int(n) != n:
        raise PreconditionError(f"factorize needs an integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise PreconditionError(f"factorize needs n >= 1, got {n}")
    return factor_int(n)


def _is_prime(p):
    return p >= 2 and factor_int(p) == [(p, 1)]


@dataclass(frozen=True)
class Character:
    """Completely multiplicative unimodular character given on a prime set.

    Attributes:
        values: mapping prime -> chi(p) with ``|chi(p)| = 1``.
    """

    values: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for p, v in self.values.items():
            p = int(p)
            if not _is_prime(p):
                raise PreconditionError(f"character key {p} is not prime")
            v = complex(v)
            if abs(abs(v) - 1.0) > _UNIMODULAR_TOL:
                raise PreconditionError(f"|chi({p})| = {abs(v)} is not 1")
            clean[p] = v
        object.__setattr__(self, "values", dict(sorted(clean.items())))

    @classmethod
    def trivial(cls, primes):
        return cls({int(p): 1.0 for p in primes})

    @classmethod
    def from_phases(cls, primes, phases):
        """``chi(p_j) = exp(2 pi i u_j)`` for phases ``u_j`` in ``[0, 1)``."""
        return cls({int(p): np.exp(2j * np.pi * u) for p, u in zip(primes, phases)})

    @property
    def primes(self):
        return tuple(self.values)

    def __call__(self, n):
        out = 1 + 0j
        for p, k in factorize(n):
            try:
                out *= self.values[p] ** k
            except KeyError:
                raise PreconditionError(f"character has no value at prime {p}") from None
        return out


def lift_exponents(f):
    """Primes dividing the support of ``f`` and the support's exponent matrix."""
    return exponent_matrix(f.indices)


def _character_values(f, chi):
    primes, E = lift_exponents(f)
    missing = [int(p) for p in primes if int(p) not in chi.values]
    if missing:
        raise PreconditionError(f"character has no value at primes {missing[:5]}")
    z = np.array([chi.values[int(p)] for p in primes], dtype=np.complex128)
    return np.prod(z[None, :] ** E, axis=1) if len(primes) else np.ones(len(f), dtype=np.complex128)


def bohr_eval(f, chi, s=0.0):
    """``f_chi(s) = sum a_n chi(n) n^{-s}``; at ``s = 0`` this is ``Bf`` at ``chi``."""
    if not f:
        return 0j
    chi_n = _character_values(f, chi)
    return complex(np.sum(f.coeffs * chi_n * np.exp(-complex(s) * f.logs)))


def twist(f, chi):
    """The polynomial ``f_chi`` with coefficients ``a_n chi(n)``."""
    if not f:
        return f
    return DirichletPolynomial(f.indices, f.coeffs * _character_values(f, chi))


def chunk_generator(seed, chunk_index):
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(chunk_index),))
    return np.random.Generator(np.random.Philox(ss))


def phase_chunks(num_primes, count, seed, chunk=CHUNK):
    """Yield ``(chunk_index, phases)`` with phases uniform on ``[0, 1)``.

    Each block has shape ``(rows, num_primes)``; rows sum to ``count``.
    """
    if count < 1:
        raise PreconditionError("need at least one sample")
    done, i = 0, 0
    while done < count:
        rows = min(chunk, count - done)
        yield i, chunk_generator(seed, i).random((rows, num_primes))
        done += rows
        i += 1


def sample_characters(primes, count, seed):
    """Stream of ``count`` independent Haar-random characters on ``primes``."""
    primes = [int(p) for p in primes]
    for _, block in phase_chunks(len(primes), count, seed):
        for row in block:
            yield Character.from_phases(primes, row)


def lift_samples(f, phases, E=None):
    """``Bf(chi_k)`` for each row of ``phases`` (one column per prime of ``f``)."""
    if E is None:
        _, E = lift_exponents(f)
    # chi(n) = exp(2 pi i <E_n, u>); reduce mod 1 before exponentiating
    arg = phases @ E.T.astype(np.float64)
    arg -= np.floor(arg)
    return np.exp(2j * np.pi * arg) @ f.coeffs
