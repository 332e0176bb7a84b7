"""Brute-force finite oracle: the exact pmf on S_n by full enumeration.

Independent of the samplers and of the closed-form evaluators — inversions
are counted by direct pair comparison and the normalizer is the q-factorial
— so it can sit on the other side of statistical comparisons.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from .errors import TooLargeError
from .qseries import QParam, q_factorial

#: Enumeration budget: 8! = 40320 permutations.
MAX_ORACLE_N = 8


@dataclass(frozen=True)
class OraclePmf:
    """Exact law on S_n: word string (e.g. "312") -> probability."""

    n: int
    q: float
    probs: dict[str, float] = field(compare=False)

    def prob(self, word: str) -> float:
        return self.probs.get(word, 0.0)


def oracle_enumerate(n: int, p: QParam) -> OraclePmf:
    """Enumerate S_n and return the exact pmf q^inv(sigma) / [n!]_q.

    >>> pmf = oracle_enumerate(2, QParam(0.5))
    >>> round(pmf.prob("12"), 10), round(pmf.prob("21"), 10)
    (0.6666666667, 0.3333333333)
    """
    if n < 1:
        raise TooLargeError("n must be >= 1")
    if n > MAX_ORACLE_N:
        raise TooLargeError(
            f"enumeration of S_{n} exceeds the budget (n <= {MAX_ORACLE_N})"
        )
    norm = q_factorial(n, p)
    probs: dict[str, float] = {}
    for sigma in permutations(range(1, n + 1)):
        inv = sum(
            1
            for i in range(n)
            for j in range(i + 1, n)
            if sigma[i] > sigma[j]
        )
        probs["".join(str(v) for v in sigma)] = p.q**inv / norm
    return OraclePmf(n=n, q=p.q, probs=probs)
