"""Closed-form laws of the two-sided model, with certified truncation.

Four families of quantities:

* ``displacement_pmf`` — the law of the displacement D = sigma(j) - j at any
  fixed position (the law does not depend on j), tabulated on [-M..M] with a
  certified bound on the a-priori tail mass outside the table.
* ``joint_rl_pmf`` / ``conditional_l_given_r`` — the joint law of the
  right/left inversion counts (R, L) at a position and the conditional law
  of L given R.  Both marginals are geometric with ratio q; R and L are
  *not* independent.
* ``fdd_probability`` — P(sigma(1) = 1+d_1, ..., sigma(k) = k+d_k), the
  k-dimensional displacement probability, for arbitrary integer vectors d.
* ``block_p2`` — the probability that k pinned rows of the q-weighted random
  Young diagram have prescribed lengths, in gap coordinates.

Every infinite series here has positive terms whose ratio eventually drops
below q^2, so adaptive truncation carries a geometric-domination remainder
certificate; functions that can accumulate meaningful truncation error
return an explicit error bound alongside the value.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import DomainError
from .perm import inversions
from .qseries import KahanSum, QParam, pochhammer_table


def _pv(p: QParam, n: int) -> float:
    """<n>_q, growing the cached table as needed."""
    return pochhammer_table(p, n).value(n)


@dataclass(frozen=True)
class DisplacementPmf:
    """Tabulated displacement law on [-radius..radius] plus a tail bound.

    probs maps each d in [-radius..radius] to P(D = d); tail_bound is an
    a-priori upper bound on the mass outside the table, so the table sums
    to at least 1 - tail_bound.
    """

    q: float
    radius: int
    probs: dict[int, float] = field(compare=False)
    tail_bound: float = 0.0

    def prob(self, d: int) -> float:
        return self.probs.get(d, 0.0)


@dataclass(frozen=True)
class FddQuery:
    """A finite-dimensional displacement event: sigma(m) = m + d[m-1] for
    m = 1..k.  The d need not be sorted; colliding implied values make the
    event impossible."""

    k: int
    d: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise DomainError("k must be >= 1")
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if len(self.d) != self.k:
            raise DomainError(f"expected {self.k} displacements, got {len(self.d)}")


def _displacement_series(d: int, p: QParam) -> float:
    """P(D=d) for d >= 0: (1-q)<inf> sum_l q^(l^2+l*d+2l+d)/(<l+d><l>).

    Terms are positive and the term ratio q^(2l+d+3)/((1-q^(l+1))(1-q^(l+d+1)))
    is eventually < q^2, so the loop stops once the next term is negligible
    relative to the partial sum AND the ratio certifies geometric decay.
    """
    q = p.q
    acc = KahanSum()
    ell = 0
    while True:
        term = q ** (ell * (ell + d + 2) + d) / (_pv(p, ell + d) * _pv(p, ell))
        acc.add(term)
        ratio = q ** (2 * ell + d + 3) / (
            (1.0 - q ** (ell + 1)) * (1.0 - q ** (ell + d + 1))
        )
        if term <= p.eps_series * acc.value and ratio <= q * q:
            break
        ell += 1
    table = pochhammer_table(p)
    return (1.0 - q) * table.infinite_value * acc.value


def displacement_pmf(p: QParam, radius: int) -> DisplacementPmf:
    """Tabulate the displacement law on [-radius..radius].

    The law is symmetric about 0, so only d >= 0 is evaluated and the
    negative half reuses the same floats (symmetry is bit-exact).  The tail
    bound 2 q^radius dominates P(|D| > radius) because |D| > m forces more
    than m right (or left) inversions at the position.
    """
    if radius < 0:
        raise DomainError("radius must be >= 0")
    probs: dict[int, float] = {}
    for d in range(radius + 1):
        v = _displacement_series(d, p)
        probs[d] = v
        probs[-d] = v
    return DisplacementPmf(
        q=p.q, radius=radius, probs=probs, tail_bound=2.0 * p.q**radius
    )


def joint_rl_pmf(p: QParam, r: int, ell: int) -> float:
    """P(R=r, L=ell) = (1-q) q^(r*ell+r+ell) <inf> / (<r><ell>).

    Both marginals are geometric with ratio q; the coupling factor q^(r*ell)
    makes large R and large L repel each other.
    """
    if r < 0 or ell < 0:
        raise DomainError("r and ell must be >= 0")
    q = p.q
    inf_val = pochhammer_table(p).infinite_value
    return (1.0 - q) * q ** (r * ell + r + ell) * inf_val / (_pv(p, r) * _pv(p, ell))


def conditional_l_given_r(p: QParam, r: int, ell: int) -> float:
    """P(L=ell | R=r) = q^(ell*(r+1)) <inf> / (<r><ell>).

    Equals joint_rl_pmf / ((1-q) q^r).  At ell=0 this is <inf>/<r>, the
    probability that the leftward reconstruction chain started from state r
    never sees a trivial transition.
    """
    if r < 0 or ell < 0:
        raise DomainError("r and ell must be >= 0")
    q = p.q
    inf_val = pochhammer_table(p).infinite_value
    return q ** (ell * (r + 1)) * inf_val / (_pv(p, r) * _pv(p, ell))


def _fdd_sorted(d: tuple[int, ...], p: QParam, tol: float) -> tuple[float, float]:
    """(value, error bound) for nondecreasing d.

    Enumerates gap variables a_1..a_{k-1} over their finite ranges
    0 <= a_m <= d_{m+1}-d_m, then sums the free tail variable a_k (bounded
    below so every row gap b_m stays nonnegative) with a geometric-
    domination stopping certificate per inner sum.
    """
    q = p.q
    k = len(d)
    table = pochhammer_table(p, d[-1] - d[0] + 8)
    pref = (1.0 - q) ** k * q ** (-(k * (k + 1) // 2)) * table.infinite_value
    for m in range(1, k):
        pref *= table.value(d[m] - d[m - 1])
    total = KahanSum()
    err_acc = 0.0
    head_ranges = [range(d[m + 1] - d[m] + 1) for m in range(k - 1)]
    for a_head in itertools.product(*head_ranges):
        head = sum(a_head)
        # row gaps above the first pinned row are fixed by a_head
        b_rest = [d[j] - d[j - 1] - a_head[j - 1] for j in range(1, k)]
        den_rest = 1.0
        for x in b_rest:
            den_rest *= _pv(p, x)
        for x in a_head:
            den_rest *= _pv(p, x)
        a_k = max(0, -d[0] - head)
        inner = KahanSum()
        while True:
            b1 = d[0] + head + a_k
            bs = [b1, *b_rest]
            a_full = (*a_head, a_k)
            expo = 0
            pref_b = 0
            for j in range(k):
                pref_b += bs[j] + 1
                expo += (a_full[j] + 1) * pref_b
            term = q**expo / (den_rest * _pv(p, b1) * _pv(p, a_k))
            inner.add(term)
            # ratio of the a_k+1 term to this one (b1 bumps along with a_k)
            delta = head + d[-1] + 2 * a_k + 2 * k + 1
            ratio = q**delta / ((1.0 - q ** (b1 + 1)) * (1.0 - q ** (a_k + 1)))
            if term <= tol * inner.value and ratio <= q * q:
                err_acc += term * ratio / (1.0 - ratio)
                break
            a_k += 1
        total.add(inner.value)
    value = pref * total.value
    rel_inf = table.infinite_error / table.infinite_value
    return value, abs(pref) * err_acc + abs(value) * rel_inf


def fdd_probability(p: QParam, query: FddQuery, tol: float) -> tuple[float, float]:
    """P(sigma(m) = m + d_m for m = 1..k) as (value, error bound).

    For nondecreasing d the sorted series is evaluated directly.  Otherwise
    the implied values v_m = d_m + m are sorted increasingly, the sorted
    query is evaluated, and the result is multiplied by q^inv(v): each
    inversion of the value word costs exactly one factor q.  Colliding
    implied values mean the event is impossible and the exact answer (0, 0)
    is returned rather than an error.
    """
    if tol <= 0.0:
        raise DomainError("tol must be > 0")
    d = query.d
    k = query.k
    vals = tuple(d[m] + m + 1 for m in range(k))
    if len(set(vals)) != k:
        return 0.0, 0.0
    if all(d[m] <= d[m + 1] for m in range(k - 1)):
        return _fdd_sorted(d, p, tol)
    sorted_vals = sorted(vals)
    d_sorted = tuple(sorted_vals[m] - (m + 1) for m in range(k))
    value, err = _fdd_sorted(d_sorted, p, tol)
    factor = p.q ** inversions(vals)
    return factor * value, factor * err


def block_p2(p: QParam, b: tuple[int, ...], a: tuple[int, ...]) -> float:
    """Probability that k pinned rows of the random diagram have prescribed
    lengths, in gap coordinates.

    With x_m = b_1+...+b_m + m (pinned row indices) and y_m = a_m+...+a_k
    (their lengths), returns P(lambda_{x_1} = y_1, ..., lambda_{x_k} = y_k)
    under P(lambda) = <inf>_q q^|lambda|:

        <inf>_q * prod_{m=2..k} <b_m+a_{m-1}>_q / (prod <b_m>_q prod <a_m>_q)
               * q^(sum_{i<=j} b_i a_j + sum_j j a_j).

    At k=1 the exponent is (b+1)a and summing over a >= 0 gives total mass 1
    (Euler's identity), which pins down the index offsets; the k=2 case is
    checked against direct diagram enumeration in the test suite.
    """
    b = tuple(int(x) for x in b)
    a = tuple(int(x) for x in a)
    k = len(b)
    if k < 1 or len(a) != k:
        raise DomainError("b and a must be equal-length, nonempty")
    if any(x < 0 for x in b) or any(x < 0 for x in a):
        raise DomainError("gap coordinates must be >= 0")
    q = p.q
    num = pochhammer_table(p).infinite_value
    for m in range(1, k):
        num *= _pv(p, b[m] + a[m - 1])
    den = 1.0
    for x in b:
        den *= _pv(p, x)
    for x in a:
        den *= _pv(p, x)
    expo = 0
    b_prefix = 0
    for j in range(k):
        b_prefix += b[j]
        expo += a[j] * (b_prefix + j + 1)
    return num / den * q**expo
