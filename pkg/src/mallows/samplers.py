"""Seeded samplers: finite Mallows words, the one-sided q-shuffle, the Euler
partition measure on Young diagrams, and two independent two-sided window
samplers.

The two-sided samplers are the heart of the package:

* ``sample_two_sided_interlacing`` is the *exact* reference sampler.  It draws
  a Young diagram lambda with P(lambda) proportional to q^|lambda|, turns it
  into the +-1 sign word interleaving positive and non-positive values, and
  fills the signs with two independent one-sided q-shuffles.  The returned
  window is an exact draw of the two-sided law restricted to the window.
* ``sample_two_sided_inversion`` draws i.i.d. geometric right counts and
  rebuilds values through sigma(i) = i + r_i - l_i, reconstructing each left
  count by the leftward chain with a total-variation stopping budget; its
  window law is within (window width) * eps_tv of exact.  It exists to
  cross-validate the interlacing construction and is checked against it in
  the verification suites.

``batch_*`` functions are vectorized Monte Carlo kernels producing the same
laws at acceptance-test sample sizes.  They consume their stream in a
different order than the scalar samplers (column-wise rather than per
sample), so for a fixed seed they do not reproduce the scalar outputs
draw-for-draw — only the law is shared, which the test suite verifies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .perm import PermWindow, reconstruct_ell
from .qseries import QParam, pochhammer_table
from .streams import GeomStream


def _check_stream(p: QParam, s: GeomStream) -> None:
    if s.q != p.q:
        raise DomainError(
            f"stream ratio {s.q} does not match parameter q={p.q}"
        )


@dataclass(frozen=True)
class YoungDiagram:
    """Partition as a weakly decreasing tuple of positive part sizes."""

    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(x <= 0 for x in self.parts):
            raise ValueError("parts must be positive")
        if any(self.parts[i] < self.parts[i + 1] for i in range(len(self.parts) - 1)):
            raise ValueError("parts must be weakly decreasing")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def part(self, k: int) -> int:
        """k-th part (1-indexed), 0 beyond the last."""
        return self.parts[k - 1] if 1 <= k <= len(self.parts) else 0

    def conjugate_part(self, t: int) -> int:
        """t-th column height, i.e. #{parts >= t}."""
        return sum(1 for x in self.parts if x >= t)


@dataclass(frozen=True)
class InterlacingTriple:
    """The data (w+ prefix, w- suffix, lambda) behind an interlacing sample.

    w_plus_prefix holds the first letters of the positive one-sided word;
    w_minus_suffix holds the last letters of the non-positive word in
    left-to-right position order.  lam encodes the sign word: +1 positions
    are {k - lambda_k : k >= 1}, the rest carry -1.
    """

    w_plus_prefix: tuple[int, ...]
    w_minus_suffix: tuple[int, ...]
    lam: YoungDiagram

    def __post_init__(self) -> None:
        if any(v <= 0 for v in self.w_plus_prefix):
            raise ValueError("w_plus_prefix entries must be positive")
        if len(set(self.w_plus_prefix)) != len(self.w_plus_prefix):
            raise ValueError("w_plus_prefix entries must be distinct")
        if any(v > 0 for v in self.w_minus_suffix):
            raise ValueError("w_minus_suffix entries must be <= 0")
        if len(set(self.w_minus_suffix)) != len(self.w_minus_suffix):
            raise ValueError("w_minus_suffix entries must be distinct")


# --------------------------------------------------------------------------
# one-sided building blocks
# --------------------------------------------------------------------------

def sample_truncated_geometric(limit: int, p: QParam, s: GeomStream) -> int:
    """One draw with P(k) = q^k / [limit+1]_q on {0..limit}."""
    if limit < 0:
        raise DomainError("limit must be >= 0")
    _check_stream(p, s)
    return s.truncated_geometric(limit)


def sample_finite_mallows(n: int, p: QParam, s: GeomStream) -> PermWindow:
    """Word of {1..n} with P(sigma) = q^inv(sigma) / [n!]_q.

    Draws independent truncated-geometric right counts (limit n-i at
    position i) and applies the elimination algorithm.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    _check_stream(p, s)
    r = [s.truncated_geometric(n - i) for i in range(1, n + 1)]
    from .perm import eliminate_right

    return eliminate_right(r)


class _ShuffleState:
    """Incremental q-shuffle: hand out the (R+1)-th smallest unused value."""

    __slots__ = ("used", "smallest")

    def __init__(self) -> None:
        self.used: set[int] = set()
        self.smallest = 1

    def take(self, skip: int) -> int:
        v = self.smallest
        while True:
            if v not in self.used:
                if skip == 0:
                    break
                skip -= 1
            v += 1
        self.used.add(v)
        while self.smallest in self.used:
            self.smallest += 1
        return v


def q_shuffle_prefix(n_letters: int, p: QParam, s: GeomStream) -> tuple[int, ...]:
    """First n_letters letters of the one-sided word.

    Letter i is the (R_i+1)-th smallest positive integer not used yet, with
    R_i i.i.d. geometric; the prefix is an exact marginal of the one-sided
    law (generation is sequential, no truncation error).
    """
    if n_letters < 1:
        raise DomainError("n_letters must be >= 1")
    _check_stream(p, s)
    st = _ShuffleState()
    return tuple(st.take(s.geometric()) for _ in range(n_letters))


# --------------------------------------------------------------------------
# Young diagrams under the Euler measure
# --------------------------------------------------------------------------

def _young_multiplicities(p: QParam, s: GeomStream, k_base: int = 0) -> dict[int, int]:
    """Multiplicities {part size -> count} of an Euler-measure diagram,
    conditioned on all part sizes <= k_base having multiplicity 0.

    Lazy exact scheme: certify "all remaining multiplicities are zero" by a
    Bernoulli with the exact probability prod_{k>k_base}(1-q^k); on failure
    locate the first nonzero part size J by inverse CDF over
    P(J=j) = prod_{k_base<i<j}(1-q^i) * q^j, draw its multiplicity
    conditioned >= 1, and recurse from J.  No truncation anywhere.
    """
    q = p.q
    mult: dict[int, int] = {}
    while True:
        table = pochhammer_table(p, k_base)
        cert = table.infinite_value / table.value(k_base)
        if s.bernoulli(cert):
            return mult
        v = s.uniform() * (1.0 - cert)
        acc, run, j = 0.0, 1.0, k_base
        while True:
            j += 1
            pj = run * q**j
            acc += pj
            if acc >= v or pj <= 0.0:
                break
            run *= 1.0 - q**j
        mult[j] = 1 + s.geometric(ratio=q**j)
        k_base = j


def sample_young_euler(p: QParam, s: GeomStream) -> YoungDiagram:
    """Diagram with P(lambda) = <inf>_q * q^|lambda| — Euler's measure.

    Part-size multiplicities are independent geometrics with ratio q^k;
    termination is decided by an exact Bernoulli (see _young_multiplicities),
    so the output law carries no truncation error.
    """
    _check_stream(p, s)
    mult = _young_multiplicities(p, s)
    parts: list[int] = []
    for k in sorted(mult, reverse=True):
        parts.extend([k] * mult[k])
    return YoungDiagram(tuple(parts))


def sign_word_from_lambda(lam: YoungDiagram, lo: int, hi: int) -> tuple[int, ...]:
    """The +-1 word on positions lo..hi encoded by lam.

    Position i carries +1 exactly when i = k - lambda_k for some k >= 1;
    with lam empty that means +1 for i >= 1 and -1 for i <= 0, and each box
    of lam swaps one adjacent (+,-) pair across the origin.
    """
    if hi < lo:
        raise ValueError("sign word requires lo <= hi")
    plus: set[int] = set()
    k = 1
    while True:
        pos = k - lam.part(k)
        if pos > hi:
            break
        if pos >= lo:
            plus.add(pos)
        k += 1
    return tuple(1 if i in plus else -1 for i in range(lo, hi + 1))


# --------------------------------------------------------------------------
# two-sided samplers
# --------------------------------------------------------------------------

def _interlacing_slots(lam_parts: list[int] | tuple[int, ...], lo: int, hi: int):
    """Window slots of the sign word for a diagram given as desc part list.

    Returns (plus, minus, kmax, tmax): `plus` lists (position, rank) for +1
    positions <= hi (ranks are contiguous 1..kmax since positions increase
    with rank), `minus` lists (position, rank-from-the-right) for -1
    positions >= lo, again contiguous 1..tmax.
    """
    nparts = len(lam_parts)
    plus = []
    k = 1
    while True:
        part = lam_parts[k - 1] if k <= nparts else 0
        pos = k - part
        if pos > hi:
            break
        plus.append((pos, k))
        k += 1
    lam1 = lam_parts[0] if nparts else 0
    minus = []
    t = 1
    while True:
        conj = sum(1 for x in lam_parts if x >= t) if t <= lam1 else 0
        pos = conj - (t - 1)
        if pos < lo:
            break
        minus.append((pos, t))
        t += 1
    return plus, minus, len(plus), len(minus)


def sample_two_sided_interlacing(
    lo: int, hi: int, p: QParam, s: GeomStream
) -> tuple[PermWindow, InterlacingTriple]:
    """Exact window of the two-sided law via the interlacing construction.

    Samples lambda, derives which window positions carry positive values,
    generates exactly as many letters of the positive word w+ (q-shuffle)
    and of the non-positive word w- (an independent q-shuffle reflected by
    i -> 1-i on positions and values, which preserves the inversion
    structure), and fills the window: +1 slots take w+ letters left to
    right, -1 slots take w- letters right to left.  No truncation error.
    """
    if hi < lo:
        raise DomainError("window requires lo <= hi")
    _check_stream(p, s)
    lam = sample_young_euler(p, s)
    plus, minus, kmax, tmax = _interlacing_slots(lam.parts, lo, hi)
    wp = q_shuffle_prefix(kmax, p, s) if kmax else ()
    u = q_shuffle_prefix(tmax, p, s) if tmax else ()
    vals = [0] * (hi - lo + 1)
    for pos, k in plus:
        if pos >= lo:
            vals[pos - lo] = wp[k - 1]
    for pos, t in minus:
        if pos <= hi:
            vals[pos - lo] = 1 - u[t - 1]
    window = PermWindow(lo=lo, hi=hi, values=tuple(vals))
    triple = InterlacingTriple(
        w_plus_prefix=wp,
        w_minus_suffix=tuple(1 - u[t] for t in range(tmax - 1, -1, -1)),
        lam=lam,
    )
    return window, triple


def sample_two_sided_inversion(
    lo: int, hi: int, p: QParam, s: GeomStream, eps_tv: float
) -> PermWindow:
    """Window of the two-sided law via i.i.d. geometric right counts.

    Left counts are reconstructed by the leftward chain, all positions
    sharing one lazily drawn sequence of right counts to the left of the
    window; each chain stops once the probability of any further increment
    is <= eps_tv, so the window law is within (hi-lo+1)*eps_tv of exact in
    total variation (union bound).  Raises NotInjectiveError if the rebuilt
    values collide (astronomically rare; a sign eps_tv is too loose).
    """
    if hi < lo:
        raise DomainError("window requires lo <= hi")
    if eps_tv <= 0.0:
        raise DomainError("eps_tv must be > 0")
    _check_stream(p, s)
    width = hi - lo + 1
    r = [s.geometric() for _ in range(width)]
    left_cache: list[int] = []
    vals = []
    for j in range(lo, hi + 1):
        cursor = 0

        def extend() -> int:
            nonlocal cursor
            if cursor == len(left_cache):
                left_cache.append(s.geometric())
            out = left_cache[cursor]
            cursor += 1
            return out

        ell_j, _, _ = reconstruct_ell(r, lo, j, p, eps_tv, extend)
        vals.append(j + r[j - lo] - ell_j)
    if len(set(vals)) != width:
        from .errors import NotInjectiveError

        raise NotInjectiveError(
            "window rebuild collided; eps_tv is too loose for this window"
        )
    return PermWindow(lo=lo, hi=hi, values=tuple(vals))


# --------------------------------------------------------------------------
# batch kernels (vectorized Monte Carlo; same laws as the scalar samplers)
# --------------------------------------------------------------------------

def batch_finite_r(n: int, p: QParam, s: GeomStream, count: int) -> np.ndarray:
    """count x n matrix of independent truncated-geometric right counts.

    Column i (0-based) has support {0..n-1-i}; each row encodes one finite
    Mallows word, recoverable through eliminate_right.
    """
    if n < 1 or count < 0:
        raise DomainError("need n >= 1 and count >= 0")
    _check_stream(p, s)
    out = np.zeros((count, n), dtype=np.int64)
    for i in range(n - 1):
        out[:, i] = s.truncated_geometrics(count, n - 1 - i)
    return out


def finite_r_codes(r_matrix: np.ndarray) -> np.ndarray:
    """Mixed-radix code of each row; a bijection onto 0..n!-1."""
    count, n = r_matrix.shape
    codes = np.zeros(count, dtype=np.int64)
    for i in range(n):
        codes = codes * (n - i) + r_matrix[:, i]
    return codes


def finite_code_to_r(code: int, n: int) -> tuple[int, ...]:
    """Inverse of finite_r_codes for a single code."""
    digits = []
    for i in range(n - 1, -1, -1):
        radix = n - i
        digits.append(code % radix)
        code //= radix
    return tuple(reversed(digits))


def batch_interlacing_windows(
    lo: int, hi: int, p: QParam, s: GeomStream, count: int, chunk: int = 1 << 16
) -> np.ndarray:
    """count x width matrix of exact two-sided windows (interlacing law).

    Vectorizes the diagram multiplicities, the exact-termination Bernoulli,
    and the shuffle geometrics column-wise; rows whose diagram is not
    settled by the Bernoulli and rows needing more shuffle letters than the
    pre-drawn block fall back to scalar draws, so the output law stays
    exact.
    """
    if hi < lo:
        raise DomainError("window requires lo <= hi")
    _check_stream(p, s)
    q = p.q
    # deepest part size sampled column-wise; beyond it one Bernoulli per row
    k0 = max(8, math.ceil(math.log(1e-6 * (1.0 - q)) / math.log(q)))
    table = pochhammer_table(p, k0)
    cert = table.infinite_value / table.value(k0)
    wp_cols = max(hi, 0) + 16
    wm_cols = max(-lo, 0) + 16
    width = hi - lo + 1
    out = np.empty((count, width), dtype=np.int64)
    done = 0
    while done < count:
        rows = min(chunk, count - done)
        parts_by_row: list[list[int]] = [[] for _ in range(rows)]
        for k in range(k0, 0, -1):  # descending so part lists come out sorted
            mk = s.geometrics(rows, ratio=q**k)
            for ridx in np.nonzero(mk)[0]:
                parts_by_row[ridx].extend([k] * int(mk[ridx]))
        settled = s.uniforms(rows) <= cert
        for ridx in np.nonzero(~settled)[0]:
            deep = _young_multiplicities(p, s, k_base=k0)
            extra: list[int] = []
            for kk in sorted(deep, reverse=True):
                extra.extend([kk] * deep[kk])
            parts_by_row[ridx] = extra + parts_by_row[ridx]
        rp = s.geometrics(rows * wp_cols).reshape(rows, wp_cols)
        rm = s.geometrics(rows * wm_cols).reshape(rows, wm_cols)
        for ridx in range(rows):
            plus, minus, kmax, tmax = _interlacing_slots(parts_by_row[ridx], lo, hi)
            wp = _letters(kmax, rp[ridx], s)
            wm = _letters(tmax, rm[ridx], s)
            row = out[done + ridx]
            for pos, k in plus:
                if pos >= lo:
                    row[pos - lo] = wp[k - 1]
            for pos, t in minus:
                if pos <= hi:
                    row[pos - lo] = 1 - wm[t - 1]
        done += rows
    return out


def _letters(nletters: int, pre_drawn: np.ndarray, s: GeomStream) -> list[int]:
    """q-shuffle letters from pre-drawn geometrics, topping up from s."""
    st = _ShuffleState()
    width = pre_drawn.shape[0]
    return [
        st.take(int(pre_drawn[i]) if i < width else s.geometric())
        for i in range(nletters)
    ]


def batch_inversion_position0(
    p: QParam, s: GeomStream, count: int, eps_tv: float
) -> tuple[np.ndarray, np.ndarray]:
    """(displacement, left count) at position 0 from the inversion sampler.

    Vectorized leftward chains: every row keeps state x (initially r_0) and
    processes shared-law i.i.d. geometric draws moving left; a draw above x
    adds a left inversion, otherwise x increments; a row retires once
    q^(x+1)/(1-q) <= eps_tv.  Returns (d0, ell0) with d0 = r0 - ell0.
    """
    if eps_tv <= 0.0:
        raise DomainError("eps_tv must be > 0")
    _check_stream(p, s)
    q = p.q
    xstar = math.ceil(math.log(eps_tv * (1.0 - q)) / math.log(q) - 1.0)
    r0 = s.geometrics(count)
    x = r0.copy()
    ell = np.zeros(count, dtype=np.int64)
    active = np.nonzero(x < xstar)[0]
    while active.size:
        draws = s.geometrics(active.size)
        xa = x[active]
        trivial = draws > xa
        ell[active[trivial]] += 1
        bumped = active[~trivial]
        x[bumped] += 1
        active = np.concatenate(
            [active[trivial], bumped[x[bumped] < xstar]]
        )
    return r0 - ell, ell
