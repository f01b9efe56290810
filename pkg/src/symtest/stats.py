"""Exact evaluation of the extremal order statistic tests of symmetry.

Two statistics are built on the fact that, for i.i.d. continuous ``X_1..X_k``,
``|min|`` and ``|max|`` have the same law iff the parent law is symmetric
about zero:

* the integral statistic ``I^(k+1)``, a U-statistic of degree ``k+1`` whose
  kernel compares ``|min|`` and ``|max|`` of ``k`` observations against the
  absolute value of the remaining one;
* the Kolmogorov statistic ``D^(k)``, the sup-distance between the
  U-empirical dfs of ``|min|`` and ``|max|`` over ``k``-subsets.

Both are reduced to four threshold counts per candidate threshold::

    a = #{X_i > -t}   b = #{X_i >= t}   c = #{X_i < t}   d = #{X_i <= -t}

since ``-t < min < t`` holds iff every element exceeds ``-t`` and not every
element is ``>= t`` (mirror for max). The number of ``k``-subsets with
``|min| < t`` is ``C(a, k) - C(b, k)``; with repetition it is ``a**k - b**k``.
One sort plus binary searches then gives the statistic in ``O(n log n)``.

Counts are exact Python integers; the normalisation to float happens once
through `fractions.Fraction`, so the fast path and the enumeration oracle
return bit-identical values.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

__all__ = [
    "KINDS",
    "VARIANTS",
    "MAX_K",
    "StatValue",
    "SampleFormatError",
    "TiesWarning",
    "check_sample",
    "parse_sample",
    "read_sample",
    "exceedance_counts",
    "count_min_lt",
    "count_max_lt",
    "compute_I",
    "compute_D",
    "compute_statistic",
    "brute_force_statistic",
]

KINDS = ("integral", "kolmogorov")
VARIANTS = ("U", "V")
MAX_K = 6
BRUTE_FORCE_LIMIT = 10**6


class SampleFormatError(ValueError):
    """Malformed sample data. ``lineno`` is 1-based, or None."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class TiesWarning(UserWarning):
    pass


@dataclass(frozen=True)
class StatValue:
    kind: str
    k: int
    variant: str
    n: int
    value: float

    def __post_init__(self):
        lo = 0.0 if self.kind == "kolmogorov" else -1.0
        if not lo <= self.value <= 1.0:
            raise ValueError(f"{self.kind} statistic out of range: {self.value}")

    def to_dict(self):
        return {
            "kind": self.kind,
            "k": self.k,
            "variant": self.variant,
            "n": self.n,
            "value": self.value,
        }


# ---------------------------------------------------------------------------
# ingestion


def check_sample(values, warn_ties=True):
    """Return ``values`` as a 1-D float array, rejecting NaN and infinities.

    Emits `TiesWarning` when two observations share an absolute value; the
    statistics remain well defined but ties have probability zero under a
    continuous null.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        x = x.ravel()
    if x.size == 0:
        raise SampleFormatError("empty sample")
    if not np.all(np.isfinite(x)):
        raise SampleFormatError("sample contains NaN or infinite values")
    if warn_ties and np.unique(np.abs(x)).size < x.size:
        warnings.warn("sample has tied absolute values", TiesWarning, stacklevel=2)
    return x


def parse_sample(text):
    """Parse one decimal number per line; ``#`` starts a comment."""
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            v = float(line)
        except ValueError:
            raise SampleFormatError(f"cannot parse {line!r} as a number", lineno) from None
        if not math.isfinite(v):
            raise SampleFormatError(f"non-finite value {line!r}", lineno)
        values.append(v)
    if not values:
        raise SampleFormatError("no observations found")
    return np.array(values)


def read_sample(path):
    with open(path, encoding="utf-8") as fh:
        return parse_sample(fh.read())


def _check_order(k, allow_large_k):
    if int(k) != k or k < 2:
        raise ValueError("order k must be an integer >= 2")
    if k > MAX_K and not allow_large_k:
        raise ValueError(f"k={k} exceeds the default cap {MAX_K}; pass allow_large_k=True")
    return int(k)


def _check_variant(variant):
    v = str(variant).upper()
    if v not in VARIANTS:
        raise ValueError(f"variant must be 'U' or 'V', got {variant!r}")
    return v


def _check_kind(kind):
    kind = str(kind).lower()
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return kind


# ---------------------------------------------------------------------------
# counting primitives


def exceedance_counts(sample, t, exclude=None):
    """Threshold counts ``(a, b, c, d)`` at ``t >= 0``.

    ``a = #{X_i > -t}``, ``b = #{X_i >= t}``, ``c = #{X_i < t}``,
    ``d = #{X_i <= -t}``, taken over ``i != exclude``.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    x = np.asarray(sample, dtype=float)
    xs = np.sort(x)
    n = xs.size
    a = n - np.searchsorted(xs, -t, side="right")
    b = n - np.searchsorted(xs, t, side="left")
    c = np.searchsorted(xs, t, side="left")
    d = np.searchsorted(xs, -t, side="right")
    if exclude is not None:
        xj = x[exclude]
        a -= xj > -t
        b -= xj >= t
        c -= xj < t
        d -= xj <= -t
    return int(a), int(b), int(c), int(d)


def count_min_lt(a, b, k):
    """Number of ``k``-subsets whose minimum lies in ``(-t, t)``.

    ``a`` and ``b`` are the counts of `exceedance_counts`. Exact for any
    size; Python integers do not overflow.
    """
    if not 0 <= b <= a:
        raise ValueError("need 0 <= b <= a")
    if k < 1:
        raise ValueError("k must be positive")
    return math.comb(a, k) - math.comb(b, k)


def count_max_lt(c, d, k):
    """Number of ``k``-subsets whose maximum lies in ``(-t, t)``."""
    if not 0 <= d <= c:
        raise ValueError("need 0 <= d <= c")
    if k < 1:
        raise ValueError("k must be positive")
    return math.comb(c, k) - math.comb(d, k)


def _count_table(n, k, variant):
    """Lookup table ``m -> C(m, k)`` (U) or ``m**k`` (V) for ``m = 0..n``.

    int64 when ``n`` table entries can be summed without overflow, otherwise
    an object array of Python integers.
    """
    if variant == "U":
        vals = [math.comb(m, k) for m in range(n + 1)]
    else:
        vals = [m**k for m in range(n + 1)]
    if (n + 1) * 2 * vals[-1] < 2**62:
        return np.array(vals, dtype=np.int64)
    return np.array(vals, dtype=object)


def _exact_sum(arr):
    if arr.dtype == object:
        return sum(arr.tolist())
    return int(arr.sum())


def _to_float(num, den):
    return float(Fraction(num, den))


# ---------------------------------------------------------------------------
# fast statistics


def _integral_numerator(x, k, variant):
    """Exact ``(k+1) * C(n, k+1) * I`` (U) or ``n**(k+1) * J`` (V)."""
    n = x.size
    xs = np.sort(x)
    t = np.abs(x)
    a = n - np.searchsorted(xs, -t, side="right")
    b = n - np.searchsorted(xs, t, side="left")
    c = np.searchsorted(xs, t, side="left")
    d = np.searchsorted(xs, -t, side="right")
    if variant == "U":
        # drop X_j itself from its own threshold counts
        a = a - (x > -t)
        b = b - (x >= t)
        c = c - (x < t)
        d = d - (x <= -t)
    table = _count_table(n, k, variant)
    diff = (table[a] - table[b]) - (table[c] - table[d])
    # no k-subset has |min| < 0
    diff = diff[t > 0]
    return _exact_sum(diff)


def _integral_value(x, k, variant):
    n = x.size
    num = _integral_numerator(x, k, variant)
    if variant == "U":
        den = (k + 1) * math.comb(n, k + 1)
    else:
        den = n ** (k + 1)
    return _to_float(num, den)


def _kolmogorov_numerator(x, k, variant):
    """Exact ``max_t |#{|min| < t} - #{|max| < t}|`` over k-subsets/tuples."""
    n = x.size
    xs = np.sort(x)
    u = np.unique(np.abs(x))
    table = _count_table(n, k, variant)

    # left limits: strict comparisons at each candidate
    a = n - np.searchsorted(xs, -u, side="right")
    b = n - np.searchsorted(xs, u, side="left")
    c = np.searchsorted(xs, u, side="left")
    d = np.searchsorted(xs, -u, side="right")
    left = (table[a] - table[b]) - (table[c] - table[d])
    left = left[u > 0]

    # right limits: |min| <= t  <=>  all >= -t and not all > t
    a = n - np.searchsorted(xs, -u, side="left")
    b = n - np.searchsorted(xs, u, side="right")
    c = np.searchsorted(xs, u, side="right")
    d = np.searchsorted(xs, -u, side="left")
    right = (table[a] - table[b]) - (table[c] - table[d])

    best = 0
    for part in (left, right):
        if part.size:
            best = max(best, int(np.abs(part).max()))
    return best


def _kolmogorov_value(x, k, variant):
    n = x.size
    den = math.comb(n, k) if variant == "U" else n**k
    return _to_float(_kolmogorov_numerator(x, k, variant), den)


def compute_I(sample, k=2, variant="U", allow_large_k=False):
    """Integral statistic ``I_n^(k+1)`` (U) or its V-statistic form ``J_n``.

    Parameters
    ----------
    sample : array_like
        Observations, tested for symmetry about zero.
    k : int
        Order of the characterization; the kernel has degree ``k + 1``.
    variant : {'U', 'V'}
        'U' averages the symmetrised kernel over distinct-index subsets;
        'V' averages over all ``n**(k+1)`` index tuples.

    Returns
    -------
    StatValue
        ``value`` lies in ``[-1, 1]``; positive values indicate mass shifted
        to the right.
    """
    k = _check_order(k, allow_large_k)
    variant = _check_variant(variant)
    x = check_sample(sample)
    if variant == "U" and x.size < k + 1:
        raise ValueError(f"U variant needs n >= k+1 = {k + 1}, got n={x.size}")
    return StatValue("integral", k, variant, x.size, _integral_value(x, k, variant))


def compute_D(sample, k=2, variant="U", allow_large_k=False):
    """Kolmogorov statistic ``D_n^(k) = sup_t |G_n(t) - H_n(t)|``.

    ``G_n`` and ``H_n`` are the empirical dfs of ``|min|`` and ``|max|``
    over ``k``-subsets (U) or ``k``-tuples with repetition (V). The
    difference is a step function with jumps only at the ``|X_i|``, so the
    supremum is the largest of its one-sided limits there.
    """
    k = _check_order(k, allow_large_k)
    variant = _check_variant(variant)
    x = check_sample(sample)
    if x.size < k:
        raise ValueError(f"need n >= k = {k}, got n={x.size}")
    return StatValue("kolmogorov", k, variant, x.size, _kolmogorov_value(x, k, variant))


def compute_statistic(sample, kind="integral", k=2, variant="U", allow_large_k=False):
    kind = _check_kind(kind)
    if kind == "integral":
        return compute_I(sample, k, variant, allow_large_k)
    return compute_D(sample, k, variant, allow_large_k)


def _fast_value(x, kind, k, variant):
    """Unvalidated fast path for simulation loops."""
    if kind == "integral":
        return _integral_value(x, k, variant)
    return _kolmogorov_value(x, k, variant)


# ---------------------------------------------------------------------------
# enumeration oracle


def _index_sets(n, m, variant):
    if variant == "U":
        return np.array(list(combinations(range(n), m)), dtype=np.intp).reshape(-1, m)
    return np.indices((n,) * m).reshape(m, -1).T


def brute_force_statistic(sample, kind="integral", k=2, variant="U", allow_large_k=False):
    """Evaluate a statistic by enumerating every index subset (or tuple).

    The kernels are applied literally: for the integral statistic the
    symmetrised kernel ``(k+1) Psi_{k+1}`` is summed over each subset; for
    the Kolmogorov statistic the two empirical dfs are counted at every
    ``|X_i|``, at the midpoints between them and beyond the largest one.
    Refuses instances with more than ``10**6`` subsets.
    """
    kind = _check_kind(kind)
    k = _check_order(k, allow_large_k)
    variant = _check_variant(variant)
    x = check_sample(sample, warn_ties=False)
    n = x.size
    m = k + 1 if kind == "integral" else k
    count = math.comb(n, m) if variant == "U" else n**m
    if count > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{count} index sets exceeds brute-force limit {BRUTE_FORCE_LIMIT}")
    if variant == "U" and n < m:
        raise ValueError(f"need n >= {m}")

    vals = x[_index_sets(n, m, variant)]
    if kind == "integral":
        total = 0
        for j in range(m):
            rest = np.delete(vals, j, axis=1)
            z = np.abs(vals[:, j])
            total += int(np.count_nonzero(np.abs(rest.min(axis=1)) < z))
            total -= int(np.count_nonzero(np.abs(rest.max(axis=1)) < z))
        return StatValue(kind, k, variant, n, _to_float(total, m * count))

    absmin = np.abs(vals.min(axis=1))
    absmax = np.abs(vals.max(axis=1))
    u = np.unique(np.abs(x))
    grid = np.concatenate([[0.0], u, (u[:-1] + u[1:]) / 2.0, [u[-1] + 1.0]])
    best = 0
    for t in grid:
        g = int(np.count_nonzero(absmin < t))
        h = int(np.count_nonzero(absmax < t))
        best = max(best, abs(g - h))
    return StatValue(kind, k, variant, n, _to_float(best, count))
