"""Monte Carlo null distributions, p-values and power.

Both statistics are distribution-free under symmetry, so one table per
``(kind, k, variant, n)`` serves every continuous symmetric parent law.
Tables are simulated from the uniform law on ``[-1, 1]``.

Replicate ``r`` draws from its own generator seeded by
``SeedSequence(master_seed, spawn_key=(stream, r))``, numpy's documented
hash of the master seed and the replicate index. The table is therefore
identical whatever the number of workers or the order they run in.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from .distributions import get_family
from .stats import (
    StatValue,
    _check_kind,
    _check_order,
    _check_variant,
    _fast_value,
    check_sample,
    compute_statistic,
)

__all__ = [
    "FORMAT_VERSION",
    "EXPORT_QUANTILES",
    "NullTable",
    "TableMismatchError",
    "DecisionRecord",
    "PowerPoint",
    "derived_seed",
    "simulate_null",
    "p_value",
    "run_test",
    "power_curve",
]

FORMAT_VERSION = 1
EXPORT_QUANTILES = (0.8, 0.9, 0.95, 0.99, 0.999)

NULL_STREAM = 0
TRIAL_STREAM = 1


class TableMismatchError(ValueError):
    pass


def derived_seed(master_seed, index, stream=NULL_STREAM):
    """64-bit seed for replicate ``index`` of ``master_seed``."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(stream, int(index)))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class NullTable:
    kind: str
    k: int
    variant: str
    n: int
    replicates: np.ndarray
    master_seed: int
    family: str = "uniform"
    created: str = ""
    format_version: int = FORMAT_VERSION
    _abs_sorted: np.ndarray = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.replicates = np.sort(np.asarray(self.replicates, dtype=float))

    @property
    def rep_count(self):
        return int(self.replicates.size)

    @property
    def abs_sorted(self):
        if self._abs_sorted is None:
            self._abs_sorted = np.sort(np.abs(self.replicates))
        return self._abs_sorted

    def header(self):
        return {
            "format_version": self.format_version,
            "kind": self.kind,
            "k": self.k,
            "variant": self.variant,
            "n": self.n,
            "rep_count": self.rep_count,
            "master_seed": self.master_seed,
            "family": self.family,
        }

    @property
    def table_id(self):
        """Content hash of header and replicates (the timestamp excluded)."""
        h = hashlib.sha256(json.dumps(self.header(), sort_keys=True).encode())
        h.update(self.replicates.tobytes())
        return h.hexdigest()[:16]

    def matches(self, kind, k, variant, n):
        return (self.kind, self.k, self.variant, self.n) == (kind, k, variant, n)

    def quantiles(self, probs=EXPORT_QUANTILES):
        return np.quantile(self.replicates, probs)

    def to_dict(self):
        d = self.header()
        d["created"] = self.created
        d["replicates"] = self.replicates.tolist()
        return d

    @classmethod
    def from_dict(cls, d):
        if d.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported table format {d.get('format_version')!r}")
        reps = d["replicates"]
        if len(reps) != d["rep_count"]:
            raise ValueError("rep_count does not match replicate array")
        return cls(
            kind=d["kind"],
            k=int(d["k"]),
            variant=d["variant"],
            n=int(d["n"]),
            replicates=np.asarray(reps, dtype=float),
            master_seed=int(d["master_seed"]),
            family=d.get("family", "uniform"),
            created=d.get("created", ""),
        )

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def quantiles_csv(self, probs=EXPORT_QUANTILES):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "k", "variant", "n", "rep_count", "master_seed", "prob", "quantile"])
        for p, q in zip(probs, self.quantiles(probs)):
            w.writerow([self.kind, self.k, self.variant, self.n, self.rep_count,
                        self.master_seed, p, repr(float(q))])
        return buf.getvalue()


def _simulate_chunk(args):
    kind, k, variant, n, family, master_seed, start, stop = args
    fam = get_family(family)
    out = np.empty(stop - start)
    for i, r in enumerate(range(start, stop)):
        rng = np.random.default_rng(derived_seed(master_seed, r))
        out[i] = _fast_value(fam.sampler(rng, n), kind, k, variant)
    return out


def simulate_null(kind, k, variant, n, reps, master_seed, family="uniform", workers=1):
    """Simulate the null distribution of a statistic.

    Parameters
    ----------
    kind : {'integral', 'kolmogorov'}
    k : int
    variant : {'U', 'V'}
    n : int
        Sample size; at least ``k + 1``.
    reps : int
        Number of replicates; at least 100.
    master_seed : int
    family : str
        Symmetric parent law of the null samples. Any choice yields the same
        distribution; the uniform law is the canonical one.
    workers : int
        Number of processes. Has no effect on the result.

    Returns
    -------
    NullTable
    """
    kind = _check_kind(kind)
    k = _check_order(k, allow_large_k=True)
    variant = _check_variant(variant)
    if reps < 100:
        raise ValueError("reps must be at least 100")
    if n < k + 1:
        raise ValueError(f"n must be at least k+1 = {k + 1}")
    fam = get_family(family).name
    master_seed = int(master_seed)

    workers = max(1, int(workers))
    bounds = np.linspace(0, reps, min(workers * 4, reps) + 1).astype(int) if workers > 1 else [0, reps]
    tasks = [(kind, k, variant, n, fam, master_seed, int(a), int(b))
             for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    if workers == 1:
        parts = [_simulate_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_simulate_chunk, tasks))

    return NullTable(
        kind=kind,
        k=k,
        variant=variant,
        n=n,
        replicates=np.concatenate(parts),
        master_seed=master_seed,
        family=fam,
        created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


def p_value(table, observed, sided="two"):
    """Monte Carlo p-value ``(1 + #{replicates >= observed}) / (R + 1)``.

    ``observed`` is a `StatValue` (checked against the table) or a bare
    float. Two-sided integral tests compare ``|observed|`` with the absolute
    replicates; Kolmogorov tests are always right-sided.
    """
    if sided not in ("two", "right"):
        raise ValueError("sided must be 'two' or 'right'")
    if isinstance(observed, StatValue):
        if not table.matches(observed.kind, observed.k, observed.variant, observed.n):
            raise TableMismatchError(
                f"table is for {(table.kind, table.k, table.variant, table.n)}, statistic is "
                f"{(observed.kind, observed.k, observed.variant, observed.n)}"
            )
        value = observed.value
    else:
        value = float(observed)
    if table.kind == "integral" and sided == "two":
        ref, value = table.abs_sorted, abs(value)
    else:
        ref = table.replicates
    exceed = ref.size - np.searchsorted(ref, value, side="left")
    return float((1.0 + exceed) / (ref.size + 1.0))


def _effective_sided(kind, sided):
    return "right" if kind == "kolmogorov" else sided


@dataclass(frozen=True)
class DecisionRecord:
    kind: str
    k: int
    variant: str
    n: int
    statistic: float
    p_value: float
    alpha: float
    sided: str
    reject: bool
    table_id: str
    master_seed: int
    rep_count: int
    null_family: str

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def run_test(sample, kind="integral", k=2, variant="U", alpha=0.05, table=None, sided="two"):
    """Test symmetry about zero; reject when the p-value is at most ``alpha``.

    ``table`` must be a `NullTable` for the same ``(kind, k, variant, n)``.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if table is None:
        raise ValueError("a NullTable is required")
    stat = compute_statistic(sample, kind, k, variant)
    sided = _effective_sided(stat.kind, sided)
    p = p_value(table, stat, sided)
    return DecisionRecord(
        kind=stat.kind,
        k=stat.k,
        variant=stat.variant,
        n=stat.n,
        statistic=stat.value,
        p_value=p,
        alpha=alpha,
        sided=sided,
        reject=bool(p <= alpha),
        table_id=table.table_id,
        master_seed=table.master_seed,
        rep_count=table.rep_count,
        null_family=table.family,
    )


@dataclass(frozen=True)
class PowerPoint:
    theta: float
    rejections: int
    trials: int

    @property
    def power(self):
        return self.rejections / self.trials

    @property
    def se(self):
        p = self.power
        return math.sqrt(p * (1 - p) / self.trials)

    def to_dict(self):
        return {"theta": self.theta, "rejections": self.rejections, "trials": self.trials,
                "power": self.power, "se": self.se}


def power_curve(family, kind, k, variant, n, thetas, trials, alpha, master_seed,
                table=None, reps=10_000, sided="two", workers=1):
    """Empirical rejection rate of the test under location shifts.

    Trial ``j`` uses the same base sample for every ``theta`` (common random
    numbers), shifted by ``theta``; the null table, when not supplied, is
    simulated from ``master_seed`` on a separate seed stream.

    Returns
    -------
    list of PowerPoint
    """
    kind = _check_kind(kind)
    k = _check_order(k, allow_large_k=True)
    variant = _check_variant(variant)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if table is None:
        table = simulate_null(kind, k, variant, n, reps, master_seed, workers=workers)
    elif not table.matches(kind, k, variant, n):
        raise TableMismatchError("table does not match the requested test")
    fam = get_family(family)
    sided = _effective_sided(kind, sided)

    base = [fam.sampler(np.random.default_rng(derived_seed(master_seed, j, TRIAL_STREAM)), n)
            for j in range(trials)]
    out = []
    for theta in thetas:
        rej = 0
        for x in base:
            value = _fast_value(check_sample(x + theta, warn_ties=False), kind, k, variant)
            if p_value(table, value, sided) <= alpha:
                rej += 1
        out.append(PowerPoint(float(theta), rej, int(trials)))
    return out
