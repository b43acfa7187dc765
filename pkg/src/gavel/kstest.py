"""Two-sample Kolmogorov-Smirnov testing across feature distributions.

The statistic D is the supremum gap between the two right-continuous
empirical CDFs, computed by a streaming merge of the sorted samples. The
p-value uses the asymptotic series

    p = 2 * sum_{k>=1} (-1)^(k-1) * exp(-2 k^2 lambda^2)

with the small-sample correction lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D
and ne = na*nb/(na+nb); the series is truncated once terms drop below 1e-12.
An exact permutation mode exists for tiny fixtures (na+nb <= 20).

Group comparisons cover the pairs R-D, R-I, D-I, M-m and R.M.-D.M., where
R/D/I select by party, M/m by standing, and R.M./D.M. by both. Star levels:
*** for p < 0.001, ** for p in [0.001, 0.01), * for p in [0.01, 0.05).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from pathlib import Path
from typing import Sequence

from .corpus import Party, Standing
from .features import SCHEMA, FeatureVector

SERIES_TERM_CUTOFF = 1e-12
_MAX_SERIES_TERMS = 200_000


class Stars(str, Enum):
    NONE = "None"
    ONE = "One"
    TWO = "Two"
    THREE = "Three"

    @property
    def glyph(self) -> str:
        return {"None": "", "One": "*", "Two": "**", "Three": "***"}[self.value]


@dataclass(frozen=True)
class KSResult:
    statistic_d: float
    p_value: float
    n_a: int
    n_b: int
    lam: float
    mean_a: float
    mean_b: float
    stars: Stars
    significant: bool


def star_level(p: float) -> Stars:
    """Map a p-value to a star level; boundaries belong to the weaker bucket."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p-value out of range: {p}")
    if p < 0.001:
        return Stars.THREE
    if p < 0.01:
        return Stars.TWO
    if p < 0.05:
        return Stars.ONE
    return Stars.NONE


def ks_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    """Supremum ECDF gap via a two-pointer merge over the sorted samples.

    Ties are handled by evaluating the gap just after each distinct value,
    which is where right-continuous ECDFs realize their difference.
    """
    xa, xb = sorted(a), sorted(b)
    na, nb = len(xa), len(xb)
    i = j = 0
    d = 0.0
    while i < na or j < nb:
        if j >= nb or (i < na and xa[i] <= xb[j]):
            v = xa[i]
        else:
            v = xb[j]
        while i < na and xa[i] <= v:
            i += 1
        while j < nb and xb[j] <= v:
            j += 1
        gap = abs(i / na - j / nb)
        if gap > d:
            d = gap
    return d


def ks_series_p(lam: float) -> float:
    """Asymptotic tail probability, clamped to [0, 1]."""
    if lam <= 0.0:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, _MAX_SERIES_TERMS + 1):
        term = math.exp(-2.0 * (k * lam) ** 2)
        total += sign * term
        if term < SERIES_TERM_CUTOFF:
            break
        sign = -sign
    else:
        # lambda so small the terms never decay; the tail probability is 1
        return 1.0
    return min(1.0, max(0.0, 2.0 * total))


def _check_sample(name: str, xs: Sequence[float]) -> None:
    if len(xs) < 1:
        raise ValueError(f"sample {name} is empty")
    for v in xs:
        if not math.isfinite(v):
            raise ValueError(f"sample {name} contains a non-finite value")


def ks_two_sample(a: Sequence[float], b: Sequence[float], method: str = "series") -> KSResult:
    _check_sample("a", a)
    _check_sample("b", b)
    na, nb = len(a), len(b)
    d = ks_statistic(a, b)
    ne = na * nb / (na + nb)
    lam = (math.sqrt(ne) + 0.12 + 0.11 / math.sqrt(ne)) * d
    if method == "series":
        p = ks_series_p(lam)
    elif method == "exact":
        p = ks_exact_p(a, b)
    else:
        raise ValueError(f"unknown method {method!r}")
    stars = star_level(p)
    return KSResult(
        statistic_d=d,
        p_value=p,
        n_a=na,
        n_b=nb,
        lam=lam,
        mean_a=sum(a) / na,
        mean_b=sum(b) / nb,
        stars=stars,
        significant=stars is not Stars.NONE,
    )


def ks_exact_p(a: Sequence[float], b: Sequence[float], max_total: int = 20) -> float:
    """Permutation p-value by full enumeration of group assignments.

    Only for tiny fixtures: the pooled size must not exceed `max_total`.
    """
    na, nb = len(a), len(b)
    if na + nb > max_total:
        raise ValueError(f"exact mode supports at most {max_total} pooled values, got {na + nb}")
    pooled = list(a) + list(b)
    observed = ks_statistic(a, b)
    hits = 0
    count = 0
    indices = range(len(pooled))
    for pick in combinations(indices, na):
        picked = set(pick)
        xa = [pooled[i] for i in pick]
        xb = [pooled[i] for i in indices if i not in picked]
        if ks_statistic(xa, xb) >= observed - 1e-15:
            hits += 1
        count += 1
    return hits / count


# Group pairs in canonical order; left group listed first.
GROUP_PAIRS: tuple[tuple[str, str], ...] = (
    ("R", "D"),
    ("R", "I"),
    ("D", "I"),
    ("M", "m"),
    ("R.M.", "D.M."),
)


def group_selector(descriptor: str):
    party = {"R": Party.REPUBLICAN, "D": Party.DEMOCRAT, "I": Party.INDEPENDENT}
    if descriptor in party:
        want = party[descriptor]
        return lambda p, s: p == want
    if descriptor == "M":
        return lambda p, s: s == Standing.MAJORITY
    if descriptor == "m":
        return lambda p, s: s == Standing.MINORITY
    if descriptor.endswith(".M.") and descriptor[0] in party:
        want = party[descriptor[0]]
        return lambda p, s: p == want and s == Standing.MAJORITY
    raise ValueError(f"unknown group descriptor {descriptor!r}")


@dataclass(frozen=True)
class GroupComparison:
    left_group: str
    right_group: str
    feature_name: str
    result: KSResult
    direction: float  # mean_left - mean_right; positive = left larger


@dataclass(frozen=True)
class ComparisonSkip:
    left_group: str
    right_group: str
    feature_name: str
    reason: str


def compare_groups(
    rows: Sequence[tuple[Party, Standing, FeatureVector]],
    feature_names: Sequence[str] = SCHEMA,
    pairs: Sequence[tuple[str, str]] = GROUP_PAIRS,
) -> tuple[list[GroupComparison], list[ComparisonSkip]]:
    """One KS comparison per (feature, group pair); null-flagged values excluded."""
    comparisons: list[GroupComparison] = []
    skips: list[ComparisonSkip] = []
    for left, right in pairs:
        sel_l, sel_r = group_selector(left), group_selector(right)
        rows_l = [fv for p, s, fv in rows if sel_l(p, s)]
        rows_r = [fv for p, s, fv in rows if sel_r(p, s)]
        for name in feature_names:
            a = [fv[name] for fv in rows_l if fv[name] is not None]
            b = [fv[name] for fv in rows_r if fv[name] is not None]
            if len(a) < 2 or len(b) < 2:
                skips.append(
                    ComparisonSkip(left, right, name, f"need >= 2 usable values per group, got {len(a)}/{len(b)}")
                )
                continue
            result = ks_two_sample(a, b)
            comparisons.append(
                GroupComparison(left, right, name, result, direction=result.mean_a - result.mean_b)
            )
    return comparisons, skips


_CELL_FIELDS = ("direction", "stars", "D", "p", "hatched")


def emit_heatmap_matrix(
    comparisons: Sequence[GroupComparison],
    path: Path | str,
    pairs: Sequence[tuple[str, str]] = GROUP_PAIRS,
    delimiter: str = "\t",
) -> None:
    """Wide matrix: one row per feature, five cell fields per group pair.

    `hatched` is true exactly when the difference is not significant, the
    cue external plotting uses for the cross-hatch pattern.
    """
    by_key = {(c.feature_name, c.left_group, c.right_group): c for c in comparisons}
    feature_order = [n for n in SCHEMA if any(k[0] == n for k in by_key)]
    for c in comparisons:  # features outside the fixed schema keep input order
        if c.feature_name not in feature_order:
            feature_order.append(c.feature_name)
    header = ["feature"]
    for left, right in pairs:
        header.extend(f"{left}|{right}:{f}" for f in _CELL_FIELDS)
    lines = [delimiter.join(header)]
    for name in feature_order:
        cells = [name]
        for left, right in pairs:
            c = by_key.get((name, left, right))
            if c is None:
                cells.extend([""] * len(_CELL_FIELDS))
            else:
                cells.extend(
                    [
                        repr(c.direction),
                        c.result.stars.glyph,
                        repr(c.result.statistic_d),
                        repr(c.result.p_value),
                        "true" if not c.result.significant else "false",
                    ]
                )
        lines.append(delimiter.join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_comparison_details(
    comparisons: Sequence[GroupComparison],
    skips: Sequence[ComparisonSkip],
    path: Path | str,
    delimiter: str = "\t",
) -> None:
    """Long-format dump carrying both means, for either hue convention."""
    header = [
        "feature",
        "left",
        "right",
        "n_a",
        "n_b",
        "mean_a",
        "mean_b",
        "direction",
        "D",
        "p",
        "lambda",
        "stars",
        "significant",
        "skip_reason",
    ]
    lines = [delimiter.join(header)]
    for c in comparisons:
        r = c.result
        lines.append(
            delimiter.join(
                [
                    c.feature_name,
                    c.left_group,
                    c.right_group,
                    str(r.n_a),
                    str(r.n_b),
                    repr(r.mean_a),
                    repr(r.mean_b),
                    repr(c.direction),
                    repr(r.statistic_d),
                    repr(r.p_value),
                    repr(r.lam),
                    r.stars.value,
                    "true" if r.significant else "false",
                    "",
                ]
            )
        )
    for s in skips:
        lines.append(
            delimiter.join(
                [s.feature_name, s.left_group, s.right_group, "", "", "", "", "", "", "", "", "", "", s.reason]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
