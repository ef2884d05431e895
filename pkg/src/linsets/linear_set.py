"""Linear sets L_U of PG(1, q^n): point weights, spectra and classification flags.

A point is normalized as (x, 1) when its second coordinate is nonzero and as
(1, 0) otherwise.  Internally a point is keyed by ``x`` for (x, 1) and by
``ctx.order`` for (1, 0).
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field

from linsets.errors import BadParams, InternalContradiction, MixedAmbient
from linsets.field import FieldCtx
from linsets.subspace import PLANE, Subspace, intersect, span

# enumerate_linear_set() checks every report it produces; the tally is kept
# here so test sessions can confirm how many linear sets were audited.  Each
# distinct (q, rank, n, size, distribution) seen in this process is also kept
# so it can be rechecked independently.
audit = Counter()
audited_distributions: set[tuple] = set()


@dataclass(frozen=True)
class ProjPoint:
    ctx: FieldCtx
    x: int | None  # None encodes (1, 0)

    @classmethod
    def from_key(cls, ctx: FieldCtx, key: int) -> ProjPoint:
        return cls(ctx, None if key == ctx.order else key)

    @classmethod
    def from_vector(cls, ctx: FieldCtx, u: int, v: int) -> ProjPoint:
        if v:
            return cls(ctx, ctx.div(u, v))
        if not u:
            raise BadParams("the zero vector is not a point")
        return cls(ctx, None)

    @property
    def key(self) -> int:
        return self.ctx.order if self.x is None else self.x

    def rep(self) -> tuple[int, int]:
        return (1, 0) if self.x is None else (self.x, 1)

    def __str__(self):
        if self.x is None:
            return "(1,0)"
        cs = ",".join(map(str, self.ctx.coords(self.x)))
        return f"([{cs}],1)"


def infinity(ctx: FieldCtx) -> ProjPoint:
    return ProjPoint(ctx, None)


def point_space(ctx: FieldCtx, P: ProjPoint) -> Subspace:
    """The n-dimensional F_q-space {c·rep(P) : c ∈ F_{q^n}} of the plane."""
    x, y = P.rep()
    Q = ctx.order
    vecs = []
    for j in range(ctx.n):
        c = ctx.q**j
        vecs.append(ctx.mul(c, x) + ctx.mul(c, y) * Q)
    return span(ctx, vecs, PLANE)


def weight(U: Subspace, P: ProjPoint) -> int:
    """dim_{F_q}(U ∩ P), computed by an explicit intersection."""
    if U.ambient != PLANE:
        raise MixedAmbient("weights are defined for plane subspaces")
    return intersect(U, point_space(U.ctx, P)).dim


def point_counts(U: Subspace) -> Counter:
    """key -> number of nonzero vectors of U on that point."""
    if U.ambient != PLANE:
        raise MixedAmbient("linear sets come from plane subspaces")
    ctx = U.ctx
    Q = ctx.order
    counts = Counter()
    vecs = U.vectors()
    if ctx._exp is not None:
        exp, log, m = ctx._exp, ctx._log, Q - 1
        for v in vecs[1:]:
            y, x = divmod(v, Q)
            if y:
                counts[exp[log[x] - log[y] + m] if x else 0] += 1
            else:
                counts[Q] += 1
    else:
        for v in vecs[1:]:
            y, x = divmod(v, Q)
            counts[ctx.div(x, y) if y else Q] += 1
    return counts


def point_weights(U: Subspace) -> dict[int, int]:
    """key -> weight for every point of L_U."""
    q = U.ctx.q
    wt = {q**i - 1: i for i in range(U.dim + 1)}
    out = {}
    for key, c in point_counts(U).items():
        if c not in wt:
            raise InternalContradiction(f"{c} vectors on a point is not q^w - 1")
        out[key] = wt[c]
    return out


def point_set(U: Subspace) -> frozenset[int]:
    return frozenset(point_counts(U))


@dataclass
class Flags:
    scattered: bool
    minimum_size: bool
    club: int | None
    complementary_type: tuple[int, int] | None

    def is_club(self, i: int) -> bool:
        return self.club == i

    def to_dict(self) -> dict:
        return {
            "scattered": self.scattered,
            "minimum_size": self.minimum_size,
            "club": self.club,
            "complementary_type": list(self.complementary_type) if self.complementary_type else None,
        }


@dataclass
class LinearSetReport:
    q: int
    rank: int
    size: int
    distribution: dict[int, int]
    weights: dict[int, int] = field(repr=False)
    ctx: FieldCtx | None = field(default=None, repr=False)
    flags: Flags | None = None

    @property
    def spectrum(self) -> list[int]:
        return sorted(i for i, c in self.distribution.items() if c)

    def N(self, i: int) -> int:
        return self.distribution.get(i, 0)

    def heaviest_points(self) -> list[tuple[ProjPoint, int]]:
        if not self.weights:
            return []
        top = max(self.weights.values())
        return [
            (ProjPoint.from_key(self.ctx, k), top)
            for k in sorted(self.weights)
            if self.weights[k] == top
        ]

    def weight_at(self, key: int) -> int:
        return self.weights.get(key, 0)

    def to_dict(self) -> dict:
        heavy = self.heaviest_points()
        d = {
            "schema": "report-v1",
            "kind": "linear_set",
            "rank": self.rank,
            "size": self.size,
            "distribution": {str(i): c for i, c in sorted(self.distribution.items())},
            "spectrum": self.spectrum,
            "flags": self.flags.to_dict() if self.flags else None,
            "heaviest_points": [{"point": str(P), "weight": w} for P, w in heavy[:16]],
        }
        if self.ctx is not None:
            d["field"] = self.ctx.describe()
        return d


CSV_FIELDS = ["rank", "size", "spectrum", "distribution", "scattered", "minimum_size", "club", "complementary_type"]


def report_csv_row(report: LinearSetReport, extra: dict | None = None) -> dict:
    f = report.flags or classify_flags(report)
    row = {
        "rank": report.rank,
        "size": report.size,
        "spectrum": " ".join(map(str, report.spectrum)),
        "distribution": " ".join(f"{i}:{c}" for i, c in sorted(report.distribution.items())),
        "scattered": int(f.scattered),
        "minimum_size": int(f.minimum_size),
        "club": "" if f.club is None else f.club,
        "complementary_type": "" if f.complementary_type is None else "%d/%d" % f.complementary_type,
    }
    if extra:
        row.update(extra)
    return row


def reports_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ",".join(CSV_FIELDS) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _geom_sum(q: int, lo: int, hi: int) -> int:
    """q^lo + ... + q^hi (0 when hi < lo)."""
    return sum(q**i for i in range(lo, hi + 1))


def check_identities(report: LinearSetReport) -> bool:
    """Size, vector-count, cardinality and pairwise-weight identities."""
    q, k = report.q, report.rank
    dist = report.distribution
    if any(i < 1 or i > k or c < 0 for i, c in dist.items()):
        return False
    if report.size != sum(dist.values()):
        return False
    if sum(c * _geom_sum(q, 0, i - 1) for i, c in dist.items()) != _geom_sum(q, 0, k - 1):
        return False
    if report.size > _geom_sum(q, 0, k - 1):
        return False
    spec = sorted((i for i, c in dist.items() for _ in range(min(c, 2))), reverse=True)
    if len(spec) >= 2 and spec[0] + spec[1] > k:
        return False
    return True


def complementary_bounds(q: int, k: int, r: int) -> tuple[int, int]:
    """Closed interval for the size of a linear set of type (k-r, r) with a weight-one point."""
    hi, lo = max(k - r, r), min(k - r, r)
    upper = _geom_sum(q, hi, k - 1) - _geom_sum(q, 1, lo - 1) + 1
    return q ** (k - 1) + 1, upper


def classify_flags(report: LinearSetReport) -> Flags:
    q, k = report.q, report.rank
    dist = report.distribution
    spectrum = report.spectrum
    scattered = report.size == _geom_sum(q, 0, k - 1)
    minimum = dist.get(1, 0) >= 1 and report.size == q ** (k - 1) + 1
    club = None
    if len(spectrum) == 2 and spectrum[0] == 1 and dist[spectrum[1]] == 1:
        club = spectrum[1]
    comp = None
    for w in sorted(spectrum, reverse=True):
        other = k - w
        if other > w:
            break
        if other < 1:
            continue
        if dist.get(other, 0) >= (2 if other == w else 1):
            comp = (w, other)
            break
    return Flags(scattered, minimum, club, comp)


def enumerate_linear_set(U: Subspace) -> LinearSetReport:
    """Tally every nonzero vector of U onto its point and build the report."""
    if U.is_zero():
        raise BadParams("U must be nonzero")
    weights = point_weights(U)
    dist = Counter(weights.values())
    report = LinearSetReport(
        q=U.ctx.q,
        rank=U.dim,
        size=len(weights),
        distribution=dict(sorted(dist.items())),
        weights=weights,
        ctx=U.ctx,
    )
    report.flags = classify_flags(report)
    _audit_report(report)
    return report


def _audit_report(report: LinearSetReport):
    audit["checked"] += 1
    audited_distributions.add(
        (report.q, report.rank, report.ctx.n, report.size, tuple(sorted(report.distribution.items())))
    )
    ok = check_identities(report)
    f = report.flags
    if ok and f.complementary_type and report.N(1) >= 1 and report.rank <= report.ctx.n:
        lo, hi = complementary_bounds(report.q, report.rank, f.complementary_type[1])
        ok = lo <= report.size <= hi
    if not ok:
        audit["failed"] += 1
        raise InternalContradiction(f"linear set identities violated: {report}")


def same_point_set(U: Subspace, W: Subspace) -> bool:
    return point_set(U) == point_set(W)


def distribution_key(report: LinearSetReport) -> tuple:
    return tuple(sorted(report.distribution.items()))
