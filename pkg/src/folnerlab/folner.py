"""Folner set verification and search, Reiter functions, and the word
problem from a Folner oracle.

All ratios are exact ``fractions.Fraction``; a set F is n-Folner with
respect to D when every translate defect |F \\ xF| / |F| is at most 1/n
(ties count, the inequality is non-strict).

The invariance verifier for c.e. groups works on the signed transport
measure of a finitely supported function: each support code v carries mass
+f(v) and its shift x*v carries -f(v).  Grouping that measure by the code
partition and summing block totals in absolute value is monotone under
merging and equals the exact l1 shift defect once blocks are full fibers
of the numbering, which is what makes the merge procedure sound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .budget import Budget, UNKNOWN
from .groups import (
    CE,
    COMPUTABLE,
    GroupOracle,
    PreconditionError,
    ZdOracle,
    ball,
    canonical_subset,
    subset_decode,
)


class EmptySetError(ValueError):
    """A Folner check was asked about an empty candidate set."""


class EmptySupportError(ValueError):
    """A Reiter function with empty support was supplied."""


class NoLevelSetError(RuntimeError):
    """No level set satisfied the extraction bound; indicates a bug upstream."""


# ---------------------------------------------------------------------------
# domain types


@dataclass
class FolnerCertificate:
    """A finite set F together with its exact defects against D at level n."""

    spec: str
    D: tuple[int, ...]
    n: int
    F: tuple[int, ...]
    defects: dict[int, Fraction]

    def max_defect(self) -> Fraction:
        return max(self.defects.values()) if self.defects else Fraction(0)

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec,
            "D": list(self.D),
            "n": self.n,
            "F": list(self.F),
            "defects": {str(x): str(d) for x, d in sorted(self.defects.items())},
        }


@dataclass
class ReiterFunction:
    """Finitely supported map from codes to positive rationals."""

    support: tuple[int, ...]
    values: dict[int, Fraction]

    def __post_init__(self):
        self.support = canonical_subset(self.support)
        if not self.support:
            raise EmptySupportError("Reiter function needs non-empty support")
        if set(self.values) != set(self.support):
            raise ValueError("support and value domain disagree")
        normalised = {}
        for v, q in self.values.items():
            q = Fraction(q)
            if q <= 0:
                raise ValueError("value at code %d must be positive" % v)
            normalised[v] = q
        self.values = normalised

    @classmethod
    def characteristic(cls, codes) -> "ReiterFunction":
        codes = canonical_subset(codes)
        return cls(codes, {c: Fraction(1) for c in codes})

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def to_json_dict(self) -> dict:
        return {
            "support": list(self.support),
            "values": {str(v): str(q) for v, q in sorted(self.values.items())},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ReiterFunction":
        values = {int(k): Fraction(v) for k, v in data["values"].items()}
        return cls(tuple(data["support"]), values)


@dataclass(frozen=True)
class SupportPartition:
    """Partition of a finite code set into disjoint non-empty blocks."""

    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block in partition")
            if seen & b:
                raise ValueError("blocks are not disjoint")
            seen |= b
        object.__setattr__(self, "_domain", frozenset(seen))

    @property
    def domain(self) -> frozenset:
        return self._domain

    @classmethod
    def finest(cls, codes) -> "SupportPartition":
        return cls(tuple(frozenset([c]) for c in sorted(set(codes))))

    @classmethod
    def by_key(cls, codes, key) -> "SupportPartition":
        groups: dict = {}
        for c in sorted(set(codes)):
            groups.setdefault(key(c), set()).add(c)
        return cls(tuple(frozenset(g) for _, g in sorted(groups.items())))

    def is_refinement_of(self, other: "SupportPartition") -> bool:
        """True when every block here is contained in a block of ``other``."""
        if self.domain != other.domain:
            return False
        where = {}
        for i, b in enumerate(other.blocks):
            for c in b:
                where[c] = i
        return all(len({where[c] for c in b}) == 1 for b in self.blocks)


# ---------------------------------------------------------------------------
# Folner verification


def _translate_defect(g, F_set, size, x, meter=None):
    if meter is not None and not meter.charge(size):
        return None
    xF = {g.mult(x, f) for f in F_set}
    return Fraction(len(F_set - xF), size)


def _all_defects(g, F, D, meter=None):
    F_set = set(F)
    out = {}
    for x in D:
        d = _translate_defect(g, F_set, len(F), x, meter)
        if d is None:
            return None
        out[x] = d
    return out


def _check_candidate(g, F, D, n) -> bool:
    """Defect check with early exit, no defect map materialised."""
    F_set = set(F)
    size = len(F)
    for x in D:
        xF = {g.mult(x, f) for f in F_set}
        if n * len(F_set - xF) > size:
            return False
    return True


def is_n_folner(g: GroupOracle, F, D, n: int):
    """Exact check of the defect bound; returns (verdict, defect map)."""
    if g.mode != COMPUTABLE:
        raise PreconditionError("is_n_folner requires a COMPUTABLE-mode oracle")
    if n < 1:
        raise ValueError("n must be >= 1")
    F = canonical_subset(F)
    if not F:
        raise EmptySetError("F must be non-empty")
    defects = _all_defects(g, F, D)
    bound = Fraction(1, n)
    return all(d <= bound for d in defects.values()), defects


def is_n_folner_complement(g: GroupOracle, F, D, n: int) -> bool:
    """The intersection form |F & xF|/|F| > 1 - 1/n, strict as printed.

    Agrees with :func:`is_n_folner` except on sets with a defect of exactly
    1/n, where the two printed inequalities genuinely differ.
    """
    if g.mode != COMPUTABLE:
        raise PreconditionError("requires a COMPUTABLE-mode oracle")
    if n < 1:
        raise ValueError("n must be >= 1")
    F = canonical_subset(F)
    if not F:
        raise EmptySetError("F must be non-empty")
    F_set = set(F)
    threshold = 1 - Fraction(1, n)
    for x in D:
        xF = {g.mult(x, f) for f in F_set}
        if not Fraction(len(F_set & xF), len(F)) > threshold:
            return False
    return True


def certificate(g: GroupOracle, F, D, n: int) -> FolnerCertificate:
    ok, defects = is_n_folner(g, F, D, n)
    if not ok:
        raise ValueError("set is not %d-Folner for the given D" % n)
    return FolnerCertificate(g.spec, canonical_subset(D), n, canonical_subset(F), defects)


# ---------------------------------------------------------------------------
# search


def _metered_ball_growth(g, D, max_radius, meter):
    """Balls of growing radius with construction charged to the meter;
    yields None once the budget cannot pay for the next expansion."""
    if not D:
        yield (g.identity,)
        return
    step = set(D) | {g.inv(x) for x in D} | {g.identity}
    seen = {g.identity}
    frontier = {g.identity}
    yield (g.identity,)
    for _ in range(max_radius):
        if not meter.charge(len(step) * len(frontier)):
            yield None
            return
        frontier = {g.mult(a, s) for a in step for s in frontier} - seen
        if not frontier:
            return
        seen |= frontier
        yield tuple(sorted(seen))


def _subset_candidates(g, D, n, meter):
    """Fixed candidate order: balls of growing radius, then the Goedel
    enumeration of all finite subsets (bitmask coding).  Yields None when
    the meter cannot pay for the next candidate's construction."""
    yield from _metered_ball_growth(g, D, n + len(D) + 16, meter)
    limit = g.element_count
    for mask in itertools.count(1):
        F = subset_decode(mask)
        if limit is not None and F[-1] >= limit:
            if mask >= (1 << limit):
                return
            continue
        yield F


def search_folner(g: GroupOracle, D, n: int, b: Budget):
    """First n-Folner certificate in the fixed candidate order, or UNKNOWN.

    Budget counts multiplication-oracle calls, both for candidate-ball
    construction and for the |F| x |D| translate checks.
    """
    if g.mode != COMPUTABLE:
        raise PreconditionError("search_folner requires a COMPUTABLE-mode oracle")
    D = canonical_subset(D)
    meter = b.meter()
    for F in _subset_candidates(g, D, n, meter):
        if F is None:
            return UNKNOWN
        if not F:
            continue
        if not meter.charge(len(F) * max(1, len(D))):
            return UNKNOWN
        if _check_candidate(g, F, D, n):
            return certificate(g, F, D, n)
    return UNKNOWN


def _subgroup_size_capped(g, D_eff, cap, meter) -> int | None:
    """|<D>| if it is < cap, else None (also None on budget exhaustion)."""
    gens = set(D_eff) | {g.inv(x) for x in D_eff}
    seen = {g.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for s in frontier:
            for a in gens:
                if not meter.charge():
                    return None
                e = g.mult(a, s)
                if e not in seen:
                    seen.add(e)
                    if len(seen) >= cap:
                        return None
                    nxt.append(e)
        frontier = nxt
    return len(seen)


def folner_function(g: GroupOracle, D, n: int, b: Budget):
    """Minimum size of an n-Folner set with respect to D, or UNKNOWN.

    The lower bound comes from an orbit argument: a set smaller than n must
    have all defects zero, hence be a union of right cosets of <D>, so its
    size is at least |<D>|.  When the size-ordered scan over subsets of
    growing balls finds a certificate matching the lower bound, minimality
    is proved; otherwise the search returns UNKNOWN on budget exhaustion.
    """
    if g.mode != COMPUTABLE:
        raise PreconditionError("folner_function requires a COMPUTABLE-mode oracle")
    if n < 1:
        raise ValueError("n must be >= 1")
    D = canonical_subset(D)
    meter = b.meter()
    D_eff = tuple(x for x in D if g.canon(x) != g.identity)
    if not D_eff:
        return 1
    h = _subgroup_size_capped(g, D_eff, n, meter)
    if h is not None and h < n:
        return h
    lower = n
    balls: list[tuple[int, ...]] = []

    def ball_upto(r):
        while len(balls) <= r:
            nxt = ball(g, D_eff, len(balls))
            if not meter.charge(len(nxt)):
                return None
            if balls and nxt == balls[-1]:
                balls.append(balls[-1])
            else:
                balls.append(nxt)
        return balls[r]

    for s in itertools.count(lower):
        for r in range(1, s + 1):
            U = ball_upto(r)
            if U is None:
                return UNKNOWN
            if r > 1 and U == balls[r - 1]:
                break
            if len(U) < s:
                continue
            for F in itertools.combinations(U, s):
                if not meter.charge(s * len(D)):
                    return UNKNOWN
                if _check_candidate(g, F, D, n):
                    return s if s == lower else UNKNOWN
        if not meter.charge(1):
            return UNKNOWN


def folner_sequence(g: GroupOracle, j: int, b: Budget):
    """j-Folner certificate with respect to the first j codes, via search."""
    if j < 1:
        raise ValueError("sequence index must be >= 1")
    D = canonical_subset({g.canon(c) for c in range(j)})
    return search_folner(g, D, j, b)


# ---------------------------------------------------------------------------
# Reiter functions


def pushforward(g: GroupOracle, f: ReiterFunction) -> dict[int, Fraction]:
    """Sum f over each fiber of the numbering, keyed by canonical code."""
    out: dict[int, Fraction] = {}
    for v, q in f.values.items():
        c = g.canon(v)
        out[c] = out.get(c, Fraction(0)) + q
    return out


def reiter_defect(g: GroupOracle, f: ReiterFunction, D) -> dict[int, Fraction]:
    """Exact normalised l1 shift defect of the pushforward, per element of D."""
    if g.mode != COMPUTABLE:
        raise PreconditionError("reiter_defect requires a COMPUTABLE-mode oracle")
    h = pushforward(g, f)
    total = sum(h.values(), Fraction(0))
    out = {}
    for x in D:
        shifted = {g.mult(x, v): q for v, q in h.items()}
        num = Fraction(0)
        for v in set(h) | set(shifted):
            num += abs(h.get(v, Fraction(0)) - shifted.get(v, Fraction(0)))
        out[x] = num / total
    return out


def _transport_measure(f: ReiterFunction, x: int, star) -> dict[int, Fraction]:
    sigma: dict[int, Fraction] = {}
    for v, q in f.values.items():
        sigma[v] = sigma.get(v, Fraction(0)) + q
        w = star(x, v)
        sigma[w] = sigma.get(w, Fraction(0)) - q
    return sigma


def partition_defect(
    f: ReiterFunction, partition: SupportPartition, x: int, star
) -> Fraction:
    """Blockwise l1 defect of f under a partition, exact rational.

    The partition must cover the support together with its x-shifted image
    (codes ``star(x, v)``); extra codes in blocks are harmless.  The value
    is monotone non-increasing under coarsening and equals the true shift
    defect of the pushforward once the blocks are full numbering fibers.
    """
    sigma = _transport_measure(f, x, star)
    missing = set(sigma) - partition.domain
    if missing:
        raise ValueError(
            "partition must cover the shifted support; missing %r" % sorted(missing)
        )
    num = Fraction(0)
    for block in partition.blocks:
        num += abs(sum((sigma.get(w, Fraction(0)) for w in block), Fraction(0)))
    return num / f.total()


class _MergePartition:
    """Union-find partition with block views, for the merge verifier."""

    def __init__(self, codes):
        self.block_of = {c: i for i, c in enumerate(sorted(codes))}
        self.blocks = {i: {c} for c, i in self.block_of.items()}

    def merge(self, a: int, b: int):
        ia, ib = self.block_of[a], self.block_of[b]
        if len(self.blocks[ia]) < len(self.blocks[ib]):
            ia, ib = ib, ia
        for c in self.blocks[ib]:
            self.block_of[c] = ia
        self.blocks[ia] |= self.blocks.pop(ib)

    def as_sets(self) -> frozenset:
        return frozenset(frozenset(b) for b in self.blocks.values())


def verify_invariance_ce(g: GroupOracle, n: int, D, f: ReiterFunction, b: Budget):
    """Semi-decide n-invariance of the pushforward of f over a c.e. group.

    Starts from the finest partition of the support and its D-shifted
    image, consumes the equal-codes enumeration, and merges the two blocks
    that split an enumerated pair.  After each merge the blockwise defects
    are tested against 1/n for every x in D: success is INVARIANT (sound,
    since the blockwise value only shrinks toward the true defect), failure
    at the full fiber partition is NOT_INVARIANT, and budget exhaustion is
    UNKNOWN.  Budget counts enumeration entries consumed.  The fiber
    partition used as the stopping certificate comes from the oracle's
    internal canonical forms.
    """
    if g.mode != CE:
        raise PreconditionError("verify_invariance_ce requires a CE-mode oracle")
    D = canonical_subset(D)
    sigmas = {x: _transport_measure(f, x, g.mult) for x in D}
    codes = set()
    for s in sigmas.values():
        codes |= set(s)
    codes |= set(f.support)
    part = _MergePartition(codes)
    canonical = frozenset(
        frozenset(c for c in codes if g.canon(c) == key)
        for key in {g.canon(c) for c in codes}
    )
    bound = Fraction(1, n)
    total = f.total()

    def passes() -> bool:
        for x in D:
            sigma = sigmas[x]
            acc: dict[int, Fraction] = {}
            for w, q in sigma.items():
                i = part.block_of[w]
                acc[i] = acc.get(i, Fraction(0)) + q
            if sum((abs(q) for q in acc.values()), Fraction(0)) > bound * total:
                return False
        return True

    if passes():
        return "INVARIANT"
    if part.as_sets() == canonical:
        return "NOT_INVARIANT"
    for m in range(b.steps):
        n1, n2 = g.eq_enum(m)
        if (
            n1 != n2
            and n1 in part.block_of
            and n2 in part.block_of
            and part.block_of[n1] != part.block_of[n2]
        ):
            part.merge(n1, n2)
            if passes():
                return "INVARIANT"
            if part.as_sets() == canonical:
                return "NOT_INVARIANT"
    return UNKNOWN


def extract_folner_from_reiter(g: GroupOracle, h: ReiterFunction, D, n: int):
    """Level set of the pushforward with all defects below |D|/(2n), strict.

    Scans thresholds from zero upward through the finitely many pushforward
    values and returns the first qualifying level set; existence is
    guaranteed whenever the shift defects of h are all below 1/n.
    """
    if g.mode != COMPUTABLE:
        raise PreconditionError("requires a COMPUTABLE-mode oracle")
    D = canonical_subset(D)
    defects = reiter_defect(g, h, D)
    if any(d >= Fraction(1, n) for d in defects.values()):
        raise PreconditionError("input is not n-invariant; extraction unsound")
    p = pushforward(g, h)
    bound = Fraction(len(D), 2 * n)
    thresholds = [Fraction(0)] + sorted(set(p.values()))
    for eps in thresholds:
        F = tuple(sorted(v for v, q in p.items() if q > eps))
        if not F:
            continue
        ds = _all_defects(g, F, D)
        if all(d < bound for d in ds.values()):
            return F
    raise NoLevelSetError("no level set met the bound; implementation bug")


# ---------------------------------------------------------------------------
# word problem from a Folner oracle


def box_folner(g: ZdOracle, D, n: int) -> tuple[int, ...]:
    """Centered box in Z^d whose defects against D are strictly below 1/n."""
    if not isinstance(g, ZdOracle):
        raise PreconditionError("box_folner only applies to zd families")
    vectors = [g.decode_vector(x) for x in D]
    dims = g.dim
    sides = []
    for axis in range(dims):
        m = max((abs(v[axis]) for v in vectors), default=0)
        sides.append(n * dims * m + 1)
    ranges = [range(-(L // 2), L - L // 2) for L in sides]
    return tuple(sorted(g.encode_vector(c) for c in itertools.product(*ranges)))


def folner_oracle(g: GroupOracle, budget: Budget | None = None):
    """(n, D) -> F oracle: analytic boxes for zd, otherwise search."""
    base = g.base if hasattr(g, "base") else g
    if isinstance(base, ZdOracle):
        return lambda n, D: box_folner(base, D, n)
    budget = budget or Budget(10**6)

    def from_search(n, D):
        cert = search_folner(base, D, n, budget)
        if cert is UNKNOWN:
            raise PreconditionError("Folner search exhausted its budget")
        return cert.F

    return from_search


_BATCH_SAFE_LIMIT = 1 << 48  # float64 sqrt is exact to +-1 ulp well below this


def _unpair_batch(start: int, stop: int):
    ms = np.arange(start, stop, dtype=np.int64)
    t = 8 * ms + 1
    s = np.sqrt(t.astype(np.float64)).astype(np.int64)
    s -= (s * s > t).astype(np.int64)
    s += ((s + 1) * (s + 1) <= t).astype(np.int64)
    w = (s - 1) // 2
    y = ms - w * (w + 1) // 2
    x = w - y
    return x, y


def decide_mult_from_folner(g: GroupOracle, folner, n1: int, n2: int, n3: int) -> bool:
    """Decide whether the product of codes n1 and n2 equals n3, consuming
    the multiplication-table enumeration of a CE oracle.

    The Folner oracle supplies a 4-Folner set F for D = {n1, n2, n3}; the
    enumeration is scanned for triples d * f_i = f_j with both sides in F,
    growing one partial injection per element of D, until each injection
    covers more than 3/4 of F.  The answer is whether some start index
    chains consistently through the n1- and n2-graphs onto the n3-graph
    (non-empty in the true case, empty in the false case).  Termination is
    guaranteed by the density of the injections; no budget applies.
    """
    if g.mode != CE:
        raise PreconditionError("decide_mult_from_folner consumes a CE oracle")
    D = canonical_subset({n1, n2, n3})
    F = canonical_subset(folner(4, D))
    k = len(F)
    pos = {f: i for i, f in enumerate(F)}
    graphs: dict[int, dict[int, int]] = {d: {} for d in D}
    threshold = Fraction(3 * k, 4)

    def done() -> bool:
        return all(len(graphs[d]) > threshold for d in D)

    def record(i: int, j: int):
        if i in graphs and j in pos:
            k3 = g.mult(i, j)
            if k3 in pos:
                graphs[i][pos[j]] = pos[k3]

    if hasattr(g, "multt_enum_pair"):
        maxF = F[-1]
        lookup = np.zeros(maxF + 1, dtype=bool)
        lookup[list(F)] = True
        d_arr = np.array(sorted(graphs), dtype=np.int64)
        start = 0
        chunk = 1 << 16
        while not done() and start < _BATCH_SAFE_LIMIT:
            xs, ys = _unpair_batch(start, start + chunk)
            mask = np.isin(xs, d_arr) & (ys <= maxF)
            mask &= lookup[np.where(ys <= maxF, ys, 0)]
            for idx in np.nonzero(mask)[0]:
                record(int(xs[idx]), int(ys[idx]))
            start += chunk
        m = start
        while not done():  # exact fallback past the vectorised range
            i, j = g.multt_enum_pair(m)
            record(i, j)
            m += 1
    else:
        m = 0
        while not done():
            i, j, prod = g.multt_enum(m)
            if i in graphs and j in pos and prod in pos:
                graphs[i][pos[j]] = pos[prod]
            m += 1

    s1, s2, s3 = graphs[n1], graphs[n2], graphs[n3]
    for i, j1 in s1.items():
        j2 = s2.get(j1)
        if j2 is not None and s3.get(i) == j2:
            return True
    return False
