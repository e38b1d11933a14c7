"""Patch costs: completing a depleted set back into the family.

For a subset G of the ground set, a patch is any set P with G + P containing
a member; the distance min_patch_size(G) counts the fewest added elements,
and exact_patch finds the cheapest patch under a weight assignment.  The
component heuristic for trees adds, for each connected component except the
largest, the cheapest edge leading to a later component (components ordered
by ascending size, ties by smallest vertex label); it uses exactly
min_patch_size(G) edges and never beats the exact patch.

estimate_patchability samples depleted sets G at distance r, redraws fresh
weights per trial, and reports the largest per-G empirical (1-eps)-quantile
of the exact patch cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .families import (
    ExplicitFamily,
    Family,
    MatchingFamily,
    SpanningTreeFamily,
    WeightAssignment,
    prufer_decode,
)
from .rngs import stream
from .weights import WeightSpec, sample

__all__ = [
    "PatchMethod",
    "PatchResult",
    "GStrategy",
    "PatchabilityEstimate",
    "exact_patch",
    "component_patch",
    "min_outgoing_edge_count",
    "sample_depleted_set",
    "estimate_patchability",
]


class PatchMethod(Enum):
    EXACT = "exact"
    COMPONENT = "component"


class GStrategy(Enum):
    """How a depleted set G at distance r is generated."""

    REMOVE_FROM_OPTIMUM = "remove-from-optimum"
    REMOVE_FROM_RANDOM_MEMBER = "remove-from-random-member"
    ADVERSARIAL_HEAVIEST = "adversarial-heaviest"


@dataclass(frozen=True)
class PatchResult:
    """A valid patch: G + patch contains a member (checked by the solvers)."""

    cost: float
    patch: tuple[int, ...]
    method: PatchMethod


def _verify_patch(fam: Family, subset, patch) -> None:
    merged = tuple(subset) + tuple(patch)
    if fam.min_patch_size(merged) != 0:
        raise RuntimeError("patch failed to complete the subset; solver bug")


def exact_patch(fam: Family, subset, w: WeightAssignment) -> PatchResult:
    """Cheapest patch for `subset` under w (exact for every family)."""
    cost, patch = fam.cheapest_completion(subset, w)
    _verify_patch(fam, subset, patch)
    return PatchResult(cost=cost, patch=patch, method=PatchMethod.EXACT)


def _component_order(fam: SpanningTreeFamily, comp: np.ndarray) -> np.ndarray:
    """Position of each component id: ascending size, ties by smallest vertex."""
    c = int(comp.max()) + 1
    sizes = np.bincount(comp, minlength=c)
    first_vertex = np.full(c, fam.n, dtype=np.intp)
    np.minimum.at(first_vertex, comp, np.arange(fam.n, dtype=np.intp))
    order = np.lexsort((first_vertex, sizes))
    pos = np.empty(c, dtype=np.intp)
    pos[order] = np.arange(c, dtype=np.intp)
    return pos


def component_patch(fam: Family, subset, w: WeightAssignment) -> PatchResult:
    """Per-component heuristic patch (spanning trees only).

    One edge per non-largest component: the cheapest edge toward any later
    component in the size ordering.  Uses exactly min_patch_size(subset)
    edges; cost dominates the exact patch.
    """
    if not isinstance(fam, SpanningTreeFamily):
        raise TypeError("component_patch is defined for spanning-tree families")
    fam._check_weights(w)
    idx = fam._check_subset(subset)
    comp = fam.component_labels(idx)
    c = int(comp.max()) + 1
    if c == 1:
        return PatchResult(cost=0.0, patch=(), method=PatchMethod.COMPONENT)
    pos = _component_order(fam, comp)
    pu = pos[comp[fam.edge_u]]
    pv = pos[comp[fam.edge_v]]
    cross = np.nonzero(pu != pv)[0]
    source = np.minimum(pu[cross], pv[cross])
    vals = w.values[cross]
    order = np.lexsort((cross, vals, source))
    src_sorted = source[order]
    first = np.ones(src_sorted.size, dtype=bool)
    first[1:] = src_sorted[1:] != src_sorted[:-1]
    chosen = cross[order][first]
    # Complete graph: every non-largest position has outgoing edges, so the
    # patch has exactly c - 1 entries.
    patch = tuple(sorted(int(e) for e in chosen))
    if len(patch) != c - 1:
        raise RuntimeError("component patch size mismatch; solver bug")
    _verify_patch(fam, idx, patch)
    return PatchResult(cost=w.total(patch), patch=patch,
                       method=PatchMethod.COMPONENT)


def min_outgoing_edge_count(fam: Family, subset) -> int:
    """Minimum, over non-largest components of (V, subset), of the number of
    edges leaving the component toward later components.

    For K_n with distance r >= 1 the count is provably at least
    min(n/2, n^2/(4 r^2)); a smaller value indicates a solver bug and raises.
    """
    if not isinstance(fam, SpanningTreeFamily):
        raise TypeError("outgoing-edge counts are defined for spanning trees")
    idx = fam._check_subset(subset)
    comp = fam.component_labels(idx)
    c = int(comp.max()) + 1
    if c == 1:
        raise ValueError("subset already spans; no non-largest components")
    pos = _component_order(fam, comp)
    pu = pos[comp[fam.edge_u]]
    pv = pos[comp[fam.edge_v]]
    cross = pu != pv
    source = np.minimum(pu[cross], pv[cross])
    counts = np.bincount(source, minlength=c)[: c - 1]
    smallest = int(counts.min())
    r = c - 1
    bound = min(fam.n / 2, fam.n**2 / (4 * r * r))
    if smallest < bound:
        raise RuntimeError(
            f"outgoing-edge count {smallest} below guaranteed bound {bound}"
        )
    return smallest


def _random_member(fam: Family, rng: np.random.Generator) -> tuple[int, ...]:
    """A uniform member: random Prufer tree / permutation / member index."""
    if isinstance(fam, SpanningTreeFamily):
        if fam.n == 2:
            return (0,)
        seq = rng.integers(0, fam.n, size=fam.n - 2)
        return tuple(sorted(fam.edge_indices(prufer_decode(seq, fam.n))))
    if isinstance(fam, MatchingFamily):
        perm = rng.permutation(fam.n)
        return tuple(sorted(i * fam.n + int(perm[i]) for i in range(fam.n)))
    if isinstance(fam, ExplicitFamily):
        return fam.members[int(rng.integers(len(fam.members)))]
    raise TypeError(f"no member sampler for {type(fam).__name__}")


def sample_depleted_set(
    fam: Family,
    spec: WeightSpec,
    r: int,
    strategy: GStrategy,
    rng: np.random.Generator,
) -> tuple[int, ...]:
    """Generate G by removing r elements from a member.

    The member comes from an auxiliary weight draw (optimum / adversarial
    strategies) or is uniform; removal is uniform except for
    ADVERSARIAL_HEAVIEST, which removes the member's r heaviest elements
    under the auxiliary weights.  For trees and matchings the result is at
    distance exactly r; for explicit families at most r (another member may
    be closer).
    """
    if not 0 <= r <= fam.ell:
        raise ValueError(f"removal count r={r} outside [0, {fam.ell}]")
    if strategy is GStrategy.REMOVE_FROM_RANDOM_MEMBER:
        member = _random_member(fam, rng)
        aux = None
    else:
        aux = WeightAssignment(sample(spec, rng, fam.ground.size))
        member = fam.min_weight(aux).witness
    if r == 0:
        return tuple(member)
    if strategy is GStrategy.ADVERSARIAL_HEAVIEST:
        member_arr = np.asarray(member, dtype=np.intp)
        heavy = np.argsort(aux.values[member_arr], kind="stable")[::-1][:r]
        removed = set(int(member_arr[i]) for i in heavy)
    else:
        positions = rng.choice(len(member), size=r, replace=False)
        removed = set(int(member[int(p)]) for p in positions)
    return tuple(e for e in member if e not in removed)


@dataclass(frozen=True)
class PatchabilityEstimate:
    """Empirical patch-cost level: with probability about 1 - eps the cheapest
    patch of a sampled distance-r set costs at most lam."""

    r: int
    lam: float
    eps: float
    trials: int
    g_samples: int
    per_g_quantiles: tuple[float, ...]
    costs: np.ndarray  # shape (g_samples, trials)


def estimate_patchability(
    fam: Family,
    spec: WeightSpec,
    r: int,
    eps: float,
    g_strategy: GStrategy,
    trials: int,
    g_samples: int = 10,
    master_seed: int = 7,
    exhaustive: bool = False,
) -> PatchabilityEstimate:
    """Monte Carlo patchability level at distance r.

    Sampled mode: g_samples depleted sets, `trials` fresh weight draws each
    (all streams independent); lam is the largest per-G (1-eps)-quantile.

    Exhaustive mode (explicit families, ground size <= 18): sweeps every
    subset at distance <= r instead of sampling; the `trials` fresh draws
    are shared across the sweep so the max over G of per-G quantiles is a
    consistent estimate of the worst-case quantile.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if not 0 <= r <= fam.ell:
        raise ValueError(f"r={r} outside [0, {fam.ell}]")
    if trials < 1:
        raise ValueError("trials must be positive")
    if r == 0:
        empty = np.zeros((1, trials))
        return PatchabilityEstimate(
            r=0, lam=0.0, eps=eps, trials=trials, g_samples=1,
            per_g_quantiles=(0.0,), costs=empty,
        )
    if exhaustive:
        return _estimate_exhaustive(fam, spec, r, eps, trials, master_seed)
    rows = []
    quantiles = []
    for g in range(g_samples):
        g_rng = stream(master_seed, 301, g)
        depleted = sample_depleted_set(fam, spec, r, g_strategy, g_rng)
        row = np.empty(trials)
        for t in range(trials):
            w = WeightAssignment(
                sample(spec, stream(master_seed, 302, g, t), fam.ground.size)
            )
            row[t] = fam.cheapest_completion(depleted, w)[0]
        rows.append(row)
        quantiles.append(float(np.quantile(row, 1.0 - eps, method="midpoint")))
    return PatchabilityEstimate(
        r=r, lam=max(quantiles), eps=eps, trials=trials, g_samples=g_samples,
        per_g_quantiles=tuple(quantiles), costs=np.vstack(rows),
    )


def _estimate_exhaustive(fam, spec, r, eps, trials, master_seed):
    if not isinstance(fam, ExplicitFamily):
        raise ValueError("exhaustive sweep requires an explicit family")
    num = fam.ground.size
    if num > 18:
        raise ValueError("exhaustive sweep is limited to 18 ground elements")
    targets = [
        mask
        for mask in range(1 << num)
        if fam.min_patch_size(_mask_indices(mask)) <= r
    ]
    draws = np.vstack(
        [sample(spec, stream(master_seed, 303, t), num) for t in range(trials)]
    )
    rows = np.empty((len(targets), trials))
    member_arrays = [np.asarray(m, dtype=np.intp) for m in fam.members]
    for gi, mask in enumerate(targets):
        per_member = []
        for elems in member_arrays:
            outside = np.array(
                [(mask >> int(e)) & 1 == 0 for e in elems], dtype=bool
            )
            per_member.append(draws[:, elems[outside]].sum(axis=1))
        rows[gi] = np.min(per_member, axis=0)
    quants = np.quantile(rows, 1.0 - eps, axis=1, method="midpoint")
    best = int(np.argmax(quants))
    return PatchabilityEstimate(
        r=r, lam=float(quants[best]), eps=eps, trials=trials,
        g_samples=len(targets), per_g_quantiles=tuple(float(q) for q in quants),
        costs=rows,
    )


def _mask_indices(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)
