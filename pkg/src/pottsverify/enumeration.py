"""The enumeration kernel: exact event-restricted correlation sums.

The central quantity is the *correlation sum* of an index list ``R`` over an
event ``E``: the sum, over configurations in ``E``, of the spin product of
``R`` times the configuration weight.  Over the whole space it equals the
partition function times the thermal average of the spin product.

Two independent evaluation paths are provided:

* ``correlation_sum`` / ``correlation_sums`` — the optimized path.  A
  mixed-radix odometer walks configuration ranks (site n fastest); on each
  single-site step only the interactions containing that site re-evaluate
  their delta, and the weight is maintained multiplicatively.  All hot-loop
  arithmetic is integer-only: weights are scaled by the product of all
  coupling denominators, spin products by ``2**|R|``, and the two scales are
  divided out exactly once at the end.  The rank space splits into
  contiguous chunks for parallel workers; merging is exact addition in chunk
  order, so results are identical for every worker count.
* ``correlation_sum_naive`` — the reference path, kept permanently as the
  test oracle.  It recomputes every delta, the full weight product, and the
  spin product from scratch for each configuration, entirely in Fractions.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .gibbs import all_configurations, config_weight, generalized_delta
from .model import (
    Configuration,
    EMPTY_LIST,
    IndexList,
    Model,
    ModelError,
    spin_domain,
)

__all__ = [
    "EVERYWHERE",
    "EventPredicate",
    "NEGATIVE",
    "POSITIVE",
    "SumResult",
    "ZERO",
    "centered_power_sum",
    "conjoin",
    "correlation_sum",
    "correlation_sum_naive",
    "correlation_sums",
    "delta_event",
    "expectation",
    "sign_class",
    "sign_event",
    "spin_product",
    "uniform_correlation_sum",
]

POSITIVE = "positive"
NEGATIVE = "negative"
ZERO = "zero"
_SIGNS = (POSITIVE, NEGATIVE, ZERO)


@dataclass(frozen=True)
class EventPredicate:
    """A conjunction of constraints selecting a set of configurations.

    ``sign_constraint`` restricts the sign of the spin product of
    ``sign_indices``; each entry of ``delta_constraints`` pins the equality
    delta of a site subset to 0 or 1.  The empty predicate selects the whole
    configuration space.  Unions are expressed by summing correlation sums
    over disjoint conjunctions.
    """

    sign_constraint: str | None = None
    sign_indices: IndexList | None = None
    delta_constraints: tuple[tuple[frozenset[int], int], ...] = ()

    def __post_init__(self) -> None:
        if (self.sign_constraint is None) != (self.sign_indices is None):
            raise ModelError("sign_constraint and sign_indices must be given together")
        if self.sign_constraint is not None and self.sign_constraint not in _SIGNS:
            raise ModelError(f"unknown sign constraint {self.sign_constraint!r}")
        constraints = []
        for sites, bit in self.delta_constraints:
            key = frozenset(sites)
            if len(key) < 2:
                raise ModelError(f"delta constraint {set(sites) or '{}'} needs >= 2 sites")
            if bit not in (0, 1):
                raise ModelError(f"delta constraint bit must be 0 or 1, got {bit!r}")
            constraints.append((key, bit))
        constraints.sort(key=lambda kb: (len(kb[0]), sorted(kb[0]), kb[1]))
        object.__setattr__(self, "delta_constraints", tuple(constraints))

    @property
    def is_everywhere(self) -> bool:
        return self.sign_constraint is None and not self.delta_constraints


EVERYWHERE = EventPredicate()


def sign_event(indices: IndexList, sign: str) -> EventPredicate:
    """Configurations where the spin product of ``indices`` has the given sign."""
    return EventPredicate(sign_constraint=sign, sign_indices=indices)


def delta_event(sites: Iterable[int], bit: int) -> EventPredicate:
    """Configurations where the spins on ``sites`` are all equal (1) or not (0)."""
    return EventPredicate(delta_constraints=((frozenset(sites), bit),))


def conjoin(*events: EventPredicate) -> EventPredicate:
    """The conjunction of several predicates (at most one sign constraint)."""
    sign = None
    sign_indices = None
    deltas: list[tuple[frozenset[int], int]] = []
    for ev in events:
        if ev.sign_constraint is not None:
            if sign is not None and (sign, sign_indices) != (ev.sign_constraint, ev.sign_indices):
                raise ModelError("cannot conjoin two different sign constraints")
            sign, sign_indices = ev.sign_constraint, ev.sign_indices
        deltas.extend(ev.delta_constraints)
    return EventPredicate(sign, sign_indices, tuple(deltas))


@dataclass(frozen=True)
class SumResult:
    """An exact correlation sum plus enumeration counters."""

    value: Fraction
    configs_visited: int
    configs_matching: int


def spin_product(config: Configuration, indices: IndexList) -> Fraction:
    """Product of centered spins over ``indices`` with multiplicity (1 if empty)."""
    num = 1
    for i in indices:
        num *= config.doubled_spins[i - 1]
    return Fraction(num, 1 << len(indices))


def sign_class(config: Configuration, indices: IndexList) -> str:
    """Sign of the spin product; zero is only possible for odd ``q``."""
    value = spin_product(config, indices)
    if value > 0:
        return POSITIVE
    if value < 0:
        return NEGATIVE
    return ZERO


def centered_power_sum(q: int, m: int) -> Fraction:
    """Sum of the m-th powers of the centered spin values (0 for odd ``m``)."""
    if m < 0:
        raise ModelError(f"power must be >= 0, got {m}")
    if m % 2:
        return Fraction(0)
    dom = spin_domain(q)
    return Fraction(sum(u**m for u in dom.doubled_values), 1 << m)


def uniform_correlation_sum(model: Model, indices: IndexList) -> Fraction:
    """Closed-form correlation sum for a model with no active interaction.

    Under the uniform measure the sum factorizes over sites: zero whenever
    an odd group is present, otherwise ``q**(free sites)`` times the product
    of the per-site power sums at each even multiplicity.
    """
    if model.interactions.s != 0:
        raise ModelError(
            f"closed form requires s=0 (all weights 1), model has s={model.interactions.s}"
        )
    _check_indices(model, indices)
    if indices.odd_groups:
        return Fraction(0)
    value = Fraction(model.q) ** (model.n - len(indices.support))
    for site, mult in indices.multiplicity.items():
        value *= centered_power_sum(model.q, mult)
    return value


def _check_indices(model: Model, indices: IndexList) -> None:
    for i in indices:
        if i > model.n:
            raise ModelError(f"list entry {i} out of range 1..{model.n}")


def _check_event(model: Model, event: EventPredicate) -> None:
    if event.sign_indices is not None:
        _check_indices(model, event.sign_indices)
    for sites, _bit in event.delta_constraints:
        for i in sites:
            if i > model.n:
                raise ModelError(f"event site {i} out of range 1..{model.n}")


# --- optimized path ---------------------------------------------------------


def _compile(model: Model, requests: Sequence[tuple[IndexList, EventPredicate]]):
    """Precompute the per-scan tables shared by all chunks."""
    n, q = model.n, model.q
    dom = spin_domain(q).doubled_values

    # Watched subsets: the model's interactions first (they carry weight
    # factors), then any extra subsets referenced by event constraints.
    subset_index: dict[frozenset[int], int] = {}
    subset_sites: list[tuple[int, ...]] = []
    weight_pairs: list[tuple[int, int] | None] = []

    def watch(key: frozenset[int]) -> int:
        idx = subset_index.get(key)
        if idx is None:
            idx = len(subset_sites)
            subset_index[key] = idx
            subset_sites.append(tuple(sorted(i - 1 for i in key)))
            weight_pairs.append(None)
        return idx

    denominator_scale = 1
    for sites, x in model.interactions.items():
        j = watch(sites)
        frac = Fraction(x)
        weight_pairs[j] = (frac.numerator, frac.denominator)
        denominator_scale *= frac.denominator

    def pow_tables(indices: IndexList) -> tuple[tuple[int, tuple[int, ...]], ...]:
        return tuple(
            (site - 1, tuple(dom[d] ** mult for d in range(q)))
            for site, mult in sorted(indices.multiplicity.items())
        )

    compiled_requests = []
    for indices, event in requests:
        _check_indices(model, indices)
        _check_event(model, event)
        sign_terms = None
        if event.sign_indices is not None:
            sign_terms = pow_tables(event.sign_indices)
        delta_reqs = tuple(
            (watch(sites), bit) for sites, bit in event.delta_constraints
        )
        compiled_requests.append(
            (pow_tables(indices), delta_reqs, event.sign_constraint, sign_terms)
        )

    site_subsets: list[tuple[int, ...]] = [
        tuple(j for j, sites in enumerate(subset_sites) if s in sites) for s in range(n)
    ]
    return (
        n,
        q,
        dom,
        tuple(subset_sites),
        tuple(weight_pairs),
        tuple(site_subsets),
        tuple(compiled_requests),
        denominator_scale,
    )


def _scan_chunk(compiled, lo: int, hi: int) -> list[tuple[int, int]]:
    """Accumulate every request over configuration ranks [lo, hi)."""
    n, q, dom, subset_sites, weight_pairs, site_subsets, requests, _scale = compiled
    accs = [0] * len(requests)
    matches = [0] * len(requests)
    if hi <= lo:
        return list(zip(accs, matches))

    digits = [0] * n
    r = lo
    for s in range(n - 1, -1, -1):
        digits[s] = r % q
        r //= q

    deltas = []
    for sites in subset_sites:
        v = digits[sites[0]]
        deltas.append(1 if all(digits[t] == v for t in sites[1:]) else 0)
    weight = 1
    for j, pair in enumerate(weight_pairs):
        if pair is not None:
            weight *= pair[0] if deltas[j] else pair[1]

    last = q - 1
    for rank in range(lo, hi):
        for ri, (terms, delta_reqs, sign_kind, sign_terms) in enumerate(requests):
            ok = True
            for j, bit in delta_reqs:
                if deltas[j] != bit:
                    ok = False
                    break
            if ok and sign_kind is not None:
                sp = 1
                for s, tab in sign_terms:
                    sp *= tab[digits[s]]
                if sign_kind == POSITIVE:
                    ok = sp > 0
                elif sign_kind == NEGATIVE:
                    ok = sp < 0
                else:
                    ok = sp == 0
            if ok:
                matches[ri] += 1
                v = weight
                for s, tab in terms:
                    v *= tab[digits[s]]
                accs[ri] += v
        if rank + 1 == hi:
            break
        # Odometer step: site n-1 fastest; rolled-over sites reset to 0.
        s = n - 1
        while True:
            d = digits[s] + 1
            carry = d == q
            digits[s] = 0 if carry else d
            for j in site_subsets[s]:
                sites = subset_sites[j]
                v = digits[sites[0]]
                nd = 1 if all(digits[t] == v for t in sites[1:]) else 0
                if nd != deltas[j]:
                    deltas[j] = nd
                    pair = weight_pairs[j]
                    if pair is not None:
                        p, qd = pair
                        weight = weight * p // qd if nd else weight * qd // p
            if not carry:
                break
            s -= 1
    return list(zip(accs, matches))


def correlation_sums(
    model: Model,
    requests: Sequence[tuple[IndexList, EventPredicate]],
    workers: int = 1,
) -> list[SumResult]:
    """Evaluate several (index list, event) correlation sums in one scan.

    With ``workers > 1`` the rank space is split into that many contiguous
    chunks evaluated independently and merged in chunk order; the result is
    identical for every worker count.
    """
    model.require_finite()
    if workers < 1:
        raise ModelError(f"workers must be >= 1, got {workers}")
    compiled = _compile(model, requests)
    total = model.configuration_count
    scale = compiled[-1]
    bounds = [
        (k * total // workers, (k + 1) * total // workers) for k in range(workers)
    ]
    bounds = [(lo, hi) for lo, hi in bounds if hi > lo]
    if len(bounds) <= 1:
        partials = [_scan_chunk(compiled, 0, total)]
    else:
        with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
            partials = list(
                pool.map(lambda b: _scan_chunk(compiled, b[0], b[1]), bounds)
            )
    results = []
    for ri, (indices, _event) in enumerate(requests):
        acc = sum(part[ri][0] for part in partials)
        matching = sum(part[ri][1] for part in partials)
        value = Fraction(acc, scale << len(indices))
        results.append(SumResult(value, total, matching))
    return results


def correlation_sum(
    model: Model,
    indices: IndexList,
    event: EventPredicate = EVERYWHERE,
    workers: int = 1,
) -> SumResult:
    """Exact sum of spin product times weight over the configurations in ``event``."""
    return correlation_sums(model, [(indices, event)], workers)[0]


def expectation(model: Model, indices: IndexList, workers: int = 1) -> Fraction:
    """Thermal average of the spin product of ``indices``: full-space
    correlation sum over the partition function, both from a single scan."""
    num, den = correlation_sums(
        model, [(indices, EVERYWHERE), (EMPTY_LIST, EVERYWHERE)], workers
    )
    return num.value / den.value


# --- naive oracle path ------------------------------------------------------


def _event_holds(config: Configuration, event: EventPredicate) -> bool:
    if event.sign_constraint is not None:
        if sign_class(config, event.sign_indices) != event.sign_constraint:
            return False
    for sites, bit in event.delta_constraints:
        if generalized_delta(config, sites) != bit:
            return False
    return True


def correlation_sum_naive(
    model: Model, indices: IndexList, event: EventPredicate = EVERYWHERE
) -> SumResult:
    """Reference evaluation: full per-configuration recomputation in Fractions.

    This path stays independent of the incremental kernel and serves as its
    oracle in the test suite.
    """
    model.require_finite()
    _check_indices(model, indices)
    _check_event(model, event)
    total = Fraction(0)
    visited = 0
    matching = 0
    for config in all_configurations(model):
        visited += 1
        if _event_holds(config, event):
            matching += 1
            total += spin_product(config, indices) * config_weight(config, model)
    return SumResult(total, visited, matching)
