"""Domain types for the generalized q-state Potts model with centered spins.

Everything in this package is exact: probabilities, weights and expectations
are ``fractions.Fraction`` values, spins are stored as doubled integers, and
no floating point enters any computation.

Conventions shared by every module:

* Sites are 1-indexed in all public inputs and outputs (the enumeration
  kernel converts to 0-indexed arrays internally).
* A spin at a site with ``q`` states takes the centered values
  ``(2k - (q+1))/2`` for label ``k`` in ``1..q``.  We store the *doubled*
  value ``u = 2k - (q+1)``, an integer for both parities of ``q``; a product
  of ``m`` centered spins is the integer product of the doubled values
  divided by ``2**m``, performed once per product.
* Coupling weights ``x_A`` are the multiplicative Boltzmann factors an
  interaction contributes when all its spins agree.  They are supplied
  directly as exact rationals ``>= 1`` (or ``math.inf``), never as float
  log-couplings.
* All types are immutable after construction and safe to share between
  concurrent workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Union

__all__ = [
    "Configuration",
    "Coupling",
    "INFINITY",
    "IndexList",
    "InfiniteCouplingError",
    "InteractionTable",
    "Model",
    "ModelError",
    "SpinDomain",
    "build_model",
    "is_infinite",
    "spin_domain",
    "spin_value",
]

#: Sentinel for an infinitely strong coupling (hard constraint that the
#: interaction's spins agree).  Compares greater than every Fraction.
INFINITY = math.inf

#: A coupling weight: an exact rational >= 1, or INFINITY.
Coupling = Union[Fraction, float]


class ModelError(ValueError):
    """A model, index list, or configuration violates a structural invariant."""


class InfiniteCouplingError(ModelError):
    """An enumeration was attempted on a model that still contains an
    infinite coupling; resolve it first (see ``contraction``)."""


def is_infinite(x: Coupling) -> bool:
    return x == INFINITY


@dataclass(frozen=True)
class SpinDomain:
    """The centered value set of a q-state spin, in doubled-integer form.

    ``doubled_values[k-1] == 2*k - (q+1)`` for label ``k`` in ``1..q``; the
    represented centered value is half of that.  The list is symmetric about
    zero with step 2: all entries even (0 included) for odd ``q``, all odd
    for even ``q``.
    """

    q: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ModelError(f"spin count q must be >= 2, got {self.q}")

    @property
    def doubled_values(self) -> tuple[int, ...]:
        return tuple(2 * k - (self.q + 1) for k in range(1, self.q + 1))

    @property
    def centered_values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(u, 2) for u in self.doubled_values)

    def value(self, k: int) -> Fraction:
        """Centered value of the spin with label ``k`` (1-indexed)."""
        if not 1 <= k <= self.q:
            raise ModelError(f"spin label {k} out of range 1..{self.q}")
        return Fraction(2 * k - (self.q + 1), 2)

    def label_of_doubled(self, u: int) -> int:
        """Inverse of ``doubled_values``: the 1-indexed label carrying ``u``."""
        k, rem = divmod(u + self.q + 1, 2)
        if rem or not 1 <= k <= self.q:
            raise ModelError(f"{u} is not a doubled spin value for q={self.q}")
        return k


@lru_cache(maxsize=None)
def spin_domain(q: int) -> SpinDomain:
    return SpinDomain(q)


def spin_value(q: int, k: int) -> Fraction:
    """Centered value of spin label ``k`` in a q-state domain."""
    return spin_domain(q).value(k)


@dataclass(frozen=True)
class Configuration:
    """An assignment of one spin to every site, stored as doubled values."""

    doubled_spins: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "doubled_spins", tuple(self.doubled_spins))

    def __len__(self) -> int:
        return len(self.doubled_spins)

    @classmethod
    def from_labels(cls, labels: Iterable[int], q: int) -> "Configuration":
        """Build from uncentered labels in ``1..q``."""
        dom = spin_domain(q)
        vals = []
        for k in labels:
            if not 1 <= k <= q:
                raise ModelError(f"spin label {k} out of range 1..{q}")
            vals.append(dom.doubled_values[k - 1])
        return cls(tuple(vals))

    def labels(self, q: int) -> tuple[int, ...]:
        """Uncentered labels in ``1..q`` of every site."""
        dom = spin_domain(q)
        return tuple(dom.label_of_doubled(u) for u in self.doubled_spins)

    def centered_values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(u, 2) for u in self.doubled_spins)


@dataclass(frozen=True)
class IndexList:
    """A multiset of site indices; the exponent pattern of a spin product.

    ``entries`` is kept sorted.  The support is partitioned by multiplicity
    parity into odd and even groups; a list with no odd group yields a
    pointwise nonnegative spin product.
    """

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(sorted(self.entries))
        for i in entries:
            if not isinstance(i, int) or i < 1:
                raise ModelError(f"index list entries must be positive integers, got {i!r}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *entries: int) -> "IndexList":
        return cls(entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.entries)

    @property
    def multiplicity(self) -> Mapping[int, int]:
        counts: dict[int, int] = {}
        for i in self.entries:
            counts[i] = counts.get(i, 0) + 1
        return MappingProxyType(counts)

    @property
    def odd_groups(self) -> frozenset[int]:
        return frozenset(i for i, m in self.multiplicity.items() if m % 2)

    @property
    def even_groups(self) -> frozenset[int]:
        return frozenset(i for i, m in self.multiplicity.items() if m % 2 == 0)

    @property
    def even_only(self) -> bool:
        return not self.odd_groups

    def concat(self, other: "IndexList") -> "IndexList":
        """Multiset union: the list whose spin product is the product of both."""
        return IndexList(self.entries + other.entries)

    def relabel(self, site_map: Mapping[int, int]) -> "IndexList":
        return IndexList(tuple(site_map[i] for i in self.entries))

    def __str__(self) -> str:
        return "[" + ",".join(str(i) for i in self.entries) + "]"


EMPTY_LIST = IndexList(())


def _as_coupling(x) -> Coupling:
    if is_infinite(x):
        return INFINITY
    if isinstance(x, float):
        raise ModelError(
            f"coupling {x!r} is a float; supply an exact Fraction, int, or INFINITY"
        )
    return Fraction(x)


@dataclass(frozen=True)
class InteractionTable:
    """Map from site subsets ``A`` (``|A| >= 2``) to coupling weights ``x_A``.

    Every weight is an exact rational ``>= 1`` (ferromagnetic) or INFINITY.
    ``s`` counts the strictly active interactions (``x_A > 1``).
    """

    couplings: Mapping[frozenset[int], Coupling]

    def __post_init__(self) -> None:
        table: dict[frozenset[int], Coupling] = {}
        for sites, x in dict(self.couplings).items():
            key = frozenset(sites)
            if len(key) < 2:
                raise ModelError(f"interaction {set(sites) or '{}'} must contain at least 2 sites")
            if not all(isinstance(i, int) and i >= 1 for i in key):
                raise ModelError(f"interaction sites must be positive integers: {set(sites)}")
            x = _as_coupling(x)
            if x < 1:
                raise ModelError(f"coupling for {sorted(key)} must be >= 1, got {x}")
            table[key] = x
        object.__setattr__(self, "couplings", MappingProxyType(table))

    @property
    def s(self) -> int:
        """Number of interactions with weight strictly greater than 1."""
        return sum(1 for x in self.couplings.values() if x > 1)

    @property
    def has_infinite(self) -> bool:
        return any(is_infinite(x) for x in self.couplings.values())

    def __len__(self) -> int:
        return len(self.couplings)

    def items(self):
        """Deterministically ordered (sites, weight) pairs."""
        return sorted(self.couplings.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))


EMPTY_TABLE = InteractionTable({})


@dataclass(frozen=True)
class Model:
    """A full problem instance: lattice size, spin count, and interactions."""

    n: int
    q: int
    interactions: InteractionTable = EMPTY_TABLE

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ModelError(f"site count n must be >= 1, got {self.n}")
        if self.q < 2:
            raise ModelError(f"spin count q must be >= 2, got {self.q}")
        for sites in self.interactions.couplings:
            for i in sites:
                if i > self.n:
                    raise ModelError(f"interaction site {i} out of range 1..{self.n}")

    @property
    def domain(self) -> SpinDomain:
        return spin_domain(self.q)

    @property
    def configuration_count(self) -> int:
        return self.q**self.n

    @property
    def sites(self) -> range:
        return range(1, self.n + 1)

    def validate_configuration(self, config: Configuration) -> None:
        if len(config) != self.n:
            raise ModelError(
                f"configuration has {len(config)} sites, model has {self.n}"
            )
        legal = set(self.domain.doubled_values)
        for u in config.doubled_spins:
            if u not in legal:
                raise ModelError(f"{u} is not a doubled spin value for q={self.q}")

    def require_finite(self) -> None:
        if self.interactions.has_infinite:
            raise InfiniteCouplingError(
                "model contains an infinite coupling; resolve it with "
                "contraction.resolve_infinite_couplings before enumerating"
            )

    def with_coupling(self, sites: Iterable[int], x) -> "Model":
        """A copy of this model with one interaction added."""
        key = frozenset(sites)
        if key in self.interactions.couplings:
            raise ModelError(f"duplicate interaction {sorted(key)}")
        table = dict(self.interactions.couplings)
        table[key] = x
        return Model(self.n, self.q, InteractionTable(table))


def build_model(n: int, q: int, couplings: Iterable[tuple[Iterable[int], object]] = ()) -> Model:
    """Validate and build a model from ``(site-set, weight)`` pairs.

    Rejects out-of-range sites, interactions with fewer than two sites,
    weights below 1, and duplicate site sets.
    """
    table: dict[frozenset[int], object] = {}
    for sites, x in couplings:
        key = frozenset(sites)
        if key in table:
            raise ModelError(f"duplicate interaction {sorted(key)}")
        table[key] = x
    return Model(n, q, InteractionTable(table))
