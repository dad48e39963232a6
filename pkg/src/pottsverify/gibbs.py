"""Configuration weights, the partition function, and thermal averages.

The Hamiltonian is never materialized: a configuration's weight is the
product of the coupling weights of its satisfied interactions (the empty
product is 1), and the Gibbs probability is that weight over the partition
function.  Everything here recomputes from scratch per configuration and is
deliberately simple; the incremental kernel lives in ``enumeration``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .model import Configuration, Model, ModelError

__all__ = [
    "WeightedConfiguration",
    "all_configurations",
    "config_weight",
    "generalized_delta",
    "gibbs_probability",
    "partition_function",
    "thermal_average",
    "weighted_configurations",
]


@dataclass(frozen=True)
class WeightedConfiguration:
    """A configuration paired with its weight; the weight is at least 1
    whenever every coupling is (each factor of the product is)."""

    config: Configuration
    weight: Fraction


def generalized_delta(config: Configuration, sites: Iterable[int]) -> int:
    """1 if all spins at ``sites`` are equal, else 0.

    ``sites`` must contain at least two distinct 1-indexed sites within the
    configuration.
    """
    key = frozenset(sites)
    if len(key) < 2:
        raise ModelError(f"interaction {set(key) or '{}'} must contain at least 2 sites")
    for i in key:
        if not 1 <= i <= len(config):
            raise ModelError(f"site {i} out of range 1..{len(config)}")
    values = {config.doubled_spins[i - 1] for i in key}
    return 1 if len(values) == 1 else 0


def all_configurations(model: Model) -> Iterator[Configuration]:
    """All ``q**n`` configurations, mixed-radix order with site n fastest."""
    dom = model.domain.doubled_values
    for combo in itertools.product(dom, repeat=model.n):
        yield Configuration(combo)


def config_weight(config: Configuration, model: Model) -> Fraction:
    """Product of the weights of all interactions satisfied by ``config``."""
    model.require_finite()
    if len(config) != model.n:
        raise ModelError(f"configuration has {len(config)} sites, model has {model.n}")
    w = Fraction(1)
    spins = config.doubled_spins
    for sites, x in model.interactions.couplings.items():
        it = iter(sites)
        v = spins[next(it) - 1]
        if all(spins[i - 1] == v for i in it):
            w *= x
    return w


def weighted_configurations(model: Model) -> Iterator[WeightedConfiguration]:
    """Every configuration paired with its weight, in enumeration order."""
    model.require_finite()
    for config in all_configurations(model):
        yield WeightedConfiguration(config, config_weight(config, model))


def partition_function(model: Model) -> Fraction:
    """Sum of configuration weights over all of the configuration space."""
    return sum((wc.weight for wc in weighted_configurations(model)), Fraction(0))


def gibbs_probability(config: Configuration, model: Model) -> Fraction:
    model.require_finite()
    model.validate_configuration(config)
    return config_weight(config, model) / partition_function(model)


def thermal_average(
    f: Callable[[Configuration], Fraction], model: Model
) -> Fraction:
    """Expectation of ``f`` under the Gibbs probability, in one pass."""
    num = Fraction(0)
    den = Fraction(0)
    for wc in weighted_configurations(model):
        num += f(wc.config) * wc.weight
        den += wc.weight
    return num / den
