from fractions import Fraction

import pytest

from pottsverify import IndexList, build_model


@pytest.fixture
def worked_example_model():
    """n=3, q=3 with every possible interaction; x12 = 1, so s = 3."""
    return build_model(
        3,
        3,
        [
            ({1, 2}, 1),
            ({1, 3}, Fraction(2)),
            ({2, 3}, Fraction(3)),
            ({1, 2, 3}, Fraction(5)),
        ],
    )


@pytest.fixture
def pair_model_q2():
    """n=2, q=2 with a single coupling x_{12} = 3."""
    return build_model(2, 2, [({1, 2}, 3)])


@pytest.fixture
def pair_model_q3():
    """n=2, q=3 with a single coupling x_{12} = 2."""
    return build_model(2, 3, [({1, 2}, 2)])


def index_list(*entries: int) -> IndexList:
    return IndexList(tuple(entries))
