"""Acceptance criteria, each run at its stated size and tolerance.

Every run prints one "[PASS|FAIL] criterion N: ..." line; the lines are
collected and repeated in the terminal summary.
"""
import pytest

from dioph_lab import campaigns
from oracles import naive_lambda1_perp_sq, naive_shortest_grid_vector, naive_successive_minima

RESULTS = []


def _check(result):
    line = result.line()
    print(line)
    RESULTS.append(line)
    assert result.passed, line


@pytest.mark.slow
@pytest.mark.parametrize("criterion", campaigns.ALL, ids=lambda f: f.__name__)
def test_criterion(criterion):
    _check(criterion())


@pytest.mark.slow
def test_criterion9():
    def perp(x, alpha):
        return naive_lambda1_perp_sq(x.p, x.q, alpha)

    _check(campaigns.criterion9(naive_successive_minima, naive_shortest_grid_vector, perp))
