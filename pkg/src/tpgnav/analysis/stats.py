"""Two-tailed sign test over episode outcomes."""

from __future__ import annotations

import math
from typing import Iterable

EXACT_LIMIT = 1000


def sign_counts(returns: Iterable[float]) -> tuple[int, int]:
    """(successes, failures): positive vs negative returns; zeros dropped."""
    successes = failures = 0
    for r in returns:
        if r > 0.0:
            successes += 1
        elif r < 0.0:
            failures += 1
    return successes, failures


def sign_test(returns: Iterable[float]) -> float:
    """p-value of the two-tailed sign test against equal proportions.

    Exact binomial up to n=1000 observations, normal approximation with
    continuity correction above. Returns NaN when every outcome is zero
    (the test is undefined).
    """
    successes, failures = sign_counts(returns)
    n = successes + failures
    if n == 0:
        return math.nan
    m = min(successes, failures)
    if n <= EXACT_LIMIT:
        # 2 * P(X <= m), X ~ Binomial(n, 1/2), in exact integer arithmetic
        tail = sum(math.comb(n, k) for k in range(m + 1))
        p = 2.0 * tail / float(2**n)
    else:
        z = (m + 0.5 - 0.5 * n) / (0.5 * math.sqrt(n))
        p = 2.0 * 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))
    return min(p, 1.0)
