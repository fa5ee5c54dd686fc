"""Deterministic JSON for exact integers and rationals."""
import json
from fractions import Fraction

SAFE_INT = 2**53


def exact(x):
    """Integers beyond 2**53 become decimal strings; rationals become [p, q]."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x if -SAFE_INT <= x <= SAFE_INT else str(x)
    if isinstance(x, Fraction):
        return [exact(x.numerator), exact(x.denominator)]
    if isinstance(x, dict):
        return {k: exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(exact(obj), separators=(",", ":"), ensure_ascii=True)
