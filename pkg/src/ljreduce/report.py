"""Report serialization: deterministic JSON with fixed float formatting.

Floats are rounded to 12 significant digits and dict insertion order is
preserved, so a report is reproducible byte for byte for a fixed problem
specification and seed.  Complex matrices serialize as nested lists of
[re, im] pairs.
"""

import json

import numpy as np

SIGNIFICANT_DIGITS = 12


def round_sig(x: float) -> float:
    if x == 0 or not np.isfinite(x):
        return float(x)
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [
        [[round_sig(float(v.real)), round_sig(float(v.imag))] for v in row]
        for row in m
    ]


def matrix_from_json(rows, n: int | None = None) -> np.ndarray:
    m = np.array([[complex(e[0], e[1]) for e in row] for row in rows])
    if n is not None and m.shape != (n, n):
        raise ValueError(f"matrix shape {m.shape} does not match n={n}")
    return m


def sanitize(obj):
    """Recursively convert to JSON-ready values with rounded floats."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_sig(float(obj))
    if isinstance(obj, complex):
        return [round_sig(obj.real), round_sig(obj.imag)]
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2:
            return matrix_to_json(obj)
        return [sanitize(v) for v in obj.tolist()]
    return obj


def render(report: dict) -> str:
    return json.dumps(sanitize(report), indent=2)
