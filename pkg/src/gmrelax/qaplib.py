"""QAPLIB benchmark ingestion: .dat parsing, costs, and the 16-instance suite manifest."""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import GmError, Permutation, ShapeMismatchError


class QaplibParseError(GmError, ValueError):
    """A QAPLIB .dat file is malformed."""


@dataclass(frozen=True, eq=False)
class QapInstance:
    """One quadratic assignment instance: n, flow matrix, distance matrix."""

    name: str
    n: int
    flow: np.ndarray
    distance: np.ndarray

    def __post_init__(self):
        for label, m in (("flow", self.flow), ("distance", self.distance)):
            m = np.asarray(m, dtype=float)
            if m.shape != (self.n, self.n):
                raise ShapeMismatchError(f"{label} matrix must be {self.n} x {self.n}")
            if not np.all(np.isfinite(m)) or np.any(m < 0):
                raise ValueError(f"{label} matrix must be finite and nonnegative")
            m = m.copy()
            m.flags.writeable = False
            object.__setattr__(self, label, m)


def parse_qaplib(text: str, name: str = "") -> QapInstance:
    """Parse QAPLIB .dat content: n, then n^2 flow entries, then n^2 distance entries.

    Tolerant of arbitrary line breaks and whitespace runs; raises
    :class:`QaplibParseError` on a bad token (with its position) or a token
    count other than 1 + 2 n^2.
    """
    tokens = text.split()
    if not tokens:
        raise QaplibParseError(f"{name or 'input'}: empty file")
    values = []
    for pos, tok in enumerate(tokens):
        try:
            values.append(float(tok))
        except ValueError:
            raise QaplibParseError(
                f"{name or 'input'}: non-numeric token {tok!r} at position {pos}"
            ) from None
    n = int(values[0])
    if n < 1 or values[0] != n:
        raise QaplibParseError(f"{name or 'input'}: invalid dimension token {values[0]}")
    expected = 1 + 2 * n * n
    if len(values) != expected:
        raise QaplibParseError(
            f"{name or 'input'}: expected {expected} tokens for n={n}, found {len(values)}"
        )
    body = np.array(values[1:])
    flow = body[: n * n].reshape(n, n)
    distance = body[n * n :].reshape(n, n)
    return QapInstance(name=name, n=n, flow=flow, distance=distance)


def serialize_qaplib(instance: QapInstance) -> str:
    """Write an instance back to QAPLIB .dat text (round-trips through the parser)."""

    def fmt(m: np.ndarray) -> str:
        rows = []
        for row in m:
            rows.append(" ".join(repr(int(v)) if v == int(v) else repr(v) for v in row))
        return "\n".join(rows)

    return f"{instance.n}\n\n{fmt(instance.flow)}\n\n{fmt(instance.distance)}\n"


def qap_cost(instance: QapInstance, p: Permutation) -> float:
    """Classical QAP objective sum_{i,j} flow[i, j] * distance[p(i), p(j)]."""
    if p.n != instance.n:
        raise ShapeMismatchError(f"dimension mismatch: {instance.n} vs {p.n}")
    m = p.map
    return float(np.sum(instance.flow * instance.distance[np.ix_(m, m)]))


def qap_cost_frobenius(instance: QapInstance, p: Permutation) -> float:
    """The ||A P - P B||_F^2 form of the same solution, A = flow, B = distance.

    Uses the row-action matrix of p so the expansion identity holds:
    value = ||flow||^2 + ||distance||^2 - 2 * qap_cost(instance, p).
    """
    if p.n != instance.n:
        raise ShapeMismatchError(f"dimension mismatch: {instance.n} vs {p.n}")
    r = p.as_matrix().T
    return float(np.sum((instance.flow @ r - r @ instance.distance) ** 2))


def load_suite(directory) -> tuple[list[QapInstance], list[tuple[str, str]]]:
    """Parse every .dat file in a directory, sorted by name.

    Returns (instances, skipped) where ``skipped`` lists (filename, reason)
    for files that failed to parse.
    """
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"no such directory: {d}")
    instances: list[QapInstance] = []
    skipped: list[tuple[str, str]] = []
    for path in sorted(d.glob("*.dat")):
        try:
            instances.append(parse_qaplib(path.read_text(), name=path.stem))
        except (QaplibParseError, ValueError, ShapeMismatchError) as exc:
            skipped.append((path.name, str(exc)))
    return instances, skipped


def benchmark_manifest() -> list[str]:
    """Names of the 16 benchmark instances in the checked-in manifest."""
    text = (
        importlib.resources.files("gmrelax")
        .joinpath("data/qaplib_manifest.txt")
        .read_text()
    )
    return [line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")]
