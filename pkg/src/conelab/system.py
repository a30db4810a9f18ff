"""System specification types.

A bilinear control system dx/dt = Ax + uBx with traceless A, B, together
with its control model for u and the RNG seed that makes every analysis
reproducible.  Semigroup elements are finite products of exp(t(A + uB))
with t >= 0, encoded as words of (t, u) letters applied left to right.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .linalg import mat_exp

TRACE_TOL = 1e-9

UNBOUNDED = "unbounded"
FINITE_SET = "set"
INTERVAL = "interval"


@dataclass(frozen=True)
class UModel:
    """Control-value model: the whole real line, a finite set, or an interval."""

    kind: str
    values: tuple[float, ...] = ()
    lo: float = 0.0
    hi: float = 0.0

    def __post_init__(self):
        if self.kind == UNBOUNDED:
            return
        if self.kind == FINITE_SET:
            if not self.values:
                raise InputError("finite-set control model needs at least one value")
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))
            return
        if self.kind == INTERVAL:
            if not (self.lo < self.hi):
                raise InputError(f"interval control model needs lo < hi, got [{self.lo}, {self.hi}]")
            return
        raise InputError(f"unknown control model kind {self.kind!r}")

    def is_symmetric(self) -> bool:
        if self.kind == UNBOUNDED:
            return True
        if self.kind == FINITE_SET:
            return set(self.values) == {-v for v in self.values}
        return self.lo == -self.hi

    def mirrored(self) -> "UModel":
        """The model of -u for u in this model."""
        if self.kind == UNBOUNDED:
            return self
        if self.kind == FINITE_SET:
            return UModel(FINITE_SET, tuple(sorted(-v for v in self.values)))
        return UModel(INTERVAL, lo=-self.hi, hi=-self.lo)

    def nearest(self, u: float) -> float:
        """The admissible control value closest to u."""
        if self.kind == UNBOUNDED:
            return u
        if self.kind == FINITE_SET:
            return min(self.values, key=lambda v: abs(v - u))
        return min(max(u, self.lo), self.hi)


UNBOUNDED_MODEL = UModel(UNBOUNDED)


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """The bilinear system under study."""

    d: int
    A: np.ndarray
    B: np.ndarray
    u_model: UModel = UNBOUNDED_MODEL
    rng_seed: int = 42

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        B = np.asarray(self.B, dtype=float)
        if self.d < 2:
            raise InputError(f"dimension must be at least 2, got {self.d}")
        for name, M in (("A", A), ("B", B)):
            if M.shape != (self.d, self.d):
                raise InputError(f"{name} must be {self.d}x{self.d}, got {M.shape}")
            if not np.all(np.isfinite(M)):
                raise InputError(f"{name} has non-finite entries")
            if abs(np.trace(M)) > TRACE_TOL:
                raise InputError(
                    f"{name} must be traceless within {TRACE_TOL}, trace is {np.trace(M):.3e}")
        A.setflags(write=False)
        B.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    def generator(self, u: float) -> np.ndarray:
        return self.A + u * self.B


@dataclass(frozen=True)
class SemigroupWord:
    """A finite product of flow arcs exp(t_i (A + u_i B)), applied in order."""

    letters: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.letters:
            raise InputError("a semigroup word needs at least one letter")
        clean = []
        for t, u in self.letters:
            t, u = float(t), float(u)
            if t < 0:
                raise InputError(f"letter times must be nonnegative, got {t}")
            clean.append((t, u))
        object.__setattr__(self, "letters", tuple(clean))

    def matrix(self, spec: SystemSpec) -> np.ndarray:
        """The group element: later letters multiply on the left."""
        g = np.eye(spec.d)
        for t, u in self.letters:
            g = mat_exp(t * spec.generator(u)) @ g
        return g

    def concat(self, other: "SemigroupWord") -> "SemigroupWord":
        return SemigroupWord(self.letters + other.letters)


def word(*letters) -> SemigroupWord:
    return SemigroupWord(tuple(letters))


IDENTITY_WORD = word((0.0, 0.0))


def inverse_system(spec: SystemSpec) -> SystemSpec:
    """The system whose semigroup consists of the inverses of this one's.

    Inverting exp(t(A + uB)) gives exp(t(-A + (-u)B)), so A flips sign and
    the control set is mirrored; for a symmetric control model the mirror
    is the model itself and only A changes.
    """
    return SystemSpec(d=spec.d, A=-np.asarray(spec.A), B=np.asarray(spec.B),
                      u_model=spec.u_model.mirrored(), rng_seed=spec.rng_seed)
