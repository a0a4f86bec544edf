"""Model specifications shared by every module."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["Family", "Boundary", "Topology", "ModelSpec", "ResourceError", "parse_model"]


class ResourceError(RuntimeError):
    """A configured size cap would be exceeded."""


class Family(enum.Enum):
    S21 = "s21"
    S31 = "s31"
    S32_CASE1 = "s32c1"
    S32_CASE2 = "s32c2"


class Boundary(enum.Enum):
    ORIGINAL = "original"
    CORRECTED = "corrected"


class Topology(enum.Enum):
    OPEN = "open"
    IDENTIFIED = "identified"   # open Hamiltonian on states with c_0 = c_n
    RING = "ring"               # bulk terms only, wrapping around


@dataclass(frozen=True)
class ModelSpec:
    """A walk model and its Hamiltonian parameters.

    ``lambda1`` weights the (3,1,3)-(3,2,3) wedge move, ``lambda2`` the
    balancing penalties; both are only read for S31.  ``mu`` weights the
    color flip of S32 case 2.
    """

    family: Family
    lambda1: Fraction = Fraction(1)
    lambda2: Fraction = Fraction(0)
    mu: Fraction = Fraction(1)
    boundary: Boundary = Boundary.CORRECTED
    topology: Topology = Topology.OPEN

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "mu"):
            v = Fraction(getattr(self, name))
            if v < 0:
                raise ValueError(f"{name} must be nonnegative")
            object.__setattr__(self, name, v)
        if self.family is Family.S31 and self.lambda1 > 0 and self.lambda2 > 0:
            raise ValueError("lambda1 > 0 and lambda2 > 0 together break frustration freeness")

    # constructors -----------------------------------------------------
    @classmethod
    def s21(cls, **kw):
        return cls(Family.S21, **kw)

    @classmethod
    def s31(cls, lam=0, **kw):
        """Single-parameter S31: lam = 0 keeps the wedge move, lam > 0 balances."""
        lam = Fraction(lam)
        if lam < 0:
            raise ValueError("lambda must be nonnegative")
        if lam == 0:
            return cls(Family.S31, Fraction(1), Fraction(0), **kw)
        return cls(Family.S31, Fraction(0), lam, **kw)

    @classmethod
    def s31_phase(cls, lambda1, lambda2, **kw):
        return cls(Family.S31, Fraction(lambda1), Fraction(lambda2), **kw)

    @classmethod
    def s32(cls, case: int, mu=1, **kw):
        fam = Family.S32_CASE1 if case == 1 else Family.S32_CASE2
        return cls(fam, mu=Fraction(mu), **kw)

    # properties -------------------------------------------------------
    @property
    def k(self) -> int:
        return 2 if self.family is Family.S21 else 3

    @property
    def colored(self) -> bool:
        return self.family in (Family.S32_CASE1, Family.S32_CASE2)

    @property
    def balanced(self) -> bool:
        """True when ascents into 3 must return to their origin (S31, lambda2 > 0)."""
        return self.family is Family.S31 and self.lambda2 > 0

    @property
    def phase_two(self) -> bool:
        return self.family is Family.S31 and self.lambda1 == 0 and self.lambda2 == 0

    def walk_key(self) -> str:
        """Identifier of the walk semantics (ignores Hamiltonian-only knobs)."""
        if self.family is Family.S31:
            return "s31-bal" if self.balanced else "s31"
        return self.family.value

    def key(self) -> str:
        parts = [self.family.value]
        if self.family is Family.S31:
            parts += [f"l1={self.lambda1}", f"l2={self.lambda2}"]
        if self.family is Family.S32_CASE2:
            parts.append(f"mu={self.mu}")
        parts += [self.boundary.value, self.topology.value]
        return ",".join(parts)

    def __str__(self):
        return self.key()


def parse_model(name: str, lam=None, lambda1=None, lambda2=None, mu=None,
                boundary: str = "corrected", topology: str = "open") -> ModelSpec:
    """Build a ModelSpec from CLI-style strings."""
    kw = dict(boundary=Boundary(boundary), topology=Topology(topology))
    name = name.lower()
    if name == "s21":
        return ModelSpec.s21(**kw)
    if name == "s31":
        if lambda1 is not None or lambda2 is not None:
            return ModelSpec.s31_phase(Fraction(lambda1 or 0), Fraction(lambda2 or 0), **kw)
        return ModelSpec.s31(Fraction(lam or 0), **kw)
    if name in ("s32c1", "s32case1"):
        return ModelSpec.s32(1, **kw)
    if name in ("s32c2", "s32case2"):
        return ModelSpec.s32(2, mu=Fraction(1 if mu is None else mu), **kw)
    raise ValueError(f"unknown model {name!r}")
