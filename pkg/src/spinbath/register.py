"""Site bookkeeping for the central-spin register.

Sites are numbered from 1 and laid out in a fixed order: the two system
spins first, then the bath-1 spins, then the bath-2 spins. Every Kronecker
product in the package follows this order, with site 1 as the leftmost
(most significant) factor.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable

SYSTEM = "system"
BATH1 = "bath1"
BATH2 = "bath2"
ROLES = (SYSTEM, BATH1, BATH2)


class RegisterError(ValueError):
    """Raised for malformed registers or unknown site ids."""


@dataclass(frozen=True)
class SpinRegister:
    """Ordered list of ``(site_id, role)`` pairs, each a spin-1/2."""

    sites: tuple[tuple[int, str], ...]

    def __post_init__(self):
        ids = [s for s, _ in self.sites]
        if ids != list(range(1, len(ids) + 1)):
            raise RegisterError(f"site ids must be 1..n in order, got {ids}")
        roles = [r for _, r in self.sites]
        for r in roles:
            if r not in ROLES:
                raise RegisterError(f"unknown role {r!r}")
        if roles != sorted(roles, key=ROLES.index):
            raise RegisterError("sites must be ordered system, bath1, bath2")
        if roles.count(SYSTEM) != 2:
            raise RegisterError("register needs exactly 2 system sites")
        if roles.count(BATH1) < 1 or roles.count(BATH2) < 1:
            raise RegisterError("register needs at least one site in each bath")

    @classmethod
    def build(cls, n_bath1: int = 2, n_bath2: int = 1) -> "SpinRegister":
        roles = [SYSTEM, SYSTEM] + [BATH1] * n_bath1 + [BATH2] * n_bath2
        return cls(tuple((i + 1, r) for i, r in enumerate(roles)))

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def dims(self) -> tuple[int, ...]:
        return (2,) * self.n_sites

    @property
    def dim(self) -> int:
        return 2**self.n_sites

    def sites_with_role(self, role: str) -> tuple[int, ...]:
        return tuple(s for s, r in self.sites if r == role)

    @property
    def system_sites(self) -> tuple[int, ...]:
        return self.sites_with_role(SYSTEM)

    @property
    def bath1_sites(self) -> tuple[int, ...]:
        return self.sites_with_role(BATH1)

    @property
    def bath2_sites(self) -> tuple[int, ...]:
        return self.sites_with_role(BATH2)

    @property
    def bath_sites(self) -> tuple[int, ...]:
        return self.bath1_sites + self.bath2_sites

    def role(self, site: int) -> str:
        return self.sites[self.position(site)][1]

    def position(self, site: int) -> int:
        """0-based tensor-factor index of ``site``."""
        try:
            idx = operator.index(site)
        except TypeError:
            raise RegisterError(f"unknown site {site!r}") from None
        if isinstance(site, bool) or not 1 <= idx <= self.n_sites:
            raise RegisterError(f"unknown site {site!r}")
        return idx - 1

    def positions(self, sites: Iterable[int]) -> list[int]:
        return [self.position(s) for s in sites]


DEFAULT_REGISTER = SpinRegister.build(2, 1)
