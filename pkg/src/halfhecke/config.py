"""Run configuration, enumeration caps and the package's error types."""

from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_CAP = 10**8


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class CapExceeded(DomainError):
    """A brute-force enumeration would exceed its configured size."""


class CoverageError(DomainError):
    """A coefficient source was asked for a value it cannot supply."""


def check_cap(size: int, cap: int, what: str) -> None:
    if size > cap:
        raise CapExceeded(f"{what}: {size} exceeds cap {cap}")


@dataclass(frozen=True)
class RunConfig:
    """Settings for the verification suites and the CLI."""

    cap: int = DEFAULT_CAP
    primes: tuple[int, ...] = (3, 5)
    cache_dir: str | None = None
    out: str | None = None
    gauss_max_dim: int = 4
    alpha_max_dim: int = 3
    path_bound: int = 12
    eichler_bound: int = 8
    eigen_t_max: int = 20
    eigen_primes: tuple[int, ...] = (3, 5, 7)
    invariance_samples: int = 20
    extras: dict = field(default_factory=dict)


@dataclass
class Report:
    """Outcome of a verification: a pass flag plus per-item records."""

    name: str
    passed: bool = True
    checked: int = 0
    items: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    seconds: float | None = None

    def record(self, ok: bool, item: dict, keep: bool = True) -> None:
        self.checked += 1
        if keep:
            self.items.append(item)
        if not ok:
            self.passed = False
            self.failures.append(item)

    def merge(self, other: "Report") -> None:
        self.checked += other.checked
        self.items.extend(other.items)
        self.failures.extend(other.failures)
        self.passed = self.passed and other.passed

    def to_json(self) -> dict:
        out = {"name": self.name, "pass": self.passed, "checked": self.checked}
        out.update(self.data)
        if self.items:
            out["per_coefficient"] = self.items
        if self.failures:
            out["failures"] = self.failures[:20]
        return out
