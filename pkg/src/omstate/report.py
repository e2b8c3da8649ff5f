"""Per-axiom pass/fail reports with deterministic witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class AxiomResult:
    name: str
    passed: bool
    witness: tuple | None = None
    diagnostic: bool = False


@dataclass
class AxiomReport:
    subject: str
    results: list[AxiomResult] = field(default_factory=list)
    names: tuple[str, ...] | None = None

    def add(self, name, bad, *, diagnostic=False):
        """Record an axiom from a boolean array marking violations.

        The witness is the lexicographically first violating index tuple.
        """
        bad = np.asarray(bad, dtype=bool)
        witness = first_true(bad)
        self.results.append(AxiomResult(name, witness is None, witness, diagnostic))

    def add_result(self, name, passed, witness=None, *, diagnostic=False):
        self.results.append(AxiomResult(name, bool(passed), witness, diagnostic))

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results if not r.diagnostic)

    @property
    def diagnostics_ok(self) -> bool:
        return all(r.passed for r in self.results if r.diagnostic)

    @property
    def all_ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.passed]

    def __getitem__(self, name) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def __contains__(self, name):
        return any(r.name == name for r in self.results)

    def _label(self, i):
        if self.names is not None and 0 <= i < len(self.names):
            return self.names[i]
        return str(i)

    def format(self) -> str:
        lines = [f"{self.subject}:"]
        for r in self.results:
            tag = "pass" if r.passed else "FAIL"
            kind = " (derived)" if r.diagnostic else ""
            line = f"  {tag:4} {r.name}{kind}"
            if r.witness is not None:
                line += " witness=(" + ", ".join(self._label(i) for i in r.witness) + ")"
            lines.append(line)
        return "\n".join(lines)


def first_true(mask) -> tuple | None:
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        return None
    if mask.ndim == 0:
        return ()
    return tuple(int(i) for i in np.argwhere(mask)[0])
