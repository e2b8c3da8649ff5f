"""JSON files for lattices, IE_B-lattices, Baer *-semigroups and IE*_B-semigroups.

A lattice file has "names", "covers" (or "leq"), "neg", "zero" and "one".
A semigroup file has "mul", "star", "prime", "zero" and optionally "names".
Either kind may add an "s" array to carry the internal operation.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .baer import BaerStarSemigroup, IeStarSemigroup
from .errors import InvalidSpec
from .ie import IeLattice
from .oml import DEFAULT_ELEMENT_CAP, Oml, OmlSpec, build_oml


def _indices(values, names, what):
    index = {n: i for i, n in enumerate(names)}
    out = []
    for v in values:
        if isinstance(v, str):
            if v not in index:
                raise InvalidSpec(f"unknown element name {v!r} in {what}")
            out.append(index[v])
        else:
            out.append(int(v))
    return out


def algebra_from_json(data: dict, *, cap: int = DEFAULT_ELEMENT_CAP):
    """Oml, IeLattice, BaerStarSemigroup or IeStarSemigroup, by the keys present."""
    if not isinstance(data, dict):
        raise InvalidSpec("algebra file must hold a JSON object")
    try:
        if "mul" in data:
            m = len(data["star"])
            names = tuple(str(n) for n in data.get("names", range(m)))
            S = BaerStarSemigroup(
                np.array(data["mul"], dtype=np.intp),
                _indices(data["star"], names, "star"),
                _indices(data["prime"], names, "prime"),
                _indices([data["zero"]], names, "zero")[0],
                names,
            )
            if "s" in data:
                return IeStarSemigroup(S, _indices(data["s"], names, "s"))
            return S
        L = build_oml(OmlSpec.from_json(data), cap=cap)
        if "s" in data:
            return IeLattice(L, _indices(data["s"], L.names, "s"))
        return L
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidSpec):
            raise
        raise InvalidSpec(f"malformed algebra file: {exc}") from exc


def algebra_to_json(A) -> dict:
    if isinstance(A, IeLattice):
        return {**A.base.to_spec().to_json(), "s": [int(v) for v in A.s]}
    if isinstance(A, Oml):
        return A.to_spec().to_json()
    base = A.base if isinstance(A, IeStarSemigroup) else A
    out = {
        "names": list(base.names),
        "mul": base.mul.tolist(),
        "star": base.star.tolist(),
        "prime": base.prime.tolist(),
        "zero": int(base.zero),
    }
    if isinstance(A, IeStarSemigroup):
        out["s"] = [int(v) for v in A.s]
    return out


def load_algebra(path, *, cap: int = DEFAULT_ELEMENT_CAP):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"{path}: not valid JSON ({exc})") from exc
    return algebra_from_json(data, cap=cap)


def dump_algebra(A, path=None) -> str:
    text = json.dumps(algebra_to_json(A), ensure_ascii=False)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text
