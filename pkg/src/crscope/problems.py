"""Named problem files for the command-line front end.

The JSON files under ``crscope/data`` are written from the builders below by
``python -m crscope.problems``; a test compares them against the builders so
the shipped files cannot drift from the code.
"""
from __future__ import annotations

import json
import sys
from importlib import resources
from pathlib import Path

from .errors import InputError
from .pencil import HermitianPencil
from .quadric import CATALOG, Quadric
from .serialize import enc_complex, encode_pencil, encode_quadric

KINDS = ("subspace", "quadric", "pencil", "patch", "maxmod")


def problem(kind: str, payload: dict, options: dict | None = None) -> dict:
    if kind not in KINDS:
        raise InputError(f"unknown problem kind {kind!r}")
    return {"kind": kind, "payload": payload, "options": dict(options or {})}


def from_catalog(name: str, params=()) -> dict:
    """Problem file for a generator in the quadric/pencil catalog."""
    if name not in CATALOG:
        raise InputError(f"unknown example {name!r}")
    obj = CATALOG[name](*params)
    if isinstance(obj, HermitianPencil):
        return problem("pencil", encode_pencil(obj))
    if isinstance(obj, Quadric):
        return problem("quadric", encode_quadric(obj))
    raise InputError(f"example {name!r} has no problem encoding")  # pragma: no cover


def _ball_predicate(coords, radius=1.0) -> dict:
    return {"kind": "ball", "coords": list(coords), "radius": radius}


BUILDERS = {
    "clifford8": lambda: from_catalog("clifford8"),
    "r1r2_7": lambda: from_catalog("r1r2_7"),
    "adams_m8": lambda: from_catalog("adams_m8"),
    "mprime": lambda: from_catalog("mprime"),
    "mlambda_i": lambda: from_catalog("mlambda", (1j,)),
    "mlambda_1": lambda: from_catalog("mlambda", (1.0,)),
    "rigid_split_2": lambda: from_catalog("rigid_split", (2,)),
    "complex_line": lambda: problem("subspace", {"vectors": [[enc_complex(1)], [enc_complex(1j)]],
                                                 "real_span": False}),
    "totally_real_plane": lambda: problem("subspace", {"n": 2, "basis": [[1, 0], [0, 1], [0, 0], [0, 0]]}),
    "ak_grid": lambda: problem("patch", {
        "example": "ak", "params": [1],
        "points": {"kind": "grid", "axes": [[-1, 1, 5], [-1, 1, 5], [0, 0, 1], [-1, 1, 5], [0, 0, 1], [0, 0, 1]]},
    }),
    "totally_real_line": lambda: problem("maxmod", {
        "patch": {"n": 1, "rho": [[{"alpha": [1], "beta": [0], "coeff": [0.0, -0.5]}]], "box": [[-1.5, 1.5]] * 2},
        "points": {"kind": "grid", "axes": [[-1.2, 1.2, 2401], [0, 0, 1]]},
        "function": {"kind": "exp_neg_square_taylor", "degree": 12},
        "predicate": _ball_predicate([0]),
        "band": 1e-9,
        "psi": 1,
    }),
    "mk_ball": lambda: problem("maxmod", {
        "patch": {"quadric": {"example": "mk", "params": [2, 2.0]}, "box": [[-3.0, 3.0]] * 10},
        "points": {"kind": "quadric", "count": 2000, "radius": 1.2},
        "function": {"kind": "random", "degree": 3, "seed": 0},
        "predicate": _ball_predicate([0, 1, 2, 3]),
        "band": 0.3,
    }),
}


def data_dir() -> Path:
    return Path(str(resources.files("crscope") / "data"))


def shipped_names() -> list:
    d = data_dir()
    return sorted(p.stem for p in d.glob("*.json")) if d.is_dir() else []


def load_shipped(name: str) -> dict:
    path = data_dir() / f"{name}.json"
    if not path.is_file():
        raise InputError(f"unknown example {name!r}; known: {sorted(set(shipped_names()) | set(CATALOG))}")
    return json.loads(path.read_text())


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_data(target: Path | None = None) -> list:
    target = Path(target) if target else data_dir()
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name, build in sorted(BUILDERS.items()):
        path = target / f"{name}.json"
        path.write_text(dumps(build()))
        written.append(path)
    return written


if __name__ == "__main__":  # pragma: no cover
    for p in write_data(Path(sys.argv[1]) if len(sys.argv) > 1 else None):
        print(p)
