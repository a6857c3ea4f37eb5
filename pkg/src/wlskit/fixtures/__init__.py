"""Golden inputs shipped with the package.

Each JSON file is regenerated from the builders below by
``python -m wlskit.fixtures``; the test suite checks that the shipped
files and the builders agree.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Callable

from .. import io as wio
from ..matrix import InvalidInput
from ..matrix_roots import order_census
from ..rings import exterior_ring, product_ring, projective_ring, rescaled_torus2, s1_x_s3, sphere_ring
from ..spectral import hopf_model, product_of_circles


def _ring(R) -> dict:
    return wio.document("ring", R.to_dict())


def _filtered(FC) -> dict:
    return wio.document("filtered_complex", wio.filtered_to_json(FC))


def _census() -> dict:
    counts = order_census(bound=3)
    return wio.document("census", {
        "group": "GL(2,Z)",
        "entry_bound": 3,
        "order_counts": {(str(k) if k else "infinite"): v for k, v in sorted(counts.items())},
        "finite_orders": sorted(k for k in counts if k),
    })


BUILDERS: dict[str, Callable[[], dict]] = {
    "torus2": lambda: _ring(exterior_ring(2)),
    "torus3": lambda: _ring(exterior_ring(3)),
    "torus4": lambda: _ring(exterior_ring(4)),
    "cp1": lambda: _ring(projective_ring(1)),
    "cp2": lambda: _ring(projective_ring(2)),
    "cp3": lambda: _ring(projective_ring(3)),
    "s1xs3": lambda: _ring(s1_x_s3()),
    "t2xs2": lambda: _ring(product_ring(exterior_ring(2), sphere_ring(2))),
    "torus2_rescaled": lambda: _ring(rescaled_torus2()),
    "hopf": lambda: _filtered(hopf_model()),
    "circles": lambda: _filtered(product_of_circles()),
    "gl2_census": _census,
}

RING_FIXTURES = ("torus2", "torus3", "torus4", "cp1", "cp2", "cp3", "s1xs3", "t2xs2", "torus2_rescaled")


def names() -> list[str]:
    return sorted(BUILDERS)


def path(name: str) -> Path:
    if name not in BUILDERS:
        raise InvalidInput(f"fixture: unknown fixture {name!r} (known: {', '.join(names())})")
    return Path(str(resources.files(__package__).joinpath(f"{name}.json")))


def load(name: str) -> dict:
    return json.loads(path(name).read_text())


def render(name: str) -> str:
    return json.dumps(BUILDERS[name](), indent=2, ensure_ascii=False) + "\n"


def write_all(directory: Path | None = None) -> list[Path]:
    directory = directory or Path(__file__).parent
    out = []
    for name in names():
        p = directory / f"{name}.json"
        p.write_text(render(name))
        out.append(p)
    return out
