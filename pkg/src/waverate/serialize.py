"""JSON/CSV export with a bit-exact float contract.

Floats are rendered with 17 significant digits ('.' decimal, comma-delimited
CSV, LF line endings) so identical runs produce byte-identical files.  All
writes are atomic: temp file in the target directory, then rename.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Iterable, Sequence

import numpy as np

from .grids import COMPACT, DecayHint, DyadicGrid, SampledFunction


def fmt(x) -> str:
    """17-significant-digit decimal rendering; round-trips any double."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(cell) if not isinstance(cell, str) else cell for cell in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path: str, payload) -> None:
    atomic_write_text(path, dumps_json(payload) + "\n")


def dumps_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default)


def _json_default(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


# ---------------------------------------------------------------------------
# family (de)serialization


def family_to_dict(fam) -> dict:
    doc = {
        "name": fam.name,
        "params": fam.param,
        "vanishing_moments": fam.vanishing_moments,
        "decay": _decay_to_dict(fam.decay_class),
        "grid": {
            "left": fmt(fam.phi.grid.left),
            "right": fmt(fam.phi.grid.right),
            "level": fam.phi.grid.level,
        },
        "values": [fmt(v) for v in fam.phi.values],
        "psi_values": [fmt(v) for v in fam.psi.values],
    }
    if fam.filter is not None:
        doc["filter"] = {
            "lowpass": [fmt(h) for h in fam.filter.lowpass],
            "offset": fam.filter.offset,
        }
    return doc


def family_from_dict(doc: dict):
    from .families import MRAFamily
    from .filters import from_lowpass

    grid = DyadicGrid(
        float(doc["grid"]["left"]), float(doc["grid"]["right"]), int(doc["grid"]["level"])
    )
    decay = _decay_from_dict(doc["decay"])
    phi = SampledFunction(grid, np.array([float(v) for v in doc["values"]]), decay)
    psi = SampledFunction(grid, np.array([float(v) for v in doc["psi_values"]]), decay)
    filt = None
    if "filter" in doc:
        filt = from_lowpass(
            [float(h) for h in doc["filter"]["lowpass"]], int(doc["filter"]["offset"])
        )
    return MRAFamily(
        name=doc["name"],
        filter=filt,
        phi=phi,
        psi=psi,
        vanishing_moments=int(doc["vanishing_moments"]),
        decay_class=decay,
        param=doc["params"],
    )


def _decay_to_dict(d: DecayHint) -> dict:
    out = {"kind": d.kind, "truncation": fmt(d.truncation)}
    if d.a is not None:
        out["a"] = fmt(d.a)
    if d.N is not None:
        out["N"] = fmt(d.N)
    return out


def _decay_from_dict(doc: dict) -> DecayHint:
    if doc["kind"] == "compact":
        return COMPACT
    return DecayHint(
        doc["kind"],
        a=float(doc["a"]) if "a" in doc else None,
        N=float(doc["N"]) if "N" in doc else None,
        truncation=float(doc["truncation"]),
    )


# ---------------------------------------------------------------------------
# expansion coefficients


def coefficients_to_dict(coeffs) -> dict:
    return {
        "j0": coeffs.base_level,
        "j1": coeffs.top_level,
        "b": {str(k): fmt(v) for k, v in sorted(coeffs.b.items())},
        "a": {f"{j},{k}": fmt(v) for (j, k), v in sorted(coeffs.a.items())},
    }


def coefficients_from_dict(doc: dict) -> tuple[int, int, dict, dict]:
    b = {int(k): float(v) for k, v in doc["b"].items()}
    a = {}
    for key, v in doc["a"].items():
        j, k = key.split(",")
        a[(int(j), int(k))] = float(v)
    return int(doc["j0"]), int(doc["j1"]), b, a
