"""Binary snapshot container and trajectory export.

Field layout: a fixed little-endian header (magic, version, n, box length,
space tag, component count, optional time stamp) followed by the payload as
64-bit floats, component-major with the x index varying fastest.  Spectral
payloads store interleaved real/imaginary pairs (complex128).
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .grid import VectorField, make_grid
from .solver import Trajectory

__all__ = ["write_field", "read_field", "export_trajectory"]

_MAGIC = b"VWF1"
_HEADER = struct.Struct("<4sBBBBId d")  # magic, ver, space, ncomp, has_time, n, L, time


def write_field(path, fld: VectorField, time: float | None = None) -> None:
    """Serialize one field snapshot, optionally stamped with a time."""
    path = Path(path)
    space_tag = 0 if fld.space == "physical" else 1
    header = _HEADER.pack(
        _MAGIC,
        1,
        space_tag,
        fld.data.shape[0],
        0 if time is None else 1,
        fld.grid.n,
        fld.grid.box_length,
        0.0 if time is None else float(time),
    )
    # Internal axis order is (component, x, y, z); the payload wants x fastest.
    payload = np.ascontiguousarray(fld.data.transpose(0, 3, 2, 1))
    if fld.space == "physical":
        payload = payload.astype("<f8")
    else:
        payload = payload.astype("<c16")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload.tobytes())


def read_field(path) -> tuple[VectorField, float | None]:
    """Inverse of :func:`write_field`."""
    raw = Path(path).read_bytes()
    magic, ver, space_tag, ncomp, has_time, n, box_length, time = _HEADER.unpack_from(raw)
    if magic != _MAGIC or ver != 1:
        raise ValueError(f"not a field container: {path}")
    grid = make_grid(n, box_length)
    space = "physical" if space_tag == 0 else "spectral"
    dtype = "<f8" if space == "physical" else "<c16"
    data = np.frombuffer(raw, dtype=dtype, offset=_HEADER.size)
    data = data.reshape(ncomp, n, n, n).transpose(0, 3, 2, 1)
    fld = VectorField(grid, np.ascontiguousarray(data), space)
    return fld, (float(time) if has_time else None)


def export_trajectory(traj: Trajectory, out_dir, lame=None, config=None, tensor=None) -> Path:
    """Write a trajectory as one snapshot file per time plus a JSON manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, (t, st, cache) in enumerate(
        zip(traj.times, traj.states, traj.nonlinearity_cache)
    ):
        upath = out / f"state_{i:05d}_u.vwf"
        vpath = out / f"state_{i:05d}_v.vwf"
        write_field(upath, st.displacement_hat, time=float(t))
        write_field(vpath, st.velocity_hat, time=float(t))
        entry = {"time": float(t), "displacement": upath.name, "velocity": vpath.name}
        if cache is not None:
            fpath = out / f"state_{i:05d}_f.vwf"
            write_field(fpath, cache, time=float(t))
            entry["forcing"] = fpath.name
        entries.append(entry)
    grid = traj.grid
    manifest = {
        "n": grid.n,
        "box_length": grid.box_length,
        "times": [float(t) for t in traj.times],
        "snapshots": entries,
    }
    if lame is not None:
        manifest["lame"] = {"lambda": lame.lam, "mu": lame.mu, "nu": lame.nu}
    if config is not None:
        manifest["config"] = {
            "dt": config.dt,
            "t_end": config.t_end,
            "dealias_rule": config.dealias_rule,
            "picard_tol": config.picard_tol,
            "picard_max_iter": config.picard_max_iter,
        }
    if tensor is not None:
        manifest["tensor_entries"] = [list(e) for e in tensor.entries]
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return out / "manifest.json"
