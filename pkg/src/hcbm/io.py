"""File formats: CSV matrices/samples/dendrograms/partitions, JSON manifests.

Matrices are written with %.17g so values round-trip exactly; re-serializing
a loaded matrix reproduces the file byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

import numpy as np

from ._version import __version__
from .clustering import Dendrogram, Partition
from .errors import HcbmError

_FMT = "%.17g"


def write_matrix_csv(path, matrix: np.ndarray) -> None:
    np.savetxt(path, np.asarray(matrix, dtype=float), fmt=_FMT, delimiter=",")


def read_matrix_csv(path) -> np.ndarray:
    m = np.loadtxt(path, delimiter=",", ndmin=2)
    return m


def write_sample_csv(path, sample: np.ndarray) -> None:
    """T x N observations with a header row of variable indices."""
    sample = np.asarray(sample, dtype=float)
    header = ",".join(str(i) for i in range(sample.shape[1]))
    np.savetxt(path, sample, fmt=_FMT, delimiter=",", header=header, comments="")


def read_sample_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def sniff_csv_kind(path) -> str:
    """Guess whether a CSV holds returns (header row) or a correlation matrix.

    A returns file starts with the integer header 0,1,...,N-1.  Without the
    header, a square matrix with unit diagonal is taken as a correlation
    matrix.  Anything else raises, and the caller should ask the user.
    """
    with open(path) as fh:
        first = fh.readline().strip()
    fields = first.split(",")
    if fields == [str(i) for i in range(len(fields))]:
        return "returns"
    m = read_matrix_csv(path)
    if m.shape[0] == m.shape[1] and np.allclose(np.diag(m), 1.0, atol=1e-9):
        return "correlation"
    raise HcbmError(
        f"cannot tell whether {path} holds returns or a correlation matrix; "
        f"pass the kind explicitly"
    )


def write_dendrogram_csv(path, dend: Dendrogram) -> None:
    with open(path, "w") as fh:
        fh.write("left,right,height,size\n")
        for s in range(len(dend.heights)):
            fh.write(f"{dend.left[s]},{dend.right[s]},{_FMT % dend.heights[s]},{dend.sizes[s]}\n")


def read_dendrogram_csv(path) -> Dendrogram:
    raw = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return Dendrogram(
        left=raw[:, 0].astype(np.intp),
        right=raw[:, 1].astype(np.intp),
        heights=raw[:, 2].astype(float),
        sizes=raw[:, 3].astype(np.intp),
    )


def write_partition_csv(path, part: Partition) -> None:
    with open(path, "w") as fh:
        fh.write("index,label\n")
        for i, lab in enumerate(part.labels):
            fh.write(f"{i},{lab}\n")


def read_partition_csv(path) -> Partition:
    raw = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2).astype(np.intp)
    labels = np.empty(raw.shape[0], dtype=np.intp)
    labels[raw[:, 0]] = raw[:, 1]
    return Partition(labels)


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_manifest(command: str, config: dict, seed, inputs: list, outputs: list,
                   elapsed_s: float) -> dict:
    return {
        "tool": "hcbm",
        "version": __version__,
        "command": command,
        "config": config,
        "seed": seed,
        "inputs": {str(p): sha256_file(p) for p in inputs},
        "outputs": [str(p) for p in outputs],
        "elapsed_s": round(elapsed_s, 3),
        "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }


def write_manifest(path, manifest: dict) -> None:
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def manifest_path(output_path) -> Path:
    p = Path(output_path)
    return p.with_name(p.stem + ".manifest.json")
