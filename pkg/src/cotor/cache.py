"""On-disk cache for differential matrices.

Files live under ``<cache_dir>/<fingerprint>/d_<n>.gf3mat`` in the
canonical GF3MAT v1 text format.  The fingerprint encodes engine version
and sign convention, so a stale cache is simply never found; a corrupted
file is rebuilt with a warning, never silently reused.
"""

from __future__ import annotations

import hashlib
import logging
import os

from .gf3 import SparseMatrixF3

log = logging.getLogger("cotor.cache")

ENGINE_VERSION = "1.0.0"


def fingerprint(convention: str) -> str:
    digest = hashlib.sha256(
        f"cotor/{ENGINE_VERSION}/leibniz={convention}".encode())
    return digest.hexdigest()[:12]


class MatrixCache:
    def __init__(self, root: str | os.PathLike, convention: str):
        self.root = os.fspath(root)
        self.fingerprint = fingerprint(convention)
        self.dir = os.path.join(self.root, self.fingerprint)

    def path(self, degree: int) -> str:
        return os.path.join(self.dir, f"d_{degree}.gf3mat")

    def load(self, degree: int) -> SparseMatrixF3 | None:
        path = self.path(degree)
        try:
            with open(path, "r", encoding="ascii") as fh:
                return SparseMatrixF3.deserialize(fh.read())
        except FileNotFoundError:
            return None
        except (ValueError, OSError) as exc:
            log.warning("corrupted cache file %s (%s); rebuilding", path, exc)
            try:
                os.remove(path)
            except OSError:
                pass
            return None

    def store(self, degree: int, matrix: SparseMatrixF3) -> str:
        os.makedirs(self.dir, exist_ok=True)
        path = self.path(degree)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="ascii") as fh:
            fh.write(matrix.serialize())
        os.replace(tmp, path)
        return path
