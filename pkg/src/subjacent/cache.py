"""On-disk cache of sector eigenpairs.

Entries are ``.npz`` files named by a hash of the model couplings, the
sector and the solver settings, under a versioned subdirectory so a format
change never reads stale files.
"""
import hashlib
import os

import numpy as np

CACHE_ENV = "SUBJACENT_CACHE_DIR"
FORMAT_VERSION = 1


class EigenCache:
    def __init__(self, directory):
        self.directory = os.path.join(os.fspath(directory), f"v{FORMAT_VERSION}")
        os.makedirs(self.directory, exist_ok=True)
        self.hits = self.misses = 0

    @classmethod
    def from_env(cls, default=None):
        directory = os.environ.get(CACHE_ENV, default)
        return cls(directory) if directory else None

    def _path(self, model, sector, settings):
        tag = repr((model.key(), sector.n_sites, sector.n_up, settings))
        name = hashlib.sha256(tag.encode()).hexdigest()[:32]
        return os.path.join(self.directory, name + ".npz")

    def get(self, model, sector, settings):
        path = self._path(model, sector, settings)
        try:
            with np.load(path) as data:
                values, vectors = data["values"], data["vectors"]
        except (OSError, KeyError, ValueError):
            self.misses += 1
            return None
        if vectors.shape[0] != sector.dimension:
            self.misses += 1
            return None
        self.hits += 1
        return values, vectors

    def put(self, model, sector, settings, values, vectors):
        path = self._path(model, sector, settings)
        tmp = f"{path}.{os.getpid()}.tmp.npz"
        np.savez(tmp, values=values, vectors=vectors)
        os.replace(tmp, path)
