"""Select the growth-kernel backend at import time.

The compiled extension (depref._kernels) is used when available; the pure
Python module (depref._kernels_py) is the fallback.  Both expose the same
entry points and consume the random stream identically, so results do not
depend on which one is active.  Set DEPREF_BACKEND=python (or =cython) to
force a choice; forcing cython raises if the extension is missing.
"""
import os

from . import _kernels_py


def _load():
    forced = os.environ.get("DEPREF_BACKEND", "").strip().lower()
    if forced == "python":
        return _kernels_py
    try:
        from . import _kernels
    except ImportError:
        if forced == "cython":
            raise ImportError(
                "DEPREF_BACKEND=cython but the compiled depref._kernels extension "
                "is not importable; rebuild the package"
            )
        return _kernels_py
    return _kernels


kernels = _load()
BACKEND = kernels.BACKEND


def load_backend(name):
    """Fetch a backend module by name ('cython' or 'python'); for tests
    and the benchmark, which compare the two directly."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    out = ["python"]
    try:
        from . import _kernels  # noqa: F401

        out.insert(0, "cython")
    except ImportError:
        pass
    return out
