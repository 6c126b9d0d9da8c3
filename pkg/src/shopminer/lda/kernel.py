"""Gibbs kernel selection: compiled extension if importable, pure Python
otherwise.  Both expose the same two functions and the same numbers.

Set SHOPMINER_GIBBS_BACKEND=python to force the fallback (benchmarking,
debugging); =cython raises if the extension is missing.
"""

import os

from shopminer.errors import ConfigurationError

_requested = os.environ.get("SHOPMINER_GIBBS_BACKEND", "").strip().lower()

if _requested == "python":
    from shopminer.lda import _gibbs_py as _impl

    BACKEND = "python"
else:
    try:
        from shopminer.lda import _gibbs as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise ConfigurationError(
                "SHOPMINER_GIBBS_BACKEND=cython but the compiled kernel is not built"
            ) from None
        from shopminer.lda import _gibbs_py as _impl  # type: ignore[no-redef]

        BACKEND = "python"

init_assignments = _impl.init_assignments
run_sweeps = _impl.run_sweeps
