"""Joint interaction-structure ensembles for a pair of RNA alignments.

The package wraps the C++ core. ``Session`` parses the two alignments once
and exposes the partition function, pair/hybrid probabilities, Boltzmann
sampling, and contact-region probabilities.
"""

import os
import sys

try:
    # Installed layout: the compiled module sits inside the package.
    from ._riafold import Session
except ImportError:
    # Development layout: the compiled module lives in the build tree and
    # RIAFOLD_MODULE_DIR points at its directory.
    _module_dir = os.environ.get("RIAFOLD_MODULE_DIR")
    if not _module_dir:
        raise
    if _module_dir not in sys.path:
        sys.path.insert(0, _module_dir)
    from _riafold import Session

__all__ = ["Session"]
__version__ = "0.1.0"
