"""Minimax detection of a function on the disk from its noisy Radon transform.

Submodules
----------
lattice       index lattice with its coefficient sequences and SVD bases
radon_oracle  quadrature Radon transform used to check the SVD
extreme       water-filling solution of the extreme problem and its asymptotics
seqmodel      Gaussian sequence model and the signals fed to it
detect        weighted chi-square tests and their Gaussian error predictions
harness       Monte Carlo experiments and table output
cli           command-line front end for the harness
"""

__version__ = "0.1.0"

from .lattice import Index, ModelParams  # noqa: E402
from .extreme import ExtremeSolution, solve_extreme  # noqa: E402
from .seqmodel import SequenceVector  # noqa: E402

__all__ = ["Index", "ModelParams", "ExtremeSolution", "solve_extreme", "SequenceVector", "__version__"]
