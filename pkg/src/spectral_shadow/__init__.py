"""Spectral families, spectral measures, their disintegration and generalized
eigenfunctionals of symmetric operators, computed on a ladder of Ritz projections."""

__version__ = "0.1.0"

from .errors import DimensionError, NumericalError, StageError, ValidationError
from .hermitian import (HermitianOp, ScalarProduct, SpectralBasis, as_vector, cayley, dot,
                        eigh, expand, reconstruct_operator, spectral_projector)
from .gallery import OperatorSpec, RitzSystem, project, prolongation, refine
from .measure import (BorelSet, L2Element, SpectralFamily, SpectralMeasure, borel_projection,
                      indicator_class, lebesgue_decompose, ratio_function, spectral_measure)
from .disintegration import (Disintegration, ShellPartition, consistency_check, disintegrate,
                             shell_additivity)
from .rigging import (Eigenfunctional, RiggingWeights, dual_dot, dual_unit, duality_pair,
                      nuclear_dot, ratio_functional, weak_inverse)
from .gelfand import (GelfandSystem, assemble, eigenfunctional_residual, reconstruct,
                      support_set, weak_integral)
from .config import PipelineConfig, parse_spec
from .ladder import ConvergenceReport, Ladder, ladder_run
