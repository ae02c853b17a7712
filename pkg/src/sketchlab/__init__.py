"""sketchlab: shared-memory-parallel randomized sketching kernels for
tall-and-skinny matrices, with the downstream solvers built on them."""

from . import backend
from .balance import (BoundCheck, WorkloadSample, check_tail_bounds,
                      simulate_workload, workload_from_multiply)
from .countsketch import (BlockCountSketch, VARIANT_BCCS, VARIANT_COO,
                          build_countsketch, from_vector, multiply_gsa,
                          multiply_sa, to_vector)
from .errors import (ConvergenceError, DimensionError, InputError, NumericError,
                     ParseError, ResourceError, SketchlabError)
from .factor import SvdResult, pivoted_qr, truncated_svd
from .gaussian import sketch_gaussian_csr, sketch_gaussian_dense
from .gram import (gram, gram_dense, gram_parallel_lowmem, gram_parallel_rowpart,
                   gram_serial)
from .instrument import Counters
from .leverage import (LeverageScores, leverage_css_exact, leverage_css_sketched,
                       leverage_exact, leverage_sketched)
from .lstsq import (PrecondResult, cgls, lstsq_gram, lstsq_precond,
                    lstsq_sketch_solve)
from .matrix import (COL_MAJOR, CsrMatrix, DenseMatrix, ROW_MAJOR, SketchConfig,
                     csr_from_triplets, nnz2)
from .mmio import (read_dense, read_matrix_market, read_vector, write_dense,
                   write_matrix_market, write_vector)
from .rng import Stream, gaussian_matrix, trial_seed
from .rownorms import sqn_csr, sqn_dense
from .subset import CssResult, column_subset_select, default_css_config

__version__ = "0.1.0"
