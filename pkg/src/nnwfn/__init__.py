"""c-approximate nearest neighbor search without false negatives (l2).

Every point within radius R of a query is guaranteed to be returned; no
returned point lies beyond c*R. Randomness only affects how many in-between
points surface, never correctness.
"""

from .dataio import Dataset, load_dataset, save_dataset
from .errors import (
    BudgetError,
    DatasetFormatError,
    DimensionError,
    InfeasibleError,
    NnwfnError,
    ParameterError,
    SnapshotError,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .linalg import (
    BlockMapping,
    MappingFamily,
    OrthonormalBasis,
    apply_mapping,
    make_family,
    random_orthonormal_basis,
)
from .maxl2 import (
    LshParams,
    MaxL2Index,
    ProductPoint,
    build_maxl2,
    expand_neighbors,
    hash_g,
    hash_scalar,
    optimal_w,
    query_maxl2,
    sample_unit_vector,
)
from .oracle import exact_radius_search, sandwich_check
from .reduction import (
    NnwfnIndex,
    ProblemConfig,
    QueryResult,
    ReductionPlan,
    build_index,
    build_single_stage,
    plan_parameters,
    query,
    rescale,
)
from .snapshot import load_index, save_index

__version__ = "0.1.0"
