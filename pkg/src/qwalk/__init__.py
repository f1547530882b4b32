"""Average mixing of continuous-time quantum walks on circulants and their bunkbeds."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .closed_forms import (
    FormulaInapplicable,
    complete_graph_average,
    cone_average,
    cylinder_average,
    homogeneous_join_spectrum,
    join_average,
    limiting_distribution,
    multipartite_average,
    path_average,
    prism_average,
)
from .dsl import parse_expr, parse_graph, to_text
from .graphs import (
    ConnectionSet,
    adjacency,
    cartesian,
    complete,
    cycle,
    empty,
    hypercube,
    join,
    joinpow,
    make_circulant,
    make_path,
    mobius,
    validate,
)
from .mixing import (
    AverageDistribution,
    amplitude_at,
    average_distribution,
    average_of,
    classify_family,
    deviation_bound,
    instantaneous_distribution,
    mixing_ratio,
)
from .oracle import compare, finite_time_average, quadrature_average
from .spectral import (
    EigenSystem,
    cartesian_spectrum,
    circulant_spectrum,
    dense_spectrum,
    eigensystem,
    group_eigenvalues,
    join_spectrum,
    path_spectrum,
)

__version__ = "0.1.0"
