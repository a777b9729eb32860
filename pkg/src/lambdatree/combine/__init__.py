"""Graphs of groups with cyclic edge groups and the affine actions they carry."""

from .beta import BetaAssignment, BetaRelationError, adjacent_metric, build_beta, lambda_vector
from .britton import (
    BrittonWord,
    HNNPresentation,
    britton_reduce,
    canonicalize,
    cyclic_britton,
    gamma_word_to_vertex,
    is_trivial,
    normal_form,
)
from .graph import EdgeData, GraphError, GraphOfGroups, Vertex, hnn_graph, parse_weight
from .hypotheses import (
    FAIL,
    PASS,
    UNKNOWN,
    EndAssignmentError,
    HypothesisReport,
    Verdict,
    assign_ends,
    validate_hypotheses,
)
from .model import EquivarianceReport, FreenessReport, HNNTreeModel, check_equivariance, freeness_check
from .solvers import (
    SCALE_Q,
    SHEAR_Z2,
    STRATEGIES,
    C5Solution,
    InfeasibleError,
    ThetaSolution,
    c5_equations,
    edge_tau,
    solve_c5_prime,
    solve_dilation,
    solve_theta_ge,
)
