"""Cokernels of random matrices over finite quotients of complete DVRs and the
P-part statistics of random matrices over F_q."""

__version__ = "0.1.0"

from .errors import ContextMismatchError, GuardExceededError, TruncationError
from .fields import FieldCtx, field_of_order, make_field
from .rings import RingCtx, equal_char_quotient, galois_ring, padic_quotient
from .poly import Poly, first_irreducible, irreducibles, is_irreducible, poly
from .linalg import Matrix, cokernel_type, matrix, matrix_rank, poly_eval_matrix, smith_normal_form
from .partitions import Partition, aut_count, brute_force_aut_count, conjugate, parse_partition, partitions_of
from .qseries import (
    PointConstraint,
    RationalInterval,
    TruncSeries,
    bn_coeffs,
    constrained_series,
    exact_partition_prob,
    finite_n_event_prob,
    limit_product,
    qpoch_expand,
)
from .module_stats import TypeReport, choose_truncation_level, coker_report, p_part_partition
from .oracle import (
    CokerTypeIs,
    CokerVanishes,
    CorankIs,
    EventSpec,
    McResult,
    PPartIs,
    conjecture_battery,
    enumerate_event,
    mc_estimate,
)
