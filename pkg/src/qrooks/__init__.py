"""Garsia-Remmel q-rook polynomials of Ferrers boards."""
from .partitions import (
    Partition,
    conjugate,
    diagonal_vector,
    enumerate_partitions,
    equivalence_classes,
    parse_partition,
    partition_count,
    staircase,
)
from .poly import is_log_concave, is_unimodal
from .rooks import (
    are_q_rook_equivalent,
    count_rank_matrices,
    inversion_number,
    qrook,
    qrook_all,
    qrook_enumerate,
    qrook_full_rank,
    qrook_rank_one,
    rook_number,
    total_qrook,
)
from .stirling import qbell, qstirling, qstirling_via_h

__version__ = "0.1.0"
