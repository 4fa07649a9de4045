from .ball import Ball, build_ball
from .cosets import (
    CosetTable,
    HomCertificate,
    conjugate_generator,
    coset_decompose,
    exponent_hom_check,
    schreier_generators,
    todd_coxeter,
)
from .dehn import check_small_cancellation, dehn_reduce, find_long_piece
from .models import (
    DehnHyperbolic,
    DirectWithCyclic,
    FreeAbelian,
    FreeGroup,
    GroupModel,
    OneRelatorFree,
    SemidirectFreeByCyclic,
    model_for_presentation,
    model_from_spec,
)

__all__ = [
    "Ball", "build_ball", "CosetTable", "HomCertificate", "conjugate_generator", "coset_decompose",
    "exponent_hom_check", "schreier_generators", "todd_coxeter", "check_small_cancellation", "dehn_reduce", "find_long_piece",
    "DehnHyperbolic", "DirectWithCyclic", "FreeAbelian", "FreeGroup", "GroupModel", "OneRelatorFree",
    "SemidirectFreeByCyclic", "model_for_presentation", "model_from_spec",
]
