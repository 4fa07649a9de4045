"""Subshifts of finite type on finitely presented groups.

Word and presentation algebra, one-relator rewriting, group models with
solvable word problems, coset enumeration, SFT extensions from subgroups to
supergroups, and finite searches that certify or refute properties of SFTs.
"""

from .errors import GroupSftError
from .extensions import (
    CosetClosure,
    Embedding,
    coset_color_closure,
    coset_index_sft,
    coset_restriction,
    cyclic_lift,
    free_extension,
    periodic_right_lift,
    product_lift,
    product_lift_quotient,
    right_extension,
)
from .presentations import (
    Presentation,
    analyze_one_relator,
    apply_tietze,
    classify_quasiplanar,
    magnus_moldavansky,
    parse_presentation,
    surface_presentation,
)
from .sft import (
    BallConfig,
    Match,
    Pattern,
    ProductLetter,
    QuotientConfig,
    Sft,
    appears,
    quotient_violations,
    shift,
    violations,
)
from .verify import (
    check_theorem15_pipeline,
    recheck_certificate,
    search_strongly_periodic,
    stabilizer_scan,
    tile_ball,
)
from .words import Word, parse_word

__version__ = "0.1.0"
