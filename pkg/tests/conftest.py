from pathlib import Path

import pytest

from groupsft.groups import DirectWithCyclic, FreeAbelian, FreeGroup
from groupsft.sft import Pattern, Sft

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


def golden_mean(model=None) -> Sft:
    """Z^2 SFT: no two 1s adjacent along a or b."""
    model = model or FreeAbelian(["a", "b"])
    return Sft(
        (0, 1),
        (Pattern.from_pairs([("1", 1), ("a", 1)]), Pattern.from_pairs([("1", 1), ("b", 1)])),
        model,
    )


def z_difference() -> Sft:
    """Z SFT: neighbors carry different letters."""
    return Sft((0, 1), tuple(Pattern.from_pairs([("1", c), ("a", c)]) for c in (0, 1)), FreeGroup(["a"]))


@pytest.fixture
def z2():
    return FreeAbelian(["a", "b"])


@pytest.fixture
def z2xz2(z2):
    return DirectWithCyclic(z2, 2)
