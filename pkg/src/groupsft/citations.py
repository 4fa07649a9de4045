"""Cited results that certificates rest on but do not re-prove.

Each entry names the original source so a reader can look it up; statements
are short summaries, not quotations.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Citation:
    key: str
    source: str
    statement: str

    def to_dict(self) -> dict:
        return {"key": self.key, "source": self.source, "statement": self.statement}


CITATIONS: dict[str, Citation] = {
    c.key: c
    for c in [
        Citation(
            "free-groups-not-rigid",
            "Piantadosi, Theorems 2.2 and 3.5",
            "every free group of rank >= 2 carries an SFT that is weakly but not strongly aperiodic",
        ),
        Citation(
            "surface-strongly-aperiodic",
            "Cohen and Goodman-Strauss, Theorem 2.1",
            "surface groups admit strongly aperiodic SFTs",
        ),
        Citation(
            "infinite-ends",
            "Cohen, Theorem 1.5 (patched by Genevois and Salo)",
            "a group with infinitely many ends has no strongly aperiodic SFT",
        ),
        Citation(
            "free-extension-weak",
            "Jeandel, Proposition 1.1",
            "the free extension of a weakly aperiodic SFT along a subgroup is weakly aperiodic",
        ),
        Citation(
            "barbieri-criterion",
            "Barbieri, Proposition 3 (corollary form)",
            "if some g != 1 has no conjugate of a positive power in H minus {1}, "
            "the free extension of any SFT on H is not strongly aperiodic",
        ),
        Citation(
            "freiheitssatz",
            "Magnus, Freiheitssatz",
            "in <S | r> with r cyclically reduced and s occurring in r, "
            "S minus {s} freely generates a free subgroup of rank |S| - 1",
        ),
        Citation(
            "free-product-ends",
            "standard result on the ends of free products",
            "a free product of two nontrivial groups, not both of order 2, has infinitely many ends",
        ),
        Citation(
            "ends-free-subgroup",
            "Arzhantseva-Minasyan-Osin, Corollary 1.3",
            "a group with infinitely many ends contains a free subgroup of rank 2",
        ),
        Citation(
            "quasi-planar-structure",
            "MacManus, Corollary D",
            "quasi-planar groups are exactly the groups virtually a free product of "
            "finitely many free and surface groups",
        ),
        Citation(
            "virtually-z2-rigid",
            "Bitar, Proposition 6.4",
            "virtually cyclic and torsion-free virtually Z^2 groups are periodically rigid",
        ),
        Citation(
            "torsion-not-rigid",
            "Bitar, Proposition 6.9",
            "a group with torsion containing a torsion-free subgroup with a strongly aperiodic SFT "
            "is not periodically rigid",
        ),
        Citation(
            "free-product-f2",
            "Serre, Trees, Proposition 3",
            "a free product of two nontrivial groups, not both Z/2, contains F2",
        ),
    ]
}


def cite(*keys: str) -> list[Citation]:
    return [CITATIONS[k] for k in keys]
