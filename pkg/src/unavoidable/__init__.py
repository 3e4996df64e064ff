"""Unavoidable patterns in 2-edge-colored complete graphs and tournaments.

Finders for the F_k family in colorings dense in both colors and for D_k in
tournaments with many directed triangles, an arc-reversal transitivizer with
a certified reversal bound, and the exact small-instance oracles used to
check them.
"""
from .core import (
    Color,
    ColoredCompleteGraph,
    DkWitness,
    FkWitness,
    Tournament,
    Variant,
    make_dk,
    make_layered,
    random_coloring,
    random_tournament,
    verify_dk_witness,
    verify_fk_witness,
)
from .dk import DkConfig, dk_oracle, find_dk
from .fk import DrcConfig, find_fk, fk_oracle
from .transitivize import transitivize

__version__ = "0.1.0"
