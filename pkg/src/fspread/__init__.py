"""Rational trigonometry over F_q and finite Poincare graphs.

Submodules
----------
ffield      arithmetic in F_q, quadratic residues, square roots, generators
trig        quadrance, spread and their projective versions
projective  projective points of F_q^3 and the vertex set Omega
pgraph      fixed-spread graphs, scheme relations, spectra
census      counting a fixed spread among directions; mixing inequality
cli         command line front end
"""

__version__ = "0.1.0"

from .ffield import FieldElement, FieldSpec, is_square, make_field, primitive_element, sqrt
from .trig import (
    BilinearForm,
    Vec3,
    dot,
    is_null_line,
    is_null_point,
    proj_quadrance,
    proj_spread,
    quadrance,
    spread,
)
from .projective import OmegaSet, ProjPoint, build_omega, enumerate_proj_points, fixed_norm_rep
from .pgraph import (
    SpectrumReport,
    SpreadGraph,
    build_poincare,
    build_relation,
    edge_count,
    is_regular,
    spectrum,
    verify_scheme,
)
from .census import (
    CensusReport,
    DirectionSet,
    f_gamma,
    mixing_check,
    sample_directions,
    theorem1_experiment,
)
