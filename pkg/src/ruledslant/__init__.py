"""Striction apparatus, Frenet invariants and slant classification of ruled surfaces."""
from .errors import GeometryError, InputError, RuledSlantError
from .exprparse import parse
from .frenet import curve_apparatus, helix_tests, ruled_apparatus
from .numkit import StrictionFrameField, UniformGrid, arc_length_reparam, derive, integrate_frenet, is_constant
from .offsets import bertrand_offset, mannheim_construct, mannheim_verify
from .slant import ClassificationReport, Tolerances, classify
from .surfbase import (AnalyticCurve, RuledSurfaceSpec, SampledCurve, distribution_parameter,
                       from_curvatures, striction_curve)

__version__ = "0.1.0"
