"""Exact computation of degreewise associated primes, Hilbert polynomials and
grades for families of graded modules over F_p or F_p[u]."""

__version__ = "0.1.0"

from .base_ring import BaseRing, Ideal, PrimeIdeal, RingElem, factor
from .fpmod import FPMap, FPModule, ass, ext, grade, hom, length, tensor, tor
from .graded import GradedMap, GradedModule, GradedRing, RingInclusion, truncate_and_shift
from .family import (
    DegreewiseFamily,
    ExtensionData,
    extend_family,
    from_graded,
    h0_component,
    quotient_by_fg,
    quotient_family,
    split_extension,
)
from .functors import CoherentFunctor, apply, apply_family, apply_map, tensor_as_presentation
from .asymptotics import (
    StabilityReport,
    analyze_family,
    ass_profile,
    detect_stabilization,
    full_report,
    grade_profile,
    hilbert_fit,
    quasi_finite_check,
)
from .rees import amao_crosscheck, filtration_check, lstar_component, normalize, trivial_extension_view
from .problem import Options, ProblemDescription, parse_problem, render_problem
