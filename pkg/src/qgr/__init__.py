"""Invariants of finite quivers: the ultramatricial algebra S(Q), its Bratteli
diagram and K_0, Leavitt path algebra components, Hilbert series, and the
projective tails of graded representations."""

from .errors import (CoreRequired, NotASink, NotASource, NotInjective, ParseError,
                     QgrError, ResourceLimitError, SinkPresent, SourcePresent,
                     UnverifiedTail, WindowTooShort)
from .quiver import (Arrow, Path, Quiver, core, enumerate_paths, incidence_matrix,
                     path_counts, torsion_classification, veronese)

__version__ = "0.1.0"
