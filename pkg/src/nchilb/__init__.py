"""Cell decompositions of non-commutative Hilbert schemes, with independent cross-checks."""
from .errors import CapExceededError, DomainError, ForestParseError, NchilbError, NotInChartError
from .forest_core import Forest, forest_count, parse_forest, format_forest, enumerate_forests, d_stat, d_prime
from .geometry import betti_numbers, classify_cell, normal_form_from_cell, predicted_point_count
from .qseries import QPolynomial, TSeries, zeta_bar, zeta_unmodified, gamma_series
from .fforacle import brute_force_count, cell_census

__version__ = "0.1.0"
