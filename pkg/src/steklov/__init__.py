"""Steklov spectra and zeta-invariants of symbols on the unit circle."""

from .circlefn import FourierSeries, Multiplier, apply_multiplier, from_samples, sample, sobolev_norm
from .errors import (AliasingError, ConsistencyError, PreconditionError, SearchError,
                     SteklovError, TruncationError)
from .gauge import MoebiusParams, mobius_pullback, normalize_gauge
from .geometry import PowerSeries, curve_export, map_from_symbol, symbol_from_map
from .spectral import SpectrumResult, spectrum_distance, steklov_spectrum
from .wordtrace import OperatorWord, edward_z1, phi, trace_word, zeta_invariant

__version__ = "0.1.0"
