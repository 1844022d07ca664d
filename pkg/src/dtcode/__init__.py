"""Code design for AWGN channels with discrete interference known causally at the encoder."""
from ._kernels import BACKEND
from .channel import (ChannelSpec, InputAlphabet, InterferenceAlphabet, OutputPointSet,
                      StateCombiner, enumerate_associated, iter_associated, likelihood,
                      log_likelihood, output_points, transmitted_power)
from .metric import (codeword_sq_distance, d_nosi, d_si, distance_matrix, distance_spectrum,
                     euclid_sq, hamming)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ChannelSpec", "InputAlphabet", "InterferenceAlphabet", "OutputPointSet",
    "StateCombiner", "enumerate_associated", "iter_associated", "likelihood", "log_likelihood",
    "output_points", "transmitted_power", "codeword_sq_distance", "d_nosi", "d_si",
    "distance_matrix", "distance_spectrum", "euclid_sq", "hamming",
]
