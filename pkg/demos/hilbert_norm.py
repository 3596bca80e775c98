"""
Discrete Hilbert transform
==========================

H_m = sum over n != m of c_n / (m - n), computed by a linear convolution.
Random inputs stay below the classical bound pi at p = 2.
"""

import math

import numpy as np

from modframe.hilbert import (BiSequence, discrete_hilbert, hilbert_direct, hilbert_norm_estimate,
                              hilbert_ratio, odd_probe, one_hot_norm_corrected)

c = BiSequence.one_hot(3, 0).values + BiSequence.one_hot(3, 1).values
h = discrete_hilbert(BiSequence(c))
print("H(delta_0 + delta_1):", np.round(h.values.real, 4))

rng = np.random.default_rng(0)
x = BiSequence(rng.standard_normal(1025))
print("fast vs direct      :", np.max(np.abs(discrete_hilbert(x).values - hilbert_direct(x).values)))

print("random estimate     :", hilbert_norm_estimate(2.0, 1024, 200, 7), "bound", math.pi)
print("odd probe ratio     :", hilbert_ratio(odd_probe(1024), 2.0))
print("one-hot, corrected  :", one_hot_norm_corrected(1024, 2.0), "vs", math.pi / math.sqrt(3))
