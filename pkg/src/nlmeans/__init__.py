"""Non-Local Means denoising with oracle and checkerboard-split variants.

The package splits into small modules:

``image``       square grids, mirrored patches, checkerboard parity, PGM I/O
``noise``       seeded additive Gaussian noise
``kernels``     patch kernels (rectangular, Gaussian, K0)
``similarity``  patch distances and estimated similarities
``weights``     normalized exponential weights
``oracle``      the oracle filter driven by the clean image
``nlm``         adaptive NLM and the split variant
``parameters``  theoretical bandwidths and the practical parameter rules
``metrics``     MSE and PSNR
``bench``       sweeps, CSV output and Monte Carlo rate checks
``cli``         the ``nlmeans`` command
"""

from .image import FormatError, Parity, checkerboard_split, extract_patch, read_pgm, reflect_index, write_pgm
from .kernels import K0, RECT, KernelKind, KernelSpec, gaussian, kernel_weight
from .metrics import mse, psnr, quality
from .nlm import DenoiseParams, nlm_denoise, nlm_weights, split_denoise, split_weights
from .noise import NoiseSpec, add_gaussian_noise
from .oracle import oracle_denoise, oracle_estimate, oracle_weights
from .parameters import HolderClass, practical_params, theoretical_bandwidth, theoretical_mse_bound
from .similarity import estimated_similarity_sq, patch_distance_sq, split_similarity_sq
from .weights import WeightMap

__version__ = "0.1.0"
