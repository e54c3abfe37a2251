"""Seam-artifact simulation, measurement, and classical refinement for local image edits."""

from .blending import SolverParams, harmonic_fill, poisson_blend
from .errors import (
    ConfigError,
    ConvergenceError,
    MaskGenError,
    NumericError,
    ShapeError,
)
from .haar import HaarPyramid, haar_forward, haar_inverse, haar_weighted_l1
from .imops import (
    JitterParams,
    alpha_blend,
    clamp01,
    color_jitter,
    dilate,
    erode,
    gaussian_blur,
    gaussian_noise,
    paste_back,
    soften_mask,
)
from .io import load_image, load_mask, save_image, save_mask
from .jpeg import jpeg_simulate
from .maskgen import MaskGenParams, generate_mask
from .metrics import MetricsReport, evaluate, l1, psnr
from .refine import (
    PoolParams,
    SubprocessRefiner,
    add_input_noise,
    classical_refine,
    pool_refine,
)
from .rng import make_rng
from .simulate import (
    SimConfig,
    SimPair,
    boundary_mix,
    codec_stand_in,
    color_shift_blobs,
    color_shift_linear_gradient,
    color_shift_uniform,
    content_discontinuity,
    simulate,
)
from .synth import flat_field, synthetic_photo
from .tonemap import (
    AmplifyParams,
    LossConfig,
    LossReport,
    ToneMap,
    amplify_target,
    apply_tonemap,
    combined_loss,
    disc_l1,
    fit_tonemap,
)

__version__ = "0.1.0"
