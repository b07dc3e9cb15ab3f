"""Wilson-basis sequence space representations for test functions and distributions."""
from .corpus import CORPUS_NAMES, CorpusEntry, make_entry
from .estimators import DecayClassifier, GaborTransform, WilsonTransform
from .seqspace import NormFamilySpec, Thresholds, classify, decay_profile, mixed_norm, weight
from .timefreq import (
    GaborCoeffs,
    Grid,
    SampledFunction,
    gabor_analysis,
    gabor_synthesis,
    inner_product,
    stft,
    tf_shift,
)
from .window import (
    Window,
    build_wilson_window,
    check_symmetry,
    smooth_step,
    wilson_condition_residual,
)
from .wilson import (
    DistributionInput,
    WilsonCoeffs,
    distribution_coefficients,
    gram_matrix,
    pair_distribution,
    reindex_i2,
    reindex_v,
    reindex_w,
    wilson_analysis,
    wilson_atom,
    wilson_synthesis,
)

__version__ = "0.1.0"
