"""Mono-to-binaural signal pipeline and spatial evaluation metrics."""
from .binaural import (
    ComplexMask,
    StereoWaveform,
    apply_mask,
    bound_mask,
    channel_difference,
    mix_to_mono,
    oracle_mask,
    reconstruct_stereo,
)
from .harness import (
    FileMaskProvider,
    MaskProvider,
    MaskProviderError,
    OracleProvider,
    WindowPlan,
    ZeroDifferenceProvider,
    binauralize,
    plan_windows,
    stitch,
)
from .losses import DiscriminatorScores, adversarial_value, bce_loss, l1_spectrogram_loss
from .metrics import (
    Direction,
    MetricReport,
    SpatialCurve,
    direction,
    env_distance,
    envelope,
    evaluate_all,
    magnitude,
    mrstft,
    snr,
    spl,
    spl_curve,
    spl_distance,
    stft_distance,
    wave_l2,
)
from .spectral import (
    ComplexSpectrogram,
    EdgeRegion,
    StftConfig,
    Waveform,
    hann_window,
    istft,
    resample,
    stft,
)

__version__ = "0.1.0"
