"""Photoacoustic beamforming toolkit.

Synthetic point-absorber RF simulation, DAS / DMAS / two-stage DMAS
reconstruction (optionally coherence-factor weighted), envelope detection,
log compression, and lateral resolution/sidelobe metrics.
"""

from ._core import (  # noqa: F401
    Absorber,
    ArrayGeometry,
    BeamformedImage,
    Dataset,
    DatasetMetadata,
    FrameValidation,
    ImageGrid,
    ImageStage,
    Kernel,
    LateralProfile,
    LobeExtent,
    MethodSpec,
    NoiseSpec,
    Peak,
    Phantom,
    PulseSpec,
    Rect,
    RfFrame,
    Vec2,
    add_gaussian_noise,
    analytic_envelope,
    beamform_image,
    build_grid,
    build_linear_array,
    coherence_factor,
    das_pixel,
    dmas_pixel,
    envelope,
    find_peaks,
    fwhm,
    gather_delayed,
    image_snr,
    lateral_profile,
    log_compress,
    main_lobe_extent,
    mdmas_pixel,
    preset_phantom,
    pulse_waveform,
    read_dataset,
    sample_at,
    sidelobe_level,
    signed_sqrt,
    simulate_frame,
    time_of_flight,
    valley_depth,
    validate_frame,
    write_dataset,
    write_pgm,
    write_profile_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
