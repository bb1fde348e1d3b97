"""Set embedding into diagonal Gaussian distributions."""

from ._core import (
    AtomHistogram,
    AtomicPartition,
    AugmentMode,
    DiagGaussian,
    EmbeddingConfig,
    FitResult,
    GroundUniverse,
    MCConfig,
    NoiseBlock,
    SetFamily,
    StressReport,
    SubsetRef,
    atoms_equivalent,
    augment,
    compute_atoms,
    damped_kl,
    discrete_js,
    e_centroid,
    extended_kl,
    fit,
    gaussian_entropy,
    histogram_entropy,
    kl_gaussian,
    log_density,
    m_centroid,
    make_noise,
    mc_js,
    mc_kl_to_mixture,
    mixture_density,
    parse_family,
    render_svg,
    set_volume,
    uniform_histogram,
)

__all__ = [name for name in dir() if not name.startswith("_")]
