"""Geometry of one-mode Gaussian quantum channels.

Covariance matrices use the convention in which the vacuum is ``I``.
"""

__version__ = "0.1.0"

from .channels import (
    ChannelClass,
    GaussianChannel,
    amplifier,
    apply,
    attenuator,
    classify_dets,
    classify_one_mode,
    det_invariants,
    identity_channel,
    inequality_residuals,
    is_cp_general,
    prepare_vacuum_channel,
)
from .choi import (
    CJState,
    ReferenceMarginal,
    channel_to_cj,
    cj_to_channel,
    is_cj_nonsteerable,
    is_cj_separable,
    reference_state,
)
from .errors import GaussGeoError, PreconditionError, ValidationError
from .geometry import (
    PuritySeralian,
    StandardForm,
    displacement_factor,
    hs_distance_squared,
    line_element,
    purity_seralian,
    purity_to_standard,
    standard_to_purity,
    to_standard_form,
    volume_density_purity,
    volume_density_standard,
)
from .regions import (
    DeltaBounds,
    RegionLabel,
    classify_by_purities,
    delta_bounds,
    entangled_fraction,
    is_nonsteerable_ps,
    is_separable_ps,
)
from .symplectic import (
    GaussianState,
    WilliamsonDecomposition,
    hs_overlap,
    is_physical,
    purity,
    symplectic_form,
    williamson,
)
from .volumes import (
    QuadratureConfig,
    VolumeResult,
    montecarlo_volumes,
    relative_volume,
    v_ebc_analytic,
    v_gc_analytic,
    v_icbc_analytic,
    volume_montecarlo,
    volume_quadrature,
)
