"""Synthesis, Hilbert-space projection and measurement simulation of OAM beams."""

from .antennaarray import (
    AntennaArray,
    ArrayExperiment,
    CircularArraySampler,
    array_hilbert_angle,
    phi_sweep,
    sampled_spectrum,
)
from .exceptions import (
    AliasingError,
    ConfigError,
    DataError,
    DegenerateInputError,
    DimensionError,
    FieldFormatError,
    FieldMagicError,
    FieldTruncatedError,
    FieldVersionError,
    OAMError,
    ParameterError,
)
from .fieldgrid import (
    ComplexField,
    Grid,
    add,
    extract_intensity,
    extract_phase,
    hilbert_angle,
    inner_product,
    norm,
    normalize,
    scale,
)
from .fileio import read_field, write_field
from .hilbertproj import (
    ModeDecomposer,
    decompose,
    gram_matrix,
    lg_index_set,
    project,
    reconstruct,
    residual,
    spectrum_hilbert_angle,
)
from .modes import (
    Family,
    LGParams,
    ModeIndex,
    ModeSpectrum,
    azimuthal_field,
    bessel_field,
    default_grid,
    laguerre_polynomial,
    lg_field,
    synthesize,
)
from .optics4f import (
    DetectorSpec,
    ForkedGrating,
    ForkIdentifier,
    FourFSystem,
    angular_spectrum_propagate,
    default_system,
    forked_grating_mask,
    identification_vector,
    lens_phase,
    simulate_4f,
    transfer_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "AntennaArray",
    "ArrayExperiment",
    "CircularArraySampler",
    "ComplexField",
    "ConfigError",
    "DataError",
    "DegenerateInputError",
    "DetectorSpec",
    "DimensionError",
    "Family",
    "FieldFormatError",
    "FieldMagicError",
    "FieldTruncatedError",
    "FieldVersionError",
    "ForkIdentifier",
    "ForkedGrating",
    "FourFSystem",
    "Grid",
    "LGParams",
    "ModeDecomposer",
    "ModeIndex",
    "ModeSpectrum",
    "OAMError",
    "ParameterError",
    "add",
    "angular_spectrum_propagate",
    "array_hilbert_angle",
    "azimuthal_field",
    "bessel_field",
    "decompose",
    "default_grid",
    "default_system",
    "extract_intensity",
    "extract_phase",
    "forked_grating_mask",
    "gram_matrix",
    "hilbert_angle",
    "identification_vector",
    "inner_product",
    "laguerre_polynomial",
    "lens_phase",
    "lg_field",
    "lg_index_set",
    "norm",
    "normalize",
    "phi_sweep",
    "project",
    "read_field",
    "reconstruct",
    "residual",
    "sampled_spectrum",
    "scale",
    "simulate_4f",
    "spectrum_hilbert_angle",
    "synthesize",
    "transfer_matrix",
    "write_field",
    "__version__",
]
