"""Valuation of renewable feed-in tariff contracts under price and
regulatory uncertainty: project values, investment option values, and
optimal investment triggers for fixed-price, fixed-premium, price-floor,
and collar (floor-and-cap) subsidy schemes."""

from ._kernels import BACKEND
from .core import (
    CharacteristicRoots,
    MarketParams,
    ProjectParams,
    beta_roots,
    characteristic_roots,
    eta_root,
)
from .errors import (
    ConfigError,
    FitvalError,
    InvalidParametersError,
    MultipleRootsError,
    NoRootError,
    SubsidyExceedsCostError,
)
from .oracle import (
    BoundaryReport,
    McEstimate,
    SimConfig,
    comparative_statics_check,
    exercise_boundary_check,
    mc_project_value,
)
from .thresholds import (
    Branch,
    RegulatoryParams,
    ThresholdResult,
    free_market_trigger,
    option_value,
    option_value_curve,
    threshold,
    threshold_ru,
)
from .valuation import (
    SCHEME_LABELS,
    Collar,
    CollarCoefficients,
    FixedPremium,
    FixedPrice,
    Floor,
    FloorCoefficients,
    Region,
    Scheme,
    ValuationResult,
    collar_coefficients,
    floor_coefficients,
    project_value,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Branch",
    "BoundaryReport",
    "CharacteristicRoots",
    "Collar",
    "CollarCoefficients",
    "ConfigError",
    "FitvalError",
    "FixedPremium",
    "FixedPrice",
    "Floor",
    "FloorCoefficients",
    "InvalidParametersError",
    "MarketParams",
    "McEstimate",
    "MultipleRootsError",
    "NoRootError",
    "ProjectParams",
    "Region",
    "RegulatoryParams",
    "SCHEME_LABELS",
    "Scheme",
    "SimConfig",
    "SubsidyExceedsCostError",
    "ThresholdResult",
    "ValuationResult",
    "beta_roots",
    "characteristic_roots",
    "collar_coefficients",
    "comparative_statics_check",
    "eta_root",
    "exercise_boundary_check",
    "floor_coefficients",
    "free_market_trigger",
    "mc_project_value",
    "option_value",
    "option_value_curve",
    "project_value",
    "threshold",
    "threshold_ru",
]
