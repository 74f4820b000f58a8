"""Retarded dispersion (Casimir-type) interactions by pairwise volume-element
summation: closed forms for canonical geometries plus a hierarchical numeric
integrator for arbitrary disjoint body pairs."""

__version__ = "0.1.0"

from .analytic import (  # noqa: F401
    NoAnalyticFormError,
    SlabPairParams,
    SpherePlateParams,
    balian_duplantier_reference,
    casimir_plate_energy,
    molecule_pair_energy,
    point_half_space_energy,
    scene_energy,
    slab_slab_energy,
    sphere_half_space_energy,
)
from .config import ConfigError, SceneConfig, parse_config, serialize_config  # noqa: F401
from .forces import SweepSpec, force_along_gap, run_sweep  # noqa: F401
from .geometry import (  # noqa: F401
    Box,
    HalfSpace,
    PointParticle,
    Scene,
    Sphere,
    box_fourier_volume,
    min_gap,
    volume,
)
from .integrator import (  # noqa: F401
    EnergyEstimate,
    IntegratorSettings,
    PairIntegrator,
    convergence_sweep,
    kernel,
    monte_carlo_oracle,
    pair_energy,
)
from .materials import (  # noqa: F401
    Material,
    PairCoupling,
    UnitSystem,
    beta0,
    dilute_gas,
    gamma0,
    pair_coupling,
    perfect_metal,
    vacuum,
)
from .octree import Cell, Octree, admissible, build_octree  # noqa: F401
