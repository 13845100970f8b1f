"""vforge: deterministic design toolkit for small watercraft.

Thin re-export of the compiled core module; see the C++ headers under
``include/vforge`` for the authoritative API documentation.
"""

from ._core import (
    BladeDesignParams,
    BuoyancyResult,
    HullParams,
    HydroResult,
    OperatingPoint,
    TriMesh,
    VforgeError,
    assemble_propeller,
    bem_evaluate,
    buoyancy_check,
    chord_at,
    classify_amd_level,
    export_stl,
    generate_hull,
    import_stl,
    is_watertight,
    mesh_volume,
    optimize,
    pitch_at,
    plan_from_spec,
    root_bending_stress,
    run_pipeline,
    simulate_command,
    von_mises,
)

__all__ = [
    "BladeDesignParams",
    "BuoyancyResult",
    "HullParams",
    "HydroResult",
    "OperatingPoint",
    "TriMesh",
    "VforgeError",
    "assemble_propeller",
    "bem_evaluate",
    "buoyancy_check",
    "chord_at",
    "classify_amd_level",
    "export_stl",
    "generate_hull",
    "import_stl",
    "is_watertight",
    "mesh_volume",
    "optimize",
    "pitch_at",
    "plan_from_spec",
    "root_bending_stress",
    "run_pipeline",
    "simulate_command",
    "von_mises",
]

__version__ = "0.1.0"
