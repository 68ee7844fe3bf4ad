"""Mod-2 Adams E2 charts for spheres and stunted projective spectra.

Computes minimal free resolutions over the Steenrod algebra, Ext charts,
induced maps, Yoneda products, and chart-level algebraic Mahowald
invariants over towers of stunted real/complex/quaternionic projective
spectra.
"""

from .charts import Chart, ChartWindow, render_svg, to_table
from .gradedmod import (
    Field,
    GradedModule,
    ModuleMap,
    is_shift_isomorphic,
    skeletal_maps,
    sphere_module,
    stunted_module,
)
from .invariant import (
    MahowaldQuery,
    MahowaldResult,
    TowerWindow,
    algebraic_mahowald,
    build_tower,
    parse_class_name,
    pr_classes,
    verify_table,
)
from .lambda_complex import LambdaComplex
from .resolution import (
    ExtClass,
    ExtMap,
    FreeResolution,
    induced_ext_map,
    minimal_resolution,
    yoneda_product,
)

__version__ = "0.1.0"

__all__ = [
    "Chart",
    "ChartWindow",
    "ExtClass",
    "ExtMap",
    "Field",
    "FreeResolution",
    "GradedModule",
    "LambdaComplex",
    "MahowaldQuery",
    "MahowaldResult",
    "ModuleMap",
    "TowerWindow",
    "algebraic_mahowald",
    "build_tower",
    "induced_ext_map",
    "is_shift_isomorphic",
    "minimal_resolution",
    "parse_class_name",
    "pr_classes",
    "render_svg",
    "skeletal_maps",
    "sphere_module",
    "stunted_module",
    "to_table",
    "verify_table",
    "yoneda_product",
]
