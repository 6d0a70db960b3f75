"""Python interface to the eigen-selected spectral clustering core."""

try:
    from ._essc import (
        default_thresholds,
        essc_cluster,
        ks_select,
        misclustering_rate,
        sample_model,
        top2_singular,
        version,
    )
except ImportError:  # running against an in-tree build of the extension
    from _essc import (
        default_thresholds,
        essc_cluster,
        ks_select,
        misclustering_rate,
        sample_model,
        top2_singular,
        version,
    )

__all__ = [
    "default_thresholds",
    "essc_cluster",
    "ks_select",
    "misclustering_rate",
    "sample_model",
    "top2_singular",
    "version",
]
