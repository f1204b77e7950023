"""Counting objects in images by diffused index."""

try:
    from ._codi import (
        CodiError,
        count,
        count_peaks,
        dbscan,
        diffuse,
        gen_fixture,
        lambda_sweep,
        regularized_kmeans,
    )
except ImportError:  # extension built outside the package (in-tree builds)
    from _codi import (
        CodiError,
        count,
        count_peaks,
        dbscan,
        diffuse,
        gen_fixture,
        lambda_sweep,
        regularized_kmeans,
    )

__all__ = [
    "CodiError",
    "count",
    "count_peaks",
    "dbscan",
    "diffuse",
    "gen_fixture",
    "lambda_sweep",
    "regularized_kmeans",
]
