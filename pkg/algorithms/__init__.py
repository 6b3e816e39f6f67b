"""
Neighborhood kernels: farthest point sampling, exact kNN and grouping.
"""

from algorithms.sampling import NeighborhoodIndex, fps, group, knn

__all__ = ["NeighborhoodIndex", "fps", "group", "knn"]
