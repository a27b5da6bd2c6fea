"""Leaf-to-leaf cactus augmentation: matching-based solver, exact oracles and analysis."""
