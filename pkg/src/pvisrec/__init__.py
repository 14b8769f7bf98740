"""Personalized visualization recommendation engine.

Learns per-user recommendation models from a corpus of users, tabular
datasets, and user-generated visualizations: attribute meta-features,
coupled interaction graphs, collective factorization, optional neural
refinement, and a leave-one-out ranking evaluation harness.
"""

__version__ = "0.1.0"
