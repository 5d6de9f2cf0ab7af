"""Maxima-hunting variable selection for binary functional classification.

The distance-covariance curve ``t -> V^2(X_t, Y)`` between each marginal of a
discretized process and the class label is estimated, and its local maxima are
taken as the selected variables. Competing selectors (t-ranking, mRMR, PLS),
k-NN/LDA classifiers, simulation models with analytic oracles and a
Monte-Carlo experiment harness are included.
"""
from ._backend import active_backend, available_backends, use_backend
from .core import (ClassSplit, DatasetError, DatasetFormatError, FunctionalDataset, Grid,
                   SelectionResult, load_dataset, save_dataset, split_by_class)
from .dcov import (DependenceCurve, MarginalSample, dcor_sq, dcov_sq_dc, dcov_sq_u, dcov_sq_v,
                   dependence_curve, dvar_sq)
from .maxima import MaximaConfig, local_maxima, mh_select

__version__ = "0.1.0"
