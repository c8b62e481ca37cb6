"""Covariance eigenvalue cleaning with Monte Carlo verification suites."""

import json

from ._rieclean import (
    AmbiguousIntervalError,
    PoleError,
    SingularError,
    center_rows,
    clean,
    clean_eigenvalues,
    cleaned_eigenvalue,
    eig_covariance,
    empirical_covariance,
    h_functional,
    make_sigma,
    oracle_eigenvalues,
    rn_ratio_oracle,
    sample_gaussian,
    stieltjes_g,
    stieltjes_l,
    suite_names,
    theorem1_rhs,
)
from . import _rieclean

__version__ = "0.1.0"


def verify_theorem1(model, n, t_samples, z_points, seed):
    """One simulated trial; returns the trial report as a dict."""
    return json.loads(_rieclean._verify_theorem1(model, n, t_samples, list(z_points), seed))


def run_suite(name, seed=1, trials=None, jobs=1):
    """Runs a verification suite and returns one summary dict per suite."""
    return [json.loads(s) for s in _rieclean._run_suite(name, seed, trials, jobs)]


__all__ = [
    "AmbiguousIntervalError",
    "PoleError",
    "SingularError",
    "center_rows",
    "clean",
    "clean_eigenvalues",
    "cleaned_eigenvalue",
    "eig_covariance",
    "empirical_covariance",
    "h_functional",
    "make_sigma",
    "oracle_eigenvalues",
    "rn_ratio_oracle",
    "run_suite",
    "sample_gaussian",
    "stieltjes_g",
    "stieltjes_l",
    "suite_names",
    "theorem1_rhs",
    "verify_theorem1",
]
