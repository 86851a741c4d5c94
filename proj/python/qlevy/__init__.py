"""Spectral representation of discrete laws separated from zero.

Laws, triplets and reports are plain dicts in the JSON formats of the
``qlevy`` command-line tool.
"""

import json

from . import _qlevy
from ._qlevy import QlevyError

__all__ = [
    "QlevyError",
    "validate_law",
    "cf_eval",
    "dominant_mass_bound",
    "certify_separation",
    "triplet",
    "reconstruct",
    "conv_power",
    "is_infinitely_divisible",
    "gamma_tau",
    "spectral_function",
    "tv_distance",
    "curves",
    "check_convergence",
    "check_relative_compactness",
    "check_stochastic_compactness",
]


def _s(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def validate_law(law):
    return json.loads(_qlevy.validate_law(_s(law)))


def cf_eval(law, t):
    return _qlevy.cf_eval(_s(law), float(t))


def dominant_mass_bound(law):
    return _qlevy.dominant_mass_bound(_s(law))


def certify_separation(law, zero_tol=1e-10, max_depth=40, target_gap=0.9):
    return json.loads(_qlevy.certify_separation(_s(law), zero_tol, max_depth, target_gap))


def triplet(law, tol=1e-10, n_init=0):
    return json.loads(_qlevy.triplet(_s(law), tol, n_init))


def reconstruct(triplet):
    return json.loads(_qlevy.reconstruct(_s(triplet)))


def conv_power(triplet, s):
    return json.loads(_qlevy.conv_power(_s(triplet), float(s)))


def is_infinitely_divisible(triplet, tol=1e-9):
    return _qlevy.is_infinitely_divisible(_s(triplet), tol)


def gamma_tau(triplet, tau):
    return _qlevy.gamma_tau(_s(triplet), float(tau))


def spectral_function(triplet, u):
    return _qlevy.spectral_function(_s(triplet), [float(x) for x in u])


def tv_distance(a, b):
    return _qlevy.tv_distance(_s(a), _s(b))


def curves(law, t0, t1, samples=512):
    """CSV text with columns t, re, im, abs, arg."""
    return _qlevy.curves(_s(law), float(t0), float(t1), samples)


def check_convergence(members, limit, threads=1):
    return json.loads(_qlevy.check_convergence([_s(m) for m in members], _s(limit), threads))


def check_relative_compactness(members, threads=1):
    return json.loads(_qlevy.check_relative_compactness([_s(m) for m in members], threads))


def check_stochastic_compactness(members, threads=1):
    return json.loads(_qlevy.check_stochastic_compactness([_s(m) for m in members], threads))
