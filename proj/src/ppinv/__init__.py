"""Permutation families over GF(q^2) with closed-form compositional inverses.

The heavy lifting lives in the compiled `_core` extension; this package adds
dict-returning conveniences on top of its JSON-string outputs.
"""

import json as _json

from ._core import (
    Field,
    binomial_inverse_table,
    binomial_is_perm,
    build_p,
    build_tau,
    default_axes,
    families,
    instance_json,
    inverse_via_tau,
    is_permutation_table,
    quartic_inverse_table,
    quartic_is_perm,
    sweep_csv,
    sweep_draw,
    sweep_json,
    verify_json,
)

__version__ = "0.1.0"

__all__ = [
    "Field",
    "binomial_inverse_table",
    "binomial_is_perm",
    "build_p",
    "build_tau",
    "default_axes",
    "families",
    "instance",
    "inverse_via_tau",
    "is_permutation_table",
    "quartic_inverse_table",
    "quartic_is_perm",
    "sweep",
    "sweep_csv",
    "sweep_draw",
    "verify",
]


def verify(family, field, m, params):
    """Verify one parameter tuple; returns the report as a dict."""
    return _json.loads(verify_json(family, field, m, params))


def instance(family, field, m, params):
    """Instantiate one parameter tuple; returns the instance as a dict."""
    return _json.loads(instance_json(family, field, m, params))


def sweep(family, fields, strategy="automatic", samples=200, seed=0, axes=None):
    """Run a verification sweep; returns the reports as a list of dicts."""
    return _json.loads(sweep_json(family, fields, strategy, samples, seed, axes))
