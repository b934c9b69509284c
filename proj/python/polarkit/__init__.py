"""Relative hemisystems and m-ovoids of finite polar spaces in even characteristic."""

import json

from . import _polarkit
from ._polarkit import (
    DomainError,
    Field,
    PolarkitError,
    ResourceError,
    UsageError,
    VerificationError,
    census,
    set_threads,
    threads,
)

__version__ = _polarkit.__version__


def construct(q, n, samples=100000, seed=1):
    """Orbit construction on Q-(4n+1, q); returns the certificate as a dict."""
    return json.loads(_polarkit.construct(q, n, samples, seed))


def search(space, budget=0, prove_nonexistence=False):
    return json.loads(_polarkit.search(space, budget, prove_nonexistence))


def ovoid(q, n, variant):
    return json.loads(_polarkit.ovoid(q, n, list(variant)))


def srg(q=2, n=2):
    return json.loads(_polarkit.srg(q, n))


def demo_hyperbolic(q):
    return json.loads(_polarkit.demo_hyperbolic(q))


def verify(certificate):
    """Recomputes a certificate (dict or JSON text) and reports the outcome."""
    text = certificate if isinstance(certificate, str) else json.dumps(certificate)
    out = _polarkit.verify(text)
    out["counters"] = json.loads(out["counters"])
    return out


def run(*args):
    """Runs the command-line tool in process; returns (exit code, stdout, stderr)."""
    return _polarkit.run([str(a) for a in args])


__all__ = [
    "DomainError", "Field", "PolarkitError", "ResourceError", "UsageError", "VerificationError",
    "census", "construct", "demo_hyperbolic", "ovoid", "run", "search", "set_threads", "srg",
    "threads", "verify",
]
