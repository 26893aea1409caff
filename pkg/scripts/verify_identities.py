#!/usr/bin/env python3
"""Verify the squared mean-curvature identity in both product metrics and
print the bracket cubics the divergence expansion collapses to."""

from folicurve.identity import (
    LORENTZIAN,
    RIEMANNIAN,
    bracket_cubic,
    neg_nH_S3,
    verify_squared_identity,
)

for sig in (RIEMANNIAN, LORENTZIAN):
    report = verify_squared_identity(sig)
    cubic = bracket_cubic(sig)
    print(f"== {sig.label} ==")
    print(f"pass={report.passed} sign={report.sign} elapsed={report.elapsed_ms:.1f} ms")
    print(f"c3 = {cubic.c3}")
    print(f"c2 = {cubic.c2}")
    print(f"c1 = {cubic.c1}")
    print(f"-nH*S^3 = {neg_nH_S3(sig)}")
    print()
