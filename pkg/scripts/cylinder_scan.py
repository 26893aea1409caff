#!/usr/bin/env python3
"""Scan two profiles: a vertical cylinder (exact CMC, constant hyperbolic
center) and a drifting-center family (provably non-CMC)."""

import json

from folicurve.exprlang import ProfileFunctions
from folicurve.geometry import constancy_scan
from folicurve.identity import LORENTZIAN, RIEMANNIAN

cases = [
    ("cylinder R=1", "cosh(1)", "sinh(1)", RIEMANNIAN),
    ("drifting center", "2 + 0.3*t", "1", RIEMANNIAN),
    ("cylinder, Lorentzian", "cosh(1)", "sinh(1)", LORENTZIAN),
]

for name, k_text, r_text, sig in cases:
    profile = ProfileFunctions.from_strings(k_text, r_text)
    report = constancy_scan(profile, (0.0, 1.0), 3, sig, samples=25)
    print(f"== {name} ==")
    print(json.dumps(report.summary(), indent=2))
    print()
