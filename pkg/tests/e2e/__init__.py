"""
E2E Tests Package
=================

Full sampling runs checked against analytic posteriors and known parameters.
"""
