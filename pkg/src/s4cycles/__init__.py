"""Certification toolkit for limit cycles bifurcating from the S4 quadratic
isochronous center under discontinuous quadratic perturbation.

Subpackages:

- qfield:    exact arithmetic in Q(sqrt2)
- qpoly:     polynomial algebra, Sturm certificates, resultants over Q(sqrt2)
- ellfun:    high-precision complete elliptic integrals I(r), J(r), v(s)
- symdiff:   differential algebra recomputing the Wronskian chain W1..W6
- averaging: averaged function f(r), coefficient maps, zero design
- filippov:  direct simulation of the switched planar system
- verify:    the assembled ECT certificate and report
- cli:       command-line front end
"""

__version__ = "0.1.0"
