"""Exact p-adic arithmetic for the rank-three comparison identity over a
ramified quadratic extension: intersection-number closed forms and their
quasi-canonical-sum oracle on one side, orbital-integral germ derivatives on
the other, and the verification that they cancel."""

__version__ = "0.1.0"
