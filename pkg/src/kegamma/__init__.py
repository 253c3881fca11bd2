"""Consistency checking and higher-order conjunctive query answering for
description-logic knowledge bases via a set-theoretic KE^γ tableau."""

__version__ = "0.1.0"
