"""Certified uniqueness checks for the anti-ferromagnetic Potts model on regular trees."""

from __future__ import annotations

__version__ = "0.1.0"
