"""Exact finiteness checks: root-lattice inequalities, degree supports, q-shift connections."""

from __future__ import annotations

from .root_system import RootSystem, RootSystemType, build, build_product, k_exponent, m_exponent

__all__ = ["RootSystem", "RootSystemType", "build", "build_product", "k_exponent", "m_exponent"]
