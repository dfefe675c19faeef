"""Worst-case ratios of both Hardy inequalities over random smooth fields."""

from __future__ import annotations

from decaylab.verification import hardy_corpus

psi_ratio, power_ratio = hardy_corpus(n_fields=100)
print(f"Psi-weighted form: max lhs/rhs = {psi_ratio:.4f}")
print(f"power-weight form: max lhs/rhs = {power_ratio:.4f}")
