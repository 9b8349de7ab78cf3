"""Exact analysis of Nash equilibria in simple stochastic multiplayer games."""
