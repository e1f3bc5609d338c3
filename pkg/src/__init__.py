"""
lagexp library: semigroup exponents, expansion engine, trajectory oracle and 2D spectral solver
"""
