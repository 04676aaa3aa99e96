"""
spencer-super: exact Cartan prolongs, Spencer cohomology and g0-module
analysis for Z-graded Lie superalgebras.
"""
