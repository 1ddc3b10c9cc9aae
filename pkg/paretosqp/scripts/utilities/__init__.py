"""Solver, problem and metric modules."""
