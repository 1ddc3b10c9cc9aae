"""Multi-objective SQP with a low-order smooth penalty merit function."""
