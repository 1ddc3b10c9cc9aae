"""Command-line entry points for the MOSQP benchmarks."""
