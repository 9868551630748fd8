"""Laboratory for quantum message sealing protocols."""
