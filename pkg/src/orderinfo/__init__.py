"""Informativeness of order statistics and L-estimator image denoising."""
