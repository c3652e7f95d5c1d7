"""Calibration of spectral property models with SMOTE-spiked calibration sets."""
