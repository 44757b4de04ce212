"""Two-stage Wasserstein GAN pipeline for univariate time series synthesis."""

__version__ = "0.1.0"
