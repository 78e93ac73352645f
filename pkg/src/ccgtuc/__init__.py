"""Unit commitment models for combined-cycle plants with configuration and turbine logic."""

__version__ = "0.1.0"
