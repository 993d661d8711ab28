"""Adversarial code injection and robustness auditing for automated graders."""

__version__ = "0.1.0"
