"""
gtcodec: block-based image codec with learned graph Fourier transforms.

file: gtcodec/gtcodec/__init__.py
"""

__version__ = "0.1.0"
