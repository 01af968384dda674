# src/__init__.py
# This file marks the 'src' directory as a Python package.