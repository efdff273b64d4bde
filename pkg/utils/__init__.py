"""
Shared utilities: logging, configuration, errors and helpers
"""
