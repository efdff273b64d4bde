"""
Setup configuration for LTLS Predict
"""

from setuptools import setup, find_packages

setup(
    packages=find_packages(exclude=["tests", "tests.*", "scripts"]),
    py_modules=["cli", "main"],
)
