#!/usr/bin/env python

from setuptools import setup, find_packages
from os.path import exists


setup(
    name="hadamard-lab",
    version="0.1.0",
    description=(
        "numerical laboratory for Hadamard factorization, Newton-Cramer "
        "distributions and Poisson-Newton checks of meromorphic functions"
    ),
    license="BSD-Clause3",
    keywords="python hadamard dirichlet series poisson newton digamma quadrature",
    packages=find_packages(),
    long_description=(open("README.rst").read() if exists("README.rst") else ""),
    python_requires=">=3.8",
    install_requires=[
        "attrs >= 19.2.0",
        "dask",
        "numpy",
        "pandas",
        "scipy",
        "xarray >= 0.16.0",
        "zarr >= 2.3.0",
    ],
    extras_require={"progress": ["tqdm"]},
    tests_require=["pytest >= 3.3.0", "mpmath"],
    entry_points={"console_scripts": ["hadalab = hadalab.cli:main"]},
    zip_safe=False,
)
