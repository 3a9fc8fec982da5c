#!/usr/bin/env python
import os
from setuptools import setup, find_packages

base = os.path.dirname(os.path.abspath(__file__))

README_PATH = os.path.join(base, "README.rst")

install_requires = [
    'click>=8.2',
    'devtools>=0.5',
    'Pygments>=2.2.0',
    'numpy>=1.20',
    'scipy>=1.7',
    'pandas>=1.3',
    'trimesh>=3.9',
]

tests_require = [
    'pytest',
    'pytest-mock',
    'hypothesis',
]

setup(
    name='harmonic-tori',
    version='0.1.0',
    description='spectral data of equivariant harmonic tori in the 3-sphere',
    long_description=open(README_PATH).read(),
    packages=find_packages(exclude=['tests']),
    install_requires=install_requires,
    tests_require=tests_require,
    python_requires='>=3.8',
    entry_points={
        "console_scripts": [
            "htori=harmonic_tori.cli:cli",
            "harmonic-tori=harmonic_tori.cli:cli",
        ]
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Operating System :: MacOS',
        'Operating System :: POSIX :: Linux',
        'Topic :: Scientific/Engineering :: Mathematics',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
    ],
)
