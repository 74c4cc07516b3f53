"""A setuptools based setup module.
See:
https://packaging.python.org/en/latest/distributing.html
https://github.com/pypa/sampleproject
"""

# To use a consistent encoding
from codecs import open
from os import path

# Always prefer setuptools over distutils
from setuptools import find_packages, setup

here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

version = '0.1.0'

setup(
    name='psbeatty',

    version=version,

    description='Primes in Beatty and Piatetski-Shapiro sequences: '
                'certified arithmetic and numerical verification',
    long_description=long_description,
    long_description_content_type='text/markdown',

    license='MIT',

    classifiers=[
        'Development Status :: 3 - Alpha',

        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',

        'License :: OSI Approved :: MIT License',

        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],

    keywords='primes beatty piatetski-shapiro sieve exponential-sums',

    packages=find_packages(exclude=['tests', 'tests.*']),

    python_requires='>=3.8',

    install_requires=[
        'numpy>=1.20',
        'mpmath>=1.2',
        'sympy>=1.9',
    ],

    # $ pip install -e .[dev,test]
    extras_require={
        'dev': ['check-manifest'],
        'test': ['coverage'],
    },

    entry_points={
        'console_scripts': [
            'psbeatty=psbeatty.cli:main',
        ],
    },
    test_suite='tests'
)
