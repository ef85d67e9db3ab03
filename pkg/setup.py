#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# Periodic event-triggered impulsive consensus for heterogeneous stochastic agents
#
# Copyright (C) 2025 The petic developers
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

import os
from setuptools import setup, find_packages

# Read version from .version file in the petic package
with open(os.path.join(os.path.dirname(__file__), 'petic', '.version'), 'r') as f:
    version = f.read().strip()

# Read long description from README.md
with open('README.md', 'r', encoding='utf-8') as f:
    long_description = f.read()

setup(
    name="petic",
    version=version,
    description="Periodic event-triggered impulsive consensus of heterogeneous "
                "stochastic multi-agent systems",
    long_description=long_description,
    long_description_content_type="text/markdown",
    author="The petic developers",
    packages=find_packages(include=["petic", "petic.*"]),
    include_package_data=True,
    package_data={"petic": [".version", "scenarios/*.yaml"]},
    install_requires=[
        # Numerics
        "numpy>=1.24",
        "scipy>=1.10",
        # Scenario files
        "pydantic>=2.0.0",
        "PyYAML>=6.0.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-asyncio>=0.21.0",
            "black>=22.0.0",
            "isort>=5.10.0",
            "mypy>=0.950",
            "ruff>=0.0.100",
        ],
    },
    entry_points={
        "console_scripts": ["petic=petic.cli:main"],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords="multi-agent systems, consensus, impulsive control, event-triggered control, "
             "stochastic differential equations, euler-maruyama",
    python_requires=">=3.10"
)
