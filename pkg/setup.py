from setuptools import setup, find_packages

setup(
    name="fractricomi",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "examples*"]),
    install_requires=[
        "numpy",
        "scipy",
        "mpmath",
        "pandas",
        "pyyaml",
    ],
    extras_require={
        "dev": [
            "pytest",
            "pytest-cov",
        ],
    },
    entry_points={
        "console_scripts": [
            "frac-tricomi=fractricomi.cli:main",
        ],
    },
)
