from setuptools import setup
from os import path

# Single source of truth for the version
exec(open(path.join("mixlab", "version.py")).read())

try:
    this_directory = path.abspath(path.dirname(__file__))
    with open(path.join(this_directory, "README.md"), encoding="utf-8") as f:
        long_description = f.read()
except:
    long_description = " "

setup(
    name="mixlab",
    version=MIXLAB_VERSIONING,
    description="Cellular-flow mixing laboratory: block mixers, mixing scales and Sobolev budgets",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="MIT",
    zip_safe=False,
    packages=["mixlab"],
    python_requires=">=3.7",
    install_requires=[
        "numpy",
        "numba",
        "scipy",
        ],
    extras_require={
        "plot": ["matplotlib"],
        "test": ["pytest"],
        },
    entry_points={
        "console_scripts": ["mixlab=mixlab.cli:main"],
        },
)
