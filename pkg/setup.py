"""
Copyright 2026 pyWmlr contributors

WMLR library - Setup Tools Definition
"""
import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="pyWmlr",
    version="1.1.0",
    author="pyWmlr contributors",
    description="GPS altitude outlier detection and correction with weighted multinomial logistic regression",
    license="MIT",
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords="GPS, Barometer, Altitude, Outlier detection, Logistic regression",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Intended Audience :: Developers",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Software Development :: Libraries",
        "Topic :: Scientific/Engineering",
        "Topic :: Scientific/Engineering :: GIS",
        "Operating System :: OS Independent",
    ],
    packages=["pyWmlr"],
    package_dir={"pyWmlr": "pyWmlr"},
    install_requires=["numpy>=1.19.0", "pandas>=1.5.0", "scipy>=1.5.0"],
    entry_points={"console_scripts": ["pywmlr=pyWmlr.cli:main"]},
    python_requires=">=3.8",
)
