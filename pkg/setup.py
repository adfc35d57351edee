from setuptools import setup, find_namespace_packages

setup(
    name="pebblekit",
    version="0.1.0",
    package_dir={"": "src"},
    packages=find_namespace_packages(
        where="src",
        include=["pebblekit*"]
    ),
    package_data={"pebblekit.configs": ["*.yaml"]},
    install_requires=[
        "pandas>=2.0.0",
        "pyyaml>=6.0.2",
        "numpy>=1.24.0",
        "python-dotenv>=1.1.0",
        "lark>=1.2.2",
        "networkx>=3.1",
    ],
    extras_require={
        "dev": [
            "pytest>=8.3.5",
            "hypothesis>=6.100.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "pebblekit=pebblekit.scripts.pebble_cli:main",
        ],
    },
    python_requires=">=3.8",
)
