from setuptools import find_packages, setup

setup(
    name="gridskg",
    version="0.1.0",
    description="Grid-based spatial knowledge graphs of street networks",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    python_requires=">=3.9",
    install_requires=[
        "pydantic>=2.5",
        "python-dotenv",
        "networkx>=3.0",
        "shapely>=2.0",
        "geojson>=3.0",
        "rdflib>=7.0",
        "psutil",
    ],
    extras_require={
        "dev": [
            "pytest",
            "pytest-cov",
            "pytest-mock",
            "hypothesis",
            "black",
            "isort",
            "mypy",
        ],
    },
    entry_points={
        "console_scripts": [
            "gridskg = gridskg.cli:main",
        ],
    },
)
