from setuptools import setup

setup(
    name='geodecomp',
    version='0.1.0',
    description='Geometric decompositions and exact DoF checks for Lagrange, Hermite and C^m simplicial elements',
    packages=['src'],
    py_modules=['decompose', 'verify', 'dims'],
    install_requires=['numpy', 'scipy', 'pandas'],
    extras_require={'test': ['pytest']},
    python_requires='>=3.8',
)
